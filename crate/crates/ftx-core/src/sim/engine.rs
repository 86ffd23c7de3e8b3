//! Beat-level scheduler for a SELECT program on a floor plan.
//!
//! Instructions on the same non-system qubit run in program order. Leaf
//! measurements on system qubits commute, so system patches only need to be
//! idle. Routed instructions claim a connected set of free corridor cells for
//! their duration; magic consumers also claim a factory port and a token.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::floorplan::{Cell, FloorPlan};
use super::program::{Op, Program};
use crate::error::{Error, Result};
use crate::planner::HardwareSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StallReason {
    Routing,
    Magic,
    Reaction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub beat: u64,
    pub id: usize,
    pub end: u64,
    pub cells: usize,
    pub factory: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub total_beats: u64,
    pub stall_beats_routing: u64,
    pub stall_beats_magic: u64,
    pub stall_beats_reaction: u64,
    pub magic_consumed: u64,
    /// Beats the factories need to distil the consumed magic states.
    pub supply_bound: u64,
    /// Longest dependency chain ignoring routing and supply.
    pub critical_path: u64,
    pub instructions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEvent>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    pub reaction_beats: u64,
    pub trace: bool,
}

impl SimOptions {
    pub fn for_hardware(hw: &HardwareSpec, d: u32) -> Self {
        SimOptions { reaction_beats: hw.reaction_beats(d), trace: false }
    }
}

pub fn supply_bound(magic: u64, hw: &HardwareSpec) -> u64 {
    hw.distill_beats * magic.div_ceil(hw.n_factories as u64)
}

pub fn critical_path(program: &Program, reaction: u64) -> u64 {
    let mut ready = vec![0u64; program.n_qubits];
    let mut done = vec![0u64; program.len()];
    let mut total = 0;
    for (i, op) in program.ops.iter().enumerate() {
        let qs: Vec<usize> = op.qubits().into_iter().filter(|&q| q >= program.n_system).collect();
        let mut start = qs.iter().map(|&q| ready[q]).max().unwrap_or(0);
        if let Some(d) = op.dep() {
            start = start.max(done[d] + reaction);
        }
        done[i] = start + op.beats();
        for q in qs {
            ready[q] = done[i];
        }
        total = total.max(done[i]);
    }
    total
}

struct Router<'a> {
    plan: &'a FloorPlan,
    reserved: Vec<u64>,
    mark: Vec<u32>,
    prev: Vec<usize>,
    stamp: u32,
}

const NONE: usize = usize::MAX;

impl<'a> Router<'a> {
    fn new(plan: &'a FloorPlan) -> Self {
        let n = plan.grid.len();
        Router { plan, reserved: vec![0; n], mark: vec![0; n], prev: vec![NONE; n], stamp: 0 }
    }

    fn free(&self, cell: Cell, t: u64) -> bool {
        self.plan.role(cell).routable() && self.reserved[self.plan.index(cell)] <= t
    }

    /// Connected set of free corridor cells touching every endpoint, grown as a
    /// breadth-first tree from the first endpoint.
    fn route(&mut self, endpoints: &[Cell], t: u64) -> Option<Vec<usize>> {
        let plan = self.plan;
        let mut tree: Vec<usize> = Vec::new();
        let first = endpoints[0];
        let start = plan.neighbors(first).find(|&c| self.free(c, t))?;
        tree.push(plan.index(start));
        for &target in &endpoints[1..] {
            if tree.iter().any(|&i| plan.neighbors((i / plan.cols, i % plan.cols)).any(|n| n == target)) {
                continue;
            }
            self.stamp += 1;
            let mut queue: VecDeque<usize> = VecDeque::new();
            for &i in &tree {
                self.mark[i] = self.stamp;
                self.prev[i] = NONE;
                queue.push_back(i);
            }
            let mut hit = NONE;
            'bfs: while let Some(i) = queue.pop_front() {
                let cell = (i / plan.cols, i % plan.cols);
                for n in plan.neighbors(cell) {
                    if n == target {
                        hit = i;
                        break 'bfs;
                    }
                    let j = plan.index(n);
                    if self.mark[j] != self.stamp && self.free(n, t) {
                        self.mark[j] = self.stamp;
                        self.prev[j] = i;
                        queue.push_back(j);
                    }
                }
            }
            if hit == NONE {
                return None;
            }
            let mut i = hit;
            while self.prev[i] != NONE {
                tree.push(i);
                i = self.prev[i];
            }
        }
        tree.sort_unstable();
        tree.dedup();
        Some(tree)
    }
}

struct Factories {
    used: Vec<u64>,
    port_busy: Vec<u64>,
    distill: u64,
}

impl Factories {
    fn tokens(&self, f: usize, t: u64) -> u64 {
        (t / self.distill).saturating_sub(self.used[f])
    }

    fn next_token(&self, t: u64) -> u64 {
        (t / self.distill + 1) * self.distill
    }
}

enum Attempt {
    Started { end: u64, cells: usize, factory: Option<usize> },
    Blocked(StallReason, Option<u64>),
}

pub fn simulate(plan: &FloorPlan, program: &Program, hw: &HardwareSpec, opts: SimOptions) -> Result<SimResult> {
    hw.validate()?;
    if program.n_qubits > plan.placement.len() {
        return Err(Error::Invariant(format!(
            "program uses {} qubits, floor plan places {}",
            program.n_qubits,
            plan.placement.len()
        )));
    }
    let n = program.len();
    let n_sys = program.n_system;
    let reaction = opts.reaction_beats;

    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); program.n_qubits];
    let mut need = vec![0usize; n];
    let mut qubits_of: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (i, op) in program.ops.iter().enumerate() {
        let qs = op.qubits();
        for &q in qs.iter().filter(|&&q| q >= n_sys) {
            queues[q].push_back(i);
            need[i] += 1;
        }
        qubits_of.push(qs);
    }
    let mut have = vec![0usize; n];
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| need[i] == 0).collect();
    for q in queues.iter() {
        if let Some(&h) = q.front() {
            have[h] += 1;
            if have[h] == need[h] {
                ready.insert(h);
            }
        }
    }

    let mut busy = vec![0u64; program.n_qubits];
    let mut finish: Vec<Option<u64>> = vec![None; n];
    let mut router = Router::new(plan);
    let mut fac =
        Factories { used: vec![0; plan.ports.len()], port_busy: vec![0; plan.ports.len()], distill: hw.distill_beats };
    let mut result = SimResult { instructions: n, ..Default::default() };
    let mut trace = opts.trace.then(Vec::new);
    let mut running: BTreeSet<(u64, usize)> = BTreeSet::new();
    let mut completed = 0usize;
    let mut t = 0u64;

    while completed < n {
        while let Some(&(end, _)) = running.first() {
            if end > t {
                break;
            }
            running.pop_first();
            completed += 1;
        }

        let mut blocked: Option<(usize, StallReason)>;
        let mut wake: Option<u64> = None;
        loop {
            let mut progressed = false;
            blocked = None;
            let ids: Vec<usize> = ready.iter().copied().collect();
            for i in ids {
                let op = &program.ops[i];
                let attempt = try_start(op, &qubits_of[i], t, plan, &mut router, &mut fac, &busy, &finish, reaction);
                match attempt {
                    Attempt::Started { end, cells, factory } => {
                        ready.remove(&i);
                        for &q in &qubits_of[i] {
                            busy[q] = end;
                        }
                        finish[i] = Some(end);
                        if op.consumes_magic() {
                            result.magic_consumed += 1;
                        }
                        if let Some(tr) = trace.as_mut() {
                            tr.push(TraceEvent { beat: t, id: i, end, cells, factory });
                        }
                        if end <= t {
                            completed += 1;
                            progressed = true;
                        } else {
                            running.insert((end, i));
                        }
                        for &q in qubits_of[i].iter().filter(|&&q| q >= n_sys) {
                            queues[q].pop_front();
                            if let Some(&h) = queues[q].front() {
                                have[h] += 1;
                                if have[h] == need[h] {
                                    ready.insert(h);
                                    progressed = true;
                                }
                            }
                        }
                    }
                    Attempt::Blocked(reason, next) => {
                        if blocked.is_none() {
                            blocked = Some((i, reason));
                        }
                        if let Some(w) = next {
                            wake = Some(wake.map_or(w, |x: u64| x.min(w)));
                        }
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        if completed == n {
            break;
        }

        let next_end = running.first().map(|&(e, _)| e);
        let next = match (next_end, wake) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let Some(next) = next.filter(|&x| x > t) else {
            let (id, reason) = blocked
                .map(|(i, r)| (i, format!("{r:?}")))
                .unwrap_or((ready.first().copied().unwrap_or(0), "no instruction can start".to_string()));
            return Err(Error::Unroutable { id, reason });
        };
        if running.is_empty() {
            if let Some((_, reason)) = blocked {
                let dt = next - t;
                match reason {
                    StallReason::Routing => result.stall_beats_routing += dt,
                    StallReason::Magic => result.stall_beats_magic += dt,
                    StallReason::Reaction => result.stall_beats_reaction += dt,
                }
            }
        }
        t = next;
    }

    result.total_beats = finish.iter().flatten().copied().max().unwrap_or(0);
    result.supply_bound = supply_bound(result.magic_consumed, hw);
    result.critical_path = critical_path(program, reaction);
    result.trace = trace;
    if result.total_beats < result.critical_path {
        return Err(Error::Invariant("schedule shorter than its dependency chain".into()));
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn try_start(
    op: &Op,
    qubits: &[usize],
    t: u64,
    plan: &FloorPlan,
    router: &mut Router,
    fac: &mut Factories,
    busy: &[u64],
    finish: &[Option<u64>],
    reaction: u64,
) -> Attempt {
    // Only system patches can still be busy; their holder's completion wakes us.
    if qubits.iter().any(|&q| busy[q] > t) {
        return Attempt::Blocked(StallReason::Routing, None);
    }
    if let Some(d) = op.dep() {
        match finish[d] {
            Some(f) if f + reaction <= t => {}
            Some(f) => return Attempt::Blocked(StallReason::Reaction, Some(f + reaction)),
            None => return Attempt::Blocked(StallReason::Reaction, None),
        }
    }
    let end = t + op.beats();
    if !op.routed() {
        return Attempt::Started { end, cells: 0, factory: None };
    }
    let mut endpoints: Vec<Cell> = qubits.iter().map(|&q| plan.cell_of(q)).collect();
    let mut factory = None;
    if op.consumes_magic() {
        let here = endpoints[0];
        let dist = |p: Cell| p.0.abs_diff(here.0) + p.1.abs_diff(here.1);
        let mut order: Vec<usize> = (0..plan.ports.len()).collect();
        order.sort_by_key(|&f| (dist(plan.ports[f]), f));
        factory = order.into_iter().find(|&f| fac.tokens(f, t) > 0 && fac.port_busy[f] <= t);
        match factory {
            Some(f) => endpoints.push(plan.ports[f]),
            None => {
                let port_free = fac.port_busy.iter().copied().filter(|&b| b > t).min();
                let next = fac.next_token(t);
                return Attempt::Blocked(StallReason::Magic, Some(port_free.map_or(next, |p| p.min(next))));
            }
        }
    }
    let Some(cells) = router.route(&endpoints, t) else {
        return Attempt::Blocked(StallReason::Routing, None);
    };
    for &c in &cells {
        router.reserved[c] = end;
    }
    if let Some(f) = factory {
        fac.used[f] += 1;
        fac.port_busy[f] = end;
    }
    Attempt::Started { end, cells: cells.len(), factory }
}

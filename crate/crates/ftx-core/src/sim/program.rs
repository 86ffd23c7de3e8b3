//! SELECT as a list of lattice-surgery instructions.
//!
//! Unary iteration over the term index with the AND-gadget ladder; every T
//! gate is a magic-state consumption followed by a classically conditioned S.

use serde::{Deserialize, Serialize};

use super::floorplan::{system_slot, Registers, ThreadRegisters};
use crate::error::{invalid, Result};
use crate::lattice::{Axis, TermTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    S,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    Prep {
        q: usize,
    },
    Single {
        q: usize,
        gate: Gate,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Multi-patch Pauli measurement; with `magic` the product also includes a
    /// magic state delivered through a factory port.
    Surgery {
        parts: Vec<(usize, Axis)>,
        magic: bool,
    },
    Measure {
        q: usize,
    },
    ConditionalS {
        q: usize,
        dep: usize,
    },
    ConditionalCz {
        a: usize,
        b: usize,
        dep: usize,
    },
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Prep { q } | Op::Single { q, .. } | Op::Measure { q } | Op::ConditionalS { q, .. } => vec![*q],
            Op::Cnot { control, target } => vec![*control, *target],
            Op::Surgery { parts, .. } => parts.iter().map(|p| p.0).collect(),
            Op::ConditionalCz { a, b, .. } => vec![*a, *b],
        }
    }

    pub fn dep(&self) -> Option<usize> {
        match self {
            Op::ConditionalS { dep, .. } | Op::ConditionalCz { dep, .. } => Some(*dep),
            _ => None,
        }
    }

    fn dep_mut(&mut self) -> Option<&mut usize> {
        match self {
            Op::ConditionalS { dep, .. } | Op::ConditionalCz { dep, .. } => Some(dep),
            _ => None,
        }
    }

    /// Duration in beats once started.
    pub fn beats(&self) -> u64 {
        match self {
            Op::Prep { .. } | Op::Measure { .. } => 0,
            Op::Single { gate: Gate::S, .. } | Op::ConditionalS { .. } => 2,
            Op::Single { gate: Gate::H, .. } => 3,
            Op::Cnot { .. } | Op::Surgery { .. } | Op::ConditionalCz { .. } => 2,
        }
    }

    pub fn routed(&self) -> bool {
        matches!(self, Op::Cnot { .. } | Op::Surgery { .. } | Op::ConditionalCz { .. })
    }

    pub fn consumes_magic(&self) -> bool {
        matches!(self, Op::Surgery { magic: true, .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub ops: Vec<Op>,
    pub n_qubits: usize,
    pub n_system: usize,
}

impl Program {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn magic_count(&self) -> u64 {
        self.ops.iter().filter(|o| o.consumes_magic()).count() as u64
    }
}

#[derive(Default)]
struct Builder {
    ops: Vec<Op>,
}

impl Builder {
    fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn t_gate(&mut self, q: usize) {
        let dep = self.push(Op::Surgery { parts: vec![(q, Axis::Z)], magic: true });
        self.push(Op::ConditionalS { q, dep });
    }

    fn cnot(&mut self, control: usize, target: usize) {
        self.push(Op::Cnot { control, target });
    }

    /// t <- c AND x, four T gates.
    fn and_compute(&mut self, c: usize, x: usize, t: usize) {
        self.push(Op::Prep { q: t });
        self.t_gate(t);
        self.cnot(c, t);
        self.cnot(x, t);
        self.cnot(t, c);
        self.cnot(t, x);
        self.t_gate(c);
        self.t_gate(x);
        self.t_gate(t);
        self.cnot(t, c);
        self.cnot(t, x);
        self.push(Op::Single { q: t, gate: Gate::H });
        self.push(Op::Single { q: t, gate: Gate::S });
    }

    /// Measurement-based uncomputation, no T gates.
    fn and_uncompute(&mut self, c: usize, x: usize, t: usize) {
        self.push(Op::Single { q: t, gate: Gate::H });
        let dep = self.push(Op::Measure { q: t });
        self.push(Op::ConditionalCz { a: c, b: x, dep });
    }
}

struct Iteration<'a> {
    table: &'a TermTable,
    order: &'a [usize],
    regs: &'a ThreadRegisters,
    log_l: usize,
    lo: usize,
    hi: usize,
}

impl Iteration<'_> {
    fn overlaps(&self, start: usize, size: usize) -> bool {
        start < self.hi && start + size > self.lo
    }

    fn leaf(&self, b: &mut Builder, j: usize, ctrl: usize) {
        for &(q, axis) in &self.table.terms[self.order[j]].factors {
            b.push(Op::Surgery { parts: vec![(ctrl, Axis::Z), (q, axis)], magic: false });
        }
    }

    fn node(&self, b: &mut Builder, level: usize, start: usize, ctrl: usize) {
        let size = 1usize << (self.log_l - level);
        if !self.overlaps(start, size) {
            return;
        }
        if size == 1 {
            self.leaf(b, start, ctrl);
            return;
        }
        let half = size / 2;
        let (left, right) = (start, start + half);
        let (in_l, in_r) = (self.overlaps(left, half), self.overlaps(right, half));
        let bit = self.regs.index[level];
        let anc = self.regs.ancilla[level];
        let l = self.table.count;
        if in_l && in_r {
            b.and_compute(ctrl, bit, anc);
            self.node(b, level + 1, left, anc);
            b.cnot(ctrl, anc);
            self.node(b, level + 1, right, anc);
            b.and_uncompute(ctrl, bit, anc);
        } else if in_l && right >= l {
            // Index values past the last term never occur.
            self.node(b, level + 1, left, ctrl);
        } else {
            let child = if in_l { left } else { right };
            b.and_compute(ctrl, bit, anc);
            self.node(b, level + 1, child, anc);
            b.and_uncompute(ctrl, bit, anc);
        }
    }
}

/// Terms ordered by the positions of their support so that consecutive
/// leaves touch nearby patches.
pub fn term_order(table: &TermTable) -> Vec<usize> {
    let key = |j: usize| {
        let mut k: Vec<(usize, usize)> = table.terms[j]
            .support()
            .map(|q| {
                let (r, c) = system_slot(table, q);
                (c, r)
            })
            .collect();
        k.sort_unstable();
        k
    };
    let keys: Vec<_> = (0..table.count).map(key).collect();
    let mut order: Vec<usize> = (0..table.count).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    order
}

fn copy_tree(regs: &Registers, reverse: bool) -> Vec<Op> {
    let b = regs.threads.len();
    let mut rounds = Vec::new();
    let mut have = 1;
    while have < b {
        let mut round = Vec::new();
        for src in 0..have {
            let dst = src + have;
            if dst >= b {
                break;
            }
            let (s, d) = (&regs.threads[src], &regs.threads[dst]);
            round.push(Op::Cnot { control: s.control, target: d.control });
            for (&qs, &qd) in s.index.iter().zip(&d.index) {
                round.push(Op::Cnot { control: qs, target: qd });
            }
        }
        rounds.push(round);
        have *= 2;
    }
    if reverse {
        rounds.reverse();
    }
    rounds.into_iter().flatten().collect()
}

/// One SELECT application split over `b` threads, each owning a contiguous
/// block of ⌈L/b⌉ terms. Thread streams are interleaved round-robin.
pub fn synthesize_select(table: &TermTable, b: usize) -> Result<Program> {
    if b == 0 {
        return Err(invalid("thread count must be at least one"));
    }
    let l = table.count;
    let regs = Registers::for_table(table, b);
    if l == 0 {
        return Ok(Program { ops: Vec::new(), n_qubits: regs.n_qubits(), n_system: table.n_system });
    }
    if b > l {
        return Err(invalid(format!("{b} threads for {l} terms")));
    }
    let order = term_order(table);
    let block = l.div_ceil(b);

    let streams: Vec<Vec<Op>> = regs
        .threads
        .iter()
        .enumerate()
        .map(|(t, th)| {
            let it = Iteration {
                table,
                order: &order,
                regs: th,
                log_l: regs.log_l,
                lo: (t * block).min(l),
                hi: ((t + 1) * block).min(l),
            };
            let mut builder = Builder::default();
            it.node(&mut builder, 0, 0, th.control);
            builder.ops
        })
        .collect();

    let mut ops = copy_tree(&regs, false);
    let mut remap: Vec<Vec<usize>> = streams.iter().map(|s| vec![usize::MAX; s.len()]).collect();
    let longest = streams.iter().map(Vec::len).max().unwrap_or(0);
    for i in 0..longest {
        for (t, s) in streams.iter().enumerate() {
            if let Some(op) = s.get(i) {
                let mut op = op.clone();
                if let Some(dep) = op.dep_mut() {
                    *dep = remap[t][*dep];
                }
                remap[t][i] = ops.len();
                ops.push(op);
            }
        }
    }
    ops.extend(copy_tree(&regs, true));
    Ok(Program { ops, n_qubits: regs.n_qubits(), n_system: table.n_system })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_terms, LatticeSpec, ModelParams, PauliTerm};

    fn chain_table(l: usize) -> TermTable {
        let terms = (0..l).map(|j| PauliTerm { weight: 1.0, factors: vec![(j % 4, Axis::Z)] }).collect();
        TermTable::new(terms, 4, 4, ModelParams::HeisenbergChain { j: 1.0, spin: 0.5 }).unwrap()
    }

    #[test]
    fn five_terms_cost_sixteen_t() {
        let p = synthesize_select(&chain_table(5), 1).unwrap();
        assert_eq!(p.magic_count(), 16);
    }

    #[test]
    fn unary_iteration_t_count() {
        for l in [2usize, 3, 7, 8, 13, 64, 100] {
            let p = synthesize_select(&chain_table(l), 1).unwrap();
            assert_eq!(p.magic_count(), 4 * (l as u64 - 1), "L = {l}");
        }
    }

    #[test]
    fn every_term_applied_once() {
        let t = enumerate_terms(&LatticeSpec::hubbard(4, 4, 4.0)).unwrap();
        let expect: usize = t.terms.iter().map(|x| x.factors.len()).sum();
        for b in [1, 2, 4, 16] {
            let p = synthesize_select(&t, b).unwrap();
            let leaves = p.ops.iter().filter(|o| matches!(o, Op::Surgery { magic: false, .. })).count();
            assert_eq!(leaves, expect, "b = {b}");
        }
    }

    #[test]
    fn deps_point_backwards() {
        let t = enumerate_terms(&LatticeSpec::heisenberg(4, 4, 0.5)).unwrap();
        let p = synthesize_select(&t, 4).unwrap();
        for (i, op) in p.ops.iter().enumerate() {
            if let Some(d) = op.dep() {
                assert!(d < i);
                assert!(matches!(p.ops[d], Op::Surgery { magic: true, .. } | Op::Measure { .. }));
            }
        }
    }

    #[test]
    fn empty_and_oversubscribed() {
        let empty = TermTable::new(vec![], 1, 1, ModelParams::HeisenbergChain { j: 1.0, spin: 0.5 }).unwrap();
        assert!(synthesize_select(&empty, 1).unwrap().is_empty());
        assert!(synthesize_select(&chain_table(3), 4).is_err());
    }
}

//! Surface-code distance, physical-qubit counts and runtime.

use serde::{Deserialize, Serialize};

use crate::algorithms::{estimate, AlgorithmOptions};
use crate::budget::AlgorithmKind;
use crate::error::{invalid, Error, Result};
use crate::exec;
use crate::lattice::TermTable;

/// Code beats charged per T gate by the rough solver.
pub const BEATS_PER_T: f64 = 15.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionModel {
    /// Feed-forward is available one beat after the measurement.
    #[default]
    OneBeat,
    /// ⌈reaction_time / t_beat⌉ beats.
    FromTime,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HardwareSpec {
    pub p_phys: f64,
    pub p_th: f64,
    pub t_cycle: f64,
    pub reaction_time: f64,
    pub n_factories: usize,
    pub factory_area: usize,
    pub distill_beats: u64,
    pub threads: usize,
    pub d_max: u32,
    pub reaction: ReactionModel,
}

impl Default for HardwareSpec {
    fn default() -> Self {
        HardwareSpec {
            p_phys: 1e-3,
            p_th: 1e-2,
            t_cycle: 1e-6,
            reaction_time: 10e-6,
            n_factories: 1,
            factory_area: 176,
            distill_beats: 15,
            threads: 1,
            d_max: 99,
            reaction: ReactionModel::OneBeat,
        }
    }
}

impl HardwareSpec {
    pub fn with_layout(n_factories: usize, threads: usize) -> Self {
        HardwareSpec { n_factories, threads, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_phys > 0.0) || !(self.p_th > 0.0) {
            return Err(invalid("error rates must be positive"));
        }
        if !(self.t_cycle > 0.0) || !(self.reaction_time > 0.0) {
            return Err(invalid("times must be positive"));
        }
        if self.n_factories == 0 || self.threads == 0 || self.distill_beats == 0 {
            return Err(invalid("factories, threads and distillation beats must be at least one"));
        }
        Ok(())
    }

    pub fn check_threshold(&self) -> Result<()> {
        if self.p_phys >= self.p_th {
            return Err(Error::Infeasible(format!(
                "physical error rate above threshold ({} >= {})",
                self.p_phys, self.p_th
            )));
        }
        Ok(())
    }

    /// Beats between a measurement and a dependent correction.
    pub fn reaction_beats(&self, d: u32) -> u64 {
        match self.reaction {
            ReactionModel::OneBeat => 1,
            ReactionModel::FromTime => (self.reaction_time / (self.t_cycle * d.max(1) as f64)).ceil().max(1.0) as u64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpCounting {
    /// N_op counted in code cycles (beats × d).
    #[default]
    CodeCycles,
    /// N_op counted in beats.
    Beats,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodePlan {
    pub d: u32,
    pub n_log: u64,
    pub n_op: f64,
    pub n_ph: u64,
    pub p_log: f64,
}

pub fn logical_error_rate(p_phys: f64, p_th: f64, d: u32) -> f64 {
    0.1 * (p_phys / p_th).powf((d as f64 + 1.0) / 2.0)
}

/// Smallest odd d with p_log(d) ≤ 1/N_op(d).
pub fn smallest_distance(hw: &HardwareSpec, n_op: impl Fn(u32) -> f64) -> Result<(u32, f64, f64)> {
    hw.check_threshold()?;
    let mut d = 1u32;
    while d <= hw.d_max.max(1) {
        let ops = n_op(d);
        let p = logical_error_rate(hw.p_phys, hw.p_th, d);
        if p * ops <= 1.0 {
            return Ok((d, ops, p));
        }
        d += 2;
    }
    Err(Error::Infeasible(format!("no code distance up to d_max = {} suffices", hw.d_max)))
}

pub fn solve_code_distance(
    n_log_involved: u64,
    beats_per_select: u64,
    r: u64,
    hw: &HardwareSpec,
    counting: OpCounting,
) -> Result<CodePlan> {
    if n_log_involved == 0 || beats_per_select == 0 || r == 0 {
        return Err(invalid("counts must be positive"));
    }
    let base = n_log_involved as f64 * beats_per_select as f64 * r as f64;
    let (d, n_op, p_log) = smallest_distance(hw, |d| match counting {
        OpCounting::CodeCycles => base * d as f64,
        OpCounting::Beats => base,
    })?;
    Ok(CodePlan { d, n_log: n_log_involved, n_op, p_log, n_ph: physical_qubits_rough(n_log_involved, d) })
}

pub fn solve_code_distance_rough(n_log: u64, t_count: u64, hw: &HardwareSpec) -> Result<CodePlan> {
    if n_log == 0 || t_count == 0 {
        return Err(invalid("counts must be positive"));
    }
    let base = n_log as f64 * t_count as f64 * BEATS_PER_T;
    let (d, n_op, p_log) = smallest_distance(hw, |d| base * d as f64)?;
    Ok(CodePlan { d, n_log, n_op, p_log, n_ph: physical_qubits_rough(n_log, d) })
}

/// Distances obtained with n_log scaled by 0.7 and 1.3.
pub fn sensitivity_bracket(
    n_log_involved: u64,
    beats_per_select: u64,
    r: u64,
    hw: &HardwareSpec,
    counting: OpCounting,
) -> Result<(u32, u32)> {
    let lo = ((n_log_involved as f64 * 0.7).round() as u64).max(1);
    let hi = (n_log_involved as f64 * 1.3).round() as u64;
    Ok((
        solve_code_distance(lo, beats_per_select, r, hw, counting)?.d,
        solve_code_distance(hi, beats_per_select, r, hw, counting)?.d,
    ))
}

/// System qubits plus, per thread, the index and AND-ancilla registers,
/// plus the phase-readout register.
pub fn select_qubits_involved(n_system: u64, log_l: u32, threads: u64, readout_digits: u32) -> u64 {
    n_system + threads * (2 * log_l as u64).saturating_sub(1) + readout_digits as u64
}

pub fn physical_qubits_rough(n_log: u64, d: u32) -> u64 {
    2 * (d as u64).pow(2) * n_log
}

pub fn physical_qubits_detailed(n_system: u64, log_l: u32, hw: &HardwareSpec, d: u32) -> u64 {
    let cells = 2.25 * n_system as f64
        + 1.5 * (4.0 * hw.threads as f64 + 1.0) * log_l as f64
        + (hw.n_factories * hw.factory_area) as f64;
    (cells * 2.0 * (d as f64).powi(2)).round() as u64
}

pub fn runtime_estimate(d: u32, beats_per_select: u64, r: u64, hw: &HardwareSpec) -> f64 {
    hw.t_cycle * d as f64 * beats_per_select as f64 * r as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRuntime {
    pub t_count_limited: f64,
    pub reaction_limited: f64,
}

/// Per-SELECT runtime bounds: magic supply (15 d cycles per T, 4L T gates)
/// and feed-forward (one reaction per T, 4L/b in sequence).
pub fn runtime_closed_forms(l: u64, d: u32, b: u64, hw: &HardwareSpec) -> Result<ClosedFormRuntime> {
    if b == 0 {
        return Err(invalid("thread count must be positive"));
    }
    let four_l = 4.0 * l as f64;
    Ok(ClosedFormRuntime {
        t_count_limited: hw.distill_beats as f64 * d as f64 * hw.t_cycle * four_l,
        reaction_limited: hw.reaction_time * four_l / b as f64,
    })
}

/// One heatmap cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub epsilon: f64,
    pub p: f64,
    pub d: Option<u32>,
    pub n_ph: Option<u64>,
    pub runtime_s: Option<f64>,
    pub feasible: bool,
}

/// How beats per SELECT are obtained in a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BeatSource {
    /// A fixed number, e.g. from a prior simulation.
    Fixed { beats: u64 },
    /// Magic-supply bound: distill_beats × T-count / n_F.
    SupplyBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub epsilons: Vec<f64>,
    pub ps: Vec<f64>,
}

pub fn sweep_grid(
    table: &TermTable,
    algorithm: AlgorithmKind,
    grid: &SweepGrid,
    hw: &HardwareSpec,
    beats: BeatSource,
    opts: &AlgorithmOptions,
) -> Result<Vec<SweepCell>> {
    if grid.epsilons.is_empty() || grid.ps.is_empty() {
        return Err(invalid("sweep grid must be non-empty"));
    }
    let cells: Vec<(f64, f64)> = grid.epsilons.iter().flat_map(|&e| grid.ps.iter().map(move |&p| (e, p))).collect();
    let results = exec::map(&cells, |&(epsilon, p)| sweep_cell(table, algorithm, epsilon, p, hw, beats, opts));
    results.into_iter().collect()
}

fn sweep_cell(
    table: &TermTable,
    algorithm: AlgorithmKind,
    epsilon: f64,
    p: f64,
    hw: &HardwareSpec,
    beats: BeatSource,
    opts: &AlgorithmOptions,
) -> Result<SweepCell> {
    let cost = estimate(table, epsilon, algorithm, opts)?;
    let hw = HardwareSpec { p_phys: p, ..*hw };
    let beats = match beats {
        BeatSource::Fixed { beats } => beats,
        BeatSource::SupplyBound => (hw.distill_beats * cost.t_count_per_select).div_ceil(hw.n_factories as u64).max(1),
    };
    let r = cost.repetitions;
    let n_log =
        select_qubits_involved(table.n_system as u64, table.log_terms(), hw.threads as u64, cost.budget.readout_digits);
    match solve_code_distance(n_log, beats, r, &hw, OpCounting::CodeCycles) {
        Ok(plan) => Ok(SweepCell {
            epsilon,
            p,
            d: Some(plan.d),
            n_ph: Some(physical_qubits_detailed(table.n_system as u64, table.log_terms(), &hw, plan.d)),
            runtime_s: Some(runtime_estimate(plan.d, beats, r, &hw)),
            feasible: true,
        }),
        Err(Error::Infeasible(_)) => {
            Ok(SweepCell { epsilon, p, d: None, n_ph: None, runtime_s: None, feasible: false })
        }
        Err(e) => Err(e),
    }
}

//! T-count models of phase estimation for each Hamiltonian-simulation back end.

use serde::{Deserialize, Serialize};

use crate::budget::{budget_from_target, AlgorithmKind, ErrorBudget};
use crate::error::{invalid, Error, Result};
use crate::gates::{self, SynthesisConstants};
use crate::lattice::{ceil_log2, ModelParams, TermTable};

pub const QDRIFT_HL_CONSTANT: f64 = 35.5192;
pub const QDRIFT_SINGLE_SHOT_CONSTANT: f64 = 133.0;
pub const TROTTER2_CONSTANT: f64 = 16.0;

/// Cost charged per Pauli rotation in the Trotter family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationCost {
    /// Γ⌈log2 1/δ⌉ + Ξ
    #[default]
    Plain,
    /// Singly-controlled rotation, 2Γ⌈log2 1/δ⌉ + 2Ξ.
    Controlled,
}

/// Repetition accounting for the randomized product formulas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepetitionAccounting {
    /// Repeated runs with a Hodges-Lehmann estimate.
    #[default]
    HodgesLehmann,
    /// One shot of m-digit readout with failure probability `p_fail`.
    SingleShot { p_fail: f64 },
}

/// Closed form used for the product-wise PREPARE of spin models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinPrepareForm {
    /// 14⌈log N⌉ + 7Γ⌈log 1/δ⌉
    #[default]
    Compact,
    /// 20⌈log N⌉ + 48⌈log 1/δ⌉
    Conservative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleFlavor {
    Sequential,
    Product,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmOptions {
    #[serde(default)]
    pub consts: SynthesisConstants,
    #[serde(default)]
    pub rotation_cost: RotationCost,
    #[serde(default)]
    pub repetition: RepetitionAccounting,
    #[serde(default)]
    pub spin_prepare: SpinPrepareForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub algorithm: AlgorithmKind,
    pub lambda: f64,
    pub n_terms: usize,
    pub n_rotations: Option<u64>,
    pub t_count_total: u64,
    /// T-count of one oracle step: a Pauli rotation for the Trotter family,
    /// one SELECT otherwise.
    pub t_count_per_select: u64,
    pub t_depth_per_select: u64,
    pub t_count_prepare: Option<u64>,
    pub t_count_reflection: Option<u64>,
    pub repetitions: u64,
    pub taylor_order: Option<u32>,
    pub delta_ss: f64,
    pub n_logical: u64,
    pub budget: ErrorBudget,
}

fn nonempty(table: &TermTable) -> Result<()> {
    if table.count == 0 || !(table.lambda > 0.0) {
        return Err(invalid("empty term table"));
    }
    Ok(())
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or_else(|| Error::InvalidArgument(format!("T-count overflow: {a} x {b}")))
}

fn count_from(x: f64) -> Result<u64> {
    if !x.is_finite() || x > 1.8e19 {
        return Err(invalid(format!("count {x} out of range")));
    }
    Ok(x.ceil().max(1.0) as u64)
}

fn rotation_cost(delta_ss: f64, opts: &AlgorithmOptions) -> Result<u64> {
    match opts.rotation_cost {
        RotationCost::Plain => gates::tcount_rotation(delta_ss, &opts.consts),
        RotationCost::Controlled => gates::tcount_controlled_rotation(1, delta_ss, &opts.consts),
    }
}

fn trotter_report(table: &TermTable, budget: ErrorBudget, n_rot: u64, opts: &AlgorithmOptions) -> Result<CostReport> {
    let delta_ss = budget.delta_syn / (2.0 * n_rot as f64);
    let per = rotation_cost(delta_ss, opts)?;
    Ok(CostReport {
        algorithm: budget.algorithm,
        lambda: table.lambda,
        n_terms: table.count,
        n_rotations: Some(n_rot),
        t_count_total: mul(n_rot, per)?,
        t_count_per_select: per,
        t_depth_per_select: per,
        t_count_prepare: None,
        t_count_reflection: None,
        repetitions: budget.repetitions,
        taylor_order: None,
        delta_ss,
        n_logical: table.n_system as u64,
        budget,
    })
}

pub fn tcount_qdrift(table: &TermTable, budget: &ErrorBudget, opts: &AlgorithmOptions) -> Result<CostReport> {
    nonempty(table)?;
    let l2 = (table.lambda / budget.epsilon).powi(2);
    let n_rot = match opts.repetition {
        RepetitionAccounting::HodgesLehmann => count_from(QDRIFT_HL_CONSTANT * l2)?,
        RepetitionAccounting::SingleShot { p_fail } => {
            if !(p_fail > 0.0 && p_fail < 1.0) {
                return Err(invalid(format!("p_fail must lie in (0, 1), got {p_fail}")));
            }
            count_from(QDRIFT_SINGLE_SHOT_CONSTANT * l2 / (1.5 * p_fail).powi(3))?
        }
    };
    trotter_report(table, ErrorBudget { algorithm: AlgorithmKind::QDrift, ..budget.clone() }, n_rot, opts)
}

pub fn tcount_trotter2(table: &TermTable, budget: &ErrorBudget, opts: &AlgorithmOptions) -> Result<CostReport> {
    nonempty(table)?;
    let big_l = table.count as f64;
    let n_rot = count_from(TROTTER2_CONSTANT * table.lambda_max.powi(3) * big_l * big_l / budget.epsilon.powf(1.5))?;
    trotter_report(table, ErrorBudget { algorithm: AlgorithmKind::RandomTrotter2, ..budget.clone() }, n_rot, opts)
}

/// Truncation order of the Taylor series, natural logarithms.
pub fn taylor_order(r: u64, delta_hs: f64) -> Result<u32> {
    if r < 1 || !(delta_hs > 0.0 && delta_hs < 1.0) {
        return Err(invalid(format!("taylor order needs r >= 1 and delta in (0, 1), got ({r}, {delta_hs})")));
    }
    let x = 2.0 * r as f64 / delta_hs;
    let ll = x.ln().ln();
    if !(ll + 1.0 > 0.0) {
        return Err(invalid("taylor order undefined for these arguments"));
    }
    let k = (-1.0 + 2.0 * x.ln() / (ll + 1.0)).ceil();
    if k < 1.0 {
        return Err(invalid(format!("taylor order {k} below one")));
    }
    Ok(k as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCost {
    pub t_count: u64,
    pub n_ancilla: u64,
}

fn log_n(table: &TermTable) -> u64 {
    ceil_log2(table.n_system as u64) as u64
}

pub fn select_cost(table: &TermTable, flavor: OracleFlavor) -> Result<OracleCost> {
    nonempty(table)?;
    let l = table.count as u64;
    let lg = ceil_log2(l) as u64;
    let n = table.n_system as u64;
    Ok(match (flavor, &table.model) {
        (OracleFlavor::Sequential, ModelParams::FermiHubbard { .. }) => {
            OracleCost { t_count: 18 * n, n_ancilla: lg.saturating_sub(1) }
        }
        (OracleFlavor::Sequential, _) => OracleCost { t_count: 4 * l - 4, n_ancilla: lg.saturating_sub(1) },
        (OracleFlavor::Product, ModelParams::FermiHubbard { .. }) => {
            OracleCost { t_count: 10 * n, n_ancilla: table.locality as u64 * log_n(table) }
        }
        (OracleFlavor::Product, model) => {
            let s = model.spin().unwrap_or(0.5);
            let t = (48.0 * s * table.n_sites as f64).round() as u64;
            OracleCost { t_count: t.saturating_sub(4), n_ancilla: table.locality as u64 * log_n(table) }
        }
    })
}

/// Rotations inside one PREPARE, used to split the synthesis budget.
pub fn prepare_rotations(table: &TermTable, flavor: OracleFlavor) -> u64 {
    match (flavor, table.model.is_fermionic()) {
        (OracleFlavor::Sequential, _) => 4,
        (OracleFlavor::Product, true) => 6,
        (OracleFlavor::Product, false) => 7,
    }
}

pub fn prepare_cost(
    table: &TermTable,
    flavor: OracleFlavor,
    delta_ss: f64,
    opts: &AlgorithmOptions,
) -> Result<OracleCost> {
    nonempty(table)?;
    let ln = log_n(table);
    let bits = gates::log2_inv(delta_ss)? as f64;
    let g = opts.consts.gamma;
    let ceil = |x: f64| x.ceil() as u64;
    let t_count = match (flavor, table.model.is_fermionic()) {
        (OracleFlavor::Sequential, _) => 8 * ln + ceil(4.0 * g * bits),
        (OracleFlavor::Product, true) => 16 * ln + ceil(6.0 * g * bits),
        (OracleFlavor::Product, false) => match opts.spin_prepare {
            SpinPrepareForm::Compact => 14 * ln + ceil(7.0 * g * bits),
            SpinPrepareForm::Conservative => 20 * ln + 48 * bits as u64,
        },
    };
    let n_ancilla = match flavor {
        OracleFlavor::Sequential => table.log_terms() as u64,
        OracleFlavor::Product => {
            (table.locality as u64 + 1) * ln + ceil_log2((table.n_alpha * table.n_mu).max(1) as u64) as u64
        }
    };
    Ok(OracleCost { t_count, n_ancilla })
}

pub fn tcount_qubitization(
    table: &TermTable,
    budget: &ErrorBudget,
    flavor: OracleFlavor,
    opts: &AlgorithmOptions,
) -> Result<CostReport> {
    nonempty(table)?;
    let algorithm = match flavor {
        OracleFlavor::Sequential => AlgorithmKind::QubitizationSequential,
        OracleFlavor::Product => AlgorithmKind::QubitizationProduct,
    };
    let r = budget.repetitions;
    let delta_prep = budget.delta_prep.unwrap_or(budget.delta_syn);
    let delta_ss = delta_prep / (2.0 * r as f64 * prepare_rotations(table, flavor) as f64);
    let prep = prepare_cost(table, flavor, delta_ss, opts)?;
    let sel = select_cost(table, flavor)?;
    let refl = gates::tcount_mcx(prep.n_ancilla + 1);
    let step = 2 * prep.t_count + sel.t_count + 2 * refl;
    Ok(CostReport {
        algorithm,
        lambda: table.lambda,
        n_terms: table.count,
        n_rotations: None,
        t_count_total: mul(r, step)?,
        t_count_per_select: sel.t_count,
        t_depth_per_select: sel.t_count.div_ceil(2),
        t_count_prepare: Some(prep.t_count),
        t_count_reflection: Some(refl),
        repetitions: r,
        taylor_order: None,
        delta_ss,
        n_logical: table.n_system as u64 + sel.n_ancilla + prep.n_ancilla + budget.readout_digits as u64,
        budget: ErrorBudget { algorithm, ..budget.clone() },
    })
}

pub fn tcount_taylorization(table: &TermTable, budget: &ErrorBudget, opts: &AlgorithmOptions) -> Result<CostReport> {
    nonempty(table)?;
    let r = budget.repetitions;
    let delta_hs = budget.delta_hs.unwrap_or(budget.delta_syn / 2.0);
    let k = taylor_order(r, delta_hs)?;
    taylorization_with_order(table, budget, k, opts)
}

pub fn taylorization_with_order(
    table: &TermTable,
    budget: &ErrorBudget,
    k: u32,
    opts: &AlgorithmOptions,
) -> Result<CostReport> {
    nonempty(table)?;
    if k == 0 {
        return Err(invalid("truncation order must be at least one"));
    }
    let r = budget.repetitions;
    let kk = k as u64;
    let delta_prep = budget.delta_prep.unwrap_or(budget.delta_syn / 2.0);
    let delta_ss =
        delta_prep / (2.0 * r as f64 * kk as f64 * prepare_rotations(table, OracleFlavor::Sequential) as f64);
    let prep = prepare_cost(table, OracleFlavor::Sequential, delta_ss, opts)?;
    let sel = 4 * table.count as u64 - 4;
    let ancilla = kk * table.log_terms() as u64 + ceil_log2(kk) as u64;
    let refl = gates::tcount_mcx(ancilla + 1);
    let segment = 3 * (2 * kk * prep.t_count + kk * sel) + 2 * refl;
    Ok(CostReport {
        algorithm: AlgorithmKind::Taylorization,
        lambda: table.lambda,
        n_terms: table.count,
        n_rotations: None,
        t_count_total: mul(r, segment)?,
        t_count_per_select: kk * sel,
        t_depth_per_select: (kk * sel).div_ceil(2),
        t_count_prepare: Some(kk * prep.t_count),
        t_count_reflection: Some(refl),
        repetitions: r,
        taylor_order: Some(k),
        delta_ss,
        n_logical: table.n_system as u64 + ancilla + budget.readout_digits as u64,
        budget: ErrorBudget { algorithm: AlgorithmKind::Taylorization, ..budget.clone() },
    })
}

pub fn estimate(
    table: &TermTable,
    epsilon: f64,
    algorithm: AlgorithmKind,
    opts: &AlgorithmOptions,
) -> Result<CostReport> {
    nonempty(table)?;
    let budget = budget_from_target(epsilon, table.lambda, algorithm)?;
    match algorithm {
        AlgorithmKind::QDrift => tcount_qdrift(table, &budget, opts),
        AlgorithmKind::RandomTrotter2 => tcount_trotter2(table, &budget, opts),
        AlgorithmKind::Taylorization => tcount_taylorization(table, &budget, opts),
        AlgorithmKind::QubitizationSequential => tcount_qubitization(table, &budget, OracleFlavor::Sequential, opts),
        AlgorithmKind::QubitizationProduct => tcount_qubitization(table, &budget, OracleFlavor::Product, opts),
    }
}

pub fn estimate_all(table: &TermTable, epsilon: f64, opts: &AlgorithmOptions) -> Result<Vec<CostReport>> {
    AlgorithmKind::ALL.iter().map(|&a| estimate(table, epsilon, a, opts)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AspParams {
    pub beta: f64,
    pub alpha: f64,
    pub prefactor: f64,
}

impl Default for AspParams {
    fn default() -> Self {
        AspParams { beta: 1.5, alpha: 0.5, prefactor: 0.3 }
    }
}

/// Adiabatic state-preparation time c·N^{αβ}·ln(1/ε_f), in inverse energy units.
pub fn asp_time_estimate(n_sites: u64, epsilon_f: f64, p: &AspParams) -> Result<f64> {
    if !(epsilon_f > 0.0 && epsilon_f < 1.0) {
        return Err(invalid(format!("infidelity must lie in (0, 1), got {epsilon_f}")));
    }
    Ok(p.prefactor * (n_sites as f64).powf(p.alpha * p.beta) * (1.0 / epsilon_f).ln())
}

//! Error budget for phase estimation.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    #[serde(rename = "qdrift")]
    QDrift,
    RandomTrotter2,
    Taylorization,
    QubitizationSequential,
    QubitizationProduct,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::QDrift,
        AlgorithmKind::RandomTrotter2,
        AlgorithmKind::Taylorization,
        AlgorithmKind::QubitizationSequential,
        AlgorithmKind::QubitizationProduct,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AlgorithmKind::QDrift => "qdrift",
            AlgorithmKind::RandomTrotter2 => "random_trotter2",
            AlgorithmKind::Taylorization => "taylorization",
            AlgorithmKind::QubitizationSequential => "qubitization_seq",
            AlgorithmKind::QubitizationProduct => "qubitization_product",
        }
    }

    pub fn is_qubitization(self) -> bool {
        matches!(self, AlgorithmKind::QubitizationSequential | AlgorithmKind::QubitizationProduct)
    }
}

pub const PEA_SHARE: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub algorithm: AlgorithmKind,
    pub epsilon: f64,
    pub lambda: f64,
    pub delta_total: f64,
    pub delta_pea: f64,
    pub delta_syn: f64,
    /// Hamiltonian-simulation share (Trotter family and Taylorization).
    pub delta_hs: Option<f64>,
    /// Rotation-synthesis share (Trotter family).
    pub delta_rot: Option<f64>,
    /// State-preparation share (post-Trotter methods).
    pub delta_prep: Option<f64>,
    pub repetitions: u64,
    pub readout_digits: u32,
}

impl ErrorBudget {
    pub fn check(&self) -> Result<()> {
        let sum = self.delta_pea + self.delta_syn;
        if ((sum - self.delta_total) / self.delta_total).abs() > 1e-12 {
            return Err(crate::Error::Invariant(format!("budget split {sum} != {}", self.delta_total)));
        }
        if self.repetitions != repetitions(self.delta_pea)? {
            return Err(crate::Error::Invariant("r inconsistent with delta_pea".into()));
        }
        if (self.readout_digits as u64) < 64 && (1u64 << self.readout_digits) <= self.repetitions {
            return Err(crate::Error::Invariant("2^m must exceed r".into()));
        }
        Ok(())
    }
}

/// r = ⌈π / (2 δ_PEA)⌉.
pub fn repetitions(delta_pea: f64) -> Result<u64> {
    if !(delta_pea > 0.0) || !delta_pea.is_finite() {
        return Err(invalid(format!("delta_pea must be positive, got {delta_pea}")));
    }
    let r = (std::f64::consts::PI / (2.0 * delta_pea)).ceil();
    if r > 1e18 {
        return Err(invalid("repetition count overflows"));
    }
    Ok((r as u64).max(1))
}

/// Smallest m with 2^m > r.
pub fn readout_digits(r: u64) -> u32 {
    64 - r.leading_zeros()
}

pub fn budget_from_target(epsilon: f64, lambda: f64, algorithm: AlgorithmKind) -> Result<ErrorBudget> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    let delta_total = epsilon / lambda;
    let delta_pea = PEA_SHARE * delta_total;
    let delta_syn = delta_total - delta_pea;
    let (delta_hs, delta_rot, delta_prep) = match algorithm {
        AlgorithmKind::QDrift | AlgorithmKind::RandomTrotter2 => (Some(delta_syn / 2.0), Some(delta_syn / 2.0), None),
        AlgorithmKind::Taylorization => (Some(delta_syn / 2.0), None, Some(delta_syn / 2.0)),
        AlgorithmKind::QubitizationSequential | AlgorithmKind::QubitizationProduct => (None, None, Some(delta_syn)),
    };
    let r = repetitions(delta_pea)?;
    Ok(ErrorBudget {
        algorithm,
        epsilon,
        lambda,
        delta_total,
        delta_pea,
        delta_syn,
        delta_hs,
        delta_rot,
        delta_prep,
        repetitions: r,
        readout_digits: readout_digits(r),
    })
}

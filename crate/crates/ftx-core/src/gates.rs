//! Clifford+T cost of basic fault-tolerant operations.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::ceil_log2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConstants {
    pub gamma: f64,
    pub xi: f64,
}

impl Default for SynthesisConstants {
    fn default() -> Self {
        SynthesisConstants { gamma: 1.03, xi: 5.6 }
    }
}

impl SynthesisConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !(self.xi >= 0.0) {
            return Err(invalid(format!("synthesis constants out of range: {self:?}")));
        }
        Ok(())
    }
}

/// ⌈log2(1/δ)⌉, robust to rounding noise at exact powers of two.
pub fn log2_inv(delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("synthesis accuracy must lie in (0, 1), got {delta}")));
    }
    let x = -delta.log2();
    let near = x.round();
    let bits = if (x - near).abs() < 1e-9 { near } else { x.ceil() };
    Ok(bits as u32)
}

fn ceil_u64(x: f64) -> u64 {
    let near = x.round();
    if (x - near).abs() < 1e-9 {
        near.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

pub fn tcount_adder(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("adder needs n >= 2, got {n}")));
    }
    Ok(4 * n - 4)
}

pub fn tcount_controlled_adder(m: u64, n: u64) -> Result<u64> {
    if m < 1 || n < 2 {
        return Err(invalid(format!("controlled adder needs m >= 1, n >= 2, got ({m}, {n})")));
    }
    Ok(4 * (m - 1) + 8 * (n - 1))
}

/// Adding a constant 2^k·L on n qubits.
pub fn tcount_power2_adder(n: u64, k: u64) -> Result<u64> {
    if n < k + 2 {
        return Err(invalid(format!("power-of-two adder needs n >= k + 2, got ({n}, {k})")));
    }
    Ok((4 * (n - k - 1)).saturating_sub(4))
}

pub fn tcount_controlled_power2_adder(m: u64, n: u64, k: u64) -> Result<u64> {
    if m < 1 || n < k + 2 {
        return Err(invalid(format!("controlled power-of-two adder out of range: ({m}, {n}, {k})")));
    }
    Ok(4 * (m - 1) + 8 * (n - k - 2))
}

pub fn tcount_mcx(m: u64) -> u64 {
    if m <= 1 {
        0
    } else {
        4 * (m - 1)
    }
}

pub fn tcount_cswap(m: u64) -> u64 {
    4 * m
}

pub fn tcount_rotation(delta_ss: f64, c: &SynthesisConstants) -> Result<u64> {
    let bits = log2_inv(delta_ss)? as f64;
    Ok(ceil_u64(c.gamma * bits + c.xi))
}

pub fn tcount_controlled_rotation(m: u64, delta_ss: f64, c: &SynthesisConstants) -> Result<u64> {
    if m < 1 {
        return Err(invalid("controlled rotation needs at least one control"));
    }
    let bits = log2_inv(delta_ss)? as f64;
    Ok(8 * (m - 1) + ceil_u64(2.0 * c.gamma * bits + 2.0 * c.xi))
}

/// Uniform superposition over `l` basis states.
pub fn tcount_uniform(l: u64, delta_ss: f64, c: &SynthesisConstants) -> Result<u64> {
    if l < 1 {
        return Err(invalid("uniform superposition over zero states"));
    }
    let bits = log2_inv(delta_ss)? as f64;
    let v = 8.0 * ceil_log2(l) as f64 + 2.0 * c.gamma * bits + 2.0 * c.xi - 4.0;
    Ok(ceil_u64(v.max(0.0)))
}

pub fn tcount_controlled_uniform(m: u64, k: u64, l: u64, delta_ss: f64, c: &SynthesisConstants) -> Result<u64> {
    if m < 1 || l < 1 {
        return Err(invalid("controlled uniform needs m >= 1 and l >= 1"));
    }
    let bits = log2_inv(delta_ss)? as f64;
    let v =
        4.0 * (m - 1) as f64 + 2.0 * k as f64 + 10.0 * ceil_log2(l) as f64 + 2.0 * c.gamma * bits + 2.0 * c.xi - 4.0;
    Ok(ceil_u64(v.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adders() {
        assert_eq!(tcount_adder(3).unwrap(), 8);
        assert_eq!(tcount_adder(2).unwrap(), 4);
        assert_eq!(tcount_adder(10).unwrap(), 36);
        assert!(tcount_adder(1).is_err());
        assert_eq!(tcount_controlled_adder(1, 3).unwrap(), 16);
        assert_eq!(tcount_controlled_adder(1, 2).unwrap(), 8);
        assert_eq!(tcount_controlled_adder(3, 5).unwrap(), 40);
        assert!(tcount_controlled_adder(0, 5).is_err());
        assert_eq!(tcount_power2_adder(10, 2).unwrap(), 24);
        assert_eq!(tcount_controlled_power2_adder(2, 10, 2).unwrap(), 52);
    }

    #[test]
    fn mcx_and_swap() {
        assert_eq!(tcount_mcx(0), 0);
        assert_eq!(tcount_mcx(1), 0);
        assert_eq!(tcount_mcx(2), 4);
        assert_eq!(tcount_cswap(0), 0);
        assert_eq!(tcount_cswap(3), 12);
    }

    #[test]
    fn rotations() {
        let d = SynthesisConstants::default();
        assert_eq!(tcount_rotation(2f64.powi(-10), &d).unwrap(), 16);
        assert_eq!(tcount_rotation(0.5, &d).unwrap(), 7);
        let slope = SynthesisConstants { gamma: 1.0, xi: 0.0 };
        assert_eq!(tcount_rotation(2f64.powi(-20), &slope).unwrap(), 20);
        assert!(tcount_rotation(0.0, &d).is_err());
        assert!(tcount_rotation(1.0, &d).is_err());
        assert_eq!(tcount_controlled_rotation(1, 2f64.powi(-10), &d).unwrap(), 32);
        assert_eq!(tcount_controlled_rotation(3, 2f64.powi(-10), &d).unwrap(), 48);
    }

    #[test]
    fn uniform() {
        let d = SynthesisConstants::default();
        // 8·3 + 2·1.03·10 + 11.2 − 4 = 51.8
        assert_eq!(tcount_uniform(8, 2f64.powi(-10), &d).unwrap(), 52);
        // 0 + 2 + 30 + 20.6 + 11.2 − 4 = 59.8
        assert_eq!(tcount_controlled_uniform(1, 1, 8, 2f64.powi(-10), &d).unwrap(), 60);
    }

    #[test]
    fn log_bits() {
        assert_eq!(log2_inv(2f64.powi(-40)).unwrap(), 40);
        assert_eq!(log2_inv(0.3).unwrap(), 2);
    }
}

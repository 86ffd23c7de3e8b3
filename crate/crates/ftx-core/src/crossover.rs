//! Classical runtime fits and the quantum-classical crosspoint.
//!
//! All fits are ordinary least squares on a straight line, in log space where
//! the model calls for it.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Lower edge of the classical band: a faster machine shortens the
/// classical runtime by this factor.
pub const HARDWARE_SPEEDUP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed_s: f64,
    pub energy: f64,
    pub bond_dim: u32,
    #[serde(default)]
    pub trunc_error: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// y = a + b·x
    LinearExtrapolation,
    /// y = a·x^b
    PowerLaw,
    /// y = a·exp(b·x)
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: FitKind,
    pub params: (f64, f64),
    /// RMS residual in the space the line was fitted in.
    pub residual: f64,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.params;
        match self.kind {
            FitKind::LinearExtrapolation => a + b * x,
            FitKind::PowerLaw => a * x.powf(b),
            FitKind::Exponential => a * (b * x).exp(),
        }
    }

    /// Abscissa at which the fitted curve reaches `y`.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let (a, b) = self.params;
        if b == 0.0 {
            return Err(invalid("fit has zero slope and cannot be inverted"));
        }
        let x = match self.kind {
            FitKind::LinearExtrapolation => (y - a) / b,
            FitKind::PowerLaw => (y / a).powf(1.0 / b),
            FitKind::Exponential => (y / a).ln() / b,
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(invalid(format!("fit does not reach {y}")))
        }
    }
}

/// (intercept, slope, rms residual)
fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(invalid("need at least two points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(invalid("non-finite input"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * nf {
        return Err(invalid("degenerate abscissae"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok((intercept, slope, (ss / nf).sqrt()))
}

fn positive_logs(v: &[f64], what: &str) -> Result<Vec<f64>> {
    v.iter()
        .map(|&x| if x > 0.0 { Ok(x.ln()) } else { Err(invalid(format!("{what} must be positive, got {x}"))) })
        .collect()
}

/// Linear extrapolation of energy in the truncation error; the intercept is
/// the ground-energy estimate.
pub fn extrapolate_ground_energy(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let (e0, slope, residual) = ols(&xs, &ys)?;
    Ok(FitResult { kind: FitKind::LinearExtrapolation, params: (e0, slope), residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeFitOptions {
    pub tail_fraction: f64,
    pub allow_extrapolation: bool,
}

impl Default for TimeFitOptions {
    fn default() -> Self {
        TimeFitOptions { tail_fraction: 0.5, allow_extrapolation: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeToAccuracy {
    pub seconds: f64,
    pub fit: FitResult,
}

/// Power-law fit of ΔE = E − e0 against elapsed time on the tail of the
/// trace, inverted at `target`.
pub fn fit_time_to_accuracy(
    trace: &[TracePoint],
    e0: f64,
    target: f64,
    opts: TimeFitOptions,
) -> Result<TimeToAccuracy> {
    if !(target > 0.0) {
        return Err(invalid("target accuracy must be positive"));
    }
    if !(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0) {
        return Err(invalid("tail fraction must lie in (0, 1]"));
    }
    let mut pts: Vec<&TracePoint> = trace.iter().filter(|p| p.energy > e0).collect();
    if pts.len() < 3 {
        return Err(invalid("need at least three points above the reference energy"));
    }
    pts.sort_by(|a, b| a.elapsed_s.total_cmp(&b.elapsed_s).then(a.energy.total_cmp(&b.energy)));
    let keep = ((pts.len() as f64 * opts.tail_fraction).ceil() as usize).clamp(2, pts.len());
    let tail = &pts[pts.len() - keep..];
    let ts: Vec<f64> = tail.iter().map(|p| p.elapsed_s).collect();
    let des: Vec<f64> = tail.iter().map(|p| p.energy - e0).collect();
    let lt = positive_logs(&ts, "elapsed time")?;
    let le = positive_logs(&des, "energy error")?;
    let (ln_a, k, residual) = ols(&lt, &le)?;
    if !(k < 0.0) {
        return Err(invalid("energy error does not decrease over the tail"));
    }
    let min_de = des.iter().copied().fold(f64::INFINITY, f64::min);
    if !opts.allow_extrapolation && target < min_de {
        return Err(invalid(format!("target {target} below smallest observed error {min_de}")));
    }
    let fit = FitResult { kind: FitKind::PowerLaw, params: (ln_a.exp(), k), residual };
    Ok(TimeToAccuracy { seconds: fit.invert(target)?, fit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingForm {
    Exponential,
    PowerLaw,
}

pub fn fit_size_scaling(sizes: &[f64], times: &[f64], form: ScalingForm) -> Result<FitResult> {
    if sizes.len() != times.len() {
        return Err(invalid("sizes and times differ in length"));
    }
    if sizes.len() < 3 {
        return Err(invalid("need at least three sizes"));
    }
    let mut pts: Vec<(f64, f64)> = sizes.iter().copied().zip(times.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let ly = positive_logs(&ys, "runtime")?;
    let (kind, lx) = match form {
        ScalingForm::Exponential => (FitKind::Exponential, xs),
        ScalingForm::PowerLaw => (FitKind::PowerLaw, positive_logs(&xs, "size")?),
    };
    let (ln_a, k, residual) = ols(&lx, &ly)?;
    Ok(FitResult { kind, params: (ln_a.exp(), k), residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub size: f64,
    pub classical_s: f64,
    pub classical_fast_s: f64,
    pub quantum_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverReport {
    pub crosspoint: Option<f64>,
    pub verdict: String,
    pub classical_fit: FitResult,
    pub samples: Vec<CurveSample>,
}

pub const NONE_IN_RANGE: &str = "none in range";

/// Smallest quantum size whose runtime beats the fitted classical runtime.
/// `extra_sizes` adds classical-only sample points to the curves.
pub fn find_crosspoint(classical: &FitResult, quantum: &[(f64, f64)], extra_sizes: &[f64]) -> Result<CrossoverReport> {
    if quantum.iter().any(|&(s, t)| !s.is_finite() || !(t >= 0.0)) {
        return Err(invalid("quantum runtimes must be finite and non-negative"));
    }
    let mut q = quantum.to_vec();
    q.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let crosspoint = q.iter().find(|&&(s, t)| t < classical.eval(s)).map(|p| p.0);

    let mut grid: Vec<f64> = q.iter().map(|p| p.0).chain(extra_sizes.iter().copied()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let samples = grid
        .into_iter()
        .map(|size| {
            let c = classical.eval(size);
            CurveSample {
                size,
                classical_s: c,
                classical_fast_s: c * HARDWARE_SPEEDUP,
                quantum_s: q.iter().find(|p| p.0 == size).map(|p| p.1),
            }
        })
        .collect();
    let verdict = match crosspoint {
        Some(s) => format!("quantum faster from size {s}"),
        None => NONE_IN_RANGE.to_string(),
    };
    Ok(CrossoverReport { crosspoint, verdict, classical_fit: *classical, samples })
}

/// Reads `elapsed_s,energy,bond_dim[,trunc_error]` rows.
pub fn read_trace_csv<R: Read>(r: R) -> Result<Vec<TracePoint>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let p: TracePoint = row?;
        if p.bond_dim == 0 {
            return Err(Error::Data("bond dimension must be at least one".into()));
        }
        if out.last().is_some_and(|q: &TracePoint| p.elapsed_s < q.elapsed_s) {
            return Err(Error::Data(format!("elapsed time goes backwards at {}", p.elapsed_s)));
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn exact_energy_line() {
        let pts: Vec<(f64, f64)> = [1e-5, 3e-5, 1e-4, 2e-4].iter().map(|&d| (d, -49.30 + 100.0 * d)).collect();
        let f = extrapolate_ground_energy(&pts).unwrap();
        assert!(close(f.params.0, -49.30, 1e-12));
        assert!(close(f.params.1, 100.0, 1e-9));
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn energy_fit_rejects_degenerate() {
        assert!(extrapolate_ground_energy(&[(1e-4, -1.0)]).is_err());
        assert!(extrapolate_ground_energy(&[(1e-4, -1.0), (1e-4, -1.1)]).is_err());
    }

    fn trace(f: impl Fn(f64) -> f64) -> Vec<TracePoint> {
        (1..=20)
            .map(|i| {
                let t = 10f64.powf(i as f64 / 4.0);
                TracePoint { elapsed_s: t, energy: f(t), bond_dim: 100, trunc_error: None }
            })
            .collect()
    }

    #[test]
    fn closed_form_time() {
        let tr = trace(|t| 10.0 * t.powf(-0.5));
        let r = fit_time_to_accuracy(&tr, 0.0, 0.01, TimeFitOptions::default()).unwrap();
        assert!(close(r.seconds, 1e6, 1e-9));
        assert!(close(r.fit.params.1, -0.5, 1e-12));
    }

    #[test]
    fn flat_trace_rejected() {
        let tr = trace(|_| 1.0);
        assert!(fit_time_to_accuracy(&tr, 0.0, 0.01, TimeFitOptions::default()).is_err());
    }

    #[test]
    fn extrapolation_toggle() {
        let tr = trace(|t| 10.0 * t.powf(-0.5));
        let strict = TimeFitOptions { allow_extrapolation: false, ..Default::default() };
        assert!(fit_time_to_accuracy(&tr, 0.0, 1e-6, strict).is_err());
        assert!(fit_time_to_accuracy(&tr, 0.0, 1.0, strict).is_ok());
    }

    #[test]
    fn exact_exponential_recovered() {
        let sizes = [4.0f64, 6.0, 8.0, 10.0];
        let times: Vec<f64> = sizes.iter().map(|&l| 0.3 * (1.7 * l).exp()).collect();
        let f = fit_size_scaling(&sizes, &times, ScalingForm::Exponential).unwrap();
        assert!(close(f.params.0, 0.3, 1e-9));
        assert!(close(f.params.1, 1.7, 1e-12));
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn identical_curves_never_cross() {
        let f = FitResult { kind: FitKind::Exponential, params: (1.0, 1.0), residual: 0.0 };
        let q: Vec<(f64, f64)> = (2..8).map(|l| (l as f64, f.eval(l as f64))).collect();
        let r = find_crosspoint(&f, &q, &[]).unwrap();
        assert_eq!(r.crosspoint, None);
        assert_eq!(r.verdict, NONE_IN_RANGE);
        let empty = find_crosspoint(&f, &[], &[3.0]).unwrap();
        assert_eq!(empty.crosspoint, None);
        assert_eq!(empty.samples.len(), 1);
    }

    #[test]
    fn trace_csv() {
        let src = "elapsed_s,energy,bond_dim,trunc_error\n1.0,-3.0,100,1e-4\n2.0,-3.1,200,\n";
        let t = read_trace_csv(src.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].trunc_error, Some(1e-4));
        assert_eq!(t[1].trunc_error, None);
        let short = "elapsed_s,energy,bond_dim\n5.0,-1.0,10\n";
        assert_eq!(read_trace_csv(short.as_bytes()).unwrap()[0].bond_dim, 10);
        let back = "elapsed_s,energy,bond_dim\n5.0,-1.0,10\n4.0,-1.0,10\n";
        assert!(read_trace_csv(back.as_bytes()).is_err());
    }
}

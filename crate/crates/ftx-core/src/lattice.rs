//! Lattice models and their Pauli decomposition.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

fn default_half() -> f64 {
    0.5
}

fn default_one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    #[serde(rename = "heisenberg_j1j2")]
    HeisenbergJ1J2 {
        j1: f64,
        #[serde(default)]
        j2: f64,
        #[serde(default = "default_half")]
        spin: f64,
    },
    FermiHubbard {
        t: f64,
        u: f64,
    },
    HeisenbergChain {
        #[serde(default = "default_one")]
        j: f64,
        #[serde(default = "default_one")]
        spin: f64,
    },
}

impl ModelParams {
    /// Number of qubits per site: 2S for spin models, 2 for spinful fermions.
    pub fn qubits_per_site(&self) -> usize {
        match self {
            ModelParams::FermiHubbard { .. } => 2,
            ModelParams::HeisenbergJ1J2 { spin, .. } | ModelParams::HeisenbergChain { spin, .. } => {
                (2.0 * spin).round() as usize
            }
        }
    }

    pub fn is_fermionic(&self) -> bool {
        matches!(self, ModelParams::FermiHubbard { .. })
    }

    /// Spin quantum number S, or `None` for fermions.
    pub fn spin(&self) -> Option<f64> {
        match self {
            ModelParams::FermiHubbard { .. } => None,
            ModelParams::HeisenbergJ1J2 { spin, .. } | ModelParams::HeisenbergChain { spin, .. } => Some(*spin),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelParams::HeisenbergJ1J2 { .. } => "heisenberg_j1j2",
            ModelParams::FermiHubbard { .. } => "fermi_hubbard",
            ModelParams::HeisenbergChain { .. } => "heisenberg_chain",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match *self {
            ModelParams::HeisenbergJ1J2 { j1, j2, spin } => {
                if !(j1 > 0.0) {
                    return bad("j1 must be positive");
                }
                if !(j2 >= 0.0) {
                    return bad("j2 must be non-negative");
                }
                check_spin(spin)
            }
            ModelParams::FermiHubbard { t, u } => {
                if !(t > 0.0) {
                    return bad("hopping t must be positive");
                }
                if !(u >= 0.0) {
                    return bad("onsite u must be non-negative");
                }
                Ok(())
            }
            ModelParams::HeisenbergChain { j, spin } => {
                if !(j > 0.0) {
                    return bad("chain coupling j must be positive");
                }
                check_spin(spin)
            }
        }
    }
}

fn check_spin(spin: f64) -> Result<()> {
    let twice = 2.0 * spin;
    if !(twice >= 1.0) || (twice - twice.round()).abs() > 1e-9 {
        return Err(Error::InvalidSpec(format!("spin {spin} is not a positive half-integer")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub extents: Vec<usize>,
    pub boundary: Vec<Boundary>,
    pub model: ModelParams,
}

impl LatticeSpec {
    /// Square-lattice cylinder: periodic along x, open along y.
    pub fn cylinder(lx: usize, ly: usize, model: ModelParams) -> Self {
        LatticeSpec { extents: vec![lx, ly], boundary: vec![Boundary::Periodic, Boundary::Open], model }
    }

    pub fn chain(n: usize, boundary: Boundary, model: ModelParams) -> Self {
        LatticeSpec { extents: vec![n], boundary: vec![boundary], model }
    }

    pub fn heisenberg(lx: usize, ly: usize, j2: f64) -> Self {
        Self::cylinder(lx, ly, ModelParams::HeisenbergJ1J2 { j1: 1.0, j2, spin: 0.5 })
    }

    pub fn hubbard(lx: usize, ly: usize, u: f64) -> Self {
        Self::cylinder(lx, ly, ModelParams::FermiHubbard { t: 1.0, u })
    }

    pub fn spin_chain(n: usize, spin: f64, boundary: Boundary) -> Self {
        Self::chain(n, boundary, ModelParams::HeisenbergChain { j: 1.0, spin })
    }

    pub fn n_sites(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_sites() * self.model.qubits_per_site()
    }

    /// Same lattice with every axis made periodic.
    pub fn periodic_closure(&self) -> LatticeSpec {
        LatticeSpec { boundary: vec![Boundary::Periodic; self.extents.len()], ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.extents.is_empty() {
            return Err(Error::InvalidSpec("extents must be non-empty".into()));
        }
        if self.extents.contains(&0) {
            return Err(Error::InvalidSpec("zero-size lattice".into()));
        }
        if self.boundary.len() != self.extents.len() {
            return Err(Error::InvalidSpec(format!(
                "{} boundary tags for {} axes",
                self.boundary.len(),
                self.extents.len()
            )));
        }
        match self.model {
            ModelParams::FermiHubbard { .. } if self.extents.len() != 2 => {
                return Err(Error::InvalidSpec("fermi_hubbard needs a 2d lattice".into()))
            }
            ModelParams::HeisenbergChain { .. } if self.extents.len() != 1 => {
                return Err(Error::InvalidSpec("heisenberg_chain needs a 1d lattice".into()))
            }
            ModelParams::HeisenbergJ1J2 { .. } if self.extents.len() > 2 => {
                return Err(Error::InvalidSpec("heisenberg_j1j2 supports 1d and 2d lattices".into()))
            }
            _ => {}
        }
        self.model.validate()
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut rest = site;
        self.extents
            .iter()
            .map(|&e| {
                let c = rest % e;
                rest /= e;
                c
            })
            .collect()
    }

    fn site_index(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (c, e) in coords.iter().zip(&self.extents) {
            idx += c * stride;
            stride *= e;
        }
        idx
    }

    /// Unordered site pairs reached by `disp`, wrapped on periodic axes and
    /// dropped on open ones. Sorted and duplicate-free.
    pub fn bonds(&self, disp: &[isize]) -> Vec<(usize, usize)> {
        let mut out = BTreeSet::new();
        for s in 0..self.n_sites() {
            let c = self.coords(s);
            let mut t = Vec::with_capacity(c.len());
            let mut ok = true;
            for (axis, (&ci, &di)) in c.iter().zip(disp).enumerate() {
                let e = self.extents[axis] as isize;
                let mut v = ci as isize + di;
                if v < 0 || v >= e {
                    match self.boundary[axis] {
                        Boundary::Open => {
                            ok = false;
                            break;
                        }
                        Boundary::Periodic => v = v.rem_euclid(e),
                    }
                }
                t.push(v as usize);
            }
            if !ok {
                continue;
            }
            let u = self.site_index(&t);
            if u != s {
                out.insert((s.min(u), s.max(u)));
            }
        }
        out.into_iter().collect()
    }

    pub fn nearest_neighbor_bonds(&self) -> Vec<(usize, usize)> {
        let mut all = BTreeSet::new();
        for axis in 0..self.extents.len() {
            let mut d = vec![0isize; self.extents.len()];
            d[axis] = 1;
            all.extend(self.bonds(&d));
        }
        all.into_iter().collect()
    }

    /// Diagonal neighbours in 2d, distance-two neighbours in 1d.
    pub fn next_nearest_bonds(&self) -> Vec<(usize, usize)> {
        let disps: Vec<Vec<isize>> = match self.extents.len() {
            1 => vec![vec![2]],
            _ => vec![vec![1, 1], vec![1, -1]],
        };
        let nn: BTreeSet<_> = self.nearest_neighbor_bonds().into_iter().collect();
        let mut all = BTreeSet::new();
        for d in &disps {
            all.extend(self.bonds(d).into_iter().filter(|b| !nn.contains(b)));
        }
        all.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub weight: f64,
    pub factors: Vec<(usize, Axis)>,
}

impl PauliTerm {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|f| f.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermTable {
    pub terms: Vec<PauliTerm>,
    pub lambda: f64,
    pub count: usize,
    pub lambda_max: f64,
    pub n_system: usize,
    pub n_sites: usize,
    /// Lattice extents the terms were enumerated on; empty for hand-built tables.
    #[serde(default)]
    pub extents: Vec<usize>,
    pub locality: usize,
    pub n_alpha: usize,
    pub n_mu: usize,
    pub model: ModelParams,
}

/// Neumaier-compensated sum over magnitudes in descending order.
pub fn l1_norm(weights: impl IntoIterator<Item = f64>) -> f64 {
    let mut w: Vec<f64> = weights.into_iter().map(f64::abs).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in w {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl TermTable {
    pub fn new(terms: Vec<PauliTerm>, n_system: usize, n_sites: usize, model: ModelParams) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if !(t.weight > 0.0) || !t.weight.is_finite() {
                return Err(Error::InvalidSpec(format!("term {i} has non-positive weight {}", t.weight)));
            }
            let mut seen = BTreeSet::new();
            for &(q, _) in &t.factors {
                if q >= n_system {
                    return Err(Error::InvalidSpec(format!("term {i} acts on qubit {q} >= {n_system}")));
                }
                if !seen.insert(q) {
                    return Err(Error::InvalidSpec(format!("term {i} repeats qubit {q}")));
                }
            }
        }
        let lambda = l1_norm(terms.iter().map(|t| t.weight));
        let lambda_max = terms.iter().map(|t| t.weight).fold(0.0, f64::max);
        let locality = terms.iter().map(|t| t.factors.len()).max().unwrap_or(0);
        let alphas: BTreeSet<(Axis, Axis)> =
            terms.iter().filter_map(|t| Some((t.factors.first()?.1, t.factors.last()?.1))).collect();
        let mus: BTreeSet<usize> =
            terms.iter().filter_map(|t| Some(t.factors.last()?.0 - t.factors.first()?.0)).collect();
        Ok(TermTable {
            count: terms.len(),
            terms,
            lambda,
            lambda_max,
            n_system,
            n_sites,
            extents: Vec::new(),
            locality,
            n_alpha: alphas.len(),
            n_mu: mus.len(),
            model,
        })
    }

    /// ⌈log2 L⌉, zero for L ≤ 1.
    pub fn log_terms(&self) -> u32 {
        ceil_log2(self.count as u64)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["weight", "factors"])?;
        for t in &self.terms {
            let f: Vec<String> = t.factors.iter().map(|(q, a)| format!("{q}:{a}")).collect();
            wr.write_record([format!("{}", t.weight), f.join(";")])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Smallest k with 2^k ≥ n; zero for n ≤ 1.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

fn heisenberg_bond_terms(out: &mut Vec<PauliTerm>, p: usize, q: usize, coupling: f64, k: usize) {
    let w = coupling / 4.0;
    for axis in Axis::ALL {
        for nu in 0..k {
            for nu2 in 0..k {
                let a = p * k + nu;
                let b = q * k + nu2;
                let (a, b) = (a.min(b), a.max(b));
                out.push(PauliTerm { weight: w, factors: vec![(a, axis), (b, axis)] });
            }
        }
    }
}

fn jordan_wigner_hop(i: usize, j: usize, axis: Axis, weight: f64) -> PauliTerm {
    let (i, j) = (i.min(j), i.max(j));
    let mut factors = Vec::with_capacity(j - i + 1);
    factors.push((i, axis));
    factors.extend((i + 1..j).map(|m| (m, Axis::Z)));
    factors.push((j, axis));
    PauliTerm { weight, factors }
}

pub fn enumerate_terms(spec: &LatticeSpec) -> Result<TermTable> {
    spec.validate()?;
    let n_sites = spec.n_sites();
    let k = spec.model.qubits_per_site();
    let mut terms = Vec::new();
    match spec.model {
        ModelParams::HeisenbergJ1J2 { j1, j2, .. } => {
            for (p, q) in spec.nearest_neighbor_bonds() {
                heisenberg_bond_terms(&mut terms, p, q, j1, k);
            }
            if j2 > 0.0 {
                for (p, q) in spec.next_nearest_bonds() {
                    heisenberg_bond_terms(&mut terms, p, q, j2, k);
                }
            }
        }
        ModelParams::HeisenbergChain { j, .. } => {
            for (p, q) in spec.nearest_neighbor_bonds() {
                heisenberg_bond_terms(&mut terms, p, q, j, k);
            }
        }
        ModelParams::FermiHubbard { t, u } => {
            for (p, q) in spec.nearest_neighbor_bonds() {
                for sigma in 0..2 {
                    let (i, j) = (2 * p + sigma, 2 * q + sigma);
                    terms.push(jordan_wigner_hop(i, j, Axis::X, t / 2.0));
                    terms.push(jordan_wigner_hop(i, j, Axis::Y, t / 2.0));
                }
            }
            if u > 0.0 {
                for p in 0..n_sites {
                    terms.push(PauliTerm { weight: u / 4.0, factors: vec![(2 * p, Axis::Z), (2 * p + 1, Axis::Z)] });
                }
            }
        }
    }
    let mut table = TermTable::new(terms, n_sites * k, n_sites, spec.model.clone())?;
    table.extents = spec.extents.clone();
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rescale {
    pub beta1_sq: f64,
    pub lambda_eff: f64,
}

/// Amplitude loss when the PREPARE index space carries `enumerated_bins`
/// slots but only `L` of them are real terms. Padding slots are weighted
/// at the table's mean term weight.
pub fn boundary_rescale(table: &TermTable, enumerated_bins: usize) -> Result<Rescale> {
    if enumerated_bins < table.count {
        return Err(Error::InvalidArgument(format!("{enumerated_bins} bins cannot hold {} terms", table.count)));
    }
    if table.count == 0 || !(table.lambda > 0.0) {
        return Err(Error::InvalidArgument("empty Hamiltonian has no block encoding".into()));
    }
    let mean = table.lambda / table.count as f64;
    let phantom = (enumerated_bins - table.count) as f64 * mean;
    rescale_with_encoded(table.lambda, table.lambda + phantom)
}

/// Same as [`boundary_rescale`] with explicit phantom-bin weights.
pub fn boundary_rescale_weights(table: &TermTable, phantom: &[f64]) -> Result<Rescale> {
    if table.count == 0 || !(table.lambda > 0.0) {
        return Err(Error::InvalidArgument("empty Hamiltonian has no block encoding".into()));
    }
    let encoded = l1_norm(table.terms.iter().map(|t| t.weight).chain(phantom.iter().copied()));
    rescale_with_encoded(table.lambda, encoded)
}

/// Encodes `spec` with the PREPARE of its fully periodic closure.
pub fn boundary_rescale_periodic(spec: &LatticeSpec) -> Result<Rescale> {
    let table = enumerate_terms(spec)?;
    let closed = enumerate_terms(&spec.periodic_closure())?;
    if table.count == 0 {
        return Err(Error::InvalidArgument("empty Hamiltonian has no block encoding".into()));
    }
    rescale_with_encoded(table.lambda, closed.lambda)
}

fn rescale_with_encoded(valid: f64, encoded: f64) -> Result<Rescale> {
    let beta1_sq = valid / encoded;
    if !(beta1_sq > 0.0 && beta1_sq <= 1.0 + 1e-12) {
        return Err(Error::Invariant(format!("beta1^2 = {beta1_sq} outside (0, 1]")));
    }
    Ok(Rescale { beta1_sq: beta1_sq.min(1.0), lambda_eff: valid / beta1_sq.min(1.0) })
}

//! Published reference values shipped with the crate.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::budget::AlgorithmKind;
use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeSpec};

const SELECT_BEATS: &str = include_str!("../data/select_beats.toml");
const RESOURCE_SUMMARY: &str = include_str!("../data/resource_summary.toml");
const ROUGH_RESOURCES: &str = include_str!("../data/rough_resources.toml");
const TCOUNT_COMPARISON: &str = include_str!("../data/tcount_comparison.toml");
const CLASSICAL_RUNTIMES: &str = include_str!("../data/classical_runtimes.toml");

/// Factory counts of the three beat columns.
pub const BEAT_FACTORIES: [usize; 3] = [1, 4, 16];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectBeatsRow {
    pub model: String,
    pub extents: Vec<usize>,
    pub threads: usize,
    pub beats: [u64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub model: String,
    pub extents: Vec<usize>,
    pub factories: usize,
    pub threads: usize,
    pub distance: u32,
    pub physical_qubits: f64,
    pub repetitions: f64,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoughRow {
    pub model: String,
    pub extents: Vec<usize>,
    pub algorithm: AlgorithmKind,
    pub logical_qubits: u64,
    pub distance: u32,
    pub physical_qubits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TCountRow {
    pub model: String,
    pub extents: Vec<usize>,
    pub algorithm: AlgorithmKind,
    pub t_count: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRow {
    pub source: String,
    pub model: String,
    #[serde(default)]
    pub j2: Option<f64>,
    #[serde(default)]
    pub u: Option<f64>,
    pub extents: Vec<usize>,
    pub max_bond_dim: u32,
    pub lowest_energy: f64,
    pub e0: f64,
    pub seconds: f64,
}

#[derive(Deserialize)]
struct Rows<T> {
    row: Vec<T>,
}

fn parse<T: DeserializeOwned>(src: &str, name: &str) -> Result<Vec<T>> {
    toml::from_str::<Rows<T>>(src).map(|r| r.row).map_err(|e| Error::Data(format!("{name}: {e}")))
}

pub fn select_beats() -> Result<Vec<SelectBeatsRow>> {
    parse(SELECT_BEATS, "select_beats")
}

pub fn resource_summary() -> Result<Vec<ResourceRow>> {
    parse(RESOURCE_SUMMARY, "resource_summary")
}

pub fn rough_resources() -> Result<Vec<RoughRow>> {
    parse(ROUGH_RESOURCES, "rough_resources")
}

pub fn tcount_comparison() -> Result<Vec<TCountRow>> {
    parse(TCOUNT_COMPARISON, "tcount_comparison")
}

pub fn classical_runtimes() -> Result<Vec<ClassicalRow>> {
    parse(CLASSICAL_RUNTIMES, "classical_runtimes")
}

/// Lattice used for a reference row: J2 = 0.5 for the J1-J2 model, U = 4 for
/// Hubbard, an open spin-1 chain otherwise.
pub fn reference_lattice(model: &str, extents: &[usize]) -> Result<LatticeSpec> {
    match (model, extents) {
        ("heisenberg_j1j2", &[lx, ly]) => Ok(LatticeSpec::heisenberg(lx, ly, 0.5)),
        ("fermi_hubbard", &[lx, ly]) => Ok(LatticeSpec::hubbard(lx, ly, 4.0)),
        ("heisenberg_chain", &[n]) => Ok(LatticeSpec::spin_chain(n, 1.0, Boundary::Open)),
        _ => Err(Error::Data(format!("no reference lattice for {model} {extents:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_tables_parse() {
        assert_eq!(select_beats().unwrap().len(), 30);
        assert_eq!(resource_summary().unwrap().len(), 30);
        assert_eq!(rough_resources().unwrap().len(), 80);
        assert_eq!(tcount_comparison().unwrap().len(), 40);
        assert_eq!(classical_runtimes().unwrap().len(), 23);
    }

    #[test]
    fn rows_map_to_lattices() {
        for r in select_beats().unwrap() {
            reference_lattice(&r.model, &r.extents).unwrap();
        }
    }
}

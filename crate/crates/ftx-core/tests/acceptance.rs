//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ftx-core --test acceptance -- --nocapture`.
//! Criteria listed in `KNOWN_RED` are reported as failing on purpose; the test
//! asserts that exactly those are red so a regression in either direction
//! is caught.

use std::sync::OnceLock;
use std::time::Instant;

use ftx_core::algorithms::{estimate, estimate_all, select_cost, AlgorithmOptions, OracleFlavor};
use ftx_core::budget::{readout_digits, AlgorithmKind};
use ftx_core::crossover::{find_crosspoint, fit_size_scaling, FitKind, FitResult, ScalingForm};
use ftx_core::data::{self, BEAT_FACTORIES};
use ftx_core::exec;
use ftx_core::lattice::{enumerate_terms, TermTable};
use ftx_core::planner::{
    physical_qubits_detailed, physical_qubits_rough, runtime_estimate, select_qubits_involved, solve_code_distance,
    solve_code_distance_rough, sweep_grid, BeatSource, HardwareSpec, OpCounting, SweepGrid,
};
use ftx_core::sim::{build_floor_plan, simulate, synthesize_select, SimOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPSILON: f64 = 0.01;
const R_SIG_FIGS: i32 = 3;
const NPH_DETAILED_TOL: f64 = 0.05;
const NPH_ROUGH_TOL: f64 = 0.10;
const ROUGH_MIN_TRIPLES: usize = 6;
const RUNTIME_TABLE_TOL: f64 = 0.02;
const RUNTIME_E2E_TOL: f64 = 0.35;
const BEATS_TOL: f64 = 0.30;
const SUPPLY_RATIO: (f64, f64) = (1.0, 2.0);
const PARALLEL_SPEEDUP_MAX: f64 = 0.25;
const ORDER_OF_MAGNITUDE: f64 = 10.0;
const HEIS_SELECT_RATIO: (f64, f64) = (0.4, 0.6);
const ROUNDTRIP_TOL: f64 = 1e-9;
const RANDOM_CASES: usize = 1000;

/// Criteria expected to be red, with the reason kept in the failure detail.
const KNOWN_RED: &[u32] = &[2, 4, 5, 6];

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), notes: Vec::new() }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn round_sig(x: f64, sig: i32) -> f64 {
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(sig - 1 - mag);
    (x * scale).round() / scale
}

fn label(model: &str, extents: &[usize]) -> String {
    let dims: Vec<String> = extents.iter().map(|e| e.to_string()).collect();
    format!("{model} {}", dims.join("x"))
}

fn table_for(model: &str, extents: &[usize]) -> TermTable {
    enumerate_terms(&data::reference_lattice(model, extents).unwrap()).unwrap()
}

fn is_2d(model: &str) -> bool {
    model != "heisenberg_chain"
}

fn own_repetitions(table: &TermTable) -> u64 {
    estimate(table, EPSILON, AlgorithmKind::QubitizationSequential, &AlgorithmOptions::default()).unwrap().repetitions
}

fn involved(table: &TermTable, threads: usize, r: u64) -> u64 {
    select_qubits_involved(table.n_system as u64, table.log_terms(), threads as u64, readout_digits(r))
}

fn published_beats(model: &str, extents: &[usize], factories: usize, threads: usize) -> u64 {
    let col = BEAT_FACTORIES.iter().position(|&f| f == factories).unwrap();
    data::select_beats()
        .unwrap()
        .into_iter()
        .find(|r| r.model == model && r.extents == extents && r.threads == threads)
        .map(|r| r.beats[col])
        .unwrap()
}

struct SimCell {
    model: String,
    extents: Vec<usize>,
    threads: usize,
    factories: usize,
    published: u64,
    beats: u64,
    magic: u64,
}

fn simulation_matrix() -> &'static [SimCell] {
    static CELLS: OnceLock<Vec<SimCell>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let jobs: Vec<(data::SelectBeatsRow, usize)> =
            data::select_beats().unwrap().into_iter().flat_map(|row| (0..3).map(move |c| (row.clone(), c))).collect();
        exec::map(&jobs, |(row, c)| {
            let table = table_for(&row.model, &row.extents);
            let hw = HardwareSpec::with_layout(BEAT_FACTORIES[*c], row.threads);
            let plan = build_floor_plan(&table, &hw).unwrap();
            let prog = synthesize_select(&table, row.threads).unwrap();
            let res = simulate(&plan, &prog, &hw, SimOptions::for_hardware(&hw, 23)).unwrap();
            SimCell {
                model: row.model.clone(),
                extents: row.extents.clone(),
                threads: row.threads,
                factories: BEAT_FACTORIES[*c],
                published: row.beats[*c],
                beats: res.total_beats,
                magic: res.magic_consumed,
            }
        })
    })
}

fn simulated_beats(model: &str, extents: &[usize], factories: usize, threads: usize) -> u64 {
    simulation_matrix()
        .iter()
        .find(|c| c.model == model && c.extents == extents && c.factories == factories && c.threads == threads)
        .map(|c| c.beats)
        .unwrap()
}

fn criterion_1() -> Outcome {
    let published = data::resource_summary().unwrap();
    let cases: [(&str, usize); 6] = [
        ("heisenberg_j1j2", 4),
        ("heisenberg_j1j2", 6),
        ("heisenberg_j1j2", 10),
        ("fermi_hubbard", 4),
        ("fermi_hubbard", 6),
        ("fermi_hubbard", 10),
    ];
    let mut out = Outcome::new(true, "");
    let mut ok = 0;
    for (model, n) in cases {
        let ext = [n, n];
        let r = own_repetitions(&table_for(model, &ext));
        let want = published.iter().find(|p| p.model == model && p.extents == ext).unwrap().repetitions;
        let hit = round_sig(r as f64, R_SIG_FIGS) == round_sig(want, R_SIG_FIGS);
        ok += hit as usize;
        out.notes.push(format!("{}: r = {r}, published {want:.3e} {}", label(model, &ext), mark(hit)));
    }
    out.pass = ok == cases.len();
    out.summary = format!("repetition counts {ok}/{} match to {R_SIG_FIGS} significant figures", cases.len());
    out
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new(true, "");
    let (mut ok, mut total) = (0, 0);
    for row in data::resource_summary().unwrap() {
        let table = table_for(&row.model, &row.extents);
        let r = own_repetitions(&table);
        let beats = published_beats(&row.model, &row.extents, row.factories, row.threads);
        let hw = HardwareSpec::with_layout(row.factories, row.threads);
        let n_log = involved(&table, row.threads, r);
        let d = solve_code_distance(n_log, beats, r, &hw, OpCounting::CodeCycles).unwrap().d;
        let hit = d == row.distance;
        let scope = if is_2d(&row.model) { "" } else { " (chain, informational)" };
        if is_2d(&row.model) {
            total += 1;
            ok += hit as usize;
        }
        out.notes.push(format!(
            "{} (n_F, b) = ({}, {}): n_log = {n_log}, d = {d}, published {} {}{scope}",
            label(&row.model, &row.extents),
            row.factories,
            row.threads,
            row.distance,
            mark(hit)
        ));
    }
    out.pass = ok == total;
    out.summary = format!("code distances {ok}/{total} lattice rows exact from published beats");
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new(true, "");
    let (mut ok_det, mut total_det) = (0, 0);
    for row in data::resource_summary().unwrap().into_iter().filter(|r| is_2d(&r.model)) {
        let table = table_for(&row.model, &row.extents);
        let hw = HardwareSpec::with_layout(row.factories, row.threads);
        let n = physical_qubits_detailed(table.n_system as u64, table.log_terms(), &hw, row.distance) as f64;
        let hit = rel(n, row.physical_qubits) <= NPH_DETAILED_TOL;
        total_det += 1;
        ok_det += hit as usize;
        if !hit {
            out.notes.push(format!(
                "{} ({}, {}): N_ph = {n:.3e}, published {:.3e}",
                label(&row.model, &row.extents),
                row.factories,
                row.threads,
                row.physical_qubits
            ));
        }
    }
    let tcounts = data::tcount_comparison().unwrap();
    let hw = HardwareSpec::default();
    let opts = AlgorithmOptions::default();
    let (mut ok_rough, mut total_rough) = (0, 0);
    for row in data::rough_resources().unwrap() {
        let Some(t) =
            tcounts.iter().find(|t| t.model == row.model && t.extents == row.extents && t.algorithm == row.algorithm)
        else {
            continue;
        };
        let table = table_for(&row.model, &row.extents);
        let own_n_log = estimate(&table, EPSILON, row.algorithm, &opts).unwrap().n_logical;
        let plan = solve_code_distance_rough(row.logical_qubits, t.t_count as u64, &hw).unwrap();
        let nph = physical_qubits_rough(row.logical_qubits, plan.d) as f64;
        let hit = plan.d == row.distance && rel(nph, row.physical_qubits) <= NPH_ROUGH_TOL;
        total_rough += 1;
        ok_rough += hit as usize;
        out.notes.push(format!(
            "{} {}: d = {}, N_ph = {nph:.3e} vs ({}, {}, {:.3e}) {}; own register count {own_n_log}",
            label(&row.model, &row.extents),
            row.algorithm.label(),
            plan.d,
            row.logical_qubits,
            row.distance,
            row.physical_qubits,
            mark(hit)
        ));
    }
    out.pass = ok_det == total_det && ok_rough >= ROUGH_MIN_TRIPLES && ok_rough == total_rough;
    out.summary = format!(
        "detailed N_ph {ok_det}/{total_det} within {:.0}%; rough triples {ok_rough}/{total_rough} (d exact, N_ph within {:.0}%)",
        NPH_DETAILED_TOL * 100.0,
        NPH_ROUGH_TOL * 100.0
    );
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new(true, "");
    let rows = data::resource_summary().unwrap();
    let mut ok_tab = 0;
    for row in &rows {
        let beats = published_beats(&row.model, &row.extents, row.factories, row.threads);
        let hw = HardwareSpec::with_layout(row.factories, row.threads);
        let t = runtime_estimate(row.distance, beats, row.repetitions as u64, &hw);
        let hit = rel(t, row.runtime_s) <= RUNTIME_TABLE_TOL;
        ok_tab += hit as usize;
        if !hit {
            out.notes.push(format!("{}: runtime {t:.3e} vs {:.3e}", label(&row.model, &row.extents), row.runtime_s));
        }
    }
    let (mut ok_e2e, mut total_e2e) = (0, 0);
    for row in rows.iter().filter(|r| is_2d(&r.model)) {
        let table = table_for(&row.model, &row.extents);
        let r = own_repetitions(&table);
        let beats = simulated_beats(&row.model, &row.extents, row.factories, row.threads);
        let hw = HardwareSpec::with_layout(row.factories, row.threads);
        let d = solve_code_distance(involved(&table, row.threads, r), beats, r, &hw, OpCounting::CodeCycles).unwrap().d;
        let t = runtime_estimate(d, beats, r, &hw);
        let err = rel(t, row.runtime_s);
        let hit = err <= RUNTIME_E2E_TOL;
        total_e2e += 1;
        ok_e2e += hit as usize;
        out.notes.push(format!(
            "{} ({}, {}): end-to-end {t:.3e} s vs {:.3e} s ({:+.1}%) {}",
            label(&row.model, &row.extents),
            row.factories,
            row.threads,
            row.runtime_s,
            (t / row.runtime_s - 1.0) * 100.0,
            mark(hit)
        ));
    }
    out.pass = ok_tab == rows.len() && ok_e2e == total_e2e;
    out.summary = format!(
        "runtimes from published inputs {ok_tab}/{} within {:.0}%; end-to-end {ok_e2e}/{total_e2e} within {:.0}%",
        rows.len(),
        RUNTIME_TABLE_TOL * 100.0,
        RUNTIME_E2E_TOL * 100.0
    );
    out
}

fn criterion_5() -> Outcome {
    let cells = simulation_matrix();
    let mut out = Outcome::new(true, "");
    let mut ok_cells = 0;
    let mut ok_supply = true;
    for c in cells {
        let err = c.beats as f64 / c.published as f64 - 1.0;
        let hit = err.abs() <= BEATS_TOL;
        ok_cells += hit as usize;
        if !hit {
            out.notes.push(format!(
                "{} b={} n_F={}: {} beats vs {} ({:+.1}%)",
                label(&c.model, &c.extents),
                c.threads,
                c.factories,
                c.beats,
                c.published,
                err * 100.0
            ));
        }
        if c.factories == 1 {
            let ratio = c.beats as f64 / (15.0 * c.magic as f64);
            if !(SUPPLY_RATIO.0..=SUPPLY_RATIO.1).contains(&ratio) {
                ok_supply = false;
                out.notes.push(format!("{} b={}: supply ratio {ratio:.3}", label(&c.model, &c.extents), c.threads));
            }
        }
    }
    let mut monotone = true;
    for w in cells.chunks(3) {
        if !(w[0].beats >= w[1].beats && w[1].beats >= w[2].beats) {
            monotone = false;
            out.notes.push(format!("{} b={}: not monotone in n_F", label(&w[0].model, &w[0].extents), w[0].threads));
        }
    }
    let serial = simulated_beats("heisenberg_j1j2", &[10, 10], 1, 1) as f64;
    let parallel = simulated_beats("heisenberg_j1j2", &[10, 10], 16, 16) as f64;
    let speedup_ok = parallel < PARALLEL_SPEEDUP_MAX * serial;
    out.notes.push(format!("10x10 Heisenberg (16,16)/(1,1) = {:.3}", parallel / serial));
    out.pass = ok_cells == cells.len() && ok_supply && monotone && speedup_ok;
    out.summary = format!(
        "scheduler {ok_cells}/{} cells within {:.0}%; supply ratio {}; monotone {}; parallel ratio {}",
        cells.len(),
        BEATS_TOL * 100.0,
        mark(ok_supply),
        mark(monotone),
        mark(speedup_ok)
    );
    out
}

fn criterion_6() -> Outcome {
    let published = data::tcount_comparison().unwrap();
    let opts = AlgorithmOptions::default();
    let mut out = Outcome::new(true, "");
    let grid: Vec<(String, usize)> = ["heisenberg_j1j2", "fermi_hubbard"]
        .iter()
        .flat_map(|m| [6usize, 10, 20, 100].map(|n| (m.to_string(), n)))
        .collect();
    let reports = exec::map(&grid, |(m, n)| {
        let table = table_for(m, &[*n, *n]);
        (estimate_all(&table, EPSILON, &opts).unwrap(), table)
    });
    let (mut min_ok, mut mag_ok, mut mag_total) = (0, 0, 0);
    let mut ratio_ok = true;
    for ((m, n), (reps, table)) in grid.iter().zip(&reports) {
        let ext = [*n, *n];
        let qub = reps.iter().filter(|r| r.algorithm.is_qubitization()).map(|r| r.t_count_total).min().unwrap();
        let others = reps.iter().filter(|r| !r.algorithm.is_qubitization()).map(|r| r.t_count_total).min().unwrap();
        min_ok += (qub < others) as usize;
        for r in reps {
            let want = published
                .iter()
                .find(|p| p.model == *m && p.extents == ext && p.algorithm == r.algorithm)
                .unwrap()
                .t_count;
            let ratio = r.t_count_total as f64 / want;
            let hit = (1.0 / ORDER_OF_MAGNITUDE..=ORDER_OF_MAGNITUDE).contains(&ratio);
            mag_total += 1;
            mag_ok += hit as usize;
            if !hit {
                out.notes.push(format!(
                    "{} {}: {:.3e} vs {want:.3e} (x{ratio:.3})",
                    label(m, &ext),
                    r.algorithm.label(),
                    r.t_count_total as f64
                ));
            }
        }
        let seq = select_cost(table, OracleFlavor::Sequential).unwrap().t_count as f64;
        let prod = select_cost(table, OracleFlavor::Product).unwrap().t_count as f64;
        let ratio = prod / seq;
        let hit = if m == "fermi_hubbard" {
            (ratio - 10.0 / 18.0).abs() < 1e-12
        } else {
            (HEIS_SELECT_RATIO.0..=HEIS_SELECT_RATIO.1).contains(&ratio)
        };
        ratio_ok &= hit;
        if !hit {
            out.notes.push(format!("{}: product/sequential SELECT = {ratio:.4}", label(m, &ext)));
        }
    }
    out.pass = min_ok == grid.len() && mag_ok == mag_total && ratio_ok;
    out.summary = format!(
        "qubitization cheapest in {min_ok}/{} cells; {mag_ok}/{mag_total} within one order of magnitude; SELECT ratios {}",
        grid.len(),
        mark(ratio_ok)
    );
    out
}

fn classical_fit(model: &str, filter: impl Fn(&data::ClassicalRow) -> bool) -> FitResult {
    let rows: Vec<_> = data::classical_runtimes()
        .unwrap()
        .into_iter()
        .filter(|r| r.model == model && r.extents[0] == r.extents[1] && filter(r))
        .collect();
    let sizes: Vec<f64> = rows.iter().map(|r| r.extents[0] as f64).collect();
    let times: Vec<f64> = rows.iter().map(|r| r.seconds).collect();
    fit_size_scaling(&sizes, &times, ScalingForm::Exponential).unwrap()
}

fn quantum_times(model: &str, factories: usize) -> Vec<(f64, f64)> {
    data::resource_summary()
        .unwrap()
        .into_iter()
        .filter(|r| r.model == model && r.factories == factories)
        .map(|r| (r.extents[0] as f64, r.runtime_s))
        .collect()
}

fn criterion_7() -> Outcome {
    let heis = classical_fit("heisenberg_j1j2", |r| r.j2 == Some(0.5));
    let h = find_crosspoint(&heis, &quantum_times("heisenberg_j1j2", 16), &[]).unwrap();
    let hub = classical_fit("fermi_hubbard", |r| r.u == Some(4.0));
    let f = find_crosspoint(&hub, &quantum_times("fermi_hubbard", 1), &[]).unwrap();
    let heis_ok = h.crosspoint == Some(10.0);
    let hub_ok = f.crosspoint.is_some_and(|s| s <= 6.0);
    let mut out = Outcome::new(
        heis_ok && hub_ok,
        format!("crosspoints: Heisenberg {:?} (want 10), Hubbard {:?} (want <= 6)", h.crosspoint, f.crosspoint),
    );
    for s in h.samples.iter().chain(&f.samples) {
        out.notes.push(format!("L = {}: classical {:.3e} s, quantum {:?}", s.size, s.classical_s, s.quantum_s));
    }
    out
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let consts = ftx_core::gates::SynthesisConstants::default();
    let mut gate_ok = 0;
    for _ in 0..RANDOM_CASES {
        let m = rng.random_range(1..40u64);
        let n = rng.random_range(2..200u64);
        let k = rng.random_range(0..n - 1);
        let bits = rng.random_range(1..50u32);
        let delta = 2f64.powi(-(bits as i32)) * 1.5;
        let l = rng.random_range(1..100_000u64);
        let lg = (l as f64).log2().ceil();
        let b = (-(delta.log2())).ceil();
        let g = &ftx_core::gates::SynthesisConstants { gamma: consts.gamma, xi: consts.xi };
        let checks = [
            ftx_core::gates::tcount_adder(n).unwrap() == 4 * n - 4,
            ftx_core::gates::tcount_controlled_adder(m, n).unwrap() == 4 * (m - 1) + 8 * (n - 1),
            ftx_core::gates::tcount_mcx(m) == if m == 1 { 0 } else { 4 * (m - 1) },
            ftx_core::gates::tcount_cswap(m) == 4 * m,
            ftx_core::gates::tcount_rotation(delta, g).unwrap() == (g.gamma * b + g.xi).ceil() as u64,
            ftx_core::gates::tcount_controlled_rotation(m, delta, g).unwrap()
                == 8 * (m - 1) + (2.0 * g.gamma * b + 2.0 * g.xi).ceil() as u64,
            ftx_core::gates::tcount_controlled_uniform(m, k, l, delta, g).unwrap()
                == (4.0 * (m - 1) as f64 + 2.0 * k as f64 + 10.0 * lg + 2.0 * g.gamma * b + 2.0 * g.xi - 4.0).ceil()
                    as u64,
        ];
        gate_ok += checks.iter().all(|&c| c) as usize;
    }

    let mut fit_ok = 0;
    for _ in 0..RANDOM_CASES {
        let a = rng.random_range(0.01..100.0f64);
        let k = rng.random_range(0.1..3.0f64);
        let sizes: Vec<f64> = (0..5).map(|i| 4.0 + 2.0 * i as f64).collect();
        let exp: Vec<f64> = sizes.iter().map(|&s| a * (k * s).exp()).collect();
        let pow: Vec<f64> = sizes.iter().map(|&s| a * s.powf(k)).collect();
        let fe = fit_size_scaling(&sizes, &exp, ScalingForm::Exponential).unwrap();
        let fp = fit_size_scaling(&sizes, &pow, ScalingForm::PowerLaw).unwrap();
        let good = |f: &FitResult, kind| {
            f.kind == kind && rel(f.params.0, a) <= ROUNDTRIP_TOL && rel(f.params.1, k) <= ROUNDTRIP_TOL
        };
        fit_ok += (good(&fe, FitKind::Exponential) && good(&fp, FitKind::PowerLaw)) as usize;
    }

    let table = table_for("fermi_hubbard", &[4, 4]);
    let hw = HardwareSpec::with_layout(4, 4);
    let plan = build_floor_plan(&table, &hw).unwrap();
    let prog = synthesize_select(&table, 4).unwrap();
    let opts = SimOptions { reaction_beats: 1, trace: true };
    let deterministic = simulate(&plan, &prog, &hw, opts).unwrap() == simulate(&plan, &prog, &hw, opts).unwrap();

    let heis = table_for("heisenberg_j1j2", &[10, 10]);
    let grid = SweepGrid {
        epsilons: (0..10).map(|i| 0.1 * 0.6f64.powi(i)).collect(),
        ps: (0..10).map(|i| 1e-4 * 1.5f64.powi(i)).collect(),
    };
    let cells = sweep_grid(
        &heis,
        AlgorithmKind::QubitizationSequential,
        &grid,
        &HardwareSpec::default(),
        BeatSource::Fixed { beats: 66958 },
        &AlgorithmOptions::default(),
    )
    .unwrap();
    let d = |i: usize, j: usize| cells[i * grid.ps.len() + j].d.unwrap_or(u32::MAX);
    let mut heat_ok = true;
    for i in 0..grid.epsilons.len() {
        for j in 0..grid.ps.len() {
            if j + 1 < grid.ps.len() && d(i, j) > d(i, j + 1) {
                heat_ok = false;
            }
            if i + 1 < grid.epsilons.len() && d(i, j) > d(i + 1, j) {
                heat_ok = false;
            }
        }
    }

    Outcome::new(
        gate_ok == RANDOM_CASES && fit_ok == RANDOM_CASES && deterministic && heat_ok,
        format!(
            "gate formulas {gate_ok}/{RANDOM_CASES}; fit round-trips {fit_ok}/{RANDOM_CASES}; simulator deterministic {}; heatmap monotone {}",
            mark(deterministic),
            mark(heat_ok)
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut red = Vec::new();
    for (id, f) in criteria {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict} {} [{:.2} s]", o.summary, start.elapsed().as_secs_f64());
        if !o.pass || std::env::var_os("FTX_ACCEPTANCE_VERBOSE").is_some() {
            for n in &o.notes {
                println!("    {n}");
            }
        }
        if !o.pass {
            red.push(id);
        }
    }
    assert_eq!(red, KNOWN_RED, "set of failing criteria changed");
}

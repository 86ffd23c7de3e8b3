//! The four subcommands. Each returns artifacts; writing them is the caller's job.

use std::fs::File;

use ftx_core::algorithms::{estimate, CostReport};
use ftx_core::budget::AlgorithmKind;
use ftx_core::crossover::{
    find_crosspoint, fit_size_scaling, fit_time_to_accuracy, read_trace_csv, FitResult, TimeFitOptions,
    HARDWARE_SPEEDUP, NONE_IN_RANGE,
};
use ftx_core::lattice::{enumerate_terms, LatticeSpec, TermTable};
use ftx_core::planner::{
    solve_code_distance_rough, sweep_grid, BeatSource, CodePlan, HardwareSpec, ReactionModel, SweepCell, SweepGrid,
};
use ftx_core::sim::{build_floor_plan, simulate, synthesize_select, Op, SimOptions, SimResult};
use ftx_core::{data, exec, Error};
use serde::{Deserialize, Serialize};

use crate::config::{BeatsConfig, ClassicalSource, Format, Loaded, ModelConfig, QuantumSource, RunConfig};
use crate::error::{CliError, Result};
use crate::report::{Artifact, Cell, Sheet};

pub struct Output {
    pub artifacts: Vec<Artifact>,
    /// Set when the hardware cannot reach the target; files are still written.
    pub infeasible: Option<String>,
    pub default_formats: &'static [Format],
}

fn table_for(m: &ModelConfig) -> Result<TermTable> {
    Ok(enumerate_terms(&m.spec())?)
}

fn grid_at(epsilon: f64, p: f64) -> SweepGrid {
    SweepGrid { epsilons: vec![epsilon], ps: vec![p] }
}

/// Code distance used to convert the reaction time into beats.
fn reaction_distance(table: &TermTable, cfg: &RunConfig, hw: &HardwareSpec) -> Result<u32> {
    if hw.reaction == ReactionModel::OneBeat || table.count == 0 {
        return Ok(1);
    }
    let cells = sweep_grid(
        table,
        AlgorithmKind::QubitizationSequential,
        &grid_at(cfg.epsilon, hw.p_phys),
        hw,
        BeatSource::SupplyBound,
        &cfg.options,
    )?;
    Ok(cells[0].d.unwrap_or(hw.d_max))
}

fn run_simulation(table: &TermTable, hw: &HardwareSpec, d: u32, trace: bool) -> Result<(SimResult, Vec<Op>)> {
    let plan = build_floor_plan(table, hw)?;
    let prog = synthesize_select(table, hw.threads)?;
    let opts = SimOptions { trace, ..SimOptions::for_hardware(hw, d) };
    Ok((simulate(&plan, &prog, hw, opts)?, prog.ops))
}

fn beat_source(beats: BeatsConfig, table: &TermTable, cfg: &RunConfig) -> Result<BeatSource> {
    Ok(match beats {
        BeatsConfig::ClosedForm => BeatSource::SupplyBound,
        BeatsConfig::Fixed { beats } => BeatSource::Fixed { beats },
        BeatsConfig::Simulate => {
            let d = reaction_distance(table, cfg, &cfg.hardware)?;
            let (res, _) = run_simulation(table, &cfg.hardware, d, false)?;
            BeatSource::Fixed { beats: res.total_beats.max(1) }
        }
    })
}

#[derive(Serialize)]
struct AlgorithmResult {
    algorithm: AlgorithmKind,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    t_count_total: u64,
    cost: Option<CostReport>,
    rough: Option<CodePlan>,
    beats_per_select: Option<u64>,
    detailed: Option<SweepCell>,
}

#[derive(Serialize)]
struct ModelEstimate {
    name: String,
    lattice: LatticeSpec,
    n_terms: usize,
    n_system: usize,
    lambda: f64,
    results: Vec<AlgorithmResult>,
}

fn estimate_one(
    cfg: &RunConfig,
    table: &TermTable,
    alg: AlgorithmKind,
    source: Option<BeatSource>,
) -> Result<AlgorithmResult> {
    let mut out = AlgorithmResult {
        algorithm: alg,
        status: "ok",
        note: None,
        t_count_total: 0,
        cost: None,
        rough: None,
        beats_per_select: None,
        detailed: None,
    };
    if table.count == 0 {
        out.status = "empty";
        return Ok(out);
    }
    let hw = &cfg.hardware;
    let cost = estimate(table, cfg.epsilon, alg, &cfg.options)?;
    out.t_count_total = cost.t_count_total;
    match solve_code_distance_rough(cost.n_logical, cost.t_count_total, hw) {
        Ok(plan) => out.rough = Some(plan),
        Err(Error::Infeasible(msg)) => {
            out.status = "infeasible";
            out.note = Some(msg);
        }
        Err(e) => return Err(e.into()),
    }
    if let (Some(src), true) = (source, alg.is_qubitization()) {
        let cell = sweep_grid(table, alg, &grid_at(cfg.epsilon, hw.p_phys), hw, src, &cfg.options)?[0];
        out.beats_per_select = Some(match src {
            BeatSource::Fixed { beats } => beats,
            BeatSource::SupplyBound => (hw.distill_beats * cost.t_count_per_select).div_ceil(hw.n_factories as u64),
        });
        if !cell.feasible {
            out.status = "infeasible";
            out.note.get_or_insert_with(|| "no code distance satisfies the detailed plan".into());
        }
        out.detailed = Some(cell);
    }
    out.cost = Some(cost);
    Ok(out)
}

pub fn estimate_cmd(loaded: &Loaded) -> Result<Output> {
    let cfg = &loaded.config;
    cfg.require_models()?;
    let mut artifacts = Vec::new();
    let mut infeasible = None;
    let mut matrix = Sheet::new(&["algorithm"]);
    matrix.headers.extend(cfg.models.iter().map(ModelConfig::label));
    let mut columns: Vec<Vec<u64>> = Vec::new();

    for m in &cfg.models {
        let table = table_for(m)?;
        let needs_beats = cfg.estimate.algorithms.iter().any(|a| a.is_qubitization()) && table.count > 0;
        let source = if needs_beats { Some(beat_source(cfg.estimate.beats, &table, cfg)?) } else { None };
        let results = cfg
            .estimate
            .algorithms
            .iter()
            .map(|&a| estimate_one(cfg, &table, a, source))
            .collect::<Result<Vec<_>>>()?;

        let mut sheet = Sheet::new(&[
            "algorithm",
            "status",
            "t_count_total",
            "t_count_per_select",
            "repetitions",
            "n_logical",
            "rough_d",
            "rough_n_ph",
            "beats_per_select",
            "d",
            "n_ph",
            "runtime_s",
        ]);
        for r in &results {
            if r.status == "infeasible" && infeasible.is_none() {
                infeasible = Some(format!(
                    "{} {}: {}",
                    m.label(),
                    r.algorithm.label(),
                    r.note.as_deref().unwrap_or("infeasible")
                ));
            }
            let c = r.cost.as_ref();
            let det = r.detailed.as_ref();
            sheet.push(vec![
                r.algorithm.label().into(),
                r.status.into(),
                r.t_count_total.into(),
                c.map(|c| c.t_count_per_select).unwrap_or(0).into(),
                c.map(|c| c.repetitions).unwrap_or(0).into(),
                c.map(|c| c.n_logical).unwrap_or(table.n_system as u64).into(),
                r.rough.map(|p| p.d).into(),
                r.rough.map(|p| p.n_ph).into(),
                r.beats_per_select.into(),
                det.and_then(|d| d.d).into(),
                det.and_then(|d| d.n_ph).into(),
                det.and_then(|d| d.runtime_s).into(),
            ]);
        }
        sheet.notes.push(format!("model: {} lambda={} terms={}", m.label(), table.lambda, table.count));
        columns.push(results.iter().map(|r| r.t_count_total).collect());
        let body = ModelEstimate {
            name: m.label(),
            lattice: m.spec(),
            n_terms: table.count,
            n_system: table.n_system,
            lambda: table.lambda,
            results,
        };
        artifacts.push(Artifact::new(format!("estimate_{}", m.label()), body, sheet));
    }

    let mut json_rows = Vec::new();
    for (i, a) in cfg.estimate.algorithms.iter().enumerate() {
        let mut row = vec![Cell::from(a.label())];
        row.extend(columns.iter().map(|c| Cell::from(c[i])));
        matrix.push(row);
        let counts: Vec<(String, u64)> =
            cfg.models.iter().map(ModelConfig::label).zip(columns.iter().map(|c| c[i])).collect();
        json_rows.push(serde_json::json!({ "algorithm": a, "t_count_total": counts }));
    }
    artifacts.push(Artifact::new("estimate_tcount", json_rows, matrix));
    Ok(Output { artifacts, infeasible, default_formats: &[Format::Json, Format::Table] })
}

#[derive(Serialize)]
struct SimCellOut {
    model: String,
    lattice: String,
    threads: usize,
    factories: usize,
    result: SimResult,
}

fn op_kind(op: &Op) -> &'static str {
    match op {
        Op::Prep { .. } => "prep",
        Op::Single { gate: ftx_core::sim::program::Gate::S, .. } => "s",
        Op::Single { .. } => "h",
        Op::Cnot { .. } => "cnot",
        Op::Surgery { magic: true, .. } => "magic",
        Op::Surgery { .. } => "surgery",
        Op::Measure { .. } => "measure",
        Op::ConditionalS { .. } => "conditional_s",
        Op::ConditionalCz { .. } => "conditional_cz",
    }
}

pub fn simulate_cmd(loaded: &Loaded) -> Result<Output> {
    let cfg = &loaded.config;
    cfg.require_models()?;
    let sc = &cfg.simulate;
    let tables = cfg.models.iter().map(table_for).collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (mi, t) in tables.iter().enumerate() {
        for &b in &sc.threads {
            if t.count > 0 && b > t.count {
                return Err(CliError::Config(format!(
                    "{} threads exceed the {} terms of {}",
                    b,
                    t.count,
                    cfg.models[mi].label()
                )));
            }
            for &f in &sc.factories {
                jobs.push((mi, b, f));
            }
        }
    }
    let runs = exec::map(&jobs, |&(mi, b, f)| {
        let hw = HardwareSpec { n_factories: f, threads: b, ..cfg.hardware };
        let d = reaction_distance(&tables[mi], cfg, &hw)?;
        run_simulation(&tables[mi], &hw, d, sc.trace)
    });

    let mut artifacts = Vec::new();
    let mut cells = Vec::new();
    for (&(mi, b, f), run) in jobs.iter().zip(runs) {
        let (mut res, ops) = run?;
        let m = &cfg.models[mi];
        if let Some(trace) = res.trace.take() {
            let mut sheet = Sheet::new(&["beat", "instruction_id", "kind", "status", "end_beat", "cells", "factory"]);
            for e in &trace {
                sheet.push(vec![
                    e.beat.into(),
                    e.id.into(),
                    op_kind(&ops[e.id]).into(),
                    "start".into(),
                    e.end.into(),
                    e.cells.into(),
                    e.factory.into(),
                ]);
            }
            artifacts.push(Artifact::new(format!("simulate_{}_b{b}_nf{f}_trace", m.label()), &trace, sheet));
        }
        cells.push(SimCellOut { model: m.label(), lattice: m.lattice_label(), threads: b, factories: f, result: res });
    }

    let mut headers = vec!["model".to_string(), "lattice".into(), "threads".into()];
    headers.extend(sc.factories.iter().map(|f| format!("beats_nf{f}")));
    let mut sheet = Sheet { headers, ..Default::default() };
    for group in cells.chunks(sc.factories.len()) {
        let mut row =
            vec![Cell::from(group[0].model.as_str()), group[0].lattice.as_str().into(), group[0].threads.into()];
        row.extend(group.iter().map(|c| Cell::from(c.result.total_beats)));
        sheet.push(row);
    }
    artifacts.insert(0, Artifact::new("simulate", &cells, sheet));
    Ok(Output { artifacts, infeasible: None, default_formats: &[Format::Json, Format::Csv] })
}

pub fn sweep_cmd(loaded: &Loaded) -> Result<Output> {
    let cfg = &loaded.config;
    cfg.require_models()?;
    let sw = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("config has no [sweep] section".into()))?;
    let grid = SweepGrid { epsilons: sw.epsilons.clone(), ps: sw.ps.clone() };
    let mut artifacts = Vec::new();
    for m in &cfg.models {
        let table = table_for(m)?;
        let source = beat_source(sw.beats, &table, cfg)?;
        let mut cells = sweep_grid(&table, sw.algorithm, &grid, &cfg.hardware, source, &cfg.options)?;
        cells.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon).then(a.p.total_cmp(&b.p)));
        let mut sheet = Sheet::new(&["epsilon", "p", "d", "n_ph", "runtime_s", "feasible"]);
        for c in &cells {
            sheet.push(vec![
                c.epsilon.into(),
                c.p.into(),
                c.d.into(),
                c.n_ph.into(),
                c.runtime_s.into(),
                c.feasible.into(),
            ]);
        }
        artifacts.push(Artifact::new(format!("sweep_{}", m.label()), &cells, sheet));
    }
    Ok(Output { artifacts, infeasible: None, default_formats: &[Format::Json, Format::Csv] })
}

#[derive(Deserialize)]
struct PointRow {
    size: f64,
    seconds: f64,
}

fn open(loaded: &Loaded, p: &std::path::Path) -> Result<File> {
    let path = loaded.path(p);
    File::open(&path).map_err(|e| CliError::Config(format!("missing classical data file {}: {e}", path.display())))
}

fn classical_points(loaded: &Loaded, model: &str, src: &ClassicalSource) -> Result<Vec<(f64, f64)>> {
    let bad = |e: csv::Error| CliError::Config(format!("bad classical data: {e}"));
    Ok(match src {
        ClassicalSource::Shipped { j2, u } => data::classical_runtimes()?
            .into_iter()
            .filter(|r| r.model == model && r.extents.len() == 2 && r.extents[0] == r.extents[1])
            .filter(|r| j2.is_none_or(|v| r.j2 == Some(v)) && u.is_none_or(|v| r.u == Some(v)))
            .map(|r| (r.extents[0] as f64, r.seconds))
            .collect(),
        ClassicalSource::Points { path } => csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(open(loaded, path)?)
            .deserialize::<PointRow>()
            .map(|r| r.map(|r| (r.size, r.seconds)).map_err(bad))
            .collect::<Result<_>>()?,
        ClassicalSource::Traces { target, traces } => traces
            .iter()
            .map(|t| {
                let trace = read_trace_csv(open(loaded, &t.path)?)?;
                let fit = fit_time_to_accuracy(&trace, t.e0, *target, TimeFitOptions::default())?;
                Ok((t.size, fit.seconds))
            })
            .collect::<Result<_>>()?,
        ClassicalSource::None => Vec::new(),
    })
}

fn quantum_points(model: &str, src: &QuantumSource) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = match src {
        QuantumSource::Shipped { factories } => data::resource_summary()?
            .into_iter()
            .filter(|r| r.model == model && r.factories == *factories)
            .map(|r| (r.extents[0] as f64, r.runtime_s))
            .collect(),
        QuantumSource::Points { points } => points.clone(),
    };
    if pts.is_empty() {
        return Err(CliError::Config(format!("no quantum runtimes for {model}")));
    }
    Ok(pts)
}

#[derive(Serialize)]
struct CurvePoint {
    size: f64,
    classical_s: Option<f64>,
    classical_fast_s: Option<f64>,
    quantum_s: Option<f64>,
}

#[derive(Serialize)]
struct CrossoverOut {
    model: String,
    classical_points: Vec<(f64, f64)>,
    quantum_points: Vec<(f64, f64)>,
    classical_fit: Option<FitResult>,
    crosspoint: Option<f64>,
    verdict: String,
    samples: Vec<CurvePoint>,
}

pub fn crossover_cmd(loaded: &Loaded) -> Result<Output> {
    let cc =
        loaded.config.crossover.as_ref().ok_or_else(|| CliError::Config("config has no [crossover] section".into()))?;
    let classical = classical_points(loaded, &cc.model, &cc.classical)?;
    let quantum = quantum_points(&cc.model, &cc.quantum)?;
    let out = if matches!(cc.classical, ClassicalSource::None) {
        let mut q = quantum.clone();
        q.sort_by(|a, b| a.0.total_cmp(&b.0));
        CrossoverOut {
            model: cc.model.clone(),
            classical_points: classical,
            quantum_points: quantum,
            classical_fit: None,
            crosspoint: None,
            verdict: NONE_IN_RANGE.into(),
            samples: q
                .iter()
                .map(|&(size, t)| CurvePoint { size, classical_s: None, classical_fast_s: None, quantum_s: Some(t) })
                .collect(),
        }
    } else {
        let (sizes, times): (Vec<f64>, Vec<f64>) = classical.iter().copied().unzip();
        let fit = fit_size_scaling(&sizes, &times, cc.form)?;
        let rep = find_crosspoint(&fit, &quantum, &cc.extra_sizes)?;
        CrossoverOut {
            model: cc.model.clone(),
            classical_points: classical,
            quantum_points: quantum,
            classical_fit: Some(fit),
            crosspoint: rep.crosspoint,
            verdict: rep.verdict,
            samples: rep
                .samples
                .iter()
                .map(|s| CurvePoint {
                    size: s.size,
                    classical_s: Some(s.classical_s),
                    classical_fast_s: Some(s.classical_s * HARDWARE_SPEEDUP),
                    quantum_s: s.quantum_s,
                })
                .collect(),
        }
    };
    let mut sheet = Sheet::new(&["size", "classical_s", "classical_fast_s", "quantum_s", "quantum_faster"]);
    for s in &out.samples {
        let faster = match (s.quantum_s, s.classical_s) {
            (Some(q), Some(c)) => Some(q < c),
            _ => None,
        };
        sheet.push(vec![
            s.size.into(),
            s.classical_s.into(),
            s.classical_fast_s.into(),
            s.quantum_s.into(),
            faster.into(),
        ]);
    }
    sheet.notes.push(format!("crosspoint: {}", out.crosspoint.map_or(NONE_IN_RANGE.to_string(), |c| c.to_string())));
    Ok(Output {
        artifacts: vec![Artifact::new(format!("crossover_{}", cc.model), &out, sheet)],
        infeasible: None,
        default_formats: &[Format::Json, Format::Csv],
    })
}

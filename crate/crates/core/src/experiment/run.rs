use std::collections::BTreeMap;
use std::time::Instant;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{Experiment, ExperimentConfig};
use crate::distributions::{
    concentration_rhs, concentration_time_limit, ghz_contrast_report, hamming_stats, isoperimetry_report,
    isoperimetry_time_limit_i, isoperimetry_time_limit_ii, kappa3, layers_report, parse_bitstring, variance_report,
    concentration_report, BoundReport, HammingSet, IsoPart, Premise, Relation,
};
use crate::error::{Error, Result};
use crate::evolution::LocalOperator;
use crate::graphs::{GenerationRecord, VertexSet};
use crate::hamiltonian::build_maxcut_annealer;
use crate::linalg::{pauli_x, pauli_z, CMatrix, ONE};
use crate::locality::{cut_observable, lr_bound_rhs, lr_sweep, sweep_csv};
use crate::maxcut::{
    bipartite_ensemble_report, brute_force_maxcut, flip_commutator_norm, greedy_cut, qa_expected_cut,
    ramanujan_bound_report, ramanujan_run_report, ramanujan_time_limits, AnnealRun, BRUTE_FORCE_LIMIT,
    CUT_CROSS_CHECK,
};
use crate::polymatrix::{
    divided_difference_matrix, gamma2_estimate_with, smoothing_degree, smoothing_floor, Gamma2Context,
    Gamma2Options, ScalarFn,
};

pub const FLIP_SYMMETRY_TOL: f64 = 1e-10;
pub const COMMUTATOR_SAMPLES: usize = 32;
const GAMMA2_SLACK: f64 = 1e-6;

/// Everything an experiment produced. `tables` holds CSV files by name and is
/// not part of the JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: ExperimentConfig,
    pub version: String,
    pub reports: Vec<BoundReport>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, Value>,
    pub timings: BTreeMap<String, f64>,
    pub conventions: BTreeMap<String, String>,
    #[serde(skip)]
    pub tables: BTreeMap<String, String>,
}

impl ReportDocument {
    pub fn failures(&self) -> impl Iterator<Item = &BoundReport> {
        self.reports.iter().filter(|r| r.is_failure())
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn conventions() -> BTreeMap<String, String> {
    [
        ("log", "natural"),
        ("bit_order", "character k of a bitstring and bit k of a basis index are qubit k"),
        ("rounding", "l and m round up (ceil); the value before rounding is kept in each report's records"),
        ("restriction", "restricted evolutions keep the terms supported in the radius-L ball around A"),
        ("integrator", "fourth-order commutator-free Magnus with step doubling to tol"),
        ("schedule", "ramp shape given on [0, 1] is stretched to [0, T]"),
        ("effective_degree", "driver terms sit on loops, so the annealer's degree is delta + 1"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

struct Builder {
    reports: Vec<BoundReport>,
    summary: BTreeMap<String, Value>,
    timings: BTreeMap<String, f64>,
    tables: BTreeMap<String, String>,
    clock: Instant,
}

impl Builder {
    fn new() -> Self {
        Builder {
            reports: Vec::new(),
            summary: BTreeMap::new(),
            timings: BTreeMap::new(),
            tables: BTreeMap::new(),
            clock: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        self.timings.insert(stage.to_string(), self.clock.elapsed().as_secs_f64());
        self.clock = Instant::now();
    }

    fn put(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.summary.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }
}

/// Validates `config` and runs the experiment it names.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ReportDocument> {
    config.validate()?;
    let start = Instant::now();
    let mut b = Builder::new();
    match config.experiment()? {
        Experiment::LrCheck => lr_check(config, &mut b)?,
        Experiment::Concentration => concentration(config, &mut b)?,
        Experiment::Isoperimetry => isoperimetry(config, &mut b)?,
        Experiment::Layers => layers(config, &mut b)?,
        Experiment::MaxcutAnneal => maxcut_anneal(config, &mut b)?,
        Experiment::Ensemble => ensemble(config, &mut b)?,
        Experiment::Gamma2 => gamma2(config, &mut b)?,
        Experiment::Bounds => bounds(config, &mut b)?,
    }
    b.timings.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(ReportDocument {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        reports: b.reports,
        summary: b.summary,
        timings: b.timings,
        conventions: conventions(),
        tables: b.tables,
    })
}

fn anneal(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(AnnealRun, Option<GenerationRecord>)> {
    let (g, record) = cfg.build_graph()?;
    let run = qa_expected_cut(&g, &cfg.schedule()?, cfg.t()?, cfg.tol())?;
    b.put("graph", json!({ "n_vertices": g.n_vertices(), "n_edges": g.n_edges(), "max_degree": g.max_degree(), "generation": record }))?;
    b.put("expected_cut", run.expected_cut)?;
    b.tables.insert("distribution.csv".into(), run.distribution.to_csv());
    b.lap("anneal");
    let asym = run.flip_asymmetry();
    b.reports.push(
        BoundReport::new("flip_symmetry", asym, FLIP_SYMMETRY_TOL, Relation::Le).param("n", g.n_vertices() as f64),
    );
    Ok((run, record))
}

fn premise(cfg: &ExperimentConfig, run: &AnnealRun) -> Result<Premise> {
    let h = run.hamiltonian()?;
    Ok(Premise {
        kappa1: cfg.require("kappa1", &cfg.kappa1)?,
        kappa2: cfg.require("kappa2", &cfg.kappa2)?,
        g: h.coupling_bound(),
        delta: h.max_degree(),
        t: run.t,
    })
}

fn lr_check(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let (g, record) = cfg.build_graph()?;
    let t = cfg.t()?;
    let h = build_maxcut_annealer(&g, &cfg.schedule()?.rescaled(t)?)?;
    let a_list = cfg.a.clone().unwrap_or_else(|| vec![0]);
    let a = VertexSet::new(a_list.iter().copied(), g.n_vertices())?;
    let first = *a.members().first().ok_or_else(|| Error::config("A", "must be non-empty"))?;
    let observable = match cfg.observable_name()? {
        "z" => LocalOperator::new(vec![first], pauli_z())?,
        "x" => LocalOperator::new(vec![first], pauli_x())?,
        _ => {
            if a.len() < 2 {
                return Err(Error::config("A", "the cut observable needs two vertices"));
            }
            LocalOperator::new(a.members()[..2].to_vec(), cut_observable())?
        }
    };
    let ls = cfg.require("L", &cfg.l)?;
    let sweep = lr_sweep(&h, &a, &observable, &ls, t, cfg.tol())?;
    b.lap("sweep");
    for r in &sweep {
        let mut report = BoundReport::new("lieb_robinson", r.lhs, r.rhs, Relation::Le);
        report.params = r.params.clone();
        report.vacuous = r.vacuous;
        report.satisfied = r.satisfied;
        b.reports.push(report.record("L", r.l().to_string()));
    }
    let non_increasing = sweep.windows(2).all(|w| w[1].lhs <= w[0].lhs + 2.0 * cfg.tol());
    b.put("graph", json!({ "n_vertices": g.n_vertices(), "n_edges": g.n_edges(), "generation": record }))?;
    b.put("lhs_non_increasing", non_increasing)?;
    b.tables.insert("lr_sweep.csv".into(), sweep_csv(&sweep));
    Ok(())
}

fn concentration(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let (run, _) = anneal(cfg, b)?;
    let premise = premise(cfg, &run)?;
    let c = cfg.require("c", &cfg.c)?;
    let n = run.graph.n_vertices();
    b.put("stats", hamming_stats(&run.distribution, &run.psi_t)?)?;
    b.reports.push(variance_report(&run.distribution, &run.psi_t, &premise)?);
    b.reports.push(concentration_report(&run.distribution, &run.psi_t, c, &premise)?);
    if cfg.ghz_contrast.unwrap_or(true) {
        b.reports.push(ghz_contrast_report(n, c, premise.kappa1, premise.kappa2)?);
    }
    b.lap("reports");
    Ok(())
}

fn isoperimetry(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let (run, _) = anneal(cfg, b)?;
    let premise = premise(cfg, &run)?;
    let n = run.graph.n_vertices();
    let part = cfg.iso_part()?;
    let n0 = cfg.n0.unwrap_or(n);
    if n0 == 0 || n0 > n {
        return Err(Error::config("n0", format!("must lie in 1..={n}")));
    }
    if part == IsoPart::Ii && n0 != n {
        return Err(Error::config("n0", "part ii measures the full register"));
    }
    let p = run.distribution.marginal(n0)?;
    let f = cfg.hamming_set("F", &cfg.require("F", &cfg.f)?, n0)?;
    let report = isoperimetry_report(&p, &f, cfg.theta.unwrap_or(0.0), &premise, part)?;
    b.reports.push(report);
    if n0 != n {
        b.tables.insert("marginal.csv".into(), p.to_csv());
    }
    b.lap("reports");
    Ok(())
}

fn layers(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let (run, _) = anneal(cfg, b)?;
    let premise = premise(cfg, &run)?;
    let n = run.graph.n_vertices();
    let (f1, f2) = match (&cfg.f1, &cfg.f2) {
        (Some(f1), Some(f2)) => (cfg.hamming_set("F1", f1, n)?, cfg.hamming_set("F2", f2, n)?),
        _ => {
            let (_, witness) = brute_force_maxcut(&run.graph)?;
            let x = parse_bitstring(&witness)?;
            let radius = cfg.radius.unwrap_or(1);
            (
                HammingSet::ball(n, x, radius)?,
                HammingSet::ball(n, x ^ ((1 << n) - 1), radius)?,
            )
        }
    };
    let (report, diag) = layers_report(&run.distribution, &f1, &f2, &premise)?;
    b.reports.push(report);
    if let (Some(mass), Some(bound)) = (diag.pair_mass, diag.pigeonhole_bound) {
        b.reports.push(
            BoundReport::new("layer_pair", mass, bound, Relation::Le).param("d0", diag.d0.unwrap_or(0) as f64),
        );
    }
    b.tables.insert("shells.csv".into(), diag.shells_csv());
    b.put("layers", &diag)?;
    b.lap("reports");
    Ok(())
}

fn maxcut_anneal(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let (run, _) = anneal(cfg, b)?;
    let g = &run.graph;
    let n = g.n_vertices();
    b.reports.push(BoundReport::new(
        "cut_cross_check",
        (run.expected_cut - run.expected_cut_operator).abs(),
        CUT_CROSS_CHECK,
        Relation::Le,
    ));
    if n <= crate::evolution::EvolutionLimits::default().dense_qubits {
        let comm = flip_commutator_norm(&run.hamiltonian()?, COMMUTATOR_SAMPLES)?;
        b.reports.push(
            BoundReport::new("flip_commutator", comm, FLIP_SYMMETRY_TOL, Relation::Le)
                .param("samples", COMMUTATOR_SAMPLES as f64),
        );
    }
    let (greedy, greedy_witness) = greedy_cut(g);
    let n_edges = g.n_edges() - g.loop_count();
    let mut summary = json!({
        "expected_cut_operator": run.expected_cut_operator,
        "random_cut": n_edges as f64 / 2.0,
        "greedy_cut": greedy,
        "greedy_witness": greedy_witness,
    });
    if n <= BRUTE_FORCE_LIMIT {
        let (cut_star, witness) = brute_force_maxcut(g)?;
        b.reports.push(BoundReport::new("cut_below_optimum", run.expected_cut, cut_star as f64, Relation::Le));
        summary["cut_star"] = json!(cut_star);
        summary["witness"] = json!(witness);
        summary["ratio"] = json!(run.expected_cut / cut_star.max(1) as f64);
    }
    if let (Some(alpha), Some(epsilon), Some(kappa1)) = (cfg.alpha, cfg.epsilon, cfg.kappa1) {
        b.reports.push(ramanujan_run_report(&run, alpha, epsilon, kappa1)?);
    }
    b.put("maxcut", summary)?;
    b.tables.insert("state.csv".into(), run.psi_t.to_csv());
    b.lap("reports");
    Ok(())
}

fn ensemble(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let l = cfg.require("L", &cfg.l)?[0];
    let summary = bipartite_ensemble_report(
        cfg.require("degree", &cfg.degree)?,
        cfg.require("n", &cfg.n)?,
        cfg.require("n_samples", &cfg.n_samples)?,
        &cfg.schedule()?,
        cfg.t()?,
        l,
        cfg.tol(),
        cfg.seed()?,
        cfg.full_limit.unwrap_or(crate::evolution::EvolutionLimits::default().state_qubits),
    )?;
    b.lap("ensemble");
    let full: Vec<_> = summary.samples.iter().filter(|s| s.within_bracket.is_some()).collect();
    let violation = full
        .iter()
        .map(|s| (s.lower - s.expected_cut).max(s.expected_cut - s.upper))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut report = BoundReport::new("tree_locality_bracket", violation.max(0.0), 0.0, Relation::Le)
        .param("full_samples", full.len() as f64)
        .param("epsilon", summary.epsilon)
        .param("e_tree", summary.e_tree);
    report.vacuous = full.is_empty();
    b.reports.push(report);
    b.tables.insert("ensemble.csv".into(), summary.to_csv());
    b.put("ensemble", &summary)?;
    Ok(())
}

fn gamma2(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let smoothing = cfg.family()? == "smoothing";
    let delta = cfg.delta.unwrap_or(0.0);
    let dim = cfg.dim.unwrap_or(8);
    let draws = cfg.draws.unwrap_or(20);
    let seed = cfg.seed()?;
    let options = Gamma2Options {
        restarts: cfg.restarts.unwrap_or(2),
        iterations: cfg.iterations.unwrap_or(600),
        seed,
    };
    let eps = cfg.epsilon.unwrap_or(1.0 / 3.0);
    if smoothing && !(eps > 0.0 && eps <= 1.0 / 3.0) {
        return Err(Error::config("epsilon", "the smoothing family needs 0 < epsilon <= 1/3"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = if smoothing { Uniform::new_inclusive(0.0, 1.0) } else { Uniform::new_inclusive(-1.0, 1.0 + delta) };
    let mut csv = String::from("degree,draw,lower,upper,analytic\n");
    for degree in cfg.require("poly_degree", &cfg.poly_degree)? {
        let (f, ctx) = if smoothing {
            (ScalarFn::Smoothing { m: degree, eps }, Gamma2Context::Smoothing { n: degree })
        } else {
            (ScalarFn::Chebyshev { n: degree }, Gamma2Context::Chebyshev { n: degree, delta })
        };
        let analytic = ctx.analytic();
        let (mut worst_upper, mut worst_gap) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for draw in 0..draws {
            let lambda: Vec<f64> = (0..dim).map(|_| range.sample(&mut rng)).collect();
            let d = divided_difference_matrix(f, &lambda)?;
            let est = gamma2_estimate_with(&d.to_complex(), Some(ctx), &options, &[]);
            worst_upper = worst_upper.max(est.upper);
            worst_gap = worst_gap.max(est.lower - est.upper);
            csv.push_str(&format!("{degree},{draw},{},{},{analytic}\n", est.lower, est.upper));
        }
        b.reports.push(
            BoundReport::new("gamma2_upper", worst_upper, analytic + GAMMA2_SLACK, Relation::Le)
                .param("degree", degree as f64)
                .param("delta", delta)
                .param("draws", draws as f64)
                .param("dim", dim as f64)
                .param("analytic", analytic),
        );
        b.reports.push(
            BoundReport::new("gamma2_lower_le_upper", worst_gap, GAMMA2_SLACK, Relation::Le)
                .param("degree", degree as f64),
        );
    }
    let ones = CMatrix::from_element(dim, dim, ONE);
    let j = gamma2_estimate_with(&ones, None, &options, &[]);
    b.reports.push(
        BoundReport::new("gamma2_all_ones", j.upper, 1.0 + GAMMA2_SLACK, Relation::Le).param("lower", j.lower),
    );
    b.tables.insert("gamma2.csv".into(), csv);
    b.lap("gamma2");
    Ok(())
}

fn bounds(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let mut values: BTreeMap<String, f64> = BTreeMap::new();
    let g = cfg.g.unwrap_or(1.0);
    if let (Some(ls), Some(t), Some(delta)) = (&cfg.l, cfg.t, cfg.degree) {
        for &l in ls {
            let rhs = lr_bound_rhs(cfg.card_a.unwrap_or(1), cfg.norm_o.unwrap_or(1.0), l, t, g, delta)?;
            values.insert(format!("lr_rhs_L{l}"), rhs);
        }
    }
    if let (Some(alpha), Some(epsilon), Some(delta)) = (cfg.alpha, cfg.epsilon, cfg.ramanujan_degree.or(cfg.degree)) {
        let report = ramanujan_bound_report(alpha, epsilon, delta)?;
        values.insert("ramanujan_rhs".into(), report.lhs);
        b.reports.push(report);
        if let (Some(k1), Some(n)) = (cfg.kappa1, cfg.n) {
            let (a, c) = ramanujan_time_limits(k1, delta, n);
            values.insert("ramanujan_T_limit_4delta".into(), a);
            values.insert("ramanujan_T_limit_4delta_plus_1".into(), c);
        }
    }
    if let (Some(k1), Some(k2)) = (cfg.kappa1, cfg.kappa2) {
        values.insert("kappa3".into(), kappa3(k1, k2));
        if let Some(n) = cfg.n {
            if let Some(c) = cfg.c {
                values.insert("concentration_rhs".into(), concentration_rhs(c, k1, k2, n));
            }
            if let Some(delta) = cfg.degree {
                values.insert("concentration_T_limit".into(), concentration_time_limit(k1, g, delta, n));
                values.insert("isoperimetry_i_T_limit".into(), isoperimetry_time_limit_i(k1, k2, g, delta, n));
                values.insert("isoperimetry_ii_T_limit".into(), isoperimetry_time_limit_ii(k1, g, delta, n));
            }
        }
    }
    let mut records = BTreeMap::new();
    if let Some(n1) = cfg.n1 {
        let (m, m_real) = smoothing_degree(n1, cfg.theta.unwrap_or(0.0));
        values.insert("smoothing_m".into(), m as f64);
        values.insert("smoothing_floor".into(), smoothing_floor(m, n1));
        records.insert("m_rounding".to_string(), format!("ceil({m_real:.6}) = {m}"));
    }
    if let Some(degrees) = &cfg.poly_degree {
        let delta = cfg.delta.unwrap_or(0.0);
        for &n in degrees {
            values.insert(format!("gamma2_chebyshev_n{n}"), Gamma2Context::Chebyshev { n, delta }.analytic());
            values.insert(format!("gamma2_smoothing_n{n}"), Gamma2Context::Smoothing { n }.analytic());
        }
    }
    b.put("values", values)?;
    b.put("records", records)?;
    b.lap("bounds");
    Ok(())
}

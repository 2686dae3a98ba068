use std::collections::BTreeSet;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::config::{EstimatorName, ExperimentConfig, GraphSpec};
use super::table::{f, opt_f, Table, NA};
use crate::baseline::{self, BaselineConfig};
use crate::error::{Error, Result};
use crate::estimator::{self, recover_support};
use crate::gff::{GffModel, SampleSet};
use crate::graph::{er_connectivity_threshold, WeightedGraph};
use crate::metrics::{self, error_report, ErrorReport};
use crate::seed::derive_seed;

/// Columns of `sweep` and `compare` output.
///
/// `stage1_*` compare the first-stage estimate with its exact target
/// (`L_eta` for `fourier`, `Sigma` for the baselines); `prec_*` compare the
/// precision estimate with `L + mu I`. `bound_sigma` is the matching bound on
/// `prec_frob_scaled`, evaluated at the observed first-stage errors.
pub const RECORD_COLUMNS: &[&str] = &[
    "row_type",
    "estimator",
    "status",
    "reason",
    "d",
    "p",
    "mu",
    "eta",
    "u",
    "n",
    "trial",
    "seed",
    "stage1_frob_scaled",
    "stage1_frob",
    "stage1_op",
    "stage1_entry_max",
    "prec_frob_scaled",
    "prec_frob",
    "prec_op",
    "prec_entry_max",
    "support_exact",
    "bound_phi",
    "bound_sigma",
    "tau_u",
    "bmt_condition",
    "ok_trials",
    "slope_stage1",
    "slope_prec",
    "wall_ms",
];

pub const CONCENTRATION_COLUMNS: &[&str] = &[
    "d",
    "mu",
    "eta",
    "n",
    "t",
    "x",
    "reps",
    "exceed",
    "freq",
    "freq_se",
    "bound",
    "bound_simplified",
    "bound_se",
    "bound_plus_3se",
    "within",
];

pub const RECOVERY_COLUMNS: &[&str] = &[
    "row_type",
    "status",
    "reason",
    "d",
    "p",
    "mu",
    "eta",
    "tau",
    "n",
    "trial",
    "seed",
    "edges_true",
    "edges_found",
    "false_pos",
    "false_neg",
    "support_exact",
    "successes",
    "success_frac",
    "min_n_success",
];

/// Success fraction that counts as "recovered" in the `min_n_success` row.
pub const RECOVERY_TARGET: f64 = 0.9;

/// Output of `generate`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateOutput {
    pub graph: WeightedGraph,
    pub text: String,
    /// Set when an ER graph is below the connectivity threshold.
    pub warning: Option<String>,
}

fn header(cfg: &ExperimentConfig, command: &str, table: &mut Table) {
    table.comments.push(format!("config-hash={}", cfg.hash()));
    table.comments.push(format!("command={command}"));
}

fn p_cell(cfg: &ExperimentConfig) -> String {
    opt_f(cfg.er_p())
}

pub fn run_generate(cfg: &ExperimentConfig) -> Result<GenerateOutput> {
    let g = cfg.build_graph(None)?;
    let mut text = format!("# config-hash={}\n", cfg.hash());
    let mut warning = None;
    if let GraphSpec::Er { d, p } = cfg.graph {
        text.push_str(&format!("# er d={d} p={} seed={}\n", f(p), cfg.master_seed));
        let thr = er_connectivity_threshold(d);
        if p < thr {
            let msg = format!(
                "p = {p} is below the connectivity threshold log(d)/d = {thr:.4}; the graph is likely disconnected"
            );
            text.push_str(&format!("# regime: {msg}\n"));
            warning = Some(msg);
        }
    }
    text.push_str(&g.to_edge_list());
    Ok(GenerateOutput { graph: g, text, warning })
}

struct Truth {
    model: GffModel,
    edges: BTreeSet<(usize, usize)>,
    eta: f64,
    leta: DMatrix<f64>,
    sigma: DMatrix<f64>,
    prec: DMatrix<f64>,
    lambda1: f64,
    c_star: f64,
}

impl Truth {
    fn new(cfg: &ExperimentConfig, g: &WeightedGraph) -> Result<Self> {
        let eta = cfg.eta()?;
        let model = GffModel::from_graph(g, cfg.mu)?;
        Ok(Self {
            edges: g.edge_set(),
            eta,
            leta: model.exact_leta(eta)?,
            sigma: model.covariance(),
            prec: model.precision(),
            lambda1: model.lambda_max(),
            c_star: model.c_star(eta),
            model,
        })
    }

    fn s_min_sigma(&self) -> f64 {
        1.0 / (self.lambda1 + self.model.mu())
    }
}

type Cells = Vec<(&'static str, String)>;

fn report_cells(prefix: &str, r: &ErrorReport) -> Cells {
    let name = |s: &str| -> &'static str {
        RECORD_COLUMNS
            .iter()
            .find(|c| c.strip_prefix(prefix).and_then(|c| c.strip_prefix('_')) == Some(s))
            .copied()
            .expect("column")
    };
    vec![
        (name("frob_scaled"), f(r.frob_scaled)),
        (name("frob"), f(r.frob)),
        (name("op"), f(r.op_norm)),
        (name("entry_max"), f(r.entry_max)),
    ]
}

fn failure(cells: &mut Cells, e: &Error) -> Result<()> {
    match e {
        Error::DegenerateCharFn { .. } | Error::IllConditionedPlugin { .. } | Error::InvalidParameter(_) => {
            cells.push(("status", "failed".into()));
            cells.push(("reason", e.reason_code().into()));
            Ok(())
        }
        _ => Err(Error::Config(format!("trial failed: {e}"))),
    }
}

fn baseline_config(cfg: &ExperimentConfig, truth: &Truth, est: EstimatorName, n: usize) -> Result<BaselineConfig> {
    let r = cfg.baseline.r.unwrap_or(1.0 / cfg.mu);
    let base = BaselineConfig::new(1.0, r)?
        .with_gamma(cfg.baseline.gamma)?
        .with_c0(cfg.baseline.c0)?;
    let u = match est {
        EstimatorName::BmtCanonical => baseline::canonical_u(&base, n as f64, truth.model.d())?,
        EstimatorName::BmtImprovised => baseline::improvised_u(r)?,
        EstimatorName::Fourier => unreachable!("not a baseline"),
    };
    base.with_u(u)
}

/// One estimator on one sample set (or on exact statistics when `s` is
/// `None`). Returns the row cells after the identifying columns.
fn evaluate(cfg: &ExperimentConfig, truth: &Truth, est: EstimatorName, n: usize, s: Option<&SampleSet>) -> Result<Cells> {
    let mut cells: Cells = Vec::new();
    match est {
        EstimatorName::Fourier => {
            cells.push(("eta", f(truth.eta)));
            cells.push(("bound_phi", f(metrics::bound_phi_tail(n as f64, truth.c_star))));
            let lhat = match s {
                Some(s) => estimator::estimate_leta(s),
                None => estimator::estimate_leta_oracle(&truth.model, truth.eta),
            };
            let lhat = match lhat {
                Ok(l) => l,
                Err(e) => {
                    failure(&mut cells, &e)?;
                    return Ok(cells);
                }
            };
            let r1 = error_report(lhat.entries(), &truth.leta, None)?;
            cells.extend(report_cells("stage1", &r1));
            let b = metrics::bound_sigma_error(truth.lambda1, cfg.mu, truth.eta, r1.op_norm, r1.frob_scaled);
            cells.push(("bound_sigma", if b.applicable { f(b.value) } else { NA.into() }));
            match estimator::estimate_precision(&lhat, truth.eta) {
                Ok(prec) => {
                    let r2 = error_report(prec.entries(), &truth.prec, None)?;
                    cells.extend(report_cells("prec", &r2));
                    let ok = recover_support(&prec, cfg.tau) == truth.edges;
                    cells.push(("support_exact", ok.to_string()));
                    cells.push(("status", "ok".into()));
                }
                Err(e) => failure(&mut cells, &e)?,
            }
        }
        EstimatorName::BmtCanonical | EstimatorName::BmtImprovised => {
            let bc = match baseline_config(cfg, truth, est, n) {
                Ok(bc) => bc,
                Err(e) => {
                    failure(&mut cells, &e)?;
                    return Ok(cells);
                }
            };
            let d = truth.model.d();
            cells.push(("u", f(bc.u)));
            cells.push(("tau_u", f(baseline::tau_bound(&bc, n as f64, d).value)));
            cells.push(("bmt_condition", baseline::bmt_condition(&bc, n as f64, d).to_string()));
            let sig = match s {
                Some(s) => baseline::estimate_sigma_bmt(s, &bc),
                None => Ok(baseline::estimate_sigma_bmt_oracle(&truth.model, &bc)),
            };
            let sig = match sig {
                Ok(sig) => sig,
                Err(e) => {
                    failure(&mut cells, &e)?;
                    return Ok(cells);
                }
            };
            let r1 = error_report(sig.entries(), &truth.sigma, None)?;
            cells.extend(report_cells("stage1", &r1));
            let b = metrics::bound_inverse_error(truth.s_min_sigma(), r1.op_norm, r1.frob_scaled);
            cells.push(("bound_sigma", if b.applicable { f(b.value) } else { NA.into() }));
            match baseline::invert_baseline(&sig) {
                Ok(prec) => {
                    let r2 = error_report(prec.entries(), &truth.prec, None)?;
                    cells.extend(report_cells("prec", &r2));
                    let ok = recover_support(&prec, cfg.tau) == truth.edges;
                    cells.push(("support_exact", ok.to_string()));
                    cells.push(("status", "ok".into()));
                }
                Err(e) => failure(&mut cells, &e)?,
            }
        }
    }
    Ok(cells)
}

fn trial_row(
    cfg: &ExperimentConfig,
    truth: &Truth,
    est: EstimatorName,
    n: usize,
    trial: usize,
    seed: Option<u64>,
    mut cells: Cells,
    wall_ms: Option<f64>,
) -> Cells {
    let mut row: Cells = vec![
        ("row_type", "trial".into()),
        ("estimator", est.to_string()),
        ("d", truth.model.d().to_string()),
        ("p", p_cell(cfg)),
        ("mu", f(cfg.mu)),
        ("n", n.to_string()),
        ("trial", trial.to_string()),
        ("seed", seed.map_or_else(|| NA.into(), |s| s.to_string())),
    ];
    if let Some(ms) = wall_ms {
        row.push(("wall_ms", f(ms)));
    }
    row.append(&mut cells);
    row
}

fn check_grid(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.n_grid.is_empty() {
        return Err(Error::Config("n_grid must not be empty".into()));
    }
    Ok(())
}

/// Each estimator draws its own samples per `(n, trial)` cell.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg)?;
    let g = cfg.build_graph(None)?;
    let truth = Truth::new(cfg, &g)?;
    let mut table = Table::new(RECORD_COLUMNS);
    header(cfg, "sweep", &mut table);
    for &est in &cfg.estimators {
        for &n in &cfg.n_grid {
            let rows = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| -> Result<Cells> {
                    let start = Instant::now();
                    let (seed, cells) = if cfg.oracle {
                        (None, evaluate(cfg, &truth, est, n, None)?)
                    } else {
                        let seed = derive_seed(cfg.master_seed, est.as_str(), &[n as u64, trial as u64]);
                        let s = truth.model.sample(n, truth.eta, seed)?;
                        (Some(seed), evaluate(cfg, &truth, est, n, Some(&s))?)
                    };
                    let ms = cfg.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                    Ok(trial_row(cfg, &truth, est, n, trial, seed, cells, ms))
                })
                .collect::<Result<Vec<_>>>()?;
            for r in rows {
                table.push(&r);
            }
        }
    }
    summarize(cfg, &truth, &mut table);
    Ok(table)
}

/// All estimators share one sample set per `(n, trial)`; the baselines use
/// only its field samples.
pub fn run_compare(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg)?;
    let g = cfg.build_graph(None)?;
    let truth = Truth::new(cfg, &g)?;
    let mut table = Table::new(RECORD_COLUMNS);
    header(cfg, "compare", &mut table);
    // rows[estimator][n][trial]
    let mut rows: Vec<Vec<Vec<Cells>>> = vec![Vec::new(); cfg.estimators.len()];
    for &n in &cfg.n_grid {
        let cell: Vec<Vec<Cells>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<Cells>> {
                let seed = (!cfg.oracle).then(|| derive_seed(cfg.master_seed, "shared", &[n as u64, trial as u64]));
                let s = seed.map(|sd| truth.model.sample(n, truth.eta, sd)).transpose()?;
                cfg.estimators
                    .iter()
                    .map(|&est| {
                        let start = Instant::now();
                        let cells = evaluate(cfg, &truth, est, n, s.as_ref())?;
                        let ms = cfg.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                        Ok(trial_row(cfg, &truth, est, n, trial, seed, cells, ms))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (e, slot) in rows.iter_mut().enumerate() {
            slot.push(cell.iter().map(|per_trial| per_trial[e].clone()).collect());
        }
    }
    for per_est in rows {
        for per_n in per_est {
            for r in per_n {
                table.push(&r);
            }
        }
    }
    summarize(cfg, &truth, &mut table);
    Ok(table)
}

/// Median rows per `(estimator, n)` and one slope row per estimator.
fn summarize(cfg: &ExperimentConfig, truth: &Truth, table: &mut Table) {
    let col = |t: &Table, r: &[String], c: &str| -> Option<f64> { t.get(r, c).parse::<f64>().ok() };
    let mut summary: Vec<Cells> = Vec::new();
    for &est in &cfg.estimators {
        let name = est.to_string();
        let mut pts1 = Vec::new();
        let mut pts2 = Vec::new();
        for &n in &cfg.n_grid {
            let ns = n.to_string();
            let rows: Vec<&Vec<String>> = table
                .filter("estimator", &name)
                .filter(|r| table.get(r, "row_type") == "trial" && table.get(r, "n") == ns)
                .collect();
            let ok = rows.iter().filter(|r| table.get(r, "status") == "ok").count();
            let s1: Vec<f64> = rows.iter().filter_map(|r| col(table, r, "stage1_frob_scaled")).collect();
            let s2: Vec<f64> = rows.iter().filter_map(|r| col(table, r, "prec_frob_scaled")).collect();
            let m1 = metrics::median(&s1);
            let m2 = metrics::median(&s2);
            if let Some(m) = m1 {
                pts1.push((n as f64, m));
            }
            if let Some(m) = m2 {
                pts2.push((n as f64, m));
            }
            summary.push(vec![
                ("row_type", "median".into()),
                ("estimator", name.clone()),
                ("d", truth.model.d().to_string()),
                ("p", p_cell(cfg)),
                ("mu", f(cfg.mu)),
                ("n", ns),
                ("ok_trials", ok.to_string()),
                ("stage1_frob_scaled", opt_f(m1)),
                ("prec_frob_scaled", opt_f(m2)),
            ]);
        }
        let s1 = metrics::fit_rate_slope(&pts1).ok();
        let s2 = metrics::fit_rate_slope(&pts2).ok();
        summary.push(vec![
            ("row_type", "slope".into()),
            ("estimator", name),
            ("d", truth.model.d().to_string()),
            ("p", p_cell(cfg)),
            ("mu", f(cfg.mu)),
            ("slope_stage1", opt_f(s1)),
            ("slope_prec", opt_f(s2)),
        ]);
    }
    for r in summary {
        table.push(&r);
    }
}

/// Tail frequency of `|phi_n(t) - phi(t)| >= x` over independent
/// repetitions.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<Table> {
    let c = cfg
        .concentration
        .as_ref()
        .ok_or_else(|| Error::Config("concentration needs a [concentration] section".into()))?;
    let g = cfg.build_graph(None)?;
    let eta = cfg.eta()?;
    let model = GffModel::from_graph(&g, cfg.mu)?;
    let d = model.d();
    let t = match &c.t {
        Some(t) if t.len() == d => t.clone(),
        Some(t) => return Err(Error::DimensionMismatch { expected: d, got: t.len() }),
        None => estimator::Probe::Axis(0).vector(d),
    };
    let exact = model.exact_phi(eta, &t)?;
    let devs = (0..c.reps)
        .into_par_iter()
        .map(|rep| -> Result<f64> {
            let s = model.sample(c.n, eta, derive_seed(cfg.master_seed, "concentration", &[rep as u64]))?;
            Ok((estimator::phi_n(&s, &t)?.value - exact).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(CONCENTRATION_COLUMNS);
    header(cfg, "concentration", &mut table);
    let t_cell = t.iter().map(|v| f(*v)).collect::<Vec<_>>().join(";");
    for &x in &c.x_grid {
        let exceed = devs.iter().filter(|&&v| v >= x).count();
        let freq = exceed as f64 / c.reps as f64;
        let bound = metrics::bound_phi_tail(c.n as f64, x);
        let bse = metrics::binomial_se(bound.min(1.0), c.reps);
        let slack = bound + 3.0 * bse;
        table.push(&[
            ("d", d.to_string()),
            ("mu", f(cfg.mu)),
            ("eta", f(eta)),
            ("n", c.n.to_string()),
            ("t", t_cell.clone()),
            ("x", f(x)),
            ("reps", c.reps.to_string()),
            ("exceed", exceed.to_string()),
            ("freq", f(freq)),
            ("freq_se", f(metrics::binomial_se(freq, c.reps))),
            ("bound", f(bound)),
            (
                "bound_simplified",
                if x <= 1.0 { f(metrics::bound_phi_tail_simplified(c.n as f64, x)) } else { NA.into() },
            ),
            ("bound_se", f(bse)),
            ("bound_plus_3se", f(slack)),
            ("within", (freq <= slack).to_string()),
        ]);
    }
    Ok(table)
}

/// Exact support recovery frequency along the sample-size grid. ER graphs
/// are redrawn for every trial index and shared across `n`.
pub fn run_recovery(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg)?;
    let eta = cfg.eta()?;
    let per_trial_graph = matches!(cfg.graph, GraphSpec::Er { .. });
    let fixed = if per_trial_graph { None } else { Some(cfg.build_graph(None)?) };
    let graphs: Vec<WeightedGraph> = (0..cfg.trials)
        .map(|k| match &fixed {
            Some(g) => Ok(g.clone()),
            None => cfg.build_graph(Some(k as u64)),
        })
        .collect::<Result<_>>()?;
    let models: Vec<GffModel> = graphs
        .iter()
        .map(|g| GffModel::from_graph(g, cfg.mu))
        .collect::<Result<_>>()?;
    let d = graphs[0].d();
    let mut table = Table::new(RECOVERY_COLUMNS);
    header(cfg, "recovery", &mut table);
    let common = |row: &mut Cells| {
        row.push(("d", d.to_string()));
        row.push(("p", p_cell(cfg)));
        row.push(("mu", f(cfg.mu)));
        row.push(("eta", f(eta)));
        row.push(("tau", f(cfg.tau)));
    };
    let mut summary = Vec::new();
    let mut min_n = None;
    for &n in &cfg.n_grid {
        let rows = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<(bool, Cells)> {
                let m = &models[trial];
                let truth = graphs[trial].edge_set();
                let seed = (!cfg.oracle).then(|| derive_seed(cfg.master_seed, "recovery", &[n as u64, trial as u64]));
                let est = match seed {
                    Some(sd) => estimator::estimate_leta(&m.sample(n, eta, sd)?),
                    None => estimator::estimate_leta_oracle(m, eta),
                }
                .and_then(|l| estimator::estimate_precision(&l, eta));
                let mut row: Cells = vec![
                    ("row_type", "trial".into()),
                    ("n", n.to_string()),
                    ("trial", trial.to_string()),
                    ("seed", seed.map_or_else(|| NA.into(), |s| s.to_string())),
                    ("edges_true", truth.len().to_string()),
                ];
                common(&mut row);
                let ok = match est {
                    Ok(prec) => {
                        let found = recover_support(&prec, cfg.tau);
                        let ok = found == truth;
                        row.push(("status", "ok".into()));
                        row.push(("edges_found", found.len().to_string()));
                        row.push(("false_pos", found.difference(&truth).count().to_string()));
                        row.push(("false_neg", truth.difference(&found).count().to_string()));
                        row.push(("support_exact", ok.to_string()));
                        ok
                    }
                    Err(e) => {
                        failure(&mut row, &e)?;
                        row.push(("support_exact", "false".into()));
                        false
                    }
                };
                Ok((ok, row))
            })
            .collect::<Result<Vec<_>>>()?;
        let successes = rows.iter().filter(|r| r.0).count();
        for (_, r) in rows {
            table.push(&r);
        }
        let frac = successes as f64 / cfg.trials as f64;
        if min_n.is_none() && frac >= RECOVERY_TARGET {
            min_n = Some(n);
        }
        let mut row: Cells = vec![
            ("row_type", "summary".into()),
            ("n", n.to_string()),
            ("successes", successes.to_string()),
            ("success_frac", f(frac)),
        ];
        common(&mut row);
        summary.push(row);
    }
    for r in summary {
        table.push(&r);
    }
    let mut row: Cells = vec![
        ("row_type", "threshold".into()),
        ("min_n_success", min_n.map_or_else(|| NA.into(), |n| n.to_string())),
    ];
    common(&mut row);
    table.push(&row);
    Ok(table)
}

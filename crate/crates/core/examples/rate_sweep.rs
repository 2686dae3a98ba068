//! Error against sample size for all estimators, with a log-log slope per
//! estimator. Writes the CSV to stdout.

use gffnet::experiment::{run_sweep, ExperimentConfig};

const CONFIG: &str = r#"
master_seed = 5
mu = 0.5
eta = 1.0
n_grid = [1000, 10000, 100000]
trials = 5
estimators = ["fourier", "bmt_canonical", "bmt_improvised"]

[graph]
kind = "cycle"
d = 8
"#;

fn main() -> gffnet::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let t = run_sweep(&cfg)?;
    for r in t.filter("row_type", "slope") {
        eprintln!(
            "{:<15} slope of stage-one error {}, of precision error {}",
            t.get(r, "estimator"),
            t.get(r, "slope_stage1"),
            t.get(r, "slope_prec")
        );
    }
    print!("{}", t.to_csv());
    Ok(())
}

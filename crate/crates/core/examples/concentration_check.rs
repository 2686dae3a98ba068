//! Empirical tail of |phi_n(t) - phi(t)| against the Bernstein-type bound,
//! through the experiment driver.

use gffnet::experiment::{run_concentration, ExperimentConfig};

const CONFIG: &str = r#"
master_seed = 1
mu = 1.0
eta = 1.0

[graph]
kind = "star"
d = 5

[concentration]
n = 1000
reps = 2000
x_grid = [0.02, 0.05, 0.1, 0.2]
"#;

fn main() -> gffnet::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let t = run_concentration(&cfg)?;
    for r in &t.rows {
        println!(
            "x={:<5} freq={:<8} bound={:<24} within={}",
            t.get(r, "x"),
            t.get(r, "freq"),
            t.get(r, "bound"),
            t.get(r, "within")
        );
    }
    Ok(())
}

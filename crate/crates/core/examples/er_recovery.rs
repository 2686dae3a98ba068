//! Support recovery on Erdős–Rényi graphs, first with exact statistics and
//! then from samples.

use gffnet::experiment::{run_recovery, ExperimentConfig};

fn main() -> gffnet::Result<()> {
    let base = "master_seed = 8\nmu = 1.0\neta = \"theta_p\"\nn_grid = [10000, 100000, 1000000]\ntrials = 10\n\
                [graph]\nkind = \"er\"\nd = 6\np = 0.5\n";
    for (label, extra) in [("oracle", "oracle = true\n"), ("sampled", "")] {
        let cfg = ExperimentConfig::from_toml_str(&format!("{extra}{base}"))?;
        let t = run_recovery(&cfg)?;
        for r in t.filter("row_type", "summary") {
            println!("{label:>8} n={:<8} success {}", t.get(r, "n"), t.get(r, "success_frac"));
        }
        for r in t.filter("row_type", "threshold") {
            println!("{label:>8} smallest n with success >= 0.9: {}", t.get(r, "min_n_success"));
        }
    }
    Ok(())
}

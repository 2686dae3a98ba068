//! The two-stage estimator against the direct characteristic-function
//! covariance estimator, on the same samples.

use gffnet::baseline::{self, BaselineConfig};
use gffnet::estimator;
use gffnet::graph::WeightedGraph;
use gffnet::metrics::error_report;
use gffnet::GffModel;

fn main() -> gffnet::Result<()> {
    let model = GffModel::from_graph(&WeightedGraph::star(6)?, 0.2)?;
    let (eta, d) = (1.0, model.d());
    let prec = model.precision();
    let r = 1.0 / model.mu();

    println!("{:>8} {:>10} {:>10} {:>10}  (1/d)||prec_hat - prec||_F", "n", "fourier", "canonical", "improvised");
    for n in [10_000usize, 100_000, 1_000_000] {
        let s = model.sample(n, eta, 9)?;
        let four = estimator::estimate_leta(&s)
            .and_then(|l| estimator::estimate_precision(&l, eta))
            .map(|p| error_report(p.entries(), &prec, None).unwrap().frob_scaled);

        let base = BaselineConfig::new(1.0, r)?;
        let canon = base.with_u(baseline::canonical_u(&base, n as f64, d)?)?;
        let impro = base.with_u(baseline::improvised_u(r)?)?;
        let bmt = |cfg: &BaselineConfig| {
            baseline::estimate_sigma_bmt(&s, cfg)
                .and_then(|sig| baseline::invert_baseline(&sig))
                .map(|p| error_report(p.entries(), &prec, None).unwrap().frob_scaled)
        };
        let show = |r: gffnet::Result<f64>| r.map_or_else(|e| e.reason_code().to_string(), |v| format!("{v:.4}"));
        println!("{n:>8} {:>10} {:>10} {:>10}", show(four), show(bmt(&canon)), show(bmt(&impro)));
        let t = baseline::tau_bound(&impro, n as f64, d);
        println!("         tau(U) = {:.3} for U = {:.3}, guarantee applicable: {}", t.value, impro.u, t.applicable);
    }
    Ok(())
}

//! How an error in L_eta moves through the plug-in inverse, next to the
//! deterministic bound.

use gffnet::estimator::{estimate_precision, EstimateParam};
use gffnet::graph::WeightedGraph;
use gffnet::metrics::{bound_sigma_error, bound_sigma_error_scaled};
use gffnet::{linalg, EstimateKind, GffModel, SymmetricMatrixEstimate};
use nalgebra::DMatrix;

fn main() -> gffnet::Result<()> {
    let model = GffModel::from_graph(&WeightedGraph::complete(5)?, 0.1)?;
    let d = model.d();
    let lambda1 = model.lambda_max();
    for eta in [0.4, 1.0, 3.0] {
        let l = model.exact_leta(eta)?;
        let a = (lambda1 + model.mu() + eta) / (eta * eta);
        for frac in [0.01, 0.1, 0.5] {
            let e = DMatrix::<f64>::identity(d, d) * (frac / a);
            let lhat = SymmetricMatrixEstimate::from_upper(&(&l + &e), EstimateKind::Leta, EstimateParam::Eta(eta), None, None);
            let prec = estimate_precision(&lhat, eta)?;
            let observed = linalg::frobenius(&(prec.entries() - model.precision())) / d as f64;
            let fr = linalg::frobenius(&e) / d as f64;
            let b = bound_sigma_error(lambda1, model.mu(), eta, frac / a, fr);
            let bs = bound_sigma_error_scaled(lambda1, model.mu(), eta, frac / a, fr);
            println!("eta={eta:<4} ||E|| = {frac:<4}/a: observed {observed:.4e}, bound {:.4e}, eta^2-scaled bound {:.4e}", b.value, bs.value);
        }
    }
    Ok(())
}

//! Draw field samples and compare the empirical covariance with the exact
//! one.

use gffnet::graph::WeightedGraph;
use gffnet::{linalg, GffModel};
use nalgebra::DMatrix;

fn main() -> gffnet::Result<()> {
    let g = WeightedGraph::path(6)?;
    let model = GffModel::from_graph(&g, 0.5)?;
    let n = 200_000;
    let s = model.sample(n, 1.0, 42)?;

    let d = model.d();
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for k in 0..n {
        let x = s.x(k);
        for i in 0..d {
            for j in 0..d {
                cov[(i, j)] += x[i] * x[j];
            }
        }
    }
    cov /= n as f64;
    let sigma = model.covariance();
    println!("exact Sigma:{sigma:.3}");
    println!("relative Frobenius error of the sample covariance: {:.4}", linalg::frobenius(&(&cov - &sigma)) / linalg::frobenius(&sigma));

    let summary = model.spectral_summary();
    println!("lambda_max(L) = {:.4}, lambda_min(Sigma) = {:.4}", summary.lambda_max, summary.lambda_min_sigma);
    println!("c_eta(1) = {:.4}, c_*(1) = {:.4}", model.c_eta(1.0), model.c_star(1.0));

    let mut buf = Vec::new();
    model.sample(5, 1.0, 1)?.write_csv(&mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    Ok(())
}

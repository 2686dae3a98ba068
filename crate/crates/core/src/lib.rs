//! Learning a weighted network from samples of a massive discrete Gaussian
//! free field.
//!
//! The field on a graph with Laplacian `L` and mass `mu > 0` is the centred
//! Gaussian vector with precision `L + mu I`. Given i.i.d. field samples, the
//! crate estimates the regularized matrix `L_eta = (Sigma + I/eta)^{-1}` from
//! log-moduli of a complex-valued empirical statistic, then maps the estimate
//! back to the precision matrix with the Woodbury identity.
//!
//! Module map:
//!
//! - [`graph`]: weighted graphs, Laplacians, Erdős–Rényi generation, edge-list I/O.
//! - [`gff`]: the field model, exact sampling and closed-form oracles.
//! - [`estimator`]: the Fourier-analytic estimator, plug-in precision, support recovery.
//! - [`baseline`]: the vanilla characteristic-function covariance estimator.
//! - [`metrics`]: error norms, tail-bound evaluators, rate fitting.
//! - [`experiment`]: seeded experiment drivers that emit CSV.
//!
//! ```
//! use gffnet::{graph::WeightedGraph, gff::GffModel, estimator};
//!
//! let g = WeightedGraph::cycle(5).unwrap();
//! let model = GffModel::from_graph(&g, 0.5).unwrap();
//! let samples = model.sample(20_000, 1.0, 7).unwrap();
//! let lhat = estimator::estimate_leta(&samples).unwrap();
//! let truth = model.exact_leta(1.0).unwrap();
//! assert!((lhat.entries() - truth).abs().max() < 0.2);
//! ```

pub mod baseline;
pub mod csv_io;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod gff;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod metrics;
pub mod seed;

pub use error::{Error, Result};
pub use estimator::{EstimateKind, Probe, SymmetricMatrixEstimate};
pub use gff::{GffModel, SampleSet};
pub use graph::{LaplacianMatrix, WeightedGraph};

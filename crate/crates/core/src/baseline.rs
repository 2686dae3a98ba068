//! The vanilla characteristic-function covariance estimator and its direct
//! inversion, kept for comparison with the two-stage estimator.
//!
//! With `psi_n(u) = (1/n) Σ_k exp(i <u, X_k>)` and a frequency scale `U`:
//!
//! ```text
//! S_ii = -(2/U^2) log|psi_n(U e_i)|
//! S_ij = -(2/U^2) log|psi_n(U (e_i + e_j)/√2)| - (S_ii + S_jj)/2
//! ```
//!
//! The tail guarantee needs `||Sigma||_2 <= R`, `gamma > √2`, `U >= 1` and
//! `8 gamma sqrt(log(ed)/n) < exp(-R U^2)`; it then bounds the entrywise
//! error by `tau(U) = 6 gamma exp(R U^2) U^{-2} sqrt(log(ed)/n)` except on an
//! event of probability `12 exp(-gamma^2) d^{2 - gamma^2}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimator::{EstimateKind, EstimateParam, SymmetricMatrixEstimate};
use crate::gff::{GffModel, SampleSet};
use crate::lattice::{lattice_sums, Probe, ProbeLogModuli};
use crate::linalg;
use crate::metrics::TaggedBound;

use nalgebra::DMatrix;

pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_C0: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineConfig {
    /// Frequency scale.
    pub u: f64,
    /// Upper bound on `||Sigma||_2`.
    pub r: f64,
    /// Confidence parameter, `> √2`.
    pub gamma: f64,
    /// Constant in the canonical choice of `U`.
    pub c0: f64,
}

impl BaselineConfig {
    pub fn new(u: f64, r: f64) -> Result<Self> {
        Self {
            u,
            r,
            gamma: DEFAULT_GAMMA,
            c0: DEFAULT_C0,
        }
        .validated()
    }

    /// `R = 1/mu`, which is exactly `||Sigma||_2` for the field model.
    pub fn for_model(m: &GffModel, u: f64) -> Result<Self> {
        Self::new(u, 1.0 / m.mu())
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validated()
    }

    pub fn with_c0(mut self, c0: f64) -> Result<Self> {
        self.c0 = c0;
        self.validated()
    }

    pub fn with_u(mut self, u: f64) -> Result<Self> {
        self.u = u;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.u) || !pos(self.r) || !pos(self.c0) {
            return Err(Error::InvalidParameter(format!(
                "U, R and c0 must be positive, got U={}, R={}, c0={}",
                self.u, self.r, self.c0
            )));
        }
        if !(self.gamma.is_finite() && self.gamma > std::f64::consts::SQRT_2) {
            return Err(Error::InvalidParameter(format!("gamma must exceed √2, got {}", self.gamma)));
        }
        Ok(self)
    }
}

/// `psi_n(u) = (1/n) Σ_k exp(i <u, X_k>)`; the auxiliary vectors are ignored.
pub fn psi_n(s: &SampleSet, u: &[f64]) -> Result<Complex64> {
    if u.len() != s.d() {
        return Err(Error::DimensionMismatch {
            expected: s.d(),
            got: u.len(),
        });
    }
    let d = s.d();
    let acc: Complex64 = s
        .x_data()
        .chunks_exact(d)
        .map(|x| Complex64::cis(x.iter().zip(u).map(|(a, b)| a * b).sum()))
        .sum();
    Ok(acc / s.n() as f64)
}

fn assemble_sigma(lm: &ProbeLogModuli, u: f64) -> DMatrix<f64> {
    let d = lm.d;
    let k = -2.0 / (u * u);
    let diag: Vec<f64> = (0..d).map(|i| k * lm.get(Probe::Axis(i))).collect();
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag.clone()));
    for i in 0..d {
        for j in i + 1..d {
            m[(i, j)] = k * lm.get(Probe::Pair(i, j)) - 0.5 * (diag[i] + diag[j]);
        }
    }
    m
}

/// Covariance estimate at scale `cfg.u`, with the default `1/√n` degeneracy
/// floor on `|psi_n|`.
pub fn estimate_sigma_bmt(s: &SampleSet, cfg: &BaselineConfig) -> Result<SymmetricMatrixEstimate> {
    estimate_sigma_bmt_with_floor(s, cfg, crate::estimator::default_modulus_floor(s.n()))
}

pub fn estimate_sigma_bmt_with_floor(s: &SampleSet, cfg: &BaselineConfig, floor: f64) -> Result<SymmetricMatrixEstimate> {
    let sums = lattice_sums(s.x_data(), s.d(), cfg.u, None);
    let lm = ProbeLogModuli::from_sums(&sums, floor)?;
    Ok(SymmetricMatrixEstimate::from_upper(
        &assemble_sigma(&lm, cfg.u),
        EstimateKind::Covariance,
        EstimateParam::U(cfg.u),
        Some(s.seed()),
        Some(s.n()),
    ))
}

/// Oracle mode: `psi_n` replaced by `exp(-<u, Sigma u>/2)`.
pub fn estimate_sigma_bmt_oracle(m: &GffModel, cfg: &BaselineConfig) -> SymmetricMatrixEstimate {
    let sigma = m.covariance();
    let d = m.d();
    let lm = ProbeLogModuli::from_fn(d, |p| {
        let v: Vec<f64> = p.vector(d).iter().map(|x| x * cfg.u).collect();
        let mut q = 0.0;
        for i in 0..d {
            for j in 0..d {
                q += v[i] * sigma[(i, j)] * v[j];
            }
        }
        -0.5 * q
    });
    SymmetricMatrixEstimate::from_upper(&assemble_sigma(&lm, cfg.u), EstimateKind::Covariance, EstimateParam::U(cfg.u), None, None)
}

fn log_ed(d: usize) -> f64 {
    1.0 + (d as f64).ln()
}

/// Canonical scale `c0 R^{-1/2} sqrt(log(n / log(ed)))`; needs
/// `n > log(ed)`.
pub fn canonical_u(cfg: &BaselineConfig, n: f64, d: usize) -> Result<f64> {
    let l = log_ed(d);
    if !(n > l) {
        return Err(Error::InvalidParameter(format!(
            "canonical U needs n > log(ed) = {l}, got n = {n}"
        )));
    }
    Ok(cfg.c0 / cfg.r.sqrt() * (n / l).ln().sqrt())
}

/// Improvised scale `R^{-1/2}`, the minimizer of `tau(U)` over the admissible
/// range.
pub fn improvised_u(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!("R must be positive, got {r}")));
    }
    Ok(1.0 / r.sqrt())
}

/// Whether `8 gamma sqrt(log(ed)/n) < exp(-R U^2)` holds.
pub fn bmt_condition(cfg: &BaselineConfig, n: f64, d: usize) -> bool {
    8.0 * cfg.gamma * (log_ed(d) / n).sqrt() < (-cfg.r * cfg.u * cfg.u).exp()
}

/// Entrywise error radius `tau(U)`. Tagged applicable only when the
/// sample-size condition holds and `U >= 1`.
pub fn tau_bound(cfg: &BaselineConfig, n: f64, d: usize) -> TaggedBound {
    let u2 = cfg.u * cfg.u;
    TaggedBound {
        value: 6.0 * cfg.gamma * (cfg.r * u2).exp() / u2 * (log_ed(d) / n).sqrt(),
        applicable: cfg.u >= 1.0 && bmt_condition(cfg, n, d),
    }
}

/// Failure probability `12 exp(-gamma^2) d^{2 - gamma^2}` of the guarantee.
pub fn bmt_tail_probability(gamma: f64, d: usize) -> f64 {
    12.0 * (-gamma * gamma).exp() * (d as f64).powf(2.0 - gamma * gamma)
}

/// Direct inverse of a covariance estimate.
pub fn invert_baseline(sig: &SymmetricMatrixEstimate) -> Result<SymmetricMatrixEstimate> {
    if sig.kind() != EstimateKind::Covariance {
        return Err(Error::InvalidParameter(format!(
            "expected a covariance estimate, got {}",
            sig.kind()
        )));
    }
    let inv = linalg::sym_inverse(sig.entries())?;
    Ok(SymmetricMatrixEstimate::from_upper(
        &inv,
        EstimateKind::Precision,
        sig.param(),
        sig.seed(),
        sig.n(),
    ))
}

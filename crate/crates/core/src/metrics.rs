//! Error norms, tail-bound evaluators and rate fitting.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::estimator::{support_of, DEFAULT_SUPPORT_THRESHOLD};
use crate::linalg;

/// Norms of `estimate - truth`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// `||.||_F / d`
    pub frob_scaled: f64,
    pub frob: f64,
    pub op_norm: f64,
    /// Largest absolute entry.
    pub entry_max: f64,
    /// Whether the thresholded support of `estimate` equals the supplied
    /// edge set. `None` when no edge set was given.
    pub support_exact: Option<bool>,
}

/// A bound value together with whether its hypotheses hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedBound {
    pub value: f64,
    pub applicable: bool,
}

/// Compare two symmetric matrices. When `true_edges` is given, the support of
/// `estimate` is recovered at the default threshold and compared with it.
pub fn error_report(
    estimate: &DMatrix<f64>,
    truth: &DMatrix<f64>,
    true_edges: Option<&BTreeSet<(usize, usize)>>,
) -> Result<ErrorReport> {
    if estimate.shape() != truth.shape() {
        return Err(Error::DimensionMismatch {
            expected: truth.nrows(),
            got: estimate.nrows(),
        });
    }
    let diff = estimate - truth;
    let d = diff.nrows().max(1) as f64;
    let frob = linalg::frobenius(&diff);
    Ok(ErrorReport {
        frob_scaled: frob / d,
        frob,
        op_norm: linalg::sym_op_norm(&diff),
        entry_max: linalg::max_abs(&diff),
        support_exact: true_edges.map(|e| &support_of(estimate, DEFAULT_SUPPORT_THRESHOLD) == e),
    })
}

/// Tail bound for `|phi_n(t) - phi(t)| >= x`: `4 exp(-3 n x^2 / (24 + 8x))`.
pub fn bound_phi_tail(n: f64, x: f64) -> f64 {
    assert!(x > 0.0, "x must be positive");
    4.0 * (-3.0 * n * x * x / (24.0 + 8.0 * x)).exp()
}

/// Simplified tail bound `4 exp(-3 n x^2 / 32)`, valid for `x` in `(0, 1]`.
pub fn bound_phi_tail_simplified(n: f64, x: f64) -> f64 {
    assert!(x > 0.0, "x must be positive");
    4.0 * (-3.0 / 32.0 * n * x * x).exp()
}

/// Bound on `(1/d)||Sigma_hat^{-1} - Sigma^{-1}||_F` from the `L_eta`
/// errors:
///
/// ```text
/// a = (lambda1 + mu + eta) / eta^2
/// bound = a^2 / (1 - a * op_err) * frob_scaled_err
/// ```
///
/// Requires `a * op_err < 1`; otherwise the value is infinite and tagged
/// inapplicable.
pub fn bound_sigma_error(lambda1: f64, mu: f64, eta: f64, leta_err_op: f64, leta_err_frob_scaled: f64) -> TaggedBound {
    let a = (lambda1 + mu + eta) / (eta * eta);
    let q = a * leta_err_op;
    if q < 1.0 {
        TaggedBound {
            value: a * a / (1.0 - q) * leta_err_frob_scaled,
            applicable: true,
        }
    } else {
        TaggedBound {
            value: f64::INFINITY,
            applicable: false,
        }
    }
}

/// [`bound_sigma_error`] multiplied by `eta^2`.
///
/// Writing `A = eta I - L_eta`, the plug-in error is
/// `eta^2 (A - E)^{-1} E A^{-1}` with `||A^{-1}||_2 = (lambda1 + mu + eta) / eta^2`,
/// which gives this bound for every `eta > 0`. The unscaled form is smaller
/// by `eta^2` and can fail when `eta > 1`.
pub fn bound_sigma_error_scaled(lambda1: f64, mu: f64, eta: f64, leta_err_op: f64, leta_err_frob_scaled: f64) -> TaggedBound {
    let b = bound_sigma_error(lambda1, mu, eta, leta_err_op, leta_err_frob_scaled);
    TaggedBound {
        value: b.value * eta * eta,
        ..b
    }
}

/// Bound on `(1/d)||Sigma_hat^{-1} - Sigma^{-1}||_F` for a direct inversion:
///
/// ```text
/// (1/d)||Sigma_hat - Sigma||_F / (s_min (s_min - ||Sigma_hat - Sigma||_2))
/// ```
///
/// with `s_min` the smallest singular value of `Sigma`. Requires
/// `s_min > ||Sigma_hat - Sigma||_2`.
pub fn bound_inverse_error(s_min: f64, err_op: f64, err_frob_scaled: f64) -> TaggedBound {
    if s_min > err_op {
        TaggedBound {
            value: err_frob_scaled / (s_min * (s_min - err_op)),
            applicable: true,
        }
    } else {
        TaggedBound {
            value: f64::INFINITY,
            applicable: false,
        }
    }
}

/// Least-squares slope of `log(error)` against `log(n)`.
pub fn fit_rate_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 points to fit a slope, got {}",
            points.len()
        )));
    }
    if let Some(&(n, e)) = points.iter().find(|&&(n, e)| !(n > 0.0 && e > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "sample sizes and errors must be positive, got ({n}, {e})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n.ln(), e.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all sample sizes are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Standard error of an empirical frequency `p` over `reps` trials.
pub fn binomial_se(p: f64, reps: usize) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

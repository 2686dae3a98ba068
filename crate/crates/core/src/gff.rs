//! The massive discrete Gaussian free field.
//!
//! A [`GffModel`] pairs a graph Laplacian `L` with a mass `mu > 0`; the field
//! is `N(0, Sigma)` with `Sigma = (L + mu I)^{-1}`. Besides exact sampling the
//! model exposes the closed forms the estimators are checked against:
//! `L_eta = (Sigma + I/eta)^{-1}`, the normalization
//! `c_eta = det(I + eta Sigma)^{-1/2}`, the concentration scale `c_*(eta)` and
//! the expected statistic `phi(t) = c_eta exp(-<t, L_eta t>/2)`.

use std::io::{BufRead, Write};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::csv_io::{fmt_f64, parse_f64};
use crate::error::{Error, Result};
use crate::graph::{check_permutation, LaplacianMatrix, WeightedGraph};
use crate::lattice::BLOCK_ROWS;
use crate::linalg;
use crate::seed;

/// Spectrum of `L` and the derived extreme eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    /// Eigenvalues of `L`, ascending.
    pub eigenvalues_l: Vec<f64>,
    /// Orthonormal eigenvectors of `L`, column `k` paired with `eigenvalues_l[k]`.
    pub eigenvectors_l: DMatrix<f64>,
    /// `lambda_1 = lambda_max(L)`
    pub lambda_max: f64,
    /// `lambda_min(Sigma) = 1 / (lambda_1 + mu)`
    pub lambda_min_sigma: f64,
}

#[derive(Debug, Clone)]
pub struct GffModel {
    laplacian: LaplacianMatrix,
    mu: f64,
    /// `C^T` row-major, where `L + mu I = C C^T` with `C` lower triangular.
    factor_t: Vec<f64>,
    spectrum: OnceLock<SpectralSummary>,
}

impl GffModel {
    pub fn new(laplacian: LaplacianMatrix, mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mu}")));
        }
        let d = laplacian.d();
        let prec = laplacian.matrix() + DMatrix::identity(d, d) * mu;
        let chol = prec.cholesky().ok_or(Error::DegenerateModel)?;
        let c = chol.l();
        let mut factor_t = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                factor_t[i * d + j] = c[(j, i)];
            }
        }
        Ok(Self {
            laplacian,
            mu,
            factor_t,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_graph(g: &WeightedGraph, mu: f64) -> Result<Self> {
        Self::new(g.laplacian(), mu)
    }

    pub fn d(&self) -> usize {
        self.laplacian.d()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn laplacian(&self) -> &LaplacianMatrix {
        &self.laplacian
    }

    /// `L + mu I`
    pub fn precision(&self) -> DMatrix<f64> {
        let d = self.d();
        self.laplacian.matrix() + DMatrix::identity(d, d) * self.mu
    }

    /// `(L + mu I)^{-1}` by Cholesky factor-and-solve.
    pub fn covariance(&self) -> DMatrix<f64> {
        let d = self.d();
        let chol = self
            .precision()
            .cholesky()
            .expect("factorization checked at construction");
        linalg::symmetrize(&chol.solve(&DMatrix::identity(d, d)))
    }

    /// Eigen-decomposition of `L`, computed once and cached.
    pub fn spectral_summary(&self) -> &SpectralSummary {
        self.spectrum.get_or_init(|| {
            let eig = SymmetricEigen::new(self.laplacian.matrix().clone());
            let mut order: Vec<usize> = (0..self.d()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let eigenvalues_l: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let eigenvectors_l = DMatrix::from_fn(self.d(), self.d(), |i, k| eig.eigenvectors[(i, order[k])]);
            let lambda_max = *eigenvalues_l.last().expect("d >= 1");
            SpectralSummary {
                lambda_min_sigma: 1.0 / (lambda_max + self.mu),
                eigenvalues_l,
                eigenvectors_l,
                lambda_max,
            }
        })
    }

    /// `lambda_1 = lambda_max(L)`
    pub fn lambda_max(&self) -> f64 {
        self.spectral_summary().lambda_max
    }

    /// `L_eta = (Sigma + I/eta)^{-1}`, formed from `Sigma` and inverted by
    /// Cholesky.
    ///
    /// Panics if `eta` is not positive.
    pub fn exact_leta(&self, eta: f64) -> Result<DMatrix<f64>> {
        check_eta(eta);
        let d = self.d();
        let m = self.covariance() + DMatrix::identity(d, d) / eta;
        linalg::spd_inverse(&m).ok_or(Error::DegenerateModel)
    }

    /// `||L_eta||_2 = eta / (1 + eta lambda_min(Sigma))`.
    pub fn leta_op_norm(&self, eta: f64) -> f64 {
        check_eta(eta);
        eta / (1.0 + eta * self.spectral_summary().lambda_min_sigma)
    }

    /// `log c_eta = -1/2 Σ_j log(1 + eta / (lambda_j + mu))`.
    pub fn log_c_eta(&self, eta: f64) -> f64 {
        check_eta(eta);
        -0.5 * self
            .spectral_summary()
            .eigenvalues_l
            .iter()
            .map(|&l| (eta / (l.max(0.0) + self.mu)).ln_1p())
            .sum::<f64>()
    }

    /// `c_eta = det(I + eta Sigma)^{-1/2}`, in `(0, 1]`.
    pub fn c_eta(&self, eta: f64) -> f64 {
        self.log_c_eta(eta).exp()
    }

    /// `c_*(eta) = c_eta exp(-||L_eta||_2^2 / 2) / 2`.
    pub fn c_star(&self, eta: f64) -> f64 {
        let op = self.leta_op_norm(eta);
        0.5 * (self.log_c_eta(eta) - 0.5 * op * op).exp()
    }

    /// Closed form of the expected statistic for a fixed `eta`.
    pub fn phi_oracle(&self, eta: f64) -> Result<PhiOracle> {
        Ok(PhiOracle {
            log_c_eta: self.log_c_eta(eta),
            leta: self.exact_leta(eta)?,
        })
    }

    /// `phi(t) = c_eta exp(-<t, L_eta t>/2)`.
    pub fn exact_phi(&self, eta: f64, t: &[f64]) -> Result<f64> {
        Ok(self.phi_oracle(eta)?.value(t))
    }

    /// Draw `n` field samples and `n` auxiliary `N(0, eta I)` vectors.
    ///
    /// Field samples are `C^{-T} z` with `z` standard normal, where `C` is the
    /// lower Cholesky factor of `L + mu I`. Field and auxiliary draws come
    /// from independent substreams of `seed`, one per block of rows, so the
    /// result is identical for any thread count.
    pub fn sample(&self, n: usize, eta: f64, seed: u64) -> Result<SampleSet> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample count must be positive".into()));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        let d = self.d();
        let mut x = vec![0.0; n * d];
        let mut y = vec![0.0; n * d];
        let ft = &self.factor_t;
        x.par_chunks_mut(BLOCK_ROWS * d)
            .enumerate()
            .for_each(|(b, chunk)| {
                let mut rng = seed::derived_stream(seed, "gff.field", &[b as u64]);
                for row in chunk.chunks_exact_mut(d) {
                    for v in row.iter_mut() {
                        *v = StandardNormal.sample(&mut rng);
                    }
                    back_substitute(ft, d, row);
                }
            });
        let sd = eta.sqrt();
        y.par_chunks_mut(BLOCK_ROWS * d)
            .enumerate()
            .for_each(|(b, chunk)| {
                let mut rng = seed::derived_stream(seed, "gff.aux", &[b as u64]);
                for v in chunk.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *v = sd * z;
                }
            });
        SampleSet::new(d, x, y, eta, seed)
    }
}

fn check_eta(eta: f64) {
    assert!(eta.is_finite() && eta > 0.0, "eta must be positive, got {eta}");
}

/// Solve `U x = z` in place for upper-triangular `U` stored row-major.
#[inline]
fn back_substitute(u: &[f64], d: usize, z: &mut [f64]) {
    for i in (0..d).rev() {
        let row = &u[i * d..(i + 1) * d];
        let mut s = z[i];
        for j in i + 1..d {
            s -= row[j] * z[j];
        }
        z[i] = s / row[i];
    }
}

/// `phi(t) = c_eta exp(-<t, L_eta t>/2)` with `L_eta` precomputed.
#[derive(Debug, Clone)]
pub struct PhiOracle {
    pub log_c_eta: f64,
    pub leta: DMatrix<f64>,
}

impl PhiOracle {
    pub fn log_value(&self, t: &[f64]) -> f64 {
        let d = self.leta.nrows();
        assert_eq!(t.len(), d, "probe dimension");
        let mut q = 0.0;
        for i in 0..d {
            for j in 0..d {
                q += t[i] * self.leta[(i, j)] * t[j];
            }
        }
        self.log_c_eta - 0.5 * q
    }

    pub fn value(&self, t: &[f64]) -> f64 {
        self.log_value(t).exp()
    }
}

/// `n` field samples `X_k` paired with `n` auxiliary vectors `Y_k`.
#[derive(Debug, Clone)]
pub struct SampleSet {
    n: usize,
    d: usize,
    eta: f64,
    seed: u64,
    x: Vec<f64>,
    y: Vec<f64>,
    phases: OnceLock<Vec<f64>>,
}

impl PartialEq for SampleSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.d == other.d
            && self.eta.to_bits() == other.eta.to_bits()
            && self.seed == other.seed
            && self.x == other.x
            && self.y == other.y
    }
}

impl SampleSet {
    /// `x` and `y` are row-major `n × d`.
    pub fn new(d: usize, x: Vec<f64>, y: Vec<f64>, eta: f64, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.is_empty() || !x.len().is_multiple_of(d) {
            return Err(Error::InvalidParameter(format!(
                "sample buffer of length {} is not a nonempty multiple of d={d}",
                x.len()
            )));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        Ok(Self {
            n: x.len() / d,
            d,
            eta,
            seed,
            x,
            y,
            phases: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn x(&self, k: usize) -> &[f64] {
        &self.x[k * self.d..(k + 1) * self.d]
    }

    pub fn y(&self, k: usize) -> &[f64] {
        &self.y[k * self.d..(k + 1) * self.d]
    }

    /// Row-major field samples.
    pub fn x_data(&self) -> &[f64] {
        &self.x
    }

    /// Row-major auxiliary vectors.
    pub fn y_data(&self) -> &[f64] {
        &self.y
    }

    /// `<Y_k, X_k>` for every k, computed once.
    pub fn phases(&self) -> &[f64] {
        self.phases.get_or_init(|| {
            self.x
                .chunks_exact(self.d)
                .zip(self.y.chunks_exact(self.d))
                .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a * b).sum())
                .collect()
        })
    }

    /// Relabel coordinates: coordinate `v` becomes `perm[v]`, in both `X`
    /// and `Y`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.d)?;
        let permute = |src: &[f64]| {
            let mut out = vec![0.0; src.len()];
            for (o, s) in out.chunks_exact_mut(self.d).zip(src.chunks_exact(self.d)) {
                for v in 0..self.d {
                    o[perm[v]] = s[v];
                }
            }
            out
        };
        Self::new(self.d, permute(&self.x), permute(&self.y), self.eta, self.seed)
    }

    /// CSV with a one-line header `n=<int>,d=<int>,eta=<float>,seed=<int>`
    /// followed by one row per sample: `x_0..x_{d-1},y_0..y_{d-1}`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "n={},d={},eta={},seed={}",
            self.n,
            self.d,
            fmt_f64(self.eta),
            self.seed
        )?;
        let mut line = String::new();
        for k in 0..self.n {
            line.clear();
            for (idx, v) in self.x(k).iter().chain(self.y(k)).enumerate() {
                if idx > 0 {
                    line.push(',');
                }
                line.push_str(&fmt_f64(*v));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })??;
        let mut n = None;
        let mut d = None;
        let mut eta = None;
        let mut seed = None;
        for field in header.split(',') {
            let (k, v) = field.split_once('=').ok_or(Error::Parse {
                line: 1,
                msg: format!("malformed header field {field:?}"),
            })?;
            let perr = |e: String| Error::Parse { line: 1, msg: e };
            match k.trim() {
                "n" => n = Some(v.trim().parse::<usize>().map_err(|e| perr(e.to_string()))?),
                "d" => d = Some(v.trim().parse::<usize>().map_err(|e| perr(e.to_string()))?),
                "eta" => eta = Some(parse_f64(v, 1)?),
                "seed" => seed = Some(v.trim().parse::<u64>().map_err(|e| perr(e.to_string()))?),
                other => return Err(perr(format!("unknown header key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse {
            line: 1,
            msg: format!("header lacks `{k}`"),
        };
        let (n, d) = (n.ok_or_else(|| missing("n"))?, d.ok_or_else(|| missing("d"))?);
        let (eta, seed) = (eta.ok_or_else(|| missing("eta"))?, seed.ok_or_else(|| missing("seed"))?);
        let mut x = Vec::with_capacity(n * d);
        let mut y = Vec::with_capacity(n * d);
        let mut rows = 0;
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let vals = line
                .split(',')
                .map(|f| parse_f64(f, lineno))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != 2 * d {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} values, got {}", 2 * d, vals.len()),
                });
            }
            x.extend_from_slice(&vals[..d]);
            y.extend_from_slice(&vals[d..]);
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares n={n} but found {rows} rows"),
            });
        }
        Self::new(d, x, y, eta, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_erdos_renyi;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn scalar_model(mu: f64) -> GffModel {
        GffModel::new(WeightedGraph::empty(1).unwrap().laplacian(), mu).unwrap()
    }

    fn single_edge(mu: f64) -> GffModel {
        GffModel::from_graph(&WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap(), mu).unwrap()
    }

    fn random_model(d: usize, s: u64) -> GffModel {
        let mut rng = seed::stream(s);
        let g = sample_erdos_renyi(d, 0.5, &mut rng).unwrap();
        GffModel::from_graph(&g, 0.3).unwrap()
    }

    #[test]
    fn rejects_bad_mass() {
        let l = WeightedGraph::path(3).unwrap().laplacian();
        assert!(GffModel::new(l.clone(), 0.0).is_err());
        assert!(GffModel::new(l.clone(), -1.0).is_err());
        assert!(GffModel::new(l, f64::NAN).is_err());
    }

    #[test]
    fn scalar_covariance() {
        let m = scalar_model(2.0);
        assert!((m.covariance()[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_edge_covariance() {
        let m = single_edge(1.0);
        let want = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]) / 3.0;
        assert!((m.covariance() - want).abs().max() < 1e-14);
    }

    #[test]
    fn covariance_multiplies_back() {
        for s in 0..5 {
            let m = random_model(8, s);
            let prod = m.covariance() * m.precision();
            assert!((prod - DMatrix::identity(8, 8)).abs().max() < 1e-10);
        }
    }

    #[test]
    fn spectral_summary_consistency() {
        let m = random_model(8, 11);
        let s = m.spectral_summary();
        let lmin_sigma = linalg::sym_eigenvalues(&m.covariance())[0];
        assert!(rel(s.lambda_min_sigma, lmin_sigma) < 1e-10);
        assert!(rel(s.lambda_min_sigma, 1.0 / (s.lambda_max + m.mu())) < 1e-12);
        let rebuilt = &s.eigenvectors_l
            * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.eigenvalues_l.clone()))
            * s.eigenvectors_l.transpose();
        assert!((rebuilt - m.laplacian().matrix()).abs().max() < 1e-10);
    }

    #[test]
    fn leta_scalar() {
        let m = scalar_model(1.0);
        assert!((m.exact_leta(1.0).unwrap()[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leta_small_eta_series() {
        // (Sigma + I/eta)^{-1} = eta I - eta^2 Sigma + O(eta^3)
        let m = random_model(6, 4);
        let eta = 1e-6;
        let leta = m.exact_leta(eta).unwrap();
        let series = DMatrix::identity(6, 6) * eta - m.covariance() * eta * eta;
        assert!((&leta - &series).abs().max() <= 1e-4 * eta);
        assert!((&leta - DMatrix::identity(6, 6) * eta).abs().max() <= 1e-4 * eta * 10.0);
    }

    #[test]
    fn leta_matches_eigen_oracle() {
        let m = single_edge(1.0);
        let eig = SymmetricEigen::new(m.covariance());
        let diag = eig.eigenvalues.map(|s| 1.0 / (s + 1.0));
        let oracle = &eig.eigenvectors * DMatrix::from_diagonal(&diag) * eig.eigenvectors.transpose();
        assert!((m.exact_leta(1.0).unwrap() - oracle).abs().max() < 1e-10);
    }

    #[test]
    fn leta_commutes_with_sigma_and_satisfies_woodbury() {
        for s in 0..5 {
            let m = random_model(7, 100 + s);
            for eta in [0.1, 1.0, 5.0] {
                let leta = m.exact_leta(eta).unwrap();
                let sigma = m.covariance();
                assert!((&leta * &sigma - &sigma * &leta).abs().max() < 1e-9);
                let id = DMatrix::identity(7, 7);
                let back = linalg::spd_inverse(&(&id * eta - &leta)).unwrap() * eta * eta - &id * eta;
                let p = m.precision();
                assert!(linalg::frobenius(&(back - &p)) / linalg::frobenius(&p) < 1e-8);
            }
        }
    }

    #[test]
    fn c_eta_values() {
        let m = scalar_model(1.0);
        assert!((m.c_eta(1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((m.c_eta(1e-14) - 1.0).abs() < 1e-12);
        let r = random_model(8, 5);
        for eta in [0.3, 1.0, 4.0] {
            let det = (r.exact_leta(eta).unwrap() / eta).determinant();
            assert!((r.c_eta(eta) - det.sqrt()).abs() < 1e-9);
            let c = r.c_eta(eta);
            assert!(c > 0.0 && c <= 1.0);
        }
    }

    #[test]
    fn c_eta_does_not_underflow_in_log_domain() {
        let g = WeightedGraph::path(80).unwrap();
        let m = GffModel::from_graph(&g, 1e-3).unwrap();
        let lc = m.log_c_eta(10.0);
        assert!(lc.is_finite() && lc < -50.0);
    }

    #[test]
    fn c_star_values() {
        let m = scalar_model(1.0);
        assert!((m.leta_op_norm(1.0) - 0.5).abs() < 1e-15);
        let want = 0.5 * std::f64::consts::FRAC_1_SQRT_2 * (-0.125f64).exp();
        assert!((m.c_star(1.0) - want).abs() < 1e-15);
        assert!((m.c_star(1.0) - 0.31201).abs() < 1e-5);
        let r = random_model(8, 9);
        for eta in [0.2, 1.0, 3.0] {
            assert!(r.c_star(eta) < r.c_eta(eta));
            let op = linalg::sym_op_norm(&r.exact_leta(eta).unwrap());
            assert!((op - r.leta_op_norm(eta)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_phi_values() {
        let m = scalar_model(1.0);
        let v = m.exact_phi(1.0, &[1.0]).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2 * (-0.25f64).exp()).abs() < 1e-15);
        assert!((v - 0.55070).abs() < 1e-5);
        let r = random_model(5, 2);
        assert!((r.exact_phi(0.7, &[0.0; 5]).unwrap() - r.c_eta(0.7)).abs() < 1e-15);
    }

    #[test]
    fn exact_phi_maximized_at_zero() {
        let r = random_model(6, 8);
        let oracle = r.phi_oracle(1.3).unwrap();
        let at0 = oracle.value(&[0.0; 6]);
        let mut rng = seed::stream(1);
        for _ in 0..200 {
            let t: Vec<f64> = (0..6).map(|_| StandardNormal.sample(&mut rng)).collect();
            let v = oracle.value(&t);
            assert!(v > 0.0 && v <= at0 && at0 <= 1.0);
        }
    }

    #[test]
    fn sample_counts_and_determinism() {
        let m = random_model(5, 3);
        let s = m.sample(3, 1.0, 42).unwrap();
        assert_eq!((s.n(), s.d()), (3, 5));
        assert_eq!(s.x_data().len(), 15);
        assert_eq!(s.y_data().len(), 15);
        assert_eq!(m.sample(3, 1.0, 42).unwrap(), s);
        assert_ne!(m.sample(3, 1.0, 43).unwrap(), s);
        assert!(m.sample(0, 1.0, 1).is_err());
        assert!(m.sample(1, 0.0, 1).is_err());
    }

    #[test]
    fn scalar_sample_variance() {
        let m = scalar_model(1.0);
        let s = m.sample(100_000, 2.0, 9).unwrap();
        let n = s.n() as f64;
        let var_x = s.x_data().iter().map(|v| v * v).sum::<f64>() / n;
        let var_y = s.y_data().iter().map(|v| v * v).sum::<f64>() / n;
        assert!((var_x - 1.0).abs() < 0.05, "var_x={var_x}");
        assert!((var_y - 2.0).abs() < 0.1, "var_y={var_y}");
    }

    #[test]
    fn sample_covariance_matches_model() {
        let g = WeightedGraph::star(4).unwrap();
        let m = GffModel::from_graph(&g, 0.5).unwrap();
        let s = m.sample(200_000, 1.0, 17).unwrap();
        let sigma = m.covariance();
        let n = s.n() as f64;
        let mut emp = DMatrix::zeros(4, 4);
        for k in 0..s.n() {
            let x = s.x(k);
            for i in 0..4 {
                for j in 0..4 {
                    emp[(i, j)] += x[i] * x[j] / n;
                }
            }
        }
        // entries are O(1); standard error ~ sqrt(2/n) * scale
        assert!((emp - &sigma).abs().max() < 0.05 * linalg::max_abs(&sigma));
    }

    #[test]
    fn sample_is_thread_count_invariant() {
        let m = random_model(6, 21);
        let run = |t| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| m.sample(3 * BLOCK_ROWS + 5, 0.5, 77).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn sample_csv_round_trip() {
        let m = random_model(3, 1);
        let s = m.sample(7, 0.25, 5).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n=7,d=3,eta=0.25,seed=5\n"));
        assert_eq!(SampleSet::read_csv(&buf[..]).unwrap(), s);
        assert!(SampleSet::read_csv("n=2,d=1,eta=1.0,seed=0\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn sample_set_validation() {
        assert!(SampleSet::new(2, vec![0.0; 4], vec![0.0; 2], 1.0, 0).is_err());
        assert!(SampleSet::new(2, vec![], vec![], 1.0, 0).is_err());
        assert!(SampleSet::new(2, vec![0.0; 3], vec![0.0; 3], 1.0, 0).is_err());
        assert!(SampleSet::new(2, vec![0.0; 4], vec![0.0; 4], -1.0, 0).is_err());
    }

    #[test]
    fn phases_are_inner_products() {
        let s = SampleSet::new(2, vec![1.0, 2.0, 3.0, 4.0], vec![0.5, 0.5, -1.0, 2.0], 1.0, 0).unwrap();
        assert_eq!(s.phases(), &[1.5, 5.0]);
    }
}

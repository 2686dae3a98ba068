//! Probe lattice `{0} ∪ {e_i} ∪ {(e_i + e_j)/√2 : i < j}` and the batched
//! kernel that evaluates empirical characteristic functions on it.
//!
//! Both estimators only ever look at the lattice. For a coordinate row `c`
//! and a scale `s`,
//!
//! ```text
//! exp(i s <c, (e_i + e_j)/√2>) = exp(i s c_i/√2) · exp(i s c_j/√2)
//! ```
//!
//! so a single pass over the samples with `2d` sine/cosine pairs per row
//! yields every lattice value; the pair terms cost one complex multiply
//! each. Rows are processed in fixed-size blocks whose partial sums are
//! reduced in block order, so results do not depend on the thread count.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows per block in the batched kernels. Part of the determinism contract:
/// changing it changes floating-point summation order.
pub const BLOCK_ROWS: usize = 4096;

/// Location in the probe lattice. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Probe {
    /// `t = 0`
    Zero,
    /// `t = e_i`
    Axis(usize),
    /// `t = (e_i + e_j) / √2` with `i < j`
    Pair(usize, usize),
}

impl Probe {
    /// Dense vector of the probe in dimension `d`.
    pub fn vector(&self, d: usize) -> Vec<f64> {
        let mut t = vec![0.0; d];
        match *self {
            Probe::Zero => {}
            Probe::Axis(i) => t[i] = 1.0,
            Probe::Pair(i, j) => {
                t[i] = std::f64::consts::FRAC_1_SQRT_2;
                t[j] = std::f64::consts::FRAC_1_SQRT_2;
            }
        }
        t
    }

    /// Every lattice probe in canonical order: zero, axes, then pairs in
    /// row-major upper-triangular order.
    pub fn lattice(d: usize) -> impl Iterator<Item = Probe> {
        std::iter::once(Probe::Zero)
            .chain((0..d).map(Probe::Axis))
            .chain((0..d).flat_map(move |i| (i + 1..d).map(move |j| Probe::Pair(i, j))))
    }

    /// Number of lattice probes in dimension `d`.
    pub fn lattice_size(d: usize) -> usize {
        1 + d + d * d.saturating_sub(1) / 2
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Probe::Zero => write!(f, "0"),
            Probe::Axis(i) => write!(f, "e{i}"),
            Probe::Pair(i, j) => write!(f, "(e{i}+e{j})/sqrt2"),
        }
    }
}

/// Index of the pair `(i, j)`, `i < j`, in row-major upper-triangular order.
#[inline]
pub fn pair_index(i: usize, j: usize, d: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

/// Unnormalized lattice sums `Σ_k exp(i(phase_k + s<c_k, t>))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSums {
    pub n: usize,
    pub d: usize,
    pub zero: Complex64,
    pub axis: Vec<Complex64>,
    pub pair: Vec<Complex64>,
}

impl LatticeSums {
    fn zeros(d: usize) -> Self {
        Self {
            n: 0,
            d,
            zero: Complex64::new(0.0, 0.0),
            axis: vec![Complex64::new(0.0, 0.0); d],
            pair: vec![Complex64::new(0.0, 0.0); d * d.saturating_sub(1) / 2],
        }
    }

    fn add(&mut self, other: &Self) {
        self.n += other.n;
        self.zero += other.zero;
        for (a, b) in self.axis.iter_mut().zip(&other.axis) {
            *a += b;
        }
        for (a, b) in self.pair.iter_mut().zip(&other.pair) {
            *a += b;
        }
    }

    /// Normalized value `(1/n) Σ_k ...` at a probe.
    pub fn mean(&self, probe: Probe) -> Complex64 {
        let s = match probe {
            Probe::Zero => self.zero,
            Probe::Axis(i) => self.axis[i],
            Probe::Pair(i, j) => self.pair[pair_index(i, j, self.d)],
        };
        s / self.n as f64
    }
}

/// Evaluate the lattice sums for `n = coords.len() / d` rows.
///
/// `coords` is row-major `n × d`; `phase`, when given, holds one extra phase
/// per row. `scale` multiplies every probe vector.
pub fn lattice_sums(coords: &[f64], d: usize, scale: f64, phase: Option<&[f64]>) -> LatticeSums {
    assert!(d > 0 && coords.len().is_multiple_of(d), "coords must be n × d");
    let n = coords.len() / d;
    if let Some(p) = phase {
        assert_eq!(p.len(), n, "one phase per row");
    }
    let block = BLOCK_ROWS * d;
    let partials: Vec<LatticeSums> = coords
        .par_chunks(block)
        .enumerate()
        .map(|(b, chunk)| {
            let offset = b * BLOCK_ROWS;
            let ph = phase.map(|p| &p[offset..offset + chunk.len() / d]);
            block_sums(chunk, d, scale, ph)
        })
        .collect();
    let mut total = LatticeSums::zeros(d);
    for p in &partials {
        total.add(p);
    }
    total
}

fn block_sums(chunk: &[f64], d: usize, scale: f64, phase: Option<&[f64]>) -> LatticeSums {
    let mut acc = LatticeSums::zeros(d);
    let half = scale * std::f64::consts::FRAC_1_SQRT_2;
    let mut full = vec![Complex64::new(0.0, 0.0); d];
    let mut halfv = vec![Complex64::new(0.0, 0.0); d];
    for (k, row) in chunk.chunks_exact(d).enumerate() {
        let w = match phase {
            Some(p) => Complex64::cis(p[k]),
            None => Complex64::new(1.0, 0.0),
        };
        for (i, &c) in row.iter().enumerate() {
            full[i] = Complex64::cis(scale * c);
            halfv[i] = Complex64::cis(half * c);
        }
        acc.zero += w;
        let mut idx = 0;
        for i in 0..d {
            acc.axis[i] += w * full[i];
            let wi = w * halfv[i];
            for hj in &halfv[i + 1..] {
                acc.pair[idx] += wi * hj;
                idx += 1;
            }
        }
        acc.n += 1;
    }
    acc
}

/// `log|φ(t)|` on the whole probe lattice, either measured from samples or
/// computed from a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeLogModuli {
    pub d: usize,
    pub zero: f64,
    pub axis: Vec<f64>,
    pub pair: Vec<f64>,
}

impl ProbeLogModuli {
    /// Log-moduli of normalized lattice sums; any modulus at or below
    /// `floor` is reported as degenerate.
    pub fn from_sums(sums: &LatticeSums, floor: f64) -> Result<Self> {
        let lm = |probe: Probe| -> Result<f64> {
            let modulus = sums.mean(probe).norm();
            if !(modulus > floor) || modulus == 0.0 {
                return Err(Error::DegenerateCharFn {
                    probe,
                    modulus,
                    floor,
                });
            }
            Ok(modulus.ln())
        };
        Self::try_from_fn(sums.d, lm)
    }

    /// Fill the lattice from a closed-form log-modulus.
    pub fn from_fn<F: FnMut(Probe) -> f64>(d: usize, mut f: F) -> Self {
        Self::try_from_fn(d, |p| Ok(f(p))).expect("infallible")
    }

    pub fn try_from_fn<F: FnMut(Probe) -> Result<f64>>(d: usize, mut f: F) -> Result<Self> {
        let zero = f(Probe::Zero)?;
        let axis = (0..d).map(|i| f(Probe::Axis(i))).collect::<Result<Vec<_>>>()?;
        let mut pair = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                pair.push(f(Probe::Pair(i, j))?);
            }
        }
        Ok(Self { d, zero, axis, pair })
    }

    pub fn get(&self, probe: Probe) -> f64 {
        match probe {
            Probe::Zero => self.zero,
            Probe::Axis(i) => self.axis[i],
            Probe::Pair(i, j) => self.pair[pair_index(i, j, self.d)],
        }
    }
}

//! Weighted graphs, their Laplacians, and random graph generation.
//!
//! Vertices are 0-indexed. Edges are kept as a sorted list of `(i, j, w)`
//! triples with `i < j`; dense matrices are only built for the Laplacian.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected graph on `d` vertices with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    d: usize,
    edges: Vec<Edge>,
}

/// Named deterministic graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    Path,
    Cycle,
    Complete,
    Star,
}

impl WeightedGraph {
    /// Build a graph from `(i, j, w)` triples. Endpoint order is normalized
    /// to `i < j`; self-loops, duplicates, out-of-range endpoints and
    /// non-positive or non-finite weights are rejected.
    pub fn new<I>(d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if d == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= d || b >= d {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for d={d}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive weight {w}"
                )));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { i, j, w });
        }
        out.sort_by_key(|e| (e.i, e.j));
        if let Some(pair) = out.windows(2).find(|p| (p[0].i, p[0].j) == (p[1].i, p[1].j)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].i, pair[0].j
            )));
        }
        Ok(Self { d, edges: out })
    }

    pub fn empty(d: usize) -> Result<Self> {
        Self::new(d, std::iter::empty())
    }

    pub fn path(d: usize) -> Result<Self> {
        Self::new(d, (1..d).map(|i| (i - 1, i, 1.0)))
    }

    /// Cycle on `d >= 3` vertices.
    pub fn cycle(d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidGraph(format!("a cycle needs d >= 3, got {d}")));
        }
        Self::new(d, (0..d).map(|i| (i, (i + 1) % d, 1.0)))
    }

    pub fn complete(d: usize) -> Result<Self> {
        Self::new(
            d,
            (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j, 1.0))),
        )
    }

    /// Star with centre at vertex 0.
    pub fn star(d: usize) -> Result<Self> {
        Self::new(d, (1..d).map(|j| (0, j, 1.0)))
    }

    pub fn family(family: GraphFamily, d: usize) -> Result<Self> {
        match family {
            GraphFamily::Path => Self::path(d),
            GraphFamily::Cycle => Self::cycle(d),
            GraphFamily::Complete => Self::complete(d),
            GraphFamily::Star => Self::star(d),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Unweighted edge set as `(i, j)` pairs with `i < j`.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().fold(0.0, |a, e| a.max(e.w))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.i == v || e.j == v).count()
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.d, self.d);
        for e in &self.edges {
            a[(e.i, e.j)] = e.w;
            a[(e.j, e.i)] = e.w;
        }
        a
    }

    /// `D - A` with `D_ii = sum_j A_ij`.
    pub fn laplacian(&self) -> LaplacianMatrix {
        let mut l = DMatrix::zeros(self.d, self.d);
        for e in &self.edges {
            l[(e.i, e.j)] -= e.w;
            l[(e.j, e.i)] -= e.w;
            l[(e.i, e.i)] += e.w;
            l[(e.j, e.j)] += e.w;
        }
        LaplacianMatrix(l)
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.d)?;
        Self::new(
            self.d,
            self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.w)),
        )
    }

    /// Serialize as an edge list: `d=<int>` then one `i j w` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("d={}\n", self.d);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.i, e.j, e.w);
        }
        s
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    /// Parse an edge list. Blank lines and lines starting with `#` are
    /// skipped.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut d = None;
        let mut edges = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if d.is_none() {
                let v = t.strip_prefix("d=").ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "expected header `d=<int>`".into(),
                })?;
                d = Some(v.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?);
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `i j w`, got {} fields", fields.len()),
                });
            }
            let perr = |m: String| Error::Parse { line: lineno, msg: m };
            let i = fields[0].parse::<usize>().map_err(|e| perr(e.to_string()))?;
            let j = fields[1].parse::<usize>().map_err(|e| perr(e.to_string()))?;
            let w = fields[2].parse::<f64>().map_err(|e| perr(e.to_string()))?;
            edges.push((i, j, w));
        }
        let d = d.ok_or(Error::Parse {
            line: 0,
            msg: "missing `d=<int>` header".into(),
        })?;
        Self::new(d, edges)
    }
}

impl FromStr for WeightedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::read_edge_list(s.as_bytes())
    }
}

pub(crate) fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    let mut seen = vec![false; d];
    if perm.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: perm.len(),
        });
    }
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
    }
    Ok(())
}

/// Erdős–Rényi `G(d, p)`: each unordered pair is an edge with probability
/// `p`, independently, with unit weight.
pub fn sample_erdos_renyi<R: Rng + ?Sized>(d: usize, p: f64, rng: &mut R) -> Result<WeightedGraph> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in (0, 1], got {p}"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if p >= 1.0 || rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    WeightedGraph::new(d, edges)
}

/// Connectivity threshold `log(d)/d` of the Erdős–Rényi model.
pub fn er_connectivity_threshold(d: usize) -> f64 {
    (d as f64).ln() / d as f64
}

/// Dense graph Laplacian `D - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix(DMatrix<f64>);

impl LaplacianMatrix {
    /// Wrap a dense matrix after checking the Laplacian invariants: symmetry,
    /// zero row sums, nonpositive off-diagonal entries and positive
    /// semidefiniteness.
    pub fn try_from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m.ncols(),
            });
        }
        let scale = linalg::max_abs(&m).max(1.0);
        for i in 0..d {
            let row: f64 = m.row(i).iter().sum();
            if row.abs() > 1e-12 * d as f64 * scale {
                return Err(Error::InvalidGraph(format!("row {i} sums to {row}")));
            }
            for j in 0..d {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidGraph("matrix is not symmetric".into()));
                }
                if i != j && m[(i, j)] > 0.0 {
                    return Err(Error::InvalidGraph(format!(
                        "positive off-diagonal entry at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn d(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

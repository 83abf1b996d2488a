//! Filtered simplicial complexes and Vietoris–Rips filtrations.
//!
//! Vertices keep the order in which they were given. Cup products depend on
//! this order, so it is never rearranged.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

/// A simplex as a strictly increasing list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Input("a simplex needs at least one vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "simplex vertices must be strictly increasing, got {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts the vertices first; repeated vertices are an error.
    pub fn from_unordered(mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    #[inline]
    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces; the `k`-th face omits vertex `k`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |k| {
            let mut v = self.0.clone();
            v.remove(k);
            Simplex(v)
        })
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A finite simplicial complex with a monotone filtration value per simplex.
///
/// Simplices are stored in the canonical order: by value, then dimension,
/// then lexicographically by vertices. For every filtration value `t`, the
/// subcomplex `X_t` is a prefix of this order.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    values: Vec<f64>,
    index: BTreeMap<Simplex, usize>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<(usize, usize)>>,
    by_dim: Vec<Vec<usize>>,
    grid: Vec<f64>,
    grid_prefix: Vec<usize>,
    vertex_count: usize,
}

impl PartialEq for FilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices && self.values == other.values
    }
}

impl FilteredComplex {
    /// Validates face closure and monotonicity, then sorts canonically.
    pub fn from_explicit(pairs: Vec<(Simplex, f64)>) -> Result<Self> {
        let mut seen: BTreeMap<&Simplex, f64> = BTreeMap::new();
        for (s, v) in &pairs {
            if !v.is_finite() {
                return Err(Error::Input(format!(
                    "simplex {s} has non-finite value {v}"
                )));
            }
            if seen.insert(s, *v).is_some() {
                return Err(Error::DuplicateSimplex(format!("{s}")));
            }
        }
        for (s, v) in &pairs {
            for face in s.facets() {
                match seen.get(&face) {
                    None => {
                        return Err(Error::MissingFace {
                            simplex: format!("{s}"),
                            face: format!("{face}"),
                        })
                    }
                    Some(&fv) if fv > *v => {
                        return Err(Error::Monotonicity {
                            simplex: format!("{s}"),
                            value: *v,
                            face: format!("{face}"),
                            face_value: fv,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Self::build(pairs))
    }

    /// Builds from pairs already known to be closed and monotone.
    fn build(mut pairs: Vec<(Simplex, f64)>) -> Self {
        pairs.sort_by(canonical_cmp);
        let (simplices, values): (Vec<Simplex>, Vec<f64>) = pairs.into_iter().unzip();
        let index: BTreeMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut facets = Vec::with_capacity(simplices.len());
        let mut cofacets: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); simplices.len()];
        let mut by_dim: Vec<Vec<usize>> = Vec::new();
        for (i, s) in simplices.iter().enumerate() {
            let fs: Vec<usize> = s.facets().map(|f| index[&f]).collect();
            for (k, &f) in fs.iter().enumerate() {
                cofacets[f].push((i, k));
            }
            facets.push(fs);
            if by_dim.len() <= s.dim() {
                by_dim.resize(s.dim() + 1, Vec::new());
            }
            by_dim[s.dim()].push(i);
        }
        for c in cofacets.iter_mut() {
            c.sort_unstable();
        }
        let mut grid: Vec<f64> = Vec::new();
        let mut grid_prefix = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            if grid.last() != Some(&v) {
                if !grid.is_empty() {
                    grid_prefix.push(i);
                }
                grid.push(v);
            }
        }
        if !grid.is_empty() {
            grid_prefix.push(values.len());
        }
        let vertex_count = by_dim.first().map_or(0, Vec::len);
        FilteredComplex {
            simplices,
            values,
            index,
            facets,
            cofacets,
            by_dim,
            grid,
            grid_prefix,
            vertex_count,
        }
    }

    pub fn empty() -> Self {
        Self::build(Vec::new())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    #[inline]
    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn simplices(&self) -> impl Iterator<Item = (&Simplex, f64)> {
        self.simplices.iter().zip(self.values.iter().copied())
    }

    pub fn index_of(&self, vertices: &[u32]) -> Option<usize> {
        // BTreeMap<Simplex, _> cannot be queried by slice, so build the key
        self.index.get(&Simplex(vertices.to_vec())).copied()
    }

    pub(crate) fn index_of_simplex(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    #[inline]
    pub fn dim_of(&self, i: usize) -> usize {
        self.simplices[i].dim()
    }

    /// Indices of the codimension-one faces of simplex `i`, in face order.
    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    /// `(cofacet index, position of the omitted vertex)` pairs, sorted.
    pub fn cofacets_of(&self, i: usize) -> &[(usize, usize)] {
        &self.cofacets[i]
    }

    /// Canonical indices of all `p`-simplices, increasing.
    pub fn simplices_of_dim(&self, p: usize) -> &[usize] {
        self.by_dim.get(p).map_or(&[], Vec::as_slice)
    }

    /// The critical values `s_1 < ... < s_m`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Number of simplices with value `<= grid()[k]`.
    pub fn grid_prefix(&self, k: usize) -> usize {
        self.grid_prefix[k]
    }

    /// Number of simplices with value `<= t`.
    pub fn prefix_len(&self, t: f64) -> usize {
        self.values.partition_point(|&v| v <= t)
    }

    /// Grid index of `t` snapped down, `None` when `t` lies below every value.
    pub fn grid_index(&self, t: f64) -> Option<usize> {
        self.grid.partition_point(|&s| s <= t).checked_sub(1)
    }

    /// The simplices of `X_t`.
    pub fn restrict(&self, t: f64) -> &[Simplex] {
        &self.simplices[..self.prefix_len(t)]
    }

    /// Applies `f` to every filtration value. `f` must be non-decreasing.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let pairs = self.simplices().map(|(s, v)| (s.clone(), f(v))).collect();
        Self::build(pairs)
    }

    /// Every face present with a value no larger than its cofacet.
    pub fn check_monotone(&self) -> bool {
        (0..self.len()).all(|i| {
            self.facets[i]
                .iter()
                .all(|&f| self.values[f] <= self.values[i])
        })
    }

    pub fn describe(&self) -> String {
        let counts: Vec<usize> = self.by_dim.iter().map(Vec::len).collect();
        format!(
            "{} simplices, counts by dimension {:?}, {} critical values",
            self.len(),
            counts,
            self.grid.len()
        )
    }
}

fn canonical_cmp(a: &(Simplex, f64), b: &(Simplex, f64)) -> Ordering {
    a.1.total_cmp(&b.1)
        .then(a.0.dim().cmp(&b.0.dim()))
        .then_with(|| a.0.cmp(&b.0))
}

/// Distance used for point clouds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    LInfinity,
}

/// Metric data for a Vietoris–Rips filtration.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricInput {
    Points {
        coords: Vec<Vec<f64>>,
        metric: Metric,
    },
    Distances(DistanceMatrix),
}

/// A full symmetric distance matrix with zero diagonal. The triangle
/// inequality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_full(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Input(format!(
                "distance matrix of size {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::Input(format!("nonzero diagonal entry at ({i},{i})")));
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::Input(format!("invalid distance {d} at ({i},{j})")));
                }
                if d != data[j * n + i] {
                    return Err(Error::Input(format!(
                        "asymmetric distance matrix: d({i},{j}) = {d} but d({j},{i}) = {}",
                        data[j * n + i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    /// `rows[i]` holds `d(i,0), ..., d(i,i-1)`; the diagonal may be included.
    pub fn from_lower_triangular(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = alloc::vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            let entries = match row.len() {
                l if l == i => row.as_slice(),
                l if l == i + 1 => {
                    if row[i] != 0.0 {
                        return Err(Error::Input(format!("nonzero diagonal entry in row {i}")));
                    }
                    &row[..i]
                }
                l => {
                    return Err(Error::Input(format!(
                        "row {i} of a lower-triangular matrix needs {i} entries, got {l}"
                    )))
                }
            };
            for (j, &d) in entries.iter().enumerate() {
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self::from_full(n, data)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

impl MetricInput {
    pub fn distance_matrix(&self) -> Result<DistanceMatrix> {
        match self {
            MetricInput::Distances(d) => Ok(d.clone()),
            MetricInput::Points { coords, metric } => {
                let n = coords.len();
                if let Some(dim) = coords.first().map(Vec::len) {
                    if let Some(bad) = coords.iter().position(|c| c.len() != dim) {
                        return Err(Error::Input(format!(
                            "point {bad} has {} coordinates, expected {dim}",
                            coords[bad].len()
                        )));
                    }
                }
                if coords.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::Input("non-finite coordinate".into()));
                }
                let mut data = alloc::vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..i {
                        let diffs = coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b).abs());
                        let d = match metric {
                            Metric::Euclidean => libm::sqrt(diffs.map(|x| x * x).sum()),
                            Metric::LInfinity => diffs.fold(0.0, f64::max),
                        };
                        data[i * n + j] = d;
                        data[j * n + i] = d;
                    }
                }
                DistanceMatrix::from_full(n, data)
            }
        }
    }
}

/// The Vietoris–Rips filtration: every simplex with at most `max_dim + 1`
/// vertices and diameter `<= max_scale`, valued by its diameter.
pub fn build_vr(input: &MetricInput, max_dim: usize, max_scale: f64) -> Result<FilteredComplex> {
    if max_scale.is_nan() {
        return Err(Error::Input("max_scale is NaN".into()));
    }
    let d = input.distance_matrix()?;
    let n = d.len();
    let mut pairs: Vec<(Simplex, f64)> = Vec::new();
    // neighbours with a larger index, within range
    let upper: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| d.get(i, j) <= max_scale)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    // depth-first clique expansion: (vertices, value, candidate extensions)
    let mut stack: Vec<(Vec<u32>, f64, Vec<u32>)> = Vec::new();
    for v in (0..n as u32).rev() {
        if max_scale >= 0.0 {
            stack.push((alloc::vec![v], 0.0, upper[v as usize].clone()));
        }
    }
    while let Some((verts, value, cands)) = stack.pop() {
        if verts.len() <= max_dim {
            for (k, &w) in cands.iter().enumerate().rev() {
                let new_value = verts
                    .iter()
                    .map(|&u| d.get(u as usize, w as usize))
                    .fold(value, f64::max);
                let rest: Vec<u32> = cands[k + 1..]
                    .iter()
                    .copied()
                    .filter(|&x| d.get(w as usize, x as usize) <= max_scale)
                    .collect();
                let mut next = verts.clone();
                next.push(w);
                stack.push((next, new_value, rest));
            }
        }
        pairs.push((Simplex(verts), value));
    }
    Ok(FilteredComplex::build(pairs))
}

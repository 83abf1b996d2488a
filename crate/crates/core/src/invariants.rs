//! Step-function invariants on the poset of closed intervals and their
//! Möbius inversion.
//!
//! An invariant lives on a grid `s_0 < ... < s_{m-1}`. A query `[a, b]`
//! snaps both endpoints down to the grid, so cells are half-open
//! `[s_i, s_{i+1})` and every filtration is right-continuous. Column `m`
//! stands for `b = ∞`. Below `s_0` every invariant is zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Closed interval `[s_lo, s_hi]` of grid indices; `hi == m` means `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridInterval {
    pub lo: usize,
    pub hi: usize,
}

impl GridInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(lo <= hi);
        GridInterval { lo, hi }
    }

    /// The closed cell range of a half-open bar `[s_birth, s_death)`;
    /// `death == None` means `∞`.
    pub fn from_half_open(birth: usize, death: Option<usize>, m: usize) -> Self {
        match death {
            Some(d) => GridInterval::new(birth, d - 1),
            None => GridInterval::new(birth, m),
        }
    }

    pub fn contains(&self, other: &GridInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_index(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }

    /// Closed endpoints as filtration values.
    pub fn closed_bounds(&self, grid: &[f64]) -> (f64, f64) {
        (grid[self.lo], grid_value(grid, self.hi))
    }

    /// Half-open endpoints `[birth, death)`. `None` when the interval ends at
    /// the last finite grid value, which no half-open bar on this grid can do.
    pub fn half_open_bounds(&self, grid: &[f64]) -> Option<(f64, f64)> {
        let m = grid.len();
        if self.hi == m {
            Some((grid[self.lo], f64::INFINITY))
        } else if self.hi + 1 < m {
            Some((grid[self.lo], grid[self.hi + 1]))
        } else {
            None
        }
    }
}

fn grid_value(grid: &[f64], k: usize) -> f64 {
    grid.get(k).copied().unwrap_or(f64::INFINITY)
}

/// Largest grid index with value `<= t`. `∞` maps to `m`.
pub fn snap_down(grid: &[f64], t: f64) -> Option<usize> {
    if t == f64::INFINITY {
        return Some(grid.len());
    }
    grid.partition_point(|&s| s <= t).checked_sub(1)
}

/// Union of two grids.
pub fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = a.iter().chain(b).copied().collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// The shape of an invariant's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codomain {
    Scalar,
    /// Finite prefix of a sequence indexed by depth `1..=len`.
    Sequence(usize),
    /// Row-major matrix.
    Matrix {
        rows: usize,
        cols: usize,
    },
}

impl Codomain {
    pub fn width(&self) -> usize {
        match *self {
            Codomain::Scalar => 1,
            Codomain::Sequence(n) => n,
            Codomain::Matrix { rows, cols } => rows * cols,
        }
    }
}

/// Entrywise partial order.
pub fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// A natural-number-valued invariant, constant on grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct StepInvariant {
    grid: Vec<f64>,
    codomain: Codomain,
    values: Vec<u32>,
}

impl StepInvariant {
    pub fn zero(grid: Vec<f64>, codomain: Codomain) -> Self {
        let m = grid.len();
        let values = vec![0; m * (m + 1) * codomain.width()];
        StepInvariant {
            grid,
            codomain,
            values,
        }
    }

    /// Fills every cell `(i, j)`, `i <= j <= m`, from `f`.
    pub fn from_fn(
        grid: Vec<f64>,
        codomain: Codomain,
        mut f: impl FnMut(usize, usize, &mut [u32]),
    ) -> Self {
        let mut inv = Self::zero(grid, codomain);
        let m = inv.m();
        for i in 0..m {
            for j in i..=m {
                f(i, j, inv.cell_mut(i, j));
            }
        }
        inv
    }

    /// Builds from values on a (strictly increasing, finite) grid.
    pub fn from_cells(
        grid: Vec<f64>,
        codomain: Codomain,
        cells: &[(GridInterval, Vec<u32>)],
    ) -> Result<Self> {
        if grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::Input(
                "grid must be finite and strictly increasing".into(),
            ));
        }
        let mut inv = Self::zero(grid, codomain);
        let m = inv.m();
        for (iv, v) in cells {
            if iv.lo > iv.hi || iv.hi > m || iv.lo >= m {
                return Err(Error::Input(format!(
                    "interval {iv:?} outside a grid of size {m}"
                )));
            }
            if v.len() != codomain.width() {
                return Err(Error::Codomain(format!(
                    "value of length {} for codomain {codomain:?}",
                    v.len()
                )));
            }
            inv.cell_mut(iv.lo, iv.hi).copy_from_slice(v);
        }
        Ok(inv)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    #[inline]
    fn m(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        (i * (self.m() + 1) + j) * self.codomain.width()
    }

    /// Value on the closed grid interval `[s_i, s_j]` (`j == m` is `∞`).
    pub fn cell(&self, i: usize, j: usize) -> &[u32] {
        let o = self.offset(i, j);
        &self.values[o..o + self.codomain.width()]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let o = self.offset(i, j);
        let w = self.codomain.width();
        &mut self.values[o..o + w]
    }

    /// Value on `[a, b]` after snapping both endpoints down. Requires `a <= b`.
    pub fn eval(&self, a: f64, b: f64) -> Vec<u32> {
        match self.eval_ref(a, b) {
            Some(v) => v.to_vec(),
            None => vec![0; self.codomain.width()],
        }
    }

    /// Borrowing form of [`Self::eval`]; `None` means zero.
    pub fn eval_ref(&self, a: f64, b: f64) -> Option<&[u32]> {
        let i = snap_down(&self.grid, a)?;
        let j = snap_down(&self.grid, b)?;
        if i >= self.m() {
            return None;
        }
        Some(self.cell(i, j.max(i)))
    }

    /// First entry of [`Self::eval`]; the value itself for scalar invariants.
    pub fn eval_scalar(&self, a: f64, b: f64) -> u32 {
        self.eval_ref(a, b).map_or(0, |v| v[0])
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (GridInterval, &[u32])> + '_ {
        let m = self.m();
        (0..m).flat_map(move |i| (i..=m).map(move |j| (GridInterval::new(i, j), self.cell(i, j))))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Values never increase when the interval grows.
    pub fn is_antitone(&self) -> bool {
        let m = self.m();
        for i in 0..m {
            for j in i..=m {
                let v = self.cell(i, j);
                if i > 0 && !dominates(v, self.cell(i - 1, j)) {
                    return false;
                }
                if j < m && !dominates(v, self.cell(i, j + 1)) {
                    return false;
                }
            }
        }
        true
    }

    /// The same invariant on a finer grid that contains this one's grid.
    pub fn resample(&self, grid: &[f64]) -> StepInvariant {
        StepInvariant::from_fn(grid.to_vec(), self.codomain, |i, j, out| {
            let b = grid_value(grid, j);
            if let Some(v) = self.eval_ref(grid[i], b) {
                out.copy_from_slice(v);
            }
        })
    }

    /// Pointwise combination on the merged grid.
    pub fn combine(
        &self,
        other: &StepInvariant,
        f: impl Fn(u32, u32) -> u32,
    ) -> Result<StepInvariant> {
        if self.codomain != other.codomain {
            return Err(Error::Codomain(format!(
                "{:?} versus {:?}",
                self.codomain, other.codomain
            )));
        }
        let grid = merge_grids(&self.grid, &other.grid);
        let a = self.resample(&grid);
        let b = other.resample(&grid);
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Ok(StepInvariant {
            grid,
            codomain: self.codomain,
            values,
        })
    }

    /// Shifts every grid value by `delta`.
    pub fn shifted(&self, delta: f64) -> StepInvariant {
        StepInvariant {
            grid: self.grid.iter().map(|g| g + delta).collect(),
            codomain: self.codomain,
            values: self.values.clone(),
        }
    }

    /// Extracts one entry of a sequence or matrix invariant as a scalar one.
    pub fn component(&self, k: usize) -> StepInvariant {
        StepInvariant::from_fn(self.grid.clone(), Codomain::Scalar, |i, j, out| {
            out[0] = self.cell(i, j)[k];
        })
    }
}

/// A finitely supported integer-valued function on grid intervals, possibly
/// negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDiagram {
    pub grid: Vec<f64>,
    pub codomain: Codomain,
    pub entries: BTreeMap<GridInterval, Vec<i64>>,
}

impl SignedDiagram {
    pub fn empty(grid: Vec<f64>, codomain: Codomain) -> Self {
        SignedDiagram {
            grid,
            codomain,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, iv: GridInterval) -> Vec<i64> {
        self.entries
            .get(&iv)
            .cloned()
            .unwrap_or_else(|| vec![0; self.codomain.width()])
    }

    /// Multiplicity at the snapped closed interval `[a, b]`.
    pub fn at(&self, a: f64, b: f64) -> Vec<i64> {
        match (snap_down(&self.grid, a), snap_down(&self.grid, b)) {
            (Some(i), Some(j)) if i < self.grid.len() => self.get(GridInterval::new(i, j.max(i))),
            _ => vec![0; self.codomain.width()],
        }
    }

    pub fn has_negative(&self) -> bool {
        self.entries.values().flatten().any(|&v| v < 0)
    }
}

/// Four-term alternating sum; entrywise for sequences and matrices.
pub fn mobius_invert(inv: &StepInvariant) -> SignedDiagram {
    let m = inv.grid.len();
    let w = inv.codomain.width();
    let val = |i: Option<usize>, j: usize, k: usize| -> i64 {
        match i {
            Some(i) if j <= m => inv.cell(i, j)[k] as i64,
            _ => 0,
        }
    };
    let mut out = SignedDiagram::empty(inv.grid.clone(), inv.codomain);
    for i in 0..m {
        let below = i.checked_sub(1);
        for j in i..=m {
            let d: Vec<i64> = (0..w)
                .map(|k| {
                    val(Some(i), j, k) - val(below, j, k) - val(Some(i), j + 1, k)
                        + val(below, j + 1, k)
                })
                .collect();
            if d.iter().any(|&x| x != 0) {
                out.entries.insert(GridInterval::new(i, j), d);
            }
        }
    }
    out
}

/// Sums the diagram over all intervals containing each cell. Fails when a
/// sum is negative.
pub fn mobius_sum(dgm: &SignedDiagram) -> Result<StepInvariant> {
    let m = dgm.grid.len();
    let w = dgm.codomain.width();
    let mut acc = vec![0i64; m * (m + 1) * w];
    let idx = |i: usize, j: usize| (i * (m + 1) + j) * w;
    for (iv, v) in &dgm.entries {
        if iv.hi > m || iv.lo >= m || iv.lo > iv.hi {
            return Err(Error::Input(format!(
                "interval {iv:?} outside a grid of size {m}"
            )));
        }
        acc[idx(iv.lo, iv.hi)..idx(iv.lo, iv.hi) + w]
            .iter_mut()
            .zip(v)
            .for_each(|(a, x)| *a += x);
    }
    // suffix sums: over c <= i (rows upward) and d >= j (columns rightward)
    for i in 0..m {
        for j in (i..m).rev() {
            for k in 0..w {
                acc[idx(i, j) + k] += acc[idx(i, j + 1) + k];
            }
        }
    }
    for i in 1..m {
        for j in i..=m {
            for k in 0..w {
                acc[idx(i, j) + k] += acc[idx(i - 1, j) + k];
            }
        }
    }
    let mut inv = StepInvariant::zero(dgm.grid.clone(), dgm.codomain);
    for i in 0..m {
        for j in i..=m {
            for k in 0..w {
                let v = acc[idx(i, j) + k];
                inv.cell_mut(i, j)[k] = u32::try_from(v).map_err(|_| {
                    Error::Consistency(format!(
                        "Möbius sum {v} at cell ({i},{j}) is not a natural number"
                    ))
                })?;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar(grid: &[f64], f: impl Fn(usize, usize) -> u32) -> StepInvariant {
        StepInvariant::from_fn(grid.to_vec(), Codomain::Scalar, |i, j, out| {
            out[0] = f(i, j)
        })
    }

    #[test]
    fn snapping() {
        let inv = scalar(&[0.0, 1.0, 2.0], |i, j| (10 * i + j) as u32);
        assert_eq!(inv.eval_scalar(0.5, 1.5), 1);
        assert_eq!(inv.eval_scalar(2.0, 7.0), 22);
        assert_eq!(inv.eval_scalar(2.0, f64::INFINITY), 23);
        assert_eq!(inv.eval_scalar(-1.0, 1.0), 0);
    }

    #[test]
    fn interval_module_rank() {
        // K[1,2] on grid 0..3 as a closed interval
        let inv = scalar(&[0.0, 1.0, 2.0, 3.0], |i, j| (1 <= i && j <= 2) as u32);
        let d = mobius_invert(&inv);
        assert_eq!(d.entries.len(), 1);
        assert_eq!(d.get(GridInterval::new(1, 2)), vec![1]);
    }

    #[test]
    fn two_interval_overlap_is_negative() {
        // max of indicators of [0,1] and [1,2] on a 4-point grid
        let inv = scalar(&[0.0, 1.0, 2.0, 3.0], |i, j| {
            ((j <= 1) || (i >= 1 && j <= 2)) as u32
        });
        let d = mobius_invert(&inv);
        assert_eq!(d.get(GridInterval::new(1, 1)), vec![-1]);
        assert!(d.has_negative());
        assert_eq!(mobius_sum(&d).unwrap(), inv);
    }

    #[test]
    fn sum_of_empty_and_single_entry() {
        let grid = vec![0.0, 1.0, 2.0, 3.0];
        let empty = SignedDiagram::empty(grid.clone(), Codomain::Scalar);
        assert!(mobius_sum(&empty).unwrap().is_zero());
        let mut single = empty.clone();
        single.entries.insert(GridInterval::new(0, 2), vec![3]);
        let inv = mobius_sum(&single).unwrap();
        assert_eq!(inv.eval_scalar(0.0, 2.0), 3);
        assert_eq!(inv.eval_scalar(1.0, 1.5), 3);
        assert_eq!(inv.eval_scalar(1.0, 3.0), 0);
        assert_eq!(inv.eval_scalar(0.0, f64::INFINITY), 0);
    }

    #[test]
    fn negative_sum_is_an_error() {
        let mut d = SignedDiagram::empty(vec![0.0], Codomain::Scalar);
        d.entries.insert(GridInterval::new(0, 0), vec![-1]);
        assert!(matches!(mobius_sum(&d), Err(Error::Consistency(_))));
    }

    #[test]
    fn combine_on_merged_grid() {
        let a = scalar(&[0.0, 1.0], |i, j| (i == 0 && j == 0) as u32);
        let b = scalar(&[0.5, 2.0], |_, j| (j == 0) as u32);
        let c = a.combine(&b, u32::max).unwrap();
        assert_eq!(c.grid(), &[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(c.eval_scalar(0.0, 0.7), 1);
        assert_eq!(c.eval_scalar(0.7, 1.5), 1);
        assert_eq!(c.eval_scalar(0.2, 2.0), 0);
        assert!(a
            .combine(
                &StepInvariant::zero(vec![], Codomain::Sequence(2)),
                u32::max
            )
            .is_err());
    }

    fn random_invariant() -> impl Strategy<Value = StepInvariant> {
        (
            0usize..5,
            prop_oneof![
                Just(Codomain::Scalar),
                Just(Codomain::Matrix { rows: 2, cols: 2 })
            ],
        )
            .prop_flat_map(|(m, cod)| {
                let n = m * (m + 1) * cod.width();
                (Just(m), Just(cod), proptest::collection::vec(0u32..4, n))
            })
            .prop_map(|(m, cod, vals)| {
                let grid = (0..m).map(|k| k as f64).collect();
                let w = cod.width();
                StepInvariant::from_fn(grid, cod, |i, j, out| {
                    let o = (i * (m + 1) + j) * w;
                    out.copy_from_slice(&vals[o..o + w]);
                })
            })
    }

    proptest! {
        #[test]
        fn mobius_roundtrip(inv in random_invariant()) {
            prop_assert_eq!(mobius_sum(&mobius_invert(&inv)).unwrap(), inv);
        }

        #[test]
        fn resample_preserves_values(inv in random_invariant(), extra in proptest::collection::vec(-1.0f64..5.0, 0..4)) {
            let grid = merge_grids(inv.grid(), &extra);
            let fine = inv.resample(&grid);
            for &a in &grid {
                for &b in grid.iter().chain([f64::INFINITY].iter()) {
                    if a <= b {
                        prop_assert_eq!(fine.eval(a, b), inv.eval(a, b));
                    }
                }
            }
        }
    }
}

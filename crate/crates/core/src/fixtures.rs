//! Small filtrations with known answers, and hardcoded invariants of
//! Vietoris–Rips filtrations of infinite metric spaces.
//!
//! The circles are geodesic with circumference `2π`, so `VR_r(S¹)` is a
//! `(2l+1)`-sphere for `2πl/(2l+1) < r < 2π(l+1)/(2l+3)` and contractible
//! from `π` on. The sphere `S^n` is homotopy equivalent to its Rips complex
//! below `ζ_n = arccos(-1/(n+1))`. Where the homotopy type is not known the
//! invariants take the smallest value allowed by antitonicity.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::complex::{FilteredComplex, Metric, MetricInput, Simplex};
use crate::cup::{invariant_max, invariant_sum};
use crate::invariants::{Codomain, GridInterval, StepInvariant};

/// Number of sphere blocks kept for the Rips complex of the circle; the
/// blocks accumulate at `π`.
pub const CIRCLE_BLOCKS: usize = 25;

/// Closes a family of simplices under faces. `value` assigns each simplex
/// its filtration value and must be monotone.
fn closure(tops: &[Vec<u32>], value: impl Fn(&[u32]) -> f64) -> FilteredComplex {
    let mut all: BTreeMap<Vec<u32>, ()> = BTreeMap::new();
    for t in tops {
        let n = t.len();
        for mask in 1u32..(1 << n) {
            let s: Vec<u32> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| t[i])
                .collect();
            all.insert(s, ());
        }
    }
    let pairs = all
        .into_keys()
        .map(|s| {
            let v = value(&s);
            (Simplex::new(s).expect("sorted vertices"), v)
        })
        .collect();
    FilteredComplex::from_explicit(pairs).expect("fixture is a valid filtration")
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// A torus that acquires a loop `α` at 0, a second loop `β` at 1, its 2-cell
/// at 2, and a disk filling `α` at 3.
///
/// The torus is the 3×3 grid with vertex `3i + j` at position `(i, j)`.
/// Cohomology: `α` on `[0, 3)`, `β` on `[1, ∞)`, the fundamental class on
/// `[2, ∞)`.
pub fn pinched_torus() -> FilteredComplex {
    let v = |i: u32, j: u32| 3 * (i % 3) + (j % 3);
    let mut tops = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            tops.push(sorted(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]));
            tops.push(sorted(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]));
        }
    }
    let disk = vec![0, 3, 6];
    tops.push(disk.clone());
    closure(&tops, |s| {
        if s == disk.as_slice() {
            3.0
        } else if s.len() <= 2 && s.iter().all(|x| [0, 3, 6].contains(x)) {
            0.0
        } else if s.len() <= 2 && s.iter().all(|x| [0, 1, 2].contains(x)) {
            1.0
        } else {
            2.0
        }
    })
}

/// Two circles through vertex 0, born at 0 and 1, filled at 2 and 3.
pub fn two_disks() -> FilteredComplex {
    let tops = vec![vec![0, 1, 2], vec![0, 3, 4]];
    closure(&tops, |s| match s {
        [0, 1, 2] => 2.0,
        [0, 3, 4] => 3.0,
        _ if s.iter().all(|x| *x <= 2) => 0.0,
        _ => 1.0,
    })
}

/// Three vertices at 0 and three edges at 1.
pub fn triangulated_circle() -> FilteredComplex {
    closure(&[vec![0, 1], vec![1, 2], vec![0, 2]], |s| {
        if s.len() == 1 {
            0.0
        } else {
            1.0
        }
    })
}

/// The triangulated circle coned off from vertex 3 at 2.
pub fn coned_circle() -> FilteredComplex {
    let tops = vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]];
    closure(&tops, |s| match s.len() {
        1 if s[0] < 3 => 0.0,
        2 if s[1] < 3 => 1.0,
        _ => 2.0,
    })
}

/// Corners of the unit square.
pub fn unit_square() -> MetricInput {
    MetricInput::Points {
        coords: vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ],
        metric: Metric::Euclidean,
    }
}

/// `2πl/(2l+1)` for `l = 0..=CIRCLE_BLOCKS`.
pub fn circle_block_ends() -> Vec<f64> {
    (0..=CIRCLE_BLOCKS)
        .map(|l| 2.0 * PI * l as f64 / (2 * l + 1) as f64)
        .collect()
}

/// `ζ_n = arccos(-1/(n+1))`.
pub fn zeta(n: u32) -> f64 {
    libm::acos(-1.0 / (n as f64 + 1.0))
}

/// Cup-length of the Rips filtration of the circle: 1 on each block.
pub fn vr_circle_cup() -> StepInvariant {
    let mut grid = circle_block_ends();
    grid.push(PI);
    StepInvariant::from_fn(grid, Codomain::Scalar, |i, j, out| {
        out[0] = (i == j && i < CIRCLE_BLOCKS) as u32;
    })
}

/// Cup-length of the Rips filtration of the torus (`ℓ∞` product of two
/// circles): 2 on each block.
pub fn vr_torus_cup() -> StepInvariant {
    let s1 = vr_circle_cup();
    invariant_sum(&s1, &s1).expect("same codomain")
}

/// The 2-sphere's cup-length, 1 on `[0, ζ_2)`; unknown values above are
/// left at 0.
fn vr_sphere2_cup() -> StepInvariant {
    StepInvariant::from_fn(vec![0.0, zeta(2), PI], Codomain::Scalar, |i, j, out| {
        out[0] = (i == 0 && j == 0) as u32;
    })
}

/// Cup-length of the Rips filtration of `S¹ ∨ S² ∨ S¹`, the maximum over
/// the wedge summands.
pub fn vr_wedge_cup() -> StepInvariant {
    let s1 = vr_circle_cup();
    let w = invariant_max(&s1, &vr_sphere2_cup()).expect("same codomain");
    invariant_max(&w, &s1).expect("same codomain")
}

const FLAG_SHAPE: Codomain = Codomain::Matrix { rows: 3, cols: 2 };

/// Rank invariant on the grid `0 < ζ < 2π/3 < π`: `short` on `[0, ζ)`,
/// `long` on intervals inside `[0, 2π/3)` that leave `[0, ζ)`, zero on
/// everything longer.
fn flag_rank(zeta: f64, short: [u32; 6], long: [u32; 6]) -> StepInvariant {
    let grid = vec![0.0, zeta, 2.0 * PI / 3.0, PI];
    let cells = [
        (GridInterval::new(0, 0), short.to_vec()),
        (GridInterval::new(0, 1), long.to_vec()),
        (GridInterval::new(1, 1), long.to_vec()),
    ];
    StepInvariant::from_cells(grid, FLAG_SHAPE, &cells).expect("valid cells")
}

/// Rank invariant of the persistent cup module of the Rips filtration of
/// `T² ∨ S³`, degrees 1..=3 by depths 1..=2.
pub fn vr_torus_wedge_sphere3_rank() -> StepInvariant {
    flag_rank(zeta(3), [2, 0, 1, 1, 1, 0], [2, 0, 1, 1, 0, 0])
}

/// Rank invariant of the persistent cup module of the Rips filtration of
/// `(S¹ × S²) ∨ S¹`, degrees 1..=3 by depths 1..=2.
pub fn vr_s1s2_wedge_s1_rank() -> StepInvariant {
    flag_rank(zeta(2), [2, 0, 1, 0, 1, 1], [2, 0, 0, 0, 0, 0])
}

/// A persistent flag on the grid `0 < 1 < 2` that is `K¹` on `[0, 1)` and
/// `K²` on `[1, 2)`, with the structure map injective at depth 1 only.
pub fn monotonicity_lost_rank() -> StepInvariant {
    StepInvariant::from_fn(
        vec![0.0, 1.0, 2.0],
        Codomain::Sequence(2),
        |i, j, out| match (i, j) {
            (0, 0) | (0, 1) => out.copy_from_slice(&[1, 0]),
            (1, 1) => out.copy_from_slice(&[1, 1]),
            _ => {}
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for c in [
            pinched_torus(),
            two_disks(),
            triangulated_circle(),
            coned_circle(),
        ] {
            assert!(c.check_monotone());
        }
        let t = pinched_torus();
        assert_eq!(t.grid(), &[0.0, 1.0, 2.0, 3.0]);
        // 9 vertices, 27 edges, 18 triangles, plus the disk
        assert_eq!(t.len(), 9 + 27 + 19);
    }

    #[test]
    fn hardcoded_invariants_are_antitone() {
        for inv in [
            vr_circle_cup(),
            vr_torus_cup(),
            vr_wedge_cup(),
            vr_torus_wedge_sphere3_rank(),
            vr_s1s2_wedge_s1_rank(),
            monotonicity_lost_rank(),
        ] {
            assert!(inv.is_antitone());
        }
    }

    #[test]
    fn torus_and_wedge_values() {
        let t = vr_torus_cup();
        let w = vr_wedge_cup();
        assert_eq!(t.eval_scalar(1.0, 2.0), 2);
        assert_eq!(t.eval_scalar(1.0, 2.2), 0);
        assert_eq!(t.eval_scalar(2.2, 2.4), 2);
        assert_eq!(w.eval_scalar(1.0, 2.0), 1);
        assert_eq!(w.eval_scalar(PI, 4.0), 0);
        let ranks = vr_torus_wedge_sphere3_rank();
        assert_eq!(ranks.eval(0.5, 1.0), vec![2, 0, 1, 1, 1, 0]);
        assert_eq!(ranks.eval(0.5, 2.0), vec![2, 0, 1, 1, 0, 0]);
        assert_eq!(ranks.eval(0.5, 2.1), vec![0; 6]);
    }
}

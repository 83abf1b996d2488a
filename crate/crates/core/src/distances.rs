//! Erosion distance between step invariants and bottleneck distance between
//! barcodes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::invariants::{dominates, merge_grids, StepInvariant};
use crate::{Error, Result};

const TIE: f64 = 1e-12;

/// An erosion distance with the candidate thresholds that were searched.
#[derive(Debug, Clone, PartialEq)]
pub struct ErosionResult {
    /// `f64::INFINITY` when no finite threshold works.
    pub value: f64,
    pub candidates: Vec<f64>,
}

/// Erosion distance: the least `ε` with `I1([a, b]) >= I2([a-ε, b+ε])` and
/// `I2([a, b]) >= I1([a-ε, b+ε])` for all `a <= b`, entrywise.
///
/// The predicate only changes where an endpoint of a thickened interval
/// crosses a grid value, or where `a <= b` starts to bind, so the answer is
/// a difference or half-difference of grid values. It is tested strictly
/// between consecutive candidates.
pub fn erosion(i1: &StepInvariant, i2: &StepInvariant) -> Result<ErosionResult> {
    if i1.codomain() != i2.codomain() {
        return Err(Error::Codomain(format!(
            "{:?} versus {:?}",
            i1.codomain(),
            i2.codomain()
        )));
    }
    for (name, inv) in [("first", i1), ("second", i2)] {
        if !inv.is_antitone() {
            return Err(Error::Input(format!("{name} invariant is not antitone")));
        }
    }
    let candidates = erosion_candidates(i1.grid(), i2.grid());
    let holds = |k: usize| {
        let eps = match candidates.get(k + 1) {
            Some(next) => (candidates[k] + next) / 2.0,
            None => candidates[k] + 1.0,
        };
        eroded(i1, i2, eps) && eroded(i2, i1, eps)
    };
    let last = candidates.len() - 1;
    let value = if !holds(last) {
        f64::INFINITY
    } else {
        // smallest k whose gap above satisfies the monotone predicate
        let (mut lo, mut hi) = (0, last);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if holds(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        candidates[lo]
    };
    Ok(ErosionResult { value, candidates })
}

/// `{0} ∪ {|u - v|} ∪ {|u - v| / 2}` over the merged grid, sorted, with
/// values closer than `1e-12` merged.
pub fn erosion_candidates(g1: &[f64], g2: &[f64]) -> Vec<f64> {
    let grid = merge_grids(g1, g2);
    let mut c = vec![0.0];
    for (k, &u) in grid.iter().enumerate() {
        for &v in &grid[..k] {
            c.push(u - v);
            c.push((u - v) / 2.0);
        }
    }
    c.sort_by(f64::total_cmp);
    c.dedup_by(|b, a| *b - *a <= TIE);
    c
}

/// `a([s, t]) >= b([s - eps, t + eps])` at one representative point of every
/// cell of the breakpoint arrangement.
fn eroded(a: &StepInvariant, b: &StepInvariant, eps: f64) -> bool {
    let mut points: Vec<f64> = Vec::new();
    for &g in a.grid().iter().chain(b.grid()) {
        points.extend([g, g - eps, g + eps]);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut reps = Vec::with_capacity(points.len() + 1);
    if let (Some(first), Some(last)) = (points.first(), points.last()) {
        reps.push(first - 1.0);
        reps.extend(points.windows(2).map(|w| (w[0] + w[1]) / 2.0));
        reps.push(last + 1.0);
    }
    let zero = vec![0; a.codomain().width()];
    for (k, &s) in reps.iter().enumerate() {
        for &t in reps[k..].iter().chain([f64::INFINITY].iter()) {
            let rhs = b.eval_ref(s - eps, t + eps).unwrap_or(&zero);
            if rhs.iter().all(|&x| x == 0) {
                continue;
            }
            let lhs = a.eval_ref(s, t).unwrap_or(&zero);
            if !dominates(lhs, rhs) {
                return false;
            }
        }
    }
    true
}

/// Bottleneck distance between barcodes of `(birth, death)` pairs; `death`
/// may be `f64::INFINITY`. Essential bars only match essential bars.
pub fn bottleneck(b1: &[(f64, f64)], b2: &[(f64, f64)]) -> f64 {
    let split = |b: &[(f64, f64)]| {
        let mut essential: Vec<f64> = b
            .iter()
            .filter(|x| x.1.is_infinite())
            .map(|x| x.0)
            .collect();
        essential.sort_by(f64::total_cmp);
        let finite: Vec<(f64, f64)> = b.iter().copied().filter(|x| x.1.is_finite()).collect();
        (essential, finite)
    };
    let (e1, f1) = split(b1);
    let (e2, f2) = split(b2);
    if e1.len() != e2.len() {
        return f64::INFINITY;
    }
    let essential = e1
        .iter()
        .zip(&e2)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let mut candidates = vec![0.0];
    candidates.extend(f1.iter().chain(&f2).map(half_persistence));
    for a in &f1 {
        for b in &f2 {
            candidates.push(linf(a, b));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&f1, &f2, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo].max(essential)
}

fn half_persistence(x: &(f64, f64)) -> f64 {
    (x.1 - x.0) / 2.0
}

fn linf(a: &(f64, f64), b: &(f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Perfect matching in the graph with each side augmented by diagonal
/// copies of the other side's bars.
fn perfect_matching(f1: &[(f64, f64)], f2: &[(f64, f64)], c: f64) -> bool {
    let (n1, n2) = (f1.len(), f2.len());
    let n = n1 + n2;
    // left: f1 then diagonal copies of f2; right: f2 then diagonal copies of f1
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|l| {
            (0..n)
                .filter(|&r| match (l < n1, r < n2) {
                    (true, true) => linf(&f1[l], &f2[r]) <= c,
                    (true, false) => r - n2 == l && half_persistence(&f1[l]) <= c,
                    (false, true) => l - n1 == r && half_persistence(&f2[r]) <= c,
                    (false, false) => true,
                })
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for l in 0..n {
        let mut visited = vec![false; n];
        if !augment(l, &adj, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if owner[r].is_none_or(|o| augment(o, adj, owner, visited)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

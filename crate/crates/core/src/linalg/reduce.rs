use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Field, SparseVec};

/// Reduced row echelon form of a list of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Nonzero rows, sorted by pivot; each pivot coefficient is 1 and pivot
    /// columns are zero in every other row.
    pub rows: Vec<SparseVec>,
    /// `pivots[r]` is the pivot column of `rows[r]`.
    pub pivots: Vec<usize>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Row-reduces `rows` over `field` into reduced echelon form. The pivot of a
/// row is its smallest column index.
pub fn row_reduce(field: &Field, rows: &[SparseVec]) -> Reduction {
    let max_col = rows.iter().filter_map(SparseVec::max_index).max();
    match max_col {
        None => Reduction {
            rows: Vec::new(),
            pivots: Vec::new(),
        },
        Some(c) if field.characteristic() == 2 && c < 64 => dense_z2(rows),
        Some(_) => sparse(field, rows),
    }
}

pub fn rank(field: &Field, rows: &[SparseVec]) -> usize {
    row_reduce(field, rows).rank()
}

/// Coefficients expressing `v` in the rows of `basis`, or `None` when `v` is
/// outside their span.
pub fn in_span(field: &Field, basis: &Reduction, v: &SparseVec) -> Option<Vec<u32>> {
    let coeffs: Vec<u32> = basis.pivots.iter().map(|&p| v.get(p)).collect();
    let mut residual = v.clone();
    for (row, &c) in basis.rows.iter().zip(&coeffs) {
        if c != 0 {
            residual = residual.add_scaled(field, field.neg(c), row);
        }
    }
    residual.is_zero().then_some(coeffs)
}

fn sparse(field: &Field, rows: &[SparseVec]) -> Reduction {
    let mut by_pivot: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for row in rows {
        let mut v = row.clone();
        while let Some((lead, c)) = v.leading() {
            match by_pivot.get(&lead) {
                Some(r) => v = v.add_scaled(field, field.neg(c), r),
                None => break,
            }
        }
        if let Some((lead, c)) = v.leading() {
            let v = v.scaled(field, field.inv(c));
            by_pivot.insert(lead, v);
        }
    }
    // back substitution, largest pivot first
    let pivots: Vec<usize> = by_pivot.keys().copied().collect();
    for (k, &p) in pivots.iter().enumerate().rev() {
        let pivot_row = by_pivot[&p].clone();
        for &q in &pivots[..k] {
            let row = by_pivot.get_mut(&q).unwrap();
            let c = row.get(p);
            if c != 0 {
                *row = row.add_scaled(field, field.neg(c), &pivot_row);
            }
        }
    }
    let rows = by_pivot.into_values().collect();
    Reduction { rows, pivots }
}

fn dense_z2(rows: &[SparseVec]) -> Reduction {
    let mut basis: Vec<u64> = Vec::new();
    for row in rows {
        let mut bits = row.iter().fold(0u64, |acc, (i, _)| acc | (1u64 << i));
        for &b in &basis {
            let lead = b.trailing_zeros();
            if bits >> lead & 1 == 1 {
                bits ^= b;
            }
        }
        if bits != 0 {
            let lead = bits.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> lead & 1 == 1 {
                    *b ^= bits;
                }
            }
            basis.push(bits);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    let pivots = basis.iter().map(|b| b.trailing_zeros() as usize).collect();
    let rows = basis
        .iter()
        .map(|&b| {
            let entries = (0..64)
                .filter(|i| b >> i & 1 == 1)
                .map(|i| (i, 1))
                .collect();
            SparseVec::from_sorted_unchecked(entries)
        })
        .collect();
    Reduction { rows, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec;

    fn v(f: &Field, e: &[(usize, u32)]) -> SparseVec {
        SparseVec::from_entries(f, e.iter().copied())
    }

    #[test]
    fn duplicate_rows_rank_one() {
        let f = Field::Z2;
        assert_eq!(rank(&f, &[v(&f, &[(0, 1)]), v(&f, &[(0, 1)])]), 1);
    }

    #[test]
    fn triangular_rank_two() {
        let f = Field::Z2;
        let r = row_reduce(&f, &[v(&f, &[(0, 1), (1, 1)]), v(&f, &[(1, 1)])]);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.rows, vec![v(&f, &[(0, 1)]), v(&f, &[(1, 1)])]);
    }

    #[test]
    fn empty_input() {
        assert_eq!(rank(&Field::Z2, &[]), 0);
        assert_eq!(rank(&Field::Z2, &[SparseVec::new()]), 0);
    }

    #[test]
    fn span_membership() {
        let f = Field::new(5).unwrap();
        let rows = [v(&f, &[(0, 2), (3, 1)]), v(&f, &[(1, 1), (3, 4)])];
        let red = row_reduce(&f, &rows);
        assert_eq!(in_span(&f, &red, &SparseVec::new()), Some(vec![0, 0]));
        let target = rows[0].add_scaled(&f, 3, &rows[1]);
        let coeffs = in_span(&f, &red, &target).unwrap();
        let mut rebuilt = SparseVec::new();
        for (row, c) in red.rows.iter().zip(coeffs) {
            rebuilt = rebuilt.add_scaled(&f, c, row);
        }
        assert_eq!(rebuilt, target);
        assert_eq!(in_span(&f, &red, &v(&f, &[(2, 1)])), None);
    }

    /// Rank over Z/2 by enumerating the span: rank = log2(|span|).
    fn brute_rank(rows: &[u64]) -> usize {
        let mut span = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = 0u64;
            for (k, r) in rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc ^= r;
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    fn from_bits(bits: u64) -> SparseVec {
        SparseVec::from_entries(
            &Field::Z2,
            (0..64).filter(|i| bits >> i & 1 == 1).map(|i| (i, 1)),
        )
    }

    proptest! {
        #[test]
        fn rank_matches_span_enumeration(rows in proptest::collection::vec(0u64..32, 5)) {
            let sparse_rows: Vec<SparseVec> = rows.iter().map(|&b| from_bits(b)).collect();
            prop_assert_eq!(rank(&Field::Z2, &sparse_rows), brute_rank(&rows));
        }

        #[test]
        fn dense_and_sparse_paths_agree(rows in proptest::collection::vec(0u64..(1 << 20), 0..12)) {
            let sparse_rows: Vec<SparseVec> = rows.iter().map(|&b| from_bits(b)).collect();
            prop_assert_eq!(dense_z2(&sparse_rows), sparse(&Field::Z2, &sparse_rows));
        }

        #[test]
        fn rank_permutation_invariant_and_bounded(
            entries in proptest::collection::vec(proptest::collection::vec((0usize..9, 0u32..7), 0..6), 0..8),
            seed in any::<u64>(),
        ) {
            let f = Field::new(7).unwrap();
            let rows: Vec<SparseVec> = entries.iter().map(|e| SparseVec::from_entries(&f, e.iter().copied())).collect();
            let r = rank(&f, &rows);
            prop_assert!(r <= rows.len().min(9));
            let mut shuffled = rows.clone();
            let n = shuffled.len();
            if n > 1 {
                shuffled.rotate_left((seed as usize) % n);
                shuffled.swap(0, n - 1);
            }
            prop_assert_eq!(rank(&f, &shuffled), r);
        }

        #[test]
        fn in_span_iff_rank_unchanged(
            entries in proptest::collection::vec(proptest::collection::vec((0usize..7, 0u32..3), 0..5), 0..6),
            target in proptest::collection::vec((0usize..7, 0u32..3), 0..5),
            combo in proptest::collection::vec(0u32..3, 6),
            use_combo in any::<bool>(),
        ) {
            let f = Field::new(3).unwrap();
            let rows: Vec<SparseVec> = entries.iter().map(|e| SparseVec::from_entries(&f, e.iter().copied())).collect();
            let t = if use_combo {
                rows.iter().zip(&combo).fold(SparseVec::new(), |acc, (r, &c)| acc.add_scaled(&f, c, r))
            } else {
                SparseVec::from_entries(&f, target)
            };
            let red = row_reduce(&f, &rows);
            let mut extended = rows.clone();
            extended.push(t.clone());
            let present = in_span(&f, &red, &t);
            prop_assert_eq!(present.is_some(), rank(&f, &extended) == red.rank());
            if let Some(c) = present {
                let rebuilt = red.rows.iter().zip(c).fold(SparseVec::new(), |acc, (r, c)| acc.add_scaled(&f, c, r));
                prop_assert_eq!(rebuilt, t);
            }
        }
    }
}

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Field;

/// A sparse vector over `Z/p`: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, u32)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: alloc::vec![(index, 1)],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs, summing repeats
    /// and reducing modulo the field.
    pub fn from_entries<I>(field: &Field, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let mut raw: Vec<(usize, u32)> = entries.into_iter().collect();
        raw.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            let v = v % field.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVec { entries: out }
    }

    /// Wraps entries that already satisfy the invariants.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        SparseVec { entries }
    }

    #[inline]
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, u32)> {
        self.entries
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> u32 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    /// Entry with the smallest index.
    #[inline]
    pub fn leading(&self) -> Option<(usize, u32)> {
        self.entries.first().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    /// Keeps only entries with index `< bound`.
    pub fn truncated(&self, bound: usize) -> SparseVec {
        let end = self.entries.partition_point(|e| e.0 < bound);
        SparseVec {
            entries: self.entries[..end].to_vec(),
        }
    }

    pub fn scaled(&self, field: &Field, c: u32) -> SparseVec {
        let c = c % field.characteristic();
        if c == 0 {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, field.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, field: &Field, c: u32, other: &SparseVec) -> SparseVec {
        let c = c % field.characteristic();
        if c == 0 {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, field.mul(c, b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = field.add(a[i].1, field.mul(c, b[j].1));
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(k, v)| (k, field.mul(c, v))));
        SparseVec { entries: out }
    }

    pub fn add(&self, field: &Field, other: &SparseVec) -> SparseVec {
        self.add_scaled(field, 1, other)
    }

    pub fn sub(&self, field: &Field, other: &SparseVec) -> SparseVec {
        self.add_scaled(field, field.neg(1), other)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().copied()
    }
}

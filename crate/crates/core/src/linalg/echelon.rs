use alloc::collections::BTreeMap;

use super::{Field, SparseVec};

/// An incrementally built echelon basis. Every row carries a tag vector that
/// records it as a combination of caller-chosen generators, so reductions
/// report which generators were used.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Clears every pivot column of `v`. Returns the residual (the canonical
    /// representative of `v` modulo the span) and `tag - sum c_r tag_r` for
    /// the rows subtracted.
    pub fn reduce(&self, v: &SparseVec, tag: &SparseVec) -> (SparseVec, SparseVec) {
        let f = &self.field;
        let mut v = v.clone();
        let mut tag = tag.clone();
        let mut cursor = 0;
        loop {
            // smallest entry at or after cursor sitting on a pivot column
            let next = v
                .entries()
                .iter()
                .skip_while(|e| e.0 < cursor)
                .find(|e| self.rows.contains_key(&e.0))
                .copied();
            let Some((col, c)) = next else { break };
            let (row, row_tag) = &self.rows[&col];
            let c = f.neg(c);
            v = v.add_scaled(f, c, row);
            if !row_tag.is_zero() {
                tag = tag.add_scaled(f, c, row_tag);
            }
            cursor = col + 1;
        }
        (v, tag)
    }

    /// Residual of `v` modulo the span, without tag bookkeeping.
    pub fn normal_form(&self, v: &SparseVec) -> SparseVec {
        self.reduce(v, &SparseVec::new()).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Inserts `v` (tagged with `tag`). Returns `None` when `v` was
    /// independent of the current rows, otherwise `Some(t)` where `t` is the
    /// reduced tag: a combination of generators that sums to zero.
    pub fn insert(&mut self, v: &SparseVec, tag: &SparseVec) -> Option<SparseVec> {
        let (residual, tag) = self.reduce(v, tag);
        match residual.leading() {
            None => Some(tag),
            Some((col, c)) => {
                let inv = self.field.inv(c);
                let row = residual.scaled(&self.field, inv);
                let tag = tag.scaled(&self.field, inv);
                self.rows.insert(col, (row, tag));
                None
            }
        }
    }
}

//! Flags of vector spaces, the rank invariant of the persistent cup module,
//! and barcodes of the persistent ℓ-cup modules.
//!
//! The cup module at `t` is the graded flag `H⁺(X_t) ⊇ (H⁺(X_t))² ⊇ ...`.
//! Its rank invariant on `[a, b]` is a matrix indexed by degree `p >= 1`
//! (rows) and depth `ℓ >= 1` (columns).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::cohomology::{Barcode, ClassQuery, Cochain};
use crate::cup::cup;
use crate::invariants::{mobius_invert, Codomain, GridInterval, StepInvariant};
use crate::linalg::{rank, SparseVec};
use crate::{Error, Result};

/// Dimension of a flag: `m_ℓ = dim V_ℓ`, non-increasing in the depth `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagDim(Vec<u32>);

impl FlagDim {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotNonIncreasing(format!("{dims:?}")));
        }
        let mut dims = dims;
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Ok(FlagDim(dims))
    }

    pub fn dims(&self) -> &[u32] {
        &self.0
    }

    /// Depth of the flag: the last nonzero index.
    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

/// Dimensions of a graded flag: row `p - 1` is the flag in degree `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFlagDim {
    pub rows: Vec<FlagDim>,
}

/// Splits a flag into indecomposables `K^n_⋆`, returned as the multiset of
/// depths `n` in increasing order.
pub fn flag_decompose(d: &FlagDim) -> Vec<usize> {
    let dims = d.dims();
    let mut parts = Vec::new();
    for (k, &m) in dims.iter().enumerate() {
        let next = dims.get(k + 1).copied().unwrap_or(0);
        parts.extend(core::iter::repeat_n(k + 1, (m - next) as usize));
    }
    parts
}

/// Dimension of a direct sum of indecomposables `K^n_⋆`.
pub fn flag_dim_of(parts: &[usize]) -> FlagDim {
    let depth = parts.iter().copied().max().unwrap_or(0);
    let dims = (1..=depth)
        .map(|l| parts.iter().filter(|&&n| n >= l).count() as u32)
        .collect();
    FlagDim::new(dims).expect("counts are non-increasing")
}

/// Rank invariant of the persistent cup module: entry `(p, ℓ)` on `[a, b]`
/// is the dimension of the image of degree-`p` `ℓ`-fold products at `b` in
/// the cohomology at `a`. `max_ell` defaults to the top dimension.
pub fn phi_rank(bc: &Barcode<'_>, max_ell: Option<usize>) -> Result<StepInvariant> {
    let max_dim = bc.complex.max_dim().unwrap_or(0);
    let max_ell = max_ell.unwrap_or(max_dim).max(1);
    let codomain = Codomain::Matrix {
        rows: max_dim,
        cols: max_ell,
    };
    let grid = bc.grid().to_vec();
    let m = grid.len();
    let mut query = ClassQuery::new(bc);
    let positive: Vec<usize> = bc.positive_bars().collect();
    let mut inv = StepInvariant::zero(grid, codomain);
    for i in 0..m {
        for j in i..=m {
            let alive: Vec<usize> = positive
                .iter()
                .copied()
                .filter(|&id| bc.bars[id].interval.contains(&GridInterval::new(i, j)))
                .collect();
            let classes = products_at(&mut query, &alive, i, max_dim, max_ell)?;
            let cell = inv.cell_mut(i, j);
            for ((p, ell), vecs) in classes {
                cell[(p - 1) * max_ell + (ell - 1)] = rank(&bc.field, &vecs) as u32;
            }
        }
    }
    Ok(inv)
}

/// Classes at grid index `k` of all nonzero products of up to `max_ell`
/// representatives from `bars`, grouped by (degree, length).
fn products_at(
    query: &mut ClassQuery<'_, '_>,
    bars: &[usize],
    k: usize,
    max_dim: usize,
    max_ell: usize,
) -> Result<BTreeMap<(usize, usize), Vec<SparseVec>>> {
    let bc = query.barcode();
    let mut out: BTreeMap<(usize, usize), Vec<SparseVec>> = BTreeMap::new();
    // (position of last factor, product cochain, class)
    let mut level: Vec<(usize, Cochain, SparseVec)> = Vec::new();
    for (pos, &id) in bars.iter().enumerate() {
        let rep = bc.bars[id]
            .representative
            .truncated(bc.complex.grid_prefix(k));
        let class = query.class_at(&rep, k)?;
        if !class.is_zero() {
            level.push((pos, rep, class));
        }
    }
    for ell in 1..=max_ell {
        for (_, c, class) in &level {
            out.entry((c.degree, ell)).or_default().push(class.clone());
        }
        if ell == max_ell {
            break;
        }
        let mut seen: BTreeMap<(usize, SparseVec), usize> = BTreeMap::new();
        let mut next: Vec<(usize, Cochain, SparseVec)> = Vec::new();
        for (last, c, _) in &level {
            for (pos, &id) in bars.iter().enumerate().skip(*last) {
                let rep = &bc.bars[id].representative;
                if c.degree + rep.degree > max_dim {
                    continue;
                }
                let prod = cup(bc.complex, bc.field, c, rep);
                let class = query.class_at(&prod, k)?;
                if class.is_zero() {
                    continue;
                }
                match seen.get(&(prod.degree, class.clone())) {
                    Some(&slot) => {
                        if pos < next[slot].0 {
                            next[slot] = (pos, prod, class);
                        }
                    }
                    None => {
                        seen.insert((prod.degree, class.clone()), next.len());
                        next.push((pos, prod, class));
                    }
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// Barcode of degree `p` of the persistent `ℓ`-cup module.
#[derive(Debug, Clone, PartialEq)]
pub struct LCupBarcode {
    pub degree: usize,
    pub ell: usize,
    pub grid: Vec<f64>,
    /// Closed grid intervals, repeated by multiplicity.
    pub bars: Vec<GridInterval>,
}

impl LCupBarcode {
    /// Half-open `[birth, death)` pairs.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.bars
            .iter()
            .map(|iv| {
                iv.half_open_bounds(&self.grid)
                    .expect("checked on construction")
            })
            .collect()
    }
}

/// Möbius inversion of one entry of a matrix-valued rank invariant.
pub fn barcode_from_rank(rank: &StepInvariant, degree: usize, ell: usize) -> Result<LCupBarcode> {
    let Codomain::Matrix { rows, cols } = rank.codomain() else {
        return Err(Error::Codomain(format!(
            "expected a matrix, got {:?}",
            rank.codomain()
        )));
    };
    if degree == 0 || ell == 0 || degree > rows || ell > cols {
        return Err(Error::Input(format!(
            "(degree {degree}, depth {ell}) outside a {rows}x{cols} rank matrix"
        )));
    }
    let slice = rank.component((degree - 1) * cols + (ell - 1));
    let dgm = mobius_invert(&slice);
    let grid = rank.grid().to_vec();
    let mut bars = Vec::new();
    for (iv, v) in &dgm.entries {
        let mult = usize::try_from(v[0])
            .map_err(|_| Error::Consistency(format!("negative multiplicity {} at {iv:?}", v[0])))?;
        if iv.half_open_bounds(&grid).is_none() {
            return Err(Error::Consistency(format!(
                "bar {iv:?} ends at the last finite grid value"
            )));
        }
        bars.extend(core::iter::repeat_n(*iv, mult));
    }
    Ok(LCupBarcode {
        degree,
        ell,
        grid,
        bars,
    })
}

/// Degree-`p` barcode of the persistent `ℓ`-cup module.
pub fn lcup_barcode(bc: &Barcode<'_>, ell: usize, p: usize) -> Result<LCupBarcode> {
    if ell == 0 || p == 0 {
        return Err(Error::Input("ℓ and p must be positive".into()));
    }
    let max_dim = bc.complex.max_dim().unwrap_or(0);
    if p > max_dim {
        return Ok(LCupBarcode {
            degree: p,
            ell,
            grid: bc.grid().to_vec(),
            bars: Vec::new(),
        });
    }
    let rank = phi_rank(bc, Some(ell.max(max_dim)))?;
    barcode_from_rank(&rank, p, ell)
}

/// Every `ℓ`-cup barcode with `1 <= p, ℓ <= max_dim`.
pub fn lcup_barcodes(bc: &Barcode<'_>) -> Result<Vec<LCupBarcode>> {
    let max_dim = bc.complex.max_dim().unwrap_or(0);
    let rank = phi_rank(bc, None)?;
    let mut out = Vec::new();
    for p in 1..=max_dim {
        for ell in 1..=max_dim {
            out.push(barcode_from_rank(&rank, p, ell)?);
        }
    }
    Ok(out)
}

/// Cup-length invariant from ℓ-cup barcodes: the largest `ℓ` of a bar
/// containing the interval.
pub fn cup_from_lcup(grid: &[f64], barcodes: &[LCupBarcode]) -> StepInvariant {
    StepInvariant::from_fn(grid.to_vec(), Codomain::Scalar, |i, j, out| {
        let target = GridInterval::new(i, j);
        out[0] = barcodes
            .iter()
            .filter(|b| b.bars.iter().any(|iv| iv.contains(&target)))
            .map(|b| b.ell as u32)
            .max()
            .unwrap_or(0);
    })
}

/// Cup-length invariant of a barcode computed through ℓ-cup barcodes.
pub fn cup_length_via_lcup(bc: &Barcode<'_>) -> Result<StepInvariant> {
    Ok(cup_from_lcup(bc.grid(), &lcup_barcodes(bc)?))
}

/// Graded flag dimension at one cell of a [`phi_rank`] invariant.
pub fn graded_dim(rank: &StepInvariant, iv: GridInterval) -> Result<GradedFlagDim> {
    let Codomain::Matrix { rows, cols } = rank.codomain() else {
        return Err(Error::Codomain(format!(
            "expected a matrix, got {:?}",
            rank.codomain()
        )));
    };
    let cell = rank.cell(iv.lo, iv.hi);
    let rows = (0..rows)
        .map(|p| FlagDim::new(cell[p * cols..(p + 1) * cols].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedFlagDim { rows })
}

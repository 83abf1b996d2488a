//! Cup products, supports of ℓ-fold products of representatives, and the
//! persistent cup-length diagram and invariant.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{Barcode, ClassQuery, Cochain};
use crate::complex::FilteredComplex;
use crate::invariants::{snap_down, Codomain, GridInterval, StepInvariant};
use crate::linalg::{Echelon, Field, SparseVec};
use crate::{Error, Result};

/// Cup product: the coefficient on `[v_0..v_{p+q}]` is
/// `σ([v_0..v_p]) · τ([v_p..v_{p+q}])`.
pub fn cup(complex: &FilteredComplex, field: Field, sigma: &Cochain, tau: &Cochain) -> Cochain {
    let degree = sigma.degree + tau.degree;
    let mut by_first: BTreeMap<u32, Vec<(usize, u32)>> = BTreeMap::new();
    for (j, c) in tau.coeffs.iter() {
        by_first
            .entry(complex.simplex(j).vertices()[0])
            .or_default()
            .push((j, c));
    }
    let mut entries = Vec::new();
    let mut buf: Vec<u32> = Vec::with_capacity(degree + 1);
    for (i, a) in sigma.coeffs.iter() {
        let front = complex.simplex(i).vertices();
        let Some(partners) = by_first.get(front.last().expect("nonempty simplex")) else {
            continue;
        };
        for &(j, b) in partners {
            buf.clear();
            buf.extend_from_slice(front);
            buf.extend_from_slice(&complex.simplex(j).vertices()[1..]);
            if let Some(k) = complex.index_of(&buf) {
                entries.push((k, field.mul(a, b)));
            }
        }
    }
    Cochain {
        degree,
        coeffs: SparseVec::from_entries(&field, entries),
    }
}

/// Product of the representatives of `bars`, in the given order.
pub fn product_of_bars(bc: &Barcode<'_>, bars: &[usize]) -> Result<Cochain> {
    let (first, rest) = bars
        .split_first()
        .ok_or_else(|| Error::Input("a product needs at least one bar".into()))?;
    let mut acc = bc.bar(*first)?.representative.clone();
    for &id in rest {
        acc = cup(bc.complex, bc.field, &acc, &bc.bar(id)?.representative);
    }
    Ok(acc)
}

/// Support of the product of a cochain whose class is defined on the closed
/// grid range `[lo, hi]`: the grid cells where its class is nonzero.
fn scan_support(
    query: &mut ClassQuery<'_, '_>,
    product: &Cochain,
    lo: usize,
    hi: usize,
    m: usize,
) -> Result<Option<GridInterval>> {
    let last = if hi == m { m - 1 } else { hi };
    if last < lo || query.class_at(product, last)?.is_zero() {
        return Ok(None);
    }
    let mut low = last;
    while low > lo && !query.class_at(product, low - 1)?.is_zero() {
        low -= 1;
    }
    Ok(Some(GridInterval::new(low, hi)))
}

/// Support of `σ_{I_1} ⌣ ... ⌣ σ_{I_ℓ}` as a closed grid interval.
pub fn support(query: &mut ClassQuery<'_, '_>, bars: &[usize]) -> Result<Option<GridInterval>> {
    let bc = query.barcode();
    let m = bc.grid().len();
    let mut lo = 0;
    let mut hi = m;
    for &id in bars {
        let bar = bc.bar(id)?;
        if bar.degree == 0 {
            return Err(Error::Input(format!("bar {id} has degree 0")));
        }
        lo = lo.max(bar.interval.lo);
        hi = hi.min(bar.interval.hi);
    }
    let product = product_of_bars(bc, bars)?;
    scan_support(query, &product, lo, hi, m)
}

/// One enumerated product and its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductRecord {
    /// Bar indices, non-decreasing.
    pub bars: Vec<usize>,
    pub support: Option<GridInterval>,
}

/// Maximal product length realized on each support interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CupLengthDiagram {
    pub grid: Vec<f64>,
    pub entries: BTreeMap<GridInterval, usize>,
    /// Every product examined while building the diagram.
    pub products: Vec<ProductRecord>,
}

impl CupLengthDiagram {
    /// `(birth, death, length)` with half-open endpoints.
    pub fn half_open_entries(&self) -> Vec<(f64, f64, usize)> {
        self.entries
            .iter()
            .filter_map(|(iv, &l)| iv.half_open_bounds(&self.grid).map(|(b, d)| (b, d, l)))
            .collect()
    }
}

struct Partial {
    bars: Vec<usize>,
    degree: usize,
    cochain: Cochain,
    support: GridInterval,
}

/// Iterates products of representatives, level by level, keeping the
/// nonzero ones. Products are enumerated over multisets of bars; two products
/// whose classes agree on every cell of a common support are merged.
pub fn cup_length_diagram(bc: &Barcode<'_>) -> Result<CupLengthDiagram> {
    let grid = bc.grid().to_vec();
    let m = grid.len();
    let max_dim = bc.complex.max_dim().unwrap_or(0);
    let mut query = ClassQuery::new(bc);
    let mut entries: BTreeMap<GridInterval, usize> = BTreeMap::new();
    let mut products = Vec::new();
    let positive: Vec<usize> = bc.positive_bars().collect();
    let mut level: Vec<Partial> = positive
        .iter()
        .map(|&id| {
            let bar = &bc.bars[id];
            Partial {
                bars: vec![id],
                degree: bar.degree,
                cochain: bar.representative.clone(),
                support: bar.interval,
            }
        })
        .collect();
    products.extend(level.iter().map(|p| ProductRecord {
        bars: p.bars.clone(),
        support: Some(p.support),
    }));
    let mut ell = 1;
    while !level.is_empty() {
        for p in &level {
            let e = entries.entry(p.support).or_insert(0);
            *e = (*e).max(ell);
        }
        // key: (support, degree, classes on the support) -> index in `next`
        let mut seen: BTreeMap<(GridInterval, usize, Vec<SparseVec>), usize> = BTreeMap::new();
        let mut next: Vec<Partial> = Vec::new();
        for p in &level {
            let last = *p.bars.last().expect("nonempty product");
            for &id in positive.iter().filter(|&&id| id >= last) {
                let bar = &bc.bars[id];
                if p.degree + bar.degree > max_dim {
                    continue;
                }
                let lo = p.support.lo.max(bar.interval.lo);
                let hi = p.support.hi.min(bar.interval.hi);
                let cochain = cup(bc.complex, bc.field, &p.cochain, &bar.representative);
                let mut bars = p.bars.clone();
                bars.push(id);
                let support = scan_support(&mut query, &cochain, lo, hi, m)?;
                products.push(ProductRecord {
                    bars: bars.clone(),
                    support,
                });
                let Some(support) = support else { continue };
                let top = if support.hi == m { m - 1 } else { support.hi };
                let classes = (support.lo..=top)
                    .map(|k| query.class_at(&cochain, k))
                    .collect::<Result<Vec<_>>>()?;
                let key = (support, p.degree + bar.degree, classes);
                let candidate = Partial {
                    bars,
                    degree: p.degree + bar.degree,
                    cochain,
                    support,
                };
                match seen.get(&key) {
                    Some(&k) => {
                        if candidate.bars.last() < next[k].bars.last() {
                            next[k] = candidate;
                        }
                    }
                    None => {
                        seen.insert(key, next.len());
                        next.push(candidate);
                    }
                }
            }
        }
        level = next;
        ell += 1;
    }
    Ok(CupLengthDiagram {
        grid,
        entries,
        products,
    })
}

/// Tropical Möbius recovery: the value on `[s_i, s_j]` is the largest length
/// over diagram intervals containing it.
pub fn invariant_from_diagram(diagram: &CupLengthDiagram) -> StepInvariant {
    StepInvariant::from_fn(diagram.grid.clone(), Codomain::Scalar, |i, j, out| {
        out[0] = diagram
            .entries
            .iter()
            .filter(|(iv, _)| iv.lo <= i && iv.hi >= j)
            .map(|(_, &l)| l as u32)
            .max()
            .unwrap_or(0);
    })
}

/// The persistent cup-length invariant of a barcode.
pub fn cup_length_invariant(bc: &Barcode<'_>) -> Result<StepInvariant> {
    Ok(invariant_from_diagram(&cup_length_diagram(bc)?))
}

/// Cup-length of `im(H⁺(X_b) → H⁺(X_a))`, computed from cocycle spaces
/// without using the barcode's representatives. Both endpoints snap down.
pub fn cup_length_of_image(complex: &FilteredComplex, field: Field, a: f64, b: f64) -> usize {
    let grid = complex.grid();
    let Some(ka) = snap_down(grid, a) else {
        return 0;
    };
    let kb = snap_down(grid, b).map_or(0, |k| k.min(grid.len() - 1));
    if ka >= grid.len() {
        return 0;
    }
    ImageRing::new(complex, field, ka, kb.max(ka)).cup_length()
}

/// Evaluates [`cup_length_of_image`] on every grid cell.
pub fn image_cup_length_invariant(complex: &FilteredComplex, field: Field) -> StepInvariant {
    let grid = complex.grid().to_vec();
    let m = grid.len();
    StepInvariant::from_fn(grid, Codomain::Scalar, |i, j, out| {
        out[0] = ImageRing::new(complex, field, i, j.min(m - 1)).cup_length() as u32;
    })
}

/// Positive-degree part of the image ring, with a basis of cocycles of `X_a`.
struct ImageRing<'c> {
    complex: &'c FilteredComplex,
    field: Field,
    prefix: usize,
    /// `B^p(X_a)` per degree.
    coboundaries: Vec<Echelon>,
    basis: Vec<Cochain>,
}

impl<'c> ImageRing<'c> {
    fn new(complex: &'c FilteredComplex, field: Field, ka: usize, kb: usize) -> Self {
        let na = complex.grid_prefix(ka);
        let nb = complex.grid_prefix(kb);
        let top = complex.max_dim().unwrap_or(0);
        let coboundaries: Vec<Echelon> = (0..=top)
            .map(|p| boundary_echelon(complex, field, p, na))
            .collect();
        let mut basis = Vec::new();
        for (p, image) in coboundaries.iter().enumerate().skip(1) {
            let mut image = image.clone();
            for z in cocycle_basis(complex, field, p, nb) {
                let restricted = z.truncated(na);
                if image.insert(&restricted, &SparseVec::new()).is_none() {
                    basis.push(Cochain {
                        degree: p,
                        coeffs: restricted,
                    });
                }
            }
        }
        ImageRing {
            complex,
            field,
            prefix: na,
            coboundaries,
            basis,
        }
    }

    fn class(&self, c: &Cochain) -> Option<SparseVec> {
        let ech = self.coboundaries.get(c.degree)?;
        let nf = ech.normal_form(&c.coeffs.truncated(self.prefix));
        (!nf.is_zero()).then_some(nf)
    }

    /// Breadth-first search over multisets of basis elements.
    fn cup_length(&self) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        let mut queue: VecDeque<(usize, usize, Cochain)> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, c)| (1, i, c.clone()))
            .collect();
        let mut seen: BTreeMap<(usize, usize, SparseVec), usize> = BTreeMap::new();
        let mut best = 1;
        while let Some((len, last, c)) = queue.pop_front() {
            best = best.max(len);
            for (g, gen) in self.basis.iter().enumerate().skip(last) {
                let prod = cup(self.complex, self.field, &c, gen);
                let Some(nf) = self.class(&prod) else {
                    continue;
                };
                let key = (len + 1, prod.degree, nf.clone());
                match seen.get(&key) {
                    Some(&prev) if prev <= g => continue,
                    _ => {
                        seen.insert(key, g);
                    }
                }
                queue.push_back((
                    len + 1,
                    g,
                    Cochain {
                        degree: prod.degree,
                        coeffs: nf,
                    },
                ));
            }
        }
        best
    }
}

/// Coboundaries of `(p-1)`-simplices among the first `n` simplices.
fn boundary_echelon(complex: &FilteredComplex, field: Field, p: usize, n: usize) -> Echelon {
    let mut ech = Echelon::new(field);
    if p == 0 {
        return ech;
    }
    for &t in complex.simplices_of_dim(p - 1) {
        if t >= n {
            break;
        }
        ech.insert(&delta_unit(complex, field, t, n), &SparseVec::new());
    }
    ech
}

fn delta_unit(complex: &FilteredComplex, field: Field, t: usize, n: usize) -> SparseVec {
    SparseVec::from_entries(
        &field,
        complex
            .cofacets_of(t)
            .iter()
            .filter(|&&(j, _)| j < n)
            .map(|&(j, k)| (j, field.sign(k))),
    )
}

/// A basis of `Z^p` of the first `n` simplices, as kernel vectors of the
/// coboundary.
fn cocycle_basis(complex: &FilteredComplex, field: Field, p: usize, n: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new(field);
    let mut kernel = Vec::new();
    for &s in complex.simplices_of_dim(p) {
        if s >= n {
            break;
        }
        if let Some(rel) = ech.insert(&delta_unit(complex, field, s, n), &SparseVec::unit(s)) {
            kernel.push(rel);
        }
    }
    kernel
}

/// Pointwise maximum on the merged grid (disjoint unions and wedges).
pub fn invariant_max(a: &StepInvariant, b: &StepInvariant) -> Result<StepInvariant> {
    a.combine(b, u32::max)
}

/// Pointwise sum on the merged grid (products of spaces).
pub fn invariant_sum(a: &StepInvariant, b: &StepInvariant) -> Result<StepInvariant> {
    a.combine(b, |x, y| x + y)
}

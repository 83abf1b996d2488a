//! Persistent cohomology with representative cocycles.
//!
//! Coboundary columns are reduced in reverse filtration order, degree by
//! degree, with clearing. The reduction matrix supplies a representative
//! cocycle for each bar.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::complex::{FilteredComplex, Simplex};
use crate::invariants::GridInterval;
use crate::linalg::{Echelon, Field, SparseVec};
use crate::{Error, Result};

/// A `p`-cochain indexed by the canonical simplex order of one complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub coeffs: SparseVec,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            coeffs: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Builds a cochain from `(vertices, coefficient)` pairs.
    pub fn from_simplices(
        complex: &FilteredComplex,
        field: Field,
        degree: usize,
        terms: &[(&[u32], i64)],
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(terms.len());
        for (verts, c) in terms {
            let s = Simplex::new(verts.to_vec())?;
            if s.dim() != degree {
                return Err(Error::Input(format!(
                    "simplex {s} is not of dimension {degree}"
                )));
            }
            let i = complex
                .index_of_simplex(&s)
                .ok_or_else(|| Error::Input(format!("simplex {s} is not in the complex")))?;
            entries.push((i, field.from_i64(*c)));
        }
        Ok(Cochain {
            degree,
            coeffs: SparseVec::from_entries(&field, entries),
        })
    }

    /// Drops every coefficient on a simplex outside the first `n` simplices.
    pub fn truncated(&self, n: usize) -> Cochain {
        Cochain {
            degree: self.degree,
            coeffs: self.coeffs.truncated(n),
        }
    }

    /// `(vertices, coefficient)` pairs.
    pub fn terms<'c>(
        &'c self,
        complex: &'c FilteredComplex,
    ) -> impl Iterator<Item = (&'c [u32], u32)> + 'c {
        self.coeffs
            .iter()
            .map(move |(i, c)| (complex.simplex(i).vertices(), c))
    }
}

/// Coboundary of a cochain in the whole complex.
pub fn coboundary(complex: &FilteredComplex, field: Field, sigma: &Cochain) -> Cochain {
    Cochain {
        degree: sigma.degree + 1,
        coeffs: coboundary_vec(complex, field, &sigma.coeffs, complex.len()),
    }
}

/// Coboundary restricted to the first `n` simplices.
fn coboundary_vec(complex: &FilteredComplex, field: Field, v: &SparseVec, n: usize) -> SparseVec {
    let mut entries = Vec::new();
    for (i, c) in v.iter() {
        for &(j, k) in complex.cofacets_of(i) {
            if j >= n {
                break;
            }
            entries.push((j, field.mul(c, field.sign(k))));
        }
    }
    SparseVec::from_entries(&field, entries)
}

/// A persistence interval `[birth, death)` in one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub degree: usize,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
    /// Closed range of grid cells covered by the bar.
    pub interval: GridInterval,
    /// Cocycle on every `X_t` with `t` in the bar; its class there is nonzero.
    pub representative: Cochain,
}

impl Bar {
    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

/// All bars of a filtered complex, with representatives.
#[derive(Debug, Clone)]
pub struct Barcode<'a> {
    pub complex: &'a FilteredComplex,
    pub field: Field,
    /// Sorted by degree, birth, death.
    pub bars: Vec<Bar>,
}

/// Persistent cohomology of every degree of `complex` over `field`.
pub fn persistent_cohomology(complex: &FilteredComplex, field: Field) -> Barcode<'_> {
    let grid = complex.grid();
    let m = grid.len();
    let top = complex.max_dim().map_or(0, |d| d + 1);
    let mut bars = Vec::new();
    let mut cleared: Vec<bool> = alloc::vec![false; complex.len()];
    for p in 0..top {
        // pivot row -> (reduced column, reduction vector)
        let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
        for &i in complex.simplices_of_dim(p).iter().rev() {
            if cleared[i] {
                continue;
            }
            let mut col = coboundary_vec(complex, field, &SparseVec::unit(i), complex.len());
            let mut v = SparseVec::unit(i);
            while let Some((j, c)) = col.leading() {
                match pivots.get(&j) {
                    Some((r, w)) => {
                        let f = field.neg(field.mul(c, field.inv(r.get(j))));
                        col = col.add_scaled(&field, f, r);
                        v = v.add_scaled(&field, f, w);
                    }
                    None => break,
                }
            }
            let birth = complex.value(i);
            let birth_idx = complex.grid_index(birth).expect("value on grid");
            match col.leading() {
                None => bars.push(Bar {
                    degree: p,
                    birth,
                    death: f64::INFINITY,
                    interval: GridInterval::from_half_open(birth_idx, None, m),
                    representative: Cochain {
                        degree: p,
                        coeffs: v,
                    },
                }),
                Some((j, _)) => {
                    cleared[j] = true;
                    let death = complex.value(j);
                    if death > birth {
                        let death_idx = complex.grid_index(death).expect("value on grid");
                        let rep = v.truncated(complex.grid_prefix(death_idx - 1));
                        bars.push(Bar {
                            degree: p,
                            birth,
                            death,
                            interval: GridInterval::from_half_open(birth_idx, Some(death_idx), m),
                            representative: Cochain {
                                degree: p,
                                coeffs: rep,
                            },
                        });
                    }
                    pivots.insert(j, (col, v));
                }
            }
        }
    }
    bars.sort_by(|a, b| {
        a.degree
            .cmp(&b.degree)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
            .then_with(|| a.representative.coeffs.cmp(&b.representative.coeffs))
    });
    Barcode {
        complex,
        field,
        bars,
    }
}

impl<'a> Barcode<'a> {
    pub fn grid(&self) -> &[f64] {
        self.complex.grid()
    }

    pub fn bar(&self, id: usize) -> Result<&Bar> {
        self.bars.get(id).ok_or(Error::UnknownBar(id))
    }

    /// Indices of bars of positive degree.
    pub fn positive_bars(&self) -> impl Iterator<Item = usize> + '_ {
        self.bars
            .iter()
            .enumerate()
            .filter(|(_, b)| b.degree > 0)
            .map(|(i, _)| i)
    }

    pub fn bars_of_degree(&self, p: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.degree == p)
    }

    /// Class of `sigma` restricted to `X_t`, as coordinates over bar indices
    /// in the basis of representatives of bars alive at `t`. `None` below the
    /// grid, where every class vanishes.
    pub fn restrict_class(&self, sigma: &Cochain, t: f64) -> Result<Option<SparseVec>> {
        match self.complex.grid_index(t) {
            None => Ok(None),
            Some(k) => ClassQuery::new(self).class_at(sigma, k).map(Some),
        }
    }

    /// Class of the generator of bar `id` at `t`; zero outside the bar.
    pub fn bar_class(&self, id: usize, t: f64) -> Result<SparseVec> {
        let bar = self.bar(id)?;
        if !bar.contains(t) {
            return Ok(SparseVec::new());
        }
        Ok(self
            .restrict_class(&bar.representative, t)?
            .unwrap_or_default())
    }
}

/// True when `sigma` restricted to `X_t` is the coboundary of a cochain of `X_t`.
pub fn is_coboundary(complex: &FilteredComplex, field: Field, sigma: &Cochain, t: f64) -> bool {
    let n = complex.prefix_len(t);
    let v = sigma.coeffs.truncated(n);
    if v.is_zero() {
        return true;
    }
    if sigma.degree == 0 {
        return false;
    }
    coboundary_space(complex, field, sigma.degree, n).contains(&v)
}

/// `B^p` of the first `n` simplices.
fn coboundary_space(complex: &FilteredComplex, field: Field, p: usize, n: usize) -> Echelon {
    let mut ech = Echelon::new(field);
    if p > 0 {
        for &tau in complex.simplices_of_dim(p - 1) {
            if tau >= n {
                break;
            }
            let d = coboundary_vec(complex, field, &SparseVec::unit(tau), n);
            ech.insert(&d, &SparseVec::new());
        }
    }
    ech
}

/// Expresses classes at one grid index in the basis of representatives.
#[derive(Debug, Clone)]
struct ClassSolver {
    prefix: usize,
    echelon: Echelon,
}

impl ClassSolver {
    fn build(bc: &Barcode<'_>, p: usize, k: usize) -> Result<Self> {
        let prefix = bc.complex.grid_prefix(k);
        let mut echelon = coboundary_space(bc.complex, bc.field, p, prefix);
        for (id, bar) in bc.bars.iter().enumerate() {
            if bar.degree == p && bar.interval.contains_index(k) {
                let rep = bar.representative.coeffs.truncated(prefix);
                if echelon.insert(&rep, &SparseVec::unit(id)).is_some() {
                    return Err(Error::Consistency(format!(
                        "representatives of degree {p} are dependent at grid index {k}"
                    )));
                }
            }
        }
        Ok(ClassSolver { prefix, echelon })
    }
}

/// Cached class computations against one barcode.
#[derive(Debug)]
pub struct ClassQuery<'b, 'a> {
    barcode: &'b Barcode<'a>,
    solvers: BTreeMap<(usize, usize), ClassSolver>,
}

impl<'b, 'a> ClassQuery<'b, 'a> {
    pub fn new(barcode: &'b Barcode<'a>) -> Self {
        ClassQuery {
            barcode,
            solvers: BTreeMap::new(),
        }
    }

    pub fn barcode(&self) -> &'b Barcode<'a> {
        self.barcode
    }

    /// Class of `sigma` at grid index `k`, in bar coordinates.
    pub fn class_at(&mut self, sigma: &Cochain, k: usize) -> Result<SparseVec> {
        let bc = self.barcode;
        let p = sigma.degree;
        if let std::collections::btree_map::Entry::Vacant(e) = self.solvers.entry((p, k)) {
            let solver = ClassSolver::build(bc, p, k)?;
            e.insert(solver);
        }
        let solver = &self.solvers[&(p, k)];
        let v = sigma.coeffs.truncated(solver.prefix);
        if v.is_zero() {
            return Ok(SparseVec::new());
        }
        if !coboundary_vec(bc.complex, bc.field, &v, solver.prefix).is_zero() {
            return Err(Error::NotCocycle(bc.grid()[k]));
        }
        let (residual, tag) = solver.echelon.reduce(&v, &SparseVec::new());
        if !residual.is_zero() {
            return Err(Error::Consistency(format!(
                "representatives do not span degree {p} cohomology at grid index {k}"
            )));
        }
        Ok(tag.scaled(&bc.field, bc.field.neg(1)))
    }
}

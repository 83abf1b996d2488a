//! JSON interchange. `∞` is written as the string `"inf"`.

use std::collections::BTreeMap;

use percup_core::cohomology::Barcode;
use percup_core::cup::CupLengthDiagram;
use percup_core::flags::LCupBarcode;
use percup_core::invariants::{Codomain, GridInterval, SignedDiagram, StepInvariant};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A filtration value that may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Real(v)),
            Raw::Str(s) if s == "inf" => Ok(Real(f64::INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", found \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarJson {
    pub degree: usize,
    pub birth: Real,
    pub death: Real,
    /// `(simplex vertices, coefficient)` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representative: Vec<(Vec<u32>, u32)>,
}

impl BarJson {
    pub fn interval(&self) -> (f64, f64) {
        (self.birth.0, self.death.0)
    }
}

pub fn barcode_json(bc: &Barcode<'_>) -> Vec<BarJson> {
    bc.bars
        .iter()
        .map(|b| BarJson {
            degree: b.degree,
            birth: Real(b.birth),
            death: Real(b.death),
            representative: b
                .representative
                .terms(bc.complex)
                .map(|(v, c)| (v.to_vec(), c))
                .collect(),
        })
        .collect()
}

pub fn lcup_json(lc: &LCupBarcode) -> Vec<BarJson> {
    lc.intervals()
        .into_iter()
        .map(|(b, d)| BarJson {
            degree: lc.degree,
            birth: Real(b),
            death: Real(d),
            representative: Vec::new(),
        })
        .collect()
}

/// A value of a step invariant: scalar, sequence or matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Scalar(u32),
    Sequence(Vec<u32>),
    Matrix(Vec<Vec<u32>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum CodomainJson {
    Scalar,
    Sequence { len: usize },
    Matrix { rows: usize, cols: usize },
}

impl From<Codomain> for CodomainJson {
    fn from(c: Codomain) -> Self {
        match c {
            Codomain::Scalar => CodomainJson::Scalar,
            Codomain::Sequence(len) => CodomainJson::Sequence { len },
            Codomain::Matrix { rows, cols } => CodomainJson::Matrix { rows, cols },
        }
    }
}

impl From<CodomainJson> for Codomain {
    fn from(c: CodomainJson) -> Self {
        match c {
            CodomainJson::Scalar => Codomain::Scalar,
            CodomainJson::Sequence { len } => Codomain::Sequence(len),
            CodomainJson::Matrix { rows, cols } => Codomain::Matrix { rows, cols },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantEntry {
    /// Closed interval `[a, b]`.
    pub interval: [Real; 2],
    pub value: CellValue,
}

/// A step invariant; only nonzero cells are listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantJson {
    pub grid: Vec<f64>,
    pub codomain: CodomainJson,
    pub entries: Vec<InvariantEntry>,
}

fn cell_value(codomain: Codomain, v: &[u32]) -> CellValue {
    match codomain {
        Codomain::Scalar => CellValue::Scalar(v[0]),
        Codomain::Sequence(_) => CellValue::Sequence(v.to_vec()),
        Codomain::Matrix { cols, .. } => {
            CellValue::Matrix(v.chunks(cols.max(1)).map(<[u32]>::to_vec).collect())
        }
    }
}

fn flatten(codomain: Codomain, value: &CellValue) -> Result<Vec<u32>, String> {
    let flat = match (codomain, value) {
        (Codomain::Scalar, CellValue::Scalar(v)) => vec![*v],
        (Codomain::Sequence(_), CellValue::Sequence(v)) => v.clone(),
        (Codomain::Matrix { cols, .. }, CellValue::Matrix(rows)) => {
            if rows.iter().any(|r| r.len() != cols) {
                return Err(format!("matrix rows must have {cols} entries"));
            }
            rows.concat()
        }
        // An empty sequence and an empty matrix look alike in JSON.
        (Codomain::Matrix { .. }, CellValue::Sequence(v)) if v.is_empty() => Vec::new(),
        _ => {
            return Err(format!(
                "value {value:?} does not fit codomain {codomain:?}"
            ))
        }
    };
    if flat.len() != codomain.width() {
        return Err(format!(
            "value {value:?} does not fit codomain {codomain:?}"
        ));
    }
    Ok(flat)
}

/// Grid index of an exact grid value, `m` for `∞`.
fn grid_position(grid: &[f64], t: f64) -> Option<usize> {
    if t == f64::INFINITY {
        Some(grid.len())
    } else {
        grid.iter().position(|&g| g == t)
    }
}

impl InvariantJson {
    pub fn from_invariant(inv: &StepInvariant) -> Self {
        let codomain = inv.codomain();
        let entries = inv
            .cells()
            .filter(|(_, v)| v.iter().any(|&x| x != 0))
            .map(|(iv, v)| {
                let (a, b) = iv.closed_bounds(inv.grid());
                InvariantEntry {
                    interval: [Real(a), Real(b)],
                    value: cell_value(codomain, v),
                }
            })
            .collect();
        InvariantJson {
            grid: inv.grid().to_vec(),
            codomain: codomain.into(),
            entries,
        }
    }

    pub fn to_invariant(&self) -> Result<StepInvariant, String> {
        let codomain: Codomain = self.codomain.clone().into();
        let mut cells = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            let [a, b] = e.interval;
            let (Some(lo), Some(hi)) = (
                grid_position(&self.grid, a.0),
                grid_position(&self.grid, b.0),
            ) else {
                return Err(format!(
                    "entry {k}: interval endpoints must be grid values or \"inf\""
                ));
            };
            if lo > hi || lo == self.grid.len() {
                return Err(format!(
                    "entry {k}: interval [{}, {}] is empty or starts at inf",
                    a.0, b.0
                ));
            }
            let flat = flatten(codomain, &e.value).map_err(|m| format!("entry {k}: {m}"))?;
            cells.push((GridInterval::new(lo, hi), flat));
        }
        StepInvariant::from_cells(self.grid.clone(), codomain, &cells).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramEntry {
    /// Half-open interval `[birth, death)`.
    pub interval: [Real; 2],
    pub value: usize,
}

/// Cup-length diagram as half-open intervals with their lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub grid: Vec<f64>,
    pub entries: Vec<DiagramEntry>,
}

impl DiagramJson {
    pub fn from_diagram(d: &CupLengthDiagram) -> Self {
        DiagramJson {
            grid: d.grid.clone(),
            entries: d
                .half_open_entries()
                .into_iter()
                .map(|(b, e, l)| DiagramEntry {
                    interval: [Real(b), Real(e)],
                    value: l,
                })
                .collect(),
        }
    }

    /// Rebuilds the diagram without its product records.
    pub fn to_diagram(&self) -> Result<CupLengthDiagram, String> {
        let m = self.grid.len();
        let mut entries = BTreeMap::new();
        for (k, e) in self.entries.iter().enumerate() {
            let [b, d] = e.interval;
            let lo = grid_position(&self.grid, b.0).filter(|&i| i < m);
            let death = grid_position(&self.grid, d.0);
            let (Some(lo), Some(death)) = (lo, death) else {
                return Err(format!(
                    "entry {k}: endpoints must be grid values or \"inf\""
                ));
            };
            if death <= lo {
                return Err(format!("entry {k}: empty interval"));
            }
            let iv = if death == m {
                GridInterval::from_half_open(lo, None, m)
            } else {
                GridInterval::from_half_open(lo, Some(death), m)
            };
            entries.insert(iv, e.value);
        }
        Ok(CupLengthDiagram {
            grid: self.grid.clone(),
            entries,
            products: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedEntry {
    /// Closed interval `[a, b]`.
    pub interval: [Real; 2],
    pub value: Vec<i64>,
}

/// Möbius inversion of an invariant, nonzero entries only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedDiagramJson {
    pub grid: Vec<f64>,
    pub entries: Vec<SignedEntry>,
}

impl SignedDiagramJson {
    pub fn from_signed(d: &SignedDiagram) -> Self {
        SignedDiagramJson {
            grid: d.grid.clone(),
            entries: d
                .entries
                .iter()
                .filter(|(_, v)| v.iter().any(|&x| x != 0))
                .map(|(iv, v)| {
                    let (a, b) = iv.closed_bounds(&d.grid);
                    SignedEntry {
                        interval: [Real(a), Real(b)],
                        value: v.clone(),
                    }
                })
                .collect(),
        }
    }
}

//! Plain-text input formats.
//!
//! * distance matrix: first line `n`, then `n` lower-triangular rows
//!   (row `i` holds `i` or `i + 1` numbers, the optional last one being the
//!   zero diagonal);
//! * point cloud: one point per line, comma-separated coordinates;
//! * explicit filtration: one simplex per line, `v0 v1 … vk : value`.
//!
//! Lines starting with `#` are ignored everywhere, as are blank lines except
//! inside a distance matrix, where row 0 is empty unless it holds the
//! diagonal.

use std::path::Path;

use percup_core::complex::{DistanceMatrix, FilteredComplex, Simplex};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, field {field}: {message}")]
    Field {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    File(String),
    #[error(transparent)]
    Core(#[from] percup_core::Error),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number(token: &str, line: usize, field: usize) -> Result<f64, ParseError> {
    let v: f64 = token.trim().parse().map_err(|_| ParseError::Field {
        line,
        field,
        message: format!("`{}` is not a number", token.trim()),
    })?;
    if !v.is_finite() {
        return Err(ParseError::Field {
            line,
            field,
            message: format!("`{}` is not finite", token.trim()),
        });
    }
    Ok(v)
}

pub fn parse_distance_matrix(text: &str) -> Result<DistanceMatrix, ParseError> {
    let mut header_lines = content_lines(text);
    let (first, header) = header_lines
        .next()
        .ok_or_else(|| ParseError::File("empty distance matrix file".into()))?;
    let n: usize = header.parse().map_err(|_| ParseError::Field {
        line: first,
        field: 1,
        message: format!("expected the point count, found `{header}`"),
    })?;
    let mut lines = text
        .lines()
        .enumerate()
        .skip(first)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'));
    let mut rows = Vec::with_capacity(n);
    let mut last_line = first;
    for (i, (line, text)) in lines.by_ref().take(n).enumerate() {
        last_line = line;
        let row = text
            .split_whitespace()
            .enumerate()
            .map(|(k, tok)| parse_number(tok, line, k + 1))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != i && row.len() != i + 1 {
            return Err(ParseError::Line {
                line,
                message: format!(
                    "row {i} must hold {i} or {} entries, found {}",
                    i + 1,
                    row.len()
                ),
            });
        }
        if let Some((k, _)) = row.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(ParseError::Field {
                line,
                field: k + 1,
                message: "distances must be nonnegative".into(),
            });
        }
        rows.push(row);
    }
    if rows.len() < n {
        return Err(ParseError::Line {
            line: last_line,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    if let Some((line, _)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(ParseError::Line {
            line,
            message: format!("unexpected data after {n} rows"),
        });
    }
    Ok(DistanceMatrix::from_lower_triangular(&rows)?)
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (line, text) in content_lines(text) {
        let p = text
            .split(',')
            .enumerate()
            .map(|(k, tok)| parse_number(tok, line, k + 1))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(ParseError::Line {
                    line,
                    message: format!("expected {} coordinates, found {}", first.len(), p.len()),
                });
            }
        }
        points.push(p);
    }
    Ok(points)
}

pub fn parse_filtration(text: &str) -> Result<FilteredComplex, ParseError> {
    let mut pairs = Vec::new();
    for (line, text) in content_lines(text) {
        let (verts, value) = text.split_once(':').ok_or_else(|| ParseError::Line {
            line,
            message: "expected `v0 v1 ... : value`".into(),
        })?;
        let vertices = verts
            .split_whitespace()
            .enumerate()
            .map(|(k, tok)| {
                tok.parse::<u32>().map_err(|_| ParseError::Field {
                    line,
                    field: k + 1,
                    message: format!("`{tok}` is not a vertex index"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.is_empty() {
            return Err(ParseError::Line {
                line,
                message: "simplex has no vertices".into(),
            });
        }
        let field = vertices.len() + 1;
        let value = parse_number(value, line, field)?;
        let simplex = Simplex::from_unordered(vertices).map_err(|e| ParseError::Line {
            line,
            message: e.to_string(),
        })?;
        pairs.push((simplex, value));
    }
    Ok(FilteredComplex::from_explicit(pairs)?)
}

pub fn read_to_string(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|e| ParseError::File(format!("{}: {e}", path.display())))
}

//! Dense matrices over the Laurent ring and their exact determinants.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::Value;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Monomial, TermWire, VarTable};

/// Default bound on the dimension of symbolic determinants.
pub const DEFAULT_MAX_DIM: usize = 12;

/// Largest cofactor expansion accepted by [`PolyMatrix::det_cofactor`].
pub const COFACTOR_MAX_DIM: usize = 7;

/// Symbolic size guard, overridable through `CLUSTERDET_MAX_DIM`.
pub fn symbolic_dim_limit() -> usize {
    std::env::var("CLUSTERDET_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("index {index} out of bounds for length {len}")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("inexact division during fraction-free elimination at step {step}: {source}")]
    InternalDivisionFailure { step: usize, source: LaurentError },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Arc<VarTable>,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(
        vars: &Arc<VarTable>,
        rows: usize,
        cols: usize,
        entries: Vec<LaurentPoly>,
    ) -> Result<Self, DetError> {
        if entries.len() != rows * cols {
            return Err(DetError::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| **e.vars() != **vars) {
            return Err(LaurentError::VarTableMismatch.into());
        }
        Ok(PolyMatrix { rows, cols, vars: Arc::clone(vars), entries })
    }

    pub fn from_fn(
        vars: &Arc<VarTable>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LaurentPoly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(**e.vars() == **vars, "entry ({i},{j}) over a foreign variable table");
                entries.push(e);
            }
        }
        PolyMatrix { rows, cols, vars: Arc::clone(vars), entries }
    }

    pub fn from_integers(vars: &Arc<VarTable>, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(vars, r, c, |i, j| LaurentPoly::constant(vars, rows[i][j]))
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: LaurentPoly) {
        assert!(**value.vars() == *self.vars);
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.vars, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Submatrix on the given rows and columns, keeping their relative order.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Self, DetError> {
        let mut rows = rows.to_vec();
        let mut cols = cols.to_vec();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if let Some(&i) = rows.iter().find(|&&i| i >= self.rows) {
            return Err(DetError::IndexOutOfBounds { index: i, len: self.rows });
        }
        if let Some(&j) = cols.iter().find(|&&j| j >= self.cols) {
            return Err(DetError::IndexOutOfBounds { index: j, len: self.cols });
        }
        Ok(Self::from_fn(&self.vars, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    /// Entrywise product with another matrix of the same shape.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(&self.vars, self.rows, self.cols, |i, j| self.get(i, j) * other.get(i, j))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn require_square(&self) -> Result<usize, DetError> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(DetError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Fraction-free (Bareiss) determinant.
    ///
    /// The monomial content of every row and then every column is pulled out
    /// into a unit first, so elimination runs on ordinary polynomials. Pivots
    /// are the first row at or below the diagonal with a nonzero entry.
    pub fn det_bareiss(&self) -> Result<LaurentPoly, DetError> {
        let n = self.require_square()?;
        let limit = symbolic_dim_limit();
        if n > limit {
            return Err(DetError::DimensionTooLarge { dim: n, limit });
        }
        let nvars = self.vars.len();
        if n == 0 {
            return Ok(LaurentPoly::one(&self.vars));
        }
        let mut a: Vec<Vec<LaurentPoly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut unit = Monomial::one(nvars);

        for row in a.iter_mut() {
            let Some(c) = content_of(row.iter()) else {
                return Ok(LaurentPoly::zero(&self.vars));
            };
            if !c.is_one() {
                let inv = c.inverse();
                for e in row.iter_mut() {
                    *e = e.mul_monomial(&inv);
                }
                unit = unit.mul(&c);
            }
        }
        for j in 0..n {
            let Some(c) = content_of(a.iter().map(|r| &r[j])) else {
                return Ok(LaurentPoly::zero(&self.vars));
            };
            if !c.is_one() {
                let inv = c.inverse();
                for r in a.iter_mut() {
                    r[j] = r[j].mul_monomial(&inv);
                }
                unit = unit.mul(&c);
            }
        }

        let mut negate = false;
        let mut prev: Option<LaurentPoly> = None;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(LaurentPoly::zero(&self.vars));
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            let (top, rest) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in rest.iter_mut() {
                let factor = row[k].clone();
                for j in k + 1..n {
                    let mut v = pivot * &row[j];
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v = &v - &(&factor * &pivot_row[j]);
                    }
                    if let Some(d) = &prev {
                        v = v
                            .exact_div(d)
                            .map_err(|source| DetError::InternalDivisionFailure { step: k, source })?;
                    }
                    row[j] = v;
                }
                row[k] = LaurentPoly::zero(&self.vars);
            }
            prev = Some(pivot.clone());
        }
        let mut det = a[n - 1][n - 1].mul_monomial(&unit);
        if negate {
            det = -&det;
        }
        Ok(det)
    }

    /// Laplace expansion along the first row; independent of [`Self::det_bareiss`].
    pub fn det_cofactor(&self) -> Result<LaurentPoly, DetError> {
        let n = self.require_square()?;
        if n > COFACTOR_MAX_DIM {
            return Err(DetError::DimensionTooLarge { dim: n, limit: COFACTOR_MAX_DIM });
        }
        let cols: Vec<usize> = (0..n).collect();
        Ok(self.laplace(0, &cols))
    }

    fn laplace(&self, row: usize, cols: &[usize]) -> LaurentPoly {
        if cols.is_empty() {
            return LaurentPoly::one(&self.vars);
        }
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = LaurentPoly::zero(&self.vars);
        for (pos, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.laplace(row + 1, &rest);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| {
                Value::Array(
                    self.row(i)
                        .iter()
                        .map(|e| serde_json::to_value(e).expect("serializable"))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses the matrix format; integer entries become constants over the
    /// variable table of the first polynomial entry (empty if there is none).
    pub fn from_json(s: &str) -> Result<Self, DetError> {
        let v: Value = serde_json::from_str(s).map_err(|e| DetError::Malformed(e.to_string()))?;
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| DetError::Malformed(format!("missing {key}")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let grid = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| DetError::Malformed("missing entries".into()))?;
        if grid.len() != rows {
            return Err(DetError::Malformed(format!("{} rows listed, {rows} declared", grid.len())));
        }
        let mut cells = Vec::with_capacity(rows * cols);
        for r in grid {
            let r = r.as_array().ok_or_else(|| DetError::Malformed("row is not an array".into()))?;
            if r.len() != cols {
                return Err(DetError::Malformed(format!("row of length {}, {cols} declared", r.len())));
            }
            cells.extend(r.iter().cloned());
        }
        let names: Vec<String> = cells
            .iter()
            .find_map(|c| c.get("vars"))
            .map(|vs| serde_json::from_value(vs.clone()))
            .transpose()
            .map_err(|e| DetError::Malformed(e.to_string()))?
            .unwrap_or_default();
        let vars = VarTable::shared(names)?;
        let mut entries = Vec::with_capacity(cells.len());
        for c in cells {
            let e = match &c {
                Value::Number(num) => {
                    let z: BigInt = num
                        .to_string()
                        .parse()
                        .map_err(|_| DetError::Malformed(format!("non-integer entry {num}")))?;
                    LaurentPoly::constant(&vars, z)
                }
                Value::Object(obj) => {
                    let entry_vars: Vec<String> = obj
                        .get("vars")
                        .map(|vs| serde_json::from_value(vs.clone()))
                        .transpose()
                        .map_err(|e| DetError::Malformed(e.to_string()))?
                        .unwrap_or_default();
                    if entry_vars != vars.names() {
                        return Err(LaurentError::VarTableMismatch.into());
                    }
                    let terms: Vec<TermWire> = obj
                        .get("terms")
                        .map(|t| serde_json::from_value(t.clone()))
                        .transpose()
                        .map_err(|e| DetError::Malformed(e.to_string()))?
                        .unwrap_or_default();
                    LaurentPoly::from_wire_terms(&vars, terms)?
                }
                other => return Err(DetError::Malformed(format!("unsupported entry {other}"))),
            };
            entries.push(e);
        }
        Self::new(&vars, rows, cols, entries)
    }
}

fn content_of<'a>(mut it: impl Iterator<Item = &'a LaurentPoly>) -> Option<Monomial> {
    let mut acc: Option<Monomial> = None;
    for e in it.by_ref() {
        if let Some(c) = e.monomial_content() {
            acc = Some(match acc {
                Some(a) => a.gcd(&c),
                None => c,
            });
        }
    }
    acc
}

//! Cluster algebra of type D_n on the once-punctured n-gon.
//!
//! Boundary vertices are `1..=n`, the puncture is `0`. The initial tagged
//! triangulation is the boundary together with the plain radii `(0,i)`, so the
//! generators are `r_i = x_0_i` (mutable) and `f_i = x_i_{i+1}` (frozen,
//! indices mod n). `x_ij` for boundary vertices is the arc following the
//! counterclockwise boundary path from `i` to `j`; `x_i0` is the radius
//! notched at the puncture.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::detkit::{DetError, PolyMatrix};
use crate::laurent::{LaurentError, LaurentPoly, VarTable};
use crate::mutation::{MutationError, Seed};
use crate::polygon::{self, ExchangeMatrix, OrientedTriangle, PolygonError};
use crate::type_a::IdentityCheck;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeDError {
    #[error("arc endpoints must differ (got {0},{0})")]
    EqualEndpoints(usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("type D needs n >= {min} here (got n = {n})")]
    RankTooSmall { n: usize, min: usize },
    #[error("notched radius at {j}: references {a} and {b} give different polynomials")]
    InconsistentRelation { j: usize, a: usize, b: usize },
    #[error("cannot parse arc label {0:?}")]
    BadLabel(String),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// Tagged arc of the punctured n-gon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DArcLabel {
    /// Ordered pair of boundary vertices.
    Boundary(usize, usize),
    /// Plain radius `(0,i)`.
    Plain(usize),
    /// Notched radius `(i,0)`.
    Notched(usize),
}

impl DArcLabel {
    pub fn name(self) -> String {
        match self {
            DArcLabel::Boundary(i, j) => format!("x_{i}_{j}"),
            DArcLabel::Plain(i) => format!("x_0_{i}"),
            DArcLabel::Notched(i) => format!("x_{i}_0"),
        }
    }

    pub fn validate(self, n: usize) -> Result<Self, TypeDError> {
        let check = |v: usize| {
            if (1..=n).contains(&v) {
                Ok(())
            } else {
                Err(TypeDError::VertexOutOfRange { vertex: v, n })
            }
        };
        match self {
            DArcLabel::Boundary(i, j) => {
                if i == j {
                    return Err(TypeDError::EqualEndpoints(i));
                }
                check(i)?;
                check(j)?;
            }
            DArcLabel::Plain(i) | DArcLabel::Notched(i) => check(i)?,
        }
        Ok(self)
    }
}

impl fmt::Display for DArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DArcLabel::Boundary(i, j) => write!(f, "{i},{j}"),
            DArcLabel::Plain(i) => write!(f, "0,{i}"),
            DArcLabel::Notched(i) => write!(f, "{i},0"),
        }
    }
}

impl FromStr for DArcLabel {
    type Err = TypeDError;

    /// Parses `"i,j"`; `"0,i"` is the plain and `"i,0"` the notched radius.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypeDError::BadLabel(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        match (a, b) {
            (0, 0) => Err(TypeDError::EqualEndpoints(0)),
            (0, i) => Ok(DArcLabel::Plain(i)),
            (i, 0) => Ok(DArcLabel::Notched(i)),
            (i, j) => Ok(DArcLabel::Boundary(i, j)),
        }
    }
}

/// Inner tagged arcs: boundary pairs at distance at least 2, then both radii.
pub fn all_inner_labels(n: usize) -> Vec<DArcLabel> {
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            if i != j && distance(n, i, j) >= 2 {
                out.push(DArcLabel::Boundary(i, j));
            }
        }
    }
    out.extend((1..=n).map(DArcLabel::Plain));
    out.extend((1..=n).map(DArcLabel::Notched));
    out
}

/// Counterclockwise distance from `i` to `j` on `1..=n`.
pub fn distance(n: usize, i: usize, j: usize) -> usize {
    (j + n - i) % n
}

fn succ(n: usize, i: usize) -> usize {
    i % n + 1
}

fn pred(n: usize, i: usize) -> usize {
    (i + n - 2) % n + 1
}

#[derive(Debug, Clone)]
pub struct TypeDAlgebra {
    n: usize,
    vars: Arc<VarTable>,
    /// `(n+1) x (n+1)`, indices `1..=n`.
    table: Vec<LaurentPoly>,
    notched: Vec<LaurentPoly>,
}

impl TypeDAlgebra {
    pub fn new(n: usize) -> Result<Self, TypeDError> {
        if n < 2 {
            return Err(TypeDError::RankTooSmall { n, min: 2 });
        }
        let mut names: Vec<String> = (1..=n).map(|i| DArcLabel::Plain(i).name()).collect();
        names.extend((1..=n).map(|i| DArcLabel::Boundary(i, succ(n, i)).name()));
        let vars = VarTable::shared(names)?;
        let r = |i: usize| LaurentPoly::var(&vars, i - 1);
        let f = |i: usize| LaurentPoly::var(&vars, n + i - 1);
        let w = n + 1;
        let mut table = vec![LaurentPoly::zero(&vars); w * w];
        for i in 1..=n {
            table[i * w + succ(n, i)] = f(i);
        }
        for d in 2..n {
            for i in 1..=n {
                let j = (i + d - 1) % n + 1;
                let i1 = succ(n, i);
                let num = &(&r(i) * &table[i1 * w + j]) + &(&r(j) * &f(i));
                table[i * w + j] = num.exact_div(&r(i1))?;
            }
        }
        let mut notched = vec![LaurentPoly::zero(&vars)];
        for j in 1..=n {
            let mut first: Option<(usize, LaurentPoly)> = None;
            for i in (1..=n).filter(|&i| i != j) {
                let sum = &table[i * w + j] + &table[j * w + i];
                let v = sum.exact_div(&r(i))?;
                match &first {
                    None => first = Some((i, v)),
                    Some((a, p)) if *p != v => {
                        return Err(TypeDError::InconsistentRelation { j, a: *a, b: i });
                    }
                    Some(_) => {}
                }
            }
            notched.push(first.expect("n >= 2").1);
        }
        Ok(TypeDAlgebra { n, vars, table, notched })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    fn check_vertex(&self, v: usize) -> Result<(), TypeDError> {
        if (1..=self.n).contains(&v) {
            Ok(())
        } else {
            Err(TypeDError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// `x_ij` for boundary vertices `i != j`.
    pub fn var(&self, i: usize, j: usize) -> Result<LaurentPoly, TypeDError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(TypeDError::EqualEndpoints(i));
        }
        Ok(self.table[i * (self.n + 1) + j].clone())
    }

    /// Plain radius `x_0i`, a generator.
    pub fn plain(&self, i: usize) -> Result<LaurentPoly, TypeDError> {
        self.check_vertex(i)?;
        Ok(LaurentPoly::var(&self.vars, i - 1))
    }

    /// Notched radius `x_i0`.
    pub fn notched(&self, i: usize) -> Result<LaurentPoly, TypeDError> {
        self.check_vertex(i)?;
        Ok(self.notched[i].clone())
    }

    pub fn frozen(&self, i: usize) -> Result<LaurentPoly, TypeDError> {
        self.check_vertex(i)?;
        Ok(LaurentPoly::var(&self.vars, self.n + i - 1))
    }

    pub fn value(&self, label: DArcLabel) -> Result<LaurentPoly, TypeDError> {
        match label.validate(self.n)? {
            DArcLabel::Boundary(i, j) => self.var(i, j),
            DArcLabel::Plain(i) => self.plain(i),
            DArcLabel::Notched(i) => self.notched(i),
        }
    }

    fn r(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var(&self.vars, i - 1)
    }

    fn at(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.table[i * (self.n + 1) + j]
    }

    /// `M_00 = 0`, `M_0j = x_0j`, `M_i0 = x_i0`, `M_ij = x_ij`.
    pub fn d_matrix(&self) -> PolyMatrix {
        let m = self.n + 1;
        PolyMatrix::from_fn(&self.vars, m, m, |i, j| match (i, j) {
            _ if i == j => LaurentPoly::zero(&self.vars),
            (0, j) => self.r(j),
            (i, 0) => self.notched[i].clone(),
            (i, j) => self.at(i, j).clone(),
        })
    }

    /// `(-1)^n * prod x_0i x_i0`.
    pub fn d_closed_form(&self) -> LaurentPoly {
        let prod = (1..=self.n).fold(LaurentPoly::one(&self.vars), |acc, i| &(&acc * &self.r(i)) * &self.notched[i]);
        if self.n % 2 == 1 {
            -&prod
        } else {
            prod
        }
    }

    pub fn verify_d(&self) -> Result<IdentityCheck, TypeDError> {
        let computed = self.d_matrix().det_bareiss()?;
        Ok(IdentityCheck { expected: self.d_closed_form(), computed })
    }

    /// `x_ij + x_ji = x_i0 x_0j` and `x_ij + x_ji = x_0i x_j0`.
    pub fn prop34(&self, i: usize, j: usize) -> Result<(bool, bool), TypeDError> {
        let sum = &self.var(i, j)? + &self.var(j, i)?;
        let first = sum == &self.notched(i)? * &self.plain(j)?;
        let second = sum == &self.plain(i)? * &self.notched(j)?;
        Ok((first, second))
    }

    /// Ptolemy relation of the quadrilateral `(0, a, b, c)` for `a, b, c` in
    /// counterclockwise order: `x_0b x_ac = x_0a x_bc + x_0c x_ab`.
    pub fn puncture_ptolemy(&self, a: usize, b: usize, c: usize) -> Result<bool, TypeDError> {
        let lhs = &self.plain(b)? * &self.var(a, c)?;
        let rhs = &(&self.plain(a)? * &self.var(b, c)?) + &(&self.plain(c)? * &self.var(a, b)?);
        Ok(lhs == rhs)
    }

    /// Combination `x_01 R_i + x_1i R_0 - x_0i R_1` of rows of M, for `2 <= i <= n`.
    pub fn combined_row(&self, i: usize) -> Result<Vec<LaurentPoly>, TypeDError> {
        if !(2..=self.n).contains(&i) {
            return Err(TypeDError::VertexOutOfRange { vertex: i, n: self.n });
        }
        let m = self.d_matrix();
        let (x01, x1i, x0i) = (self.r(1), self.at(1, i).clone(), self.r(i));
        Ok((0..=self.n)
            .map(|c| &(&(&x01 * m.get(i, c)) + &(&x1i * m.get(0, c))) - &(&x0i * m.get(1, c)))
            .collect())
    }

    /// Entry pattern of every combined row and the corner minor used in the
    /// elimination argument for the determinant.
    pub fn row_operation_check(&self) -> Result<RowOperationReport, TypeDError> {
        let mut zero_pattern = true;
        let mut entries = true;
        let x01 = self.r(1);
        for i in 2..=self.n {
            let row = self.combined_row(i)?;
            for (c, e) in row.iter().enumerate() {
                if c == 0 || c >= i {
                    zero_pattern &= e.is_zero();
                } else if c == 1 {
                    entries &= *e == &(&x01 * &x01) * &self.notched[i];
                } else {
                    entries &= *e == &(&x01 * &self.r(i)) * &self.notched[c];
                }
            }
        }
        let corner = self.d_matrix().minor(&[0, 1], &[0, self.n])?.det_bareiss()?;
        let corner_minor = corner == -&(&self.notched[1] * &self.r(self.n));
        Ok(RowOperationReport { zero_pattern, entries, corner_minor })
    }

    /// Triangle-sum matrix of the star triangulation; rows are radii then
    /// boundary arcs, columns the radii.
    pub fn star_exchange_matrix(&self) -> Result<ExchangeMatrix, TypeDError> {
        let n = self.n;
        if n < 3 {
            return Err(TypeDError::RankTooSmall { n, min: 3 });
        }
        let radius = |i: usize| DArcLabel::Plain(i).name();
        let side = |i: usize| DArcLabel::Boundary(i, succ(n, i)).name();
        let inner: Vec<String> = (1..=n).map(radius).collect();
        let mut arcs = inner.clone();
        arcs.extend((1..=n).map(side));
        let triangles: Vec<OrientedTriangle> =
            (1..=n).map(|i| OrientedTriangle::new(radius(i), side(i), radius(succ(n, i)))).collect();
        Ok(polygon::triangle_sum_exchange_matrix(&arcs, &inner, &triangles)?)
    }

    pub fn star_seed(&self) -> Result<Seed, TypeDError> {
        Ok(Seed::initial(&self.vars, self.star_exchange_matrix()?)?)
    }

    /// Expansions of all inner tagged arcs, in [`all_inner_labels`] order.
    pub fn inner_values(&self) -> Vec<(DArcLabel, LaurentPoly)> {
        all_inner_labels(self.n)
            .into_iter()
            .map(|l| (l, self.value(l).expect("valid label")))
            .collect()
    }

    /// Index of the vertex before `i`.
    pub fn pred(&self, i: usize) -> usize {
        pred(self.n, i)
    }

    pub fn succ(&self, i: usize) -> usize {
        succ(self.n, i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowOperationReport {
    /// Zeros in column 0, column i and every column after i.
    pub zero_pattern: bool,
    /// Column 1 is `x_01^2 x_i0`, column `2 <= j < i` is `x_01 x_0i x_j0`.
    pub entries: bool,
    /// Rows `{0,1}`, columns `{0,n}` give `-x_10 x_0n`.
    pub corner_minor: bool,
}

impl RowOperationReport {
    pub fn holds(&self) -> bool {
        self.zero_pattern && self.entries && self.corner_minor
    }
}

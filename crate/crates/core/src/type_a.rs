//! Cluster algebra of type A_n on the (n+3)-gon.
//!
//! The initial seed is the star at vertex `n+2`: mutable generators
//! `x_i_{n+2}` for `1 <= i <= n`, frozen boundary variables `x_i_{i+1}` and
//! `x_0_{n+2}`. Every other `x_ij` is obtained from the Ptolemy relation of the
//! quadrilateral `(i, j-1, j, n+2)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::detkit::{DetError, PolyMatrix};
use crate::laurent::{LaurentError, LaurentPoly, VarTable};
use crate::mutation::{MutationError, Seed};
use crate::polygon::{self, ChordArc, PolygonError, PolygonTriangulation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeAError {
    #[error("arc endpoints must differ (got {0},{0})")]
    EqualEndpoints(usize),
    #[error("vertex {vertex} outside the {size}-gon")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("the Cayley–Menger identity needs n >= 2 (got n = {0})")]
    RankHypothesisViolated(usize),
    #[error("tridiagonal indices need 1 <= i <= j <= n (got i = {i}, j = {j}, n = {n})")]
    IndexRange { i: usize, j: usize, n: usize },
    #[error("could not draw a sample with all 2x2 minors nonzero after {0} attempts")]
    DegenerateSample(usize),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// Outcome of comparing a computed polynomial with its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub expected: LaurentPoly,
    pub computed: LaurentPoly,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Debug, Clone)]
pub struct TypeAAlgebra {
    n: usize,
    vars: Arc<VarTable>,
    /// `size x size` table, zero on the diagonal.
    table: Vec<LaurentPoly>,
}

impl TypeAAlgebra {
    pub fn new(n: usize) -> Result<Self, TypeAError> {
        let size = n + 3;
        let apex = n + 2;
        let mut names: Vec<String> = (1..=n).map(|i| arc_name(i, apex)).collect();
        names.extend(polygon::boundary_arcs(n).into_iter().map(ChordArc::name));
        let vars = VarTable::shared(names)?;
        let mut table = vec![LaurentPoly::zero(&vars); size * size];
        let gen = |i: usize, j: usize| LaurentPoly::var_named(&vars, &arc_name(i, j)).expect("generator");
        let set = |t: &mut Vec<LaurentPoly>, i: usize, j: usize, p: LaurentPoly| {
            t[i * size + j] = p.clone();
            t[j * size + i] = p;
        };
        for i in 1..=n {
            set(&mut table, i, apex, gen(i, apex));
        }
        for b in polygon::boundary_arcs(n) {
            let (i, j) = b.endpoints();
            set(&mut table, i, j, gen(i, j));
        }
        // Remaining chords (i, j) with j <= n + 1, filled by increasing j, then i.
        for j in 2..apex {
            for i in 0..j - 1 {
                let at = |t: &Vec<LaurentPoly>, a: usize, b: usize| t[a * size + b].clone();
                let num = &(&at(&table, i, j - 1) * &at(&table, j, apex))
                    + &(&at(&table, j - 1, j) * &at(&table, i, apex));
                let v = num.exact_div(&at(&table, j - 1, apex))?;
                set(&mut table, i, j, v);
            }
        }
        Ok(TypeAAlgebra { n, vars, table })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Number of polygon vertices, `n + 3`.
    pub fn size(&self) -> usize {
        self.n + 3
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    /// Laurent expansion of `x_ij` in the star seed.
    pub fn var(&self, i: usize, j: usize) -> Result<LaurentPoly, TypeAError> {
        let size = self.size();
        for v in [i, j] {
            if v >= size {
                return Err(TypeAError::VertexOutOfRange { vertex: v, size });
            }
        }
        if i == j {
            return Err(TypeAError::EqualEndpoints(i));
        }
        Ok(self.entry(i, j).clone())
    }

    fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.table[i * self.size() + j]
    }

    pub fn arc(&self, a: ChordArc) -> &LaurentPoly {
        let (i, j) = a.endpoints();
        self.entry(i, j)
    }

    /// `x_01 x_12 ... x_{n+1,n+2} x_{n+2,0}`.
    pub fn boundary_product(&self) -> LaurentPoly {
        polygon::boundary_arcs(self.n)
            .into_iter()
            .fold(LaurentPoly::one(&self.vars), |acc, b| &acc * self.arc(b))
    }

    pub fn star_triangulation(&self) -> PolygonTriangulation {
        PolygonTriangulation::star(self.n, self.n + 2).expect("valid star")
    }

    pub fn star_seed(&self) -> Seed {
        self.seed_for(&self.star_triangulation()).expect("star seed")
    }

    /// Seed of an arbitrary triangulation, with cluster values expanded in the star seed.
    pub fn seed_for(&self, t: &PolygonTriangulation) -> Result<Seed, TypeAError> {
        let b = t.exchange_matrix();
        let cluster = t.inner().chain(t.boundary()).map(|a| self.arc(a).clone()).collect();
        Ok(Seed::from_parts(cluster, b)?)
    }

    /// Symmetric matrix of all `x_ij` with zero diagonal.
    pub fn bm_matrix(&self) -> PolyMatrix {
        let m = self.size();
        PolyMatrix::from_fn(&self.vars, m, m, |i, j| self.entry(i, j).clone())
    }

    /// Entrywise square of [`Self::bm_matrix`].
    pub fn pm_matrix(&self) -> PolyMatrix {
        let m = self.size();
        PolyMatrix::from_fn(&self.vars, m, m, |i, j| {
            let x = self.entry(i, j);
            x * x
        })
    }

    /// [`Self::pm_matrix`] bordered by a row and column of ones with a zero corner.
    pub fn cm_matrix(&self) -> PolyMatrix {
        let m = self.size();
        PolyMatrix::from_fn(&self.vars, m + 1, m + 1, |i, j| {
            if i == j {
                LaurentPoly::zero(&self.vars)
            } else if i == m || j == m {
                LaurentPoly::one(&self.vars)
            } else {
                let x = self.entry(i, j);
                x * x
            }
        })
    }

    /// `-(-2)^{n+1}` times the boundary product.
    pub fn bm_closed_form(&self) -> LaurentPoly {
        let c = -BigInt::from(-2).pow(self.n as u32 + 1);
        self.boundary_product().scale(&c)
    }

    pub fn verify_bm(&self) -> Result<IdentityCheck, TypeAError> {
        let computed = self.bm_matrix().det_bareiss()?;
        Ok(IdentityCheck { expected: self.bm_closed_form(), computed })
    }

    /// Both determinants, requiring the rank hypothesis `n >= 2`.
    pub fn verify_cm(&self) -> Result<CmCheck, TypeAError> {
        if self.n < 2 {
            return Err(TypeAError::RankHypothesisViolated(self.n));
        }
        self.cm_determinants()
    }

    /// Same as [`Self::verify_cm`] without the hypothesis check.
    pub fn cm_determinants(&self) -> Result<CmCheck, TypeAError> {
        Ok(CmCheck { det_pm: self.pm_matrix().det_bareiss()?, det_cm: self.cm_matrix().det_bareiss()? })
    }

    /// Every `k x k` minor `PM_{I,J}`; returns how many are nonzero and how many were checked.
    pub fn pm_minor_census(&self, k: usize) -> Result<(usize, usize), TypeAError> {
        let pm = self.pm_matrix();
        let subsets = k_subsets(self.size(), k);
        let mut nonzero = 0;
        for rows in &subsets {
            for cols in &subsets {
                if !pm.minor(rows, cols)?.det_bareiss()?.is_zero() {
                    nonzero += 1;
                }
            }
        }
        Ok((nonzero, subsets.len() * subsets.len()))
    }

    /// Tridiagonal matrix with diagonal `x_{m-1,m+1}` (`i <= m <= j`),
    /// superdiagonal `x_{m+1,m+2}` and subdiagonal `x_{m-1,m}`.
    pub fn tridiag_matrix(&self, i: usize, j: usize) -> Result<PolyMatrix, TypeAError> {
        if i < 1 || i > j || j > self.n {
            return Err(TypeAError::IndexRange { i, j, n: self.n });
        }
        let len = j - i + 1;
        Ok(PolyMatrix::from_fn(&self.vars, len, len, |r, c| {
            let m = i + r;
            if r == c {
                self.entry(m - 1, m + 1).clone()
            } else if c == r + 1 {
                self.entry(m + 1, m + 2).clone()
            } else if r == c + 1 {
                self.entry(m - 2, m - 1).clone()
            } else {
                LaurentPoly::zero(&self.vars)
            }
        }))
    }

    pub fn tridiag_check(&self, i: usize, j: usize) -> Result<TridiagCheck, TypeAError> {
        let det = self.tridiag_matrix(i, j)?.det_bareiss()?;
        let target = self.entry(i - 1, j + 1).clone();
        let monomial = (i..j).fold(LaurentPoly::one(&self.vars), |acc, m| &acc * self.entry(m, m + 1));
        let balanced = det == &target * &monomial;
        let printed = target == &monomial * &det;
        Ok(TridiagCheck { i, j, det, target, monomial, balanced, printed })
    }
}

#[derive(Debug, Clone)]
pub struct CmCheck {
    pub det_pm: LaurentPoly,
    pub det_cm: LaurentPoly,
}

impl CmCheck {
    pub fn holds(&self) -> bool {
        self.det_pm.is_zero() && self.det_cm.is_zero()
    }
}

/// Both readings of the tridiagonal identity for one index pair.
#[derive(Debug, Clone)]
pub struct TridiagCheck {
    pub i: usize,
    pub j: usize,
    pub det: LaurentPoly,
    /// `x_{i-1,j+1}`.
    pub target: LaurentPoly,
    /// `x_{i,i+1} ... x_{j-1,j}`.
    pub monomial: LaurentPoly,
    /// `det = x_{i-1,j+1} * monomial`.
    pub balanced: bool,
    /// `x_{i-1,j+1} = monomial * det`.
    pub printed: bool,
}

pub fn arc_name(i: usize, j: usize) -> String {
    ChordArc::new(i, j).expect("distinct endpoints").name()
}

pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Integer point of the Plücker embedding: `x_ij` is the minor of columns `i < j`.
#[derive(Debug, Clone)]
pub struct PluckerSample {
    pub matrix: [Vec<i64>; 2],
    size: usize,
    minors: Vec<BigInt>,
}

pub const PLUCKER_RETRIES: usize = 1000;

impl PluckerSample {
    pub fn from_matrix(top: Vec<i64>, bottom: Vec<i64>) -> Self {
        assert_eq!(top.len(), bottom.len());
        let size = top.len();
        let mut minors = vec![BigInt::zero(); size * size];
        for i in 0..size {
            for j in i + 1..size {
                let m = BigInt::from(top[i]) * bottom[j] - BigInt::from(top[j]) * bottom[i];
                minors[i * size + j] = m.clone();
                minors[j * size + i] = m;
            }
        }
        PluckerSample { matrix: [top, bottom], size, minors }
    }

    /// Minor on columns `min(i,j), max(i,j)`; zero when `i == j`.
    pub fn value(&self, i: usize, j: usize) -> &BigInt {
        &self.minors[i * self.size + j]
    }

    fn all_nonzero(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || !self.value(i, j).is_zero()))
    }

    /// Values of the algebra's generators, in variable-table order.
    pub fn assignment(&self, alg: &TypeAAlgebra) -> Vec<BigRational> {
        alg.vars()
            .names()
            .iter()
            .map(|name| {
                let (i, j) = parse_arc_name(name).expect("type A generator name");
                BigRational::from_integer(self.value(i, j).clone())
            })
            .collect()
    }
}

fn parse_arc_name(name: &str) -> Option<(usize, usize)> {
    let mut parts = name.strip_prefix("x_")?.split('_');
    let i = parts.next()?.parse().ok()?;
    let j = parts.next()?.parse().ok()?;
    Some((i, j))
}

/// Draws a random integer `2 x (n+3)` matrix with every 2x2 minor nonzero.
pub fn plucker_specialize<R: Rng + ?Sized>(alg: &TypeAAlgebra, rng: &mut R) -> Result<PluckerSample, TypeAError> {
    let size = alg.size();
    for _ in 0..PLUCKER_RETRIES {
        let top: Vec<i64> = (0..size).map(|_| rng.gen_range(-9..=9)).collect();
        let bottom: Vec<i64> = (0..size).map(|_| rng.gen_range(-9..=9)).collect();
        let s = PluckerSample::from_matrix(top, bottom);
        if s.all_nonzero() {
            return Ok(s);
        }
    }
    Err(TypeAError::DegenerateSample(PLUCKER_RETRIES))
}

/// Integer check of the determinant identity at a Plücker point.
///
/// Entries are the Laurent expansions evaluated at the sample; each must
/// agree with the corresponding minor, and the rational determinant must
/// equal the closed form evaluated the same way.
#[derive(Debug, Clone)]
pub struct PluckerCheck {
    pub entries_match_minors: bool,
    pub det: BigRational,
    pub expected: BigRational,
}

impl PluckerCheck {
    pub fn holds(&self) -> bool {
        self.entries_match_minors && self.det == self.expected
    }
}

pub fn verify_bm_plucker(alg: &TypeAAlgebra, sample: &PluckerSample) -> Result<PluckerCheck, TypeAError> {
    let point = sample.assignment(alg);
    let m = alg.size();
    let mut entries_match_minors = true;
    let mut rows = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let v = alg.entry(i, j).eval_rational(&point)?;
            entries_match_minors &= v == BigRational::from_integer(sample.value(i, j).clone());
            rows[i][j] = v;
        }
    }
    let det = crate::hyper::det_rational(rows);
    let expected = alg.bm_closed_form().eval_rational(&point)?;
    Ok(PluckerCheck { entries_match_minors, det, expected })
}

/// Rational determinants of PM and CM at a Plücker point.
pub fn cm_plucker(alg: &TypeAAlgebra, sample: &PluckerSample) -> (BigRational, BigRational) {
    let m = alg.size();
    let sq = |i: usize, j: usize| BigRational::from_integer(sample.value(i, j) * sample.value(i, j));
    let pm: Vec<Vec<BigRational>> = (0..m).map(|i| (0..m).map(|j| sq(i, j)).collect()).collect();
    let cm: Vec<Vec<BigRational>> = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| {
                    if i == j {
                        BigRational::zero()
                    } else if i == m || j == m {
                        BigRational::one()
                    } else {
                        sq(i, j)
                    }
                })
                .collect()
        })
        .collect();
    (crate::hyper::det_rational(pm), crate::hyper::det_rational(cm))
}

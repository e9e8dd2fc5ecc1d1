//! Numeric oracles: lambda lengths of horocycle decorations on the boundary
//! line of the upper half-plane, and Euclidean Cayley–Menger determinants.
//!
//! For boundary points `p_i` with horocycles of Euclidean size `t_i` the
//! lambda length is `|p_i - p_j| / sqrt(t_i t_j)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("degenerate decoration: {0}")]
    DegenerateDecoration(String),
    #[error("size {0} is not the square of a rational")]
    NonSquareSize(String),
    #[error("point configuration: {0}")]
    BadConfig(String),
    #[error("malformed JSON: {0}")]
    Malformed(String),
}

/// Floating-point decoration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoratedLine {
    pub points: Vec<f64>,
    pub sizes: Vec<f64>,
}

impl DecoratedLine {
    pub fn new(points: Vec<f64>, sizes: Vec<f64>) -> Result<Self, HyperError> {
        let d = DecoratedLine { points, sizes };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), HyperError> {
        if self.points.len() != self.sizes.len() {
            return Err(HyperError::DegenerateDecoration(format!(
                "{} points but {} sizes",
                self.points.len(),
                self.sizes.len()
            )));
        }
        if self.points.iter().any(|p| !p.is_finite()) {
            return Err(HyperError::DegenerateDecoration("non-finite point".into()));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HyperError::DegenerateDecoration("points must be strictly increasing".into()));
        }
        if self.sizes.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(HyperError::DegenerateDecoration("sizes must be positive".into()));
        }
        Ok(())
    }

    /// `m` random points with gaps and sizes in `[0.5, 1.5)`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut p = 0.0;
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            p += rng.gen_range(0.5..1.5);
            points.push(p);
        }
        let sizes = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();
        DecoratedLine { points, sizes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lambda(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).abs() / (self.sizes[i] * self.sizes[j]).sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, HyperError> {
        let d: DecoratedLine = serde_json::from_str(s).map_err(|e| HyperError::Malformed(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }
}

/// Symmetric table of all lambda lengths, zero on the diagonal.
pub fn line_model(d: &DecoratedLine) -> Vec<Vec<f64>> {
    let m = d.len();
    (0..m).map(|i| (0..m).map(|j| if i == j { 0.0 } else { d.lambda(i, j) }).collect()).collect()
}

/// Exact decoration whose sizes are squares of rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDecoratedLine {
    points: Vec<BigRational>,
    sizes: Vec<BigRational>,
    roots: Vec<BigRational>,
}

impl ExactDecoratedLine {
    pub fn new(points: Vec<BigRational>, sizes: Vec<BigRational>) -> Result<Self, HyperError> {
        if points.len() != sizes.len() {
            return Err(HyperError::DegenerateDecoration(format!(
                "{} points but {} sizes",
                points.len(),
                sizes.len()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HyperError::DegenerateDecoration("points must be strictly increasing".into()));
        }
        let mut roots = Vec::with_capacity(sizes.len());
        for t in &sizes {
            if !t.is_positive() {
                return Err(HyperError::DegenerateDecoration("sizes must be positive".into()));
            }
            roots.push(rational_sqrt(t).ok_or_else(|| HyperError::NonSquareSize(t.to_string()))?);
        }
        Ok(ExactDecoratedLine { points, sizes, roots })
    }

    /// Decoration from integer points and the squares of integer roots.
    pub fn from_integers(points: &[i64], roots: &[i64]) -> Result<Self, HyperError> {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(points.iter().map(|&p| q(p)).collect(), roots.iter().map(|&r| q(r) * q(r)).collect())
    }

    /// `m` random integer points with gaps in `1..=5` and roots in `1..=5`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut p = 0i64;
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            p += rng.gen_range(1..=5);
            points.push(p);
        }
        let roots: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=5)).collect();
        Self::from_integers(&points, &roots).expect("valid by construction")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[BigRational] {
        &self.points
    }

    pub fn sizes(&self) -> &[BigRational] {
        &self.sizes
    }

    pub fn lambda(&self, i: usize, j: usize) -> BigRational {
        (&self.points[i] - &self.points[j]).abs() / (&self.roots[i] * &self.roots[j])
    }

    pub fn table(&self) -> Vec<Vec<BigRational>> {
        let m = self.len();
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigRational::zero() } else { self.lambda(i, j) }).collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let wire = ExactWire {
            points: self.points.iter().map(ToString::to_string).collect(),
            sizes: self.sizes.iter().map(ToString::to_string).collect(),
        };
        serde_json::to_string(&wire).expect("serializable")
    }

    /// Points and sizes as decimal or `p/q` strings.
    pub fn from_json(s: &str) -> Result<Self, HyperError> {
        let wire: ExactWire = serde_json::from_str(s).map_err(|e| HyperError::Malformed(e.to_string()))?;
        let parse = |v: &String| v.parse::<BigRational>().map_err(|e| HyperError::Malformed(format!("{v}: {e}")));
        let points = wire.points.iter().map(parse).collect::<Result<_, _>>()?;
        let sizes = wire.sizes.iter().map(parse).collect::<Result<_, _>>()?;
        Self::new(points, sizes)
    }
}

#[derive(Serialize, Deserialize)]
struct ExactWire {
    points: Vec<String>,
    sizes: Vec<String>,
}

fn integer_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(integer_sqrt(v.numer())?, integer_sqrt(v.denom())?))
}

/// Every Ptolemy relation of an exact lambda table, `i < j < k < l`.
pub fn ptolemy_holds_exact(t: &[Vec<BigRational>]) -> bool {
    let m = t.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    if &t[i][k] * &t[j][l] != &t[i][j] * &t[k][l] + &t[j][k] * &t[i][l] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Largest relative Ptolemy residual of a floating-point lambda table.
pub fn ptolemy_max_residual(t: &[Vec<f64>]) -> f64 {
    let m = t.len();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let lhs = t[i][k] * t[j][l];
                    let rhs = t[i][j] * t[k][l] + t[j][k] * t[i][l];
                    worst = worst.max((lhs - rhs).abs() / lhs.abs());
                }
            }
        }
    }
    worst
}

/// Points with exact rational coordinates of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    points: Vec<Vec<BigRational>>,
}

impl PointConfig {
    pub fn new(points: Vec<Vec<BigRational>>) -> Result<Self, HyperError> {
        if let Some(first) = points.first() {
            let d = first.len();
            if points.iter().any(|p| p.len() != d) {
                return Err(HyperError::BadConfig("points of different dimensions".into()));
            }
        }
        Ok(PointConfig { points })
    }

    pub fn from_integers(points: &[&[i64]]) -> Result<Self, HyperError> {
        Self::new(
            points
                .iter()
                .map(|p| p.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> BigRational {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn squared_distance_matrix(&self) -> Vec<Vec<BigRational>> {
        let m = self.len();
        (0..m).map(|i| (0..m).map(|j| self.squared_distance(i, j)).collect()).collect()
    }
}

/// Bordered squared-distance determinant of three planar points, `-16 A^2`.
pub fn heron_cm_det(cfg: &PointConfig) -> Result<BigRational, HyperError> {
    if cfg.len() != 3 || cfg.dimension() != 2 {
        return Err(HyperError::BadConfig(format!(
            "need 3 planar points, got {} in dimension {}",
            cfg.len(),
            cfg.dimension()
        )));
    }
    cayley_menger_det(cfg, true)
}

/// Cayley–Menger determinant (`bordered`) or the plain squared-distance determinant.
pub fn cayley_menger_det(cfg: &PointConfig, bordered: bool) -> Result<BigRational, HyperError> {
    if cfg.len() < 3 {
        return Err(HyperError::BadConfig(format!("need at least 3 points, got {}", cfg.len())));
    }
    let mut m = cfg.squared_distance_matrix();
    if bordered {
        let k = m.len();
        for row in &mut m {
            row.push(BigRational::one());
        }
        let mut last = vec![BigRational::one(); k];
        last.push(BigRational::zero());
        m.push(last);
    }
    Ok(det_rational(m))
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let factor = &a[r][k] / &pivot;
            for c in k..n {
                let delta = &factor * &a[k][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Determinant with partial pivoting in double precision.
pub fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .expect("nonempty range");
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for r in k + 1..n {
            let factor = a[r][k] / a[k][k];
            for c in k..n {
                a[r][c] -= factor * a[k][c];
            }
        }
    }
    det
}

/// Product of the absolute row sums, an upper bound for every term of the
/// Leibniz expansion and for `|det|`.
pub fn magnitude_bound(a: &[Vec<f64>]) -> f64 {
    a.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).product()
}

/// Floating-point check of the Baur–Marsh determinant at a random decoration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericBmCheck {
    pub det: f64,
    pub expected: f64,
    pub relative_residual: f64,
}

impl NumericBmCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.relative_residual < tol
    }
}

pub const NUMERIC_TOLERANCE: f64 = 1e-9;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Boundary product of the (n+3)-gon evaluated in a lambda table.
fn boundary_product(t: &[Vec<f64>]) -> f64 {
    let m = t.len();
    (0..m).map(|i| t[i][(i + 1) % m]).product()
}

pub fn numeric_bm_check(n: usize, seed: u64) -> NumericBmCheck {
    let mut rng = rng_from_seed(seed);
    let t = line_model(&DecoratedLine::random(n + 3, &mut rng));
    let expected = -(-2f64).powi(n as i32 + 1) * boundary_product(&t);
    let det = det_f64(t);
    NumericBmCheck { det, expected, relative_residual: ((det - expected) / expected).abs() }
}

/// Floating-point check that the squared and bordered determinants vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericCmCheck {
    pub det_pm: f64,
    pub bound_pm: f64,
    pub det_cm: f64,
    pub bound_cm: f64,
}

impl NumericCmCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.det_pm.abs() < tol * self.bound_pm && self.det_cm.abs() < tol * self.bound_cm
    }
}

pub fn numeric_cm_check(n: usize, seed: u64) -> NumericCmCheck {
    let mut rng = rng_from_seed(seed);
    let t = line_model(&DecoratedLine::random(n + 3, &mut rng));
    let m = t.len();
    let pm: Vec<Vec<f64>> = t.iter().map(|row| row.iter().map(|x| x * x).collect()).collect();
    let cm: Vec<Vec<f64>> = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| match (i == m, j == m) {
                    (true, true) => 0.0,
                    (true, false) | (false, true) => 1.0,
                    (false, false) => pm[i][j],
                })
                .collect()
        })
        .collect();
    NumericCmCheck {
        bound_pm: magnitude_bound(&pm),
        bound_cm: magnitude_bound(&cm),
        det_pm: det_f64(pm),
        det_cm: det_f64(cm),
    }
}

/// Rough float value for display.
pub fn approx(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

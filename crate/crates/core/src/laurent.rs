//! Multivariate Laurent polynomials with arbitrary-precision integer coefficients.
//!
//! A [`LaurentPoly`] is a sorted list of `(Monomial, BigInt)` pairs over a shared
//! [`VarTable`]. Terms are kept in ascending lexicographic order of their exponent
//! vectors with no zero coefficients, so structural equality is semantic equality
//! and serialization is canonical.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("operands live over different variable tables")]
    VarTableMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("variable {0} is assigned zero but appears with a negative exponent")]
    ZeroToNegativePower(String),
    #[error("assignment has {got} values, variable table has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Ordered, duplicate-free list of variable names.
#[derive(Debug, Clone)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LaurentError::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarTable { names, index })
    }

    pub fn shared<I, S>(names: I) -> Result<Arc<Self>, LaurentError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(names).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarTable {}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// Signed exponent vector, one entry per variable of the table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<i32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

#[derive(Clone)]
pub struct LaurentPoly {
    vars: Arc<VarTable>,
    terms: Vec<(Monomial, BigInt)>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl std::hash::Hash for LaurentPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl LaurentPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        LaurentPoly { vars: Arc::clone(vars), terms: Vec::new() }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::one(vars.len()), c)] };
        LaurentPoly { vars: Arc::clone(vars), terms }
    }

    /// The generator with index `idx`.
    pub fn var(vars: &Arc<VarTable>, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index {idx} out of range");
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        LaurentPoly { vars: Arc::clone(vars), terms: vec![(Monomial::from_exps(exps), BigInt::one())] }
    }

    pub fn var_named(vars: &Arc<VarTable>, name: &str) -> Result<Self, LaurentError> {
        vars.index_of(name)
            .map(|i| Self::var(vars, i))
            .ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))
    }

    pub fn monomial(vars: &Arc<VarTable>, m: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let c = c.into();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        LaurentPoly { vars: Arc::clone(vars), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms<I>(vars: &Arc<VarTable>, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(LaurentError::Malformed(format!(
                    "exponent vector of length {} over {} variables",
                    m.0.len(),
                    vars.len()
                )));
            }
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { vars: Arc::clone(vars), terms })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Single-term polynomial, returned as its monomial and coefficient.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(LaurentError::VarTableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    std::cmp::Ordering::Less => {
                        out.push((ma.clone(), ca.clone()));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let c = if negate { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((ma.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((ma, ca)), None) => {
                    out.push((ma.clone(), ca.clone()));
                    a.next();
                }
                (None, Some((mb, cb))) => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    b.next();
                }
                (None, None) => break,
            }
        }
        LaurentPoly { vars: Arc::clone(&self.vars), terms: out }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        // Multiplying by a single term shifts every exponent by the same vector,
        // which preserves lexicographic order.
        if let Some((m, c)) = other.as_monomial() {
            return Ok(self.mul_term(m, c));
        }
        if let Some((m, c)) = self.as_monomial() {
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(c) => *c += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Ok(LaurentPoly { vars: Arc::clone(&self.vars), terms })
    }

    fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect();
        LaurentPoly { vars: Arc::clone(&self.vars), terms }
    }

    /// Multiplies by the unit `x^m`.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.clone())).collect();
        LaurentPoly { vars: Arc::clone(&self.vars), terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, cc)| (m.clone(), cc * c)).collect();
        LaurentPoly { vars: Arc::clone(&self.vars), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Largest monomial dividing every term (componentwise minimum of exponents).
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.gcd(m)))
    }

    /// Denominator monomial: the negative part of the monomial content.
    pub fn denominator(&self) -> Monomial {
        match self.monomial_content() {
            Some(m) => Monomial(m.0.iter().map(|&e| if e < 0 { -e } else { 0 }).collect()),
            None => Monomial::one(self.vars.len()),
        }
    }

    /// True iff no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.0.iter().all(|&e| e >= 0))
    }

    /// Exact quotient `self / den` in the Laurent ring.
    ///
    /// Monomial content is stripped from both operands first; the remaining
    /// polynomial quotient is computed by leading-term division in lex order
    /// and must leave no remainder.
    pub fn exact_div(&self, den: &Self) -> Result<Self, LaurentError> {
        self.check(den)?;
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        if let Some((m, c)) = den.as_monomial() {
            let inv = m.inverse();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (mm, cc) in &self.terms {
                let (q, r) = cc.div_rem(c);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible(format!(
                        "coefficient {cc} is not a multiple of {c}"
                    )));
                }
                terms.push((mm.mul(&inv), q));
            }
            return Ok(LaurentPoly { vars: Arc::clone(&self.vars), terms });
        }
        let cn = self.monomial_content().expect("nonzero");
        let cd = den.monomial_content().expect("nonzero");
        let p = self.mul_monomial(&cn.inverse());
        let d = den.mul_monomial(&cd.inverse());
        let q = poly_div_exact(&p, &d)?;
        Ok(q.mul_monomial(&cn.div(&cd)))
    }

    /// Evaluates at an exact rational point given in variable-table order.
    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational, LaurentError> {
        if point.len() != self.vars.len() {
            return Err(LaurentError::AssignmentLength { expected: self.vars.len(), got: point.len() });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && point[i].is_zero() {
                    return Err(LaurentError::ZeroToNegativePower(self.vars.name(i).to_string()));
                }
                v *= Pow::pow(&point[i], e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Evaluates at a point given by variable name; unmentioned variables must not occur.
    pub fn eval_named(&self, point: &HashMap<String, BigRational>) -> Result<BigRational, LaurentError> {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.iter().any(|(m, _)| m.0[i] != 0))
            .collect();
        let mut dense = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match point.get(name) {
                Some(v) => dense.push(v.clone()),
                None if !used[i] => dense.push(BigRational::zero()),
                None => return Err(LaurentError::UnknownVariable(name.clone())),
            }
        }
        self.eval_rational(&dense)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, LaurentError> {
        if point.len() != self.vars.len() {
            return Err(LaurentError::AssignmentLength { expected: self.vars.len(), got: point.len() });
        }
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && point[i] == 0.0 {
                    return Err(LaurentError::ZeroToNegativePower(self.vars.name(i).to_string()));
                }
                v *= point[i].powi(e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Re-expresses the polynomial over a larger table containing every variable of this one.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Self, LaurentError> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| LaurentError::UnknownVariable(n.clone())))
            .collect::<Result<_, _>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] = e;
            }
            (Monomial::from_exps(exps), c.clone())
        });
        Self::from_terms(target, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, LaurentError> {
        serde_json::from_str(s).map_err(|e| LaurentError::Malformed(e.to_string()))
    }

    pub(crate) fn to_wire(&self) -> PolyWire {
        PolyWire {
            vars: self.vars.names().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermWire { coef: c.to_string(), exps: m.0.to_vec() })
                .collect(),
        }
    }

    pub(crate) fn from_wire(wire: PolyWire) -> Result<Self, LaurentError> {
        let vars = VarTable::shared(wire.vars)?;
        Self::from_wire_terms(&vars, wire.terms)
    }

    pub(crate) fn from_wire_terms(vars: &Arc<VarTable>, terms: Vec<TermWire>) -> Result<Self, LaurentError> {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let c: BigInt = t
                .coef
                .parse()
                .map_err(|_| LaurentError::Malformed(format!("bad coefficient {:?}", t.coef)))?;
            parsed.push((Monomial::from_exps(t.exps), c));
        }
        Self::from_terms(vars, parsed)
    }
}

/// Leading-term division of polynomials with no negative exponents.
fn poly_div_exact(p: &LaurentPoly, d: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    let (lt_d, lc_d) = d.terms.last().expect("nonzero divisor");
    let mut rem: BTreeMap<Monomial, BigInt> = p.terms.iter().cloned().collect();
    let mut quotient = Vec::new();
    while let Some((lt_r, lc_r)) = rem.pop_last() {
        // If d divides r then LT(r) = LT(q)·LT(d); failing that, there is no exact quotient.
        if !lt_d.divides(&lt_r) {
            return Err(LaurentError::NotDivisible(
                "leading monomial of the divisor does not divide the remainder".into(),
            ));
        }
        let (qc, r) = lc_r.div_rem(lc_d);
        if !r.is_zero() {
            return Err(LaurentError::NotDivisible(format!(
                "leading coefficient {lc_r} is not a multiple of {lc_d}"
            )));
        }
        let qm = lt_r.div(lt_d);
        for (m, c) in &d.terms[..d.terms.len() - 1] {
            let key = m.mul(&qm);
            let delta = &qc * c;
            match rem.get_mut(&key) {
                Some(v) => {
                    *v -= delta;
                    if v.is_zero() {
                        rem.remove(&key);
                    }
                }
                None => {
                    rem.insert(key, -delta);
                }
            }
        }
        quotient.push((qm, qc));
    }
    quotient.reverse();
    Ok(LaurentPoly { vars: Arc::clone(&p.vars), terms: quotient })
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        self.try_add(rhs).expect("variable table mismatch in +")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        self.try_sub(rhs).expect("variable table mismatch in -")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        self.try_mul(rhs).expect("variable table mismatch in *")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        LaurentPoly { vars: Arc::clone(&self.vars), terms }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest term first reads more naturally.
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct TermWire {
    pub coef: String,
    pub exps: Vec<i32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct PolyWire {
    pub vars: Vec<String>,
    pub terms: Vec<TermWire>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PolyWire::deserialize(deserializer)?;
        LaurentPoly::from_wire(wire).map_err(serde::de::Error::custom)
    }
}

#![allow(dead_code)]

use std::sync::Arc;

use clusterdet::detkit::PolyMatrix;
use clusterdet::laurent::{LaurentPoly, Monomial, VarTable};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn table() -> Arc<VarTable> {
    VarTable::shared(["a", "b", "c"]).unwrap()
}

/// Up to `max_terms` terms, exponents in -2..=2, coefficients in -6..=6.
pub fn poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::array::uniform3(-2i32..=2), -6i64..=6), 0..=max_terms).prop_map(|terms| {
        let vars = table();
        LaurentPoly::from_terms(
            &vars,
            terms.into_iter().map(|(e, c)| (Monomial::from_exps(e.to_vec()), BigInt::from(c))),
        )
        .unwrap()
    })
}

/// Polynomials with nonnegative exponents.
pub fn polynomial(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::array::uniform3(0i32..=2), -4i64..=4), 0..=max_terms).prop_map(|terms| {
        let vars = table();
        LaurentPoly::from_terms(
            &vars,
            terms.into_iter().map(|(e, c)| (Monomial::from_exps(e.to_vec()), BigInt::from(c))),
        )
        .unwrap()
    })
}

pub fn matrix(dim: usize, max_terms: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly(max_terms), dim * dim)
        .prop_map(move |entries| PolyMatrix::new(&table(), dim, dim, entries).unwrap())
}

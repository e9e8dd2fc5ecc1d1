//! Exact verification of determinant identities for cluster algebras of
//! type A and D.
//!
//! Cluster variables are sparse Laurent polynomials with big-integer
//! coefficients; determinants use fraction-free elimination.

pub mod cli;
pub mod detkit;
pub mod hyper;
pub mod laurent;
pub mod mutation;
pub mod polygon;
pub mod type_a;
pub mod type_d;

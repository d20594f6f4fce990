//! Binary forms, transvectants and covariant expressions.

mod binary;
mod catalog;
mod eval;
mod expr;

pub use binary::{binomial, parse_form_literal, transvectant, BinaryForm, TransvectantPlan};
pub use catalog::{catalog_for, Catalog, CatalogEntry};
pub use eval::{evaluate_at_points, evaluate_expr, Evaluator};
pub use expr::{CovariantExpr, ExprKind};


use crate::algebra::{AlgebraError, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("transvectant index {index} exceeds min of orders {left} and {right}")]
    IndexTooLarge { index: u32, left: u32, right: u32 },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: u32, found: u32 },
    #[error("matrix does not have determinant 1")]
    NotUnimodular,
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("no catalog for binary forms of order {0}")]
    UnsupportedOrder(u32),
    #[error("`{name}` declared as (order {declared_order}, degree {declared_degree}) but is (order {order}, degree {degree})")]
    Metadata { name: String, declared_order: u32, declared_degree: u32, order: u32, degree: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `g1 g2 g3` as a product of elementary unimodular matrices, entries from
/// the given samples. Works over any ring.
pub fn unimodular<S: Scalar>(s: &S, t: &S, u: &S) -> [[S; 2]; 2] {
    // [[1, s], [0, 1]] · [[1, 0], [t, 1]] · [[1, u], [0, 1]]
    let one = s.one_like();
    let a = one.clone() + s.clone() * t.clone();
    let b = a.clone() * u.clone() + s.clone();
    let c = t.clone();
    let d = t.clone() * u.clone() + one;
    [[a, b], [c, d]]
}

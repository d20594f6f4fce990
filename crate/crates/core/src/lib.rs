//! Invariants and covariants of binary forms.
//!
//! The crate covers the computational side of classical invariant theory
//! for binary forms, with the nonic (order 9) as the main target:
//!
//! - [`algebra`]: rationals, prime fields, dual numbers, sparse polynomials;
//! - [`forms`]: binary forms, transvectants, covariant expression trees and
//!   named catalogs;
//! - [`series`]: invariant-space dimensions, Poincaré series, degree
//!   restrictions for parameter systems and minimal rational forms;
//! - [`nullcone`]: root multiplicities, nullform tests and symbolic checks of
//!   the nullcone lemmas;
//! - [`modlinalg`]: rank and nullspace over `F_p`, including streamed rank;
//! - [`pipeline`]: discovery of basic invariants and certification of
//!   parameter systems by evaluation at random points.

pub mod algebra;
pub mod forms;
pub mod modlinalg;
pub mod nullcone;
pub mod pipeline;
pub mod series;

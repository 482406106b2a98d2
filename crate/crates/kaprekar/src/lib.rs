//! The generalized Kaprekar routine for any digit width.
//!
//! Layers, bottom up:
//! - [`digits`]: exact digit arithmetic, the routine `K`, orbits and
//!   parameter extraction;
//! - [`params`]: parameter vectors, the image families and shape checks;
//! - [`symbolic`]: the catalog of piecewise-affine functions `K_i` with
//!   integer-linear domains, fixed points and composition;
//! - [`dynamics`]: the functional graph over classes, cycles and trees;
//! - [`equivalence`]: order-`r` partitions, equivalence maps and their
//!   product tables;
//! - [`checks`]: the reference results, runnable as one suite.
//!
//! Affine expressions and domains are generic over [`Scalar`]; the aliases
//! below fix the two instantiations the library uses.

pub mod affine;
pub mod checks;
pub mod digits;
pub mod dynamics;
pub mod equivalence;
mod error;
pub mod params;
mod scalar;
pub mod symbolic;

pub use affine::{AffineExpr, LinearConstraint, ParamDomain, Relation};
pub use digits::{
    iterate, kaprekar_step, make_number, orbit, params, sort_pair, DigitNumber, Orbit, SortedPair, Terminal,
};
pub use error::{Error, Result};
pub use params::{
    apply_f, check_bw, classify, enumerate_classes, BwMembership, FamilyKind, FamilyTag, ParamVector, Parity,
};
pub use scalar::Scalar;
pub use symbolic::{
    compose, derive_k_functions, eval_k, solve_fixed_points, total_k, verify_constant_family, Catalog, ConstantFamily,
    FixedPoint, Permutation, SymbolicKFn,
};

/// Exact rational coefficients.
pub type Rational = num_rational::Ratio<i64>;

/// Integer affine expression, used by the K functions.
pub type IntExpr = AffineExpr<i64>;
/// Rational affine expression, used by equivalence maps.
pub type RatExpr = AffineExpr<Rational>;
pub type IntConstraint = LinearConstraint<i64>;
pub type RatConstraint = LinearConstraint<Rational>;
pub type IntDomain = ParamDomain<i64>;
pub type RatDomain = ParamDomain<Rational>;

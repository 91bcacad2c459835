//! Fixed-point meromorphic function classes `M_w(A, B, m)`.
//!
//! Functions are truncated series `f(z) = 1/(z-w) + Σ_{n>=k} a_n (z-w)^n` with
//! `a_n >= 0` about a fixed point `w` of the unit disk. The crate decides
//! membership by the coefficient functional and by sampling the defining
//! modulus-ratio condition, builds extreme points and barycentric
//! decompositions, and applies `I^m`, `H1`, `H2` with quadrature cross-checks.
//!
//! Everything numeric is generic over [`Scalar`] (`f32`, `f64`); the aliases
//! below fix `f64`, which the file formats and CLI use.

// `!(x > y)` is used deliberately so that NaN is rejected along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hull;
pub mod io;
pub mod membership;
pub mod operators;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use hull::{convex_combine_members, decompose, extreme_point, recompose};
pub use membership::{condition_ratio, is_member, phi_functional, verify_on_grid};
pub use operators::{
    apply_h1, apply_h2, apply_im_closed, apply_im_recurrence, h1_oracle, h2_oracle, H1Factor,
    ImOrder,
};
pub use scalar::Scalar;
pub use series::linear_combine;

pub type Complex64 = num_complex::Complex<f64>;

pub type Series = series::FpSeries<f64>;
pub type GeneralSeries = series::GeneralSeries<f64>;
pub type ClassParams = membership::ClassParams<f64>;
pub type MembershipReport = membership::MembershipReport<f64>;
pub type ConditionSample = membership::ConditionSample<f64>;
pub type Grid = membership::Grid<f64>;
pub type HullWeights = hull::HullWeights<f64>;
pub type H1Param = operators::H1Param<f64>;
pub type H2Param = operators::H2Param<f64>;

pub type Series32 = series::FpSeries<f32>;
pub type ClassParams32 = membership::ClassParams<f32>;

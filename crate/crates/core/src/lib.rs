//! Zero-mapping transformations of polynomials.
//!
//! A transform is described by affine pairs `g_k = alpha_k + beta_k x`,
//! `h_k = gamma_k + delta_k x` and a Newton basis `rho_k`. A polynomial is
//! written in the mixed basis `B_k = g_0 ... g_{k-1} h_k ... h_{m-1}` and the
//! same coefficients are put on `rho_k`. When the generalized moments of a
//! parameterized measure have ratios `I_{k+1}/I_k = g_k(mu)/h_k(mu)`, zeros in
//! the parameter interval are carried to zeros in the support of the measure.
//!
//! [`catalog`] holds the eight families, [`moments`] evaluates their moments
//! in closed form and from the measures, and [`verify`] turns the
//! zero-mapping claims into checks.

pub mod basis;
pub mod catalog;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod verify;

pub use basis::{apply_zero_map, decompose_mixed, mixed_basis, nondegeneracy, AffinePair, NewtonBasis};
pub use catalog::{
    make_classical, make_transform, Classical, ClassicalTransform, Family, FamilyParams, NamedParams, ParamValue,
    Pattern, Schedule, TransformSpec,
};
pub use error::{Error, Result};
pub use moments::{moment_closed, moment_oracle, ratio};
pub use poly::{isolate_real_roots, refine_root, square_free_part, Bound, Interval, Polynomial, RootInterval, RootSet};
pub use report::{Check, Verdict, VerificationReport};
pub use scalar::{pochhammer, q_pochhammer, Mode, QLength, Scalar, DEFAULT_PRECISION};

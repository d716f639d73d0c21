//! Equivariant automorphism groups of complexity-one affine torus varieties
//! presented by polyhedral divisors on curves, and Galois-cohomological
//! finiteness criteria for their real forms.
//!
//! Everything is exact: rationals, Gaussian rationals and integer matrices.

pub mod curves;
pub mod datum;
pub mod error;
pub mod galois;
pub mod lifting;
mod lp;
pub mod polyhedra;
pub mod real_forms;
pub mod scalar;

pub use curves::{
    CurveAutomorphism, CurveModel, CurvePoint, Divisor, ECPoint, EcAutomorphism, EllipticCurve,
    MobiusMap, P1Point,
};
pub use datum::{validate_datum, AHDatum, PluriDivisor, RawCoefficient, RawDatum};
pub use error::{CoreError, Result};
pub use galois::{CohomologyReport, IntMatrix, InvolutionLattice};
pub use lifting::{lift_group, lift_test, KDescription, LiftResult};
pub use polyhedra::{Cone, Polyhedron, RationalVector};
pub use real_forms::{validate_real_datum, FormsVerdict, RealDatum};
pub use scalar::{GaussianRational, Q};

//! Representing measures of `t -> Tr exp(A - tB)` for Hermitian `A` and
//! positive semidefinite `B`: atoms at the eigenvalues of `B` plus a density
//! given by contour integrals over the eigenvalue branches of `A - tB`.
//!
//! The numeric core is generic over [`scalar::Real`]; `f64` and the
//! double-double [`dd::Dd`] are provided.

pub mod branch;
pub mod closed_form;
pub mod dd;
pub mod eigh;
pub mod error;
pub mod hermitian;
pub mod io;
pub mod matrix;
pub mod measure;
pub mod poly;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod verify;

pub use branch::{charpoly, choose_radius, roots_at, track, BranchTrack, CharPoly, Contour, TrackConfig};
pub use closed_form::{commuting_measure, density2, lambda1_explicit, mehta_kumar, TwoByTwoInstance};
pub use dd::Dd;
pub use error::{Error, Result};
pub use hermitian::{canonicalize, lieb_seiringer_coeffs, trace_exp, validate_pair, CanonicalPair, HermitianPair};
pub use matrix::ComplexMatrix;
pub use measure::{
    compute_measure, density_lower, density_upper, laplace_transform, representation_gap, Atom, DensityEngine, DensityGrid,
    MeasureConfig, RepresentingMeasure,
};
pub use scalar::Real;
pub use verify::{Check, VerificationReport, VerifyConfig};

pub type C64 = num_complex::Complex<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type MatrixDd = ComplexMatrix<Dd>;
pub type Track = BranchTrack<f64>;
pub type TrackDd = BranchTrack<Dd>;

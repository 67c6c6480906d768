//! Spectral linear-programming bounds on the size of codes in the Hamming and
//! Johnson schemes, on the unit sphere and in projective spaces.
//!
//! The numerical core works with the normalized orthogonal polynomials of each
//! space, the tridiagonal matrices `S_k` of multiplication by `P1`, and the
//! resulting explicit bounds and their dual certificates.

pub mod asymptotics;
pub mod bound;
pub mod certificate;
pub mod error;
pub mod family;
pub mod linearize;
pub mod special;
pub mod spectral;
pub mod tridiag;

pub use bound::{
    bound_sweep, k_window, rho, rho_generic, spectral_bound, BoundOptions, BoundOutcome, BoundQuery, BoundResult,
    DistanceParam, KWindow, NoBound, NoBoundReason, WindowOutcome,
};
pub use error::{Error, Result};
pub use family::{Family, FamilySpec, Field, MeasureSpec, RecurrenceCoeffs};
pub use linearize::{linearize, Linearizer};
pub use spectral::{build_s, build_x, gauss_quadrature, lemma_lim_bounds, s_ladder, LemmaBounds, Quadrature};
pub use tridiag::{lambda_max, SpectralResult, SymTridiag};
pub use asymptotics::{
    hamming_rate, johnson_rate, lambda_limit, projective_real_rate, sphere_rate, LimitShape, RateArgument, RatePoint,
};
pub use certificate::{build_certificate, build_unchecked, verify_certificate, Certificate, CertificateOptions, VerificationReport};

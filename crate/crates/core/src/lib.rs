//! Numerical toolkit for the growth spaces `A^{-mu}` of analytic functions on
//! the unit disc.
//!
//! The crate computes the weighted sup-norms `||f||_mu`, the Dirichlet
//! projections onto Taylor partial sums together with their convergence
//! bounds, the dyadic block-sampling transform `T` that identifies the spaces
//! with weighted `l_inf` sequence spaces, and the Köthe weights of those
//! sequence spaces. The [`harness`] module drives property suites over a
//! reproducible corpus and writes deterministic reports.

pub mod analytic;
pub mod error;
mod fft;
pub mod harness;
pub mod io;
pub mod kothe;
pub mod optimize;
pub mod projections;
mod quadrature;
pub mod transform;

pub use analytic::{
    eval_circle, max_radius, monomial_norm, radial_profile, sup_modulus, tail_sup_radius,
    weighted_norm, weighted_norm_from, RadialProfilePoint, TaylorSeries, WeightExponent,
};
pub use error::{Error, Result};
pub use kothe::{
    check_weight_monotone, equivalence_ratio, kothe_row, seminorm, weight_r, weight_s,
    CoefSequenceView, KotheMatrixSpec, WeightFamily, WeightKind,
};
pub use projections::{
    basis_convergence_suite, dirichlet_eval, kernel_l1, nuclearity_divergence, partial_sum,
    projection_growth, tail_bound_check, DirichletKernel, RateBoundRecord,
};
pub use transform::{
    block_decompose, block_norm_bounds, forward_t, inverse_t, quadrature_identity,
    sampling_inequality, technical_constants, BlockDecomposition, BlockNormBounds,
    BlockPolynomial, SampleSequence, SamplingRecord, TechnicalConstants, TrigPolynomial,
};
pub use num_complex::Complex64;

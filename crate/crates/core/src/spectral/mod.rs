//! Numeric spectral functions of diagonal model operators.
//!
//! * [`special`]: Gamma, Bernoulli numbers, Riemann and Hurwitz zeta, and the
//!   contour function `F_t(s)`.
//! * [`model`]: spectra given by families `c (k + a)^r`, their zeta
//!   functions, determinants, heat supertraces and indices.
//! * [`dictionary`]: Gamma factors converting resolvent, zeta and heat
//!   coefficients into each other.

pub mod dictionary;
pub mod model;
pub mod special;

pub use dictionary::{coefficient_dictionary, log_heat_factor, Dictionary};
pub use model::{
    heat_expansion_check, index_via_heat, index_via_zeta, model_zeta, zeta_determinant, Family,
    HeatExpansionReport, IndexReport, LogDeterminant, MeromorphicValue, SpectrumModel,
};
pub use special::{
    bernoulli, bernoulli_polynomial, f_special, f_special_contour, f_special_derivative,
    f_special_integer, gamma, hurwitz_zeta, hurwitz_zeta_derivative_at_zero, riemann_zeta,
    FSpecialPolynomial,
};

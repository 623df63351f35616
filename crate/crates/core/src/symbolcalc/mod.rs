//! Polynomial symbol calculus for `|ξ|²`-principal model operators.
//!
//! Symbols are forms in coordinates `x_j`, frequencies `ξ_j` and a Laurent
//! generator `T = (|ξ|² − λ)^{-1}`, so every parameter dependence stays exact:
//! `λ` itself is `|ξ|² − T^{-1}` and `∂_λ T = T²`, `∂_{ξ_j} T = −2ξ_j T²`.
//! An expansion is graded by homogeneity in `(ξ, λ^{1/2})`, where `ξ` has
//! weight 1 and `T` weight −2.

mod expansion;
mod resolvent;
mod space;

pub use expansion::{compose, multi_indices, SymbolExpansion};
pub use resolvent::parametrix_residual;
pub use resolvent::{
    neumann_resolvent, parametrix, rescaled_t_exponent, resolvent_trace_coefficients,
    NeumannResolvent, TraceCoefficient, TraceTable,
};
pub use space::SymbolSpace;

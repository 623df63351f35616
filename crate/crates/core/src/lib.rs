//! Exact finite-rank computations around zeta forms of superconnections.
//!
//! * [`algebra`]: graded-commutative forms with exact rational coefficients,
//!   supermatrices over them, and their exact functional calculus.
//! * [`symbolcalc`]: polynomial symbol calculus (composition, parametrices,
//!   Neumann resolvents, resolvent-trace coefficients).
//! * [`getzler`]: the harmonic-oscillator model behind the local index
//!   density and its Â-genus.
//! * [`chernweil`]: zeta forms, Chern characters, zeta-Chern forms and their
//!   transgressions for finite-rank superconnections.
//! * [`spectral`]: numeric zeta functions, determinants, heat traces and
//!   Gamma-factor bookkeeping for diagonal model operators.

pub mod algebra;
pub mod chernweil;
pub mod error;
pub mod getzler;
pub mod json;
pub mod par;
pub mod spectral;
pub mod symbolcalc;

pub use algebra::{Form, SuperMatrix, Universe, Q};
pub use error::{Error, Result};

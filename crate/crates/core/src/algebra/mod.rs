//! Exact graded-commutative algebra: forms, supermatrices, and the
//! functional calculus of supermatrices with nilpotent form parts.

pub mod calculus;
pub mod form;
pub mod linalg;
pub mod parse;
pub mod random;
pub mod rational;
pub mod series;
pub mod supermatrix;
pub mod universe;

pub use calculus::{exp_split, Jets, SpectralDecomposition};
pub use form::{Form, Monomial};
pub use rational::Q;
pub use supermatrix::{Parity, SuperMatrix};
pub use universe::{EvenKind, Generator, Universe};

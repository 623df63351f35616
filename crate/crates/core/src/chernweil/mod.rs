//! Finite-rank superconnections: curvature, rescaling, Chern characters,
//! zeta forms and the two index-type identities for their zeta invariants.
//!
//! Everything here is exact. `P²` must have rational eigenvalues; the
//! positive-degree part of the curvature is nilpotent, so every function of
//! the curvature is a finite sum of jets at those eigenvalues.

pub mod chern;
pub mod index;
pub mod instances;
pub mod integrate;
pub mod superconnection;
pub mod zeta;

pub use chern::{
    chern_character, chern_form, chern_transgression, log_zeta_chern, zeta_chern,
    zeta_chern_transgression, ChernTransgression, ZetaChernTransgression, PATH_PARAMETER,
};
pub use index::{
    index_limit_check, zeta_index_sum, IndexLimitReport, RescaledJets, Weights, ZetaIndexSum,
};
pub use instances::{random_batch, random_instance, Instance, InstanceShape};
pub use superconnection::{KernelData, Superconnection, HALF_T};
pub use zeta::{zeta_det_form, zeta_form, ZetaFormValue};

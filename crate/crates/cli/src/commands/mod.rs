pub mod chern;
pub mod getzler;
pub mod spectral;
pub mod symbols;

use crate::config::Config;

/// Settings shared by every command after flags override the config file.
#[derive(Clone, Debug)]
pub struct Context {
    pub config: Config,
}

impl Context {
    pub fn tol(&self) -> f64 {
        self.config.tolerance
    }

    pub fn asymptotic_tol(&self) -> f64 {
        self.config.asymptotic_tolerance
    }
}

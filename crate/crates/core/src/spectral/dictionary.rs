//! Gamma factors linking resolvent-trace, zeta and heat coefficients.
//!
//! For a term `β_{j,d}(m) (−λ)^{(n+w−j)/r − m}` of `Str(∂_λ^{m−1}(F−λ)^{-1})`
//! with `x = (j−n−w)/r`, the matching zeta coefficient is
//! `b_{j,d} = Γ(x)/Γ(x+m) · β_{j,d}(m)` and the heat coefficient is
//! `b̃_{j,d} = b_{j,d}/Γ(x)`. Non-positive integer `x` is the logarithmic
//! case, where these factors degenerate.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::special::reciprocal_gamma;
use crate::algebra::rational::{factorial_q, q, to_f64, Q};
use crate::error::{Error, Result};
use crate::json::rational_to_json;

#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary {
    pub x: Q,
    pub m: u32,
    /// `Γ(x)/Γ(x+m) = 1/(x(x+1)⋯(x+m−1))`, exactly.
    pub zeta_factor: Option<Q>,
    /// `1/Γ(x)`.
    pub heat_factor: Option<f64>,
    pub exceptional: bool,
}

impl Dictionary {
    fn factors(&self) -> Result<(f64, f64)> {
        match (&self.zeta_factor, self.heat_factor) {
            (Some(z), Some(h)) => Ok((to_f64(z), h)),
            _ => Err(Error::Pole(format!(
                "Γ({}) in the logarithmic case",
                self.x
            ))),
        }
    }

    pub fn zeta_from_resolvent(&self, beta: f64) -> Result<f64> {
        Ok(self.factors()?.0 * beta)
    }

    pub fn resolvent_from_zeta(&self, b: f64) -> Result<f64> {
        Ok(b / self.factors()?.0)
    }

    pub fn heat_from_zeta(&self, b: f64) -> Result<f64> {
        Ok(self.factors()?.1 * b)
    }

    pub fn zeta_from_heat(&self, heat: f64) -> Result<f64> {
        Ok(heat / self.factors()?.1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x": rational_to_json(&self.x),
            "m": self.m,
            "zeta_factor": self.zeta_factor.as_ref().map(rational_to_json),
            "heat_factor": self.heat_factor,
            "exceptional": self.exceptional,
        })
    }
}

pub fn coefficient_dictionary(j: i64, n: i64, w: i64, r: i64, m: u32) -> Result<Dictionary> {
    if r <= 0 {
        return Err(Error::Configuration(format!(
            "order r must be positive, got {r}"
        )));
    }
    if m == 0 {
        return Err(Error::Configuration("m must be at least 1".into()));
    }
    let x = Q::new((j - n - w).into(), r.into());
    let exceptional = x.is_integer() && x <= Q::zero();
    if exceptional {
        return Ok(Dictionary {
            x,
            m,
            zeta_factor: None,
            heat_factor: None,
            exceptional,
        });
    }
    let rising: Q = (0..m as i64).map(|i| &x + q(i)).product();
    let heat = reciprocal_gamma(to_f64(&x));
    Ok(Dictionary {
        x,
        m,
        zeta_factor: Some(Q::one() / rising),
        heat_factor: Some(heat),
        exceptional,
    })
}

/// `1/Γ(l)` for the `log t` terms; `l = 0` is a pole.
pub fn log_heat_factor(l: u32) -> Result<f64> {
    if l == 0 {
        return Err(Error::Pole("Γ(0)".into()));
    }
    Ok(to_f64(&factorial_q(l - 1).recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    #[test]
    fn unit_shift_factor() {
        // j − n − w = r, m = 2: Γ(1)/Γ(3)
        let d = coefficient_dictionary(5, 2, 1, 2, 2).unwrap();
        assert_eq!(d.zeta_factor, Some(qr(1, 2)));
        assert!((d.heat_factor.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(log_heat_factor(1).unwrap(), 1.0);
        assert!(coefficient_dictionary(0, 2, 0, 2, 1).unwrap().exceptional);
    }

    #[test]
    fn round_trip() {
        let d = coefficient_dictionary(0, 3, 0, 2, 3).unwrap();
        let beta = 0.731;
        let b = d.zeta_from_resolvent(beta).unwrap();
        let h = d.heat_from_zeta(b).unwrap();
        let back = d.resolvent_from_zeta(d.zeta_from_heat(h).unwrap()).unwrap();
        assert!((back - beta).abs() < 1e-12);
    }
}

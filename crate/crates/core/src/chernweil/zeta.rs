//! Zeta forms `ζ(F, s) = Str(F^{-s})` at finite rank.
//!
//! With the cut along the negative axis and `F = P² + W`, the complex power
//! is the jet expansion of `x ↦ x^{-s}` at the non-zero eigenvalues `ν` of
//! `P²`; the kernel contributes nothing. Each node gives `ν^{-s}` times a
//! polynomial in `s` with form coefficients, so the value is entire in `s`
//! and exact at every integer.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::calculus::Jets;
use crate::algebra::rational::{factorial_q, pow_i, q, Q};
use crate::algebra::{Form, SuperMatrix, Universe};
use crate::error::{Error, Result};

/// Coefficients (lowest power first) of `binom(-s - a, k)` as a polynomial in `s`.
pub fn binomial_in_s(a: i64, k: usize) -> Vec<Q> {
    let mut poly = vec![Q::one()];
    for j in 0..k as i64 {
        // multiply by (−s − a − j)
        let c0 = q(-a - j);
        let mut next = vec![Q::zero(); poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            next[i] += p * &c0;
            next[i + 1] -= p;
        }
        poly = next;
    }
    let f = factorial_q(k as u32);
    poly.into_iter().map(|c| c / &f).collect()
}

fn eval_poly(u: &Arc<Universe>, p: &[Form], s: &Q) -> Form {
    let mut acc = Form::zero(u);
    for c in p.iter().rev() {
        acc = &acc.scale(s) + c;
    }
    acc
}

fn derive_poly(p: &[Form]) -> Vec<Form> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&q(k as i64)))
        .collect()
}

/// `Σ_ν ν^{-s} p_ν(s)` with `p_ν` a polynomial in `s` with form coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaFormValue {
    universe: Arc<Universe>,
    terms: Vec<(Q, Vec<Form>)>,
}

impl ZetaFormValue {
    pub fn zero(u: &Arc<Universe>) -> ZetaFormValue {
        ZetaFormValue {
            universe: u.clone(),
            terms: Vec::new(),
        }
    }

    /// `Str(M^{-s-a} · aux)` from the jets of `M`, skipping the eigenvalue 0
    /// when `cut_kernel` is set.
    pub fn from_jets(
        jets: &Jets,
        aux: Option<&SuperMatrix>,
        a: i64,
        cut_kernel: bool,
    ) -> Result<ZetaFormValue> {
        let u = jets.universe().clone();
        let traces = jets.supertraces(aux);
        let mut terms = Vec::new();
        for (nu, row) in jets.nodes().iter().zip(traces) {
            if nu.is_zero() {
                if cut_kernel {
                    continue;
                }
                return Err(Error::SpectralCut(
                    "complex power at the eigenvalue 0".into(),
                ));
            }
            if *nu < Q::zero() {
                return Err(Error::SpectralCut(format!(
                    "eigenvalue {nu} lies on the cut"
                )));
            }
            let mut poly: Vec<Form> = Vec::new();
            for (k, tr) in row.iter().enumerate() {
                if tr.is_zero() {
                    continue;
                }
                // binom(−s−a, k) ν^{−a−k}
                let scale = pow_i(nu, -a - k as i64);
                for (j, c) in binomial_in_s(a, k).iter().enumerate() {
                    if poly.len() <= j {
                        poly.resize(j + 1, Form::zero(&u));
                    }
                    poly[j] += &tr.scale(&(c * &scale));
                }
            }
            while poly.last().is_some_and(Form::is_zero) {
                poly.pop();
            }
            if !poly.is_empty() {
                terms.push((nu.clone(), poly));
            }
        }
        Ok(ZetaFormValue { universe: u, terms })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// `(ν, p_ν)` pairs.
    pub fn terms(&self) -> &[(Q, Vec<Form>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at an integer `s`; exact because `ν^{-s}` is rational.
    pub fn at_integer(&self, s: i64) -> Form {
        let mut acc = Form::zero(&self.universe);
        for (nu, p) in &self.terms {
            acc += &eval_poly(&self.universe, p, &q(s)).scale(&pow_i(nu, -s));
        }
        acc
    }

    /// Value at `s = -k`.
    pub fn at_negative_integer(&self, k: u32) -> Form {
        self.at_integer(-(k as i64))
    }

    /// `∂_s` at an integer `s`: `Σ ν^{-s} (p_ν'(s) − log ν · p_ν(s))`.
    pub fn derivative_at_integer(&self, s: i64) -> Form {
        let u = &self.universe;
        let mut acc = Form::zero(u);
        for (nu, p) in &self.terms {
            let val = eval_poly(u, p, &q(s));
            let der = eval_poly(u, &derive_poly(p), &q(s));
            let log = Form::log_rational(u, nu);
            acc += &(&der - &(&log * &val)).scale(&pow_i(nu, -s));
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> ZetaFormValue {
        ZetaFormValue {
            universe: self.universe.clone(),
            terms: self
                .terms
                .iter()
                .map(|(nu, p)| (nu.clone(), p.iter().map(&f).collect()))
                .filter(|(_, p): &(Q, Vec<Form>)| p.iter().any(|c| !c.is_zero()))
                .collect(),
        }
    }

    pub fn degree_part(&self, d: u32) -> ZetaFormValue {
        self.map(|f| f.degree_part(d))
    }

    /// Numeric value at real `s` of the rational coefficients, for forms
    /// that are constants (used for the degree-0 part).
    pub fn scalar_at(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|(nu, p)| {
                let nu = crate::algebra::rational::to_f64(nu);
                let poly: f64 = p.iter().rev().fold(0.0, |acc, c| {
                    acc * s + crate::algebra::rational::to_f64(&c.constant_term())
                });
                nu.powf(-s) * poly
            })
            .sum()
    }
}

/// `ζ(F, s) = Str(F^{-s})` on the non-zero spectrum of `F_[0]`.
pub fn zeta_form(f: &SuperMatrix) -> Result<ZetaFormValue> {
    let jets = Jets::new(f)?;
    ZetaFormValue::from_jets(&jets, None, 0, true)
}

/// `log det_ζ F = −∂_s ζ(F, s)|_{s=0}`.
pub fn zeta_det_form(f: &SuperMatrix) -> Result<Form> {
    Ok(-zeta_form(f)?.derivative_at_integer(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    fn rank_one(mu: Q) -> (Arc<Universe>, SuperMatrix, Form) {
        let u = Universe::base(4);
        let w = &Form::var(&u, "dz1") * &Form::var(&u, "dz2")
            + &Form::var(&u, "dz3") * &Form::var(&u, "dz4");
        let f = SuperMatrix::one_entry(&u, 1, 0, 0, 0, &Form::constant(&u, mu) + &w);
        (u, f, w)
    }

    #[test]
    fn binomial_series_rank_one() {
        let mu = q(3);
        let (u, f, w) = rank_one(mu.clone());
        let z = zeta_form(&f).unwrap();
        // ζ = μ^{−s} − s ω μ^{−s−1} + s(s+1)/2 ω² μ^{−s−2}
        for s in [-2i64, -1, 0, 1, 2] {
            let sq = q(s);
            let expect = &(&Form::one(&u).scale(&pow_i(&mu, -s))
                - &w.scale(&(&sq * pow_i(&mu, -s - 1))))
                + &(&w * &w).scale(&(&sq * (&sq + q(1)) / q(2) * pow_i(&mu, -s - 2)));
            assert_eq!(z.at_integer(s), expect, "s = {s}");
        }
    }

    #[test]
    fn log_det_rank_one() {
        let mu = q(5);
        let (u, f, w) = rank_one(mu.clone());
        let ld = zeta_det_form(&f).unwrap();
        let expect = &(&Form::log_rational(&u, &mu) + &w.scale(&mu.recip()))
            - &(&w * &w).scale(&(q(2) * &mu * &mu).recip());
        assert_eq!(ld, expect);
    }

    #[test]
    fn matched_spectrum_vanishes() {
        let u = Universe::base(1);
        let f =
            SuperMatrix::from_rationals(&u, 1, 1, &[vec![qr(3, 2), q(0)], vec![q(0), qr(3, 2)]]);
        assert!(zeta_form(&f).unwrap().is_zero());
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let u = Universe::base(1);
        let f = SuperMatrix::from_rationals(&u, 1, 0, &[vec![q(-1)]]);
        assert!(matches!(zeta_form(&f), Err(Error::SpectralCut(_))));
    }
}

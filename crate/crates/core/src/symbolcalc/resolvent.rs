//! Parametrices, mixed-degree resolvents and their trace coefficients.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::expansion::{compose, composition_step, SymbolExpansion};
use crate::algebra::form::Monomial;
use crate::algebra::rational::{gamma_half_integer, pow_i, q, qr, Q};
use crate::algebra::Form;
use crate::error::{Error, Result};
use crate::json::{form_to_json, rational_to_json};

/// `p − λ`, whose principal part `|ξ|² − λ` is `T^{-1}`.
fn minus_lambda(p: &SymbolExpansion) -> Result<SymbolExpansion> {
    let space = p.space();
    if p.order() != 2 || p.step(0) != space.xi_squared() {
        return Err(Error::Unsupported(
            "parametrix needs the principal symbol |ξ|²".into(),
        ));
    }
    let mut steps: Vec<Form> = p.steps().to_vec();
    steps[0] = space.t_power(-1);
    Ok(SymbolExpansion::from_steps(space, 2, steps, p.cutoff()))
}

/// `b_0 = T`, `b_j = −T Σ_{|α|+k+l=j, l<j} (−i)^{|α|}/α! ∂_ξ^α (p−λ)_k ∂_x^α b_l`.
pub fn parametrix(p: &SymbolExpansion, steps: usize) -> Result<SymbolExpansion> {
    let pl = minus_lambda(p)?;
    if let Some(c) = pl.cutoff() {
        if steps > c {
            return Err(Error::Cutoff(format!(
                "{steps} parametrix steps need {steps} symbol steps, have {c}"
            )));
        }
    }
    let space = p.space();
    let t = space.t_power(1);
    let mut b: Vec<Form> = Vec::with_capacity(steps);
    for j in 0..steps {
        if j == 0 {
            b.push(t.clone());
            continue;
        }
        let known = b.clone();
        let zero = Form::zero(space.universe());
        let sum = composition_step(
            &pl,
            &|l| known.get(l).cloned().unwrap_or_else(|| zero.clone()),
            j,
            true,
        );
        b.push(-&(&t * &sum));
    }
    Ok(SymbolExpansion::from_steps(space, -2, b, Some(steps)))
}

/// `(p − λ)∘b`, which should be `1` up to the computed steps.
pub fn parametrix_residual(
    p: &SymbolExpansion,
    b: &SymbolExpansion,
    steps: usize,
) -> Result<SymbolExpansion> {
    compose(&minus_lambda(p)?, b, steps)
}

/// A truncated Neumann series and the number of non-zero terms it used.
#[derive(Clone, Debug)]
pub struct NeumannResolvent {
    pub expansion: SymbolExpansion,
    pub terms: usize,
}

/// `(F − λ)^{-1} = b + Σ_{k≥1} (−1)^k b (W b)^k` with `W = F_{[>0]}`; the
/// series stops after at most `dim B` corrections by nilpotence.
pub fn neumann_resolvent(
    f: &SymbolExpansion,
    b: &SymbolExpansion,
    steps: usize,
) -> Result<NeumannResolvent> {
    let w = f.map(Form::positive_part);
    let mut acc = b.truncate(steps);
    let mut terms = 1;
    if w.is_zero() {
        return Ok(NeumannResolvent {
            expansion: acc,
            terms,
        });
    }
    let mut term = b.clone();
    let bound = f.space().universe().base_dim().max(1) + 1;
    for _ in 1..=bound {
        term = compose(&compose(&term, &w, steps)?, b, steps)?.neg();
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
        terms += 1;
    }
    Ok(NeumannResolvent {
        expansion: acc,
        terms,
    })
}

/// Exponent of `t` carried by the step-`j`, degree-`d` coefficient after
/// the rescaling `F ↦ F_t`, with the `t^{-1}` of the velocity `Ȧ_t` included.
pub fn rescaled_t_exponent(j: i64, d: u32, w: i64, n: i64, r: i64) -> Q {
    qr(j - w - n, r) - q(1) - qr(d as i64, 2)
}

/// `β_{j,d}` in `Str(∂_λ^{m−1}(F − λ)^{-1})(x,x) ∼ Σ β_{j,d} (−λ)^{(n−j)/2 − m}`,
/// integrated over a box. The value is `value · π^{pi_half_power/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceCoefficient {
    pub step: usize,
    pub degree: u32,
    pub value: Form,
    pub pi_half_power: i64,
    pub lambda_exponent: Q,
}

impl TraceCoefficient {
    /// Numeric value for coefficients with no remaining generators.
    pub fn numeric(&self) -> Option<f64> {
        Some(
            self.value.numeric_value()?
                * std::f64::consts::PI.powf(self.pi_half_power as f64 / 2.0),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "step": self.step,
            "degree": self.degree,
            "value": form_to_json(&self.value),
            "pi_half_power": self.pi_half_power,
            "lambda_exponent": rational_to_json(&self.lambda_exponent),
        })
    }
}

#[derive(Clone, Debug)]
pub struct TraceTable {
    pub m: u32,
    pub neumann_terms: usize,
    pub coefficients: Vec<TraceCoefficient>,
}

impl TraceTable {
    pub fn get(&self, step: usize, degree: u32) -> Option<&TraceCoefficient> {
        self.coefficients
            .iter()
            .find(|c| c.step == step && c.degree == degree)
    }
}

/// Rising factorial `p (p+1) ⋯ (p+k−1)`.
fn rising(p: i64, k: u32) -> Q {
    (0..k as i64).map(|i| q(p + i)).product()
}

pub fn resolvent_trace_coefficients(
    f: &SymbolExpansion,
    m: u32,
    steps: usize,
    domain: &[(Q, Q)],
) -> Result<TraceTable> {
    let space = f.space();
    let n = space.n();
    if m == 0 {
        return Err(Error::Configuration("m must be at least 1".into()));
    }
    if domain.len() != n {
        return Err(Error::Configuration(format!(
            "integration box needs {n} intervals"
        )));
    }
    let u = space.universe().clone();
    let p = f.map(|s| s.degree_part(0));
    let b = parametrix(&p, steps)?;
    let res = neumann_resolvent(f, &b, steps)?;
    let t = space.t_index();
    let mut coefficients = Vec::new();
    let pi_half_power = (n % 2) as i64 - n as i64;
    for j in 0..steps {
        let mut acc = Form::zero(&u);
        for (mono, c) in res.expansion.step(j).terms() {
            let alpha: Vec<i64> = (0..n)
                .map(|v| mono.exponent(space.xi_index(v)) as i64)
                .collect();
            if alpha.iter().any(|a| a % 2 == 1) {
                continue;
            }
            let power = mono.exponent(t) as i64;
            let total_q = power + m as i64 - 1;
            let h2 = n as i64 + alpha.iter().sum::<i64>();
            if 2 * total_q <= h2 {
                return Err(Error::Unsupported(format!(
                    "ξ-integral of step {j} diverges; use m > {}",
                    (h2 - 2 * power) / 2 + 1
                )));
            }
            // ∫ ξ^α (|ξ|² + μ)^{−q} dξ = μ^{h/2 − q} Π Γ((α_i+1)/2) Γ(q − h/2) / Γ(q)
            let mut weight = rising(power, m - 1) * c;
            for &a in &alpha {
                weight *= gamma_half_integer(a + 1).expect("positive argument").0;
            }
            weight *= gamma_half_integer(2 * total_q - h2).expect("convergent").0;
            weight /= gamma_half_integer(2 * total_q).expect("positive").0;
            let mut rest: Monomial = mono.with_exponent(t, 0);
            for v in 0..n {
                rest = rest.with_exponent(space.xi_index(v), 0);
            }
            acc += &Form::from_monomial(&u, rest, weight);
        }
        for (v, (lo, hi)) in domain.iter().enumerate() {
            acc = acc.integrate(space.x_index(v), lo, hi);
        }
        let acc = acc.scale(&pow_i(&q(2), -(n as i64)));
        let lambda_exponent = qr(n as i64 - j as i64, 2) - q(m as i64);
        let degrees: BTreeMap<u32, Form> = acc
            .degrees()
            .into_iter()
            .map(|d| (d, acc.degree_part(d)))
            .collect();
        for (d, value) in degrees {
            coefficients.push(TraceCoefficient {
                step: j,
                degree: d,
                value,
                pi_half_power,
                lambda_exponent: lambda_exponent.clone(),
            });
        }
    }
    Ok(TraceTable {
        m,
        neumann_terms: res.terms,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolcalc::SymbolSpace;

    #[test]
    fn flat_laplacian_parametrix_is_t() {
        let s = SymbolSpace::new(2, 0).unwrap();
        let p = SymbolExpansion::from_symbol(&s, &s.xi_squared());
        let b = parametrix(&p, 3).unwrap();
        assert_eq!(b.step(0), s.t_power(1));
        assert!(b.step(1).is_zero());
        assert!(b.step(2).is_zero());
    }

    #[test]
    fn harmonic_potential_second_step() {
        let s = SymbolSpace::new(2, 0).unwrap();
        let v = &s.x(0) * &s.x(0);
        let p = SymbolExpansion::from_symbol_with_order(&s, &(&s.xi_squared() + &v), 2);
        let b = parametrix(&p, 4).unwrap();
        assert!(b.homogeneity_consistent());
        let b2 = b.step(2);
        let t2 = s.t_power(2);
        // the x-dependent T² part of b_2 is exactly −V T²
        assert_eq!(b2.coefficient_of(s.t_index(), 2), -&v);
        assert!((&b2 - &(&v * &t2).scale(&q(-1)))
            .terms()
            .all(|(m, _)| m.exponent(s.t_index()) != 2));
        let res = parametrix_residual(&p, &b, 4).unwrap();
        assert_eq!(res.step(0), Form::one(s.universe()));
        for j in 1..4 {
            assert!(res.step(j).is_zero(), "step {j}");
        }
    }

    #[test]
    fn neumann_truncates_by_nilpotence() {
        let s = SymbolSpace::new(1, 1).unwrap();
        let omega = Form::var(s.universe(), "dz1");
        let f = &s.xi_squared() + &(&omega * &s.x(0));
        let fe = SymbolExpansion::from_symbol_with_order(&s, &f, 2);
        let b = parametrix(&fe.map(|x| x.degree_part(0)), 4).unwrap();
        let r = neumann_resolvent(&fe, &b, 4).unwrap();
        assert_eq!(r.terms, 2);
        let w = fe.map(Form::positive_part);
        let expect = b.add(&compose(&compose(&b, &w, 4).unwrap(), &b, 4).unwrap().neg());
        assert_eq!(r.expansion, expect);
        assert_eq!(r.expansion.map(|x| x.degree_part(0)), b);
    }

    #[test]
    fn flat_trace_gamma_factor() {
        // ∂_λ^{m−1} T = (m−1)! T^m and (1/2π) ∫ (ξ² + 1)^{−m} dξ = Γ(1/2) Γ(m − 1/2) / (2π Γ(m))
        let s = SymbolSpace::new(1, 0).unwrap();
        let p = SymbolExpansion::from_symbol(&s, &s.xi_squared());
        for m in 1..=4u32 {
            let table = resolvent_trace_coefficients(&p, m, 1, &[(q(0), q(1))]).unwrap();
            let c = table.get(0, 0).unwrap();
            let num = {
                use statrs::function::gamma::gamma;
                let m = m as f64;
                gamma(m) * std::f64::consts::PI.sqrt() * gamma(m - 0.5)
                    / gamma(m)
                    / (2.0 * std::f64::consts::PI)
            };
            assert!((c.numeric().unwrap() - num).abs() < 1e-12, "m = {m}");
            assert_eq!(c.lambda_exponent, qr(1, 2) - q(m as i64));
        }
    }

    #[test]
    fn no_form_part_without_perturbation() {
        let s = SymbolSpace::new(1, 2).unwrap();
        let p = SymbolExpansion::from_symbol(&s, &s.xi_squared());
        let table = resolvent_trace_coefficients(&p, 2, 3, &[(q(0), q(1))]).unwrap();
        assert!(table.coefficients.iter().all(|c| c.degree == 0));
        assert_eq!(rescaled_t_exponent(0, 0, 0, 2, 2), q(-2));
    }
}

//! The zeta index sum and its transgression primitive, and the `t → 0`
//! extraction identity relating it to the kernel bundle.
//!
//! Along the path `A_σ` (`σ ≥ 1`) the transgression lemma gives
//! `∂_σ ζ(F_σ, s) = −s d Str(F_σ^{−s−1} Ȧ_σ)`. Since `ζ(F_σ, s) → 0` on the
//! non-zero spectrum as `σ → ∞`,
//!
//! ```text
//! ζ(F, s) = d τ(s),   τ(s) = s ∫_1^∞ Str(F_σ^{−s−1} Ȧ_σ) dσ .
//! ```
//!
//! With `F_σ = σ δ_σ(F)` every term of the integrand is a power of `σ`, so
//! the integral is a rational function of `s` with simple poles. At a pole
//! `s = −k` the residue is closed and `ζ(F, −k)` is `d` of the finite part.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::superconnection::{delta_symbolic, Superconnection};
use super::zeta::ZetaFormValue;
use crate::algebra::calculus::Jets;
use crate::algebra::rational::{factorial_q, pow_i, q, qr, Q};
use crate::algebra::{Form, SuperMatrix, Universe};
use crate::error::Result;
use crate::par::Execution;

/// Weights `w_k` of the index sum `Σ_k w_k ζ(F, −k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weights {
    /// `1/k!`
    Factorial,
    /// `(−1)^k/k!`, the weights that reproduce `Str(e^{−F})`
    AlternatingFactorial,
}

impl Weights {
    pub fn weight(self, k: u32) -> Q {
        let w = factorial_q(k).recip();
        match self {
            Weights::AlternatingFactorial if k % 2 == 1 => -w,
            _ => w,
        }
    }
}

/// Jets of `G = δ_u(F)` (so `F_t = u² G` with `u = t^{1/2}`) together with
/// `Ã = Σ_i ((1−i)/2) u^{1−i} A_[i]`, for which `Ȧ_σ = σ^{−1} Ã`.
#[derive(Clone, Debug)]
pub struct RescaledJets {
    pub generator: usize,
    pub g: SuperMatrix,
    pub jets: Jets,
    pub a_tilde: SuperMatrix,
}

impl RescaledJets {
    pub fn new(a: &Superconnection, exec: Execution) -> Result<RescaledJets> {
        let gen = a.half_t_generator()?;
        let u = a.universe().clone();
        let g = delta_symbolic(&a.curvature(), gen);
        let jets = Jets::with_execution(&g, exec)?;
        let mut a_tilde = SuperMatrix::zero(&u, a.dims().0, a.dims().1);
        for (i, c) in a.components().iter().enumerate() {
            let factor = Form::even_power(&u, gen, 1 - i as i16).scale(&qr(1 - i as i64, 2));
            a_tilde = &a_tilde + &c.left_mul_form(&factor);
        }
        Ok(RescaledJets {
            generator: gen,
            g,
            jets,
            a_tilde,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.jets.universe()
    }
}

/// Splits a polynomial in `s` with `u`-dependent coefficients by `u`-power.
fn split_by_power(p: &[Form], gen: usize) -> BTreeMap<i16, Vec<Form>> {
    let mut out: BTreeMap<i16, Vec<Form>> = BTreeMap::new();
    for (j, c) in p.iter().enumerate() {
        for (e, f) in c.powers_of(gen) {
            let entry = out.entry(e).or_default();
            if entry.len() <= j {
                entry.resize(j + 1, Form::zero(c.universe()));
            }
            entry[j] = f;
        }
    }
    out
}

fn eval(p: &[Form], s: &Q, u: &Arc<Universe>) -> Form {
    p.iter()
        .rev()
        .fold(Form::zero(u), |acc, c| &acc.scale(s) + c)
}

/// Finite part and residue of `τ(s)` at `s = −k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveAt {
    pub finite: Form,
    pub residue: Form,
}

/// Evaluates `τ(s) = s Σ_{ν,e} ν^{−s} p_{ν,e}(s) / (s + 1 − e/2)` at `s = −k`.
pub fn primitive_at(rj: &RescaledJets, k: u32) -> Result<PrimitiveAt> {
    let u = rj.universe().clone();
    let z = ZetaFormValue::from_jets(&rj.jets, Some(&rj.a_tilde), 1, true)?;
    let s = q(-(k as i64));
    let mut finite = Form::zero(&u);
    let mut residue = Form::zero(&u);
    for (nu, poly) in z.terms() {
        let nu_pow = pow_i(nu, k as i64);
        for (e, p) in split_by_power(poly, rj.generator) {
            let pole = qr(e as i64, 2) - q(1);
            let val = eval(&p, &s, &u);
            if pole != s {
                let denom = &s + q(1) - qr(e as i64, 2);
                finite += &val.scale(&(&s * &nu_pow / denom));
            } else {
                let deriv: Vec<Form> = p
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, c)| c.scale(&q(j as i64)))
                    .collect();
                let dval = eval(&deriv, &s, &u);
                let log = Form::log_rational(&u, nu);
                // d/ds [s ν^{−s} p(s)] at s
                let h = &(&val - &(&log * &val).scale(&s)) + &dval.scale(&s);
                finite += &h.scale(&nu_pow);
                residue += &val.scale(&(&s * &nu_pow));
            }
        }
    }
    Ok(PrimitiveAt { finite, residue })
}

/// Outcome of the finite-rank index-sum identity.
#[derive(Clone, Debug)]
pub struct ZetaIndexSum {
    pub weights: Weights,
    /// `ζ(F, −k)` for `k = 0..=dim B`.
    pub values: Vec<Form>,
    /// Finite parts `τ(−k)` of the primitive.
    pub primitives: Vec<PrimitiveAt>,
    pub lhs: Form,
    pub tau: Form,
    /// `lhs == dτ`.
    pub exact: bool,
    /// Every residue of `τ` is closed.
    pub residues_closed: bool,
    /// `ζ(F, −k) == d τ(−k)` for each `k` separately.
    pub termwise: Vec<bool>,
}

/// `Σ_k w_k ζ(F, −k) = dτ` with both sides computed independently.
pub fn zeta_index_sum(a: &Superconnection, weights: Weights) -> Result<ZetaIndexSum> {
    let rj = RescaledJets::new(a, Execution::Auto)?;
    zeta_index_sum_with(a, &rj, weights, Execution::Auto)
}

pub fn zeta_index_sum_with(
    a: &Superconnection,
    rj: &RescaledJets,
    weights: Weights,
    exec: Execution,
) -> Result<ZetaIndexSum> {
    let u = a.universe().clone();
    let f = a.curvature();
    let jets = Jets::with_execution(&f, exec)?;
    let zeta = ZetaFormValue::from_jets(&jets, None, 0, true)?;
    let b = a.base_dim() as u32;
    let mut values = Vec::new();
    let mut primitives = Vec::new();
    let mut lhs = Form::zero(&u);
    let mut tau = Form::zero(&u);
    let mut termwise = Vec::new();
    let mut residues_closed = true;
    for k in 0..=b {
        let v = zeta.at_negative_integer(k);
        let p = primitive_at(rj, k)?;
        termwise.push(v == p.finite.d());
        residues_closed &= p.residue.d().is_zero();
        let w = weights.weight(k);
        lhs += &v.scale(&w);
        tau += &p.finite.scale(&w);
        values.push(v);
        primitives.push(p);
    }
    let exact = lhs == tau.d();
    Ok(ZetaIndexSum {
        weights,
        values,
        primitives,
        lhs,
        tau,
        exact,
        residues_closed,
        termwise,
    })
}

/// Report for the regularized `t → 0` limit of the zeta index sum.
#[derive(Clone, Debug)]
pub struct IndexLimitReport {
    /// `LIM Σ_k (−1)^k/k! ζ(F_t, −k)`.
    pub lhs_alternating: Form,
    /// `LIM Σ_k 1/k! ζ(F_t, −k)`.
    pub lhs_factorial: Form,
    /// `ch(Ker P, ∇₀)`.
    pub kernel_character: Form,
    /// `LIM ch(A_t)` from the truncated exponential series.
    pub limit_chern_character: Form,
    /// `−ch(Ker P, ∇₀) + LIM ch(A_t)`.
    pub rhs: Form,
    pub alternating_holds: bool,
    pub factorial_holds: bool,
    pub kernel_projection_constant: bool,
    /// `LIM Str((Π₀ W_t Π₀)^k) = Str(∇₀^{2k})` for `k ≥ 1`, reported only
    /// for a constant kernel projection. It can fail when the connection
    /// mixes `Ker P` with its complement, since then `Π₀ θ (1−Π₀) θ Π₀`
    /// survives in the `t⁰` part of `Π₀ W_t Π₀`.
    pub compression_identity: Option<bool>,
    /// `[Π₀, A_[1]] = 0`.
    pub connection_preserves_kernel: bool,
}

/// `t⁰` coefficient of `Σ_n (−1)^n/n! Str(F_t^n)`. Only `n ≤ dim B / 2`
/// can contribute a `t⁰` term, so the series is truncated exactly.
pub fn limit_chern_character(a: &Superconnection, rj: &RescaledJets) -> Form {
    let u = rj.universe().clone();
    let (p, m) = a.dims();
    let max_n = a.base_dim() as u32 / 2;
    let mut acc = Form::zero(&u);
    let mut power = SuperMatrix::identity(&u, p, m);
    for n in 0..=max_n {
        if n > 0 {
            power = &power * &rj.g;
        }
        let tr = power
            .supertrace()
            .coefficient_of(rj.generator, -2 * n as i16);
        let w = Weights::AlternatingFactorial.weight(n);
        acc += &tr.scale(&w);
    }
    acc
}

pub fn index_limit_check(a: &Superconnection) -> Result<IndexLimitReport> {
    let rj = RescaledJets::new(a, Execution::Auto)?;
    index_limit_check_with(a, &rj)
}

pub fn index_limit_check_with(a: &Superconnection, rj: &RescaledJets) -> Result<IndexLimitReport> {
    let u = rj.universe().clone();
    let gen = rj.generator;
    let zeta_g = ZetaFormValue::from_jets(&rj.jets, None, 0, true)?;
    let b = a.base_dim() as u32;
    let mut lhs_alternating = Form::zero(&u);
    let mut lhs_factorial = Form::zero(&u);
    for k in 0..=b {
        // ζ(F_t, −k) = t^k ζ(G, −k), t^k = u^{2k}
        let lim = zeta_g
            .at_negative_integer(k)
            .coefficient_of(gen, -2 * k as i16);
        lhs_alternating += &lim.scale(&Weights::AlternatingFactorial.weight(k));
        lhs_factorial += &lim.scale(&Weights::Factorial.weight(k));
    }
    let kernel = a.kernel()?;
    let kernel_character = kernel.chern_character()?;
    let limit_ch = limit_chern_character(a, rj);
    let rhs = &limit_ch - &kernel_character;
    let constant = kernel.is_constant();
    let theta = a.component(1);
    let preserves = &kernel.projection * &theta == &theta * &kernel.projection;
    let compression_identity = if constant {
        let pi = &kernel.projection;
        let p = a.operator();
        let w = &rj.g - &(&p * &p);
        let pwp = &(pi * &w) * pi;
        let r0 = kernel.curvature();
        let mut ok = true;
        let mut lhs_pow = pi.clone();
        let mut rhs_pow = pi.clone();
        for k in 1..=b / 2 + 1 {
            lhs_pow = &lhs_pow * &pwp;
            rhs_pow = &rhs_pow * &r0;
            let lim = lhs_pow.supertrace().coefficient_of(gen, -2 * k as i16);
            ok &= lim == rhs_pow.supertrace();
        }
        Some(ok)
    } else {
        None
    };
    Ok(IndexLimitReport {
        alternating_holds: lhs_alternating == rhs,
        factorial_holds: lhs_factorial == rhs,
        lhs_alternating,
        lhs_factorial,
        kernel_character,
        limit_chern_character: limit_ch,
        rhs,
        kernel_projection_constant: constant,
        compression_identity,
        connection_preserves_kernel: preserves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chernweil::superconnection::HALF_T;

    fn universe(b: usize) -> Arc<Universe> {
        Universe::builder().base(b).laurent(HALF_T).build().unwrap()
    }

    /// Rank (1|1), P with P² = diag(μ, μ), plus a connection and a 2-form term.
    fn example(b: usize) -> Superconnection {
        let u = universe(b);
        let z1 = Form::var(&u, "z1");
        let p = SuperMatrix::from_fn(&u, 1, 1, |i, j| match (i, j) {
            (1, 0) => Form::integer(&u, 2),
            (0, 1) => Form::integer(&u, 1),
            _ => Form::zero(&u),
        });
        let theta = SuperMatrix::from_fn(&u, 1, 1, |i, j| match (i, j) {
            (0, 0) => &z1 * &Form::var(&u, "dz2"),
            (1, 1) => Form::var(&u, "dz1"),
            _ => Form::zero(&u),
        });
        let two = SuperMatrix::from_fn(&u, 1, 1, |i, j| match (i, j) {
            (0, 1) => &Form::var(&u, "dz1") * &Form::var(&u, "dz2"),
            _ => Form::zero(&u),
        });
        Superconnection::new(&u, (1, 1), vec![p, theta, two]).unwrap()
    }

    #[test]
    fn index_sum_is_exact_for_both_weightings() {
        let a = example(2);
        for w in [Weights::Factorial, Weights::AlternatingFactorial] {
            let r = zeta_index_sum(&a, w).unwrap();
            assert!(r.exact, "{w:?}");
            assert!(r.residues_closed);
            assert!(r.termwise.iter().all(|&t| t));
            assert!(r.lhs.degree_part(0).is_zero());
        }
    }

    #[test]
    fn trivial_superconnection_has_zero_index_sum() {
        let u = universe(2);
        let p = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i != j {
                Form::one(&u)
            } else {
                Form::zero(&u)
            }
        });
        let a = Superconnection::from_operator(p).unwrap();
        let r = zeta_index_sum(&a, Weights::Factorial).unwrap();
        assert!(r.lhs.is_zero());
        assert!(r.tau.is_zero());
    }

    #[test]
    fn limit_identity_with_alternating_weights() {
        let a = example(2);
        let r = index_limit_check(&a).unwrap();
        assert!(r.alternating_holds);
        assert_eq!(r.compression_identity, Some(true));
    }
}

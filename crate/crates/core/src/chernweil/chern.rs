//! Chern characters, Chern forms and the zeta-Chern form with their
//! transgressions.

use num_traits::{One, Zero};

use super::index::RescaledJets;
use super::integrate::power_resolvent_integral;
use super::superconnection::Superconnection;
use super::zeta::ZetaFormValue;
use crate::algebra::calculus::{exp_split, Jets};
use crate::algebra::rational::{factorial_q, Q};
use crate::algebra::{Form, SuperMatrix};
use crate::error::{Error, Result};
use crate::par::Execution;

/// Name of the path parameter used by [`chern_transgression`].
pub const PATH_PARAMETER: &str = "sigma";

/// `ch(A_t) = Str(e^{−F_t})`, for `t` the square of a positive rational.
pub fn chern_character(a: &Superconnection, t: &Q) -> Result<Form> {
    let at = a.rescale(t)?;
    Ok(exp_split(&(-&at.curvature()))?.supertrace())
}

/// `c(V, ∇) = exp(Str log(I + ∇²))` for a curvature of positive form degree.
pub fn chern_form(curvature: &SuperMatrix) -> Result<Form> {
    if curvature
        .entries()
        .iter()
        .any(|f| !f.degree_part(0).is_zero())
    {
        return Err(Error::Precondition(
            "Chern form needs a curvature of positive degree".into(),
        ));
    }
    curvature.log_one_plus()?.supertrace().exp_nilpotent()
}

/// `log c_ζ(A_t) = −∂_s Str((I + F_t)^{−s})|_{s=0}`.
pub fn log_zeta_chern(a: &Superconnection, t: &Q) -> Result<Form> {
    let at = a.rescale(t)?;
    let (p, m) = a.dims();
    let shifted = &SuperMatrix::identity(a.universe(), p, m) + &at.curvature();
    let jets = Jets::new(&shifted)?;
    let z = ZetaFormValue::from_jets(&jets, None, 0, false)?;
    Ok(-z.derivative_at_integer(0))
}

/// `c_ζ(A_t) = sdet_ζ(I + F_t)`.
pub fn zeta_chern(a: &Superconnection, t: &Q) -> Result<Form> {
    let log = log_zeta_chern(a, t)?;
    if !log.degree_part(0).is_zero() {
        return Err(Error::Precondition(format!(
            "degree-0 part of log c_ζ is {}, expected 0",
            log.degree_part(0)
        )));
    }
    log.exp_nilpotent()
}

/// The zeta-Chern transgression between `t` and `T`.
#[derive(Clone, Debug)]
pub struct ZetaChernTransgression {
    pub c_t: Form,
    pub c_big_t: Form,
    /// `τ_{t,T} = ∫_t^T Str((I + F_ε)^{−1} Ȧ_ε) dε`.
    pub tau: Form,
    /// `ω_{t,T} = c_ζ(A_t) ∧ Σ_{k≥1} τ (dτ)^{k−1} / k!`.
    pub omega: Form,
    /// `log c_ζ(A_T) − log c_ζ(A_t) = dτ`.
    pub log_identity: bool,
    /// `c_ζ(A_T) − c_ζ(A_t) = dω`.
    pub exact: bool,
    /// Both `c_ζ` closed with degree-0 part 1.
    pub closed: bool,
}

/// `∫_t^T Str((I + F_ε)^{−1} Ȧ_ε) dε`, exactly.
///
/// With `u = ε^{1/2}`, `(I + ε G)^{−1} = Σ_{ν,q} (−ε)^q (1+εν)^{−q−1} J_{ν,q}`
/// and `Ȧ_ε = ε^{−1} Ã`, so every term is `ε^a (1+εν)^{−m}` times a form.
pub fn zeta_chern_primitive(rj: &RescaledJets, t: &Q, big_t: &Q) -> Result<Form> {
    let u = rj.universe().clone();
    let traces = rj.jets.supertraces(Some(&rj.a_tilde));
    let mut tau = Form::zero(&u);
    for (nu, row) in rj.jets.nodes().iter().zip(&traces) {
        if *nu < Q::zero() {
            return Err(Error::SpectralCut(format!(
                "eigenvalue {nu} of P² is negative"
            )));
        }
        for (qq, tr) in row.iter().enumerate() {
            for (e, c) in tr.powers_of(rj.generator) {
                if e % 2 != 0 {
                    return Err(Error::Precondition(
                        "odd power of t^{1/2} in the transgression integrand".into(),
                    ));
                }
                let a = qq as i64 - 1 + e as i64 / 2;
                let integral = power_resolvent_integral(&u, a, nu, qq as u32 + 1, t, big_t);
                let sign = if qq % 2 == 0 { Q::one() } else { -Q::one() };
                tau += &(&c * &integral).scale(&sign);
            }
        }
    }
    Ok(tau)
}

pub fn zeta_chern_transgression(
    a: &Superconnection,
    t: &Q,
    big_t: &Q,
) -> Result<ZetaChernTransgression> {
    if *t <= Q::zero() || *big_t <= *t {
        return Err(Error::Domain("need 0 < t < T".into()));
    }
    let rj = RescaledJets::new(a, Execution::Auto)?;
    let log_t = log_zeta_chern(a, t)?;
    let log_big_t = log_zeta_chern(a, big_t)?;
    let c_t = zeta_chern(a, t)?;
    let c_big_t = zeta_chern(a, big_t)?;
    let tau = zeta_chern_primitive(&rj, t, big_t)?;
    let dtau = tau.d();
    let mut series = Form::zero(a.universe());
    let mut power = Form::one(a.universe());
    let bound = a.base_dim() as u32 / 2 + 1;
    for k in 1..=bound {
        series += &(&tau * &power).scale(&factorial_q(k).recip());
        power = &power * &dtau;
    }
    let omega = &c_t * &series;
    let one = Form::one(a.universe());
    let closed = c_t.d().is_zero()
        && c_big_t.d().is_zero()
        && c_t.degree_part(0) == one
        && c_big_t.degree_part(0) == one;
    Ok(ZetaChernTransgression {
        log_identity: &log_big_t - &log_t == dtau,
        exact: &c_big_t - &c_t == omega.d(),
        closed,
        c_t,
        c_big_t,
        tau,
        omega,
    })
}

/// Both sides of `ch(A¹) − ch(A⁰) = −d ∫_0^1 Str(Ȧ_σ e^{−F_σ}) dσ` along
/// the straight path `A_σ = (1−σ)A⁰ + σA¹`.
#[derive(Clone, Debug)]
pub struct ChernTransgression {
    pub lhs: Form,
    pub primitive: Form,
    pub holds: bool,
}

pub fn chern_transgression(
    a0: &Superconnection,
    a1: &Superconnection,
) -> Result<ChernTransgression> {
    let u = a0.universe().clone();
    if a0.dims() != a1.dims() || !crate::algebra::form::same_universe(&u, a1.universe()) {
        return Err(Error::UniverseMismatch);
    }
    let sigma = u
        .even_index(PATH_PARAMETER)
        .filter(|&i| u.is_coordinate(i))
        .ok_or_else(|| {
            Error::Configuration(format!(
                "path transgression needs a coordinate `{PATH_PARAMETER}`"
            ))
        })?;
    if u.odd_index(&format!("d{PATH_PARAMETER}")).is_some() {
        return Err(Error::Configuration(format!(
            "`{PATH_PARAMETER}` must not have a differential"
        )));
    }
    let s = Form::even_power(&u, sigma, 1);
    let n = a0.components().len().max(a1.components().len());
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let c0 = a0.component(i);
        let diff = &a1.component(i) - &c0;
        comps.push(&c0 + &diff.left_mul_form(&s));
    }
    let path = Superconnection::new(&u, a0.dims(), comps)?;
    let velocity = &a1.matrix_part() - &a0.matrix_part();
    let heat = exp_split(&(-&path.curvature()))?;
    let integrand = (&velocity * &heat).supertrace();
    let primitive = integrand.integrate(sigma, &Q::zero(), &Q::one());
    let lhs = &chern_character(a1, &Q::one())? - &chern_character(a0, &Q::one())?;
    Ok(ChernTransgression {
        holds: lhs == -primitive.d(),
        lhs,
        primitive,
    })
}

//! Diagonal model operators whose spectra are unions of families
//! `λ_k = c (k + a)^r`, `k = 0, 1, 2, …`, each with a multiplicity and a
//! grading sign.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::special::{digamma, gamma, hurwitz_zeta, hurwitz_zeta_derivative_at_zero};
use crate::algebra::rational::{is_integer, q, to_f64, Q};
use crate::error::{Error, Result};
use crate::json::{rational_from_json, rational_to_json};

/// Eigenvalues `scale · (k + shift)^power` for `k ≥ 0`, each with
/// `multiplicity`, in the `+` or `−` part of the grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub shift: Q,
    pub power: Q,
    pub scale: Q,
    pub multiplicity: u32,
    pub odd: bool,
}

impl Family {
    pub fn new(shift: Q, power: Q, scale: Q, multiplicity: u32, odd: bool) -> Result<Family> {
        if !shift.is_positive() || !power.is_positive() || !scale.is_positive() {
            return Err(Error::Configuration(
                "family needs positive shift, power and scale".into(),
            ));
        }
        Ok(Family {
            shift,
            power,
            scale,
            multiplicity,
            odd,
        })
    }

    fn weight(&self) -> f64 {
        let m = self.multiplicity as f64;
        if self.odd {
            -m
        } else {
            m
        }
    }

    fn key(&self) -> (Q, Q, Q) {
        (self.shift.clone(), self.power.clone(), self.scale.clone())
    }

    /// `c^{−s} ζ(r s, a)` without multiplicity or sign.
    fn zeta(&self, s: f64) -> Result<f64> {
        let (a, r, c) = (
            to_f64(&self.shift),
            to_f64(&self.power),
            to_f64(&self.scale),
        );
        Ok(c.powf(-s) * hurwitz_zeta(r * s, a)?)
    }

    fn pole(&self) -> f64 {
        1.0 / to_f64(&self.power)
    }

    fn to_json(&self) -> Value {
        json!({
            "shift": rational_to_json(&self.shift),
            "power": rational_to_json(&self.power),
            "scale": rational_to_json(&self.scale),
            "multiplicity": self.multiplicity,
            "odd": self.odd,
        })
    }

    fn from_json(v: &Value) -> Result<Family> {
        let get = |k: &str, default: Q| v.get(k).map_or(Ok(default), rational_from_json);
        let shift = v
            .get("shift")
            .ok_or_else(|| Error::Parse("family needs a `shift`".into()))
            .and_then(rational_from_json)?;
        let multiplicity = v.get("multiplicity").and_then(Value::as_u64).unwrap_or(1) as u32;
        let odd = v.get("odd").and_then(Value::as_bool).unwrap_or(false);
        Family::new(
            shift,
            get("power", q(1))?,
            get("scale", q(1))?,
            multiplicity,
            odd,
        )
    }
}

/// A graded diagonal operator `P²`: eigenvalue families plus kernel
/// dimensions on both sides of the grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumModel {
    pub families: Vec<Family>,
    pub kernel_even: u32,
    pub kernel_odd: u32,
}

impl SpectrumModel {
    /// `Δ = −d²/dx²` on the circle of length `2π`: `k²`, `k ∈ ℤ∖0`, plus
    /// the constants in the kernel.
    pub fn circle_laplacian() -> SpectrumModel {
        let f = Family::new(q(1), q(2), q(1), 2, false).expect("valid family");
        SpectrumModel {
            families: vec![f],
            kernel_even: 1,
            kernel_odd: 0,
        }
    }

    /// `λ_k = k` for `k ≥ 1`, no kernel.
    pub fn linear() -> SpectrumModel {
        let f = Family::new(q(1), q(1), q(1), 1, false).expect("valid family");
        SpectrumModel {
            families: vec![f],
            kernel_even: 0,
            kernel_odd: 0,
        }
    }

    /// `P²` for `P = [[0, D*], [D, 0]]` with `D = −i d/dx + a` on the circle:
    /// both sides have spectrum `(k + a)²`, `k ∈ ℤ`.
    pub fn twisted_circle_dirac(a: &Q) -> SpectrumModel {
        let frac = a - a.floor();
        let kernel = u32::from(frac.is_zero());
        let (lo, hi) = if frac.is_zero() {
            (q(1), q(1))
        } else {
            (frac.clone(), Q::one() - &frac)
        };
        let mut families = Vec::new();
        for odd in [false, true] {
            for shift in [&lo, &hi] {
                families
                    .push(Family::new(shift.clone(), q(2), q(1), 1, odd).expect("valid family"));
            }
        }
        SpectrumModel {
            families,
            kernel_even: kernel,
            kernel_odd: kernel,
        }
    }

    /// The square of an odd operator: every family appears on both sides.
    pub fn from_odd_operator(
        nonzero: &[Family],
        kernel_even: u32,
        kernel_odd: u32,
    ) -> SpectrumModel {
        let mut families = Vec::new();
        for f in nonzero {
            for odd in [false, true] {
                families.push(Family { odd, ..f.clone() });
            }
        }
        SpectrumModel {
            families,
            kernel_even,
            kernel_odd,
        }
    }

    /// Non-zero spectra of the two sides agree with multiplicity.
    pub fn is_matched(&self) -> bool {
        let mut net: BTreeMap<(Q, Q, Q), i64> = BTreeMap::new();
        for f in &self.families {
            *net.entry(f.key()).or_default() += f.weight() as i64;
        }
        net.values().all(|&v| v == 0)
    }

    pub fn kernel_supertrace(&self) -> i64 {
        self.kernel_even as i64 - self.kernel_odd as i64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "families": self.families.iter().map(Family::to_json).collect::<Vec<_>>(),
            "kernel": [self.kernel_even, self.kernel_odd],
        })
    }

    /// Reads a named rule (`circle-laplacian`, `linear`, `twisted-dirac`
    /// with `a`, `odd-operator` with unsigned `families`) or explicit
    /// `families` with a `kernel` pair.
    pub fn from_json(v: &Value) -> Result<SpectrumModel> {
        let kernel = || -> Result<(u32, u32)> {
            match v.get("kernel") {
                None => Ok((0, 0)),
                Some(k) => {
                    let arr = k.as_array().filter(|a| a.len() == 2);
                    let read = |i: usize| arr.and_then(|a| a[i].as_u64()).map(|x| x as u32);
                    match (read(0), read(1)) {
                        (Some(p), Some(m)) => Ok((p, m)),
                        _ => Err(Error::Parse(
                            "`kernel` must be a pair of non-negative integers".into(),
                        )),
                    }
                }
            }
        };
        let families = || -> Result<Vec<Family>> {
            v.get("families")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("model needs a `families` array".into()))?
                .iter()
                .map(Family::from_json)
                .collect()
        };
        match v.get("rule").and_then(Value::as_str) {
            Some("circle-laplacian") => Ok(SpectrumModel::circle_laplacian()),
            Some("linear") => Ok(SpectrumModel::linear()),
            Some("twisted-dirac") => {
                let a = v.get("a").map_or(Ok(Q::zero()), rational_from_json)?;
                Ok(SpectrumModel::twisted_circle_dirac(&a))
            }
            Some("odd-operator") => {
                let (p, m) = kernel()?;
                Ok(SpectrumModel::from_odd_operator(&families()?, p, m))
            }
            Some(other) => Err(Error::Unsupported(format!("unknown model rule `{other}`"))),
            None => {
                let (p, m) = kernel()?;
                Ok(SpectrumModel {
                    families: families()?,
                    kernel_even: p,
                    kernel_odd: m,
                })
            }
        }
    }
}

/// Local data of a meromorphic function at `at`: `double_pole/(s−at)² +
/// residue/(s−at) + value + derivative·(s−at) + …`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeromorphicValue {
    pub at: f64,
    pub double_pole: f64,
    pub residue: f64,
    pub value: f64,
    pub derivative: Option<f64>,
}

impl MeromorphicValue {
    pub fn to_json(&self) -> Value {
        json!({
            "at": self.at,
            "double_pole": self.double_pole,
            "residue": self.residue,
            "value": self.value,
            "derivative": self.derivative,
        })
    }
}

const POLE_TOLERANCE: f64 = 1e-12;
const STENCIL: f64 = 1e-3;

fn regular_sum(model: &SpectrumModel, s: f64) -> Result<f64> {
    let mut acc = 0.0;
    for f in &model.families {
        acc += f.weight() * f.zeta(s)?;
    }
    Ok(acc)
}

/// `ζ(s) = Str((P²)^{−s})` over the non-zero spectrum, with Laurent data at
/// the simple poles `s = 1/r`.
pub fn model_zeta(model: &SpectrumModel, s: f64) -> Result<MeromorphicValue> {
    let mut residue = 0.0;
    let mut value = 0.0;
    let mut near_pole = false;
    for f in &model.families {
        let p = f.pole();
        if (s - p).abs() < POLE_TOLERANCE {
            // c^{−s} ζ(rs, a) = c^{−1/r} (1/(r(s−p)) − ψ(a) − log(c)/r) + O(s−p)
            let (a, r, c) = (to_f64(&f.shift), to_f64(&f.power), to_f64(&f.scale));
            let cp = c.powf(-p);
            residue += f.weight() * cp / r;
            value += f.weight() * cp * (-digamma(a)? - c.ln() / r);
            near_pole = true;
        } else {
            value += f.weight() * f.zeta(s)?;
            near_pole |= (s - p).abs() < 4.0 * STENCIL;
        }
    }
    let derivative = if s == 0.0 {
        Some(zeta_derivative_at_zero(model)?)
    } else if near_pole {
        None
    } else {
        let h = STENCIL;
        let e = |x: f64| regular_sum(model, x);
        Some((8.0 * (e(s + h)? - e(s - h)?) - (e(s + 2.0 * h)? - e(s - 2.0 * h)?)) / (12.0 * h))
    };
    Ok(MeromorphicValue {
        at: s,
        double_pole: 0.0,
        residue,
        value,
        derivative,
    })
}

/// `ζ(0) = Σ ± m (½ − a)`, exactly.
pub fn zeta_at_zero(model: &SpectrumModel) -> Q {
    let mut acc = Q::zero();
    for f in &model.families {
        let v = (Q::new(1.into(), 2.into()) - &f.shift) * q(f.multiplicity as i64);
        acc += if f.odd { -v } else { v };
    }
    acc
}

fn zeta_derivative_at_zero(model: &SpectrumModel) -> Result<f64> {
    Ok(-log_determinant(model)?.value)
}

/// `log det_ζ = −ζ'(0)` split as `α log 2π + Σ β_c log c + Σ γ_a log Γ(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDeterminant {
    pub log_two_pi: Q,
    pub log_scale: BTreeMap<Q, Q>,
    pub log_gamma: BTreeMap<Q, Q>,
    pub value: f64,
}

impl LogDeterminant {
    pub fn determinant(&self) -> f64 {
        self.value.exp()
    }

    pub fn to_json(&self) -> Value {
        let pairs = |m: &BTreeMap<Q, Q>| {
            m.iter()
                .map(|(k, v)| json!([rational_to_json(k), rational_to_json(v)]))
                .collect::<Vec<_>>()
        };
        json!({
            "log_two_pi": rational_to_json(&self.log_two_pi),
            "log_scale": pairs(&self.log_scale),
            "log_gamma": pairs(&self.log_gamma),
            "value": self.value,
            "determinant": self.determinant(),
        })
    }
}

fn log_determinant(model: &SpectrumModel) -> Result<LogDeterminant> {
    // −∂_s [c^{−s} ζ(rs, a)]_{s=0} = log(c)(½ − a) − r (log Γ(a) − ½ log 2π)
    let mut log_two_pi = Q::zero();
    let mut log_scale: BTreeMap<Q, Q> = BTreeMap::new();
    let mut log_gamma: BTreeMap<Q, Q> = BTreeMap::new();
    let mut value = 0.0;
    for f in &model.families {
        let w = if f.odd {
            -q(f.multiplicity as i64)
        } else {
            q(f.multiplicity as i64)
        };
        let half_minus_a = Q::new(1.into(), 2.into()) - &f.shift;
        log_two_pi += &w * &f.power / q(2);
        if !f.scale.is_one() {
            *log_scale.entry(f.scale.clone()).or_default() += &w * &half_minus_a;
        }
        if f.shift != q(1) && f.shift != q(2) {
            *log_gamma.entry(f.shift.clone()).or_default() -= &w * &f.power;
        }
        let (a, r, c) = (to_f64(&f.shift), to_f64(&f.power), to_f64(&f.scale));
        value += to_f64(&w) * (c.ln() * (0.5 - a) - r * hurwitz_zeta_derivative_at_zero(a)?);
    }
    log_scale.retain(|_, v| !v.is_zero());
    log_gamma.retain(|_, v| !v.is_zero());
    Ok(LogDeterminant {
        log_two_pi,
        log_scale,
        log_gamma,
        value,
    })
}

/// `log det_ζ P² = −ζ'(0)`; `ζ` is regular at `0` for every family model.
pub fn zeta_determinant(model: &SpectrumModel) -> Result<LogDeterminant> {
    log_determinant(model)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    /// Super-zeta of the non-zero spectrum at `0`.
    pub zeta_at_zero: Q,
    pub kernel_supertrace: i64,
    /// `ζ(0) + Str Π₀`, the `t⁰` heat coefficient.
    pub index: Q,
    pub matched: bool,
}

impl IndexReport {
    pub fn to_json(&self) -> Value {
        json!({
            "zeta_at_zero": rational_to_json(&self.zeta_at_zero),
            "kernel_supertrace": self.kernel_supertrace,
            "index": rational_to_json(&self.index),
            "matched": self.matched,
        })
    }
}

/// Index as the constant heat coefficient `ζ(0) + Str Π₀`; for squares of
/// odd operators the super-zeta vanishes and this is `dim Ker⁺ − dim Ker⁻`.
pub fn index_via_zeta(model: &SpectrumModel) -> Result<IndexReport> {
    let z = zeta_at_zero(model);
    let k = model.kernel_supertrace();
    let index = &z + q(k);
    if !is_integer(&index) {
        return Err(Error::Precondition(format!(
            "constant heat coefficient {index} is not an integer"
        )));
    }
    Ok(IndexReport {
        zeta_at_zero: z,
        kernel_supertrace: k,
        index,
        matched: model.is_matched(),
    })
}

const HEAT_TOLERANCE: f64 = 1e-17;
const HEAT_MAX_TERMS: usize = 10_000_000;

/// `Str(e^{−tP²})` by direct summation. Terms decrease in `k` and, for
/// `r ≥ 1`, so do the ratios of consecutive terms, so the tail after `T_k`
/// is bounded by `T_k ρ / (1 − ρ)`.
pub fn index_via_heat(model: &SpectrumModel, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "heat time must be positive, got {t}"
        )));
    }
    let mut total = model.kernel_supertrace() as f64;
    for f in &model.families {
        if f.power < q(1) {
            return Err(Error::Unsupported("heat sums need power ≥ 1".into()));
        }
        let (a, r, c) = (to_f64(&f.shift), to_f64(&f.power), to_f64(&f.scale));
        let mut acc = 0.0;
        let mut prev = f64::INFINITY;
        let mut converged = false;
        for k in 0..HEAT_MAX_TERMS {
            let term = (-t * c * (k as f64 + a).powf(r)).exp();
            acc += term;
            let rho = term / prev;
            prev = term;
            if k > 0 && rho < 1.0 && term * rho / (1.0 - rho) <= HEAT_TOLERANCE * acc.max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Domain(format!(
                "heat sum did not converge at t = {t}"
            )));
        }
        total += f.weight() * acc;
    }
    Ok(total)
}

/// Numeric heat supertrace against the small-`t` expansion read off the
/// poles of `Γ(s) ζ(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatExpansionReport {
    pub t: f64,
    pub numeric: f64,
    pub predicted: f64,
    pub deviation: f64,
    /// `(exponent of t, coefficient)`, ascending in the exponent.
    pub terms: Vec<(f64, f64)>,
}

impl HeatExpansionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "numeric": self.numeric,
            "predicted": self.predicted,
            "deviation": self.deviation,
            "terms": self.terms.iter().map(|(e, c)| json!([e, c])).collect::<Vec<_>>(),
        })
    }
}

/// Terms `Γ(1/r) c^{−1/r}/r · t^{−1/r}`, `ζ(0) + Str Π₀`, and
/// `(−t)^k/k! · c^k ζ(−rk, a)` for `k = 1..=orders`, per family.
pub fn heat_expansion_check(
    model: &SpectrumModel,
    t: f64,
    orders: u32,
) -> Result<HeatExpansionReport> {
    let numeric = index_via_heat(model, t)?;
    let mut terms: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    let mut add = |e: f64, c: f64| {
        let key = (e * 1e9).round() as i64;
        terms.entry(key).or_insert((e, 0.0)).1 += c;
    };
    add(0.0, model.kernel_supertrace() as f64);
    for f in &model.families {
        let (a, r, c) = (to_f64(&f.shift), to_f64(&f.power), to_f64(&f.scale));
        let w = f.weight();
        add(-1.0 / r, w * gamma(1.0 / r)? * c.powf(-1.0 / r) / r);
        add(0.0, w * (0.5 - a));
        let mut fact = 1.0;
        for k in 1..=orders {
            fact *= k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            add(
                k as f64,
                w * sign / fact * c.powi(k as i32) * hurwitz_zeta(-r * k as f64, a)?,
            );
        }
    }
    let terms: Vec<(f64, f64)> = terms.into_values().filter(|(_, c)| *c != 0.0).collect();
    let predicted = terms.iter().map(|(e, c)| c * t.powf(*e)).sum::<f64>();
    Ok(HeatExpansionReport {
        t,
        numeric,
        predicted,
        deviation: (numeric - predicted).abs(),
        terms,
    })
}

/// `(4πt)^{−1/2} · 2π`, the leading heat term of the circle Laplacian.
pub fn circle_leading_term(t: f64) -> f64 {
    2.0 * PI / (4.0 * PI * t).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;
    use crate::spectral::special::riemann_zeta;

    #[test]
    fn circle_zeta_is_twice_riemann() {
        let m = SpectrumModel::circle_laplacian();
        for s in [-2.5, -0.3, 0.25, 1.5, 3.0] {
            let z = model_zeta(&m, s).unwrap();
            assert!(
                (z.value - 2.0 * riemann_zeta(2.0 * s).unwrap()).abs() < 1e-12,
                "s = {s}"
            );
        }
        let pole = model_zeta(&m, 0.5).unwrap();
        assert!((pole.residue - 1.0).abs() < 1e-15);
    }

    #[test]
    fn determinants() {
        let d = zeta_determinant(&SpectrumModel::circle_laplacian()).unwrap();
        assert_eq!(d.log_two_pi, q(2));
        assert!((d.determinant() - (2.0 * PI).powi(2)).abs() < 1e-10);
        let l = zeta_determinant(&SpectrumModel::linear()).unwrap();
        assert_eq!(l.log_two_pi, qr(1, 2));
        assert!((l.determinant() - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn derivative_at_zero_matches_stencil() {
        let m = SpectrumModel::twisted_circle_dirac(&qr(1, 3));
        let m = SpectrumModel {
            families: m.families.into_iter().filter(|f| !f.odd).collect(),
            ..m
        };
        let exact = model_zeta(&m, 0.0).unwrap().derivative.unwrap();
        let h = 1e-3;
        let e = |x: f64| regular_sum(&m, x).unwrap();
        let fd = (8.0 * (e(h) - e(-h)) - (e(2.0 * h) - e(-2.0 * h))) / (12.0 * h);
        assert!((exact - fd).abs() < 1e-9, "{exact} vs {fd}");
    }

    #[test]
    fn index_of_kernel_model() {
        let f = Family::new(q(1), q(2), q(1), 1, false).unwrap();
        let m = SpectrumModel::from_odd_operator(&[f], 2, 0);
        assert!(m.is_matched());
        assert_eq!(index_via_zeta(&m).unwrap().index, q(2));
        for t in [0.1, 1.0, 10.0] {
            assert!((index_via_heat(&m, t).unwrap() - 2.0).abs() < 1e-10);
        }
        let d = SpectrumModel::twisted_circle_dirac(&qr(2, 7));
        assert_eq!(index_via_zeta(&d).unwrap().index, q(0));
    }

    #[test]
    fn circle_heat_expansion() {
        let m = SpectrumModel::circle_laplacian();
        let rep = heat_expansion_check(&m, 1e-4, 3).unwrap();
        assert!((rep.numeric - circle_leading_term(1e-4)).abs() < 1e-8);
        assert!(rep.deviation < 1e-8, "{rep:?}");
        let late = index_via_heat(&m, 60.0).unwrap();
        assert!((late - 1.0).abs() < 1e-12);
    }
}

//! Gamma, zeta and the contour function `F_t(s)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::{One, Zero};
use statrs::function::gamma as sg;

use crate::algebra::rational::{binomial_q, factorial_q, q, to_f64, Q};
use crate::error::{Error, Result};

/// Terms summed directly before the Euler–Maclaurin tail.
const EM_SHIFT: usize = 12;
/// Bernoulli corrections in the Euler–Maclaurin tail.
const EM_TERMS: usize = 8;
const BERNOULLI_MAX: usize = 64;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `Γ(x)`; poles at the non-positive integers are errors.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Γ at {x}")));
    }
    Ok(sg::gamma(x))
}

/// `1/Γ(x)`, zero at the poles of `Γ`.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / sg::gamma(x)
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("ψ at {x}")));
    }
    Ok(sg::digamma(x))
}

fn bernoulli_table() -> &'static [Q] {
    static TABLE: OnceLock<Vec<Q>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{k=0}^{n} binom(n+1, k) B_k = 0, B_1 = −1/2
        let mut b: Vec<Q> = vec![Q::one()];
        for n in 1..=BERNOULLI_MAX {
            let mut s = Q::zero();
            for (k, bk) in b.iter().enumerate() {
                s += binomial_q(&q(n as i64 + 1), k as u32) * bk;
            }
            b.push(-s / q(n as i64 + 1));
        }
        b
    })
}

/// `B_n` with `B_1 = −1/2`, for `n ≤ 64`.
pub fn bernoulli(n: usize) -> Q {
    assert!(
        n <= BERNOULLI_MAX,
        "Bernoulli numbers are tabulated to {BERNOULLI_MAX}"
    );
    bernoulli_table()[n].clone()
}

/// `B_n(a) = Σ_k binom(n, k) B_k a^{n−k}`.
pub fn bernoulli_polynomial(n: usize, a: &Q) -> Q {
    let mut acc = Q::zero();
    for k in 0..=n {
        acc +=
            binomial_q(&q(n as i64), k as u32) * bernoulli(k) * num_traits::pow(a.clone(), n - k);
    }
    acc
}

fn bernoulli_polynomial_f64(n: usize, a: f64) -> f64 {
    (0..=n)
        .map(|k| {
            to_f64(&(binomial_q(&q(n as i64), k as u32) * bernoulli(k))) * a.powi((n - k) as i32)
        })
        .sum()
}

/// `Σ_{k<shift} (k+a)^{−s}` plus the Euler–Maclaurin tail at `shift + a`.
fn euler_maclaurin(s: f64, a: f64, shift: usize) -> f64 {
    let mut acc: f64 = (0..shift).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = shift as f64 + a;
    acc += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // (s)_{2j−1} B_{2j} / (2j)! x^{−s−2j+1}
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for j in 1..=EM_TERMS {
        let c = to_f64(&(bernoulli(2 * j) / factorial_q(2 * j as u32)));
        acc += c * rising * power;
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        power /= x * x;
    }
    acc
}

/// Riemann `ζ(s)`: Euler–Maclaurin for `s ≥ 0`, the functional equation
/// below, exact Bernoulli values at non-positive integers.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole("ζ at 1".into()));
    }
    if is_nonpositive_integer(s) {
        let m = (-s) as usize;
        let v = bernoulli(m + 1) / q(m as i64 + 1);
        return Ok(if m.is_multiple_of(2) {
            to_f64(&v)
        } else {
            -to_f64(&v)
        });
    }
    if s >= 0.0 {
        return Ok(euler_maclaurin(s, 1.0, EM_SHIFT));
    }
    let reflected = euler_maclaurin(1.0 - s, 1.0, EM_SHIFT);
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * sg::gamma(1.0 - s) * reflected)
}

/// `ζ(s, 1+h) = Σ_k binom(−s, k) h^k ζ(s+k)` for `|h| ≤ 1/2` and
/// non-integer `s`.
fn hurwitz_taylor(s: f64, h: f64) -> Result<f64> {
    let mut acc = riemann_zeta(s)?;
    let mut c = 1.0;
    let mut hk = 1.0;
    for k in 1..400usize {
        c *= (-s - (k as f64) + 1.0) / k as f64;
        hk *= h;
        let term = c * hk * riemann_zeta(s + k as f64)?;
        acc += term;
        if s + (k as f64) > 2.0 && term.abs() <= 1e-18 * acc.abs().max(1e-300) {
            return Ok(acc);
        }
    }
    Err(Error::Domain(format!(
        "Hurwitz series at s = {s} did not converge"
    )))
}

/// Hurwitz `ζ(s, a) = Σ_{k≥0} (k+a)^{−s}` for `a > 0`.
///
/// `s ≥ 0` uses Euler–Maclaurin directly; `s < 0` uses exact Bernoulli
/// polynomials at integers and otherwise reduces `a` to `(0, 1]` and expands
/// around `a = 1` in Riemann zeta values, avoiding the cancellation the
/// direct sum suffers for negative `s`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || !a.is_finite() || !s.is_finite() {
        return Err(Error::Domain(format!(
            "Hurwitz zeta needs a > 0, got a = {a}, s = {s}"
        )));
    }
    if s == 1.0 {
        return Err(Error::Pole("Hurwitz ζ at s = 1".into()));
    }
    if s >= 0.0 {
        return Ok(euler_maclaurin(s, a, EM_SHIFT));
    }
    if s.fract() == 0.0 {
        let m = (-s) as usize;
        if m < BERNOULLI_MAX {
            return Ok(-bernoulli_polynomial_f64(m + 1, a) / (m as f64 + 1.0));
        }
    }
    if a >= 20.0 - s {
        // far from the origin the tail alone is accurate
        return Ok(euler_maclaurin(s, a, 0));
    }
    let mut b = a;
    let mut acc = 0.0;
    while b > 1.0 {
        b -= 1.0;
        acc -= b.powf(-s);
    }
    let base = if b <= 0.5 {
        b.powf(-s) + hurwitz_taylor(s, b)?
    } else {
        hurwitz_taylor(s, b - 1.0)?
    };
    Ok(acc + base)
}

/// `∂_s ζ(s, a)` at `s = 0`: `log Γ(a) − ½ log 2π`.
pub fn hurwitz_zeta_derivative_at_zero(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain(format!("Hurwitz zeta needs a > 0, got {a}")));
    }
    Ok(sg::ln_gamma(a) - 0.5 * (2.0 * PI).ln())
}

/// `F_t(s) = Γ(s+t) / (Γ(t) Γ(s+1))`.
pub fn f_special(t: f64, s: f64) -> Result<f64> {
    if is_nonpositive_integer(s + t) {
        // a pole unless 1/(Γ(t)Γ(s+1)) vanishes as well
        if is_nonpositive_integer(t) || is_nonpositive_integer(s + 1.0) {
            return Err(Error::Unsupported(format!(
                "F_t(s) at t = {t}, s = {s} is a removable 0·∞ point"
            )));
        }
        return Err(Error::Pole(format!("F_t(s) at t = {t}, s = {s}")));
    }
    Ok(sg::gamma(s + t) * reciprocal_gamma(t) * reciprocal_gamma(s + 1.0))
}

/// `∂_s F_t(s)`.
pub fn f_special_derivative(t: f64, s: f64) -> Result<f64> {
    let value = f_special(t, s)?;
    if is_nonpositive_integer(t) {
        return Ok(0.0);
    }
    if is_nonpositive_integer(s + 1.0) {
        // d/dz (1/Γ(z)) at z = −m is (−1)^m m!
        let m = -(s + 1.0);
        let sign = if (m as u64).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        return Ok(sg::gamma(s + t) / sg::gamma(t) * sign * sg::gamma(m + 1.0));
    }
    Ok(value * (sg::digamma(s + t) - sg::digamma(s + 1.0)))
}

/// `F_t(s) = (i/2π) ∫_C μ^{−s−1} (1−μ)^{−t} dμ`, `C` wrapping the negative
/// real axis clockwise, evaluated by quadrature along the parabola
/// `μ = (½ + iv)²` (crossing the real axis at `¼`, between both cuts) with a
/// double-exponential substitution `v = sinh((π/2) sinh w)`.
pub fn f_special_contour(t: f64, s: f64) -> Result<f64> {
    if (s + t).is_nan() || s + t <= 0.0 {
        return Err(Error::Domain(format!(
            "contour integral needs Re(s + t) > 0, got s = {s}, t = {t}"
        )));
    }
    let beta = 0.5;
    let h = 1.0 / 32.0;
    let f = |w: f64| -> Option<Complex64> {
        let u = 0.5 * PI * w.sinh();
        let v = u.sinh();
        let dv = u.cosh() * 0.5 * PI * w.cosh();
        if !v.is_finite() || !dv.is_finite() {
            return None;
        }
        let z = Complex64::new(beta, v);
        let mu = z * z;
        let dmu = 2.0 * z * Complex64::i() * dv;
        let val = mu.powc(Complex64::new(-s - 1.0, 0.0))
            * (Complex64::one() - mu).powc(Complex64::new(-t, 0.0))
            * dmu;
        val.is_finite().then_some(val)
    };
    let mut acc = f(0.0).expect("finite at the centre");
    for dir in [1.0, -1.0] {
        let mut small = 0;
        for k in 1.. {
            let Some(term) = f(dir * k as f64 * h) else {
                return Err(Error::Domain(format!(
                    "contour quadrature overflowed before converging (s = {s}, t = {t})"
                )));
            };
            acc += term;
            small = if term.norm() < 1e-18 * acc.norm() {
                small + 1
            } else {
                0
            };
            if small >= 4 {
                break;
            }
        }
    }
    // counter-clockwise in v; the clockwise orientation flips the sign
    let integral = -(Complex64::i() / (2.0 * PI)) * acc * h;
    Ok(integral.re)
}

/// `F_k(s) = (s+1)(s+2)⋯(s+k−1) / (k−1)!` for integer `k ≥ 1`, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSpecialPolynomial {
    /// Coefficients of `1, s, s², …`.
    pub coeffs: Vec<Q>,
}

impl FSpecialPolynomial {
    pub fn eval(&self, s: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * s + c)
    }

    pub fn derivative(&self) -> FSpecialPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * q(i as i64))
            .collect();
        FSpecialPolynomial { coeffs }
    }
}

pub fn f_special_integer(k: u32) -> Result<FSpecialPolynomial> {
    if k == 0 {
        return Err(Error::Domain(
            "F_0 vanishes identically; k must be positive".into(),
        ));
    }
    let mut coeffs = vec![Q::one()];
    for j in 1..k as i64 {
        // multiply by (s + j)
        let mut next = vec![Q::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c * q(j);
            next[i + 1] += c;
        }
        coeffs = next;
    }
    let norm = factorial_q(k - 1).recip();
    Ok(FSpecialPolynomial {
        coeffs: coeffs.into_iter().map(|c| c * &norm).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), qr(-1, 2));
        assert_eq!(bernoulli(2), qr(1, 6));
        assert_eq!(bernoulli(12), qr(-691, 2730));
        assert_eq!(
            bernoulli_polynomial(2, &qr(1, 3)),
            qr(1, 9) - qr(1, 3) + qr(1, 6)
        );
    }

    #[test]
    fn classical_zeta_values() {
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(-1.0, 1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        for a in [0.1, 0.5, 0.9, 2.5] {
            assert!(
                (hurwitz_zeta(0.0, a).unwrap() - (0.5 - a)).abs() < 1e-13,
                "a = {a}"
            );
        }
        assert!((riemann_zeta(0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
    }

    #[test]
    fn half_shift_duplication() {
        // ζ(s, 1/2) = (2^s − 1) ζ(s) links the two evaluation routes
        for s in [-7.3, -2.5, -0.7, 0.3, 3.7, 12.2] {
            let lhs = hurwitz_zeta(s, 0.5).unwrap();
            let rhs = (2f64.powf(s) - 1.0) * riemann_zeta(s).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
                "s = {s}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn integer_f_special() {
        for k in 1..=10u32 {
            let f = f_special_integer(k).unwrap();
            assert_eq!(f.eval(&q(0)), q(1));
            let g = f_special_integer(k + 1).unwrap();
            assert_eq!(g.derivative().eval(&q(-1)), qr(1, k as i64));
        }
    }

    #[test]
    fn contour_matches_gamma_quotient() {
        for (t, s) in [(1.0, -0.5), (2.5, -1.2), (0.7, -0.2), (3.0, -2.4)] {
            let c = f_special_contour(t, s).unwrap();
            let g = f_special(t, s).unwrap();
            assert!((c - g).abs() < 1e-10, "t = {t}, s = {s}: {c} vs {g}");
        }
    }
}

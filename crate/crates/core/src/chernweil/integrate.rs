//! Exact integrals `∫_t^T ε^a (1 + εν)^{−m} dε` for integer `a`, `m ≥ 1`
//! and rational `ν ≥ 0`, `0 < t < T`.
//!
//! The result is a rational combination of `1` and `log` of rationals.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::rational::{binomial_q, pow_i, q, Q};
use crate::algebra::{Form, Universe};

/// `∫_x0^x1 x^k dx`.
fn power_integral(u: &Arc<Universe>, k: i64, x0: &Q, x1: &Q) -> Form {
    if k == -1 {
        Form::log_rational(u, &(x1 / x0))
    } else {
        Form::constant(u, (pow_i(x1, k + 1) - pow_i(x0, k + 1)) / q(k + 1))
    }
}

fn binom_int(n: i64, k: i64) -> Q {
    if k < 0 {
        return Q::zero();
    }
    binomial_q(&q(n), k as u32)
}

pub fn power_resolvent_integral(
    u: &Arc<Universe>,
    a: i64,
    nu: &Q,
    m: u32,
    t: &Q,
    big_t: &Q,
) -> Form {
    assert!(
        *t > Q::zero() && *big_t > Q::zero(),
        "integration bounds must be positive"
    );
    assert!(*nu >= Q::zero(), "ν must be non-negative");
    if nu.is_zero() {
        return power_integral(u, a, t, big_t);
    }
    let m = m as i64;
    let y0 = q(1) + t * nu;
    let y1 = q(1) + big_t * nu;
    let mut out = Form::zero(u);
    if a >= 0 {
        // ε = (y − 1)/ν
        for j in 0..=a {
            let c = binom_int(a, j) * if (a - j) % 2 == 0 { q(1) } else { q(-1) };
            out += &power_integral(u, j - m, &y0, &y1).scale(&c);
        }
        out.scale(&pow_i(nu, -a - 1))
    } else {
        let n = -a;
        for i in 1..=n {
            let c = binom_int(-m, n - i) * pow_i(nu, n - i);
            out += &power_integral(u, -i, t, big_t).scale(&c);
        }
        let sign = if n % 2 == 0 { q(1) } else { q(-1) };
        for j in 1..=m {
            let c = pow_i(nu, n) * &sign * binom_int(n + m - j - 1, m - j);
            // ∫ (1+νε)^{−j} dε = (1/ν) ∫ y^{−j} dy
            out += &power_integral(u, -j, &y0, &y1).scale(&(c / nu));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{qr, to_f64};

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        // composite Simpson in log-spaced variable for wide ranges
        let n = 4000;
        let (la, lb) = (a.ln(), b.ln());
        let h = (lb - la) / n as f64;
        let g = |x: f64| f(x.exp()) * x.exp();
        let mut s = g(la) + g(lb);
        for k in 1..n {
            let x = la + h * k as f64;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(x);
        }
        s * h / 3.0
    }

    #[test]
    fn matches_quadrature() {
        let u = Universe::base(0);
        for a in -3i64..=3 {
            for m in 1u32..=3 {
                for nu in [q(0), qr(1, 2), q(3)] {
                    let (t, big_t) = (qr(1, 5), qr(7, 2));
                    let exact = power_resolvent_integral(&u, a, &nu, m, &t, &big_t)
                        .numeric_value()
                        .unwrap();
                    let nf = to_f64(&nu);
                    let num = simpson(
                        |e| e.powi(a as i32) * (1.0 + e * nf).powi(-(m as i32)),
                        to_f64(&t),
                        to_f64(&big_t),
                    );
                    assert!(
                        (exact - num).abs() < 1e-9 * (1.0 + num.abs()),
                        "a={a} m={m} ν={nu}: {exact} vs {num}"
                    );
                }
            }
        }
    }
}

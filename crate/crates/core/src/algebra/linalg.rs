//! Small exact linear algebra over the rationals: characteristic
//! polynomials and rational eigenvalues.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rationalize, to_f64, Q};
use crate::error::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first.
pub type Poly = Vec<Q>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// `det(x I - A)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<Q>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: Q = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / Q::from_integer(k.into());
    }
    coeffs
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn poly_derivative(p: &[Q]) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Q::from_integer(k.into()))
        .collect()
}

/// Quotient and remainder of polynomial division.
fn poly_divmod(a: &[Q], b: &[Q]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quot = vec![Q::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &c * bk;
        }
        quot[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (quot, r)
}

fn poly_gcd(a: &[Q], b: &[Q]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &l;
        }
    }
    x
}

/// Durand–Kerner iteration for all complex roots of a monic polynomial.
fn approximate_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let scale = 1.0 + p[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    let eval = |x: Complex64| {
        p.iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * x + c)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Distinct rational roots of `p`, each verified exactly. Fails if `p` has a
/// root that is not rational.
pub fn distinct_rational_roots(p: &[Q]) -> Result<Vec<Q>> {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.len() <= 1 {
        return Ok(vec![]);
    }
    let g = poly_gcd(&p, &poly_derivative(&p));
    let (mut sq, _) = poly_divmod(&p, &g);
    trim(&mut sq);
    let lead = sq.last().unwrap().clone();
    let monic: Poly = sq.iter().map(|c| c / &lead).collect();
    // denominators of rational roots divide the leading coefficient of the
    // primitive integer polynomial
    let lcm = monic
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let max_den = lcm.to_string().parse::<f64>().unwrap_or(f64::MAX).min(1e12) as u64;
    let floats: Vec<f64> = monic.iter().map(to_f64).collect();
    let mut roots: Vec<Q> = Vec::new();
    let mut rest = monic.clone();
    for z in approximate_roots(&floats) {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            return Err(Error::Unsupported(
                "degree-0 part has non-real eigenvalues".into(),
            ));
        }
        let cand = rationalize(z.re, max_den.max(1))
            .ok_or_else(|| Error::Unsupported("eigenvalue approximation failed".into()))?;
        if roots.contains(&cand) {
            continue;
        }
        if poly_eval(&rest, &cand).is_zero() {
            let (quot, _) = poly_divmod(&rest, &[-cand.clone(), Q::one()]);
            rest = quot;
            roots.push(cand);
        }
    }
    if roots.len() + 1 != monic.len() {
        return Err(Error::Unsupported(
            "degree-0 part has eigenvalues that are not exact rationals".into(),
        ));
    }
    roots.sort();
    Ok(roots)
}

/// Eigenvalues (distinct, ascending) of a rational matrix.
pub fn rational_eigenvalues(a: &[Vec<Q>]) -> Result<Vec<Q>> {
    distinct_rational_roots(&characteristic_polynomial(a))
}

pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qr};

    #[test]
    fn charpoly_of_diagonal() {
        let a = vec![vec![q(2), q(0)], vec![q(0), q(3)]];
        assert_eq!(characteristic_polynomial(&a), vec![q(6), q(-5), q(1)]);
    }

    #[test]
    fn repeated_and_fractional_roots() {
        // (x - 1/2)^2 (x + 3) (x - 5/3)
        let mut p: Poly = vec![Q::one()];
        for r in [qr(1, 2), qr(1, 2), q(-3), qr(5, 3)] {
            let mut next = vec![Q::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &r;
            }
            p = next;
        }
        assert_eq!(
            distinct_rational_roots(&p).unwrap(),
            vec![q(-3), qr(1, 2), qr(5, 3)]
        );
    }

    #[test]
    fn irrational_roots_are_rejected() {
        assert!(distinct_rational_roots(&[q(-2), q(0), q(1)]).is_err());
    }
}

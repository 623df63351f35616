//! Exact rational helpers shared by every layer of the engine.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Q = BigRational;

/// Trial division stops at this bound; any larger cofactor is kept whole.
const TRIAL_DIVISION_BOUND: u64 = 1 << 20;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_from_big(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u32) -> Q {
    q_from_big(factorial(n))
}

pub fn to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators/denominators before converting.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Integer power with possibly negative exponent. Panics on `0^(-k)`.
pub fn pow_i(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        assert!(!x.is_zero(), "zero raised to a negative power");
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i128);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (!k1.is_zero()).then(|| Q::new(h1, k1))
}

/// Factorisation of a positive integer as (prime, exponent) pairs, primes
/// ascending. A cofactor left after trial division is reported as if prime;
/// distinct keys stay multiplicatively independent because such cofactors are
/// coprime to every trial prime.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n.is_zero() {
        return out;
    }
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = n.div_rem(&bp);
            if !rem.is_zero() {
                break;
            }
            n = quot;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// `log |x|` of a positive rational as integer combination of logs of primes.
pub fn log_decomposition(x: &Q) -> Vec<(BigUint, i64)> {
    assert!(x.is_positive(), "logarithm of a non-positive rational");
    let mut out: Vec<(BigUint, i64)> = Vec::new();
    for (p, e) in factor(x.numer().magnitude()) {
        out.push((p, e as i64));
    }
    for (p, e) in factor(x.denom().magnitude()) {
        out.push((p, -(e as i64)));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Falling-factorial binomial `binom(a, k) = a (a-1) ... (a-k+1) / k!`.
pub fn binomial_q(a: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for j in 0..k {
        acc *= a - q(j as i64);
    }
    acc / factorial_q(k)
}

/// `Γ(h/2)` for an integer `h` as `c` or `c·√π` (flag set), `None` at the
/// poles `h ∈ {0, −2, −4, …}`.
pub fn gamma_half_integer(h: i64) -> Option<(Q, bool)> {
    if h % 2 == 0 {
        if h <= 0 {
            return None;
        }
        return Some((factorial_q((h / 2 - 1) as u32), false));
    }
    // Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
    let mut c = Q::one();
    let mut x = qr(1, 2);
    let target = qr(h, 2);
    while x < target {
        c *= &x;
        x += Q::one();
    }
    while x > target {
        x -= Q::one();
        c /= &x;
    }
    Some((c, true))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn sign_of(x: &Q) -> Sign {
    x.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_half_integers() {
        assert_eq!(gamma_half_integer(1), Some((q(1), true)));
        assert_eq!(gamma_half_integer(3), Some((qr(1, 2), true)));
        assert_eq!(gamma_half_integer(-1), Some((q(-2), true)));
        assert_eq!(gamma_half_integer(8), Some((q(6), false)));
        assert_eq!(gamma_half_integer(0), None);
        assert_eq!(gamma_half_integer(-4), None);
    }

    #[test]
    fn factor_small() {
        let f = factor(&BigUint::from(360u32));
        let got: Vec<(u64, u32)> = f.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        assert_eq!(got, vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn log_of_fraction() {
        let l = log_decomposition(&qr(12, 5));
        let got: Vec<(u64, i64)> = l.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        assert_eq!(got, vec![(2, 2), (3, 1), (5, -1)]);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.75, 100), Some(qr(3, 4)));
        assert_eq!(rationalize(-7.0 / 3.0, 100), Some(qr(-7, 3)));
    }

    #[test]
    fn sqrt_exact_detects_squares() {
        assert_eq!(sqrt_exact(&qr(9, 4)), Some(qr(3, 2)));
        assert_eq!(sqrt_exact(&q(2)), None);
    }

    #[test]
    fn binomial_of_negative_argument() {
        // binom(-2, 3) = (-2)(-3)(-4)/6 = -4
        assert_eq!(binomial_q(&q(-2), 3), q(-4));
    }
}

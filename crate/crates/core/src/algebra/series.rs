//! Truncated univariate power series with rational coefficients.
//!
//! Used as an independent oracle for closed-form generating functions
//! (`x/sinh x`, `tanh x / x`, `1/cosh x`, …).

use num_traits::{One, Zero};

use super::rational::{factorial_q, q, Q};

/// Coefficients `c_0, c_1, …` of `Σ c_k x^k`, truncated at `len` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    pub coeffs: Vec<Q>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Q>, len: usize) -> PowerSeries {
        coeffs.resize(len, Q::zero());
        PowerSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn one(len: usize) -> PowerSeries {
        PowerSeries::new(vec![Q::one()], len)
    }

    /// `sinh x`.
    pub fn sinh(len: usize) -> PowerSeries {
        PowerSeries::new(
            (0..len)
                .map(|k| {
                    if k % 2 == 1 {
                        factorial_q(k as u32).recip()
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
            len,
        )
    }

    /// `cosh x`.
    pub fn cosh(len: usize) -> PowerSeries {
        PowerSeries::new(
            (0..len)
                .map(|k| {
                    if k % 2 == 0 {
                        factorial_q(k as u32).recip()
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
            len,
        )
    }

    /// `sinh x / x`.
    pub fn sinhc(len: usize) -> PowerSeries {
        let s = PowerSeries::sinh(len + 1);
        PowerSeries::new(s.coeffs[1..].to_vec(), len)
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.len().min(other.len());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be non-zero.
    pub fn inverse(&self) -> PowerSeries {
        let n = self.len();
        let c0 = self.coeffs[0].clone();
        assert!(
            !c0.is_zero(),
            "series with zero constant term is not invertible"
        );
        let mut out = vec![Q::zero(); n];
        out[0] = c0.recip();
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -s / &c0;
        }
        PowerSeries { coeffs: out }
    }

    pub fn div(&self, other: &PowerSeries) -> PowerSeries {
        self.mul(&other.inverse())
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> PowerSeries {
        assert!(
            self.coeffs[0].is_zero(),
            "exp needs a series without constant term"
        );
        let n = self.len();
        let mut out = PowerSeries::one(n);
        let mut power = PowerSeries::one(n);
        for k in 1..n {
            power = power.mul(self);
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += p / factorial_q(k as u32);
            }
        }
        out
    }

    /// `f(c x)`.
    pub fn scale_argument(&self, c: &Q) -> PowerSeries {
        let mut pow = Q::one();
        let mut out = Vec::with_capacity(self.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        PowerSeries { coeffs: out }
    }

    /// Coefficients of `f(x)` viewed as a series in `y = x^2`, for even `f`.
    pub fn even_part_in_square(&self) -> Vec<Q> {
        self.coeffs.iter().step_by(2).cloned().collect()
    }

    pub fn coefficient(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + super::rational::to_f64(c))
    }

    pub fn integer(n: i64, len: usize) -> PowerSeries {
        PowerSeries::new(vec![q(n)], len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    #[test]
    fn x_over_sinh_x() {
        let s = PowerSeries::sinhc(7).inverse();
        assert_eq!(s.coeffs[0], q(1));
        assert_eq!(s.coeffs[2], qr(-1, 6));
        assert_eq!(s.coeffs[4], qr(7, 360));
        assert_eq!(s.coeffs[6], qr(-31, 15120));
    }

    #[test]
    fn tanh_over_x() {
        let t = PowerSeries::sinhc(5).div(&PowerSeries::cosh(5));
        assert_eq!(t.coeffs[2], qr(-1, 3));
        assert_eq!(t.coeffs[4], qr(2, 15));
    }

    #[test]
    fn exp_of_x() {
        let x = PowerSeries::new(vec![q(0), q(1)], 5);
        assert_eq!(x.exp().coeffs[4], qr(1, 24));
    }
}

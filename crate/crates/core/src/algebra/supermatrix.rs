//! Square matrices over [`Form`] with a Z/2 block grading.
//!
//! A supermatrix `M = Σ M_ij ⊗ E_ij` keeps forms on the left of the
//! elementary matrices. Moving a form past `E_ij` costs the sign
//! `(-1)^{|form| (p(i)+p(j))}`, which is where the parity twists below come
//! from.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::form::{same_universe, Form};
use super::rational::{factorial_q, q, Q};
use super::universe::Universe;
use crate::error::{Error, Result};

/// Total parity of a supermatrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Zero,
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    universe: Arc<Universe>,
    plus: usize,
    minus: usize,
    entries: Vec<Form>,
}

impl SuperMatrix {
    pub fn zero(u: &Arc<Universe>, plus: usize, minus: usize) -> SuperMatrix {
        let n = plus + minus;
        SuperMatrix {
            universe: u.clone(),
            plus,
            minus,
            entries: vec![Form::zero(u); n * n],
        }
    }

    pub fn identity(u: &Arc<Universe>, plus: usize, minus: usize) -> SuperMatrix {
        SuperMatrix::scalar(u, plus, minus, &Form::one(u))
    }

    /// `f · I` for an even form `f`.
    pub fn scalar(u: &Arc<Universe>, plus: usize, minus: usize, f: &Form) -> SuperMatrix {
        let mut m = SuperMatrix::zero(u, plus, minus);
        for i in 0..plus + minus {
            m.set(i, i, f.clone());
        }
        m
    }

    pub fn from_fn(
        u: &Arc<Universe>,
        plus: usize,
        minus: usize,
        mut f: impl FnMut(usize, usize) -> Form,
    ) -> SuperMatrix {
        let n = plus + minus;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SuperMatrix {
            universe: u.clone(),
            plus,
            minus,
            entries,
        }
    }

    /// Rational matrix lifted to constant forms.
    pub fn from_rationals(
        u: &Arc<Universe>,
        plus: usize,
        minus: usize,
        rows: &[Vec<Q>],
    ) -> SuperMatrix {
        SuperMatrix::from_fn(u, plus, minus, |i, j| Form::constant(u, rows[i][j].clone()))
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.plus, self.minus)
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus
    }

    /// Bundle parity of basis vector `i`.
    pub fn index_parity(&self, i: usize) -> u32 {
        u32::from(i >= self.plus)
    }

    pub fn block_parity(&self, i: usize, j: usize) -> u32 {
        (self.index_parity(i) + self.index_parity(j)) % 2
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        assert!(
            same_universe(&self.universe, f.universe()),
            "entry from a different universe"
        );
        let n = self.dim();
        self.entries[i * n + j] = f;
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    pub fn dropped(&self) -> u64 {
        self.entries.iter().map(Form::dropped).sum()
    }

    fn check(&self, other: &SuperMatrix) -> Result<()> {
        if !same_universe(&self.universe, &other.universe) {
            return Err(Error::UniverseMismatch);
        }
        if self.dims() != other.dims() {
            return Err(Error::Configuration(format!(
                "block dimensions {:?} and {:?} differ",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> SuperMatrix {
        SuperMatrix {
            universe: self.universe.clone(),
            plus: self.plus,
            minus: self.minus,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn map_indexed(&self, f: impl Fn(usize, usize, &Form) -> Form) -> SuperMatrix {
        let n = self.dim();
        SuperMatrix::from_fn(&self.universe, self.plus, self.minus, |i, j| {
            f(i, j, &self.entries[i * n + j])
        })
    }

    pub fn try_add(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check(other)?;
        let n = self.dim();
        let twisted: Vec<Form> = other.entries.iter().map(Form::parity_twist).collect();
        let mut out = SuperMatrix::zero(&self.universe, self.plus, self.minus);
        for i in 0..n {
            for j in 0..n {
                let a = &self.entries[i * n + j];
                if a.is_zero() {
                    continue;
                }
                let row = if self.block_parity(i, j) == 1 {
                    &twisted
                } else {
                    &other.entries
                };
                for l in 0..n {
                    let b = &row[j * n + l];
                    if b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    out.entries[i * n + l] += &p;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> SuperMatrix {
        self.map(|f| f.scale(c))
    }

    /// Left multiplication by a form: `ω · M`.
    pub fn left_mul_form(&self, w: &Form) -> SuperMatrix {
        self.map(|f| w * f)
    }

    /// Right multiplication by a form: `M · ω`.
    pub fn right_mul_form(&self, w: &Form) -> SuperMatrix {
        let tw = w.parity_twist();
        self.map_indexed(|i, j, f| {
            if self.block_parity(i, j) == 1 {
                f * &tw
            } else {
                f * w
            }
        })
    }

    pub fn supertrace(&self) -> Form {
        let mut acc = Form::zero(&self.universe);
        for i in 0..self.dim() {
            if self.index_parity(i) == 0 {
                acc += self.get(i, i);
            } else {
                acc -= self.get(i, i);
            }
        }
        acc
    }

    /// Total parity, combining block parity with form degree.
    pub fn parity(&self) -> Parity {
        let mut seen: Option<u32> = None;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (m, _) in self.get(i, j).terms() {
                    let p = (m.odd_count() + self.block_parity(i, j)) % 2;
                    match seen {
                        None => seen = Some(p),
                        Some(s) if s != p => return Parity::Mixed,
                        _ => {}
                    }
                }
            }
        }
        match seen {
            None => Parity::Zero,
            Some(0) => Parity::Even,
            Some(_) => Parity::Odd,
        }
    }

    fn parity_bit(&self) -> Option<u32> {
        match self.parity() {
            Parity::Zero => Some(0),
            Parity::Even => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }

    /// `[A, B] = AB - (-1)^{|A||B|} BA` for homogeneous `A`, `B`.
    pub fn supercommutator(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        let (pa, pb) = match (self.parity_bit(), other.parity_bit()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Precondition(
                    "supercommutator of mixed-parity matrices".into(),
                ))
            }
        };
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        Ok(if pa * pb == 1 { &ab + &ba } else { &ab - &ba })
    }

    /// Entrywise exterior derivative `[d, M]` for an even-parity block layout:
    /// the graded commutator of `d` with `M` acts entrywise as `d`.
    pub fn d(&self) -> SuperMatrix {
        self.map(Form::d)
    }

    pub fn degree_part(&self, k: u32) -> SuperMatrix {
        self.map(|f| f.degree_part(k))
    }

    pub fn pow(&self, n: u32) -> SuperMatrix {
        let mut acc = SuperMatrix::identity(&self.universe, self.plus, self.minus);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Upper bound on the power at which a nilpotent matrix must vanish.
    fn nilpotent_limit(&self) -> Result<u32> {
        let b = self
            .universe
            .nilpotency_bound()
            .ok_or_else(|| Error::Precondition("nilpotency bound undefined".into()))?;
        Ok(((self.dim() as u32) * (b as u32 + 1)).max(1) + 1)
    }

    /// `Σ c_k M^k` for nilpotent `M`; the series must terminate.
    pub fn nilpotent_series(&self, coeff: impl Fn(u32) -> Q) -> Result<SuperMatrix> {
        let limit = self.nilpotent_limit()?;
        let id = SuperMatrix::identity(&self.universe, self.plus, self.minus);
        let mut acc = id.scale(&coeff(0));
        let mut power = id;
        for k in 1..=limit {
            power = &power * self;
            if power.is_zero() {
                return Ok(acc);
            }
            acc = &acc + &power.scale(&coeff(k));
        }
        Err(Error::Precondition("matrix is not nilpotent".into()))
    }

    /// `exp(M)` for nilpotent `M`.
    pub fn exp_nilpotent(&self) -> Result<SuperMatrix> {
        self.nilpotent_series(|k| factorial_q(k).recip())
    }

    /// `log(I + M)` for nilpotent `M`.
    pub fn log_one_plus(&self) -> Result<SuperMatrix> {
        self.nilpotent_series(|k| {
            if k == 0 {
                Q::zero()
            } else if k % 2 == 1 {
                q(k as i64).recip()
            } else {
                -q(k as i64).recip()
            }
        })
    }

    /// `log(U)` for unipotent `U = I + N`.
    pub fn log_unipotent(&self) -> Result<SuperMatrix> {
        let id = SuperMatrix::identity(&self.universe, self.plus, self.minus);
        (self - &id).log_one_plus()
    }

    /// The degree-0 part evaluated with every coordinate set to zero, as a
    /// rational matrix. Fails if a constant term carries a symbol.
    pub fn rational_at_origin(&self) -> Result<Vec<Vec<Q>>> {
        let n = self.dim();
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).constant_term()).collect())
            .collect())
    }

    /// Applies `M` to a column of forms: `(Mψ)_i = Σ_j M_ij σ^{p(i)+p(j)}(ψ_j)`.
    pub fn apply(&self, psi: &[Form]) -> Vec<Form> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = Form::zero(&self.universe);
                for (j, p) in psi.iter().enumerate() {
                    let v = if self.block_parity(i, j) == 1 {
                        p.parity_twist()
                    } else {
                        p.clone()
                    };
                    acc += &(self.get(i, j) * &v);
                }
                acc
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.get(i, j).render()).collect();
            rows.push(format!("[{}]", row.join(", ")));
        }
        format!("({}|{}) [{}]", self.plus, self.minus, rows.join(", "))
    }

    /// `true` when every entry is a rational constant and the matrix equals
    /// a scalar multiple of the identity.
    pub fn is_identity(&self) -> bool {
        let id = SuperMatrix::identity(&self.universe, self.plus, self.minus);
        *self == id
    }

    pub fn one_entry(
        u: &Arc<Universe>,
        plus: usize,
        minus: usize,
        i: usize,
        j: usize,
        f: Form,
    ) -> SuperMatrix {
        let mut m = SuperMatrix::zero(u, plus, minus);
        m.set(i, j, f);
        m
    }

    pub fn is_scalar_one(&self) -> bool {
        self.entries.iter().enumerate().all(|(k, f)| {
            let (i, j) = (k / self.dim(), k % self.dim());
            if i == j {
                f.is_constant() && f.constant_term().is_one()
            } else {
                f.is_zero()
            }
        })
    }
}

impl Add for &SuperMatrix {
    type Output = SuperMatrix;
    fn add(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_add(rhs).expect("incompatible supermatrices")
    }
}

impl Sub for &SuperMatrix {
    type Output = SuperMatrix;
    fn sub(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_add(&-rhs).expect("incompatible supermatrices")
    }
}

impl Neg for &SuperMatrix {
    type Output = SuperMatrix;
    fn neg(self) -> SuperMatrix {
        self.map(|f| -f)
    }
}

impl Mul for &SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_mul(rhs).expect("incompatible supermatrices")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supertrace_of_diagonal() {
        let u = Universe::base(2);
        let (a, b) = (Form::var(&u, "z1"), Form::var(&u, "z2"));
        let mut m = SuperMatrix::zero(&u, 1, 1);
        m.set(0, 0, a.clone());
        m.set(1, 1, b.clone());
        assert_eq!(m.supertrace(), &a - &b);
        assert!(SuperMatrix::identity(&u, 2, 2).supertrace().is_zero());
    }

    #[test]
    fn exp_of_two_form_on_rank_one() {
        let u = Universe::base(2);
        let w = &Form::var(&u, "dz1") * &Form::var(&u, "dz2");
        let m = SuperMatrix::one_entry(&u, 1, 0, 0, 0, w.clone());
        let e = m.exp_nilpotent().unwrap();
        assert_eq!(e.get(0, 0), &(&Form::one(&u) + &w));
    }

    #[test]
    fn odd_off_diagonal_supercommutator_has_zero_supertrace() {
        let u = Universe::base(2);
        let dz1 = Form::var(&u, "dz1");
        let z2 = Form::var(&u, "z2");
        // odd total parity: even form off-diagonal, odd form diagonal
        let a = SuperMatrix::from_fn(
            &u,
            1,
            1,
            |i, j| if i == j { dz1.clone() } else { z2.clone() },
        );
        let b = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i == j {
                Form::var(&u, "dz2")
            } else {
                Form::one(&u)
            }
        });
        assert!(a.supercommutator(&b).unwrap().supertrace().is_zero());
    }
}

//! Mixed-degree forms: exact polynomials in commuting generators times
//! Grassmann monomials in the odd generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{factorial_q, log_decomposition, q, Q};
use super::universe::{EvenKind, Generator, Universe};
use crate::error::{Error, Result};

pub type Exponents = SmallVec<[i16; 12]>;

/// A canonical monomial: sorted odd generators (as a bitmask), exponents of
/// the even generators, a transcendental factor `e^exp` and a product of
/// logarithms of primes.
///
/// `{1, log p}` are linearly independent over the rationals and `e^a` for
/// distinct rational `a` are as well, so structural equality of canonical
/// forms is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub(crate) odd: u64,
    pub(crate) even: Exponents,
    pub(crate) exp: Q,
    pub(crate) logs: Vec<(BigUint, u32)>,
}

impl Monomial {
    pub fn one(u: &Universe) -> Monomial {
        Monomial {
            odd: 0,
            even: SmallVec::from_elem(0, u.even_count()),
            exp: Q::zero(),
            logs: Vec::new(),
        }
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn exponents(&self) -> &[i16] {
        &self.even
    }

    pub fn exponent(&self, i: usize) -> i16 {
        self.even[i]
    }

    /// Argument `a` of the transcendental factor `e^a`.
    pub fn exp_argument(&self) -> &Q {
        &self.exp
    }

    pub fn logs(&self) -> &[(BigUint, u32)] {
        &self.logs
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn is_transcendental(&self) -> bool {
        !self.exp.is_zero() || !self.logs.is_empty()
    }

    pub fn with_exponent(&self, i: usize, e: i16) -> Monomial {
        let mut m = self.clone();
        m.even[i] = e;
        m
    }

    pub(crate) fn render(&self, u: &Universe) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &u.even_generator(i).name;
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if !self.exp.is_zero() {
            parts.push(format!("exp({})", self.exp));
        }
        for (p, k) in &self.logs {
            if *k == 1 {
                parts.push(format!("log({p})"));
            } else {
                parts.push(format!("log({p})^{k}"));
            }
        }
        for i in 0..64 {
            if self.odd >> i & 1 == 1 {
                parts.push(u.odd_name(i).to_string());
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sign of `a ∧ b` reordered into ascending odd-index order.
pub(crate) fn wedge_sign(a: u64, b: u64) -> bool {
    // count pairs (i in a, j in b) with i > j
    let mut count = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        bb &= bb - 1;
        count += (a >> j >> 1).count_ones();
    }
    count % 2 == 1
}

enum Product {
    Vanishes,
    Dropped,
    Term(Monomial, bool),
}

fn multiply_monomials(u: &Universe, a: &Monomial, b: &Monomial) -> Product {
    if a.odd & b.odd != 0 {
        return Product::Vanishes;
    }
    let mut negate = wedge_sign(a.odd, b.odd);
    let mut even: Exponents = SmallVec::with_capacity(a.even.len());
    let mut nil_total = 0u32;
    for (i, (&x, &y)) in a.even.iter().zip(b.even.iter()).enumerate() {
        let mut e = x + y;
        if e != 0 {
            match u.even_generator(i).kind {
                EvenKind::ImaginaryUnit => {
                    if e >= 2 {
                        e -= 2;
                        negate = !negate;
                    }
                }
                EvenKind::Nilpotent { max_power, .. } => {
                    if let Some(m) = max_power {
                        if e as u32 > m {
                            return Product::Dropped;
                        }
                    }
                    nil_total += e as u32;
                }
                _ => {}
            }
        }
        even.push(e);
    }
    if let Some(k) = u.truncation() {
        if nil_total > k {
            return Product::Dropped;
        }
    }
    let exp = if a.exp.is_zero() {
        b.exp.clone()
    } else if b.exp.is_zero() {
        a.exp.clone()
    } else {
        &a.exp + &b.exp
    };
    let logs = if a.logs.is_empty() {
        b.logs.clone()
    } else if b.logs.is_empty() {
        a.logs.clone()
    } else {
        let mut merged: BTreeMap<BigUint, u32> = a.logs.iter().cloned().collect();
        for (p, k) in &b.logs {
            *merged.entry(p.clone()).or_insert(0) += k;
        }
        merged.into_iter().collect()
    };
    Product::Term(
        Monomial {
            odd: a.odd | b.odd,
            even,
            exp,
            logs,
        },
        negate,
    )
}

/// Element of the graded-commutative algebra over a [`Universe`].
#[derive(Clone, Debug)]
pub struct Form {
    universe: Arc<Universe>,
    terms: BTreeMap<Monomial, Q>,
    dropped: u64,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe) && self.terms == other.terms
    }
}

impl Eq for Form {}

pub(crate) fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Form {
    pub fn zero(u: &Arc<Universe>) -> Form {
        Form {
            universe: u.clone(),
            terms: BTreeMap::new(),
            dropped: 0,
        }
    }

    pub fn constant(u: &Arc<Universe>, c: Q) -> Form {
        let mut f = Form::zero(u);
        f.add_term(Monomial::one(u), c);
        f
    }

    pub fn one(u: &Arc<Universe>) -> Form {
        Form::constant(u, Q::one())
    }

    pub fn integer(u: &Arc<Universe>, n: i64) -> Form {
        Form::constant(u, q(n))
    }

    pub fn from_monomial(u: &Arc<Universe>, m: Monomial, c: Q) -> Form {
        let mut f = Form::zero(u);
        f.add_term(m, c);
        f
    }

    /// The named generator as a form.
    pub fn generator(u: &Arc<Universe>, name: &str) -> Result<Form> {
        match u.find(name) {
            Some(Generator::Odd(i)) => Ok(Form::odd(u, i)),
            Some(Generator::Even(i)) => Ok(Form::even_power(u, i, 1)),
            None => Err(Error::Configuration(format!("unknown generator `{name}`"))),
        }
    }

    /// Convenience for tests and builders; panics on an unknown name.
    pub fn var(u: &Arc<Universe>, name: &str) -> Form {
        Form::generator(u, name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn odd(u: &Arc<Universe>, i: usize) -> Form {
        let mut m = Monomial::one(u);
        m.odd = 1 << i;
        Form::from_monomial(u, m, Q::one())
    }

    /// `g_i^power`, honouring `i^2 = -1` and the nilpotent truncation.
    pub fn even_power(u: &Arc<Universe>, i: usize, power: i16) -> Form {
        let one = Monomial::one(u);
        match u.even_generator(i).kind {
            EvenKind::ImaginaryUnit => {
                let r = power.rem_euclid(4);
                let c = if r >= 2 { -Q::one() } else { Q::one() };
                Form::from_monomial(u, one.with_exponent(i, r % 2), c)
            }
            EvenKind::Laurent => Form::from_monomial(u, one.with_exponent(i, power), Q::one()),
            EvenKind::Nilpotent { max_power, .. } => {
                assert!(power >= 0, "negative power of a nilpotent generator");
                let p = power as u32;
                if max_power.is_some_and(|m| p > m) || u.truncation().is_some_and(|k| p > k) {
                    let mut z = Form::zero(u);
                    z.dropped = 1;
                    z
                } else {
                    Form::from_monomial(u, one.with_exponent(i, power), Q::one())
                }
            }
            _ => {
                assert!(power >= 0, "negative power of a polynomial generator");
                Form::from_monomial(u, one.with_exponent(i, power), Q::one())
            }
        }
    }

    /// The transcendental constant `e^a`.
    pub fn exp_symbol(u: &Arc<Universe>, a: Q) -> Form {
        let mut m = Monomial::one(u);
        m.exp = a;
        Form::from_monomial(u, m, Q::one())
    }

    /// `log x` of a positive rational, as a combination of `log p`.
    pub fn log_rational(u: &Arc<Universe>, x: &Q) -> Form {
        let mut f = Form::zero(u);
        for (p, e) in log_decomposition(x) {
            let mut m = Monomial::one(u);
            m.logs = vec![(p, 1)];
            f.add_term(m, q(e));
        }
        f
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Q> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of products discarded by the nilpotent truncation while this
    /// value was built.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Form) -> Result<()> {
        if same_universe(&self.universe, &other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check(other)?;
        let mut out = self.clone();
        out.dropped += other.dropped;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Graded (wedge) product.
    pub fn try_mul(&self, other: &Form) -> Result<Form> {
        self.check(other)?;
        let u = &self.universe;
        let mut out = Form::zero(u);
        out.dropped = self.dropped + other.dropped;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                match multiply_monomials(u, ma, mb) {
                    Product::Vanishes => {}
                    Product::Dropped => out.dropped += 1,
                    Product::Term(m, negate) => {
                        let c = ca * cb;
                        out.add_term(m, if negate { -c } else { c });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.try_mul(other)
    }

    pub fn scale(&self, c: &Q) -> Form {
        if c.is_zero() {
            let mut z = Form::zero(&self.universe);
            z.dropped = self.dropped;
            return z;
        }
        Form {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            dropped: self.dropped,
        }
    }

    pub fn pow(&self, n: u32) -> Form {
        let mut acc = Form::one(&self.universe);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        let mut d = m.odd.count_ones();
        for (i, &e) in m.even.iter().enumerate() {
            if e != 0 {
                d += self.universe.even_degree(i) * e as u32;
            }
        }
        d
    }

    /// Set of form degrees present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| self.degree_of(m)).collect()
    }

    pub fn degree_part(&self, k: u32) -> Form {
        self.filter(|f, m| f.degree_of(m) == k)
    }

    /// Part of strictly positive form degree.
    pub fn positive_part(&self) -> Form {
        self.filter(|f, m| f.degree_of(m) > 0)
    }

    pub fn filter(&self, keep: impl Fn(&Form, &Monomial) -> bool) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            if keep(self, m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Applies the grading involution: odd-parity terms change sign.
    pub fn parity_twist(&self) -> Form {
        Form {
            universe: self.universe.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.clone(),
                        if m.odd.count_ones() % 2 == 1 {
                            -c
                        } else {
                            c.clone()
                        },
                    )
                })
                .collect(),
            dropped: self.dropped,
        }
    }

    /// `Some(0)` / `Some(1)` for homogeneous parity, `None` when mixed or zero.
    pub fn parity(&self) -> Option<u32> {
        let mut seen = None;
        for m in self.terms.keys() {
            let p = m.odd.count_ones() % 2;
            match seen {
                None => seen = Some(p),
                Some(s) if s != p => return None,
                _ => {}
            }
        }
        seen
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let u = &self.universe;
        let mut out = Form::zero(u);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            for (i, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let EvenKind::Coordinate {
                    differential: Some(k),
                } = u.even_generator(i).kind
                else {
                    continue;
                };
                if m.odd >> k & 1 == 1 {
                    continue;
                }
                let mut nm = m.clone();
                nm.even[i] -= 1;
                nm.odd |= 1 << k;
                // move dz_k past the odd generators with smaller index
                let below = (m.odd & ((1u64 << k) - 1)).count_ones();
                let coeff = c * q(e as i64);
                out.add_term(nm, if below % 2 == 1 { -coeff } else { coeff });
            }
        }
        out
    }

    /// Partial derivative in even generator `i`.
    pub fn partial(&self, i: usize) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            let e = m.even[i];
            if e != 0 {
                let mut nm = m.clone();
                nm.even[i] -= 1;
                out.add_term(nm, c * q(e as i64));
            }
        }
        out
    }

    /// Terms whose exponent of generator `i` equals `power`, with that
    /// generator removed.
    pub fn coefficient_of(&self, i: usize, power: i16) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            if m.even[i] == power {
                out.add_term(m.with_exponent(i, 0), c.clone());
            }
        }
        out
    }

    /// Splits by the exponent of generator `i`.
    pub fn powers_of(&self, i: usize) -> BTreeMap<i16, Form> {
        let mut out: BTreeMap<i16, Form> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.even[i])
                .or_insert_with(|| Form::zero(&self.universe))
                .add_term(m.with_exponent(i, 0), c.clone());
        }
        out
    }

    /// Multiplies by `g^power` for a Laurent or coordinate generator `g`,
    /// shifting exponents without any relation handling.
    pub fn shift_power(&self, i: usize, power: i16) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            let e = m.even[i] + power;
            out.add_term(m.with_exponent(i, e), c.clone());
        }
        out
    }

    /// Substitutes the value `v` for the even generator `i` (non-negative
    /// exponents only).
    pub fn substitute(&self, i: usize, v: &Form) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        let mut powers: Vec<Form> = vec![Form::one(&self.universe)];
        for (m, c) in &self.terms {
            let e = m.even[i];
            assert!(e >= 0, "substitution into a negative power");
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * v;
                powers.push(next);
            }
            let rest = Form::from_monomial(&self.universe, m.with_exponent(i, 0), c.clone());
            out += &(&rest * &powers[e as usize]);
        }
        out
    }

    /// Sets the listed even generators to zero.
    pub fn at_zero(&self, gens: &[usize]) -> Form {
        self.filter(|_, m| gens.iter().all(|&g| m.even[g] == 0))
    }

    /// Definite integral over `[a, b]` in coordinate `i`.
    pub fn integrate(&self, i: usize, a: &Q, b: &Q) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            let e = m.even[i];
            assert!(e >= 0, "integration of a negative power");
            let n = (e + 1) as usize;
            let w = (num_traits::pow(b.clone(), n) - num_traits::pow(a.clone(), n)) / q(n as i64);
            out.add_term(m.with_exponent(i, 0), c * w);
        }
        out
    }

    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&Monomial::one(&self.universe))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        let one = Monomial::one(&self.universe);
        self.terms.keys().all(|m| *m == one)
    }

    /// Floating-point value of a form with no generators (only rationals,
    /// `e^a` and `log p`); `None` otherwise.
    pub fn numeric_value(&self) -> Option<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            if m.odd != 0 || m.even.iter().any(|&e| e != 0) {
                return None;
            }
            let mut v = super::rational::to_f64(c) * super::rational::to_f64(&m.exp).exp();
            for (p, k) in &m.logs {
                let p: f64 = num_traits::ToPrimitive::to_f64(p).unwrap_or(f64::INFINITY);
                v *= p.ln().powi(*k as i32);
            }
            acc += v;
        }
        Some(acc)
    }

    /// True when no term carries `e^a` or `log p`.
    pub fn is_algebraic(&self) -> bool {
        self.terms.keys().all(|m| !m.is_transcendental())
    }

    /// `exp(x)` for a form whose every term has positive degree or is a
    /// product with nilpotent factors, so the series terminates.
    pub fn exp_nilpotent(&self) -> Result<Form> {
        self.nilpotent_series(|k| factorial_q(k).recip())
    }

    /// `log(1 + x)` for nilpotent `x`.
    pub fn log_one_plus(&self) -> Result<Form> {
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

    /// `Σ_k c_k x^k` for nilpotent `x`.
    pub fn nilpotent_series(&self, coeff: impl Fn(u32) -> Q) -> Result<Form> {
        let bound = self.universe.nilpotency_bound().ok_or_else(|| {
            Error::Precondition("nilpotency bound undefined for this universe".into())
        })?;
        let mut acc = Form::constant(&self.universe, coeff(0));
        let mut power = Form::one(&self.universe);
        for k in 1..=(bound as u32 + 1) {
            power = &power * self;
            if power.is_zero() {
                acc.dropped += power.dropped;
                return Ok(acc);
            }
            acc += &power.scale(&coeff(k));
        }
        Err(Error::Precondition("argument is not nilpotent".into()))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Q) -> Q) -> Form {
        let mut out = Form::zero(&self.universe);
        out.dropped = self.dropped;
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Re-expresses this form in a universe that contains all generators it
    /// uses (matched by name).
    pub fn transport(&self, target: &Arc<Universe>) -> Result<Form> {
        let src = &self.universe;
        let odd_map: Vec<Option<usize>> = (0..src.odd_count())
            .map(|i| target.odd_index(src.odd_name(i)))
            .collect();
        let even_map: Vec<Option<usize>> = src
            .even_generators()
            .iter()
            .map(|g| target.even_index(&g.name))
            .collect();
        let mut out = Form::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Form::from_monomial(
                target,
                {
                    let mut t = Monomial::one(target);
                    t.exp = m.exp.clone();
                    t.logs = m.logs.clone();
                    t
                },
                c.clone(),
            );
            for (i, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = even_map[i].ok_or(Error::UniverseMismatch)?;
                if target.even_generator(j).kind != src.even_generator(i).kind
                    && !matches!(
                        (&target.even_generator(j).kind, &src.even_generator(i).kind),
                        (EvenKind::Coordinate { .. }, EvenKind::Coordinate { .. })
                    )
                {
                    return Err(Error::UniverseMismatch);
                }
                acc = &acc * &Form::even_power(target, j, e);
            }
            for (i, slot) in odd_map.iter().enumerate() {
                if m.odd >> i & 1 == 1 {
                    let j = slot.ok_or(Error::UniverseMismatch)?;
                    acc = &acc * &Form::odd(target, j);
                }
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Human-readable rendering, e.g. `-1/24*r1^2 + dz1*dz2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.render(&self.universe);
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono == "1" {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        self.check(rhs).expect("forms over different universes");
        self.dropped += rhs.dropped;
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        self.check(rhs).expect("forms over different universes");
        self.dropped += rhs.dropped;
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        self.try_mul(rhs).expect("forms over different universes")
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coefficients(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Form> for Form {
            type Output = Form;
            fn $m(self, rhs: &Form) -> Form {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

//! Seeded random forms and supermatrices for property suites.

use std::sync::Arc;

use rand::Rng;

use super::form::{Form, Monomial};
use super::rational::{qr, Q};
use super::supermatrix::SuperMatrix;
use super::universe::{EvenKind, Universe};

/// Small non-zero rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Q {
    loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            return qr(n, rng.gen_range(1i64..=3));
        }
    }
}

/// Random monomial whose odd part is drawn from `odd_mask` choices of
/// the given parity (`None` for any).
fn random_monomial<R: Rng>(
    rng: &mut R,
    u: &Universe,
    max_power: i16,
    odd_parity: Option<u32>,
) -> Monomial {
    let mut m = Monomial::one(u);
    let b = u.odd_count();
    loop {
        let mask: u64 = if b == 0 {
            0
        } else {
            rng.gen_range(0..(1u64 << b))
        };
        if odd_parity.is_none_or(|p| mask.count_ones() % 2 == p) {
            m.odd = mask;
            break;
        }
        if b == 0 {
            break;
        }
    }
    for i in 0..u.even_count() {
        let e = match u.even_generator(i).kind {
            EvenKind::Coordinate { .. } => rng.gen_range(0..=max_power),
            EvenKind::Nilpotent { .. } => rng.gen_range(0..=1),
            _ => 0,
        };
        m.even[i] = e;
    }
    m
}

/// Random form with up to `terms` terms; coordinate exponents at most
/// `max_power`.
pub fn random_form<R: Rng>(rng: &mut R, u: &Arc<Universe>, terms: usize, max_power: i16) -> Form {
    let mut f = Form::zero(u);
    for _ in 0..terms {
        let m = random_monomial(rng, u, max_power, None);
        // route through the product so truncation applies
        let t = &Form::one(u) * &Form::from_monomial(u, m, small_rational(rng));
        f += &t;
    }
    f
}

/// Random form whose terms all have the given odd parity.
pub fn random_form_of_parity<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    terms: usize,
    max_power: i16,
    parity: u32,
) -> Form {
    let mut f = Form::zero(u);
    if parity == 1 && u.odd_count() == 0 {
        return f;
    }
    for _ in 0..terms {
        let m = random_monomial(rng, u, max_power, Some(parity));
        f += &(&Form::one(u) * &Form::from_monomial(u, m, small_rational(rng)));
    }
    f
}

/// Random homogeneous form of odd-generator degree `k` (no nilpotent part).
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    k: u32,
    terms: usize,
    max_power: i16,
) -> Form {
    let b = u.odd_count();
    let masks: Vec<u64> = (0..(1u64 << b)).filter(|m| m.count_ones() == k).collect();
    let mut f = Form::zero(u);
    if masks.is_empty() {
        return f;
    }
    for _ in 0..terms {
        let mut m = random_monomial(rng, u, max_power, None);
        m.odd = masks[rng.gen_range(0..masks.len())];
        for i in 0..u.even_count() {
            if !u.is_coordinate(i) {
                m.even[i] = 0;
            }
        }
        f.add_term(m, small_rational(rng));
    }
    f
}

/// Random supermatrix of the given total parity.
pub fn random_supermatrix<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    plus: usize,
    minus: usize,
    terms: usize,
    max_power: i16,
    parity: u32,
) -> SuperMatrix {
    SuperMatrix::from_fn(u, plus, minus, |i, j| {
        let block = u32::from(i >= plus) + u32::from(j >= plus);
        let form_parity = (parity + block) % 2;
        let t = rng.gen_range(0..=terms);
        random_form_of_parity(rng, u, t, max_power, form_parity)
    })
}

/// Random supermatrix with entries of strictly positive form degree.
pub fn random_nilpotent_supermatrix<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    plus: usize,
    minus: usize,
    terms: usize,
    max_power: i16,
) -> SuperMatrix {
    SuperMatrix::from_fn(u, plus, minus, |_, _| {
        let t = rng.gen_range(0..=terms);
        random_form(rng, u, t, max_power).positive_part()
    })
}

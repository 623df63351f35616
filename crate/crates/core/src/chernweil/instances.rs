//! Superconnection instances: seeded random generation and a JSON format.
//!
//! Random instances have an operator `P = S P₀ S^{-1}` where `P₀` pairs
//! `e⁺_a` with `e⁻_a` so that `P₀² = μ_a` on both, leaves the remaining
//! basis vectors in the kernel, and `S` is a product of unipotent factors
//! inside the even and odd blocks. The spectrum of `P²` is thus rational and
//! `Ker P` varies over the base when `S` does.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::chern::PATH_PARAMETER;
use super::superconnection::{Superconnection, HALF_T};
use crate::algebra::form::Monomial;
use crate::algebra::random::small_rational;
use crate::algebra::rational::{q, qr};
use crate::algebra::{Form, SuperMatrix, Universe};
use crate::error::{Error, Result};
use crate::json::{matrix_from_json, matrix_to_json};

/// Shape of a random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceShape {
    pub base: usize,
    pub plus: usize,
    pub minus: usize,
}

impl InstanceShape {
    /// The shape used for the `i`-th member of a seeded batch: base
    /// dimension and both ranks cycle through `1..=3`.
    pub fn cycling(i: u64) -> InstanceShape {
        InstanceShape {
            base: 1 + (i % 3) as usize,
            plus: 1 + ((i / 3) % 3) as usize,
            minus: 1 + ((i / 9) % 3) as usize,
        }
    }
}

/// A superconnection with an optional second endpoint sharing its operator,
/// for path transgressions.
#[derive(Clone, Debug)]
pub struct Instance {
    pub superconnection: Superconnection,
    pub endpoint: Option<Superconnection>,
}

/// Universe for instances: base coordinates, `u = t^{1/2}` and the path
/// parameter.
pub fn instance_universe(base: usize) -> Result<Arc<Universe>> {
    Universe::builder()
        .base(base)
        .laurent(HALF_T)
        .coordinate(PATH_PARAMETER)
        .build()
}

/// Random `k`-form on the base with at most one factor `z_j`.
fn sparse_form<R: Rng>(rng: &mut R, u: &Arc<Universe>, k: u32, density: f64) -> Form {
    let b = u.base_dim();
    if k as usize > b || !rng.gen_bool(density) {
        return Form::zero(u);
    }
    let masks: Vec<u64> = (0..(1u64 << b)).filter(|m| m.count_ones() == k).collect();
    let mut m = Monomial::one(u);
    m.odd = masks[rng.gen_range(0..masks.len())];
    if rng.gen_bool(0.5) {
        let j = rng.gen_range(1..=b);
        let idx = u.even_index(&format!("z{j}")).expect("base coordinate");
        m.even[idx] = 1;
    }
    Form::from_monomial(u, m, small_rational(rng))
}

fn operator<R: Rng>(rng: &mut R, u: &Arc<Universe>, plus: usize, minus: usize) -> SuperMatrix {
    let n = plus + minus;
    let pairs = plus.min(minus);
    let mut p0 = SuperMatrix::zero(u, plus, minus);
    let mut paired = 0;
    for a in 0..pairs {
        // keep at least one pair, drop the others with probability 1/3
        if a > 0 && rng.gen_range(0..3) == 0 {
            continue;
        }
        let mu = [q(1), q(2), qr(1, 2), q(3)][rng.gen_range(0..4)].clone();
        let c = small_rational(rng);
        let c = if c < q(0) { -c } else { c };
        p0.set(plus + a, a, Form::constant(u, c.clone()));
        p0.set(a, plus + a, Form::constant(u, mu / c));
        paired += 1;
    }
    debug_assert!(paired > 0 || pairs == 0);
    let mut s = SuperMatrix::identity(u, plus, minus);
    let mut s_inv = SuperMatrix::identity(u, plus, minus);
    for _ in 0..rng.gen_range(0..=2) {
        let (lo, hi) = if rng.gen_bool(0.5) {
            (0, plus)
        } else {
            (plus, n)
        };
        if hi - lo < 2 {
            continue;
        }
        let i = rng.gen_range(lo..hi);
        let mut j = rng.gen_range(lo..hi);
        while j == i {
            j = rng.gen_range(lo..hi);
        }
        let c = if rng.gen_bool(0.5) {
            Form::constant(u, small_rational(rng))
        } else {
            let k = rng.gen_range(1..=u.base_dim());
            Form::var(u, &format!("z{k}"))
        };
        let factor = &SuperMatrix::identity(u, plus, minus)
            + &SuperMatrix::one_entry(u, plus, minus, i, j, c.clone());
        let inverse = &SuperMatrix::identity(u, plus, minus)
            - &SuperMatrix::one_entry(u, plus, minus, i, j, c);
        s = &s * &factor;
        s_inv = &inverse * &s_inv;
    }
    &(&s * &p0) * &s_inv
}

/// Block-diagonal odd-degree or off-diagonal even-degree `k`-forms.
fn component<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    plus: usize,
    minus: usize,
    k: u32,
    density: f64,
) -> SuperMatrix {
    SuperMatrix::from_fn(u, plus, minus, |i, j| {
        let off = (i >= plus) != (j >= plus);
        if off == (k % 2 == 1) {
            Form::zero(u)
        } else {
            sparse_form(rng, u, k, density)
        }
    })
}

fn random_components<R: Rng>(
    rng: &mut R,
    u: &Arc<Universe>,
    shape: InstanceShape,
    p: &SuperMatrix,
) -> Vec<SuperMatrix> {
    let mut comps = vec![p.clone()];
    for k in 1..=shape.base as u32 {
        comps.push(component(rng, u, shape.plus, shape.minus, k, 0.35));
    }
    comps
}

/// Deterministic random instance for `seed`.
pub fn random_instance(seed: u64, shape: InstanceShape) -> Result<Instance> {
    if shape.base == 0 || shape.plus + shape.minus == 0 {
        return Err(Error::Configuration(
            "instance needs a positive base dimension and rank".into(),
        ));
    }
    let u = instance_universe(shape.base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = operator(&mut rng, &u, shape.plus, shape.minus);
    let a = Superconnection::new(
        &u,
        (shape.plus, shape.minus),
        random_components(&mut rng, &u, shape, &p),
    )?;
    let b = Superconnection::new(
        &u,
        (shape.plus, shape.minus),
        random_components(&mut rng, &u, shape, &p),
    )?;
    Ok(Instance {
        superconnection: a,
        endpoint: Some(b),
    })
}

/// The seeded batch `seed, seed+1, …` with cycling shapes.
pub fn random_batch(seed: u64, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64)
        .map(|i| random_instance(seed.wrapping_add(i), InstanceShape::cycling(i)))
        .collect()
}

fn components_json(a: &Superconnection) -> Value {
    Value::Array(a.components().iter().map(matrix_to_json).collect())
}

impl Instance {
    pub fn to_json(&self) -> Value {
        let a = &self.superconnection;
        let (plus, minus) = a.dims();
        let mut v = json!({
            "base": a.base_dim(),
            "plus": plus,
            "minus": minus,
            "components": components_json(a),
        });
        if let Some(e) = &self.endpoint {
            v["endpoint"] = components_json(e);
        }
        v
    }

    /// Reads `{"base", "plus", "minus", "components": [..], "endpoint"?: [..]}`.
    pub fn from_json(v: &Value) -> Result<Instance> {
        let field = |name: &str| {
            v.get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| {
                    Error::Parse(format!("instance needs a non-negative integer `{name}`"))
                })
        };
        let (base, plus, minus) = (field("base")?, field("plus")?, field("minus")?);
        let u = instance_universe(base)?;
        let read = |key: &str| -> Result<Superconnection> {
            let arr = v
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("instance needs an array `{key}`")))?;
            let comps = arr
                .iter()
                .map(|m| matrix_from_json(&u, (plus, minus), m))
                .collect::<Result<Vec<_>>>()?;
            Superconnection::new(&u, (plus, minus), comps)
        };
        let a = read("components")?;
        let endpoint = if v.get("endpoint").is_some() {
            Some(read("endpoint")?)
        } else {
            None
        };
        if let Some(e) = &endpoint {
            if e.operator() != a.operator() {
                return Err(Error::Configuration(
                    "endpoint must share the operator P".into(),
                ));
            }
        }
        Ok(Instance {
            superconnection: a,
            endpoint,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_deterministic_and_well_formed() {
        for i in 0..9 {
            let a = random_instance(i, InstanceShape::cycling(i)).unwrap();
            let b = random_instance(i, InstanceShape::cycling(i)).unwrap();
            assert_eq!(a.superconnection, b.superconnection);
            let k = a.superconnection.kernel().unwrap();
            assert!(k.is_projection());
            let p = a.superconnection.operator();
            assert!((&k.projection * &p).is_zero());
        }
    }

    #[test]
    fn json_roundtrip() {
        let inst = random_instance(
            7,
            InstanceShape {
                base: 2,
                plus: 2,
                minus: 1,
            },
        )
        .unwrap();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.superconnection, inst.superconnection);
        assert_eq!(back.endpoint, inst.endpoint);
    }
}

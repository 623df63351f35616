use serde_json::{json, Value};

use super::space::SymbolSpace;
use crate::algebra::rational::{factorial_q, Q};
use crate::algebra::Form;
use crate::error::{Error, Result};
use crate::json::form_to_json;

/// A classical symbol `Σ_j a_j` with `a_j` homogeneous of degree `order − j`.
///
/// `cutoff` is the number of steps known; `None` means the listed steps are
/// the whole symbol (all later steps vanish).
#[derive(Clone, Debug)]
pub struct SymbolExpansion {
    space: SymbolSpace,
    order: i64,
    steps: Vec<Form>,
    cutoff: Option<usize>,
}

impl PartialEq for SymbolExpansion {
    fn eq(&self, other: &Self) -> bool {
        let mut n = self.steps.len().max(other.steps.len());
        for c in [self.cutoff, other.cutoff].into_iter().flatten() {
            n = n.min(c);
        }
        self.order == other.order && (0..n).all(|j| self.step(j) == other.step(j))
    }
}

/// All multi-indices in `n` variables of total degree `total`.
pub fn multi_indices(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in multi_indices(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn alpha_factorial(alpha: &[u32]) -> Q {
    alpha.iter().map(|&a| factorial_q(a)).product()
}

impl SymbolExpansion {
    /// Splits a finite symbol into homogeneous steps; the order is the top
    /// homogeneity (0 for the zero symbol).
    pub fn from_symbol(space: &SymbolSpace, f: &Form) -> SymbolExpansion {
        let order = space
            .homogeneous_parts(f)
            .keys()
            .next_back()
            .copied()
            .unwrap_or(0);
        SymbolExpansion::from_symbol_with_order(space, f, order)
    }

    /// Like [`from_symbol`](Self::from_symbol) with a declared order, which
    /// must be at least the top homogeneity.
    pub fn from_symbol_with_order(space: &SymbolSpace, f: &Form, order: i64) -> SymbolExpansion {
        let parts = space.homogeneous_parts(f);
        let bottom = parts.keys().next().copied().unwrap_or(order);
        assert!(
            parts.keys().all(|&h| h <= order),
            "declared order below the top homogeneity"
        );
        let len = (order - bottom + 1).max(0) as usize;
        let mut steps = vec![Form::zero(space.universe()); len];
        for (h, p) in parts {
            steps[(order - h) as usize] = p;
        }
        SymbolExpansion {
            space: space.clone(),
            order,
            steps,
            cutoff: None,
        }
    }

    pub fn from_steps(
        space: &SymbolSpace,
        order: i64,
        steps: Vec<Form>,
        cutoff: Option<usize>,
    ) -> SymbolExpansion {
        SymbolExpansion {
            space: space.clone(),
            order,
            steps,
            cutoff,
        }
    }

    pub fn identity(space: &SymbolSpace) -> SymbolExpansion {
        SymbolExpansion::from_symbol(space, &Form::one(space.universe()))
    }

    pub fn zero(space: &SymbolSpace, order: i64) -> SymbolExpansion {
        SymbolExpansion {
            space: space.clone(),
            order,
            steps: Vec::new(),
            cutoff: None,
        }
    }

    pub fn space(&self) -> &SymbolSpace {
        &self.space
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    pub fn steps(&self) -> &[Form] {
        &self.steps
    }

    /// Step `j`; zero past the stored steps. Panics past the cutoff.
    pub fn step(&self, j: usize) -> Form {
        if let Some(c) = self.cutoff {
            assert!(j < c, "step {j} beyond the cutoff {c}");
        }
        self.steps
            .get(j)
            .cloned()
            .unwrap_or_else(|| Form::zero(self.space.universe()))
    }

    pub fn is_zero(&self) -> bool {
        self.steps.iter().all(Form::is_zero)
    }

    /// Sum of the known steps.
    pub fn total(&self) -> Form {
        let mut acc = Form::zero(self.space.universe());
        for s in &self.steps {
            acc += s;
        }
        acc
    }

    /// Every step `j` is homogeneous of degree `order − j`.
    pub fn homogeneity_consistent(&self) -> bool {
        self.steps.iter().enumerate().all(|(j, s)| {
            s.terms()
                .all(|(m, _)| self.space.homogeneity(m) == self.order - j as i64)
        })
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> SymbolExpansion {
        SymbolExpansion {
            steps: self.steps.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn truncate(&self, steps: usize) -> SymbolExpansion {
        let mut out = self.clone();
        out.steps.truncate(steps);
        out.cutoff = Some(self.cutoff.map_or(steps, |c| c.min(steps)));
        out
    }

    /// Re-expresses with a larger nominal order (leading zero steps).
    pub fn with_order(&self, order: i64) -> SymbolExpansion {
        assert!(order >= self.order);
        let shift = (order - self.order) as usize;
        let mut steps = vec![Form::zero(self.space.universe()); shift];
        steps.extend(self.steps.iter().cloned());
        SymbolExpansion {
            space: self.space.clone(),
            order,
            steps,
            cutoff: self.cutoff.map(|c| c + shift),
        }
    }

    pub fn add(&self, other: &SymbolExpansion) -> SymbolExpansion {
        let order = self.order.max(other.order);
        let a = self.with_order(order);
        let b = other.with_order(order);
        let cutoff = match (a.cutoff, b.cutoff) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) | (None, x) => x,
        };
        let len = a.steps.len().max(b.steps.len());
        let len = cutoff.map_or(len, |c| len.min(c));
        let steps = (0..len)
            .map(|j| {
                let x = a
                    .steps
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| Form::zero(a.space.universe()));
                let y = b
                    .steps
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| Form::zero(a.space.universe()));
                &x + &y
            })
            .collect();
        SymbolExpansion {
            space: self.space.clone(),
            order,
            steps,
            cutoff,
        }
    }

    pub fn neg(&self) -> SymbolExpansion {
        self.map(|f| -f)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "cutoff": self.cutoff,
            "steps": self.steps.iter().map(form_to_json).collect::<Vec<_>>(),
        })
    }
}

/// One step `Σ_{|α|+k+l=j} (−i)^{|α|}/α! ∂_ξ^α a_k ∂_x^α b_l`, optionally
/// without the `(α, k, l) = (0, 0, j)` term.
pub(super) fn composition_step(
    a: &SymbolExpansion,
    b: &dyn Fn(usize) -> Form,
    j: usize,
    skip_leading: bool,
) -> Form {
    let space = &a.space;
    let mut acc = Form::zero(space.universe());
    for order_alpha in 0..=j as u32 {
        for alpha in multi_indices(space.n(), order_alpha) {
            let coeff = space
                .minus_i_power(order_alpha)
                .scale(&alpha_factorial(&alpha).recip());
            for k in 0..=(j - order_alpha as usize) {
                let l = j - order_alpha as usize - k;
                if skip_leading && order_alpha == 0 && k == 0 {
                    continue;
                }
                let mut da = a.step(k);
                if da.is_zero() {
                    continue;
                }
                let mut db = b(l);
                if db.is_zero() {
                    continue;
                }
                for (v, &e) in alpha.iter().enumerate() {
                    for _ in 0..e {
                        da = space.d_xi(&da, v);
                        db = space.d_x(&db, v);
                    }
                }
                if !da.is_zero() && !db.is_zero() {
                    acc += &(&coeff * &(&da * &db));
                }
            }
        }
    }
    acc
}

/// `(a∘b)_j = Σ_{|α|+k+l=j} (−i)^{|α|}/α! ∂_ξ^α a_k ∂_x^α b_l` for `j < steps`.
pub fn compose(a: &SymbolExpansion, b: &SymbolExpansion, steps: usize) -> Result<SymbolExpansion> {
    for s in [a, b] {
        if let Some(c) = s.cutoff {
            if steps > c {
                return Err(Error::Cutoff(format!(
                    "{steps} steps requested, operand known to {c}"
                )));
            }
        }
    }
    if !crate::algebra::form::same_universe(a.space.universe(), b.space.universe()) {
        return Err(Error::UniverseMismatch);
    }
    let space = &a.space;
    let out = crate::par::map_range(crate::par::Execution::Auto, steps, |j| {
        composition_step(a, &|l| b.step(l), j, false)
    });
    Ok(SymbolExpansion::from_steps(
        space,
        a.order + b.order,
        out,
        Some(steps),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space1() -> SymbolSpace {
        SymbolSpace::new(1, 0).unwrap()
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 2).len(), 3);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(1, 0), vec![vec![0]]);
    }

    #[test]
    fn xi_after_x() {
        let s = space1();
        let a = SymbolExpansion::from_symbol(&s, &s.xi(0));
        let b = SymbolExpansion::from_symbol(&s, &s.x(0));
        let c = compose(&a, &b, 3).unwrap();
        assert_eq!(c.order(), 1);
        assert_eq!(c.step(0), &s.x(0) * &s.xi(0));
        assert_eq!(c.step(1), s.minus_i_power(1));
        assert!(c.step(2).is_zero());
    }

    #[test]
    fn identity_is_neutral() {
        let s = SymbolSpace::new(2, 0).unwrap();
        let b = SymbolExpansion::from_symbol(&s, &s.parse("x1^2*xi2 + 3*xi1*xi2 - x2").unwrap());
        let id = SymbolExpansion::identity(&s);
        assert_eq!(compose(&id, &b, 4).unwrap(), b);
        assert_eq!(compose(&b, &id, 4).unwrap(), b);
    }

    #[test]
    fn cutoff_is_enforced() {
        let s = space1();
        let a = SymbolExpansion::from_symbol(&s, &s.xi(0)).truncate(2);
        assert!(matches!(compose(&a, &a, 3), Err(Error::Cutoff(_))));
    }
}

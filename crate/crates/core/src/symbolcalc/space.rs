use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::form::Monomial;
use crate::algebra::parse::parse_form;
use crate::algebra::rational::q;
use crate::algebra::{Form, Universe};
use crate::error::{Error, Result};

/// Generator layout for symbols on `ℝⁿ` with form coefficients on a base
/// of dimension `b`.
#[derive(Clone, Debug)]
pub struct SymbolSpace {
    universe: Arc<Universe>,
    n: usize,
    x: Vec<usize>,
    xi: Vec<usize>,
    t: usize,
    i: usize,
}

impl SymbolSpace {
    pub fn new(n: usize, base: usize) -> Result<SymbolSpace> {
        if n == 0 {
            return Err(Error::Configuration("symbol space needs n ≥ 1".into()));
        }
        let u = Universe::builder()
            .coordinates("x", n)
            .coordinates("xi", n)
            .laurent("T")
            .imaginary_unit()
            .base(base)
            .build()?;
        let find = |name: String| u.even_index(&name).expect("generator just added");
        Ok(SymbolSpace {
            x: (1..=n).map(|j| find(format!("x{j}"))).collect(),
            xi: (1..=n).map(|j| find(format!("xi{j}"))).collect(),
            t: find("T".into()),
            i: find("i".into()),
            n,
            universe: u,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_index(&self, j: usize) -> usize {
        self.x[j]
    }

    pub fn xi_index(&self, j: usize) -> usize {
        self.xi[j]
    }

    pub fn t_index(&self) -> usize {
        self.t
    }

    pub fn x(&self, j: usize) -> Form {
        Form::even_power(&self.universe, self.x[j], 1)
    }

    pub fn xi(&self, j: usize) -> Form {
        Form::even_power(&self.universe, self.xi[j], 1)
    }

    pub fn t_power(&self, p: i16) -> Form {
        Form::even_power(&self.universe, self.t, p)
    }

    pub fn imaginary(&self) -> Form {
        Form::even_power(&self.universe, self.i, 1)
    }

    /// `(−i)^k`.
    pub fn minus_i_power(&self, k: u32) -> Form {
        let sign = if k.is_multiple_of(2) { q(1) } else { q(-1) };
        Form::even_power(&self.universe, self.i, k as i16).scale(&sign)
    }

    pub fn xi_squared(&self) -> Form {
        let mut f = Form::zero(&self.universe);
        for j in 0..self.n {
            f += &(&self.xi(j) * &self.xi(j));
        }
        f
    }

    /// `λ = |ξ|² − T^{-1}`.
    pub fn lambda(&self) -> Form {
        &self.xi_squared() - &self.t_power(-1)
    }

    pub fn parse(&self, text: &str) -> Result<Form> {
        parse_form(&self.universe, text)
    }

    /// `∂_{ξ_j}` with the chain rule through `T`.
    pub fn d_xi(&self, f: &Form, j: usize) -> Form {
        let through_t = &f.partial(self.t) * &(&self.xi(j) * &self.t_power(2)).scale(&q(-2));
        &f.partial(self.xi[j]) + &through_t
    }

    pub fn d_x(&self, f: &Form, j: usize) -> Form {
        f.partial(self.x[j])
    }

    /// ξ-degree minus twice the `T`-power.
    pub fn homogeneity(&self, m: &Monomial) -> i64 {
        let xi: i64 = self.xi.iter().map(|&g| m.exponent(g) as i64).sum();
        xi - 2 * m.exponent(self.t) as i64
    }

    pub fn homogeneous_parts(&self, f: &Form) -> BTreeMap<i64, Form> {
        let mut out: BTreeMap<i64, Form> = BTreeMap::new();
        for (m, c) in f.terms() {
            out.entry(self.homogeneity(m))
                .or_insert_with(|| Form::zero(&self.universe))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Left quantization `a(x, D) u = Σ c_α(x) D^α u` with `D = −i∂_x`, for a
    /// `T`-free symbol applied to a polynomial `u`.
    pub fn apply_operator(&self, a: &Form, u: &Form) -> Result<Form> {
        let mut out = Form::zero(&self.universe);
        for (m, c) in a.terms() {
            if m.exponent(self.t) != 0 {
                return Err(Error::Unsupported(
                    "operator oracle needs T-free symbols".into(),
                ));
            }
            let mut coeff = m.clone();
            let mut deriv = u.clone();
            for j in 0..self.n {
                let k = m.exponent(self.xi[j]);
                coeff = coeff.with_exponent(self.xi[j], 0);
                for _ in 0..k {
                    deriv = &self.minus_i_power(1) * &self.d_x(&deriv, j);
                }
            }
            out += &(&Form::from_monomial(&self.universe, coeff, c.clone()) * &deriv);
        }
        Ok(out)
    }
}

//! Finite-rank superconnections `A = d + Σ_i A_[i]` over polynomial forms.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::calculus::SpectralDecomposition;
use crate::algebra::rational::{sqrt_exact, Q};
use crate::algebra::{EvenKind, Form, Parity, SuperMatrix, Universe};
use crate::error::{Error, Result};

/// Name of the Laurent generator standing for `t^{1/2}` in symbolic rescalings.
pub const HALF_T: &str = "u";

/// `A = d + A_[0] + A_[1] + …`, where `A_[i]` is a supermatrix of `i`-forms
/// of odd total parity and `A_[1]` is the connection matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Superconnection {
    universe: Arc<Universe>,
    dims: (usize, usize),
    components: Vec<SuperMatrix>,
}

/// Multiplies the form-degree-`i` part of every entry by `c(i)`.
pub fn scale_by_degree(m: &SuperMatrix, c: impl Fn(u32) -> Form) -> SuperMatrix {
    m.map(|f| {
        let mut out = Form::zero(f.universe());
        for d in f.degrees() {
            out += &(&c(d) * &f.degree_part(d));
        }
        out
    })
}

impl Superconnection {
    pub fn new(
        u: &Arc<Universe>,
        dims: (usize, usize),
        mut components: Vec<SuperMatrix>,
    ) -> Result<Superconnection> {
        if components.is_empty() {
            components.push(SuperMatrix::zero(u, dims.0, dims.1));
        }
        for (i, c) in components.iter().enumerate() {
            if c.dims() != dims || !crate::algebra::form::same_universe(c.universe(), u) {
                return Err(Error::Configuration(format!(
                    "component {i} has the wrong shape or universe"
                )));
            }
            for f in c.entries() {
                if f.degrees().iter().any(|&d| d as usize != i) {
                    return Err(Error::Configuration(format!(
                        "component {i} must contain only {i}-forms"
                    )));
                }
            }
            if !matches!(c.parity(), Parity::Odd | Parity::Zero) {
                return Err(Error::Configuration(format!(
                    "component {i} must have odd total parity"
                )));
            }
        }
        let base = u.base_dim();
        if components.len() > base + 1 {
            if components[base + 1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::Configuration(
                    "components beyond the base dimension".into(),
                ));
            }
            components.truncate(base + 1);
        }
        Ok(Superconnection {
            universe: u.clone(),
            dims,
            components,
        })
    }

    /// `A = d + P` with no connection or higher terms.
    pub fn from_operator(p: SuperMatrix) -> Result<Superconnection> {
        let u = p.universe().clone();
        let dims = p.dims();
        Superconnection::new(&u, dims, vec![p])
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn base_dim(&self) -> usize {
        self.universe.base_dim()
    }

    pub fn components(&self) -> &[SuperMatrix] {
        &self.components
    }

    /// `A_[i]`, zero when absent.
    pub fn component(&self, i: usize) -> SuperMatrix {
        self.components
            .get(i)
            .cloned()
            .unwrap_or_else(|| SuperMatrix::zero(&self.universe, self.dims.0, self.dims.1))
    }

    pub fn operator(&self) -> SuperMatrix {
        self.component(0)
    }

    /// `Σ_i A_[i]`: the superconnection minus `d`.
    pub fn matrix_part(&self) -> SuperMatrix {
        let mut acc = SuperMatrix::zero(&self.universe, self.dims.0, self.dims.1);
        for c in &self.components {
            acc = &acc + c;
        }
        acc
    }

    /// `F = A² = d(M) + M·M` for `M` the matrix part.
    pub fn curvature(&self) -> SuperMatrix {
        let m = self.matrix_part();
        &m.d() + &(&m * &m)
    }

    /// Action on a column of forms: `Aψ = dψ + Mψ`.
    pub fn apply(&self, psi: &[Form]) -> Vec<Form> {
        let m = self.matrix_part().apply(psi);
        psi.iter().zip(m).map(|(p, x)| &p.d() + &x).collect()
    }

    pub fn half_t_generator(&self) -> Result<usize> {
        let i = self.universe.even_index(HALF_T).ok_or_else(|| {
            Error::Configuration(format!(
                "symbolic rescaling needs a Laurent generator `{HALF_T}`"
            ))
        })?;
        if self.universe.even_generator(i).kind != EvenKind::Laurent {
            return Err(Error::Configuration(format!(
                "generator `{HALF_T}` must be Laurent"
            )));
        }
        Ok(i)
    }

    fn rescaled(&self, factor: impl Fn(i64) -> Form) -> Superconnection {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| c.left_mul_form(&factor(1 - i as i64)))
            .collect();
        Superconnection {
            universe: self.universe.clone(),
            dims: self.dims,
            components,
        }
    }

    /// `A_t = t^{1/2} δ_t(A)`: component `A_[i]` is multiplied by
    /// `t^{(1-i)/2}`, so the connection is unchanged and `F_t = t δ_t(F)`.
    /// `t` must be the square of a positive rational.
    pub fn rescale(&self, t: &Q) -> Result<Superconnection> {
        if *t <= Q::zero() {
            return Err(Error::Domain("rescaling parameter must be positive".into()));
        }
        let r = sqrt_exact(t).ok_or_else(|| {
            Error::Domain(
                "rescaling parameter must be a rational square; use the symbolic rescaling".into(),
            )
        })?;
        let u = self.universe.clone();
        Ok(self.rescaled(|e| Form::constant(&u, crate::algebra::rational::pow_i(&r, e))))
    }

    /// Symbolic `A_t` with `t^{1/2}` carried by the Laurent generator `u`.
    pub fn rescale_symbolic(&self) -> Result<Superconnection> {
        let g = self.half_t_generator()?;
        let u = self.universe.clone();
        Ok(self.rescaled(|e| Form::even_power(&u, g, e as i16)))
    }

    /// Projection onto `Ker P` together with the induced connection.
    pub fn kernel(&self) -> Result<KernelData> {
        let p = self.operator();
        let p2 = &p * &p;
        let dec = SpectralDecomposition::new(&p2)?;
        if dec.nodes.iter().any(|n| *n < Q::zero()) {
            return Err(Error::SpectralCut("P² has a negative eigenvalue".into()));
        }
        let projection = match dec.node_index(&Q::zero()) {
            Some(i) => dec.projections[i].clone(),
            None => SuperMatrix::zero(&self.universe, self.dims.0, self.dims.1),
        };
        Ok(KernelData::new(projection, self.component(1)))
    }
}

/// `δ_t` with `t^{1/2}` carried by generator `g`: degree-`i` parts are
/// multiplied by `u^{-i}`.
pub fn delta_symbolic(m: &SuperMatrix, g: usize) -> SuperMatrix {
    let u = m.universe().clone();
    scale_by_degree(m, |d| Form::even_power(&u, g, -(d as i16)))
}

/// `δ_t` for `t = r²`.
pub fn delta_rational(m: &SuperMatrix, r: &Q) -> SuperMatrix {
    let u = m.universe().clone();
    scale_by_degree(m, |d| {
        Form::constant(&u, crate::algebra::rational::pow_i(r, -(d as i64)))
    })
}

/// The kernel projection `Π₀` of `P²` and the induced connection
/// `∇₀ = Π₀ (d + θ) Π₀`.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub projection: SuperMatrix,
    pub connection: SuperMatrix,
}

impl KernelData {
    pub fn new(projection: SuperMatrix, connection: SuperMatrix) -> KernelData {
        KernelData {
            projection,
            connection,
        }
    }

    /// Curvature of `∇₀` on `Ker P`:
    /// `Π₀ (dθ + θ²) Π₀ + Π₀ X X Π₀` with `X = [d + θ, Π₀]`.
    pub fn curvature(&self) -> SuperMatrix {
        let pi = &self.projection;
        let th = &self.connection;
        let f = &th.d() + &(th * th);
        let x = &(&pi.d() + &(th * pi)) - &(pi * th);
        let xx = &x * &x;
        &(&(pi * &f) * pi) + &(&(pi * &xx) * pi)
    }

    /// `ch(Ker P, ∇₀) = Str(Π₀ e^{−R₀})`.
    pub fn chern_character(&self) -> Result<Form> {
        let r = self.curvature();
        let e = (-&r).exp_nilpotent()?;
        Ok((&self.projection * &e).supertrace())
    }

    pub fn is_projection(&self) -> bool {
        &self.projection * &self.projection == self.projection
    }

    pub fn is_constant(&self) -> bool {
        self.projection.entries().iter().all(|f| f.is_constant())
    }

    pub fn rank(&self) -> Q {
        self.projection.supertrace().constant_term()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;
    use num_traits::One;

    fn rank_one(theta: Form) -> Superconnection {
        let u = theta.universe().clone();
        let conn = SuperMatrix::one_entry(&u, 1, 0, 0, 0, theta);
        Superconnection::new(&u, (1, 0), vec![SuperMatrix::zero(&u, 1, 0), conn]).unwrap()
    }

    #[test]
    fn trivial_connection_is_flat() {
        let u = Universe::base(2);
        let a = Superconnection::new(&u, (1, 1), vec![]).unwrap();
        assert!(a.curvature().is_zero());
    }

    #[test]
    fn abelian_curvature() {
        let u = Universe::base(2);
        let theta = &Form::var(&u, "z2") * &Form::var(&u, "dz1");
        let a = rank_one(theta);
        let expect = &Form::var(&u, "dz2") * &Form::var(&u, "dz1");
        assert_eq!(a.curvature().get(0, 0), &expect);
    }

    #[test]
    fn curvature_matches_operator_square() {
        let u = Universe::base(2);
        let p = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i != j {
                Form::var(&u, "z1")
            } else {
                Form::zero(&u)
            }
        });
        let theta = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i == j {
                Form::var(&u, "dz2")
            } else {
                Form::zero(&u)
            }
        });
        let a = Superconnection::new(&u, (1, 1), vec![p.clone(), theta]).unwrap();
        let psi = vec![
            Form::var(&u, "z2"),
            &Form::var(&u, "z1") * &Form::var(&u, "z2"),
        ];
        let twice = a.apply(&a.apply(&psi));
        assert_eq!(twice, a.curvature().apply(&psi));
        assert_eq!(a.curvature().degree_part(0), &p * &p);
    }

    #[test]
    fn rescaling_is_coherent() {
        let u = Universe::builder().base(2).laurent(HALF_T).build().unwrap();
        let p = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i != j {
                Form::var(&u, "z1")
            } else {
                Form::zero(&u)
            }
        });
        let theta = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i == j {
                Form::var(&u, "dz2")
            } else {
                Form::zero(&u)
            }
        });
        let two = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i != j {
                &Form::var(&u, "dz1") * &Form::var(&u, "dz2")
            } else {
                Form::zero(&u)
            }
        });
        let a = Superconnection::new(&u, (1, 1), vec![p.clone(), theta.clone(), two]).unwrap();
        let t = q(4);
        let at = a.rescale(&t).unwrap();
        assert_eq!(at.component(1), theta);
        assert_eq!(
            at.curvature(),
            delta_rational(&a.curvature(), &q(2)).scale(&t)
        );
        assert_eq!(at.curvature().degree_part(0), (&p * &p).scale(&t));
        let g = a.half_t_generator().unwrap();
        let sym = a.rescale_symbolic().unwrap();
        let u2 = Form::even_power(&u, g, 2);
        assert_eq!(
            sym.curvature(),
            delta_symbolic(&a.curvature(), g).left_mul_form(&u2)
        );
        assert!(a.rescale(&q(-1)).is_err());
        assert!(a.rescale(&q(2)).is_err());
    }

    #[test]
    fn leibniz_rule_on_generators() {
        let u = Universe::base(2);
        let theta = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i == j {
                Form::var(&u, "dz1")
            } else {
                Form::zero(&u)
            }
        });
        let p = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            if i != j {
                Form::var(&u, "z2")
            } else {
                Form::zero(&u)
            }
        });
        let a = Superconnection::new(&u, (1, 1), vec![p, theta]).unwrap();
        let psi = vec![Form::var(&u, "z1"), Form::one(&u)];
        for w in [
            Form::var(&u, "z2"),
            Form::var(&u, "dz2"),
            &Form::var(&u, "z1") * &Form::var(&u, "dz1"),
        ] {
            let wpsi: Vec<Form> = psi.iter().map(|p| &w * p).collect();
            let lhs = a.apply(&wpsi);
            let sign = if w.parity() == Some(1) {
                -Q::one()
            } else {
                Q::one()
            };
            let apsi = a.apply(&psi);
            let rhs: Vec<Form> = psi
                .iter()
                .zip(&apsi)
                .map(|(p, ap)| &(&w.d() * p) + &(&w * ap).scale(&sign))
                .collect();
            assert_eq!(lhs, rhs);
        }
    }
}

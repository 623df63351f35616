//! Exact functional calculus for `M = B + N`, where `B` (the part of form
//! degree 0) has constant rational spectrum and `N` has positive degree and
//! is therefore nilpotent.
//!
//! For any function `f` analytic near the spectrum,
//!
//! ```text
//! f(M) = Σ_k Σ_{i_0..i_k} f[λ_{i_0}, …, λ_{i_k}] Π_{i_0} N Π_{i_1} N … N Π_{i_k}
//! ```
//!
//! with `f[…]` the confluent divided difference. Expanding each divided
//! difference in the jets `f^{(q)}(ν)/q!` of `f` at the distinct nodes gives
//!
//! ```text
//! f(M) = Σ_ν Σ_q f^{(q)}(ν)/q! · J_{ν,q}
//! ```
//!
//! The matrices `J_{ν,q}` depend only on `M`; [`Jets`] computes them once and
//! every function of `M` (exponentials, complex powers, logarithms,
//! resolvents) is then a finite exact sum.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::form::{Form, Monomial};
use super::linalg::rational_eigenvalues;
use super::rational::{factorial_q, Q};
use super::supermatrix::SuperMatrix;
use super::universe::{EvenKind, Universe};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

fn is_base_monomial(u: &Universe, m: &Monomial) -> bool {
    m.odd_mask() == 0
        && m.exponents().iter().enumerate().all(|(i, &e)| {
            e == 0 || !matches!(u.even_generator(i).kind, EvenKind::Nilpotent { .. })
        })
}

/// Splits `M` into its degree-0 part and its nilpotent remainder.
pub fn split_degree_zero(m: &SuperMatrix) -> (SuperMatrix, SuperMatrix) {
    let u = m.universe().clone();
    let base = m.map(|f| f.filter(|_, mono| is_base_monomial(&u, mono)));
    let nil = m - &base;
    (base, nil)
}

/// Distinct eigenvalues of the degree-0 part with their spectral projections.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub nodes: Vec<Q>,
    pub projections: Vec<SuperMatrix>,
    pub nilpotent: SuperMatrix,
}

impl SpectralDecomposition {
    pub fn new(m: &SuperMatrix) -> Result<SpectralDecomposition> {
        let (base, nilpotent) = split_degree_zero(m);
        let u = m.universe().clone();
        for f in base.entries() {
            for (mono, _) in f.terms() {
                let symbolic = mono.is_transcendental()
                    || mono
                        .exponents()
                        .iter()
                        .enumerate()
                        .any(|(i, &e)| e != 0 && !u.is_coordinate(i));
                if symbolic {
                    return Err(Error::Unsupported(
                        "degree-0 part carries symbolic constants; eigenvalues must be rational"
                            .into(),
                    ));
                }
            }
        }
        let nodes = rational_eigenvalues(&base.rational_at_origin()?)?;
        let (p, mi) = m.dims();
        let id = SuperMatrix::identity(&u, p, mi);
        let mut projections = Vec::with_capacity(nodes.len());
        for (i, li) in nodes.iter().enumerate() {
            let mut proj = id.clone();
            for (j, lj) in nodes.iter().enumerate() {
                if i != j {
                    let shifted = &base - &id.scale(lj);
                    proj = (&proj * &shifted).scale(&(li - lj).recip());
                }
            }
            projections.push(proj);
        }
        let mut total = SuperMatrix::zero(&u, p, mi);
        for (proj, l) in projections.iter().zip(&nodes) {
            if &base * proj != proj.scale(l) {
                return Err(Error::Unsupported(
                    "degree-0 part is not diagonalizable with coordinate-independent spectrum"
                        .into(),
                ));
            }
            total = &total + proj;
        }
        if total != id {
            return Err(Error::Unsupported(
                "spectral projections do not resolve the identity".into(),
            ));
        }
        Ok(SpectralDecomposition {
            nodes,
            projections,
            nilpotent,
        })
    }

    pub fn node_index(&self, x: &Q) -> Option<usize> {
        self.nodes.iter().position(|n| n == x)
    }
}

/// Taylor coefficients `h_0..h_{len-1}` at `nodes[at]` of
/// `Π_{μ ≠ ν} (x − μ)^{−count_μ}`.
fn partial_fraction_weights(nodes: &[Q], counts: &[u8], at: usize, len: usize) -> Vec<Q> {
    let nu = &nodes[at];
    let mut series = vec![Q::zero(); len];
    series[0] = Q::one();
    for (j, mu) in nodes.iter().enumerate() {
        if j == at || counts[j] == 0 {
            continue;
        }
        // 1/(x − μ) = Σ_m (−1)^m y^m / (ν − μ)^{m+1},  y = x − ν
        let inv = (nu - mu).recip();
        let mut factor = Vec::with_capacity(len);
        let mut c = inv.clone();
        for _ in 0..len {
            factor.push(c.clone());
            c = -&c * &inv;
        }
        for _ in 0..counts[j] {
            let mut next = vec![Q::zero(); len];
            for a in 0..len {
                if series[a].is_zero() {
                    continue;
                }
                for b in 0..len - a {
                    next[a + b] += &series[a] * &factor[b];
                }
            }
            series = next;
        }
    }
    series
}

/// `J_{ν,q}` for every node and jet order; see the module docs.
#[derive(Clone, Debug)]
pub struct Jets {
    universe: Arc<Universe>,
    dims: (usize, usize),
    nodes: Vec<Q>,
    mats: Vec<Vec<SuperMatrix>>,
}

struct Walker<'a> {
    dec: &'a SpectralDecomposition,
    depth_limit: usize,
    weights: HashMap<Vec<u8>, Vec<(usize, Vec<Q>)>>,
    acc: Vec<Vec<SuperMatrix>>,
}

impl Walker<'_> {
    fn record(&mut self, x: &SuperMatrix, counts: &[u8]) {
        let nodes = &self.dec.nodes;
        let entry = self.weights.entry(counts.to_vec()).or_insert_with(|| {
            let mut out = Vec::new();
            for (at, &c) in counts.iter().enumerate() {
                if c > 0 {
                    let h = partial_fraction_weights(nodes, counts, at, c as usize);
                    // weight of f^{(q)}(ν)/q! is h_{c−1−q}
                    let w: Vec<Q> = (0..c as usize)
                        .map(|q| h[c as usize - 1 - q].clone())
                        .collect();
                    out.push((at, w));
                }
            }
            out
        });
        for (at, w) in entry.iter() {
            for (q, wq) in w.iter().enumerate() {
                if !wq.is_zero() {
                    let term = x.scale(wq);
                    self.acc[*at][q] = &self.acc[*at][q] + &term;
                }
            }
        }
    }

    fn walk(&mut self, x: SuperMatrix, counts: &mut Vec<u8>, depth: usize) {
        self.record(&x, counts);
        if depth >= self.depth_limit {
            return;
        }
        let y = &x * &self.dec.nilpotent;
        if y.is_zero() {
            return;
        }
        for j in 0..self.dec.nodes.len() {
            let z = &y * &self.dec.projections[j];
            if z.is_zero() {
                continue;
            }
            counts[j] += 1;
            self.walk(z, counts, depth + 1);
            counts[j] -= 1;
        }
    }
}

impl Jets {
    pub fn new(m: &SuperMatrix) -> Result<Jets> {
        Jets::with_execution(m, Execution::Auto)
    }

    pub fn with_execution(m: &SuperMatrix, exec: Execution) -> Result<Jets> {
        let dec = SpectralDecomposition::new(m)?;
        Jets::from_decomposition(m.universe(), m.dims(), &dec, exec)
    }

    pub fn from_decomposition(
        u: &Arc<Universe>,
        dims: (usize, usize),
        dec: &SpectralDecomposition,
        exec: Execution,
    ) -> Result<Jets> {
        let limit = u
            .nilpotency_bound()
            .ok_or_else(|| Error::Precondition("nilpotent part has no finite bound".into()))?;
        let k = dec.nodes.len();
        let empty = || vec![vec![SuperMatrix::zero(u, dims.0, dims.1); limit + 1]; k];

        // Seeds: every sequence of length two; the single-node terms are
        // recorded up front.
        let mut root = Walker {
            dec,
            depth_limit: limit,
            weights: HashMap::new(),
            acc: empty(),
        };
        let mut seeds: Vec<(usize, usize)> = Vec::new();
        for i in 0..k {
            let mut counts = vec![0u8; k];
            counts[i] = 1;
            root.record(&dec.projections[i], &counts);
            for j in 0..k {
                seeds.push((i, j));
            }
        }
        let partials = if limit == 0 {
            Vec::new()
        } else {
            par::map(exec, &seeds, |&(i, j)| {
                let mut w = Walker {
                    dec,
                    depth_limit: limit,
                    weights: HashMap::new(),
                    acc: empty(),
                };
                let x = &(&dec.projections[i] * &dec.nilpotent) * &dec.projections[j];
                if !x.is_zero() {
                    let mut counts = vec![0u8; k];
                    counts[i] += 1;
                    counts[j] += 1;
                    w.walk(x, &mut counts, 1);
                }
                w.acc
            })
        };
        let mut mats = root.acc;
        for part in partials {
            for (a, row) in part.into_iter().enumerate() {
                for (q, m) in row.into_iter().enumerate() {
                    if !m.is_zero() {
                        mats[a][q] = &mats[a][q] + &m;
                    }
                }
            }
        }
        for row in mats.iter_mut() {
            while row.len() > 1 && row.last().is_some_and(SuperMatrix::is_zero) {
                row.pop();
            }
        }
        Ok(Jets {
            universe: u.clone(),
            dims,
            nodes: dec.nodes.clone(),
            mats,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn nodes(&self) -> &[Q] {
        &self.nodes
    }

    /// Jet matrices `J_{ν,0}, J_{ν,1}, …` at node index `a`.
    pub fn at(&self, a: usize) -> &[SuperMatrix] {
        &self.mats[a]
    }

    /// `Σ_ν Σ_q c(ν, q) J_{ν,q}` where `c(ν, q)` stands for `f^{(q)}(ν)/q!`.
    pub fn apply(&self, mut c: impl FnMut(&Q, usize) -> Form) -> SuperMatrix {
        let (p, m) = self.dims;
        let mut out = SuperMatrix::zero(&self.universe, p, m);
        for (nu, row) in self.nodes.iter().zip(&self.mats) {
            for (q, mat) in row.iter().enumerate() {
                if mat.is_zero() {
                    continue;
                }
                let w = c(nu, q);
                if !w.is_zero() {
                    out = &out + &mat.left_mul_form(&w);
                }
            }
        }
        out
    }

    /// `Str(J_{ν,q} · aux)` for every node and jet order.
    pub fn supertraces(&self, aux: Option<&SuperMatrix>) -> Vec<Vec<Form>> {
        self.mats
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| match aux {
                        Some(a) => (m * a).supertrace(),
                        None => m.supertrace(),
                    })
                    .collect()
            })
            .collect()
    }
}

/// `e^{M}` for `M` with diagonalizable constant degree-0 part. Entries carry
/// the transcendental symbols `e^{λ}` for the eigenvalues `λ`.
pub fn exp_split(m: &SuperMatrix) -> Result<SuperMatrix> {
    let jets = Jets::new(m)?;
    let u = m.universe().clone();
    Ok(jets.apply(|nu, q| Form::exp_symbol(&u, nu.clone()).scale(&factorial_q(q as u32).recip())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    #[test]
    fn divided_difference_weights() {
        // nodes {1, 2} once each: f[1,2] = (f(2) − f(1)) / (2 − 1)
        let nodes = vec![q(1), q(2)];
        assert_eq!(partial_fraction_weights(&nodes, &[1, 1], 0, 1), vec![q(-1)]);
        assert_eq!(partial_fraction_weights(&nodes, &[1, 1], 1, 1), vec![q(1)]);
    }

    #[test]
    fn exp_of_diagonal() {
        let u = Universe::base(1);
        let m = SuperMatrix::from_rationals(&u, 2, 0, &[vec![q(-1), q(0)], vec![q(0), q(-2)]]);
        let e = exp_split(&m).unwrap();
        assert_eq!(e.get(0, 0), &Form::exp_symbol(&u, q(-1)));
        assert_eq!(e.get(1, 1), &Form::exp_symbol(&u, q(-2)));
        assert!(e.get(0, 1).is_zero());
    }

    #[test]
    fn exp_with_nilpotent_coupling() {
        // e^{−(D+N)}, D = diag(1,2), N = ω E12: off-diagonal entry is
        // ω (e^{−2} − e^{−1}) / (2 − 1)
        let u = Universe::base(1);
        let w = Form::var(&u, "dz1");
        let mut m = SuperMatrix::from_rationals(&u, 2, 0, &[vec![q(-1), q(0)], vec![q(0), q(-2)]]);
        m.set(0, 1, -&w);
        let e = exp_split(&m).unwrap();
        let expect = &w * &(&Form::exp_symbol(&u, q(-2)) - &Form::exp_symbol(&u, q(-1)));
        assert_eq!(e.get(0, 1), &expect);
    }

    #[test]
    fn exp_split_matches_nilpotent_exp() {
        let u = Universe::base(2);
        let w = &Form::var(&u, "dz1") * &Form::var(&u, "z2");
        let m = SuperMatrix::from_fn(
            &u,
            1,
            1,
            |i, j| if i != j { w.clone() } else { Form::zero(&u) },
        );
        assert_eq!(exp_split(&m).unwrap(), m.exp_nilpotent().unwrap());
    }
}

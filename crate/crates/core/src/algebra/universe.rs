//! Generator universes: the fixed alphabet a [`Form`](super::Form) is written in.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an even (commuting) generator behaves under multiplication and `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvenKind {
    /// Polynomial coordinate; `differential` names the odd generator `d` maps it to.
    Coordinate { differential: Option<usize> },
    /// Closed nilpotent generator of the given (even) form degree.
    Nilpotent { degree: u32, max_power: Option<u32> },
    /// The unit `i` with `i^2 = -1`.
    ImaginaryUnit,
    /// Closed constant symbol allowing negative exponents, e.g. `t^(1/2)`.
    Laurent,
    /// Closed commuting constant with no relations.
    Opaque,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenGenerator {
    pub name: String,
    #[serde(flatten)]
    pub kind: EvenKind,
}

/// Position of a named generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Odd(usize),
    Even(usize),
}

/// Immutable generator alphabet plus the global truncation for nilpotent
/// generators. Shared by `Arc`; two forms may only be combined when their
/// universes are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Universe {
    odd: Vec<String>,
    even: Vec<EvenGenerator>,
    truncation: Option<u32>,
}

impl Universe {
    pub fn builder() -> UniverseBuilder {
        UniverseBuilder::default()
    }

    /// Universe of polynomial forms on `R^b`: coordinates `z1..zb` with
    /// differentials `dz1..dzb`.
    pub fn base(b: usize) -> Arc<Universe> {
        Universe::builder()
            .base(b)
            .build()
            .expect("base universe is valid")
    }

    pub fn odd_count(&self) -> usize {
        self.odd.len()
    }

    pub fn even_count(&self) -> usize {
        self.even.len()
    }

    pub fn odd_name(&self, i: usize) -> &str {
        &self.odd[i]
    }

    pub fn even_generator(&self, i: usize) -> &EvenGenerator {
        &self.even[i]
    }

    pub fn even_generators(&self) -> &[EvenGenerator] {
        &self.even
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn find(&self, name: &str) -> Option<Generator> {
        if let Some(i) = self.odd.iter().position(|n| n == name) {
            return Some(Generator::Odd(i));
        }
        self.even
            .iter()
            .position(|g| g.name == name)
            .map(Generator::Even)
    }

    pub fn even_index(&self, name: &str) -> Option<usize> {
        match self.find(name) {
            Some(Generator::Even(i)) => Some(i),
            _ => None,
        }
    }

    pub fn odd_index(&self, name: &str) -> Option<usize> {
        match self.find(name) {
            Some(Generator::Odd(i)) => Some(i),
            _ => None,
        }
    }

    pub fn imaginary_unit(&self) -> Option<usize> {
        self.even
            .iter()
            .position(|g| g.kind == EvenKind::ImaginaryUnit)
    }

    /// Number of coordinates carrying a differential (the base dimension).
    pub fn base_dim(&self) -> usize {
        self.even
            .iter()
            .filter(|g| {
                matches!(
                    g.kind,
                    EvenKind::Coordinate {
                        differential: Some(_)
                    }
                )
            })
            .count()
    }

    pub fn is_coordinate(&self, i: usize) -> bool {
        matches!(self.even[i].kind, EvenKind::Coordinate { .. })
    }

    /// Form degree contributed by one power of even generator `i`.
    pub fn even_degree(&self, i: usize) -> u32 {
        match self.even[i].kind {
            EvenKind::Nilpotent { degree, .. } => degree,
            _ => 0,
        }
    }

    /// Upper bound on the number of positive-degree factors a non-zero
    /// product can have; `None` when some nilpotent generator is unbounded.
    pub fn nilpotency_bound(&self) -> Option<usize> {
        let mut sum_max: Option<u64> = Some(0);
        let mut any = false;
        for g in &self.even {
            if let EvenKind::Nilpotent { max_power, .. } = g.kind {
                any = true;
                sum_max = match (sum_max, max_power) {
                    (Some(s), Some(m)) => Some(s + m as u64),
                    _ => None,
                };
            }
        }
        let nil = if !any {
            Some(0)
        } else {
            match (self.truncation, sum_max) {
                (Some(k), Some(s)) => Some(s.min(k as u64)),
                (Some(k), None) => Some(k as u64),
                (None, s) => s,
            }
        };
        nil.map(|n| self.odd.len() + n as usize)
    }

    /// Largest form degree any term can have.
    pub fn max_form_degree(&self) -> Option<u32> {
        let mut nil_deg = 0u32;
        let mut budget = self.truncation;
        let mut gens: Vec<(u32, Option<u32>)> = self
            .even
            .iter()
            .filter_map(|g| match g.kind {
                EvenKind::Nilpotent { degree, max_power } => Some((degree, max_power)),
                _ => None,
            })
            .collect();
        gens.sort_by_key(|g| std::cmp::Reverse(g.0));
        for (degree, max_power) in gens {
            let take = match (budget, max_power) {
                (Some(k), Some(m)) => k.min(m),
                (Some(k), None) => k,
                (None, Some(m)) => m,
                (None, None) => return None,
            };
            nil_deg += take * degree;
            budget = budget.map(|k| k - take);
        }
        Some(self.odd.len() as u32 + nil_deg)
    }
}

#[derive(Default, Clone, Debug)]
pub struct UniverseBuilder {
    odd: Vec<String>,
    even: Vec<EvenGenerator>,
    truncation: Option<u32>,
}

impl UniverseBuilder {
    /// Adds coordinates `z1..zb` and their differentials `dz1..dzb`.
    pub fn base(mut self, b: usize) -> Self {
        for k in 1..=b {
            let odd_idx = self.odd.len();
            self.odd.push(format!("dz{k}"));
            self.even.push(EvenGenerator {
                name: format!("z{k}"),
                kind: EvenKind::Coordinate {
                    differential: Some(odd_idx),
                },
            });
        }
        self
    }

    pub fn odd(mut self, name: &str) -> Self {
        self.odd.push(name.to_string());
        self
    }

    pub fn coordinate(mut self, name: &str) -> Self {
        self.even.push(EvenGenerator {
            name: name.to_string(),
            kind: EvenKind::Coordinate { differential: None },
        });
        self
    }

    /// Adds `prefix1..prefixN` as coordinates without differentials.
    pub fn coordinates(mut self, prefix: &str, n: usize) -> Self {
        for k in 1..=n {
            self = self.coordinate(&format!("{prefix}{k}"));
        }
        self
    }

    pub fn nilpotent(mut self, name: &str, degree: u32, max_power: Option<u32>) -> Self {
        self.even.push(EvenGenerator {
            name: name.to_string(),
            kind: EvenKind::Nilpotent { degree, max_power },
        });
        self
    }

    pub fn imaginary_unit(mut self) -> Self {
        self.even.push(EvenGenerator {
            name: "i".into(),
            kind: EvenKind::ImaginaryUnit,
        });
        self
    }

    pub fn laurent(mut self, name: &str) -> Self {
        self.even.push(EvenGenerator {
            name: name.to_string(),
            kind: EvenKind::Laurent,
        });
        self
    }

    pub fn opaque(mut self, name: &str) -> Self {
        self.even.push(EvenGenerator {
            name: name.to_string(),
            kind: EvenKind::Opaque,
        });
        self
    }

    pub fn truncation(mut self, k: u32) -> Self {
        self.truncation = Some(k);
        self
    }

    pub fn build(self) -> Result<Arc<Universe>> {
        if self.odd.len() > 64 {
            return Err(Error::Configuration("at most 64 odd generators".into()));
        }
        let mut seen = HashSet::new();
        for name in self.odd.iter().chain(self.even.iter().map(|g| &g.name)) {
            let reserved = name.is_empty()
                || name.starts_with("exp")
                || name.starts_with("log")
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if reserved {
                return Err(Error::Configuration(format!(
                    "invalid generator name `{name}`"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Configuration(format!(
                    "duplicate generator `{name}`"
                )));
            }
        }
        let units = self
            .even
            .iter()
            .filter(|g| g.kind == EvenKind::ImaginaryUnit)
            .count();
        if units > 1 {
            return Err(Error::Configuration("more than one imaginary unit".into()));
        }
        for g in &self.even {
            match g.kind {
                EvenKind::Nilpotent { degree, .. } if degree == 0 || degree % 2 == 1 => {
                    return Err(Error::Configuration(format!(
                        "nilpotent generator `{}` must have positive even degree",
                        g.name
                    )));
                }
                EvenKind::Coordinate {
                    differential: Some(k),
                } if k >= self.odd.len() => {
                    return Err(Error::Configuration(format!(
                        "coordinate `{}` points at a missing differential",
                        g.name
                    )));
                }
                _ => {}
            }
        }
        Ok(Arc::new(Universe {
            odd: self.odd,
            even: self.even,
            truncation: self.truncation,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_universe_layout() {
        let u = Universe::base(3);
        assert_eq!(u.odd_count(), 3);
        assert_eq!(u.base_dim(), 3);
        assert_eq!(u.find("z2"), Some(Generator::Even(1)));
        assert_eq!(u.find("dz3"), Some(Generator::Odd(2)));
        assert_eq!(u.nilpotency_bound(), Some(3));
    }

    #[test]
    fn truncation_caps_nilpotent_weight() {
        let u = Universe::builder()
            .nilpotent("r1", 2, None)
            .nilpotent("r2", 2, None)
            .truncation(3)
            .build()
            .unwrap();
        assert_eq!(u.nilpotency_bound(), Some(3));
        assert_eq!(u.max_form_degree(), Some(6));
    }

    #[test]
    fn rejects_duplicates_and_odd_degree() {
        assert!(Universe::builder()
            .coordinate("x")
            .coordinate("x")
            .build()
            .is_err());
        assert!(Universe::builder().nilpotent("r", 1, None).build().is_err());
    }
}

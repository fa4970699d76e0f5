use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::BarError;
use crate::fp::{is_prime, Fp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenKind {
    Exterior,
    Truncated { height: u32 },
    Polynomial,
}

impl GenKind {
    /// Largest allowed exponent, `None` when unbounded.
    pub fn max_exponent(self) -> Option<u32> {
        match self {
            GenKind::Exterior => Some(1),
            GenKind::Truncated { height } => Some(height - 1),
            GenKind::Polynomial => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(flatten)]
    pub kind: GenKind,
    pub degree: u32,
    #[serde(default)]
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, kind: GenKind, degree: u32, weight: u32) -> Self {
        Generator {
            name: name.into(),
            kind,
            degree,
            weight,
        }
    }
}

/// A graded commutative `F_p`-algebra presented as a tensor product of
/// exterior, truncated polynomial, and polynomial algebras on one generator
/// each.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub p: u32,
    pub generators: Vec<Generator>,
}

impl AlgebraPresentation {
    /// Checks the prime, truncation heights, and the sign rules: at odd `p`
    /// an exterior generator must have odd degree and truncated or
    /// polynomial generators must have even degree.
    pub fn new(p: u32, generators: Vec<Generator>) -> Result<Self, BarError> {
        let a = Self::new_unchecked_parity(p, generators)?;
        if let Some(g) = a.parity_violations().next() {
            return Err(BarError::InvalidPresentation(format!(
                "generator {} of kind {:?} has degree {} which the sign rules forbid at p = {}",
                g.name, g.kind, g.degree, p
            )));
        }
        Ok(a)
    }

    /// Like [`AlgebraPresentation::new`] but without the parity rules.
    pub fn new_unchecked_parity(p: u32, generators: Vec<Generator>) -> Result<Self, BarError> {
        if !is_prime(p) {
            return Err(BarError::InvalidPresentation(format!("{p} is not prime")));
        }
        for g in &generators {
            if let GenKind::Truncated { height } = g.kind {
                if height < 2 {
                    return Err(BarError::InvalidPresentation(format!(
                        "generator {} has truncation height {height} < 2",
                        g.name
                    )));
                }
            }
        }
        Ok(AlgebraPresentation { p, generators })
    }

    pub fn single(p: u32, name: &str, kind: GenKind, degree: u32, weight: u32) -> Result<Self, BarError> {
        Self::new(p, vec![Generator::new(name, kind, degree, weight)])
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("checked at construction")
    }

    pub(crate) fn parity_violations(&self) -> impl Iterator<Item = &Generator> {
        let odd_p = self.p != 2;
        self.generators.iter().filter(move |g| {
            odd_p
                && match g.kind {
                    GenKind::Exterior => g.degree % 2 == 0,
                    _ => g.degree % 2 == 1,
                }
        })
    }

    /// Every monomial lives in a finite-dimensional (degree, weight) piece
    /// exactly when no generator has degree and weight both zero.
    pub fn is_locally_finite(&self) -> bool {
        self.generators.iter().all(|g| g.degree > 0 || g.weight > 0)
    }

    pub fn uses_weight(&self) -> bool {
        self.generators.iter().any(|g| g.weight > 0)
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "F_{}", self.p);
        }
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| match g.kind {
                GenKind::Exterior => format!("Λ({})", g.name),
                GenKind::Truncated { height } => format!("F_{}[{}]/{}^{}", self.p, g.name, g.name, height),
                GenKind::Polynomial => format!("F_{}[{}]", self.p, g.name),
            })
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

/// (homological degree, internal degree, weight).
pub type Tridegree = (u32, u32, u32);

/// Finitely supported table of dimensions indexed by
/// (homological degree, internal degree, weight). Zero entries are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedDims {
    entries: BTreeMap<Tridegree, u64>,
}

impl BigradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    /// The ground field, a single class in degree zero.
    pub fn unit() -> Self {
        let mut d = Self::new();
        d.add((0, 0, 0), 1);
        d
    }

    pub fn add(&mut self, key: Tridegree, dim: u64) {
        if dim > 0 {
            *self.entries.entry(key).or_insert(0) += dim;
        }
    }

    pub fn get(&self, key: Tridegree) -> u64 {
        self.entries.get(&key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Tridegree, u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps the entries satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(Tridegree) -> bool) -> BigradedDims {
        BigradedDims {
            entries: self
                .entries
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// Dimensions summed by total degree `hom + internal`, for degrees
    /// `0..=max_total`.
    pub fn total_series(&self, max_total: u32) -> Vec<u64> {
        let mut out = vec![0u64; max_total as usize + 1];
        for (&(h, i, _), &v) in &self.entries {
            let t = h + i;
            if t <= max_total {
                out[t as usize] += v;
            }
        }
        out
    }

    /// Tensor product of graded vector spaces, keeping only total degrees up
    /// to `max_total`.
    pub fn convolve(&self, other: &BigradedDims, max_total: u32) -> BigradedDims {
        let mut out = BigradedDims::new();
        for (&(h1, i1, w1), &a) in &self.entries {
            for (&(h2, i2, w2), &b) in &other.entries {
                if h1 + i1 + h2 + i2 <= max_total {
                    out.add((h1 + h2, i1 + i2, w1 + w2), a * b);
                }
            }
        }
        out
    }
}

impl FromIterator<(Tridegree, u64)> for BigradedDims {
    fn from_iter<T: IntoIterator<Item = (Tridegree, u64)>>(iter: T) -> Self {
        let mut d = BigradedDims::new();
        for (k, v) in iter {
            d.add(k, v);
        }
        d
    }
}

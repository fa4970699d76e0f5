//! Iterated Tor of a presented algebra, computed generator by generator.
//!
//! Each stage is again a tensor product of one-generator algebras, so
//! `Tor` of a stage follows from three rules applied to every generator
//! `x` of degree `d` and weight `w`:
//!
//! * polynomial: an exterior generator `εx` in bidegree `(1, d)`;
//! * exterior (odd `d`, or any `d` at `p = 2`): truncated generators
//!   `ρ^k x` of height `p` in bidegree `p^k (1, d)`;
//! * truncated of height `m`: an exterior generator `εx` in `(1, d)`
//!   and truncated generators `φ^l x` of height `p` in `p^l (2, m d)`.
//!
//! A generator of bidegree `(s, i)` has degree `s + i` in the next stage.
//! Weights scale like degrees. Generators above the degree or weight
//! bound are dropped: every descendant of a generator has at least its
//! degree and weight, so nothing below the bound is lost.

use serde::{Deserialize, Serialize};

use super::complex::{bar_homology, BarBounds};
use super::presentation::{AlgebraPresentation, BigradedDims, GenKind, Generator, Tridegree};
use super::BarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorBounds {
    /// Largest total degree kept.
    pub max_total: u32,
    pub max_weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageGenerator {
    pub name: String,
    #[serde(flatten)]
    pub kind: GenKind,
    /// Homological degree of the class in the previous stage's Tor.
    pub hom: u32,
    /// Internal degree of the class in the previous stage's Tor.
    pub internal: u32,
    pub weight: u32,
}

impl StageGenerator {
    pub fn degree(&self) -> u32 {
        self.hom + self.internal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedTor {
    pub p: u32,
    pub bounds: TorBounds,
    /// `stages[0]` is the input; `stages[k]` generates `Tor` iterated `k` times.
    pub stages: Vec<Vec<StageGenerator>>,
    /// Additive basis of each stage by (hom, internal, weight).
    pub dims: Vec<BigradedDims>,
    pub notes: Vec<String>,
}

impl IteratedTor {
    /// Stage `k` as an algebra graded by total degree.
    pub fn presentation(&self, k: usize) -> AlgebraPresentation {
        let gens = self.stages[k]
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.kind, g.degree(), g.weight))
            .collect();
        AlgebraPresentation {
            p: self.p,
            generators: gens,
        }
    }

    /// Dimensions of stage `k` by total degree.
    pub fn total_series(&self, k: usize) -> Vec<u64> {
        self.dims[k].total_series(self.bounds.max_total)
    }
}

/// `Tor` iterated `n` times, starting from `algebra`.
pub fn iterated_tor(algebra: &AlgebraPresentation, n: usize, bounds: TorBounds) -> Result<IteratedTor, BarError> {
    if !algebra.is_locally_finite() {
        return Err(BarError::NotLocallyFinite);
    }
    let p = algebra.p;
    let mut notes = Vec::new();
    let mut stage0 = Vec::new();
    for g in &algebra.generators {
        let mut kind = g.kind;
        if p != 2 {
            match g.kind {
                GenKind::Exterior if g.degree % 2 == 0 => {
                    notes.push(format!(
                        "{} is exterior of even degree {} at p = {p}; treated as truncated of height 2",
                        g.name, g.degree
                    ));
                    kind = GenKind::Truncated { height: 2 };
                }
                GenKind::Truncated { .. } | GenKind::Polynomial if g.degree % 2 == 1 => {
                    return Err(BarError::InvalidPresentation(format!(
                        "{} has odd degree {} at p = {p} and cannot be strictly commutative",
                        g.name, g.degree
                    )));
                }
                _ => {}
            }
        }
        if g.degree <= bounds.max_total && g.weight <= bounds.max_weight {
            stage0.push(StageGenerator {
                name: g.name.clone(),
                kind,
                hom: 0,
                internal: g.degree,
                weight: g.weight,
            });
        }
    }

    let mut stages = vec![stage0];
    for _ in 0..n {
        let next = next_stage(p, stages.last().expect("nonempty"), bounds);
        stages.push(next);
    }
    let dims = stages.iter().map(|s| stage_dims(s, bounds)).collect();
    Ok(IteratedTor {
        p,
        bounds,
        stages,
        dims,
        notes,
    })
}

fn next_stage(p: u32, stage: &[StageGenerator], bounds: TorBounds) -> Vec<StageGenerator> {
    let mut out = Vec::new();
    let mut push = |name: String, kind, hom: u64, internal: u64, weight: u64| {
        if hom + internal <= bounds.max_total as u64 && weight <= bounds.max_weight as u64 {
            out.push(StageGenerator {
                name,
                kind,
                hom: hom as u32,
                internal: internal as u32,
                weight: weight as u32,
            });
            true
        } else {
            false
        }
    };
    for g in stage {
        let (d, w) = (g.degree() as u64, g.weight as u64);
        let truncated_p = GenKind::Truncated { height: p };
        match g.kind {
            GenKind::Polynomial => {
                push(format!("ε{}", g.name), GenKind::Exterior, 1, d, w);
            }
            GenKind::Exterior => {
                let mut q = 1u64;
                let mut k = 0;
                while push(format!("ρ^{k}{}", g.name), truncated_p, q, q * d, q * w) {
                    q *= p as u64;
                    k += 1;
                }
            }
            GenKind::Truncated { height } => {
                push(format!("ε{}", g.name), GenKind::Exterior, 1, d, w);
                let m = height as u64;
                let mut q = 1u64;
                let mut l = 0;
                while push(format!("φ^{l}{}", g.name), truncated_p, 2 * q, q * m * d, q * m * w) {
                    q *= p as u64;
                    l += 1;
                }
            }
        }
    }
    out
}

/// Additive basis of a tensor product of one-generator algebras.
fn stage_dims(stage: &[StageGenerator], bounds: TorBounds) -> BigradedDims {
    let mut acc = BigradedDims::unit();
    for g in stage {
        let cap = g.kind.max_exponent().unwrap_or(u32::MAX);
        let mut single = BigradedDims::new();
        let mut e = 0u32;
        while e <= cap {
            let key: Tridegree = (e * g.hom, e * g.internal, e * g.weight);
            if key.0 + key.1 > bounds.max_total || key.2 > bounds.max_weight {
                break;
            }
            single.add(key, 1);
            e += 1;
        }
        acc = acc
            .convolve(&single, bounds.max_total)
            .restrict(|k| k.2 <= bounds.max_weight);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarCheck {
    pub stage: usize,
    pub compared: usize,
    /// `(tridegree, bar homology, next stage)` where they differ.
    pub mismatches: Vec<(Tridegree, u64, u64)>,
}

impl BarCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the bar homology of stage `k` with stage `k + 1` in
/// simplicial degrees up to `max_s`.
pub fn iterated_tor_bar_check(tor: &IteratedTor, k: usize, max_s: u32) -> Result<BarCheck, BarError> {
    if k + 1 >= tor.stages.len() {
        return Err(BarError::Unsupported(format!(
            "stage {k} has no successor among {} stages",
            tor.stages.len()
        )));
    }
    let n = tor.bounds.max_total;
    let bounds = BarBounds::new(max_s, n, tor.bounds.max_weight);
    let in_range = |(s, i, w): Tridegree| s <= max_s && s + i <= n && w <= tor.bounds.max_weight;
    let bar = bar_homology(&tor.presentation(k), bounds)?.restrict(in_range);
    let model = tor.dims[k + 1].restrict(in_range);
    let keys: std::collections::BTreeSet<Tridegree> = bar.iter().chain(model.iter()).map(|(k, _)| k).collect();
    let mismatches = keys
        .iter()
        .filter(|&&key| bar.get(key) != model.get(key))
        .map(|&key| (key, bar.get(key), model.get(key)))
        .collect();
    Ok(BarCheck {
        stage: k,
        compared: keys.len(),
        mismatches,
    })
}

//! Explicit comparison maps between bar complexes of one-generator algebras
//! and their small models.
//!
//! | algebra            | model                  | classes                     |
//! |--------------------|------------------------|-----------------------------|
//! | `F_p[x]`           | `Λ(εx)`                | `εx` in (1, d)              |
//! | `F_p[x]/x^m`       | `Λ(εx) ⊗ Γ(γ)`         | `εx` in (1, d), `γ_i` in (2i, imd) |
//! | `Λ(x)`             | `Γ(γ)`                 | `γ_n` in (n, nd)            |
//!
//! The projection `π` and inclusion `inc` are
//!
//! * `π[x] = εx` and `inc(εx) = [x]` in the polynomial case;
//! * `π[x^{a_1}|...|x^{a_{2i}}] = γ_i` when `a_1 + a_2 = a_3 + a_4 = ... = m`,
//!   `π[x|x^{a_2}|...] = εγ_i` when `a_2 + a_3 = ... = m`, and
//!   `inc(γ_i) = [x^{m-1}|x]^i`, `inc(εγ_i) = [x|(x^{m-1}|x)^i]`;
//! * `π[x|...|x] = γ_n` and `inc(γ_n) = [x]^n` in the exterior case.
//!
//! All other basis tensors go to zero.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::complex::{BarBounds, BarComplex, BarTensor, BlockKey};
use super::presentation::{AlgebraPresentation, BigradedDims, GenKind, Tridegree};
use super::shuffle::BarChain;
use super::BarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum QuasiIsoCase {
    Polynomial,
    Truncated { m: u32 },
    Exterior,
}

impl fmt::Display for QuasiIsoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiIsoCase::Polynomial => write!(f, "F_p[x]"),
            QuasiIsoCase::Truncated { m } => write!(f, "F_p[x]/x^{m}"),
            QuasiIsoCase::Exterior => write!(f, "Λ(x)"),
        }
    }
}

/// `ε^e γ_i`; in the polynomial case only `γ_0` and `εγ_0` occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelElement {
    pub epsilon: bool,
    pub gamma: u32,
}

impl fmt::Display for ModelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.epsilon, self.gamma) {
            (false, 0) => write!(f, "1"),
            (true, 0) => write!(f, "εx"),
            (false, i) => write!(f, "γ_{i}"),
            (true, i) => write!(f, "εx·γ_{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmallModel {
    pub case: QuasiIsoCase,
    pub algebra: Arc<AlgebraPresentation>,
}

impl SmallModel {
    pub fn new(case: QuasiIsoCase, p: u32, x_degree: u32) -> Result<Self, BarError> {
        let kind = match case {
            QuasiIsoCase::Polynomial => GenKind::Polynomial,
            QuasiIsoCase::Truncated { m } => GenKind::Truncated { height: m },
            QuasiIsoCase::Exterior => GenKind::Exterior,
        };
        // weight stands in for degree when |x| = 0
        let weight = u32::from(x_degree == 0);
        let algebra = AlgebraPresentation::single(p, "x", kind, x_degree, weight)?;
        Ok(SmallModel {
            case,
            algebra: Arc::new(algebra),
        })
    }

    fn d(&self) -> u32 {
        self.algebra.generators[0].degree
    }

    /// (simplicial degree, internal degree, weight).
    pub fn tridegree(&self, e: ModelElement) -> Tridegree {
        let (d, w) = (self.d(), self.algebra.generators[0].weight);
        let eps = u32::from(e.epsilon);
        match self.case {
            QuasiIsoCase::Polynomial => (eps, eps * d, eps * w),
            QuasiIsoCase::Truncated { m } => (eps + 2 * e.gamma, (eps + e.gamma * m) * d, (eps + e.gamma * m) * w),
            QuasiIsoCase::Exterior => (e.gamma, e.gamma * d, e.gamma * w),
        }
    }

    /// (simplicial degree, internal degree).
    pub fn bidegree(&self, e: ModelElement) -> (u32, u32) {
        let (s, d, _) = self.tridegree(e);
        (s, d)
    }

    /// Model basis within the bounds.
    pub fn basis(&self, bounds: BarBounds) -> Vec<ModelElement> {
        let eps_options: &[bool] = match self.case {
            QuasiIsoCase::Exterior => &[false],
            _ => &[false, true],
        };
        let max_gamma = match self.case {
            QuasiIsoCase::Polynomial => 0,
            _ => bounds.max_s,
        };
        let mut out = Vec::new();
        for &epsilon in eps_options {
            for gamma in 0..=max_gamma {
                let e = ModelElement { epsilon, gamma };
                let (s, deg, w) = self.tridegree(e);
                if s <= bounds.max_s && deg <= bounds.max_degree && w <= bounds.max_weight {
                    out.push(e);
                }
            }
        }
        out.sort();
        out
    }

    pub fn dims(&self, bounds: BarBounds) -> BigradedDims {
        self.basis(bounds).into_iter().map(|e| (self.tridegree(e), 1)).collect()
    }

    /// Product in the model as `coeff · element`, `None` when zero.
    pub fn product(&self, u: ModelElement, v: ModelElement) -> Option<(ModelElement, u32)> {
        if u.epsilon && v.epsilon {
            return None;
        }
        let field = self.algebra.field();
        let c = field.binomial(u.gamma as u64 + v.gamma as u64, u.gamma as u64);
        if c == 0 {
            return None;
        }
        let w = ModelElement {
            epsilon: u.epsilon || v.epsilon,
            gamma: u.gamma + v.gamma,
        };
        if self.case == QuasiIsoCase::Polynomial && w.gamma > 0 {
            return None;
        }
        Some((w, c))
    }

    /// The projection on one basis tensor.
    pub fn pi(&self, t: &[Vec<u32>]) -> Option<ModelElement> {
        let a: Vec<u32> = t.iter().map(|m| m[0]).collect();
        match self.case {
            QuasiIsoCase::Polynomial => match a.as_slice() {
                [] => Some(ModelElement {
                    epsilon: false,
                    gamma: 0,
                }),
                [1] => Some(ModelElement {
                    epsilon: true,
                    gamma: 0,
                }),
                _ => None,
            },
            QuasiIsoCase::Exterior => a.iter().all(|&e| e == 1).then_some(ModelElement {
                epsilon: false,
                gamma: a.len() as u32,
            }),
            QuasiIsoCase::Truncated { m } => {
                let (epsilon, rest) = if a.len() % 2 == 1 {
                    if a[0] != 1 {
                        return None;
                    }
                    (true, &a[1..])
                } else {
                    (false, &a[..])
                };
                rest.chunks(2).all(|c| c[0] + c[1] == m).then_some(ModelElement {
                    epsilon,
                    gamma: rest.len() as u32 / 2,
                })
            }
        }
    }

    /// The projection on a chain, as model coefficients.
    pub fn pi_chain(&self, c: &BarChain) -> Vec<(ModelElement, u32)> {
        let field = self.algebra.field();
        let mut acc: std::collections::BTreeMap<ModelElement, u32> = Default::default();
        for (t, coeff) in c.terms() {
            if let Some(e) = self.pi(t) {
                let v = acc.entry(e).or_insert(0);
                *v = field.add(*v, coeff);
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    pub fn inc_tensor(&self, e: ModelElement) -> BarTensor {
        let mut out: Vec<u32> = Vec::new();
        match self.case {
            QuasiIsoCase::Polynomial | QuasiIsoCase::Exterior => {
                if e.epsilon {
                    out.push(1);
                }
                out.extend(std::iter::repeat_n(1, e.gamma as usize));
            }
            QuasiIsoCase::Truncated { m } => {
                if e.epsilon {
                    out.push(1);
                }
                for _ in 0..e.gamma {
                    out.extend([m - 1, 1]);
                }
            }
        }
        out.into_iter().map(|a| vec![a]).collect()
    }

    pub fn inc(&self, e: ModelElement) -> BarChain {
        BarChain::from_tensor(self.algebra.clone(), self.inc_tensor(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: usize,
    /// The first counterexample, when one was found.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoReport {
    #[serde(flatten)]
    pub case: QuasiIsoCase,
    pub p: u32,
    pub x_degree: u32,
    pub bounds: BarBounds,
    pub checks: Vec<CheckOutcome>,
}

impl QuasiIsoReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub(super) struct Checker {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Checker {
    pub(super) fn new(name: &'static str) -> Self {
        Checker {
            name,
            checked: 0,
            witness: None,
        }
    }

    pub(super) fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub(super) fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            passed: self.witness.is_none(),
            checked: self.checked,
            witness: self.witness,
        }
    }
}

/// Verifies within `bounds` that
///
/// 1. `π ∘ d = 0` on every basis tensor of simplicial degree `<= max_s + 1`,
/// 2. `inc` of every model basis element is a cycle,
/// 3. `π ∘ inc = id`,
/// 4. bar homology and the model have the same dimensions,
/// 5. `π(inc(u) · inc(v)) = u v` for the shuffle product,
/// 6. `π(a · b) = π(a) π(b)` for all basis tensors `a`, `b`.
///
/// Together 1 to 4 say both maps are quasi-isomorphisms in the range.
/// 5 and 6 say `π` is multiplicative and `inc` is multiplicative on homology.
pub fn verify_quasi_iso(
    case: QuasiIsoCase,
    x_degree: u32,
    p: u32,
    bounds: BarBounds,
) -> Result<QuasiIsoReport, BarError> {
    let model = SmallModel::new(case, p, x_degree)?;
    let complex = BarComplex::new(&model.algebra, bounds)?;

    let mut chain_map = Checker::new("projection kills boundaries");
    for (key, block) in complex.blocks() {
        if key.0 == 0 {
            continue;
        }
        for t in &block.basis {
            let tensor = complex.tensor_from_indices(t);
            let image = model.pi_chain(&BarChain::from_tensor(model.algebra.clone(), tensor.clone()).differential());
            chain_map.record(image.is_empty(), || format!("π(d{}) = {image:?}", show(&tensor)));
        }
    }

    let basis = model.basis(bounds);
    let mut cycles = Checker::new("inclusion lands in cycles");
    let mut retraction = Checker::new("projection after inclusion is the identity");
    for &e in &basis {
        let c = model.inc(e);
        let dc = c.differential();
        cycles.record(dc.is_zero(), || format!("d(inc({e})) = {dc}"));
        let back = model.pi_chain(&c);
        retraction.record(back == [(e, 1)], || format!("π(inc({e})) = {back:?}"));
    }

    let mut dims = Checker::new("homology dimensions match the model");
    let bar = complex.homology()?;
    let expected = model.dims(bounds);
    let keys: std::collections::BTreeSet<_> = bar.iter().chain(expected.iter()).map(|(k, _)| k).collect();
    for k in keys {
        let (got, want) = (bar.get(k), expected.get(k));
        dims.record(got == want, || format!("at {k:?}: bar {got}, model {want}"));
    }

    let mut products = Checker::new("shuffle product matches the model product");
    for &u in &basis {
        for &v in &basis {
            let (su, du, wu) = model.tridegree(u);
            let (sv, dv, wv) = model.tridegree(v);
            if su + sv > bounds.max_s || du + dv > bounds.max_degree || wu + wv > bounds.max_weight {
                continue;
            }
            let prod = model.inc(u).shuffle(&model.inc(v))?;
            let got = model.pi_chain(&prod);
            let want: Vec<(ModelElement, u32)> = model.product(u, v).into_iter().collect();
            products.record(got == want, || {
                format!("π(inc({u})·inc({v})) = {got:?}, expected {want:?}")
            });
        }
    }

    let mut pi_products = Checker::new("projection is multiplicative");
    let low: Vec<(BlockKey, BarTensor)> = complex
        .blocks()
        .filter(|(k, _)| k.0 >= 1)
        .flat_map(|(k, b)| b.basis.iter().map(move |t| (k, t.clone())))
        .map(|(k, t)| (k, complex.tensor_from_indices(&t)))
        .collect();
    for ((sa, da, wa), a) in &low {
        for ((sb, db, wb), b) in &low {
            if sa + sb > bounds.max_s || da + db > bounds.max_degree || wa + wb > bounds.max_weight {
                continue;
            }
            let (ea, eb) = (model.pi(a), model.pi(b));
            let prod = BarChain::from_tensor(model.algebra.clone(), a.clone())
                .shuffle(&BarChain::from_tensor(model.algebra.clone(), b.clone()))?;
            let got = model.pi_chain(&prod);
            let want: Vec<(ModelElement, u32)> = match (ea, eb) {
                (Some(u), Some(v)) => model.product(u, v).into_iter().collect(),
                _ => Vec::new(),
            };
            pi_products.record(got == want, || {
                format!("π({}·{}) = {got:?}, expected {want:?}", show(a), show(b))
            });
        }
    }

    Ok(QuasiIsoReport {
        case,
        p,
        x_degree,
        bounds,
        checks: vec![
            chain_map.finish(),
            cycles.finish(),
            retraction.finish(),
            dims.finish(),
            products.finish(),
            pi_products.finish(),
        ],
    })
}

fn show(t: &[Vec<u32>]) -> String {
    let slots: Vec<String> = t.iter().map(|m| format!("x^{}", m[0])).collect();
    format!("[{}]", slots.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusion_of_second_divided_power() {
        let model = SmallModel::new(QuasiIsoCase::Truncated { m: 3 }, 3, 2).unwrap();
        let g2 = ModelElement {
            epsilon: false,
            gamma: 2,
        };
        assert_eq!(model.inc(g2).to_string(), "[x^2|x|x^2|x]");
        let eg1 = ModelElement {
            epsilon: true,
            gamma: 1,
        };
        assert_eq!(model.inc(eg1).to_string(), "[x|x^2|x]");
        assert_eq!(model.bidegree(g2), (4, 12));
        assert_eq!(model.bidegree(eg1), (3, 8));
    }

    #[test]
    fn projection_patterns() {
        let model = SmallModel::new(QuasiIsoCase::Truncated { m: 4 }, 2, 2).unwrap();
        let t = |a: &[u32]| a.iter().map(|&e| vec![e]).collect::<Vec<_>>();
        assert_eq!(
            model.pi(&t(&[1, 3, 2, 2])),
            Some(ModelElement {
                epsilon: false,
                gamma: 2
            })
        );
        assert_eq!(
            model.pi(&t(&[1, 1, 3])),
            Some(ModelElement {
                epsilon: true,
                gamma: 1
            })
        );
        assert_eq!(model.pi(&t(&[2, 1, 3])), None);
        assert_eq!(model.pi(&t(&[1, 2])), None);
    }

    #[test]
    fn divided_power_products() {
        let model = SmallModel::new(QuasiIsoCase::Exterior, 3, 1).unwrap();
        let g = |i| ModelElement {
            epsilon: false,
            gamma: i,
        };
        assert_eq!(model.product(g(1), g(1)), Some((g(2), 2)));
        // C(3,1) = 3 = 0 mod 3
        assert_eq!(model.product(g(1), g(2)), None);
    }

    #[test]
    fn all_cases_verify() {
        let cases = [
            (QuasiIsoCase::Polynomial, 2, 3, BarBounds::new(4, 16, 0)),
            (QuasiIsoCase::Polynomial, 1, 2, BarBounds::new(4, 8, 0)),
            (QuasiIsoCase::Truncated { m: 3 }, 2, 3, BarBounds::new(5, 16, 0)),
            (QuasiIsoCase::Truncated { m: 2 }, 2, 3, BarBounds::new(5, 12, 0)),
            (QuasiIsoCase::Truncated { m: 4 }, 1, 2, BarBounds::new(5, 12, 0)),
            (QuasiIsoCase::Truncated { m: 9 }, 2, 3, BarBounds::new(3, 20, 0)),
            (QuasiIsoCase::Exterior, 1, 3, BarBounds::new(6, 6, 0)),
            (QuasiIsoCase::Exterior, 3, 5, BarBounds::new(6, 18, 0)),
            (QuasiIsoCase::Exterior, 2, 2, BarBounds::new(6, 12, 0)),
            (QuasiIsoCase::Polynomial, 0, 3, BarBounds::new(4, 0, 6)),
            (QuasiIsoCase::Truncated { m: 3 }, 0, 3, BarBounds::new(5, 0, 9)),
            (QuasiIsoCase::Truncated { m: 2 }, 0, 2, BarBounds::new(5, 0, 8)),
            (QuasiIsoCase::Exterior, 0, 2, BarBounds::new(5, 0, 5)),
        ];
        for (case, d, p, bounds) in cases {
            let r = verify_quasi_iso(case, d, p, bounds).unwrap();
            assert!(r.passed(), "{case} |x| = {d} p = {p}: {:?}", r.checks);
            assert!(r.checks.iter().all(|c| c.checked > 0), "{case}: {:?}", r.checks);
        }
    }

    #[test]
    fn polynomial_model_does_not_fit_truncation() {
        // the truncated algebra has the extra class γ_1 = [x^2|x]
        let model = SmallModel::new(QuasiIsoCase::Truncated { m: 3 }, 3, 2).unwrap();
        let c = BarComplex::new(&model.algebra, BarBounds::new(3, 12, 0)).unwrap();
        let poly = SmallModel::new(QuasiIsoCase::Polynomial, 3, 2).unwrap();
        assert_ne!(c.homology().unwrap(), poly.dims(BarBounds::new(3, 12, 0)));
    }
}

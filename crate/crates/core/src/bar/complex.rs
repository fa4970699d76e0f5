//! The reduced two-sided bar complex `B(k, A, k)`.
//!
//! An `s`-simplex is a tensor `[a_1 | ... | a_s]` of monomials from the
//! augmentation ideal. Slot `i` carries the shifted degree `|a_i| + 1`, and
//!
//! ```text
//! d[a_1|...|a_s] = Σ_{i=1}^{s-1} (-1)^{e_i} [a_1|...|a_i a_{i+1}|...|a_s],
//! e_i = Σ_{j<=i} (|a_j| + 1).
//! ```
//!
//! The outer faces apply the augmentation to a positive-degree factor and
//! so vanish on the reduced complex.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::presentation::{AlgebraPresentation, BigradedDims, GenKind};
use super::BarError;
use crate::fp::{homology_dim, Fp, FpError, SparseFpMatrix};

/// Exponent vector, one entry per generator of the presentation.
pub type Monomial = Vec<u32>;

/// A reduced bar tensor `[a_1 | ... | a_s]`.
pub type BarTensor = Vec<Monomial>;

impl AlgebraPresentation {
    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    pub fn monomial_weight(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.generators).map(|(e, g)| e * g.weight).sum()
    }

    pub fn unit_monomial(&self) -> Monomial {
        vec![0; self.generators.len()]
    }

    pub fn generator_monomial(&self, index: usize, exponent: u32) -> Monomial {
        let mut m = self.unit_monomial();
        m[index] = exponent;
        m
    }

    /// Product of two monomials as `±` a monomial, or `None` when it
    /// vanishes. The sign comes from reordering odd-degree generators.
    pub fn monomial_mul(&self, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.len());
        for ((x, y), g) in a.iter().zip(b).zip(&self.generators) {
            let e = x + y;
            if g.kind.max_exponent().is_some_and(|cap| e > cap) {
                return None;
            }
            out.push(e);
        }
        let mut negative = false;
        if self.p != 2 {
            // moving b's factor j leftwards past a's factor i for every i > j
            let mut odd_a_after = 0u32;
            for j in (0..a.len()).rev() {
                let odd = self.generators[j].degree % 2 == 1;
                if odd && b[j] % 2 == 1 && odd_a_after % 2 == 1 {
                    negative = !negative;
                }
                if odd {
                    odd_a_after += a[j];
                }
            }
        }
        Some((out, negative))
    }

    /// Shifted degree of a bar tensor, `Σ (|a_i| + 1)`.
    pub fn tensor_degree(&self, t: &[Monomial]) -> u32 {
        t.iter().map(|m| self.monomial_degree(m) + 1).sum()
    }

    /// `d` of a single tensor as a list of `(tensor, ±1)` terms.
    pub fn bar_differential(&self, t: &[Monomial]) -> Vec<(BarTensor, i64)> {
        let mut out = Vec::new();
        let mut shifted = 0u32;
        for i in 0..t.len().saturating_sub(1) {
            shifted += self.monomial_degree(&t[i]) + 1;
            if let Some((prod, neg)) = self.monomial_mul(&t[i], &t[i + 1]) {
                let mut face = Vec::with_capacity(t.len() - 1);
                face.extend_from_slice(&t[..i]);
                face.push(prod);
                face.extend_from_slice(&t[i + 2..]);
                let sign = if (shifted % 2 == 1) ^ neg { -1 } else { 1 };
                out.push((face, sign));
            }
        }
        out
    }

    /// All nonconstant monomials of degree `<= max_degree` and weight
    /// `<= max_weight`, in lexicographic order of exponent vectors.
    pub fn ideal_monomials(&self, max_degree: u32, max_weight: u32) -> Result<Vec<Monomial>, BarError> {
        if !self.is_locally_finite() {
            return Err(BarError::NotLocallyFinite);
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.generators.len());
        self.monomials_rec(0, max_degree, max_weight, &mut cur, &mut out);
        out.retain(|m| m.iter().any(|&e| e > 0));
        Ok(out)
    }

    fn monomials_rec(&self, i: usize, deg: u32, wt: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            out.push(cur.clone());
            return;
        }
        let g = &self.generators[i];
        let cap = g.kind.max_exponent().unwrap_or(u32::MAX);
        let mut e = 0u32;
        while e <= cap && e * g.degree <= deg && e * g.weight <= wt {
            cur.push(e);
            self.monomials_rec(i + 1, deg - e * g.degree, wt - e * g.weight, cur, out);
            cur.pop();
            e += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BarBounds {
    pub max_s: u32,
    pub max_degree: u32,
    pub max_weight: u32,
}

impl BarBounds {
    pub fn new(max_s: u32, max_degree: u32, max_weight: u32) -> Self {
        BarBounds {
            max_s,
            max_degree,
            max_weight,
        }
    }
}

/// (simplicial degree, internal degree, weight).
pub type BlockKey = (u32, u32, u32);

#[derive(Clone, Debug)]
pub struct BarBlock {
    /// Tensors as lists of indices into [`BarComplex::monomials`], sorted.
    pub basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl BarBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, t: &[u32]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// The bar complex cut off at simplicial degree `max_s + 1`, internal
/// degree `max_degree` and weight `max_weight`, with all differentials
/// built and `d ∘ d = 0` verified.
#[derive(Clone, Debug)]
pub struct BarComplex {
    algebra: AlgebraPresentation,
    bounds: BarBounds,
    monomials: Vec<Monomial>,
    monomial_index: HashMap<Monomial, u32>,
    blocks: BTreeMap<BlockKey, BarBlock>,
    /// `d_s` out of block `(s, deg, wt)` for `s >= 1`.
    differentials: BTreeMap<BlockKey, SparseFpMatrix>,
}

impl BarComplex {
    pub fn new(algebra: &AlgebraPresentation, bounds: BarBounds) -> Result<Self, BarError> {
        if let Some(g) = algebra.parity_violations().next() {
            return Err(BarError::InvalidPresentation(format!(
                "generator {} has degree {} which the sign rules forbid at p = {}",
                g.name, g.degree, algebra.p
            )));
        }
        let monomials = algebra.ideal_monomials(bounds.max_degree, bounds.max_weight)?;
        let monomial_index: HashMap<Monomial, u32> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mono_grade: Vec<(u32, u32)> = monomials
            .iter()
            .map(|m| (algebra.monomial_degree(m), algebra.monomial_weight(m)))
            .collect();

        let mut blocks: BTreeMap<BlockKey, Vec<Vec<u32>>> = BTreeMap::new();
        blocks.insert((0, 0, 0), vec![Vec::new()]);
        let mut level: Vec<(Vec<u32>, u32, u32)> = vec![(Vec::new(), 0, 0)];
        for s in 1..=bounds.max_s + 1 {
            let mut next = Vec::new();
            for (t, deg, wt) in &level {
                for (i, &(md, mw)) in mono_grade.iter().enumerate() {
                    let (nd, nw) = (deg + md, wt + mw);
                    if nd <= bounds.max_degree && nw <= bounds.max_weight {
                        let mut nt = t.clone();
                        nt.push(i as u32);
                        next.push((nt, nd, nw));
                    }
                }
            }
            for (t, deg, wt) in &next {
                blocks.entry((s, *deg, *wt)).or_default().push(t.clone());
            }
            level = next;
        }
        let blocks: BTreeMap<BlockKey, BarBlock> = blocks
            .into_iter()
            .map(|(k, mut basis)| {
                basis.sort();
                let index = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
                (k, BarBlock { basis, index })
            })
            .collect();

        let mut complex = BarComplex {
            algebra: algebra.clone(),
            bounds,
            monomials,
            monomial_index,
            blocks,
            differentials: BTreeMap::new(),
        };
        let keys: Vec<BlockKey> = complex.blocks.keys().copied().filter(|k| k.0 >= 1).collect();
        let built: Vec<(BlockKey, SparseFpMatrix)> = keys
            .par_iter()
            .map(|&k| complex.build_differential(k).map(|m| (k, m)))
            .collect::<Result<_, _>>()?;
        complex.differentials = built.into_iter().collect();

        for (&(s, deg, wt), d) in &complex.differentials {
            if s >= 2 {
                let lower = complex.differential((s - 1, deg, wt));
                let comp = lower.mul(d)?;
                let first = comp.entries().next().map(|(row, col, _)| (row, col));
                if let Some((row, col)) = first {
                    return Err(BarError::Fp(FpError::CompositionNonzero { row, col }));
                }
            }
        }
        Ok(complex)
    }

    fn build_differential(&self, key: BlockKey) -> Result<SparseFpMatrix, BarError> {
        let (s, deg, wt) = key;
        let source = &self.blocks[&key];
        let target_key = (s - 1, deg, wt);
        let target = self.blocks.get(&target_key);
        let rows = target.map_or(0, |b| b.dim());
        let mut triplets = Vec::new();
        for (col, t) in source.basis.iter().enumerate() {
            let tensor = self.tensor_from_indices(t);
            for (face, sign) in self.algebra.bar_differential(&tensor) {
                let idx = self.indices_of(&face).expect("faces stay within bounds");
                let row = target
                    .and_then(|b| b.position(&idx))
                    .expect("face lies in the target block");
                triplets.push((row, col, sign));
            }
        }
        Ok(SparseFpMatrix::from_triplets(
            self.algebra.field(),
            rows,
            source.dim(),
            triplets,
        )?)
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn bounds(&self) -> BarBounds {
        self.bounds
    }

    pub fn field(&self) -> Fp {
        self.algebra.field()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn blocks(&self) -> impl Iterator<Item = (BlockKey, &BarBlock)> {
        self.blocks.iter().map(|(&k, b)| (k, b))
    }

    pub fn block(&self, key: BlockKey) -> Option<&BarBlock> {
        self.blocks.get(&key)
    }

    pub fn tensor_from_indices(&self, t: &[u32]) -> BarTensor {
        t.iter().map(|&i| self.monomials[i as usize].clone()).collect()
    }

    pub fn indices_of(&self, t: &[Monomial]) -> Option<Vec<u32>> {
        t.iter().map(|m| self.monomial_index.get(m).copied()).collect()
    }

    /// Block containing the tensor, if it is within bounds.
    pub fn locate(&self, t: &[Monomial]) -> Option<(BlockKey, usize)> {
        let idx = self.indices_of(t)?;
        let deg = t.iter().map(|m| self.algebra.monomial_degree(m)).sum();
        let wt = t.iter().map(|m| self.algebra.monomial_weight(m)).sum();
        let key = (t.len() as u32, deg, wt);
        let pos = self.blocks.get(&key)?.position(&idx)?;
        Some((key, pos))
    }

    /// `d_s` out of the given block; the zero map when the block is empty or
    /// `s = 0`.
    pub fn differential(&self, key: BlockKey) -> SparseFpMatrix {
        if let Some(d) = self.differentials.get(&key) {
            return d.clone();
        }
        let cols = self.blocks.get(&key).map_or(0, |b| b.dim());
        let rows = if key.0 == 0 {
            0
        } else {
            self.blocks.get(&(key.0 - 1, key.1, key.2)).map_or(0, |b| b.dim())
        };
        SparseFpMatrix::zero(self.field(), rows, cols)
    }

    /// Homology dimensions for `s <= max_s`.
    pub fn homology(&self) -> Result<BigradedDims, BarError> {
        let keys: Vec<BlockKey> = self
            .blocks
            .keys()
            .copied()
            .filter(|k| k.0 <= self.bounds.max_s)
            .collect();
        let dims: Vec<(BlockKey, usize)> = keys
            .par_iter()
            .map(|&(s, deg, wt)| {
                let d_out = self.differential((s, deg, wt));
                let d_in = self.differential((s + 1, deg, wt));
                homology_dim(&d_in, &d_out).map(|h| ((s, deg, wt), h))
            })
            .collect::<Result<_, _>>()?;
        Ok(dims.into_iter().map(|(k, h)| (k, h as u64)).collect())
    }
}

pub fn bar_complex(algebra: &AlgebraPresentation, bounds: BarBounds) -> Result<BarComplex, BarError> {
    BarComplex::new(algebra, bounds)
}

/// `Tor^A(F_p, F_p)` within bounds, keyed by (s, internal degree, weight).
pub fn bar_homology(algebra: &AlgebraPresentation, bounds: BarBounds) -> Result<BigradedDims, BarError> {
    BarComplex::new(algebra, bounds)?.homology()
}

/// Convenience constructor for a one-generator truncated algebra.
pub fn truncated(p: u32, height: u32, degree: u32, weight: u32) -> Result<AlgebraPresentation, BarError> {
    AlgebraPresentation::single(p, "x", GenKind::Truncated { height }, degree, weight)
}

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{BarComplex, BarTensor, Monomial};
use super::presentation::AlgebraPresentation;
use super::quasi_iso::{CheckOutcome, Checker};
use super::BarError;

/// A finite `F_p`-linear combination of bar tensors over one presentation.
///
/// Chains multiply by the shuffle product, with Koszul signs taken from
/// the shifted slot degrees `|a_i| + 1`.
#[derive(Clone, Debug)]
pub struct BarChain {
    algebra: Arc<AlgebraPresentation>,
    terms: BTreeMap<BarTensor, u32>,
}

impl PartialEq for BarChain {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl Eq for BarChain {}

impl BarChain {
    pub fn zero(algebra: Arc<AlgebraPresentation>) -> Self {
        BarChain {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    /// The empty tensor `[ ]`, the unit for the shuffle product.
    pub fn unit(algebra: Arc<AlgebraPresentation>) -> Self {
        Self::from_tensor(algebra, Vec::new())
    }

    pub fn from_tensor(algebra: Arc<AlgebraPresentation>, tensor: BarTensor) -> Self {
        let mut c = Self::zero(algebra);
        c.add_term(tensor, 1);
        c
    }

    /// Shorthand for `[x_i^{e_1} | x_i^{e_2} | ...]` in a presentation with
    /// one generator.
    pub fn from_exponents(algebra: Arc<AlgebraPresentation>, exponents: &[u32]) -> Self {
        let t = exponents.iter().map(|&e| vec![e]).collect();
        Self::from_tensor(algebra, t)
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BarTensor, u32)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coefficient(&self, t: &[Monomial]) -> u32 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · tensor`. Tensors containing a unit monomial are
    /// degenerate in the reduced complex and are ignored.
    pub fn add_term(&mut self, tensor: BarTensor, coeff: i64) {
        if tensor.iter().any(|m| m.iter().all(|&e| e == 0)) {
            return;
        }
        let field = self.algebra.field();
        let c = field.reduce(coeff);
        if c == 0 {
            return;
        }
        match self.terms.entry(tensor) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = field.add(*o.get(), c);
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    fn check(&self, other: &Self) -> Result<(), BarError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(BarError::PresentationMismatch)
        }
    }

    pub fn scale(&self, c: i64) -> BarChain {
        let mut out = BarChain::zero(self.algebra.clone());
        for (t, &v) in &self.terms {
            out.add_term(t.clone(), c * v as i64);
        }
        out
    }

    pub fn try_add(&self, other: &BarChain) -> Result<BarChain, BarError> {
        self.check(other)?;
        let mut out = self.clone();
        for (t, &v) in &other.terms {
            out.add_term(t.clone(), v as i64);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &BarChain) -> Result<BarChain, BarError> {
        self.try_add(&other.scale(-1))
    }

    /// Total shifted degree, if every term has the same one.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|t| self.algebra.tensor_degree(t));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Simplicial degree, if every term has the same one.
    pub fn simplicial_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    pub fn differential(&self) -> BarChain {
        let mut out = BarChain::zero(self.algebra.clone());
        for (t, &v) in &self.terms {
            for (face, sign) in self.algebra.bar_differential(t) {
                out.add_term(face, sign * v as i64);
            }
        }
        out
    }

    /// The shuffle product.
    pub fn shuffle(&self, other: &BarChain) -> Result<BarChain, BarError> {
        self.check(other)?;
        let mut out = BarChain::zero(self.algebra.clone());
        let mut buf = Vec::new();
        for (a, &ca) in &self.terms {
            let da: Vec<u32> = a.iter().map(|m| self.algebra.monomial_degree(m) + 1).collect();
            for (b, &cb) in &other.terms {
                let db: Vec<u32> = b.iter().map(|m| self.algebra.monomial_degree(m) + 1).collect();
                let coeff = ca as i64 * cb as i64;
                shuffles(a, &da, b, &db, &mut buf, false, &mut |t, neg| {
                    out.add_term(t, if neg { -coeff } else { coeff });
                });
            }
        }
        Ok(out)
    }
}

/// Calls `emit` on every interleaving of `a` and `b` with its Koszul sign.
fn shuffles(
    a: &[Monomial],
    da: &[u32],
    b: &[Monomial],
    db: &[u32],
    buf: &mut Vec<Monomial>,
    neg: bool,
    emit: &mut impl FnMut(BarTensor, bool),
) {
    if a.is_empty() || b.is_empty() {
        let mut t = buf.clone();
        t.extend_from_slice(a);
        t.extend_from_slice(b);
        emit(t, neg);
        return;
    }
    buf.push(a[0].clone());
    shuffles(&a[1..], &da[1..], b, db, buf, neg, emit);
    buf.pop();
    // b[0] moves past every remaining slot of a
    let rest: u32 = da.iter().sum();
    let flip = (rest % 2 == 1) && (db[0] % 2 == 1);
    buf.push(b[0].clone());
    shuffles(a, da, &b[1..], &db[1..], buf, neg ^ flip, emit);
    buf.pop();
}

/// Checks the Leibniz rule `d(ab) = d(a)b + (-1)^{|a|} a d(b)` and graded
/// commutativity `ab = (-1)^{|a||b|} ba` on `samples` pairs of basis
/// tensors of `complex`, drawn with a seeded generator. `|a|` is the
/// shifted total degree.
pub fn check_shuffle_laws(complex: &BarComplex, samples: usize, seed: u64) -> Result<Vec<CheckOutcome>, BarError> {
    let alg = Arc::new(complex.algebra().clone());
    let pool: Vec<BarTensor> = complex
        .blocks()
        .flat_map(|(_, b)| b.basis.iter())
        .map(|t| complex.tensor_from_indices(t))
        .collect();
    let mut leibniz = Checker::new("Leibniz rule for the shuffle product");
    let mut commutative = Checker::new("graded commutativity of the shuffle product");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let ta = &pool[rng.gen_range(0..pool.len())];
        let tb = &pool[rng.gen_range(0..pool.len())];
        let (deg_a, deg_b) = (alg.tensor_degree(ta), alg.tensor_degree(tb));
        let a = BarChain::from_tensor(alg.clone(), ta.clone());
        let b = BarChain::from_tensor(alg.clone(), tb.clone());
        let ab = a.shuffle(&b)?;

        let sign = if deg_a % 2 == 1 { -1 } else { 1 };
        let rhs = a
            .differential()
            .shuffle(&b)?
            .try_add(&a.shuffle(&b.differential())?.scale(sign))?;
        let lhs = ab.differential();
        leibniz.record(lhs == rhs, || {
            format!("a = {a}, b = {b}: d(ab) = {lhs}, expected {rhs}")
        });

        let ba = b.shuffle(&a)?.scale(if deg_a * deg_b % 2 == 1 { -1 } else { 1 });
        commutative.record(ab == ba, || format!("a = {a}, b = {b}: ab = {ab}, ±ba = {ba}"));
    }
    Ok(vec![leibniz.finish(), commutative.finish()])
}

impl fmt::Display for BarChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<&str> = self.algebra.generators.iter().map(|g| g.name.as_str()).collect();
        let mut first = true;
        for (t, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}")?;
            }
            let slots: Vec<String> = t.iter().map(|m| monomial_name(m, &names)).collect();
            write!(f, "[{}]", slots.join("|"))?;
        }
        Ok(())
    }
}

fn monomial_name(m: &[u32], names: &[&str]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    parts.join("")
}

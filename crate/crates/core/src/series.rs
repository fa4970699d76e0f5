//! Truncated Poincaré series of word-family algebras and the higher
//! Hochschild homology of polynomial, truncated, Laurent and group rings.
//!
//! Every answer is a tensor product of one-generator algebras, so every
//! series is a truncated product of the factors
//!
//! | generator         | factor                            |
//! |-------------------|-----------------------------------|
//! | exterior, deg `d` | `1 + t^d`                         |
//! | height `p`, `d`   | `1 + t^d + ... + t^{(p-1)d}`      |
//! | free, deg `d`     | `1 / (1 - t^d)`                   |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bar::{iterated_tor, AlgebraPresentation, BarError, GenKind, TorBounds};
use crate::fp::is_prime;
use crate::words::{classify, enumerate_words, FamilyKind, GeneratorKind, WordError, WordFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("the number of iterations must be at least 1")]
    ZeroIterations,
    #[error(
        "truncation height {m} is not a power of {p}; the ring splitting needs x^(p^l) = 0, \
         so only the word-calculus series is available for it"
    )]
    NotPrimePower { m: u64, p: u32 },
    #[error("{q} is not coprime to {p}")]
    NotCoprime { q: u64, p: u32 },
    #[error("cannot parse group {input:?}: {reason}")]
    GroupParse { input: String, reason: String },
    #[error("generator degree {degree} is not allowed at p = {p}: {reason}")]
    BadDegree { degree: u64, p: u32, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Validity {
    /// Follows from a theorem.
    #[serde(rename = "proved")]
    Proved,
    /// Depends on the collapse of a spectral sequence not known in this range.
    #[serde(rename = "conjectural (collapse unproven beyond this range)")]
    Conjectural,
    /// A word-family series with no ring-level statement behind it.
    #[serde(rename = "word-calculus-only")]
    WordCalculusOnly,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::Proved => "proved",
            Validity::Conjectural => "conjectural (collapse unproven beyond this range)",
            Validity::WordCalculusOnly => "word-calculus-only",
        })
    }
}

/// Graded dimensions (or ranks over `base`) in degrees `0..=truncation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct PoincareSeries {
    coeffs: Vec<u64>,
    /// The ring the coefficients count free ranks over; `F_p` for dimensions.
    pub base: String,
    pub basis_note: String,
    pub validity: Validity,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    base: String,
    basis_note: String,
    coeffs: BTreeMap<u32, u64>,
    truncation: u32,
    validity: Validity,
}

impl From<PoincareSeries> for SeriesRepr {
    fn from(s: PoincareSeries) -> Self {
        SeriesRepr {
            truncation: s.truncation(),
            coeffs: s.nonzero().collect(),
            base: s.base,
            basis_note: s.basis_note,
            validity: s.validity,
        }
    }
}

impl TryFrom<SeriesRepr> for PoincareSeries {
    type Error = String;
    fn try_from(r: SeriesRepr) -> Result<Self, String> {
        let mut coeffs = vec![0; r.truncation as usize + 1];
        for (d, c) in r.coeffs {
            *coeffs
                .get_mut(d as usize)
                .ok_or_else(|| format!("degree {d} exceeds truncation {}", r.truncation))? = c;
        }
        Ok(PoincareSeries {
            coeffs,
            base: r.base,
            basis_note: r.basis_note,
            validity: r.validity,
        })
    }
}

const DIMENSIONS: &str = "F_p-dimensions";

impl PoincareSeries {
    pub fn from_coeffs(coeffs: Vec<u64>, base: impl Into<String>, basis_note: impl Into<String>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least degree 0");
        PoincareSeries {
            coeffs,
            base: base.into(),
            basis_note: basis_note.into(),
            validity: Validity::Proved,
        }
    }

    /// The series `1`, dimensions over `F_p`.
    pub fn one(p: u32, truncation: u32) -> Self {
        Self::monomial(p, truncation, 0, 1)
    }

    /// `c · t^d` as dimensions over `F_p`.
    pub fn monomial(p: u32, truncation: u32, d: u32, c: u64) -> Self {
        let mut coeffs = vec![0; truncation as usize + 1];
        if let Some(slot) = coeffs.get_mut(d as usize) {
            *slot = c;
        }
        Self::from_coeffs(coeffs, format!("F_{p}"), DIMENSIONS)
    }

    /// `Σ_{i < count} t^{i d}`, with `count = None` for the free factor
    /// `1 / (1 - t^d)`.
    pub fn geometric(p: u32, truncation: u32, d: u32, count: Option<u64>) -> Self {
        assert!(d > 0, "a factor in degree 0 is not a finite series");
        let mut coeffs = vec![0; truncation as usize + 1];
        let mut i = 0u64;
        while count.is_none_or(|c| i < c) && i * d as u64 <= truncation as u64 {
            coeffs[(i * d as u64) as usize] = 1;
            i += 1;
        }
        Self::from_coeffs(coeffs, format!("F_{p}"), DIMENSIONS)
    }

    pub fn truncation(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, d: u32) -> u64 {
        self.coeffs.get(d as usize).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(d, &c)| (d as u32, c))
    }

    pub fn with_base(mut self, base: impl Into<String>, basis_note: impl Into<String>) -> Self {
        self.base = base.into();
        self.basis_note = basis_note.into();
        self
    }

    pub fn with_validity(mut self, validity: Validity) -> Self {
        self.validity = validity;
        self
    }

    /// Product of series, truncated at the smaller truncation. Bases are
    /// tensored and the weaker validity wins.
    pub fn convolve(&self, other: &PoincareSeries) -> PoincareSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n).filter(|(_, &a)| a > 0) {
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] += a * b;
            }
        }
        let base = tensor_bases(&self.base, &other.base);
        let basis_note = if self.basis_note == other.basis_note {
            self.basis_note.clone()
        } else if self.basis_note == DIMENSIONS {
            other.basis_note.clone()
        } else if other.basis_note == DIMENSIONS {
            self.basis_note.clone()
        } else {
            format!("{}; {}", self.basis_note, other.basis_note)
        };
        PoincareSeries {
            coeffs,
            base,
            basis_note,
            validity: self.validity.max(other.validity),
        }
    }
}

fn tensor_bases(a: &str, b: &str) -> String {
    let ground = |s: &str| s.starts_with("F_") && s[2..].chars().all(|c| c.is_ascii_digit());
    match (ground(a), ground(b)) {
        (true, _) => b.to_string(),
        (_, true) => a.to_string(),
        _ => format!("{a} ⊗ {b}"),
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .nonzero()
            .map(|(d, c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (d, 1) => format!("t^{d}"),
                (d, c) => format!("{c}t^{d}"),
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        write!(f, "{body} + O(t^{})", self.truncation() + 1)
    }
}

fn check_prime(p: u32) -> Result<(), SeriesError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(SeriesError::NotPrime(p))
    }
}

/// Poincaré series of the algebra generated by the words of length `n`.
///
/// Each word contributes the factor of its generator kind. In families
/// with base letter `x` the bare word `x` is left out: it belongs to the
/// base ring factor.
pub fn family_series(family: &WordFamily, n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_prime(p)?;
    let words = enumerate_words(n, family, p, max_degree as u64)?;
    let mut acc = PoincareSeries::one(p, max_degree);
    for (w, bd) in &words {
        let d = bd.total() as u32;
        let factor = match classify(w, family)?.kind {
            GeneratorKind::Exterior => PoincareSeries::geometric(p, max_degree, d, Some(2)),
            GeneratorKind::TruncatedHeightP => PoincareSeries::geometric(p, max_degree, d, Some(p as u64)),
            GeneratorKind::Free if family.kind == FamilyKind::B => PoincareSeries::geometric(p, max_degree, d, None),
            GeneratorKind::Free | GeneratorKind::TruncatedHeightM(_) => continue,
        };
        acc = acc.convolve(&factor);
    }
    if family.kind != FamilyKind::B {
        acc.basis_note = format!("{DIMENSIONS}; the bare word x is counted in the base ring");
    }
    Ok(acc)
}

fn check_n(n: usize) -> Result<(), SeriesError> {
    if n == 0 {
        Err(SeriesError::ZeroIterations)
    } else {
        Ok(())
    }
}

/// `HH^[n]` of `F_p[x]`, `|x| = 0`, as ranks over `F_p[x]`.
pub fn hh_polynomial(n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_n(n)?;
    let base = format!("F_{p}[x]");
    let note = format!("free ranks over {base}");
    Ok(family_series(&WordFamily::b_prime(0), n + 1, p, max_degree)?.with_base(base, note))
}

/// `HH^[n]` of `F_p[x^{±1}]`, as ranks over `F_p[x^{±1}]`.
pub fn hh_laurent(n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    let base = format!("F_{p}[x^{{±1}}]");
    let note = format!("free ranks over {base}");
    Ok(hh_polynomial(n, p, max_degree)?.with_base(base, note))
}

/// `HH^[n]` of `F_p[x]/x^{p^ell}`, `|x| = 0`, as ranks over the ring itself.
pub fn hh_truncated(n: usize, p: u32, ell: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_prime(p)?;
    if ell == 0 {
        return Err(SeriesError::NotPrimePower { m: 1, p });
    }
    let m = (p as u64)
        .checked_pow(ell)
        .ok_or_else(|| WordError::Overflow(format!("{p}^{ell}")))?;
    hh_truncated_height(n, p, m, max_degree, false)
}

/// Like [`hh_truncated`] for an arbitrary height `m >= 2`. Heights that are
/// not powers of `p` are refused unless `word_calculus_only` is set, in
/// which case the word-family series is returned and marked as such.
pub fn hh_truncated_height(
    n: usize,
    p: u32,
    m: u64,
    max_degree: u32,
    word_calculus_only: bool,
) -> Result<PoincareSeries, SeriesError> {
    check_n(n)?;
    check_prime(p)?;
    let p_power = prime_power_exponent(m, p as u64).is_some_and(|e| e >= 1);
    if !p_power && !word_calculus_only {
        return Err(SeriesError::NotPrimePower { m, p });
    }
    let base = format!("F_{p}[x]/x^{m}");
    let note = format!("free ranks over {base}");
    let s = family_series(&WordFamily::b_double_prime(m, 0)?, n + 1, p, max_degree)?.with_base(base, note);
    Ok(if p_power {
        s
    } else {
        s.with_validity(Validity::WordCalculusOnly)
    })
}

/// `e` with `m = p^e`, if any.
fn prime_power_exponent(mut m: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    while m > 1 && m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some(e)
}

/// `HH^[n]` of an étale algebra of dimension `q`: `q` copies of the ground
/// field in degree 0, for every `n`.
pub fn etale_finite(q: u64, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_prime(p)?;
    if q == 0 || gcd(q, p as u64) != 1 {
        return Err(SeriesError::NotCoprime { q, p });
    }
    let s = PoincareSeries::monomial(p, max_degree, 0, q);
    Ok(if q == 1 {
        s
    } else {
        s.with_base(format!("F_{p}"), format!("{DIMENSIONS} of F_{p}[C_{q}]"))
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Higher `THH` of `F_p`, the iterated Tor algebra generated by words of
/// length `n` in `μ`.
pub fn thh_fp(n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_n(n)?;
    let proved = if p == 2 { n <= 3 } else { n <= 2 * p as usize + 2 };
    let s = family_series(&WordFamily::b(), n, p, max_degree)?;
    Ok(s.with_validity(if proved {
        Validity::Proved
    } else {
        Validity::Conjectural
    }))
}

/// A finitely generated abelian group `Z^r × Z/n_1 × ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub free_rank: u32,
    /// Orders of the cyclic factors, each a prime power after
    /// normalization, sorted.
    pub torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    /// Splits every cyclic order into prime-power factors and drops `Z/1`.
    pub fn normalized(&self) -> GroupSpec {
        let mut torsion = Vec::new();
        for &order in &self.torsion {
            let mut rest = order;
            let mut q = 2;
            while rest > 1 {
                if q * q > rest {
                    torsion.push(rest);
                    break;
                }
                let mut pp = 1;
                while rest % q == 0 {
                    rest /= q;
                    pp *= q;
                }
                if pp > 1 {
                    torsion.push(pp);
                }
                q += 1;
            }
        }
        torsion.sort_unstable();
        GroupSpec {
            free_rank: self.free_rank,
            torsion,
        }
    }

    /// Exponents `l` of the `C_{p^l}` factors and the order of the prime-to-`p`
    /// part.
    pub fn split_at(&self, p: u32) -> (Vec<u32>, u64) {
        let mut p_part = Vec::new();
        let mut other = 1u64;
        for &q in &self.normalized().torsion {
            match prime_power_exponent(q, p as u64) {
                Some(e) if e > 0 => p_part.push(e),
                _ => other *= q,
            }
        }
        (p_part, other)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|q| format!("Z/{q}")));
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FromStr for GroupSpec {
    type Err = SeriesError;

    /// Parses `Z^r x Z/n1 x Z/n2 ...`; `×` also separates factors, and
    /// `trivial`, `1` and `0` denote the trivial group.
    fn from_str(s: &str) -> Result<Self, SeriesError> {
        let err = |reason: &str| SeriesError::GroupParse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if matches!(t, "trivial" | "1" | "0" | "") {
            return Ok(GroupSpec::trivial());
        }
        let mut g = GroupSpec::trivial();
        for factor in t.split(['x', '×']).map(str::trim) {
            if factor == "Z" {
                g.free_rank += 1;
            } else if let Some(r) = factor.strip_prefix("Z^") {
                g.free_rank += r.trim().parse::<u32>().map_err(|_| err("bad free rank"))?;
            } else if let Some(q) = factor.strip_prefix("Z/").or_else(|| factor.strip_prefix("C_")) {
                let q: u64 = q.trim().parse().map_err(|_| err("bad cyclic order"))?;
                if q == 0 {
                    return Err(err("Z/0 is not finite; write Z for a free factor"));
                }
                g.torsion.push(q);
            } else {
                return Err(err(&format!("unknown factor {factor:?}")));
            }
        }
        Ok(g)
    }
}

/// `HH^[n]` of the group algebra `F_p[G]` as ranks over the tensor product
/// of the base rings of its factors.
pub fn hh_group_algebra(g: &GroupSpec, n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_n(n)?;
    check_prime(p)?;
    let (p_part, other) = g.split_at(p);
    let mut acc = PoincareSeries::one(p, max_degree);
    for _ in 0..g.free_rank {
        acc = acc.convolve(&hh_laurent(n, p, max_degree)?);
    }
    if other > 1 {
        let e = etale_finite(other, p, max_degree)?.with_base(format!("F_{p}[C_{other}]"), "");
        acc = acc.convolve(&e);
    }
    for ell in p_part {
        acc = acc.convolve(&hh_truncated(n, p, ell, max_degree)?);
    }
    let base = acc.base.clone();
    acc.basis_note = if base == format!("F_{p}") {
        DIMENSIONS.to_string()
    } else {
        format!("free ranks over {base} ≅ F_{p}[{g}]")
    };
    Ok(acc)
}

/// `THH^[n]` of `F_p[G]`: higher `THH` of `F_p` tensored with `HH^[n]` of
/// the group algebra.
pub fn thh_group_algebra(g: &GroupSpec, n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    let hh = hh_group_algebra(g, n, p, max_degree)?;
    let thh = thh_fp(n, p, max_degree)?;
    let mut s = thh.convolve(&hh);
    s.basis_note = hh.basis_note;
    s.base = hh.base;
    Ok(s)
}

/// `HH^[n]` of `⊗_i F_p[ξ_i]` with `|ξ_i| = degrees[i]`, as `F_p`-dimensions,
/// including the polynomial factors themselves.
pub fn hh_poly_gens(degrees: &[u64], n: usize, p: u32, max_degree: u32) -> Result<PoincareSeries, SeriesError> {
    check_n(n)?;
    check_prime(p)?;
    let mut acc = PoincareSeries::one(p, max_degree);
    for &d in degrees {
        if d == 0 {
            return Err(SeriesError::BadDegree {
                degree: d,
                p,
                reason: "generators must have positive degree".into(),
            });
        }
        if p != 2 && d % 2 == 1 {
            return Err(SeriesError::BadDegree {
                degree: d,
                p,
                reason: "polynomial generators need even degree at odd p".into(),
            });
        }
        let free = match u32::try_from(d) {
            Ok(d) => PoincareSeries::geometric(p, max_degree, d, None),
            Err(_) => PoincareSeries::one(p, max_degree),
        };
        acc = acc.convolve(&free);
        acc = acc.convolve(&family_series(&WordFamily::b_prime(d), n + 1, p, max_degree)?);
    }
    let names: Vec<String> = (1..=degrees.len()).map(|i| format!("ξ_{i}")).collect();
    acc.base = format!("F_{p}");
    acc.basis_note = if names.is_empty() {
        DIMENSIONS.to_string()
    } else {
        format!("{DIMENSIONS} of HH of F_{p}[{}]", names.join(", "))
    };
    Ok(acc)
}

/// Which word family to compare against iterated Tor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleFamily {
    /// Words in `μ`, `|μ| = 2`.
    B,
    /// Words in `x` with `|x| = base_degree`; weight stands in for degree 0.
    BPrime { base_degree: u32 },
    /// Words in `x` with `x^m = 0`, `|x| = 0`.
    BDoublePrime { m: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub family: OracleFamily,
    pub n: usize,
    pub p: u32,
    pub max_degree: u32,
    pub words: Vec<u64>,
    pub iterated_tor: Vec<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.words == self.iterated_tor
    }

    /// First degree where the two pipelines differ.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.words.iter().zip(&self.iterated_tor).position(|(a, b)| a != b)
    }
}

/// Compares the word-family series of length-`n` words with `Tor`
/// iterated `n - 1` times from the base algebra.
pub fn oracle_cross(family: OracleFamily, n: usize, p: u32, max_degree: u32) -> Result<OracleReport, SeriesError> {
    check_n(n)?;
    let (fam, base, m) = match family {
        OracleFamily::B => (WordFamily::b(), GenKind::Polynomial, 1),
        OracleFamily::BPrime { base_degree } => (WordFamily::b_prime(base_degree as u64), GenKind::Polynomial, 1),
        OracleFamily::BDoublePrime { m } => (
            WordFamily::b_double_prime(m as u64, 0)?,
            GenKind::Truncated { height: m },
            m,
        ),
    };
    let words = family_series(&fam, n, p, max_degree)?;
    let (degree, weight) = match family {
        OracleFamily::B => (2, 0),
        OracleFamily::BPrime { base_degree } if base_degree > 0 => (base_degree, 0),
        _ => (0, 1),
    };
    let algebra = AlgebraPresentation::new(p, vec![crate::bar::Generator::new("x", base, degree, weight)])?;
    // descendants of x carry weight at most m times their degree
    let max_weight = if weight == 0 {
        0
    } else {
        max_degree.saturating_mul(m.max(2))
    };
    let bounds = TorBounds {
        max_total: max_degree,
        max_weight,
    };
    let tor = iterated_tor(&algebra, n - 1, bounds)?;
    let mut series = tor.total_series(n - 1);
    if n == 1 && weight == 1 {
        // the base ring itself: keep only its unit, as the word series does
        series = vec![0; max_degree as usize + 1];
        series[0] = 1;
    }
    Ok(OracleReport {
        family,
        n,
        p,
        max_degree,
        words: words.coeffs().to_vec(),
        iterated_tor: series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::{bar_homology, BarBounds};
    use proptest::prelude::*;

    fn ones_every(step: usize, n: u32) -> Vec<u64> {
        (0..=n as usize).map(|d| u64::from(d % step == 0)).collect()
    }

    /// Independent expansion of a finite product `∏ (1 + t^{d_i})`.
    fn expand_exterior(degrees: &[u32], n: u32) -> Vec<u64> {
        let mut c = vec![0u64; n as usize + 1];
        c[0] = 1;
        for &d in degrees {
            for i in (d as usize..=n as usize).rev() {
                c[i] += c[i - d as usize];
            }
        }
        c
    }

    #[test]
    fn thh_fixtures() {
        let s = thh_fp(2, 2, 10).unwrap();
        assert_eq!(s.nonzero().collect::<Vec<_>>(), [(0, 1), (3, 1)]);
        assert_eq!(s.validity, Validity::Proved);
        let s = thh_fp(3, 2, 16).unwrap();
        assert_eq!(s.coeffs(), ones_every(4, 16));
        // p = 2: ∏ (1 + t^{4·2^k}) is the all-ones series in multiples of 4
        assert_eq!(s.coeffs(), expand_exterior(&[4, 8, 16], 16));
        assert_eq!(thh_fp(9, 3, 10).unwrap().validity, Validity::Conjectural);
        assert_eq!(thh_fp(8, 3, 10).unwrap().validity, Validity::Proved);
        assert_eq!(thh_fp(4, 2, 10).unwrap().validity, Validity::Conjectural);
        assert_eq!(thh_fp(1, 3, 8).unwrap().coeffs(), ones_every(2, 8));
    }

    #[test]
    fn hh_polynomial_fixtures() {
        for p in [2, 3, 5] {
            assert_eq!(hh_polynomial(1, p, 6).unwrap().coeffs(), [1, 1, 0, 0, 0, 0, 0]);
            assert_eq!(hh_polynomial(2, p, 24).unwrap().coeffs(), ones_every(2, 24));
            assert_eq!(hh_laurent(2, p, 24).unwrap().coeffs(), ones_every(2, 24));
        }
        assert_eq!(hh_polynomial(2, 3, 4).unwrap().base, "F_3[x]");
        assert_eq!(hh_laurent(2, 3, 4).unwrap().base, "F_3[x^{±1}]");
        // third iteration: the lowest word ερ^0εx sits in degree 3
        let s = hh_polynomial(3, 2, 20).unwrap();
        assert_eq!(s.coeff(3), 1);
        assert_eq!(s.coeff(1), 0);
        assert!(matches!(hh_polynomial(0, 2, 4), Err(SeriesError::ZeroIterations)));
    }

    #[test]
    fn hh_truncated_fixtures() {
        let s = hh_truncated(1, 2, 1, 6).unwrap();
        assert_eq!(s.coeffs(), [1; 7]);
        assert_eq!(s.base, "F_2[x]/x^2");
        assert!(matches!(hh_truncated(0, 2, 1, 6), Err(SeriesError::ZeroIterations)));
        assert!(matches!(
            hh_truncated_height(1, 3, 4, 6, false),
            Err(SeriesError::NotPrimePower { m: 4, p: 3 })
        ));
        let general = hh_truncated_height(1, 3, 4, 6, true).unwrap();
        assert_eq!(general.validity, Validity::WordCalculusOnly);
        assert_eq!(
            hh_truncated_height(1, 3, 9, 6, false).unwrap(),
            hh_truncated(1, 3, 2, 6).unwrap()
        );
    }

    #[test]
    fn truncated_series_matches_weight_graded_bar_homology() {
        for p in [2u32, 3] {
            let n = 12;
            let a = AlgebraPresentation::single(p, "x", GenKind::Truncated { height: p }, 0, 1).unwrap();
            let h = bar_homology(&a, BarBounds::new(n, 0, n * p)).unwrap();
            let bar: Vec<u64> = h.total_series(n);
            assert_eq!(hh_truncated(1, p, 1, n).unwrap().coeffs(), bar, "p = {p}");
        }
    }

    #[test]
    fn family_series_fixtures() {
        for p in [2, 3, 5] {
            let s = family_series(&WordFamily::b(), 2, p, 10).unwrap();
            assert_eq!(s.nonzero().collect::<Vec<_>>(), [(0, 1), (3, 1)]);
            let s = family_series(&WordFamily::b_prime(0), 3, p, 20).unwrap();
            assert_eq!(s.coeffs(), ones_every(2, 20));
            assert_eq!(
                family_series(&WordFamily::b_prime(0), 1, p, 5).unwrap().coeffs(),
                [1, 0, 0, 0, 0, 0]
            );
        }
    }

    #[test]
    fn family_b_is_connected_without_degree_one() {
        for p in [2, 3] {
            for n in 1..=6 {
                let s = family_series(&WordFamily::b(), n, p, 30).unwrap();
                assert_eq!((s.coeff(0), s.coeff(1)), (1, 0), "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn etale_and_groups() {
        for q in [1, 2, 5] {
            let s = etale_finite(q, 3, 8).unwrap();
            assert_eq!(s.nonzero().collect::<Vec<_>>(), [(0, q)]);
        }
        assert!(etale_finite(6, 3, 8).is_err());
        let g: GroupSpec = "Z/4".parse().unwrap();
        assert_eq!(
            hh_group_algebra(&g, 2, 3, 8).unwrap().nonzero().collect::<Vec<_>>(),
            [(0, 4)]
        );
        let t = hh_group_algebra(&GroupSpec::trivial(), 3, 2, 8).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), [(0, 1)]);
    }

    #[test]
    fn group_parsing() {
        let g: GroupSpec = "Z x Z/6".parse().unwrap();
        assert_eq!(
            g,
            GroupSpec {
                free_rank: 1,
                torsion: vec![6]
            }
        );
        assert_eq!(g.normalized().torsion, [2, 3]);
        assert_eq!(g.split_at(3), (vec![1], 2));
        let g: GroupSpec = "Z^2 × Z/12 × Z/9".parse().unwrap();
        assert_eq!(
            g.normalized(),
            GroupSpec {
                free_rank: 2,
                torsion: vec![3, 4, 9]
            }
        );
        assert_eq!(g.split_at(3), (vec![1, 2], 4));
        assert_eq!(g.normalized().to_string(), "Z^2 x Z/3 x Z/4 x Z/9");
        assert_eq!("trivial".parse::<GroupSpec>().unwrap(), GroupSpec::trivial());
        assert!("Z/0".parse::<GroupSpec>().is_err());
        assert!("Q".parse::<GroupSpec>().is_err());
        assert_eq!("Z/1".parse::<GroupSpec>().unwrap().normalized(), GroupSpec::trivial());
    }

    #[test]
    fn worked_group_example() {
        let g: GroupSpec = "Z x Z/6".parse().unwrap();
        let s = thh_group_algebra(&g, 2, 3, 12).unwrap();
        let eps = PoincareSeries::from_coeffs(expand_exterior(&[3], 12), "F_3", DIMENSIONS);
        let b1 = family_series(&WordFamily::b_prime(0), 3, 3, 12).unwrap();
        let b2 = family_series(&WordFamily::b_double_prime(3, 0).unwrap(), 3, 3, 12).unwrap();
        let two = PoincareSeries::monomial(3, 12, 0, 2);
        let manual = eps.convolve(&b1).convolve(&b2).convolve(&two);
        assert_eq!(s.coeffs(), manual.coeffs());
        assert_eq!(s.base, "F_3[x^{±1}] ⊗ F_3[C_2] ⊗ F_3[x]/x^3");
    }

    #[test]
    fn poly_gens() {
        // (1/(1-t)) (1 + t^2)
        let s = hh_poly_gens(&[1], 1, 2, 6).unwrap();
        assert_eq!(s.coeffs(), [1, 1, 2, 2, 2, 2, 2]);
        assert_eq!(
            hh_poly_gens(&[], 3, 2, 6).unwrap().nonzero().collect::<Vec<_>>(),
            [(0, 1)]
        );
        let a = hh_poly_gens(&[1], 1, 2, 4).unwrap();
        let b = hh_poly_gens(&[3], 1, 2, 4).unwrap();
        assert_eq!(
            hh_poly_gens(&[1, 3], 1, 2, 4).unwrap().coeffs(),
            a.convolve(&b).coeffs()
        );
        assert!(hh_poly_gens(&[1], 1, 3, 4).is_err());
    }

    #[test]
    fn poly_gens_match_bar_homology() {
        // F_2[ξ_1, ξ_3]: HH_1 = A ⊗ Tor^A(F_2, F_2) additively
        let a = AlgebraPresentation::new(
            2,
            vec![
                crate::bar::Generator::new("ξ1", GenKind::Polynomial, 1, 0),
                crate::bar::Generator::new("ξ3", GenKind::Polynomial, 3, 0),
            ],
        )
        .unwrap();
        let n = 8;
        let tor = bar_homology(&a, BarBounds::new(n, n, 0)).unwrap().total_series(n);
        let alg = PoincareSeries::geometric(2, n, 1, None).convolve(&PoincareSeries::geometric(2, n, 3, None));
        let expected = alg.convolve(&PoincareSeries::from_coeffs(tor, "F_2", DIMENSIONS));
        assert_eq!(hh_poly_gens(&[1, 3], 1, 2, n).unwrap().coeffs(), expected.coeffs());
    }

    #[test]
    fn json_round_trip() {
        let s = hh_truncated(2, 3, 1, 12).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with("{\"base\":\"F_3[x]/x^3\""));
        let back: PoincareSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn oracle_agreement() {
        for p in [2, 3] {
            for n in 1..=4 {
                for fam in [
                    OracleFamily::B,
                    OracleFamily::BPrime { base_degree: 0 },
                    OracleFamily::BDoublePrime { m: p },
                    OracleFamily::BDoublePrime { m: p * p },
                ] {
                    let r = oracle_cross(fam, n, p, 24).unwrap();
                    assert!(r.passed(), "{fam:?} n = {n} p = {p}: {:?}", r.first_mismatch());
                }
            }
        }
    }

    fn arb_series() -> impl Strategy<Value = PoincareSeries> {
        proptest::collection::vec(0u64..5, 1..12).prop_map(|mut c| {
            c.resize(12, 0);
            PoincareSeries::from_coeffs(c, "F_2", DIMENSIONS)
        })
    }

    proptest! {
        #[test]
        fn convolution_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.convolve(&b).coeffs().to_vec(), b.convolve(&a).coeffs().to_vec());
            prop_assert_eq!(a.convolve(&b).convolve(&c).coeffs().to_vec(), a.convolve(&b.convolve(&c)).coeffs().to_vec());
            prop_assert_eq!(a.convolve(&PoincareSeries::one(2, 11)), a.clone());
        }
    }
}

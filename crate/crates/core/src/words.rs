//! Admissible words naming generators of iterated Tor algebras, their
//! bidegrees, and the search for possible differentials between them.
//!
//! A word is read left to right; the rightmost letter is the base (`μ` or
//! `x`) and each letter to its left records one application of
//! `Tor^-(F_p, F_p)`:
//!
//! * `ε` marks an exterior generator,
//! * `ρ^k` the generator `γ_{p^k}` of a divided power algebra on an
//!   exterior class,
//! * `φ^k` the generator `γ_{p^k}` of the divided power algebra coming from
//!   a truncated polynomial generator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word length must be at least 1")]
    ZeroLength,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("truncation height must be at least 2, got {0}")]
    BadHeight(u64),
    #[error("odd base degree {0} is only allowed at p = 2")]
    OddBaseDegree(u64),
    #[error("word {word} is not admissible in family {family}: {reason}")]
    Inadmissible {
        word: String,
        family: String,
        reason: &'static str,
    },
    #[error("degree overflow while evaluating {0}")]
    Overflow(String),
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("{what} needs {requirement}")]
    Precondition {
        what: &'static str,
        requirement: &'static str,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    Eps,
    Rho(u32),
    Phi(u32),
    Mu,
    X,
}

impl Letter {
    pub fn kind(self) -> LetterKind {
        match self {
            Letter::Eps => LetterKind::Eps,
            Letter::Rho(_) => LetterKind::Rho,
            Letter::Phi(_) => LetterKind::Phi,
            Letter::Mu => LetterKind::Mu,
            Letter::X => LetterKind::X,
        }
    }

    fn exponent(self) -> Option<u32> {
        match self {
            Letter::Rho(k) | Letter::Phi(k) => Some(k),
            _ => None,
        }
    }
}

/// A letter with its exponent forgotten.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    Eps,
    Rho,
    Phi,
    Mu,
    X,
}

impl LetterKind {
    fn with_exponent(self, k: u32) -> Letter {
        match self {
            LetterKind::Eps => Letter::Eps,
            LetterKind::Rho => Letter::Rho(k),
            LetterKind::Phi => Letter::Phi(k),
            LetterKind::Mu => Letter::Mu,
            LetterKind::X => Letter::X,
        }
    }
}

/// Letter pattern of a word with its exponents left unassigned.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape(pub Vec<LetterKind>);

impl Shape {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `ρ`/`φ` letters, i.e. free exponents.
    pub fn num_exponents(&self) -> usize {
        self.0
            .iter()
            .filter(|k| matches!(k, LetterKind::Rho | LetterKind::Phi))
            .count()
    }

    /// Fills the exponents left to right.
    pub fn instantiate(&self, exponents: &[u32]) -> Word {
        assert_eq!(exponents.len(), self.num_exponents());
        let mut it = exponents.iter();
        Word(
            self.0
                .iter()
                .map(|&k| match k {
                    LetterKind::Rho | LetterKind::Phi => k.with_exponent(*it.next().unwrap()),
                    _ => k.with_exponent(0),
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leftmost(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn shape(&self) -> Shape {
        Shape(self.0.iter().map(|l| l.kind()).collect())
    }

    /// ASCII key syntax: `u`, `e`, `r^k`, `l^k`
    /// (and `x` for the base letter of the primed families).
    pub fn key(&self) -> String {
        let mut s = String::new();
        for l in &self.0 {
            match l {
                Letter::Eps => s.push('e'),
                Letter::Rho(k) => s.push_str(&format!("r^{k}")),
                Letter::Phi(k) => s.push_str(&format!("l^{k}")),
                Letter::Mu => s.push('u'),
                Letter::X => s.push('x'),
            }
        }
        s
    }

    /// Unicode rendering such as `φ¹ρ⁰εμ`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        for l in &self.0 {
            match l {
                Letter::Eps => s.push('ε'),
                Letter::Rho(k) => {
                    s.push('ρ');
                    s.push_str(&superscript(*k));
                }
                Letter::Phi(k) => {
                    s.push('φ');
                    s.push_str(&superscript(*k));
                }
                Letter::Mu => s.push('μ'),
                Letter::X => s.push('x'),
            }
        }
        s
    }

    /// Concatenation `self` followed by `tail`.
    pub fn then(mut self, tail: &Word) -> Word {
        self.0.extend_from_slice(&tail.0);
        self
    }

    /// `self` repeated `n` times.
    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses the key syntax (`l^1r^0eu`) or the unicode syntax (`φ¹ρ⁰εμ`,
    /// exponents also accepted as `ρ^2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WordError::Parse(s.to_string());
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut letters = Vec::new();
        let mut i = 0;
        let exponent = |i: &mut usize| -> Result<u32, WordError> {
            let mut digits = String::new();
            if chars.get(*i) == Some(&'^') {
                *i += 1;
                while let Some(c) = chars.get(*i).filter(|c| c.is_ascii_digit()) {
                    digits.push(*c);
                    *i += 1;
                }
            } else {
                while let Some(d) = chars.get(*i).and_then(|c| "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|x| x == *c))
                {
                    digits.push(char::from(b'0' + d as u8));
                    *i += 1;
                }
            }
            digits.parse().map_err(|_| err())
        };
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            let letter = match c {
                'e' | 'ε' => Letter::Eps,
                'u' | 'μ' => Letter::Mu,
                'x' => Letter::X,
                'r' | 'ρ' => Letter::Rho(exponent(&mut i)?),
                'l' | 'φ' => Letter::Phi(exponent(&mut i)?),
                _ => return Err(err()),
            };
            letters.push(letter);
        }
        if letters.is_empty() {
            return Err(err());
        }
        Ok(Word(letters))
    }
}

/// Homological and internal degree of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub hom: u64,
    pub internal: u64,
}

impl Bidegree {
    pub fn new(hom: u64, internal: u64) -> Self {
        Bidegree { hom, internal }
    }

    pub fn total(&self) -> u64 {
        self.hom + self.internal
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.hom, self.internal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Words ending in `μ`: iterated Tor starting from `F_p[μ]`.
    B,
    /// Words ending in `x`: iterated Tor starting from `F_p[x]`.
    BPrime,
    /// Words ending in `x` with `x^m = 0`.
    BDoublePrime { m: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordFamily {
    pub kind: FamilyKind,
    pub base_degree: u64,
}

impl WordFamily {
    /// `B_n`, with `|μ| = 2`.
    pub fn b() -> Self {
        WordFamily {
            kind: FamilyKind::B,
            base_degree: 2,
        }
    }

    pub fn b_prime(base_degree: u64) -> Self {
        WordFamily {
            kind: FamilyKind::BPrime,
            base_degree,
        }
    }

    pub fn b_double_prime(m: u64, base_degree: u64) -> Result<Self, WordError> {
        if m < 2 {
            return Err(WordError::BadHeight(m));
        }
        Ok(WordFamily {
            kind: FamilyKind::BDoublePrime { m },
            base_degree,
        })
    }

    pub fn base_letter(&self) -> Letter {
        match self.kind {
            FamilyKind::B => Letter::Mu,
            _ => Letter::X,
        }
    }

    fn check_params(&self, p: u32) -> Result<(), WordError> {
        if !is_prime(p) {
            return Err(WordError::NotPrime(p));
        }
        if let FamilyKind::BDoublePrime { m } = self.kind {
            if m < 2 {
                return Err(WordError::BadHeight(m));
            }
        }
        if self.base_degree % 2 == 1 && p != 2 {
            return Err(WordError::OddBaseDegree(self.base_degree));
        }
        Ok(())
    }

    /// Letters allowed immediately to the left of `right`.
    fn left_of(&self, right: LetterKind) -> &'static [LetterKind] {
        use LetterKind::*;
        match (right, self.kind) {
            (Mu, _) => &[Eps],
            (X, FamilyKind::BDoublePrime { .. }) => &[Eps, Phi],
            (X, _) => &[Eps],
            (Eps, _) => &[Rho],
            (Rho, _) | (Phi, _) => &[Eps, Phi],
        }
    }

    pub fn check(&self, word: &Word) -> Result<(), WordError> {
        let bad = |reason| WordError::Inadmissible {
            word: word.key(),
            family: self.to_string(),
            reason,
        };
        let letters = word.letters();
        let Some((&last, rest)) = letters.split_last() else {
            return Err(bad("empty word"));
        };
        if last != self.base_letter() {
            return Err(bad("wrong rightmost letter"));
        }
        if rest.iter().any(|l| matches!(l, Letter::Mu | Letter::X)) {
            return Err(bad("base letter in the interior"));
        }
        for pair in letters.windows(2) {
            if !self.left_of(pair[1].kind()).contains(&pair[0].kind()) {
                return Err(bad("forbidden adjacent letters"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WordFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::B => write!(f, "B"),
            FamilyKind::BPrime => write!(f, "B' (|x|={})", self.base_degree),
            FamilyKind::BDoublePrime { m } => write!(f, "B''(m={m}) (|x|={})", self.base_degree),
        }
    }
}

/// All admissible letter patterns of length `n`, in canonical order.
pub fn enumerate_shapes(n: usize, family: &WordFamily) -> Result<Vec<Shape>, WordError> {
    if n == 0 {
        return Err(WordError::ZeroLength);
    }
    let base = family.base_letter().kind();
    let mut shapes = vec![vec![base]];
    for _ in 1..n {
        let mut next = Vec::new();
        for s in &shapes {
            for &l in family.left_of(s[0]) {
                let mut w = Vec::with_capacity(s.len() + 1);
                w.push(l);
                w.extend_from_slice(s);
                next.push(w);
            }
        }
        shapes = next;
    }
    let mut shapes: Vec<Shape> = shapes.into_iter().map(Shape).collect();
    shapes.sort();
    Ok(shapes)
}

fn p_pow(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

/// Applies one letter to a tail of total degree `tail`. `on_base` is true
/// when the tail is the bare base letter, which matters for `φ` in `B''(m)`.
fn apply_letter(letter: Letter, tail: u64, on_base: bool, p: u64, family: &WordFamily) -> Option<Bidegree> {
    match letter {
        Letter::Eps => Some(Bidegree::new(1, tail)),
        Letter::Rho(k) => {
            let q = p_pow(p, k)?;
            Some(Bidegree::new(q, q.checked_mul(tail)?))
        }
        Letter::Phi(k) => {
            let q = p_pow(p, k)?;
            let height = match family.kind {
                FamilyKind::BDoublePrime { m } if on_base => m,
                _ => p,
            };
            Some(Bidegree::new(
                q.checked_mul(2)?,
                q.checked_mul(height)?.checked_mul(tail)?,
            ))
        }
        Letter::Mu | Letter::X => Some(Bidegree::new(0, family.base_degree)),
    }
}

/// Bidegree of an admissible word.
pub fn bidegree(word: &Word, p: u32, family: &WordFamily) -> Result<Bidegree, WordError> {
    family.check_params(p)?;
    family.check(word)?;
    bidegree_unchecked(word, p as u64, family).ok_or_else(|| WordError::Overflow(word.key()))
}

fn bidegree_unchecked(word: &Word, p: u64, family: &WordFamily) -> Option<Bidegree> {
    let letters = word.letters();
    let n = letters.len();
    let mut bd = apply_letter(letters[n - 1], 0, false, p, family)?;
    for i in (0..n - 1).rev() {
        bd = apply_letter(letters[i], bd.total(), i == n - 2, p, family)?;
    }
    Some(bd)
}

/// Every admissible word of length `n` with total degree at most
/// `max_total_degree`, in canonical order.
pub fn enumerate_words(
    n: usize,
    family: &WordFamily,
    p: u32,
    max_total_degree: u64,
) -> Result<Vec<(Word, Bidegree)>, WordError> {
    family.check_params(p)?;
    let shapes = enumerate_shapes(n, family)?;
    let mut out = Vec::new();
    for shape in &shapes {
        let mut letters = vec![Letter::Eps; n];
        extend_right_to_left(
            shape,
            n - 1,
            None,
            &mut letters,
            p as u64,
            family,
            max_total_degree,
            &mut out,
        );
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_right_to_left(
    shape: &Shape,
    pos: usize,
    tail: Option<Bidegree>,
    letters: &mut Vec<Letter>,
    p: u64,
    family: &WordFamily,
    bound: u64,
    out: &mut Vec<(Word, Bidegree)>,
) {
    let n = shape.len();
    let kind = shape.0[pos];
    let tail_total = tail.map_or(0, |b| b.total());
    let on_base = pos + 2 == n;
    let mut k = 0u32;
    loop {
        let letter = kind.with_exponent(k);
        // every letter strictly increases the degree in its exponent, and outer
        // letters never decrease it, so the first overshoot ends this branch
        let Some(bd) = apply_letter(letter, tail_total, on_base, p, family) else {
            return;
        };
        if bd.total() > bound {
            return;
        }
        letters[pos] = letter;
        if pos == 0 {
            out.push((Word(letters.clone()), bd));
        } else {
            extend_right_to_left(shape, pos - 1, Some(bd), letters, p, family, bound, out);
        }
        if letter.exponent().is_none() {
            return;
        }
        k += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Exterior,
    TruncatedHeightP,
    Free,
    TruncatedHeightM(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classification {
    pub kind: GeneratorKind,
    pub primitive: bool,
}

/// What kind of algebra generator a word names. Only the leftmost letter
/// matters, except for a bare base letter, which depends on the family.
pub fn classify(word: &Word, family: &WordFamily) -> Result<Classification, WordError> {
    family.check(word)?;
    let (kind, primitive) = match word.leftmost().expect("checked nonempty") {
        Letter::Eps => (GeneratorKind::Exterior, true),
        Letter::Rho(_) | Letter::Phi(_) => (GeneratorKind::TruncatedHeightP, false),
        Letter::Mu => (GeneratorKind::Free, false),
        Letter::X => match family.kind {
            FamilyKind::BDoublePrime { m } => (GeneratorKind::TruncatedHeightM(m), false),
            _ => (GeneratorKind::Free, false),
        },
    };
    Ok(Classification { kind, primitive })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchMode {
    /// Every pair with the right degree shape.
    Raw,
    /// Source must be `γ_{p^k}` with `k ≥ 1`, target must be primitive.
    Refined,
}

impl FromStr for SearchMode {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(SearchMode::Raw),
            "refined" => Ok(SearchMode::Refined),
            _ => Err(WordError::Parse(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DifferentialCandidate {
    pub source: Word,
    pub source_bidegree: Bidegree,
    pub target: Word,
    pub target_bidegree: Bidegree,
    pub drop: u64,
}

impl DifferentialCandidate {
    /// `source(x,y) ---> target(x',y'): drop`, in key syntax.
    pub fn key_line(&self) -> String {
        format!(
            "{}{} ---> {}{}: {}",
            self.source.key(),
            self.source_bidegree,
            self.target.key(),
            self.target_bidegree,
            self.drop
        )
    }

    pub fn pretty_line(&self) -> String {
        format!(
            "{}{} ---> {}{}: {}",
            self.source.pretty(),
            self.source_bidegree,
            self.target.pretty(),
            self.target_bidegree,
            self.drop
        )
    }
}

/// `floor(log_p(n))` for `n ≥ 1`, in exact integer arithmetic.
pub fn floor_log(p: u64, n: u64) -> u32 {
    assert!(p >= 2 && n >= 1);
    let mut k = 0;
    let mut acc = 1u64;
    while let Some(next) = acc.checked_mul(p) {
        if next > n {
            break;
        }
        acc = next;
        k += 1;
    }
    k
}

/// All exponent vectors of the given length with entry sum at most `bound`.
pub fn exponent_lists(len: usize, bound: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for a in 0..=remaining {
            prefix.push(a);
            go(len, remaining - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, bound, &mut Vec::with_capacity(len), &mut out);
    out
}

/// All `B`-words of length `n` whose exponents sum to at most
/// `floor(log_p max_degree)`, with their bidegrees. No degree filter is
/// applied, since the exponent bound alone decides what is searched.
pub fn search_elements(n: usize, p: u32, max_degree: u64) -> Result<Vec<(Word, Bidegree)>, WordError> {
    let family = WordFamily::b();
    family.check_params(p)?;
    if max_degree == 0 {
        return Err(WordError::Precondition {
            what: "the differential search",
            requirement: "max_degree >= 1",
        });
    }
    let bound = floor_log(p as u64, max_degree);
    let mut out = Vec::new();
    for shape in enumerate_shapes(n, &family)? {
        for exps in exponent_lists(shape.num_exponents(), bound) {
            let w = shape.instantiate(&exps);
            let bd = bidegree_unchecked(&w, p as u64, &family).ok_or_else(|| WordError::Overflow(w.key()))?;
            out.push((w, bd));
        }
    }
    Ok(out)
}

/// Pairs of words of length `n` in total degrees `t` and `t - 1` whose
/// homological degrees differ by at least two.
pub fn diff_candidates(
    n: usize,
    p: u32,
    max_degree: u64,
    mode: SearchMode,
) -> Result<Vec<DifferentialCandidate>, WordError> {
    if n < 2 {
        return Err(WordError::Precondition {
            what: "the differential search",
            requirement: "n >= 2",
        });
    }
    let elements = search_elements(n, p, max_degree)?;
    let mut by_total: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, (_, bd)) in elements.iter().enumerate() {
        by_total.entry(bd.total()).or_default().push(i);
    }
    let mut out = Vec::new();
    for (source, sb) in &elements {
        if mode == SearchMode::Refined && !matches!(source.leftmost(), Some(Letter::Rho(k) | Letter::Phi(k)) if k >= 1)
        {
            continue;
        }
        let Some(targets) = sb.total().checked_sub(1).and_then(|t| by_total.get(&t)) else {
            continue;
        };
        for &j in targets {
            let (target, tb) = &elements[j];
            if sb.hom <= tb.hom + 1 {
                continue;
            }
            if mode == SearchMode::Refined && target.leftmost() != Some(Letter::Eps) {
                continue;
            }
            out.push(DifferentialCandidate {
                source: source.clone(),
                source_bidegree: *sb,
                target: target.clone(),
                target_bidegree: *tb,
                drop: sb.hom - tb.hom,
            });
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerwordsReport {
    pub p: u32,
    pub k_max: u32,
    /// For each `k`, every admissible word of length at most `2p+1` and
    /// total degree `4p^k`.
    pub found: BTreeMap<u32, Vec<Word>>,
    /// Words of degree `4p^k` other than `ρ^kεμ`.
    pub violations: Vec<Word>,
}

impl PowerwordsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.found.values().all(|ws| ws.len() == 1)
    }
}

/// Exhaustively lists the words of length at most `2p+1` in degrees
/// `4p^k`, `k ≤ k_max`, and checks that `ρ^kεμ` is the only one.
pub fn verify_powerwords(p: u32, k_max: u32) -> Result<PowerwordsReport, WordError> {
    if p == 2 || !is_prime(p) {
        return Err(WordError::Precondition {
            what: "the power-word check",
            requirement: "an odd prime",
        });
    }
    let family = WordFamily::b();
    let pp = p as u64;
    let targets: BTreeMap<u64, u32> = (0..=k_max)
        .map(|k| {
            Ok((
                4 * p_pow(pp, k).ok_or_else(|| WordError::Overflow(format!("4*{p}^{k}")))?,
                k,
            ))
        })
        .collect::<Result<_, WordError>>()?;
    let bound = *targets.keys().last().expect("k range is nonempty");
    let mut found: BTreeMap<u32, Vec<Word>> = (0..=k_max).map(|k| (k, Vec::new())).collect();
    for n in 1..=(2 * p as usize + 1) {
        for (w, bd) in enumerate_words(n, &family, p, bound)? {
            if let Some(&k) = targets.get(&bd.total()) {
                found.get_mut(&k).unwrap().push(w);
            }
        }
    }
    let violations = found
        .iter()
        .flat_map(|(&k, ws)| {
            let expected = Word(vec![Letter::Rho(k), Letter::Eps, Letter::Mu]);
            ws.iter().filter(move |w| **w != expected).cloned()
        })
        .collect();
    Ok(PowerwordsReport {
        p,
        k_max,
        found,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Independent count of `B` shapes via the branching rules on the
    /// leftmost letter.
    fn count_b_shapes(n: usize) -> u64 {
        // state: leftmost letter class (mu, eps, rho, phi)
        let mut counts = [1u64, 0, 0, 0];
        for _ in 1..n {
            let [mu, eps, rho, phi] = counts;
            counts = [0, mu + rho + phi, eps, rho + phi];
        }
        counts.iter().sum()
    }

    /// Scalar total-degree recursion, independent of `Bidegree`.
    fn scalar_degree(word: &Word, p: u64, base: u64) -> u64 {
        word.letters().iter().rev().fold(0, |tail, l| match l {
            Letter::Mu | Letter::X => base,
            Letter::Eps => 1 + tail,
            Letter::Rho(k) => p.pow(*k) * (1 + tail),
            Letter::Phi(k) => p.pow(*k) * (2 + p * tail),
        })
    }

    #[test]
    fn base_shapes() {
        let b = WordFamily::b();
        assert_eq!(enumerate_shapes(1, &b).unwrap(), vec![Shape(vec![LetterKind::Mu])]);
        assert_eq!(
            enumerate_shapes(2, &b).unwrap(),
            vec![Shape(vec![LetterKind::Eps, LetterKind::Mu])]
        );
        assert_eq!(enumerate_shapes(0, &b), Err(WordError::ZeroLength));
    }

    #[test]
    fn shape_counts_for_b() {
        let b = WordFamily::b();
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_shapes(n, &b).unwrap().len()).collect();
        let oracle: Vec<u64> = (1..=7).map(count_b_shapes).collect();
        assert_eq!(oracle, vec![1, 1, 1, 2, 3, 5, 8]);
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn rho_eps_mu_words_up_to_108() {
        let words = enumerate_words(3, &WordFamily::b(), 3, 108).unwrap();
        let got: Vec<(String, u64)> = words.iter().map(|(w, b)| (w.key(), b.total())).collect();
        assert_eq!(
            got,
            vec![
                ("r^0eu".into(), 4),
                ("r^1eu".into(), 12),
                ("r^2eu".into(), 36),
                ("r^3eu".into(), 108)
            ]
        );
    }

    #[test]
    fn primed_families_in_length_two() {
        let words = enumerate_words(2, &WordFamily::b_prime(0), 5, 5).unwrap();
        assert_eq!(words, vec![(w("ex"), Bidegree::new(1, 0))]);

        for p in [2u32, 3] {
            let fam = WordFamily::b_double_prime(3, 0).unwrap();
            let got: Vec<(String, u64)> = enumerate_words(2, &fam, p, 5)
                .unwrap()
                .iter()
                .map(|(w, b)| (w.key(), b.total()))
                .collect();
            // deg φ^k x = 2 p^k
            let mut expected = vec![("ex".to_string(), 1u64), ("l^0x".to_string(), 2)];
            if 2 * p as u64 <= 5 {
                expected.push(("l^1x".to_string(), 2 * p as u64));
            }
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn bidegree_fixtures() {
        let b = WordFamily::b();
        assert_eq!(bidegree(&w("eu"), 3, &b).unwrap(), Bidegree::new(1, 2));
        for p in [3u32, 5, 7] {
            let pp = p as u64;
            for k in 0..3 {
                let word = Word(vec![Letter::Rho(k), Letter::Eps, Letter::Mu]);
                let q = pp.pow(k);
                assert_eq!(bidegree(&word, p, &b).unwrap(), Bidegree::new(q, 3 * q));
            }
            let (src, tgt) = prop_four_four_pair(p);
            assert_eq!(bidegree(&src, p, &b).unwrap(), Bidegree::new(2 * pp, 6 * pp.pow(3)));
            assert_eq!(
                bidegree(&tgt, p, &b).unwrap(),
                Bidegree::new(1, 6 * pp.pow(3) + 2 * pp - 2)
            );
        }
    }

    /// `φ¹(ρ⁰ε)^{p-1}φ⁰ρ⁰εμ` and `ε(ρ⁰ε)^{p-2}φ⁰ρ²ερ⁰εμ`.
    fn prop_four_four_pair(p: u32) -> (Word, Word) {
        let re = w("r^0e");
        let src = Word(vec![Letter::Phi(1)])
            .then(&re.repeat(p as usize - 1))
            .then(&w("l^0r^0eu"));
        let tgt = w("e").then(&re.repeat(p as usize - 2)).then(&w("l^0r^2er^0eu"));
        (src, tgt)
    }

    #[test]
    fn phi_on_truncated_base_uses_height() {
        let fam = WordFamily::b_double_prime(3, 2).unwrap();
        // ||φ^1 x|| = p (2, m|x|) = 3 (2, 6)
        assert_eq!(bidegree(&w("l^1x"), 3, &fam).unwrap(), Bidegree::new(6, 18));
        // φ on a non-base tail uses p
        assert_eq!(bidegree(&w("l^0l^0x"), 3, &fam).unwrap(), Bidegree::new(2, 3 * 8));
    }

    #[test]
    fn admissibility_errors() {
        let b = WordFamily::b();
        assert!(bidegree(&w("r^0u"), 3, &b).is_err());
        assert!(bidegree(&w("eeu"), 3, &b).is_err());
        assert!(bidegree(&w("ex"), 3, &b).is_err());
        assert!(WordFamily::b_prime(0).check(&w("l^0x")).is_err());
        assert!(WordFamily::b_double_prime(2, 0).unwrap().check(&w("l^0x")).is_ok());
        assert!(WordFamily::b_double_prime(1, 0).is_err());
        assert!(enumerate_words(2, &WordFamily::b_prime(1), 3, 10).is_err());
        assert!(enumerate_words(2, &WordFamily::b_prime(1), 2, 10).is_ok());
    }

    #[test]
    fn classification() {
        let b = WordFamily::b();
        let c = classify(&w("eu"), &b).unwrap();
        assert_eq!((c.kind, c.primitive), (GeneratorKind::Exterior, true));
        let c = classify(&w("r^1eu"), &b).unwrap();
        assert_eq!((c.kind, c.primitive), (GeneratorKind::TruncatedHeightP, false));
        let c = classify(&w("u"), &b).unwrap();
        assert_eq!((c.kind, c.primitive), (GeneratorKind::Free, false));
        let bpp = WordFamily::b_double_prime(4, 0).unwrap();
        assert_eq!(
            classify(&w("x"), &bpp).unwrap().kind,
            GeneratorKind::TruncatedHeightM(4)
        );
    }

    #[test]
    fn rendering_round_trips() {
        let word = w("l^1r^0el^0r^12eu");
        assert_eq!(word.key(), "l^1r^0el^0r^12eu");
        assert_eq!(word.pretty(), "φ¹ρ⁰εφ⁰ρ¹²εμ");
        assert_eq!(word.pretty().parse::<Word>().unwrap(), word);
        assert_eq!(w("ρ^2εμ"), w("r^2eu"));
        assert!("r^eu".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }

    #[test]
    fn floor_log_exact() {
        assert_eq!(floor_log(3, 1), 0);
        assert_eq!(floor_log(3, 26), 2);
        assert_eq!(floor_log(3, 27), 3);
        assert_eq!(floor_log(3, 243), 5);
        assert_eq!(floor_log(2, 1024), 10);
    }

    #[test]
    fn exponent_lists_sum_bound() {
        assert_eq!(exponent_lists(0, 3), vec![Vec::<u32>::new()]);
        assert_eq!(exponent_lists(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        // C(len + bound, len)
        assert_eq!(exponent_lists(4, 4).len(), 70);
    }

    #[test]
    fn short_searches_are_empty() {
        for p in [2u32, 3, 5] {
            for mode in [SearchMode::Raw, SearchMode::Refined] {
                assert!(diff_candidates(2, p, 1000, mode).unwrap().is_empty());
            }
        }
        assert!(diff_candidates(1, 3, 10, SearchMode::Raw).is_err());
    }

    #[test]
    fn refined_search_contains_the_length_nine_pair() {
        let cands = diff_candidates(9, 3, 170, SearchMode::Refined).unwrap();
        let (src, tgt) = prop_four_four_pair(3);
        let hit = cands
            .iter()
            .find(|c| c.source == src && c.target == tgt)
            .expect("pair present");
        assert_eq!(hit.source_bidegree, Bidegree::new(6, 162));
        assert_eq!(hit.target_bidegree, Bidegree::new(1, 166));
        assert_eq!(hit.drop, 5);
        assert_eq!(
            hit.key_line(),
            "l^1r^0er^0el^0r^0eu(6,162) ---> er^0el^0r^2er^0eu(1,166): 5"
        );
    }

    #[test]
    fn powerwords_small_primes() {
        let r = verify_powerwords(3, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.found[&0], vec![w("r^0eu")]);
        assert_eq!(r.found[&3], vec![w("r^3eu")]);
        assert!(verify_powerwords(5, 2).unwrap().passed());
        assert!(verify_powerwords(2, 1).is_err());
    }

    fn family_strategy() -> impl Strategy<Value = WordFamily> {
        prop_oneof![
            Just(WordFamily::b()),
            Just(WordFamily::b_prime(0)),
            Just(WordFamily::b_prime(2)),
            (2u64..6).prop_map(|m| WordFamily::b_double_prime(m, 0).unwrap()),
            (2u64..6).prop_map(|m| WordFamily::b_double_prime(m, 2).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn enumerated_words_are_admissible_and_bounded(
            fam in family_strategy(), n in 1usize..7, p in prop::sample::select(vec![2u32, 3, 5]), bound in 1u64..200
        ) {
            let words = enumerate_words(n, &fam, p, bound).unwrap();
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), words.len());
            for (word, bd) in &words {
                prop_assert!(fam.check(word).is_ok());
                prop_assert_eq!(word.len(), n);
                prop_assert!(bd.total() <= bound);
                prop_assert_eq!(*bd, bidegree(word, p, &fam).unwrap());
                let c = classify(word, &fam).unwrap();
                prop_assert_eq!(c.primitive, word.leftmost() == Some(Letter::Eps));
            }
            for s in enumerate_shapes(n, &fam).unwrap() {
                prop_assert!(fam.check(&s.instantiate(&vec![0; s.num_exponents()])).is_ok());
            }
        }

        #[test]
        fn enumeration_is_complete(n in 1usize..6, p in prop::sample::select(vec![2u32, 3]), bound in 1u64..120) {
            // brute force over all exponent vectors with entries <= log_p(bound)
            let fam = WordFamily::b();
            let words = enumerate_words(n, &fam, p, bound).unwrap();
            let mut brute = Vec::new();
            for s in enumerate_shapes(n, &fam).unwrap() {
                let e = s.num_exponents();
                let cap = floor_log(p as u64, bound) + 1;
                let total = (cap as usize).pow(e as u32);
                for idx in 0..total {
                    let mut exps = Vec::with_capacity(e);
                    let mut r = idx;
                    for _ in 0..e { exps.push((r % cap as usize) as u32); r /= cap as usize; }
                    let word = s.instantiate(&exps);
                    let bd = bidegree(&word, p, &fam).unwrap();
                    if bd.total() <= bound { brute.push((word, bd)); }
                }
            }
            brute.sort();
            prop_assert_eq!(words, brute);
        }

        #[test]
        fn total_degree_matches_scalar_recursion(n in 1usize..7, p in prop::sample::select(vec![2u32, 3, 5])) {
            for (word, bd) in search_elements(n, p, 30).unwrap() {
                prop_assert_eq!(bd.total(), scalar_degree(&word, p as u64, 2));
            }
        }

        #[test]
        fn raising_an_exponent_raises_the_degree(n in 3usize..7, p in prop::sample::select(vec![2u32, 3])) {
            let fam = WordFamily::b();
            for (word, bd) in search_elements(n, p, 9).unwrap() {
                for i in 0..word.len() {
                    let mut bumped = word.clone();
                    match &mut bumped.0[i] {
                        Letter::Rho(k) | Letter::Phi(k) => *k += 1,
                        _ => continue,
                    }
                    prop_assert!(bidegree(&bumped, p, &fam).unwrap().total() > bd.total());
                }
            }
        }
    }
}

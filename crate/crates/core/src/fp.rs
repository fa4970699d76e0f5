//! Exact linear algebra over the prime field `F_p`.
//!
//! Matrices act on column vectors: a differential `C_s -> C_{s-1}` is stored
//! with `rows = dim C_{s-1}` and `cols = dim C_s`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("dimension mismatch: d_out has {d_out_cols} columns but d_in has {d_in_rows} rows")]
    DimensionMismatch { d_out_cols: usize, d_in_rows: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("d_out * d_in is nonzero (first nonzero entry at ({row}, {col}))")]
    CompositionNonzero { row: usize, col: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`. Primality is checked once, here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FpError> {
        if is_prime(p) {
            Ok(Fp { p })
        } else {
            Err(FpError::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, value: i64) -> FpScalar {
        FpScalar {
            value: self.reduce(value),
            modulus: self.p,
        }
    }

    #[inline]
    pub fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Inverse of a nonzero residue, by Fermat.
    pub(crate) fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub(crate) fn pow(&self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `binom(n, k) mod p` via Lucas' theorem.
    pub fn binomial(&self, mut n: u64, mut k: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u32;
        while n > 0 || k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            let mut c = 1u64;
            for i in 0..kd {
                c = c * (nd - i) / (i + 1);
            }
            acc = self.mul(acc, (c % p) as u32);
            n /= p;
            k /= p;
        }
        acc
    }
}

/// A residue together with its modulus. Arithmetic between residues of
/// different moduli panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: u32,
}

impl FpScalar {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<FpScalar> {
        if self.value == 0 {
            return None;
        }
        let f = Fp { p: self.modulus };
        Some(FpScalar {
            value: f.inv(self.value),
            modulus: self.modulus,
        })
    }

    fn field(self, other: FpScalar) -> Fp {
        assert_eq!(
            self.modulus, other.modulus,
            "mixing scalars from F_{} and F_{}",
            self.modulus, other.modulus
        );
        Fp { p: self.modulus }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        let f = self.field(rhs);
        FpScalar {
            value: f.add(self.value, rhs.value),
            modulus: f.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        let f = self.field(rhs);
        FpScalar {
            value: f.sub(self.value, rhs.value),
            modulus: f.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        let f = self.field(rhs);
        FpScalar {
            value: f.mul(self.value, rhs.value),
            modulus: f.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        let f = Fp { p: self.modulus };
        FpScalar {
            value: f.neg(self.value),
            modulus: self.modulus,
        }
    }
}

type SparseRow = Vec<(usize, u32)>;

/// Immutable sparse matrix over `F_p`, stored row-major with sorted columns
/// and no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseFpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseFpMatrix {
    pub fn zero(field: Fp, rows: usize, cols: usize) -> Self {
        SparseFpMatrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        SparseFpMatrix {
            field,
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triples. Repeated keys are
    /// summed, and entries that reduce to zero are dropped.
    pub fn from_triplets<I>(field: Fp, rows: usize, cols: usize, entries: I) -> Result<Self, FpError>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(FpError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let v = field.reduce(v);
            if v != 0 {
                data[r].push((c, v));
            }
        }
        for row in data.iter_mut() {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = field.add(*lv, v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            *row = merged;
        }
        Ok(SparseFpMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_dense(field: Fp, dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let entries = dense
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_triplets(field, rows, cols, entries).expect("dense input is in bounds")
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map_or(0, |i| self.data[row][i].1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, FpScalar)> + '_ {
        let p = self.field.p;
        self.data
            .iter()
            .enumerate()
            .flat_map(move |(r, row)| row.iter().map(move |&(c, v)| (r, c, FpScalar { value: v, modulus: p })))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> SparseFpMatrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                data[c].push((r, v));
            }
        }
        SparseFpMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseFpMatrix) -> Result<SparseFpMatrix, FpError> {
        if self.field != rhs.field {
            return Err(FpError::ModulusMismatch(self.field.p, rhs.field.p));
        }
        if self.cols != rhs.rows {
            return Err(FpError::DimensionMismatch {
                d_out_cols: self.cols,
                d_in_rows: rhs.rows,
            });
        }
        let f = self.field;
        let mut acc = vec![0u32; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(j, b) in &rhs.data[k] {
                    if acc[j] == 0 {
                        touched.push(j);
                    }
                    acc[j] = f.add(acc[j], f.mul(a, b));
                    // a cancellation to zero leaves j in `touched`; filtered below
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let out: SparseRow = touched
                .iter()
                .filter_map(|&j| {
                    let v = std::mem::take(&mut acc[j]);
                    (v != 0).then_some((j, v))
                })
                .collect();
            touched.clear();
            data.push(out);
        }
        Ok(SparseFpMatrix {
            field: f,
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Rank over `F_p`, by sparse elimination with Markowitz-style pivoting:
    /// the shortest remaining row is eliminated first, on its column of
    /// smallest count.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut rows: Vec<SparseRow> = self.data.clone();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols];
        let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (r, row) in rows.iter().enumerate() {
            if !row.is_empty() {
                queue.insert((row.len(), r));
                for &(c, _) in row {
                    col_rows[c].insert(r);
                }
            }
        }
        let mut rank = 0;
        let mut scratch: SparseRow = Vec::new();
        while let Some((_, pr)) = queue.pop_first() {
            let pivot_row = std::mem::take(&mut rows[pr]);
            for &(c, _) in &pivot_row {
                col_rows[c].remove(&pr);
            }
            let &(pc, pv) = pivot_row
                .iter()
                .min_by_key(|&&(c, _)| (col_rows[c].len(), c))
                .expect("queued rows are nonempty");
            let pinv = f.inv(pv);
            rank += 1;
            let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
            for r in targets {
                let row = std::mem::take(&mut rows[r]);
                queue.remove(&(row.len(), r));
                let tv = row
                    .binary_search_by_key(&pc, |&(c, _)| c)
                    .map(|i| row[i].1)
                    .expect("column index is consistent");
                let factor = f.neg(f.mul(tv, pinv));
                scratch.clear();
                let (mut i, mut j) = (0, 0);
                while i < row.len() || j < pivot_row.len() {
                    let take_row = j >= pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0);
                    let take_piv = i >= row.len() || (j < pivot_row.len() && pivot_row[j].0 < row[i].0);
                    if take_row {
                        scratch.push(row[i]);
                        i += 1;
                    } else if take_piv {
                        let (c, v) = pivot_row[j];
                        scratch.push((c, f.mul(factor, v)));
                        col_rows[c].insert(r);
                        j += 1;
                    } else {
                        let c = row[i].0;
                        let v = f.add(row[i].1, f.mul(factor, pivot_row[j].1));
                        if v != 0 {
                            scratch.push((c, v));
                        } else {
                            col_rows[c].remove(&r);
                        }
                        i += 1;
                        j += 1;
                    }
                }
                let new_row = std::mem::take(&mut scratch);
                if !new_row.is_empty() {
                    queue.insert((new_row.len(), r));
                }
                rows[r] = new_row;
            }
        }
        rank
    }

    /// Dimension of the kernel of the map `F_p^cols -> F_p^rows`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// `dim ker(d_out) - rank(d_in)` for `d_in: C_{s+1} -> C_s` and
/// `d_out: C_s -> C_{s-1}`, after checking `d_out * d_in = 0`.
pub fn homology_dim(d_in: &SparseFpMatrix, d_out: &SparseFpMatrix) -> Result<usize, FpError> {
    if d_out.cols != d_in.rows {
        return Err(FpError::DimensionMismatch {
            d_out_cols: d_out.cols,
            d_in_rows: d_in.rows,
        });
    }
    let product = d_out.mul(d_in)?;
    if let Some((row, col, _)) = product.entries().next() {
        return Err(FpError::CompositionNonzero { row, col });
    }
    let ker = d_out.kernel_dim();
    let im = d_in.rank();
    Ok(ker - im)
}

//! ±1 matrices, the excess bound, the quadratic-residue base matrices and the
//! diagonal signings that turn them into regular or biregular matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::field::Subfield;
use crate::intersection::{
    intersection_profile, paired_design_from, paired_members, paley_design_from,
    scheme_design_from, IntersectionSet, ParamChoice, ResidueTable,
};

/// An n×n matrix over {+1, -1}. Bit 1 means -1.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SignMatrix({})\n{}", self.n, self.to_text())
    }
}

impl SignMatrix {
    /// The all-ones matrix.
    pub fn ones(n: usize) -> Self {
        let words = n.div_ceil(64);
        SignMatrix {
            n,
            words,
            bits: vec![0; n * words],
            labels: None,
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> i8) -> Self {
        let mut h = Self::ones(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) < 0 {
                    h.flip(i, j);
                }
            }
        }
        h
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        if self.row(i)[j / 64] >> (j % 64) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Inner product of rows i and j.
    pub fn dot(&self, i: usize, j: usize) -> i64 {
        let diff: u32 = self
            .row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        self.n as i64 - 2 * diff as i64
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        let neg: u32 = self.row(i).iter().map(|w| w.count_ones()).sum();
        self.n as i64 - 2 * neg as i64
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.row_sum(i)).collect()
    }

    pub fn excess(&self) -> i64 {
        self.row_sums().iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.n, |i, j| self.get(j, i));
        t.labels = self.labels.clone();
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// First row pair (i < j) with nonzero inner product.
    pub fn first_violation(&self) -> Option<(usize, usize, i64)> {
        (0..self.n).into_par_iter().find_map_first(|i| {
            (i + 1..self.n).find_map(|j| {
                let d = self.dot(i, j);
                (d != 0).then_some((i, j, d))
            })
        })
    }

    pub fn check_hadamard(&self) -> Result<()> {
        match self.first_violation() {
            Some((i, j, d)) => Err(Error::NotHadamard(i, j, d)),
            None => Ok(()),
        }
    }

    /// The text format: the order on the first line, then one row of `+`/`-`
    /// per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.n + 1) * (self.n + 1) + 8);
        writeln!(out, "{}", self.n).unwrap();
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.get(i, j) < 0 { '-' } else { '+' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("expected the matrix order, found {first:?}"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: ln,
                msg: "order must be positive".into(),
            });
        }
        let mut h = Self::ones(n);
        let mut count = 0;
        for (ln, line) in lines {
            if count == n {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("more than {n} rows"),
                });
            }
            if line.chars().count() != n {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {n} entries, found {}", line.chars().count()),
                });
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '+' => {}
                    '-' => h.flip(count, j),
                    _ => {
                        return Err(Error::Parse {
                            line: ln,
                            msg: format!("unexpected character {c:?}"),
                        })
                    }
                }
            }
            count += 1;
        }
        if count != n {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("expected {n} rows, found {count}"),
            });
        }
        Ok(h)
    }
}

/// A ±1 diagonal matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSigning {
    pub signs: Vec<i8>,
}

impl DiagonalSigning {
    pub fn identity(n: usize) -> Self {
        DiagonalSigning { signs: vec![1; n] }
    }

    /// Negates exactly the listed indices.
    pub fn negating(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(n);
        for i in indices {
            s.signs[i] = -s.signs[i];
        }
        s
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn negated_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }
}

/// diag(rows) · H · diag(cols).
pub fn apply_signing(
    h: &SignMatrix,
    rows: &DiagonalSigning,
    cols: &DiagonalSigning,
) -> Result<SignMatrix> {
    for s in [rows, cols] {
        if s.len() != h.n {
            return Err(Error::LengthMismatch {
                expected: h.n,
                got: s.len(),
            });
        }
    }
    let mut col_mask = vec![0u64; h.words];
    for (j, &s) in cols.signs.iter().enumerate() {
        if s < 0 {
            col_mask[j / 64] |= 1 << (j % 64);
        }
    }
    let mut full = vec![u64::MAX; h.words];
    if h.n % 64 != 0 {
        full[h.words - 1] = (1u64 << (h.n % 64)) - 1;
    }
    let mut out = h.clone();
    for i in 0..h.n {
        let neg = rows.signs[i] < 0;
        for w in 0..h.words {
            let mut x = out.bits[i * h.words + w] ^ col_mask[w];
            if neg {
                x ^= full[w];
            }
            out.bits[i * h.words + w] = x;
        }
    }
    Ok(out)
}

/// The parameters of the excess bound for order n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessBound {
    pub k: i64,
    pub t: i64,
    pub s: i64,
    pub bound: i64,
    /// The same expression evaluated at the other choice of t.
    pub t_alt: i64,
    pub s_alt: i64,
    pub bound_alt: i64,
}

fn bound_at(n: i64, t: i64) -> (i64, i64) {
    let s = n * ((t + 4) * (t + 4) - n) / (8 * t + 16);
    (s, n * (t + 4) - 4 * s)
}

/// The excess bound. Orders below 4 fall back to ⌊n^{3/2}⌋.
pub fn excess_bound(n: u64) -> ExcessBound {
    let ni = n as i64;
    if n < 4 {
        let b = isqrt(n * n * n) as i64;
        return ExcessBound {
            k: 0,
            t: 0,
            s: 0,
            bound: b,
            t_alt: 0,
            s_alt: 0,
            bound_alt: b,
        };
    }
    let mut k = isqrt(n) as i64;
    if k % 2 == 1 {
        k -= 1;
    }
    let (t, t_alt) = if (ni - k * k).abs() < (ni - (k + 2) * (k + 2)).abs() {
        (k, k - 2)
    } else {
        (k - 2, k)
    };
    let (s, bound) = bound_at(ni, t);
    let (s_alt, bound_alt) = bound_at(ni, t_alt);
    ExcessBound {
        k,
        t,
        s,
        bound,
        t_alt,
        s_alt,
        bound_alt,
    }
}

/// Row-sum summary of a Hadamard matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessReport {
    pub n: usize,
    pub excess: i64,
    pub k: i64,
    pub t: i64,
    pub s: i64,
    pub bound: i64,
    pub t_alt: i64,
    pub s_alt: i64,
    pub bound_alt: i64,
    pub row_sums: BTreeMap<i64, usize>,
    pub classification: String,
    pub k1: Option<i64>,
    pub k2: Option<i64>,
    pub m1: Option<i64>,
    pub m2: Option<i64>,
    /// Whether the biregular frequencies agree with the closed form.
    pub frequencies_match: Option<bool>,
    pub attains_bound: bool,
}

impl ExcessReport {
    pub fn is_regular(&self) -> bool {
        self.row_sums.len() == 1
    }

    pub fn is_biregular(&self) -> bool {
        self.row_sums.len() == 2
    }

    pub fn row_sum_values(&self) -> Vec<i64> {
        self.row_sums.keys().copied().collect()
    }
}

/// Excess, bound and row-sum classification. Fails unless H is Hadamard.
pub fn excess_and_bound(h: &SignMatrix) -> Result<ExcessReport> {
    h.check_hadamard()?;
    Ok(report_unchecked(h))
}

pub(crate) fn report_unchecked(h: &SignMatrix) -> ExcessReport {
    let n = h.order();
    let mut row_sums = BTreeMap::new();
    for r in h.row_sums() {
        *row_sums.entry(r).or_insert(0usize) += 1;
    }
    let excess: i64 = row_sums.iter().map(|(v, c)| v * *c as i64).sum();
    let b = excess_bound(n as u64);
    let (mut k1, mut k2, mut m1, mut m2, mut freq) = (None, None, None, None, None);
    let classification = match row_sums.len() {
        1 => "regular".to_string(),
        2 => {
            let (&lo, &c_lo) = row_sums.iter().next().unwrap();
            let (&hi, &c_hi) = row_sums.iter().next_back().unwrap();
            let nn = n as i64;
            let denom = hi * hi - lo * lo;
            if denom != 0 {
                let num = nn * nn - nn * lo * lo;
                let exact = num % denom == 0;
                let f1 = num / denom;
                freq = Some(exact && f1 == c_hi as i64 && nn - f1 == c_lo as i64);
            }
            k1 = Some(hi);
            k2 = Some(lo);
            m1 = Some(c_hi as i64);
            m2 = Some(c_lo as i64);
            format!("biregular({hi},{lo},{c_hi},{c_lo})")
        }
        _ => "irregular".to_string(),
    };
    ExcessReport {
        n,
        excess,
        k: b.k,
        t: b.t,
        s: b.s,
        bound: b.bound,
        t_alt: b.t_alt,
        s_alt: b.s_alt,
        bound_alt: b.bound_alt,
        row_sums,
        classification,
        k1,
        k2,
        m1,
        m2,
        frequencies_match: freq,
        attains_bound: excess == b.bound,
    }
}

fn element_labels(sub: &Subfield, prefix: &str) -> Vec<String> {
    (0..sub.order() as usize)
        .map(|i| match i {
            0 => format!("{prefix}0"),
            _ => format!("{prefix}w^{}", i - 1),
        })
        .collect()
}

fn check_residue(sub: &Subfield, residue: u64) -> Result<()> {
    let q = sub.order() as u64;
    if q % 4 != residue {
        return Err(Error::WrongResidue {
            q,
            residue,
            modulus: 4,
        });
    }
    Ok(())
}

/// [[-1, 1ᵀ], [1, M]] with M(i, j) = 1 iff x_j - x_i ∈ C ∪ {0}; q ≡ 3 mod 4.
pub fn construct_q3(sub: &Subfield) -> Result<SignMatrix> {
    check_residue(sub, 3)?;
    Ok(q3_from(&ResidueTable::new(sub)).with_labels(q3_labels(sub)))
}

fn q3_labels(sub: &Subfield) -> Vec<String> {
    let mut labels = vec!["*".to_string()];
    labels.extend(element_labels(sub, ""));
    labels
}

fn q3_from(t: &ResidueTable) -> SignMatrix {
    SignMatrix::from_fn(t.order() + 1, |i, j| match (i, j) {
        (0, 0) => -1,
        (0, _) | (_, 0) => 1,
        _ => {
            if t.get(i - 1, j - 1) >= 0 {
                1
            } else {
                -1
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Q1Variant {
    Plain,
    /// Second row and column negated.
    Negated2,
}

/// The symmetric block matrix of order 2q+2 indexed by 0, 1, {0}×F_q, {1}×F_q:
///
/// ```text
///  1  -1   1ᵀ   1ᵀ
/// -1  -1   1ᵀ  -1ᵀ
///  1   1   M1   M2
///  1  -1   M2   M3
/// ```
///
/// with M1 = M + I, M2 = M - I, M3 = -M1; q ≡ 1 mod 4.
pub fn construct_q1(sub: &Subfield, variant: Q1Variant) -> Result<SignMatrix> {
    check_residue(sub, 1)?;
    let mut labels = vec!["a".to_string(), "b".to_string()];
    labels.extend(element_labels(sub, "0:"));
    labels.extend(element_labels(sub, "1:"));
    Ok(q1_from(&ResidueTable::new(sub), variant).with_labels(labels))
}

fn q1_from(t: &ResidueTable, variant: Q1Variant) -> SignMatrix {
    let q = t.order();
    let m1 = |i: usize, j: usize| if t.get(i, j) >= 0 { 1 } else { -1 };
    let m2 = |i: usize, j: usize| if t.get(i, j) == 1 { 1 } else { -1 };
    let entry = |i: usize, j: usize| -> i8 {
        match (i, j) {
            (0, 0) => 1,
            (0, 1) | (1, 0) | (1, 1) => -1,
            (0, _) | (_, 0) => 1,
            (1, j) => {
                if j < 2 + q {
                    1
                } else {
                    -1
                }
            }
            (i, 1) => {
                if i < 2 + q {
                    1
                } else {
                    -1
                }
            }
            _ => {
                let (bi, ii) = ((i - 2) / q, (i - 2) % q);
                let (bj, jj) = ((j - 2) / q, (j - 2) % q);
                match (bi, bj) {
                    (0, 0) => m1(ii, jj),
                    (1, 1) => -m1(ii, jj),
                    _ => m2(ii, jj),
                }
            }
        }
    };
    let negate = variant == Q1Variant::Negated2;
    SignMatrix::from_fn(2 * q + 2, |i, j| {
        let v = entry(i, j);
        if negate && ((i == 1) ^ (j == 1)) {
            -v
        } else {
            v
        }
    })
}

/// A base matrix, its signed form and the intersection data behind the signing.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ParamChoice,
    pub base: SignMatrix,
    pub transformed: SignMatrix,
    pub row_signs: DiagonalSigning,
    pub col_signs: DiagonalSigning,
    /// Sizes of the point sets that were negated as columns, one per copy of F_q.
    pub set_sizes: Vec<usize>,
    /// Intersection profiles used to choose the negated rows.
    pub profiles: Vec<IntersectionSet>,
    pub report: ExcessReport,
}

fn finish(
    params: ParamChoice,
    base: SignMatrix,
    rows: DiagonalSigning,
    cols: DiagonalSigning,
    set_sizes: Vec<usize>,
    profiles: Vec<IntersectionSet>,
) -> Result<Construction> {
    base.check_hadamard()?;
    let transformed = apply_signing(&base, &rows, &cols)?;
    let transformed = match base.labels() {
        Some(l) => transformed.with_labels(l.to_vec()),
        None => transformed,
    };
    let report = excess_and_bound(&transformed)?;
    Ok(Construction {
        params,
        base,
        transformed,
        row_signs: rows,
        col_signs: cols,
        set_sizes,
        profiles,
        report,
    })
}

/// Signs the q ≡ 3 mod 4 matrix by a four-intersection set D ⊂ F_q: columns
/// 1 + D are negated, and rows 1 + s whose block meets D in at least
/// `threshold` points.
pub fn transform_biregular_q3(
    sub: &Subfield,
    params: ParamChoice,
    d: &FixedBitSet,
    threshold: usize,
) -> Result<Construction> {
    check_residue(sub, 3)?;
    let t = ResidueTable::new(sub);
    let q = t.order();
    let base = q3_from(&t).with_labels(q3_labels(sub));
    let profile = intersection_profile(d, &paley_design_from(&t))?;
    let rows = DiagonalSigning::negating(
        q + 1,
        (0..q)
            .filter(|&s| profile.sizes[s] >= threshold)
            .map(|s| s + 1),
    );
    let cols = DiagonalSigning::negating(q + 1, d.ones().map(|x| x + 1));
    finish(
        params,
        base,
        rows,
        cols,
        vec![d.count_ones(..)],
        vec![profile],
    )
}

/// Signs the q ≡ 1 mod 4 matrix by D = {0}×D_0 ∪ {1}×D_1. Rows of the upper
/// and lower blocks are negated when their block of the matching paired
/// design meets D in at least the given threshold.
pub fn transform_biregular_q1(
    sub: &Subfield,
    params: ParamChoice,
    d0: &FixedBitSet,
    d1: &FixedBitSet,
    thresholds: (usize, usize),
) -> Result<Construction> {
    check_residue(sub, 1)?;
    let t = ResidueTable::new(sub);
    let q = t.order();
    let mut labels = vec!["a".to_string(), "b".to_string()];
    labels.extend(element_labels(sub, "0:"));
    labels.extend(element_labels(sub, "1:"));
    let base = q1_from(&t, Q1Variant::Plain).with_labels(labels);
    let (upper, lower) = paired_design_from(&t);
    let members = paired_members(d0, d1);
    let p1 = intersection_profile(&members, &upper)?;
    let p2 = intersection_profile(&members, &lower)?;
    let neg_rows = (0..q)
        .filter(|&s| p1.sizes[s] >= thresholds.0)
        .map(|s| 2 + s)
        .chain(
            (0..q)
                .filter(|&s| p2.sizes[s] >= thresholds.1)
                .map(|s| 2 + q + s),
        );
    let rows = DiagonalSigning::negating(2 * q + 2, neg_rows);
    let cols = DiagonalSigning::negating(2 * q + 2, members.ones().map(|x| x + 2));
    finish(
        params,
        base,
        rows,
        cols,
        vec![d0.count_ones(..), d1.count_ones(..)],
        vec![p1, p2],
    )
}

/// Signs the twice-negated q ≡ 1 mod 4 matrix by a two-intersection set of
/// the design N' (everything but the first row and column). Columns of D are
/// negated, and every row of N' whose block meets D in `beta` points,
/// including the extra point's row.
pub fn transform_regular(
    sub: &Subfield,
    params: ParamChoice,
    d0: &FixedBitSet,
    d1: &FixedBitSet,
    beta: usize,
) -> Result<Construction> {
    check_residue(sub, 1)?;
    let t = ResidueTable::new(sub);
    let q = t.order();
    let mut labels = vec!["a".to_string(), "inf".to_string()];
    labels.extend(element_labels(sub, "0:"));
    labels.extend(element_labels(sub, "1:"));
    let base = q1_from(&t, Q1Variant::Negated2).with_labels(labels);
    // point 0 of the design is the extra point, never in D
    let mut members = FixedBitSet::with_capacity(2 * q + 1);
    members.extend(paired_members(d0, d1).ones().map(|x| x + 1));
    let profile = intersection_profile(&members, &scheme_design_from(&t))?;
    let rows = DiagonalSigning::negating(
        2 * q + 2,
        (0..2 * q + 1)
            .filter(|&i| profile.sizes[i] == beta)
            .map(|i| i + 1),
    );
    let cols = DiagonalSigning::negating(2 * q + 2, members.ones().map(|x| x + 1));
    finish(
        params,
        base,
        rows,
        cols,
        vec![d0.count_ones(..), d1.count_ones(..)],
        vec![profile],
    )
}

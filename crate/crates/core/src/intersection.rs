//! Block designs from quadratic residues and the intersection sets D_{ℓ,H}.
//!
//! Points of every design are indexed through the canonical order of GF(q)
//! (see [`Subfield`]); the two-copy designs use `d * q + i` for the point
//! (d, x_i) and the scheme design puts its extra point first.
//!
//! The sets D_{ℓ,H} = {x ∈ F_q : 1 + xω^ℓ ∈ ∪_{i ∈ H} C_i^(e)} are built by
//! exact discrete-log membership. The closed-form size formulas are
//! implemented separately as oracles in [`check_size_formulas`].

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::gcd;
use crate::characters::{decompose_gauss, GaussForm};
use crate::characters::{gauss_periods, gauss_sum, zeta, CharSpec, GaussDecomposition, TOL};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, Subfield};

/// η(x_b - x_a) for all pairs of canonical indices, with η(0) = 0.
pub struct ResidueTable {
    q: usize,
    eta: Vec<i8>,
}

impl ResidueTable {
    pub fn new(sub: &Subfield) -> Self {
        let ctx = sub.ambient();
        let q = sub.order() as usize;
        let elems: Vec<FieldElement> = sub.elements().collect();
        let mut eta = vec![0i8; q * q];
        for (a, &xa) in elems.iter().enumerate() {
            for (b, &xb) in elems.iter().enumerate() {
                eta[a * q + b] = sub.eta(ctx.sub(xb, xa)) as i8;
            }
        }
        ResidueTable { q, eta }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// η(x_b - x_a).
    pub fn get(&self, a: usize, b: usize) -> i8 {
        self.eta[a * self.q + b]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDesign {
    points: usize,
    blocks: Vec<FixedBitSet>,
}

impl BlockDesign {
    pub fn new(points: usize, blocks: Vec<FixedBitSet>) -> Self {
        debug_assert!(blocks.iter().all(|b| b.len() == points));
        BlockDesign { points, blocks }
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &FixedBitSet {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[FixedBitSet] {
        &self.blocks
    }

    /// Points × blocks {0,1} matrix.
    pub fn incidence(&self) -> Vec<Vec<u8>> {
        (0..self.points)
            .map(|p| self.blocks.iter().map(|b| b.contains(p) as u8).collect())
            .collect()
    }

    pub fn replication(&self, point: usize) -> usize {
        self.blocks.iter().filter(|b| b.contains(point)).count()
    }

    pub fn pair_count(&self, a: usize, b: usize) -> usize {
        self.blocks
            .iter()
            .filter(|blk| blk.contains(a) && blk.contains(b))
            .count()
    }

    /// (v, k, λ) when every block has size k and every pair lies in λ blocks.
    pub fn two_design_parameters(&self) -> Option<(usize, usize, usize)> {
        let k = self.blocks.first()?.count_ones(..);
        if self.blocks.iter().any(|b| b.count_ones(..) != k) {
            return None;
        }
        let lambda = self.pair_count(0, 1);
        for a in 0..self.points {
            for b in a + 1..self.points {
                if self.pair_count(a, b) != lambda {
                    return None;
                }
            }
        }
        Some((self.points, k, lambda))
    }
}

fn residue_error(q: u64, residue: u64) -> Error {
    Error::WrongResidue {
        q,
        residue,
        modulus: 4,
    }
}

/// Blocks {x + a : x ∈ C ∪ {0}} for a ∈ F_q, where C are the nonzero squares.
///
/// Block a contains point b iff x_b - x_a is zero or a square; q ≡ 3 mod 4.
pub fn paley_design(sub: &Subfield) -> Result<BlockDesign> {
    let q = sub.order() as u64;
    if q % 4 != 3 {
        return Err(residue_error(q, 3));
    }
    Ok(paley_design_from(&ResidueTable::new(sub)))
}

pub(crate) fn paley_design_from(t: &ResidueTable) -> BlockDesign {
    let q = t.order();
    let blocks = (0..q)
        .map(|a| {
            let mut blk = FixedBitSet::with_capacity(q);
            for b in 0..q {
                if t.get(a, b) >= 0 {
                    blk.insert(b);
                }
            }
            blk
        })
        .collect();
    BlockDesign::new(q, blocks)
}

/// The two designs on {0,1} × F_q whose incidence matrices are (N_i + J)/2
/// for N_1 = [M_1; M_2] and N_2 = [M_2; M_3]; q ≡ 1 mod 4.
///
/// Against D = {0}×D_0 ∪ {1}×D_1, block s of the first design meets D in
/// |D_0 ∩ (s + C ∪ {0})| + |D_1 ∩ (s + C)| points and block s of the second
/// in |D_0 ∩ (s + C)| + |D_1 ∩ (s + non-squares)|.
pub fn paired_design(sub: &Subfield) -> Result<(BlockDesign, BlockDesign)> {
    let q = sub.order() as u64;
    if q % 4 != 1 {
        return Err(residue_error(q, 1));
    }
    Ok(paired_design_from(&ResidueTable::new(sub)))
}

pub(crate) fn paired_design_from(t: &ResidueTable) -> (BlockDesign, BlockDesign) {
    let q = t.order();
    let mut first = Vec::with_capacity(q);
    let mut second = Vec::with_capacity(q);
    for s in 0..q {
        let mut b1 = FixedBitSet::with_capacity(2 * q);
        let mut b2 = FixedBitSet::with_capacity(2 * q);
        for i in 0..q {
            let v = t.get(s, i);
            if v >= 0 {
                b1.insert(i);
            }
            if v == 1 {
                b1.insert(q + i);
                b2.insert(i);
            }
            if v == -1 {
                b2.insert(q + i);
            }
        }
        first.push(b1);
        second.push(b2);
    }
    (
        BlockDesign::new(2 * q, first),
        BlockDesign::new(2 * q, second),
    )
}

/// The symmetric 2-(2q+1, q, (q-1)/2) design with incidence (N' + J)/2, where
/// N' is the lower-right (2q+1)-square block of the twice-negated q ≡ 1 mod 4
/// matrix. Point 0 is the extra point; (d, x_i) sits at 1 + d*q + i.
pub fn scheme_design(sub: &Subfield) -> Result<BlockDesign> {
    let q = sub.order() as u64;
    if q % 4 != 1 {
        return Err(residue_error(q, 1));
    }
    Ok(scheme_design_from(&ResidueTable::new(sub)))
}

pub(crate) fn scheme_design_from(t: &ResidueTable) -> BlockDesign {
    let q = t.order();
    let v = 2 * q + 1;
    let mut blocks = Vec::with_capacity(v);
    let mut inf = FixedBitSet::with_capacity(v);
    inf.insert_range(1 + q..v);
    blocks.push(inf);
    for j in 0..q {
        // column (0, j): M_1 above M_2
        let mut b = FixedBitSet::with_capacity(v);
        for i in 0..q {
            if t.get(i, j) >= 0 {
                b.insert(1 + i);
            }
            if t.get(i, j) == 1 {
                b.insert(1 + q + i);
            }
        }
        blocks.push(b);
    }
    for j in 0..q {
        // column (1, j): the extra point, then M_2 above M_3
        let mut b = FixedBitSet::with_capacity(v);
        b.insert(0);
        for i in 0..q {
            if t.get(i, j) == 1 {
                b.insert(1 + i);
            }
            if t.get(i, j) == -1 {
                b.insert(1 + q + i);
            }
        }
        blocks.push(b);
    }
    BlockDesign::new(v, blocks)
}

/// A point set with its intersection sizes against every block of a design.
#[derive(Clone, Debug)]
pub struct IntersectionSet {
    pub members: FixedBitSet,
    /// |B ∩ D| for each block B, in block order.
    pub sizes: Vec<usize>,
    /// Intersection size → number of blocks.
    pub profile: BTreeMap<usize, usize>,
    /// Intersection size α → the dual D_α^⊥ as block indices.
    pub duals: BTreeMap<usize, Vec<usize>>,
}

impl IntersectionSet {
    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distinct intersection sizes in increasing order.
    pub fn values(&self) -> Vec<usize> {
        self.profile.keys().copied().collect()
    }
}

pub fn intersection_profile(
    members: &FixedBitSet,
    design: &BlockDesign,
) -> Result<IntersectionSet> {
    if members.len() != design.point_count() {
        return Err(Error::LengthMismatch {
            expected: design.point_count(),
            got: members.len(),
        });
    }
    let sizes: Vec<usize> = design
        .blocks()
        .iter()
        .map(|b| b.intersection_count(members))
        .collect();
    let mut profile = BTreeMap::new();
    let mut duals: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &s) in sizes.iter().enumerate() {
        *profile.entry(s).or_insert(0) += 1;
        duals.entry(s).or_default().push(i);
    }
    Ok(IntersectionSet {
        members: members.clone(),
        sizes,
        profile,
        duals,
    })
}

/// Concatenates per-copy sets into a subset of {0,1} × F_q.
pub fn paired_members(d0: &FixedBitSet, d1: &FixedBitSet) -> FixedBitSet {
    let q = d0.len();
    let mut out = FixedBitSet::with_capacity(2 * q);
    out.extend(d0.ones());
    out.extend(d1.ones().map(|i| q + i));
    out
}

fn half(big: &FieldContext) -> Result<(Subfield<'_>, u64)> {
    let sub = big.half_subfield()?;
    let q = sub.order() as u64;
    Ok((sub, q))
}

/// Checks e | q²-1 and e/gcd(e, q+1) = 2.
pub fn check_class_modulus(q: u64, e: u64) -> Result<()> {
    if e == 0 || (q * q - 1) % e != 0 {
        return Err(Error::BadE {
            e,
            reason: "must divide q^2 - 1",
        });
    }
    if e / gcd(e, q + 1) != 2 {
        return Err(Error::BadE {
            e,
            reason: "e/gcd(e, q+1) must be 2",
        });
    }
    Ok(())
}

fn check_ell(q: u64, ell: u64) -> Result<()> {
    if ell % (q + 1) == 0 {
        return Err(Error::BadEll(ell));
    }
    Ok(())
}

/// {x ∈ F_q : 1 + xω^ℓ ∈ C_r^(e) for some r with `keep(r)`}.
pub fn class_set(
    big: &FieldContext,
    ell: u64,
    e: u64,
    keep: impl Fn(u64) -> bool,
) -> Result<FixedBitSet> {
    let (sub, q) = half(big)?;
    check_ell(q, ell)?;
    let wl = big.exp_log(ell as i64);
    let mut out = FixedBitSet::with_capacity(q as usize);
    for (i, x) in sub.elements().enumerate() {
        let y = big.add(FieldElement::ONE, big.mul(x, wl));
        // y ≠ 0 because ω^ℓ lies outside F_q
        let r = big.discrete_log(y)? as u64 % e;
        if keep(r) {
            out.insert(i);
        }
    }
    Ok(out)
}

fn check_index_set(e: u64, h: &[u64]) -> Result<Vec<bool>> {
    let half = e / 2;
    let mut mask = vec![false; e as usize];
    let mut covered = vec![false; half as usize];
    for &j in h {
        if j >= e {
            return Err(Error::BadIndexSet(format!("{j} is not below {e}")));
        }
        if mask[j as usize] {
            return Err(Error::BadIndexSet(format!("{j} repeated")));
        }
        mask[j as usize] = true;
        covered[(j % half) as usize] = true;
    }
    if h.len() as u64 != half || covered.iter().any(|c| !c) {
        return Err(Error::BadIndexSet(format!(
            "{h:?} is not a complete residue system mod {half}"
        )));
    }
    Ok(mask)
}

/// D_{ℓ,H}. `h` must be e/2 residues mod e forming a complete system mod e/2.
pub fn build_dlh(big: &FieldContext, ell: u64, e: u64, h: &[u64]) -> Result<FixedBitSet> {
    let (_, q) = half(big)?;
    check_class_modulus(q, e)?;
    let mask = check_index_set(e, h)?;
    class_set(big, ell, e, |r| mask[r as usize])
}

/// N_s = |D ∩ (C + s)| for every s (squares only, s itself excluded).
pub fn square_shift_counts(sub: &Subfield, d: &FixedBitSet) -> Vec<usize> {
    let t = ResidueTable::new(sub);
    square_shift_counts_from(&t, d)
}

fn square_shift_counts_from(t: &ResidueTable, d: &FixedBitSet) -> Vec<usize> {
    (0..t.order())
        .map(|s| d.ones().filter(|&x| t.get(s, x) == 1).count())
        .collect()
}

/// Exact counts next to the four character-sum expressions for |D_{ℓ,H}|
/// and N_s = |D_{ℓ,H} ∩ (C + s)|.
#[derive(Clone, Debug)]
pub struct SizeFormulaCheck {
    pub size: usize,
    /// The Gauss-sum expansion over odd powers of χ_e.
    pub size_by_gauss_sums: Complex64,
    /// The expression through Gauss periods of the union of classes.
    pub size_by_periods: Complex64,
    pub ns: Vec<usize>,
    pub ns_by_gauss_sums: Vec<Complex64>,
    pub ns_by_periods: Vec<Complex64>,
}

impl SizeFormulaCheck {
    pub fn agrees(&self) -> bool {
        let hit = |z: Complex64, n: usize| (z - Complex64::new(n as f64, 0.0)).norm() < TOL;
        hit(self.size_by_gauss_sums, self.size)
            && hit(self.size_by_periods, self.size)
            && self
                .ns
                .iter()
                .enumerate()
                .all(|(s, &n)| hit(self.ns_by_gauss_sums[s], n) && hit(self.ns_by_periods[s], n))
    }
}

pub fn check_size_formulas(
    big: &FieldContext,
    ell: u64,
    e: u64,
    h: &[u64],
) -> Result<SizeFormulaCheck> {
    let d = build_dlh(big, ell, e, h)?;
    let (sub, q) = half(big)?;
    let whole = big.whole();
    let qf = q as f64;
    let in_h = {
        let mask = check_index_set(e, h)?;
        move |x: FieldElement| match x.log() {
            Some(i) => mask[(i as u64 % e) as usize],
            None => false,
        }
    };

    let g_eta = gauss_sum(&sub, 2, 1)?;
    let odd: Vec<i64> = (0..e as i64 / 2).map(|i| 2 * i + 1).collect();
    let g_odd: Vec<Complex64> = odd
        .iter()
        .map(|&j| gauss_sum(&whole, e, j))
        .collect::<Result<_>>()?;
    let a_coef: Vec<Complex64> = odd
        .iter()
        .map(|&i| h.iter().map(|&j| zeta(e, -(j as i64) * i)).sum())
        .collect();
    let periods = gauss_periods(&whole, e)?;
    // ψ(b · ∪_{j∈H} C_j)
    let union_sum = |b: FieldElement| -> Complex64 {
        let lb = b.log().expect("nonzero") as u64;
        h.iter().map(|&j| periods[((lb + j) % e) as usize]).sum()
    };
    let chi = |j: i64, x: FieldElement| CharSpec::new(e, j).value(&whole, x);

    let wl = big.exp_log(ell as i64);
    let wql = big.exp_log((ell * q) as i64);
    let diff = big.sub(wql, wl);
    let diff_inv = big.inv(diff)?;
    let minus_one = big.neg(FieldElement::ONE);
    let chi_m1 = chi(1, minus_one);

    let size_by_gauss_sums = Complex64::new(qf / 2.0, 0.0)
        + chi_m1 * g_eta / (e as f64 * qf)
            * odd
                .iter()
                .enumerate()
                .map(|(k, &j)| a_coef[k] * g_odd[k] * chi(-j, wql) * chi(j, diff))
                .sum::<Complex64>();
    let size_by_periods = Complex64::new(qf / 2.0, 0.0)
        + chi_m1 * g_eta / (2.0 * qf)
        + chi_m1 * g_eta / qf * union_sum(big.mul(wql, diff_inv));

    let t = ResidueTable::new(&sub);
    let ns = square_shift_counts_from(&t, &d);
    let xi_ell = in_h(wl) as u8 as f64;
    let neg_wql = big.neg(wql);
    let mut ns_by_gauss_sums = Vec::with_capacity(q as usize);
    let mut ns_by_periods = Vec::with_capacity(q as usize);
    for s in sub.elements() {
        let one_ls = big.add(FieldElement::ONE, big.mul(wl, s));
        let one_qls = big.add(FieldElement::ONE, big.mul(wql, s));
        let mut a = Complex64::new((qf - 1.0) / 4.0, 0.0);
        for (k, &j) in odd.iter().enumerate() {
            a -= a_coef[k] * (chi(j, one_ls) + chi(j, wl)) / (2.0 * e as f64);
            a += g_eta / (2.0 * e as f64 * qf)
                * a_coef[k]
                * g_odd[k]
                * chi(j, diff)
                * (chi(-j, one_qls) + chi(-j, neg_wql));
        }
        ns_by_gauss_sums.push(a);
        let xi_s = in_h(one_ls) as u8 as f64;
        let b = Complex64::new((qf - 1.0) / 4.0 + (1.0 - xi_s - xi_ell) / 2.0, 0.0)
            + g_eta / (2.0 * qf)
                * (Complex64::new(1.0, 0.0)
                    + union_sum(big.mul(diff_inv, one_qls))
                    + union_sum(big.neg(big.mul(diff_inv, wql))));
        ns_by_periods.push(b);
    }

    Ok(SizeFormulaCheck {
        size: d.count_ones(..),
        size_by_gauss_sums,
        size_by_periods,
        ns,
        ns_by_gauss_sums,
        ns_by_periods,
    })
}

/// The three parameter families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// q = 4m²+4m+3, classes of order 8.
    E8,
    /// q = 2m²+2m+1, classes of order 4.
    E4,
    /// q = 2m²-1 with a four-class scheme partition.
    Scheme,
}

/// An admissible exponent ℓ with its class offset.
///
/// `h` is h' ∈ 0..4 for [`Family::E8`], h ∈ 0..4 for [`Family::E4`] and 0 for
/// [`Family::Scheme`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamChoice {
    pub family: Family,
    pub ell: u64,
    pub h: u64,
    pub decomposition: Option<GaussDecomposition>,
    pub tau: Option<i32>,
}

fn log_diff(big: &FieldContext, q: u64, ell: u64) -> Result<u64> {
    let d = big.sub(big.exp_log((ell * q) as i64), big.exp_log(ell as i64));
    Ok(big.discrete_log(d)? as u64)
}

fn e8_offset(
    dec: &GaussDecomposition,
    q: u64,
    big: &FieldContext,
    ell: u64,
) -> Result<Option<u64>> {
    if ell % (q + 1) == 0 {
        return Ok(None);
    }
    let ed = (dec.epsilon * dec.delta) as i64;
    if log_diff(big, q, ell)? % 8 != (4 + 2 * dec.delta as i64).rem_euclid(8) as u64 {
        return Ok(None);
    }
    Ok((0..4u64).find(|&hp| ell % 8 == (2 - 5 * ed - 6 * hp as i64).rem_euclid(8) as u64))
}

fn e4_offset(
    dec: &GaussDecomposition,
    q: u64,
    big: &FieldContext,
    ell: u64,
) -> Result<Option<u64>> {
    if ell % (q + 1) == 0 {
        return Ok(None);
    }
    let h = (ell + 1) % 4; // ℓ ≡ 3 + h mod 4
    let want = (dec.delta as i64 * (1 + 2 * h as i64)).rem_euclid(4) as u64;
    Ok((log_diff(big, q, ell)? % 4 == want).then_some(h))
}

/// The class index set H = {h, h+1, h+2, h+3} mod 8 with h = 2h' + (1-εδ)/2.
pub fn e8_index_set(dec: &GaussDecomposition, h_prime: u64) -> Vec<u64> {
    let h = 2 * h_prime + ((1 - dec.epsilon * dec.delta) / 2) as u64;
    (0..4).map(|i| (h + i) % 8).collect()
}

/// (H_0, H_1) for the order-4 family.
pub fn e4_index_sets(dec: &GaussDecomposition, h: u64) -> (Vec<u64>, Vec<u64>) {
    let a = vec![h % 4, (h + 1) % 4];
    let b = vec![(h + 1) % 4, (h + 2) % 4];
    if dec.epsilon * dec.delta == 1 {
        (a, b)
    } else {
        (b, a)
    }
}

fn decomposition_for(big: &FieldContext, family: Family) -> Result<GaussDecomposition> {
    match family {
        Family::E8 => decompose_gauss(big, true),
        Family::E4 => decompose_gauss(big, false),
        Family::Scheme => Err(Error::BadParams(
            "scheme parameters need a partition; use scheme_params".into(),
        )),
    }
}

fn offset_for(
    family: Family,
    dec: &GaussDecomposition,
    q: u64,
    big: &FieldContext,
    ell: u64,
) -> Result<Option<u64>> {
    match family {
        Family::E8 => e8_offset(dec, q, big, ell),
        _ => e4_offset(dec, q, big, ell),
    }
}

/// Every admissible (ℓ, h) in increasing ℓ for the E8 or E4 family.
pub fn admissible_params(big: &FieldContext, family: Family) -> Result<Vec<ParamChoice>> {
    let dec = decomposition_for(big, family)?;
    let (_, q) = half(big)?;
    let found: Vec<Option<ParamChoice>> = (1..q * q - 1)
        .into_par_iter()
        .map(|ell| {
            offset_for(family, &dec, q, big, ell).map(|h| {
                h.map(|h| ParamChoice {
                    family,
                    ell,
                    h,
                    decomposition: Some(dec),
                    tau: None,
                })
            })
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// The admissible pair with the smallest ℓ.
pub fn find_params(big: &FieldContext, family: Family) -> Result<ParamChoice> {
    let dec = decomposition_for(big, family)?;
    let (_, q) = half(big)?;
    (1..q * q - 1)
        .into_par_iter()
        .find_map_first(|ell| match offset_for(family, &dec, q, big, ell) {
            Ok(Some(h)) => Some(ParamChoice {
                family,
                ell,
                h,
                decomposition: Some(dec),
                tau: None,
            }),
            _ => None,
        })
        .ok_or_else(|| Error::ParamSearchFailed(format!("{family:?} over q = {q}")))
}

/// Re-checks a user-supplied (ℓ, h) for the E8 or E4 family.
pub fn validate_params(
    big: &FieldContext,
    family: Family,
    ell: u64,
    h: Option<u64>,
) -> Result<ParamChoice> {
    let dec = decomposition_for(big, family)?;
    let (_, q) = half(big)?;
    match offset_for(family, &dec, q, big, ell)? {
        Some(found) if h.is_none_or(|h| h == found) => Ok(ParamChoice {
            family,
            ell,
            h: found,
            decomposition: Some(dec),
            tau: None,
        }),
        _ => Err(Error::BadParams(format!(
            "l = {ell}{} violates the {family:?} congruences",
            h.map(|h| format!(", h = {h}")).unwrap_or_default()
        ))),
    }
}

/// Admissible ℓ for a scheme partition: (q+1) ∤ ℓ, ω^ℓ ∈ X_2 ∪ X_4 and
/// log(ω^{ℓq} - ω^ℓ) ≡ τm² mod 4m². `class_of[r]` is the part (1..=4)
/// holding the cyclotomic class C_r^(e).
pub fn scheme_params(
    big: &FieldContext,
    class_of: &[u8],
    m: u64,
    tau: i32,
) -> Result<Vec<ParamChoice>> {
    let (_, q) = half(big)?;
    let e = class_of.len() as u64;
    let modulus = 4 * m * m;
    let want = (tau as i64 * (m * m) as i64).rem_euclid(modulus as i64) as u64;
    let mut out = Vec::new();
    for ell in 1..q * q - 1 {
        if ell % (q + 1) == 0 || !matches!(class_of[(ell % e) as usize], 2 | 4) {
            continue;
        }
        if log_diff(big, q, ell)? % modulus == want {
            out.push(ParamChoice {
                family: Family::Scheme,
                ell,
                h: 0,
                decomposition: None,
                tau: Some(tau),
            });
        }
    }
    Ok(out)
}

/// N_s = |D ∩ ((C ∪ {0}) + s)| predicted from k = log(1+ω^ℓ s) mod 8 for the
/// order-8 family.
pub fn e8_predicted_count(m: u64, eps_delta: i32, h_prime: u64, k: u64) -> u64 {
    let r = (k + 8 - (2 * h_prime) % 8) % 8;
    let (top, two, one, second) = if eps_delta == 1 {
        (&[0u64, 3, 6][..], 1, &[2u64, 4, 7][..], 5)
    } else {
        (&[1u64, 4, 6][..], 3, &[0u64, 2, 5][..], 7)
    };
    let m2 = m * m;
    if top.contains(&r) {
        m2 + m + 2
    } else if r == two {
        m2 + 2
    } else if one.contains(&r) {
        m2 + 1
    } else {
        debug_assert_eq!(r, second);
        m2 + m + 1
    }
}

/// The form of the order-4 family for this m.
pub fn e4_form(m: u64) -> GaussForm {
    if m % 2 == 1 {
        GaussForm::Order4Odd
    } else {
        GaussForm::Order4Even
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn paley_designs_are_2_designs() {
        for (q, expect) in [(3u32, (3, 2, 1)), (7, (7, 4, 2)), (11, (11, 6, 3))] {
            let ctx = build_field(q, 1).unwrap();
            let d = paley_design(&ctx.whole()).unwrap();
            assert_eq!(d.two_design_parameters(), Some(expect));
        }
        let ctx = build_field(5, 1).unwrap();
        assert!(matches!(
            paley_design(&ctx.whole()),
            Err(Error::WrongResidue { .. })
        ));
    }

    #[test]
    fn paired_design_column_sums() {
        let ctx = build_field(5, 1).unwrap();
        let (b1, b2) = paired_design(&ctx.whole()).unwrap();
        // s itself is excluded from every block of the second design
        assert!(b1.blocks().iter().all(|b| b.count_ones(..) == 5));
        assert!(b2.blocks().iter().all(|b| b.count_ones(..) == 4));
        let t = ResidueTable::new(&ctx.whole());
        for a in 0..5 {
            assert_eq!(t.get(a, a), 0);
            for b in 0..5 {
                assert_eq!(t.get(a, b), t.get(b, a));
            }
        }
    }

    #[test]
    fn scheme_design_is_symmetric_2_design() {
        let ctx = build_field(17, 1).unwrap();
        let d = scheme_design(&ctx.whole()).unwrap();
        assert_eq!(d.two_design_parameters(), Some((35, 17, 8)));
    }

    #[test]
    fn empty_set_profile() {
        let ctx = build_field(7, 1).unwrap();
        let d = paley_design(&ctx.whole()).unwrap();
        let p = intersection_profile(&FixedBitSet::with_capacity(7), &d).unwrap();
        assert_eq!(p.profile, BTreeMap::from([(0, 7)]));
        assert!(intersection_profile(&FixedBitSet::with_capacity(6), &d).is_err());
    }

    #[test]
    fn build_dlh_rejects_bad_input() {
        let big = build_field(11, 2).unwrap();
        assert!(matches!(
            build_dlh(&big, 12, 8, &[0, 1, 2, 3]),
            Err(Error::BadEll(12))
        ));
        assert!(matches!(
            build_dlh(&big, 1, 8, &[0, 1, 2, 4]),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            build_dlh(&big, 1, 6, &[0, 1, 2]),
            Err(Error::BadE { .. })
        ));
        assert!(matches!(
            build_dlh(&big, 1, 8, &(0..8).collect::<Vec<_>>()),
            Err(Error::BadIndexSet(_))
        ));
    }

    #[test]
    fn e8_smallest_case() {
        let big = build_field(11, 2).unwrap();
        let p = find_params(&big, Family::E8).unwrap();
        assert_eq!(p.ell % 2, 1);
        let dec = p.decomposition.unwrap();
        let h = e8_index_set(&dec, p.h);
        let d = build_dlh(&big, p.ell, 8, &h).unwrap();
        assert_eq!(d.count_ones(..), 5);
    }

    #[test]
    fn e4_sizes_at_q25() {
        let big = build_field(5, 4).unwrap();
        let p = find_params(&big, Family::E4).unwrap();
        let (h0, h1) = e4_index_sets(&p.decomposition.unwrap(), p.h);
        assert_eq!(build_dlh(&big, p.ell, 4, &h0).unwrap().count_ones(..), 9);
        assert_eq!(build_dlh(&big, p.ell, 4, &h1).unwrap().count_ones(..), 12);
    }

    #[test]
    fn size_formulas_small() {
        let big = build_field(5, 2).unwrap();
        for p in admissible_params(&big, Family::E4).unwrap() {
            let (h0, _) = e4_index_sets(&p.decomposition.unwrap(), p.h);
            assert!(check_size_formulas(&big, p.ell, 4, &h0).unwrap().agrees());
        }
    }

    #[test]
    fn validate_rejects_wrong_offset() {
        let big = build_field(11, 2).unwrap();
        let p = find_params(&big, Family::E8).unwrap();
        assert!(validate_params(&big, Family::E8, p.ell, Some(p.h)).is_ok());
        assert!(validate_params(&big, Family::E8, p.ell, Some((p.h + 1) % 4)).is_err());
        assert!(validate_params(&big, Family::E8, 12, None).is_err());
    }
}

//! Four-class translation schemes on GF(q²), q = 2m² - 1, built from unions
//! of cyclotomic classes of order e.
//!
//! A partition is stored as `class_of[r] ∈ 1..=4`, the part holding C_r^(e).
//! Every check here runs over the actual field elements; the Gauss-period
//! shortcut is only used to filter candidates in [`scheme_search`].

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_power;
use crate::characters::{gauss_periods, gauss_sum, TOL};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::intersection::{
    class_set, intersection_profile, paired_members, scheme_design, ParamChoice,
};

/// H_1..H_4 over Z_e for a given q = 2m² - 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SchemePartition {
    pub q: u64,
    pub m: u64,
    pub e: u64,
    pub h_lists: [Vec<u64>; 4],
    /// Coefficients c_0..c_{2f} of the modulus defining GF(q²), when the
    /// index lists refer to a specific primitive element.
    pub modulus: Option<Vec<u32>>,
}

impl SchemePartition {
    pub fn new(
        q: u64,
        m: u64,
        e: u64,
        h_lists: [Vec<u64>; 4],
        modulus: Option<Vec<u32>>,
    ) -> Result<Self> {
        let mut p = SchemePartition {
            q,
            m,
            e,
            h_lists,
            modulus,
        };
        for h in p.h_lists.iter_mut() {
            h.sort_unstable();
        }
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let (q, m) = (self.q, self.m);
        if m == 0 || m % 2 == 0 || 2 * m * m - 1 != q {
            return Err(Error::BadForm(format!(
                "q = {q} is not 2m^2 - 1 for odd m = {m}"
            )));
        }
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        let e = self.e;
        if e == 0 || (q * q - 1) % e != 0 {
            return Err(Error::BadForm(format!("e = {e} does not divide q^2 - 1")));
        }
        let mut seen = vec![false; e as usize];
        for h in &self.h_lists {
            for &j in h {
                if j >= e || seen[j as usize] {
                    return Err(Error::BadForm(format!(
                        "index {j} out of range or repeated"
                    )));
                }
                seen[j as usize] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BadForm(format!("H_1..H_4 do not cover 0..{e}")));
        }
        Ok(())
    }

    /// `class_of[r]` is the part (1..=4) containing C_r^(e).
    pub fn class_of(&self) -> Vec<u8> {
        let mut c = vec![0u8; self.e as usize];
        for (i, h) in self.h_lists.iter().enumerate() {
            for &j in h {
                c[j as usize] = i as u8 + 1;
            }
        }
        c
    }

    /// GF(q²) with the stored modulus, or the default one.
    pub fn field(&self) -> Result<FieldContext> {
        let (p, f) = prime_power(self.q).ok_or(Error::NotPrimePower(self.q))?;
        match &self.modulus {
            Some(c) => {
                if c.len() != 2 * f as usize + 1 {
                    return Err(Error::BadModulus(format!("expected degree {}", 2 * f)));
                }
                FieldContext::with_modulus(p, c)
            }
            None => FieldContext::new(p, 2 * f),
        }
    }

    /// Line 1 "q m e", then H_1..H_4, then an optional "modulus c_0 ... c_n"
    /// line. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let nums = |ln: usize, s: &str| -> Result<Vec<u64>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: ln,
                        msg: format!("bad integer {t:?}"),
                    })
                })
                .collect()
        };
        let (ln, head) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let head = nums(ln, head)?;
        let [q, m, e] = head[..] else {
            return Err(Error::Parse {
                line: ln,
                msg: "expected \"q m e\"".into(),
            });
        };
        let mut lists: Vec<Vec<u64>> = Vec::with_capacity(4);
        let mut modulus = None;
        let mut last = ln;
        for (ln, line) in lines {
            last = ln;
            if let Some(rest) = line.strip_prefix("modulus") {
                let c = nums(ln, rest)?;
                modulus = Some(c.into_iter().map(|x| x as u32).collect());
            } else if lists.len() < 4 {
                lists.push(nums(ln, line)?);
            } else {
                return Err(Error::Parse {
                    line: ln,
                    msg: "more than four index lists".into(),
                });
            }
        }
        let h_lists: [Vec<u64>; 4] = lists.try_into().map_err(|l: Vec<Vec<u64>>| Error::Parse {
            line: last,
            msg: format!("expected four index lists, found {}", l.len()),
        })?;
        Self::new(q, m, e, h_lists, modulus)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.q, self.m, self.e);
        for h in &self.h_lists {
            let s: Vec<String> = h.iter().map(|x| x.to_string()).collect();
            out.push_str(&s.join(" "));
            out.push('\n');
        }
        if let Some(c) = &self.modulus {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("modulus {}\n", s.join(" ")));
        }
        out
    }
}

fn class_of_element(class_of: &[u8], x: FieldElement) -> u8 {
    match x.log() {
        None => 0,
        Some(i) => class_of[i as usize % class_of.len()],
    }
}

/// X_1 = ω^{2m²}X_3, X_2 = ω^{2m²}X_4 and every X_i a union of cosets of
/// C_0^(4m²), checked element by element.
pub fn verify_structure(big: &FieldContext, part: &SchemePartition) -> Result<bool> {
    check_field(big, part)?;
    let class_of = part.class_of();
    let n = big.order() as u64 - 1;
    let m2 = part.m * part.m;
    if n % (4 * m2) != 0 {
        return Err(Error::BadForm("4m^2 does not divide q^2 - 1".into()));
    }
    let shift = 2 * m2;
    let ok = (0..n).into_par_iter().all(|i| {
        let c = class_of[(i % part.e) as usize];
        let shifted = class_of[((i + shift) % n % part.e) as usize];
        let coset = class_of[((i + 4 * m2) % n % part.e) as usize];
        let paired = match c {
            3 => shifted == 1,
            4 => shifted == 2,
            _ => true,
        };
        // the reverse direction of the shift condition
        let back = class_of[((i + n - shift) % n % part.e) as usize];
        let paired_back = match c {
            1 => back == 3,
            2 => back == 4,
            _ => true,
        };
        paired && paired_back && coset == c
    });
    Ok(ok)
}

fn check_field(big: &FieldContext, part: &SchemePartition) -> Result<()> {
    let q = big.half_subfield()?.order() as u64;
    if q != part.q {
        return Err(Error::BadForm(format!(
            "field has q = {q}, partition says {}",
            part.q
        )));
    }
    Ok(())
}

/// Class sizes |X_0|, …, |X_d| for a residue-indexed class table.
pub fn class_sizes(big: &FieldContext, class_of: &[u8], parts: usize) -> Vec<usize> {
    let mut sizes = vec![0usize; parts + 1];
    sizes[0] = 1;
    for i in 0..big.order() as usize - 1 {
        sizes[class_of[i % class_of.len()] as usize] += 1;
    }
    sizes
}

/// p_ij^k for a translation partition of GF(Q). `constant` is false when
/// the count |{u ∈ X_i : z - u ∈ X_j}| varies over z ∈ X_k.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionNumbers {
    pub constant: bool,
    /// `p[k][i][j]`.
    pub p: Vec<Vec<Vec<u64>>>,
}

pub fn intersection_numbers(
    big: &FieldContext,
    class_of: &[u8],
    parts: usize,
) -> IntersectionNumbers {
    let d = parts + 1;
    let elems: Vec<FieldElement> = big.elements().collect();
    let classes: Vec<u8> = elems
        .iter()
        .map(|&x| class_of_element(class_of, x))
        .collect();
    let counts: Vec<(usize, Vec<u64>)> = elems
        .par_iter()
        .zip(classes.par_iter())
        .map(|(&z, &k)| {
            let mut c = vec![0u64; d * d];
            for (&u, &i) in elems.iter().zip(&classes) {
                let j = class_of_element(class_of, big.sub(z, u));
                c[i as usize * d + j as usize] += 1;
            }
            (k as usize, c)
        })
        .collect();
    let mut first: Vec<Option<Vec<u64>>> = vec![None; d];
    let mut constant = true;
    for (k, c) in counts {
        match &first[k] {
            None => first[k] = Some(c),
            Some(f) => constant &= *f == c,
        }
    }
    let p = first
        .into_iter()
        .map(|c| {
            let c = c.unwrap_or_else(|| vec![0; d * d]);
            (0..d).map(|i| c[i * d..(i + 1) * d].to_vec()).collect()
        })
        .collect();
    IntersectionNumbers { constant, p }
}

/// The closed-form eigenvalues, rows Y_0..Y_4 and columns X_0..X_4, with
/// G = G_q(η) real.
pub fn table1(m: u64, g: f64) -> [[f64; 5]; 5] {
    let mf = m as f64;
    let m2 = mf * mf;
    let a = (m2 + mf - 1.0) / 2.0;
    let b = (-m2 - mf) / 2.0;
    let c = (-m2 + mf) / 2.0;
    let d = (m2 - mf - 1.0) / 2.0;
    let small = mf * (m2 - 1.0) * (mf - 1.0);
    let large = mf * (m2 - 1.0) * (mf + 1.0);
    let (x, y, z) = (mf / 2.0 * g, (mf + 1.0) / 2.0 * g, (mf - 1.0) / 2.0 * g);
    [
        [1.0, small, large, small, large],
        [1.0, a - x, b - y, a + x, b + y],
        [1.0, c - z, d + x, c + z, d - x],
        [1.0, a + x, b + y, a - x, b - y],
        [1.0, c + z, d - x, c - z, d + x],
    ]
}

/// ψ(aX_i) for i = 0..=parts, where a = ω^r.
fn character_row(periods: &[Complex64], class_of: &[u8], parts: usize, r: usize) -> Vec<Complex64> {
    let e = class_of.len();
    let mut row = vec![Complex64::new(0.0, 0.0); parts + 1];
    row[0] = Complex64::new(1.0, 0.0);
    for (j, &c) in class_of.iter().enumerate() {
        row[c as usize] += periods[(r + j) % e];
    }
    row
}

/// The first Table 1 cell that disagrees.
#[derive(Clone, Debug, Serialize)]
pub struct CellFailure {
    pub tau: i32,
    /// Discrete log of the element a.
    pub a_log: u64,
    pub row: usize,
    pub col: usize,
    pub expected: f64,
    pub got: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct Table1Check {
    /// Every τ ∈ {1, -1} for which all cells match.
    pub taus: Vec<i32>,
    pub failures: Vec<CellFailure>,
    /// Rows Y_0..Y_4 of ψ(aX_i) under the first matching τ (or τ = 1).
    pub rows: Vec<Vec<Complex64>>,
}

impl Table1Check {
    pub fn matches(&self) -> bool {
        !self.taus.is_empty()
    }
}

/// Compares ψ(aX_i) with Table 1 for every nonzero a, grouping a by
/// Y_j = ω^{-m²τ}X_j^q.
pub fn eigenmatrix_vs_table1(big: &FieldContext, part: &SchemePartition) -> Result<Table1Check> {
    check_field(big, part)?;
    let class_of = part.class_of();
    let periods = gauss_periods(&big.whole(), part.e)?;
    let sub = big.half_subfield()?;
    let g = gauss_sum(&sub, 2, 1)?.re;
    Ok(table1_check(
        big.order() as u64,
        part.q,
        part.m,
        &class_of,
        &periods,
        g,
    ))
}

fn table1_check(
    order: u64,
    q: u64,
    m: u64,
    class_of: &[u8],
    periods: &[Complex64],
    g: f64,
) -> Table1Check {
    let n = order - 1;
    let e = class_of.len() as u64;
    let t = table1(m, g);
    let sizes = {
        let mut s = [0f64; 5];
        s[0] = 1.0;
        for &c in class_of {
            s[c as usize] += (n / e) as f64;
        }
        s
    };
    let valency_ok = (0..5).all(|i| (sizes[i] - t[0][i]).abs() < TOL);
    let mut taus = Vec::new();
    let mut failures = Vec::new();
    let mut rows_out = None;
    for tau in [1i32, -1] {
        let mut rows: Vec<Vec<Complex64>> = vec![Vec::new(); 5];
        rows[0] = sizes.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        let shift = (tau as i64 * (m * m) as i64).rem_euclid(n as i64) as u64;
        let mut failure = None;
        if !valency_ok {
            let col = (0..5).find(|&i| (sizes[i] - t[0][i]).abs() >= TOL).unwrap();
            failure = Some(CellFailure {
                tau,
                a_log: 0,
                row: 0,
                col,
                expected: t[0][col],
                got: [sizes[col], 0.0],
            });
        }
        // a = ω^r; a ∈ Y_j iff (aω^{m²τ})^q ∈ X_j
        for r in 0..n {
            if failure.is_some() {
                break;
            }
            let j = class_of[((q * ((r + shift) % n)) % n % e) as usize] as usize;
            let v = character_row(periods, class_of, 4, (r % e) as usize);
            if let Some(col) = (0..5).find(|&i| (v[i] - Complex64::new(t[j][i], 0.0)).norm() >= TOL)
            {
                failure = Some(CellFailure {
                    tau,
                    a_log: r,
                    row: j,
                    col,
                    expected: t[j][col],
                    got: [v[col].re, v[col].im],
                });
            } else if rows[j].is_empty() {
                rows[j] = v;
            }
        }
        match failure {
            Some(f) => failures.push(f),
            None => {
                taus.push(tau);
                rows_out.get_or_insert(rows);
            }
        }
    }
    let rows = rows_out.unwrap_or_else(|| {
        let mut rows: Vec<Vec<Complex64>> =
            vec![sizes.iter().map(|&s| Complex64::new(s, 0.0)).collect()];
        rows.extend(
            (0..e as usize)
                .map(|r| character_row(periods, class_of, 4, r))
                .take(4),
        );
        rows
    });
    Table1Check {
        taus,
        failures,
        rows,
    }
}

/// The first eigenmatrix of a translation partition: one row per distinct
/// character-value vector, the trivial row first.
#[derive(Clone, Debug)]
pub struct Eigenmatrix {
    pub rows: Vec<Vec<Complex64>>,
    /// Residues r (a = ω^r mod the class modulus) giving each nontrivial row.
    pub dual_classes: Vec<Vec<usize>>,
}

pub fn eigenmatrix(big: &FieldContext, class_of: &[u8], parts: usize) -> Result<Eigenmatrix> {
    let e = class_of.len();
    let periods = gauss_periods(&big.whole(), e as u64)?;
    let sizes = class_sizes(big, class_of, parts);
    let mut rows: Vec<Vec<Complex64>> = vec![sizes
        .iter()
        .map(|&s| Complex64::new(s as f64, 0.0))
        .collect()];
    let mut dual_classes: Vec<Vec<usize>> = Vec::new();
    for r in 0..e {
        let v = character_row(&periods, class_of, parts, r);
        let same = |w: &Vec<Complex64>| w.iter().zip(&v).all(|(a, b)| (a - b).norm() < TOL);
        match rows[1..].iter().position(same) {
            Some(i) => dual_classes[i].push(r),
            None => {
                rows.push(v);
                dual_classes.push(vec![r]);
            }
        }
    }
    Ok(Eigenmatrix { rows, dual_classes })
}

/// Whether grouping the columns of P (class indices) gives a fusion scheme:
/// the block row sums must take exactly as many distinct row vectors as
/// there are groups, with the trivial row on its own. Class 0 is added as
/// its own group when missing.
pub fn bannai_muzychuk_check(p: &Eigenmatrix, grouping: &[Vec<usize>]) -> bool {
    let mut groups: Vec<Vec<usize>> = grouping.to_vec();
    if !groups.iter().any(|g| g.contains(&0)) {
        groups.insert(0, vec![0]);
    }
    let cols = p.rows[0].len();
    let mut seen = vec![false; cols];
    for g in &groups {
        for &c in g {
            if c >= cols || seen[c] {
                return false;
            }
            seen[c] = true;
        }
    }
    if seen.iter().any(|s| !s) || groups.iter().any(|g| g.contains(&0) && g.len() > 1) {
        return false;
    }
    let sums: Vec<Vec<Complex64>> = p
        .rows
        .iter()
        .map(|row| {
            groups
                .iter()
                .map(|g| g.iter().map(|&c| row[c]).sum())
                .collect()
        })
        .collect();
    let close =
        |a: &Vec<Complex64>, b: &Vec<Complex64>| a.iter().zip(b).all(|(x, y)| (x - y).norm() < TOL);
    let mut distinct: Vec<&Vec<Complex64>> = Vec::new();
    for s in &sums {
        if !distinct.iter().any(|d| close(d, s)) {
            distinct.push(s);
        }
    }
    let trivial_alone = sums[1..].iter().all(|s| !close(s, &sums[0]));
    distinct.len() == groups.len() && trivial_alone
}

/// Everything the verifier knows about a partition.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeReport {
    pub q: u64,
    pub m: u64,
    pub e: u64,
    pub structure_ok: bool,
    pub symmetric: bool,
    pub is_scheme: bool,
    pub tau: Option<i32>,
    pub taus: Vec<i32>,
    pub class_sizes: Vec<usize>,
    /// Rows Y_0..Y_4 as [re, im] pairs.
    pub eigenmatrix: Vec<Vec<[f64; 2]>>,
    pub table1_match: bool,
    pub first_failure: Option<CellFailure>,
    pub intersection_numbers: Vec<Vec<Vec<u64>>>,
}

impl SchemeReport {
    pub fn passes(&self) -> bool {
        self.structure_ok && self.is_scheme && self.table1_match
    }
}

fn symmetric(big: &FieldContext, class_of: &[u8]) -> bool {
    let minus = big.neg(FieldElement::ONE);
    big.elements()
        .all(|x| class_of_element(class_of, x) == class_of_element(class_of, big.mul(minus, x)))
}

pub fn verify_scheme(big: &FieldContext, part: &SchemePartition) -> Result<SchemeReport> {
    let structure_ok = verify_structure(big, part)?;
    let class_of = part.class_of();
    let numbers = intersection_numbers(big, &class_of, 4);
    let t1 = eigenmatrix_vs_table1(big, part)?;
    Ok(SchemeReport {
        q: part.q,
        m: part.m,
        e: part.e,
        structure_ok,
        symmetric: symmetric(big, &class_of),
        is_scheme: numbers.constant,
        tau: t1.taus.first().copied(),
        taus: t1.taus.clone(),
        class_sizes: class_sizes(big, &class_of, 4),
        eigenmatrix: t1
            .rows
            .iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        table1_match: t1.matches(),
        first_failure: t1.failures.first().cloned().filter(|_| !t1.matches()),
        intersection_numbers: numbers.p,
    })
}

/// The admissible ℓ condition for a verified partition, first match.
pub fn find_scheme_params(
    big: &FieldContext,
    part: &SchemePartition,
    tau: i32,
) -> Result<ParamChoice> {
    crate::intersection::scheme_params(big, &part.class_of(), part.m, tau)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::ParamSearchFailed(format!("scheme family over q = {}", part.q)))
}

/// D_0 = D_{ℓ,S_0} and D_1 = D_{ℓ,S_1} with (S_0, S_1) = (X_1∪X_4, X_1∪X_2)
/// when ω^ℓ ∈ X_2 and (X_2∪X_3, X_3∪X_4) when ω^ℓ ∈ X_4. The union is
/// checked to be a two-intersection set of the scheme design with sizes
/// m² - m and m².
pub fn two_intersection_from_scheme(
    big: &FieldContext,
    part: &SchemePartition,
    params: &ParamChoice,
) -> Result<(FixedBitSet, FixedBitSet)> {
    let class_of = part.class_of();
    let (s0, s1): ([u8; 2], [u8; 2]) = match class_of[(params.ell % part.e) as usize] {
        2 => ([1, 4], [1, 2]),
        4 => ([2, 3], [3, 4]),
        c => {
            return Err(Error::BadParams(format!(
                "w^l lies in X_{c}, not X_2 or X_4"
            )))
        }
    };
    let e = part.e;
    let d0 = class_set(big, params.ell, e, |r| s0.contains(&class_of[r as usize]))?;
    let d1 = class_set(big, params.ell, e, |r| s1.contains(&class_of[r as usize]))?;
    let m2 = (part.m * part.m) as usize;
    let (n0, n1) = (d0.count_ones(..), d1.count_ones(..));
    if (n0, n1) != (m2 - part.m as usize, m2) {
        return Err(Error::ProfileMismatch(format!(
            "sizes ({n0}, {n1}), expected ({}, {m2})",
            m2 - part.m as usize
        )));
    }
    let sub = big.half_subfield()?;
    let mut members = FixedBitSet::with_capacity(2 * part.q as usize + 1);
    members.extend(paired_members(&d0, &d1).ones().map(|x| x + 1));
    let profile = intersection_profile(&members, &scheme_design(&sub)?)?;
    let values: BTreeSet<usize> = profile.profile.keys().copied().collect();
    if !values.is_subset(&BTreeSet::from([m2 - part.m as usize, m2])) {
        return Err(Error::ProfileMismatch(format!(
            "intersection sizes {values:?}"
        )));
    }
    Ok((d0, d1))
}

/// Result of a bounded partition search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub found: Vec<SchemePartition>,
    pub examined: u64,
    pub total: u64,
    pub complete: bool,
}

/// Enumerates partitions paired by the shift 2m² (H_1 = H_3 + 2m²,
/// H_2 = H_4 + 2m² mod e) with the Table 1 valencies, keeps those whose
/// character values match Table 1 for some τ and whose intersection numbers
/// are constant. At most `budget` candidates are examined.
pub fn scheme_search(big: &FieldContext, m: u64, e: u64, budget: u64) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::BudgetExceeded(0));
    }
    let q = big.half_subfield()?.order() as u64;
    if m % 2 == 0 || 2 * m * m - 1 != q {
        return Err(Error::BadForm(format!(
            "q = {q} is not 2m^2 - 1 for odd m = {m}"
        )));
    }
    let n = q * q - 1;
    if e == 0 || (4 * m * m) % e != 0 || n % e != 0 {
        return Err(Error::BadE {
            e,
            reason: "must divide 4m^2",
        });
    }
    let sigma = 2 * m * m % e;
    let small = m * (m * m - 1) * (m - 1);
    if sigma == 0 || (small * e) % n != 0 {
        return Ok(SearchOutcome {
            found: Vec::new(),
            examined: 0,
            total: 0,
            complete: true,
        });
    }
    let want = (small * e / n) as usize;
    let pairs = sigma as u32; // σ = e/2
    let total = 4u64.checked_pow(pairs).unwrap_or(u64::MAX);
    let examined = total.min(budget);

    let periods = gauss_periods(&big.whole(), e)?;
    let g = gauss_sum(&big.half_subfield()?, 2, 1)?.re;
    let order = big.order() as u64;
    let modulus: Vec<u32> = big.spec().modulus.clone();

    let decode = |mut idx: u64| -> Vec<u8> {
        let mut class_of = vec![0u8; e as usize];
        for a in 0..sigma as usize {
            let (lo, hi) = match idx % 4 {
                0 => (3, 1),
                1 => (1, 3),
                2 => (4, 2),
                _ => (2, 4),
            };
            class_of[a] = lo;
            class_of[a + sigma as usize] = hi;
            idx /= 4;
        }
        class_of
    };

    let mut found: Vec<SchemePartition> = (0..examined)
        .into_par_iter()
        .filter_map(|idx| {
            let class_of = decode(idx);
            if class_of.iter().filter(|&&c| c == 1).count() != want {
                return None;
            }
            if !table1_check(order, q, m, &class_of, &periods, g).matches() {
                return None;
            }
            if !intersection_numbers(big, &class_of, 4).constant {
                return None;
            }
            let mut lists: [Vec<u64>; 4] = Default::default();
            for (r, &c) in class_of.iter().enumerate() {
                lists[c as usize - 1].push(r as u64);
            }
            SchemePartition::new(q, m, e, lists, Some(modulus.clone())).ok()
        })
        .collect();
    found.sort();
    Ok(SearchOutcome {
        found,
        examined,
        total,
        complete: examined == total,
    })
}

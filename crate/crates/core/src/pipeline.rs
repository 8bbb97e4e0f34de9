//! End-to-end constructions for the three families, by m or by q.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{isqrt, prime_power};
use crate::error::{Error, Result};
use crate::field::{build_field, FieldContext};
use crate::hadamard::{
    transform_biregular_q1, transform_biregular_q3, transform_regular, Construction,
};
use crate::intersection::{
    build_dlh, e4_index_sets, e8_index_set, e8_predicted_count, find_params, scheme_params,
    validate_params, Family, ParamChoice,
};
use crate::scheme::{two_intersection_from_scheme, verify_scheme, SchemePartition, SchemeReport};

/// q as a function of m for each family.
pub fn family_q(family: Family, m: u64) -> u64 {
    match family {
        Family::E8 => 4 * m * m + 4 * m + 3,
        Family::E4 => 2 * m * m + 2 * m + 1,
        Family::Scheme => 2 * m * m - 1,
    }
}

fn family_form(family: Family) -> &'static str {
    match family {
        Family::E8 => "4m^2+4m+3",
        Family::E4 => "2m^2+2m+1",
        Family::Scheme => "2m^2-1 with m odd",
    }
}

/// Recovers m from q, failing when q is not of the family's form.
pub fn family_m(family: Family, q: u64) -> Result<u64> {
    let guess = match family {
        Family::E8 => isqrt(q / 4),
        Family::E4 => isqrt(q / 2),
        Family::Scheme => isqrt(q.div_ceil(2)),
    };
    let lo = guess.saturating_sub(1).max(1);
    (lo..=guess + 1)
        .find(|&m| family_q(family, m) == q && (family != Family::Scheme || m % 2 == 1))
        .ok_or(Error::NotInFamily {
            q,
            form: family_form(family),
        })
}

/// GF(q²) for a prime power q.
pub fn square_field(q: u64) -> Result<FieldContext> {
    let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    build_field(p, 2 * f)
}

/// Optional user overrides of the automatically chosen exponent.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub ell: Option<u64>,
    pub h: Option<u64>,
}

/// A construction together with whether it meets the family's promise.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub family: Family,
    pub m: u64,
    pub q: u64,
    pub construction: Construction,
    /// Row sums the family promises.
    pub expected_row_sums: Vec<i64>,
    pub promise_met: bool,
    pub scheme: Option<SchemeReport>,
}

/// Summary written next to the matrices.
#[derive(Serialize)]
pub struct OutcomeSummary<'a> {
    pub family: Family,
    pub m: u64,
    pub q: u64,
    pub params: &'a ParamChoice,
    pub set_sizes: &'a [usize],
    pub intersection_sizes: Vec<Vec<usize>>,
    pub expected_row_sums: &'a [i64],
    pub promise_met: bool,
    pub report: &'a crate::hadamard::ExcessReport,
}

impl Outcome {
    pub fn summary(&self) -> OutcomeSummary<'_> {
        OutcomeSummary {
            family: self.family,
            m: self.m,
            q: self.q,
            params: &self.construction.params,
            set_sizes: &self.construction.set_sizes,
            intersection_sizes: self
                .construction
                .profiles
                .iter()
                .map(|p| p.values())
                .collect(),
            expected_row_sums: &self.expected_row_sums,
            promise_met: self.promise_met,
            report: &self.construction.report,
        }
    }
}

fn outcome(
    family: Family,
    m: u64,
    q: u64,
    c: Construction,
    expected: Vec<i64>,
    scheme: Option<SchemeReport>,
) -> Outcome {
    let got: BTreeSet<i64> = c.report.row_sums.keys().copied().collect();
    let want: BTreeSet<i64> = expected.iter().copied().collect();
    let promise_met = got == want && c.report.attains_bound;
    Outcome {
        family,
        m,
        q,
        construction: c,
        expected_row_sums: expected,
        promise_met,
        scheme,
    }
}

fn params_for(big: &FieldContext, family: Family, o: Overrides) -> Result<ParamChoice> {
    match o.ell {
        Some(ell) => validate_params(big, family, ell, o.h),
        None if o.h.is_some() => {
            let h = o.h.unwrap();
            crate::intersection::admissible_params(big, family)?
                .into_iter()
                .find(|p| p.h == h)
                .ok_or_else(|| Error::BadParams(format!("no admissible l with h = {h}")))
        }
        None => find_params(big, family),
    }
}

fn mismatch(what: &str, got: impl std::fmt::Debug, want: impl std::fmt::Debug) -> Error {
    Error::ProfileMismatch(format!("{what}: got {got:?}, expected {want:?}"))
}

/// Biregular matrix of order 4(m²+m+1) from q = 4m²+4m+3.
pub fn run_q3(m: u64, o: Overrides) -> Result<Outcome> {
    let q = family_q(Family::E8, m);
    let big = square_field(q)?;
    let params = params_for(&big, Family::E8, o)?;
    let dec = params
        .decomposition
        .expect("E8 parameters carry a decomposition");
    let h = e8_index_set(&dec, params.h);
    let d = build_dlh(&big, params.ell, 8, &h)?;
    let size = d.count_ones(..) as u64;
    if size != 2 * m * m + m + 2 {
        return Err(mismatch("|D|", size, 2 * m * m + m + 2));
    }
    let sub = big.half_subfield()?;
    let threshold = (m * m + m + 1) as usize;
    let c = transform_biregular_q3(&sub, params, &d, threshold)?;

    // each block count is fixed by the class of 1 + ω^ℓ s
    let wl = big.exp_log(params.ell as i64);
    for (i, s) in sub.elements().enumerate() {
        let k =
            big.discrete_log(big.add(crate::field::FieldElement::ONE, big.mul(wl, s)))? as u64 % 8;
        let want = e8_predicted_count(m, dec.epsilon * dec.delta, params.h, k);
        let got = c.profiles[0].sizes[i] as u64;
        if got != want {
            return Err(mismatch(&format!("block {i} count"), got, want));
        }
    }
    let mi = m as i64;
    Ok(outcome(
        Family::E8,
        m,
        q,
        c,
        vec![2 * mi - 2, 2 * mi + 2],
        None,
    ))
}

/// Biregular matrix of order 4(m²+m+1) from q = 2m²+2m+1.
pub fn run_q1(m: u64, o: Overrides) -> Result<Outcome> {
    let q = family_q(Family::E4, m);
    let big = square_field(q)?;
    let params = params_for(&big, Family::E4, o)?;
    let (h0, h1) = e4_index_sets(
        &params
            .decomposition
            .expect("E4 parameters carry a decomposition"),
        params.h,
    );
    let d0 = build_dlh(&big, params.ell, 4, &h0)?;
    let d1 = build_dlh(&big, params.ell, 4, &h1)?;
    let odd = m % 2 == 1;
    let sizes = (d0.count_ones(..) as u64, d1.count_ones(..) as u64);
    let want = if odd {
        (m * m, m * m + m)
    } else {
        (m * m, m * m + m + 1)
    };
    if sizes != want {
        return Err(mismatch("(|D_0|, |D_1|)", sizes, want));
    }
    let m2 = (m * m) as usize;
    let mu = m as usize;
    let thresholds = if odd {
        (m2 + mu, m2 + mu - 1)
    } else {
        (m2 + mu + 1, m2 + mu)
    };
    let sub = big.half_subfield()?;
    let c = transform_biregular_q1(&sub, params, &d0, &d1, thresholds)?;
    let mi = m as i64;
    let expected = if odd {
        vec![2 * mi - 2, 2 * mi + 2]
    } else {
        vec![2 * mi, 2 * mi + 4]
    };
    Ok(outcome(Family::E4, m, q, c, expected, None))
}

/// Regular matrix of order 4m² from a verified scheme partition.
pub fn run_regular(part: &SchemePartition, o: Overrides) -> Result<Outcome> {
    let big = part.field()?;
    let report = verify_scheme(&big, part)?;
    if !report.passes() {
        return Err(Error::SchemeInvalid(match (&report.first_failure, report.structure_ok, report.is_scheme) {
            (_, false, _) => "shift or coset condition fails".to_string(),
            (_, _, false) => "intersection numbers are not constant".to_string(),
            (Some(f), ..) => format!(
                "Table 1 cell (Y_{}, X_{}) for tau = {} at a = w^{}: expected {:.6}, got {:.6}{:+.6}i",
                f.row, f.col, f.tau, f.a_log, f.expected, f.got[0], f.got[1]
            ),
            (None, ..) => "Table 1 mismatch".to_string(),
        }));
    }
    let tau = report.tau.expect("a passing report has a tau");
    let m = part.m;
    let candidates = scheme_params(&big, &part.class_of(), m, tau)?;
    let params = match o.ell {
        Some(ell) => *candidates.iter().find(|p| p.ell == ell).ok_or_else(|| {
            Error::BadParams(format!("l = {ell} is not admissible for this partition"))
        })?,
        None => *candidates.first().ok_or_else(|| {
            Error::ParamSearchFailed(format!("scheme family over q = {}", part.q))
        })?,
    };
    let (d0, d1) = two_intersection_from_scheme(&big, part, &params)?;
    let sub = big.half_subfield()?;
    let c = transform_regular(&sub, params, &d0, &d1, (m * m) as usize)?;
    Ok(outcome(
        Family::Scheme,
        m,
        part.q,
        c,
        vec![2 * m as i64],
        Some(report),
    ))
}

/// Runs a family by m.
pub fn run(
    family: Family,
    m: u64,
    partition: Option<&SchemePartition>,
    o: Overrides,
) -> Result<Outcome> {
    match family {
        Family::E8 => run_q3(m, o),
        Family::E4 => run_q1(m, o),
        Family::Scheme => {
            let part = partition
                .ok_or_else(|| Error::BadParams("the regular family needs a partition".into()))?;
            if part.m != m {
                return Err(Error::BadParams(format!(
                    "partition is for m = {}, not {m}",
                    part.m
                )));
            }
            run_regular(part, o)
        }
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::Counter;
use hadex::build_field;
use hadex::characters::{
    check_davenport_hasse, check_lemma31_32, decompose_gauss, gauss_sum, jacobi_factorization,
    quadratic_gauss_closed_form, TOL,
};
use hadex::hadamard::{
    apply_signing, construct_q1, construct_q3, excess_and_bound, DiagonalSigning, Q1Variant,
    SignMatrix,
};
use hadex::intersection::{
    admissible_params, check_size_formulas, e4_index_sets, e8_index_set, Family,
};
use hadex::pipeline::square_field;
use hadex::scheme::{bannai_muzychuk_check, eigenmatrix, verify_scheme, SchemePartition};
use num_complex::Complex64;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs `hadex construct` and reads back the signed matrix.
fn construct(dir: &Path, args: &[&str], stem: &str) -> Result<(SignMatrix, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hadex"))
        .arg("construct")
        .args(args)
        .args(["--out", dir.to_str().unwrap()])
        .output()
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let text =
        std::fs::read_to_string(dir.join(format!("{stem}.txt"))).map_err(|e| e.to_string())?;
    Ok((SignMatrix::parse(&text).map_err(|e| e.to_string())?, took))
}

/// Frequencies of the larger and smaller row sum from n, k_1, k_2 alone.
fn closed_form_frequencies(n: i64, k1: i64, k2: i64) -> (i64, i64) {
    let m1 = (n * n - n * k2 * k2) / (k1 * k1 - k2 * k2);
    (m1, n - m1)
}

fn check_biregular(
    h: &SignMatrix,
    m: i64,
    want: [i64; 2],
    limit: Duration,
    took: Duration,
) -> Result<(), String> {
    let n = 4 * (m * m + m + 1);
    let r = excess_and_bound(h).map_err(|e| e.to_string())?;
    ensure(r.n as i64 == n, || format!("m = {m}: order {}", r.n))?;
    ensure(r.excess == n * (2 * m + 1) && r.excess == r.bound, || {
        format!("m = {m}: excess {} bound {}", r.excess, r.bound)
    })?;
    let got: Vec<i64> = r.row_sums.keys().copied().collect();
    ensure(got == want, || {
        format!("m = {m}: row sums {got:?}, expected {want:?}")
    })?;
    let (m1, m2) = closed_form_frequencies(n, want[1], want[0]);
    ensure(
        r.row_sums[&want[1]] as i64 == m1 && r.row_sums[&want[0]] as i64 == m2,
        || format!("m = {m}: frequencies {:?} vs ({m1}, {m2})", r.row_sums),
    )?;
    ensure(took < limit, || format!("m = {m}: took {took:?}"))
}

fn criterion_q3() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst = Duration::ZERO;
    for m in [1i64, 2, 4, 7] {
        let stem = format!("q3-m{m}");
        let (h, took) = construct(
            dir.path(),
            &["--family", "q3", "--m", &m.to_string()],
            &stem,
        )?;
        check_biregular(&h, m, [2 * m - 2, 2 * m + 2], Duration::from_secs(5), took)?;
        worst = worst.max(took);
    }
    Ok(format!(
        "m = 1, 2, 4, 7 attain n(2m+1); slowest {worst:.2?}"
    ))
}

fn criterion_q1() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst = Duration::ZERO;
    for m in 1i64..=5 {
        let stem = format!("q1-m{m}");
        let (h, took) = construct(
            dir.path(),
            &["--family", "q1", "--m", &m.to_string()],
            &stem,
        )?;
        let want = if m % 2 == 1 {
            [2 * m - 2, 2 * m + 2]
        } else {
            [2 * m, 2 * m + 4]
        };
        check_biregular(&h, m, want, Duration::from_secs(5), took)?;
        worst = worst.max(took);
    }
    Ok(format!(
        "m = 1..5 attain n(2m+1) with closed-form frequencies; slowest {worst:.2?}"
    ))
}

fn criterion_regular() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (file, m) in [("m3.scheme", 3i64), ("m5.scheme", 5)] {
        let start = Instant::now();
        let part = SchemePartition::parse(
            &std::fs::read_to_string(data(file)).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let big = part.field().map_err(|e| e.to_string())?;
        let report = verify_scheme(&big, &part).map_err(|e| e.to_string())?;
        ensure(
            report.structure_ok && report.is_scheme && report.table1_match,
            || format!("{file}: scheme verification failed"),
        )?;
        let (h, _) = construct(
            dir.path(),
            &["--family", "regular", "--partition", &data(file)],
            &format!("regular-m{m}"),
        )?;
        let r = excess_and_bound(&h).map_err(|e| e.to_string())?;
        let n = 4 * m * m;
        ensure(
            r.n as i64 == n && r.row_sums.len() == 1 && r.row_sums.contains_key(&(2 * m)),
            || format!("{file}: row sums {:?}", r.row_sums),
        )?;
        ensure(r.excess == n * 2 * m && r.excess == r.bound, || {
            format!("{file}: excess {}", r.excess)
        })?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(60), || {
            format!("{file}: took {took:?}")
        })?;
        notes.push(format!(
            "m = {m}: E = {} tau = {:?} in {took:.2?}",
            r.excess, report.taus
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_oracles() -> Check {
    let mut count = 0;
    let mut seq = Counter::new(7);
    for q in [5u64, 11, 13, 25, 27] {
        let big = square_field(q).map_err(|e| e.to_string())?;
        let sub = big.half_subfield().map_err(|e| e.to_string())?;
        let (family, e) = if q % 4 == 3 {
            (Family::E8, 8)
        } else {
            (Family::E4, 4)
        };
        for p in admissible_params(&big, family).map_err(|e| e.to_string())? {
            let dec = p.decomposition.unwrap();
            let sets = match family {
                Family::E8 => vec![e8_index_set(&dec, p.h)],
                _ => {
                    let (a, b) = e4_index_sets(&dec, p.h);
                    vec![a, b]
                }
            };
            for h in sets {
                let c = check_size_formulas(&big, p.ell, e, &h).map_err(|e| e.to_string())?;
                ensure(c.agrees(), || format!("q = {q}, l = {}, H = {h:?}", p.ell))?;
                count += 1;
            }
        }
        let mut pairs = 0;
        while pairs < 20 {
            let ell = seq.below(q * q - 1);
            if ell % (q + 1) == 0 {
                continue;
            }
            let s = sub.element(seq.below(q) as usize);
            ensure(
                check_lemma31_32(&big, e, ell, s).map_err(|e| e.to_string())?,
                || format!("lemma identities fail at q = {q}, l = {ell}"),
            )?;
            pairs += 1;
        }
    }
    Ok(format!("{count} (l, H) pairs and 100 lemma points agree"))
}

fn criterion_closed_forms() -> Check {
    let mut fields = 0;
    for q in 3..=200u64 {
        let Some((p, f)) = (2..=q).find(|p| q % p == 0).and_then(|p| {
            let mut f = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                f += 1;
            }
            (r == 1 && p > 2).then_some((p as u32, f))
        }) else {
            continue;
        };
        let ctx = build_field(p, f).map_err(|e| e.to_string())?;
        let g = gauss_sum(&ctx.whole(), 2, 1).map_err(|e| e.to_string())?;
        let want = quadratic_gauss_closed_form(q).map_err(|e| e.to_string())?;
        ensure((g - want).norm() < TOL, || {
            format!("quadratic Gauss sum at q = {q}")
        })?;
        fields += 1;
    }
    for q in [11u64, 27, 83] {
        decompose_gauss(&square_field(q).map_err(|e| e.to_string())?, true)
            .map_err(|e| format!("decomposition at q = {q}: {e}"))?;
    }
    for (p, e) in [(5u32, 2u64), (11, 2), (7, 2)] {
        let ext = build_field(p, 2).map_err(|e| e.to_string())?;
        ensure(
            check_davenport_hasse(&ext, 1, e).map_err(|e| e.to_string())?,
            || format!("Davenport-Hasse at q = {p}"),
        )?;
    }
    for (p, f) in [(5u32, 1u32), (13, 1), (17, 1), (5, 2), (29, 1)] {
        let ctx = build_field(p, f).map_err(|e| e.to_string())?;
        let (a, b) = jacobi_factorization(&ctx.whole()).map_err(|e| e.to_string())?;
        ensure(a * a + b * b == ctx.order() as i64, || {
            format!("Jacobi sum at q = {}", ctx.order())
        })?;
    }
    Ok(format!(
        "{fields} quadratic Gauss sums, 3 decompositions, 3 lifts, 5 Jacobi factorizations"
    ))
}

fn criterion_properties() -> Check {
    let mut bases = Vec::new();
    for (p, f) in [(7u32, 1u32), (11, 1), (3, 3)] {
        bases.push(construct_q3(&build_field(p, f).unwrap().whole()).map_err(|e| e.to_string())?);
    }
    for (p, f) in [(5u32, 1u32), (13, 1)] {
        bases.push(
            construct_q1(&build_field(p, f).unwrap().whole(), Q1Variant::Plain)
                .map_err(|e| e.to_string())?,
        );
    }
    let mut seq = Counter::new(100);
    let mut orders = BTreeSet::new();
    for h in &bases {
        let n = h.order();
        orders.insert(n);
        for _ in 0..100 {
            let rows = DiagonalSigning {
                signs: seq.signs(n),
            };
            let cols = DiagonalSigning {
                signs: seq.signs(n),
            };
            let g = apply_signing(h, &rows, &cols).map_err(|e| e.to_string())?;
            let r = excess_and_bound(&g).map_err(|e| format!("order {n}: {e}"))?;
            let squares: i64 = r.row_sums.iter().map(|(v, c)| v * v * *c as i64).sum();
            ensure(squares == (n * n) as i64, || {
                format!("order {n}: row-sum squares {squares}")
            })?;
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [(&[&str], &str); 4] = [
        (&["--family", "q3", "--m", "2"], "q3-m2"),
        (&["--family", "q1", "--m", "2"], "q1-m2"),
        (&["--family", "q1", "--m", "3"], "q1-m3"),
        (
            &["--family", "regular", "--partition", &data("m3.scheme")],
            "regular-m3",
        ),
    ];
    for (args, stem) in runs {
        let (h, _) = construct(dir.path(), args, stem)?;
        let t = excess_and_bound(&h.transpose()).map_err(|e| e.to_string())?;
        ensure(t.attains_bound && t.row_sums.len() <= 2, || {
            format!("{stem}: transpose {:?}", t.row_sums)
        })?;
    }
    for file in ["m3.scheme", "m5.scheme"] {
        let part = SchemePartition::parse(&std::fs::read_to_string(data(file)).unwrap())
            .map_err(|e| e.to_string())?;
        let big = part.field().map_err(|e| e.to_string())?;
        let em = eigenmatrix(&big, &part.class_of(), 4).map_err(|e| e.to_string())?;
        for row in &em.rows[1..] {
            let s: Complex64 = row.iter().skip(1).sum();
            ensure((s + 1.0).norm() < TOL, || {
                format!("{file}: eigenmatrix row sums to {s}")
            })?;
        }
        ensure(
            bannai_muzychuk_check(&em, &[vec![1, 3], vec![2, 4]]),
            || format!("{file}: fusion rejected"),
        )?;
    }
    Ok(format!(
        "100 signings at orders {orders:?}; 4 transposes; 2 schemes fuse"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 6] = [
        ("q = 4m^2+4m+3 biregular family", criterion_q3),
        ("q = 2m^2+2m+1 biregular family", criterion_q1),
        ("regular family from scheme partitions", criterion_regular),
        ("character-sum size formulas", criterion_oracles),
        ("Gauss and Jacobi closed forms", criterion_closed_forms),
        ("property suite", criterion_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        match result {
            Ok(note) => println!("PASS {} {name} ({took:.2?}): {note}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name} ({took:.2?}): {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Four-class scheme partitions: structure, intersection numbers, Table 1
//! and fusions.

use hadex::scheme::{
    bannai_muzychuk_check, eigenmatrix, find_scheme_params, intersection_numbers, scheme_search,
    two_intersection_from_scheme, verify_scheme, verify_structure, SchemePartition,
};
use hadex::FieldContext;
use num_complex::Complex64;

fn partition(name: &str) -> SchemePartition {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    SchemePartition::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn fused(class_of: &[u8], grouping: &[&[u8]]) -> Vec<u8> {
    class_of
        .iter()
        .map(|c| grouping.iter().position(|g| g.contains(c)).unwrap() as u8 + 1)
        .collect()
}

#[test]
fn published_partitions_verify() {
    for (name, m) in [("m3.scheme", 3u64), ("m5.scheme", 5)] {
        let p = partition(name);
        let big = p.field().unwrap();
        let r = verify_scheme(&big, &p).unwrap();
        assert!(r.structure_ok && r.is_scheme && r.table1_match, "{name}");
        assert!(r.symmetric);
        let small = (m * (m * m - 1) * (m - 1)) as usize;
        let large = (m * (m * m - 1) * (m + 1)) as usize;
        assert_eq!(r.class_sizes, vec![1, small, large, small, large]);
        for k in 0..5 {
            for i in 0..5 {
                for j in 0..5 {
                    assert_eq!(
                        r.intersection_numbers[k][i][j],
                        r.intersection_numbers[k][j][i]
                    );
                }
            }
        }
    }
}

#[test]
fn table1_cell_at_m3() {
    let p = partition("m3.scheme");
    let r = verify_scheme(&p.field().unwrap(), &p).unwrap();
    let want = (11.0 - 3.0 * 17f64.sqrt()) / 2.0;
    assert!((r.eigenmatrix[1][1][0] - want).abs() < 1e-6);
    assert!((want + 0.6847).abs() < 1e-4);
    assert_eq!(
        r.eigenmatrix[0].iter().map(|z| z[0]).collect::<Vec<_>>(),
        vec![1.0, 48.0, 96.0, 48.0, 96.0]
    );
}

#[test]
fn eigenmatrix_rows_and_orthogonality() {
    for name in ["m3.scheme", "m5.scheme"] {
        let p = partition(name);
        let big = p.field().unwrap();
        let em = eigenmatrix(&big, &p.class_of(), 4).unwrap();
        assert_eq!(em.rows.len(), 5);
        for row in &em.rows[1..] {
            let s: Complex64 = row.iter().skip(1).sum();
            assert!((s + 1.0).norm() < 1e-6);
        }
        let per = (big.order() as usize - 1) / p.e as usize;
        let mult: Vec<usize> = std::iter::once(1)
            .chain(em.dual_classes.iter().map(|d| d.len() * per))
            .collect();
        let sizes: Vec<f64> = em.rows[0].iter().map(|z| z.re).collect();
        for i in 0..5 {
            for j in 0..5 {
                let s: Complex64 = (0..5)
                    .map(|r| em.rows[r][i] * em.rows[r][j].conj() * mult[r] as f64)
                    .sum();
                let want = if i == j {
                    big.order() as f64 * sizes[i]
                } else {
                    0.0
                };
                assert!((s - want).norm() < 1e-6, "{name} ({i},{j})");
            }
        }
    }
}

#[test]
fn fusions_agree_with_direct_verification() {
    let p = partition("m3.scheme");
    let big = p.field().unwrap();
    let class_of = p.class_of();
    let em = eigenmatrix(&big, &class_of, 4).unwrap();
    let groupings: [&[&[u8]]; 4] = [
        &[&[1, 3], &[2, 4]],
        &[&[1, 2, 3, 4]],
        &[&[1, 2], &[3, 4]],
        &[&[1, 4], &[2, 3]],
    ];
    let expect = [true, true, false, false];
    for (g, want) in groupings.iter().zip(expect) {
        let cols: Vec<Vec<usize>> = g
            .iter()
            .map(|s| s.iter().map(|&c| c as usize).collect())
            .collect();
        assert_eq!(bannai_muzychuk_check(&em, &cols), want, "{g:?}");
        let direct = intersection_numbers(&big, &fused(&class_of, g), g.len()).constant;
        assert_eq!(direct, want, "{g:?}");
    }
}

#[test]
fn perturbed_partitions_fail() {
    let p = partition("m3.scheme");
    let big = p.field().unwrap();
    let mut swapped = p.clone();
    swapped.h_lists.swap(1, 3);
    let r = verify_scheme(&big, &swapped).unwrap();
    assert!(r.structure_ok && !r.table1_match);
    assert!(r.first_failure.is_some());

    let mut broken = p.clone();
    broken.h_lists[0] = vec![1, 6];
    broken.h_lists[3] = vec![3, 4, 5, 8];
    assert!(!verify_structure(&big, &broken).unwrap());
}

#[test]
fn two_intersection_sets() {
    for (name, m) in [("m3.scheme", 3usize), ("m5.scheme", 5)] {
        let p = partition(name);
        let big = p.field().unwrap();
        let tau = verify_scheme(&big, &p).unwrap().tau.unwrap();
        let params = find_scheme_params(&big, &p, tau).unwrap();
        let (d0, d1) = two_intersection_from_scheme(&big, &p, &params).unwrap();
        assert_eq!(d0.count_ones(..), m * m - m);
        assert_eq!(d1.count_ones(..), m * m);
    }
}

#[test]
fn search_recovers_published_lists() {
    let p = partition("m3.scheme");
    let big = p.field().unwrap();
    let out = scheme_search(&big, 3, 12, u64::MAX).unwrap();
    assert!(out.complete);
    assert!(out.found.contains(&p));
    // every hit is a genuine scheme
    for f in &out.found {
        assert!(verify_scheme(&big, f).unwrap().passes());
    }
    let coarse = scheme_search(&big, 3, 6, u64::MAX).unwrap();
    assert!(coarse.found.is_empty());
}

#[test]
fn search_is_deterministic_and_budgeted() {
    let big = FieldContext::new(17, 2).unwrap();
    let a = scheme_search(&big, 3, 12, u64::MAX).unwrap();
    let b = scheme_search(&big, 3, 12, u64::MAX).unwrap();
    assert_eq!(a.found, b.found);
    assert!(!a.found.is_empty());
    let partial = scheme_search(&big, 3, 12, 10).unwrap();
    assert!(!partial.complete);
    assert_eq!(partial.examined, 10);
}

use std::time::Instant;

use hadex::hadamard::excess_and_bound;
use hadex::intersection::Family;
use hadex::pipeline::{run, run_regular, Overrides};
use hadex::scheme::SchemePartition;

fn partition(name: &str) -> SchemePartition {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    SchemePartition::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn q3_family_attains_bound() {
    for m in [1u64, 2, 4, 7] {
        let t = Instant::now();
        let o = run(Family::E8, m, None, Overrides::default()).unwrap();
        let r = &o.construction.report;
        let n = 4 * (m * m + m + 1) as i64;
        assert_eq!(r.n as i64, n);
        assert_eq!(r.excess, n * (2 * m as i64 + 1));
        assert_eq!(r.excess, r.bound);
        assert!(o.promise_met, "m = {m}: {:?}", r.row_sums);
        assert_eq!(r.frequencies_match, Some(true));
        let tr = excess_and_bound(&o.construction.transformed.transpose()).unwrap();
        assert!(tr.attains_bound && tr.is_biregular());
        eprintln!("q3 m={m} {:?}", t.elapsed());
    }
}

#[test]
fn q1_family_attains_bound() {
    for m in 1u64..=5 {
        let t = Instant::now();
        let o = run(Family::E4, m, None, Overrides::default()).unwrap();
        let r = &o.construction.report;
        let n = 4 * (m * m + m + 1) as i64;
        assert_eq!(r.excess, n * (2 * m as i64 + 1));
        assert!(o.promise_met, "m = {m}: {:?}", r.row_sums);
        assert_eq!(r.frequencies_match, Some(true));
        let tr = excess_and_bound(&o.construction.transformed.transpose()).unwrap();
        assert!(tr.attains_bound && tr.is_biregular());
        eprintln!("q1 m={m} {:?}", t.elapsed());
    }
}

#[test]
fn regular_family_from_partitions() {
    for (name, m) in [("m3.scheme", 3i64), ("m5.scheme", 5)] {
        let t = Instant::now();
        let o = run_regular(&partition(name), Overrides::default()).unwrap();
        let r = &o.construction.report;
        assert!(r.is_regular());
        assert_eq!(r.row_sum_values(), vec![2 * m]);
        assert_eq!(r.excess, 4 * m * m * 2 * m);
        assert_eq!(
            o.construction.set_sizes,
            vec![(m * m - m) as usize, (m * m) as usize]
        );
        let tr = excess_and_bound(&o.construction.transformed.transpose()).unwrap();
        assert!(tr.attains_bound && tr.is_regular());
        assert!(o.promise_met);
        eprintln!("regular m={m} {:?}", t.elapsed());
    }
}

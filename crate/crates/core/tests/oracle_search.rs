use programsey::oracle::{count_mono_colorings, primary_census, OracleBudget};
use programsey::search::{check_witness, exact_threshold, SearchBudget};
use programsey::spectral::{alpha_bound, beta_quasi, DEFAULT_TOL};
use programsey::witness::WitnessFile;
use programsey::Family;

fn semi(m: usize) -> Family {
    Family::semi(m).unwrap()
}

fn count(r: usize, n: usize, k: usize, f: Family) -> u64 {
    count_mono_colorings(r, n, k, f, &OracleBudget::default())
        .unwrap()
        .mono_count
}

#[test]
fn proportion_non_decreasing_in_n() {
    for (r, k, f) in [
        (2, 3, semi(1)),
        (2, 3, semi(2)),
        (2, 4, semi(2)),
        (2, 3, Family::quasi(1)),
        (2, 4, Family::quasi(2)),
        (3, 3, semi(1)),
    ] {
        let max_n = if r == 2 { 14 } else { 9 };
        let mut prev = 0.0;
        for n in 1..=max_n {
            let rep = count_mono_colorings(r, n, k, f, &OracleBudget::default()).unwrap();
            assert!(rep.proportion() >= prev, "r={r} k={k} {f} N={n}");
            prev = rep.proportion();
        }
    }
}

#[test]
fn family_nesting() {
    for n_points in 3..=11 {
        for k in 3..=4 {
            for m in 1..4 {
                assert!(count(2, n_points, k, semi(m)) <= count(2, n_points, k, semi(m + 1)));
            }
            for n in 0..3 {
                assert!(
                    count(2, n_points, k, Family::quasi(n))
                        <= count(2, n_points, k, Family::quasi(n + 1))
                );
            }
        }
    }
}

#[test]
fn scope_one_equals_diameter_zero() {
    for (r, n_points, k) in [(2, 10, 3), (2, 12, 4), (3, 8, 3), (3, 7, 2), (4, 6, 3)] {
        assert_eq!(
            count(r, n_points, k, semi(1)),
            count(r, n_points, k, Family::quasi(0))
        );
    }
}

#[test]
fn counting_bound_holds_three_colors() {
    for n_points in 2..=9 {
        for k in 2..=4 {
            for f in [semi(1), semi(2), Family::quasi(1), Family::quasi(2)] {
                let rep =
                    count_mono_colorings(3, n_points, k, f, &OracleBudget::default()).unwrap();
                assert!(rep.bound_satisfied, "N={n_points} k={k} {f}");
            }
        }
    }
}

#[test]
fn oracle_is_independent_of_thread_count() {
    let f = Family::quasi(1);
    let many = count_mono_colorings(2, 16, 4, f, &OracleBudget::default()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let one = pool.install(|| count_mono_colorings(2, 16, 4, f, &OracleBudget::default()).unwrap());
    assert_eq!(many.mono_count, one.mono_count);
}

#[test]
fn partition_and_forcing_over_grid() {
    let b = OracleBudget::default();
    for f in [
        semi(1),
        semi(2),
        semi(3),
        Family::quasi(1),
        Family::quasi(2),
    ] {
        for (n_points, k) in [(9, 3), (10, 4)] {
            for a in 1..=3 {
                for d in 1..=2 {
                    let rep = primary_census(2, n_points, k, f, a, d, &b).unwrap();
                    assert!(rep.partition_holds, "{f} N={n_points} k={k} a={a} d={d}");
                    assert!(rep.forced_bound_holds, "{f} N={n_points} k={k} a={a} d={d}");
                }
            }
        }
    }
    let rep = primary_census(3, 8, 3, Family::quasi(1), 1, 2, &b).unwrap();
    assert!(rep.partition_holds && rep.forced_bound_holds);
}

/// Instances whose exact value is cheap to compute, and small enough for the oracle sweep.
fn sweepable() -> Vec<(usize, usize, Family)> {
    vec![
        (2, 2, semi(1)),
        (3, 2, semi(2)),
        (4, 2, Family::quasi(1)),
        (2, 3, semi(1)),
        (2, 3, semi(2)),
        (2, 3, semi(3)),
        (2, 3, Family::quasi(0)),
        (2, 3, Family::quasi(1)),
        (2, 3, Family::quasi(2)),
        (2, 4, semi(2)),
        (2, 4, semi(3)),
        (2, 4, Family::quasi(1)),
        (2, 4, Family::quasi(2)),
        (3, 3, semi(3)),
    ]
}

#[test]
fn threshold_agrees_with_oracle() {
    let budget = OracleBudget {
        max_points: 24,
        max_colorings: 1 << 21,
    };
    for (r, k, f) in sweepable() {
        let cert = exact_threshold(r, k, f, &SearchBudget::default()).unwrap();
        let at = count_mono_colorings(r, cert.value, k, f, &budget).unwrap();
        let below = count_mono_colorings(r, cert.value - 1, k, f, &budget).unwrap();
        assert!(at.all_monochromatic(), "r={r} k={k} {f}");
        assert!(!below.all_monochromatic(), "r={r} k={k} {f}");
        // the least N with proportion 1
        let least = (1..=cert.value)
            .find(|&n| {
                count_mono_colorings(r, n, k, f, &budget)
                    .unwrap()
                    .all_monochromatic()
            })
            .unwrap();
        assert_eq!(least, cert.value);
    }
}

#[test]
fn certificates_are_sound() {
    for (r, k, f) in sweepable()
        .into_iter()
        .chain([(2, 4, semi(1)), (3, 3, semi(1))])
    {
        let cert = exact_threshold(r, k, f, &SearchBudget::default()).unwrap();
        assert!(cert.exhaustive);
        assert_eq!(cert.witness.n_points(), cert.value - 1);
        assert!(check_witness(&cert.witness, k, f).unwrap());
        let file = cert.witness_file().unwrap();
        let parsed = WitnessFile::parse(&file.to_text()).unwrap();
        assert_eq!(parsed, file);
        assert!(parsed.check().unwrap());
    }
}

#[test]
fn known_values() {
    let v = |r, k, f| {
        exact_threshold(r, k, f, &SearchBudget::default())
            .unwrap()
            .value
    };
    assert_eq!(v(2, 4, semi(1)), 35);
    assert_eq!(v(3, 3, semi(1)), 27);
}

#[test]
fn thresholds_monotone_across_families() {
    let v = |r, k, f| {
        exact_threshold(r, k, f, &SearchBudget::default())
            .unwrap()
            .value
    };
    for (r, k) in [(2, 3), (2, 4), (3, 3)] {
        for m in 1..4 {
            assert!(
                v(r, k, semi(m + 1)) <= v(r, k, semi(m)),
                "r={r} k={k} m={m}"
            );
        }
        for n in 0..3 {
            assert!(
                v(r, k, Family::quasi(n + 1)) <= v(r, k, Family::quasi(n)),
                "r={r} k={k} n={n}"
            );
        }
        assert_eq!(v(r, k, semi(1)), v(r, k, Family::quasi(0)));
    }
}

#[test]
fn lower_bounds_below_exact_values() {
    for (r, k, f) in sweepable() {
        let exact = exact_threshold(r, k, f, &SearchBudget::default())
            .unwrap()
            .value as f64;
        match f {
            Family::Semi(m) if r == 2 => assert!(alpha_bound(m).unwrap().threshold(k) < exact),
            Family::Quasi(n) => {
                assert!(beta_quasi(r, n, DEFAULT_TOL).unwrap().threshold(k) < exact)
            }
            _ => {}
        }
    }
}

#[test]
fn exact_search_is_deterministic() {
    let a = exact_threshold(2, 4, Family::quasi(1), &SearchBudget::default()).unwrap();
    let b = exact_threshold(
        2,
        4,
        Family::quasi(1),
        &SearchBudget {
            seed: 99,
            ..SearchBudget::default()
        },
    )
    .unwrap();
    assert_eq!(a, b);
}

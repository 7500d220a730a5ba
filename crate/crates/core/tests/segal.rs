use proptest::prelude::*;
use segal_lab::cofcat::fixtures::{by_name, pointed_sets, zero_category};
use segal_lab::polygon::{
    enumerate_subdivisions, enumerate_triangulations, find_consecutive_triangle, Classification,
    PolygonalSubdivision,
};
use segal_lab::sconstr::{iso_s_dot, EnumerationPolicy, TruncatedSimplicialSet};
use segal_lab::segal::*;
use segal_lab::Error;

const REPS: EnumerationPolicy = EnumerationPolicy::Representatives;

fn derived(name: &str, n: usize) -> TruncatedSimplicialSet {
    let (s, _) = by_name(name).unwrap();
    iso_s_dot(&s, n, REPS).unwrap().set
}

#[test]
fn limits_on_small_cases() {
    let z = iso_s_dot(&zero_category(), 4, REPS).unwrap().set;
    for n in 2..=4 {
        for p in enumerate_subdivisions(n).unwrap() {
            assert_eq!(limit_over_subdivision(&z, &p).unwrap().len(), 1);
        }
    }
    let x = derived("ps2", 3);
    let p = PolygonalSubdivision::new(3, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
    assert_eq!(limit_over_subdivision(&x, &p).unwrap().len(), 10);
    let t = PolygonalSubdivision::trivial(3).unwrap();
    let lim = limit_over_subdivision(&x, &t).unwrap();
    assert_eq!(lim, (0..10).map(|z| vec![z]).collect::<Vec<_>>());
    let r = two_segal_map(&x, &t).unwrap();
    assert!(r.trivial && r.bijective());
}

#[test]
fn level_overflow_is_an_error() {
    let x = derived("ps2", 3);
    let p = PolygonalSubdivision::fan(4, 0).unwrap();
    assert!(matches!(
        two_segal_map(&x, &p),
        Err(Error::LevelOverflow {
            level: 4,
            truncation: 3
        })
    ));
}

#[test]
fn left_tables_on_pointed_sets() {
    let x = derived("ps2", 4);
    let left = check_left(&x, 4).unwrap();
    assert!(left.all_hold());
    assert_eq!(left.entries.len(), 4 + 5);
    let lower = check_lower(&x, 4);
    assert!(lower.all_hold());
    for e in &left.entries {
        if e.index == 0 || e.index == e.n {
            assert_eq!(e.verdict, Verdict::Holds);
        }
    }
    // a table past the truncation is emitted with undefined entries
    let over = check_left(&x, 5).unwrap();
    assert!(over
        .entries
        .iter()
        .filter(|e| e.n == 5)
        .all(|e| e.verdict == Verdict::Undefined));
    assert!(over.all_hold() && !over.holds_up_to(5) && over.holds_up_to(4));
    assert!(check_upper(&x, 4).all_hold());
    assert!(check_right(&x, 4).unwrap().all_hold());
}

#[test]
fn left_classified_maps_are_bijections_on_fixtures() {
    for name in ["z", "ps2", "ps3", "ps2x2", "kernel-free"] {
        let x = derived(name, 5);
        for n in 2..=5 {
            for p in enumerate_subdivisions(n).unwrap() {
                if matches!(p.classify(), Classification::Left | Classification::Both) {
                    assert!(two_segal_map(&x, &p).unwrap().bijective(), "{name} {p}");
                }
            }
        }
    }
}

#[test]
fn pointed_sets_are_fully_two_segal_to_level_five() {
    let x = derived("ps3", 5);
    for n in 2..=5 {
        for p in enumerate_subdivisions(n).unwrap() {
            let r = two_segal_map(&x, &p).unwrap();
            assert!(r.bijective(), "{p}");
            assert_eq!(r.check.limit_size, x.size(n));
        }
    }
}

#[test]
fn appendix_equivalence_on_fixtures() {
    for name in ["z", "ps1", "ps2", "ps3", "kernel-free"] {
        let x = derived(name, 5);
        for row in a2_consistency(&x).unwrap() {
            assert!(row.consistent(), "{name} {row:?}");
        }
        for row in a2_consistency(&x.opposite()).unwrap() {
            assert!(row.consistent(), "{name} op {row:?}");
        }
    }
}

#[test]
fn projection_surjectivity_on_derived_sets() {
    for name in ["z", "ps2", "ps3"] {
        let x = derived(name, 5);
        for n in 3..=5 {
            for t in enumerate_triangulations(n).unwrap() {
                if find_consecutive_triangle(&t).is_ok() {
                    assert!(check_projection_surjective(&x, &t).unwrap(), "{name} {t}");
                }
            }
        }
    }
}

#[test]
fn fan_factorization_matches_the_fan_map() {
    for name in ["ps2", "ps3"] {
        let x = derived(name, 5);
        for n in 2..=5 {
            let (images, steps_ok) = fan_stepwise(&x, n).unwrap();
            assert!(steps_ok);
            let fan = PolygonalSubdivision::fan(n, 0).unwrap();
            for (z, img) in images.iter().enumerate() {
                let direct: Vec<usize> =
                    fan.members().iter().map(|m| x.restrict(n, z, m)).collect();
                assert_eq!(img, &direct);
            }
        }
    }
}

#[test]
fn reduced_and_exhaustive_modes_agree() {
    for name in ["z", "ps2", "ps3", "kernel-free"] {
        let r = reduction_consistency(&derived(name, 5), 5).unwrap();
        assert!(
            r.consistent() && r.reduced_pass && r.exhaustive_pass,
            "{name}"
        );
        assert_eq!(r.subdivisions_checked, 1 + 3 + 11 + 45);
    }
}

#[test]
fn search_on_fixtures_finds_nothing() {
    let only_z = SearchConfig {
        fixtures: vec!["z".into()],
        ..Default::default()
    };
    let r = counterexample_search(&only_z).unwrap();
    assert!(r.counterexamples.is_empty() && !r.inconclusive);
    let ps = SearchConfig {
        fixtures: vec!["ps2".into(), "ps3".into()],
        max_level: 5,
        ..Default::default()
    };
    let r = counterexample_search(&ps).unwrap();
    assert!(r.counterexamples.is_empty());
    // every neither-classified triangulation of P_4 and P_5
    assert!(r.candidates.iter().all(|c| c.maps_checked == 3 + 12));
}

#[test]
fn search_replays_from_its_seed() {
    let cfg = SearchConfig {
        seed: 7,
        categories: 6,
        ..Default::default()
    };
    let a = counterexample_search(&cfg).unwrap();
    let b = counterexample_search(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.candidates.len(), 6);
    assert!(counterexample_search(&SearchConfig::default()).is_err());
}

#[test]
fn kernel_free_levels_are_pinned() {
    assert_eq!(derived("kernel-free", 5).sizes(), &[1, 4, 8, 13, 19, 26]);
}

fn reflect(t: &VerdictTable) -> Vec<(usize, usize, Verdict)> {
    let mut v: Vec<_> = t
        .entries
        .iter()
        .map(|e| (e.n, e.n - e.index, e.verdict))
        .collect();
    v.sort_by_key(|&(n, i, _)| (n, i));
    v
}

fn plain(t: &VerdictTable) -> Vec<(usize, usize, Verdict)> {
    t.entries
        .iter()
        .map(|e| (e.n, e.index, e.verdict))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn opposite_swaps_left_and_right(seed in any::<u64>()) {
        let (ambient, mode) = by_name("ps2x2").unwrap();
        let (batch, _) = random_structures(&ambient, mode, seed, 1, 12).unwrap();
        for r in batch {
            let x = iso_s_dot(&r.structure, 4, REPS).unwrap().set;
            let op = x.opposite();
            prop_assert_eq!(reflect(&check_left(&op, 4).unwrap()), plain(&check_right(&x, 4).unwrap()));
            prop_assert_eq!(reflect(&check_lower(&op, 4)), plain(&check_upper(&x, 4)));
            for row in a2_consistency(&x).unwrap() {
                prop_assert!(row.consistent());
            }
        }
    }
}

#[test]
fn pointed_set_limits_grow_with_level() {
    let x = iso_s_dot(&pointed_sets(1).unwrap(), 4, REPS).unwrap().set;
    for n in 2..=4 {
        let fan = PolygonalSubdivision::fan(n, 0).unwrap();
        assert_eq!(limit_over_subdivision(&x, &fan).unwrap().len(), n + 1);
    }
}

use proptest::prelude::*;
use segal_lab::cofcat::fixtures::{pointed_sets, pointed_sets_with_copies, zero_category};
use segal_lab::cofcat::{CofStructure, WaldStructure};
use segal_lab::fincat::{diagram_isomorphic, ComponentFilter};
use segal_lab::sconstr::*;

const REPS: EnumerationPolicy = EnumerationPolicy::Representatives;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Nondecreasing n-tuples from {0..k}.
fn tuples(k: usize, n: usize) -> usize {
    binom(n + k, k)
}

#[test]
fn zero_category_levels_are_points() {
    let z = zero_category();
    let d = iso_s_dot(&z, 4, REPS).unwrap();
    assert_eq!(d.set.sizes(), &[1, 1, 1, 1, 1]);
    for n in 0..5 {
        assert_eq!(enumerate_sn(&z, n, REPS).unwrap().len(), 1);
    }
}

#[test]
fn pointed_set_levels_match_closed_form() {
    let ps2 = pointed_sets(2).unwrap();
    assert_eq!(
        iso_s_dot(&ps2, 3, REPS).unwrap().set.sizes(),
        &[1, 3, 6, 10]
    );
    let ps3 = pointed_sets(3).unwrap();
    assert_eq!(iso_s_dot(&ps3, 2, REPS).unwrap().set.sizes(), &[1, 4, 10]);
    let d = iso_s_dot(&ps2, 5, REPS).unwrap();
    for n in 0..=5 {
        assert_eq!(d.set.size(n), tuples(2, n));
    }
}

#[test]
fn mu_is_a_bijection_on_classes() {
    for s in [
        zero_category(),
        pointed_sets(2).unwrap(),
        pointed_sets(3).unwrap(),
    ] {
        let d = iso_s_dot(&s, 4, REPS).unwrap();
        for n in 0..=4 {
            let chains = chain_iso_classes(&s, n, EnumerationPolicy::AllChains).unwrap();
            assert_eq!(chains.len(), d.set.size(n));
        }
    }
    let ps3 = pointed_sets(3).unwrap();
    assert_eq!(
        chain_iso_classes(&ps3, 3, EnumerationPolicy::AllChains)
            .unwrap()
            .len(),
        20
    );
}

#[test]
fn round_trips() {
    let s = pointed_sets(3).unwrap();
    for ch in enumerate_chains(&s, 3, EnumerationPolicy::AllChains).unwrap() {
        let a = chain_to_sobject(&s, &ch).unwrap();
        assert_eq!(mu(&a), ch);
    }
    // zero chain
    let zero = CofChain {
        objects: vec![s.zero(); 3],
        maps: vec![s.base().identity(s.zero()); 2],
    };
    let a = chain_to_sobject(&s, &zero).unwrap();
    assert!(a.diagram().obj_map().iter().all(|&o| o == s.zero()));
    // any diagram is isomorphic to the filling of its top row
    let ex = enumerate_sn(
        &pointed_sets(2).unwrap(),
        2,
        EnumerationPolicy::Exhaustive { budget: 1000 },
    )
    .unwrap();
    let ps2 = pointed_sets(2).unwrap();
    for a in &ex {
        let b = chain_to_sobject(&ps2, &mu(a)).unwrap();
        assert!(diagram_isomorphic(a.diagram(), b.diagram()).unwrap());
    }
}

#[test]
fn fillings_satisfy_the_staircase_conditions() {
    let s = pointed_sets(3).unwrap();
    for n in 0..=3 {
        for a in enumerate_sn(&s, n, REPS).unwrap() {
            assert!(validate_sobject(&s, &a).is_empty(), "{}", a.label());
        }
    }
}

#[test]
fn exhaustive_agrees_with_chain_fillings_up_to_iso() {
    let s = pointed_sets(2).unwrap();
    for n in 0..=2 {
        let mut cl = IsoClassifier::new();
        for a in enumerate_sn(&s, n, EnumerationPolicy::Exhaustive { budget: 10_000 }).unwrap() {
            cl.classify(&a).unwrap();
        }
        assert_eq!(cl.reps().len(), tuples(2, n));
    }
}

#[test]
fn simplicial_maps() {
    let s = pointed_sets(3).unwrap();
    let c = s.base();
    let chain = CofChain {
        objects: vec![segal_lab::fincat::ObjId(1), segal_lab::fincat::ObjId(2)],
        maps: vec![s
            .cofibrations_from(segal_lab::fincat::ObjId(1))
            .find(|&m| c.target(m) == segal_lab::fincat::ObjId(2))
            .unwrap()],
    };
    let a = chain_to_sobject(&s, &chain).unwrap();
    assert_eq!(simplicial_map(&[0, 1, 2], &a).unwrap(), a);
    let b = simplicial_map(&coface(2, 1), &a).unwrap();
    assert_eq!(b.n(), 1);
    assert_eq!(c.rank(b.obj(0, 1)), Some(2));
    assert!(simplicial_map(&[1, 0], &a).is_err());
    let z = chain_to_sobject(
        &s,
        &CofChain {
            objects: vec![s.zero(); 2],
            maps: vec![c.identity(s.zero())],
        },
    )
    .unwrap();
    let dz = simplicial_map(&coface(2, 0), &z).unwrap();
    assert!(dz.diagram().obj_map().iter().all(|&o| o == s.zero()));
}

#[test]
fn simplicial_identities_and_opposite() {
    for s in [
        pointed_sets(2).unwrap(),
        pointed_sets_with_copies(2, 2).unwrap(),
    ] {
        let d = iso_s_dot(&s, 4, REPS).unwrap();
        assert!(d.set.check_identities().is_empty());
        assert!(d.set.opposite().check_identities().is_empty());
        assert_eq!(d.set.opposite().opposite(), d.set);
    }
}

#[test]
fn faces_are_well_defined_on_all_chains() {
    // AllChains has many isomorphic copies per class; iso_s_dot errors if a
    // face is not constant on a class
    let s = pointed_sets_with_copies(2, 2).unwrap();
    let d = iso_s_dot(&s, 3, EnumerationPolicy::AllChains).unwrap();
    assert_eq!(d.set.sizes(), &[1, 3, 6, 10]);
}

fn automorphisms(s: &CofStructure, n: usize) -> SnCategory {
    build_wsn_category(
        &WaldStructure::with_isomorphisms(s.clone()),
        n,
        EnumerationPolicy::AllChains,
        1000,
    )
    .unwrap()
}

#[test]
fn iso_groupoid_of_ps2() {
    let s = pointed_sets(2).unwrap();
    let g = automorphisms(&s, 1);
    assert_eq!(g.category.object_count(), 3);
    assert!(g.category.validate().is_valid());
    // size-2 object has the two based bijections
    let k = g
        .diagrams
        .iter()
        .position(|d| s.base().rank(d.obj(ar_shape(1).object(0, 1))) == Some(2))
        .unwrap();
    let o = segal_lab::fincat::ObjId(k as u32);
    assert_eq!(g.category.hom(o, o).len(), 2);
    let z = build_wsn_category(
        &WaldStructure::with_isomorphisms(zero_category()),
        2,
        REPS,
        10,
    )
    .unwrap();
    assert_eq!(
        (z.category.object_count(), z.category.morphism_count()),
        (1, 1)
    );
}

#[test]
fn ws1_with_all_maps_matches_direct_count() {
    let s = pointed_sets(2).unwrap();
    let all: Vec<_> = s.base().morphism_ids().collect();
    let w = WaldStructure::new(s.clone(), all).unwrap();
    let cat = build_wsn_category(&w, 1, REPS, 1000).unwrap();
    // S_1 C is C itself, so every morphism appears once
    assert_eq!(cat.category.morphism_count(), s.base().morphism_count());
}

#[test]
fn mu_functor_is_a_functor() {
    let s = pointed_sets(2).unwrap();
    for n in 1..=3 {
        let sn = automorphisms(&s, n);
        let (chains, mn) = chain_groupoid(
            &s,
            n,
            EnumerationPolicy::AllChains,
            ComponentFilter::Isomorphisms,
            1000,
        )
        .unwrap();
        let f = mu_functor(&sn, &chains, &mn).unwrap();
        assert!(f.is_functor());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn isomorphic_diagrams_have_isomorphic_faces(k in 0usize..19, i in 0usize..3) {
        let s = pointed_sets(2).unwrap();
        let objs = enumerate_sn(&s, 3, EnumerationPolicy::AllChains).unwrap();
        let a = &objs[k % objs.len()];
        let fa = simplicial_map(&coface(3, i), a).unwrap();
        for b in &objs {
            if diagram_isomorphic(a.diagram(), b.diagram()).unwrap() {
                let fb = simplicial_map(&coface(3, i), b).unwrap();
                prop_assert!(diagram_isomorphic(fa.diagram(), fb.diagram()).unwrap());
            }
        }
    }
}

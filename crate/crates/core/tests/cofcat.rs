use std::collections::BTreeSet;

use proptest::prelude::*;
use segal_lab::cofcat::fixtures::{
    kernel_free, pointed_sets, pointed_sets_with_copies, zero_category,
};
use segal_lab::cofcat::*;
use segal_lab::fincat::{find_pushout, MorId, ObjId};
use segal_lab::Error;

const B3: ValidationMode = ValidationMode::Bounded { max_rank: 3 };

fn mor(s: &CofStructure, name: &str) -> MorId {
    let c = s.base();
    c.morphism_ids()
        .find(|&m| c.morphism(m).name == name)
        .unwrap_or_else(|| panic!("no morphism {name}"))
}

#[test]
fn zero_category_is_valid_and_extends() {
    let z = zero_category();
    assert!(validate_cof(&z, ValidationMode::Strict).is_valid());
    let e = check_extension_property(&z, ValidationMode::Strict);
    assert!(e.passed());
    assert_eq!(e.left_square, "pushout");
}

#[test]
fn ps2_strict_pushout_escapes() {
    let s = pointed_sets(2).unwrap();
    let r = validate_cof(&s, ValidationMode::Strict);
    let i = mor(&s, "1->2:1");
    let f = mor(&s, "1->2:1");
    assert!(r.violations.contains(&CofViolation::PushoutEscapes {
        cofibration: i,
        along: f
    }));
    let text = CofViolation::PushoutEscapes {
        cofibration: i,
        along: f,
    }
    .to_string();
    assert!(text.starts_with("pushout escapes category"));
    assert!(validate_cof(&s, ValidationMode::Bounded { max_rank: 2 }).is_valid());
}

#[test]
fn ps3_bounded_is_valid() {
    let s = pointed_sets(3).unwrap();
    let r = validate_cof(&s, B3);
    assert!(r.is_valid(), "{:?}", r.violations);
    assert!(r.pushouts_exempt > 0);
    assert!(r.guarantee.contains("<= 3"));
}

#[test]
fn cokernels_in_ps3() {
    let s = pointed_sets(3).unwrap();
    let c = s.base();
    let (y, q) = s.cokernel(mor(&s, "1->3:1")).unwrap();
    assert_eq!(c.rank(y), Some(2));
    assert_eq!(c.source(q), ObjId(3));
    let (y, _) = s.cokernel(c.identity(ObjId(2))).unwrap();
    assert_eq!(y, s.zero());
    let (y, q) = s.cokernel(s.from_zero(ObjId(2))).unwrap();
    assert_eq!(y, ObjId(2));
    assert!(c.is_iso(q));
    // 1 >-> 2 pushed along 1 -> 0
    let sq = find_pushout(c, mor(&s, "1->2:1"), s.to_zero(ObjId(1)))
        .unwrap()
        .unwrap();
    assert_eq!(c.rank(sq.corner_d(c)), Some(1));
}

#[test]
fn ps3_extension_property_holds() {
    let s = pointed_sets(3).unwrap();
    let e = check_extension_property(&s, B3);
    assert!(e.passed());
    assert_eq!(e.skipped, 0);
    let c = s.base();
    // C is the preimage of B in X: |C| = |A| + |B|
    for (cfg, w) in &e.witnesses {
        let a = c.rank(c.source(cfg.a)).unwrap();
        let b = c.rank(c.source(cfg.b)).unwrap();
        assert_eq!(c.rank(w.c).unwrap(), a + b);
    }
}

#[test]
fn kernel_free_fails_extension() {
    let s = kernel_free();
    let mode = ValidationMode::Bounded { max_rank: 1 };
    assert!(validate_cof(&s, mode).is_valid());
    let e = check_extension_property(&s, mode);
    let f = e.failure.expect("must fail");
    assert_eq!(f.a, mor(&s, "a"));
    assert_eq!(f.q, mor(&s, "q"));
    assert_eq!(f.b, s.from_zero(ObjId(3)));
}

#[test]
fn closure_of_the_one_element_set() {
    let s = pointed_sets(3).unwrap();
    let seed = Seed::full_on(&s, [ObjId(1)]);
    let g = generate_subcategory(&s, &seed).unwrap();
    let objs: Vec<u32> = g.object_set().iter().map(|o| o.0).collect();
    assert_eq!(objs, vec![0, 1, 2, 3]);
    assert_eq!(g.structure.base().morphism_count(), 144);
    assert!(validate_cof(&g.structure, B3).is_valid());
    // each added object is needed
    for drop in [2u32, 3] {
        let keep: Vec<ObjId> = (1..4).filter(|&k| k != drop).map(ObjId).collect();
        let sub = generate_without_closure(&s, &keep);
        assert!(!validate_cof(&sub, B3).is_valid(), "dropping {drop}");
    }
}

fn generate_without_closure(s: &CofStructure, objects: &[ObjId]) -> CofStructure {
    let seed = Seed::full_on(s, objects.iter().copied());
    let (sub, emb) = s
        .base()
        .subcategory(
            &seed.objects,
            &seed.morphisms,
            segal_lab::fincat::Limits::internal(),
        )
        .unwrap();
    let cofs: Vec<MorId> = emb
        .morphisms
        .iter()
        .enumerate()
        .filter(|(_, &m)| s.is_cofibration(m))
        .map(|(k, _)| MorId(k as u32))
        .collect();
    CofStructure::new(std::sync::Arc::new(sub), ObjId(0), cofs).unwrap()
}

#[test]
fn closure_trivial_seeds() {
    let s = pointed_sets(2).unwrap();
    let g = generate_subcategory(&s, &Seed::full_on(&s, [])).unwrap();
    assert_eq!(g.structure.base().object_count(), 1);
    assert_eq!(g.structure.base().morphism_count(), 1);
    let all = Seed::full_on(&s, s.base().objects());
    let g = generate_subcategory(&s, &all).unwrap();
    assert_eq!(*g.structure.base().as_ref(), *s.base().as_ref());
}

#[test]
fn bad_seed_is_rejected() {
    let s = pointed_sets(2).unwrap();
    let seed = Seed {
        objects: BTreeSet::from([ObjId(1)]),
        morphisms: BTreeSet::new(),
    };
    assert!(matches!(
        generate_subcategory(&s, &seed),
        Err(Error::BadSeed(_))
    ));
}

#[test]
fn intersections_of_generated_subcategories() {
    let s = pointed_sets(3).unwrap();
    let g1 = generate_subcategory(&s, &Seed::full_on(&s, [ObjId(1)])).unwrap();
    let g2 = generate_subcategory(&s, &Seed::full_on(&s, [ObjId(2)])).unwrap();
    assert_ne!(g1.object_set(), g2.object_set());
    assert!(check_intersection_closed(&s, &[g1.clone(), g2.clone()], B3).unwrap());
    assert!(check_intersection_closed(&s, &[g1], B3).unwrap());
}

#[test]
fn duality_on_fixtures() {
    for (s, mode) in [
        (zero_category(), ValidationMode::Strict),
        (pointed_sets(2).unwrap(), ValidationMode::Strict),
        (
            pointed_sets(2).unwrap(),
            ValidationMode::Bounded { max_rank: 2 },
        ),
        (pointed_sets(3).unwrap(), B3),
    ] {
        let fib = s.dual();
        assert_eq!(
            validate_cof(&s, mode).is_valid(),
            validate_fib(&fib, mode).is_valid(),
            "{mode}"
        );
        let back = fib.dual().unwrap();
        assert_eq!(back.cofibration_table(), s.cofibration_table());
    }
}

#[test]
fn waldhausen_with_isomorphisms() {
    let w = WaldStructure::with_isomorphisms(pointed_sets(2).unwrap());
    let r = validate_wald(&w, ValidationMode::Bounded { max_rank: 2 });
    assert!(r.is_valid());
    assert!(r.span_maps_checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_subcategories_are_valid(picks in proptest::collection::vec(0usize..81, 1..4)) {
        let s = pointed_sets_with_copies(2, 2).unwrap();
        let mode = ValidationMode::Bounded { max_rank: 2 };
        let seed = Seed::with_zero_maps(&s, [], picks.iter().map(|&k| MorId(k as u32)));
        let g = generate_subcategory(&s, &seed).unwrap();
        prop_assert!(validate_cof(&g.structure, mode).is_valid());
        // idempotent
        let inner = &g.structure;
        let again = generate_subcategory(
            inner,
            &Seed { objects: inner.base().objects().collect(), morphisms: inner.base().morphism_ids().collect() },
        ).unwrap();
        prop_assert_eq!(again.structure.base().morphism_count(), inner.base().morphism_count());
        let other = generate_subcategory(&s, &Seed::full_on(&s, [ObjId(1)])).unwrap();
        prop_assert!(check_intersection_closed(&s, &[g, other], mode).unwrap());
    }
}

mod common;

use common::*;
use extricat_core::exstruct::{
    check_extension_closed, et4_sweep, ext_round_trip, hom_ext_exactness, is_conflation, wic_spot_check,
};
use extricat_core::{ExCat, Status, Subcat};
use proptest::prelude::*;

#[test]
fn extension_closure_of_the_glued_carrier() {
    let mc = morphism_category();
    let x = names(&mc.middle, &X_OBJECTS);
    assert!(oracle_extension_closed(&mc.middle, &x));
    assert!(check_extension_closed(&ExCat::new(mc.middle.clone(), x)).is_holds());
}

#[test]
fn extension_closure_in_mod_a() {
    let mc = morphism_category();
    let base = &mc.base;
    let good = names(base, &["S1", "P1"]);
    assert!(oracle_extension_closed(base, &good));
    assert!(check_extension_closed(&ExCat::new(base.clone(), good)).is_holds());

    let bad = names(base, &["S1", "S2"]);
    assert!(!oracle_extension_closed(base, &bad));
    let v = check_extension_closed(&ExCat::new(base.clone(), bad));
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.unwrap();
    assert!(w.message.contains("P1"), "{}", w.message);
}

#[test]
fn property_suites_hold() {
    let mc = morphism_category();
    let carriers = [
        ExCat::full(mc.base.clone()),
        ExCat::full(mc.middle.clone()),
        ExCat::new(mc.middle.clone(), names(&mc.middle, &X_OBJECTS)),
        ExCat::new(mc.base.clone(), names(&mc.base, &["S1", "P1"])),
    ];
    for x in &carriers {
        for (name, v) in [
            ("hom-ext", hom_ext_exactness(x)),
            ("round trip", ext_round_trip(x)),
            ("et4", et4_sweep(x)),
            ("wic", wic_spot_check(x)),
        ] {
            assert!(v.is_holds(), "{name}: {v}");
        }
    }
}

#[test]
fn split_sequence_is_a_conflation() {
    let mc = morphism_category();
    let x = ExCat::full(mc.base.clone());
    let alg = &mc.base.algebra;
    let s1 = mc.base.object(idx(&mc.base, "S1"));
    let s2 = mc.base.object(idx(&mc.base, "S2"));
    let conf = alg.split_conflation(s2, s1);
    assert!(is_conflation(&x, &conf.incl, &conf.proj).is_holds());
    // reversing the roles of the maps is not exact
    let zero = extricat_core::RepMap::zero(2, s2, s1);
    assert!(!is_conflation(&x, &zero, &conf.proj).is_holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn realized_extensions_are_conflations(c in 0usize..11, a in 0usize..11, seed in any::<u64>()) {
        let mc = morphism_category();
        let cat = &mc.middle;
        let x = ExCat::full(cat.clone());
        let alg = &cat.algebra;
        let space = cat.ext_space_of(c, a);
        let classes: Vec<Vec<u32>> = space.elements().collect();
        let class = &classes[(seed as usize) % classes.len()];
        let conf = alg.ext_to_conflation(&space, class);
        prop_assert!(is_short_exact(alg, &conf.incl.comps, conf.left(), conf.middle(), &conf.proj.comps, conf.right()));
        prop_assert!(is_conflation(&x, &conf.incl, &conf.proj).is_holds());
        prop_assert_eq!(&alg.conflation_to_ext(&space, &conf).unwrap(), class);
    }

    #[test]
    fn extension_middles_decompose_consistently(c in 0usize..3, a in 0usize..3) {
        let mc = morphism_category();
        let cat = &mc.base;
        for e in extension_middles(&cat.algebra, cat.object(c), cat.object(a)) {
            let mut lib = cat.decompose_indices(&e).unwrap();
            lib.sort();
            let mut ours = Vec::new();
            for (i, k) in multiplicities(cat, &e).into_iter().enumerate() {
                ours.extend(std::iter::repeat(i).take(k));
            }
            prop_assert_eq!(lib, ours);
        }
    }

    #[test]
    fn closure_verdict_matches_oracle(sub in prop::collection::btree_set(0usize..11, 1..=3)) {
        let mc = morphism_category();
        let s = Subcat::of(sub);
        let v = check_extension_closed(&ExCat::new(mc.middle.clone(), s.clone()));
        prop_assert_eq!(v.is_holds(), oracle_extension_closed(&mc.middle, &s));
    }
}

mod common;

use common::*;
use extricat_core::morphcat::FunctorTag::{self, *};
use extricat_core::recollement::{full_report, triangle_identities};
use extricat_core::{Mode, Status};
use proptest::prelude::*;

const ADJOINT: [(FunctorTag, FunctorTag); 4] = [
    (IStarUpper, IStarLower),
    (IStarLower, IShriek),
    (JShriek, JStarUpper),
    (JStarUpper, JStarLower),
];

#[test]
fn both_scenarios_verify() {
    for (fx, witness) in [(abelian(), "S2|S2_1"), (extriangulated(), "S1|S1_1")] {
        let r = full_report(&fx.s);
        assert_eq!(r.overall(), Status::Holds);
        let skipped: Vec<&str> = r
            .items()
            .filter(|i| i.verdict.status == Status::Skipped)
            .map(|i| i.id.as_str())
            .collect();
        assert_eq!(skipped, ["i_* keeps inj", "j_! exact from i^*", "conflation via i^*", "ext i^*⊣i_*"]);
        for ax in &r.axioms {
            assert_eq!(ax.verdict.status, Status::Holds, "{}", ax.id);
        }
        let gate = r.items().find(|i| i.id == "conflation via i^*").unwrap();
        let msg = &gate.verdict.witness.as_ref().unwrap().message;
        assert!(msg.contains(witness), "{msg}");
    }
}

#[test]
fn exactness_profile() {
    let fx = abelian();
    let ex = fx.s.exactness();
    assert_eq!(ex[&IStarUpper].status, Status::Fails);
    for tag in [IStarLower, IShriek, JShriek, JStarUpper, JStarLower] {
        assert!(ex[&tag].is_holds(), "{tag}");
    }
    let right = extricat_core::cotorsion::role_exactness(&fx.s, IStarUpper, Mode::Right);
    assert!(right.is_holds());
}

#[test]
fn triangle_identities_hold_everywhere() {
    for fx in [abelian(), extriangulated()] {
        for (l, r) in ADJOINT {
            assert!(triangle_identities(&fx.s, l, r).is_holds(), "{l} ⊣ {r}");
        }
    }
}

#[test]
fn composites_vanish_or_are_identities() {
    let fx = abelian();
    let (mc, base) = (&fx.mc, &fx.mc.base);
    for a in 0..base.len() {
        let x = base.object(a);
        assert!(mc.apply_all(&[IStarLower, JStarUpper], x).is_zero());
        assert!(mc.apply_all(&[JShriek, IStarUpper], x).is_zero());
        assert!(mc.apply_all(&[JStarLower, IShriek], x).is_zero());
        for round in [[IStarLower, IStarUpper], [IStarLower, IShriek], [JShriek, JStarUpper], [JStarLower, JStarUpper]] {
            let back = mc.apply_all(&round, x);
            assert!(base.algebra.is_isomorphic(&back, x, &base.caps).unwrap().is_some());
        }
    }
}

#[test]
fn unit_of_i_star_at_s2_0() {
    // X -> i_* i^* X at S2|0 is the identity onto (S2;0)
    let fx = abelian();
    let mid = &fx.mc.middle;
    let x = mid.object(idx(mid, "S2|0"));
    let eta = fx.s.unit(IStarUpper, IStarLower, x).unwrap();
    assert!(eta.is_iso());
    let y = mid.object(idx(mid, "S2|S2_1"));
    let eta = fx.s.unit(IStarUpper, IStarLower, y).unwrap();
    assert!(eta.target.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// dim Hom(F X, Y) = dim Hom(X, G Y) for every adjoint pair, against the brute-force oracle.
    #[test]
    fn adjunction_preserves_hom_dims(pair in 0usize..4, b in 0usize..11, a in 0usize..3) {
        let mc = morphism_category();
        let (l, r) = ADJOINT[pair];
        let (mid, base) = (&mc.middle, &mc.base);
        let (x, y, src_alg, tgt_alg) = if l.source() == extricat_core::morphcat::Side::B {
            (mid.object(b), base.object(a), &mid.algebra, &base.algebra)
        } else {
            (base.object(a), mid.object(b), &base.algebra, &mid.algebra)
        };
        let lhs = brute_hom_dim(tgt_alg, &mc.apply(l, x), y);
        let rhs = brute_hom_dim(src_alg, x, &mc.apply(r, y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn functor_images_are_modules(tag in 0usize..6, b in 0usize..11, a in 0usize..3) {
        let mc = morphism_category();
        let t = FunctorTag::ALL[tag];
        let obj = if t.source() == extricat_core::morphcat::Side::B { mc.middle.object(b) } else { mc.base.object(a) };
        let img = mc.apply(t, obj);
        let alg = &mc.category(t.target()).algebra;
        prop_assert!(alg.validate_rep(&img).is_ok());
    }
}

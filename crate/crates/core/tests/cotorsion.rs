mod common;

use std::collections::BTreeSet;

use common::*;
use extricat_core::cotorsion::{
    approximate, check_cotorsion_pair, enumerate_cotorsion_pairs, ext_orthogonal, left_perp, right_perp, Direction, Outcome, Pair,
};
use extricat_core::{ExCat, ModCat, Rep, Status, Subcat};
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = Subcat> {
    (0u32..(1 << n)).map(move |mask| Subcat::of((0..n).filter(|b| mask >> b & 1 == 1)))
}

/// Pairs with `F = T^⊥` and `T = ⊥F`, from the brute-force Ext oracle.
fn oracle_perp_pairs(cat: &ModCat) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let all = Subcat::full(cat.len());
    let mut out = BTreeSet::new();
    for t in subsets(cat.len()) {
        let f = oracle_right_perp(cat, &all, &t);
        if oracle_left_perp(cat, &all, &f).indecs == t.indecs {
            out.insert((t.iter().collect(), f.iter().collect()));
        }
    }
    out
}

fn key(p: &Pair) -> (Vec<usize>, Vec<usize>) {
    (p.t.iter().collect(), p.f.iter().collect())
}

fn check_found(cat: &ModCat, pair: &Pair, c: &Rep, dir: Direction, out: &Outcome) {
    let Outcome::Found(a) = out else {
        panic!("no approximation found: {out:?}");
    };
    let conf = &a.conf;
    let alg = &cat.algebra;
    assert!(is_short_exact(alg, &conf.incl.comps, conf.left(), conf.middle(), &conf.proj.comps, conf.right()));
    match dir {
        Direction::B => {
            assert_eq!(conf.right(), c);
            assert!(in_right_perp(cat, &pair.t, conf.left()), "kernel outside F");
            assert!(in_left_perp(cat, &pair.f, conf.middle()), "middle outside T");
        }
        Direction::C => {
            assert_eq!(conf.left(), c);
            assert!(in_right_perp(cat, &pair.t, conf.middle()), "middle outside F");
            assert!(in_left_perp(cat, &pair.f, conf.right()), "cokernel outside T");
        }
    }
}

#[test]
fn mod_a_has_exactly_two_pairs() {
    let mc = morphism_category();
    let cat = &mc.base;
    let x = ExCat::full(cat.clone());

    // independent search: perpendicular pairs whose approximations exist with multiplicity <= 2
    let mut oracle = BTreeSet::new();
    for (t, f) in oracle_perp_pairs(cat) {
        let complete = (0..cat.len()).all(|c| {
            oracle_right_approx_exists(cat, cat.object(c), &t, 2) && oracle_left_approx_exists(cat, cat.object(c), &f, 2)
        });
        if complete {
            oracle.insert((t, f));
        }
    }
    let got: BTreeSet<_> = enumerate_cotorsion_pairs(&x).unwrap().pairs.iter().map(|p| key(&p.pair)).collect();
    assert_eq!(got, oracle);

    let h1 = Pair { t: names(cat, &["S2", "P1"]), f: Subcat::full(3) };
    let h2 = Pair { t: Subcat::full(3), f: names(cat, &["S1", "P1"]) };
    let expected: BTreeSet<_> = [key(&h1), key(&h2)].into_iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn mod_b_pairs_are_perpendicular_and_complete() {
    let f = abelian();
    let cat = &f.mc.middle;
    let x = f.s.b.clone();
    let e = enumerate_cotorsion_pairs(&x).unwrap();
    let perp = oracle_perp_pairs(cat);
    let got: BTreeSet<_> = e.pairs.iter().map(|p| key(&p.pair)).collect();
    assert!(got.is_subset(&perp));
    assert_eq!(e.pairs.len() + e.rejected.len(), perp.len());
    for p in &e.pairs {
        assert!(p.coherence.is_holds());
        for c in 0..cat.len() {
            for dir in [Direction::B, Direction::C] {
                let out = approximate(&x, cat.object(c), &p.pair, dir).unwrap();
                check_found(cat, &p.pair, cat.object(c), dir, &out);
            }
        }
    }
    // rejections are exact, never bounded guesses
    for (_, v) in &e.rejected {
        assert_eq!(v.status, Status::Fails);
    }
}

#[test]
fn listed_pairs_in_mod_b() {
    let f = abelian();
    let cat = &f.mc.middle;
    let proj = names(cat, &["S2|0", "P1|0", "S2|S2_1", "P1|P1_1"]);
    let first = Pair { t: proj, f: Subcat::full(cat.len()) };
    let second = Pair {
        t: names(cat, &["S2|0", "P1|0", "S2|S2_1", "P1|P1_1", "0|S1"]),
        f: names(cat, &["P1|P1_1", "S1|S1_1", "0|P1", "0|S1", "P1|0", "S2|S2_1", "S2|0"]),
    };
    for pair in [&first, &second] {
        assert!(check_cotorsion_pair(&f.s.b, pair).unwrap().is_pair());
    }
    let e = enumerate_cotorsion_pairs(&f.s.b).unwrap();
    assert_eq!(e.pairs[0].pair, first);
    assert!(e.pairs.iter().any(|p| p.pair == second));
}

#[test]
fn non_orthogonal_pair_has_witness() {
    let f = abelian();
    let cat = &f.mc.base;
    let x = ExCat::full(cat.clone());
    let v = ext_orthogonal(&x, &names(cat, &["S1"]), &names(cat, &["S2"]));
    assert_eq!(v.status, Status::Fails);
    assert!(v.witness.unwrap().message.contains("S1"));
}

#[test]
fn approximation_of_simple_by_projectives() {
    let f = abelian();
    let cat = &f.mc.base;
    let x = ExCat::full(cat.clone());
    let pair = Pair { t: names(cat, &["S2", "P1"]), f: Subcat::full(3) };
    let s1 = cat.object(idx(cat, "S1"));
    let out = approximate(&x, s1, &pair, Direction::B).unwrap();
    check_found(cat, &pair, s1, Direction::B, &out);
    let Outcome::Found(a) = out else { unreachable!() };
    assert_eq!(a.conf.middle().dims, vec![1, 1]);
}

fn small_subset() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::btree_set(0usize..11, 0..=4).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perpendiculars_match_oracle(sub in small_subset()) {
        let mc = morphism_category();
        let cat = &mc.middle;
        let x = ExCat::full(cat.clone());
        let s = Subcat::of(sub);
        let all = Subcat::full(cat.len());
        prop_assert_eq!(right_perp(&x, &s).indecs, oracle_right_perp(cat, &all, &s).indecs);
        prop_assert_eq!(left_perp(&x, &s).indecs, oracle_left_perp(cat, &all, &s).indecs);
    }

    #[test]
    fn perpendicular_is_galois(sub in small_subset()) {
        let mc = morphism_category();
        let x = ExCat::full(mc.middle.clone());
        let s = Subcat::of(sub);
        let r = right_perp(&x, &s);
        let lr = left_perp(&x, &r);
        prop_assert!(s.is_subset(&lr));
        prop_assert_eq!(right_perp(&x, &lr).indecs, r.indecs);
    }

    #[test]
    fn orthogonality_agrees_with_ext_table(t in small_subset(), f in small_subset()) {
        let mc = morphism_category();
        let cat = &mc.middle;
        let x = ExCat::full(cat.clone());
        let v = ext_orthogonal(&x, &Subcat::of(t.clone()), &Subcat::of(f.clone()));
        let zero = t.iter().all(|&a| f.iter().all(|&b| brute_ext_dim(&cat.algebra, cat.object(a), cat.object(b)) == 0));
        prop_assert_eq!(v.is_holds(), zero);
    }
}

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use orbifunctor::catmod::{free_module, yoneda_map, Variance};
use orbifunctor::chainplex::{BiFunctorComplex, CatChainComplex};
use orbifunctor::exact_abelian::FpAbGroup;
use orbifunctor::fincat::{orbit_category, FinCategory, FinGroup, OrbitCategory, SubgroupFamily};
use orbifunctor::verify::*;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_free_pair(r: &mut ChaCha8Rng, base: &Arc<FinCategory>) -> CatChainComplex {
    let n = base.num_objects();
    let v = Variance::Contravariant;
    let g0: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..n)).collect();
    let g1: Vec<usize> = (0..r.gen_range(0..=2)).map(|_| r.gen_range(0..n)).collect();
    let f0 = free_module(base, v, &g0);
    let f1 = free_module(base, v, &g1);
    let images: Vec<Vec<BigInt>> = g1.iter().map(|&c| common::random_vec(r, f0.values[c].ngens())).collect();
    let d = yoneda_map(&f1, &f0, &images).unwrap();
    CatChainComplex::new(base.clone(), v, 0, vec![f0, f1], vec![d]).unwrap()
}

fn random_coefficients(r: &mut ChaCha8Rng, index: &Arc<FinCategory>, or: &OrbitCategory) -> BiFunctorComplex {
    match r.gen_range(0..3) {
        0 => transport_bifunctor(index, or, TransportRecipe::Components).unwrap(),
        1 => transport_bifunctor(index, or, TransportRecipe::Nerve { top: 2 }).unwrap(),
        _ => {
            let a = [FpAbGroup::free(1), FpAbGroup::cyclic(2), FpAbGroup::cyclic(6)][r.gen_range(0..3)].clone();
            constant_bifunctor(index, &or.cat, &a, r.gen_range(0..=1)).unwrap()
        }
    }
}

fn random_instance(seed: u64) -> TheoremInstance {
    let mut r = common::rng(seed);
    let index = common::random_category(&mut r);
    let d_complex = random_free_pair(&mut r, &index);
    let g = Arc::new(FinGroup::cyclic(r.gen_range(2..=3)));
    let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
    let source = if r.gen_bool(0.5) {
        TheoremSource::Space(common::random_g_graph(&mut r, &g, false))
    } else {
        TheoremSource::Chains(random_free_pair(&mut r, &or.cat))
    };
    let e = random_coefficients(&mut r, &index, &or);
    let big_n = e.lo;
    TheoremInstance::new(d_complex, or, source, e, 1, 2, big_n, FgMode::Strict).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn strict_hypotheses_give_isomorphisms(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let h = check_hypotheses(&inst).unwrap();
        prop_assert!(h.passes());
        let r = verify_comparison(&inst, FgMode::Strict).unwrap();
        prop_assert!(r.passes(), "witness {:?}", r.witness());
    }

    #[test]
    fn widening_the_coefficient_window_keeps_verdicts(seed in any::<u64>(), extra in 1i64..=3) {
        let inst = random_instance(seed);
        let base = verify_comparison(&inst, FgMode::Strict).unwrap();
        let mut wide = inst.clone();
        wide.e = pad_bifunctor(&inst.e, inst.n + inst.d as i64 + 1 + extra).unwrap();
        let r = verify_comparison(&wide, FgMode::Strict).unwrap();
        let key = |d: &DegreeComparison| (d.p, d.class.clone(), d.source.clone(), d.target.clone());
        let a: Vec<_> = base.degrees.iter().map(key).collect();
        let b: Vec<_> = r.degrees.iter().filter(|d| d.p <= inst.n).map(key).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn truncated_interchange_is_injective(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let spec = random_spec(&mut r);
        let rep = interchange_criterion(&spec, 6, 6).unwrap();
        prop_assert!(rep.all_injective);
        prop_assert!(rep.windows.iter().all(|w| w.isomorphism));
    }

    #[test]
    fn tor_probe_boundary(p in prop::sample::select(vec![2u32, 3, 5]), m in 2usize..=6, n in 2usize..=6) {
        let rep = tor_interchange_probe(p, m, n).unwrap();
        prop_assert!(rep.finite_map_iso);
        prop_assert_eq!(rep.delta_order, num_traits::pow(BigInt::from(p), n));
        prop_assert_eq!(rep.delta_in_block, m >= n);
        prop_assert_eq!(rep.max_order_at_top, num_traits::pow(BigInt::from(p), m.min(n)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn borel_verdicts_are_stable_in_the_bar_degree(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let order = r.gen_range(2..=3);
        let g = Arc::new(FinGroup::cyclic(order));
        let free = r.gen_bool(0.5);
        let x = common::random_g_graph(&mut r, &g, free);
        let k = if order == 2 { r.gen_range(2..=3) } else { 2 };
        let a = borel_vs_quotient_check(&x, k, &[]).unwrap();
        let b = borel_vs_quotient_check(&x, k + 1, &[]).unwrap();
        prop_assert!(a.passes() && b.passes());
        for (u, v) in a.degrees.iter().zip(&b.degrees) {
            prop_assert_eq!((&u.borel, &u.quotient, &u.kernel, &u.cokernel), (&v.borel, &v.quotient, &v.kernel, &v.cokernel));
        }
    }

    #[test]
    fn transport_recipes_factor_through_subgroups(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let g = Arc::new(common::small_groups().swap_remove(r.gen_range(0..4)));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let pt = Arc::new(FinGroup::trivial().as_category());
        let top = if g.order() == 6 { 1 } else { 2 };
        for recipe in [TransportRecipe::Components, TransportRecipe::Nerve { top }] {
            let e = transport_bifunctor(&pt, &or, recipe).unwrap();
            let rep = sub_factorization_check(&or, &e).unwrap();
            prop_assert!(rep.passes(), "{:?}", rep.violations);
        }
    }
}

fn random_sequence(r: &mut ChaCha8Rng, start: i64) -> Sequence {
    let len = r.gen_range(1..=3);
    let strict = r.gen_bool(0.5);
    let mut prefix = vec![start];
    for _ in 1..len {
        let step = if strict { r.gen_range(1..=2) } else { r.gen_range(0..=1) };
        prefix.push(prefix.last().unwrap() + step);
    }
    let tail = if strict { SeqTail::StrictlyIncreasingUnbounded } else { SeqTail::BoundedBy(prefix.last().unwrap() + r.gen_range(0..=2)) };
    Sequence { prefix, tail }
}

fn random_spec(r: &mut ChaCha8Rng) -> GradedSeqSpec {
    let groups = [FpAbGroup::free(1), FpAbGroup::cyclic(2), FpAbGroup::cyclic(4), FpAbGroup::trivial()];
    let floor = r.gen_range(-3..=0);
    let mut values = BTreeMap::new();
    for q in floor..=2 {
        if r.gen_bool(0.6) {
            values.insert(q, groups[r.gen_range(0..4)].clone());
        }
    }
    let tail = if r.gen_bool(0.7) {
        ProfileTail::BoundedBelow(floor)
    } else {
        ProfileTail::ConstantBelow { from: floor, group: groups[r.gen_range(0..4)].clone() }
    };
    let (m0, n0) = (r.gen_range(0..=1), r.gen_range(0..=2));
    GradedSeqSpec {
        m: random_sequence(r, m0),
        n: random_sequence(r, n0),
        profile: Profile { values, tail },
        p: r.gen_range(-1..=1),
    }
}

#[test]
fn s3_desk_instance_passes() {
    let inst = s3_desk_instance().unwrap();
    let r = verify_theorem(&inst, FgMode::Strict).unwrap();
    assert!(r.hypotheses.passes());
    assert!(r.comparison.passes());
    assert_eq!(r.hypotheses.c.orbit_types, 2);
}

#[test]
fn coset_twist_is_caught_for_s3() {
    let g = Arc::new(FinGroup::symmetric(3));
    let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
    let pt = Arc::new(FinGroup::trivial().as_category());
    let rep = sub_factorization_check(&or, &coset_permutation_bifunctor(&pt, &or).unwrap()).unwrap();
    assert!(!rep.passes());
}

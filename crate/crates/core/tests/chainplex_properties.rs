mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use orbifunctor::catmod::*;
use orbifunctor::chainplex::*;
use orbifunctor::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use orbifunctor::fincat::{FinCategory, FinGroup};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `F1 -> F0` with a random Yoneda differential.
fn random_free_pair(r: &mut ChaCha8Rng, base: &Arc<FinCategory>, v: Variance, lo: i64) -> CatChainComplex {
    let n = base.num_objects();
    let g0: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..n)).collect();
    let g1: Vec<usize> = (0..r.gen_range(0..=2)).map(|_| r.gen_range(0..n)).collect();
    let f0 = free_module(base, v, &g0);
    let f1 = free_module(base, v, &g1);
    let images: Vec<Vec<BigInt>> = g1.iter().map(|&c| common::random_vec(r, f0.values[c].ngens())).collect();
    let d = yoneda_map(&f1, &f0, &images).unwrap();
    CatChainComplex::new(base.clone(), v, lo, vec![f0, f1], vec![d]).unwrap()
}

/// Either `M(i) ⊗ (N1 -> N0)(j)` for free `M, N` or a module constant in the
/// index leg, possibly with torsion.
fn random_bifunctor(r: &mut ChaCha8Rng, i: &Arc<FinCategory>, j: &Arc<FinCategory>) -> BiFunctorComplex {
    if r.gen_bool(0.5) {
        let n = common::random_module(r, j, Variance::Covariant);
        let lo = r.gen_range(0..=1);
        return BiFunctorComplex::concentrated(i.clone(), j.clone(), lo, BiModule::constant_in_index(i, &n)).unwrap();
    }
    let m = common::random_free(r, i, Variance::Contravariant);
    let nc = random_free_pair(r, j, Variance::Covariant, 0);
    let degrees: Vec<BiModule> = nc.modules.iter().map(|n| BiModule::outer(&m, n).unwrap()).collect();
    let g = &nc.differentials[0];
    let diff: Vec<Vec<AbHom>> = (0..i.num_objects())
        .map(|a| {
            (0..j.num_objects())
                .map(|b| {
                    let mat = IntMatrix::identity(m.values[a].rank()).kron(g.components[b].matrix());
                    AbHom::new(degrees[1].values[a][b].clone(), degrees[0].values[a][b].clone(), mat).unwrap()
                })
                .collect()
        })
        .collect();
    BiFunctorComplex::new(i.clone(), j.clone(), 0, degrees, vec![diff]).unwrap()
}

fn random_coefficient_base(r: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let g = Arc::new(FinGroup::cyclic(r.gen_range(2..=3)));
    let or = orbifunctor::fincat::orbit_category(&orbifunctor::fincat::SubgroupFamily::all(&g).unwrap()).unwrap();
    if r.gen_bool(0.5) {
        or.cat.clone()
    } else {
        common::random_category(r)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comparison_is_a_degreewise_isomorphism_for_free_sources(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let i = common::random_category(&mut r);
        let j = random_coefficient_base(&mut r);
        let c = if r.gen_bool(0.5) {
            random_free_pair(&mut r, &j, Variance::Contravariant, 0)
        } else {
            CatChainComplex::concentrated(0, common::random_module(&mut r, &j, Variance::Contravariant))
        };
        let lo = r.gen_range(0..=1);
        let d = random_free_pair(&mut r, &i, Variance::Contravariant, lo);
        let e = random_bifunctor(&mut r, &i, &j);
        let t = comparison_map_t(&c, &d, &e).unwrap();
        prop_assert!(check_chain_map(&t.source, &t.target, &t.map).is_ok());
        prop_assert!(t.is_degreewise_iso().unwrap());
        for p in t.source.degrees() {
            prop_assert!(t.on_homology(p).unwrap().is_isomorphism().unwrap());
        }
    }

    #[test]
    fn euler_characteristic_is_conserved(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let base = common::random_category(&mut r);
        let c = random_free_pair(&mut r, &base, Variance::Contravariant, 0);
        let lo = r.gen_range(-1..=1);
        let e = random_free_pair(&mut r, &base, Variance::Covariant, lo);
        let tot = tensor_complex_over_cat(&c, &e).unwrap();
        prop_assert_eq!(tot.euler_characteristic(), tot.homology_euler_characteristic().unwrap());
        let d = random_free_pair(&mut r, &base, Variance::Contravariant, 0);
        let e2 = random_free_pair(&mut r, &base, Variance::Contravariant, 0);
        let h = hom_complex_over_cat(&d, &e2).unwrap();
        prop_assert_eq!(h.euler_characteristic(), h.homology_euler_characteristic().unwrap());
    }

    #[test]
    fn hom_out_of_a_free_complex_preserves_degreewise_isomorphisms(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let base = common::random_category(&mut r);
        let d = random_free_pair(&mut r, &base, Variance::Contravariant, 0);
        let n = base.num_objects();
        let gens = vec![r.gen_range(0..n), r.gen_range(0..n)];
        let f = free_module(&base, Variance::Contravariant, &gens);
        // Unipotent automorphism: second generator picks up a multiple of the first.
        let mut second = vec![BigInt::from(0); f.values[gens[1]].ngens()];
        let first_block = base.hom(gens[1], gens[0]).len();
        if first_block > 0 {
            second[r.gen_range(0..first_block)] = BigInt::from(r.gen_range(-3..=3));
        }
        second[first_block + base.position(base.identity(gens[1]))] += BigInt::from(1);
        let mut first = vec![BigInt::from(0); f.values[gens[0]].ngens()];
        first[base.position(base.identity(gens[0]))] = BigInt::from(1);
        let auto = yoneda_map(&f, &f, &[first, second]).unwrap();
        let e = CatChainComplex::concentrated(0, f);
        let (_, _, map) = hom_total_map(&d, &e, &e, &[(0, auto)]).unwrap();
        for h in map.components.values() {
            prop_assert!(h.is_isomorphism().unwrap());
        }
    }
}

#[test]
fn tensor_over_a_point_with_constant_coefficients() {
    // E concentrated in degree 0: the total complex is C ⊗ E_0 degreewise.
    let pt = Arc::new(FinGroup::trivial().as_category());
    let z = FpAbGroup::free(1);
    let c = CatChainComplex::new(
        pt.clone(),
        Variance::Contravariant,
        0,
        vec![CatModule::constant(pt.clone(), Variance::Contravariant, &z); 2],
        vec![ModuleMap { components: vec![AbHom::scalar(&z, &BigInt::from(6))] }],
    )
    .unwrap();
    let e = CatChainComplex::concentrated(0, CatModule::constant(pt.clone(), Variance::Covariant, &FpAbGroup::cyclic(4)));
    let t = tensor_complex_over_cat(&c, &e).unwrap();
    assert_eq!(t.homology(0).unwrap(), FpAbGroup::cyclic(2));
    assert_eq!(t.homology(1).unwrap(), FpAbGroup::cyclic(2));
}

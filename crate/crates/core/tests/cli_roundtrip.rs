mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use orbifunctor::catmod::{free_module, yoneda_map, CatModule, Variance};
use orbifunctor::chainplex::{BiFunctorComplex, CatChainComplex};
use orbifunctor::cli::*;
use orbifunctor::exact_abelian::FpAbGroup;
use orbifunctor::fincat::{orbit_category, FinCategory, FinGroup, SubgroupFamily};
use orbifunctor::verify::{transport_bifunctor, GradedSeqSpec, Profile, ProfileTail, SeqTail, Sequence, TransportRecipe};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn reparse(raw: &RawManifest) -> Manifest {
    let text = to_manifest_text(raw);
    let m = parse_manifest(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(to_manifest_text(&m.raw), text);
    m
}

fn with_category(c: &FinCategory) -> Option<RawManifest> {
    let mut raw = RawManifest::empty();
    raw.category.insert("c".into(), category_def(c).ok()?);
    Some(raw)
}

fn same_module(a: &CatModule, b: &CatModule) -> bool {
    a.base == b.base
        && a.variance == b.variance
        && a.values == b.values
        && a.marker == b.marker
        && a.action.iter().zip(&b.action).all(|(x, y)| x.matrix() == y.matrix())
}

fn same_complex(a: &CatChainComplex, b: &CatChainComplex) -> bool {
    a.lo == b.lo
        && a.modules.len() == b.modules.len()
        && a.modules.iter().zip(&b.modules).all(|(x, y)| same_module(x, y))
        && a.differentials.iter().zip(&b.differentials).all(|(x, y)| {
            x.components.iter().zip(&y.components).all(|(f, g)| f.matrix() == g.matrix())
        })
}

fn same_bifunctor(a: &BiFunctorComplex, b: &BiFunctorComplex) -> bool {
    let mats = |v: &Vec<Vec<orbifunctor::exact_abelian::AbHom>>| -> Vec<Vec<_>> {
        v.iter().map(|r| r.iter().map(|h| h.matrix().clone()).collect()).collect()
    };
    a.index == b.index
        && a.coeff == b.coeff
        && a.lo == b.lo
        && a.degrees.len() == b.degrees.len()
        && a.degrees.iter().zip(&b.degrees).all(|(x, y)| {
            x.values == y.values && mats(&x.index_action) == mats(&y.index_action) && mats(&x.coeff_action) == mats(&y.coeff_action)
        })
        && a.differentials.iter().zip(&b.differentials).all(|(x, y)| mats(x) == mats(y))
}

fn random_complex(r: &mut ChaCha8Rng, base: &Arc<FinCategory>) -> CatChainComplex {
    let v = if r.gen_bool(0.5) { Variance::Covariant } else { Variance::Contravariant };
    let n = base.num_objects();
    let g0: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..n)).collect();
    let g1: Vec<usize> = (0..r.gen_range(0..=2)).map(|_| r.gen_range(0..n)).collect();
    let f0 = free_module(base, v, &g0);
    let f1 = free_module(base, v, &g1);
    let images: Vec<Vec<BigInt>> = g1.iter().map(|&c| common::random_vec(r, f0.values[c].ngens())).collect();
    let d = yoneda_map(&f1, &f0, &images).unwrap();
    let lo = r.gen_range(-2..=2);
    CatChainComplex::new(base.clone(), v, lo, vec![f0, f1], vec![d]).unwrap()
}

fn random_sequence(r: &mut ChaCha8Rng) -> Sequence {
    let mut prefix = vec![r.gen_range(0..=2)];
    for _ in 0..r.gen_range(0..=2) {
        let next = prefix.last().unwrap() + r.gen_range(1..=2);
        prefix.push(next);
    }
    let tail = if r.gen_bool(0.5) { SeqTail::StrictlyIncreasingUnbounded } else { SeqTail::BoundedBy(prefix.last().unwrap() + 1) };
    Sequence { prefix, tail }
}

fn random_spec(r: &mut ChaCha8Rng) -> GradedSeqSpec {
    let groups = [FpAbGroup::free(1), FpAbGroup::cyclic(2), FpAbGroup::cyclic(12), FpAbGroup::trivial()];
    let mut values = BTreeMap::new();
    for q in -3..=3 {
        if r.gen_bool(0.5) {
            values.insert(q, groups[r.gen_range(0..4)].clone());
        }
    }
    let tail = if r.gen_bool(0.5) {
        ProfileTail::BoundedBelow(-3)
    } else {
        ProfileTail::ConstantBelow { from: -3, group: groups[r.gen_range(0..4)].clone() }
    };
    GradedSeqSpec { m: random_sequence(r), n: random_sequence(r), profile: Profile { values, tail }, p: r.gen_range(-2..=2) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn categories_and_modules_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let base = common::random_category(&mut r);
        let Some(mut raw) = with_category(&base) else { return Ok(()) };
        let v = if r.gen_bool(0.5) { Variance::Covariant } else { Variance::Contravariant };
        let m = common::random_module(&mut r, &base, v);
        let f = common::random_free(&mut r, &base, v);
        raw.module.insert("m".into(), module_def("c", &m));
        raw.module.insert("f".into(), module_def("c", &f));
        let back = reparse(&raw);
        prop_assert!(*back.categories["c"].cat == *base);
        prop_assert_eq!(back.categories["c"].cat.object_labels(), base.object_labels());
        prop_assert!(same_module(&back.modules["m"], &m));
        prop_assert!(same_module(&back.modules["f"], &f));
    }

    #[test]
    fn complexes_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let base = common::random_category(&mut r);
        let Some(mut raw) = with_category(&base) else { return Ok(()) };
        let c = random_complex(&mut r, &base);
        raw.complex.insert("x".into(), complex_def("c", &c));
        let back = reparse(&raw);
        prop_assert!(same_complex(&back.complexes["x"], &c));
    }

    #[test]
    fn groups_spaces_and_families_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let g = Arc::new(common::small_groups().swap_remove(r.gen_range(0..4)));
        let free = r.gen_bool(0.3);
        let x = common::random_g_graph(&mut r, &g, free);
        let fam = SubgroupFamily::all(&g).unwrap();
        let mut raw = RawManifest::empty();
        raw.group.insert("g".into(), group_def(&g));
        raw.gcw.insert("x".into(), gcw_def("g", &x));
        raw.family.insert("f".into(), family_def("g", &fam));
        let back = reparse(&raw);
        prop_assert!(*back.groups["g"] == *g);
        let y = &back.gcws["x"];
        prop_assert_eq!(&y.cells, &x.cells);
        prop_assert_eq!(&y.labels, &x.labels);
        prop_assert_eq!(&y.boundaries, &x.boundaries);
        prop_assert_eq!(&back.families["f"], &fam);
    }

    #[test]
    fn sequence_specs_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let spec = random_spec(&mut r);
        prop_assume!(spec.validate().is_ok());
        let mut raw = RawManifest::empty();
        raw.sequences.insert("s".into(), seq_spec_def(&spec));
        let back = reparse(&raw);
        prop_assert_eq!(&back.sequences["s"], &spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bifunctors_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let g = Arc::new(FinGroup::cyclic(r.gen_range(2..=4)));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let index = Arc::new(common::random_poset(&mut r));
        let recipe = if r.gen_bool(0.5) { TransportRecipe::Components } else { TransportRecipe::Nerve { top: 1 } };
        let e = transport_bifunctor(&index, &or, recipe).unwrap();
        let mut raw = RawManifest::empty();
        raw.group.insert("g".into(), group_def(&g));
        raw.family.insert("all".into(), FamilyDef::All { group: "g".into() });
        raw.category.insert("or".into(), CategoryDef::Orbit { family: "all".into() });
        raw.category.insert("i".into(), category_def(&index).unwrap());
        raw.bifunctor.insert("e".into(), bifunctor_def("i", "or", &e));
        let back = reparse(&raw);
        prop_assert!(same_bifunctor(&back.bifunctors["e"], &e));
    }
}

#[test]
fn builtin_spaces_round_trip() {
    let g = Arc::new(FinGroup::symmetric(3));
    for name in BUILTIN_GCW {
        let mut raw = RawManifest::empty();
        raw.gcw.insert("x".into(), GcwDef::Builtin { name: name.into() });
        let builtin = reparse(&raw).gcws["x"].clone();
        let mut raw = RawManifest::empty();
        raw.group.insert("g".into(), group_def(&builtin.group));
        raw.gcw.insert("x".into(), gcw_def("g", &builtin));
        let back = reparse(&raw);
        assert_eq!(back.gcws["x"].cells, builtin.cells, "{name}");
        assert_eq!(back.gcws["x"].boundaries, builtin.boundaries, "{name}");
    }
    assert_eq!(g.order(), 6);
}

#[test]
fn random_categories_mostly_export() {
    let ok = (0..200u64).filter(|&s| with_category(&common::random_category(&mut common::rng(s))).is_some()).count();
    let specs = (0..200u64).filter(|&s| random_spec(&mut common::rng(s)).validate().is_ok()).count();
    assert!(ok >= 100, "{ok}/200 categories export");
    assert!(specs >= 100, "{specs}/200 specs validate");
}

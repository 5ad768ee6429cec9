#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use orbifunctor::catmod::{free_module, map_kernel_cokernel, yoneda_map, CatModule, Variance};
use orbifunctor::cellspaces::{GBoundaryTerm, GCWComplex};
use orbifunctor::fincat::{orbit_category, sub_category_and_projection, FinCategory, FinGroup, Subgroup, SubgroupFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random poset on at most four objects, as a category.
pub fn random_poset(rng: &mut ChaCha8Rng) -> FinCategory {
    let n = rng.gen_range(1..=4);
    let mut le = vec![vec![false; n]; n];
    for (a, row) in le.iter_mut().enumerate() {
        row[a] = true;
    }
    for a in 0..n {
        for b in a + 1..n {
            le[a][b] = rng.gen_bool(0.5);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if le[a][k] && le[k][b] {
                    le[a][b] = true;
                }
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut identities = vec![0; n];
    for a in 0..n {
        for b in 0..n {
            if le[a][b] {
                if a == b {
                    identities[a] = morphisms.len();
                }
                index[a][b] = morphisms.len();
                morphisms.push((a, b, format!("{a}<={b}")));
            }
        }
    }
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.0, m.1)).collect();
    FinCategory::from_rule("poset", (0..n).map(|i| format!("p{i}")).collect(), morphisms, identities, |g, f| {
        index[ends[f].0][ends[g].1]
    })
    .expect("posets are categories")
}

pub fn small_groups() -> Vec<FinGroup> {
    vec![FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::cyclic(4), FinGroup::symmetric(3)]
}

/// Groups whose orbit and subgroup categories stay within four objects and
/// twenty morphisms.
fn tiny_groups() -> Vec<FinGroup> {
    vec![FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::cyclic(4), FinGroup::cyclic(6)]
}

/// A random category with at most four objects and at most twenty morphisms.
pub fn random_category(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let cat = match rng.gen_range(0..4) {
        0 => random_poset(rng),
        1 => FinGroup::cyclic(rng.gen_range(1..=4)).as_category(),
        2 => {
            let g = Arc::new(tiny_groups().swap_remove(rng.gen_range(0..4)));
            let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
            (*or.cat).clone()
        }
        _ => {
            let g = Arc::new(tiny_groups().swap_remove(rng.gen_range(0..4)));
            let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
            let (sub, _) = sub_category_and_projection(&or).unwrap();
            (*sub.cat).clone()
        }
    };
    assert!(cat.num_objects() <= 4 && cat.num_morphisms() <= 20);
    Arc::new(cat)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()
}

/// Cokernel of a random map between small free modules.
pub fn random_module(rng: &mut ChaCha8Rng, base: &Arc<FinCategory>, variance: Variance) -> CatModule {
    let nobj = base.num_objects();
    let g0: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..nobj)).collect();
    let g1: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..nobj)).collect();
    let f0 = free_module(base, variance, &g0);
    let f1 = free_module(base, variance, &g1);
    let images: Vec<Vec<BigInt>> = g1.iter().map(|&c| random_vec(rng, f0.values[c].ngens())).collect();
    let d = yoneda_map(&f1, &f0, &images).unwrap();
    map_kernel_cokernel(&f1, &f0, &d).unwrap().cokernel
}

pub fn random_free(rng: &mut ChaCha8Rng, base: &Arc<FinCategory>, variance: Variance) -> CatModule {
    let nobj = base.num_objects();
    let gens: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..nobj)).collect();
    free_module(base, variance, &gens)
}

/// A random one-dimensional `G`-CW complex; `free` forces trivial isotropy.
pub fn random_g_graph(r: &mut ChaCha8Rng, g: &Arc<FinGroup>, free: bool) -> GCWComplex {
    let subs = SubgroupFamily::all(g).unwrap().members;
    let pick = |r: &mut ChaCha8Rng| if free { g.trivial_subgroup() } else { subs[r.gen_range(0..subs.len())].clone() };
    let verts: Vec<Subgroup> = (0..r.gen_range(1..=3)).map(|_| pick(r)).collect();
    let mut edges = Vec::new();
    let mut bounds = Vec::new();
    for _ in 0..r.gen_range(0..=3) {
        let mut h = pick(r);
        let valid = |h: &Subgroup| -> Vec<(usize, usize)> {
            (0..verts.len())
                .flat_map(|k| (0..g.order()).map(move |a| (k, a)))
                .filter(|&(k, a)| h.elements().iter().all(|&x| verts[k].contains(g.conj(g.inv(a), x))))
                .collect()
        };
        let mut ends = valid(&h);
        if ends.is_empty() {
            h = g.trivial_subgroup();
            ends = valid(&h);
        }
        let (k1, a1) = ends[r.gen_range(0..ends.len())];
        let (k2, a2) = ends[r.gen_range(0..ends.len())];
        edges.push(h);
        bounds.push(vec![GBoundaryTerm { face: k1, element: a1, coeff: 1 }, GBoundaryTerm { face: k2, element: a2, coeff: -1 }]);
    }
    let labels = vec![(0..verts.len()).map(|i| format!("v{i}")).collect(), (0..edges.len()).map(|i| format!("e{i}")).collect()];
    let nv = verts.len();
    GCWComplex::new(g.clone(), vec![verts, edges], labels, vec![vec![Vec::new(); nv], bounds]).unwrap()
}

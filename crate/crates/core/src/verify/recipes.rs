//! Coefficient systems `E` on `𝒾^op × Or(G, F)` assembled from transport
//! groupoids of the orbits `G/H`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::catmod::{map_kernel_cokernel, CatModule, ModuleMap, Variance};
use crate::chainplex::{BiFunctorComplex, CatChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::{transport_groupoid, CatFunctor, FinCategory, GSetAction, OrbitCategory, TransportGroupoid};

/// Groupoid invariant applied to `𝒢^G(G/H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportRecipe {
    /// Free abelian group on the components.
    Components,
    /// Cellular chains of the nerve in degrees `0..=top`, the top group taken
    /// modulo boundaries so that `H_top` is not truncated.
    Nerve { top: usize },
}

/// Transport groupoids of every orbit in the family, with the functors
/// induced by the morphisms of the orbit category.
pub struct OrbitGroupoids {
    pub groupoids: Vec<TransportGroupoid>,
    /// One functor per morphism of `or.cat`.
    pub functors: Vec<CatFunctor>,
}

pub fn orbit_groupoids(or: &OrbitCategory) -> Result<OrbitGroupoids> {
    let g = &or.group;
    let mut reps = Vec::new();
    let mut groupoids = Vec::new();
    for h in &or.family.members {
        let (action, r) = GSetAction::cosets(g, h);
        groupoids.push(transport_groupoid(&action)?);
        reps.push(r);
    }
    let functors = (0..or.cat.num_morphisms())
        .map(|f| {
            let (s, t) = (or.cat.dom(f), or.cat.cod(f));
            let map: Vec<usize> = reps[s]
                .iter()
                .map(|&a| reps[t].binary_search(&or.apply(f, a)).expect("orbit maps send cosets to cosets"))
                .collect();
            groupoids[s].functor_to(&groupoids[t], &map)
        })
        .collect::<Result<_>>()?;
    Ok(OrbitGroupoids { groupoids, functors })
}

/// Simplices `(x_0, f_1, …, f_n)` of the nerve of a finite category, with
/// `f_i : x_{i-1} -> x_i`.
struct Nerve {
    simplices: Vec<Vec<(usize, Vec<usize>)>>,
    index: Vec<HashMap<(usize, Vec<usize>), usize>>,
}

impl Nerve {
    fn new(cat: &FinCategory, top: usize) -> Self {
        let mut simplices: Vec<Vec<(usize, Vec<usize>)>> = vec![(0..cat.num_objects()).map(|o| (o, Vec::new())).collect()];
        for n in 1..=top {
            let mut next = Vec::new();
            for (x0, fs) in &simplices[n - 1] {
                let end = fs.last().map_or(*x0, |&f| cat.cod(f));
                for f in 0..cat.num_morphisms() {
                    if cat.dom(f) == end {
                        let mut v = fs.clone();
                        v.push(f);
                        next.push((*x0, v));
                    }
                }
            }
            simplices.push(next);
        }
        let index = simplices.iter().map(|s| s.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        Nerve { simplices, index }
    }

    fn boundary(&self, cat: &FinCategory, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.simplices[n - 1].len(), self.simplices[n].len());
        for (col, (x0, fs)) in self.simplices[n].iter().enumerate() {
            for i in 0..=n {
                let face = if i == 0 {
                    (cat.cod(fs[0]), fs[1..].to_vec())
                } else if i == n {
                    (*x0, fs[..n - 1].to_vec())
                } else {
                    let mut v = fs[..i - 1].to_vec();
                    v.push(cat.compose(fs[i], fs[i - 1]));
                    v.extend_from_slice(&fs[i + 1..]);
                    (*x0, v)
                };
                let row = self.index[n - 1][&face];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.add_to(row, col, &sign.into());
            }
        }
        m
    }

    fn pushforward(&self, other: &Nerve, f: &CatFunctor, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(other.simplices[n].len(), self.simplices[n].len());
        for (col, (x0, fs)) in self.simplices[n].iter().enumerate() {
            let image = (f.on_objects[*x0], fs.iter().map(|&g| f.on_morphisms[g]).collect());
            m.set(other.index[n][&image], col, 1.into());
        }
        m
    }
}

/// `G/H ↦ F(𝒢^G(G/H))` as a covariant complex over `Or(G, F)`.
pub fn transport_coefficients(or: &OrbitCategory, recipe: TransportRecipe) -> Result<CatChainComplex> {
    let og = orbit_groupoids(or)?;
    let cat = &or.cat;
    let v = Variance::Covariant;
    match recipe {
        TransportRecipe::Components => {
            let comps: Vec<Vec<Vec<usize>>> = og.groupoids.iter().map(|t| t.components()).collect();
            let values: Vec<FpAbGroup> = comps.iter().map(|c| FpAbGroup::free(c.len())).collect();
            let matrices = og
                .functors
                .iter()
                .enumerate()
                .map(|(f, func)| {
                    let (s, t) = (cat.dom(f), cat.cod(f));
                    let mut m = IntMatrix::zeros(comps[t].len(), comps[s].len());
                    for (col, comp) in comps[s].iter().enumerate() {
                        let image = func.on_objects[comp[0]];
                        let row = comps[t].iter().position(|c| c.contains(&image)).expect("components cover the objects");
                        m.set(row, col, 1.into());
                    }
                    m
                })
                .collect();
            let m = CatModule::from_matrices(cat.clone(), v, values, matrices)?;
            Ok(CatChainComplex::concentrated(0, m))
        }
        TransportRecipe::Nerve { top } => {
            let nerves: Vec<Nerve> = og.groupoids.iter().map(|t| Nerve::new(&t.cat, top + 1)).collect();
            let mut modules = Vec::new();
            for n in 0..=top + 1 {
                let values: Vec<FpAbGroup> = nerves.iter().map(|nv| FpAbGroup::free(nv.simplices[n].len())).collect();
                let matrices = og
                    .functors
                    .iter()
                    .enumerate()
                    .map(|(f, func)| nerves[cat.dom(f)].pushforward(&nerves[cat.cod(f)], func, n))
                    .collect();
                modules.push(CatModule::from_matrices(cat.clone(), v, values, matrices)?);
            }
            let boundary = |n: usize| -> Result<ModuleMap> {
                let components = (0..cat.num_objects())
                    .map(|o| {
                        let b = nerves[o].boundary(&og.groupoids[o].cat, n);
                        AbHom::new(modules[n].values[o].clone(), modules[n - 1].values[o].clone(), b)
                    })
                    .collect::<Result<_>>()?;
                Ok(ModuleMap { components })
            };
            let mut diffs = (1..=top).map(boundary).collect::<Result<Vec<_>>>()?;
            // Replace the top chains by their quotient by boundaries, so that
            // H_top is the homology of the untruncated nerve.
            let kc = map_kernel_cokernel(&modules[top + 1], &modules[top], &boundary(top + 1)?)?;
            if top > 0 {
                let components = (0..cat.num_objects())
                    .map(|o| {
                        let q = &kc.cokernel.values[o];
                        AbHom::new(q.clone(), modules[top - 1].values[o].clone(), diffs[top - 1].components[o].matrix().mul(&q.generator_matrix())?)
                    })
                    .collect::<Result<_>>()?;
                diffs[top - 1] = ModuleMap { components };
            }
            modules.truncate(top);
            modules.push(kc.cokernel);
            CatChainComplex::new(cat.clone(), v, 0, modules, diffs)
        }
    }
}

/// `E(i, G/H) = F(𝒢^G(G/H))` with the index leg acting by identities.
pub fn transport_bifunctor(index: &Arc<FinCategory>, or: &OrbitCategory, recipe: TransportRecipe) -> Result<BiFunctorComplex> {
    BiFunctorComplex::constant_in_index(index.clone(), &transport_coefficients(or, recipe)?)
}

/// `E(i, G/H) = Z[G/H]` in degree 0. Automorphisms of `G/1` act by right
/// translation, so distinct morphisms with one image in `Sub(G)` act
/// differently as soon as `G` is nontrivial.
pub fn coset_permutation_bifunctor(index: &Arc<FinCategory>, or: &OrbitCategory) -> Result<BiFunctorComplex> {
    let og = orbit_groupoids(or)?;
    let cat = &or.cat;
    let values: Vec<FpAbGroup> = og.groupoids.iter().map(|t| FpAbGroup::free(t.action.size)).collect();
    let matrices = og
        .functors
        .iter()
        .map(|func| {
            let mut m = IntMatrix::zeros(func.target.num_objects(), func.source.num_objects());
            for (col, &row) in func.on_objects.iter().enumerate() {
                m.set(row, col, 1.into());
            }
            m
        })
        .collect();
    let m = CatModule::from_matrices(cat.clone(), Variance::Covariant, values, matrices)?;
    BiFunctorComplex::constant_in_index(index.clone(), &CatChainComplex::concentrated(0, m))
}

/// A constant group `A` in one degree.
pub fn constant_bifunctor(index: &Arc<FinCategory>, coeff: &Arc<FinCategory>, a: &FpAbGroup, degree: i64) -> Result<BiFunctorComplex> {
    let m = CatModule::constant(coeff.clone(), Variance::Covariant, a);
    BiFunctorComplex::constant_in_index(index.clone(), &CatChainComplex::concentrated(degree, m))
}

/// Shifts every degree of `e` by `s`.
pub fn shift_bifunctor(e: &BiFunctorComplex, s: i64) -> BiFunctorComplex {
    BiFunctorComplex { lo: e.lo + s, ..e.clone() }
}

/// Appends zero bimodules above the top degree until `hi` is reached, so the
/// degree window widens without changing the complex.
pub fn pad_bifunctor(e: &BiFunctorComplex, hi: i64) -> Result<BiFunctorComplex> {
    if hi <= e.hi() {
        return Ok(e.clone());
    }
    if e.degrees.is_empty() {
        return Err(Error::ChainComplex("cannot pad an empty complex".into()));
    }
    let zero = crate::chainplex::BiModule::zero(&e.index, &e.coeff);
    let mut out = e.clone();
    while out.hi() < hi {
        let top = out.degrees.last().expect("nonempty");
        let diff: Vec<Vec<AbHom>> = top.values.iter().map(|row| row.iter().map(|v| AbHom::zero(&FpAbGroup::trivial(), v)).collect()).collect();
        out.degrees.push(zero.clone());
        out.differentials.push(diff);
    }
    out.validate()?;
    Ok(out)
}

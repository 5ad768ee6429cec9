//! Ready-made theorem instances.

use std::sync::Arc;

use super::recipes::{transport_bifunctor, TransportRecipe};
use super::theorem::{FgMode, TheoremInstance, TheoremSource};
use crate::catmod::{CatModule, Variance};
use crate::cellspaces::{cellular_chain_complex, classifying_model, s3_reflection_circle, z2_reflection_circle, GCWComplex};
use crate::chainplex::{BiFunctorComplex, BiModule, CatChainComplex};
use crate::error::Result;
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::{orbit_category, standard_category, FinGroup, StandardKind, SubgroupFamily};

/// `𝒾 = RF` truncated at `k`, `D` the chains of its classifying model, the
/// family of all subgroups, `E` from components of transport groupoids in
/// degree 0, `N = 0` and `n = d`.
pub fn classifying_instance(x: GCWComplex, k: usize) -> Result<TheoremInstance> {
    let model = classifying_model(StandardKind::RF, k)?;
    let d_complex = cellular_chain_complex(&model)?;
    let d = model.dimension().unwrap_or(0);
    let or = orbit_category(&SubgroupFamily::all(&x.group)?)?;
    let e = transport_bifunctor(&model.base, &or, TransportRecipe::Components)?;
    TheoremInstance::new(d_complex, or, TheoremSource::Space(x), e, d, d as i64, 0, FgMode::Strict)
}

/// `G = Z/2` acting on the circle by reflection, over `RF` with `K = 3`.
pub fn desk_instance() -> Result<TheoremInstance> {
    classifying_instance(z2_reflection_circle(), 3)
}

/// `G = S_3` acting on the hexagon by reflections, over `RF` with `K = 3`.
pub fn s3_desk_instance() -> Result<TheoremInstance> {
    classifying_instance(s3_reflection_circle(), 3)
}

/// A deliberately defective instance whose comparison map is neither an
/// isomorphism nor an almost isomorphism.
///
/// `𝒾 = N` with objects `0, 1`; `D` is `Z` at `1` and `0` at `0`, which is
/// not free. `G = Z/2`, `C` is `Z` at `G/G` and `0` at `G/1`, and `E` is `Z`
/// everywhere except `E(1, G/1) = 0`, all maps identities where possible.
/// The source of `t` vanishes while the target is `Z`.
pub fn neither_instance() -> Result<TheoremInstance> {
    let index = Arc::new(standard_category(StandardKind::N, 1));
    let g = Arc::new(FinGroup::cyclic(2));
    let or = orbit_category(&SubgroupFamily::all(&g)?)?;
    let z = FpAbGroup::free(1);
    let o = FpAbGroup::trivial();
    let whole = or.family.index_of(&g.whole()).expect("all subgroups");
    let triv = or.family.index_of(&g.trivial_subgroup()).expect("all subgroups");

    let at = |obj_with_z: usize, nobj: usize| -> Vec<FpAbGroup> { (0..nobj).map(|c| if c == obj_with_z { z.clone() } else { o.clone() }).collect() };
    let module_on = |base: &Arc<crate::fincat::FinCategory>, values: Vec<FpAbGroup>| -> Result<CatModule> {
        let matrices = (0..base.num_morphisms())
            .map(|f| {
                let (s, t) = Variance::Contravariant.ends(base, f);
                let (r, c) = (values[t].ngens(), values[s].ngens());
                if r == 1 && c == 1 { IntMatrix::identity(1) } else { IntMatrix::zeros(r, c) }
            })
            .collect();
        CatModule::from_matrices(base.clone(), Variance::Contravariant, values, matrices)
    };
    let d_module = module_on(&index, at(1, 2))?;
    let c_module = module_on(&or.cat, at(whole, or.cat.num_objects()))?;

    let values: Vec<Vec<FpAbGroup>> = (0..2)
        .map(|i| (0..or.cat.num_objects()).map(|j| if i == 1 && j == triv { o.clone() } else { z.clone() }).collect())
        .collect();
    let hom = |a: &FpAbGroup, b: &FpAbGroup| -> Result<AbHom> {
        if a.ngens() == 1 && b.ngens() == 1 { Ok(AbHom::identity(a)) } else { Ok(AbHom::zero(a, b)) }
    };
    let index_action = (0..index.num_morphisms())
        .map(|alpha| {
            let (i0, i1) = (index.dom(alpha), index.cod(alpha));
            (0..or.cat.num_objects()).map(|j| hom(&values[i1][j], &values[i0][j])).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let coeff_action = (0..2)
        .map(|i| {
            (0..or.cat.num_morphisms())
                .map(|beta| hom(&values[i][or.cat.dom(beta)], &values[i][or.cat.cod(beta)]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let e = BiFunctorComplex::concentrated(index.clone(), or.cat.clone(), 0, BiModule { values, index_action, coeff_action })?;
    let source = TheoremSource::Chains(CatChainComplex::concentrated(0, c_module));
    TheoremInstance::new(CatChainComplex::concentrated(0, d_module), or, source, e, 0, 0, 0, FgMode::Strict)
}

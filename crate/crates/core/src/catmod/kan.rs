use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::module::{CatModule, ModuleMap, Variance};
use super::tensor::{tensor_map, tensor_over_cat};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::CatFunctor;

/// Restriction `F^* M = M ∘ F` along `F : I -> J`.
pub fn restrict(f: &CatFunctor, m: &CatModule) -> Result<CatModule> {
    if m.base != f.target {
        return Err(Error::BaseMismatch("restriction needs a module over the functor's target".into()));
    }
    let values: Vec<FpAbGroup> = f.on_objects.iter().map(|&o| m.values[o].clone()).collect();
    let action: Vec<AbHom> = f.on_morphisms.iter().map(|&g| m.action[g].clone()).collect();
    Ok(CatModule { base: f.source.clone(), variance: m.variance, values, action, marker: None })
}

/// The `I`-module `i ↦ Z[mor_J(j, F i)]` (covariant) or `i ↦ Z[mor_J(F i, j)]`
/// (contravariant) used as the coefficient of the coend.
fn mor_module(f: &CatFunctor, j: usize, variance: Variance) -> CatModule {
    let (src, tgt) = (&f.source, &f.target);
    let homs: Vec<&[usize]> = (0..src.num_objects())
        .map(|i| match variance {
            Variance::Covariant => tgt.hom(j, f.on_objects[i]),
            Variance::Contravariant => tgt.hom(f.on_objects[i], j),
        })
        .collect();
    let values: Vec<FpAbGroup> = homs.iter().map(|h| FpAbGroup::free(h.len())).collect();
    let mut action = Vec::with_capacity(src.num_morphisms());
    for alpha in 0..src.num_morphisms() {
        let (s, t) = variance.ends(src, alpha);
        let fa = f.on_morphisms[alpha];
        let mut m = IntMatrix::zeros(homs[t].len(), homs[s].len());
        for (col, &g) in homs[s].iter().enumerate() {
            let h = match variance {
                Variance::Covariant => tgt.compose(fa, g),
                Variance::Contravariant => tgt.compose(g, fa),
            };
            m.set(tgt.position(h), col, BigInt::one());
        }
        action.push(AbHom::new(values[s].clone(), values[t].clone(), m).expect("free groups"));
    }
    CatModule { base: src.clone(), variance, values, action, marker: None }
}

/// The map of coefficient modules induced by `psi` in `J`.
fn mor_module_map(f: &CatFunctor, psi: usize, from: &CatModule, to: &CatModule, variance: Variance) -> ModuleMap {
    let tgt = &f.target;
    let components = (0..f.source.num_objects())
        .map(|i| {
            let hs = match variance {
                Variance::Covariant => tgt.hom(tgt.cod(psi), f.on_objects[i]),
                Variance::Contravariant => tgt.hom(f.on_objects[i], tgt.dom(psi)),
            };
            let mut m = IntMatrix::zeros(to.values[i].ngens(), from.values[i].ngens());
            for (col, &g) in hs.iter().enumerate() {
                let h = match variance {
                    Variance::Covariant => tgt.compose(g, psi),
                    Variance::Contravariant => tgt.compose(psi, g),
                };
                m.set(tgt.position(h), col, BigInt::one());
            }
            AbHom::new(from.values[i].clone(), to.values[i].clone(), m).expect("free groups")
        })
        .collect();
    ModuleMap { components }
}

/// Induction `F_* M`, the left Kan extension along `F : I -> J`, computed
/// objectwise as a tensor product with the module of `J`-morphisms.
pub fn induce(f: &CatFunctor, m: &CatModule) -> Result<CatModule> {
    if m.base != f.source {
        return Err(Error::BaseMismatch("induction needs a module over the functor's source".into()));
    }
    let tgt: &Arc<_> = &f.target;
    let coeff_var = m.variance.opposite();
    let coeffs: Vec<CatModule> = (0..tgt.num_objects()).map(|j| mor_module(f, j, coeff_var)).collect();
    let pair = |j: usize| -> (&CatModule, &CatModule) {
        match m.variance {
            Variance::Contravariant => (m, &coeffs[j]),
            Variance::Covariant => (&coeffs[j], m),
        }
    };
    let values = (0..tgt.num_objects())
        .map(|j| {
            let (a, b) = pair(j);
            tensor_over_cat(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let id_m = ModuleMap::identity(m);
    let mut action = Vec::with_capacity(tgt.num_morphisms());
    for psi in 0..tgt.num_morphisms() {
        // For contravariant M the coefficient map goes B_{cod psi} -> B_{dom psi}.
        let (s, t) = m.variance.ends(tgt, psi);
        let g = mor_module_map(f, psi, &coeffs[s], &coeffs[t], coeff_var);
        let h = match m.variance {
            Variance::Contravariant => tensor_map(&values[s], &values[t], pair(s), pair(t), &id_m, &g)?,
            Variance::Covariant => tensor_map(&values[s], &values[t], pair(s), pair(t), &g, &id_m)?,
        };
        action.push(h);
    }
    Ok(CatModule { base: tgt.clone(), variance: m.variance, values, action, marker: None })
}

/// Restriction or induction, chosen by which end of `f` the module lives on.
pub fn restrict_induce(f: &CatFunctor, m: &CatModule) -> Result<CatModule> {
    if m.base == f.target && m.base != f.source {
        restrict(f, m)
    } else if m.base == f.source {
        induce(f, m)
    } else {
        Err(Error::BaseMismatch("module lives on neither end of the functor".into()))
    }
}

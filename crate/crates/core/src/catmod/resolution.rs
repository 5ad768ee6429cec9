use num_bigint::BigInt;

use super::module::{direct_sum_modules, free_module, map_kernel_cokernel, unit, yoneda_map, CatModule, ModuleMap, Variance};
use super::tensor::{tensor_map, tensor_over_cat};
use crate::error::{Error, Result};
use crate::exact_abelian::{homology_group, AbHom, FpAbGroup, IntMatrix};

/// A free module mapping onto `target`.
#[derive(Clone, Debug)]
pub struct GenerationWitness {
    /// `(object, element in canonical coordinates)` per generator.
    pub generators: Vec<(usize, Vec<BigInt>)>,
    pub free: CatModule,
    pub surjection: ModuleMap,
}

fn witness_from(m: &CatModule, generators: Vec<(usize, Vec<BigInt>)>) -> Result<GenerationWitness> {
    let objs: Vec<usize> = generators.iter().map(|g| g.0).collect();
    let free = free_module(&m.base, m.variance, &objs);
    let images: Vec<Vec<BigInt>> = generators.iter().map(|g| g.1.clone()).collect();
    let surjection = yoneda_map(&free, m, &images)?;
    Ok(GenerationWitness { generators, free, surjection })
}

/// Always true over a finite category; the witness uses every canonical
/// generator of every value.
pub fn is_finitely_generated(m: &CatModule) -> Result<(bool, GenerationWitness)> {
    if let Some(marker) = &m.marker {
        let gens = marker
            .generators
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, unit(m.values[c].ngens(), marker.index(&m.base, m.variance, c, i, m.base.identity(c)))))
            .collect();
        return Ok((true, witness_from(m, gens)?));
    }
    let gens = (0..m.base.num_objects())
        .flat_map(|c| (0..m.values[c].ngens()).map(move |k| (c, unit(m.values[c].ngens(), k))))
        .collect();
    let w = witness_from(m, gens)?;
    let ok = w.surjection.components.iter().map(|h| h.is_surjective()).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
    Ok((ok, w))
}

/// Objectwise generating set, adding generators only where the ones found
/// so far do not already span.
fn greedy_generators(m: &CatModule) -> Result<GenerationWitness> {
    let base = &m.base;
    // Objects reaching many others first, so their generators get reused.
    let reach = |c: usize| {
        (0..base.num_objects())
            .filter(|&d| match m.variance {
                Variance::Contravariant => !base.hom(d, c).is_empty(),
                Variance::Covariant => !base.hom(c, d).is_empty(),
            })
            .count()
    };
    let mut order: Vec<usize> = (0..base.num_objects()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(reach(c)));
    let mut gens: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for c in order {
        let w = witness_from(m, gens.clone())?;
        let coker = w.surjection.components[c].cokernel()?;
        let lifts = coker.generator_matrix();
        for k in 0..coker.ngens() {
            gens.push((c, m.values[c].reduced(&lifts.column(k))));
        }
    }
    witness_from(m, gens)
}

/// `F_L -> ... -> F_0 -> M -> 0`; `differentials[k - 1] : F_k -> F_{k-1}`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub modules: Vec<CatModule>,
    pub differentials: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }
}

/// A free resolution of length `len`, with exactness checked objectwise.
pub fn free_resolution(m: &CatModule, len: usize) -> Result<FreeResolution> {
    let w0 = greedy_generators(m)?;
    let mut modules = vec![w0.free.clone()];
    let mut differentials = Vec::new();
    let augmentation = w0.surjection.clone();
    let mut kc = map_kernel_cokernel(&w0.free, m, &augmentation)?;
    for _ in 1..=len {
        let w = greedy_generators(&kc.kernel)?;
        let d = kc.inclusion.compose(&w.surjection)?;
        let prev = modules.last().expect("nonempty");
        let next_kc = map_kernel_cokernel(&w.free, prev, &d)?;
        modules.push(w.free);
        differentials.push(d);
        kc = next_kc;
    }
    let res = FreeResolution { modules, differentials, augmentation };
    check_exact(m, &res)?;
    Ok(res)
}

fn check_exact(m: &CatModule, res: &FreeResolution) -> Result<()> {
    let l = res.length();
    for c in 0..m.base.num_objects() {
        if !res.augmentation.components[c].is_surjective()? {
            return Err(Error::Module(format!("augmentation is not onto at {}", m.base.object_label(c))));
        }
        for k in 0..l {
            let d_out = if k == 0 { &res.augmentation.components[c] } else { &res.differentials[k - 1].components[c] };
            let d_in = &res.differentials[k].components[c];
            let h = homology_group(&res.modules[k].values[c], Some(d_in), Some(d_out))?;
            if !h.is_trivial() {
                return Err(Error::Module(format!(
                    "resolution is not exact in degree {k} at {}: homology {h}",
                    m.base.object_label(c)
                )));
            }
        }
    }
    Ok(())
}

/// Which argument of Tor gets resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorSide {
    Left,
    Right,
}

/// `Tor_p(M, N)` for `M` contravariant and `N` covariant, resolving `M`.
pub fn tor(m: &CatModule, n: &CatModule, p: usize) -> Result<FpAbGroup> {
    tor_via(m, n, p, TorSide::Left)
}

pub fn tor_via(m: &CatModule, n: &CatModule, p: usize, side: TorSide) -> Result<FpAbGroup> {
    if m.variance != Variance::Contravariant || n.variance != Variance::Covariant {
        return Err(Error::BaseMismatch("Tor needs a contravariant left and a covariant right argument".into()));
    }
    let resolved = match side {
        TorSide::Left => m,
        TorSide::Right => n,
    };
    let res = free_resolution(resolved, p + 1)?;
    let pair = |k: usize| -> (&CatModule, &CatModule) {
        match side {
            TorSide::Left => (&res.modules[k], n),
            TorSide::Right => (m, &res.modules[k]),
        }
    };
    let groups = (0..=p + 1)
        .map(|k| {
            let (a, b) = pair(k);
            tensor_over_cat(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let fixed = match side {
        TorSide::Left => ModuleMap::identity(n),
        TorSide::Right => ModuleMap::identity(m),
    };
    let boundary = |k: usize| -> Result<AbHom> {
        let d = &res.differentials[k - 1];
        match side {
            TorSide::Left => tensor_map(&groups[k], &groups[k - 1], pair(k), pair(k - 1), d, &fixed),
            TorSide::Right => tensor_map(&groups[k], &groups[k - 1], pair(k), pair(k - 1), &fixed, d),
        }
    };
    let d_in = boundary(p + 1)?;
    let d_out = if p > 0 { Some(boundary(p)?) } else { None };
    Ok(homology_group(&groups[p], Some(&d_in), d_out.as_ref())?.bare())
}

/// The comparison `F ⊗ ∏ M_i -> ∏ (F ⊗ M_i)` and whether it is an isomorphism.
#[derive(Clone, Debug)]
pub struct InterchangeReport {
    pub map: AbHom,
    pub is_iso: bool,
}

pub fn finite_product_interchange(free: &CatModule, ms: &[CatModule]) -> Result<InterchangeReport> {
    if free.marker.is_none() {
        return Err(Error::MarkerMissing("finite_product_interchange needs a module built by free_module".into()));
    }
    let other = free.variance.opposite();
    let prod = direct_sum_modules(&free.base, other, ms)?;
    let ordered = |x: &'_ CatModule| -> (CatModule, CatModule) {
        match free.variance {
            Variance::Contravariant => (free.clone(), x.clone()),
            Variance::Covariant => (x.clone(), free.clone()),
        }
    };
    let (a, b) = ordered(&prod.sum);
    let src = tensor_over_cat(&a, &b)?;
    let id_f = ModuleMap::identity(free);
    let mut parts = Vec::new();
    let mut blocks: Option<IntMatrix> = None;
    for (mi, proj) in ms.iter().zip(&prod.projections) {
        let (a2, b2) = ordered(mi);
        let tgt = tensor_over_cat(&a2, &b2)?;
        let h = match free.variance {
            Variance::Contravariant => tensor_map(&src, &tgt, (&a, &b), (&a2, &b2), &id_f, proj)?,
            Variance::Covariant => tensor_map(&src, &tgt, (&a, &b), (&a2, &b2), proj, &id_f)?,
        };
        blocks = Some(match blocks {
            None => h.matrix().clone(),
            Some(acc) => acc.vstack(h.matrix())?,
        });
        parts.push(tgt.bare());
    }
    let target = FpAbGroup::direct_sum(&parts);
    let stacked = blocks.unwrap_or_else(|| IntMatrix::zeros(0, src.ngens()));
    let map = AbHom::new(src.clone(), target.clone(), target.to_canonical_columns(&stacked)?)?;
    let is_iso = map.is_isomorphism()?;
    Ok(InterchangeReport { map, is_iso })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::{orbit_category, FinCategory, FinGroup, SubgroupFamily};

    fn trivial_cat() -> Arc<FinCategory> {
        Arc::new(FinGroup::trivial().as_category())
    }

    #[test]
    fn resolution_of_z2_over_trivial_category() {
        let c = trivial_cat();
        let m = CatModule::constant(c, Variance::Contravariant, &FpAbGroup::cyclic(2));
        let r = free_resolution(&m, 2).unwrap();
        assert_eq!(r.modules[0].values[0], FpAbGroup::free(1));
        assert_eq!(r.modules[1].values[0], FpAbGroup::free(1));
        assert!(r.modules[2].is_zero());
    }

    #[test]
    fn tor_of_cyclics() {
        let c = trivial_cat();
        let m = CatModule::constant(c.clone(), Variance::Contravariant, &FpAbGroup::cyclic(4));
        let n = CatModule::constant(c, Variance::Covariant, &FpAbGroup::cyclic(6));
        assert_eq!(tor(&m, &n, 0).unwrap(), FpAbGroup::cyclic(2));
        assert_eq!(tor(&m, &n, 1).unwrap(), FpAbGroup::cyclic(2));
        assert_eq!(tor(&m, &n, 2).unwrap(), FpAbGroup::trivial());
        assert_eq!(tor_via(&m, &n, 1, TorSide::Right).unwrap(), FpAbGroup::cyclic(2));
    }

    #[test]
    fn constant_z_over_or_z2_resolves() {
        let g = Arc::new(FinGroup::cyclic(2));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let m = CatModule::constant(or.cat.clone(), Variance::Contravariant, &FpAbGroup::free(1));
        let r = free_resolution(&m, 2).unwrap();
        assert_eq!(r.length(), 2);
        // Z is represented by G/G, so it is already free.
        assert!(r.modules[1].is_zero());
    }

    #[test]
    fn interchange_for_a_representable() {
        let g = Arc::new(FinGroup::cyclic(2));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let f = free_module(&or.cat, Variance::Contravariant, &[0]);
        let ms = vec![
            CatModule::constant(or.cat.clone(), Variance::Covariant, &FpAbGroup::cyclic(3)),
            CatModule::constant(or.cat.clone(), Variance::Covariant, &FpAbGroup::free(1)),
        ];
        let r = finite_product_interchange(&f, &ms).unwrap();
        assert!(r.is_iso);
        assert_eq!(r.map.target().describe(), "Z ⊕ Z/3");
        let plain = CatModule::constant(or.cat.clone(), Variance::Contravariant, &FpAbGroup::free(1));
        assert!(finite_product_interchange(&plain, &ms).is_err());
    }

    #[test]
    fn generation_witness_of_zero_module() {
        let c = trivial_cat();
        let (ok, w) = is_finitely_generated(&CatModule::zero(c, Variance::Covariant)).unwrap();
        assert!(ok && w.generators.is_empty());
    }
}

use std::sync::Arc;

use num_bigint::BigInt;

use super::gcw::{underlying_chains, GCWComplex};
use crate::catmod::{free_module, yoneda_map, CatModule, ModuleMap, Variance};
use crate::chainplex::{induced_map_on_homology, tensor_total, tensor_total_map, CatChainComplex, ChainMap, PlainChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::{FinCategory, FinGroup};

/// Bar resolution of `Z` over `Z[G]` in degrees `0..=k`, as free right
/// modules over the one-object category `base` of `G`.
///
/// The generators of degree `n` are the tuples `(a_0, …, a_{n-1})`, standing
/// for the homogeneous simplex `(a_0, …, a_{n-1}, e)`; the tuple is read in
/// base `|G|` with `a_0` most significant.
pub fn bar_resolution_truncated(g: &FinGroup, base: &Arc<FinCategory>, k: usize) -> Result<CatChainComplex> {
    if base.num_objects() != 1 || base.num_morphisms() != g.order() {
        return Err(Error::BaseMismatch("bar resolution needs the one-object category of the group".into()));
    }
    let order = g.order();
    let v = Variance::Contravariant;
    let modules: Vec<CatModule> = (0..=k)
        .map(|n| {
            let count = order.checked_pow(n as u32).filter(|&c| c <= 1 << 20).ok_or_else(|| {
                Error::Truncation(format!("bar resolution of degree {n} over a group of order {order} is too large"))
            })?;
            Ok(free_module(base, v, &vec![0; count]))
        })
        .collect::<Result<_>>()?;
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &a| acc * order + a);
    let mut diffs = Vec::new();
    for n in 1..=k {
        let marker = modules[n - 1].marker.as_ref().expect("free module");
        let width = modules[n - 1].values[0].ngens();
        let mut images = Vec::with_capacity(modules[n].values[0].ngens());
        for gen in 0..order.pow(n as u32) {
            let mut t = vec![0; n];
            let mut r = gen;
            for slot in t.iter_mut().rev() {
                *slot = r % order;
                r /= order;
            }
            let mut img = vec![BigInt::from(0); width];
            for i in 0..n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let mut rest: Vec<usize> = t.clone();
                rest.remove(i);
                img[marker.index(base, v, 0, encode(&rest), g.identity())] += sign;
            }
            // Dropping the trailing `e` leaves `(a_0, …, a_{n-1}) = (b, e)·a_{n-1}`.
            let last = t[n - 1];
            let inv = g.inv(last);
            let b: Vec<usize> = t[..n - 1].iter().map(|&a| g.mul(a, inv)).collect();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            img[marker.index(base, v, 0, encode(&b), last)] += sign;
            images.push(img);
        }
        diffs.push(yoneda_map(&modules[n], &modules[n - 1], &images)?);
    }
    CatChainComplex::new(base.clone(), v, 0, modules, diffs)
}

/// Augmentation `Z[G] -> Z` in degree 0 of the bar resolution.
pub fn bar_augmentation(bar: &CatChainComplex) -> Result<(CatChainComplex, ModuleMap)> {
    let b0 = bar.module(0).ok_or_else(|| Error::ChainComplex("empty bar resolution".into()))?;
    let z = CatModule::constant(bar.base.clone(), Variance::Contravariant, &FpAbGroup::free(1));
    let ones = IntMatrix::from_big_rows(&[vec![BigInt::from(1); b0.values[0].ngens()]], b0.values[0].ngens())?;
    let eps = ModuleMap { components: vec![AbHom::new(b0.values[0].clone(), z.values[0].clone(), ones)?] };
    Ok((CatChainComplex::concentrated(0, z), eps))
}

/// Truncated Borel construction, orbit-space chains and the projection
/// between them.
#[derive(Clone, Debug)]
pub struct BorelQuotient {
    pub borel: PlainChainComplex,
    pub quotient: PlainChainComplex,
    pub projection: ChainMap,
    /// Highest degree in which the truncated Borel homology is reliable.
    pub valid_up_to: i64,
}

impl BorelQuotient {
    /// `H_p` of the projection, refusing degrees outside the valid range.
    pub fn projection_on_homology(&self, p: i64) -> Result<AbHom> {
        if p > self.valid_up_to {
            return Err(Error::Truncation(format!("degree {p} exceeds the truncation-valid range (up to {})", self.valid_up_to)));
        }
        induced_map_on_homology(&self.borel, &self.quotient, &self.projection, p)
    }
}

/// `EG ×_G X` truncated to bar degrees `0..=k`, `G \ X`, and the map
/// induced by the augmentation.
pub fn borel_and_quotient(x: &GCWComplex, k: usize) -> Result<BorelQuotient> {
    let base = Arc::new(x.group.as_category());
    let dim = x.dimension().unwrap_or(0) as i64;
    let valid_up_to = k as i64 - 1 - dim;
    if valid_up_to < 0 {
        return Err(Error::Truncation(format!("bar degree {k} is too small for a complex of dimension {dim}")));
    }
    let cx = underlying_chains(x, &base)?;
    let bar = bar_resolution_truncated(&x.group, &base, k)?;
    let (z, eps) = bar_augmentation(&bar)?;
    let (borel, quotient, projection) = tensor_total_map(&bar, &z, &cx, &[(0, eps)])?;
    Ok(BorelQuotient { borel: borel.complex, quotient: quotient.complex, projection, valid_up_to })
}

/// `H_*(BG)` from the truncated bar complex, valid in degrees `0..k`.
pub fn group_homology_complex(g: &FinGroup, k: usize) -> Result<PlainChainComplex> {
    let base = Arc::new(g.as_category());
    let bar = bar_resolution_truncated(g, &base, k)?;
    let z = CatModule::constant(base, Variance::Covariant, &FpAbGroup::free(1));
    Ok(tensor_total(&bar, &CatChainComplex::concentrated(0, z))?.complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellspaces::{gcw_free_orbit, gcw_point, z2_antipodal_circle};

    #[test]
    fn homology_of_bz2() {
        let c = group_homology_complex(&FinGroup::cyclic(2), 5).unwrap();
        let expect = [FpAbGroup::free(1), FpAbGroup::cyclic(2), FpAbGroup::trivial(), FpAbGroup::cyclic(2), FpAbGroup::trivial()];
        for (p, e) in expect.iter().enumerate() {
            assert_eq!(&c.homology(p as i64).unwrap().bare(), e, "degree {p}");
        }
    }

    #[test]
    fn trivial_group_bar_is_contractible_above_zero() {
        let c = group_homology_complex(&FinGroup::trivial(), 4).unwrap();
        assert_eq!(c.homology(0).unwrap(), FpAbGroup::free(1));
        for p in 1..4 {
            assert!(c.homology(p).unwrap().is_trivial());
        }
    }

    #[test]
    fn projection_for_a_point_and_a_free_circle() {
        let g = Arc::new(FinGroup::cyclic(2));
        let bq = borel_and_quotient(&gcw_point(&g), 5).unwrap();
        for p in 1..=4 {
            let h = bq.projection_on_homology(p).unwrap();
            assert!(h.is_zero());
            let expected = if p % 2 == 1 { FpAbGroup::cyclic(2) } else { FpAbGroup::trivial() };
            assert_eq!(h.kernel().unwrap().bare(), expected);
        }
        assert!(bq.projection_on_homology(5).is_err());
        let bq = borel_and_quotient(&z2_antipodal_circle(), 5).unwrap();
        for p in 0..=bq.valid_up_to {
            assert!(bq.projection_on_homology(p).unwrap().is_isomorphism().unwrap());
        }
        let bq = borel_and_quotient(&gcw_free_orbit(&g), 3).unwrap();
        assert!(bq.projection_on_homology(0).unwrap().is_isomorphism().unwrap());
    }
}

use num_bigint::BigInt;
use num_traits::Zero;

use super::catcomplex::{BiFunctorComplex, CatChainComplex};
use super::complex::{check_chain_map, induced_map_unchecked, ChainMap, PlainChainComplex};
use super::total::{hom_total, tensor_total, HomTotal, TensorTotal};
use crate::catmod::{hom_map_ambient, tensor_map_ambient, CatModule, ModuleMap, Variance};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, IntMatrix};

/// The comparison chain map `C ⊗_J hom_I(D, E) -> hom_I(D, C ⊗_J E)`
/// together with both total complexes.
#[derive(Clone, Debug)]
pub struct ComparisonMap {
    pub source: PlainChainComplex,
    pub target: PlainChainComplex,
    pub map: ChainMap,
}

impl ComparisonMap {
    /// `H_p(t)`.
    pub fn on_homology(&self, p: i64) -> Result<AbHom> {
        induced_map_unchecked(&self.source, &self.target, &self.map, p)
    }

    /// True when every component is an isomorphism of groups.
    pub fn is_degreewise_iso(&self) -> Result<bool> {
        let lo = self.source.lo().min(self.target.lo());
        let hi = self.source.hi().max(self.target.hi());
        for n in lo..=hi {
            if !self.map.component(&self.source, &self.target, n).is_isomorphism()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn identities(m: &CatModule) -> Vec<IntMatrix> {
    m.values.iter().map(|v| IntMatrix::identity(v.ngens())).collect()
}

/// `j ↦ hom_I(D, E(-, j))` as a covariant complex over `J`.
fn hom_leg(d: &CatChainComplex, e: &BiFunctorComplex) -> Result<(CatChainComplex, Vec<HomTotal>)> {
    let coeff = &e.coeff;
    let totals: Vec<HomTotal> = (0..coeff.num_objects()).map(|j| hom_total(d, &e.index_leg(j))).collect::<Result<_>>()?;
    if totals[0].complex.is_empty() {
        return Ok((CatChainComplex { base: coeff.clone(), variance: Variance::Covariant, lo: 0, modules: Vec::new(), differentials: Vec::new() }, totals));
    }
    let lo = totals[0].complex.lo();
    let mut modules = Vec::new();
    for m in totals[0].complex.degrees() {
        let values: Vec<_> = totals.iter().map(|t| t.complex.group(m)).collect();
        let mut action = Vec::with_capacity(coeff.num_morphisms());
        for beta in 0..coeff.num_morphisms() {
            let (j0, j1) = (coeff.dom(beta), coeff.cod(beta));
            let mut amb = IntMatrix::zeros(totals[j1].dims[(m - lo) as usize], totals[j0].dims[(m - lo) as usize]);
            for (b0, b1) in totals[j0].blocks_at(m).iter().zip(totals[j1].blocks_at(m)) {
                let ids = identities(d.module(b0.k).expect("block exists"));
                let alpha: Vec<&IntMatrix> = ids.iter().collect();
                let em = e.coeff_map(b0.k + m, beta).expect("block exists");
                let bm: Vec<&IntMatrix> = em.components.iter().map(|h| h.matrix()).collect();
                super::total::place(&mut amb, b1.offset, b0.offset, &hom_map_ambient(&b0.layout, &b1.layout, &alpha, &bm), &BigInt::from(1));
            }
            action.push(AbHom::from_ambient(&values[j0], &values[j1], &amb)?);
        }
        modules.push(CatModule { base: coeff.clone(), variance: Variance::Covariant, values, action, marker: None });
    }
    let differentials = (lo + 1..=totals[0].complex.hi())
        .map(|m| ModuleMap { components: totals.iter().map(|t| t.complex.differential(m).expect("in range").clone()).collect() })
        .collect();
    let h = CatChainComplex::new(coeff.clone(), Variance::Covariant, lo, modules, differentials)?;
    Ok((h, totals))
}

/// `i ↦ C ⊗_J E(i, -)` as a contravariant complex over `I`.
fn tensor_leg(c: &CatChainComplex, e: &BiFunctorComplex) -> Result<(CatChainComplex, Vec<TensorTotal>)> {
    let index = &e.index;
    let totals: Vec<TensorTotal> = (0..index.num_objects()).map(|i| tensor_total(c, &e.coeff_leg(i))).collect::<Result<_>>()?;
    if totals[0].complex.is_empty() {
        return Ok((CatChainComplex { base: index.clone(), variance: Variance::Contravariant, lo: 0, modules: Vec::new(), differentials: Vec::new() }, totals));
    }
    let lo = totals[0].complex.lo();
    let mut modules = Vec::new();
    for n in totals[0].complex.degrees() {
        let values: Vec<_> = totals.iter().map(|t| t.complex.group(n)).collect();
        let mut action = Vec::with_capacity(index.num_morphisms());
        for alpha in 0..index.num_morphisms() {
            let (i0, i1) = (index.dom(alpha), index.cod(alpha));
            let mut amb = IntMatrix::zeros(totals[i0].dims[(n - lo) as usize], totals[i1].dims[(n - lo) as usize]);
            for (b1, b0) in totals[i1].blocks_at(n).iter().zip(totals[i0].blocks_at(n)) {
                let ids = identities(c.module(b1.p).expect("block exists"));
                let f: Vec<&IntMatrix> = ids.iter().collect();
                let em = e.index_map(b1.q, alpha).expect("block exists");
                let g: Vec<&IntMatrix> = em.components.iter().map(|h| h.matrix()).collect();
                super::total::place(&mut amb, b0.offset, b1.offset, &tensor_map_ambient(&b1.layout, &b0.layout, &f, &g), &BigInt::from(1));
            }
            action.push(AbHom::from_ambient(&values[i1], &values[i0], &amb)?);
        }
        modules.push(CatModule { base: index.clone(), variance: Variance::Contravariant, values, action, marker: None });
    }
    let differentials = (lo + 1..=totals[0].complex.hi())
        .map(|n| ModuleMap { components: totals.iter().map(|t| t.complex.differential(n).expect("in range").clone()).collect() })
        .collect();
    let ce = CatChainComplex::new(index.clone(), Variance::Contravariant, lo, modules, differentials)?;
    Ok((ce, totals))
}

/// Builds `t(x ⊗ φ)_k(y) = x ⊗ φ_k(y)` between the two total complexes and
/// checks that it commutes with the differentials.
pub fn comparison_map_t(c: &CatChainComplex, d: &CatChainComplex, e: &BiFunctorComplex) -> Result<ComparisonMap> {
    if c.base != e.coeff || c.variance != Variance::Contravariant {
        return Err(Error::BaseMismatch("C must be contravariant over the coefficient base of E".into()));
    }
    if d.base != e.index || d.variance != Variance::Contravariant {
        return Err(Error::BaseMismatch("D must be contravariant over the index base of E".into()));
    }
    if !d.is_free() {
        return Err(Error::MarkerMissing("D needs a free marker in every degree".into()));
    }
    comparison_map_any_source(c, d, e)
}

/// [`comparison_map_t`] without the freeness requirement on `D`. The map is
/// still a chain map, but nothing forces it to be a quasi-isomorphism.
pub fn comparison_map_any_source(c: &CatChainComplex, d: &CatChainComplex, e: &BiFunctorComplex) -> Result<ComparisonMap> {
    if c.base != e.coeff || c.variance != Variance::Contravariant || d.base != e.index || d.variance != Variance::Contravariant {
        return Err(Error::BaseMismatch("C and D must be contravariant over the two bases of E".into()));
    }
    let (h, h_totals) = hom_leg(d, e)?;
    let src = tensor_total(c, &h)?;
    let (ce, ce_totals) = tensor_leg(c, e)?;
    let tgt = hom_total(d, &ce)?;
    let nobj_i = e.index.num_objects();

    let mut components = std::collections::BTreeMap::new();
    for n in src.complex.degrees() {
        let si = (n - src.complex.lo()) as usize;
        let ti = n - tgt.complex.lo();
        let tdim = if ti >= 0 && (ti as usize) < tgt.dims.len() { tgt.dims[ti as usize] } else { 0 };
        let mut amb = IntMatrix::zeros(tdim, src.dims[si]);
        for sb in src.blocks_at(n) {
            let (p, m) = (sb.p, sb.q);
            for j in 0..sb.layout.left.len() {
                let hj = h.module(m).expect("block exists").values[j].clone();
                for b in 0..sb.layout.right[j] {
                    let mut unit = vec![BigInt::zero(); hj.ngens()];
                    unit[b] = BigInt::from(1);
                    let phi = hj.lift(&unit)?;
                    for hb in h_totals[j].blocks_at(m) {
                        let k = hb.k;
                        let tb = tgt.blocks_at(n).iter().find(|t| t.k == k).ok_or_else(|| {
                            Error::ChainComplex(format!("no target block for degree {n} and source degree {k}"))
                        })?;
                        for i in 0..nobj_i {
                            let ce_group = ce.module(k + n).expect("block exists").values[i].clone();
                            let cb = ce_totals[i].block(k + n, p).expect("block exists");
                            for a in 0..sb.layout.left[j] {
                                let col = sb.offset + sb.layout.index(j, a, b);
                                for l in 0..hb.layout.cols[i] {
                                    let mut v = vec![BigInt::zero(); ce_totals[i].dims[(k + n - ce.lo) as usize]];
                                    let mut any = false;
                                    for s in 0..hb.layout.rows[i] {
                                        let x = &phi[hb.offset + hb.layout.index(i, s, l)];
                                        if !x.is_zero() {
                                            v[cb.offset + cb.layout.index(j, a, s)] += x;
                                            any = true;
                                        }
                                    }
                                    if !any {
                                        continue;
                                    }
                                    let y = ce_group.to_canonical(&v)?;
                                    for (r, yr) in y.iter().enumerate() {
                                        if !yr.is_zero() {
                                            amb.add_to(tb.offset + tb.layout.index(i, r, l), col, yr);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        components.insert(n, AbHom::from_ambient(&src.complex.group(n), &tgt.complex.group(n), &amb)?);
    }
    let map = ChainMap { components };
    check_chain_map(&src.complex, &tgt.complex, &map)?;
    Ok(ComparisonMap { source: src.complex, target: tgt.complex, map })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catmod::free_module;
    use crate::chainplex::BiModule;
    use crate::exact_abelian::FpAbGroup;
    use crate::fincat::{orbit_category, FinGroup, SubgroupFamily};

    #[test]
    fn trivial_index_and_unit_source_give_an_isomorphism() {
        let g = Arc::new(FinGroup::cyclic(2));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let j = or.cat.clone();
        let i = Arc::new(FinGroup::trivial().as_category());
        let c = CatChainComplex::concentrated(0, free_module(&j, Variance::Contravariant, &[0, 1]));
        let d = CatChainComplex::concentrated(0, free_module(&i, Variance::Contravariant, &[0]));
        let n = CatModule::constant(j.clone(), Variance::Covariant, &FpAbGroup::cyclic(4));
        let e = BiFunctorComplex::concentrated(i.clone(), j, 0, BiModule::constant_in_index(&i, &n)).unwrap();
        let t = comparison_map_t(&c, &d, &e).unwrap();
        assert!(t.is_degreewise_iso().unwrap());
        assert_eq!(t.source.group(0), FpAbGroup::from_orders(&[BigInt::from(4), BigInt::from(4)]));
        assert!(t.on_homology(0).unwrap().is_isomorphism().unwrap());
    }

    #[test]
    fn non_free_source_is_rejected() {
        let i = Arc::new(FinGroup::trivial().as_category());
        let c = CatChainComplex::concentrated(0, CatModule::constant(i.clone(), Variance::Contravariant, &FpAbGroup::free(1)));
        let d = CatChainComplex::concentrated(0, CatModule::constant(i.clone(), Variance::Contravariant, &FpAbGroup::free(1)));
        let n = CatModule::constant(i.clone(), Variance::Covariant, &FpAbGroup::free(1));
        let e = BiFunctorComplex::concentrated(i.clone(), i.clone(), 0, BiModule::constant_in_index(&i, &n)).unwrap();
        assert!(matches!(comparison_map_t(&c, &d, &e), Err(Error::MarkerMissing(_))));
    }
}

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::catcomplex::CatChainComplex;
use super::complex::{check_chain_map, sign_big, ChainMap, PlainChainComplex};
use crate::catmod::{hom_map_ambient, hom_presentation, tensor_map_ambient, ModuleMap, tensor_relations, HomLayout, TensorLayout, Variance};
use crate::error::{Error, Result};
use crate::exact_abelian::{subquotient, AbHom, IntMatrix};

/// Summand `C_p ⊗ E_q` of one total degree, placed at `offset`.
#[derive(Clone, Debug)]
pub struct TensorBlock {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    pub layout: TensorLayout,
}

/// Total tensor complex with the block structure of each degree.
#[derive(Clone, Debug)]
pub struct TensorTotal {
    pub complex: PlainChainComplex,
    /// Indexed like the degrees of `complex`.
    pub blocks: Vec<Vec<TensorBlock>>,
    pub dims: Vec<usize>,
}

impl TensorTotal {
    pub fn blocks_at(&self, n: i64) -> &[TensorBlock] {
        if n < self.complex.lo() || n > self.complex.hi() {
            &[]
        } else {
            &self.blocks[(n - self.complex.lo()) as usize]
        }
    }

    pub fn block(&self, n: i64, p: i64) -> Option<&TensorBlock> {
        self.blocks_at(n).iter().find(|b| b.p == p)
    }
}

pub(crate) fn place(out: &mut IntMatrix, r0: usize, c0: usize, m: &IntMatrix, scale: &BigInt) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if v.sign() != num_bigint::Sign::NoSign {
                out.add_to(r0 + i, c0 + j, &(v * scale));
            }
        }
    }
}

/// `C ⊗_Z𝒾 E` with `d(x ⊗ y) = dx ⊗ y + (-1)^p x ⊗ dy`.
pub fn tensor_total(c: &CatChainComplex, e: &CatChainComplex) -> Result<TensorTotal> {
    if c.base != e.base || c.variance != Variance::Contravariant || e.variance != Variance::Covariant {
        return Err(Error::BaseMismatch("tensor complex needs a contravariant and a covariant complex over one base".into()));
    }
    if c.modules.is_empty() || e.modules.is_empty() {
        return Ok(TensorTotal { complex: PlainChainComplex::zero(), blocks: Vec::new(), dims: Vec::new() });
    }
    let lo = c.lo + e.lo;
    let hi = c.hi() + e.hi();
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for n in lo..=hi {
        let mut bl = Vec::new();
        let mut rel_blocks = Vec::new();
        let mut off = 0;
        for p in c.degrees() {
            let q = n - p;
            let (Some(cm), Some(em)) = (c.module(p), e.module(q)) else { continue };
            let (layout, rels) = tensor_relations(cm, em)?;
            let dim = layout.dim;
            bl.push(TensorBlock { p, q, offset: off, layout });
            rel_blocks.push(rels);
            off += dim;
        }
        let rels = IntMatrix::block_diag(&rel_blocks);
        groups.push(subquotient(off, None, &rels)?);
        blocks.push(bl);
        dims.push(off);
    }
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let (si, ti) = ((n - lo) as usize, (n - 1 - lo) as usize);
        let mut amb = IntMatrix::zeros(dims[ti], dims[si]);
        for b in &blocks[si] {
            // dx ⊗ y
            if let (Some(dc), Some(t)) = (c.differential(b.p), blocks[ti].iter().find(|t| t.p == b.p - 1)) {
                let em = e.module(b.q).expect("block exists");
                let f: Vec<&IntMatrix> = dc.components.iter().map(|h| h.matrix()).collect();
                let ids: Vec<IntMatrix> = em.values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
                let g: Vec<&IntMatrix> = ids.iter().collect();
                place(&mut amb, t.offset, b.offset, &tensor_map_ambient(&b.layout, &t.layout, &f, &g), &BigInt::from(1));
            }
            // (-1)^p x ⊗ dy
            if let (Some(de), Some(t)) = (e.differential(b.q), blocks[ti].iter().find(|t| t.p == b.p)) {
                let cm = c.module(b.p).expect("block exists");
                let ids: Vec<IntMatrix> = cm.values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
                let f: Vec<&IntMatrix> = ids.iter().collect();
                let g: Vec<&IntMatrix> = de.components.iter().map(|h| h.matrix()).collect();
                place(&mut amb, t.offset, b.offset, &tensor_map_ambient(&b.layout, &t.layout, &f, &g), &sign_big(b.p));
            }
        }
        diffs.push(AbHom::from_ambient(&groups[si], &groups[ti], &amb)?);
    }
    let complex = PlainChainComplex::new(lo, groups, diffs)?;
    Ok(TensorTotal { complex, blocks, dims })
}

/// The chain map `C ⊗ E -> C' ⊗ E` induced by a degreewise map
/// `f_p : C_p -> C'_p` (missing degrees are zero).
pub fn tensor_total_map(
    c: &CatChainComplex,
    c2: &CatChainComplex,
    e: &CatChainComplex,
    f: &[(i64, ModuleMap)],
) -> Result<(TensorTotal, TensorTotal, ChainMap)> {
    let src = tensor_total(c, e)?;
    let tgt = tensor_total(c2, e)?;
    let mut components = BTreeMap::new();
    for n in src.complex.degrees() {
        let si = (n - src.complex.lo()) as usize;
        let tdim = if tgt.complex.degrees().contains(&n) { tgt.dims[(n - tgt.complex.lo()) as usize] } else { 0 };
        let mut amb = IntMatrix::zeros(tdim, src.dims[si]);
        for b in &src.blocks[si] {
            let (Some((_, fp)), Some(t)) = (f.iter().find(|(p, _)| *p == b.p), tgt.block(n, b.p)) else { continue };
            let ids: Vec<IntMatrix> = e.module(b.q).expect("block exists").values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
            let g: Vec<&IntMatrix> = ids.iter().collect();
            let fm: Vec<&IntMatrix> = fp.components.iter().map(|h| h.matrix()).collect();
            place(&mut amb, t.offset, b.offset, &tensor_map_ambient(&b.layout, &t.layout, &fm, &g), &BigInt::from(1));
        }
        components.insert(n, AbHom::from_ambient(&src.complex.group(n), &tgt.complex.group(n), &amb)?);
    }
    let map = ChainMap { components };
    check_chain_map(&src.complex, &tgt.complex, &map)?;
    Ok((src, tgt, map))
}

pub fn tensor_complex_over_cat(c: &CatChainComplex, e: &CatChainComplex) -> Result<PlainChainComplex> {
    Ok(tensor_total(c, e)?.complex)
}

/// Summand `hom(D_k, E_{k+m})` of one hom degree `m`.
#[derive(Clone, Debug)]
pub struct HomBlock {
    pub k: i64,
    pub offset: usize,
    pub layout: HomLayout,
}

#[derive(Clone, Debug)]
pub struct HomTotal {
    pub complex: PlainChainComplex,
    pub blocks: Vec<Vec<HomBlock>>,
    pub dims: Vec<usize>,
}

impl HomTotal {
    pub fn blocks_at(&self, m: i64) -> &[HomBlock] {
        if m < self.complex.lo() || m > self.complex.hi() {
            &[]
        } else {
            &self.blocks[(m - self.complex.lo()) as usize]
        }
    }
}

/// `hom_Z𝒾(D, E)` with `(dφ)_k = d_E ∘ φ_k - (-1)^m φ_{k-1} ∘ d_D`.
///
/// `D` need not be free; each block is the equalizer computed by
/// [`hom_presentation`].
pub fn hom_total(d: &CatChainComplex, e: &CatChainComplex) -> Result<HomTotal> {
    if d.base != e.base || d.variance != e.variance {
        return Err(Error::BaseMismatch("hom complex needs complexes over one base with one variance".into()));
    }
    if d.modules.is_empty() || e.modules.is_empty() {
        return Ok(HomTotal { complex: PlainChainComplex::zero(), blocks: Vec::new(), dims: Vec::new() });
    }
    let lo = e.lo - d.hi();
    let hi = e.hi() - d.lo;
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for m in lo..=hi {
        let mut bl = Vec::new();
        let mut gen_blocks = Vec::new();
        let mut rel_blocks = Vec::new();
        let mut off = 0;
        for k in d.degrees() {
            let (Some(dm), Some(em)) = (d.module(k), e.module(k + m)) else { continue };
            let (layout, gens, rels) = hom_presentation(dm, em)?;
            let dim = layout.dim;
            bl.push(HomBlock { k, offset: off, layout });
            gen_blocks.push(gens);
            rel_blocks.push(rels);
            off += dim;
        }
        let gens = IntMatrix::block_diag(&gen_blocks);
        let rels = IntMatrix::block_diag(&rel_blocks);
        groups.push(subquotient(off, Some(&gens), &rels)?);
        blocks.push(bl);
        dims.push(off);
    }
    let mut diffs = Vec::new();
    for m in lo + 1..=hi {
        let (si, ti) = ((m - lo) as usize, (m - 1 - lo) as usize);
        let mut amb = IntMatrix::zeros(dims[ti], dims[si]);
        for b in &blocks[si] {
            let dm = d.module(b.k).expect("block exists");
            // d_E ∘ φ_k lands in block k of degree m - 1.
            if let (Some(de), Some(t)) = (e.differential(b.k + m), blocks[ti].iter().find(|t| t.k == b.k)) {
                let ids: Vec<IntMatrix> = dm.values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
                let alpha: Vec<&IntMatrix> = ids.iter().collect();
                let beta: Vec<&IntMatrix> = de.components.iter().map(|h| h.matrix()).collect();
                place(&mut amb, t.offset, b.offset, &hom_map_ambient(&b.layout, &t.layout, &alpha, &beta), &BigInt::from(1));
            }
            // -(-1)^m φ_k ∘ d_D lands in block k + 1 of degree m - 1.
            if let (Some(dd), Some(t)) = (d.differential(b.k + 1), blocks[ti].iter().find(|t| t.k == b.k + 1)) {
                let em = e.module(b.k + m).expect("block exists");
                let ids: Vec<IntMatrix> = em.values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
                let beta: Vec<&IntMatrix> = ids.iter().collect();
                let alpha: Vec<&IntMatrix> = dd.components.iter().map(|h| h.matrix()).collect();
                place(&mut amb, t.offset, b.offset, &hom_map_ambient(&b.layout, &t.layout, &alpha, &beta), &-sign_big(m));
            }
        }
        diffs.push(AbHom::from_ambient(&groups[si], &groups[ti], &amb)?);
    }
    let complex = PlainChainComplex::new(lo, groups, diffs)?;
    Ok(HomTotal { complex, blocks, dims })
}

pub fn hom_complex_over_cat(d: &CatChainComplex, e: &CatChainComplex) -> Result<PlainChainComplex> {
    Ok(hom_total(d, e)?.complex)
}

/// The chain map `hom(D, E) -> hom(D, E')` induced by a degreewise map
/// `f_q : E_q -> E'_q` (missing degrees are zero).
pub fn hom_total_map(d: &CatChainComplex, e: &CatChainComplex, e2: &CatChainComplex, f: &[(i64, ModuleMap)]) -> Result<(HomTotal, HomTotal, ChainMap)> {
    let src = hom_total(d, e)?;
    let tgt = hom_total(d, e2)?;
    let mut components = BTreeMap::new();
    for m in src.complex.degrees() {
        let si = (m - src.complex.lo()) as usize;
        let tdim = if tgt.complex.degrees().contains(&m) { tgt.dims[(m - tgt.complex.lo()) as usize] } else { 0 };
        let mut amb = IntMatrix::zeros(tdim, src.dims[si]);
        for b in &src.blocks[si] {
            let (Some((_, fq)), Some(t)) = (f.iter().find(|(q, _)| *q == b.k + m), tgt.blocks_at(m).iter().find(|t| t.k == b.k)) else { continue };
            let ids: Vec<IntMatrix> = d.module(b.k).expect("block exists").values.iter().map(|v| IntMatrix::identity(v.ngens())).collect();
            let alpha: Vec<&IntMatrix> = ids.iter().collect();
            let beta: Vec<&IntMatrix> = fq.components.iter().map(|h| h.matrix()).collect();
            place(&mut amb, t.offset, b.offset, &hom_map_ambient(&b.layout, &t.layout, &alpha, &beta), &BigInt::from(1));
        }
        components.insert(m, AbHom::from_ambient(&src.complex.group(m), &tgt.complex.group(m), &amb)?);
    }
    let map = ChainMap { components };
    check_chain_map(&src.complex, &tgt.complex, &map)?;
    Ok((src, tgt, map))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catmod::{free_module, yoneda_map, CatModule};
    use crate::exact_abelian::FpAbGroup;
    use crate::fincat::{standard_category, FinGroup, StandardKind};

    fn trivial() -> Arc<crate::fincat::FinCategory> {
        Arc::new(FinGroup::trivial().as_category())
    }

    fn plain_as_cat(base: &Arc<crate::fincat::FinCategory>, v: Variance, c: &PlainChainComplex) -> CatChainComplex {
        let modules: Vec<CatModule> = c.groups().iter().map(|g| CatModule::constant(base.clone(), v, g)).collect();
        let diffs = (c.lo() + 1..=c.hi()).map(|p| crate::catmod::ModuleMap { components: vec![c.differential(p).unwrap().clone()] }).collect();
        CatChainComplex::new(base.clone(), v, c.lo(), modules, diffs).unwrap()
    }

    #[test]
    fn tensor_of_complexes_over_a_point() {
        // (Z --2--> Z) ⊗ (Z --4--> Z): homology Z/gcd in degree 0, Tor in degree 1.
        let z = FpAbGroup::free(1);
        let two = PlainChainComplex::new(0, vec![z.clone(), z.clone()], vec![AbHom::scalar(&z, &BigInt::from(2))]).unwrap();
        let four = PlainChainComplex::new(0, vec![z.clone(), z.clone()], vec![AbHom::scalar(&z, &BigInt::from(4))]).unwrap();
        let t = trivial();
        let tot = tensor_complex_over_cat(&plain_as_cat(&t, Variance::Contravariant, &two), &plain_as_cat(&t, Variance::Covariant, &four)).unwrap();
        assert_eq!(tot.homology(0).unwrap(), FpAbGroup::cyclic(2));
        assert_eq!(tot.homology(1).unwrap(), FpAbGroup::cyclic(2));
        assert!(tot.homology(2).unwrap().is_trivial());
        assert_eq!(tot.euler_characteristic(), tot.homology_euler_characteristic().unwrap());
    }

    #[test]
    fn hom_from_a_representable_is_evaluation() {
        let c = Arc::new(standard_category(StandardKind::N, 2));
        let d = CatChainComplex::concentrated(0, free_module(&c, Variance::Contravariant, &[1]));
        let f0 = free_module(&c, Variance::Contravariant, &[0, 1]);
        let f1 = free_module(&c, Variance::Contravariant, &[0]);
        let dd = yoneda_map(&f1, &f0, &[vec![BigInt::from(-1), BigInt::from(1)]]).unwrap();
        let e = CatChainComplex::new(c.clone(), Variance::Contravariant, 0, vec![f0, f1], vec![dd]).unwrap();
        let h = hom_complex_over_cat(&d, &e).unwrap();
        let ev = e.evaluate(1);
        for p in 0..=1 {
            assert_eq!(h.group(p), ev.group(p));
            assert_eq!(h.homology(p).unwrap(), ev.homology(p).unwrap());
        }
    }
}

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::FinCategory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn opposite(self) -> Self {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }

    /// `(source, target)` objects of the action of `f`.
    #[inline]
    pub fn ends(self, base: &FinCategory, f: usize) -> (usize, usize) {
        match self {
            Variance::Covariant => (base.dom(f), base.cod(f)),
            Variance::Contravariant => (base.cod(f), base.dom(f)),
        }
    }
}

/// Marks a module as free on generators sitting at the listed objects.
///
/// The value at `d` has basis the pairs `(i, f)` with `f` in `mor(d, c_i)`
/// (contravariant) or `mor(c_i, d)` (covariant), ordered by generator and
/// then by the position of `f` in its hom-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMarker {
    pub generators: Vec<usize>,
}

impl FreeMarker {
    fn hom<'a>(&self, base: &'a FinCategory, variance: Variance, d: usize, i: usize) -> &'a [usize] {
        match variance {
            Variance::Contravariant => base.hom(d, self.generators[i]),
            Variance::Covariant => base.hom(self.generators[i], d),
        }
    }

    /// Basis of the value at `d` as `(generator, morphism)` pairs.
    pub fn basis(&self, base: &FinCategory, variance: Variance, d: usize) -> Vec<(usize, usize)> {
        (0..self.generators.len())
            .flat_map(|i| self.hom(base, variance, d, i).iter().map(move |&f| (i, f)))
            .collect()
    }

    /// Index of the basis element `(i, f)` in the value at `d`.
    pub fn index(&self, base: &FinCategory, variance: Variance, d: usize, i: usize, f: usize) -> usize {
        let off: usize = (0..i).map(|k| self.hom(base, variance, d, k).len()).sum();
        off + base.position(f)
    }

    pub fn rank_at(&self, base: &FinCategory, variance: Variance, d: usize) -> usize {
        (0..self.generators.len()).map(|i| self.hom(base, variance, d, i).len()).sum()
    }
}

/// A functor from a finite category (or its opposite) to finitely
/// generated abelian groups.
///
/// `action[f]` goes `M(dom f) -> M(cod f)` for covariant modules and
/// `M(cod f) -> M(dom f)` for contravariant ones.
#[derive(Clone, Debug)]
pub struct CatModule {
    pub base: Arc<FinCategory>,
    pub variance: Variance,
    pub values: Vec<FpAbGroup>,
    pub action: Vec<AbHom>,
    pub marker: Option<FreeMarker>,
}

impl PartialEq for CatModule {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base && self.variance == o.variance && self.values == o.values && self.action == o.action
    }
}

impl CatModule {
    /// Validates functoriality and builds the module.
    pub fn new(base: Arc<FinCategory>, variance: Variance, values: Vec<FpAbGroup>, action: Vec<AbHom>) -> Result<Self> {
        let m = CatModule { base, variance, values, action, marker: None };
        validate_module(&m)?;
        Ok(m)
    }

    /// Builds the module from action matrices on canonical coordinates.
    pub fn from_matrices(base: Arc<FinCategory>, variance: Variance, values: Vec<FpAbGroup>, matrices: Vec<IntMatrix>) -> Result<Self> {
        if matrices.len() != base.num_morphisms() || values.len() != base.num_objects() {
            return Err(Error::Module(format!(
                "{} values and {} action matrices for a category with {} objects and {} morphisms",
                values.len(),
                matrices.len(),
                base.num_objects(),
                base.num_morphisms()
            )));
        }
        let mut action = Vec::with_capacity(matrices.len());
        for (f, m) in matrices.into_iter().enumerate() {
            let (s, t) = variance.ends(&base, f);
            let h = AbHom::new(values[s].clone(), values[t].clone(), m)
                .map_err(|e| Error::Module(format!("action of morphism {} ({}): {e}", f, base.morphism_label(f))))?;
            action.push(h);
        }
        Self::new(base, variance, values, action)
    }

    pub fn constant(base: Arc<FinCategory>, variance: Variance, group: &FpAbGroup) -> Self {
        let g = group.bare();
        let values = vec![g.clone(); base.num_objects()];
        let action = vec![AbHom::identity(&g); base.num_morphisms()];
        CatModule { base, variance, values, action, marker: None }
    }

    pub fn zero(base: Arc<FinCategory>, variance: Variance) -> Self {
        Self::constant(base, variance, &FpAbGroup::trivial())
    }

    /// Value at `o`.
    pub fn at(&self, o: usize) -> &FpAbGroup {
        &self.values[o]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_trivial())
    }

    /// Strips witnesses from values and actions.
    pub fn bare(&self) -> CatModule {
        let values: Vec<FpAbGroup> = self.values.iter().map(|v| v.bare()).collect();
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(f, a)| {
                let (s, t) = self.variance.ends(&self.base, f);
                AbHom::new(values[s].clone(), values[t].clone(), a.matrix().clone()).expect("same matrix, same groups")
            })
            .collect();
        CatModule { base: self.base.clone(), variance: self.variance, values, action, marker: self.marker.clone() }
    }
}

/// Checks shapes, identities and composition; errors name the first failure.
pub fn validate_module(m: &CatModule) -> Result<()> {
    let base = &m.base;
    if m.values.len() != base.num_objects() || m.action.len() != base.num_morphisms() {
        return Err(Error::Module("value or action count does not match the base category".into()));
    }
    for f in 0..base.num_morphisms() {
        let (s, t) = m.variance.ends(base, f);
        let a = &m.action[f];
        if a.source() != &m.values[s] || a.target() != &m.values[t] {
            return Err(Error::Module(format!("action of morphism {} has the wrong endpoints", base.morphism_label(f))));
        }
    }
    for o in 0..base.num_objects() {
        if m.action[base.identity(o)].matrix() != &IntMatrix::identity(m.values[o].ngens()) {
            return Err(Error::Module(format!("identity of object {} acts nontrivially", base.object_label(o))));
        }
    }
    for g in 0..base.num_morphisms() {
        for f in 0..base.num_morphisms() {
            let Some(h) = base.try_compose(g, f) else { continue };
            let composite = match m.variance {
                Variance::Covariant => m.action[g].compose(&m.action[f])?,
                Variance::Contravariant => m.action[f].compose(&m.action[g])?,
            };
            if composite.matrix() != m.action[h].matrix() {
                return Err(Error::Module(format!(
                    "composition fails on ({}, {})",
                    base.morphism_label(g),
                    base.morphism_label(f)
                )));
            }
        }
    }
    Ok(())
}

/// The free module on generators at the listed objects.
pub fn free_module(base: &Arc<FinCategory>, variance: Variance, generators: &[usize]) -> CatModule {
    let marker = FreeMarker { generators: generators.to_vec() };
    let values: Vec<FpAbGroup> =
        (0..base.num_objects()).map(|d| FpAbGroup::free(marker.rank_at(base, variance, d))).collect();
    let mut action = Vec::with_capacity(base.num_morphisms());
    for phi in 0..base.num_morphisms() {
        let (s, t) = variance.ends(base, phi);
        let mut m = IntMatrix::zeros(values[t].ngens(), values[s].ngens());
        for (col, (i, f)) in marker.basis(base, variance, s).into_iter().enumerate() {
            let g = match variance {
                Variance::Contravariant => base.compose(f, phi),
                Variance::Covariant => base.compose(phi, f),
            };
            m.set(marker.index(base, variance, t, i, g), col, BigInt::one());
        }
        action.push(AbHom::new(values[s].clone(), values[t].clone(), m).expect("permutation-type matrix on free groups"));
    }
    CatModule { base: base.clone(), variance, values, action, marker: Some(marker) }
}

/// A natural transformation, one homomorphism per object.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub components: Vec<AbHom>,
}

impl ModuleMap {
    pub fn identity(m: &CatModule) -> Self {
        ModuleMap { components: m.values.iter().map(AbHom::identity).collect() }
    }

    pub fn zero(m: &CatModule, n: &CatModule) -> Self {
        ModuleMap { components: m.values.iter().zip(&n.values).map(|(a, b)| AbHom::zero(a, b)).collect() }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.compose(b)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleMap { components })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

/// Checks that `f` is a natural transformation `m -> n`.
pub fn validate_map(m: &CatModule, n: &CatModule, f: &ModuleMap) -> Result<()> {
    if m.base != n.base || m.variance != n.variance {
        return Err(Error::BaseMismatch("module map between modules over different bases".into()));
    }
    if f.components.len() != m.values.len() {
        return Err(Error::Module("module map has the wrong number of components".into()));
    }
    for (o, c) in f.components.iter().enumerate() {
        if c.source() != &m.values[o] || c.target() != &n.values[o] {
            return Err(Error::Module(format!("component at {} has the wrong endpoints", m.base.object_label(o))));
        }
    }
    for phi in 0..m.base.num_morphisms() {
        let (s, t) = m.variance.ends(&m.base, phi);
        let left = n.action[phi].compose(&f.components[s])?;
        let right = f.components[t].compose(&m.action[phi])?;
        if left.matrix() != right.matrix() {
            return Err(Error::Module(format!("naturality fails at morphism {}", m.base.morphism_label(phi))));
        }
    }
    Ok(())
}

/// The map out of a free module sending generator `i` to `images[i]`
/// (canonical coordinates in the value of `target` at the generator's object).
pub fn yoneda_map(free: &CatModule, target: &CatModule, images: &[Vec<BigInt>]) -> Result<ModuleMap> {
    let marker = free.marker.as_ref().ok_or_else(|| Error::MarkerMissing("yoneda_map needs a free source".into()))?;
    if free.base != target.base || free.variance != target.variance {
        return Err(Error::BaseMismatch("yoneda_map between different bases".into()));
    }
    if images.len() != marker.generators.len() {
        return Err(Error::Module(format!("{} images for {} generators", images.len(), marker.generators.len())));
    }
    let base = &free.base;
    let mut components = Vec::with_capacity(base.num_objects());
    for d in 0..base.num_objects() {
        let basis = marker.basis(base, free.variance, d);
        let mut m = IntMatrix::zeros(target.values[d].ngens(), basis.len());
        for (col, (i, f)) in basis.into_iter().enumerate() {
            let v = target.action[f].apply(&images[i])?;
            for (r, x) in v.into_iter().enumerate() {
                m.set(r, col, x);
            }
        }
        components.push(AbHom::new(free.values[d].clone(), target.values[d].clone(), m)?);
    }
    Ok(ModuleMap { components })
}

/// Kernel and cokernel of a module map, with inclusion and projection.
#[derive(Clone, Debug)]
pub struct KernelCokernelModules {
    pub kernel: CatModule,
    pub inclusion: ModuleMap,
    pub cokernel: CatModule,
    pub projection: ModuleMap,
    pub image: CatModule,
}

pub fn map_kernel_cokernel(m: &CatModule, n: &CatModule, f: &ModuleMap) -> Result<KernelCokernelModules> {
    if m.base != n.base || m.variance != n.variance {
        return Err(Error::BaseMismatch("kernel of a map between different bases".into()));
    }
    let base = &m.base;
    let kv = f.components.iter().map(|c| c.kernel()).collect::<Result<Vec<_>>>()?;
    let cv = f.components.iter().map(|c| c.cokernel()).collect::<Result<Vec<_>>>()?;
    let iv = f.components.iter().map(|c| c.image()).collect::<Result<Vec<_>>>()?;
    let mut ka = Vec::new();
    let mut ca = Vec::new();
    let mut ia = Vec::new();
    for phi in 0..base.num_morphisms() {
        let (s, t) = m.variance.ends(base, phi);
        ka.push(AbHom::from_ambient(&kv[s], &kv[t], m.action[phi].matrix())?);
        ca.push(AbHom::from_ambient(&cv[s], &cv[t], n.action[phi].matrix())?);
        ia.push(AbHom::from_ambient(&iv[s], &iv[t], n.action[phi].matrix())?);
    }
    let inclusion = ModuleMap {
        components: (0..base.num_objects())
            .map(|o| AbHom::new(kv[o].clone(), m.values[o].clone(), kv[o].generator_matrix()))
            .collect::<Result<Vec<_>>>()?,
    };
    let projection = ModuleMap {
        components: (0..base.num_objects())
            .map(|o| AbHom::new(n.values[o].clone(), cv[o].clone(), cv[o].to_canonical_columns(&IntMatrix::identity(n.values[o].ngens()))?))
            .collect::<Result<Vec<_>>>()?,
    };
    let kernel = CatModule { base: base.clone(), variance: m.variance, values: kv, action: ka, marker: None };
    let cokernel = CatModule { base: base.clone(), variance: m.variance, values: cv, action: ca, marker: None };
    let image = CatModule { base: base.clone(), variance: m.variance, values: iv, action: ia, marker: None };
    Ok(KernelCokernelModules { kernel, inclusion, cokernel, projection, image })
}

/// Direct sum of modules with its projections and inclusions.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: CatModule,
    pub projections: Vec<ModuleMap>,
    pub inclusions: Vec<ModuleMap>,
}

pub fn direct_sum_modules(base: &Arc<FinCategory>, variance: Variance, parts: &[CatModule]) -> Result<DirectSum> {
    for p in parts {
        if &p.base != base || p.variance != variance {
            return Err(Error::BaseMismatch("direct sum of modules over different bases".into()));
        }
    }
    let nobj = base.num_objects();
    let values: Vec<FpAbGroup> = (0..nobj)
        .map(|o| FpAbGroup::direct_sum(&parts.iter().map(|p| p.values[o].clone()).collect::<Vec<_>>()))
        .collect();
    let mut action = Vec::new();
    for phi in 0..base.num_morphisms() {
        let (s, t) = variance.ends(base, phi);
        let block = IntMatrix::block_diag(&parts.iter().map(|p| p.action[phi].matrix().clone()).collect::<Vec<_>>());
        action.push(AbHom::from_ambient(&values[s], &values[t], &block)?);
    }
    let mut projections = Vec::new();
    let mut inclusions = Vec::new();
    let mut offsets = vec![0usize; nobj];
    for p in parts {
        let mut pc = Vec::new();
        let mut ic = Vec::new();
        for o in 0..nobj {
            let k = p.values[o].ngens();
            let total = values[o].ambient_dim();
            let mut sel = IntMatrix::zeros(k, total);
            for r in 0..k {
                sel.set(r, offsets[o] + r, BigInt::one());
            }
            pc.push(AbHom::new(values[o].clone(), p.values[o].clone(), sel.mul(&values[o].generator_matrix())?)?);
            ic.push(AbHom::new(p.values[o].clone(), values[o].clone(), values[o].to_canonical_columns(&sel.transpose())?)?);
            offsets[o] += k;
        }
        projections.push(ModuleMap { components: pc });
        inclusions.push(ModuleMap { components: ic });
    }
    let sum = CatModule { base: base.clone(), variance, values, action, marker: None };
    Ok(DirectSum { sum, projections, inclusions })
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{orbit_category, FinGroup, SubgroupFamily};

    fn or_z2() -> Arc<FinCategory> {
        let g = Arc::new(FinGroup::cyclic(2));
        orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap().cat
    }

    #[test]
    fn free_contravariant_on_or_z2() {
        let c = or_z2();
        let f = free_module(&c, Variance::Contravariant, &[0]);
        validate_module(&f).unwrap();
        assert_eq!(f.values[0], FpAbGroup::free(2));
        assert_eq!(f.values[1], FpAbGroup::trivial());
        let g = free_module(&c, Variance::Contravariant, &[1]);
        assert_eq!(g.values[0], FpAbGroup::free(1));
        assert_eq!(g.values[1], FpAbGroup::free(1));
    }

    #[test]
    fn broken_action_rejected() {
        let c = or_z2();
        let mut m = CatModule::constant(c.clone(), Variance::Covariant, &FpAbGroup::free(1));
        // The swap automorphism of G/1 must square to the identity.
        let swap = c.hom(0, 0).iter().copied().find(|&f| !c.is_identity(f)).unwrap();
        m.action[swap] = AbHom::scalar(&FpAbGroup::free(1), &BigInt::from(2));
        assert!(validate_module(&m).is_err());
    }

    #[test]
    fn kernel_and_cokernel_of_times_two() {
        let c = or_z2();
        let m = CatModule::constant(c.clone(), Variance::Covariant, &FpAbGroup::free(1));
        let f = ModuleMap { components: m.values.iter().map(|v| AbHom::scalar(v, &BigInt::from(2))).collect() };
        validate_map(&m, &m, &f).unwrap();
        let kc = map_kernel_cokernel(&m, &m, &f).unwrap();
        assert!(kc.kernel.is_zero());
        assert!(kc.cokernel.values.iter().all(|v| *v == FpAbGroup::cyclic(2)));
        validate_module(&kc.cokernel).unwrap();
    }
}

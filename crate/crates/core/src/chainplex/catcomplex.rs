use std::sync::Arc;

use super::complex::PlainChainComplex;
use crate::catmod::{validate_map, validate_module, CatModule, ModuleMap, Variance};
use crate::error::{Error, Result};
use crate::exact_abelian::{AbHom, FpAbGroup, IntMatrix};
use crate::fincat::FinCategory;

/// A bounded chain complex of modules over a finite category;
/// `differentials[k]` maps degree `lo + k + 1` to degree `lo + k`.
#[derive(Clone, Debug)]
pub struct CatChainComplex {
    pub base: Arc<FinCategory>,
    pub variance: Variance,
    pub lo: i64,
    pub modules: Vec<CatModule>,
    pub differentials: Vec<ModuleMap>,
}

impl CatChainComplex {
    pub fn new(
        base: Arc<FinCategory>,
        variance: Variance,
        lo: i64,
        modules: Vec<CatModule>,
        differentials: Vec<ModuleMap>,
    ) -> Result<Self> {
        let c = CatChainComplex { base, variance, lo, modules, differentials };
        c.validate()?;
        Ok(c)
    }

    pub fn concentrated(degree: i64, m: CatModule) -> Self {
        CatChainComplex { base: m.base.clone(), variance: m.variance, lo: degree, modules: vec![m], differentials: Vec::new() }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn module(&self, p: i64) -> Option<&CatModule> {
        if p < self.lo || p > self.hi() {
            None
        } else {
            Some(&self.modules[(p - self.lo) as usize])
        }
    }

    /// `d_p : C_p -> C_{p-1}`
    pub fn differential(&self, p: i64) -> Option<&ModuleMap> {
        if p <= self.lo || p > self.hi() {
            None
        } else {
            Some(&self.differentials[(p - self.lo - 1) as usize])
        }
    }

    /// True when every degree carries a free marker.
    pub fn is_free(&self) -> bool {
        self.modules.iter().all(|m| m.marker.is_some())
    }

    /// Functoriality, naturality of differentials and `d ∘ d = 0`.
    pub fn validate(&self) -> Result<()> {
        if self.differentials.len() + 1 != self.modules.len().max(1) {
            return Err(Error::ChainComplex("differential count does not match the degree range".into()));
        }
        for m in &self.modules {
            if m.base != self.base || m.variance != self.variance {
                return Err(Error::BaseMismatch("chain complex mixes bases or variances".into()));
            }
            validate_module(m)?;
        }
        for (k, d) in self.differentials.iter().enumerate() {
            validate_map(&self.modules[k + 1], &self.modules[k], d)?;
        }
        for k in 1..self.differentials.len() {
            if !self.differentials[k - 1].compose(&self.differentials[k])?.is_zero() {
                return Err(Error::ChainComplex(format!("d∘d is nonzero out of degree {}", self.lo + k as i64 + 1)));
            }
        }
        Ok(())
    }

    /// The plain complex at one object.
    pub fn evaluate(&self, c: usize) -> PlainChainComplex {
        let groups = self.modules.iter().map(|m| m.values[c].clone()).collect();
        let diffs = self.differentials.iter().map(|d| d.components[c].clone()).collect();
        PlainChainComplex::new(self.lo, groups, diffs).expect("evaluation of a valid complex")
    }
}

/// One degree of a bifunctor `I^op × J -> Ab`: values `[i][j]`, the
/// contravariant `I`-leg `[alpha][j] : E(cod alpha, j) -> E(dom alpha, j)` and
/// the covariant `J`-leg `[i][beta] : E(i, dom beta) -> E(i, cod beta)`.
#[derive(Clone, Debug)]
pub struct BiModule {
    pub values: Vec<Vec<FpAbGroup>>,
    pub index_action: Vec<Vec<AbHom>>,
    pub coeff_action: Vec<Vec<AbHom>>,
}

impl BiModule {
    /// `E(i, j) = N(j)` with the `I`-leg acting by identities.
    pub fn constant_in_index(index: &FinCategory, n: &CatModule) -> Self {
        let values = vec![n.values.clone(); index.num_objects()];
        let index_action = (0..index.num_morphisms()).map(|_| n.values.iter().map(AbHom::identity).collect()).collect();
        let coeff_action = vec![n.action.clone(); index.num_objects()];
        BiModule { values, index_action, coeff_action }
    }

    /// `E(i, j) = M(i) ⊗ N(j)` for modules with torsion-free values.
    pub fn outer(m: &CatModule, n: &CatModule) -> Result<Self> {
        if m.variance != Variance::Contravariant || n.variance != Variance::Covariant {
            return Err(Error::BaseMismatch("outer product needs a contravariant index factor and a covariant coefficient factor".into()));
        }
        if m.values.iter().chain(&n.values).any(|g| !g.torsion().is_empty()) {
            return Err(Error::Module("outer product is only built for torsion-free values".into()));
        }
        let values: Vec<Vec<FpAbGroup>> =
            m.values.iter().map(|a| n.values.iter().map(|b| FpAbGroup::free(a.rank() * b.rank())).collect()).collect();
        let index_action = m
            .action
            .iter()
            .enumerate()
            .map(|(alpha, h)| {
                let (i0, i1) = (m.base.dom(alpha), m.base.cod(alpha));
                (0..n.values.len())
                    .map(|j| {
                        let mat = h.matrix().kron(&IntMatrix::identity(n.values[j].rank()));
                        AbHom::new(values[i1][j].clone(), values[i0][j].clone(), mat)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let coeff_action = (0..m.values.len())
            .map(|i| {
                n.action
                    .iter()
                    .enumerate()
                    .map(|(beta, h)| {
                        let (j0, j1) = (n.base.dom(beta), n.base.cod(beta));
                        let mat = IntMatrix::identity(m.values[i].rank()).kron(h.matrix());
                        AbHom::new(values[i][j0].clone(), values[i][j1].clone(), mat)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BiModule { values, index_action, coeff_action })
    }

    pub fn zero(index: &FinCategory, coeff: &FinCategory) -> Self {
        let n = CatModule::zero(Arc::new(coeff.clone()), Variance::Covariant);
        Self::constant_in_index(index, &n)
    }
}

/// A bounded chain complex of bifunctors `I^op × J -> Ab`;
/// `differentials[k][i][j]` maps degree `lo + k + 1` to `lo + k`.
#[derive(Clone, Debug)]
pub struct BiFunctorComplex {
    pub index: Arc<FinCategory>,
    pub coeff: Arc<FinCategory>,
    pub lo: i64,
    pub degrees: Vec<BiModule>,
    pub differentials: Vec<Vec<Vec<AbHom>>>,
}

impl BiFunctorComplex {
    pub fn new(
        index: Arc<FinCategory>,
        coeff: Arc<FinCategory>,
        lo: i64,
        degrees: Vec<BiModule>,
        differentials: Vec<Vec<Vec<AbHom>>>,
    ) -> Result<Self> {
        let e = BiFunctorComplex { index, coeff, lo, degrees, differentials };
        e.validate()?;
        Ok(e)
    }

    /// A single bimodule in one degree.
    pub fn concentrated(index: Arc<FinCategory>, coeff: Arc<FinCategory>, degree: i64, m: BiModule) -> Result<Self> {
        Self::new(index, coeff, degree, vec![m], Vec::new())
    }

    /// `E(i, j) = N_*(j)` for a covariant complex `N` over the coefficient
    /// base, constant in the index leg.
    pub fn constant_in_index(index: Arc<FinCategory>, n: &CatChainComplex) -> Result<Self> {
        if n.variance != Variance::Covariant {
            return Err(Error::BaseMismatch("the coefficient leg must be covariant".into()));
        }
        let degrees: Vec<BiModule> = n.modules.iter().map(|m| BiModule::constant_in_index(&index, m)).collect();
        let differentials = n.differentials.iter().map(|d| vec![d.components.clone(); index.num_objects()]).collect();
        Self::new(index, n.base.clone(), n.lo, degrees, differentials)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.degrees.len() as i64 - 1
    }

    fn slot(&self, q: i64) -> Option<usize> {
        (q >= self.lo && q <= self.hi()).then(|| (q - self.lo) as usize)
    }

    /// `E_*(-, j)` as a contravariant complex over `I`.
    pub fn index_leg(&self, j: usize) -> CatChainComplex {
        let modules: Vec<CatModule> = self
            .degrees
            .iter()
            .map(|b| CatModule {
                base: self.index.clone(),
                variance: Variance::Contravariant,
                values: b.values.iter().map(|row| row[j].clone()).collect(),
                action: b.index_action.iter().map(|row| row[j].clone()).collect(),
                marker: None,
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .map(|d| ModuleMap { components: d.iter().map(|row| row[j].clone()).collect() })
            .collect();
        CatChainComplex { base: self.index.clone(), variance: Variance::Contravariant, lo: self.lo, modules, differentials }
    }

    /// `E_*(i, -)` as a covariant complex over `J`.
    pub fn coeff_leg(&self, i: usize) -> CatChainComplex {
        let modules: Vec<CatModule> = self
            .degrees
            .iter()
            .map(|b| CatModule {
                base: self.coeff.clone(),
                variance: Variance::Covariant,
                values: b.values[i].clone(),
                action: b.coeff_action[i].clone(),
                marker: None,
            })
            .collect();
        let differentials = self.differentials.iter().map(|d| ModuleMap { components: d[i].clone() }).collect();
        CatChainComplex { base: self.coeff.clone(), variance: Variance::Covariant, lo: self.lo, modules, differentials }
    }

    /// The plain complex `E_*(i, j)`.
    pub fn evaluate(&self, i: usize, j: usize) -> PlainChainComplex {
        self.coeff_leg(i).evaluate(j)
    }

    /// `E_q(-, beta)` as a map of `I`-modules, for `q` in range.
    pub fn coeff_map(&self, q: i64, beta: usize) -> Option<ModuleMap> {
        let b = &self.degrees[self.slot(q)?];
        Some(ModuleMap { components: (0..self.index.num_objects()).map(|i| b.coeff_action[i][beta].clone()).collect() })
    }

    /// `E_q(alpha, -)` as a map of `J`-modules, for `q` in range.
    pub fn index_map(&self, q: i64, alpha: usize) -> Option<ModuleMap> {
        let b = &self.degrees[self.slot(q)?];
        Some(ModuleMap { components: b.index_action[alpha].clone() })
    }

    /// Both legs functorial, the legs commute, differentials natural in both
    /// legs, `d ∘ d = 0`.
    pub fn validate(&self) -> Result<()> {
        let (ni, nj) = (self.index.num_objects(), self.coeff.num_objects());
        if self.differentials.len() + 1 != self.degrees.len().max(1) {
            return Err(Error::ChainComplex("differential count does not match the degree range".into()));
        }
        for (k, b) in self.degrees.iter().enumerate() {
            let q = self.lo + k as i64;
            if b.values.len() != ni
                || b.values.iter().any(|r| r.len() != nj)
                || b.index_action.len() != self.index.num_morphisms()
                || b.coeff_action.len() != ni
            {
                return Err(Error::ChainComplex(format!("bifunctor data in degree {q} has the wrong shape")));
            }
        }
        for j in 0..nj {
            self.index_leg(j).validate().map_err(|e| Error::ChainComplex(format!("index leg at {}: {e}", self.coeff.object_label(j))))?;
        }
        for i in 0..ni {
            self.coeff_leg(i).validate().map_err(|e| Error::ChainComplex(format!("coefficient leg at {}: {e}", self.index.object_label(i))))?;
        }
        for (k, b) in self.degrees.iter().enumerate() {
            for alpha in 0..self.index.num_morphisms() {
                let (i1, i0) = (self.index.cod(alpha), self.index.dom(alpha));
                for beta in 0..self.coeff.num_morphisms() {
                    let (j0, j1) = (self.coeff.dom(beta), self.coeff.cod(beta));
                    // E(i1, j0) -> E(i0, j1) both ways round.
                    let a = b.coeff_action[i0][beta].compose(&b.index_action[alpha][j0])?;
                    let c = b.index_action[alpha][j1].compose(&b.coeff_action[i1][beta])?;
                    if a.matrix() != c.matrix() {
                        return Err(Error::ChainComplex(format!(
                            "legs do not commute in degree {} at ({}, {})",
                            self.lo + k as i64,
                            self.index.morphism_label(alpha),
                            self.coeff.morphism_label(beta)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cellspaces::{centralizer_quotient_chains, fixed_point_chains, GCWComplex};
use crate::chainplex::{comparison_map_any_source, comparison_map_t, BiFunctorComplex, CatChainComplex, ComparisonMap};
use crate::error::{Error, Result};
use crate::exact_abelian::{is_almost_isomorphism, FpAbGroup};
use crate::fincat::{group_analysis, FinCategory, OrbitCategory, Subgroup};

/// Finite generation regime for both the hypothesis (D) and the conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FgMode {
    Strict,
    Almost,
}

impl fmt::Display for FgMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FgMode::Strict => write!(f, "strict-fg"),
            FgMode::Almost => write!(f, "almost-fg"),
        }
    }
}

impl FromStr for FgMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" | "strict-fg" => Ok(FgMode::Strict),
            "almost" | "almost-fg" => Ok(FgMode::Almost),
            other => Err(Error::Manifest(format!("unknown mode {other:?} (expected strict or almost)"))),
        }
    }
}

/// Where the free `Or(G, F)`-complex `C` comes from.
#[derive(Clone, Debug)]
pub enum TheoremSource {
    /// `C = C_*(X^-)` for a finite `G`-CW complex.
    Space(GCWComplex),
    /// `C` given directly.
    Chains(CatChainComplex),
}

#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub index: Arc<FinCategory>,
    /// `D`, contravariant over the index category.
    pub d_complex: CatChainComplex,
    pub orbit: OrbitCategory,
    pub source: TheoremSource,
    pub e: BiFunctorComplex,
    pub d: usize,
    pub n: i64,
    pub big_n: i64,
    pub mode: FgMode,
    /// Degree through which `E` agrees with the untruncated coefficients;
    /// `None` when `E` is exact as given.
    pub e_exact_through: Option<i64>,
}

impl TheoremInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d_complex: CatChainComplex,
        orbit: OrbitCategory,
        source: TheoremSource,
        e: BiFunctorComplex,
        d: usize,
        n: i64,
        big_n: i64,
        mode: FgMode,
    ) -> Result<Self> {
        let index = d_complex.base.clone();
        if d_complex.variance != crate::catmod::Variance::Contravariant {
            return Err(Error::BaseMismatch("D must be contravariant".into()));
        }
        if e.index != index || e.coeff != orbit.cat {
            return Err(Error::BaseMismatch("E must live on the index category and the orbit category".into()));
        }
        match &source {
            TheoremSource::Space(x) => {
                if *x.group != *orbit.group {
                    return Err(Error::BaseMismatch("X is a space over a different group".into()));
                }
            }
            TheoremSource::Chains(c) => {
                if c.base != orbit.cat || c.variance != crate::catmod::Variance::Contravariant {
                    return Err(Error::BaseMismatch("C must be contravariant over the orbit category".into()));
                }
            }
        }
        Ok(TheoremInstance { index, d_complex, orbit, source, e, d, n, big_n, mode, e_exact_through: None })
    }

    /// The `Or(G, F)`-chain complex `C`.
    pub fn c_complex(&self) -> Result<CatChainComplex> {
        match &self.source {
            TheoremSource::Space(x) => fixed_point_chains(x, &self.orbit),
            TheoremSource::Chains(c) => Ok(c.clone()),
        }
    }

    fn subgroup_label(&self, j: usize) -> String {
        self.orbit.family.members[j].describe(&self.orbit.group)
    }
}

/// (A): `D_k = 0` outside `[0, d]`, and `D` degreewise free.
#[derive(Clone, Debug)]
pub struct SupportVerdict {
    pub passes: bool,
    pub d_free: bool,
    /// Lowest and highest degree with a nonzero module.
    pub support: Option<(i64, i64)>,
    /// `(degree, object)` of a nonzero value outside the window.
    pub witness: Option<(i64, String)>,
}

/// (B): `H_q(E(c, G/H)) = 0` for `q < N`.
#[derive(Clone, Debug)]
pub struct ConnectivityVerdict {
    pub passes: bool,
    pub checked: usize,
    /// `(index object, subgroup, q, H_q)`.
    pub witness: Option<(String, String, i64, FpAbGroup)>,
}

/// (C): finite isotropy and finitely many orbit types.
#[derive(Clone, Debug)]
pub struct IsotropyVerdict {
    pub passes: bool,
    pub orbit_types: usize,
    pub max_isotropy_order: usize,
    pub outside_family: Option<String>,
}

/// (D): finite generation of `H_p(Z_G H \ X^H)` for `H ∈ F`, `p <= n + d - N`.
#[derive(Clone, Debug)]
pub struct FiniteGenerationVerdict {
    pub passes: bool,
    pub top_degree: i64,
    /// `(subgroup, p, H_p)`.
    pub groups: Vec<(String, i64, FpAbGroup)>,
    /// Least common multiple of the torsion exponents (almost mode only).
    pub annihilator: Option<BigInt>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub mode: FgMode,
    pub a: SupportVerdict,
    pub b: ConnectivityVerdict,
    pub c: IsotropyVerdict,
    pub d: FiniteGenerationVerdict,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.a.passes && self.b.passes && self.c.passes && self.d.passes
    }
}

fn check_support(inst: &TheoremInstance) -> SupportVerdict {
    let dc = &inst.d_complex;
    let mut support: Option<(i64, i64)> = None;
    let mut witness = None;
    for k in dc.degrees() {
        let m = dc.module(k).expect("in range");
        let Some(obj) = m.values.iter().position(|v| !v.is_trivial()) else { continue };
        support = Some(support.map_or((k, k), |(lo, _)| (lo, k)));
        if (k < 0 || k > inst.d as i64) && witness.is_none() {
            witness = Some((k, inst.index.object_label(obj).to_string()));
        }
    }
    let d_free = dc.is_free();
    SupportVerdict { passes: witness.is_none() && d_free, d_free, support, witness }
}

fn check_connectivity(inst: &TheoremInstance) -> Result<ConnectivityVerdict> {
    let e = &inst.e;
    let mut checked = 0;
    for i in 0..e.index.num_objects() {
        for j in 0..e.coeff.num_objects() {
            let ev = e.evaluate(i, j);
            for q in e.lo.min(inst.big_n)..inst.big_n {
                checked += 1;
                let h = ev.homology(q)?.bare();
                if !h.is_trivial() {
                    let w = (inst.index.object_label(i).to_string(), inst.subgroup_label(j), q, h);
                    return Ok(ConnectivityVerdict { passes: false, checked, witness: Some(w) });
                }
            }
        }
    }
    Ok(ConnectivityVerdict { passes: true, checked, witness: None })
}

fn check_isotropy(inst: &TheoremInstance) -> Result<IsotropyVerdict> {
    let g = &inst.orbit.group;
    let isotropy: Vec<Subgroup> = match &inst.source {
        TheoremSource::Space(x) => x.isotropy(),
        TheoremSource::Chains(c) => {
            let mut v: Vec<Subgroup> = c
                .modules
                .iter()
                .flat_map(|m| match &m.marker {
                    Some(mk) => mk.generators.clone(),
                    None => (0..m.values.len()).filter(|&o| !m.values[o].is_trivial()).collect(),
                })
                .map(|o| inst.orbit.family.members[o].clone())
                .collect();
            v.sort();
            v.dedup();
            v
        }
    };
    let analysis = group_analysis(g)?;
    let mut classes: Vec<usize> = isotropy.iter().filter_map(|h| analysis.index_of(h).map(|i| analysis.class_of[i])).collect();
    classes.sort_unstable();
    classes.dedup();
    let outside_family = isotropy.iter().find(|h| !inst.orbit.family.contains(h)).map(|h| h.describe(g));
    Ok(IsotropyVerdict {
        passes: outside_family.is_none(),
        orbit_types: classes.len(),
        max_isotropy_order: isotropy.iter().map(|h| h.order()).max().unwrap_or(0),
        outside_family,
    })
}

fn check_finite_generation(inst: &TheoremInstance) -> Result<FiniteGenerationVerdict> {
    let top = inst.n + inst.d as i64 - inst.big_n;
    let mut groups = Vec::new();
    let (chains, note): (Vec<crate::chainplex::PlainChainComplex>, String) = match &inst.source {
        TheoremSource::Space(x) => {
            let fam = x.isotropy_family()?;
            let cs = inst
                .orbit
                .family
                .members
                .iter()
                .map(|h| if fam.contains(h) { centralizer_quotient_chains(x, h) } else { Ok(crate::chainplex::PlainChainComplex::zero()) })
                .collect::<Result<_>>()?;
            (cs, "finitely presented groups are finitely generated; for finite G the strict and almost modes coincide".into())
        }
        TheoremSource::Chains(c) => {
            let cs = (0..inst.orbit.cat.num_objects()).map(|j| c.evaluate(j)).collect();
            (cs, "no space given: the evaluations C(G/H) stand in for the centralizer quotients".into())
        }
    };
    let mut lcm = BigInt::from(1);
    for (j, ch) in chains.iter().enumerate() {
        for p in 0..=top {
            let h = ch.homology(p)?.bare();
            for t in h.torsion() {
                lcm = lcm.lcm(t);
            }
            groups.push((inst.subgroup_label(j), p, h));
        }
    }
    let annihilator = (inst.mode == FgMode::Almost).then_some(lcm);
    Ok(FiniteGenerationVerdict { passes: true, top_degree: top, groups, annihilator, note })
}

pub fn check_hypotheses(inst: &TheoremInstance) -> Result<HypothesisReport> {
    Ok(HypothesisReport {
        mode: inst.mode,
        a: check_support(inst),
        b: check_connectivity(inst)?,
        c: check_isotropy(inst)?,
        d: check_finite_generation(inst)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonClass {
    Isomorphism,
    /// Finite kernel and cokernel, with their exponents.
    AlmostIsomorphism { kernel_exponent: BigInt, cokernel_exponent: BigInt },
    Neither,
}

impl fmt::Display for ComparisonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonClass::Isomorphism => write!(f, "ISO"),
            ComparisonClass::AlmostIsomorphism { kernel_exponent, cokernel_exponent } => {
                write!(f, "ALMOST (kernel exponent {kernel_exponent}, cokernel exponent {cokernel_exponent})")
            }
            ComparisonClass::Neither => write!(f, "NEITHER"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DegreeComparison {
    pub p: i64,
    pub source: FpAbGroup,
    pub target: FpAbGroup,
    pub kernel: FpAbGroup,
    pub cokernel: FpAbGroup,
    pub class: ComparisonClass,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub requested: FgMode,
    pub degrees: Vec<DegreeComparison>,
    pub degreewise_iso: bool,
    pub warnings: Vec<String>,
}

impl ComparisonReport {
    /// Every degree is an isomorphism, or an almost isomorphism when the
    /// almost conclusion was requested.
    pub fn passes(&self) -> bool {
        self.witness().is_none()
    }

    /// First degree that misses the requested conclusion.
    pub fn witness(&self) -> Option<&DegreeComparison> {
        self.degrees.iter().find(|d| match (&d.class, self.requested) {
            (ComparisonClass::Isomorphism, _) => false,
            (ComparisonClass::AlmostIsomorphism { .. }, FgMode::Almost) => false,
            _ => true,
        })
    }
}

/// The comparison chain map of an instance; non-free `D` is accepted with
/// the unrestricted construction.
pub fn instance_comparison_map(inst: &TheoremInstance) -> Result<ComparisonMap> {
    let c = inst.c_complex()?;
    if inst.d_complex.is_free() {
        comparison_map_t(&c, &inst.d_complex, &inst.e)
    } else {
        comparison_map_any_source(&c, &inst.d_complex, &inst.e)
    }
}

pub fn verify_comparison(inst: &TheoremInstance, conclusion: FgMode) -> Result<ComparisonReport> {
    let needed = inst.n + inst.d as i64 + 1;
    if let Some(t) = inst.e_exact_through {
        if t < needed {
            return Err(Error::Truncation(format!("E is exact only through degree {t}, but degree {needed} enters H_p for p <= {}", inst.n)));
        }
    }
    let mut warnings = Vec::new();
    if inst.mode != conclusion {
        warnings.push(format!("mixed modes: hypotheses checked in {} mode, {} conclusion requested", inst.mode, conclusion));
    }
    if !inst.d_complex.is_free() {
        warnings.push("D is not degreewise free; the comparison map is built without the freeness hypothesis".into());
    }
    let t = instance_comparison_map(inst)?;
    let degreewise_iso = t.is_degreewise_iso()?;
    let mut degrees = Vec::new();
    let lo = [&t.source, &t.target].iter().filter(|c| !c.is_empty()).map(|c| c.lo()).min();
    if let Some(lo) = lo {
        for p in lo..=inst.n {
            let h = t.on_homology(p)?;
            let v = is_almost_isomorphism(&h)?;
            let class = if v.is_iso {
                ComparisonClass::Isomorphism
            } else if let (Some(ke), Some(ce)) = (v.kernel_exponent.clone(), v.cokernel_exponent.clone()) {
                ComparisonClass::AlmostIsomorphism { kernel_exponent: ke, cokernel_exponent: ce }
            } else {
                ComparisonClass::Neither
            };
            degrees.push(DegreeComparison {
                p,
                source: h.source().bare(),
                target: h.target().bare(),
                kernel: v.kernel,
                cokernel: v.cokernel,
                class,
            });
        }
    }
    Ok(ComparisonReport { requested: conclusion, degrees, degreewise_iso, warnings })
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub hypotheses: HypothesisReport,
    pub comparison: ComparisonReport,
}

impl TheoremReport {
    pub fn passes(&self) -> bool {
        self.hypotheses.passes() && self.comparison.passes()
    }
}

pub fn verify_theorem(inst: &TheoremInstance, conclusion: FgMode) -> Result<TheoremReport> {
    Ok(TheoremReport { hypotheses: check_hypotheses(inst)?, comparison: verify_comparison(inst, conclusion)? })
}

//! Runnable verdicts: hypothesis checks and the comparison map for a theorem
//! instance, factorization through the subgroup category, interchange
//! probes, and the Borel-versus-quotient comparison.
//!
//! The homotopy-functor hypothesis on `E(c, -)` cannot be read off a finite
//! table; [`sub_factorization_check`] tests the homology-level consequence
//! instead.

mod borel_check;
mod factorization;
mod instances;
mod interchange;
mod recipes;
mod theorem;

pub use borel_check::{borel_vs_quotient_check, default_annihilator, BorelCheckReport, BorelDegree};
pub use factorization::{sub_factorization_check, FactorizationReport, FactorizationViolation};
pub use instances::{classifying_instance, desk_instance, neither_instance, s3_desk_instance};
pub use interchange::{
    constant_m_spec, divergent_m_spec, interchange_criterion, symbolic_surjectivity, tor_interchange_probe, truncated_interchange,
    unbounded_below_spec, GradedSeqSpec, InterchangeReport, Profile, ProfileTail, SeqTail, Sequence, Surjectivity, SymbolicVerdict,
    TorProbeReport, TruncatedInterchange, TOR_PROBE_BOUND,
};
pub use recipes::{
    coset_permutation_bifunctor, constant_bifunctor, orbit_groupoids, pad_bifunctor, shift_bifunctor, transport_bifunctor,
    transport_coefficients, OrbitGroupoids, TransportRecipe,
};
pub use theorem::{
    check_hypotheses, instance_comparison_map, verify_comparison, verify_theorem, ComparisonClass, ComparisonReport, ConnectivityVerdict,
    DegreeComparison, FgMode, FiniteGenerationVerdict, HypothesisReport, IsotropyVerdict, SupportVerdict, TheoremInstance, TheoremReport,
    TheoremSource,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catmod::{free_module, CatModule, Variance};
    use crate::chainplex::CatChainComplex;
    use crate::exact_abelian::FpAbGroup;
    use crate::fincat::{orbit_category, FinGroup, SubgroupFamily};

    #[test]
    fn desk_instance_is_an_isomorphism() {
        let inst = desk_instance().unwrap();
        let r = verify_theorem(&inst, FgMode::Strict).unwrap();
        assert!(r.hypotheses.passes(), "{:?}", r.hypotheses);
        assert!(r.comparison.passes());
        assert_eq!(r.comparison.degrees.last().unwrap().p, 2);
        assert!(r.comparison.warnings.is_empty());
    }

    #[test]
    fn trivial_index_with_a_point() {
        let g = Arc::new(FinGroup::cyclic(2));
        let or = orbit_category(&SubgroupFamily::all(&g).unwrap()).unwrap();
        let pt = Arc::new(FinGroup::trivial().as_category());
        let d = CatChainComplex::concentrated(0, free_module(&pt, Variance::Contravariant, &[0]));
        let e = transport_bifunctor(&pt, &or, TransportRecipe::Components).unwrap();
        let x = crate::cellspaces::z2_antipodal_circle();
        let inst = TheoremInstance::new(d, or, TheoremSource::Space(x), e, 0, 3, 0, FgMode::Strict).unwrap();
        let r = verify_comparison(&inst, FgMode::Strict).unwrap();
        assert!(r.degreewise_iso);
        assert!(r.passes());
    }

    #[test]
    fn padded_d_fails_support() {
        let mut inst = desk_instance().unwrap();
        let base = inst.index.clone();
        let extra = free_module(&base, Variance::Contravariant, &[0]);
        let zero_map = crate::catmod::ModuleMap::zero(&extra, inst.d_complex.modules.last().unwrap());
        inst.d_complex.modules.push(extra);
        inst.d_complex.differentials.push(zero_map);
        let r = check_hypotheses(&inst).unwrap();
        assert!(!r.a.passes);
        assert_eq!(r.a.witness, Some((3, "0".to_string())));
    }

    #[test]
    fn low_homology_in_e_fails_connectivity() {
        let mut inst = desk_instance().unwrap();
        inst.e = constant_bifunctor(&inst.index, &inst.orbit.cat, &FpAbGroup::free(1), -1).unwrap();
        let r = check_hypotheses(&inst).unwrap();
        assert!(!r.b.passes);
        let (_, _, q, h) = r.b.witness.unwrap();
        assert_eq!(q, -1);
        assert_eq!(h, FpAbGroup::free(1));
    }

    #[test]
    fn neither_instance_is_detected() {
        let inst = neither_instance().unwrap();
        let h = check_hypotheses(&inst).unwrap();
        assert!(!h.a.d_free);
        let r = verify_comparison(&inst, FgMode::Almost).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.class, ComparisonClass::Neither);
        assert!(w.source.is_trivial());
        assert_eq!(w.target, FpAbGroup::free(1));
        assert!(r.warnings.len() == 2);
    }

    #[test]
    fn padding_e_does_not_change_verdicts() {
        let inst = desk_instance().unwrap();
        let base = verify_comparison(&inst, FgMode::Strict).unwrap();
        let mut wide = inst.clone();
        wide.e = pad_bifunctor(&inst.e, inst.n + inst.d as i64 + 3).unwrap();
        let r = verify_comparison(&wide, FgMode::Strict).unwrap();
        for (a, b) in base.degrees.iter().zip(&r.degrees) {
            assert_eq!((a.p, &a.class, &a.source), (b.p, &b.class, &b.source));
        }
    }

    #[test]
    fn short_e_window_is_a_truncation_error() {
        let mut inst = desk_instance().unwrap();
        inst.e_exact_through = Some(2);
        assert!(matches!(verify_comparison(&inst, FgMode::Strict), Err(crate::Error::Truncation(_))));
    }

    #[test]
    fn constant_source_module_is_accepted() {
        let inst = desk_instance().unwrap();
        let c = CatModule::constant(inst.orbit.cat.clone(), Variance::Contravariant, &FpAbGroup::free(1));
        let chains = TheoremInstance::new(
            inst.d_complex.clone(),
            inst.orbit.clone(),
            TheoremSource::Chains(CatChainComplex::concentrated(0, c)),
            inst.e.clone(),
            2,
            2,
            0,
            FgMode::Almost,
        )
        .unwrap();
        let h = check_hypotheses(&chains).unwrap();
        assert!(h.d.annihilator.is_some());
        let r = verify_comparison(&chains, FgMode::Strict).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("mixed")));
    }
}

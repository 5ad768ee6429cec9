//! Cellular models kept at the chain level: complexes over a finite
//! category, finite `G`-CW complexes with their fixed-point, Bredon and
//! orbit-space chains, truncated bar constructions and the classifying
//! models for `N` and `RF`.

mod borel;
mod catcw;
mod gcw;

pub use borel::{bar_augmentation, bar_resolution_truncated, borel_and_quotient, group_homology_complex, BorelQuotient};
pub use catcw::{
    cellular_chain_complex, classifying_model, contractibility_check, CatCWComplex, CellFace, ContractibilityReport,
    ObjectContractibility,
};
pub use gcw::{
    bredon_chains, bredon_homology, centralizer_quotient_chains, fixed_point_chains, gcw_free_orbit, gcw_point, s3_reflection_circle,
    underlying_chains, z2_antipodal_circle, z2_antipodal_sphere, z2_reflection_circle, z2_reflection_sphere, GBoundaryTerm, GCWComplex,
};

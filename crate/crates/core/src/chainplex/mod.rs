//! Bounded chain complexes: plain complexes of abelian groups, complexes of
//! modules over a finite category, bifunctor complexes, the tensor and hom
//! total complexes over a category and the comparison map between them.

mod catcomplex;
mod comparison;
mod complex;
mod total;

pub use catcomplex::{BiFunctorComplex, BiModule, CatChainComplex};
pub use comparison::{comparison_map_any_source, comparison_map_t, ComparisonMap};
pub use complex::{check_chain_map, induced_map_on_homology, ChainMap, PlainChainComplex};
pub use total::{hom_complex_over_cat, hom_total, hom_total_map, tensor_complex_over_cat, tensor_total, tensor_total_map, HomBlock, HomTotal, TensorBlock, TensorTotal};

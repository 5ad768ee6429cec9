//! Modules over finite categories: functors into finitely generated
//! abelian groups, with tensor and hom over the category, free modules,
//! Kan extensions, free resolutions and Tor.

mod kan;
mod module;
mod resolution;
mod tensor;

pub use kan::{induce, restrict, restrict_induce};
pub use module::{
    direct_sum_modules, free_module, map_kernel_cokernel, validate_map, validate_module, yoneda_map, CatModule, DirectSum,
    FreeMarker, KernelCokernelModules, ModuleMap, Variance,
};
pub use resolution::{
    finite_product_interchange, free_resolution, is_finitely_generated, tor, tor_via, FreeResolution, GenerationWitness,
    InterchangeReport, TorSide,
};
pub use tensor::{
    hom_element_to_module_map, hom_map_ambient, hom_over_cat, hom_presentation, hom_to_group, module_map_to_ambient,
    tensor_map, tensor_map_ambient, tensor_over_cat, tensor_relations, HomLayout, TensorLayout,
};

//! Finite categories, finite groups and the categories built from them:
//! orbit categories, subgroup categories, transport groupoids and the
//! truncated index categories used as test beds.

mod category;
mod group;
mod orbit;
mod standard;

pub use category::{validate_category, CatFunctor, CategoryData, CategoryVerdict, FinCategory};
pub use group::{family_closure, group_analysis, FinGroup, GSetAction, GroupAnalysis, Subgroup, SubgroupFamily, MAX_GROUP_ORDER};
pub use orbit::{orbit_category, sub_category_and_projection, transport_groupoid, OrbitCategory, SubCategory, TransportGroupoid};
pub use standard::{rf_morphism, standard_category, StandardKind};

//! Exact integer linear algebra and finitely presented abelian groups.
//!
//! Every group is kept in canonical form (rank plus invariant factors).
//! Groups produced by a construction carry a basis witness tying their
//! canonical generators to the lattice they were computed in, which is how
//! induced maps are obtained.

mod group;
mod hom;
mod matrix;
mod smith;

pub use group::{cokernel_presentation, group_invariants, subquotient, BasisWitness, FpAbGroup, GroupInvariants};
pub use hom::{
    hom_element_to_map, hom_group, homology_group, hom_kernel_cokernel, is_almost_isomorphism, solve_image_membership, tensor_group,
    AbHom, AlmostIsoVerdict, KernelCokernel, Membership,
};
pub use matrix::{big_vec, IntMatrix};
pub use smith::{kernel_basis, smith_normal_form, solve_integer, SmithDecomposition};

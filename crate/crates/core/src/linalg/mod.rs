//! Exact integer linear algebra: Smith and Hermite normal forms,
//! finitely generated abelian groups and homomorphisms into finite ones.

mod group;
mod hermite;
mod matrix;
mod smith;

#[allow(unused_imports)]
pub(crate) use group::cartesian;
pub use group::{cokernel, hom_count, hom_enumerate, saturation, FgAbelianGroup, FiniteHom, HOM_ENUMERATION_CAP};
pub use hermite::{hermite_normal_form, lattice_contains, lattice_coordinates};
pub use matrix::IntegerMatrix;
pub use smith::{smith_normal_form, SmithDecomposition};

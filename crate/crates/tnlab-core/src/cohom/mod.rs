//! Group cohomology, Tate cohomology, two-term hypercohomology and class modules.

mod classmod;
mod cochain;
mod group;
mod groups;
mod module;

pub use classmod::{psi_map, tensor_map, torus_model, validate_class_module, ClassModuleModel};
pub(crate) use classmod::psi_unchecked;
pub use cochain::{bar_differential, differential_matrix, tuple_count, tuple_index, tuple_of, Cochain, MAX_DEGREE};
pub use group::FiniteGroup;
pub use groups::{cohomology, hyper_h0, hyper_h1, les_check, split_hyper_vector, tate, CohomologyGroup, TwoTermComplex};
pub use module::GModule;

//! Ordinary and projective representations of small finite groups over cyclotomic scalars.

mod irreps;
mod rep;

pub use irreps::{
    frobenius_check, group_characters, induce, is_irreducible, isotypic_check, mackey_check, mult_trivial,
    trivialize_on, twisted_irreps, Isotypy,
};
pub use rep::{character, mat_identity, mat_mul, mat_scale, mat_trace, ClassFunction, CycMatrix, Rep, TwistedExtension};

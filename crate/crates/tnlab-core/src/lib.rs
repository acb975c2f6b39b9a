//! Exact finite models for Tate–Nakayama duality of hypercohomology, the local
//! Langlands correspondence for disconnected tori and the multiplicity formula.
#![no_std]

extern crate alloc;

pub mod error;
pub mod cohom;
pub mod exactlin;
pub mod gen;
pub mod global_mult;
pub mod llc_local;
pub mod report;
pub mod repkit;
pub mod weilmodel;

pub use error::{Error, Result};
pub use report::{Check, CheckReport};

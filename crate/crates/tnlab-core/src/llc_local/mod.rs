//! Local correspondence for tori with a finite group of automorphisms.

mod corr;
mod datum;

pub use corr::{perturb_witnesses, LocalLlc, PacketMember};
pub use datum::{
    is_dual_witness, is_group_witness, pi0_dual, sample_dual_invariant, stab_phi, stab_z, DualStabilizer,
    GroupStabilizer, InnerTwist, Pi0Dual, StabilizerData, TorusDatum,
};

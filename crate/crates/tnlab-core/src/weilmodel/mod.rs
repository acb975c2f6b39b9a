//! The relative Weil group model, chain maps, hyperhomology and Tate–Nakayama pairings.

mod group;
mod hyper;
mod maps;
mod param;

pub use group::{boundary2, FinSuppChain, WeilElem, WeilModel};
pub use hyper::{
    add_group, functor_pairing, group_cohomologous, hyper_iso_h, hyper_preimage, hypercoboundary_witness,
    include_target, kottwitz_eval, kottwitz_lambda, langlands_eval, pairing_chain, tn_pairing, GroupHyperCocycle,
    HyperCycle0, LatticeComplex, DEFAULT_SUPPORT_BOUND,
};
pub use maps::{coboundary0, phi_map, phi_matrix, psi, psi_matrix, res_chain, res_chain_oracle, tilde_d, KernelChain};
pub use param::{
    dual_act, dual_cocycle_space, dual_map, is_dual_invariant, pair, DualCocycleSpace, DualHyperCocycle,
    LocalParameter,
};

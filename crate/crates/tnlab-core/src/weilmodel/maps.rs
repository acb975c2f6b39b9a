use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{FinSuppChain, WeilElem, WeilModel};
use crate::cohom::{psi_unchecked, Cochain, GModule};
use crate::exactlin::{vec_add, vec_is_zero, vec_sub, zero_vec, IntMatrix};

/// A chain on the kernel `C`: class-module coordinates ↦ lattice value.
pub type KernelChain = BTreeMap<Vec<BigInt>, Vec<BigInt>>;

fn kernel_add(out: &mut KernelChain, key: Vec<BigInt>, v: &[BigInt]) {
    if vec_is_zero(v) {
        return;
    }
    let entry = out.entry(key.clone()).or_insert_with(|| zero_vec(v.len()));
    for (a, b) in entry.iter_mut().zip(v) {
        *a += b;
    }
    if entry.iter().all(Zero::is_zero) {
        out.remove(&key);
    }
}

/// Restriction of a 1-chain to the kernel `C`: the value `v` at `(b, τ)`
/// contributes `σv` at `a_{σ,τ} + σb` for every `σ`.
pub fn res_chain(model: &WeilModel, x: &GModule, chain: &FinSuppChain) -> KernelChain {
    let g = model.group();
    let cm = model.c_module();
    let mut out = KernelChain::new();
    for (w, v) in chain.terms() {
        for s in 0..g.order() {
            let key = vec_add(model.a(s, w.s), &cm.act(s, &w.c));
            kernel_add(&mut out, key, &x.act(s, v));
        }
    }
    out
}

/// Restriction computed inside the group: `x̂_h = Σ s(σ)x_g` over `(g, σ)` with
/// `s(σ)g·s(p(s(σ)g))^{-1} = h`.
pub fn res_chain_oracle(model: &WeilModel, x: &GModule, chain: &FinSuppChain) -> KernelChain {
    let g = model.group();
    let mut out = KernelChain::new();
    for (w, v) in chain.terms() {
        for s in 0..g.order() {
            let sw = model.compose(&model.section(s), w);
            let back = model.inverse(&model.section(sw.s));
            let h = model.compose(&sw, &back);
            debug_assert_eq!(h.s, g.identity());
            kernel_add(&mut out, h.c, &x.act(s, v));
        }
    }
    out
}

/// `x̂ ↦ −Σ_a x̂_a ⊗ a`, the Deligne-normalized identification on the kernel.
pub fn tilde_d(x: &GModule, m: usize, chain: &KernelChain) -> Vec<BigInt> {
    let mut acc = zero_vec(x.rank() * m);
    for (c, v) in chain {
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                acc[i * m + j] -= vi * cj;
            }
        }
    }
    acc
}

/// Deligne-convention chain map `φ: C₁(W, X) → X ⊗ C`:
/// `φ(x) = −Σ_{σ,(b,τ)} σ(x_{(b,τ)}) ⊗ (a_{σ,τ} + σb)`.
pub fn phi_map(model: &WeilModel, x: &GModule, chain: &FinSuppChain) -> Vec<BigInt> {
    let m = model.c_rank();
    let mut acc = zero_vec(x.rank() * m);
    for (w, v) in chain.terms() {
        acc = vec_add(&acc, &phi_matrix(model, x, w).mul_vec(v));
    }
    acc
}

/// The matrix `X → X ⊗ C` by which a value at `w` enters `φ`.
pub fn phi_matrix(model: &WeilModel, x: &GModule, w: &WeilElem) -> IntMatrix {
    let g = model.group();
    let cm = model.c_module();
    let m = model.c_rank();
    let mut out = IntMatrix::zeros(x.rank() * m, x.rank());
    for s in 0..g.order() {
        let c = vec_add(model.a(s, w.s), &cm.act(s, &w.c));
        let col = IntMatrix::from_columns(m, &[c]);
        out = out.sub(&x.action(s).kron(&col));
    }
    out
}

/// `ψ` for the model's class module; see [`crate::cohom::psi_map`].
pub fn psi(model: &WeilModel, x: &GModule, mu: &[BigInt]) -> Cochain {
    psi_unchecked(mu, model.class_module(), x)
}

/// Matrix of `λ ↦ ψ(λ)` on flattened cochains (ignores the norm condition).
pub fn psi_matrix(model: &WeilModel, x: &GModule) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (0..x.rank())
        .map(|j| {
            let mut e = zero_vec(x.rank());
            e[j] = BigInt::from(1);
            psi(model, x, &e).flat()
        })
        .collect();
    IntMatrix::from_columns(x.rank() * model.c_rank() * model.group().order(), &cols)
}

/// The torus-model coboundary `ρ ↦ ρt − t`.
pub fn coboundary0(model: &WeilModel, x: &GModule, t: &[BigInt]) -> Cochain {
    let tm = x.tensor(model.c_module()).expect("same group");
    Cochain::from_fn(model.group().order(), 1, tm.rank(), |r| vec_sub(&tm.act(r[0], t), t))
}

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::group::{FinSuppChain, WeilElem, WeilModel};
use super::maps::{coboundary0, phi_map, phi_matrix, psi, psi_matrix};
use super::param::{dual_map, is_dual_invariant, pair, DualHyperCocycle, LocalParameter};
use crate::cohom::{differential_matrix, Cochain, GModule, TwoTermComplex};
use crate::error::{Error, Result};
use crate::exactlin::{solve_int, vec_add, vec_is_zero, vec_sub, zero_vec, IntMatrix, QmodZ};

/// Default radius of the support ball used by the preimage solvers.
pub const DEFAULT_SUPPORT_BOUND: u32 = 3;

/// A group hypercocycle `(z, t)` for `f: T → U`: `f(z(σ)) = σt − t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHyperCocycle {
    pub z: Cochain,
    pub t: Vec<BigInt>,
}

/// The lattice complex `f: X → Y` together with its torus models over a Weil model.
#[derive(Clone, Debug)]
pub struct LatticeComplex {
    pub x: GModule,
    pub y: GModule,
    pub f: IntMatrix,
    tx: GModule,
    ty: GModule,
    f_c: IntMatrix,
}

impl LatticeComplex {
    pub fn new(model: &WeilModel, x: GModule, y: GModule, f: IntMatrix) -> Result<Self> {
        if x.group() != model.group() || y.group() != model.group() {
            return Err(Error::Precondition("lattices and Weil model over different groups".into()));
        }
        if !x.is_equivariant(&f, &y) {
            return Err(Error::Precondition("complex map is not equivariant".into()));
        }
        let tx = x.tensor(model.c_module())?;
        let ty = y.tensor(model.c_module())?;
        let f_c = f.kron(&IntMatrix::identity(model.c_rank()));
        Ok(LatticeComplex { x, y, f, tx, ty, f_c })
    }

    /// `X → X` with the given endomorphism.
    pub fn endo(model: &WeilModel, x: GModule, f: IntMatrix) -> Result<Self> {
        Self::new(model, x.clone(), x, f)
    }

    pub fn torus_source(&self) -> &GModule {
        &self.tx
    }

    pub fn torus_target(&self) -> &GModule {
        &self.ty
    }

    /// `f ⊗ 1` on torus models.
    pub fn f_torus(&self) -> &IntMatrix {
        &self.f_c
    }

    /// The torus-model complex as a cohomological two-term complex.
    pub fn torus_complex(&self) -> TwoTermComplex {
        TwoTermComplex::new(self.tx.clone(), self.ty.clone(), self.f_c.clone()).expect("equivariant")
    }

    pub fn is_group_cocycle(&self, h: &GroupHyperCocycle) -> bool {
        let ord = self.x.group().order();
        if h.z.degree() != 1 || h.z.rank() != self.tx.rank() || h.t.len() != self.ty.rank() {
            return false;
        }
        let dz = differential_matrix(&self.tx, 1).mul_vec(&h.z.flat());
        if !vec_is_zero(&dz) {
            return false;
        }
        (0..ord).all(|s| {
            let lhs = self.f_c.mul_vec(h.z.at(ord, &[s]));
            let rhs = vec_sub(&self.ty.act(s, &h.t), &h.t);
            lhs == rhs
        })
    }

    pub fn is_dual_cocycle(&self, model: &WeilModel, d: &DualHyperCocycle) -> bool {
        d.param.rank() == self.y.rank() && d.t_hat.len() == self.x.rank() && d.is_cocycle(model, &self.x, &self.f)
    }

    /// The hypercoboundary of `u₀ ∈ X ⊗ C`: `(∂u₀, f u₀)`.
    pub fn group_coboundary(&self, model: &WeilModel, u0: &[BigInt]) -> GroupHyperCocycle {
        GroupHyperCocycle { z: coboundary0(model, &self.x, u0), t: self.f_c.mul_vec(u0) }
    }
}

/// A norm-zero hypercycle `(λ, μ)`: `Nλ = 0` and `fλ = Σ_w (w^{-1}μ_w − μ_w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCycle0 {
    pub lambda: Vec<BigInt>,
    pub mu: FinSuppChain,
}

impl HyperCycle0 {
    pub fn is_valid(&self, model: &WeilModel, cx: &LatticeComplex) -> bool {
        vec_is_zero(&cx.x.norm_matrix().mul_vec(&self.lambda))
            && cx.f.mul_vec(&self.lambda) == self.mu.boundary(model, &cx.y)
    }
}

/// `ℋ(λ, μ) = (ψ(λ), φ(μ))`.
pub fn hyper_iso_h(model: &WeilModel, cx: &LatticeComplex, hc: &HyperCycle0) -> Result<GroupHyperCocycle> {
    if !hc.is_valid(model, cx) {
        return Err(Error::Precondition("not a norm-zero hypercycle".into()));
    }
    Ok(GroupHyperCocycle { z: psi(model, &cx.x, &hc.lambda), t: phi_map(model, &cx.y, &hc.mu) })
}

/// `⟨(λ, μ), (φ, ŝ)⟩ = ŝ(λ) − Σ_w φ(w)(μ_w)`, additive, Deligne normalization.
pub fn pairing_chain(hc: &HyperCycle0, dc: &DualHyperCocycle) -> QmodZ {
    let mut acc = pair(&hc.lambda, &dc.t_hat);
    for (w, v) in hc.mu.terms() {
        acc = acc - pair(v, &dc.param.eval(w));
    }
    acc
}

fn chain_from_solution(ry: usize, ball: &[WeilElem], sol: &[BigInt]) -> FinSuppChain {
    let mut mu = FinSuppChain::zero(ry);
    for (k, w) in ball.iter().enumerate() {
        mu.add_term(w.clone(), &sol[k * ry..(k + 1) * ry]);
    }
    mu
}

/// Preimage of `(z, t)` under `ℋ` up to a hypercoboundary, with `μ` supported in the ball of radius `r`.
fn preimage_at(model: &WeilModel, cx: &LatticeComplex, h: &GroupHyperCocycle, r: u32) -> Option<HyperCycle0> {
    let ord = model.group().order();
    let m = model.c_rank();
    let (rx, ry) = (cx.x.rank(), cx.y.rank());
    let ball = model.ball(r);
    let nb = ball.len() * ry;
    let nu = rx * m;
    let ncols = rx + nb + nu;
    // column offsets
    let (c_lam, c_mu, c_u) = (0, rx, rx + nb);
    let zc = ord * rx * m;
    let nrows = rx + ry + zc + ry * m;
    let mut a = IntMatrix::zeros(nrows, ncols);
    let place = |a: &mut IntMatrix, r0: usize, c0: usize, b: &IntMatrix, sign: i64| {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let v = b.get(i, j);
                if v.sign() != num_bigint::Sign::NoSign {
                    *a.get_mut(r0 + i, c0 + j) += v * sign;
                }
            }
        }
    };
    // Nλ = 0
    place(&mut a, 0, c_lam, &cx.x.norm_matrix(), 1);
    // fλ − ∂μ = 0
    place(&mut a, rx, c_lam, &cx.f, 1);
    let id_y = IntMatrix::identity(ry);
    for (k, w) in ball.iter().enumerate() {
        let b = cx.y.action(model.group().inv(w.s)).sub(&id_y);
        place(&mut a, rx, c_mu + k * ry, &b, -1);
    }
    // ψ(λ) − ∂u₀ = z
    place(&mut a, rx + ry, c_lam, &psi_matrix(model, &cx.x), 1);
    place(&mut a, rx + ry, c_u, &differential_matrix(cx.torus_source(), 0), -1);
    // φ(μ) − f u₀ = t
    let r3 = rx + ry + zc;
    for (k, w) in ball.iter().enumerate() {
        place(&mut a, r3, c_mu + k * ry, &phi_matrix(model, &cx.y, w), 1);
    }
    place(&mut a, r3, c_u, cx.f_torus(), -1);
    let mut b = zero_vec(rx + ry);
    b.extend(h.z.flat());
    b.extend(h.t.iter().cloned());
    let sol = solve_int(&a, &b, &IntMatrix::zeros(nrows, 0))?;
    let lambda = sol[c_lam..c_lam + rx].to_vec();
    let mu = chain_from_solution(ry, &ball, &sol[c_mu..c_mu + nb]);
    Some(HyperCycle0 { lambda, mu })
}

/// Finds `(λ, μ)` with `ℋ(λ, μ)` cohomologous to `(z, t)`, growing the ball up to `bound`.
pub fn hyper_preimage(
    model: &WeilModel,
    cx: &LatticeComplex,
    h: &GroupHyperCocycle,
    bound: u32,
) -> Result<HyperCycle0> {
    if !cx.is_group_cocycle(h) {
        return Err(Error::Precondition("group side is not a hypercocycle".into()));
    }
    for r in 0..=bound {
        if let Some(hc) = preimage_at(model, cx, h, r) {
            return Ok(hc);
        }
    }
    Err(Error::SupportExhausted { bound })
}

/// Tate–Nakayama pairing of `(z, t)` for `f` with `(φ, ŝ)` for `f̂`, Deligne normalization.
pub fn tn_pairing(
    model: &WeilModel,
    cx: &LatticeComplex,
    group_side: &GroupHyperCocycle,
    dual_side: &DualHyperCocycle,
    bound: u32,
) -> Result<QmodZ> {
    if !cx.is_dual_cocycle(model, dual_side) {
        return Err(Error::Precondition("dual side is not a hypercocycle for the dual complex".into()));
    }
    let hc = hyper_preimage(model, cx, group_side, bound)?;
    Ok(pairing_chain(&hc, dual_side))
}

/// Kottwitz pairing `⟨[z], s⟩ = s(λ)` for the `Ĥ^{-1}` representative `λ` of `[z]`.
pub fn kottwitz_eval(model: &WeilModel, x: &GModule, z: &Cochain, s: &[QmodZ]) -> Result<QmodZ> {
    if !is_dual_invariant(x, s) {
        return Err(Error::Precondition("Kottwitz pairing needs an invariant dual element".into()));
    }
    let lambda = kottwitz_lambda(model, x, z)?;
    Ok(pair(&lambda, s))
}

/// A norm-zero `λ` with `ψ(λ)` cohomologous to `z`.
pub fn kottwitz_lambda(model: &WeilModel, x: &GModule, z: &Cochain) -> Result<Vec<BigInt>> {
    let r = x.rank();
    let tx = x.tensor(model.c_module())?;
    let ord = model.group().order();
    let zc = ord * tx.rank();
    let top = x.norm_matrix().hcat(&IntMatrix::zeros(r, tx.rank()));
    let bottom = psi_matrix(model, x).hcat(&differential_matrix(&tx, 0).neg());
    let a = top.vcat(&bottom);
    let mut b = zero_vec(r);
    b.extend(z.flat());
    let sol = solve_int(&a, &b, &IntMatrix::zeros(r + zc, 0))
        .ok_or_else(|| Error::Consistency(format!("class not in the image of psi (cochain {:?})", z.values())))?;
    Ok(sol[..r].to_vec())
}

/// A 1-cycle `x` with `−φ(x) = t` supported in the ball of radius `r`.
fn langlands_cycle_at(model: &WeilModel, x: &GModule, t: &[BigInt], r: u32) -> Option<FinSuppChain> {
    let rx = x.rank();
    let m = model.c_rank();
    let ball = model.ball(r);
    let n = ball.len() * rx;
    let mut a = IntMatrix::zeros(rx + rx * m, n);
    let id = IntMatrix::identity(rx);
    for (k, w) in ball.iter().enumerate() {
        let bnd = x.action(model.group().inv(w.s)).sub(&id);
        let ph = phi_matrix(model, x, w).neg();
        for i in 0..rx {
            for j in 0..rx {
                a.set(i, k * rx + j, bnd.get(i, j).clone());
            }
        }
        for i in 0..rx * m {
            for j in 0..rx {
                a.set(rx + i, k * rx + j, ph.get(i, j).clone());
            }
        }
    }
    let mut b = zero_vec(rx);
    b.extend(t.iter().cloned());
    let sol = solve_int(&a, &b, &IntMatrix::zeros(rx + rx * m, 0))?;
    Some(chain_from_solution(rx, &ball, &sol))
}

/// Langlands-convention value `[φ](t) = Σ_w φ(w)(x_w)` where `x` is a 1-cycle with `−φ(x) = t`.
pub fn langlands_eval(model: &WeilModel, x: &GModule, param: &LocalParameter, t: &[BigInt], bound: u32) -> Result<QmodZ> {
    let tx = x.tensor(model.c_module())?;
    if !tx.is_invariant(t) {
        return Err(Error::Precondition("Langlands pairing needs a rational point".into()));
    }
    for r in 0..=bound {
        if let Some(cyc) = langlands_cycle_at(model, x, t, r) {
            let mut acc = QmodZ::zero();
            for (w, v) in cyc.terms() {
                acc = acc + pair(v, &param.eval(w));
            }
            return Ok(acc);
        }
    }
    Err(Error::SupportExhausted { bound })
}

/// `⟨g_*(z, t), f̂_*(φ, s)⟩` for `T →f U →g V`, where `(z, t)` is a hypercocycle for `f`
/// and `(φ, s)` one for `ĝ`.
#[allow(clippy::too_many_arguments)]
pub fn functor_pairing(
    model: &WeilModel,
    x: &GModule,
    y: &GModule,
    v: &GModule,
    f: &IntMatrix,
    g: &IntMatrix,
    group_side: &GroupHyperCocycle,
    dual_side: &DualHyperCocycle,
    bound: u32,
) -> Result<QmodZ> {
    let cx_f = LatticeComplex::new(model, x.clone(), y.clone(), f.clone())?;
    let cx_g = LatticeComplex::new(model, y.clone(), v.clone(), g.clone())?;
    if !cx_f.is_group_cocycle(group_side) {
        return Err(Error::Precondition("group side is not a hypercocycle for f".into()));
    }
    if !cx_g.is_dual_cocycle(model, dual_side) {
        return Err(Error::Precondition("dual side is not a hypercocycle for the dual of g".into()));
    }
    let gf = g.mul(f);
    let cx = LatticeComplex::new(model, x.clone(), v.clone(), gf)?;
    let pushed_group = GroupHyperCocycle {
        z: group_side.z.clone(),
        t: g.kron(&IntMatrix::identity(model.c_rank())).mul_vec(&group_side.t),
    };
    let pushed_dual = DualHyperCocycle { param: dual_side.param.clone(), t_hat: dual_map(f, &dual_side.t_hat) };
    tn_pairing(model, &cx, &pushed_group, &pushed_dual, bound)
}

/// The hypercocycle `(0, t)`, i.e. the image of `t ∈ U(F)`.
pub fn include_target(cx: &LatticeComplex, model: &WeilModel, t: &[BigInt]) -> GroupHyperCocycle {
    GroupHyperCocycle { z: Cochain::zero(model.group().order(), 1, cx.torus_source().rank()), t: t.to_vec() }
}

/// Adds two group hypercocycles.
pub fn add_group(a: &GroupHyperCocycle, b: &GroupHyperCocycle) -> GroupHyperCocycle {
    let ord_vals: Vec<Vec<BigInt>> = a.z.values().iter().zip(b.z.values()).map(|(x, y)| vec_add(x, y)).collect();
    GroupHyperCocycle {
        z: Cochain::from_values(1, a.z.rank(), ord_vals).expect("same shape"),
        t: vec_add(&a.t, &b.t),
    }
}

/// Whether `a − b` is a hypercoboundary `(∂u₀, f u₀)`.
pub fn group_cohomologous(model: &WeilModel, cx: &LatticeComplex, a: &GroupHyperCocycle, b: &GroupHyperCocycle) -> bool {
    hypercoboundary_witness(model, cx, a, b).is_some()
}

/// Some `u₀` with `a − b = (∂u₀, f u₀)`.
pub fn hypercoboundary_witness(
    model: &WeilModel,
    cx: &LatticeComplex,
    a: &GroupHyperCocycle,
    b: &GroupHyperCocycle,
) -> Option<Vec<BigInt>> {
    let _ = model;
    let d0 = differential_matrix(cx.torus_source(), 0);
    let m = d0.vcat(cx.f_torus());
    let mut rhs = vec_sub(&a.z.flat(), &b.z.flat());
    rhs.extend(vec_sub(&a.t, &b.t));
    solve_int(&m, &rhs, &IntMatrix::zeros(m.rows(), 0))
}

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::datum::{
    is_dual_witness, is_group_witness, stab_phi, stab_z, DualStabilizer, GroupStabilizer, InnerTwist, TorusDatum,
};
use crate::cohom::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactlin::{
    cyc_from_qz, qz_vec_add, qz_vec_sub, vec_add, vec_is_zero, vec_sub, CycScalar, QmodZ,
};
use crate::repkit::{is_irreducible, mat_scale, mat_trace, twisted_irreps, CycMatrix, Rep, TwistedExtension};
use crate::weilmodel::{
    kottwitz_eval, langlands_eval, tn_pairing, DualHyperCocycle, GroupHyperCocycle, LatticeComplex, LocalParameter,
    WeilModel,
};

/// Everything the correspondence needs at one place: the stabilizer
/// `A' = A^{[z]} ∩ A^{[φ]}`, chosen witnesses, and the pushed factor sets.
#[derive(Clone, Debug)]
pub struct LocalLlc {
    model: WeilModel,
    td: TorusDatum,
    z: InnerTwist,
    phi: LocalParameter,
    bound: u32,
    sz: GroupStabilizer,
    sp: DualStabilizer,
    emb: Vec<usize>,
    ext_alpha: TwistedExtension,
    ext_beta: TwistedExtension,
    // τ_a = P(a; s_a, t_{a^{-1}}) on A'
    tau: Vec<QmodZ>,
}

/// One member of an L-packet: `η` on the `ᾱ`-extension of `A'` with its `ρ`.
#[derive(Clone, Debug)]
pub struct PacketMember {
    pub eta: Rep,
    pub rho: Rep,
    /// Degree after inducing from `T̃_z(F)^{[φ]}` to `T̃_z(F)`.
    pub full_degree: usize,
    pub unramified: bool,
}

impl LocalLlc {
    pub fn new(model: &WeilModel, td: &TorusDatum, z: &InnerTwist, phi: &LocalParameter, bound: u32) -> Result<Self> {
        let sz = stab_z(model, td, z)?;
        let sp = stab_phi(model, td, phi)?;
        Self::with_witnesses(model, td, z, phi, sz, sp, bound)
    }

    /// Builds the data from caller-chosen witnesses, which are validated.
    pub fn with_witnesses(
        model: &WeilModel,
        td: &TorusDatum,
        z: &InnerTwist,
        phi: &LocalParameter,
        sz: GroupStabilizer,
        sp: DualStabilizer,
        bound: u32,
    ) -> Result<Self> {
        let ag = td.a_group();
        let members: Vec<usize> = sz.members.iter().copied().filter(|&a| sp.contains(a)).collect();
        for &a in &members {
            let t = sz.witness(a).ok_or_else(|| Error::Precondition(format!("missing group witness for {}", a)))?;
            let s = sp.witness(a).ok_or_else(|| Error::Precondition(format!("missing dual witness for {}", a)))?;
            if !is_group_witness(model, td, z, a, t) || !is_dual_witness(model, td, phi, a, s) {
                return Err(Error::Precondition(format!("witness for {} does not satisfy its equation", a)));
            }
        }
        let e = ag.identity();
        if !vec_is_zero(sz.witness(e).expect("identity is a member"))
            || !sp.witness(e).expect("identity is a member").iter().all(QmodZ::is_zero)
        {
            return Err(Error::Precondition("witnesses at the identity must vanish".into()));
        }
        let (sub, emb) = ag.subgroup_as_group(&members)?;
        let mut llc = LocalLlc {
            model: model.clone(),
            td: td.clone(),
            z: z.clone(),
            phi: phi.clone(),
            bound,
            sz,
            sp,
            emb,
            ext_alpha: TwistedExtension::untwisted(sub.clone()),
            ext_beta: TwistedExtension::untwisted(sub),
            tau: Vec::new(),
        };
        let (alpha, beta) = llc.factor_sets()?;
        llc.ext_alpha = TwistedExtension::new(llc.sub_group().clone(), alpha)
            .map_err(|err| Error::Consistency(format!("pushed α is not a cocycle: {}", err)))?;
        llc.ext_beta = TwistedExtension::new(llc.sub_group().clone(), beta)
            .map_err(|err| Error::Consistency(format!("pushed β is not a cocycle: {}", err)))?;
        llc.tau = (0..llc.emb.len())
            .map(|i| {
                let a = llc.emb[i];
                let t = llc.t_wit(ag.inv(a)).clone();
                llc.pairing(a, &llc.s_wit(a).clone(), &t)
            })
            .collect::<Result<_>>()?;
        Ok(llc)
    }

    pub fn model(&self) -> &WeilModel {
        &self.model
    }

    pub fn torus(&self) -> &TorusDatum {
        &self.td
    }

    pub fn twist(&self) -> &InnerTwist {
        &self.z
    }

    pub fn parameter(&self) -> &LocalParameter {
        &self.phi
    }

    pub fn stab_group(&self) -> &GroupStabilizer {
        &self.sz
    }

    pub fn stab_dual(&self) -> &DualStabilizer {
        &self.sp
    }

    /// `A'` as elements of `A`, sorted; index `i` of the sub group is `members()[i]`.
    pub fn members(&self) -> &[usize] {
        &self.emb
    }

    pub fn sub_group(&self) -> &FiniteGroup {
        self.ext_alpha.group()
    }

    pub fn ext_alpha(&self) -> &TwistedExtension {
        &self.ext_alpha
    }

    pub fn ext_beta(&self) -> &TwistedExtension {
        &self.ext_beta
    }

    fn t_wit(&self, a: usize) -> &Vec<BigInt> {
        self.sz.witness(a).expect("member of A'")
    }

    fn s_wit(&self, a: usize) -> &Vec<QmodZ> {
        self.sp.witness(a).expect("member of A'")
    }

    fn index_of(&self, a: usize) -> Result<usize> {
        self.emb.binary_search(&a).map_err(|_| Error::Precondition(format!("{} is not in the stabilizer", a)))
    }

    /// `[φ](t)` for a rational point `t` of `T`.
    pub fn phi_char(&self, t: &[BigInt]) -> Result<QmodZ> {
        langlands_eval(&self.model, self.td.x(), &self.phi, t, self.bound)
    }

    /// `[z](s)` for an invariant point `s` of the dual torus.
    pub fn z_char(&self, s: &[QmodZ]) -> Result<QmodZ> {
        kottwitz_eval(&self.model, self.td.x(), &self.z.z, s)
    }

    /// `P(a; s, t)`, the additive Tate–Nakayama pairing of `(φ^{-1}, s)` with `(z^{-1}, t)`
    /// for `(s, a) ∈ S̃` and `(t, a^{-1}) ∈ T̃_z`.
    pub fn pairing(&self, a: usize, s: &[QmodZ], t: &[BigInt]) -> Result<QmodZ> {
        let a_inv = self.td.a_group().inv(a);
        let cx = LatticeComplex::endo(&self.model, self.td.x().clone(), self.td.one_minus(a_inv))?;
        let group = GroupHyperCocycle { z: self.z.neg(), t: t.to_vec() };
        let dual = DualHyperCocycle { param: self.phi.neg(), t_hat: s.to_vec() };
        tn_pairing(&self.model, &cx, &group, &dual, self.bound)
    }

    /// `ᾱ = [φ]∘α` and `β̄ = [z]∘β` on `A'`, indexed by the sub group.
    pub fn factor_sets(&self) -> Result<(Vec<Vec<QmodZ>>, Vec<Vec<QmodZ>>)> {
        let ag = self.td.a_group();
        let k = self.emb.len();
        let mut alpha = vec![vec![QmodZ::zero(); k]; k];
        let mut beta = vec![vec![QmodZ::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (self.emb[i], self.emb[j]);
                let ab = ag.mul(a, b);
                let t = vec_sub(
                    &vec_add(self.t_wit(a), &self.td.alpha_torus(&self.model, a).mul_vec(self.t_wit(b))),
                    self.t_wit(ab),
                );
                alpha[i][j] = self.phi_char(&t)?;
                let s = qz_vec_sub(&qz_vec_add(self.s_wit(a), &self.td.act_dual(a, self.s_wit(b))), self.s_wit(ab));
                beta[i][j] = self.z_char(&s)?;
            }
        }
        Ok((alpha, beta))
    }

    /// `ρ̄(a) = e(−τ_a − ᾱ(a^{-1}, a))·η̄(a)`, from the relation
    /// `ρ(s, a)·η(t, a^{-1}) = e(−P(a; s, t))`.
    pub fn llc_from_eta(&self, eta: &Rep) -> Result<Rep> {
        if eta.ext() != &self.ext_alpha {
            return Err(Error::Precondition("η must live on the ᾱ-twisted extension of the stabilizer".into()));
        }
        let h = self.sub_group();
        let images: Vec<CycMatrix> = (0..h.order())
            .map(|i| {
                let c = -(&self.tau[i] + self.ext_alpha.omega(h.inv(i), i));
                mat_scale(eta.image(i), &cyc_from_qz(&c))
            })
            .collect();
        let rho = Rep::new(self.ext_beta.clone(), images)
            .map_err(|err| Error::Consistency(format!("related ρ is not a projective representation: {}", err)))?;
        if is_irreducible(eta)? && !is_irreducible(&rho)? {
            return Err(Error::Consistency("related ρ of an irreducible η is reducible".into()));
        }
        Ok(rho)
    }

    /// The inverse direction: `η̄(a) = e(−β̄(a^{-1}, a) − P(a^{-1}; s_{a^{-1}}, t_a))·ρ̄(a)`.
    pub fn eta_from_rho(&self, rho: &Rep) -> Result<Rep> {
        if rho.ext() != &self.ext_beta {
            return Err(Error::Precondition("ρ must live on the β̄-twisted extension of the stabilizer".into()));
        }
        let h = self.sub_group();
        let ag = self.td.a_group();
        let images: Vec<CycMatrix> = (0..h.order())
            .map(|i| {
                let a = self.emb[i];
                let a_inv = ag.inv(a);
                let p = self.pairing(a_inv, self.s_wit(a_inv), self.t_wit(a))?;
                let c = -(&p + self.ext_beta.omega(h.inv(i), i));
                Ok(mat_scale(rho.image(i), &cyc_from_qz(&c)))
            })
            .collect::<Result<_>>()?;
        Rep::new(self.ext_alpha.clone(), images)
            .map_err(|err| Error::Consistency(format!("related η is not a projective representation: {}", err)))
    }

    /// `ρ(s, a) = e([z](s − s_a))·ρ̄(a)`.
    pub fn rho_at(&self, rho: &Rep, s: &[QmodZ], a: usize) -> Result<CycMatrix> {
        let i = self.index_of(a)?;
        let c = self.z_char(&qz_vec_sub(s, self.s_wit(a)))?;
        Ok(mat_scale(rho.image(i), &cyc_from_qz(&c)))
    }

    /// `η(t, a) = e([φ](t − t_a))·η̄(a)`.
    pub fn eta_at(&self, eta: &Rep, t: &[BigInt], a: usize) -> Result<CycMatrix> {
        let i = self.index_of(a)?;
        let c = self.phi_char(&vec_sub(t, self.t_wit(a)))?;
        Ok(mat_scale(eta.image(i), &cyc_from_qz(&c)))
    }

    /// Checks `ρ(s, a)·η(t, a^{-1}) = e(−P(a; s, t))` at one pair of points.
    pub fn relation_holds(&self, rho: &Rep, eta: &Rep, a: usize, s: &[QmodZ], t: &[BigInt]) -> Result<bool> {
        let a_inv = self.td.a_group().inv(a);
        if !is_dual_witness(&self.model, &self.td, &self.phi, a, s)
            || !is_group_witness(&self.model, &self.td, &self.z, a_inv, t)
        {
            return Err(Error::Precondition("points are not in the extensions".into()));
        }
        let lhs = crate::repkit::mat_mul(&self.rho_at(rho, s, a)?, &self.eta_at(eta, t, a_inv)?);
        let p = self.pairing(a, s, t)?;
        let rhs = mat_scale(&crate::repkit::mat_identity(rho.degree()), &cyc_from_qz(&-p));
        Ok(lhs == rhs)
    }

    /// Kaletha's construction: with `h(a) = ᾱ(a^{-1}, a) + τ_a`, the map `x ⊠ a ↦ x·e(−h(a)) ⊠ a`
    /// carries the `ᾱ`-extension to the `β̄`-extension.
    pub fn kaletha_construction(&self, eta: &Rep) -> Result<Rep> {
        if eta.ext() != &self.ext_alpha {
            return Err(Error::Precondition("η must live on the ᾱ-twisted extension of the stabilizer".into()));
        }
        let g = self.sub_group();
        let hv: Vec<QmodZ> = (0..g.order()).map(|i| &self.tau[i] + self.ext_alpha.omega(g.inv(i), i)).collect();
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = &(self.ext_alpha.omega(x, y) - &hv[x]) - &hv[y];
                let rhs = self.ext_beta.omega(x, y) - &hv[g.mul(x, y)];
                if lhs != rhs {
                    return Err(Error::Consistency(format!("the map of extensions is not multiplicative at ({}, {})", x, y)));
                }
            }
        }
        let images = (0..g.order()).map(|i| mat_scale(eta.image(i), &cyc_from_qz(&-(&hv[i])))).collect();
        Rep::new(self.ext_beta.clone(), images)
            .map_err(|err| Error::Consistency(format!("transported η is not a representation: {}", err)))
    }

    /// The same `η`, viewed through the other witnesses of `other` (same `A'`):
    /// `η̄'(a) = e([φ](t'_a − t_a))·η̄(a)`.
    pub fn transport_eta(&self, other: &LocalLlc, eta: &Rep) -> Result<Rep> {
        if other.emb != self.emb {
            return Err(Error::Precondition("stabilizers differ".into()));
        }
        let images: Vec<CycMatrix> = (0..self.emb.len())
            .map(|i| {
                let a = self.emb[i];
                let c = self.phi_char(&vec_sub(other.t_wit(a), self.t_wit(a)))?;
                Ok(mat_scale(eta.image(i), &cyc_from_qz(&c)))
            })
            .collect::<Result<_>>()?;
        Rep::new(other.ext_alpha.clone(), images)
            .map_err(|err| Error::Consistency(format!("transported η is not a representation: {}", err)))
    }

    /// `tr ρ(s, a)` for `s` in the coset of `s_a`.
    pub fn rho_trace(&self, rho: &Rep, s: &[QmodZ], a: usize) -> Result<CycScalar> {
        Ok(mat_trace(&self.rho_at(rho, s, a)?))
    }

    /// `Irr(T̃_z(F)^{[φ]}, [φ])` with the related `ρ`s.
    pub fn local_packet(&self, unramified: bool) -> Result<Vec<PacketMember>> {
        let index = self.sz.members.len() / self.emb.len();
        let mut out = Vec::new();
        for eta in twisted_irreps(&self.ext_alpha)? {
            let rho = self.llc_from_eta(&eta)?;
            let trivial = unramified
                && rho.degree() == 1
                && rho.images().iter().all(|m| m[0][0] == CycScalar::one());
            out.push(PacketMember { full_degree: index * eta.degree(), eta, rho, unramified: trivial });
        }
        Ok(out)
    }

    /// For `z = ∂d`: the `η₁` related to `ρ = 1` pulls back along `γ_d(t, a) = (t − d + a·d, a)`
    /// to `(t, a) ↦ [φ](t)`; checked on generators of `T(F)` and every `a ∈ A'`.
    pub fn generic_check(&self, d: &[BigInt]) -> Result<bool> {
        let expected = InnerTwist::coboundary(&self.model, &self.td, d)?;
        if expected.z != self.z.z {
            return Err(Error::Precondition("twist is not the coboundary of the given element".into()));
        }
        if !self.ext_beta.is_untwisted() {
            return Err(Error::Consistency("β̄ is nontrivial for a coboundary twist".into()));
        }
        let one = Rep::trivial(self.sub_group().clone());
        let eta1 = self.eta_from_rho(&one)?;
        let tx = self.td.x().tensor(self.model.c_module())?;
        let gens = tx.invariants_gens();
        let mut points: Vec<Vec<BigInt>> = vec![crate::exactlin::zero_vec(tx.rank())];
        points.extend(gens.columns());
        for &a in &self.emb {
            let shift = vec_sub(&self.td.alpha_torus(&self.model, a).mul_vec(d), d);
            for t in &points {
                let lhs = self.eta_at(&eta1, &vec_add(t, &shift), a)?;
                if lhs != vec![vec![cyc_from_qz(&self.phi_char(t)?)]] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A second set of witnesses: `s'_a = s_a + y_a` with `y_a` invariant and `t'_a = t_a + u_a` rational.
pub fn perturb_witnesses(
    llc: &LocalLlc,
    dual_shift: &[Vec<QmodZ>],
    group_shift: &[Vec<BigInt>],
) -> Result<(GroupStabilizer, DualStabilizer)> {
    let mut sz = llc.sz.clone();
    let mut sp = llc.sp.clone();
    let e = llc.td.a_group().identity();
    for (i, &a) in llc.emb.iter().enumerate() {
        if a == e {
            continue;
        }
        if let Some(t) = sz.witnesses[a].as_mut() {
            *t = vec_add(t, &group_shift[i]);
        }
        if let Some(s) = sp.witnesses[a].as_mut() {
            *s = qz_vec_add(s, &dual_shift[i]);
        }
    }
    Ok((sz, sp))
}

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::cohom::GModule;
use crate::error::{Error, Result};
use crate::exactlin::{vec_add, vec_sub, IntMatrix, QmodZ};
use crate::llc_local::{is_dual_witness, is_group_witness, pi0_dual, InnerTwist, LocalLlc, TorusDatum};
use crate::repkit::{is_irreducible, Rep};
use crate::report::CheckReport;
use crate::weilmodel::{LocalParameter, WeilModel};

/// One place: a local fixture together with its decomposition group inside the global `G`.
#[derive(Clone, Debug)]
pub struct PlaceInstance {
    pub label: String,
    /// Local Galois element `i` is the global element `decomposition[i]`.
    pub decomposition: Vec<usize>,
    /// `d` with `z_v = ∂d` when the place is unramified.
    pub unramified: Option<Vec<BigInt>>,
    pub llc: LocalLlc,
}

impl PlaceInstance {
    pub fn new(
        label: &str,
        model: &WeilModel,
        td: &TorusDatum,
        z: &InnerTwist,
        phi: &LocalParameter,
        decomposition: Vec<usize>,
        unramified: Option<Vec<BigInt>>,
        bound: u32,
    ) -> Result<Self> {
        let llc = LocalLlc::new(model, td, z, phi, bound).map_err(|e| Error::at_place(label, e))?;
        Ok(PlaceInstance { label: label.into(), decomposition, unramified, llc })
    }

    /// The localization of a global torus datum along a cyclic decomposition group of order `m`,
    /// generated by `σ^{|G|/m}`; `A` keeps its matrices.
    pub fn localize(global: &TorusDatum, m: usize) -> Result<(TorusDatum, Vec<usize>)> {
        let n = global.x().group().order();
        if m == 0 || n % m != 0 {
            return Err(Error::Precondition(format!("decomposition order {} does not divide {}", m, n)));
        }
        let step = n / m;
        let decomposition: Vec<usize> = (0..m).map(|i| i * step).collect();
        let acts = decomposition.iter().map(|&g| global.x().action(g).clone()).collect();
        let x = GModule::new(crate::cohom::FiniteGroup::cyclic(m), acts)?;
        let ag = global.a_group().clone();
        let a_acts = (0..ag.order()).map(|a| global.alpha(a).clone()).collect();
        Ok((TorusDatum::new(x, ag, a_acts)?, decomposition))
    }

    pub fn model(&self) -> &WeilModel {
        self.llc.model()
    }

    pub fn torus(&self) -> &TorusDatum {
        self.llc.torus()
    }
}

/// A member `a` of `A^{[z],χ}` with its rational point `(t, a)`, recorded place by place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalWitness {
    pub a: usize,
    pub t: Vec<Vec<BigInt>>,
}

/// Finitely many places sharing a torus with `A`-action, plus the global data tying them together.
#[derive(Clone, Debug)]
pub struct GlobalDatum {
    pub td: TorusDatum,
    pub places: Vec<PlaceInstance>,
    /// One witness per element of `A^{[z],χ}`.
    pub witnesses: Vec<GlobalWitness>,
    /// Rational points of `T` on which the product formula is asserted, place by place.
    pub global_points: Vec<Vec<Vec<BigInt>>>,
    /// A global dual witness `s_a` for each entry of `witnesses`, when `T` satisfies Hasse.
    pub hasse: Option<Vec<Vec<QmodZ>>>,
}

/// `⊗_v η̄_v`, one packet member per place.
#[derive(Clone, Debug)]
pub struct AdelicPacketMember {
    pub factors: Vec<Rep>,
    /// Places carrying the unramified member.
    pub cofinite_trivial: Vec<bool>,
}

impl GlobalDatum {
    pub fn witness_of(&self, a: usize) -> Result<&GlobalWitness> {
        self.witnesses
            .iter()
            .find(|w| w.a == a)
            .ok_or_else(|| Error::Precondition(format!("{} is not in the global stabilizer", a)))
    }

    pub fn members(&self) -> Vec<usize> {
        self.witnesses.iter().map(|w| w.a).collect()
    }

    /// The rational points `t_a + a·t_b − t_{ab}` of `T`, which the product formula must kill.
    pub fn derived_points(&self) -> Result<Vec<(usize, usize, Vec<Vec<BigInt>>)>> {
        let ag = self.td.a_group();
        let mut out = Vec::new();
        for wa in &self.witnesses {
            for wb in &self.witnesses {
                let wab = self.witness_of(ag.mul(wa.a, wb.a))?;
                let pts = self
                    .places
                    .iter()
                    .enumerate()
                    .map(|(v, p)| {
                        let moved = p.torus().alpha_torus(p.model(), wa.a).mul_vec(&wb.t[v]);
                        vec_sub(&vec_add(&wa.t[v], &moved), &wab.t[v])
                    })
                    .collect();
                out.push((wa.a, wb.a, pts));
            }
        }
        Ok(out)
    }
}

fn is_rational_point(p: &PlaceInstance, t: &[BigInt]) -> bool {
    match p.torus().x().tensor(p.model().c_module()) {
        Ok(tx) => t.len() == tx.rank() && tx.is_invariant(t),
        Err(_) => false,
    }
}

fn product_formula(gd: &GlobalDatum, pts: &[Vec<BigInt>]) -> Result<QmodZ> {
    let mut acc = QmodZ::zero();
    for (p, t) in gd.places.iter().zip(pts) {
        acc += p.llc.phi_char(t).map_err(|e| Error::at_place(&p.label, e))?;
    }
    Ok(acc)
}

/// Checks the global invariants, naming the offending place or point in each failure.
pub fn validate_global(gd: &GlobalDatum) -> CheckReport {
    let mut rep = CheckReport::new();
    let g = gd.td.x().group();
    let ag = gd.td.a_group();
    let nplaces = gd.places.len();
    for p in &gd.places {
        let lg = p.model().group();
        let hom = p.decomposition.len() == lg.order()
            && p.decomposition.iter().all(|&x| x < g.order())
            && (0..lg.order()).all(|i| {
                (0..lg.order()).all(|j| p.decomposition[lg.mul(i, j)] == g.mul(p.decomposition[i], p.decomposition[j]))
            });
        rep.push(format!("place {}: decomposition group embeds", p.label), hom, "");
        let restricted = hom
            && p.torus().x().rank() == gd.td.x().rank()
            && (0..lg.order()).all(|i| p.torus().x().action(i) == gd.td.x().action(p.decomposition[i]))
            && p.torus().a_group() == ag
            && (0..ag.order()).all(|a| p.torus().alpha(a) == gd.td.alpha(a));
        rep.push(format!("place {}: lattice is the restriction of X", p.label), restricted, "");
        if let Some(d) = &p.unramified {
            let ok = InnerTwist::coboundary(p.model(), p.torus(), d).map(|c| c.z == p.llc.twist().z).unwrap_or(false);
            rep.push(format!("place {}: twist is an integral coboundary", p.label), ok, "");
        }
    }
    let members = gd.members();
    let e = ag.identity();
    let closed = members.contains(&e) && ag.is_subgroup(&members) && {
        let mut m = members.clone();
        m.sort();
        m.windows(2).all(|w| w[0] != w[1])
    };
    rep.push("global stabilizer is a subgroup", closed, format!("{:?}", members));
    for w in &gd.witnesses {
        if w.t.len() != nplaces {
            rep.push(format!("witness for {}: one point per place", w.a), false, "");
            continue;
        }
        for (p, t) in gd.places.iter().zip(&w.t) {
            let in_stab = p.llc.members().contains(&w.a);
            rep.push(format!("place {}: {} stabilizes [z] and [φ]", p.label, w.a), in_stab, "");
            let ok = is_group_witness(p.model(), p.torus(), p.llc.twist(), w.a, t);
            rep.push(format!("place {}: (t, {}) is rational", p.label, w.a), ok, format!("{:?}", t));
        }
    }
    for (k, pts) in gd.global_points.iter().enumerate() {
        if pts.len() != nplaces || !gd.places.iter().zip(pts).all(|(p, t)| is_rational_point(p, t)) {
            rep.push(format!("global point t0#{}: rational at every place", k), false, "");
            continue;
        }
        let integral = gd.places.iter().zip(pts).all(|(p, t)| p.unramified.is_none() || t.iter().all(|x| x.sign() == num_bigint::Sign::NoSign));
        rep.push(format!("global point t0#{}: integral at unramified places", k), integral, "");
        match product_formula(gd, pts) {
            Ok(q) => rep.push(format!("global point t0#{}: product formula", k), q.is_zero(), format!("{} = {:?}", q, pts)),
            Err(err) => rep.push(format!("global point t0#{}: product formula", k), false, format!("{}", err)),
        }
    }
    if closed && gd.witnesses.iter().all(|w| w.t.len() == nplaces) {
        match gd.derived_points() {
            Ok(list) => {
                for (a, b, pts) in list {
                    let name = format!("witness cocycle at ({}, {}): product formula", a, b);
                    match product_formula(gd, &pts) {
                        Ok(q) => rep.push(name, q.is_zero(), format!("{}", q)),
                        Err(err) => rep.push(name, false, format!("{}", err)),
                    }
                }
            }
            Err(err) => rep.push("witness cocycle", false, format!("{}", err)),
        }
    }
    match pi0_dual(&gd.td) {
        Ok(pi0) => {
            for s in pi0.points() {
                let mut acc = QmodZ::zero();
                let mut failed = None;
                for p in &gd.places {
                    match p.llc.z_char(&s) {
                        Ok(q) => acc += q,
                        Err(err) => failed = Some(format!("place {}: {}", p.label, err)),
                    }
                }
                let name = format!("localizations of z sum to zero at s = {:?}", s);
                match failed {
                    Some(d) => rep.push(name, false, d),
                    None => rep.push(name, acc.is_zero(), format!("{}", acc)),
                }
            }
        }
        Err(err) => rep.push("component group of the dual torus", false, format!("{}", err)),
    }
    if let Some(hs) = &gd.hasse {
        let len_ok = hs.len() == gd.witnesses.len();
        rep.push("global dual witnesses: one per stabilizer element", len_ok, "");
        if len_ok {
            for (w, s) in gd.witnesses.iter().zip(hs) {
                for p in &gd.places {
                    let ok = is_dual_witness(p.model(), p.torus(), p.llc.parameter(), w.a, s);
                    rep.push(format!("place {}: global (s, {}) centralizes φ_v", p.label, w.a), ok, format!("{:?}", s));
                }
            }
        }
    }
    rep
}

/// Checks an adelic packet member against the datum: each factor lives on the local
/// extension and is irreducible, flagged places carry `ι(η̄_v) = 1` at an unramified place,
/// and their pairing factors are exactly `1`.
pub fn validate_member(gd: &GlobalDatum, eta: &AdelicPacketMember) -> CheckReport {
    let mut rep = CheckReport::new();
    if eta.factors.len() != gd.places.len() || eta.cofinite_trivial.len() != gd.places.len() {
        rep.push("one factor per place", false, "");
        return rep;
    }
    for (v, p) in gd.places.iter().enumerate() {
        let f = &eta.factors[v];
        let on_ext = f.ext() == p.llc.ext_alpha();
        rep.push(format!("place {}: η̄_v lives on the ᾱ-extension", p.label), on_ext, "");
        if !on_ext {
            continue;
        }
        rep.push(format!("place {}: η̄_v is irreducible", p.label), is_irreducible(f).unwrap_or(false), "");
        if eta.cofinite_trivial[v] {
            rep.push(format!("place {}: flagged place is unramified", p.label), p.unramified.is_some(), "");
            let trivial = p
                .llc
                .llc_from_eta(f)
                .map(|rho| rho.degree() == 1 && rho.images().iter().all(|m| m[0][0] == crate::exactlin::CycScalar::one()))
                .unwrap_or(false);
            rep.push(format!("place {}: ι(η̄_v) = 1", p.label), trivial, "");
            for w in &gd.witnesses {
                let name = format!("place {}: factor at {} is 1", p.label, w.a);
                match super::place_factor(p, v, f, w, None) {
                    Ok(c) => rep.push(name, c == crate::exactlin::CycScalar::one(), format!("{}", c)),
                    Err(err) => rep.push(name, false, format!("{}", err)),
                }
            }
        }
    }
    rep
}

/// `a·φ` for the dual action of `A`.
pub fn act_parameter(td: &TorusDatum, a: usize, phi: &LocalParameter) -> LocalParameter {
    phi.transport(&td.alpha_dual(a))
}

/// Whether two parameters of the same place differ by a coboundary.
pub fn parameters_equivalent(model: &WeilModel, x: &GModule, p: &LocalParameter, q: &LocalParameter) -> bool {
    let diff = p.add(&q.neg());
    let id = IntMatrix::identity(x.rank());
    crate::weilmodel::dual_cocycle_space(model, x, x, &id, Some(&diff)).is_some()
}

/// An `a ∈ A^{[z]}` (at every place) with `a·φ_v ∼ φ'_v` at every place, if any.
pub fn nearly_equivalent(gd: &GlobalDatum, other: &GlobalDatum) -> Result<Option<usize>> {
    if gd.places.len() != other.places.len() {
        return Err(Error::Precondition("data have different place sets".into()));
    }
    let ag = gd.td.a_group();
    'outer: for a in 0..ag.order() {
        for (p, q) in gd.places.iter().zip(&other.places) {
            if !p.llc.stab_group().contains(a) {
                continue 'outer;
            }
            let moved = act_parameter(p.torus(), a, p.llc.parameter());
            if !parameters_equivalent(p.model(), p.torus().x(), &moved, q.llc.parameter()) {
                continue 'outer;
            }
        }
        return Ok(Some(a));
    }
    Ok(None)
}

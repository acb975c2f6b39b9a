//! Ready-made global data: the norm torus of a quadratic extension with `A = {±1}`, and
//! "mirror" pairs of places `(z, φ)`, `(−z, φ)` built from any local fixture.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{AdelicPacketMember, GlobalDatum, GlobalWitness, PlaceInstance};
use crate::cohom::{Cochain, FiniteGroup, GModule};
use crate::error::{Error, Result};
use crate::exactlin::{vec_neg, IntMatrix, QmodZ};
use crate::llc_local::{InnerTwist, TorusDatum};
use crate::repkit::{twisted_irreps, Rep};
use crate::weilmodel::{LocalParameter, WeilModel, DEFAULT_SUPPORT_BOUND};

/// A place of the quadratic extension `E/F` for the norm torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nt2Place {
    /// `E_v = F_v × F_v`: `T(F_v) = F_v^×`, with character `χ_v` of Frobenius value `chi`.
    /// `t` is the valuation of the rational point on the non-identity component.
    Split { chi: QmodZ, sign: bool, t: i64 },
    /// `E_v/F_v` a field; `twisted` when `[z_v]` is the nontrivial class.
    Inert { twisted: bool, sign: bool },
}

/// `X = ℤ` with `σ = −1` and `A = {±1}` acting by inversion.
pub fn nt2_torus() -> TorusDatum {
    let x = GModule::new(FiniteGroup::cyclic(2), vec![IntMatrix::identity(1), IntMatrix::identity(1).neg()])
        .expect("sign module");
    TorusDatum::new(x, FiniteGroup::cyclic(2), vec![IntMatrix::identity(1), IntMatrix::identity(1).neg()])
        .expect("inversion commutes with σ")
}

fn xi(ext: &crate::repkit::TwistedExtension, sign: bool) -> Result<Rep> {
    let n = ext.group().order();
    let values: Vec<QmodZ> = (0..n).map(|i| if sign && i != 0 { QmodZ::new(1, 2) } else { QmodZ::zero() }).collect();
    Rep::one_dim(ext.clone(), &values)
}

/// The norm torus datum over the given places with `η_v = ξ_v∘q_v`; `global_points` are
/// valuations at the split places, in order.
pub fn nt2_global(places: &[Nt2Place], global_points: &[Vec<i64>]) -> Result<(GlobalDatum, AdelicPacketMember)> {
    let td = nt2_torus();
    let mut out = Vec::new();
    let mut factors = Vec::new();
    let mut flags = Vec::new();
    let mut t_minus = Vec::new();
    for (v, p) in places.iter().enumerate() {
        let label = format!("v{}", v + 1);
        let (place, sign, tm) = match p {
            Nt2Place::Split { chi, sign, t } => {
                let (ltd, dec) = PlaceInstance::localize(&td, 1)?;
                let model = WeilModel::canonical_cyclic(1);
                let z = InnerTwist::trivial(&model, &ltd);
                let phi = LocalParameter::from_frobenius(&model, ltd.x(), &[chi.clone()])?;
                let unram = if *sign || *t != 0 || !chi.is_zero() { None } else { Some(vec![BigInt::from(0)]) };
                let place = PlaceInstance::new(&label, &model, &ltd, &z, &phi, dec, unram, DEFAULT_SUPPORT_BOUND)?;
                (place, *sign, vec![BigInt::from(*t)])
            }
            Nt2Place::Inert { twisted, sign } => {
                let (ltd, dec) = PlaceInstance::localize(&td, 2)?;
                let model = WeilModel::canonical_cyclic(2);
                let z = if *twisted {
                    let c = Cochain::from_values(1, 1, vec![vec![BigInt::from(0)], vec![BigInt::from(1)]])?;
                    InnerTwist::new(&model, &ltd, c)?
                } else {
                    InnerTwist::trivial(&model, &ltd)
                };
                let phi = LocalParameter::trivial(&model, ltd.x());
                let unram = if *twisted || *sign { None } else { Some(vec![BigInt::from(0)]) };
                let place = PlaceInstance::new(&label, &model, &ltd, &z, &phi, dec, unram, DEFAULT_SUPPORT_BOUND)?;
                let tm = vec![BigInt::from(if *twisted { 1 } else { 0 })];
                (place, *sign, tm)
            }
        };
        factors.push(xi(place.llc.ext_alpha(), sign)?);
        flags.push(place.unramified.is_some());
        t_minus.push(tm);
        out.push(place);
    }
    let zero: Vec<Vec<BigInt>> = out.iter().map(|_| vec![BigInt::from(0)]).collect();
    let mut witnesses = vec![GlobalWitness { a: 0, t: zero }];
    let mut hasse = vec![vec![QmodZ::zero()]];
    if out.iter().all(|p| p.llc.members().contains(&1)) {
        witnesses.push(GlobalWitness { a: 1, t: t_minus });
        hasse.push(vec![QmodZ::zero()]);
    }
    let split: Vec<usize> = places.iter().enumerate().filter(|(_, p)| matches!(p, Nt2Place::Split { .. })).map(|(v, _)| v).collect();
    let mut pts = Vec::new();
    for vals in global_points {
        if vals.len() != split.len() {
            return Err(Error::Precondition("one valuation per split place required".into()));
        }
        let mut pt: Vec<Vec<BigInt>> = out.iter().map(|_| vec![BigInt::from(0)]).collect();
        for (k, &v) in split.iter().enumerate() {
            pt[v] = vec![BigInt::from(vals[k])];
        }
        pts.push(pt);
    }
    let gd = GlobalDatum { td, places: out, witnesses, global_points: pts, hasse: Some(hasse) };
    Ok((gd, AdelicPacketMember { factors, cofinite_trivial: flags }))
}

/// Two places with the full decomposition group carrying `(z, φ)` and `(−z, φ)`; the global
/// witness for `a` is `(t_a, −t_a)` and the global dual witness is `s_a`.
/// `members` picks the packet member at each place by enumeration index.
pub fn mirror_global(
    model: &WeilModel,
    td: &TorusDatum,
    z: &InnerTwist,
    phi: &LocalParameter,
    members: [usize; 2],
    bound: u32,
) -> Result<(GlobalDatum, AdelicPacketMember)> {
    let dec: Vec<usize> = (0..model.group().order()).collect();
    let minus = InnerTwist { z: z.neg() };
    let p1 = PlaceInstance::new("v1", model, td, z, phi, dec.clone(), None, bound)?;
    let p2 = PlaceInstance::new("v2", model, td, &minus, phi, dec, None, bound)?;
    let mut witnesses = Vec::new();
    let mut hasse = Vec::new();
    for &a in p1.llc.members() {
        let t = p1.llc.stab_group().witness(a).expect("member").clone();
        witnesses.push(GlobalWitness { a, t: vec![t.clone(), vec_neg(&t)] });
        hasse.push(p1.llc.stab_dual().witness(a).expect("member").clone());
    }
    let tx = td.x().tensor(model.c_module())?;
    let global_points = tx.invariants_gens().columns().into_iter().map(|u| vec![u.clone(), vec_neg(&u)]).collect();
    let mut factors = Vec::new();
    for (p, &k) in [&p1, &p2].iter().zip(&members) {
        let irr = twisted_irreps(p.llc.ext_alpha())?;
        let eta = irr.get(k).ok_or_else(|| Error::Precondition(format!("packet has {} members", irr.len())))?;
        factors.push(eta.clone());
    }
    let gd = GlobalDatum { td: td.clone(), places: vec![p1, p2], witnesses, global_points, hasse: Some(hasse) };
    Ok((gd, AdelicPacketMember { factors, cofinite_trivial: vec![false, false] }))
}

/// Short description of an NT2 place list, for test output.
pub fn nt2_describe(places: &[Nt2Place]) -> String {
    let parts: Vec<String> = places
        .iter()
        .map(|p| match p {
            Nt2Place::Split { chi, sign, t } => format!("split(χ={}, ξ={}, t={})", chi, if *sign { "sgn" } else { "1" }, t),
            Nt2Place::Inert { twisted, sign } => {
                format!("inert({}, ξ={})", if *twisted { "z≠0" } else { "z=0" }, if *sign { "sgn" } else { "1" })
            }
        })
        .collect();
    parts.join(" ")
}

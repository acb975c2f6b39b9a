//! Finite multi-place harness: global data, the global pairing, both multiplicity
//! routes, the Hasse shortcut and the catalog of rank-one disconnected tori.

mod catalog;
mod datum;
pub mod examples;

pub use catalog::{rank1_catalog, CatalogEntry, NormOracle, CATALOG_CASES};
pub use datum::{
    act_parameter, nearly_equivalent, parameters_equivalent, validate_global, validate_member, AdelicPacketMember,
    GlobalDatum, GlobalWitness, PlaceInstance,
};

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactlin::{cyc_average, cyc_from_qz, CycScalar, QmodZ};
use crate::repkit::{mat_trace, Rep};

/// Dual witnesses chosen per place, overriding the local defaults `s_{a,v}`.
pub type PlaceDualWitnesses<'a> = Option<&'a [Vec<QmodZ>]>;

/// `e(−P_v(a^{-1}; −a^{-1}·s_v, t_v))·tr ρ_v(s_v, a)` at one place.
fn place_factor(
    p: &PlaceInstance,
    v: usize,
    eta_v: &Rep,
    w: &GlobalWitness,
    s_override: Option<&[QmodZ]>,
) -> Result<CycScalar> {
    let wrap = |e| Error::at_place(&p.label, e);
    let llc = &p.llc;
    let a = w.a;
    let a_inv = p.torus().a_group().inv(a);
    let s = match s_override {
        Some(s) => s.to_vec(),
        None => llc
            .stab_dual()
            .witness(a)
            .cloned()
            .ok_or_else(|| wrap(Error::Precondition(format!("{} does not stabilize φ_v", a))))?,
    };
    let s_inv: Vec<QmodZ> = p.torus().act_dual(a_inv, &s).iter().map(|x| -x).collect();
    let pv = llc.pairing(a_inv, &s_inv, &w.t[v]).map_err(wrap)?;
    let rho = llc.llc_from_eta(eta_v).map_err(wrap)?;
    let tr = llc.rho_trace(&rho, &s, a).map_err(wrap)?;
    Ok(&cyc_from_qz(&-pv) * &tr)
}

fn check_member(gd: &GlobalDatum, eta: &AdelicPacketMember) -> Result<()> {
    if eta.factors.len() != gd.places.len() || eta.cofinite_trivial.len() != gd.places.len() {
        return Err(Error::Precondition("one packet member per place required".into()));
    }
    Ok(())
}

/// `⟨a, η⟩ = Π_v ⟨(φ_v^{-1}, a^{-1}(s_v^{-1})), (z_v^{-1}, t)⟩^{-1}·tr ρ_v(s_v, a)`.
///
/// Places carrying the unramified member are verified to contribute exactly `1` and skipped.
pub fn pairing_global_with(
    gd: &GlobalDatum,
    eta: &AdelicPacketMember,
    w: &GlobalWitness,
    s: PlaceDualWitnesses<'_>,
) -> Result<CycScalar> {
    check_member(gd, eta)?;
    let mut acc = CycScalar::one();
    for (v, p) in gd.places.iter().enumerate() {
        let f = place_factor(p, v, &eta.factors[v], w, s.map(|s| s[v].as_slice()))?;
        if eta.cofinite_trivial[v] {
            if f != CycScalar::one() {
                return Err(Error::at_place(&p.label, Error::Consistency(format!("unramified factor is {}", f))));
            }
            continue;
        }
        acc = &acc * &f;
    }
    Ok(acc)
}

pub fn pairing_global(gd: &GlobalDatum, eta: &AdelicPacketMember, a: usize) -> Result<CycScalar> {
    pairing_global_with(gd, eta, gd.witness_of(a)?, None)
}

/// The per-place factors of the pairing, in place order.
pub fn pairing_factors(gd: &GlobalDatum, eta: &AdelicPacketMember, a: usize) -> Result<Vec<CycScalar>> {
    check_member(gd, eta)?;
    let w = gd.witness_of(a)?;
    gd.places.iter().enumerate().map(|(v, p)| place_factor(p, v, &eta.factors[v], w, None)).collect()
}

/// `tr η̄|(t, a) = Π_v tr η_v(t_v, a)`, from representation data alone.
pub fn automorphic_character(gd: &GlobalDatum, eta: &AdelicPacketMember, w: &GlobalWitness) -> Result<CycScalar> {
    check_member(gd, eta)?;
    let mut acc = CycScalar::one();
    for (v, p) in gd.places.iter().enumerate() {
        let m = p.llc.eta_at(&eta.factors[v], &w.t[v], w.a).map_err(|e| Error::at_place(&p.label, e))?;
        acc = &acc * &mat_trace(&m);
    }
    Ok(acc)
}

fn integer_average(values: &[CycScalar], what: &str) -> Result<BigInt> {
    let avg: BigRational = cyc_average(values)?;
    if !avg.is_integer() || avg.is_negative() {
        return Err(Error::Consistency(format!("{} average {} is not a nonnegative integer", what, avg)));
    }
    Ok(avg.to_integer())
}

/// `m_{η,φ} = (1/|A^{[z],χ}|)·Σ_a ⟨a, η⟩`.
pub fn mult_dual(gd: &GlobalDatum, eta: &AdelicPacketMember) -> Result<BigInt> {
    let vals: Vec<CycScalar> =
        gd.witnesses.iter().map(|w| pairing_global_with(gd, eta, w, None)).collect::<Result<_>>()?;
    integer_average(&vals, "dual")
}

/// `(1/|A^{[z],χ}|)·Σ_a tr η̄|(a)`.
pub fn mult_automorphic(gd: &GlobalDatum, eta: &AdelicPacketMember) -> Result<BigInt> {
    let vals: Vec<CycScalar> =
        gd.witnesses.iter().map(|w| automorphic_character(gd, eta, w)).collect::<Result<_>>()?;
    integer_average(&vals, "automorphic")
}

/// `m_η` as the sum over declared classes `[[φ]]`, which must be pairwise not nearly equivalent.
pub fn mult_total(contributions: &[(GlobalDatum, AdelicPacketMember)]) -> Result<BigInt> {
    for i in 0..contributions.len() {
        for j in i + 1..contributions.len() {
            if let Some(a) = nearly_equivalent(&contributions[i].0, &contributions[j].0)? {
                return Err(Error::Precondition(format!("classes {} and {} are nearly equivalent via {}", i, j, a)));
            }
        }
    }
    contributions.iter().map(|(gd, eta)| mult_dual(gd, eta)).sum()
}

fn hasse_s<'a>(gd: &'a GlobalDatum, a: usize) -> Result<&'a Vec<QmodZ>> {
    let hs = gd.hasse.as_ref().ok_or_else(|| Error::Precondition("datum carries no global dual witnesses".into()))?;
    let k = gd
        .witnesses
        .iter()
        .position(|w| w.a == a)
        .ok_or_else(|| Error::Precondition(format!("{} is not in the global stabilizer", a)))?;
    let s = hs.get(k).ok_or_else(|| Error::Precondition("missing global dual witness".into()))?;
    for p in &gd.places {
        if !crate::llc_local::is_dual_witness(p.model(), p.torus(), p.llc.parameter(), a, s) {
            return Err(Error::at_place(&p.label, Error::Precondition(format!("global (s, {}) is not a witness", a))));
        }
    }
    Ok(s)
}

/// `Σ_v P_v(a^{-1}; −a^{-1}·s, t_v)` for the global `s`, which vanishes under Hasse.
pub fn hasse_tn_sum(gd: &GlobalDatum, a: usize) -> Result<QmodZ> {
    let s = hasse_s(gd, a)?;
    let w = gd.witness_of(a)?;
    let mut acc = QmodZ::zero();
    for (v, p) in gd.places.iter().enumerate() {
        let a_inv = p.torus().a_group().inv(a);
        let s_inv: Vec<QmodZ> = p.torus().act_dual(a_inv, s).iter().map(|x| -x).collect();
        acc += p.llc.pairing(a_inv, &s_inv, &w.t[v]).map_err(|e| Error::at_place(&p.label, e))?;
    }
    Ok(acc)
}

/// `⟨a, η⟩ = Π_v tr ρ_v(s, a)` for a global `s`; checked against the full pairing.
pub fn hasse_pairing(gd: &GlobalDatum, eta: &AdelicPacketMember, a: usize) -> Result<CycScalar> {
    check_member(gd, eta)?;
    let s = hasse_s(gd, a)?;
    let mut acc = CycScalar::one();
    for (v, p) in gd.places.iter().enumerate() {
        let wrap = |e| Error::at_place(&p.label, e);
        let rho = p.llc.llc_from_eta(&eta.factors[v]).map_err(wrap)?;
        acc = &acc * &p.llc.rho_trace(&rho, s, a).map_err(wrap)?;
    }
    let per_place: Vec<Vec<QmodZ>> = gd.places.iter().map(|_| s.clone()).collect();
    let full = pairing_global_with(gd, eta, gd.witness_of(a)?, Some(&per_place))?;
    if full != acc {
        return Err(Error::Consistency(format!("Hasse shortcut {} differs from the pairing {}", acc, full)));
    }
    Ok(acc)
}

/// Both routes to `m_{η,φ}` with the per-element values behind them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub members: Vec<usize>,
    pub pairing: Vec<CycScalar>,
    pub character: Vec<CycScalar>,
    pub mult_dual: BigInt,
    pub mult_automorphic: BigInt,
}

impl MultiplicityReport {
    pub fn agree(&self) -> bool {
        self.pairing == self.character && self.mult_dual == self.mult_automorphic
    }
}

pub fn multiplicity_report(gd: &GlobalDatum, eta: &AdelicPacketMember) -> Result<MultiplicityReport> {
    let pairing: Vec<CycScalar> =
        gd.witnesses.iter().map(|w| pairing_global_with(gd, eta, w, None)).collect::<Result<_>>()?;
    let character: Vec<CycScalar> =
        gd.witnesses.iter().map(|w| automorphic_character(gd, eta, w)).collect::<Result<_>>()?;
    Ok(MultiplicityReport {
        members: gd.members(),
        mult_dual: integer_average(&pairing, "dual")?,
        mult_automorphic: integer_average(&character, "automorphic")?,
        pairing,
        character,
    })
}

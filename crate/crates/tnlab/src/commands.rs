//! One function per subcommand; each returns JSON results plus table rows.

use serde_json::{json, Value};

use tnlab_core::cohom::{cohomology, hyper_h0, hyper_h1, tate, validate_class_module, CohomologyGroup, GModule};
use tnlab_core::exactlin::{CycScalar, QmodZ};
use tnlab_core::global_mult::{
    hasse_pairing, hasse_tn_sum, mult_total, multiplicity_report, rank1_catalog, validate_global, validate_member,
    NormOracle,
};
use tnlab_core::llc_local::{pi0_dual, LocalLlc};
use tnlab_core::repkit::{character, Rep};
use tnlab_core::weilmodel::{functor_pairing, kottwitz_eval, langlands_eval, tn_pairing, LatticeComplex};
use tnlab_core::{CheckReport, Error, Result};

use crate::instance::{self, global_blocks, InstanceFile, Loaded};

/// Results of one command; `valid` is false when a validation step failed.
pub struct Outcome {
    pub results: Value,
    pub rows: Vec<(String, String)>,
    pub valid: bool,
}

impl Outcome {
    fn ok(results: Value, rows: Vec<(String, String)>) -> Self {
        Outcome { results, rows, valid: true }
    }
}

fn row(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

/// `Z/2 x Z`, or `0`.
pub fn describe_group(h: &CohomologyGroup) -> String {
    h.group().to_string()
}

fn group_json(h: &CohomologyGroup) -> Value {
    let inv: Vec<String> = h.group().invariants().iter().map(|d| d.to_string()).collect();
    json!({ "degree": h.degree(), "invariants": inv, "group": describe_group(h) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohomKind {
    Group(usize),
    Tate(i32),
    Hyper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleChoice {
    X,
    TorusModel,
    Dual,
}

pub fn cohomology_cmd(inst: &InstanceFile, l: &Loaded, kind: CohomKind, which: ModuleChoice) -> Result<Outcome> {
    let module: GModule = match which {
        ModuleChoice::X => l.td.x().clone(),
        ModuleChoice::TorusModel => l.td.x().tensor(l.model.c_module())?,
        ModuleChoice::Dual => l.td.x().dual()?,
    };
    let label = match which {
        ModuleChoice::X => "X",
        ModuleChoice::TorusModel => "X⊗C",
        ModuleChoice::Dual => "X^*",
    };
    match kind {
        CohomKind::Group(k) => {
            let h = cohomology(&module, k)?;
            Ok(Outcome::ok(
                json!({ "kind": "group", "module": label, "result": group_json(&h) }),
                vec![row(format!("H^{}(G, {})", k, label), describe_group(&h))],
            ))
        }
        CohomKind::Tate(k) => {
            let h = tate(&module, k)?;
            Ok(Outcome::ok(
                json!({ "kind": "tate", "module": label, "result": group_json(&h) }),
                vec![row(format!("Ĥ^{}(G, {})", k, label), describe_group(&h))],
            ))
        }
        CohomKind::Hyper => {
            let spec = inst.complex.as_ref().ok_or_else(|| Error::Parse("hypercohomology needs a complex block".into()))?;
            let cx = l.complex(spec)?;
            let tc = cx.torus_complex();
            let h0 = hyper_h0(&tc)?;
            let h1 = hyper_h1(&tc)?;
            Ok(Outcome::ok(
                json!({ "kind": "hyper", "h0": group_json(&h0), "h1": group_json(&h1) }),
                vec![row("H^0(X⊗C → Y⊗C)", describe_group(&h0)), row("H^1(X⊗C → Y⊗C)", describe_group(&h1))],
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingKind {
    Tn,
    Kottwitz,
    Langlands,
    Functor,
}

pub fn pairing_cmd(inst: &InstanceFile, l: &Loaded, kind: PairingKind, bound: u32) -> Result<Outcome> {
    let value: QmodZ = match kind {
        PairingKind::Kottwitz => {
            let z = l.twist(inst)?;
            let s = instance::qz(inst.dual_point.as_ref().ok_or_else(|| Error::Parse("dual_point is required".into()))?)?;
            kottwitz_eval(&l.model, l.td.x(), &z.z, &s)?
        }
        PairingKind::Langlands => {
            let phi = l.parameter(inst)?;
            let t = instance::ints(inst.point.as_ref().ok_or_else(|| Error::Parse("point is required".into()))?);
            langlands_eval(&l.model, l.td.x(), &phi, &t, bound)?
        }
        PairingKind::Tn => {
            let spec = inst.complex.as_ref().ok_or_else(|| Error::Parse("complex block is required".into()))?;
            let cx: LatticeComplex = l.complex(spec)?;
            let gs = spec.group_side.as_ref().ok_or_else(|| Error::Parse("complex.group_side is required".into()))?;
            let ds = spec.dual_side.as_ref().ok_or_else(|| Error::Parse("complex.dual_side is required".into()))?;
            let group = l.group_side(l.torus_rank(), gs)?;
            if !cx.is_group_cocycle(&group) {
                return Err(Error::Precondition("group side is not a hypercocycle".into()));
            }
            let dual = l.dual_side(&cx.y, ds)?;
            tn_pairing(&l.model, &cx, &group, &dual, bound)?
        }
        PairingKind::Functor => {
            let spec = inst.functor.as_ref().ok_or_else(|| Error::Parse("functor block is required".into()))?;
            let g = l.model.group();
            let y = spec.y.build(g)?;
            let v = spec.v.build(g)?;
            let f = instance::matrix(&spec.f)?;
            let gm = instance::matrix(&spec.g)?;
            if !gm.mul(&f).is_zero() {
                return Err(Error::Precondition("the maps do not compose to zero".into()));
            }
            let group = l.group_side(l.torus_rank(), &spec.group_side)?;
            let dual = l.dual_side(&v, &spec.dual_side)?;
            functor_pairing(&l.model, l.td.x(), &y, &v, &f, &gm, &group, &dual, bound)?
        }
    };
    let name = match kind {
        PairingKind::Tn => "tn",
        PairingKind::Kottwitz => "kottwitz",
        PairingKind::Langlands => "langlands",
        PairingKind::Functor => "functor",
    };
    Ok(Outcome::ok(json!({ "kind": name, "value": value.to_string() }), vec![row(format!("{} pairing", name), value)]))
}

fn char_strings(rho: &Rep) -> Vec<String> {
    character(rho).values().iter().map(CycScalar::to_string_repr).collect()
}

pub fn llc_cmd(inst: &InstanceFile, l: &Loaded, unramified: bool, bound: u32) -> Result<Outcome> {
    let z = l.twist(inst)?;
    let phi = l.parameter(inst)?;
    let llc = LocalLlc::new(&l.model, &l.td, &z, &phi, bound)?;
    let packet = llc.local_packet(unramified)?;
    let mut members = Vec::new();
    let mut rows = vec![
        row("A^[z]", format!("{:?}", llc.stab_group().members)),
        row("A^[φ]", format!("{:?}", llc.stab_dual().members)),
        row("A'", format!("{:?}", llc.members())),
        row("ᾱ split", llc.ext_alpha().is_untwisted()),
        row("β̄ split", llc.ext_beta().is_untwisted()),
    ];
    for (i, m) in packet.iter().enumerate() {
        let kaletha = llc.kaletha_construction(&m.eta)?;
        let agree = character(&kaletha) == character(&m.rho);
        let back = llc.eta_from_rho(&m.rho)?;
        let round_trip = character(&back) == character(&m.eta);
        let mut relation = true;
        let ag = l.td.a_group();
        for &a in llc.members() {
            let s = llc.stab_dual().witness(a).expect("member").clone();
            let t = llc.stab_group().witness(ag.inv(a)).expect("member").clone();
            relation &= llc.relation_holds(&m.rho, &m.eta, a, &s, &t)?;
        }
        rows.push(row(
            format!("member {}", i),
            format!(
                "deg {} (induced {}), kaletha {}, relation {}{}",
                m.eta.degree(),
                m.full_degree,
                if agree { "agrees" } else { "DIFFERS" },
                if relation { "holds" } else { "FAILS" },
                if m.unramified { ", unramified" } else { "" }
            ),
        ));
        members.push(json!({
            "index": i,
            "degree": m.eta.degree(),
            "full_degree": m.full_degree,
            "eta_character": char_strings(&m.eta),
            "rho_character": char_strings(&m.rho),
            "kaletha_agrees": agree,
            "round_trip": round_trip,
            "relation_holds": relation,
            "unramified": m.unramified,
        }));
    }
    let results = json!({
        "stab_z": llc.stab_group().members,
        "stab_phi": llc.stab_dual().members,
        "stabilizer": llc.members(),
        "alpha_split": llc.ext_alpha().is_untwisted(),
        "beta_split": llc.ext_beta().is_untwisted(),
        "packet": members,
    });
    Ok(Outcome::ok(results, rows))
}

fn report_json(r: &CheckReport) -> Value {
    Value::Array(r.checks.iter().map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail })).collect())
}

pub fn multiplicity_cmd(inst: &InstanceFile, l: &Loaded, bound: u32) -> Result<Outcome> {
    let blocks = global_blocks(inst);
    if blocks.is_empty() {
        return Err(Error::Parse("global block is required".into()));
    }
    let mut labels: Vec<&str> = blocks.iter().map(|b| b.orbit.as_deref().unwrap_or("")).collect();
    labels.sort();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse("orbit labels must be distinct".into()));
    }
    let mut classes = Vec::new();
    let mut rows = Vec::new();
    let mut built = Vec::new();
    let mut valid = true;
    for (k, b) in blocks.iter().enumerate() {
        let (gd, eta) = l.global(b, bound)?;
        let mut checks = validate_global(&gd);
        checks.extend("member: ", validate_member(&gd, &eta));
        if !checks.all_pass() {
            valid = false;
            classes.push(json!({ "orbit": b.orbit, "validation": report_json(&checks) }));
            continue;
        }
        let rep = multiplicity_report(&gd, &eta)?;
        let mut hasse = Value::Null;
        if gd.hasse.is_some() {
            let mut entries = Vec::new();
            for &a in &rep.members {
                let sum = hasse_tn_sum(&gd, a)?;
                let value = hasse_pairing(&gd, &eta, a)?;
                entries.push(json!({ "a": a, "tn_product": sum.to_string(), "shortcut": value.to_string_repr() }));
            }
            hasse = Value::Array(entries);
        }
        let tag = b.orbit.clone().unwrap_or_else(|| format!("#{}", k));
        rows.push(row(format!("[[φ]] {}: stabilizer", tag), format!("{:?}", rep.members)));
        rows.push(row(
            format!("[[φ]] {}: ⟨a,η⟩", tag),
            rep.pairing.iter().map(CycScalar::to_string_repr).collect::<Vec<_>>().join(", "),
        ));
        rows.push(row(format!("[[φ]] {}: m (dual)", tag), &rep.mult_dual));
        rows.push(row(format!("[[φ]] {}: m (automorphic)", tag), &rep.mult_automorphic));
        rows.push(row(format!("[[φ]] {}: agree", tag), rep.agree()));
        classes.push(json!({
            "orbit": b.orbit,
            "stabilizer": rep.members,
            "pairing": rep.pairing.iter().map(CycScalar::to_string_repr).collect::<Vec<_>>(),
            "character": rep.character.iter().map(CycScalar::to_string_repr).collect::<Vec<_>>(),
            "m_dual": rep.mult_dual.to_string(),
            "m_automorphic": rep.mult_automorphic.to_string(),
            "agree": rep.agree(),
            "hasse": hasse,
        }));
        built.push((gd, eta));
    }
    if !valid {
        return Ok(Outcome { results: json!({ "classes": classes }), rows: vec![row("validation", "FAILED")], valid });
    }
    let total = mult_total(&built)?;
    rows.push(row("m_η", &total));
    Ok(Outcome::ok(json!({ "classes": classes, "m_eta": total.to_string() }), rows))
}

pub fn catalog_cmd(case: &str, norms: &NormOracle) -> Result<Outcome> {
    let e = rank1_catalog(case, norms)?;
    let results = json!({
        "case": e.case,
        "twist": e.twist,
        "twisted_action": e.galois_action,
        "identity_component": e.identity_component,
        "non_identity_component": e.non_identity_component,
        "identity_nonempty": e.identity_nonempty,
        "non_identity_nonempty": e.non_identity_nonempty,
        "text": e.render(),
    });
    let rows = vec![
        row("case", &e.case),
        row("identity component", &e.identity_component),
        row("non-identity component", &e.non_identity_component),
        row("non-identity nonempty", e.non_identity_nonempty),
    ];
    Ok(Outcome::ok(results, rows))
}

pub fn validate_cmd(inst: &InstanceFile, l: &Loaded, bound: u32) -> Result<Outcome> {
    let mut checks = CheckReport::new();
    checks.extend("class module: ", validate_class_module(l.model.class_module())?);
    checks.push("torus datum", true, "A-action is a Galois-equivariant homomorphism");
    match l.twist(inst) {
        Ok(_) => checks.push("twist is a cocycle", true, ""),
        Err(e) => checks.push("twist is a cocycle", false, e.to_string()),
    }
    if inst.parameter.is_some() {
        match l.parameter(inst) {
            Ok(_) => checks.push("parameter is a cocycle", true, ""),
            Err(e) => checks.push("parameter is a cocycle", false, e.to_string()),
        }
    }
    if let Some(spec) = &inst.complex {
        match l.complex(spec) {
            Ok(cx) => {
                checks.push("complex map is equivariant", true, "");
                if let Some(gs) = &spec.group_side {
                    let ok = l.group_side(l.torus_rank(), gs).map(|h| cx.is_group_cocycle(&h)).unwrap_or(false);
                    checks.push("complex: group side is a hypercocycle", ok, "");
                }
                if let Some(ds) = &spec.dual_side {
                    let ok = l.dual_side(&cx.y, ds).map(|d| cx.is_dual_cocycle(&l.model, &d)).unwrap_or(false);
                    checks.push("complex: dual side is a hypercocycle", ok, "");
                }
            }
            Err(e) => checks.push("complex map is equivariant", false, e.to_string()),
        }
    }
    if let Some(spec) = &inst.functor {
        let g = l.model.group();
        let built = (|| -> Result<bool> {
            let y = spec.y.build(g)?;
            let v = spec.v.build(g)?;
            let f = instance::matrix(&spec.f)?;
            let gm = instance::matrix(&spec.g)?;
            let cx_f = LatticeComplex::new(&l.model, l.td.x().clone(), y.clone(), f.clone())?;
            let cx_g = LatticeComplex::new(&l.model, y, v.clone(), gm.clone())?;
            let group = l.group_side(l.torus_rank(), &spec.group_side)?;
            let dual = l.dual_side(&v, &spec.dual_side)?;
            Ok(gm.mul(&f).is_zero() && cx_f.is_group_cocycle(&group) && cx_g.is_dual_cocycle(&l.model, &dual))
        })();
        match built {
            Ok(ok) => checks.push("functor: composable with valid hypercocycles", ok, ""),
            Err(e) => checks.push("functor: composable with valid hypercocycles", false, e.to_string()),
        }
    }
    if inst.twist.is_some() {
        if let (Ok(z), Ok(pi0)) = (l.twist(inst), pi0_dual(&l.td)) {
            let ch = pi0.kottwitz_character(&l.model, &z)?;
            checks.push("twist: Kottwitz character computed", true, format!("{:?}", ch));
        }
    }
    for (k, b) in global_blocks(inst).iter().enumerate() {
        let prefix = format!("global {}: ", b.orbit.clone().unwrap_or_else(|| format!("#{}", k)));
        match l.global(b, bound) {
            Ok((gd, eta)) => {
                checks.extend(&prefix, validate_global(&gd));
                checks.extend(&format!("{}member: ", prefix), validate_member(&gd, &eta));
            }
            Err(e) if e.is_support_exhausted() => return Err(e),
            Err(e) => checks.push(format!("{}construction", prefix), false, e.to_string()),
        }
    }
    let valid = checks.all_pass();
    let rows: Vec<(String, String)> =
        checks.checks.iter().map(|c| (c.name.clone(), if c.pass { "pass".into() } else { format!("FAIL {}", c.detail) })).collect();
    Ok(Outcome { results: json!({ "checks": report_json(&checks), "valid": valid }), rows, valid })
}

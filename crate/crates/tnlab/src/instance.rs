//! The JSON instance format and its conversion into library objects.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::Deserialize;

use tnlab_core::cohom::{Cochain, ClassModuleModel, FiniteGroup, GModule};
use tnlab_core::exactlin::{IntMatrix, QmodZ};
use tnlab_core::global_mult::{AdelicPacketMember, GlobalDatum, GlobalWitness, PlaceInstance};
use tnlab_core::llc_local::{InnerTwist, TorusDatum};
use tnlab_core::repkit::{twisted_irreps, Rep};
use tnlab_core::weilmodel::{DualHyperCocycle, GroupHyperCocycle, LatticeComplex, LocalParameter, WeilModel};
use tnlab_core::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic(usize),
    KleinFour,
    Dihedral(usize),
    Quaternion,
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) if *n >= 1 => Ok(FiniteGroup::cyclic(*n)),
            GroupSpec::Cyclic(_) => Err(Error::Parse("cyclic group of order zero".into())),
            GroupSpec::KleinFour => Ok(FiniteGroup::klein_four()),
            GroupSpec::Dihedral(n) if *n >= 1 => Ok(FiniteGroup::dihedral(*n)),
            GroupSpec::Dihedral(_) => Err(Error::Parse("dihedral group of order zero".into())),
            GroupSpec::Quaternion => Ok(FiniteGroup::quaternion()),
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone()),
        }
    }
}

/// A lattice with `G`-action: one matrix per element, or a generator of a cyclic `G`.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Action(Vec<Matrix>),
    Generator(Matrix),
    Trivial(usize),
}

pub fn matrix(m: &Matrix) -> Result<IntMatrix> {
    if m.is_empty() {
        return Err(Error::Parse("empty matrix; use [[...]] rows".into()));
    }
    let cols = m[0].len();
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(IntMatrix::from_rows(m))
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn qz(v: &[String]) -> Result<Vec<QmodZ>> {
    v.iter().map(|s| QmodZ::from_str(s)).collect()
}

impl ModuleSpec {
    pub fn build(&self, g: &FiniteGroup) -> Result<GModule> {
        match self {
            ModuleSpec::Action(ms) => GModule::new(g.clone(), ms.iter().map(matrix).collect::<Result<_>>()?),
            ModuleSpec::Generator(m) => {
                if !g.is_cyclic() || *g != FiniteGroup::cyclic(g.order()) {
                    return Err(Error::Parse("a generator describes a module over the standard cyclic group only".into()));
                }
                GModule::cyclic_from_generator(g.order(), matrix(m)?)
            }
            ModuleSpec::Trivial(r) => Ok(GModule::trivial(g.clone(), *r)),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassModuleSpec {
    pub module: ModuleSpec,
    /// Values `a(σ, τ)` in the order `σ·|G| + τ`.
    pub fundamental: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParameterSpec {
    /// Canonical cyclic model only: the value at the Frobenius section.
    Frobenius(Vec<String>),
    Full { hom: Vec<Vec<String>>, lift: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub lattice: ModuleSpec,
    #[serde(default)]
    pub a_group: Option<GroupSpec>,
    #[serde(default)]
    pub a_action: Option<Vec<Matrix>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSideSpec {
    pub z: Vec<Vec<i64>>,
    pub t: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualSideSpec {
    pub parameter: ParameterSpec,
    pub t_hat: Vec<String>,
}

/// `f: X → Y` with hypercocycles on both sides.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub target: ModuleSpec,
    pub f: Matrix,
    #[serde(default)]
    pub group_side: Option<GroupSideSpec>,
    #[serde(default)]
    pub dual_side: Option<DualSideSpec>,
}

/// `X →f Y →g V` with `(z, t)` for `f` and `(φ, s)` for the dual of `g`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub y: ModuleSpec,
    pub v: ModuleSpec,
    pub f: Matrix,
    pub g: Matrix,
    pub group_side: GroupSideSpec,
    pub dual_side: DualSideSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EtaSpec {
    /// Position in the enumeration of the local packet.
    Index(usize),
    /// A one-dimensional member by its values on the stabilizer, in increasing element order.
    Values(Vec<String>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceSpec {
    pub label: String,
    /// Order of the cyclic decomposition group.
    pub decomposition: usize,
    #[serde(default)]
    pub twist: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub parameter: Option<ParameterSpec>,
    /// `d` with `z_v = ∂d` at an unramified place.
    #[serde(default)]
    pub unramified: Option<Vec<i64>>,
    pub eta: EtaSpec,
    #[serde(default)]
    pub cofinite_trivial: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub a: usize,
    pub t: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSpec {
    #[serde(default)]
    pub orbit: Option<String>,
    pub places: Vec<PlaceSpec>,
    pub witnesses: Vec<WitnessSpec>,
    #[serde(default)]
    pub global_points: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub hasse: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GlobalBlock {
    One(Box<GlobalSpec>),
    Many(Vec<GlobalSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub galois: GroupSpec,
    #[serde(default)]
    pub class_module: Option<ClassModuleSpec>,
    pub torus: TorusSpec,
    #[serde(default)]
    pub twist: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub parameter: Option<ParameterSpec>,
    #[serde(default)]
    pub dual_point: Option<Vec<String>>,
    #[serde(default)]
    pub point: Option<Vec<i64>>,
    #[serde(default)]
    pub complex: Option<ComplexSpec>,
    #[serde(default)]
    pub functor: Option<FunctorSpec>,
    #[serde(default)]
    pub global: Option<GlobalBlock>,
}

pub fn parse(text: &str) -> Result<InstanceFile> {
    let inst: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if inst.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {}, expected {}", inst.version, FORMAT_VERSION)));
    }
    Ok(inst)
}

/// The instance with every cross-reference resolved.
pub struct Loaded {
    pub model: WeilModel,
    pub td: TorusDatum,
    pub canonical: bool,
}

pub fn cochain1(model: &WeilModel, rank: usize, vals: &[Vec<i64>]) -> Result<Cochain> {
    if vals.len() != model.group().order() {
        return Err(Error::Parse("a 1-cochain needs one value per element of G".into()));
    }
    Cochain::from_values(1, rank, vals.iter().map(|v| ints(v)).collect())
}

pub fn parameter(model: &WeilModel, x: &GModule, spec: &ParameterSpec) -> Result<LocalParameter> {
    match spec {
        ParameterSpec::Frobenius(ell) => LocalParameter::from_frobenius(model, x, &qz(ell)?),
        ParameterSpec::Full { hom, lift } => LocalParameter::new(
            model,
            x,
            hom.iter().map(|v| qz(v)).collect::<Result<_>>()?,
            lift.iter().map(|v| qz(v)).collect::<Result<_>>()?,
        ),
    }
}

pub fn torus(spec: &TorusSpec, g: &FiniteGroup) -> Result<TorusDatum> {
    let x = spec.lattice.build(g)?;
    let r = x.rank();
    let ag = match &spec.a_group {
        Some(s) => s.build()?,
        None => FiniteGroup::trivial(),
    };
    let acts = match &spec.a_action {
        Some(ms) => ms.iter().map(matrix).collect::<Result<_>>()?,
        None if ag.order() == 1 => vec![IntMatrix::identity(r)],
        None => return Err(Error::Parse("a_action is required for a nontrivial A".into())),
    };
    TorusDatum::new(x, ag, acts)
}

pub fn load(inst: &InstanceFile) -> Result<Loaded> {
    let g = inst.galois.build()?;
    let (cm, canonical) = match &inst.class_module {
        None => {
            if g != FiniteGroup::cyclic(g.order()) {
                return Err(Error::Parse("the default class module needs a standard cyclic galois group".into()));
            }
            (ClassModuleModel::canonical_cyclic(g.order()), true)
        }
        Some(spec) => {
            let c = spec.module.build(&g)?;
            let n = g.order();
            if spec.fundamental.len() != n * n {
                return Err(Error::Parse("fundamental class needs |G|² values".into()));
            }
            let a = Cochain::from_values(2, c.rank(), spec.fundamental.iter().map(|v| ints(v)).collect())?;
            (ClassModuleModel::new(c, a)?, false)
        }
    };
    let model = WeilModel::new(cm)?;
    let td = torus(&inst.torus, &g)?;
    Ok(Loaded { model, td, canonical })
}

impl Loaded {
    pub fn torus_rank(&self) -> usize {
        self.td.x().rank() * self.model.c_rank()
    }

    pub fn twist(&self, inst: &InstanceFile) -> Result<InnerTwist> {
        match &inst.twist {
            Some(v) => InnerTwist::new(&self.model, &self.td, cochain1(&self.model, self.torus_rank(), v)?),
            None => Ok(InnerTwist::trivial(&self.model, &self.td)),
        }
    }

    pub fn parameter(&self, inst: &InstanceFile) -> Result<LocalParameter> {
        match &inst.parameter {
            Some(p) => parameter(&self.model, self.td.x(), p),
            None => Ok(LocalParameter::trivial(&self.model, self.td.x())),
        }
    }

    pub fn group_side(&self, rank_src: usize, spec: &GroupSideSpec) -> Result<GroupHyperCocycle> {
        Ok(GroupHyperCocycle { z: cochain1(&self.model, rank_src, &spec.z)?, t: ints(&spec.t) })
    }

    pub fn dual_side(&self, y: &GModule, spec: &DualSideSpec) -> Result<DualHyperCocycle> {
        Ok(DualHyperCocycle { param: parameter(&self.model, y, &spec.parameter)?, t_hat: qz(&spec.t_hat)? })
    }

    pub fn complex(&self, spec: &ComplexSpec) -> Result<LatticeComplex> {
        let y = spec.target.build(self.model.group())?;
        LatticeComplex::new(&self.model, self.td.x().clone(), y, matrix(&spec.f)?)
    }

    /// The global datum and packet member of one global block.
    pub fn global(&self, spec: &GlobalSpec, bound: u32) -> Result<(GlobalDatum, AdelicPacketMember)> {
        let mut places = Vec::new();
        let mut factors = Vec::new();
        let mut flags = Vec::new();
        for p in &spec.places {
            let (ltd, dec) = PlaceInstance::localize(&self.td, p.decomposition)?;
            let model = WeilModel::canonical_cyclic(p.decomposition);
            let rank = ltd.x().rank();
            let at = |e| Error::at_place(&p.label, e);
            let z = match &p.twist {
                Some(v) => InnerTwist::new(&model, &ltd, cochain1(&model, rank, v).map_err(at)?).map_err(at)?,
                None => InnerTwist::trivial(&model, &ltd),
            };
            let phi = match &p.parameter {
                Some(s) => parameter(&model, ltd.x(), s).map_err(at)?,
                None => LocalParameter::trivial(&model, ltd.x()),
            };
            let place =
                PlaceInstance::new(&p.label, &model, &ltd, &z, &phi, dec, p.unramified.as_deref().map(ints), bound)?;
            let ext = place.llc.ext_alpha().clone();
            let eta = match &p.eta {
                EtaSpec::Index(k) => {
                    let irr = twisted_irreps(&ext).map_err(at)?;
                    irr.get(*k).cloned().ok_or_else(|| {
                        at(Error::Parse(format!("packet index {} out of range ({} members)", k, irr.len())))
                    })?
                }
                EtaSpec::Values(vals) => Rep::one_dim(ext, &qz(vals).map_err(at)?).map_err(at)?,
            };
            factors.push(eta);
            flags.push(p.cofinite_trivial);
            places.push(place);
        }
        let witnesses = spec
            .witnesses
            .iter()
            .map(|w| GlobalWitness { a: w.a, t: w.t.iter().map(|v| ints(v)).collect() })
            .collect();
        let global_points = spec.global_points.iter().map(|pt| pt.iter().map(|v| ints(v)).collect()).collect();
        let hasse = match &spec.hasse {
            Some(hs) => Some(hs.iter().map(|v| qz(v)).collect::<Result<_>>()?),
            None => None,
        };
        let gd = GlobalDatum { td: self.td.clone(), places, witnesses, global_points, hasse };
        Ok((gd, AdelicPacketMember { factors, cofinite_trivial: flags }))
    }
}

pub fn global_blocks(inst: &InstanceFile) -> Vec<&GlobalSpec> {
    match &inst.global {
        None => Vec::new(),
        Some(GlobalBlock::One(g)) => vec![g.as_ref()],
        Some(GlobalBlock::Many(gs)) => gs.iter().collect(),
    }
}

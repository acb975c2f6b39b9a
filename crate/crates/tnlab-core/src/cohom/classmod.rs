use alloc::format;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::cochain::{bar_differential, Cochain};
use super::group::FiniteGroup;
use super::groups::cohomology;
use super::module::GModule;
use crate::error::{Error, Result};
use crate::exactlin::{vec_is_zero, IntMatrix};
use crate::report::CheckReport;

/// A class module `C` with a normalized fundamental 2-cocycle `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassModuleModel {
    module: GModule,
    fundamental: Cochain,
}

impl ClassModuleModel {
    pub fn new(module: GModule, fundamental: Cochain) -> Result<Self> {
        let ord = module.group().order();
        if fundamental.degree() != 2 || fundamental.rank() != module.rank() {
            return Err(Error::Precondition("fundamental class must be a C-valued 2-cochain".into()));
        }
        let e = module.group().identity();
        for s in 0..ord {
            if !module.is_zero(fundamental.at(ord, &[e, s])) || !module.is_zero(fundamental.at(ord, &[s, e])) {
                return Err(Error::Precondition("fundamental cocycle is not normalized".into()));
            }
        }
        let d = bar_differential(2, &fundamental, &module)?;
        if !d.values().iter().all(|v| module.is_zero(v)) {
            return Err(Error::Precondition("fundamental class fails the cocycle identity".into()));
        }
        Ok(ClassModuleModel { module, fundamental })
    }

    /// `C = ℤ` trivial over `ℤ/n` with `a_{σ^i,σ^j} = [i + j ≥ n]`.
    pub fn canonical_cyclic(n: usize) -> Self {
        let group = FiniteGroup::cyclic(n);
        let module = GModule::trivial(group, 1);
        let a = Cochain::from_fn(n, 2, 1, |t| {
            alloc::vec![BigInt::from(if t[0] + t[1] >= n { 1 } else { 0 })]
        });
        ClassModuleModel::new(module, a).expect("canonical cyclic class module")
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        self.module.group()
    }

    pub fn fundamental(&self) -> &Cochain {
        &self.fundamental
    }

    /// `a_{σ,τ}`.
    pub fn a(&self, s: usize, t: usize) -> &[BigInt] {
        self.fundamental.at(self.group().order(), &[s, t])
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }
}

/// Checks the class-module axioms on every subgroup.
pub fn validate_class_module(cm: &ClassModuleModel) -> Result<CheckReport> {
    let g = cm.group();
    let ord = g.order();
    let mut rep = CheckReport::new();
    for sub in g.subgroups() {
        let label = format!("H={:?}", sub);
        let (m_h, emb) = cm.module.restrict(&sub)?;
        let k = emb.len();
        let a_h = Cochain::from_fn(k, 2, cm.rank(), |t| cm.fundamental.at(ord, &[emb[t[0]], emb[t[1]]]).to_vec());
        let h1 = cohomology(&m_h, 1)?;
        rep.push(format!("{} H1 trivial", label), h1.is_trivial(), format!("H1 = {}", h1.group()));
        let h2 = cohomology(&m_h, 2)?;
        let cyclic = h2.group().is_cyclic() && h2.order() == Some(BigInt::from(k));
        rep.push(format!("{} H2 cyclic of order |H|", label), cyclic, format!("H2 = {}", h2.group()));
        let generates = cyclic
            && match h2.class_of(&a_h) {
                Some(c) if k == 1 => c.is_empty(),
                Some(c) => c.len() == 1 && c[0].gcd(&BigInt::from(k)).is_one(),
                None => false,
            };
        rep.push(format!("{} fundamental class generates", label), generates, "");
    }
    Ok(rep)
}

/// `ψ(μ)(ρ) = Σ_σ ρσ(μ) ⊗ a_{ρ,σ}`, a 1-cocycle valued in `X ⊗ C`.
pub fn psi_map(mu: &[BigInt], cm: &ClassModuleModel, x: &GModule) -> Result<Cochain> {
    if x.group() != cm.group() {
        return Err(Error::Precondition("lattice and class module over different groups".into()));
    }
    if !vec_is_zero(&x.norm_matrix().mul_vec(mu)) {
        return Err(Error::Precondition("psi needs an element of norm zero".into()));
    }
    Ok(psi_unchecked(mu, cm, x))
}

pub(crate) fn psi_unchecked(mu: &[BigInt], cm: &ClassModuleModel, x: &GModule) -> Cochain {
    let g = cm.group();
    let ord = g.order();
    let (r, m) = (x.rank(), cm.rank());
    Cochain::from_fn(ord, 1, r * m, |t| {
        let rho = t[0];
        let mut acc = crate::exactlin::zero_vec(r * m);
        for s in 0..ord {
            let v = x.act(g.mul(rho, s), mu);
            let c = cm.a(rho, s);
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (j, cj) in c.iter().enumerate() {
                    acc[i * m + j] += vi * cj;
                }
            }
        }
        acc
    })
}

/// `X ⊗ C` with the diagonal action.
pub fn torus_model(x: &GModule, cm: &ClassModuleModel) -> Result<GModule> {
    x.tensor(cm.module())
}

/// The map `f ⊗ 1` on torus models.
pub fn tensor_map(f: &IntMatrix, cm: &ClassModuleModel) -> IntMatrix {
    f.kron(&IntMatrix::identity(cm.rank()))
}

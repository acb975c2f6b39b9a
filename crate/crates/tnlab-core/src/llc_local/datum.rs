use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cohom::{cohomology, differential_matrix, Cochain, CohomologyGroup, FiniteGroup, GModule};
use crate::error::{Error, Result};
use crate::exactlin::{solve_int, solve_qz_space, IntMatrix, QmodZ};
use crate::weilmodel::{dual_cocycle_space, dual_map, kottwitz_eval, LocalParameter, WeilModel};

/// A torus with a constant finite group `A` acting on its cocharacter lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDatum {
    x: GModule,
    a_group: FiniteGroup,
    a_action: Vec<IntMatrix>,
}

impl TorusDatum {
    /// The action must be a homomorphism into `GL(X)` commuting with the Galois action.
    pub fn new(x: GModule, a_group: FiniteGroup, a_action: Vec<IntMatrix>) -> Result<Self> {
        let r = x.rank();
        if a_action.len() != a_group.order() || a_action.iter().any(|m| m.rows() != r || m.cols() != r) {
            return Err(Error::Precondition("one square action matrix per element of A required".into()));
        }
        if a_action[a_group.identity()] != IntMatrix::identity(r) {
            return Err(Error::Precondition("identity of A must act trivially".into()));
        }
        for a in 0..a_group.order() {
            for b in 0..a_group.order() {
                if a_action[a].mul(&a_action[b]) != a_action[a_group.mul(a, b)] {
                    return Err(Error::Precondition(format!("A-action is not multiplicative at ({}, {})", a, b)));
                }
            }
            if !x.is_equivariant(&a_action[a], &x) {
                return Err(Error::Precondition(format!("A-action of element {} is not Galois-equivariant", a)));
            }
        }
        Ok(TorusDatum { x, a_group, a_action })
    }

    pub fn x(&self) -> &GModule {
        &self.x
    }

    pub fn a_group(&self) -> &FiniteGroup {
        &self.a_group
    }

    pub fn alpha(&self, a: usize) -> &IntMatrix {
        &self.a_action[a]
    }

    /// `a` on the torus model `X ⊗ C`.
    pub fn alpha_torus(&self, model: &WeilModel, a: usize) -> IntMatrix {
        self.a_action[a].kron(&IntMatrix::identity(model.c_rank()))
    }

    /// `a` on dual coordinates: `(α(a^{-1}))^T`.
    pub fn alpha_dual(&self, a: usize) -> IntMatrix {
        self.a_action[self.a_group.inv(a)].transpose()
    }

    pub fn act_dual(&self, a: usize, s: &[QmodZ]) -> Vec<QmodZ> {
        dual_map(&self.a_action[self.a_group.inv(a)], s)
    }

    /// `1 − a` on `X`, whose dual is `1 − a` on the dual torus.
    pub fn one_minus(&self, a: usize) -> IntMatrix {
        IntMatrix::identity(self.x.rank()).sub(&self.a_action[a])
    }
}

/// A 1-cocycle `z` of `G` in the torus model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerTwist {
    pub z: Cochain,
}

impl InnerTwist {
    pub fn new(model: &WeilModel, td: &TorusDatum, z: Cochain) -> Result<Self> {
        let tx = td.x().tensor(model.c_module())?;
        if z.degree() != 1 || z.rank() != tx.rank() || z.values().len() != model.group().order() {
            return Err(Error::Precondition("inner twist must be a 1-cochain in the torus model".into()));
        }
        let dz = differential_matrix(&tx, 1).mul_vec(&z.flat());
        if dz.iter().any(|v| !v.is_zero()) {
            return Err(Error::Precondition("inner twist is not a cocycle".into()));
        }
        Ok(InnerTwist { z })
    }

    pub fn trivial(model: &WeilModel, td: &TorusDatum) -> Self {
        InnerTwist { z: Cochain::zero(model.group().order(), 1, td.x().rank() * model.c_rank()) }
    }

    /// `σ ↦ σd − d`.
    pub fn coboundary(model: &WeilModel, td: &TorusDatum, d: &[BigInt]) -> Result<Self> {
        let tx = td.x().tensor(model.c_module())?;
        let z = crate::weilmodel::coboundary0(model, td.x(), d);
        if z.rank() != tx.rank() {
            return Err(Error::Precondition("witness has the wrong length".into()));
        }
        Ok(InnerTwist { z })
    }

    pub fn neg(&self) -> Cochain {
        let vals = self.z.values().iter().map(|v| crate::exactlin::vec_neg(v)).collect();
        Cochain::from_values(1, self.z.rank(), vals).expect("same shape")
    }
}

/// Members of a stabilizer in `A` together with chosen witnesses (`None` off the stabilizer).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerData<W> {
    pub members: Vec<usize>,
    pub witnesses: Vec<Option<W>>,
}

impl<W> StabilizerData<W> {
    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn witness(&self, a: usize) -> Option<&W> {
        self.witnesses.get(a).and_then(Option::as_ref)
    }
}

pub type GroupStabilizer = StabilizerData<Vec<BigInt>>;
pub type DualStabilizer = StabilizerData<Vec<QmodZ>>;

/// Whether `(t, a)` is a point of the inner form: `σt − t = (a − 1)·z(σ)`.
pub fn is_group_witness(model: &WeilModel, td: &TorusDatum, z: &InnerTwist, a: usize, t: &[BigInt]) -> bool {
    let tx = match td.x().tensor(model.c_module()) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let lhs = differential_matrix(&tx, 0).mul_vec(t);
    let rhs = IntMatrix::identity(model.group().order())
        .kron(&td.alpha_torus(model, a).sub(&IntMatrix::identity(tx.rank())))
        .mul_vec(&z.z.flat());
    lhs == rhs
}

/// `A^{[z]}` with witnesses `t_a` solving `z(σ) + σt_a − a·z(σ) = t_a`.
pub fn stab_z(model: &WeilModel, td: &TorusDatum, z: &InnerTwist) -> Result<GroupStabilizer> {
    let tx = td.x().tensor(model.c_module())?;
    let d0 = differential_matrix(&tx, 0);
    let ag = td.a_group();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for a in 0..ag.order() {
        if a == ag.identity() {
            members.push(a);
            witnesses.push(Some(crate::exactlin::zero_vec(tx.rank())));
            continue;
        }
        let rhs = IntMatrix::identity(model.group().order())
            .kron(&td.alpha_torus(model, a).sub(&IntMatrix::identity(tx.rank())))
            .mul_vec(&z.z.flat());
        let sol = solve_int(&d0, &rhs, &IntMatrix::zeros(d0.rows(), 0));
        if sol.is_some() {
            members.push(a);
        }
        witnesses.push(sol);
    }
    if !ag.is_subgroup(&members) {
        return Err(Error::Consistency("stabilizer of the twist is not a subgroup".into()));
    }
    Ok(StabilizerData { members, witnesses })
}

/// Whether `(s, a)` centralizes the parameter: `(−φ, s)` is a dual hypercocycle for `1 − a`.
pub fn is_dual_witness(model: &WeilModel, td: &TorusDatum, phi: &LocalParameter, a: usize, s: &[QmodZ]) -> bool {
    let a_inv = td.a_group().inv(a);
    let d = crate::weilmodel::DualHyperCocycle { param: phi.neg(), t_hat: s.to_vec() };
    d.is_cocycle(model, td.x(), &td.one_minus(a_inv))
}

/// `A^{[φ]}` with witnesses `s_a` such that `a·φ − φ = ∂s_a`.
pub fn stab_phi(model: &WeilModel, td: &TorusDatum, phi: &LocalParameter) -> Result<DualStabilizer> {
    let ag = td.a_group();
    let x = td.x();
    let neg = phi.neg();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for a in 0..ag.order() {
        if a == ag.identity() {
            members.push(a);
            witnesses.push(Some(crate::exactlin::qz_zero_vec(x.rank())));
            continue;
        }
        let f = td.one_minus(ag.inv(a));
        let sol = dual_cocycle_space(model, x, x, &f, Some(&neg)).map(|sp| sp.particular().t_hat);
        if sol.is_some() {
            members.push(a);
        }
        witnesses.push(sol);
    }
    if !ag.is_subgroup(&members) {
        return Err(Error::Consistency("stabilizer of the parameter is not a subgroup".into()));
    }
    Ok(StabilizerData { members, witnesses })
}

/// `π₀(T̂^Γ) ≅ H¹(G, X^*)` with helpers to move between classes and invariant dual points.
pub struct Pi0Dual {
    x: GModule,
    h1: CohomologyGroup,
}

impl Pi0Dual {
    pub fn group(&self) -> &CohomologyGroup {
        &self.h1
    }

    /// An invariant torsion point of the dual torus in the component of the class.
    pub fn point_of_class(&self, class: &[BigInt]) -> Vec<QmodZ> {
        let c = self.h1.representative(class);
        let n = self.x.group().order();
        let r = self.x.rank();
        (0..r)
            .map(|i| {
                let total: BigInt = (0..n).map(|h| c.values()[h][i].clone()).sum();
                QmodZ::from_rational(-BigRational::new(total, BigInt::from(n)))
            })
            .collect()
    }

    /// Component of an invariant torsion point `s`: the class of `σ ↦ σs̃ − s̃` for a lift `s̃`.
    pub fn class_of_point(&self, s: &[QmodZ]) -> Option<Vec<BigInt>> {
        if s.len() != self.x.rank() {
            return None;
        }
        let xd = self.x.dual().ok()?;
        let n = self.x.group().order();
        let lifted: Vec<BigRational> = s.iter().map(|v| v.value().clone()).collect();
        let vals: Option<Vec<Vec<BigInt>>> = (0..n)
            .map(|g| {
                let m = xd.action(g);
                (0..lifted.len())
                    .map(|i| {
                        let mut acc = -lifted[i].clone();
                        for (j, lj) in lifted.iter().enumerate() {
                            acc += BigRational::from_integer(m.get(i, j).clone()) * lj;
                        }
                        if acc.is_integer() { Some(acc.to_integer()) } else { None }
                    })
                    .collect()
            })
            .collect();
        let c = Cochain::from_values(1, self.x.rank(), vals?).ok()?;
        self.h1.class_of(&c)
    }

    /// Representatives `s` of every component, in class enumeration order.
    pub fn points(&self) -> Vec<Vec<QmodZ>> {
        self.h1.classes().unwrap_or_default().iter().map(|c| self.point_of_class(c)).collect()
    }

    /// The Kottwitz character `s ↦ [z](s)` on component representatives.
    pub fn kottwitz_character(&self, model: &WeilModel, z: &InnerTwist) -> Result<Vec<QmodZ>> {
        self.points().iter().map(|s| kottwitz_eval(model, &self.x, &z.z, s)).collect()
    }
}

pub fn pi0_dual(td: &TorusDatum) -> Result<Pi0Dual> {
    let xd = td.x().dual()?;
    let h1 = cohomology(&xd, 1)?;
    Ok(Pi0Dual { x: td.x().clone(), h1 })
}

/// Invariant torsion points of the dual torus, sampled with denominators up to `max_den`.
pub fn sample_dual_invariant<R: rand::Rng + ?Sized>(rng: &mut R, x: &GModule, max_den: i64) -> Vec<QmodZ> {
    let g = x.group();
    let r = x.rank();
    let mut m = IntMatrix::zeros(0, r);
    for s in 0..g.order() {
        m = m.vcat(&x.action(g.inv(s)).transpose().sub(&IntMatrix::identity(r)));
    }
    let rhs = crate::exactlin::qz_zero_vec(m.rows());
    solve_qz_space(&m, &rhs).expect("zero is invariant").sample(rng, max_den)
}

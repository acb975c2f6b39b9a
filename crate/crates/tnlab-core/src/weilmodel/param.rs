use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::group::{WeilElem, WeilModel};
use crate::cohom::GModule;
use crate::error::{Error, Result};
use crate::exactlin::{
    qz_dot, qz_mat_vec, qz_vec_add, qz_vec_is_zero, qz_vec_sub, qz_zero_vec, solve_qz_space, IntMatrix, QmodZ,
    QzSolutionSpace,
};

/// `g` acting on `Hom(X, ℚ/ℤ)` by `(g^{-1})^T`.
pub fn dual_act(x: &GModule, g: usize, s: &[QmodZ]) -> Vec<QmodZ> {
    qz_mat_vec(&x.action(x.group().inv(g)).transpose(), s)
}

/// Dual of a lattice map `f: X → Y`, i.e. `f^T: Ŷ → X̂`.
pub fn dual_map(f: &IntMatrix, s: &[QmodZ]) -> Vec<QmodZ> {
    qz_mat_vec(&f.transpose(), s)
}

/// `⟨x, s⟩ = Σ x_i s_i`.
pub fn pair(x: &[BigInt], s: &[QmodZ]) -> QmodZ {
    qz_dot(x, s)
}

pub fn is_dual_invariant(x: &GModule, s: &[QmodZ]) -> bool {
    (0..x.group().order()).all(|g| dual_act(x, g, s) == s)
}

/// A torsion-valued 1-cocycle `W → Hom(X, ℚ/ℤ)`, stored by its values on the
/// basis of `C` and on the section.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalParameter {
    hom: Vec<Vec<QmodZ>>,
    lift: Vec<Vec<QmodZ>>,
}

impl LocalParameter {
    pub fn new(model: &WeilModel, x: &GModule, hom: Vec<Vec<QmodZ>>, lift: Vec<Vec<QmodZ>>) -> Result<Self> {
        let p = LocalParameter { hom, lift };
        p.validate(model, x)?;
        Ok(p)
    }

    pub fn trivial(model: &WeilModel, x: &GModule) -> Self {
        LocalParameter {
            hom: (0..model.c_rank()).map(|_| qz_zero_vec(x.rank())).collect(),
            lift: (0..model.group().order()).map(|_| qz_zero_vec(x.rank())).collect(),
        }
    }

    /// `w ↦ w·s − s`.
    pub fn coboundary(model: &WeilModel, x: &GModule, s: &[QmodZ]) -> Self {
        LocalParameter {
            hom: (0..model.c_rank()).map(|_| qz_zero_vec(x.rank())).collect(),
            lift: (0..model.group().order()).map(|g| qz_vec_sub(&dual_act(x, g, s), s)).collect(),
        }
    }

    /// For the canonical cyclic model: `lift(σ^i) = Σ_{j<i} σ^j ℓ`, `hom(1) = Nℓ`.
    pub fn from_frobenius(model: &WeilModel, x: &GModule, ell: &[QmodZ]) -> Result<Self> {
        let n = model.group().order();
        let mut lift = Vec::with_capacity(n);
        let mut acc = qz_zero_vec(x.rank());
        let mut cur = ell.to_vec();
        for _ in 0..n {
            lift.push(acc.clone());
            acc = qz_vec_add(&acc, &cur);
            cur = dual_act(x, 1 % n, &cur);
        }
        let hom = alloc::vec![acc];
        LocalParameter::new(model, x, hom, lift)
    }

    fn validate(&self, model: &WeilModel, x: &GModule) -> Result<()> {
        let g = model.group();
        let m = model.c_rank();
        let r = x.rank();
        if self.hom.len() != m || self.lift.len() != g.order() {
            return Err(Error::Precondition("parameter has the wrong number of values".into()));
        }
        if self.hom.iter().chain(&self.lift).any(|v| v.len() != r) {
            return Err(Error::Precondition("parameter value of the wrong length".into()));
        }
        if !qz_vec_is_zero(&self.lift[g.identity()]) {
            return Err(Error::Precondition("parameter is not normalized at the identity".into()));
        }
        for s in 0..g.order() {
            for j in 0..m {
                let mut e = crate::exactlin::zero_vec(m);
                e[j] = BigInt::from(1);
                let lhs = self.hom_at(&model.c_module().act(s, &e));
                let rhs = dual_act(x, s, &self.hom[j]);
                if lhs != rhs {
                    return Err(Error::Precondition(format!("parameter is not equivariant at element {}", s)));
                }
            }
            for t in 0..g.order() {
                let lhs = qz_vec_sub(&qz_vec_add(&self.lift[s], &dual_act(x, s, &self.lift[t])), &self.lift[g.mul(s, t)]);
                if lhs != self.hom_at(model.a(s, t)) {
                    return Err(Error::Precondition(format!("parameter cocycle identity fails at ({}, {})", s, t)));
                }
            }
        }
        Ok(())
    }

    pub fn hom(&self) -> &[Vec<QmodZ>] {
        &self.hom
    }

    pub fn lift(&self) -> &[Vec<QmodZ>] {
        &self.lift
    }

    pub fn rank(&self) -> usize {
        self.lift.first().map(Vec::len).unwrap_or(0)
    }

    /// Value on the kernel element with coordinates `c`.
    pub fn hom_at(&self, c: &[BigInt]) -> Vec<QmodZ> {
        let r = self.rank();
        let mut acc = qz_zero_vec(r);
        for (k, h) in c.iter().zip(&self.hom) {
            acc = qz_vec_add(&acc, &h.iter().map(|q| q.mul_int(k)).collect::<Vec<_>>());
        }
        acc
    }

    /// `φ((c, σ)) = φ((c, 1)) + φ(s(σ))`.
    pub fn eval(&self, w: &WeilElem) -> Vec<QmodZ> {
        qz_vec_add(&self.hom_at(&w.c), &self.lift[w.s])
    }

    pub fn add(&self, o: &LocalParameter) -> LocalParameter {
        LocalParameter {
            hom: self.hom.iter().zip(&o.hom).map(|(a, b)| qz_vec_add(a, b)).collect(),
            lift: self.lift.iter().zip(&o.lift).map(|(a, b)| qz_vec_add(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> LocalParameter {
        LocalParameter {
            hom: self.hom.iter().map(|a| crate::exactlin::qz_vec_neg(a)).collect(),
            lift: self.lift.iter().map(|a| crate::exactlin::qz_vec_neg(a)).collect(),
        }
    }

    /// Pushforward along a dual map `Ŷ → X̂` given as the lattice map `f: X → Y`.
    pub fn push_dual(&self, f: &IntMatrix) -> LocalParameter {
        LocalParameter {
            hom: self.hom.iter().map(|a| dual_map(f, a)).collect(),
            lift: self.lift.iter().map(|a| dual_map(f, a)).collect(),
        }
    }

    /// `a·φ`, for an automorphism `α` of `X` commuting with `G`; acts by `(α^{-1})^T`.
    pub fn transport(&self, alpha_inv_t: &IntMatrix) -> LocalParameter {
        LocalParameter {
            hom: self.hom.iter().map(|a| qz_mat_vec(alpha_inv_t, a)).collect(),
            lift: self.lift.iter().map(|a| qz_mat_vec(alpha_inv_t, a)).collect(),
        }
    }

    /// The parameter rewritten for the shifted section `σ ↦ (c_σ, σ)`.
    pub fn recoordinate(&self, c: &[Vec<BigInt>]) -> LocalParameter {
        LocalParameter {
            hom: self.hom.clone(),
            lift: self.lift.iter().zip(c).map(|(l, cs)| qz_vec_add(l, &self.hom_at(cs))).collect(),
        }
    }

    /// Unchecked constructor for values known to satisfy the cocycle conditions.
    pub(crate) fn from_parts(hom: Vec<Vec<QmodZ>>, lift: Vec<Vec<QmodZ>>) -> Self {
        LocalParameter { hom, lift }
    }
}

/// A dual hypercocycle `(φ, ŝ)` for `f̂: Ŷ → X̂`: `f̂(φ(w)) = w·ŝ − ŝ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualHyperCocycle {
    pub param: LocalParameter,
    pub t_hat: Vec<QmodZ>,
}

impl DualHyperCocycle {
    pub fn is_cocycle(&self, model: &WeilModel, x: &GModule, f: &IntMatrix) -> bool {
        let g = model.group();
        self.param.hom().iter().all(|h| qz_vec_is_zero(&dual_map(f, h)))
            && (0..g.order()).all(|s| {
                dual_map(f, &self.param.lift()[s]) == qz_vec_sub(&dual_act(x, s, &self.t_hat), &self.t_hat)
            })
    }
}

/// Linear description of all dual hypercocycles `(φ, ŝ)` for `f̂: Ŷ → X̂`,
/// in the unknowns `(hom, lift, ŝ)` over ℚ/ℤ.
pub struct DualCocycleSpace {
    space: QzSolutionSpace,
    m: usize,
    n: usize,
    ry: usize,
    rx: usize,
}

fn dual_matrix(y: &GModule, g: usize) -> IntMatrix {
    y.action(y.group().inv(g)).transpose()
}

/// Solution space of dual hypercocycles, optionally with the parameter pinned to `fixed_param`.
pub fn dual_cocycle_space(
    model: &WeilModel,
    x: &GModule,
    y: &GModule,
    f: &IntMatrix,
    fixed_param: Option<&LocalParameter>,
) -> Option<DualCocycleSpace> {
    let g = model.group();
    let (m, n, ry, rx) = (model.c_rank(), g.order(), y.rank(), x.rank());
    let nvars = m * ry + n * ry + rx;
    let hom_col = |j: usize| j * ry;
    let lift_col = |s: usize| m * ry + s * ry;
    let s_col = m * ry + n * ry;
    let mut rows: Vec<(Vec<BigInt>, QmodZ)> = Vec::new();
    let zero = || alloc::vec![BigInt::from(0); nvars];
    let put = |row: &mut Vec<BigInt>, col: usize, block: &IntMatrix, i: usize, sign: i64| {
        for k in 0..block.cols() {
            row[col + k] += block.get(i, k) * sign;
        }
    };
    let id_y = IntMatrix::identity(ry);
    let ft = f.transpose();
    // equivariance of hom: hom(σ e_j) − σ·hom(e_j) = 0
    for s in 0..n {
        let cs = model.c_module().action(s);
        let ds = dual_matrix(y, s);
        for j in 0..m {
            for i in 0..ry {
                let mut row = zero();
                for k in 0..m {
                    let coef = cs.get(k, j);
                    if coef.sign() != num_bigint::Sign::NoSign {
                        row[hom_col(k) + i] += coef;
                    }
                }
                put(&mut row, hom_col(j), &ds, i, -1);
                rows.push((row, QmodZ::zero()));
            }
        }
    }
    // lift(1) = 0 and the cocycle identity
    for i in 0..ry {
        let mut row = zero();
        row[lift_col(g.identity()) + i] += 1;
        rows.push((row, QmodZ::zero()));
    }
    for s in 0..n {
        let ds = dual_matrix(y, s);
        for t in 0..n {
            let a = model.a(s, t);
            for i in 0..ry {
                let mut row = zero();
                put(&mut row, lift_col(s), &id_y, i, 1);
                put(&mut row, lift_col(t), &ds, i, 1);
                put(&mut row, lift_col(g.mul(s, t)), &id_y, i, -1);
                for (k, ak) in a.iter().enumerate() {
                    row[hom_col(k) + i] -= ak;
                }
                rows.push((row, QmodZ::zero()));
            }
        }
    }
    // f̂(hom) = 0 and f̂(lift(σ)) = σŝ − ŝ
    for j in 0..m {
        for i in 0..rx {
            let mut row = zero();
            put(&mut row, hom_col(j), &ft, i, 1);
            rows.push((row, QmodZ::zero()));
        }
    }
    for s in 0..n {
        let dx = dual_matrix(x, s).sub(&IntMatrix::identity(rx));
        for i in 0..rx {
            let mut row = zero();
            put(&mut row, lift_col(s), &ft, i, 1);
            put(&mut row, s_col, &dx, i, -1);
            rows.push((row, QmodZ::zero()));
        }
    }
    if let Some(p) = fixed_param {
        for j in 0..m {
            for i in 0..ry {
                let mut row = zero();
                row[hom_col(j) + i] += 1;
                rows.push((row, p.hom()[j][i].clone()));
            }
        }
        for s in 0..n {
            for i in 0..ry {
                let mut row = zero();
                row[lift_col(s) + i] += 1;
                rows.push((row, p.lift()[s][i].clone()));
            }
        }
    }
    let mat = IntMatrix::from_rows(&rows.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>());
    let rhs: Vec<QmodZ> = rows.into_iter().map(|(_, b)| b).collect();
    let mat = if mat.rows() == 0 { IntMatrix::zeros(0, nvars) } else { mat };
    let space = solve_qz_space(&mat, &rhs)?;
    Some(DualCocycleSpace { space, m, n, ry, rx })
}

impl DualCocycleSpace {
    pub fn inner(&self) -> &QzSolutionSpace {
        &self.space
    }

    pub fn decode(&self, v: &[QmodZ]) -> DualHyperCocycle {
        let (m, n, ry, rx) = (self.m, self.n, self.ry, self.rx);
        let hom = (0..m).map(|j| v[j * ry..(j + 1) * ry].to_vec()).collect();
        let lift = (0..n).map(|s| v[m * ry + s * ry..m * ry + (s + 1) * ry].to_vec()).collect();
        let t_hat = v[m * ry + n * ry..m * ry + n * ry + rx].to_vec();
        DualHyperCocycle { param: LocalParameter::from_parts(hom, lift), t_hat }
    }

    pub fn particular(&self) -> DualHyperCocycle {
        self.decode(&self.space.particular())
    }
}

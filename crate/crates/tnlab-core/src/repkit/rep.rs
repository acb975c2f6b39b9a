use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::cohom::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactlin::{cyc_average, cyc_from_qz, CycScalar, QmodZ};

/// Square matrix over cyclotomic scalars, row-major.
pub type CycMatrix = Vec<Vec<CycScalar>>;

pub fn mat_identity(d: usize) -> CycMatrix {
    (0..d).map(|i| (0..d).map(|j| if i == j { CycScalar::one() } else { CycScalar::zero() }).collect()).collect()
}

pub fn mat_mul(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![CycScalar::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn mat_scale(a: &CycMatrix, c: &CycScalar) -> CycMatrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn mat_trace(a: &CycMatrix) -> CycScalar {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// A finite group with a normalized ℚ/ℤ-valued 2-cocycle `ω`, standing for the
/// central extension of the group by the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedExtension {
    group: FiniteGroup,
    omega: Vec<Vec<QmodZ>>,
}

impl TwistedExtension {
    pub fn new(group: FiniteGroup, omega: Vec<Vec<QmodZ>>) -> Result<Self> {
        let n = group.order();
        if omega.len() != n || omega.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("factor set has the wrong shape".into()));
        }
        let e = group.identity();
        if (0..n).any(|x| !omega[e][x].is_zero() || !omega[x][e].is_zero()) {
            return Err(Error::Precondition("factor set is not normalized".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = &omega[a][b] + &omega[group.mul(a, b)][c];
                    let rhs = &omega[b][c] + &omega[a][group.mul(b, c)];
                    if lhs != rhs {
                        return Err(Error::Precondition(format!("factor set fails the cocycle identity at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        Ok(TwistedExtension { group, omega })
    }

    pub fn untwisted(group: FiniteGroup) -> Self {
        let n = group.order();
        TwistedExtension { group, omega: vec![vec![QmodZ::zero(); n]; n] }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn omega(&self, a: usize, b: usize) -> &QmodZ {
        &self.omega[a][b]
    }

    pub fn factor_set(&self) -> &[Vec<QmodZ>] {
        &self.omega
    }

    pub fn is_untwisted(&self) -> bool {
        self.omega.iter().flatten().all(QmodZ::is_zero)
    }

    /// `e(a, b) = ω(a, b) − ω(b, a)`, a bicharacter when the group is abelian.
    pub fn commutator_pairing(&self, a: usize, b: usize) -> QmodZ {
        &self.omega[a][b] - &self.omega[b][a]
    }

    /// The restriction to a subgroup, re-indexed as in `FiniteGroup::subgroup_as_group`.
    pub fn restrict(&self, sub: &[usize]) -> Result<(TwistedExtension, Vec<usize>)> {
        let (h, emb) = self.group.subgroup_as_group(sub)?;
        let omega = emb.iter().map(|&a| emb.iter().map(|&b| self.omega[a][b].clone()).collect()).collect();
        Ok((TwistedExtension { group: h, omega }, emb))
    }
}

/// A projective representation `ρ(x)ρ(y) = e(ω(x,y))·ρ(xy)` of a twisted extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    ext: TwistedExtension,
    degree: usize,
    images: Vec<CycMatrix>,
}

impl Rep {
    pub fn new(ext: TwistedExtension, images: Vec<CycMatrix>) -> Result<Self> {
        let g = ext.group();
        if images.len() != g.order() {
            return Err(Error::Precondition("one image per group element required".into()));
        }
        let degree = images[g.identity()].len();
        if images.iter().any(|m| m.len() != degree || m.iter().any(|r| r.len() != degree)) {
            return Err(Error::Precondition("images must be square of a common size".into()));
        }
        if images[g.identity()] != mat_identity(degree) {
            return Err(Error::Precondition("identity must act trivially".into()));
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = mat_mul(&images[x], &images[y]);
                let rhs = mat_scale(&images[g.mul(x, y)], &cyc_from_qz(ext.omega(x, y)));
                if lhs != rhs {
                    return Err(Error::Precondition(format!("not a projective homomorphism at ({}, {})", x, y)));
                }
            }
        }
        Ok(Rep { ext, degree, images })
    }

    /// A one-dimensional representation `x ↦ e(values[x])`.
    pub fn one_dim(ext: TwistedExtension, values: &[QmodZ]) -> Result<Self> {
        let images = values.iter().map(|v| vec![vec![cyc_from_qz(v)]]).collect();
        Rep::new(ext, images)
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Rep::one_dim(TwistedExtension::untwisted(group), &vec![QmodZ::zero(); n]).expect("trivial character")
    }

    pub fn ext(&self) -> &TwistedExtension {
        &self.ext
    }

    pub fn group(&self) -> &FiniteGroup {
        self.ext.group()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn image(&self, x: usize) -> &CycMatrix {
        &self.images[x]
    }

    pub fn images(&self) -> &[CycMatrix] {
        &self.images
    }

    pub fn character(&self) -> ClassFunction {
        character(self)
    }

    pub fn restrict(&self, sub: &[usize]) -> Result<Rep> {
        let (ext, emb) = self.ext.restrict(sub)?;
        let images = emb.iter().map(|&a| self.images[a].clone()).collect();
        Ok(Rep { ext, degree: self.degree, images })
    }

    /// `x ↦ e(c(x))·ρ(x)`, a representation for the factor set `ω + ∂c`.
    pub fn twist_by(&self, c: &[QmodZ]) -> Result<Rep> {
        let g = self.group();
        let n = g.order();
        let omega = (0..n)
            .map(|x| (0..n).map(|y| &(&self.ext.omega[x][y] + &c[x]) + &(&c[y] - &c[g.mul(x, y)])).collect())
            .collect();
        let ext = TwistedExtension::new(g.clone(), omega)?;
        let images = (0..n).map(|x| mat_scale(&self.images[x], &cyc_from_qz(&c[x]))).collect();
        Rep::new(ext, images)
    }
}

/// Values of a function on group elements; characters of projective representations
/// are only conjugation-invariant up to the factor set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<CycScalar>,
}

impl ClassFunction {
    pub fn new(values: Vec<CycScalar>) -> Self {
        ClassFunction { values }
    }

    pub fn values(&self) -> &[CycScalar] {
        &self.values
    }

    pub fn at(&self, x: usize) -> &CycScalar {
        &self.values[x]
    }

    pub fn is_class_function(&self, g: &FiniteGroup) -> bool {
        g.conjugacy_classes().iter().all(|cls| cls.iter().all(|&c| self.values[c] == self.values[cls[0]]))
    }

    /// `(1/|G|) Σ χ(x)·conj(ψ(x))`.
    pub fn inner(&self, other: &ClassFunction) -> Result<BigRational> {
        let prods: Vec<CycScalar> = self.values.iter().zip(&other.values).map(|(a, b)| a * &b.conj()).collect();
        cyc_average(&prods)
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &CycScalar) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(|a| a * c).collect() }
    }
}

pub fn character(rho: &Rep) -> ClassFunction {
    ClassFunction { values: rho.images.iter().map(mat_trace).collect() }
}

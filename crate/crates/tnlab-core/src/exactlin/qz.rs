use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::{snf_tracked, Track};
use crate::error::Error;

/// Element of ℚ/ℤ stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QmodZ(BigRational);

fn frac(r: BigRational) -> BigRational {
    let fl = r.floor();
    r - fl
}

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ(BigRational::zero())
    }

    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        QmodZ(frac(BigRational::new(num.into(), den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        QmodZ(frac(r))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Additive order, i.e. the reduced denominator.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        QmodZ(frac(&self.0 * BigRational::from_integer(k.clone())))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, o: QmodZ) -> QmodZ {
        QmodZ(frac(self.0 + o.0))
    }
}

impl<'a> Add<&'a QmodZ> for &'a QmodZ {
    type Output = QmodZ;
    fn add(self, o: &QmodZ) -> QmodZ {
        QmodZ(frac(&self.0 + &o.0))
    }
}

impl AddAssign<&QmodZ> for QmodZ {
    fn add_assign(&mut self, o: &QmodZ) {
        *self = &*self + o;
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, o: QmodZ) {
        *self = &*self + &o;
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, o: QmodZ) -> QmodZ {
        QmodZ(frac(self.0 - o.0))
    }
}

impl<'a> Sub<&'a QmodZ> for &'a QmodZ {
    type Output = QmodZ;
    fn sub(self, o: &QmodZ) -> QmodZ {
        QmodZ(frac(&self.0 - &o.0))
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ(frac(-self.0))
    }
}

impl Neg for &QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ(frac(-self.0.clone()))
    }
}

impl core::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::zero(), |a, b| a + b)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    /// Accepts `"p/q"` or an integer.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(alloc::format!("not a Q/Z value: {:?}", s));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(QmodZ::new(p, q))
            }
            None => {
                let _: BigInt = s.parse().map_err(|_| bad())?;
                Ok(QmodZ::zero())
            }
        }
    }
}

impl QmodZ {
    pub fn to_string_repr(&self) -> String {
        alloc::format!("{}", self)
    }
}

pub fn qz_vec_add(a: &[QmodZ], b: &[QmodZ]) -> Vec<QmodZ> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qz_vec_sub(a: &[QmodZ], b: &[QmodZ]) -> Vec<QmodZ> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qz_vec_neg(a: &[QmodZ]) -> Vec<QmodZ> {
    a.iter().map(|x| -x).collect()
}

pub fn qz_vec_is_zero(a: &[QmodZ]) -> bool {
    a.iter().all(QmodZ::is_zero)
}

pub fn qz_zero_vec(n: usize) -> Vec<QmodZ> {
    alloc::vec![QmodZ::zero(); n]
}

/// `Σ v_i·s_i` for integer `v` and Q/Z-valued `s`.
pub fn qz_dot(v: &[BigInt], s: &[QmodZ]) -> QmodZ {
    assert_eq!(v.len(), s.len());
    v.iter().zip(s).filter(|(k, _)| !k.is_zero()).map(|(k, q)| q.mul_int(k)).sum()
}

/// `M·s` over ℚ/ℤ.
pub fn qz_mat_vec(m: &IntMatrix, s: &[QmodZ]) -> Vec<QmodZ> {
    assert_eq!(m.cols(), s.len());
    (0..m.rows()).map(|i| qz_dot(&m.row(i), s)).collect()
}

/// Affine solution set `{s : M·s ≡ b mod ℤ}` of a linear system over ℚ/ℤ.
///
/// Points are `V·(y₀ + y)` where `y_i ∈ (1/d_i)ℤ/ℤ` for the first `rank` coordinates
/// and arbitrary in the remaining ones.
#[derive(Clone, Debug)]
pub struct QzSolutionSpace {
    v: IntMatrix,
    particular: Vec<QmodZ>,
    diag: Vec<BigInt>,
}

impl QzSolutionSpace {
    pub fn particular(&self) -> Vec<QmodZ> {
        qz_mat_vec(&self.v, &self.particular)
    }

    /// Per coordinate: `Some(d)` for a finite factor `(1/d)ℤ/ℤ`, `None` for a full circle.
    pub fn free_shape(&self) -> Vec<Option<BigInt>> {
        (0..self.v.cols()).map(|i| self.diag.get(i).cloned()).collect()
    }

    /// The solution with homogeneous part `y`; finite coordinates must be `d_i`-torsion.
    pub fn point(&self, y: &[QmodZ]) -> Vec<QmodZ> {
        assert_eq!(y.len(), self.v.cols());
        for (yi, d) in y.iter().zip(&self.diag) {
            assert!(yi.mul_int(d).is_zero(), "homogeneous coordinate outside its torsion factor");
        }
        qz_mat_vec(&self.v, &qz_vec_add(&self.particular, y))
    }

    /// A random solution; circle coordinates get denominators up to `max_den`.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_den: i64) -> Vec<QmodZ> {
        let y: Vec<QmodZ> = (0..self.v.cols())
            .map(|i| match self.diag.get(i) {
                Some(d) if d.is_one() => QmodZ::zero(),
                Some(d) => {
                    let d64 = i64::try_from(d).unwrap_or(i64::MAX);
                    QmodZ::new(rng.gen_range(0..d64), d.clone())
                }
                None => {
                    let den = rng.gen_range(1..=max_den.max(1));
                    QmodZ::new(rng.gen_range(0..den), den)
                }
            })
            .collect();
        self.point(&y)
    }
}

/// Solution space of `M·s ≡ b (mod ℤ)`, or `None` when inconsistent.
pub fn solve_qz_space(m: &IntMatrix, b: &[QmodZ]) -> Option<QzSolutionSpace> {
    assert_eq!(m.rows(), b.len());
    let s = snf_tracked(m, Track::UV);
    let ub = qz_mat_vec(&s.u, b);
    let mut y = qz_zero_vec(m.cols());
    for (i, x) in ub.iter().enumerate() {
        if i < s.rank {
            let d = BigRational::from_integer(s.d.get(i, i).clone());
            y[i] = QmodZ::from_rational(x.value() / d);
        } else if !x.is_zero() {
            return None;
        }
    }
    let diag = (0..s.rank).map(|i| s.d.get(i, i).clone()).collect();
    Some(QzSolutionSpace { v: s.v, particular: y, diag })
}

/// One solution of `M·s ≡ b (mod ℤ)`.
pub fn solve_qz(m: &IntMatrix, b: &[QmodZ]) -> Option<Vec<QmodZ>> {
    solve_qz_space(m, b).map(|sp| sp.particular())
}

/// The subgroup of `(ℚ/ℤ)^n` killed by `M` is finite exactly when `M` has full column rank;
/// this returns its elements, or `None` otherwise.
pub fn qz_kernel_elements(m: &IntMatrix) -> Option<Vec<Vec<QmodZ>>> {
    let sp = solve_qz_space(m, &qz_zero_vec(m.rows()))?;
    if sp.diag.len() < m.cols() {
        return None;
    }
    let mut tuples: Vec<Vec<BigInt>> = alloc::vec![Vec::new()];
    for d in &sp.diag {
        let mut next = Vec::new();
        for p in &tuples {
            let mut k = BigInt::zero();
            while &k < d {
                let mut q = p.clone();
                q.push(k.clone());
                next.push(q);
                k += 1;
            }
        }
        tuples = next;
    }
    let mut out: Vec<Vec<QmodZ>> = tuples
        .into_iter()
        .map(|ks| {
            let y: Vec<QmodZ> = ks.into_iter().zip(&sp.diag).map(|(k, d)| QmodZ::new(k, d.clone())).collect();
            qz_mat_vec(&sp.v, &y)
        })
        .collect();
    out.sort();
    out.dedup();
    Some(out)
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, d| acc.lcm(d))
}

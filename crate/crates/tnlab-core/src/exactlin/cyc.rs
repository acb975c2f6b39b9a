use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qz::QmodZ;
use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn mobius(mut n: u64) -> i32 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Integer coefficients of Φ_n, constant term first.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    let ds = divisors(n);
    // multiply by (x^d - 1) first, then divide; every division is exact
    for &d in &ds {
        if mobius(n / d) == 1 {
            let mut q = vec![BigInt::zero(); p.len() + d as usize];
            for (i, c) in p.iter().enumerate() {
                q[i + d as usize] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &ds {
        if mobius(n / d) == -1 {
            // divide by x^d - 1: q_i = q_{i+d} ... run from the top
            let d = d as usize;
            let deg = p.len() - 1;
            let mut rem = p.clone();
            let mut q = vec![BigInt::zero(); deg - d + 1];
            for k in (0..=deg - d).rev() {
                let c = rem[k + d].clone();
                q[k] = c.clone();
                rem[k + d] -= &c;
                rem[k] += &c;
            }
            debug_assert!(rem.iter().all(Zero::is_zero));
            p = q;
        }
    }
    // x^n - 1 has leading coefficient 1, so signs come out right up to a global sign
    if p.last().map(|c| c.is_negative()).unwrap_or(false) {
        p = p.into_iter().map(|c| -c).collect();
    }
    p
}

fn trim(p: &mut Poly) {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

/// Remainder of `p` modulo the monic integer polynomial `m`.
fn poly_rem_monic(mut p: Poly, m: &[BigInt]) -> Poly {
    let dm = m.len() - 1;
    if p.len() > dm {
        for k in (dm..p.len()).rev() {
            let c = core::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            for (j, mj) in m.iter().enumerate().take(dm) {
                if !mj.is_zero() {
                    p[k - dm + j] -= &c * BigRational::from_integer(mj.clone());
                }
            }
        }
        p.truncate(dm);
    }
    p.resize(dm, BigRational::zero());
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Exact element of ℚ(ζ_n), coefficients on `1, ζ_n, …, ζ_n^{φ(n)-1}`.
#[derive(Clone)]
pub struct CycScalar {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    fn from_dense(n: u64, dense: Poly) -> Self {
        let phi = cyclotomic_poly(n);
        CycScalar { n, coeffs: poly_rem_monic(dense, &phi) }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycScalar { n: 1, coeffs: vec![r] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut dense = vec![BigRational::zero(); n as usize];
        dense[e] = BigRational::one();
        Self::from_dense(n, dense)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn dense_at(&self, l: u64) -> Poly {
        debug_assert_eq!(l % self.n, 0);
        let step = (l / self.n) as usize;
        let mut dense = vec![BigRational::zero(); l as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            dense[k * step] = c.clone();
        }
        dense
    }

    /// The same element written at conductor `l` (a multiple of the current one).
    pub fn embed(&self, l: u64) -> Self {
        assert_eq!(l % self.n, 0, "conductor must be a multiple");
        if l == self.n {
            return self.clone();
        }
        Self::from_dense(l, self.dense_at(l))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            dense[(n - k) % n] += c;
        }
        Self::from_dense(self.n, dense)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycScalar { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Consistency("inverse of zero cyclotomic scalar".into()));
        }
        let phi: Poly = cyclotomic_poly(self.n).into_iter().map(BigRational::from_integer).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // extended Euclid on (a, Φ): track s with s·a ≡ r (mod Φ)
        let (mut r0, mut r1) = (phi.clone(), a);
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
        }
        if r1.is_empty() {
            return Err(Error::Consistency("cyclotomic scalar not invertible".into()));
        }
        let c = r1[0].clone();
        let s: Poly = s1.iter().map(|x| x / &c).collect();
        Ok(Self::from_dense(self.n, s))
    }

    /// Rewritten at the least conductor whose field contains it.
    pub fn canonical(&self) -> Self {
        if self.is_rational() {
            return Self::from_rational(self.coeffs[0].clone());
        }
        for m in divisors(self.n) {
            if m == self.n {
                break;
            }
            if let Some(y) = self.descend(m) {
                return y;
            }
        }
        self.clone()
    }

    // try to express self as an element of Q(ζ_m), m | n
    fn descend(&self, m: u64) -> Option<Self> {
        let pm = euler_phi(m) as usize;
        let pn = self.coeffs.len();
        let cols: Vec<Poly> = (0..pm).map(|k| Self::root_of_unity(m, k as i64).embed(self.n).coeffs).collect();
        // Gaussian elimination on the pn × (pm + 1) augmented system
        let mut rows: Vec<Poly> = (0..pn)
            .map(|i| {
                let mut r: Poly = cols.iter().map(|c| c[i].clone()).collect();
                r.push(self.coeffs[i].clone());
                r
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r = 0;
        for c in 0..pm {
            let Some(p) = (r..pn).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, p);
            let lead = rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x = &*x / &lead;
            }
            for i in 0..pn {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    let pivot_row = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
            piv_cols.push(c);
            r += 1;
        }
        if rows[r..].iter().any(|row| !row[pm].is_zero()) {
            return None;
        }
        let mut y = vec![BigRational::zero(); pm];
        for (i, &c) in piv_cols.iter().enumerate() {
            y[c] = rows[i][pm].clone();
        }
        Some(CycScalar { n: m, coeffs: y })
    }

    fn binop(&self, o: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let l = self.n.lcm(&o.n);
        let a = self.embed(l);
        let b = o.embed(l);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(x, y)).collect();
        CycScalar { n: l, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_string_repr(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, o: &Self) -> bool {
        let l = self.n.lcm(&o.n);
        self.embed(l).coeffs == o.embed(l).coeffs
    }
}

impl Eq for CycScalar {}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, o: &CycScalar) -> CycScalar {
        self.binop(o, |x, y| x + y)
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, o: CycScalar) -> CycScalar {
        &self + &o
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, o: &CycScalar) -> CycScalar {
        self.binop(o, |x, y| x - y)
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, o: CycScalar) -> CycScalar {
        &self - &o
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, o: &CycScalar) -> CycScalar {
        let l = self.n.lcm(&o.n);
        let a = self.dense_at(l);
        let b = o.dense_at(l);
        let lu = l as usize;
        let mut prod = vec![BigRational::zero(); lu];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[(i + j) % lu] += x * y;
                }
            }
        }
        CycScalar::from_dense(l, prod)
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, o: CycScalar) -> CycScalar {
        &self * &o
    }
}

impl core::iter::Sum for CycScalar {
    fn sum<I: Iterator<Item = CycScalar>>(iter: I) -> CycScalar {
        iter.fold(CycScalar::zero(), |a, b| a + b)
    }
}

impl core::iter::Product for CycScalar {
    fn product<I: Iterator<Item = CycScalar>>(iter: I) -> CycScalar {
        iter.fold(CycScalar::one(), |a, b| a * b)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    /// Rationals print as `p/q`; otherwise `c0 + c1*z{n} + c2*z{n}^2 …` at the least conductor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        if let Some(r) = c.to_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let mut first = true;
        for (k, x) in c.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative();
            let mag = x.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let root = match k {
                0 => String::new(),
                1 => alloc::format!("z{}", c.n),
                _ => alloc::format!("z{}^{}", c.n, k),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", root)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), root)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The root of unity `e^{2πi q}` at conductor `denominator(q)`.
pub fn cyc_from_qz(q: &QmodZ) -> CycScalar {
    let n = q.denom().to_u64().expect("denominator fits in u64");
    let k = q.numer().to_i64().expect("numerator fits in i64");
    CycScalar::root_of_unity(n, k)
}

/// `(1/N)·Σ values`, which must be rational.
pub fn cyc_average(values: &[CycScalar]) -> Result<BigRational> {
    if values.is_empty() {
        return Err(Error::Precondition("average of an empty sequence".into()));
    }
    let sum: CycScalar = values.iter().cloned().sum();
    let avg = sum.scale(&BigRational::new(BigInt::one(), BigInt::from(values.len())));
    match avg.to_rational() {
        Some(r) => Ok(r),
        None => Err(Error::NonRational(avg.to_string_repr())),
    }
}

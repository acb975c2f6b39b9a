use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::module::GModule;
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// Dense inhomogeneous cochain; tuple `(g_1, …, g_n)` has index `Σ g_i |G|^{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    rank: usize,
    values: Vec<Vec<BigInt>>,
}

pub const MAX_DEGREE: usize = 3;

pub fn tuple_count(order: usize, n: usize) -> usize {
    order.pow(n as u32)
}

pub fn tuple_index(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

pub fn tuple_of(order: usize, n: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = idx % order;
        idx /= order;
    }
    t
}

impl Cochain {
    pub fn zero(order: usize, degree: usize, rank: usize) -> Self {
        Cochain { degree, rank, values: vec![vec![BigInt::zero(); rank]; tuple_count(order, degree)] }
    }

    pub fn from_values(degree: usize, rank: usize, values: Vec<Vec<BigInt>>) -> Result<Self> {
        if values.iter().any(|v| v.len() != rank) {
            return Err(Error::Precondition("cochain value of the wrong length".into()));
        }
        Ok(Cochain { degree, rank, values })
    }

    /// Builds a cochain from a closure on tuples.
    pub fn from_fn(order: usize, degree: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Vec<BigInt>) -> Self {
        let values = (0..tuple_count(order, degree))
            .map(|i| {
                let v = f(&tuple_of(order, degree, i));
                assert_eq!(v.len(), rank, "cochain value of the wrong length");
                v
            })
            .collect();
        Cochain { degree, rank, values }
    }

    pub fn from_flat(order: usize, degree: usize, rank: usize, flat: &[BigInt]) -> Self {
        assert_eq!(flat.len(), rank * tuple_count(order, degree));
        let values = if rank == 0 {
            vec![Vec::new(); tuple_count(order, degree)]
        } else {
            flat.chunks(rank).map(<[BigInt]>::to_vec).collect()
        };
        Cochain { degree, rank, values }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    pub fn at(&self, order: usize, tuple: &[usize]) -> &[BigInt] {
        &self.values[tuple_index(order, tuple)]
    }

    pub fn flat(&self) -> Vec<BigInt> {
        self.values.iter().flatten().cloned().collect()
    }
}

/// Matrix of `d: C^n(G, M) → C^{n+1}(G, M)` on flattened cochains.
pub fn differential_matrix(m: &GModule, n: usize) -> IntMatrix {
    let g = m.group();
    let ord = g.order();
    let r = m.rank();
    let rows = tuple_count(ord, n + 1);
    let mut out = IntMatrix::zeros(rows * r, tuple_count(ord, n) * r);
    let add_block = |out: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix, sign: i64| {
        for i in 0..r {
            for j in 0..r {
                let v = block.get(i, j);
                if !v.is_zero() {
                    *out.get_mut(row * r + i, col * r + j) += v * sign;
                }
            }
        }
    };
    let id = IntMatrix::identity(r);
    for ti in 0..rows {
        let t = tuple_of(ord, n + 1, ti);
        add_block(&mut out, ti, tuple_index(ord, &t[1..]), m.action(t[0]), 1);
        for i in 0..n {
            let mut s: Vec<usize> = Vec::with_capacity(n);
            s.extend_from_slice(&t[..i]);
            s.push(g.mul(t[i], t[i + 1]));
            s.extend_from_slice(&t[i + 2..]);
            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            add_block(&mut out, ti, tuple_index(ord, &s), &id, sign);
        }
        let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
        add_block(&mut out, ti, tuple_index(ord, &t[..n]), &id, sign);
    }
    out
}

/// `(dc)(g_1..g_{n+1}) = g_1·c(g_2..) + Σ(−1)^i c(..g_i g_{i+1}..) + (−1)^{n+1} c(g_1..g_n)`.
pub fn bar_differential(n: usize, c: &Cochain, m: &GModule) -> Result<Cochain> {
    if c.degree != n {
        return Err(Error::Precondition("cochain degree does not match".into()));
    }
    if n + 1 > MAX_DEGREE {
        return Err(Error::Unsupported(alloc::format!("cochains of degree {} are not stored", n + 1)));
    }
    let g = m.group();
    let ord = g.order();
    let r = m.rank();
    Ok(Cochain::from_fn(ord, n + 1, r, |t| {
        let mut acc = m.act(t[0], c.at(ord, &t[1..]));
        for i in 0..n {
            let mut s: Vec<usize> = t[..i].to_vec();
            s.push(g.mul(t[i], t[i + 1]));
            s.extend_from_slice(&t[i + 2..]);
            let sign = if (i + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            for (a, b) in acc.iter_mut().zip(c.at(ord, &s)) {
                *a += &sign * b;
            }
        }
        let sign = if (n + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for (a, b) in acc.iter_mut().zip(c.at(ord, &t[..n])) {
            *a += &sign * b;
        }
        acc
    }))
}

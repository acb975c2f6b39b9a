use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Smith form `U·M·V = D` together with the inverse transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Which transforms to accumulate; skipping them matters for tall cochain matrices.
#[derive(Clone, Copy, Debug)]
pub struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track { u: true, u_inv: true, v: true, v_inv: true };
    pub const V: Track = Track { u: false, u_inv: false, v: true, v_inv: false };
    pub const UV: Track = Track { u: true, u_inv: false, v: true, v_inv: false };
    pub const U: Track = Track { u: true, u_inv: true, v: false, v_inv: false };
}

struct Reducer {
    track: Track,
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        if self.track.u {
            self.u.swap_rows(i, j);
        }
        if self.track.u_inv {
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        if self.track.v {
            self.v.swap_cols(i, j);
        }
        if self.track.v_inv {
            self.v_inv.swap_rows(i, j);
        }
    }

    // row_i += k row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_row_multiple(i, j, k);
        if self.track.u {
            self.u.add_row_multiple(i, j, k);
        }
        if self.track.u_inv {
            self.u_inv.add_col_multiple(j, i, &-k);
        }
    }

    // col_i += k col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_col_multiple(i, j, k);
        if self.track.v {
            self.v.add_col_multiple(i, j, k);
        }
        if self.track.v_inv {
            self.v_inv.add_row_multiple(j, i, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if self.track.u {
            self.u.negate_row(i);
        }
        if self.track.u_inv {
            self.u_inv.negate_col(i);
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = self.d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d.get(bi, bj).abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let (rows, cols) = (self.d.rows(), self.d.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if self.d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.d.get(i, t).div_floor(self.d.get(t, t));
                    self.add_row(i, t, &-q);
                    if !self.d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if self.d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.d.get(t, j).div_floor(self.d.get(t, t));
                    self.add_col(j, t, &-q);
                    if !self.d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    // pivot must divide the rest of the block
                    let mut bad = None;
                    'scan: for i in t + 1..rows {
                        for j in t + 1..cols {
                            if !self.d.get(i, j).is_multiple_of(self.d.get(t, t)) {
                                bad = Some(i);
                                break 'scan;
                            }
                        }
                    }
                    match bad {
                        Some(i) => {
                            self.add_row(t, i, &BigInt::one());
                            continue;
                        }
                        None => break,
                    }
                }
                // move the smallest nonzero entry of row/column t into the pivot
                let mut best = (t, t);
                for i in t..rows {
                    let x = self.d.get(i, t);
                    if !x.is_zero() && x.abs() < self.d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    let x = self.d.get(t, j);
                    if !x.is_zero() && x.abs() < self.d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            if self.d.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Full Smith decomposition with both transforms and their inverses.
pub fn snf(m: &IntMatrix) -> Snf {
    snf_tracked(m, Track::ALL)
}

/// Smith decomposition accumulating only the requested transforms; the others are left empty.
pub fn snf_tracked(m: &IntMatrix, track: Track) -> Snf {
    let id = |on: bool, n: usize| if on { IntMatrix::identity(n) } else { IntMatrix::zeros(0, 0) };
    let mut r = Reducer {
        track,
        d: m.clone(),
        u: id(track.u, m.rows()),
        u_inv: id(track.u_inv, m.rows()),
        v: id(track.v, m.cols()),
        v_inv: id(track.v_inv, m.cols()),
    };
    let rank = r.run();
    Snf { u: r.u, u_inv: r.u_inv, d: r.d, v: r.v, v_inv: r.v_inv, rank }
}

/// Returns `(U, D, V)` with `U·M·V = D` and `d_1 | d_2 | …`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = snf(m);
    (s.u, s.d, s.v)
}

/// Some `x` with `M·x ≡ b` modulo the column span of `mod_rel`, or `None`.
pub fn solve_int(m: &IntMatrix, b: &[BigInt], mod_rel: &IntMatrix) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "right-hand side length mismatch");
    let a = if mod_rel.cols() > 0 {
        assert_eq!(mod_rel.rows(), m.rows(), "relation matrix row mismatch");
        m.hcat(mod_rel)
    } else {
        m.clone()
    };
    let s = snf_tracked(&a, Track::UV);
    let ub = s.u.mul_vec(b);
    let mut w = super::matrix::zero_vec(a.cols());
    for (i, x) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = x.div_rem(s.d.get(i, i));
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    let y = s.v.mul_vec(&w);
    Some(y[..m.cols()].to_vec())
}

/// Columns form a basis of the integer kernel of `m`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf_tracked(m, Track::V);
    let idx: Vec<usize> = (s.rank..m.cols()).collect();
    s.v.select_columns(&idx)
}

/// Generators of `{x : M·x ∈ span(rel)}`.
pub fn kernel_mod(m: &IntMatrix, rel: &IntMatrix) -> IntMatrix {
    if rel.cols() == 0 {
        return kernel_basis(m);
    }
    let k = kernel_basis(&m.hcat(rel));
    let cols: Vec<Vec<BigInt>> = k.columns().into_iter().map(|c| c[..m.cols()].to_vec()).collect();
    IntMatrix::from_columns(m.cols(), &cols)
}

/// Finitely generated abelian group `ℤ^n / span(relations)`.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ambient_rank: usize,
    relations: IntMatrix,
    snf: Snf,
}

impl FgAbGroup {
    pub fn new(ambient_rank: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), ambient_rank, "relations live in the ambient lattice");
        let snf = snf_tracked(&relations, Track::U);
        FgAbGroup { ambient_rank, relations, snf }
    }

    /// `⊕ ℤ/d_i`, with `d_i = 0` meaning a free summand.
    pub fn from_invariants(invariants: &[BigInt]) -> Self {
        let n = invariants.len();
        Self::new(n, IntMatrix::diagonal(invariants))
    }

    pub fn trivial() -> Self {
        Self::new(0, IntMatrix::zeros(0, 0))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn snf_cache(&self) -> &Snf {
        &self.snf
    }

    /// Invariant factors different from 1, zeros (free part) last.
    pub fn invariants(&self) -> Vec<BigInt> {
        let diag = self.snf.diagonal();
        let mut out: Vec<BigInt> =
            (0..self.ambient_rank).map(|i| if i < diag.len() { diag[i].clone() } else { BigInt::zero() }).collect();
        out.retain(|d| !d.is_one());
        out
    }

    pub fn free_rank(&self) -> usize {
        self.invariants().iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants().into_iter().filter(|d| !d.is_zero()).collect()
    }

    /// `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let inv = self.invariants();
        if inv.iter().any(Zero::is_zero) {
            return None;
        }
        Some(inv.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants().len() <= 1
    }

    /// Whether the ambient vector lies in the relation span.
    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        let ub = self.snf.u.mul_vec(v);
        ub.iter().enumerate().all(|(i, x)| {
            if i < self.snf.rank {
                x.is_multiple_of(self.snf.d.get(i, i))
            } else {
                x.is_zero()
            }
        })
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariants();
        if inv.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in inv.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            if d.is_zero() {
                write!(f, "Z")?;
            } else {
                write!(f, "Z/{}", d)?;
            }
        }
        Ok(())
    }
}

/// A quotient `span(K) / span(I)` with explicit coordinates.
///
/// Class coordinates are reduced: torsion components lie in `[0, d)`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient_rank: usize,
    group: FgAbGroup,
    // basis of span(K), as columns
    basis: IntMatrix,
    // U of the Smith form of K, used for coordinates in `basis`
    k_u: IntMatrix,
    k_diag: Vec<BigInt>,
    // P and P^{-1} from the Smith form of the relations in basis coordinates
    p: IntMatrix,
    p_inv: IntMatrix,
    invariants: Vec<BigInt>,
    keep: Vec<usize>,
    kernel: IntMatrix,
    image: IntMatrix,
}

/// Builds `span(ker_gens) / span(im_gens)` inside `ℤ^ambient_rank`.
pub fn subquotient(ambient_rank: usize, ker_gens: &IntMatrix, im_gens: &IntMatrix) -> Result<Subquotient> {
    assert_eq!(ker_gens.rows(), ambient_rank, "kernel generators have wrong length");
    assert_eq!(im_gens.rows(), ambient_rank, "image generators have wrong length");
    let s = snf_tracked(ker_gens, Track::U);
    let r = s.rank;
    let k_diag: Vec<BigInt> = (0..r).map(|i| s.d.get(i, i).clone()).collect();
    let mut cols = Vec::with_capacity(r);
    for (i, d) in k_diag.iter().enumerate() {
        cols.push(s.u_inv.column(i).iter().map(|x| x * d).collect::<Vec<_>>());
    }
    let basis = IntMatrix::from_columns(ambient_rank, &cols);
    let mut sq = Subquotient {
        ambient_rank,
        group: FgAbGroup::trivial(),
        basis,
        k_u: s.u,
        k_diag,
        p: IntMatrix::identity(r),
        p_inv: IntMatrix::identity(r),
        invariants: Vec::new(),
        keep: Vec::new(),
        kernel: ker_gens.clone(),
        image: im_gens.clone(),
    };
    let mut rel_cols = Vec::with_capacity(im_gens.cols());
    for j in 0..im_gens.cols() {
        match sq.basis_coords(&im_gens.column(j)) {
            Some(c) => rel_cols.push(c),
            None => {
                return Err(Error::Precondition(alloc::format!(
                    "image generator {} is not contained in the kernel span",
                    j
                )))
            }
        }
    }
    let rel = IntMatrix::from_columns(r, &rel_cols);
    let t = snf_tracked(&rel, Track::U);
    let invariants: Vec<BigInt> =
        (0..r).map(|i| if i < t.rank { t.d.get(i, i).clone() } else { BigInt::zero() }).collect();
    let keep: Vec<usize> = (0..r).filter(|&i| !invariants[i].is_one()).collect();
    let kept: Vec<BigInt> = keep.iter().map(|&i| invariants[i].clone()).collect();
    sq.group = FgAbGroup::from_invariants(&kept);
    sq.p = t.u;
    sq.p_inv = t.u_inv;
    sq.invariants = invariants;
    sq.keep = keep;
    Ok(sq)
}

impl Subquotient {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// The generators the numerator was built from.
    pub fn kernel_gens(&self) -> &IntMatrix {
        &self.kernel
    }

    /// The generators of the zero class.
    pub fn image_gens(&self) -> &IntMatrix {
        &self.image
    }

    /// Number of class coordinates.
    pub fn ngens(&self) -> usize {
        self.keep.len()
    }

    /// Order of each class coordinate; zero for a free coordinate.
    pub fn gen_orders(&self) -> Vec<BigInt> {
        self.keep.iter().map(|&i| self.invariants[i].clone()).collect()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.keep.is_empty()
    }

    fn basis_coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let uv = self.k_u.mul_vec(v);
        let mut c = Vec::with_capacity(self.k_diag.len());
        for (i, x) in uv.iter().enumerate() {
            if i < self.k_diag.len() {
                let (q, r) = x.div_rem(&self.k_diag[i]);
                if !r.is_zero() {
                    return None;
                }
                c.push(q);
            } else if !x.is_zero() {
                return None;
            }
        }
        Some(c)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.basis_coords(v).is_some()
    }

    /// Class coordinates of `v`, or `None` when `v` is outside the kernel span.
    pub fn project(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.basis_coords(v)?;
        let pc = self.p.mul_vec(&c);
        Some(
            self.keep
                .iter()
                .map(|&i| {
                    let d = &self.invariants[i];
                    if d.is_zero() {
                        pc[i].clone()
                    } else {
                        pc[i].mod_floor(d)
                    }
                })
                .collect(),
        )
    }

    /// Whether `v` lies in the image span (and so is the zero class).
    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        matches!(self.project(v), Some(k) if k.iter().all(Zero::is_zero))
    }

    /// A representative vector of the class with the given coordinates.
    pub fn lift(&self, class: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(class.len(), self.keep.len(), "class coordinate length mismatch");
        let mut full = super::matrix::zero_vec(self.invariants.len());
        for (k, &i) in self.keep.iter().enumerate() {
            full[i] = class[k].clone();
        }
        let c = self.p_inv.mul_vec(&full);
        self.basis.mul_vec(&c)
    }

    pub fn reduce(&self, class: &[BigInt]) -> Vec<BigInt> {
        class
            .iter()
            .zip(self.gen_orders())
            .map(|(x, d)| if d.is_zero() { x.clone() } else { x.mod_floor(&d) })
            .collect()
    }

    /// Every class, in lexicographic coordinate order; `None` when infinite.
    pub fn enumerate(&self) -> Option<Vec<Vec<BigInt>>> {
        let orders = self.gen_orders();
        if orders.iter().any(Zero::is_zero) {
            return None;
        }
        let mut out = alloc::vec![Vec::new()];
        for d in &orders {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }
}

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::cochain::{differential_matrix, tuple_count, Cochain};
use super::module::GModule;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_mod, solve_int, subquotient, FgAbGroup, IntMatrix, Subquotient};
use crate::report::CheckReport;

/// A (co)homology group realized as a subquotient of flattened cochains.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: i32,
    order: usize,
    rank: usize,
    sq: Subquotient,
}

impl CohomologyGroup {
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.sq
    }

    pub fn is_trivial(&self) -> bool {
        self.sq.is_trivial()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.sq.order()
    }

    /// Class coordinates of a flattened cocycle, `None` if it is not a cocycle.
    pub fn class_of_flat(&self, flat: &[BigInt]) -> Option<Vec<BigInt>> {
        self.sq.project(flat)
    }

    pub fn class_of(&self, c: &Cochain) -> Option<Vec<BigInt>> {
        self.sq.project(&c.flat())
    }

    /// A representative cocycle; degree-0 and negative-degree classes are single vectors.
    pub fn representative(&self, class: &[BigInt]) -> Cochain {
        let n = if self.degree > 0 { self.degree as usize } else { 0 };
        Cochain::from_flat(self.order, n, self.rank, &self.sq.lift(class))
    }

    pub fn classes(&self) -> Option<Vec<Vec<BigInt>>> {
        self.sq.enumerate()
    }
}

fn cochain_relations(m: &GModule, n: usize) -> IntMatrix {
    m.block_relations(tuple_count(m.group().order(), n))
}

/// `H^n(G, M)` for `n ∈ {0, 1, 2}`.
pub fn cohomology(m: &GModule, n: usize) -> Result<CohomologyGroup> {
    if n > 2 {
        return Err(Error::Unsupported(format!("cohomology in degree {}", n)));
    }
    let ord = m.group().order();
    let dn = differential_matrix(m, n);
    let ker = kernel_mod(&dn, &cochain_relations(m, n + 1));
    let rel = cochain_relations(m, n);
    let im = if n == 0 { rel } else { differential_matrix(m, n - 1).hcat(&rel) };
    let sq = subquotient(m.rank() * tuple_count(ord, n), &ker, &im)?;
    Ok(CohomologyGroup { degree: n as i32, order: ord, rank: m.rank(), sq })
}

/// Tate cohomology `Ĥ^n(G, M)` for `n ∈ {−1, 0, 1, 2}`.
pub fn tate(m: &GModule, n: i32) -> Result<CohomologyGroup> {
    let ord = m.group().order();
    match n {
        -1 => {
            let ker = kernel_mod(&m.norm_matrix(), m.relations());
            let im = m.augmentation_span().hcat(m.relations());
            let sq = subquotient(m.rank(), &ker, &im)?;
            Ok(CohomologyGroup { degree: -1, order: ord, rank: m.rank(), sq })
        }
        0 => {
            let ker = m.invariants_gens();
            let im = m.norm_matrix().hcat(m.relations());
            let sq = subquotient(m.rank(), &ker, &im)?;
            Ok(CohomologyGroup { degree: 0, order: ord, rank: m.rank(), sq })
        }
        1 | 2 => cohomology(m, n as usize),
        _ => Err(Error::Unsupported(format!("Tate cohomology in degree {} is out of scope", n))),
    }
}

/// `f: A⁰ → A¹`, a two-term complex in degrees 0 and 1.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub source: GModule,
    pub target: GModule,
    pub f: IntMatrix,
}

impl TwoTermComplex {
    pub fn new(source: GModule, target: GModule, f: IntMatrix) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::Precondition("complex terms over different groups".into()));
        }
        if !source.is_equivariant(&f, &target) {
            return Err(Error::Precondition("complex differential is not equivariant".into()));
        }
        Ok(TwoTermComplex { source, target, f })
    }

    /// `I_{|G|^n} ⊗ f` on n-cochains.
    pub fn f_on_cochains(&self, n: usize) -> IntMatrix {
        let k = tuple_count(self.source.group().order(), n);
        IntMatrix::identity(k).kron(&self.f)
    }

    fn h1_system(&self) -> (IntMatrix, IntMatrix) {
        let r1 = self.target.rank();
        let d1 = differential_matrix(&self.source, 1);
        let d0t = differential_matrix(&self.target, 0);
        let top = d1.hcat(&IntMatrix::zeros(d1.rows(), r1));
        let bottom = self.f_on_cochains(1).hcat(&d0t.neg());
        let eqs = top.vcat(&bottom);
        let rel = IntMatrix::block_diagonal(&[
            cochain_relations(&self.source, 2),
            cochain_relations(&self.target, 1),
        ]);
        (eqs, rel)
    }
}

/// Hypercohomology in degree 1; ambient vectors are `(z flattened, a₁)`.
pub fn hyper_h1(cx: &TwoTermComplex) -> Result<CohomologyGroup> {
    let ord = cx.source.group().order();
    let (r0, r1) = (cx.source.rank(), cx.target.rank());
    let (eqs, rel) = cx.h1_system();
    let ker = kernel_mod(&eqs, &rel);
    let bnd = differential_matrix(&cx.source, 0).vcat(&cx.f);
    let rels = IntMatrix::block_diagonal(&[cochain_relations(&cx.source, 1), cx.target.relations().clone()]);
    let im = bnd.hcat(&rels);
    let sq = subquotient(r0 * ord + r1, &ker, &im)?;
    Ok(CohomologyGroup { degree: 1, order: ord, rank: 0, sq })
}

/// Hypercohomology in degree 0: `{a₀ ∈ (A⁰)^G : f(a₀) = 0}`.
pub fn hyper_h0(cx: &TwoTermComplex) -> Result<CohomologyGroup> {
    let ord = cx.source.group().order();
    let eqs = cx.source.augmentation_stack().vcat(&cx.f);
    let rel = IntMatrix::block_diagonal(&[cx.source.block_relations(ord), cx.target.relations().clone()]);
    let ker = kernel_mod(&eqs, &rel);
    let sq = subquotient(cx.source.rank(), &ker, cx.source.relations())?;
    Ok(CohomologyGroup { degree: 0, order: ord, rank: cx.source.rank(), sq })
}

/// Splits a hyper-H¹ ambient vector into the cocycle and the target element.
pub fn split_hyper_vector(cx: &TwoTermComplex, v: &[BigInt]) -> (Cochain, Vec<BigInt>) {
    let ord = cx.source.group().order();
    let r0 = cx.source.rank();
    let z = Cochain::from_flat(ord, 1, r0, &v[..r0 * ord]);
    (z, v[r0 * ord..].to_vec())
}

// exactness of A --alpha--> B --beta--> C at B, all maps on ambient vectors
fn exact_at(a: &Subquotient, alpha: &IntMatrix, b: &Subquotient, beta: &IntMatrix, c: &Subquotient) -> bool {
    let ka = a.kernel_gens();
    let img = alpha.mul(ka);
    for j in 0..img.cols() {
        if !c.is_zero_class(&beta.mul_vec(&img.column(j))) {
            return false;
        }
    }
    let kb = b.kernel_gens();
    let killed = kernel_mod(&beta.mul(kb), c.image_gens());
    for j in 0..killed.cols() {
        let x = kb.mul_vec(&killed.column(j));
        if solve_int(&img, &x, b.image_gens()).is_none() {
            return false;
        }
    }
    true
}

/// Exactness of `0 → H⁰(cx) → H⁰(A⁰) → H⁰(A¹) → H¹(cx) → H¹(A⁰) → H¹(A¹)` joint by joint.
pub fn les_check(cx: &TwoTermComplex) -> Result<CheckReport> {
    let ord = cx.source.group().order();
    let (r0, r1) = (cx.source.rank(), cx.target.rank());
    let h0cx = hyper_h0(cx)?;
    let h0a = cohomology(&cx.source, 0)?;
    let h0b = cohomology(&cx.target, 0)?;
    let h1cx = hyper_h1(cx)?;
    let h1a = cohomology(&cx.source, 1)?;
    let h1b = cohomology(&cx.target, 1)?;
    let zero = CohomologyGroup {
        degree: 0,
        order: ord,
        rank: 0,
        sq: subquotient(0, &IntMatrix::zeros(0, 0), &IntMatrix::zeros(0, 0))?,
    };

    let incl = IntMatrix::identity(r0);
    let f0 = cx.f.clone();
    let i_map = IntMatrix::zeros(r0 * ord, r1).vcat(&IntMatrix::identity(r1));
    let p_map = IntMatrix::identity(r0 * ord).hcat(&IntMatrix::zeros(r0 * ord, r1));
    let f1 = cx.f_on_cochains(1);

    let (tz, t0c, t0a, t0b, t1c, t1a, t1b) = (
        zero.subquotient(),
        h0cx.subquotient(),
        h0a.subquotient(),
        h0b.subquotient(),
        h1cx.subquotient(),
        h1a.subquotient(),
        h1b.subquotient(),
    );
    let mut rep = CheckReport::new();
    rep.push("H0(cx) injective", exact_at(tz, &IntMatrix::zeros(r0, 0), t0c, &incl, t0a), "");
    rep.push("exact at H0(A0)", exact_at(t0c, &incl, t0a, &f0, t0b), "");
    rep.push("exact at H0(A1)", exact_at(t0a, &f0, t0b, &i_map, t1c), "");
    rep.push("exact at H1(cx)", exact_at(t0b, &i_map, t1c, &p_map, t1a), "");
    rep.push("exact at H1(A0)", exact_at(t1c, &p_map, t1a, &f1, t1b), "");
    Ok(rep)
}

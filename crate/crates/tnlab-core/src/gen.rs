//! Random small instances for property tests and acceptance sampling.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;

use crate::cohom::{cohomology, hyper_h1, split_hyper_vector, Cochain, FiniteGroup, GModule};
use crate::exactlin::{cyclotomic_poly, vec_add, vec_scale, IntMatrix, QmodZ};
use crate::global_mult::examples::Nt2Place;
use crate::llc_local::{InnerTwist, TorusDatum};
use crate::weilmodel::{
    coboundary0, dual_cocycle_space, DualHyperCocycle, GroupHyperCocycle, LatticeComplex, LocalParameter, WeilModel,
};

/// A product of elementary matrices with small multipliers.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, r: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(r);
    let mut p_inv = IntMatrix::identity(r);
    if r < 2 {
        if r == 1 && rng.gen_bool(0.5) {
            p = p.neg();
            p_inv = p_inv.neg();
        }
        return (p, p_inv);
    }
    for _ in 0..r * 2 {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(r);
        e.set(i, j, BigInt::from(k));
        let mut e_inv = IntMatrix::identity(r);
        e_inv.set(i, j, BigInt::from(-k));
        p = e.mul(&p);
        p_inv = p_inv.mul(&e_inv);
    }
    (p, p_inv)
}

/// Companion matrix of Φ_d, i.e. ℤ[ζ_d] with the generator acting by ζ_d.
pub fn companion_of_cyclotomic(d: usize) -> IntMatrix {
    let phi = cyclotomic_poly(d as u64);
    let k = phi.len() - 1;
    let mut m = IntMatrix::zeros(k, k);
    for i in 1..k {
        m.set(i, i - 1, BigInt::from(1));
    }
    for i in 0..k {
        m.set(i, k - 1, -phi[i].clone());
    }
    m
}

/// Cyclic shift on ℤ^d.
pub fn cyclic_permutation(d: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(d, d);
    for i in 0..d {
        m.set((i + 1) % d, i, BigInt::from(1));
    }
    m
}

/// Generator matrix of a random lattice over ℤ/n of rank at most `max_rank`.
///
/// Summands are ℤ[ζ_d] and ℤ[ℤ/d] for `d | n`, conjugated by a random unimodular matrix.
pub fn random_cyclic_generator<R: Rng + ?Sized>(rng: &mut R, n: usize, max_rank: usize) -> IntMatrix {
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut blocks: Vec<IntMatrix> = Vec::new();
    let mut rank = 0;
    let target = rng.gen_range(1..=max_rank.max(1));
    let mut attempts = 0;
    while rank < target && attempts < 20 {
        attempts += 1;
        let d = divisors[rng.gen_range(0..divisors.len())];
        let block = if rng.gen_bool(0.7) { companion_of_cyclotomic(d) } else { cyclic_permutation(d) };
        if rank + block.rows() <= max_rank {
            rank += block.rows();
            blocks.push(block);
        }
    }
    if blocks.is_empty() {
        blocks.push(IntMatrix::identity(1));
    }
    let g = IntMatrix::block_diagonal(&blocks);
    let (p, p_inv) = random_unimodular(rng, g.rows());
    p.mul(&g).mul(&p_inv)
}

pub fn random_cyclic_module<R: Rng + ?Sized>(rng: &mut R, n: usize, max_rank: usize) -> GModule {
    GModule::cyclic_from_generator(n, random_cyclic_generator(rng, n, max_rank)).expect("generator has order n")
}

/// A random integer combination of a basis of equivariant maps.
pub fn random_equivariant_map<R: Rng + ?Sized>(rng: &mut R, src: &GModule, tgt: &GModule) -> IntMatrix {
    let basis = src.hom_basis(tgt).expect("lattices");
    let mut f = IntMatrix::zeros(tgt.rank(), src.rank());
    for b in &basis {
        let k: i64 = rng.gen_range(-2..=2);
        f = f.add(&b.scale(&BigInt::from(k)));
    }
    f
}

pub fn random_cyclic_group<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> FiniteGroup {
    FiniteGroup::cyclic(rng.gen_range(1..=max_order))
}

/// A random element of the hypercocycle lattice of the torus-model complex.
pub fn random_group_hypercocycle<R: Rng + ?Sized>(
    rng: &mut R,
    cx: &LatticeComplex,
) -> GroupHyperCocycle {
    let tc = cx.torus_complex();
    let h = hyper_h1(&tc).expect("torus complex");
    let ker = h.subquotient().kernel_gens();
    let mut v = vec![BigInt::from(0); ker.rows()];
    for j in 0..ker.cols() {
        let k: i64 = rng.gen_range(-2..=2);
        v = vec_add(&v, &vec_scale(&ker.column(j), &BigInt::from(k)));
    }
    let (z, t) = split_hyper_vector(&tc, &v);
    GroupHyperCocycle { z, t }
}

/// A random dual hypercocycle for the dual of `cx`; circle coordinates get denominators up to `max_den`.
pub fn random_dual_hypercocycle<R: Rng + ?Sized>(
    rng: &mut R,
    model: &WeilModel,
    cx: &LatticeComplex,
    max_den: i64,
) -> DualHyperCocycle {
    let space = dual_cocycle_space(model, &cx.x, &cx.y, &cx.f, None).expect("zero is a solution");
    space.decode(&space.inner().sample(rng, max_den))
}

/// A normalized 1-cochain `c` on `G` with values in the class module, for section changes.
pub fn random_section_shift<R: Rng + ?Sized>(rng: &mut R, model: &WeilModel) -> Vec<Vec<BigInt>> {
    let g = model.group();
    (0..g.order())
        .map(|s| {
            (0..model.c_rank())
                .map(|_| if s == g.identity() { BigInt::from(0) } else { BigInt::from(rng.gen_range(-2i64..=2)) })
                .collect()
        })
        .collect()
}

/// A torus with a small constant automorphism group: trivial, `{±1}`, the cyclic group of
/// Galois actions, `{±1} × ⟨σ⟩` for `|G| = 2`, or `{±1} × swap` on `X ⊕ X` for rank one `X`.
pub fn random_torus_datum<R: Rng + ?Sized>(rng: &mut R, n: usize, max_rank: usize) -> TorusDatum {
    let x = random_cyclic_module(rng, n, max_rank);
    let r = x.rank();
    let id = IntMatrix::identity(r);
    let minus = id.neg();
    let sigma = x.action(1 % n).clone();
    match rng.gen_range(0..5) {
        0 => TorusDatum::new(x, FiniteGroup::trivial(), vec![id]).expect("trivial action"),
        1 => TorusDatum::new(x, FiniteGroup::cyclic(2), vec![id, minus]).expect("sign action"),
        2 if n > 1 => {
            let acts = (0..n).map(|i| x.action(i).clone()).collect();
            TorusDatum::new(x, FiniteGroup::cyclic(n), acts).expect("Galois action commutes with itself")
        }
        3 if n == 2 => {
            let acts = vec![id, sigma.clone(), minus.clone(), minus.mul(&sigma)];
            TorusDatum::new(x, FiniteGroup::klein_four(), acts).expect("commuting involutions")
        }
        4 if r == 1 => {
            let x2 = x.direct_sum(&x).expect("same group");
            let i2 = IntMatrix::identity(2);
            let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
            let acts = vec![i2.clone(), swap.clone(), i2.neg(), swap.neg()];
            TorusDatum::new(x2, FiniteGroup::klein_four(), acts).expect("commuting involutions")
        }
        _ => TorusDatum::new(x, FiniteGroup::cyclic(2), vec![id, minus]).expect("sign action"),
    }
}

/// A random cocycle in the torus model: a class representative plus a coboundary.
pub fn random_inner_twist<R: Rng + ?Sized>(rng: &mut R, model: &WeilModel, td: &TorusDatum) -> InnerTwist {
    let tx = td.x().tensor(model.c_module()).expect("same group");
    let h1 = cohomology(&tx, 1).expect("degree one");
    let classes = h1.classes().expect("H¹ of a finite group is finite");
    let class = &classes[rng.gen_range(0..classes.len())];
    let rep = h1.representative(class);
    let d: Vec<BigInt> = (0..tx.rank()).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
    let cb = coboundary0(model, td.x(), &d);
    let vals = rep.values().iter().zip(cb.values()).map(|(a, b)| vec_add(a, b)).collect();
    InnerTwist::new(model, td, Cochain::from_values(1, tx.rank(), vals).expect("shape")).expect("cocycle")
}

/// A random parameter of the canonical cyclic model from a Frobenius value with small denominators.
pub fn random_local_parameter<R: Rng + ?Sized>(rng: &mut R, model: &WeilModel, x: &GModule, max_den: i64) -> LocalParameter {
    let ell: Vec<QmodZ> = (0..x.rank())
        .map(|_| {
            let d = rng.gen_range(1..=max_den.max(1));
            QmodZ::new(rng.gen_range(0..d), d)
        })
        .collect();
    LocalParameter::from_frobenius(model, x, &ell).expect("canonical model")
}

/// Places for a random norm-torus datum: 2 to 4 places, an even number of them twisted,
/// split characters of order at most 2, and one declared global point. Valuations are chosen
/// so that `Σ_v χ_v(t_v) = 0` for the witness of `−1` and the global point, and the global
/// point is integral at unramified places.
pub fn random_nt2_places<R: Rng + ?Sized>(rng: &mut R) -> (Vec<Nt2Place>, Vec<Vec<i64>>) {
    let k = rng.gen_range(2..=4);
    let mut places: Vec<Nt2Place> = (0..k)
        .map(|_| {
            if rng.gen_bool(0.4) {
                let chi = if rng.gen_bool(0.5) { QmodZ::new(1, 2) } else { QmodZ::zero() };
                Nt2Place::Split { chi, sign: rng.gen_bool(0.5), t: rng.gen_range(-2..=2) }
            } else {
                Nt2Place::Inert { twisted: rng.gen_bool(0.6), sign: rng.gen_bool(0.5) }
            }
        })
        .collect();
    let twisted = places.iter().filter(|p| matches!(p, Nt2Place::Inert { twisted: true, .. })).count();
    if twisted % 2 == 1 {
        if let Some(Nt2Place::Inert { twisted, .. }) = places.iter_mut().find(|p| matches!(p, Nt2Place::Inert { .. })) {
            *twisted = !*twisted;
        }
    }
    let odd = |c: &QmodZ| !c.is_zero();
    let parity: i64 = places
        .iter()
        .map(|p| match p {
            Nt2Place::Split { chi, t, .. } if odd(chi) => *t,
            _ => 0,
        })
        .sum();
    if parity % 2 != 0 {
        if let Some(Nt2Place::Split { t, .. }) =
            places.iter_mut().find(|p| matches!(p, Nt2Place::Split { chi, .. } if odd(chi)))
        {
            *t += 1;
        }
    }
    // (valuation of the point, χ_v odd) at each split place
    let mut pt: Vec<(i64, bool)> = places
        .iter()
        .filter_map(|p| match p {
            Nt2Place::Split { chi, sign, t } => {
                let unramified = !*sign && *t == 0 && !odd(chi);
                Some((if unramified { 0 } else { rng.gen_range(-3..=3) }, odd(chi)))
            }
            _ => None,
        })
        .collect();
    let parity: i64 = pt.iter().filter(|(_, o)| *o).map(|(v, _)| *v).sum();
    if parity % 2 != 0 {
        let i = pt.iter().position(|(v, o)| *o && *v != 0).expect("an odd valuation at an odd place");
        pt[i].0 += 1;
    }
    (places, vec![pt.into_iter().map(|(v, _)| v).collect()])
}

/// A rank-three fixture over `ℤ/2` with `A = ℤ/2 × ℤ/2` whose pushed `ᾱ` is not split:
/// the unique packet member has degree two.
pub fn nonsplit_local_fixture() -> (WeilModel, TorusDatum, InnerTwist, LocalParameter) {
    let w = WeilModel::canonical_cyclic(2);
    let gen = IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
    let x = GModule::cyclic_from_generator(2, gen).expect("involution");
    let p = IntMatrix::from_rows(&[vec![1, 0, 0], vec![1, -1, 0], vec![-1, 0, -1]]);
    let qm = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, -1], vec![0, -1, 0]]);
    let acts = vec![IntMatrix::identity(3), qm.clone(), p.clone(), p.mul(&qm)];
    let td = TorusDatum::new(x.clone(), FiniteGroup::klein_four(), acts).expect("commuting equivariant involutions");
    let z = Cochain::from_values(1, 3, vec![crate::exactlin::int_vec(&[0, 0, 0]), crate::exactlin::int_vec(&[1, 1, -1])])
        .expect("shape");
    let z = InnerTwist::new(&w, &td, z).expect("cocycle");
    let ell = [QmodZ::zero(), QmodZ::new(1, 2), QmodZ::zero()];
    let phi = LocalParameter::from_frobenius(&w, &x, &ell).expect("canonical model");
    (w, td, z, phi)
}

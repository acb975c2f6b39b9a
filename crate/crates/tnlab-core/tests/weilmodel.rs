use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tnlab_core::cohom::{Cochain, GModule};
use tnlab_core::exactlin::{int_vec, IntMatrix, QmodZ};
use tnlab_core::gen::{
    random_cyclic_module, random_dual_hypercocycle, random_equivariant_map, random_group_hypercocycle,
    random_section_shift,
};
use tnlab_core::weilmodel::*;
use tnlab_core::Error;

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

fn q(n: i64, d: i64) -> QmodZ {
    QmodZ::new(n, d)
}

fn sign_module() -> GModule {
    GModule::cyclic_from_generator(2, IntMatrix::from_rows(&[vec![-1]])).unwrap()
}

fn elem(c: i64, s: usize) -> WeilElem {
    WeilElem { c: vec![bi(c)], s }
}

fn random_chain(rng: &mut ChaCha8Rng, model: &WeilModel, rank: usize, terms: usize) -> FinSuppChain {
    let mut ch = FinSuppChain::zero(rank);
    let n = model.group().order();
    for _ in 0..terms {
        let c: Vec<BigInt> = (0..model.c_rank()).map(|_| bi(rng.gen_range(-2..=2))).collect();
        let v: Vec<BigInt> = (0..rank).map(|_| bi(rng.gen_range(-3..=3))).collect();
        ch.add_term(WeilElem { c, s: rng.gen_range(0..n) }, &v);
    }
    ch
}

fn random_elem(rng: &mut ChaCha8Rng, model: &WeilModel) -> WeilElem {
    let c = (0..model.c_rank()).map(|_| bi(rng.gen_range(-2..=2))).collect();
    WeilElem { c, s: rng.gen_range(0..model.group().order()) }
}

#[test]
fn compose_examples() {
    let w = WeilModel::canonical_cyclic(2);
    assert_eq!(w.compose(&elem(0, 0), &elem(0, 0)), elem(0, 0));
    assert_eq!(w.compose(&elem(0, 1), &elem(0, 1)), elem(1, 0));
    assert_eq!(w.compose(&elem(2, 0), &elem(-5, 0)), elem(-3, 0));
    let x = elem(3, 1);
    assert_eq!(w.compose(&x, &w.inverse(&x)), w.identity());
    assert_eq!(w.compose(&w.inverse(&x), &x), w.identity());
}

#[test]
fn weil_group_axioms_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        let w = WeilModel::canonical_cyclic(n);
        for _ in 0..40 {
            let (x, y, z) = (random_elem(&mut rng, &w), random_elem(&mut rng, &w), random_elem(&mut rng, &w));
            assert_eq!(w.compose(&w.compose(&x, &y), &z), w.compose(&x, &w.compose(&y, &z)));
            assert_eq!(w.compose(&w.inverse(&x), &x), w.identity());
        }
    }
}

#[test]
fn restriction_examples() {
    let w = WeilModel::canonical_cyclic(2);
    let x = sign_module();
    assert!(res_chain(&w, &x, &FinSuppChain::zero(1)).is_empty());
    let ch = FinSuppChain::single(1, elem(1, 0), vec![bi(5)]);
    assert!(res_chain(&w, &x, &ch).values().all(|v| v.iter().all(|e| *e == bi(0))));
    let ch = FinSuppChain::single(1, elem(0, 1), vec![bi(1)]);
    assert_eq!(res_chain(&w, &x, &ch), res_chain_oracle(&w, &x, &ch));
}

#[test]
fn restriction_matches_group_law_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 3);
        let ch = random_chain(&mut rng, &w, x.rank(), 4);
        assert_eq!(res_chain(&w, &x, &ch), res_chain_oracle(&w, &x, &ch));
    }
}

#[test]
fn phi_examples() {
    let w = WeilModel::canonical_cyclic(2);
    let x = sign_module();
    assert_eq!(phi_map(&w, &x, &FinSuppChain::zero(1)), int_vec(&[0]));
    for k in -3..=3 {
        for m in [-2, 1, 7] {
            let ch = FinSuppChain::single(1, elem(k, 1), vec![bi(m)]);
            assert_eq!(phi_map(&w, &x, &ch), int_vec(&[m]));
        }
    }
}

#[test]
fn phi_kills_boundaries_and_factors_through_restriction() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 3);
        let terms: Vec<_> = (0..3)
            .map(|_| {
                let v = (0..x.rank()).map(|_| bi(rng.gen_range(-3..=3))).collect();
                (random_elem(&mut rng, &w), random_elem(&mut rng, &w), v)
            })
            .collect();
        let b = boundary2(&w, &x, &terms);
        assert!(phi_map(&w, &x, &b).iter().all(|e| *e == bi(0)));
        assert!(b.boundary(&w, &x).iter().all(|e| *e == bi(0)));
        let ch = random_chain(&mut rng, &w, x.rank(), 4);
        let via_res = tilde_d(&x, w.c_rank(), &res_chain(&w, &x, &ch));
        assert_eq!(phi_map(&w, &x, &ch), via_res);
    }
}

#[test]
fn psi_of_boundary_is_coboundary_of_phi() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 3);
        let ch = random_chain(&mut rng, &w, x.rank(), 4);
        let lhs = psi(&w, &x, &ch.boundary(&w, &x));
        let rhs = coboundary0(&w, &x, &phi_map(&w, &x, &ch));
        assert_eq!(lhs, rhs);
    }
}

fn nt2_complex(w: &WeilModel) -> LatticeComplex {
    LatticeComplex::endo(w, sign_module(), IntMatrix::from_rows(&[vec![2]])).unwrap()
}

fn nt2_group_cocycle() -> GroupHyperCocycle {
    GroupHyperCocycle { z: Cochain::from_values(1, 1, vec![int_vec(&[0]), int_vec(&[1])]).unwrap(), t: int_vec(&[-1]) }
}

#[test]
fn hyper_iso_examples() {
    let w = WeilModel::canonical_cyclic(2);
    let cx = nt2_complex(&w);
    let zero = HyperCycle0 { lambda: int_vec(&[0]), mu: FinSuppChain::zero(1) };
    let h = hyper_iso_h(&w, &cx, &zero).unwrap();
    assert!(h.z.values().iter().all(|v| v[0] == bi(0)) && h.t == int_vec(&[0]));
    let hc = HyperCycle0 { lambda: int_vec(&[1]), mu: FinSuppChain::single(1, elem(0, 1), int_vec(&[-1])) };
    assert_eq!(hyper_iso_h(&w, &cx, &hc).unwrap(), nt2_group_cocycle());
    let bad = HyperCycle0 { lambda: int_vec(&[1]), mu: FinSuppChain::zero(1) };
    assert!(matches!(hyper_iso_h(&w, &cx, &bad), Err(Error::Precondition(_))));
    // λ = 0 with a cycle μ
    let cyc = FinSuppChain::single(1, elem(2, 0), int_vec(&[3]));
    let hc = HyperCycle0 { lambda: int_vec(&[0]), mu: cyc.clone() };
    let h = hyper_iso_h(&w, &cx, &hc).unwrap();
    assert_eq!(h.t, phi_map(&w, cx.torus_target(), &cyc));
}

#[test]
fn pairing_chain_examples() {
    let w = WeilModel::canonical_cyclic(2);
    let x = sign_module();
    let triv = DualHyperCocycle { param: LocalParameter::trivial(&w, &x), t_hat: vec![QmodZ::zero()] };
    let zero = HyperCycle0 { lambda: int_vec(&[0]), mu: FinSuppChain::zero(1) };
    assert_eq!(pairing_chain(&zero, &triv), QmodZ::zero());
    let half = DualHyperCocycle { param: LocalParameter::trivial(&w, &x), t_hat: vec![q(1, 2)] };
    let one = HyperCycle0 { lambda: int_vec(&[1]), mu: FinSuppChain::zero(1) };
    assert_eq!(pairing_chain(&one, &half), q(1, 2));
    let x1 = GModule::trivial(w.group().clone(), 1);
    let p = LocalParameter::from_frobenius(&w, &x1, &[q(1, 3)]).unwrap();
    let d = DualHyperCocycle { param: p, t_hat: vec![QmodZ::zero()] };
    let hc = HyperCycle0 { lambda: int_vec(&[0]), mu: FinSuppChain::single(1, elem(0, 1), int_vec(&[2])) };
    assert_eq!(pairing_chain(&hc, &d), -q(2, 3));
}

#[test]
fn tn_pairing_nt2_example() {
    let w = WeilModel::canonical_cyclic(2);
    let cx = nt2_complex(&w);
    let d = DualHyperCocycle { param: LocalParameter::trivial(&w, &cx.y), t_hat: vec![q(1, 2)] };
    assert_eq!(tn_pairing(&w, &cx, &nt2_group_cocycle(), &d, DEFAULT_SUPPORT_BOUND).unwrap(), q(1, 2));
    let cob = cx.group_coboundary(&w, &int_vec(&[4]));
    assert_eq!(tn_pairing(&w, &cx, &cob, &d, DEFAULT_SUPPORT_BOUND).unwrap(), QmodZ::zero());
    let not_dual = DualHyperCocycle { param: LocalParameter::trivial(&w, &cx.y), t_hat: vec![q(1, 3)] };
    assert!(matches!(
        tn_pairing(&w, &cx, &nt2_group_cocycle(), &not_dual, DEFAULT_SUPPORT_BOUND),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn kottwitz_examples() {
    let w = WeilModel::canonical_cyclic(2);
    let x = sign_module();
    let z = nt2_group_cocycle().z;
    assert_eq!(kottwitz_eval(&w, &x, &z, &[q(1, 2)]).unwrap(), q(1, 2));
    let zero = Cochain::zero(2, 1, 1);
    assert_eq!(kottwitz_eval(&w, &x, &zero, &[q(1, 2)]).unwrap(), QmodZ::zero());
    assert!(kottwitz_eval(&w, &x, &z, &[q(1, 3)]).is_err());
    // s from the identity component of the dual torus pairs trivially
    let x2 = GModule::trivial(w.group().clone(), 1).direct_sum(&x).unwrap();
    let z2 = Cochain::from_values(1, 2, vec![int_vec(&[0, 0]), int_vec(&[0, 1])]).unwrap();
    assert_eq!(kottwitz_eval(&w, &x2, &z2, &[q(2, 7), QmodZ::zero()]).unwrap(), QmodZ::zero());
    assert_eq!(kottwitz_eval(&w, &x2, &z2, &[q(2, 7), q(1, 2)]).unwrap(), q(1, 2));
}

#[test]
fn support_exhaustion_is_reported() {
    let w = WeilModel::canonical_cyclic(2);
    let x = GModule::trivial(w.group().clone(), 1);
    let cx = LatticeComplex::endo(&w, x.clone(), IntMatrix::from_rows(&[vec![0]])).unwrap();
    // t = 9 needs a chain reaching c = ±9 at the identity when n = 2
    let h = include_target(&cx, &w, &int_vec(&[9]));
    let d = DualHyperCocycle { param: LocalParameter::trivial(&w, &x), t_hat: vec![QmodZ::zero()] };
    let r = tn_pairing(&w, &cx, &h, &d, 0);
    assert!(matches!(r, Ok(_) | Err(Error::SupportExhausted { bound: 0 })));
    assert!(tn_pairing(&w, &cx, &h, &d, 3).is_ok());
}

#[test]
fn langlands_closed_form_on_canonical_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let cx = LatticeComplex::endo(&w, x.clone(), IntMatrix::zeros(x.rank(), x.rank())).unwrap();
        let param = random_dual_hypercocycle(&mut rng, &w, &cx, 6).param;
        let inv = x.invariants_gens();
        let mut t = vec![bi(0); x.rank()];
        for j in 0..inv.cols() {
            let k = bi(rng.gen_range(-2..=2));
            for i in 0..x.rank() {
                t[i] += inv.get(i, j) * &k;
            }
        }
        let fr = if n == 1 { elem(1, 0) } else { elem(0, 1) };
        let expected = pair(&t, &param.eval(&fr));
        assert_eq!(langlands_eval(&w, &x, &param, &t, DEFAULT_SUPPORT_BOUND).unwrap(), expected);
        // agreement with the zero-differential specialization
        let via_tn = tn_pairing(
            &w,
            &cx,
            &include_target(&cx, &w, &t),
            &DualHyperCocycle { param: param.clone(), t_hat: vec![QmodZ::zero(); x.rank()] },
            DEFAULT_SUPPORT_BOUND,
        )
        .unwrap();
        assert_eq!(via_tn, expected);
        let s: Vec<QmodZ> = (0..x.rank()).map(|_| q(rng.gen_range(0..5), 5)).collect();
        let cob = LocalParameter::coboundary(&w, &x, &s);
        assert_eq!(langlands_eval(&w, &x, &cob, &t, DEFAULT_SUPPORT_BOUND).unwrap(), QmodZ::zero());
    }
}

#[test]
fn zero_differential_pairing_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let cx = LatticeComplex::endo(&w, x.clone(), IntMatrix::zeros(x.rank(), x.rank())).unwrap();
        let g = random_group_hypercocycle(&mut rng, &cx);
        let d = random_dual_hypercocycle(&mut rng, &w, &cx, 6);
        let total = tn_pairing(&w, &cx, &g, &d, DEFAULT_SUPPORT_BOUND).unwrap();
        let kot = kottwitz_eval(&w, &x, &g.z, &d.t_hat).unwrap();
        let lan = langlands_eval(&w, &x, &d.param, &g.t, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(total, kot + lan);
    }
}

#[test]
fn compatibility_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let cx = LatticeComplex::new(&w, x.clone(), y.clone(), f.clone()).unwrap();
        // ⟨i(u), ẑ⟩ = ⟨u, p̂(ẑ)⟩
        let d = random_dual_hypercocycle(&mut rng, &w, &cx, 6);
        let ty = cx.torus_target();
        let inv = ty.invariants_gens();
        let mut u = vec![bi(0); ty.rank()];
        for j in 0..inv.cols() {
            let k = bi(rng.gen_range(-2..=2));
            for i in 0..ty.rank() {
                u[i] += inv.get(i, j) * &k;
            }
        }
        let lhs = tn_pairing(&w, &cx, &include_target(&cx, &w, &u), &d, DEFAULT_SUPPORT_BOUND).unwrap();
        let rhs = langlands_eval(&w, &y, &d.param, &u, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(lhs, rhs);
        // ⟨z, î(t̂)⟩ = ⟨p(z), t̂⟩
        let g = random_group_hypercocycle(&mut rng, &cx);
        let space = dual_cocycle_space(&w, &x, &y, &f, Some(&LocalParameter::trivial(&w, &y))).unwrap();
        let dt = space.decode(&space.inner().sample(&mut rng, 6));
        let lhs = tn_pairing(&w, &cx, &g, &dt, DEFAULT_SUPPORT_BOUND).unwrap();
        let rhs = kottwitz_eval(&w, &x, &g.z, &dt.t_hat).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn functor_pairing_nt2_and_trivial() {
    let w = WeilModel::canonical_cyclic(2);
    let x = sign_module();
    let two = IntMatrix::from_rows(&[vec![2]]);
    let d = DualHyperCocycle { param: LocalParameter::trivial(&w, &x), t_hat: vec![q(1, 2)] };
    let v = functor_pairing(&w, &x, &x, &x, &two, &two, &nt2_group_cocycle(), &d, DEFAULT_SUPPORT_BOUND).unwrap();
    assert_eq!(v, QmodZ::zero());
    let zero = IntMatrix::from_rows(&[vec![0]]);
    let g = GroupHyperCocycle { z: nt2_group_cocycle().z, t: int_vec(&[0]) };
    let v = functor_pairing(&w, &x, &x, &x, &zero, &zero, &g, &d, DEFAULT_SUPPORT_BOUND).unwrap();
    assert_eq!(v, QmodZ::zero());
}

#[test]
fn functor_pairing_vanishes_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..25 {
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let v = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let g = random_equivariant_map(&mut rng, &y, &v);
        let cf = LatticeComplex::new(&w, x.clone(), y.clone(), f.clone()).unwrap();
        let cg = LatticeComplex::new(&w, y.clone(), v.clone(), g.clone()).unwrap();
        let gs = random_group_hypercocycle(&mut rng, &cf);
        let ds = random_dual_hypercocycle(&mut rng, &w, &cg, 6);
        let val = functor_pairing(&w, &x, &y, &v, &f, &g, &gs, &ds, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(val, QmodZ::zero());
    }
}

#[test]
fn section_change_is_a_hypercoboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..15 {
        let n = rng.gen_range(2..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let cx = LatticeComplex::new(&w, x, y, f).unwrap();
        let g = random_group_hypercocycle(&mut rng, &cx);
        let hc = hyper_preimage(&w, &cx, &g, DEFAULT_SUPPORT_BOUND).unwrap();
        let h = hyper_iso_h(&w, &cx, &hc).unwrap();
        let c = random_section_shift(&mut rng, &w);
        let w2 = w.twisted(&c).unwrap();
        let cx2 = LatticeComplex::new(&w2, cx.x.clone(), cx.y.clone(), cx.f.clone()).unwrap();
        let hc2 = HyperCycle0 { lambda: hc.lambda.clone(), mu: hc.mu.recoordinate(&w, &c) };
        let h2 = hyper_iso_h(&w2, &cx2, &hc2).unwrap();
        assert!(group_cohomologous(&w, &cx, &h, &h2));
    }
}

#[test]
fn pairing_is_bilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..15 {
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let cx = LatticeComplex::new(&w, x, y, f).unwrap();
        let (g1, g2) = (random_group_hypercocycle(&mut rng, &cx), random_group_hypercocycle(&mut rng, &cx));
        let d = random_dual_hypercocycle(&mut rng, &w, &cx, 6);
        let p = |g: &GroupHyperCocycle| tn_pairing(&w, &cx, g, &d, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(p(&add_group(&g1, &g2)), p(&g1) + p(&g2));
        let u0: Vec<BigInt> = (0..cx.torus_source().rank()).map(|_| bi(rng.gen_range(-3..=3))).collect();
        assert_eq!(p(&add_group(&g1, &cx.group_coboundary(&w, &u0))), p(&g1));
        let d2 = random_dual_hypercocycle(&mut rng, &w, &cx, 6);
        let sum = DualHyperCocycle {
            param: d.param.add(&d2.param),
            t_hat: d.t_hat.iter().zip(&d2.t_hat).map(|(a, b)| a.clone() + b.clone()).collect(),
        };
        let q2 = |d: &DualHyperCocycle| tn_pairing(&w, &cx, &g1, d, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(q2(&sum), q2(&d) + q2(&d2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_preimage_maps_to_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let cx = LatticeComplex::new(&w, x, y, f).unwrap();
        let g = random_group_hypercocycle(&mut rng, &cx);
        let hc = hyper_preimage(&w, &cx, &g, DEFAULT_SUPPORT_BOUND).unwrap();
        prop_assert!(hc.is_valid(&w, &cx));
        let h = hyper_iso_h(&w, &cx, &hc).unwrap();
        prop_assert!(group_cohomologous(&w, &cx, &h, &g));
    }

    #[test]
    fn prop_pairing_kills_dual_coboundaries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let w = WeilModel::canonical_cyclic(n);
        let x = random_cyclic_module(&mut rng, n, 2);
        let y = random_cyclic_module(&mut rng, n, 2);
        let f = random_equivariant_map(&mut rng, &x, &y);
        let cx = LatticeComplex::new(&w, x.clone(), y.clone(), f.clone()).unwrap();
        let g = random_group_hypercocycle(&mut rng, &cx);
        // the dual hypercoboundary of s ∈ Ŷ is (∂s, f̂ s)
        let s: Vec<QmodZ> = (0..y.rank()).map(|_| q(rng.gen_range(0..6), 6)).collect();
        let d = DualHyperCocycle { param: LocalParameter::coboundary(&w, &y, &s), t_hat: dual_map(&f, &s) };
        prop_assert!(cx.is_dual_cocycle(&w, &d));
        prop_assert_eq!(tn_pairing(&w, &cx, &g, &d, DEFAULT_SUPPORT_BOUND).unwrap(), QmodZ::zero());
    }
}

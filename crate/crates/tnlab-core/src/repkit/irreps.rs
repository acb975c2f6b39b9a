use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rep::{character, mat_scale, ClassFunction, CycMatrix, Rep, TwistedExtension};
use crate::cohom::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactlin::{cyc_average, cyc_from_qz, qz_kernel_elements, solve_qz, CycScalar, IntMatrix, QmodZ};

fn hom_relations(g: &FiniteGroup, elems: &[usize]) -> IntMatrix {
    let pos = |x: usize| elems.iter().position(|&e| e == x).expect("closed subset");
    let mut rows = Vec::new();
    for &x in elems {
        for &y in elems {
            let mut r = vec![BigInt::zero(); elems.len()];
            r[pos(x)] += 1;
            r[pos(y)] += 1;
            r[pos(g.mul(x, y))] -= 1;
            rows.push(r);
        }
    }
    IntMatrix::from_rows(&rows)
}

/// All homomorphisms `G → ℚ/ℤ`, as value lists indexed by element.
pub fn group_characters(g: &FiniteGroup) -> Vec<Vec<QmodZ>> {
    let elems: Vec<usize> = (0..g.order()).collect();
    qz_kernel_elements(&hom_relations(g, &elems)).expect("characters of a finite group form a finite set")
}

/// Some `β` on the subgroup with `β(x) + β(y) − β(xy) = ω(x,y)`, if one exists.
pub fn trivialize_on(ext: &TwistedExtension, sub: &[usize]) -> Option<Vec<QmodZ>> {
    let g = ext.group();
    let m = hom_relations(g, sub);
    let b: Vec<QmodZ> = sub.iter().flat_map(|&x| sub.iter().map(move |&y| ext.omega(x, y).clone())).collect();
    solve_qz(&m, &b)
}

/// Induction from a subgroup along left coset representatives, for factor sets restricted from `ext`.
pub fn induce(ext: &TwistedExtension, sub: &[usize], rho: &Rep) -> Result<Rep> {
    let g = ext.group();
    if !g.is_subgroup(sub) {
        return Err(Error::Precondition("induction from a non-subgroup".into()));
    }
    let (hext, emb) = ext.restrict(sub)?;
    if rho.ext() != &hext {
        return Err(Error::Precondition("representation does not match the restricted factor set".into()));
    }
    let reps = g.left_coset_reps(sub);
    let (k, d) = (reps.len(), rho.degree());
    let pos = |x: usize| emb.binary_search(&x).ok();
    let mut images = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut m: CycMatrix = vec![vec![CycScalar::zero(); k * d]; k * d];
        for (j, &rj) in reps.iter().enumerate() {
            let xr = g.mul(x, rj);
            let (i, hpos) = reps
                .iter()
                .enumerate()
                .find_map(|(i, &ri)| pos(g.mul(g.inv(ri), xr)).map(|p| (i, p)))
                .expect("cosets cover the group");
            let h = emb[hpos];
            let scalar = cyc_from_qz(&(ext.omega(x, rj) - ext.omega(reps[i], h)));
            let block = mat_scale(rho.image(hpos), &scalar);
            for (a, row) in block.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    m[i * d + a][j * d + b] = v.clone();
                }
            }
        }
        images.push(m);
    }
    Rep::new(ext.clone(), images).map_err(|e| Error::Consistency(format!("induced representation invalid: {}", e)))
}

/// Irreducible `ω`-representations induced from one-dimensional ones on subgroups where `ω` splits.
///
/// Complete exactly when every irreducible is monomial, which holds for all groups of order at
/// most 8; otherwise the squared degrees fall short and the group is reported as unsupported.
fn monomial_irreps(ext: &TwistedExtension) -> Result<Vec<Rep>> {
    let g = ext.group();
    let n = g.order();
    let mut out: Vec<Rep> = Vec::new();
    let mut seen: Vec<ClassFunction> = Vec::new();
    let mut total = 0usize;
    for h in g.subgroups().into_iter().rev() {
        let Some(beta) = trivialize_on(ext, &h) else { continue };
        let (hext, emb) = ext.restrict(&h)?;
        for chi in group_characters(hext.group()) {
            let vals: Vec<QmodZ> = (0..emb.len()).map(|i| &chi[i] + &beta[i]).collect();
            let ind = induce(ext, &h, &Rep::one_dim(hext.clone(), &vals)?)?;
            let ch = character(&ind);
            if seen.contains(&ch) || !ch.inner(&ch)?.is_one() {
                continue;
            }
            total += ind.degree() * ind.degree();
            seen.push(ch);
            out.push(ind);
        }
        if total == n {
            out.sort_by_key(|r| r.degree());
            return Ok(out);
        }
    }
    Err(Error::Unsupported(format!("non-monomial projective representations (found {} of {})", total, n)))
}

/// Every inequivalent irreducible `ω`-projective representation. For an abelian group these are
/// induced from a maximal isotropic subgroup of `e(a,b) = ω(a,b) − ω(b,a)`.
pub fn twisted_irreps(ext: &TwistedExtension) -> Result<Vec<Rep>> {
    let g = ext.group();
    if !g.is_abelian() {
        return monomial_irreps(ext);
    }
    let n = g.order();
    let radical: Vec<usize> = (0..n).filter(|&a| (0..n).all(|b| ext.commutator_pairing(a, b).is_zero())).collect();
    let isotropic = |s: &[usize]| s.iter().all(|&a| s.iter().all(|&b| ext.commutator_pairing(a, b).is_zero()));
    let rad_set: BTreeSet<usize> = radical.iter().copied().collect();
    let b = g
        .subgroups()
        .into_iter()
        .filter(|s| rad_set.iter().all(|r| s.binary_search(r).is_ok()) && isotropic(s))
        .max_by_key(|s| (s.len(), core::cmp::Reverse(s.clone())))
        .expect("the radical itself is isotropic");
    let beta = trivialize_on(ext, &b).ok_or_else(|| Error::Consistency("symmetric factor set not split on an abelian subgroup".into()))?;
    let (bext, emb) = ext.restrict(&b)?;
    let bgroup = bext.group().clone();
    let mut out: Vec<Rep> = Vec::new();
    let mut seen: Vec<ClassFunction> = Vec::new();
    let target = n;
    let mut total = 0usize;
    for chi in group_characters(&bgroup) {
        let vals: Vec<QmodZ> = (0..emb.len()).map(|i| &chi[i] + &beta[i]).collect();
        let lam = Rep::one_dim(bext.clone(), &vals)?;
        let ind = induce(ext, &b, &lam)?;
        let ch = character(&ind);
        if seen.contains(&ch) {
            continue;
        }
        total += ind.degree() * ind.degree();
        seen.push(ch);
        out.push(ind);
    }
    if total != target {
        return Err(Error::Consistency(format!("squared degrees sum to {} instead of {}", total, target)));
    }
    Ok(out)
}

/// Multiplicity of the trivial character, `(1/|A|)·Σ χ(a)`, which must be a nonnegative integer.
pub fn mult_trivial(chi: &ClassFunction) -> Result<BigInt> {
    let avg = cyc_average(chi.values())?;
    if !avg.is_integer() || avg.is_negative() {
        return Err(Error::Consistency(format!("average {} is not a nonnegative integer", avg)));
    }
    Ok(avg.to_integer())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isotypy {
    Disjoint,
    Isotypic,
    Mixed,
}

/// How `ρ` restricted to a normal subgroup meets the one-dimensional `χ` of that subgroup.
pub fn isotypic_check(rho: &Rep, normal: &[usize], chi: &[QmodZ]) -> Result<Isotypy> {
    let g = rho.group();
    if !g.is_subgroup(normal) || !g.is_normal(normal) {
        return Err(Error::Precondition("isotypy needs a normal subgroup".into()));
    }
    let res = rho.restrict(normal)?;
    let chi_f = ClassFunction::new(chi.iter().map(cyc_from_qz).collect());
    let m = res.character().inner(&chi_f)?;
    if m.is_zero() {
        Ok(Isotypy::Disjoint)
    } else if m == num_rational::BigRational::from_integer(BigInt::from(rho.degree())) {
        Ok(Isotypy::Isotypic)
    } else {
        Ok(Isotypy::Mixed)
    }
}

/// `⟨ρ, Ind σ⟩_G = ⟨Res ρ, σ⟩_H`.
pub fn frobenius_check(ext: &TwistedExtension, sub: &[usize], sigma: &Rep, rho: &Rep) -> Result<bool> {
    let ind = induce(ext, sub, sigma)?;
    let lhs = rho.character().inner(&ind.character())?;
    let rhs = rho.restrict(sub)?.character().inner(&sigma.character())?;
    Ok(lhs == rhs)
}

/// For a normal subgroup `H` and an ordinary character `χ` of `H`:
/// `Res_H Ind_H^G χ = Σ_r χ(r^{-1}·r)` over coset representatives.
pub fn mackey_check(g: &FiniteGroup, sub: &[usize], chi: &[QmodZ]) -> Result<bool> {
    if !g.is_normal(sub) {
        return Err(Error::Precondition("Mackey check needs a normal subgroup".into()));
    }
    let ext = TwistedExtension::untwisted(g.clone());
    let (hext, emb) = ext.restrict(sub)?;
    let rep = Rep::one_dim(hext, chi)?;
    let res = induce(&ext, sub, &rep)?.restrict(sub)?.character();
    let pos = |x: usize| emb.binary_search(&x).expect("normal subgroup");
    let expected: Vec<CycScalar> = emb
        .iter()
        .map(|&h| g.left_coset_reps(sub).iter().map(|&r| cyc_from_qz(&chi[pos(g.mul(g.mul(g.inv(r), h), r))])).sum())
        .collect();
    Ok(res == ClassFunction::new(expected))
}

/// Irreducibility through the norm `⟨χ, χ⟩ = 1`.
pub fn is_irreducible(rho: &Rep) -> Result<bool> {
    let ch = rho.character();
    Ok(ch.inner(&ch)?.is_one())
}

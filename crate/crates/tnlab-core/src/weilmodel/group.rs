use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cohom::{ClassModuleModel, FiniteGroup, GModule};
use crate::error::{Error, Result};
use crate::exactlin::{vec_add, vec_is_zero, vec_neg, vec_sub, zero_vec, IntMatrix};

/// Element `(c, σ)` of the relative Weil group, i.e. `c·s(σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeilElem {
    pub c: Vec<BigInt>,
    pub s: usize,
}

/// Extension of `G` by the class module `C` through the fundamental cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilModel {
    cm: ClassModuleModel,
}

impl WeilModel {
    /// Requires `C` to be a lattice, so that elements have unique coordinates.
    pub fn new(cm: ClassModuleModel) -> Result<Self> {
        if !cm.module().is_free() {
            return Err(Error::Unsupported("Weil models over class modules with relations".into()));
        }
        let w = WeilModel { cm };
        w.validate()?;
        Ok(w)
    }

    pub fn canonical_cyclic(n: usize) -> Self {
        WeilModel::new(ClassModuleModel::canonical_cyclic(n)).expect("canonical model")
    }

    fn validate(&self) -> Result<()> {
        let g = self.group();
        let mut gens: Vec<WeilElem> = (0..g.order()).map(|s| self.section(s)).collect();
        for j in 0..self.c_rank() {
            let mut c = zero_vec(self.c_rank());
            c[j] = BigInt::from(1);
            gens.push(WeilElem { c, s: g.identity() });
        }
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    if self.compose(&self.compose(x, y), z) != self.compose(x, &self.compose(y, z)) {
                        return Err(Error::Precondition("Weil model multiplication is not associative".into()));
                    }
                }
            }
            if self.compose(x, &self.inverse(x)) != self.identity() {
                return Err(Error::Consistency("Weil model inverse formula failed".into()));
            }
        }
        Ok(())
    }

    pub fn class_module(&self) -> &ClassModuleModel {
        &self.cm
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cm.group()
    }

    pub fn c_module(&self) -> &GModule {
        self.cm.module()
    }

    pub fn c_rank(&self) -> usize {
        self.cm.rank()
    }

    pub fn a(&self, s: usize, t: usize) -> &[BigInt] {
        self.cm.a(s, t)
    }

    pub fn identity(&self) -> WeilElem {
        WeilElem { c: zero_vec(self.c_rank()), s: self.group().identity() }
    }

    /// `s(σ) = (0, σ)`.
    pub fn section(&self, s: usize) -> WeilElem {
        WeilElem { c: zero_vec(self.c_rank()), s }
    }

    pub fn kernel_elem(&self, c: Vec<BigInt>) -> WeilElem {
        WeilElem { c, s: self.group().identity() }
    }

    /// `(c₁,σ)(c₂,τ) = (c₁ + σc₂ + a_{σ,τ}, στ)`.
    pub fn compose(&self, x: &WeilElem, y: &WeilElem) -> WeilElem {
        let sc = self.c_module().act(x.s, &y.c);
        let c = vec_add(&vec_add(&x.c, &sc), self.a(x.s, y.s));
        WeilElem { c, s: self.group().mul(x.s, y.s) }
    }

    /// `(c,σ)^{-1} = (−σ^{-1}c − a_{σ^{-1},σ}, σ^{-1})`.
    pub fn inverse(&self, x: &WeilElem) -> WeilElem {
        let si = self.group().inv(x.s);
        let c = vec_sub(&vec_neg(&self.c_module().act(si, &x.c)), self.a(si, x.s));
        WeilElem { c, s: si }
    }

    /// The model rebuilt with the section `σ ↦ (c_σ, σ)`; its cocycle is `a + ∂c`.
    pub fn twisted(&self, c: &[Vec<BigInt>]) -> Result<WeilModel> {
        let g = self.group();
        let n = g.order();
        if c.len() != n || !vec_is_zero(&c[g.identity()]) {
            return Err(Error::Precondition("section shift must be a normalized C-valued 1-cochain".into()));
        }
        let cm = self.c_module();
        let a2 = crate::cohom::Cochain::from_fn(n, 2, self.c_rank(), |t| {
            let (s, u) = (t[0], t[1]);
            let v = vec_add(&vec_add(self.a(s, u), &cm.act(s, &c[u])), &c[s]);
            vec_sub(&v, &c[g.mul(s, u)])
        });
        WeilModel::new(ClassModuleModel::new(cm.clone(), a2)?)
    }

    /// Coordinates of an element with respect to the shifted section: `(b,τ) ↦ (b − c_τ, τ)`.
    pub fn recoordinate(&self, c: &[Vec<BigInt>], w: &WeilElem) -> WeilElem {
        WeilElem { c: vec_sub(&w.c, &c[w.s]), s: w.s }
    }

    /// Elements `(c, σ)` with `c` in the box `[−r, r]^m`, in lexicographic order.
    pub fn ball(&self, r: u32) -> Vec<WeilElem> {
        let m = self.c_rank();
        let r = r as i64;
        let mut boxes: Vec<Vec<BigInt>> = alloc::vec![Vec::new()];
        for _ in 0..m {
            let mut next = Vec::new();
            for b in &boxes {
                for k in -r..=r {
                    let mut v = b.clone();
                    v.push(BigInt::from(k));
                    next.push(v);
                }
            }
            boxes = next;
        }
        let mut out = Vec::new();
        for c in boxes {
            for s in 0..self.group().order() {
                out.push(WeilElem { c: c.clone(), s });
            }
        }
        out.sort();
        out
    }
}

/// Finitely supported 1-chain `Σ [w] ⊗ x_w` with values in a lattice of the given rank.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinSuppChain {
    rank: usize,
    support: BTreeMap<WeilElem, Vec<BigInt>>,
}

impl FinSuppChain {
    pub fn zero(rank: usize) -> Self {
        FinSuppChain { rank, support: BTreeMap::new() }
    }

    pub fn single(rank: usize, w: WeilElem, v: Vec<BigInt>) -> Self {
        let mut c = Self::zero(rank);
        c.add_term(w, &v);
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, w: WeilElem, v: &[BigInt]) {
        assert_eq!(v.len(), self.rank, "chain value of the wrong length");
        if vec_is_zero(v) {
            return;
        }
        let entry = self.support.entry(w.clone()).or_insert_with(|| zero_vec(v.len()));
        for (a, b) in entry.iter_mut().zip(v) {
            *a += b;
        }
        if entry.iter().all(Zero::is_zero) {
            self.support.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeilElem, &Vec<BigInt>)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &FinSuppChain) -> FinSuppChain {
        let mut out = self.clone();
        for (w, v) in other.terms() {
            out.add_term(w.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> FinSuppChain {
        FinSuppChain { rank: self.rank, support: self.support.iter().map(|(w, v)| (w.clone(), vec_neg(v))).collect() }
    }

    /// Applies a lattice map to every value.
    pub fn map_values(&self, f: &IntMatrix) -> FinSuppChain {
        let mut out = FinSuppChain::zero(f.rows());
        for (w, v) in self.terms() {
            out.add_term(w.clone(), &f.mul_vec(v));
        }
        out
    }

    /// `∂x = Σ_w (w^{-1}x_w − x_w)`, with `W` acting on `X` through `G`.
    pub fn boundary(&self, model: &WeilModel, x: &GModule) -> Vec<BigInt> {
        let mut acc = zero_vec(self.rank);
        for (w, v) in self.terms() {
            let moved = x.act(model.group().inv(w.s), v);
            acc = vec_add(&acc, &vec_sub(&moved, v));
        }
        acc
    }

    pub fn recoordinate(&self, model: &WeilModel, c: &[Vec<BigInt>]) -> FinSuppChain {
        let mut out = FinSuppChain::zero(self.rank);
        for (w, v) in self.terms() {
            out.add_term(model.recoordinate(c, w), v);
        }
        out
    }
}

/// Boundary of `Σ [w₁|w₂] ⊗ x`: `[w₂]⊗w₁^{-1}x − [w₁w₂]⊗x + [w₁]⊗x`.
pub fn boundary2(model: &WeilModel, x: &GModule, terms: &[(WeilElem, WeilElem, Vec<BigInt>)]) -> FinSuppChain {
    let mut out = FinSuppChain::zero(x.rank());
    for (w1, w2, v) in terms {
        out.add_term(w2.clone(), &x.act(model.group().inv(w1.s), v));
        out.add_term(model.compose(w1, w2), &vec_neg(v));
        out.add_term(w1.clone(), v);
    }
    out
}

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_mod, solve_int, subquotient, FgAbGroup, IntMatrix, Subquotient};

/// A group acting on `ℤ^rank / span(relations)` through integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    rank: usize,
    relations: IntMatrix,
    action: Vec<IntMatrix>,
}

impl GModule {
    pub fn new(group: FiniteGroup, action: Vec<IntMatrix>) -> Result<Self> {
        let rank = action.first().map(IntMatrix::rows).unwrap_or(0);
        Self::with_relations(group, action, IntMatrix::zeros(rank, 0))
    }

    pub fn with_relations(group: FiniteGroup, action: Vec<IntMatrix>, relations: IntMatrix) -> Result<Self> {
        let n = group.order();
        if action.len() != n {
            return Err(Error::Precondition(format!("expected {} action matrices, got {}", n, action.len())));
        }
        let rank = relations.rows();
        for (g, m) in action.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::Precondition(format!("action matrix of element {} has the wrong shape", g)));
            }
        }
        let module = GModule { group, rank, relations, action };
        module.validate()?;
        Ok(module)
    }

    fn same_class(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        if self.relations.cols() == 0 {
            return a == b;
        }
        let diff = a.sub(b);
        (0..diff.cols()).all(|j| {
            solve_int(&IntMatrix::zeros(self.rank, 0), &diff.column(j), &self.relations).is_some()
        })
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        let id = IntMatrix::identity(self.rank);
        if !self.same_class(&self.action[g.identity()], &id) {
            return Err(Error::Precondition("identity does not act trivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = self.action[a].mul(&self.action[b]);
                if !self.same_class(&lhs, &self.action[g.mul(a, b)]) {
                    return Err(Error::Precondition(format!("action is not a homomorphism at ({}, {})", a, b)));
                }
            }
            if self.relations.cols() > 0 {
                let img = self.action[a].mul(&self.relations);
                for j in 0..img.cols() {
                    if solve_int(&IntMatrix::zeros(self.rank, 0), &img.column(j), &self.relations).is_none() {
                        return Err(Error::Precondition(format!("element {} does not preserve the relations", a)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: FiniteGroup, rank: usize) -> Self {
        let action = (0..group.order()).map(|_| IntMatrix::identity(rank)).collect();
        GModule { group, rank, relations: IntMatrix::zeros(rank, 0), action }
    }

    /// Cyclic group action determined by the image of the generator (element 1).
    pub fn cyclic_from_generator(n: usize, gen: IntMatrix) -> Result<Self> {
        let group = FiniteGroup::cyclic(n);
        let r = gen.rows();
        let mut action = Vec::with_capacity(n);
        let mut m = IntMatrix::identity(r);
        for _ in 0..n {
            action.push(m.clone());
            m = gen.mul(&m);
        }
        if m != IntMatrix::identity(r) {
            return Err(Error::Precondition(format!("generator matrix does not have order dividing {}", n)));
        }
        GModule::new(group, action)
    }

    /// ℤ[G] with the left regular action.
    pub fn regular(group: FiniteGroup) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| {
                let mut m = IntMatrix::zeros(n, n);
                for h in 0..n {
                    m.set(group.mul(g, h), h, BigInt::from(1));
                }
                m
            })
            .collect();
        GModule { group, rank: n, relations: IntMatrix::zeros(n, 0), action }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.cols() == 0
    }

    pub fn carrier(&self) -> FgAbGroup {
        FgAbGroup::new(self.rank, self.relations.clone())
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn act(&self, g: usize, v: &[BigInt]) -> Vec<BigInt> {
        self.action[g].mul_vec(v)
    }

    /// Σ_g g, as a matrix.
    pub fn norm_matrix(&self) -> IntMatrix {
        self.action.iter().fold(IntMatrix::zeros(self.rank, self.rank), |acc, m| acc.add(m))
    }

    /// Rows `(g − 1)` stacked over all group elements.
    pub fn augmentation_stack(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let mut out = IntMatrix::zeros(0, self.rank);
        for m in &self.action {
            out = out.vcat(&m.sub(&id));
        }
        out
    }

    /// Columns `(g − 1)e_i` spanning the augmentation submodule.
    pub fn augmentation_span(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let mut out = IntMatrix::zeros(self.rank, 0);
        for m in &self.action {
            out = out.hcat(&m.sub(&id));
        }
        out
    }

    /// Relations repeated once per block, for maps into `block_count` copies of the module.
    pub fn block_relations(&self, block_count: usize) -> IntMatrix {
        let blocks: Vec<IntMatrix> = (0..block_count).map(|_| self.relations.clone()).collect();
        IntMatrix::block_diagonal(&blocks)
    }

    /// Generators of the invariants `M^G` (modulo relations).
    pub fn invariants_gens(&self) -> IntMatrix {
        kernel_mod(&self.augmentation_stack(), &self.block_relations(self.group.order()))
    }

    /// `M^G` as a lattice (modulo relations).
    pub fn invariants(&self) -> Result<Subquotient> {
        subquotient(self.rank, &self.invariants_gens(), &self.relations)
    }

    pub fn is_invariant(&self, v: &[BigInt]) -> bool {
        (0..self.group.order()).all(|g| {
            let d: Vec<BigInt> = self.act(g, v).iter().zip(v).map(|(a, b)| a - b).collect();
            self.is_zero(&d)
        })
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        if self.is_free() {
            v.iter().all(|x| x.sign() == num_bigint::Sign::NoSign)
        } else {
            solve_int(&IntMatrix::zeros(self.rank, 0), v, &self.relations).is_some()
        }
    }

    /// Contragredient on `Hom(M, ℤ)`: g acts by `(g^{-1})^T`. Only for lattices.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_free() {
            return Err(Error::Unsupported("dual of a module with relations".into()));
        }
        let action = (0..self.group.order()).map(|g| self.action[self.group.inv(g)].transpose()).collect();
        GModule::new(self.group.clone(), action)
    }

    /// `self ⊗ other` with index `i * other.rank + j`.
    pub fn tensor(&self, other: &GModule) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Precondition("tensor of modules over different groups".into()));
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.kron(b)).collect();
        let rel_a = self.relations.kron(&IntMatrix::identity(other.rank));
        let rel_b = IntMatrix::identity(self.rank).kron(&other.relations);
        GModule::with_relations(self.group.clone(), action, rel_a.hcat(&rel_b))
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Precondition("sum of modules over different groups".into()));
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| IntMatrix::block_diagonal(&[a.clone(), b.clone()]))
            .collect();
        let rel = IntMatrix::block_diagonal(&[self.relations.clone(), other.relations.clone()]);
        GModule::with_relations(self.group.clone(), action, rel)
    }

    /// Restriction to a subgroup given by its sorted element list.
    pub fn restrict(&self, sub: &[usize]) -> Result<(GModule, Vec<usize>)> {
        let (h, emb) = self.group.subgroup_as_group(sub)?;
        let action = emb.iter().map(|&g| self.action[g].clone()).collect();
        Ok((GModule::with_relations(h, action, self.relations.clone())?, emb))
    }

    /// Whether `f: self → target` commutes with the actions.
    pub fn is_equivariant(&self, f: &IntMatrix, target: &GModule) -> bool {
        f.rows() == target.rank
            && f.cols() == self.rank
            && (0..self.group.order()).all(|g| {
                let d = f.mul(&self.action[g]).sub(&target.action[g].mul(f));
                (0..d.cols()).all(|j| target.is_zero(&d.column(j)))
            })
    }

    /// A ℤ-basis of the equivariant maps `self → target` (lattices only).
    pub fn hom_basis(&self, target: &GModule) -> Result<Vec<IntMatrix>> {
        if !self.is_free() || !target.is_free() {
            return Err(Error::Unsupported("equivariant maps between modules with relations".into()));
        }
        let (r0, r1) = (self.rank, target.rank);
        let mut eqs = IntMatrix::zeros(0, r0 * r1);
        for g in 0..self.group.order() {
            let (a0, a1) = (&self.action[g], &target.action[g]);
            let mut block = IntMatrix::zeros(r1 * r0, r1 * r0);
            for i in 0..r1 {
                for j in 0..r0 {
                    let row = i * r0 + j;
                    for k in 0..r0 {
                        *block.get_mut(row, i * r0 + k) += a0.get(k, j);
                    }
                    for k in 0..r1 {
                        *block.get_mut(row, k * r0 + j) -= a1.get(i, k);
                    }
                }
            }
            eqs = eqs.vcat(&block);
        }
        let ker = crate::exactlin::kernel_basis(&eqs);
        Ok((0..ker.cols())
            .map(|c| {
                let v = ker.column(c);
                let rows: Vec<Vec<BigInt>> = (0..r1).map(|i| v[i * r0..(i + 1) * r0].to_vec()).collect();
                if r1 == 0 { IntMatrix::zeros(0, r0) } else { IntMatrix::from_rows(&rows) }
            })
            .collect())
    }
}

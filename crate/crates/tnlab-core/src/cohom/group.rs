use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Precondition("empty group table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Precondition("malformed group table".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Precondition("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::Precondition(format!("element {} has no inverse", g)))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Precondition(format!("associativity fails at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverse })
    }

    /// ℤ/n with element `i` standing for σ^i.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(table).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        table[a * m + b][c * m + d] = self.mul(a, c) * m + other.mul(b, d);
                    }
                }
            }
        }
        FiniteGroup::from_table(table).expect("product of groups is a group")
    }

    pub fn klein_four() -> Self {
        Self::cyclic(2).product(&Self::cyclic(2))
    }

    /// Dihedral group of order `2n`: `r^i` is `i`, `s·r^i` is `n + i`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let elem = |refl: bool, i: usize| if refl { n + i } else { i };
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (fa, ia) = (a >= n, a % n);
                let (fb, ib) = (b >= n, b % n);
                // s r^i = r^{-i} s
                let i = if fb { (n + ib - ia) % n } else { (ia + ib) % n };
                table[a][b] = elem(fa != fb, i);
            }
        }
        FiniteGroup::from_table(table).expect("dihedral table is a group")
    }

    /// Quaternion group: `i^k` is `k`, `i^k·j` is `4 + k`.
    pub fn quaternion() -> Self {
        let mut table = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (fa, ka) = (a >= 4, a % 4);
                let (fb, kb) = (b >= 4, b % 4);
                // j i = i^{-1} j and j^2 = i^2
                let (f, k) = match (fa, fb) {
                    (false, _) => (fb, (ka + kb) % 4),
                    (true, false) => (true, (ka + 4 - kb) % 4),
                    (true, true) => (false, (ka + 4 - kb + 2) % 4),
                };
                table[a][b] = if f { 4 + k } else { k };
            }
        }
        FiniteGroup::from_table(table).expect("quaternion table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }

    /// Smallest subgroup containing `gens`, sorted.
    pub fn generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(self.identity);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity) && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// All subgroups, each sorted, listed by size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![self.identity]];
        found.insert(vec![self.identity]);
        while !layer.is_empty() {
            let mut next = Vec::new();
            for h in &layer {
                for g in 0..n {
                    if h.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.push(g);
                    let k = self.generated_by(&gens);
                    if found.insert(k.clone()) {
                        next.push(k);
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        (0..self.order()).all(|g| sub.iter().all(|&h| set.contains(&self.mul(self.mul(g, h), self.inv(g)))))
    }

    /// Left coset representatives `g·H`, each the least element of its coset.
    pub fn left_coset_reps(&self, sub: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &h in sub {
                seen[self.mul(g, h)] = true;
            }
        }
        reps
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            cls.sort();
            cls.dedup();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls);
        }
        out
    }

    /// The subgroup as a group on `0..|sub|`, with the embedding into `self`.
    pub fn subgroup_as_group(&self, sub: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(sub) {
            return Err(Error::Precondition("not a subgroup".into()));
        }
        let mut emb: Vec<usize> = sub.to_vec();
        emb.sort();
        emb.dedup();
        let pos = |x: usize| emb.binary_search(&x).expect("closed subset");
        let table = emb.iter().map(|&a| emb.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        Ok((FiniteGroup::from_table(table)?, emb))
    }
}

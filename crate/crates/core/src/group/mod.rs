//! Finite groups: permutation groups, conjugacy classes, Gassmann
//! equivalence, characters and rational idempotents, and the group ring
//! `R = Q[G]/(N_G)` with the forms and factorizations built on it.

mod characters;
mod compositum;
pub mod factor;
mod perm;
pub mod ring;

pub use characters::{
    isotypic_dims, rational_idempotents, rational_isotypic_dims, CharacterTable, RationalIdempotent,
};
pub use compositum::{compositum_decomposition, CompositumSplit};
pub use factor::{factor_nu, gram_of_vector, solve_gram_preimage, CVec, PermModule};
pub use perm::{Perm, PermGroupData, MAX_ORDER};
pub use ring::{
    is_g_invariant, isotypic_split, norm_element, norm_ideal_basis, psi_map, psi_map_exact,
    scale_isotype, sym_g_form, sym_g_space, Block, IsotypicSplit, PsiTuple,
};

use crate::error::{Error, Result};

/// Budgets on group order for the more expensive operations.
pub const CLASS_BUDGET: usize = 5000;
pub const IDEMPOTENT_BUDGET: usize = 2000;
pub const SYM_G_BUDGET: usize = 500;

/// A finite group as a multiplication table with the identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl GroupTable {
    pub fn new(mul: Vec<Vec<usize>>) -> Self {
        let n = mul.len();
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == 0).expect("every element has an inverse"))
            .collect();
        GroupTable { mul, inv }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul[acc][a])
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |l, a| {
            let o = self.element_order(a);
            l / gcd(l, o) * o
        })
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul[g][x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set = self.indicator(h);
        !h.is_empty() && set[0] && h.iter().all(|&a| h.iter().all(|&b| set[self.mul[a][self.inv[b]]]))
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let set = self.indicator(h);
        (0..self.order()).all(|g| h.iter().all(|&x| set[self.conj(g, x)]))
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul[self.mul[g][x]][self.inv[g]]
    }

    pub fn indicator(&self, h: &[usize]) -> Vec<bool> {
        let mut set = vec![false; self.order()];
        for &x in h {
            set[x] = true;
        }
        set
    }

    /// Conjugacy classes ordered by size, then smallest element.
    pub fn classes(&self) -> Classes {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = (0..n).map(|g| self.conj(g, x)).collect();
            c.sort_unstable();
            c.dedup();
            for &y in &c {
                class_of[y] = classes.len();
            }
            classes.push(c);
        }
        Classes::sorted(classes, n)
    }

    pub fn are_conjugate(&self, h1: &[usize], h2: &[usize]) -> bool {
        if h1.len() != h2.len() {
            return false;
        }
        let target = self.indicator(h2);
        (0..self.order()).any(|g| h1.iter().all(|&x| target[self.conj(g, x)]))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl Classes {
    fn sorted(mut classes: Vec<Vec<usize>>, n: usize) -> Self {
        classes.sort_by_key(|c| (c.len(), c[0]));
        let mut class_of = vec![0; n];
        for (k, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = k;
            }
        }
        Classes { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// `|c cap H|` for every class `c`.
    pub fn meet_counts(&self, h: &[usize]) -> Vec<usize> {
        let mut v = vec![0; self.classes.len()];
        for &x in h {
            v[self.class_of[x]] += 1;
        }
        v
    }
}

/// Conjugacy classes of a permutation group, computed by orbits under
/// conjugation by the generators.
pub fn conjugacy_classes(g: &PermGroupData) -> Result<Classes> {
    if g.order() > CLASS_BUDGET {
        return Err(Error::OrderBudgetExceeded { order: g.order(), budget: CLASS_BUDGET });
    }
    let n = g.order();
    let gens: Vec<(Perm, Perm)> = g.generators.iter().map(|p| (p.clone(), p.inverse())).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let k = classes.len();
        class_of[x] = k;
        let mut members = vec![x];
        let mut i = 0;
        while i < members.len() {
            let p = &g.elements()[members[i]];
            for (s, si) in &gens {
                let q = s.compose(p).compose(si);
                let j = g.index_of(&q).expect("group closed under conjugation");
                if class_of[j] == usize::MAX {
                    class_of[j] = k;
                    members.push(j);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(Classes::sorted(classes, n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GassmannResult {
    pub equivalent: bool,
    pub conjugate: bool,
    pub counts: (Vec<usize>, Vec<usize>),
}

/// Two subgroups are Gassmann equivalent when they meet every conjugacy
/// class in the same number of elements.
pub fn gassmann_equivalent(g: &PermGroupData, h1: &[Perm], h2: &[Perm]) -> Result<GassmannResult> {
    let a = g.subgroup(h1)?;
    let b = g.subgroup(h2)?;
    if a.len() != b.len() {
        return Err(Error::IndexMismatch(g.order() / a.len(), g.order() / b.len()));
    }
    let cl = conjugacy_classes(g)?;
    let ca = cl.meet_counts(&a);
    let cb = cl.meet_counts(&b);
    let conjugate = perm_conjugate(g, &a, &b);
    Ok(GassmannResult { equivalent: ca == cb, conjugate, counts: (ca, cb) })
}

fn perm_conjugate(g: &PermGroupData, a: &[usize], b: &[usize]) -> bool {
    let mut target = vec![false; g.order()];
    for &x in b {
        target[x] = true;
    }
    g.elements().iter().any(|s| {
        let si = s.inverse();
        a.iter().all(|&x| {
            let q = s.compose(&g.elements()[x]).compose(&si);
            target[g.index_of(&q).expect("closed")]
        })
    })
}

/// Cyclic group of order `n` as a table (`i * j = i + j mod n`).
pub fn cyclic(n: usize) -> GroupTable {
    GroupTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
}

/// Direct product table, element `(a, b)` at index `a * |H| + b`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (m, n) = (g.order(), h.order());
    let mul = (0..m * n)
        .map(|x| {
            (0..m * n)
                .map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n))
                .collect()
        })
        .collect();
    GroupTable::new(mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let s3 = PermGroupData::parse(3, &["(1,2,3)", "(1,2)"]).unwrap();
        let cl = conjugacy_classes(&s3).unwrap();
        assert_eq!(cl.sizes(), vec![1, 2, 3]);
        let t = s3.table(100).unwrap();
        assert_eq!(t.classes(), cl);
    }

    #[test]
    fn psl27() {
        let g = PermGroupData::parse(7, &["(1,2,3,4,5,6,7)", "(3,5)(6,7)"]).unwrap();
        assert_eq!(conjugacy_classes(&g).unwrap().len(), 6);
    }

    #[test]
    fn cyclic_tables() {
        let c4 = cyclic(4);
        assert_eq!(c4.exponent(), 4);
        assert!(c4.is_normal(&[0, 2]));
        let k = direct_product(&cyclic(2), &cyclic(2));
        assert_eq!(k.exponent(), 2);
        assert_eq!(k.classes().len(), 4);
    }
}

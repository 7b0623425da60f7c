use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j] = i;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Parses cycle notation on `{1..n}` such as `(1,2,3)(4,5)`; `()` is
    /// the identity.
    pub fn parse(s: &str, n: usize) -> Result<Perm> {
        let mut img: Vec<usize> = (0..n).collect();
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("bad cycle string {s:?}")));
            }
            let end = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &rest[1..end];
            rest = &rest[end + 1..];
            if body.is_empty() {
                continue;
            }
            let pts: Result<Vec<usize>> = body
                .split(',')
                .map(|x| {
                    let v: usize = x
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad point {x:?} in {s:?}")))?;
                    if v == 0 || v > n {
                        return Err(Error::Parse(format!("point {v} out of range 1..={n}")));
                    }
                    Ok(v - 1)
                })
                .collect();
            let pts = pts?;
            let mut seen = pts.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != pts.len() {
                return Err(Error::Parse(format!("repeated point in {s:?}")));
            }
            // cycles are applied right to left
            let mut c: Vec<usize> = (0..n).collect();
            for k in 0..pts.len() {
                c[pts[k]] = pts[(k + 1) % pts.len()];
            }
            img = img.iter().map(|&i| c[i]).collect();
        }
        Ok(Perm(img))
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for i in 0..n {
            if seen[i] || self.0[i] == i {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut j = i;
            let mut first = true;
            while !seen[j] {
                seen[j] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", j + 1)?;
                first = false;
                j = self.0[j];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Largest group the crate will enumerate.
pub const MAX_ORDER: usize = 5000;

/// A permutation group listed element by element, with named subgroups.
#[derive(Clone, Debug)]
pub struct PermGroupData {
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    pub subgroups: BTreeMap<String, Vec<Perm>>,
}

impl PermGroupData {
    /// Enumerates the group generated by `generators`; elements are sorted
    /// by image list, so the identity comes first.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Invalid(format!("generator {g} has degree {}", g.degree())));
            }
        }
        let elements = closure(degree, &generators, MAX_ORDER)?;
        let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(PermGroupData { degree, generators, elements, index, subgroups: BTreeMap::new() })
    }

    pub fn parse(degree: usize, generators: &[&str]) -> Result<Self> {
        let g: Result<Vec<Perm>> = generators.iter().map(|s| Perm::parse(s, degree)).collect();
        Self::new(degree, g?)
    }

    pub fn with_subgroup(mut self, name: &str, generators: &[&str]) -> Result<Self> {
        let g: Result<Vec<Perm>> = generators.iter().map(|s| Perm::parse(s, self.degree)).collect();
        let g = g?;
        for p in &g {
            if !self.index.contains_key(p) {
                return Err(Error::Invalid(format!("subgroup generator {p} not in the group")));
            }
        }
        self.subgroups.insert(name.to_string(), g);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<Vec<usize>> {
        let els = closure(self.degree, gens, MAX_ORDER)?;
        let mut idx: Vec<usize> = els
            .iter()
            .map(|p| {
                self.index_of(p)
                    .ok_or_else(|| Error::Invalid(format!("{p} is not in the group")))
            })
            .collect::<Result<_>>()?;
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn named_subgroup(&self, name: &str) -> Result<Vec<usize>> {
        let g = self
            .subgroups
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("no subgroup named {name:?}")))?;
        self.subgroup(g)
    }

    /// Multiplication table, inverses and identity at index 0.
    pub fn table(&self, budget: usize) -> Result<super::GroupTable> {
        if self.order() > budget {
            return Err(Error::OrderBudgetExceeded { order: self.order(), budget });
        }
        let n = self.order();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect();
        Ok(super::GroupTable::new(mul))
    }
}

fn closure(degree: usize, gens: &[Perm], budget: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if !seen.contains_key(&q) {
                if seen.len() >= budget {
                    return Err(Error::OrderBudgetExceeded { order: seen.len() + 1, budget });
                }
                seen.insert(q.clone(), ());
                queue.push_back(q);
            }
        }
    }
    let mut els: Vec<Perm> = seen.into_keys().collect();
    els.sort();
    Ok(els)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1,2,3)(4,5)", 5).unwrap();
        assert_eq!(p.0, vec![1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1,2,3)(4,5)");
        assert_eq!(p.order(), 6);
        assert!(Perm::parse("()", 3).unwrap().is_identity());
        assert!(Perm::parse("(1,4)", 3).is_err());
        assert!(Perm::parse("(1,1)", 3).is_err());
    }

    #[test]
    fn orders() {
        let s4 = PermGroupData::parse(4, &["(1,2,3,4)", "(1,2)"]).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(s4.elements()[0].is_identity());
        let psl = PermGroupData::parse(7, &["(1,2,3,4,5,6,7)", "(3,5)(6,7)"]).unwrap();
        assert_eq!(psl.order(), 168);
    }

    #[test]
    fn budget() {
        let s8 = PermGroupData::parse(8, &["(1,2,3,4,5,6,7,8)", "(1,2)"]);
        assert!(matches!(s8, Err(Error::OrderBudgetExceeded { .. })));
    }
}

//! The ring `R_Q = Q[G]/(N_G)`. Elements are coefficient vectors indexed by
//! group element; coordinates in the standard basis (images of every
//! element except the last) are `a_k - a_last`.

use rug::{Float, Rational};

use super::{GroupTable, RationalIdempotent, SYM_G_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::bmat::{self, BMat};
use crate::numeric::qmat::{self, QMat};

pub fn basis_element(t: &GroupTable, g: usize) -> Vec<Rational> {
    let mut v = vec![Rational::new(); t.order()];
    v[g] = Rational::from(1);
    v
}

pub fn mul(t: &GroupTable, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = t.order();
    let mut out = vec![Rational::new(); n];
    for (x, ax) in a.iter().enumerate() {
        if *ax == 0 {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            if *by != 0 {
                out[t.mul(x, y)] += Rational::from(ax * by);
            }
        }
    }
    out
}

/// `g -> g^{-1}` extended linearly.
pub fn bar(t: &GroupTable, a: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); t.order()];
    for (x, ax) in a.iter().enumerate() {
        out[t.inv(x)] = ax.clone();
    }
    out
}

/// Representative with coefficient sum zero.
pub fn mean_zero(a: &[Rational]) -> Vec<Rational> {
    let n = a.len() as i64;
    let mean = a.iter().fold(Rational::new(), |s, x| s + x) / Rational::from(n);
    a.iter().map(|x| Rational::from(x - &mean)).collect()
}

pub fn coords(a: &[Rational]) -> Vec<Rational> {
    let last = a.last().cloned().unwrap_or_default();
    a[..a.len() - 1].iter().map(|x| Rational::from(x - &last)).collect()
}

pub fn from_coords(c: &[Rational]) -> Vec<Rational> {
    let mut v = c.to_vec();
    v.push(Rational::new());
    mean_zero(&v)
}

/// Trace of left multiplication by `z` on `R_Q`.
pub fn trace(t: &GroupTable, z: &[Rational]) -> Rational {
    let eps = z.iter().fold(Rational::new(), |s, x| s + x);
    Rational::from(&z[0] * t.order() as i64) - eps
}

/// Matrix of left multiplication by `z` on `R_Q` in the standard basis.
pub fn left_matrix(t: &GroupTable, z: &[Rational]) -> QMat {
    let n = t.order();
    let cols: Vec<Vec<Rational>> = (0..n - 1).map(|k| coords(&mul(t, z, &basis_element(t, k)))).collect();
    qmat::transpose(&cols)
}

/// `N_H`.
pub fn norm_element(t: &GroupTable, h: &[usize]) -> Vec<Rational> {
    let mut v = vec![Rational::new(); t.order()];
    for &x in h {
        v[x] = Rational::from(1);
    }
    v
}

/// Rows spanning the right ideal `N_H R_Q`, in standard coordinates.
pub fn norm_ideal_basis(t: &GroupTable, h: &[usize]) -> QMat {
    let nh = norm_element(t, h);
    let rows: QMat = (0..t.order()).map(|g| coords(&mul(t, &nh, &basis_element(t, g)))).collect();
    nonzero_rref(&rows)
}

pub(crate) fn nonzero_rref(rows: &QMat) -> QMat {
    if rows.is_empty() || rows[0].is_empty() {
        return Vec::new();
    }
    let (r, piv) = qmat::rref(rows);
    r.into_iter().take(piv.len()).collect()
}

/// Matrix of `Tr_eta(x, y) = trace(x eta bar(y))` on the standard basis.
pub fn sym_g_form(t: &GroupTable, eta: &[Rational]) -> QMat {
    let n = t.order();
    let eps = eta.iter().fold(Rational::new(), |s, x| s + x);
    (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| Rational::from(&eta[t.mul(t.inv(i), j)] * n as i64) - &eps)
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SymGBasis {
    /// Basis of `A_Q = {eta in R_Q : bar(eta) = eta}` as mean-zero vectors.
    pub etas: Vec<Vec<Rational>>,
    pub forms: Vec<QMat>,
}

impl SymGBasis {
    pub fn dim(&self) -> usize {
        self.etas.len()
    }
}

/// Basis of the symmetric `G`-invariant forms on `R_Q`, certified exactly.
pub fn sym_g_space(t: &GroupTable) -> Result<SymGBasis> {
    if t.order() > SYM_G_BUDGET {
        return Err(Error::OrderBudgetExceeded { order: t.order(), budget: SYM_G_BUDGET });
    }
    let n = t.order();
    let mut rows: QMat = Vec::new();
    for x in 0..n {
        let xi = t.inv(x);
        if xi < x {
            continue;
        }
        let mut v = vec![Rational::new(); n];
        v[x] += 1;
        if xi != x {
            v[xi] += 1;
        }
        rows.push(mean_zero(&v));
    }
    let etas = nonzero_rref(&rows);
    let gens = t.generators();
    let mut forms = Vec::with_capacity(etas.len());
    for eta in &etas {
        let f = sym_g_form(t, eta);
        if qmat::transpose(&f) != f {
            return Err(Error::InvarianceViolated("trace form not symmetric".into()));
        }
        if !is_g_invariant(t, &f, &gens) {
            return Err(Error::InvarianceViolated("trace form not invariant".into()));
        }
        forms.push(f);
    }
    Ok(SymGBasis { etas, forms })
}

/// The form `m` extended to all group elements (index `n-1` is the
/// relation `g_last = -sum g_k`).
struct Extended<'a> {
    m: &'a QMat,
    row_sums: Vec<Rational>,
    col_sums: Vec<Rational>,
    total: Rational,
}

impl<'a> Extended<'a> {
    fn new(m: &'a QMat) -> Self {
        let k = m.len();
        let row_sums: Vec<Rational> = (0..k).map(|i| m[i].iter().fold(Rational::new(), |s, x| s + x)).collect();
        let col_sums: Vec<Rational> = (0..k).map(|j| (0..k).fold(Rational::new(), |s, i| s + &m[i][j])).collect();
        let total = row_sums.iter().fold(Rational::new(), |s, x| s + x);
        Extended { m, row_sums, col_sums, total }
    }

    fn at(&self, i: usize, j: usize) -> Rational {
        let k = self.m.len();
        match (i == k, j == k) {
            (false, false) => self.m[i][j].clone(),
            (true, false) => -self.col_sums[j].clone(),
            (false, true) => -self.row_sums[i].clone(),
            (true, true) => self.total.clone(),
        }
    }
}

/// `m(g x, g y) = m(x, y)` on the standard basis for every `g` in `gens`.
pub fn is_g_invariant(t: &GroupTable, m: &QMat, gens: &[usize]) -> bool {
    let e = Extended::new(m);
    let k = m.len();
    gens.iter().all(|&g| {
        (0..k).all(|i| (0..k).all(|j| e.at(t.mul(g, i), t.mul(g, j)) == m[i][j]))
    })
}

/// Largest `|m(g x, g y) - m(x, y)|` over generators, for ball forms.
pub fn invariance_defect(t: &GroupTable, m: &BMat, gens: &[usize]) -> f64 {
    let k = m.len();
    let at = |i: usize, j: usize| -> f64 {
        match (i == k, j == k) {
            (false, false) => m[i][j].to_f64(),
            (true, false) => -(0..k).map(|a| m[a][j].to_f64()).sum::<f64>(),
            (false, true) => -(0..k).map(|b| m[i][b].to_f64()).sum::<f64>(),
            (true, true) => (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| m[a][b].to_f64()).sum(),
        }
    };
    let mut worst: f64 = 0.0;
    for &g in gens {
        for i in 0..k {
            for j in 0..k {
                worst = worst.max((at(t.mul(g, i), t.mul(g, j)) - m[i][j].to_f64()).abs());
            }
        }
    }
    worst
}

/// `c b(e x, e y) + b((1-e) x, (1-e) y)` for a central idempotent `e`.
pub fn scale_isotype(t: &GroupTable, b: &QMat, e: &[Rational], c: &Rational) -> QMat {
    let p = left_matrix(t, e);
    let k = p.len();
    let id = qmat::identity(k);
    let q: QMat = (0..k).map(|i| (0..k).map(|j| Rational::from(&id[i][j] - &p[i][j])).collect()).collect();
    let a = qmat::mul(&qmat::mul(&qmat::transpose(&p), b), &p);
    let d = qmat::mul(&qmat::mul(&qmat::transpose(&q), b), &q);
    (0..k)
        .map(|i| (0..k).map(|j| Rational::from(c * &a[i][j]) + &d[i][j]).collect())
        .collect()
}

#[derive(Clone, Debug)]
pub enum PsiTuple {
    Exact(Vec<Rational>),
    Approx(Vec<BigReal>),
}

fn restrict_q(b: &QMat, basis: &QMat) -> QMat {
    qmat::mul(&qmat::mul(basis, b), &qmat::transpose(basis))
}

fn to_ball(m: &QMat, prec: u32) -> BMat {
    m.iter().map(|r| r.iter().map(|x| BigReal::from_rational(x, prec)).collect()).collect()
}

/// `psi_i(b) = det(B_i b B_i^T)` exactly.
pub fn psi_map_exact(b: &QMat, bases: &[QMat]) -> Result<Vec<Rational>> {
    let v: Vec<Rational> = bases
        .iter()
        .map(|bi| if bi.is_empty() { Rational::from(1) } else { qmat::det(&restrict_q(b, bi)) })
        .collect();
    if v.iter().all(|x| *x == 0) {
        return Err(Error::AllZero);
    }
    Ok(v)
}

/// `psi_i(b) = det(B_i b B_i^T)` in ball arithmetic.
pub fn psi_map(b: &BMat, bases: &[QMat], prec: u32) -> Result<PsiTuple> {
    let mut v = Vec::with_capacity(bases.len());
    for bi in bases {
        if bi.is_empty() {
            v.push(BigReal::one(prec));
            continue;
        }
        let bb = to_ball(bi, prec);
        let r = bmat::mul(&bmat::mul(&bb, b, prec), &bmat::transpose(&bb), prec);
        v.push(bmat::det(&r, prec)?);
    }
    if v.iter().all(|x| x.contains_zero()) {
        return Err(Error::AllZero);
    }
    Ok(PsiTuple::Approx(v))
}

#[derive(Clone, Debug)]
pub struct Block {
    /// Index into the idempotent list.
    pub idempotent: usize,
    /// Rows spanning `e R` in standard coordinates.
    pub basis: QMat,
    pub gram: BMat,
}

#[derive(Clone, Debug)]
pub struct IsotypicSplit {
    pub blocks: Vec<Block>,
    /// Upper bound on the entries of all cross blocks.
    pub cross_mass: Float,
}

/// Restricts `form` to each rational isotypic component and certifies the
/// cross blocks below `tol`.
pub fn isotypic_split(
    t: &GroupTable,
    form: &BMat,
    idempotents: &[RationalIdempotent],
    classes: &super::Classes,
    tol: &Float,
    prec: u32,
) -> Result<IsotypicSplit> {
    let mut blocks = Vec::new();
    for (k, e) in idempotents.iter().enumerate() {
        let el = e.element(classes);
        let rows: QMat = (0..t.order() - 1).map(|g| coords(&mul(t, &el, &basis_element(t, g)))).collect();
        let basis = nonzero_rref(&rows);
        if basis.is_empty() {
            continue;
        }
        let bb = to_ball(&basis, prec);
        let gram = bmat::mul(&bmat::mul(&bb, form, prec), &bmat::transpose(&bb), prec);
        blocks.push(Block { idempotent: k, basis, gram });
    }
    let mut cross = Float::new(64);
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            let ba = to_ball(&blocks[a].basis, prec);
            let bb = to_ball(&blocks[b].basis, prec);
            let m = bmat::mul(&bmat::mul(&ba, form, prec), &bmat::transpose(&bb), prec);
            for x in m.iter().flatten() {
                let v = x.mag();
                if v > cross {
                    cross = Float::with_val(64, &v);
                }
            }
        }
    }
    if cross >= *tol {
        return Err(Error::InvarianceViolated(format!("cross-block mass {}", cross.to_f64())));
    }
    Ok(IsotypicSplit { blocks, cross_mass: cross })
}

impl GroupTable {
    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![0usize];
        for x in 1..self.order() {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.subgroup(&gens);
            }
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, direct_product, rational_idempotents, PermGroupData};
    use super::*;

    #[test]
    fn sym_g_dims() {
        assert_eq!(sym_g_space(&cyclic(2)).unwrap().dim(), 1);
        assert_eq!(sym_g_space(&cyclic(3)).unwrap().dim(), 1);
        assert_eq!(sym_g_space(&cyclic(4)).unwrap().dim(), 2);
    }

    #[test]
    fn trace_of_identity() {
        let t = cyclic(5);
        assert_eq!(trace(&t, &basis_element(&t, 0)), 4);
        let s3 = PermGroupData::parse(3, &["(1,2,3)", "(1,2)"]).unwrap().table(10).unwrap();
        let z = basis_element(&s3, 3);
        let m = left_matrix(&s3, &z);
        let tr = (0..m.len()).fold(Rational::new(), |s, i| s + &m[i][i]);
        assert_eq!(tr, trace(&s3, &z));
    }

    #[test]
    fn norm_ideals() {
        let k = direct_product(&cyclic(2), &cyclic(2));
        assert_eq!(norm_ideal_basis(&k, &[0, 1]).len(), 1);
        assert_eq!(norm_ideal_basis(&k, &[0]).len(), 3);
        assert_eq!(norm_ideal_basis(&k, &[0, 1, 2, 3]).len(), 0);
    }

    #[test]
    fn split_rejects_non_invariant() {
        let t = cyclic(3);
        let es = rational_idempotents(&t).unwrap();
        let cl = t.classes();
        let p = 64;
        let g = vec![
            vec![BigReal::from_i64(2, p), BigReal::from_i64(1, p)],
            vec![BigReal::from_i64(1, p), BigReal::from_i64(2, p)],
        ];
        let tol = Float::with_val(64, 1e-10);
        let s = isotypic_split(&t, &g, &es, &cl, &tol, p).unwrap();
        assert_eq!(s.blocks.len(), 1);
        let k = direct_product(&cyclic(2), &cyclic(2));
        let es = rational_idempotents(&k).unwrap();
        let bad: BMat = (0..3)
            .map(|i| (0..3).map(|j| BigReal::from_i64(if i == j { i as i64 + 1 } else { 0 }, p)).collect())
            .collect();
        assert!(matches!(
            isotypic_split(&k, &bad, &es, &k.classes(), &tol, p),
            Err(Error::InvarianceViolated(_))
        ));
    }
}

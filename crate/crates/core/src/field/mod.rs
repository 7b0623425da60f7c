//! Number fields given by a defining polynomial, their embeddings, the
//! logarithmic embedding of units, log-unit lattices and regulators.

mod element;
mod loglattice;

pub use element::FieldElement;
pub use loglattice::{
    include_sublattice, independent_subset, log_embed, log_lattice, regulator, Inclusion, LogLattice,
    UnitSystem,
};

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::complex::BigComplex;
use crate::numeric::poly::RationalPoly;
use crate::numeric::roots::{poly_roots, RootBall};

/// How irreducibility of the defining polynomial was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Every factor degree up to `n/2` was excluded.
    Certified,
    /// Only small factor degrees were excluded; irreducibility is assumed.
    Trusted,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    poly: RationalPoly,
    n: usize,
    r: usize,
    s: usize,
    prec: u32,
    /// `r` real roots ascending, then one root of each conjugate pair
    /// (positive imaginary part) by argument.
    embeddings: Vec<BigComplex>,
    irreducibility: Irreducibility,
}

const SUBSET_BUDGET: usize = 50_000;

fn binom(n: usize, k: usize) -> usize {
    let mut c: usize = 1;
    for i in 0..k {
        c = c.saturating_mul(n - i) / (i + 1);
    }
    c
}

impl NumberField {
    /// Builds the field `Q[x]/(p)`, checking squarefreeness and searching
    /// for rational factors through products of root subsets.
    pub fn build(p: &RationalPoly, prec: u32) -> Result<Self> {
        let n = p.degree().ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
        if n == 0 {
            return Err(Error::Invalid("constant polynomial".into()));
        }
        if !p.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let roots = poly_roots(p, prec)?;
        let irreducibility = check_irreducible(p, &roots, prec)?;
        let r = roots.iter().filter(|x| x.real).count();
        let s = (n - r) / 2;
        let mut embeddings: Vec<BigComplex> = roots
            .iter()
            .filter(|x| x.real)
            .map(|x| x.value.clone())
            .collect();
        embeddings.extend(
            roots
                .iter()
                .filter(|x| !x.real && x.value.im.is_positive())
                .map(|x| x.value.clone()),
        );
        Ok(NumberField {
            poly: p.clone(),
            n,
            r,
            s,
            prec,
            embeddings,
            irreducibility,
        })
    }

    pub fn from_i64(coeffs: &[i64], prec: u32) -> Result<Self> {
        Self::build(&RationalPoly::from_i64(coeffs), prec)
    }

    /// The same field with embeddings recomputed at `prec` bits.
    pub fn at_prec(&self, prec: u32) -> Result<Self> {
        if prec == self.prec {
            return Ok(self.clone());
        }
        let roots = poly_roots(&self.poly, prec)?;
        let mut embeddings: Vec<BigComplex> = roots
            .iter()
            .filter(|x| x.real)
            .map(|x| x.value.clone())
            .collect();
        embeddings.extend(
            roots
                .iter()
                .filter(|x| !x.real && x.value.im.is_positive())
                .map(|x| x.value.clone()),
        );
        Ok(NumberField { prec, embeddings, ..self.clone() })
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn is_totally_real(&self) -> bool {
        self.s == 0
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    /// Unit rank `r + s - 1`.
    pub fn unit_rank(&self) -> usize {
        self.r + self.s - 1
    }

    pub fn embeddings(&self) -> &[BigComplex] {
        &self.embeddings
    }

    /// Real embeddings of the generator (totally real fields).
    pub fn real_roots(&self) -> Vec<BigReal> {
        self.embeddings[..self.r].iter().map(|z| z.re.clone()).collect()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_rational(Rational::new(), self.n)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_rational(Rational::from(1), self.n)
    }

    /// The generator `theta`.
    pub fn gen(&self) -> FieldElement {
        if self.n == 1 {
            // theta is the rational root of a linear polynomial
            let c = -self.poly.coeff(0) / self.poly.coeff(1);
            return FieldElement::from_rational(c, 1);
        }
        let mut v = vec![Rational::new(); self.n];
        v[1] = Rational::from(1);
        FieldElement::new(v)
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.n {
            return Err(Error::Invalid(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.n
            )));
        }
        Ok(FieldElement::new(coords))
    }

    pub fn from_poly(&self, q: &RationalPoly) -> FieldElement {
        let r = q.rem(&self.poly);
        let mut v = r.coeffs().to_vec();
        v.resize(self.n, Rational::new());
        FieldElement::new(v)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| Rational::from(x + y))
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| Rational::from(x - y))
                .collect(),
        )
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.to_poly().mul(&b.to_poly()))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        let (g, s, _) = a.to_poly().ext_gcd(&self.poly);
        if g.degree() != Some(0) {
            return Err(Error::Invalid("element is not invertible".into()));
        }
        Ok(self.from_poly(&s))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Image of `a` under the endomorphism `theta -> q(theta)`.
    pub fn substitute(&self, a: &FieldElement, q: &FieldElement) -> FieldElement {
        self.from_poly(&a.to_poly().compose_mod(&q.to_poly(), &self.poly))
    }

    /// Matrix of multiplication by `a` in the power basis (columns are the
    /// coordinates of `a theta^j`).
    pub fn mult_matrix(&self, a: &FieldElement) -> Vec<Vec<Rational>> {
        let mut cols = Vec::with_capacity(self.n);
        let mut cur = a.clone();
        let th = self.gen();
        for _ in 0..self.n {
            cols.push(cur.coords().to_vec());
            cur = self.mul(&cur, &th);
        }
        crate::numeric::qmat::transpose(&cols)
    }

    /// Characteristic polynomial of `a` over `Q`.
    pub fn charpoly(&self, a: &FieldElement) -> RationalPoly {
        crate::numeric::qmat::charpoly(&self.mult_matrix(a))
    }

    /// Minimal polynomial of `a` over `Q`.
    pub fn minpoly(&self, a: &FieldElement) -> RationalPoly {
        self.charpoly(a).squarefree_part()
    }

    pub fn norm(&self, a: &FieldElement) -> Rational {
        crate::numeric::qmat::det(&self.mult_matrix(a))
    }

    pub fn trace(&self, a: &FieldElement) -> Rational {
        let m = self.mult_matrix(a);
        (0..self.n).fold(Rational::new(), |s, i| s + &m[i][i])
    }

    /// Exact unit test: integral characteristic polynomial with constant
    /// term `+-1`.
    pub fn is_unit(&self, a: &FieldElement) -> bool {
        let cp = self.charpoly(a);
        cp.coeffs().iter().all(|c| *c.denom() == 1) && cp.coeff(0).clone().abs() == 1
    }

    /// `a` evaluated at the real embedding `i`.
    pub fn eval_real(&self, a: &FieldElement, i: usize) -> BigReal {
        a.to_poly().eval_ball(&self.embeddings[i].re)
    }

    /// `a` evaluated at embedding `i` (complex for `i >= r`).
    pub fn eval(&self, a: &FieldElement, i: usize) -> BigComplex {
        if i < self.r {
            BigComplex::real(self.eval_real(a, i))
        } else {
            a.to_poly().eval_complex(&self.embeddings[i])
        }
    }

    /// Index of the real embedding whose root ball contains `x`, when
    /// exactly one does.
    pub fn match_real_root(&self, x: &BigReal) -> Option<usize> {
        let hits: Vec<usize> = (0..self.r)
            .filter(|&i| self.embeddings[i].re.overlaps(x))
            .collect();
        if hits.len() == 1 {
            Some(hits[0])
        } else {
            None
        }
    }

    /// Polynomial discriminant of the defining polynomial (for a monic
    /// integral polynomial this is `disc(K)` times a square).
    pub fn poly_discriminant(&self) -> Rational {
        let p = &self.poly;
        let n = self.n;
        let dp = p.derivative();
        // disc = (-1)^{n(n-1)/2} / lc * res(p, p') ; res via the norm of p'(theta)
        let d = self.from_poly(&dp);
        let nm = self.norm(&d);
        let lc = p.lead();
        let pw = Rational::from(rug::ops::Pow::pow(&lc, (n as u32).saturating_sub(2)));
        let mut v = nm * pw;
        // norm of p'(theta) for monic p is res(p,p'); rescale for non-monic
        if (n * (n - 1) / 2) % 2 == 1 {
            v = -v;
        }
        v
    }
}

fn check_irreducible(p: &RationalPoly, roots: &[RootBall], prec: u32) -> Result<Irreducibility> {
    let n = roots.len();
    if n <= 1 {
        return Ok(Irreducibility::Certified);
    }
    let (pm, a) = p.monic_integral();
    let ab = BigReal::from_integer(&a, prec);
    let scaled: Vec<BigComplex> = roots.iter().map(|r| r.value.scale(&ab)).collect();
    let half = n / 2;
    let total: usize = (1..=half).map(|k| binom(n, k)).sum();
    let max_k = if total <= SUBSET_BUDGET { half } else { half.min(3) };
    let mut undecided = false;
    let mut idx: Vec<usize> = Vec::new();
    for k in 1..=max_k {
        idx.clear();
        idx.extend(0..k);
        loop {
            match subset_factor(&pm, &scaled, &idx, prec) {
                SubsetVerdict::Factor(f) => {
                    return Err(Error::ReducibleDetected(format!("factor {f}")));
                }
                SubsetVerdict::Undecided => undecided = true,
                SubsetVerdict::NotFactor => {}
            }
            // next k-subset in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    Ok(if undecided || max_k < half {
        Irreducibility::Trusted
    } else {
        Irreducibility::Certified
    })
}

enum SubsetVerdict {
    Factor(RationalPoly),
    NotFactor,
    Undecided,
}

fn subset_factor(pm: &RationalPoly, roots: &[BigComplex], idx: &[usize], prec: u32) -> SubsetVerdict {
    // coefficients of prod (x - r_i), highest first
    let mut c: Vec<BigComplex> = vec![BigComplex::one(prec)];
    for &i in idx {
        let mut next = vec![BigComplex::zero(prec); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] = &next[k] + ck;
            next[k + 1] = &next[k + 1] - &(ck * &roots[i]);
        }
        c = next;
    }
    let mut ints = Vec::with_capacity(c.len());
    for z in &c {
        if !z.im.contains_zero() {
            return SubsetVerdict::NotFactor;
        }
        let near = z.re.mid().to_integer().unwrap_or_default();
        if !z.re.contains_rational(&Rational::from(&near)) {
            return SubsetVerdict::NotFactor;
        }
        if z.re.rad().to_f64() >= 0.5 || z.im.rad().to_f64() >= 0.5 {
            return SubsetVerdict::Undecided;
        }
        ints.push(near);
    }
    let f = RationalPoly::new(ints.into_iter().rev().map(Rational::from).collect());
    if pm.rem(&f).is_zero() {
        SubsetVerdict::Factor(f)
    } else {
        SubsetVerdict::NotFactor
    }
}

/// `p` as a polynomial with integer coefficients, if it has them.
pub fn integer_coeffs(p: &RationalPoly) -> Option<Vec<Integer>> {
    p.coeffs()
        .iter()
        .map(|c| if *c.denom() == 1 { Some(c.numer().clone()) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        let k = NumberField::from_i64(&[-2, 0, 1], 64).unwrap();
        assert_eq!(k.signature(), (2, 0));
        let i = NumberField::from_i64(&[1, 0, 1], 64).unwrap();
        assert_eq!(i.signature(), (0, 1));
        let c = NumberField::from_i64(&[-2, 0, 0, 1], 64).unwrap();
        assert_eq!(c.signature(), (1, 1));
        assert_eq!(c.irreducibility(), Irreducibility::Certified);
    }

    #[test]
    fn septic_is_totally_real() {
        let k = NumberField::from_i64(&[-5217, -3782, 496, 755, 25, -47, -2, 1], 128).unwrap();
        assert_eq!(k.signature(), (7, 0));
        assert_eq!(k.irreducibility(), Irreducibility::Certified);
    }

    #[test]
    fn reducible_detected() {
        // (x^2 - 2)(x^2 - 3)
        let e = NumberField::from_i64(&[6, 0, -5, 0, 1], 64).unwrap_err();
        assert!(matches!(e, Error::ReducibleDetected(_)));
        let e = NumberField::from_i64(&[-1, 0, 1], 64).unwrap_err();
        assert!(matches!(e, Error::ReducibleDetected(_)));
    }

    #[test]
    fn arithmetic() {
        let k = NumberField::from_i64(&[-2, 0, 1], 64).unwrap();
        let u = k.element(vec![Rational::from(1), Rational::from(1)]).unwrap();
        assert_eq!(k.norm(&u), -1);
        assert!(k.is_unit(&u));
        let inv = k.inv(&u).unwrap();
        assert_eq!(k.mul(&u, &inv), k.one());
        assert_eq!(k.pow(&u, -2).unwrap(), k.mul(&inv, &inv));
        assert_eq!(k.poly_discriminant(), 8);
    }

    #[test]
    fn discriminant_of_cubic() {
        let k = NumberField::from_i64(&[-1, -2, 1, 1], 64).unwrap();
        assert_eq!(k.poly_discriminant(), 49);
        let c = NumberField::from_i64(&[-2, 0, 0, 1], 64).unwrap();
        assert_eq!(c.poly_discriminant(), -108);
    }
}

//! Sparse multivariate polynomials over Q, the product of a linear form over
//! its sign orbit, and desquaring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::ball::{self, BigReal};
use crate::numeric::poly::parse_rational;

pub const MAX_SIGN_VARS: usize = 8;

/// Exponent vector ordered graded lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::from(1));
        p
    }

    /// `sum c_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c == 0 {
            return;
        }
        let m = Monomial(e);
        let zero = {
            let slot = self.terms.entry(m.clone()).or_default();
            *slot += c;
            *slot == 0
        };
        if zero {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(&Monomial(e.to_vec())).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.0.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(-c))).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut p = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                p.add_term(e, Rational::from(ca * cb));
            }
        }
        p
    }

    /// `x_i -> -x_i`.
    pub fn flip_sign(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), if m.0[i] % 2 == 1 { Rational::from(-c) } else { c.clone() }))
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|e| e % 2 == 0))
    }

    /// `p(x_0^2, ..., x_n^2)`.
    pub fn square_substitute(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (Monomial(m.0.iter().map(|e| 2 * e).collect()), c.clone())).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn eval_rational(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut s = Rational::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_ball(&self, x: &[BigReal], prec: u32) -> BigReal {
        assert_eq!(x.len(), self.nvars);
        let terms: Vec<BigReal> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut t = BigReal::from_rational(c, prec);
                for (xi, &e) in x.iter().zip(&m.0) {
                    if e > 0 {
                        t = &t * &xi.pow_u(e);
                    }
                }
                t
            })
            .collect();
        ball::sum(&terms, prec)
    }

    /// Parses `"4*x0^2 - 9*x1^2"`. Variables are `x0, x1, ...`; `nvars`
    /// defaults to one past the largest index.
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<Self> {
        let mut raw: Vec<(Vec<(usize, u32)>, Rational)> = Vec::new();
        let mut max_var = None::<usize>;
        for (sign, body) in split_terms(s)? {
            let mut coef = Rational::from(sign);
            let mut vars = Vec::new();
            for f in body.split('*').map(str::trim) {
                if f.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {body:?}")));
                }
                if let Some(rest) = f.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.trim().parse().map_err(|_| Error::Parse(format!("bad variable {f:?}")))?;
                    max_var = Some(max_var.map_or(idx, |m| m.max(idx)));
                    vars.push((idx, exp));
                } else {
                    coef *= parse_rational(f)?;
                }
            }
            raw.push((vars, coef));
        }
        let n = nvars.unwrap_or(max_var.map_or(0, |m| m + 1));
        if max_var.is_some_and(|m| m >= n) {
            return Err(Error::Parse(format!("variable index out of range for {n} variables")));
        }
        let mut p = Self::zero(n);
        for (vars, c) in raw {
            let mut e = vec![0; n];
            for (i, k) in vars {
                e[i] += k;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn split_terms(s: &str) -> Result<Vec<(i64, String)>> {
    let s: String = s.split_whitespace().collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    for ch in s.chars() {
        let is_sign = ch == '+' || ch == '-';
        if is_sign && cur.is_empty() {
            if ch == '-' {
                sign = -sign;
            }
        } else if is_sign && !cur.ends_with(['^', '*', '/']) {
            out.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    out.push((sign, cur));
    Ok(out)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0;
            let a = Rational::from(c.abs_ref());
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn product(mut fs: Vec<MultiPoly>) -> MultiPoly {
    while fs.len() > 1 {
        let mut next = Vec::with_capacity(fs.len().div_ceil(2));
        let mut it = fs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.mul(&b)),
                None => next.push(a),
            }
        }
        fs = next;
    }
    fs.pop().expect("nonempty")
}

/// `prod_g g f` for `f = sum c_i x_i`, over the sign changes of
/// `x_1, ..., x_n` (signs modulo global negation).
pub fn sign_orbit_product(coeffs: &[Rational]) -> Result<MultiPoly> {
    if coeffs.is_empty() || coeffs.iter().all(|c| *c == 0) {
        return Err(Error::Invalid("linear form is zero".into()));
    }
    let n = coeffs.len() - 1;
    if n > MAX_SIGN_VARS {
        return Err(Error::BudgetExceeded(format!("{} sign factors", Integer::from(1) << n as u32)));
    }
    let factors = (0..1usize << n)
        .map(|mask| {
            let c: Vec<Rational> = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i > 0 && mask >> (i - 1) & 1 == 1 { Rational::from(-c) } else { c.clone() })
                .collect();
            MultiPoly::linear(&c)
        })
        .collect();
    let h = product(factors);
    if !h.is_even() {
        return Err(Error::NotEven);
    }
    Ok(h)
}

pub fn desquare(h: &MultiPoly) -> Result<MultiPoly> {
    if !h.is_even() {
        return Err(Error::NotEven);
    }
    let terms = h.terms.iter().map(|(m, c)| (Monomial(m.0.iter().map(|e| e / 2).collect()), c.clone())).collect();
    Ok(MultiPoly { nvars: h.nvars, terms })
}

#[derive(Clone, Debug)]
pub struct Vanishing {
    pub value: BigReal,
    /// Largest `N` with `|value| < 2^-N` certified, if any.
    pub bits: Option<u32>,
    /// The value is certified nonzero.
    pub separated: bool,
}

impl Vanishing {
    pub fn vanishes_to(&self, n: u32) -> bool {
        self.bits.is_some_and(|b| b >= n)
    }
}

pub fn vanishing_check(p: &MultiPoly, point: &[BigReal], prec: u32) -> Result<Vanishing> {
    if point.len() != p.nvars() {
        return Err(Error::RankMismatch(point.len(), p.nvars()));
    }
    let value = p.eval_ball(point, prec);
    let m = value.mag();
    let bits = if m.is_zero() {
        Some(prec)
    } else {
        let e = m.get_exp().unwrap_or(0);
        // m < 2^e, so |value| < 2^-N with N = -e
        (e <= 0).then(|| (-e) as u32)
    };
    Ok(Vanishing { separated: !value.contains_zero(), value, bits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn two_terms() {
        assert_eq!(sign_orbit_product(&q(&[1, 1])).unwrap().to_string(), "x0^2 - x1^2");
        assert_eq!(sign_orbit_product(&q(&[2, 3])).unwrap().to_string(), "4*x0^2 - 9*x1^2");
    }

    #[test]
    fn three_terms() {
        let h = sign_orbit_product(&q(&[1, 1, 1])).unwrap();
        let want = MultiPoly::parse("x0^4 + x1^4 + x2^4 - 2*x0^2*x1^2 - 2*x0^2*x2^2 - 2*x1^2*x2^2", None).unwrap();
        assert_eq!(h, want);
        let d = desquare(&h).unwrap();
        let want = MultiPoly::parse("x0^2 + x1^2 + x2^2 - 2*x0*x1 - 2*x0*x2 - 2*x1*x2", None).unwrap();
        assert_eq!(d, want);
        assert_eq!(d.square_substitute(), h);
    }

    #[test]
    fn not_even() {
        let p = MultiPoly::parse("x0*x1", None).unwrap();
        assert_eq!(desquare(&p), Err(Error::NotEven));
    }

    #[test]
    fn budget() {
        assert!(matches!(sign_orbit_product(&q(&[1; 10])), Err(Error::BudgetExceeded(_))));
        assert!(sign_orbit_product(&q(&[0, 0])).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["4*x0^2 - 9*x1^2", "-x0 + 1/2", "0", "-3/7*x0*x2^3 + x1", "x0^2 - x1^2 + -2"] {
            let p = MultiPoly::parse(s, None).unwrap();
            assert_eq!(MultiPoly::parse(&p.to_string(), Some(p.nvars())).unwrap(), p, "{s}");
        }
        assert!(MultiPoly::parse("x0 +", None).is_err());
        assert!(MultiPoly::parse("x1", Some(1)).is_err());
    }

    #[test]
    fn vanishing() {
        let p = MultiPoly::parse("x0 - x1", None).unwrap();
        let a = BigReal::from_i64(3, 128);
        let v = vanishing_check(&p, &[a.clone(), a], 128).unwrap();
        assert!(v.vanishes_to(100));
        let v = vanishing_check(&p, &[BigReal::from_i64(3, 128), BigReal::from_i64(2, 128)], 128).unwrap();
        assert!(v.separated);
        assert!(!v.vanishes_to(1));
    }
}

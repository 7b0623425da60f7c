//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;

use rug::{Integer, Rational};

use super::ball::BigReal;
use super::complex::{BigComplex, MpComplex};
use crate::error::{Error, Result};

/// Degree cap for polynomials handled by the root finder and field code.
pub const MAX_DEGREE: usize = 64;

/// Coefficients are stored in ascending order of degree with no trailing
/// zeros; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| *c == 0) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::new(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&Rational::from(l.recip_ref()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += Rational::from(a * b);
            }
        }
        Self::new(v)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = Rational::from(d.lead().recip_ref());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = Rational::from(&r[k + dd] * &lead_inv);
            if c != 0 {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] -= Rational::from(&c * b);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = Rational::from(r0.lead().recip_ref());
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_ball(&self, x: &BigReal) -> BigReal {
        let p = x.prec();
        let mut acc = BigReal::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &BigReal::from_rational(c, p);
        }
        acc
    }

    pub fn eval_complex(&self, z: &BigComplex) -> BigComplex {
        let p = z.prec();
        let mut acc = BigComplex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + &BigComplex::real(BigReal::from_rational(c, p));
        }
        acc
    }

    pub fn eval_mp(&self, z: &MpComplex) -> MpComplex {
        let p = z.prec();
        let mut acc = MpComplex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + &MpComplex::from_real(rug::Float::with_val(p, c));
        }
        acc
    }

    /// `self(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `self(q(x)) mod m`, reducing after every Horner step.
    pub fn compose_mod(&self, q: &Self, m: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone())).rem(m);
        }
        acc
    }

    /// Primitive integer polynomial proportional to `self`, positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        let mut v: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Rational::from(c * &l).numer().clone())
            .collect();
        let mut g = Integer::new();
        for c in &v {
            g.gcd_mut(c);
        }
        if g != 0 {
            for c in v.iter_mut() {
                *c /= &g;
            }
        }
        if v.last().map_or(false, |c| *c < 0) {
            for c in v.iter_mut() {
                *c = -c.clone();
            }
        }
        v
    }

    /// Monic integer polynomial whose roots are `a * r` for the roots `r`
    /// of `self`, together with the scale `a` (the leading coefficient of
    /// the primitive integer form).
    pub fn monic_integral(&self) -> (Self, Integer) {
        let v = self.primitive_integer();
        let n = v.len() - 1;
        let a = v[n].clone();
        // P(y) = a^{n-1} p(y / a) = sum c_i a^{n-1-i} y^i
        let mut out = Vec::with_capacity(n + 1);
        for (i, c) in v.iter().enumerate() {
            if i == n {
                out.push(Rational::from(1));
            } else {
                let pw = Integer::from(rug::ops::Pow::pow(&a, (n - 1 - i) as u32));
                out.push(Rational::from(Integer::from(c * &pw)));
            }
        }
        (Self::new(out), a)
    }

    /// Parses a comma-separated ascending coefficient list such as
    /// `"-2,0,1"`.
    pub fn parse_coeffs(s: &str) -> Result<Self> {
        let v: Result<Vec<Rational>> = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect();
        Ok(Self::new(v?))
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = Integer::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
            let q = Integer::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::from((p, q)))
        }
        None => Ok(Rational::from(Integer::from_str_radix(s, 10).map_err(|_| bad())?)),
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = a != 1 || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = RationalPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let q = RationalPoly::from_i64(&[1, 1]); // x + 1
        let (d, r) = p.div_rem(&q);
        assert_eq!(d, RationalPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        let sq = p.mul(&q); // (x-1)(x+1)^2
        assert!(!sq.is_squarefree());
        assert_eq!(sq.gcd(&sq.derivative()), q);
        assert!(p.is_squarefree());
    }

    #[test]
    fn ext_gcd_identity() {
        let a = RationalPoly::from_i64(&[-2, 0, 1]);
        let b = RationalPoly::from_i64(&[3, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, RationalPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn monic_integral_transform() {
        // 2x^2 - 3x + 1 -> roots 1, 1/2 scaled by 2 -> y^2 - 3y + 2
        let p = RationalPoly::from_i64(&[1, -3, 2]);
        let (m, a) = p.monic_integral();
        assert_eq!(a, 2);
        assert_eq!(m, RationalPoly::from_i64(&[2, -3, 1]));
    }

    #[test]
    fn display() {
        let p = RationalPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.to_string(), "x^2 - 2");
        let q = RationalPoly::from_i64(&[1, -1, 0, 3]);
        assert_eq!(q.to_string(), "3*x^3 - x + 1");
    }
}

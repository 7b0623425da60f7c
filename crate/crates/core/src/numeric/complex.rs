//! Complex numbers: certified rectangular balls and plain multiprecision
//! values used inside iterative solvers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::Float;

use super::ball::BigReal;
use crate::error::{Error, Result};

/// A complex ball: independent real balls for the real and imaginary parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex { re, im: BigReal::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::real(BigReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::real(BigReal::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn from_mp(z: &MpComplex) -> Self {
        BigComplex {
            re: BigReal::exact(z.re.clone()),
            im: BigReal::exact(z.im.clone()),
        }
    }

    pub fn mid(&self) -> MpComplex {
        MpComplex {
            re: self.re.mid().clone(),
            im: self.im.mid().clone(),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> BigReal {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> BigReal {
        let n = self.norm_sqr();
        n.sqrt().expect("norm is non-negative")
    }

    /// `log |z|`, failing when the ball may contain zero.
    pub fn ln_abs(&self) -> Result<BigReal> {
        let n = self.norm_sqr();
        if !n.is_positive() {
            return Err(Error::BallTooWide("log|z| of a ball containing zero".into()));
        }
        let half = BigReal::from_f64(0.5, n.prec());
        Ok(&n.ln()? * &half)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_real_certified(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn checked_div(&self, b: &BigComplex) -> Result<BigComplex> {
        let d = b.norm_sqr();
        let num = self * &b.conj();
        Ok(BigComplex {
            re: num.re.checked_div(&d)?,
            im: num.im.checked_div(&d)?,
        })
    }

    pub fn scale(&self, s: &BigReal) -> BigComplex {
        BigComplex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// Upper bound on `|z - c|` over the ball, `c` the midpoint, as a float.
    pub fn radius_bound(&self) -> Float {
        let r = Float::with_val_round(30, self.re.rad() * self.re.rad(), Round::Up).0;
        let i = Float::with_val_round(30, self.im.rad() * self.im.rad(), Round::Up).0;
        let mut s = Float::with_val_round(30, &r + &i, Round::Up).0;
        s.sqrt_round(Round::Up);
        s
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + i({})", self.re, self.im)
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: &self.re + &b.re,
            im: &self.im + &b.im,
        }
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: &self.re - &b.re,
            im: &self.im - &b.im,
        }
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: &(&self.re * &b.re) - &(&self.im * &b.im),
            im: &(&self.re * &b.im) + &(&self.im * &b.re),
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// Plain (uncertified) multiprecision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        MpComplex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        MpComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        MpComplex { re, im: Float::new(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        MpComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn conj(&self) -> Self {
        MpComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re / &d),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &d)),
        }
    }

    pub fn div(&self, b: &MpComplex) -> Self {
        self * &b.recip()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return MpComplex::zero(p);
        }
        // sqrt((r + |re|)/2) then the other component from im / (2 s)
        let t = Float::with_val(p, (Float::with_val(p, &r + &*self.re.as_abs())) / 2u32).sqrt();
        let u = Float::with_val(p, &self.im / Float::with_val(p, &t * 2u32));
        if self.re >= 0 {
            MpComplex { re: t, im: u }
        } else if self.im >= 0 {
            MpComplex { re: u.abs(), im: t }
        } else {
            MpComplex { re: u.abs(), im: -t }
        }
    }
}

impl Add<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn add(self, b: &MpComplex) -> MpComplex {
        let p = self.prec().max(b.prec());
        MpComplex {
            re: Float::with_val(p, &self.re + &b.re),
            im: Float::with_val(p, &self.im + &b.im),
        }
    }
}

impl Sub<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn sub(self, b: &MpComplex) -> MpComplex {
        let p = self.prec().max(b.prec());
        MpComplex {
            re: Float::with_val(p, &self.re - &b.re),
            im: Float::with_val(p, &self.im - &b.im),
        }
    }
}

impl Mul<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn mul(self, b: &MpComplex) -> MpComplex {
        let p = self.prec().max(b.prec());
        let rr = Float::with_val(p, &self.re * &b.re);
        let ii = Float::with_val(p, &self.im * &b.im);
        let ri = Float::with_val(p, &self.re * &b.im);
        let ir = Float::with_val(p, &self.im * &b.re);
        MpComplex {
            re: rr - ii,
            im: ri + ir,
        }
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_sqrt_of_negative_real() {
        let z = MpComplex::from_f64(-4.0, 0.0, 64);
        let s = z.sqrt();
        assert!((s.re.to_f64()).abs() < 1e-15);
        assert!((s.im.to_f64() - 2.0).abs() < 1e-15);
        let w = MpComplex::from_f64(3.0, -4.0, 64).sqrt();
        assert!((w.re.to_f64() - 2.0).abs() < 1e-15);
        assert!((w.im.to_f64() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn ball_product_contains_exact() {
        let a = BigComplex::new(BigReal::from_i64(1, 64), BigReal::from_i64(2, 64));
        let b = BigComplex::new(BigReal::from_i64(3, 64), BigReal::from_i64(-1, 64));
        let c = &a * &b;
        assert!(c.re.contains_rational(&5.into()));
        assert!(c.im.contains_rational(&5.into()));
        let q = c.checked_div(&b).unwrap();
        assert!(q.re.contains_rational(&1.into()));
        assert!(q.im.contains_rational(&2.into()));
    }
}

//! Midpoint-radius real balls over MPFR floats.
//!
//! A `BigReal` denotes the closed interval `[mid - rad, mid + rad]`. Every
//! operation returns a ball guaranteed to contain the exact result of the
//! operation applied to any points of the input balls. Radii are kept at a
//! low fixed precision and always rounded upward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision (bits) used for radii.
pub const RAD_PREC: u32 = 30;

#[derive(Clone, Debug)]
pub struct BigReal {
    mid: Float,
    rad: Float,
}

fn rad_zero() -> Float {
    Float::new(RAD_PREC)
}

/// Upper bound for the rounding error committed when `x` was produced with
/// ternary value `ord`.
fn rounding_err(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal || x.is_zero() {
        return rad_zero();
    }
    let e = x.get_exp().unwrap_or(0);
    Float::with_val(RAD_PREC, Float::i_exp(1, e - x.prec() as i32))
}

pub(crate) fn up_add(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a + b, Round::Up).0
}

pub(crate) fn up_mul(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a * b, Round::Up).0
}

fn up_abs(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, &*x.as_abs(), Round::Up).0
}

fn down_abs(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, &*x.as_abs(), Round::Down).0
}

impl BigReal {
    pub fn from_parts(mid: Float, rad: Float) -> Self {
        let rad = if rad.is_sign_negative() {
            rad_zero()
        } else {
            Float::with_val_round(RAD_PREC, &rad, Round::Up).0
        };
        BigReal { mid, rad }
    }

    pub fn exact(mid: Float) -> Self {
        BigReal { mid, rad: rad_zero() }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        BigReal { mid, rad }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        BigReal { mid, rad }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        BigReal { mid, rad }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, q, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        BigReal { mid, rad }
    }

    pub fn pi(prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        BigReal { mid, rad }
    }

    /// Enlarges the radius by `extra` (which must be non-negative).
    pub fn widen(&self, extra: &Float) -> Self {
        BigReal {
            mid: self.mid.clone(),
            rad: up_add(&self.rad, &up_abs(extra)),
        }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Same ball with the midpoint rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = up_add(&self.rad, &rounding_err(&mid, ord));
        BigReal { mid, rad }
    }

    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid - &self.rad, Round::Down).0
    }

    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` for every `x` in the ball.
    pub fn mag(&self) -> Float {
        up_add(&up_abs(&self.mid), &self.rad)
    }

    /// Lower bound on `|x|` for every `x` in the ball (zero if the ball
    /// contains zero).
    pub fn mag_lower(&self) -> Float {
        let m = down_abs(&self.mid);
        let d = Float::with_val_round(RAD_PREC, &m - &self.rad, Round::Down).0;
        if d.is_sign_negative() {
            rad_zero()
        } else {
            d
        }
    }

    pub fn is_positive(&self) -> bool {
        let lo = self.lower();
        lo > 0
    }

    pub fn is_negative(&self) -> bool {
        let hi = self.upper();
        hi < 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn overlaps(&self, other: &BigReal) -> bool {
        (self - other).contains_zero()
    }

    /// True when the rational `q` lies inside the ball.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let Some(m) = self.mid.to_rational() else {
            return false;
        };
        let Some(r) = self.rad.to_rational() else {
            return false;
        };
        let d = Rational::from(&m - q).abs();
        d <= r
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &BigReal) -> bool {
        (other - self).is_positive()
    }

    /// Radius relative to the magnitude of the midpoint, as an `f64`.
    pub fn rel_accuracy_bits(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        if self.mid.is_zero() {
            return -self.rad.to_f64().log2();
        }
        let m = self.mid.get_exp().unwrap_or(0) as f64;
        let r = self.rad.get_exp().unwrap_or(0) as f64;
        m - r
    }

    pub fn abs(&self) -> BigReal {
        if self.contains_zero() {
            // [0, mag]
            let m = self.mag();
            let half = Float::with_val_round(self.prec(), &m / 2u32, Round::Up).0;
            let rad = Float::with_val_round(RAD_PREC, &half, Round::Up).0;
            return BigReal { mid: half, rad };
        }
        BigReal {
            mid: self.mid.clone().abs(),
            rad: self.rad.clone(),
        }
    }

    pub fn sqr(&self) -> BigReal {
        self * self
    }

    pub fn pow_u(&self, k: u32) -> BigReal {
        let mut acc = BigReal::one(self.prec());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }

    pub fn mul_i64(&self, c: i64) -> BigReal {
        self * &BigReal::from_i64(c, self.prec())
    }

    pub fn mul_rational(&self, q: &Rational) -> BigReal {
        self * &BigReal::from_rational(q, self.prec())
    }

    /// Reciprocal; fails when the ball contains zero.
    pub fn recip(&self) -> Result<BigReal> {
        BigReal::one(self.prec()).checked_div(self)
    }

    pub fn checked_div(&self, b: &BigReal) -> Result<BigReal> {
        if b.contains_zero() {
            return Err(Error::BallTooWide("division by a ball containing zero".into()));
        }
        let p = self.prec().max(b.prec());
        let (mid, ord) = Float::with_val_round(p, &self.mid / &b.mid, Round::Nearest);
        // (|a| rb + |b| ra) / (|b| (|b| - rb))
        let num = up_add(&up_mul(&up_abs(&self.mid), &b.rad), &up_mul(&up_abs(&b.mid), &self.rad));
        let bl = b.mag_lower();
        let den = Float::with_val_round(RAD_PREC, &down_abs(&b.mid) * &bl, Round::Down).0;
        let prop = Float::with_val_round(RAD_PREC, &num / &den, Round::Up).0;
        let rad = up_add(&prop, &rounding_err(&mid, ord));
        Ok(BigReal { mid, rad })
    }

    /// Applies a monotone function through interval endpoints.
    fn monotone<F>(&self, lo: Float, hi: Float, increasing: bool, f: F) -> BigReal
    where
        F: Fn(&mut Float, Round) -> Ordering,
    {
        let p = self.prec();
        let mut fm = Float::with_val(p, &self.mid);
        if fm < lo {
            fm.assign_from(&lo);
        }
        if fm > hi {
            fm.assign_from(&hi);
        }
        f(&mut fm, Round::Nearest);
        let (mut a, mut b) = (lo, hi);
        if increasing {
            f(&mut a, Round::Down);
            f(&mut b, Round::Up);
        } else {
            f(&mut a, Round::Up);
            f(&mut b, Round::Down);
            std::mem::swap(&mut a, &mut b);
        }
        let d1 = Float::with_val_round(RAD_PREC, &fm - &a, Round::Up).0;
        let d2 = Float::with_val_round(RAD_PREC, &b - &fm, Round::Up).0;
        let rad = if d1 > d2 { d1 } else { d2 };
        BigReal { mid: fm, rad }
    }

    /// Square root, clamping the negative part of the ball to zero.
    pub fn sqrt(&self) -> Result<BigReal> {
        if self.is_negative() {
            return Err(Error::BallTooWide("sqrt of a negative ball".into()));
        }
        let mut lo = self.lower();
        if lo.is_sign_negative() {
            lo = Float::new(self.prec());
        }
        let hi = self.upper();
        Ok(self.monotone(lo, hi, true, |x, r| x.sqrt_round(r)))
    }

    pub fn ln(&self) -> Result<BigReal> {
        if !self.is_positive() {
            return Err(Error::BallTooWide("log of a ball not bounded away from zero".into()));
        }
        let lo = self.lower();
        let hi = self.upper();
        Ok(self.monotone(lo, hi, true, |x, r| x.ln_round(r)))
    }

    pub fn exp(&self) -> BigReal {
        let lo = self.lower();
        let hi = self.upper();
        self.monotone(lo, hi, true, |x, r| x.exp_round(r))
    }

    /// Real `k`-th root of a positive ball.
    pub fn root(&self, k: u32) -> Result<BigReal> {
        if k == 1 {
            return Ok(self.clone());
        }
        if !self.is_positive() {
            return Err(Error::BallTooWide("root of a ball not bounded away from zero".into()));
        }
        let lo = self.lower();
        let hi = self.upper();
        Ok(self.monotone(lo, hi, true, move |x, r| x.root_round(k, r)))
    }

    /// Exact decimal rendering `"<mid> +/- <rad>"`; both parts are dyadic
    /// rationals written without rounding.
    pub fn to_exact_string(&self) -> String {
        format!(
            "{} +/- {}",
            dyadic_to_decimal(&self.mid),
            dyadic_to_decimal(&self.rad)
        )
    }

    /// Inverse of [`BigReal::to_exact_string`]; the midpoint is stored with at
    /// least `prec` bits and never rounded.
    pub fn parse_exact(s: &str, prec: u32) -> Result<BigReal> {
        let (m, r) = match s.split_once("+/-") {
            Some((m, r)) => (m.trim(), r.trim()),
            None => (s.trim(), "0"),
        };
        let mq = parse_decimal(m)?;
        let rq = parse_decimal(r)?;
        if rq < 0 {
            return Err(Error::Parse(format!("negative radius in {s:?}")));
        }
        let mid = exact_float(&mq, prec)?;
        let rad = exact_float(&rq, RAD_PREC)?;
        Ok(BigReal { mid, rad })
    }
}

trait AssignFrom {
    fn assign_from(&mut self, other: &Float);
}

impl AssignFrom for Float {
    fn assign_from(&mut self, other: &Float) {
        use rug::Assign;
        self.assign(other);
    }
}

/// Float holding `q` exactly, using at least `min_prec` bits.
fn exact_float(q: &Rational, min_prec: u32) -> Result<Float> {
    if *q == 0 {
        return Ok(Float::new(min_prec));
    }
    let den = q.denom();
    let tz = den.significant_bits() - 1;
    if Integer::from(Integer::u_pow_u(2, tz)) != *den {
        return Err(Error::Parse(format!("{q} is not a dyadic rational")));
    }
    let bits = q.numer().significant_bits().max(1);
    let prec = bits.max(min_prec);
    let (f, ord) = Float::with_val_round(prec, q, Round::Nearest);
    debug_assert_eq!(ord, Ordering::Equal);
    Ok(f)
}

/// Writes a finite float as an exact decimal with no exponent.
pub fn dyadic_to_decimal(x: &Float) -> String {
    let q = x.to_rational().unwrap_or_default();
    rational_to_decimal_exact(&q).unwrap_or_else(|| q.to_string())
}

/// Exact decimal expansion of a rational whose denominator divides a power
/// of ten; `None` otherwise.
pub fn rational_to_decimal_exact(q: &Rational) -> Option<String> {
    let neg = *q < 0;
    let num = Integer::from(q.numer().abs_ref());
    let den = q.denom().clone();
    // den = 2^a 5^b
    let mut d = den.clone();
    let mut a = 0u32;
    while d.is_even() {
        d >>= 1;
        a += 1;
    }
    let mut b = 0u32;
    while d.is_divisible_u(5) {
        d /= 5u32;
        b += 1;
    }
    if d != 1 {
        return None;
    }
    let k = a.max(b);
    let scaled = num * Integer::from(Integer::u_pow_u(2, k - a)) * Integer::from(Integer::u_pow_u(5, k - b));
    let mut digits = scaled.to_string();
    let k = k as usize;
    if digits.len() <= k {
        digits = format!("{}{}", "0".repeat(k + 1 - digits.len()), digits);
    }
    let split = digits.len() - k;
    let (ip, fp) = digits.split_at(split);
    let fp = fp.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(ip);
    if !fp.is_empty() {
        out.push('.');
        out.push_str(fp);
    }
    Some(out)
}

/// Parses a plain or scientific decimal literal into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad decimal literal {s:?}"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let n = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| err())?;
    let scale = exp - fp.len() as i32;
    let mut q = Rational::from(n);
    if scale >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let m = self.mid.to_string_radix(10, Some(digits));
        let r = self.rad.to_string_radix(10, Some(3));
        write!(f, "{m} +/- {r}")
    }
}

impl Add<&BigReal> for &BigReal {
    type Output = BigReal;
    fn add(self, b: &BigReal) -> BigReal {
        let p = self.prec().max(b.prec());
        let (mid, ord) = Float::with_val_round(p, &self.mid + &b.mid, Round::Nearest);
        let rad = up_add(&up_add(&self.rad, &b.rad), &rounding_err(&mid, ord));
        BigReal { mid, rad }
    }
}

impl Sub<&BigReal> for &BigReal {
    type Output = BigReal;
    fn sub(self, b: &BigReal) -> BigReal {
        let p = self.prec().max(b.prec());
        let (mid, ord) = Float::with_val_round(p, &self.mid - &b.mid, Round::Nearest);
        let rad = up_add(&up_add(&self.rad, &b.rad), &rounding_err(&mid, ord));
        BigReal { mid, rad }
    }
}

impl Mul<&BigReal> for &BigReal {
    type Output = BigReal;
    fn mul(self, b: &BigReal) -> BigReal {
        let p = self.prec().max(b.prec());
        let (mid, ord) = Float::with_val_round(p, &self.mid * &b.mid, Round::Nearest);
        let t1 = up_mul(&up_abs(&self.mid), &b.rad);
        let t2 = up_mul(&up_abs(&b.mid), &self.rad);
        let t3 = up_mul(&self.rad, &b.rad);
        let rad = up_add(&up_add(&up_add(&t1, &t2), &t3), &rounding_err(&mid, ord));
        BigReal { mid, rad }
    }
}

impl Div<&BigReal> for &BigReal {
    type Output = BigReal;
    /// Panics when the divisor contains zero; use [`BigReal::checked_div`]
    /// when that can happen.
    fn div(self, b: &BigReal) -> BigReal {
        self.checked_div(b).expect("division by a ball containing zero")
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mid: -self.mid.clone(),
            rad: self.rad.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, b: BigReal) -> BigReal {
                (&self).$m(&b)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, b: &BigReal) -> BigReal {
                (&self).$m(b)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, b: BigReal) -> BigReal {
                self.$m(&b)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

/// Sum of a sequence of balls at precision `prec`.
pub fn sum<'a, I: IntoIterator<Item = &'a BigReal>>(it: I, prec: u32) -> BigReal {
    it.into_iter().fold(BigReal::zero(prec), |acc, x| &acc + x)
}

/// Dot product of two ball vectors.
pub fn dot(a: &[BigReal], b: &[BigReal], prec: u32) -> BigReal {
    a.iter()
        .zip(b)
        .fold(BigReal::zero(prec), |acc, (x, y)| &acc + &(x * y))
}

/// `2^k` as an exact float.
pub fn pow2(k: i32, prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_contains_truth() {
        let two = BigReal::from_i64(2, 128);
        let s = two.sqrt().unwrap();
        let back = s.sqr();
        assert!(back.contains_rational(&Rational::from(2)));
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ln_requires_positive_ball() {
        let z = BigReal::zero(64);
        assert!(z.ln().is_err());
        let x = BigReal::from_i64(-3, 64);
        assert!(x.ln().is_err());
    }

    #[test]
    fn exact_string_round_trip() {
        let x = BigReal::pi(200).widen(&pow2(-180, 30));
        let s = x.to_exact_string();
        let y = BigReal::parse_exact(&s, 200).unwrap();
        assert_eq!(s, y.to_exact_string());
        assert_eq!(x.mid(), y.mid());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal_exact(&Rational::from((-3, 8))).unwrap(), "-0.375");
        assert_eq!(rational_to_decimal_exact(&Rational::from(12)).unwrap(), "12");
        assert!(rational_to_decimal_exact(&Rational::from((1, 3))).is_none());
        assert_eq!(parse_decimal("1.25e2").unwrap(), Rational::from(125));
    }

    #[test]
    fn division_by_zero_ball_fails() {
        let a = BigReal::one(64);
        let b = BigReal::zero(64).widen(&pow2(-10, 30));
        assert!(a.checked_div(&b).is_err());
    }
}

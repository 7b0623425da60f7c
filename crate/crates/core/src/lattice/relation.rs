//! Integer relation detection by LLL on `[I | N x]`.
//!
//! A relation `r` of the true values gives the lattice vector
//! `(r, N r.x~)` whose length is at most `|r| sqrt(1 + N^2 n eps^2)`, `eps`
//! the largest input radius. Any lower bound `m` on the lattice minimum
//! therefore excludes relations shorter than
//! `m / sqrt(1 + N^2 n eps^2)`.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use super::lll;
use crate::error::{Error, Result};
use crate::numeric::ball::{BigReal, RAD_PREC};

#[derive(Clone, Debug, PartialEq)]
pub enum RelationTag {
    /// Sign-normalized relation, first nonzero entry positive.
    Found(Vec<Integer>),
    /// Every integer relation has Euclidean norm greater than this bound.
    NoneBelow(Float),
}

#[derive(Clone, Debug)]
pub struct RelationResult {
    pub tag: RelationTag,
    pub values: Vec<BigReal>,
    pub prec: u32,
}

impl RelationResult {
    pub fn found(&self) -> Option<&[Integer]> {
        match &self.tag {
            RelationTag::Found(r) => Some(r),
            _ => None,
        }
    }
}

pub fn sign_normalize(mut r: Vec<Integer>) -> Vec<Integer> {
    if let Some(f) = r.iter().find(|x| **x != 0) {
        if *f < 0 {
            for x in r.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    r
}

/// `r . values` as a ball.
pub fn relation_value(r: &[Integer], values: &[BigReal], prec: u32) -> BigReal {
    r.iter().zip(values).fold(BigReal::zero(prec), |s, (c, x)| {
        &s + &(x * &BigReal::from_integer(c, prec.max(c.significant_bits() + 2)))
    })
}

/// Searches for `r != 0` with `|r|_inf <= coeff_bound` and `r . values ~ 0`.
pub fn integer_relation(values: &[BigReal], coeff_bound: &Integer, prec: u32) -> Result<RelationResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::Invalid("integer relation needs at least two values".into()));
    }
    let half = (prec / 2) as i32;
    let rad_limit = Float::with_val(RAD_PREC, Float::i_exp(1, -half));
    let mut eps = Float::new(RAD_PREC);
    for v in values {
        if *v.rad() >= rad_limit {
            return Err(Error::InsufficientPrecision(format!(
                "input radius {} not below 2^-{half}",
                v.rad().to_f64()
            )));
        }
        if *v.rad() > eps {
            eps = v.rad().clone();
        }
    }
    let wp = prec + 64 + 4 * n as u32;
    let big_n = Float::with_val(wp, Float::i_exp(1, half));
    let basis: Vec<Vec<BigReal>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigReal> = (0..n)
                .map(|j| BigReal::from_i64((i == j) as i64, wp))
                .collect();
            let nx = Float::with_val(wp, values[i].mid() * &big_n);
            row.push(BigReal::exact(nx));
            row
        })
        .collect();
    let red = lll::lll_reduce(&basis, &Rational::from((99, 100)))?;
    let threshold = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 4));
    for row in &red.t {
        if row.iter().all(|c| *c == 0) {
            continue;
        }
        let inf = row.iter().map(|c| c.clone().abs()).max().unwrap();
        if inf > *coeff_bound {
            continue;
        }
        let val = relation_value(row, values, prec.max(64));
        if val.mag() < threshold {
            return Ok(RelationResult {
                tag: RelationTag::Found(sign_normalize(row.clone())),
                values: values.to_vec(),
                prec,
            });
        }
    }
    // exclusion bound
    let m = lll::min_gso_length(&red.gso_norms);
    let ne = Float::with_val_round(64, &big_n * &eps, Round::Up).0;
    let mut denom = Float::with_val_round(64, &ne * &ne, Round::Up).0;
    denom = Float::with_val_round(64, &denom * n as u32, Round::Up).0;
    denom = Float::with_val_round(64, &denom + 1u32, Round::Up).0;
    denom.sqrt_round(Round::Up);
    let b = Float::with_val_round(64, &m / &denom, Round::Down).0;
    let cb = Float::with_val(64, coeff_bound);
    if b < cb {
        return Err(Error::InsufficientPrecision(format!(
            "exclusion bound {} below coefficient bound {coeff_bound}",
            b.to_f64()
        )));
    }
    Ok(RelationResult { tag: RelationTag::NoneBelow(b), values: values.to_vec(), prec })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_of_2_3_6() {
        let p = 256;
        let v: Vec<BigReal> = [2, 3, 6]
            .iter()
            .map(|&k| BigReal::from_i64(k, p).ln().unwrap())
            .collect();
        let r = integer_relation(&v, &Integer::from(1000), p).unwrap();
        assert_eq!(
            r.tag,
            RelationTag::Found(vec![Integer::from(1), Integer::from(1), Integer::from(-1)])
        );
    }

    #[test]
    fn golden_ratio_has_no_small_relation() {
        let p = 128;
        let five = BigReal::from_i64(5, p).sqrt().unwrap();
        let phi = (&five + &BigReal::one(p)).mul_rational(&Rational::from((1, 2)));
        let r = integer_relation(&[BigReal::one(p), phi], &Integer::from(1000), p).unwrap();
        match r.tag {
            RelationTag::NoneBelow(b) => assert!(b > 1000),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wide_input_rejected() {
        let x = BigReal::from_parts(Float::with_val(64, 1), Float::with_val(30, 1e-3));
        assert!(matches!(
            integer_relation(&[x.clone(), x], &Integer::from(10), 128),
            Err(Error::InsufficientPrecision(_))
        ));
    }
}

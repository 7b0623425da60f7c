//! Rational reconstruction from certified balls.

use rug::{Integer, Rational};

use super::ball::BigReal;
use crate::error::{Error, Result};

/// Closest rational to `x` whose denominator is at most `bound`.
pub fn limit_denominator(x: &Rational, bound: &Integer) -> Rational {
    if x.denom() <= bound {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (
        Integer::from(0),
        Integer::from(1),
        Integer::from(1),
        Integer::from(0),
    );
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let (a, r) = n.clone().div_rem_floor(d.clone());
        let q2 = Integer::from(&q0 + &a * &q1);
        if q2 > *bound {
            break;
        }
        let p2 = Integer::from(&p0 + &a * &p1);
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        n = std::mem::replace(&mut d, r);
        if d == 0 {
            break;
        }
    }
    let k = Integer::from(bound - &q0) / &q1;
    let b1 = Rational::from((Integer::from(&p0 + &k * &p1), Integer::from(&q0 + &k * &q1)));
    let b2 = Rational::from((p1, q1));
    let e1 = Rational::from(&b1 - x).abs();
    let e2 = Rational::from(&b2 - x).abs();
    if e2 <= e1 {
        b2
    } else {
        b1
    }
}

/// The unique rational `p/q` with `q <= bound` inside the ball `x`, if any.
///
/// Requires `rad(x) < 1/(2 bound^2)`, which guarantees uniqueness.
pub fn rational_reconstruct(x: &BigReal, bound: &Integer) -> Result<Option<Rational>> {
    if *bound < 1 {
        return Err(Error::Invalid("denominator bound must be positive".into()));
    }
    let rad = x.rad().to_rational().unwrap_or_default();
    let limit = Rational::from((Integer::from(1), Integer::from(bound * bound) * 2u32));
    if rad >= limit {
        return Err(Error::BallTooWide(format!(
            "radius {} too wide for denominator bound {bound}",
            x.rad().to_f64()
        )));
    }
    let mid = x
        .mid()
        .to_rational()
        .ok_or_else(|| Error::Invalid("non-finite midpoint".into()))?;
    let cand = limit_denominator(&mid, bound);
    let err = Rational::from(&cand - &mid).abs();
    Ok(if err <= rad { Some(cand) } else { None })
}

/// Tries `rational_reconstruct` at each bound in turn; a ball too wide for
/// a larger bound ends the search.
pub fn reconstruct_escalating(x: &BigReal, bounds: &[Integer]) -> Result<Option<Rational>> {
    for (k, b) in bounds.iter().enumerate() {
        match rational_reconstruct(x, b) {
            Ok(Some(q)) => return Ok(Some(q)),
            Ok(None) => {}
            Err(e) if k == 0 => return Err(e),
            Err(_) => return Ok(None),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn ball(q: Rational, rad_exp: i32) -> BigReal {
        let m = Float::with_val(200, &q);
        BigReal::from_parts(m, Float::with_val(30, Float::i_exp(1, rad_exp)))
    }

    #[test]
    fn halves_and_thirds() {
        let b = Integer::from(1000);
        let x = ball(Rational::from((1, 2)), -100);
        assert_eq!(rational_reconstruct(&x, &b).unwrap(), Some(Rational::from((1, 2))));
        let y = ball(Rational::from((1, 3)), -100);
        assert_eq!(rational_reconstruct(&y, &b).unwrap(), Some(Rational::from((1, 3))));
    }

    #[test]
    fn pi_has_no_small_denominator() {
        let p = BigReal::pi(200);
        let x = BigReal::from_parts(p.mid().clone(), Float::with_val(30, 1e-30));
        assert_eq!(rational_reconstruct(&x, &Integer::from(1000)).unwrap(), None);
    }

    #[test]
    fn wide_ball_rejected() {
        let x = ball(Rational::from((1, 2)), -10);
        assert!(matches!(
            rational_reconstruct(&x, &Integer::from(1000)),
            Err(Error::BallTooWide(_))
        ));
    }

    #[test]
    fn limit_denominator_matches_known() {
        let x = Rational::from((314159265, 100000000));
        assert_eq!(limit_denominator(&x, &Integer::from(100)), Rational::from((311, 99)));
        assert_eq!(limit_denominator(&x, &Integer::from(10)), Rational::from((22, 7)));
    }
}

//! Certified isolation of all complex roots of a squarefree polynomial.
//!
//! Approximations come from Aberth–Ehrlich simultaneous iteration; each
//! approximation `z_i` is then enclosed in the disc of radius `n |W_i|`,
//! `W_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j))`. When these discs are
//! pairwise disjoint each holds exactly one root. A disc centred on the
//! real axis then holds a real root, since its conjugate disc is itself.

use rug::float::Round;
use rug::Float;

use super::ball::{BigReal, RAD_PREC};
use super::complex::{BigComplex, MpComplex};
use super::poly::{RationalPoly, MAX_DEGREE};
use crate::error::{Error, Result};

/// One isolated root.
#[derive(Clone, Debug)]
pub struct RootBall {
    pub value: BigComplex,
    /// Certified real (the imaginary part is exactly zero).
    pub real: bool,
    /// Radius of the inclusion disc around the midpoint.
    pub radius: Float,
}

/// Isolates every root of `p`. Real roots come first in ascending order,
/// followed by non-real roots ordered by argument in `(-pi, pi]`.
pub fn poly_roots(p: &RationalPoly, prec: u32) -> Result<Vec<RootBall>> {
    let n = match p.degree() {
        None => return Err(Error::Invalid("zero polynomial".into())),
        Some(n) => n,
    };
    if n > MAX_DEGREE {
        return Err(Error::Invalid(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let mut wp = 2 * prec + 32;
    let mut approx = aberth(p, n, 64, 2000, None);
    for _ in 0..5 {
        approx = aberth(p, n, wp, 200, Some(&approx));
        snap_real(&mut approx, wp);
        if let Some(out) = certify(p, n, &approx, wp) {
            return Ok(sort_roots(out));
        }
        wp *= 2;
    }
    Err(Error::PrecisionExhausted(format!(
        "inclusion discs not disjoint at {} bits",
        wp / 2
    )))
}

fn cauchy_bound(p: &RationalPoly, n: usize) -> f64 {
    let lead = p.lead().to_f64().abs();
    let mut m: f64 = 0.0;
    for i in 0..n {
        m = m.max(p.coeff(i).to_f64().abs() / lead);
    }
    1.0 + m
}

fn aberth(
    p: &RationalPoly,
    n: usize,
    wp: u32,
    max_iter: usize,
    start: Option<&[MpComplex]>,
) -> Vec<MpComplex> {
    let dp = p.derivative();
    let mut z: Vec<MpComplex> = match start {
        Some(s) => s.iter().map(|c| c.with_prec(wp)).collect(),
        None => {
            let r = cauchy_bound(p, n).min(1e300);
            // a geometric mean style radius keeps the start away from 0
            let lead = p.lead().to_f64().abs();
            let c0 = p.coeff(0).to_f64().abs();
            let gm = if c0 > 0.0 { (c0 / lead).powf(1.0 / n as f64) } else { 1.0 };
            let rad = gm.clamp(1e-3, r);
            (0..n)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                    MpComplex::from_f64(rad * t.cos(), rad * t.sin(), wp)
                })
                .collect()
        }
    };
    let tol = Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 8));
    for _ in 0..max_iter {
        let mut max_rel = Float::new(wp);
        for i in 0..n {
            let pv = p.eval_mp(&z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = dp.eval_mp(&z[i]);
            let ratio = if dv.is_zero() {
                MpComplex::from_f64(1e-3, 1e-3, wp)
            } else {
                pv.div(&dv)
            };
            let mut s = MpComplex::zero(wp);
            for j in 0..n {
                if j != i {
                    let d = &z[i] - &z[j];
                    if !d.is_zero() {
                        s = &s + &d.recip();
                    }
                }
            }
            let denom = &MpComplex::one(wp) - &(&ratio * &s);
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom) };
            let scale = Float::with_val(wp, z[i].abs().max(&Float::with_val(wp, 1)));
            let rel = Float::with_val(wp, w.abs() / &scale);
            if rel > max_rel {
                max_rel = rel;
            }
            z[i] = &z[i] - &w;
        }
        if max_rel < tol {
            break;
        }
    }
    z
}

/// Zeroes tiny imaginary parts so that real roots get real centres.
fn snap_real(z: &mut [MpComplex], wp: u32) {
    let thresh = Float::with_val(wp, Float::i_exp(1, -(wp as i32) / 2));
    for c in z.iter_mut() {
        let scale = Float::with_val(wp, c.abs().max(&Float::with_val(wp, 1)));
        if Float::with_val(wp, &*c.im.as_abs()) < Float::with_val(wp, &thresh * &scale) {
            c.im = Float::new(wp);
        }
    }
}

fn certify(p: &RationalPoly, n: usize, z: &[MpComplex], wp: u32) -> Option<Vec<RootBall>> {
    let lead = BigComplex::real(BigReal::from_rational(&p.lead(), wp));
    let nf = Float::with_val(RAD_PREC, n as u32);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let zi = BigComplex::from_mp(&z[i]);
        let pv = p.eval_complex(&zi);
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                let d = &zi - &BigComplex::from_mp(&z[j]);
                den = &den * &d;
            }
        }
        let dn = den.norm_sqr();
        if !dn.is_positive() {
            return None;
        }
        let num = pv.norm_sqr();
        let q = num.checked_div(&dn).ok()?;
        let w = q.upper();
        let w = Float::with_val_round(RAD_PREC, w.sqrt_ref(), Round::Up).0;
        radii.push(Float::with_val_round(RAD_PREC, &w * &nf, Round::Up).0);
    }
    // pairwise disjointness: |z_i - z_j| > r_i + r_j, with |z_i - z_j| rounded down
    for i in 0..n {
        for j in i + 1..n {
            let d = &z[i] - &z[j];
            let dist_sq = Float::with_val_round(
                wp,
                Float::with_val_round(wp, &d.re * &d.re, Round::Down).0
                    + Float::with_val_round(wp, &d.im * &d.im, Round::Down).0,
                Round::Down,
            )
            .0;
            let dist = Float::with_val_round(wp, dist_sq.sqrt_ref(), Round::Down).0;
            let rs = Float::with_val_round(RAD_PREC, &radii[i] + &radii[j], Round::Up).0;
            if dist <= rs {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let real = z[i].im.is_zero();
        let r = radii[i].clone();
        let value = BigComplex::new(
            BigReal::from_parts(z[i].re.clone(), r.clone()),
            if real {
                BigReal::zero(wp)
            } else {
                BigReal::from_parts(z[i].im.clone(), r.clone())
            },
        );
        if !real && value.im.contains_zero() {
            // a non-real centre whose disc meets the axis cannot be classified
            return None;
        }
        out.push(RootBall { value, real, radius: r });
    }
    Some(out)
}

fn sort_roots(mut v: Vec<RootBall>) -> Vec<RootBall> {
    v.sort_by(|a, b| match (a.real, b.real) {
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        (true, true) => a.value.re.mid().partial_cmp(b.value.re.mid()).unwrap(),
        (false, false) => {
            let (ar, ai) = a.value.mid().to_f64();
            let (br, bi) = b.value.mid().to_f64();
            ai.atan2(ar).partial_cmp(&bi.atan2(br)).unwrap()
        }
    });
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn sqrt_two() {
        let r = poly_roots(&RationalPoly::from_i64(&[-2, 0, 1]), 64).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.real));
        assert!((r[1].value.re.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(r[0].value.re.to_f64() < 0.0);
    }

    #[test]
    fn imaginary_unit() {
        let r = poly_roots(&RationalPoly::from_i64(&[1, 0, 1]), 64).unwrap();
        assert_eq!(r.iter().filter(|x| x.real).count(), 0);
        assert!(r.iter().any(|x| x.value.im.to_f64() > 0.99));
    }

    #[test]
    fn septic_totally_real() {
        let p = RationalPoly::from_i64(&[-5217, -3782, 496, 755, 25, -47, -2, 1]);
        let r = poly_roots(&p, 128).unwrap();
        assert_eq!(r.len(), 7);
        assert!(r.iter().all(|x| x.real));
        for x in &r {
            let v = p.eval_ball(&x.value.re);
            // the enclosure must be tight relative to the precision
            assert!(x.radius < Float::with_val(64, Float::i_exp(1, -100)));
            let _ = v;
        }
    }

    #[test]
    fn rejects_repeated_root() {
        let p = RationalPoly::from_i64(&[1, 2, 1]);
        assert_eq!(poly_roots(&p, 64).unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn rational_roots_contained() {
        let rs = [Rational::from((1, 3)), Rational::from((-5, 2)), Rational::from(7)];
        let mut p = RationalPoly::one();
        for r in &rs {
            p = p.mul(&RationalPoly::new(vec![-r.clone(), Rational::from(1)]));
        }
        let roots = poly_roots(&p, 96).unwrap();
        for r in &rs {
            assert!(roots.iter().any(|b| b.value.re.contains_rational(r)));
        }
    }
}

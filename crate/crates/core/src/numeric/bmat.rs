//! Dense linear algebra on matrices of real balls.

use super::ball::BigReal;
use crate::error::{Error, Result};

pub type BMat = Vec<Vec<BigReal>>;

pub fn zeros(r: usize, c: usize, prec: u32) -> BMat {
    vec![vec![BigReal::zero(prec); c]; r]
}

pub fn identity(n: usize, prec: u32) -> BMat {
    let mut m = zeros(n, n, prec);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigReal::one(prec);
    }
    m
}

pub fn transpose(m: &BMat) -> BMat {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mul(a: &BMat, b: &BMat, prec: u32) -> BMat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(BigReal::zero(prec), |s, (x, br)| &s + &(x * &br[j]))
                })
                .collect()
        })
        .collect()
}

/// `a * g * a^T` for a rectangular `a`.
pub fn congruence(a: &BMat, g: &BMat, prec: u32) -> BMat {
    mul(&mul(a, g, prec), &transpose(a), prec)
}

/// Largest upper bound of `|a_ij - b_ij|` over all entries.
pub fn max_abs_diff(a: &BMat, b: &BMat) -> f64 {
    let mut m: f64 = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            m = m.max((x - y).mag().to_f64());
        }
    }
    m
}

/// Lower-triangular `l` with `l l^T = g`.
pub fn cholesky(g: &BMat) -> Result<BMat> {
    let n = g.len();
    let prec = g.first().and_then(|r| r.first()).map_or(64, |x| x.prec());
    let mut l = zeros(n, n, prec);
    for j in 0..n {
        let mut d = g[j][j].clone();
        for k in 0..j {
            d = &d - &l[j][k].sqr();
        }
        if d.is_negative() {
            return Err(Error::NotPositiveDefinite);
        }
        if !d.is_positive() {
            return Err(Error::BallTooWide(format!("pivot {j} of the Cholesky factor")));
        }
        let s = d.sqrt()?;
        for i in j + 1..n {
            let mut v = g[i][j].clone();
            for k in 0..j {
                v = &v - &(&l[i][k] * &l[j][k]);
            }
            l[i][j] = v.checked_div(&s)?;
        }
        l[j][j] = s;
    }
    Ok(l)
}

/// Determinant of a symmetric positive definite matrix.
pub fn det_spd(g: &BMat) -> Result<BigReal> {
    let prec = g.first().and_then(|r| r.first()).map_or(64, |x| x.prec());
    let l = cholesky(g)?;
    let mut d = BigReal::one(prec);
    for (i, row) in l.iter().enumerate() {
        d = &d * &row[i].sqr();
    }
    Ok(d)
}

fn pivot_row(a: &BMat, c: usize, from: usize) -> Option<usize> {
    (from..a.len())
        .filter(|&i| !a[i][c].contains_zero())
        .max_by(|&i, &j| a[i][c].mag_lower().partial_cmp(&a[j][c].mag_lower()).unwrap())
}

/// Determinant by Gaussian elimination; fails when no pivot can be
/// certified nonzero.
pub fn det(m: &BMat, prec: u32) -> Result<BigReal> {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigReal::one(prec);
    for c in 0..n {
        let p = pivot_row(&a, c, c)
            .ok_or_else(|| Error::BallTooWide(format!("no certified pivot in column {c}")))?;
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        for i in c + 1..n {
            let f = a[i][c].checked_div(&a[c][c])?;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    Ok(d)
}

/// Solves `m X = b` for a square `m` and several right-hand sides
/// (columns of `b`).
pub fn solve(m: &BMat, b: &BMat, prec: u32) -> Result<BMat> {
    let n = m.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut a: BMat = m
        .iter()
        .zip(b)
        .map(|(r, br)| r.iter().chain(br.iter()).cloned().collect())
        .collect();
    for c in 0..n {
        let p = pivot_row(&a, c, c)
            .ok_or_else(|| Error::BallTooWide(format!("no certified pivot in column {c}")))?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for j in c..n + k {
            a[c][j] = a[c][j].checked_div(&piv)?;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c].clone();
                for j in c..n + k {
                    let t = &f * &a[c][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    let _ = prec;
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn inverse(m: &BMat, prec: u32) -> Result<BMat> {
    solve(m, &identity(m.len(), prec), prec)
}

/// Midpoints as `f64`.
pub fn to_f64(m: &BMat) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn bm(rows: &[&[i64]]) -> BMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigReal::from_i64(x, 128)).collect())
            .collect()
    }

    #[test]
    fn cholesky_det() {
        let g = bm(&[&[4, 2], &[2, 3]]);
        let d = det_spd(&g).unwrap();
        assert!(d.contains_rational(&Rational::from(8)));
        let d2 = det(&g, 128).unwrap();
        assert!(d2.contains_rational(&Rational::from(8)));
        assert_eq!(cholesky(&bm(&[&[1, 2], &[2, 1]])).unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn solve_inverse() {
        let m = bm(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&m, 128).unwrap();
        let id = mul(&m, &inv, 128);
        assert!(max_abs_diff(&id, &identity(2, 128)) < 1e-30);
    }
}

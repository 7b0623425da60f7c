//! Dense matrices of multiprecision complex numbers.

use rug::Float;

use super::complex::MpComplex;

pub type CMat = Vec<Vec<MpComplex>>;

pub fn zeros(r: usize, c: usize, prec: u32) -> CMat {
    vec![vec![MpComplex::zero(prec); c]; r]
}

pub fn identity(n: usize, prec: u32) -> CMat {
    let mut m = zeros(n, n, prec);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = MpComplex::one(prec);
    }
    m
}

pub fn mul(a: &CMat, b: &CMat, prec: u32) -> CMat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m, prec);
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][t] * &b[t][j]);
            }
        }
    }
    out
}

pub fn mul_vec(a: &CMat, v: &[MpComplex], prec: u32) -> Vec<MpComplex> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(MpComplex::zero(prec), |s, (x, y)| &s + &(x * y)))
        .collect()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting. `None`
/// when a pivot vanishes to working precision.
pub fn solve(a: &CMat, b: &[MpComplex], prec: u32) -> Option<Vec<MpComplex>> {
    let n = a.len();
    let mut m: Vec<Vec<MpComplex>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r: Vec<MpComplex> = row.iter().map(|x| x.with_prec(prec)).collect();
            r.push(bi.with_prec(prec));
            r
        })
        .collect();
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(Float::new(prec), |acc, v| if v > acc { v } else { acc });
    let tiny = Float::with_val(prec, &scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)));
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].norm_sqr().partial_cmp(&m[j][c].norm_sqr()).unwrap())?;
        if m[p][c].abs() <= tiny {
            return None;
        }
        m.swap(c, p);
        let inv = m[c][c].recip();
        for r in c + 1..n {
            let f = &m[r][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for k in c..=n {
                let d = &f * &m[c][k];
                m[r][k] = &m[r][k] - &d;
            }
        }
    }
    let mut x = vec![MpComplex::zero(prec); n];
    for i in (0..n).rev() {
        let mut s = m[i][n].clone();
        for k in i + 1..n {
            s = &s - &(&m[i][k] * &x[k]);
        }
        x[i] = s.div(&m[i][i]);
    }
    Some(x)
}

//! PSLQ integer relation search, used as a second engine beside LLL.

use rug::float::Round;
use rug::{Float, Integer};

use crate::numeric::ball::BigReal;

#[derive(Clone, Debug, PartialEq)]
pub enum PslqOutcome {
    Found(Vec<Integer>),
    /// No relation of Euclidean norm at most the bound.
    NoneBelow(Float),
    /// Iteration limit reached before either conclusion.
    Exhausted,
}

/// Runs PSLQ on the midpoints of `values` at `prec` bits. A relation is
/// reported when some entry of the reduced vector drops below
/// `2^{-prec/2}` relative to the input.
pub fn pslq(values: &[BigReal], coeff_bound: &Integer, prec: u32, max_iter: usize) -> PslqOutcome {
    let n = values.len();
    let wp = prec + 32;
    let mut x: Vec<Float> = values.iter().map(|v| Float::with_val(wp, v.mid())).collect();
    let norm = x.iter().fold(Float::new(wp), |s, v| s + Float::with_val(wp, v * v)).sqrt();
    if norm.is_zero() || n < 2 {
        return PslqOutcome::Exhausted;
    }
    for v in x.iter_mut() {
        *v /= &norm;
    }
    // an exact zero entry is its own relation
    if let Some(k) = x.iter().position(|v| v.is_zero()) {
        let mut r = vec![Integer::new(); n];
        r[k] = Integer::from(1);
        return PslqOutcome::Found(r);
    }
    let gamma = Float::with_val(wp, Float::with_val(wp, 4) / 3u32).sqrt();
    let mut s = vec![Float::new(wp); n];
    for k in 0..n {
        s[k] = x[k..]
            .iter()
            .fold(Float::new(wp), |a, v| a + Float::with_val(wp, v * v))
            .sqrt();
    }
    let mut y = x.clone();
    let mut h = vec![vec![Float::new(wp); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            if i == j {
                h[i][j] = Float::with_val(wp, &s[j + 1] / &s[j]);
            } else if i > j {
                let d = Float::with_val(wp, &s[j] * &s[j + 1]);
                h[i][j] = -Float::with_val(wp, Float::with_val(wp, &y[i] * &y[j]) / &d);
            }
        }
    }
    let mut a: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as i32)).collect())
        .collect();
    let mut b = a.clone();
    let reduce = |i: usize,
                  j: usize,
                  h: &mut Vec<Vec<Float>>,
                  y: &mut Vec<Float>,
                  a: &mut Vec<Vec<Integer>>,
                  b: &mut Vec<Vec<Integer>>| {
        if h[j][j].is_zero() {
            return;
        }
        let t = Float::with_val(wp, &h[i][j] / &h[j][j]).round();
        if t.is_zero() {
            return;
        }
        let ti = t.to_integer().unwrap_or_default();
        let yi = y[i].clone();
        y[j] += Float::with_val(wp, &t * &yi);
        for k in 0..=j {
            let d = Float::with_val(wp, &t * &h[j][k]);
            h[i][k] -= d;
        }
        for k in 0..n {
            let d = Integer::from(&ti * &a[j][k]);
            a[i][k] -= d;
            let e = Integer::from(&ti * &b[k][i]);
            b[k][j] += e;
        }
    };
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            reduce(i, j, &mut h, &mut y, &mut a, &mut b);
        }
    }
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) / 2));
    let cb = Float::with_val(wp, coeff_bound);
    for _ in 0..max_iter {
        // choose m maximizing gamma^m |h_mm|
        let mut m = 0;
        let mut best = Float::new(wp);
        let mut gp = gamma.clone();
        for i in 0..n - 1 {
            let v = Float::with_val(wp, &gp * &*h[i][i].as_abs());
            if v > best {
                best = v;
                m = i;
            }
            gp *= &gamma;
        }
        y.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        h.swap(m, m + 1);
        if m + 2 < n {
            let t0 = Float::with_val(
                wp,
                Float::with_val(wp, &h[m][m] * &h[m][m]) + Float::with_val(wp, &h[m][m + 1] * &h[m][m + 1]),
            )
            .sqrt();
            if !t0.is_zero() {
                let t1 = Float::with_val(wp, &h[m][m] / &t0);
                let t2 = Float::with_val(wp, &h[m][m + 1] / &t0);
                for i in m..n {
                    let t3 = h[i][m].clone();
                    let t4 = h[i][m + 1].clone();
                    h[i][m] = Float::with_val(wp, &t1 * &t3) + Float::with_val(wp, &t2 * &t4);
                    h[i][m + 1] = Float::with_val(wp, &t1 * &t4) - Float::with_val(wp, &t2 * &t3);
                }
            }
        }
        for i in m + 1..n {
            for j in (0..(i).min(m + 2).min(n - 1)).rev() {
                reduce(i, j, &mut h, &mut y, &mut a, &mut b);
            }
        }
        if let Some(k) = (0..n).find(|&k| Float::with_val(wp, y[k].clone().abs()) < eps) {
            let r: Vec<Integer> = (0..n).map(|i| b[i][k].clone()).collect();
            let inf = r.iter().map(|c| c.clone().abs()).max().unwrap();
            if inf <= *coeff_bound && r.iter().any(|c| *c != 0) {
                return PslqOutcome::Found(super::relation::sign_normalize(r));
            }
        }
        let maxh = (0..n - 1)
            .map(|j| Float::with_val(wp, h[j][j].clone().abs()))
            .fold(Float::new(wp), |acc, v| if v > acc { v } else { acc });
        if maxh.is_zero() {
            return PslqOutcome::Exhausted;
        }
        let bound = Float::with_val_round(64, Float::with_val(wp, 1) / &maxh, Round::Down).0;
        if bound > cb {
            return PslqOutcome::NoneBelow(bound);
        }
    }
    PslqOutcome::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_log_relation() {
        let p = 200;
        let v: Vec<BigReal> = [2, 3, 6]
            .iter()
            .map(|&k| BigReal::from_i64(k, p).ln().unwrap())
            .collect();
        match pslq(&v, &Integer::from(1000), p, 10_000) {
            PslqOutcome::Found(r) => {
                assert_eq!(r, vec![Integer::from(1), Integer::from(1), Integer::from(-1)])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn golden_ratio_excluded() {
        let p = 128;
        let five = BigReal::from_i64(5, p).sqrt().unwrap();
        let phi = (&five + &BigReal::one(p)).mul_rational(&rug::Rational::from((1, 2)));
        match pslq(&[BigReal::one(p), phi], &Integer::from(1000), p, 10_000) {
            PslqOutcome::NoneBelow(b) => assert!(b > 1000),
            other => panic!("{other:?}"),
        }
    }
}

//! LLL reduction of real bases with exact integer transforms.
//!
//! The reduction itself runs on MPFR floats at a working precision well
//! above the input precision; the returned basis is recomputed from the
//! integer transform in ball arithmetic, so its enclosure is exact.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::bmat::{self, BMat};

pub type IMat = Vec<Vec<Integer>>;

pub fn identity_int(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as i32)).collect())
        .collect()
}

/// Float state of an LLL run: basis rows, GSO coefficients and squared
/// GSO norms.
struct Gso {
    b: Vec<Vec<Float>>,
    mu: Vec<Vec<Float>>,
    bn: Vec<Float>,
    t: IMat,
    wp: u32,
}

fn fdot(a: &[Float], b: &[Float], wp: u32) -> Float {
    let mut s = Float::new(wp);
    for (x, y) in a.iter().zip(b) {
        s += Float::with_val(wp, x * y);
    }
    s
}

impl Gso {
    fn new(b: Vec<Vec<Float>>, wp: u32) -> Self {
        let n = b.len();
        let mut g = Gso {
            b,
            mu: vec![vec![Float::new(wp); n]; n],
            bn: vec![Float::new(wp); n],
            t: identity_int(n),
            wp,
        };
        g.recompute();
        g
    }

    fn recompute(&mut self) {
        let n = self.b.len();
        let wp = self.wp;
        let mut star: Vec<Vec<Float>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.b[i].clone();
            for j in 0..i {
                let m = if self.bn[j].is_zero() {
                    Float::new(wp)
                } else {
                    Float::with_val(wp, fdot(&self.b[i], &star[j], wp) / &self.bn[j])
                };
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= Float::with_val(wp, &m * y);
                }
                self.mu[i][j] = m;
            }
            self.bn[i] = fdot(&v, &v, wp);
            star.push(v);
        }
    }

    fn size_reduce(&mut self, k: usize, l: usize) {
        let wp = self.wp;
        let half = Float::with_val(wp, 0.5);
        if Float::with_val(wp, self.mu[k][l].clone().abs()) <= half {
            return;
        }
        let q = self.mu[k][l].to_integer().unwrap_or_default();
        let qf = Float::with_val(wp, &q);
        let (lo, hi) = self.b.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= Float::with_val(wp, y * &qf);
        }
        let (tlo, thi) = self.t.split_at_mut(k);
        for (x, y) in thi[0].iter_mut().zip(&tlo[l]) {
            *x -= Integer::from(y * &q);
        }
        for j in 0..l {
            let d = Float::with_val(wp, &self.mu[l][j] * &qf);
            self.mu[k][j] -= d;
        }
        self.mu[k][l] -= qf;
    }

    fn swap(&mut self, k: usize) {
        let wp = self.wp;
        let n = self.b.len();
        self.b.swap(k, k - 1);
        self.t.swap(k, k - 1);
        for j in 0..k - 1 {
            let tmp = self.mu[k][j].clone();
            self.mu[k][j] = self.mu[k - 1][j].clone();
            self.mu[k - 1][j] = tmp;
        }
        let m = self.mu[k][k - 1].clone();
        let bnew = Float::with_val(wp, &self.bn[k] + Float::with_val(wp, &m * &m) * &self.bn[k - 1]);
        if bnew.is_zero() {
            self.recompute();
            return;
        }
        self.mu[k][k - 1] = Float::with_val(wp, Float::with_val(wp, &m * &self.bn[k - 1]) / &bnew);
        self.bn[k] = Float::with_val(wp, Float::with_val(wp, &self.bn[k - 1] * &self.bn[k]) / &bnew);
        self.bn[k - 1] = bnew;
        for i in k + 1..n {
            let t = self.mu[i][k].clone();
            self.mu[i][k] = Float::with_val(wp, &self.mu[i][k - 1] - Float::with_val(wp, &m * &t));
            self.mu[i][k - 1] =
                Float::with_val(wp, &t + Float::with_val(wp, &self.mu[k][k - 1] * &self.mu[i][k]));
        }
    }

    fn run(&mut self, delta: &Float) {
        let n = self.b.len();
        let wp = self.wp;
        let mut k = 1;
        let mut steps: u64 = 0;
        while k < n {
            steps += 1;
            if steps % 4096 == 0 {
                self.recompute();
            }
            self.size_reduce(k, k - 1);
            let m2 = Float::with_val(wp, &self.mu[k][k - 1] * &self.mu[k][k - 1]);
            let rhs = Float::with_val(wp, Float::with_val(wp, delta - &m2) * &self.bn[k - 1]);
            if self.bn[k] < rhs {
                self.swap(k);
                k = if k > 1 { k - 1 } else { 1 };
            } else {
                for l in (0..k - 1).rev() {
                    self.size_reduce(k, l);
                }
                k += 1;
            }
        }
    }

    /// Size-reduced and Lovász at `delta` minus a small slack.
    fn is_reduced(&self, delta: &Float) -> bool {
        let wp = self.wp;
        let slack = Float::with_val(wp, 1e-6);
        let half = Float::with_val(wp, 0.5) + &slack;
        let d = Float::with_val(wp, delta - &slack);
        for i in 0..self.b.len() {
            for j in 0..i {
                if Float::with_val(wp, self.mu[i][j].clone().abs()) > half {
                    return false;
                }
            }
            if i > 0 {
                let m2 = Float::with_val(wp, &self.mu[i][i - 1] * &self.mu[i][i - 1]);
                let rhs = Float::with_val(wp, Float::with_val(wp, &d - &m2) * &self.bn[i - 1]);
                if self.bn[i] < rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of a reduction: the reduced rows, the transform `t` with
/// `reduced = t * input`, and the squared GSO norms of the reduced basis.
pub struct Reduction {
    pub basis: BMat,
    pub t: IMat,
    pub gso_norms: Vec<Float>,
}

fn working_prec(basis: &BMat) -> u32 {
    let p = basis
        .iter()
        .flat_map(|r| r.iter().map(|x| x.prec()))
        .max()
        .unwrap_or(64);
    p + 64 + 2 * basis.len() as u32
}

/// LLL-reduces the rows of `basis` with parameter `delta` in `(1/4, 1)`.
pub fn lll_reduce(basis: &BMat, delta: &Rational) -> Result<Reduction> {
    let n = basis.len();
    if *delta <= Rational::from((1, 4)) || *delta >= 1 {
        return Err(Error::Invalid("delta must lie in (1/4, 1)".into()));
    }
    if n == 0 {
        return Ok(Reduction { basis: vec![], t: vec![], gso_norms: vec![] });
    }
    let prec = basis[0].first().map_or(64, |x| x.prec());
    let wp = working_prec(basis);
    let rows: Vec<Vec<Float>> = basis
        .iter()
        .map(|r| r.iter().map(|x| Float::with_val(wp, x.mid())).collect())
        .collect();
    let mut g = Gso::new(rows, wp);
    check_independent(&g, basis)?;
    let df = Float::with_val(wp, delta);
    for _ in 0..4 {
        g.run(&df);
        g.recompute();
        if g.is_reduced(&df) {
            break;
        }
    }
    let reduced = apply_int(&g.t, basis, prec);
    Ok(Reduction { basis: reduced, t: g.t, gso_norms: g.bn })
}

fn check_independent(g: &Gso, basis: &BMat) -> Result<()> {
    let n = basis.len();
    let gram = bmat::mul(basis, &bmat::transpose(basis), g.wp);
    if bmat::cholesky(&gram).is_ok() {
        return Ok(());
    }
    let found = (0..n)
        .filter(|&i| {
            let scale = gram[i][i].to_f64().max(f64::MIN_POSITIVE);
            g.bn[i].to_f64() > scale * 2f64.powi(-(g.wp as i32) / 2)
        })
        .count();
    Err(Error::RankDeficient { expected: n, found: found.min(n - 1) })
}

/// `t * m` with integer `t`, in ball arithmetic.
pub fn apply_int(t: &IMat, m: &BMat, prec: u32) -> BMat {
    let cols = m.first().map_or(0, |r| r.len());
    t.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigReal::zero(prec);
                    for (c, mr) in row.iter().zip(m) {
                        if *c != 0 {
                            s = &s + &(&mr[j] * &BigReal::from_integer(c, prec.max(c.significant_bits() + 2)));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Basis rows whose Gram matrix is `g`, from its Cholesky factor.
pub fn basis_from_gram(g: &BMat) -> Result<BMat> {
    bmat::cholesky(g)
}

/// Reduces a Gram matrix: returns `t` and `t g t^T`.
pub fn lll_reduce_gram(g: &BMat, delta: &Rational) -> Result<(BMat, IMat)> {
    let prec = g.first().and_then(|r| r.first()).map_or(64, |x| x.prec());
    let b = basis_from_gram(g)?;
    let red = lll_reduce(&b, delta)?;
    let gt = congruence_int(&red.t, g, prec);
    Ok((gt, red.t))
}

/// `t g t^T` for integer `t`.
pub fn congruence_int(t: &IMat, g: &BMat, prec: u32) -> BMat {
    let tg = apply_int(t, g, prec);
    let tgt = apply_int(t, &bmat::transpose(&tg), prec);
    // symmetric: (t g t^T)^T = t (t g)^T
    bmat::transpose(&tgt)
}

pub fn int_det(t: &IMat) -> Rational {
    let q: Vec<Vec<Rational>> = t
        .iter()
        .map(|r| r.iter().map(|x| Rational::from(x)).collect())
        .collect();
    crate::numeric::qmat::det(&q)
}

pub fn int_transpose(t: &IMat) -> IMat {
    if t.is_empty() {
        return vec![];
    }
    (0..t[0].len())
        .map(|j| t.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Inverse of a unimodular integer matrix.
pub fn int_inverse(t: &IMat) -> Option<IMat> {
    let q: Vec<Vec<Rational>> = t
        .iter()
        .map(|r| r.iter().map(|x| Rational::from(x)).collect())
        .collect();
    let inv = crate::numeric::qmat::inverse(&q)?;
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| if *x.denom() == 1 { Some(x.numer().clone()) } else { None })
                .collect()
        })
        .collect()
}

pub fn int_mul(a: &IMat, b: &IMat) -> IMat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Integer::new(), |s, (x, br)| s + Integer::from(x * &br[j]))
                })
                .collect()
        })
        .collect()
}

/// Checks size reduction and the Lovász condition of a ball basis at
/// `delta`, allowing `slack` for the enclosure widths.
pub fn verify_reduced(basis: &BMat, delta: &Rational, slack: f64) -> bool {
    let n = basis.len();
    if n == 0 {
        return true;
    }
    let wp = working_prec(basis);
    let rows: Vec<Vec<Float>> = basis
        .iter()
        .map(|r| r.iter().map(|x| Float::with_val(wp, x.mid())).collect())
        .collect();
    let g = Gso::new(rows, wp);
    let half = 0.5 + slack;
    let d = delta.to_f64() - slack;
    for i in 0..n {
        for j in 0..i {
            if g.mu[i][j].to_f64().abs() > half {
                return false;
            }
        }
        if i > 0 {
            let m = g.mu[i][i - 1].to_f64();
            let lhs = g.bn[i].to_f64();
            let rhs = (d - m * m) * g.bn[i - 1].to_f64();
            if lhs < rhs {
                return false;
            }
        }
    }
    true
}

/// Lower bound (rounded down) of `min_i sqrt(gso_norm_i)`, a lower bound on
/// the shortest nonzero vector of the lattice.
pub fn min_gso_length(norms: &[Float]) -> Float {
    let mut m: Option<Float> = None;
    for x in norms {
        let s = Float::with_val_round(64, x.sqrt_ref(), Round::Down).0;
        m = Some(match m {
            Some(v) if v <= s => v,
            _ => s,
        });
    }
    let mut out = m.unwrap_or_else(|| Float::new(64));
    // absorb the float error of the GSO itself
    out *= 1.0 - 1e-12;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(rows: &[&[i64]]) -> BMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigReal::from_i64(x, 128)).collect())
            .collect()
    }

    #[test]
    fn identity_unchanged() {
        let b = bm(&[&[1, 0], &[0, 1]]);
        let r = lll_reduce(&b, &Rational::from((3, 4))).unwrap();
        assert_eq!(r.t, identity_int(2));
    }

    #[test]
    fn skewed_basis() {
        let b = bm(&[&[1, 0], &[10, 1]]);
        let d = Rational::from((3, 4));
        let r = lll_reduce(&b, &d).unwrap();
        assert_eq!(int_det(&r.t).abs(), 1);
        assert!(verify_reduced(&r.basis, &d, 1e-20));
        for row in &r.basis {
            let n: f64 = row.iter().map(|x| x.to_f64().powi(2)).sum();
            assert!(n <= 2.0 + 1e-12);
        }
        let back = apply_int(&r.t, &b, 128);
        assert!(bmat::max_abs_diff(&back, &r.basis) < 1e-30);
    }

    #[test]
    fn dependent_rows_rejected() {
        let b = bm(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            lll_reduce(&b, &Rational::from((3, 4))),
            Err(Error::RankDeficient { .. })
        ));
    }
}

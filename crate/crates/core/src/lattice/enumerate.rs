//! Fincke–Pohst enumeration of short lattice vectors.
//!
//! Enumeration runs in `f64` on an LLL-reduced Gram matrix with a relative
//! safety margin; every candidate norm is then recomputed in ball
//! arithmetic in the original coordinates.

use rug::{Integer, Rational};

use super::lll::{self, IMat};
use super::GramMatrix;
use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const MAX_RANK: usize = 12;

/// Minimum of a positive definite form and the vectors attaining it.
#[derive(Clone, Debug)]
pub struct ShortVectors {
    pub minimum: BigReal,
    /// Coordinates in the input basis, one per `±` pair, first nonzero
    /// entry positive.
    pub vectors: Vec<Vec<Integer>>,
}

/// A vector with its certified squared length.
#[derive(Clone, Debug)]
pub struct NormedVector {
    pub coords: Vec<Integer>,
    pub norm: BigReal,
}

fn lll_delta() -> Rational {
    Rational::from((99, 100))
}

/// Upper-triangular Fincke–Pohst coefficients:
/// `x^T g x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
fn fp_coefficients(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut q = g.to_vec();
    for i in 0..n {
        if q[i][i] <= 0.0 {
            return None;
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    Some(q)
}

/// All nonzero `x` with `x^T g x <= bound` and last nonzero coordinate
/// positive.
pub fn enumerate_f64(g: &[Vec<f64>], bound: f64, budget: u64) -> Result<Vec<Vec<i64>>> {
    let n = g.len();
    let q = fp_coefficients(g).ok_or(Error::NotPositiveDefinite)?;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    fn rec(
        i: usize,
        rem: f64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::EnumerationBudgetExceeded(budget));
        }
        let n = x.len();
        let mut c = 0.0;
        for j in i + 1..n {
            c += q[i][j] * x[j] as f64;
        }
        let r = (rem / q[i][i]).max(0.0).sqrt();
        let lo = (-c - r).ceil() as i64;
        let hi = (-c + r).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 + c;
            let left = rem - q[i][i] * t * t;
            if left < 0.0 {
                continue;
            }
            if i == 0 {
                if let Some(last) = x.iter().rev().find(|&&e| e != 0) {
                    if *last > 0 {
                        out.push(x.clone());
                    }
                }
            } else {
                rec(i - 1, left, q, x, out, nodes, budget)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
    if n > 0 {
        rec(n - 1, bound, &q, &mut x, &mut out, &mut nodes, budget)?;
    }
    Ok(out)
}

fn quad_form(g: &GramMatrix, x: &[Integer]) -> BigReal {
    let p = g.prec();
    let n = g.rank();
    let mut s = BigReal::zero(p);
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut row = BigReal::zero(p);
        for j in 0..n {
            if x[j] != 0 {
                row = &row + &(g.get(i, j) * &BigReal::from_integer(&x[j], p));
            }
        }
        s = &s + &(&row * &BigReal::from_integer(&x[i], p));
    }
    s
}

/// Bilinear value `x^T g y` in balls.
pub fn bilinear(g: &GramMatrix, x: &[Integer], y: &[Integer]) -> BigReal {
    let p = g.prec();
    let n = g.rank();
    let mut s = BigReal::zero(p);
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] != 0 {
                let c = Integer::from(&x[i] * &y[j]);
                s = &s + &(g.get(i, j) * &BigReal::from_integer(&c, p));
            }
        }
    }
    s
}

fn normalize_sign(mut v: Vec<Integer>) -> Vec<Integer> {
    if let Some(f) = v.iter().find(|e| **e != 0) {
        if *f < 0 {
            for e in v.iter_mut() {
                *e = -e.clone();
            }
        }
    }
    v
}

fn reduced(g: &GramMatrix) -> Result<(Vec<Vec<f64>>, IMat)> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let (gr, t) = lll::lll_reduce_gram(g.entries(), &lll_delta())?;
    Ok((crate::numeric::bmat::to_f64(&gr), t))
}

/// Maps reduced coordinates `y` back to the input basis: `x = t^T y`.
fn back(t: &IMat, y: &[i64]) -> Vec<Integer> {
    let n = y.len();
    (0..n)
        .map(|j| {
            (0..n).fold(Integer::new(), |s, i| s + Integer::from(&t[i][j] * y[i]))
        })
        .collect()
}

/// All vectors (one per sign pair) whose squared length is at most `bound`
/// (up to the enumeration margin), sorted by norm.
pub fn short_vectors_below(g: &GramMatrix, bound: f64, budget: u64) -> Result<Vec<NormedVector>> {
    let (gf, t) = reduced(g)?;
    let margin = bound * 1e-9 + 1e-300;
    let ys = enumerate_f64(&gf, bound + margin, budget)?;
    let mut out: Vec<NormedVector> = ys
        .iter()
        .map(|y| {
            let coords = normalize_sign(back(&t, y));
            let norm = quad_form(g, &coords);
            NormedVector { coords, norm }
        })
        .collect();
    out.sort_by(|a, b| {
        a.norm
            .mid()
            .partial_cmp(b.norm.mid())
            .unwrap()
            .then_with(|| a.coords.cmp(&b.coords))
    });
    Ok(out)
}

/// Minimum of the form and up to `count_bound` vectors attaining it.
pub fn shortest_vectors(g: &GramMatrix, count_bound: usize) -> Result<ShortVectors> {
    shortest_vectors_budget(g, count_bound, DEFAULT_NODE_BUDGET)
}

pub fn shortest_vectors_budget(g: &GramMatrix, count_bound: usize, budget: u64) -> Result<ShortVectors> {
    let n = g.rank();
    if n == 0 {
        return Err(Error::Invalid("rank 0 lattice has no nonzero vectors".into()));
    }
    if n > MAX_RANK {
        return Err(Error::Invalid(format!("rank {n} exceeds {MAX_RANK}")));
    }
    let (gf, _) = reduced(g)?;
    let c = (0..n).map(|i| gf[i][i]).fold(f64::INFINITY, f64::min);
    let cands = short_vectors_below(g, c, budget)?;
    let first = cands.first().ok_or(Error::NotPositiveDefinite)?;
    let mut minimum = first.norm.clone();
    for v in &cands {
        if v.norm.upper() < minimum.lower() {
            minimum = v.norm.clone();
        }
    }
    let mut vectors: Vec<Vec<Integer>> = cands
        .iter()
        .filter(|v| v.norm.overlaps(&minimum))
        .map(|v| v.coords.clone())
        .collect();
    vectors.sort();
    vectors.truncate(count_bound);
    Ok(ShortVectors { minimum, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank_two() {
        let g = GramMatrix::from_i64(&[&[1, 0], &[0, 1]], 64).unwrap();
        let s = shortest_vectors(&g, 10).unwrap();
        assert!(s.minimum.contains_rational(&Rational::from(1)));
        assert_eq!(s.vectors.len(), 2);
    }

    #[test]
    fn hexagonal() {
        let g = GramMatrix::from_i64(&[&[2, 1], &[1, 2]], 64).unwrap();
        let s = shortest_vectors(&g, 10).unwrap();
        assert!(s.minimum.contains_rational(&Rational::from(2)));
        // three pairs, six vectors counting signs
        assert_eq!(s.vectors.len(), 3);
    }

    #[test]
    fn indefinite_rejected() {
        let g = GramMatrix::from_i64(&[&[1, 2], &[2, 1]], 64).unwrap();
        assert_eq!(shortest_vectors(&g, 1).unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn budget_is_enforced() {
        let g = GramMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 64).unwrap();
        assert!(matches!(
            short_vectors_below(&g, 400.0, 10),
            Err(Error::EnumerationBudgetExceeded(10))
        ));
    }
}

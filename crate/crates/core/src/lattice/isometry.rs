//! Three-valued isometry and similarity verdicts for real Gram matrices.

use rug::{Float, Integer, Rational};

use super::enumerate::{self, NormedVector};
use super::lll::{self, IMat};
use super::GramMatrix;
use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::bmat;

pub const DEFAULT_ISOMETRY_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub enum IsometryVerdict {
    /// `t^T g1 t = g2` within the tolerance, `t` unimodular.
    Isometric { witness: IMat },
    /// An invariant whose two values are separated beyond radii plus
    /// tolerance.
    NotIsometric {
        invariant: String,
        left: BigReal,
        right: BigReal,
    },
    Inconclusive { reason: String },
}

impl IsometryVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            IsometryVerdict::Isometric { .. } => "Isometric",
            IsometryVerdict::NotIsometric { .. } => "NotIsometric",
            IsometryVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_isometric(&self) -> bool {
        matches!(self, IsometryVerdict::Isometric { .. })
    }

    pub fn is_not_isometric(&self) -> bool {
        matches!(self, IsometryVerdict::NotIsometric { .. })
    }
}

/// Similarity verdict: the isometry verdict for `(g1, lambda g2)`.
#[derive(Clone, Debug)]
pub struct SimilarityResult {
    pub verdict: IsometryVerdict,
    pub lambda: BigReal,
}

impl SimilarityResult {
    pub fn tag(&self) -> &'static str {
        match self.verdict {
            IsometryVerdict::Isometric { .. } => "Similar",
            IsometryVerdict::NotIsometric { .. } => "NotSimilar",
            IsometryVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// `2^{-prec/2}`.
pub fn default_tol(prec: u32) -> Float {
    Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2))
}

/// Are `a` and `b` separated by more than `tol` after accounting for radii?
pub fn separated(a: &BigReal, b: &BigReal, tol: &Float) -> bool {
    (a - b).mag_lower() > *tol
}

fn not_iso(name: &str, a: BigReal, b: BigReal) -> IsometryVerdict {
    IsometryVerdict::NotIsometric { invariant: name.into(), left: a, right: b }
}

pub fn isometry_test(g1: &GramMatrix, g2: &GramMatrix, tol: &Float) -> Result<IsometryVerdict> {
    isometry_test_budget(g1, g2, tol, DEFAULT_ISOMETRY_BUDGET)
}

pub fn isometry_test_budget(
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: &Float,
    budget: u64,
) -> Result<IsometryVerdict> {
    let n = g1.rank();
    if n != g2.rank() {
        return Err(Error::RankMismatch(n, g2.rank()));
    }
    if n == 0 {
        return Ok(IsometryVerdict::Isometric { witness: vec![] });
    }
    let d1 = g1.det()?;
    let d2 = g2.det()?;
    if separated(&d1, &d2, tol) {
        return Ok(not_iso("determinant", d1, d2));
    }
    if !g1.is_positive_definite() || !g2.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let s1 = enumerate::shortest_vectors(g1, usize::MAX)?;
    let s2 = enumerate::shortest_vectors(g2, usize::MAX)?;
    if separated(&s1.minimum, &s2.minimum, tol) {
        return Ok(not_iso("minimum", s1.minimum, s2.minimum));
    }
    if s1.vectors.len() != s2.vectors.len() {
        // only trust the kissing count when both minima are isolated
        let c1 = BigReal::from_i64(s1.vectors.len() as i64, 64);
        let c2 = BigReal::from_i64(s2.vectors.len() as i64, 64);
        if minimum_isolated(g1, &s1.minimum, tol)? && minimum_isolated(g2, &s2.minimum, tol)? {
            return Ok(not_iso("minimal_vector_count", c1, c2));
        }
    }
    let (g2r, u) = lll::lll_reduce_gram(g2.entries(), &Rational::from((99, 100)))?;
    let g2r = GramMatrix::new(g2r, g2.prec())?;
    let reach = (0..n).map(|i| g2r.get(i, i).to_f64()).fold(0.0, f64::max);
    let pool1 = enumerate::short_vectors_below(g1, reach, enumerate::DEFAULT_NODE_BUDGET)?;
    let pool2 = enumerate::short_vectors_below(g2, reach, enumerate::DEFAULT_NODE_BUDGET)?;
    if let Some(v) = compare_norm_lists(&pool1, &pool2, tol) {
        return Ok(v);
    }
    match backtrack(g1, &g2r, &pool1, tol, budget) {
        Some(x) => {
            let uinv = lll::int_inverse(&u).expect("unimodular");
            let t = lll::int_mul(&x, &lll::int_transpose(&uinv));
            if verify_witness(g1, g2, &t, tol) {
                Ok(IsometryVerdict::Isometric { witness: t })
            } else {
                Ok(IsometryVerdict::Inconclusive {
                    reason: "witness failed ball verification".into(),
                })
            }
        }
        None => Ok(IsometryVerdict::Inconclusive {
            reason: format!("no isometry found within {budget} search nodes"),
        }),
    }
}

/// No vector other than the minimal ones has norm within `tol` of the
/// minimum.
fn minimum_isolated(g: &GramMatrix, m: &BigReal, tol: &Float) -> Result<bool> {
    let reach = m.upper().to_f64() * (1.0 + 1e-6) + tol.to_f64();
    let vs = enumerate::short_vectors_below(g, reach, enumerate::DEFAULT_NODE_BUDGET)?;
    Ok(vs
        .iter()
        .all(|v| v.norm.overlaps(m) || separated(&v.norm, m, tol)))
}

/// Compares the i-th smallest norms of the two pools (equal multisets for
/// isometric lattices, both pools being complete below the same bound).
fn compare_norm_lists(a: &[NormedVector], b: &[NormedVector], tol: &Float) -> Option<IsometryVerdict> {
    for (x, y) in a.iter().zip(b) {
        if separated(&x.norm, &y.norm, tol) {
            return Some(not_iso("short_vector_norms", x.norm.clone(), y.norm.clone()));
        }
    }
    None
}

fn backtrack(
    g1: &GramMatrix,
    g2r: &GramMatrix,
    pool: &[NormedVector],
    tol: &Float,
    budget: u64,
) -> Option<IMat> {
    let n = g2r.rank();
    let scale = (0..n).map(|i| g2r.get(i, i).to_f64().abs()).fold(1.0, f64::max);
    let ftol = tol.to_f64() + 1e-10 * scale;
    let g1f = g1.to_f64();
    let g2f = g2r.to_f64();
    // each pool entry with both signs
    let mut cands: Vec<Vec<i64>> = Vec::new();
    for v in pool {
        let c: Option<Vec<i64>> = v.coords.iter().map(|x| x.to_i64()).collect();
        if let Some(c) = c {
            cands.push(c.iter().map(|x| -x).collect());
            cands.push(c);
        }
    }
    let ip = |x: &[i64], y: &[i64]| -> f64 {
        let mut s = 0.0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                s += g1f[i][j] * (x[i] * y[j]) as f64;
            }
        }
        s
    };
    let per_level: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..cands.len())
                .filter(|&k| (ip(&cands[k], &cands[k]) - g2f[i][i]).abs() <= ftol)
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut nodes = 0u64;
    fn rec(
        level: usize,
        chosen: &mut Vec<usize>,
        per_level: &[Vec<usize>],
        cands: &[Vec<i64>],
        g2f: &[Vec<f64>],
        ftol: f64,
        ip: &dyn Fn(&[i64], &[i64]) -> f64,
        nodes: &mut u64,
        budget: u64,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if level == per_level.len() {
            return accept(chosen);
        }
        for &k in &per_level[level] {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &c)| (ip(&cands[k], &cands[c]) - g2f[level][j]).abs() <= ftol);
            if ok {
                chosen.push(k);
                if rec(level + 1, chosen, per_level, cands, g2f, ftol, ip, nodes, budget, accept) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut found: Option<IMat> = None;
    let mut accept = |ch: &[usize]| -> bool {
        // columns of x are the chosen vectors
        let x: IMat = (0..n)
            .map(|r| ch.iter().map(|&k| Integer::from(cands[k][r])).collect())
            .collect();
        if lll::int_det(&x).abs() != 1 {
            return false;
        }
        if verify_witness(g1, g2r, &x, tol) {
            found = Some(x);
            true
        } else {
            false
        }
    };
    rec(0, &mut chosen, &per_level, &cands, &g2f, ftol, &ip, &mut nodes, budget, &mut accept);
    found
}

/// `|t^T g1 t - g2|_inf < tol` (upper bounds) and `|det t| = 1`.
pub fn verify_witness(g1: &GramMatrix, g2: &GramMatrix, t: &IMat, tol: &Float) -> bool {
    if lll::int_det(t).abs() != 1 {
        return false;
    }
    let tt = lll::int_transpose(t);
    let img = lll::congruence_int(&tt, g1.entries(), g1.prec());
    for i in 0..g2.rank() {
        for j in 0..g2.rank() {
            if (&img[i][j] - g2.get(i, j)).mag() >= *tol {
                return false;
            }
        }
    }
    true
}

/// `lambda = (det g1 / det g2)^{1/n}`, then the isometry verdict for
/// `(g1, lambda g2)`.
pub fn similarity_test(g1: &GramMatrix, g2: &GramMatrix, tol: &Float) -> Result<SimilarityResult> {
    let n = g1.rank();
    if n != g2.rank() {
        return Err(Error::RankMismatch(n, g2.rank()));
    }
    let prec = g1.prec().max(g2.prec());
    if n == 0 {
        return Ok(SimilarityResult {
            verdict: IsometryVerdict::Isometric { witness: vec![] },
            lambda: BigReal::one(prec),
        });
    }
    let d1 = g1.det()?;
    let d2 = g2.det()?;
    let lambda = d1.checked_div(&d2)?.root(n as u32)?;
    let scaled = g2.scale(&lambda);
    let verdict = isometry_test(g1, &scaled, tol)?;
    Ok(SimilarityResult { verdict, lambda })
}

/// Largest entrywise upper bound of `|a - b|`.
pub fn gram_distance(a: &GramMatrix, b: &GramMatrix) -> f64 {
    bmat::max_abs_diff(a.entries(), b.entries())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Float {
        default_tol(64)
    }

    #[test]
    fn permutation_is_isometry() {
        let g = GramMatrix::from_i64(&[&[3, 1, 0], &[1, 4, 1], &[0, 1, 5]], 64).unwrap();
        let p = g.permuted(&[2, 0, 1]);
        let v = isometry_test(&g, &p, &tol()).unwrap();
        match v {
            IsometryVerdict::Isometric { witness } => assert!(verify_witness(&g, &p, &witness, &tol())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn determinant_separates() {
        let a = GramMatrix::from_i64(&[&[1, 0], &[0, 1]], 64).unwrap();
        let b = GramMatrix::from_i64(&[&[1, 0], &[0, 4]], 64).unwrap();
        match isometry_test(&a, &b, &tol()).unwrap() {
            IsometryVerdict::NotIsometric { invariant, .. } => assert_eq!(invariant, "determinant"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn homothety_is_similar() {
        let g = GramMatrix::from_i64(&[&[2, 1], &[1, 3]], 64).unwrap();
        let g4 = g.scale(&BigReal::from_i64(4, 64));
        let s = similarity_test(&g, &g4, &tol()).unwrap();
        assert_eq!(s.tag(), "Similar");
        assert!(s.lambda.contains_rational(&Rational::from((1, 4))));
    }

    #[test]
    fn identity_vs_diag_not_similar() {
        let a = GramMatrix::from_i64(&[&[1, 0], &[0, 1]], 64).unwrap();
        let b = GramMatrix::from_i64(&[&[1, 0], &[0, 4]], 64).unwrap();
        let s = similarity_test(&a, &b, &tol()).unwrap();
        assert_eq!(s.tag(), "NotSimilar");
    }

    #[test]
    fn rank_mismatch() {
        let a = GramMatrix::from_i64(&[&[1]], 64).unwrap();
        let b = GramMatrix::from_i64(&[&[1, 0], &[0, 1]], 64).unwrap();
        assert_eq!(isometry_test(&a, &b, &tol()).unwrap_err(), Error::RankMismatch(1, 2));
    }
}

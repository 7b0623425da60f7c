use rug::Rational;

use super::ring::{basis_element, coords, mul, nonzero_rref, norm_element, norm_ideal_basis};
use super::GroupTable;
use crate::error::{Error, Result};
use crate::numeric::qmat::{self, QMat};

/// Decomposition `V = W + W_1' + W_2'` of `V = N_{H_1} R + N_{H_2} R`,
/// where `W = N_T R` for `T = <H_1, H_2>` and `W_i' = N_{H_i}(1 - e_T) R`.
#[derive(Clone, Debug)]
pub struct CompositumSplit {
    /// Elements of `T`.
    pub t: Vec<usize>,
    pub dim_v: usize,
    pub dim_w: usize,
    pub dim_w1: usize,
    pub dim_w2: usize,
    pub basis_w: QMat,
    pub basis_w1: QMat,
    pub basis_w2: QMat,
}

impl CompositumSplit {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.dim_v, self.dim_w, self.dim_w1, self.dim_w2)
    }
}

fn complement_basis(t: &GroupTable, h: &[usize], tt: &[usize]) -> QMat {
    let nh = norm_element(t, h);
    let nt = norm_element(t, tt);
    let f = Rational::from((h.len() as i64, tt.len() as i64));
    let rows: QMat = (0..t.order())
        .map(|g| {
            let a = mul(t, &nh, &basis_element(t, g));
            let b = mul(t, &nt, &basis_element(t, g));
            let d: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| Rational::from(x - &Rational::from(y * &f))).collect();
            coords(&d)
        })
        .collect();
    nonzero_rref(&rows)
}

pub fn compositum_decomposition(t: &GroupTable, h1: &[usize], h2: &[usize]) -> Result<CompositumSplit> {
    for (name, h) in [("H1", h1), ("H2", h2)] {
        if !t.is_subgroup(h) {
            return Err(Error::SetupViolated(format!("{name} is not a subgroup")));
        }
        if !t.is_normal(h) {
            return Err(Error::SetupViolated(format!("{name} is not normal")));
        }
    }
    let gens: Vec<usize> = h1.iter().chain(h2).copied().collect();
    let tt = t.subgroup(&gens);
    let b1 = norm_ideal_basis(t, h1);
    let b2 = norm_ideal_basis(t, h2);
    let mut all = b1.clone();
    all.extend(b2.iter().cloned());
    let dim_v = if all.is_empty() { 0 } else { qmat::rank(&all) };
    let basis_w = norm_ideal_basis(t, &tt);
    let basis_w1 = complement_basis(t, h1, &tt);
    let basis_w2 = complement_basis(t, h2, &tt);
    let mut parts = basis_w.clone();
    parts.extend(basis_w1.iter().cloned());
    parts.extend(basis_w2.iter().cloned());
    let (dw, d1, d2) = (basis_w.len(), basis_w1.len(), basis_w2.len());
    let rank_parts = if parts.is_empty() { 0 } else { qmat::rank(&parts) };
    // the pieces must lie in V, be independent, and fill it
    let mut joined = all.clone();
    joined.extend(parts.iter().cloned());
    let rank_joined = if joined.is_empty() { 0 } else { qmat::rank(&joined) };
    let independent = rank_parts == dw + d1 + d2;
    if rank_joined != dim_v || !independent || rank_parts != dim_v {
        return Err(Error::SetupViolated(format!(
            "pieces of dimension {dw} + {d1} + {d2} do not decompose V of dimension {dim_v}"
        )));
    }
    Ok(CompositumSplit { t: tt, dim_v, dim_w: dw, dim_w1: d1, dim_w2: d2, basis_w, basis_w1, basis_w2 })
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, direct_product};
    use super::*;

    #[test]
    fn klein_four() {
        let k = direct_product(&cyclic(2), &cyclic(2));
        // (1,0) is index 2, (0,1) is index 1
        let s = compositum_decomposition(&k, &[0, 2], &[0, 1]).unwrap();
        assert_eq!(s.dims(), (2, 0, 1, 1));
    }

    #[test]
    fn equal_subgroups() {
        let k = direct_product(&cyclic(2), &cyclic(2));
        let s = compositum_decomposition(&k, &[0, 2], &[0, 2]).unwrap();
        assert_eq!(s.dims(), (1, 1, 0, 0));
        let c2 = cyclic(2);
        let s = compositum_decomposition(&c2, &[0], &[0]).unwrap();
        assert_eq!(s.dims(), (1, 1, 0, 0));
    }
}

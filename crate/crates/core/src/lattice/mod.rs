//! Lattices given by real Gram matrices: reduction, short vectors,
//! isometry and similarity verdicts, integer relations.

pub mod enumerate;
pub mod isometry;
pub mod lll;
pub mod pslq;
pub mod relation;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::bmat::{self, BMat};

pub use enumerate::{shortest_vectors, ShortVectors};
pub use isometry::{isometry_test, similarity_test, IsometryVerdict, SimilarityResult};
pub use lll::{lll_reduce, IMat};
pub use relation::{integer_relation, RelationResult, RelationTag};

/// Symmetric matrix of balls, the Gram matrix of a lattice basis.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    entries: BMat,
    prec: u32,
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    rank: usize,
    prec: u32,
    entries: Vec<Vec<String>>,
}

impl GramMatrix {
    /// Checks squareness and symmetry within ball radii.
    pub fn new(entries: BMat, prec: u32) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("row {i} has length {} not {n}", row.len())));
            }
            for j in 0..i {
                if !row[j].overlaps(&entries[j][i]) {
                    return Err(Error::Invalid(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(GramMatrix { entries, prec })
    }

    pub fn from_basis(rows: &BMat, prec: u32) -> Self {
        let g = bmat::mul(rows, &bmat::transpose(rows), prec);
        GramMatrix { entries: symmetrize(g), prec }
    }

    pub fn from_i64(rows: &[&[i64]], prec: u32) -> Result<Self> {
        let e = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigReal::from_i64(x, prec)).collect())
            .collect();
        Self::new(e, prec)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn entries(&self) -> &BMat {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.entries[i][j]
    }

    /// Gram determinant; the empty matrix has determinant 1.
    pub fn det(&self) -> Result<BigReal> {
        if self.rank() == 0 {
            return Ok(BigReal::one(self.prec));
        }
        match bmat::det_spd(&self.entries) {
            Ok(d) => Ok(d),
            Err(Error::NotPositiveDefinite) => bmat::det(&self.entries, self.prec),
            Err(e) => Err(e),
        }
    }

    /// Every leading principal minor certified positive.
    pub fn is_positive_definite(&self) -> bool {
        bmat::cholesky(&self.entries).is_ok()
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        GramMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x * s).collect())
                .collect(),
            prec: self.prec,
        }
    }

    /// `P^T g P` for a permutation `perm`, i.e. basis reordered so that the
    /// new `i`-th vector is the old `perm[i]`-th.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.rank();
        GramMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[perm[i]][perm[j]].clone()).collect())
                .collect(),
            prec: self.prec,
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        bmat::to_f64(&self.entries)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GramJson {
            rank: self.rank(),
            prec: self.prec,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x.to_exact_string()).collect())
                .collect(),
        })
        .expect("gram json")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("gram json")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: GramJson = serde_json::from_str(s)?;
        if j.entries.len() != j.rank {
            return Err(Error::Schema(format!(
                "rank {} but {} rows",
                j.rank,
                j.entries.len()
            )));
        }
        let e: Result<BMat> = j
            .entries
            .iter()
            .map(|r| r.iter().map(|x| BigReal::parse_exact(x, j.prec)).collect())
            .collect();
        Self::new(e?, j.prec)
    }
}

/// Replaces each off-diagonal pair by a common ball covering both.
pub fn symmetrize(mut g: BMat) -> BMat {
    let n = g.len();
    for i in 0..n {
        for j in 0..i {
            if g[i][j].mid() != g[j][i].mid() || g[i][j].rad() != g[j][i].rad() {
                let d = (&g[i][j] - &g[j][i]).mag();
                let w = g[i][j].widen(&d);
                g[i][j] = w.clone();
                g[j][i] = w;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_bit_exact() {
        let two = BigReal::from_i64(2, 128);
        let s = two.sqrt().unwrap();
        let g = GramMatrix::new(
            vec![vec![two.clone(), s.clone()], vec![s.clone(), BigReal::pi(128)]],
            128,
        )
        .unwrap();
        let js = g.to_json();
        let back = GramMatrix::from_json(&js).unwrap();
        assert_eq!(back.to_json(), js);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(back.get(i, j).mid(), g.get(i, j).mid());
                assert_eq!(back.get(i, j).rad(), g.get(i, j).rad());
            }
        }
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(GramMatrix::from_i64(&[&[1, 2], &[3, 1]], 64).is_err());
    }
}

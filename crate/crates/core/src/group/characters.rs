use nalgebra::{Complex, DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Float, Integer, Rational};

use super::{Classes, GroupTable, IDEMPOTENT_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::cmat;
use crate::numeric::complex::MpComplex;

/// Complex character table of a small group, values at `prec` bits.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Classes,
    pub order: usize,
    pub degrees: Vec<u64>,
    /// `values[chi][class]`.
    pub values: Vec<Vec<MpComplex>>,
    /// Galois orbits of characters, each sorted; the trivial orbit first.
    pub orbits: Vec<Vec<usize>>,
    /// Class of `g^{-1}` for `g` in each class.
    pub inverse_class: Vec<usize>,
    /// `structure[i][j][k]`: number of `x` in class `i` with `x^{-1} z_k`
    /// in class `j`, `z_k` a fixed representative of class `k`.
    pub structure: Vec<Vec<Vec<i64>>>,
    pub prec: u32,
}

impl CharacterTable {
    pub fn new(t: &GroupTable, prec: u32) -> Result<Self> {
        if t.order() > IDEMPOTENT_BUDGET {
            return Err(Error::OrderBudgetExceeded { order: t.order(), budget: IDEMPOTENT_BUDGET });
        }
        let classes = t.classes();
        let c = classes.len();
        let n = t.order();
        let mut structure = vec![vec![vec![0i64; c]; c]; c];
        for (k, ck) in classes.classes.iter().enumerate() {
            let z = ck[0];
            for (i, ci) in classes.classes.iter().enumerate() {
                for &x in ci {
                    let y = t.mul(t.inv(x), z);
                    structure[i][classes.class_of[y]][k] += 1;
                }
            }
        }
        let inverse_class: Vec<usize> = classes
            .classes
            .iter()
            .map(|cl| classes.class_of[t.inv(cl[0])])
            .collect();
        let sizes = classes.sizes();

        // common eigenvectors of the class multiplication matrices
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let weights: Vec<f64> = (0..c).map(|_| rng.gen_range(0.5..1.5)).collect();
        let m = DMatrix::from_fn(c, c, |j, k| {
            (0..c).map(|i| weights[i] * structure[i][j][k] as f64).sum::<f64>()
        });
        let eig = m.clone().complex_eigenvalues();
        let mc: DMatrix<Complex<f64>> = m.map(|x| Complex::new(x, 0.0));
        let mut omegas: Vec<Vec<Complex<f64>>> = Vec::with_capacity(c);
        for lam in eig.iter() {
            let shift = lam + Complex::new(1e-9, 1e-9);
            let a = &mc - DMatrix::from_diagonal_element(c, c, shift);
            let lu = a.lu();
            let mut x = DVector::from_fn(c, |i, _| Complex::new(1.0 + i as f64 * 0.37, 0.11));
            for _ in 0..3 {
                x = lu
                    .solve(&x)
                    .ok_or_else(|| Error::ReconstructionFailed("singular eigen solve".into()))?;
                let s = x[0];
                if s.norm() == 0.0 {
                    return Err(Error::ReconstructionFailed("eigenvector with zero identity entry".into()));
                }
                x /= s;
            }
            omegas.push(x.iter().copied().collect());
        }

        let wp = prec + 32;
        let mut refined: Vec<Vec<MpComplex>> = Vec::with_capacity(c);
        for om in &omegas {
            refined.push(newton_refine(&structure, &weights, om, wp)?);
        }

        let mut chars: Vec<(u64, Vec<MpComplex>)> = Vec::with_capacity(c);
        for om in &refined {
            let mut s = Float::new(wp);
            for (i, w) in om.iter().enumerate() {
                s += Float::with_val(wp, w.norm_sqr() / sizes[i] as u32);
            }
            let d2 = Float::with_val(wp, n as u32) / s;
            let d = d2.sqrt().to_f64().round() as u64;
            if d == 0 {
                return Err(Error::ReconstructionFailed("character of degree zero".into()));
            }
            let vals: Vec<MpComplex> = om
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let f = Float::with_val(wp, d) / sizes[i] as u32;
                    w.scale(&f).with_prec(prec)
                })
                .collect();
            chars.push((d, vals));
        }
        chars.sort_by(|a, b| {
            let ka = sort_key(a);
            let kb = sort_key(b);
            ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
        });
        // the trivial character sorts first: degree 1 and all values 1
        let degrees: Vec<u64> = chars.iter().map(|x| x.0).collect();
        let values: Vec<Vec<MpComplex>> = chars.into_iter().map(|x| x.1).collect();
        let total: u64 = degrees.iter().map(|d| d * d).sum();
        if total != n as u64 {
            return Err(Error::ReconstructionFailed(format!(
                "squared degrees sum to {total}, group order {n}"
            )));
        }

        // Galois orbits from power maps
        let e = t.exponent();
        let mut orbit_of = vec![usize::MAX; c];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for chi in 0..c {
            if orbit_of[chi] != usize::MAX {
                continue;
            }
            let mut orb = vec![chi];
            for k in 1..e.max(2) {
                if super::gcd(k, e) != 1 {
                    continue;
                }
                let pm: Vec<usize> = classes
                    .classes
                    .iter()
                    .map(|cl| classes.class_of[t.pow(cl[0], k)])
                    .collect();
                let conj: Vec<(f64, f64)> = pm.iter().map(|&j| values[chi][j].to_f64()).collect();
                let hit = (0..c).find(|&psi| {
                    values[psi]
                        .iter()
                        .zip(&conj)
                        .all(|(v, w)| {
                            let (a, b) = v.to_f64();
                            (a - w.0).abs() < 1e-6 && (b - w.1).abs() < 1e-6
                        })
                });
                match hit {
                    Some(psi) if !orb.contains(&psi) => orb.push(psi),
                    Some(_) => {}
                    None => return Err(Error::ReconstructionFailed("Galois conjugate not found".into())),
                }
            }
            orb.sort_unstable();
            for &x in &orb {
                orbit_of[x] = orbits.len();
            }
            orbits.push(orb);
        }
        Ok(CharacterTable { classes, order: n, degrees, values, orbits, inverse_class, structure, prec })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `chi(g)` for `g` an element index.
    pub fn value(&self, chi: usize, g: usize) -> &MpComplex {
        &self.values[chi][self.classes.class_of[g]]
    }

    /// Complex central idempotent `e_chi` as group-ring coefficients.
    pub fn central_idempotent(&self, chi: usize, prec: u32) -> Vec<MpComplex> {
        let n = self.order;
        let f = Float::with_val(prec, self.degrees[chi]) / n as u32;
        (0..n)
            .map(|g| {
                let k = self.classes.class_of[g];
                self.values[chi][self.inverse_class[k]].with_prec(prec).scale(&f)
            })
            .collect()
    }

    /// Index of the complex conjugate character.
    pub fn conjugate(&self, chi: usize) -> usize {
        let want: Vec<MpComplex> = self.inverse_class.iter().map(|&k| self.values[chi][k].clone()).collect();
        (0..self.len())
            .find(|&psi| {
                self.values[psi].iter().zip(&want).all(|(a, b)| {
                    let (x, y) = a.to_f64();
                    let (u, v) = b.to_f64();
                    (x - u).abs() < 1e-6 && (y - v).abs() < 1e-6
                })
            })
            .expect("conjugate character exists")
    }

    /// Product of central elements given by class coefficients.
    pub fn class_product(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let c = self.classes.len();
        let mut out = vec![Rational::new(); c];
        for i in 0..c {
            if a[i] == 0 {
                continue;
            }
            for j in 0..c {
                if b[j] == 0 {
                    continue;
                }
                let ab = Rational::from(&a[i] * &b[j]);
                for k in 0..c {
                    let s = self.structure[i][j][k];
                    if s != 0 {
                        out[k] += Rational::from(&ab * s);
                    }
                }
            }
        }
        out
    }
}

fn sort_key(x: &(u64, Vec<MpComplex>)) -> Vec<f64> {
    let mut k = vec![x.0 as f64];
    let trivial = x.1.iter().all(|v| {
        let (a, b) = v.to_f64();
        (a - 1.0).abs() < 1e-9 && b.abs() < 1e-9
    });
    k.insert(0, if trivial { 0.0 } else { 1.0 });
    for v in &x.1 {
        let (a, b) = v.to_f64();
        k.push(-(a * 1e6).round());
        k.push(-(b * 1e6).round());
    }
    k
}

/// Newton iteration for `M w = (r . w) w`, `w_0 = 1`, from an `f64` start.
fn newton_refine(
    structure: &[Vec<Vec<i64>>],
    weights: &[f64],
    start: &[Complex<f64>],
    wp: u32,
) -> Result<Vec<MpComplex>> {
    let c = start.len();
    let r: Vec<Float> = weights.iter().map(|&w| Float::with_val(wp, w)).collect();
    let m: Vec<Vec<MpComplex>> = (0..c)
        .map(|j| {
            (0..c)
                .map(|k| {
                    let s = (0..c).fold(Float::new(wp), |acc, i| {
                        acc + Float::with_val(wp, &r[i] * structure[i][j][k])
                    });
                    MpComplex::from_real(s)
                })
                .collect()
        })
        .collect();
    let mut w: Vec<MpComplex> = start.iter().map(|z| MpComplex::from_f64(z.re, z.im, wp)).collect();
    w[0] = MpComplex::one(wp);
    if c == 1 {
        return Ok(w);
    }
    let tol = Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 16));
    for _ in 0..40 {
        let lam = (0..c).fold(MpComplex::zero(wp), |s, k| &s + &w[k].scale(&r[k]));
        let mw = cmat::mul_vec(&m, &w, wp);
        let f: Vec<MpComplex> = (1..c).map(|j| &mw[j] - &(&lam * &w[j])).collect();
        let jac: Vec<Vec<MpComplex>> = (1..c)
            .map(|j| {
                (1..c)
                    .map(|k| {
                        let mut v = &m[j][k] - &w[j].scale(&r[k]);
                        if j == k {
                            v = &v - &lam;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let d = cmat::solve(&jac, &f, wp)
            .ok_or_else(|| Error::ReconstructionFailed("singular Newton step".into()))?;
        let mut big = Float::new(wp);
        for (j, dj) in d.iter().enumerate() {
            w[j + 1] = &w[j + 1] - dj;
            let a = dj.abs();
            if a > big {
                big = a;
            }
        }
        if big <= tol {
            return Ok(w);
        }
    }
    Err(Error::ReconstructionFailed("character refinement did not converge".into()))
}

/// A primitive central idempotent of `Q[G]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalIdempotent {
    /// Coefficient shared by all elements of each conjugacy class.
    pub class_coeffs: Vec<Rational>,
    /// Complex characters in the Galois orbit.
    pub characters: Vec<usize>,
    /// `dim_Q e Q[G]`.
    pub dim: u64,
}

impl RationalIdempotent {
    /// Group-ring coefficients.
    pub fn element(&self, classes: &Classes) -> Vec<Rational> {
        classes.class_of.iter().map(|&k| self.class_coeffs[k].clone()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.characters == [0]
    }
}

/// Primitive central idempotents of `Q[G]`, trivial first, verified exactly.
pub fn rational_idempotents(t: &GroupTable) -> Result<Vec<RationalIdempotent>> {
    let ct = CharacterTable::new(t, 64)?;
    rational_idempotents_from(&ct)
}

pub(crate) fn rational_idempotents_from(ct: &CharacterTable) -> Result<Vec<RationalIdempotent>> {
    let n = ct.order;
    let c = ct.classes.len();
    let mut out = Vec::with_capacity(ct.orbits.len());
    for orb in &ct.orbits {
        let mut coeffs = Vec::with_capacity(c);
        for k in 0..c {
            // |G| e_g = sum chi(1) chi(g^{-1}), an integer
            let kinv = ct.inverse_class[k];
            let mut s = 0.0;
            let mut im = 0.0;
            for &chi in orb {
                let (a, b) = ct.values[chi][kinv].to_f64();
                s += ct.degrees[chi] as f64 * a;
                im += ct.degrees[chi] as f64 * b;
            }
            let rounded = s.round();
            if (s - rounded).abs() > 1e-3 || im.abs() > 1e-3 {
                return Err(Error::ReconstructionFailed(format!("coefficient {s} + {im}i is not integral")));
            }
            coeffs.push(Rational::from((Integer::from(rounded as i64), Integer::from(n))));
        }
        let dim = orb.iter().map(|&chi| ct.degrees[chi] * ct.degrees[chi]).sum();
        out.push(RationalIdempotent { class_coeffs: coeffs, characters: orb.clone(), dim });
    }
    verify_idempotents(ct, &out)?;
    Ok(out)
}

fn verify_idempotents(ct: &CharacterTable, es: &[RationalIdempotent]) -> Result<()> {
    let c = ct.classes.len();
    let mut total = vec![Rational::new(); c];
    for (a, ea) in es.iter().enumerate() {
        for (b, eb) in es.iter().enumerate() {
            let p = ct.class_product(&ea.class_coeffs, &eb.class_coeffs);
            let want: Vec<Rational> = if a == b { ea.class_coeffs.clone() } else { vec![Rational::new(); c] };
            if p != want {
                return Err(Error::ReconstructionFailed(format!("idempotent identity fails for ({a}, {b})")));
            }
        }
        for k in 0..c {
            total[k] += &ea.class_coeffs[k];
        }
    }
    let mut one = vec![Rational::new(); c];
    one[0] = Rational::from(1);
    if total != one {
        return Err(Error::ReconstructionFailed("idempotents do not sum to 1".into()));
    }
    Ok(())
}

/// `d[chi][i]`: multiplicity of each nontrivial complex character in the
/// permutation character of `G/H_i`.
pub fn isotypic_dims(ct: &CharacterTable, subgroups: &[Vec<usize>]) -> Vec<Vec<i64>> {
    (1..ct.len())
        .map(|chi| {
            subgroups
                .iter()
                .map(|h| {
                    let s: f64 = h.iter().map(|&x| ct.value(chi, x).to_f64().0).sum();
                    (s / h.len() as f64).round() as i64
                })
                .collect()
        })
        .collect()
}

/// `dim_Q e N_{H_i} R` for each nontrivial rational idempotent `e`.
pub fn rational_isotypic_dims(
    ct: &CharacterTable,
    idempotents: &[RationalIdempotent],
    subgroups: &[Vec<usize>],
) -> Vec<Vec<i64>> {
    let d = isotypic_dims(ct, subgroups);
    idempotents
        .iter()
        .filter(|e| !e.is_trivial())
        .map(|e| {
            (0..subgroups.len())
                .map(|i| e.characters.iter().map(|&chi| ct.degrees[chi] as i64 * d[chi - 1][i]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, direct_product, PermGroupData};
    use super::*;

    #[test]
    fn c2_idempotents() {
        let es = rational_idempotents(&cyclic(2)).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].class_coeffs, vec![Rational::from((1, 2)), Rational::from((1, 2))]);
        assert_eq!(es[1].class_coeffs, vec![Rational::from((1, 2)), Rational::from((-1, 2))]);
    }

    #[test]
    fn c3_has_two_rational_idempotents() {
        let es = rational_idempotents(&cyclic(3)).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[1].characters.len(), 2);
        assert_eq!(es[1].dim, 2);
    }

    #[test]
    fn s3_table() {
        let s3 = PermGroupData::parse(3, &["(1,2,3)", "(1,2)"]).unwrap();
        let t = s3.table(100).unwrap();
        let ct = CharacterTable::new(&t, 128).unwrap();
        assert_eq!(ct.degrees, vec![1, 1, 2]);
        let es = rational_idempotents_from(&ct).unwrap();
        assert_eq!(es.len(), 3);
    }

    #[test]
    fn c4_and_klein() {
        let ct = CharacterTable::new(&cyclic(4), 96).unwrap();
        assert_eq!(ct.orbits.len(), 3);
        let k = direct_product(&cyclic(2), &cyclic(2));
        assert_eq!(rational_idempotents(&k).unwrap().len(), 4);
    }

    #[test]
    fn regular_dims() {
        let s3 = PermGroupData::parse(3, &["(1,2,3)", "(1,2)"]).unwrap();
        let t = s3.table(100).unwrap();
        let ct = CharacterTable::new(&t, 64).unwrap();
        let d = isotypic_dims(&ct, &[vec![0], (0..6).collect()]);
        assert_eq!(d, vec![vec![1, 0], vec![2, 0]]);
    }
}

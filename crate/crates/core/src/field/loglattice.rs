use rug::{Float, Rational};

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::numeric::ball::{self, BigReal};
use crate::numeric::bmat::BMat;

/// A list of units of a field with a note on where they came from.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub units: Vec<FieldElement>,
    pub provenance: String,
}

impl UnitSystem {
    pub fn new(units: Vec<FieldElement>, provenance: &str) -> Self {
        UnitSystem { units, provenance: provenance.to_string() }
    }

    /// Checks exactly that every element is a unit of the ring of integers.
    pub fn validate(&self, k: &NumberField) -> Result<()> {
        for (i, u) in self.units.iter().enumerate() {
            if u.coords().len() != k.degree() {
                return Err(Error::NotAUnit(format!("unit {i} has wrong length")));
            }
            if !k.is_unit(u) {
                return Err(Error::NotAUnit(format!("unit {i} = {u}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct LogLattice {
    /// Log vectors of the chosen units, one row each, in `R^{r+s}`.
    pub basis: BMat,
    pub gram: GramMatrix,
    /// Positions of the chosen units in the input system.
    pub unit_indices: Vec<usize>,
    pub units: Vec<FieldElement>,
    pub r: usize,
    pub s: usize,
    pub prec: u32,
}

impl LogLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Log vector at the field's current embeddings, without accuracy checks.
fn log_embed_at(k: &NumberField, u: &FieldElement) -> Result<Vec<BigReal>> {
    let (r, s) = k.signature();
    let mut out = Vec::with_capacity(r + s);
    for i in 0..r + s {
        let z = k.eval(u, i);
        let l = if i < r { z.re.abs().ln()? } else { z.ln_abs()?.mul_i64(2) };
        out.push(l);
    }
    Ok(out)
}

/// `(log|sigma_1 u|, ..., log|sigma_r u|, 2 log|tau_1 u|, ...)` with every
/// coordinate accurate to `2^{-prec}`. Embeddings are recomputed at higher
/// precision when needed.
pub fn log_embed(k: &NumberField, u: &FieldElement, prec: u32) -> Result<Vec<BigReal>> {
    let target = Float::with_val(ball::RAD_PREC, Float::i_exp(1, -(prec as i32)));
    let mut wp = k.prec().max(prec + 32);
    let mut field = k.at_prec(wp)?;
    for _ in 0..5 {
        match log_embed_at(&field, u) {
            Ok(v) if v.iter().all(|x| *x.rad() < target) => {
                let sum = ball::sum(&v, wp);
                if !sum.contains_zero() {
                    return Err(Error::NotAUnit(format!("log coordinates of {u} do not sum to zero")));
                }
                return Ok(v);
            }
            Ok(_) | Err(Error::BallTooWide(_)) | Err(Error::InsufficientPrecision(_)) => {}
            Err(e) => return Err(e),
        }
        wp *= 2;
        field = k.at_prec(wp)?;
    }
    Err(Error::PrecisionExhausted(format!("log embedding of {u}")))
}

enum Independence {
    Independent,
    Dependent,
    Undecided,
}

/// Gram-Schmidt step: classifies `v` against the orthogonalized `ortho`,
/// pushing its residual when independent.
fn gs_step(ortho: &mut Vec<(Vec<BigReal>, BigReal)>, v: &[BigReal], prec: u32) -> Independence {
    let mut w = v.to_vec();
    for (b, bb) in ortho.iter() {
        let mu = match ball::dot(&w, b, prec).checked_div(bb) {
            Ok(m) => m,
            Err(_) => return Independence::Undecided,
        };
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi = &*wi - &(&mu * bi);
        }
    }
    let ww = ball::dot(&w, &w, prec);
    let vv = ball::dot(v, v, prec);
    if ww.is_positive() {
        ortho.push((w, ww));
        return Independence::Independent;
    }
    let scale = vv.upper().to_f64().max(1.0);
    let thr = scale * 2f64.powi(-(prec as i32).min(1000));
    if ww.upper().to_f64() < thr {
        Independence::Dependent
    } else {
        Independence::Undecided
    }
}

/// Indices of a maximal independent subset of `vectors`, chosen greedily.
/// `None` when some step cannot be decided at the balls' precision.
pub fn independent_subset(vectors: &[Vec<BigReal>], prec: u32) -> Option<Vec<usize>> {
    let mut ortho = Vec::new();
    let mut chosen = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        match gs_step(&mut ortho, v, prec) {
            Independence::Independent => chosen.push(i),
            Independence::Dependent => {}
            Independence::Undecided => return None,
        }
    }
    Some(chosen)
}

/// Log-unit lattice spanned by a maximal independent subset of `units`,
/// chosen greedily in input order.
pub fn log_lattice(k: &NumberField, units: &UnitSystem, prec: u32) -> Result<LogLattice> {
    units.validate(k)?;
    let (r, s) = k.signature();
    let expected = r + s - 1;
    let mut p = prec;
    for _ in 0..5 {
        let wp = p + 32;
        let vecs: Result<Vec<Vec<BigReal>>> = units.units.iter().map(|u| log_embed(k, u, wp)).collect();
        let vecs = vecs?;
        let mut ortho = Vec::new();
        let mut chosen = Vec::new();
        let mut undecided = false;
        for (i, v) in vecs.iter().enumerate() {
            if chosen.len() == expected {
                break;
            }
            match gs_step(&mut ortho, v, wp) {
                Independence::Independent => chosen.push(i),
                Independence::Dependent => {}
                Independence::Undecided => {
                    undecided = true;
                    break;
                }
            }
        }
        if undecided {
            p *= 2;
            continue;
        }
        if chosen.len() < expected {
            return Err(Error::RankDeficient { expected, found: chosen.len() });
        }
        let basis: BMat = chosen.iter().map(|&i| vecs[i].clone()).collect();
        let gram = GramMatrix::from_basis(&basis, wp);
        return Ok(LogLattice {
            basis,
            gram,
            unit_indices: chosen.clone(),
            units: chosen.iter().map(|&i| units.units[i].clone()).collect(),
            r,
            s,
            prec: wp,
        });
    }
    Err(Error::RankDeficient { expected, found: 0 })
}

/// `sqrt(det(gram) / (r + s))`, the absolute value of any maximal minor.
pub fn regulator(l: &LogLattice) -> Result<BigReal> {
    let expected = l.r + l.s - 1;
    if l.rank() != expected {
        return Err(Error::RankDeficient { expected, found: l.rank() });
    }
    if expected == 0 {
        return Ok(BigReal::one(l.prec));
    }
    let d = l.gram.det()?;
    d.mul_rational(&Rational::from((1, (l.r + l.s) as i64))).sqrt()
}

/// Image of a log-unit lattice of `K` inside the log space of `N`.
#[derive(Clone, Debug)]
pub struct Inclusion {
    pub lattice: LogLattice,
    /// `[N:K]`: the Gram matrix of the image is this multiple of the
    /// original one.
    pub scale: Rational,
    /// `det` of the image Gram over `det` of the original.
    pub det_ratio: Rational,
    /// For every real embedding of `N`, the embedding of `K` it restricts to.
    pub embedding_map: Vec<usize>,
}

/// Includes `L_K` into the log space of `N`, where `image` is the image of
/// the generator of `K` in `N`. Both fields must be totally real.
pub fn include_sublattice(
    k: &NumberField,
    n: &NumberField,
    image: &FieldElement,
    lk: &LogLattice,
) -> Result<Inclusion> {
    if !n.is_totally_real() || !k.is_totally_real() {
        return Err(Error::NotTotallyReal);
    }
    if n.degree() % k.degree() != 0 {
        return Err(Error::NotASubfield(format!(
            "degree {} does not divide {}",
            k.degree(),
            n.degree()
        )));
    }
    if image.coords().len() != n.degree() {
        return Err(Error::NotASubfield("image has wrong length".into()));
    }
    let check = k.poly().compose_mod(&image.to_poly(), n.poly());
    if !check.is_zero() {
        return Err(Error::NotASubfield(format!("defining polynomial does not vanish at {image}")));
    }
    let wp = lk.prec + 32;
    let kp = k.at_prec(wp)?;
    let np = n.at_prec(wp)?;
    let mut map = Vec::with_capacity(n.degree());
    for j in 0..n.degree() {
        let x = np.eval_real(image, j);
        let i = kp
            .match_real_root(&x)
            .ok_or_else(|| Error::PrecisionExhausted("embedding restriction ambiguous".into()))?;
        map.push(i);
    }
    let basis: BMat = lk
        .basis
        .iter()
        .map(|v| map.iter().map(|&i| v[i].clone()).collect())
        .collect();
    // the same vectors from the images of the units, computed in N
    let units: Vec<FieldElement> = lk
        .units
        .iter()
        .map(|u| n.from_poly(&u.to_poly().compose_mod(&image.to_poly(), n.poly())))
        .collect();
    for (u, row) in units.iter().zip(&basis) {
        let direct = log_embed(&np, u, lk.prec)?;
        if direct.iter().zip(row).any(|(a, b)| !a.overlaps(b)) {
            return Err(Error::NotASubfield(format!("log vector of {u} does not match its restriction")));
        }
    }
    let gram = GramMatrix::from_basis(&basis, lk.prec);
    let scale = Rational::from((n.degree() as i64, k.degree() as i64));
    let expect = lk.gram.scale(&BigReal::from_rational(&scale, lk.prec));
    for i in 0..gram.rank() {
        for j in 0..gram.rank() {
            if !gram.get(i, j).overlaps(expect.get(i, j)) {
                return Err(Error::ResidualTooLarge("included Gram is not a scaled copy".into()));
            }
        }
    }
    let det_ratio = Rational::from(rug::ops::Pow::pow(&scale, lk.rank() as u32));
    let lattice = LogLattice {
        basis,
        gram,
        unit_indices: lk.unit_indices.clone(),
        units,
        r: n.degree(),
        s: 0,
        prec: lk.prec,
    };
    Ok(Inclusion { lattice, scale, det_ratio, embedding_map: map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(v: &[&[i64]]) -> UnitSystem {
        UnitSystem::new(v.iter().map(|c| FieldElement::from_i64(c)).collect(), "test")
    }

    #[test]
    fn sqrt2_regulator() {
        let k = NumberField::from_i64(&[-2, 0, 1], 128).unwrap();
        let l = log_lattice(&k, &units(&[&[1, 1]]), 128).unwrap();
        let reg = regulator(&l).unwrap();
        // asinh(1) = log(1 + sqrt 2)
        let oracle = rug::Float::with_val(200, 1).asinh();
        let diff = rug::Float::with_val(200, reg.mid() - &oracle).abs();
        assert!(diff < rug::Float::with_val(64, rug::Float::i_exp(1, -110)));
        assert!(reg.rad().to_f64() < 1e-35);
    }

    #[test]
    fn dependent_units_are_skipped() {
        let k = NumberField::from_i64(&[-2, 0, 1], 128).unwrap();
        // (1+t)^2 = 3 + 2t comes first, then 1 + t
        let l = log_lattice(&k, &units(&[&[3, 2], &[1, 1]]), 128).unwrap();
        assert_eq!(l.unit_indices, vec![0]);
        let l = log_lattice(&k, &units(&[&[-1, 0], &[1, 1]]), 128).unwrap();
        assert_eq!(l.unit_indices, vec![1]);
    }

    #[test]
    fn non_unit_rejected() {
        let k = NumberField::from_i64(&[-2, 0, 1], 128).unwrap();
        assert!(matches!(log_lattice(&k, &units(&[&[2, 1]]), 128), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn rank_deficient() {
        let k = NumberField::from_i64(&[1, 0, -10, 0, 1], 128).unwrap();
        let e = log_lattice(&k, &units(&[&[1, 0, 0, 0]]), 128).unwrap_err();
        assert_eq!(e, Error::RankDeficient { expected: 3, found: 0 });
    }

    #[test]
    fn complex_cubic() {
        let k = NumberField::from_i64(&[-2, 0, 0, 1], 128).unwrap();
        // t - 1 has norm 1
        let l = log_lattice(&k, &units(&[&[-1, 1, 0]]), 128).unwrap();
        let reg = regulator(&l).unwrap();
        assert!((reg.to_f64() - 1.347_377_348_329_384).abs() < 1e-12);
    }
}

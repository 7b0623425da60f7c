//! Residues from the class number formula, integer-relation probes with
//! re-verification, genericity probes on invariant-form coordinates, and the
//! comparison report for a pair of fields.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::bundle::FieldBundle;
use crate::error::{Error, Result};
use crate::field::{log_lattice, regulator, LogLattice, NumberField};
use crate::group::{gassmann_equivalent, sym_g_space, GassmannResult, GroupTable};
use crate::group::ring::SymGBasis;
use crate::lattice::{
    isometry_test, relation::relation_value, shortest_vectors, similarity_test, GramMatrix, IsometryVerdict,
    RelationResult, RelationTag,
};
use crate::numeric::ball::{self, BigReal};
use crate::numeric::bmat::{self, BMat};
use crate::numeric::qmat::{self, QMat};

pub const DEFAULT_PROBE_PREC: u32 = 512;
pub const DEFAULT_COEFF_BOUND: i64 = 1_000_000;
pub const DEFAULT_DEGREE: u32 = 2;
pub const MONOMIAL_BUDGET: usize = 500;

#[derive(Clone, Debug)]
pub struct ResidueRecord {
    pub label: String,
    pub r: usize,
    pub s: usize,
    pub class_number: u64,
    pub torsion: u64,
    pub disc_abs: Integer,
    pub regulator: BigReal,
    pub residue: BigReal,
    /// `residue = factor * pi^s * reg / sqrt|disc|` with
    /// `factor = 2^{r+s} h / w`.
    pub factor: Rational,
    pub provenance: String,
}

/// Field, full-rank log lattice and regulator of a bundle.
pub fn bundle_regulator(b: &FieldBundle, prec: u32) -> Result<(NumberField, LogLattice, BigReal)> {
    let k = b.field(prec)?;
    let us = b.unit_system()?;
    us.validate(&k)?;
    let l = log_lattice(&k, &us, prec)?;
    if l.rank() != k.unit_rank() {
        return Err(Error::RankDeficient { expected: k.unit_rank(), found: l.rank() });
    }
    let reg = regulator(&l)?;
    Ok((k, l, reg))
}

/// `2^r (2 pi)^s h reg / (w sqrt|d|)`.
pub fn residue_at_one(b: &FieldBundle, prec: u32) -> Result<ResidueRecord> {
    let h = b.class_number.ok_or(Error::MissingClassNumber)?;
    let (k, _, reg) = bundle_regulator(b, prec)?;
    if k.degree() < 2 {
        return Err(Error::Invalid("residue needs degree at least 2".into()));
    }
    let (r, s) = k.signature();
    let d = Integer::from(b.discriminant()?.abs_ref());
    let factor = Rational::from((Integer::from(h) << (r + s) as u32, Integer::from(b.torsion)));
    let wp = reg.prec();
    let mut res = reg.mul_rational(&factor);
    if s > 0 {
        res = &res * &BigReal::pi(wp).pow_u(s as u32);
    }
    let res = res.checked_div(&BigReal::from_integer(&d, wp).sqrt()?)?;
    Ok(ResidueRecord {
        label: b.label.clone(),
        r,
        s,
        class_number: h,
        torsion: b.torsion,
        disc_abs: d,
        regulator: reg,
        residue: res,
        factor,
        provenance: b.provenance.source.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Found,
    Spurious,
    NoneBelow,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub labels: Vec<String>,
    pub coeff_bound: Integer,
    pub prec: u32,
    pub result: RelationResult,
    /// The same search at twice the precision.
    pub cross_check: RelationResult,
    pub verdict: Verdict,
}

impl ProbeReport {
    pub fn relation(&self) -> Option<&[Integer]> {
        match self.verdict {
            Verdict::Found => self.result.found(),
            _ => None,
        }
    }

    pub fn text(&self) -> String {
        match (&self.verdict, &self.result.tag) {
            (Verdict::Found, RelationTag::Found(r)) => {
                let terms: Vec<String> =
                    r.iter().zip(&self.labels).filter(|(c, _)| **c != 0).map(|(c, l)| format!("{c}*{l}")).collect();
                format!("FOUND {} = 0, re-verified at {} bits", terms.join(" + "), 2 * self.prec)
            }
            (Verdict::Spurious, _) => format!("SPURIOUS relation at {} bits, not confirmed at {}", self.prec, 2 * self.prec),
            (_, RelationTag::NoneBelow(b)) => format!(
                "NONE: no relation of norm <= {} (coefficients bounded by {}) at {} bits",
                b.to_f64(),
                self.coeff_bound,
                self.prec
            ),
            _ => "inconsistent".into(),
        }
    }
}

/// Runs `integer_relation` on `compute(prec)`, then again on
/// `compute(2 prec)`. A relation is kept only if it still vanishes on the
/// sharper values.
pub fn probe_with<F>(labels: Vec<String>, compute: F, coeff_bound: &Integer, prec: u32) -> Result<ProbeReport>
where
    F: Fn(u32) -> Result<Vec<BigReal>>,
{
    if labels.len() < 2 {
        return Err(Error::Invalid("a probe needs at least two values".into()));
    }
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        return Err(Error::Invalid("probe labels must be distinct".into()));
    }
    let v1 = compute(prec)?;
    let v2 = compute(2 * prec)?;
    if v1.len() != labels.len() || v2.len() != labels.len() {
        return Err(Error::RankMismatch(labels.len(), v1.len()));
    }
    let result = crate::lattice::integer_relation(&v1, coeff_bound, prec)?;
    let cross_check = crate::lattice::integer_relation(&v2, coeff_bound, 2 * prec)?;
    let verdict = match &result.tag {
        RelationTag::Found(r) => {
            let val = relation_value(r, &v2, 2 * prec);
            let tight = ball::pow2(-(prec as i32), 64);
            if val.contains_zero() || val.mag() < tight {
                Verdict::Found
            } else {
                Verdict::Spurious
            }
        }
        RelationTag::NoneBelow(_) => Verdict::NoneBelow,
    };
    Ok(ProbeReport { labels, coeff_bound: coeff_bound.clone(), prec, result, cross_check, verdict })
}

/// Relation probe on fixed values. The cross-check reuses the same balls,
/// so it only certifies the verdict if they are accurate to `2 prec` bits.
pub fn relation_probe(values: &[(String, BigReal)], coeff_bound: &Integer, prec: u32) -> Result<ProbeReport> {
    let labels = values.iter().map(|(l, _)| l.clone()).collect();
    probe_with(labels, |_| Ok(values.iter().map(|(_, v)| v.clone()).collect()), coeff_bound, prec)
}

/// Exponent vectors of total degree `0..=d` in `k` variables, graded.
pub fn monomials(k: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![0; k]];
    for deg in 1..=d {
        let mut level = Vec::new();
        fill(k, deg, &mut vec![0; k], 0, &mut level);
        out.extend(level);
    }
    out
}

fn fill(k: usize, left: u32, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
    if i + 1 == k {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(k, left - e, cur, i + 1, out);
    }
    cur[i] = 0;
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Indices of the first occurrence of each distinct value; equality means
/// overlapping balls.
pub fn distinct_indices(values: &[BigReal]) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if !keep.iter().any(|&j| values[j].overlaps(v)) {
            keep.push(i);
        }
    }
    keep
}

/// Upper-triangular entries of a Gram matrix, row by row.
pub fn gram_entries(g: &GramMatrix) -> Vec<BigReal> {
    let n = g.rank();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| g.get(i, j).clone()).collect()
}

/// Probes for integer polynomial relations of degree `<= d` among the
/// distinct values of `compute(prec)`. The constant monomial is included,
/// so a relation with a rational constant term is also caught.
pub fn genericity_probe_with<F>(compute: F, d: u32, coeff_bound: &Integer, prec: u32) -> Result<ProbeReport>
where
    F: Fn(u32) -> Result<Vec<BigReal>>,
{
    let base = compute(prec)?;
    let keep = distinct_indices(&base);
    let k = keep.len();
    let count = binom(k + d as usize, d as usize);
    if count > MONOMIAL_BUDGET {
        return Err(Error::CombinatorialBudgetExceeded(count));
    }
    let mons = monomials(k, d);
    let labels = mons.iter().map(|m| monomial_label(m)).collect();
    let eval = |p: u32| -> Result<Vec<BigReal>> {
        let vals = compute(p)?;
        let x: Vec<&BigReal> = keep.iter().map(|&i| &vals[i]).collect();
        Ok(mons
            .iter()
            .map(|m| {
                m.iter().zip(&x).fold(BigReal::one(p + 64), |acc, (&e, xi)| if e == 0 { acc } else { &acc * &xi.pow_u(e) })
            })
            .collect())
    };
    probe_with(labels, eval, coeff_bound, prec)
}

/// Coordinates of an invariant form in the rational basis of `Sym^G`,
/// solved on independent entries and checked on all of them.
pub fn sym_g_coordinates(form: &GramMatrix, basis: &SymGBasis, prec: u32) -> Result<Vec<BigReal>> {
    let n = form.rank();
    let k = basis.dim();
    let pos: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    if basis.forms.iter().any(|f| f.len() != n) {
        return Err(Error::RankMismatch(n, basis.forms.first().map_or(0, |f| f.len())));
    }
    // columns of M are the basis forms; pick k independent rows
    let mt: QMat = basis.forms.iter().map(|f| pos.iter().map(|&(i, j)| f[i][j].clone()).collect()).collect();
    let (_, rows) = qmat::rref(&mt);
    if rows.len() != k {
        return Err(Error::RankDeficient { expected: k, found: rows.len() });
    }
    let a: BMat = rows
        .iter()
        .map(|&r| (0..k).map(|c| BigReal::from_rational(&mt[c][r], prec)).collect())
        .collect();
    let b: BMat = rows.iter().map(|&r| vec![form.get(pos[r].0, pos[r].1).clone()]).collect();
    let t: Vec<BigReal> = bmat::solve(&a, &b, prec)?.into_iter().map(|mut r| r.remove(0)).collect();
    for (r, &(i, j)) in pos.iter().enumerate() {
        let mut val = BigReal::zero(prec);
        for (c, tc) in t.iter().enumerate() {
            val = &val + &tc.mul_rational(&mt[c][r]);
        }
        if !val.overlaps(form.get(i, j)) {
            return Err(Error::InvarianceViolated(format!("entry ({i}, {j}) outside the invariant span")));
        }
    }
    Ok(t)
}

/// Genericity probe on the `Sym^G` coordinates of a Gram form computed at
/// any precision.
pub fn genericity_probe<F>(t: &GroupTable, form: F, d: u32, coeff_bound: &Integer, prec: u32) -> Result<ProbeReport>
where
    F: Fn(u32) -> Result<GramMatrix>,
{
    let basis = sym_g_space(t)?;
    genericity_probe_with(|p| sym_g_coordinates(&form(p)?, &basis, p), d, coeff_bound, prec)
}

fn monomial_label(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("y{i}") } else { format!("y{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug)]
pub struct Implication {
    pub name: &'static str,
    pub antecedent: Option<bool>,
    pub consequent: Option<bool>,
    /// Depends on an unproved transcendence hypothesis.
    pub conditional: bool,
}

impl Implication {
    pub fn status(&self) -> &'static str {
        match (self.antecedent, self.consequent) {
            (Some(true), Some(false)) if self.conditional => "COUNTEREXAMPLE-CANDIDATE",
            (Some(true), Some(false)) => "VIOLATED",
            (Some(true), Some(true)) => "CONSISTENT",
            (Some(false), _) => "VACUOUS",
            _ => "UNDECIDED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub labels: (String, String),
    pub provenance: (String, String),
    pub regulators: (BigReal, BigReal),
    /// Balls overlap; then `equal_bits` bounds how far they agree.
    pub regulators_overlap: bool,
    pub equal_bits: Option<u32>,
    pub probe: Option<ProbeReport>,
    pub class_numbers: (Option<u64>, Option<u64>),
    /// `None` when no group data allows a decision.
    pub gassmann: Option<GassmannResult>,
    pub gassmann_note: String,
    /// Minima after scaling both lattices to determinant 1.
    pub minima: (BigReal, BigReal),
    pub minima_separated: bool,
    pub isometry: IsometryVerdict,
    pub similarity: crate::lattice::SimilarityResult,
    pub implications: Vec<Implication>,
}

/// Scales a Gram matrix to determinant 1.
pub fn normalize_covolume(g: &GramMatrix) -> Result<GramMatrix> {
    let n = g.rank();
    if n == 0 {
        return Ok(g.clone());
    }
    let s = g.det()?.root(n as u32)?.recip()?;
    Ok(g.scale(&s))
}

fn agreement_bits(a: &BigReal, b: &BigReal) -> Option<u32> {
    if !a.overlaps(b) {
        return None;
    }
    let d = (a - b).mag();
    if d.is_zero() {
        return Some(a.prec());
    }
    let e = d.get_exp().unwrap_or(0);
    Some(if e < 0 { (-e) as u32 } else { 0 })
}

fn gassmann_for(a: &FieldBundle, b: &FieldBundle) -> Result<(Option<GassmannResult>, String)> {
    let (ga, gb) = (a.galois_closure.as_ref(), b.galois_closure.as_ref());
    if let (Some(ca), Some(cb)) = (ga, gb) {
        if ca.group.generators == cb.group.generators && ca.group.degree == cb.group.degree {
            if let (Some(ha), Some(hb)) = (&ca.field_subgroup, &cb.field_subgroup) {
                let g = a.group()?.expect("closure present");
                let h1 = a.subgroup_generators(ha)?;
                let h2 = b.subgroup_generators(hb)?;
                let r = gassmann_equivalent(&g, &h1, &h2)?;
                return Ok((Some(r), format!("closure group data, subgroups {ha} and {hb}")));
            }
        }
    }
    let pa = a.polynomial()?;
    let pb = b.polynomial()?;
    let da = a.discriminant()?;
    let db = b.discriminant()?;
    if pa.degree() != pb.degree() {
        return Ok((Some(not_equivalent()), "degrees differ".into()));
    }
    if da != db {
        return Ok((Some(not_equivalent()), "discriminants differ".into()));
    }
    if pa == pb {
        let t = GassmannResult { equivalent: true, conjugate: true, counts: (vec![], vec![]) };
        return Ok((Some(t), "same defining polynomial".into()));
    }
    Ok((None, "no shared closure group data".into()))
}

fn not_equivalent() -> GassmannResult {
    GassmannResult { equivalent: false, conjugate: false, counts: (vec![], vec![]) }
}

pub fn pair_report(a: &FieldBundle, b: &FieldBundle, prec: u32) -> Result<PairReport> {
    let (ka, la, ra) = bundle_regulator(a, prec)?;
    let (kb, lb, rb) = bundle_regulator(b, prec)?;
    if !ka.is_totally_real() || !kb.is_totally_real() {
        return Err(Error::NotTotallyReal);
    }
    let regulators_overlap = ra.overlaps(&rb);
    let equal_bits = agreement_bits(&ra, &rb);
    let labels = vec![format!("reg[a:{}]", a.label), format!("reg[b:{}]", b.label)];
    let probe = probe_with(
        labels,
        |p| Ok(vec![bundle_regulator(a, p)?.2, bundle_regulator(b, p)?.2]),
        &Integer::from(DEFAULT_COEFF_BOUND),
        prec,
    )
    .ok();
    let (gassmann, gassmann_note) = gassmann_for(a, b)?;
    let tol = crate::lattice::isometry::default_tol(prec);
    let (isometry, similarity, minima, minima_separated) = if la.rank() == lb.rank() {
        let na = normalize_covolume(&la.gram)?;
        let nb = normalize_covolume(&lb.gram)?;
        let ma = if na.rank() > 0 { shortest_vectors(&na, 64)?.minimum } else { BigReal::zero(prec) };
        let mb = if nb.rank() > 0 { shortest_vectors(&nb, 64)?.minimum } else { BigReal::zero(prec) };
        let sep = crate::lattice::isometry::separated(&ma, &mb, &tol);
        (isometry_test(&la.gram, &lb.gram, &tol)?, similarity_test(&la.gram, &lb.gram, &tol)?, (ma, mb), sep)
    } else {
        return Err(Error::RankMismatch(la.rank(), lb.rank()));
    };
    let regs_equal = if regulators_overlap {
        probe.as_ref().map(|p| p.verdict == Verdict::Found && p.relation().is_some_and(|r| r[0] == -r[1].clone()))
    } else {
        Some(false)
    };
    let hreg_equal = match (a.class_number, b.class_number) {
        (Some(ha), Some(hb)) => {
            let x = ra.mul_i64(ha as i64);
            let y = rb.mul_i64(hb as i64);
            Some(x.overlaps(&y))
        }
        _ => None,
    };
    let equiv = gassmann.as_ref().map(|g| g.equivalent);
    let implications = vec![
        Implication {
            name: "isometric lattices => equal regulators",
            antecedent: Some(isometry.is_isometric()),
            consequent: regs_equal,
            conditional: false,
        },
        Implication {
            name: "arithmetically equivalent => equal h*reg",
            antecedent: equiv,
            consequent: hreg_equal,
            conditional: false,
        },
        Implication {
            name: "equal regulators => arithmetically equivalent",
            antecedent: regs_equal,
            consequent: equiv,
            conditional: true,
        },
    ];
    Ok(PairReport {
        labels: (a.label.clone(), b.label.clone()),
        provenance: (a.provenance.source.clone(), b.provenance.source.clone()),
        regulators: (ra, rb),
        regulators_overlap,
        equal_bits,
        probe,
        class_numbers: (a.class_number, b.class_number),
        gassmann,
        gassmann_note,
        minima,
        minima_separated,
        isometry,
        similarity,
        implications,
    })
}

/// `|x - y| < 2^-bits` certified.
pub fn agree_to(x: &BigReal, y: &BigReal, bits: u32) -> bool {
    (x - y).mag() < Float::with_val(64, Float::i_exp(1, -(bits as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5() -> FieldBundle {
        FieldBundle::from_json(
            r#"{"schema": "fieldbundle/v1", "label": "Q(sqrt5)", "poly": ["-1", "-1", "1"], "disc": "5",
            "class_number": 1, "torsion": 2, "units": [["0", "1"]], "provenance": {"source": "manual"}}"#,
        )
        .unwrap()
    }

    #[test]
    fn residue_sqrt5() {
        let r = residue_at_one(&sqrt5(), 128).unwrap();
        assert!((r.residue.to_f64() - 0.430408940964).abs() < 1e-11);
        assert_eq!(r.factor, 2);
        let mut b = sqrt5();
        b.class_number = None;
        assert!(matches!(residue_at_one(&b, 128), Err(Error::MissingClassNumber)));
    }

    #[test]
    fn log_relation() {
        let p = 256;
        let f = |n: i64| BigReal::from_i64(n, p).ln().unwrap();
        let vals = vec![("log2".to_string(), f(2)), ("log3".to_string(), f(3)), ("log6".to_string(), f(6))];
        let r = probe_with(
            vals.iter().map(|(l, _)| l.clone()).collect(),
            |q| Ok([2, 3, 6].iter().map(|&n| BigReal::from_i64(n, q).ln().unwrap()).collect()),
            &Integer::from(1000),
            p,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Found);
        assert_eq!(r.relation().unwrap(), [1, 1, -1]);
        assert!(relation_probe(&vals[..1], &Integer::from(10), p).is_err());
    }

    #[test]
    fn planted_genericity() {
        let f = |p: u32| Ok(vec![BigReal::pi(p), BigReal::pi(p).mul_i64(2)]);
        let r = genericity_probe_with(f, 1, &Integer::from(100), 256).unwrap();
        assert_eq!(r.verdict, Verdict::Found);
        assert_eq!(r.relation().unwrap(), [0, 2, -1]);
    }

    #[test]
    fn monomial_budget() {
        assert_eq!(monomials(2, 2).len(), 6);
        let f = |p: u32| Ok((1..=40).map(|i| BigReal::from_i64(i, p).ln().unwrap()).collect());
        assert!(matches!(
            genericity_probe_with(f, 2, &Integer::from(10), 128),
            Err(Error::CombinatorialBudgetExceeded(_))
        ));
    }

    #[test]
    fn self_pair() {
        let b = sqrt5();
        let r = pair_report(&b, &b, 128).unwrap();
        assert!(r.regulators_overlap);
        assert!(r.isometry.is_isometric());
        assert_eq!(r.gassmann.unwrap().equivalent, true);
        assert!(r.implications.iter().all(|i| i.status() != "VIOLATED"));
    }
}

//! Galois action on a totally real Galois field, its action on log vectors,
//! weak Minkowski units, the Gram form of a unit and the rational change of
//! basis to the log-unit lattice.
//!
//! Convention: `sigma_a` sends `theta` to `q_a(theta)`, and the embedding
//! `eps_i` composed with `sigma_a` is `eps_{pi_a(i)}`. Group elements act on
//! log vectors by `(a v)_i = v_{pi_a(i)}`, so `Log(sigma_a u) = a Log(u)`.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::field::{independent_subset, log_embed, log_lattice, FieldElement, LogLattice, NumberField, UnitSystem};
use crate::group::ring::{coords, norm_ideal_basis};
use crate::group::{GroupTable, PermModule};
use crate::lattice::{relation::integer_relation, GramMatrix, RelationTag};
use crate::numeric::ball::{self, BigReal};
use crate::numeric::bmat::{self, BMat};
use crate::numeric::complex::MpComplex;
use crate::numeric::qmat::{self, QMat};
use crate::numeric::ratrec::reconstruct_escalating;

pub const DEFAULT_DENOM_BOUND: i64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct GaloisAction {
    pub field: NumberField,
    /// `images[a] = q_a(theta)`; `q_a` sends `theta_0` to `theta_a`.
    pub images: Vec<FieldElement>,
    /// `perms[a][i] = pi_a(i)`.
    pub perms: Vec<Vec<usize>>,
    /// `table.mul(a, b)` is the index of `sigma_a sigma_b`.
    pub table: GroupTable,
}

fn relation_prec(n: usize, bound: &Integer, prec: u32) -> u32 {
    let bits = bound.significant_bits() + 2;
    prec.max(2 * ((n as u32 + 1) * bits + 64))
}

/// Tries to write `target` as `q(theta_0)` with `q` of degree below `n`.
fn find_image(k: &NumberField, target_idx: usize, bound: &Integer, prec: u32) -> Result<Option<FieldElement>> {
    let n = k.degree();
    let rp = relation_prec(n, bound, prec);
    let kp = k.at_prec(rp + 64)?;
    let roots = kp.real_roots();
    let theta = &roots[0];
    let mut vals = vec![roots[target_idx].clone(), BigReal::one(rp + 64)];
    for i in 1..n {
        vals.push(theta.pow_u(i as u32));
    }
    let rel = match integer_relation(&vals, bound, rp) {
        Ok(r) => r,
        Err(Error::InsufficientPrecision(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let r = match rel.tag {
        RelationTag::Found(r) => r,
        RelationTag::NoneBelow(_) => return Ok(None),
    };
    if r[0] == 0 {
        return Ok(None);
    }
    let c0 = Rational::from(r[0].clone());
    let coeffs: Vec<Rational> = r[1..].iter().map(|c| -Rational::from(c.clone()) / &c0).collect();
    let q = FieldElement::new(coeffs);
    // exact: p(q(x)) = 0 mod p
    if !k.poly().compose_mod(&q.to_poly(), k.poly()).is_zero() {
        return Ok(None);
    }
    if !q.to_poly().eval_ball(theta).overlaps(&roots[target_idx]) {
        return Ok(None);
    }
    Ok(Some(q))
}

/// Recovers `Gal(K/Q)` for a totally real Galois field.
pub fn recover_galois_action(k: &NumberField, prec: u32, denom_bound: &Integer) -> Result<GaloisAction> {
    if !k.is_totally_real() {
        return Err(Error::NotTotallyReal);
    }
    let n = k.degree();
    let bounds = [denom_bound.clone(), Integer::from(denom_bound * denom_bound)];
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let mut found = None;
        if j == 0 {
            found = Some(k.gen());
        } else {
            for b in &bounds {
                if let Some(q) = find_image(k, j, b, prec)? {
                    found = Some(q);
                    break;
                }
            }
        }
        match found {
            Some(q) => images.push(q),
            None => return Err(Error::NotGalois { found: images.len(), degree: n }),
        }
    }
    if n == 1 {
        return Ok(GaloisAction {
            field: k.clone(),
            images,
            perms: vec![vec![0]],
            table: GroupTable::new(vec![vec![0]]),
        });
    }
    let kp = k.at_prec(prec + 64)?;
    let roots = kp.real_roots();
    let mut perms = Vec::with_capacity(n);
    for q in &images {
        let qp = q.to_poly();
        let mut pi = Vec::with_capacity(n);
        for r in &roots {
            let x = qp.eval_ball(r);
            pi.push(kp.match_real_root(&x).ok_or_else(|| Error::BallTooWide("root matching ambiguous".into()))?);
        }
        perms.push(pi);
    }
    // sigma_a sigma_b has pi = pi_b o pi_a and sends theta_0 to pi_b(a)
    let mut mul = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let c = perms[b][a];
            let composed: Vec<usize> = (0..n).map(|i| perms[b][perms[a][i]]).collect();
            if composed != perms[c] {
                return Err(Error::InvarianceViolated("permutations do not compose".into()));
            }
            let qc = images[b].to_poly().compose_mod(&images[a].to_poly(), k.poly());
            if qc != images[c].to_poly() {
                return Err(Error::InvarianceViolated("automorphisms do not compose".into()));
            }
            mul[a][b] = c;
        }
    }
    Ok(GaloisAction { field: k.clone(), images, perms, table: GroupTable::new(mul) })
}

impl GaloisAction {
    pub fn order(&self) -> usize {
        self.images.len()
    }

    /// `sigma_a(u)`.
    pub fn apply(&self, a: usize, u: &FieldElement) -> FieldElement {
        self.field.substitute(u, &self.images[a])
    }

    /// `a v`.
    pub fn act_log(&self, a: usize, v: &[BigReal]) -> Vec<BigReal> {
        self.perms[a].iter().map(|&i| v[i].clone()).collect()
    }

    /// `mu v` for `mu` in `Q[G]`.
    pub fn act_ring(&self, mu: &[Rational], v: &[BigReal], prec: u32) -> Vec<BigReal> {
        let mut out = vec![BigReal::zero(prec); v.len()];
        for (g, c) in mu.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.act_log(g, v)) {
                *o = &*o + &x.mul_rational(c);
            }
        }
        out
    }

    /// `alpha v` for `alpha` given by standard coordinates in `R_Q`.
    pub fn act_coords(&self, c: &[Rational], v: &[BigReal], prec: u32) -> Vec<BigReal> {
        let mut mu = c.to_vec();
        mu.push(Rational::new());
        self.act_ring(&mu, v, prec)
    }

    /// The log space as a permutation module with reference vector `v`.
    pub fn module(&self, v: &[BigReal], prec: u32) -> PermModule {
        PermModule {
            perms: self.perms.clone(),
            w: v.iter().map(|x| MpComplex::from_real(Float::with_val(prec, x.mid()))).collect(),
        }
    }

    /// Elements fixing the embeddings in `points`, given as a subgroup of
    /// permutations of `1..=n` in cycle notation.
    pub fn subgroup_from_perms(&self, perms: &[Vec<usize>]) -> Result<Vec<usize>> {
        let gens: Result<Vec<usize>> = perms
            .iter()
            .map(|p| {
                self.perms
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| Error::Invalid("permutation is not a Galois automorphism".into()))
            })
            .collect();
        Ok(self.table.subgroup(&gens?))
    }
}

fn rank_of(vectors: &[Vec<BigReal>], prec: u32) -> Result<usize> {
    independent_subset(vectors, prec)
        .map(|s| s.len())
        .ok_or_else(|| Error::PrecisionExhausted("rank undecided".into()))
}

/// `(is weak Minkowski, dim span {Log(g u)})`.
pub fn weak_minkowski_check(
    k: &NumberField,
    action: &GaloisAction,
    u: &FieldElement,
    prec: u32,
) -> Result<(bool, usize)> {
    if !k.is_unit(u) {
        return Err(Error::NotAUnit(format!("{u}")));
    }
    let mut p = prec;
    for _ in 0..4 {
        let v = log_embed(k, u, p)?;
        let orbit: Vec<Vec<BigReal>> = (0..action.order()).map(|g| action.act_log(g, &v)).collect();
        match rank_of(&orbit, p) {
            Ok(r) => return Ok((r == k.degree() - 1, r)),
            Err(_) => p *= 2,
        }
    }
    Err(Error::PrecisionExhausted("weak Minkowski rank undecided".into()))
}

/// Nonzero exponent vectors in `[-effort, effort]^k`, by max-norm.
fn exponent_vectors(k: usize, effort: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for m in 1..=effort {
        let side = (2 * m + 1) as usize;
        let total = side.pow(k as u32);
        for idx in 0..total {
            let mut r = idx;
            let e: Vec<i64> = (0..k)
                .map(|_| {
                    let d = (r % side) as i64 - m;
                    r /= side;
                    d
                })
                .collect();
            if e.iter().any(|x| x.abs() == m) {
                out.push(e);
            }
        }
    }
    out
}

/// Searches products `prod u_i^{e_i}` with `|e_i| <= effort` (then the
/// same over the units and their conjugates with exponents in `-1..=1`)
/// for a weak Minkowski unit.
pub fn weak_minkowski_search(
    k: &NumberField,
    action: &GaloisAction,
    units: &UnitSystem,
    effort: i64,
    prec: u32,
) -> Result<FieldElement> {
    let lat = log_lattice(k, units, prec)?;
    if lat.rank() != k.unit_rank() {
        return Err(Error::RankDeficient { expected: k.unit_rank(), found: lat.rank() });
    }
    let base: Vec<Vec<BigReal>> = units.units.iter().map(|u| log_embed(k, u, prec)).collect::<Result<_>>()?;
    let mut tried = 0usize;
    let try_set = |base_logs: &[Vec<BigReal>], els: &[FieldElement], eff: i64, tried: &mut usize| -> Result<Option<FieldElement>> {
        for e in exponent_vectors(els.len(), eff) {
            *tried += 1;
            let mut v = vec![BigReal::zero(prec); k.r_plus_s()];
            for (c, l) in e.iter().zip(base_logs) {
                for (vi, li) in v.iter_mut().zip(l) {
                    *vi = &*vi + &li.mul_i64(*c);
                }
            }
            let orbit: Vec<Vec<BigReal>> = (0..action.order()).map(|g| action.act_log(g, &v)).collect();
            if let Some(s) = independent_subset(&orbit, prec) {
                if s.len() == k.degree() - 1 {
                    let mut u = k.one();
                    for (c, x) in e.iter().zip(els) {
                        u = k.mul(&u, &k.pow(x, *c)?);
                    }
                    if weak_minkowski_check(k, action, &u, prec)?.0 {
                        return Ok(Some(u));
                    }
                }
            }
        }
        Ok(None)
    };
    if let Some(u) = try_set(&base, &units.units, effort, &mut tried)? {
        return Ok(u);
    }
    let mut els = Vec::new();
    let mut logs = Vec::new();
    for (u, l) in units.units.iter().zip(&base) {
        for g in 0..action.order() {
            els.push(action.apply(g, u));
            logs.push(action.act_log(g, l));
        }
    }
    if els.len() <= 12 {
        if let Some(u) = try_set(&logs, &els, 1, &mut tried)? {
            return Ok(u);
        }
    }
    Err(Error::SearchExhausted(tried))
}

impl NumberField {
    pub fn r_plus_s(&self) -> usize {
        let (r, s) = self.signature();
        r + s
    }
}

/// The form `(<alpha v, beta v>)` over the standard basis of `R_Q`.
#[derive(Clone, Debug)]
pub struct GramForm {
    pub matrix: GramMatrix,
    /// Group elements whose images form the basis.
    pub basis: Vec<usize>,
    /// `alpha v` for each basis element.
    pub vectors: BMat,
    pub v: Vec<BigReal>,
}

pub fn gram_form(action: &GaloisAction, v: &[BigReal], prec: u32) -> Result<GramForm> {
    let n = action.order();
    let basis: Vec<usize> = (0..n - 1).collect();
    let vectors: BMat = basis.iter().map(|&g| action.act_log(g, v)).collect();
    let rank = rank_of(&vectors, prec)?;
    if rank != n - 1 {
        return Err(Error::NotWeakMinkowski { rank, needed: n - 1 });
    }
    let matrix = GramMatrix::from_basis(&vectors, prec);
    // invariance on generators: <g a v, g b v> against <a v, b v>
    for g in action.table.generators() {
        for (i, &a) in basis.iter().enumerate() {
            for (j, &b) in basis.iter().enumerate() {
                let x = action.act_log(action.table.mul(g, a), v);
                let y = action.act_log(action.table.mul(g, b), v);
                let val = ball::dot(&x, &y, prec);
                if !val.overlaps(matrix.get(i, j)) {
                    return Err(Error::InvarianceViolated(format!("entry ({i}, {j}) under {g}")));
                }
            }
        }
    }
    Ok(GramForm { matrix, basis, vectors, v: v.to_vec() })
}

/// A unit of the fixed field of `H`, with the fixed field itself.
#[derive(Clone, Debug)]
pub struct SubfieldUnit {
    pub field: NumberField,
    /// Generator of the fixed field as an element of `K`.
    pub generator: FieldElement,
    /// The norm in the fixed field's power basis.
    pub element: FieldElement,
    /// The norm as an element of `K`.
    pub in_k: FieldElement,
    pub weak_minkowski: bool,
    pub rank: usize,
}

/// `prod_{h in H} h(u)` in the fixed field of the normal subgroup `H`.
pub fn norm_to_subfield(action: &GaloisAction, h: &[usize], u: &FieldElement, prec: u32) -> Result<SubfieldUnit> {
    let t = &action.table;
    if !t.is_subgroup(h) {
        return Err(Error::Invalid("not a subgroup".into()));
    }
    if !t.is_normal(h) {
        return Err(Error::NotNormal);
    }
    let k = &action.field;
    let n = k.degree();
    let d = n / h.len();
    let mut w = k.one();
    for &x in h {
        w = k.mul(&w, &action.apply(x, u));
    }
    let th = k.gen();
    for e in 1..=2 * n as i64 {
        let pw = k.pow(&th, e)?;
        let gamma = h.iter().fold(k.zero(), |s, &x| k.add(&s, &action.apply(x, &pw)));
        let mp = k.minpoly(&gamma);
        if mp.degree() != Some(d) {
            continue;
        }
        let mut rows: QMat = Vec::with_capacity(d);
        let mut cur = k.one();
        for _ in 0..d {
            rows.push(cur.coords().to_vec());
            cur = k.mul(&cur, &gamma);
        }
        let c = match qmat::express_in_rows(&rows, w.coords()) {
            Some(c) => c,
            None => return Err(Error::FixedFieldConstructionFailed("norm not in the fixed field".into())),
        };
        let field = NumberField::build(&mp, prec)?;
        let element = FieldElement::new(c);
        let sub_action = recover_galois_action(&field, prec, &Integer::from(DEFAULT_DENOM_BOUND))?;
        let (wm, rank) = weak_minkowski_check(&field, &sub_action, &element, prec)?;
        return Ok(SubfieldUnit { field, generator: gamma, element, in_k: w, weak_minkowski: wm, rank });
    }
    Err(Error::FixedFieldConstructionFailed(format!("no power of theta up to {} gives degree {d}", 2 * n)))
}

/// `{alpha v}` for `alpha` running over a rational basis of `N_H R_Q`.
pub fn subfield_log_basis(action: &GaloisAction, h: &[usize], v: &[BigReal], prec: u32) -> Result<Vec<Vec<BigReal>>> {
    let b = norm_ideal_basis(&action.table, h);
    let out: Vec<Vec<BigReal>> = b.iter().map(|c| action.act_coords(c, v, prec)).collect();
    let want = action.order() / h.len() - 1;
    let rank = rank_of(&out, prec)?;
    if rank != want || out.len() != want {
        return Err(Error::NotWeakMinkowski { rank, needed: want });
    }
    Ok(out)
}

/// Standard coordinates of `N_H g` for every `g`, before row reduction.
pub fn norm_ideal_spanning(action: &GaloisAction, h: &[usize]) -> QMat {
    let t = &action.table;
    (0..t.order())
        .map(|g| {
            let mut v = vec![Rational::new(); t.order()];
            for &x in h {
                v[t.mul(x, g)] += 1;
            }
            coords(&v)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// `A` with `A Gr_v A^T = b_K`.
    pub a: QMat,
    pub residual: Float,
}

/// Rational `A` with `A Gr_v A^T` equal to the lattice Gram matrix.
pub fn change_of_basis_certificate(
    lattice: &LogLattice,
    form: &GramForm,
    denom_bound: &Integer,
    prec: u32,
) -> Result<Certificate> {
    let m = lattice.rank();
    let k = form.vectors.len();
    if m != k {
        return Err(Error::RankMismatch(m, k));
    }
    if m == 0 {
        return Ok(Certificate { a: Vec::new(), residual: Float::new(64) });
    }
    let wp = prec.max(lattice.prec).max(form.matrix.prec());
    let c: BMat = lattice
        .basis
        .iter()
        .map(|b| form.vectors.iter().map(|w| ball::dot(b, w, wp)).collect())
        .collect();
    // Gr A^T = C^T
    let at = bmat::solve(form.matrix.entries(), &bmat::transpose(&c), wp)?;
    let bounds = [denom_bound.clone(), Integer::from(denom_bound * denom_bound)];
    let mut a = vec![vec![Rational::new(); k]; m];
    for j in 0..k {
        for i in 0..m {
            a[i][j] = reconstruct_escalating(&at[j][i], &bounds)?
                .ok_or_else(|| Error::ReconstructionFailed(format!("entry ({i}, {j}) at bound {denom_bound}")))?;
        }
    }
    if qmat::det(&a) == 0 {
        return Err(Error::ReconstructionFailed("singular change of basis".into()));
    }
    let ab: BMat = a.iter().map(|r| r.iter().map(|x| BigReal::from_rational(x, wp)).collect()).collect();
    let prod = bmat::mul(&bmat::mul(&ab, form.matrix.entries(), wp), &bmat::transpose(&ab), wp);
    let mut residual = Float::new(64);
    for i in 0..m {
        for j in 0..m {
            let d = (&prod[i][j] - lattice.gram.get(i, j)).mag();
            if d > residual {
                residual = Float::with_val(64, &d);
            }
        }
    }
    let tol = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    if residual >= tol {
        return Err(Error::ResidualTooLarge(format!("{}", residual.to_f64())));
    }
    Ok(Certificate { a, residual })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn action(c: &[i64]) -> GaloisAction {
        let k = NumberField::from_i64(c, 128).unwrap();
        recover_galois_action(&k, 128, &Integer::from(DEFAULT_DENOM_BOUND)).unwrap()
    }

    #[test]
    fn quadratic() {
        let a = action(&[-2, 0, 1]);
        assert_eq!(a.order(), 2);
        assert_eq!(a.images[1], FieldElement::from_i64(&[0, -1]));
    }

    #[test]
    fn cyclic_cubic() {
        let a = action(&[-1, -2, 1, 1]);
        assert_eq!(a.order(), 3);
        let t2 = FieldElement::from_i64(&[-2, 0, 1]);
        assert!(a.images.contains(&t2));
        assert_eq!(a.table.exponent(), 3);
    }

    #[test]
    fn biquadratic() {
        let a = action(&[1, 0, -10, 0, 1]);
        assert_eq!(a.order(), 4);
        assert_eq!(a.table.exponent(), 2);
    }

    #[test]
    fn non_galois() {
        let k = NumberField::from_i64(&[-4, 0, -4, 0, 1], 128);
        // x^4 - 4x^2 - 4 has two real roots
        let k = k.unwrap();
        assert!(matches!(
            recover_galois_action(&k, 128, &Integer::from(1000)),
            Err(Error::NotTotallyReal)
        ));
        let c = NumberField::from_i64(&[-1, -4, 0, 1], 128).unwrap();
        assert!(matches!(
            recover_galois_action(&c, 128, &Integer::from(1000)),
            Err(Error::NotGalois { .. })
        ));
    }

    #[test]
    fn weak_minkowski() {
        let a = action(&[-1, -2, 1, 1]);
        let k = a.field.clone();
        let th = k.gen();
        assert_eq!(weak_minkowski_check(&k, &a, &th, 128).unwrap(), (true, 2));
        let m1 = FieldElement::from_i64(&[-1, 0, 0]);
        assert_eq!(weak_minkowski_check(&k, &a, &m1, 128).unwrap(), (false, 0));
    }

    #[test]
    fn exponent_order() {
        let e = exponent_vectors(2, 1);
        assert_eq!(e.len(), 8);
        assert!(e.iter().all(|v| v.iter().any(|x| *x != 0)));
    }

    fn biquad() -> (GaloisAction, UnitSystem) {
        let a = action(&[1, 0, -10, 0, 1]);
        let units = [["5/4", "9/4", "-1/4", "-1/4"], ["1", "-9/2", "0", "1/2"], ["0", "1", "0", "0"]]
            .iter()
            .map(|c| FieldElement::parse(c).unwrap())
            .collect();
        (a, UnitSystem::new(units, "test"))
    }

    #[test]
    fn quadratic_gram_form() {
        let a = action(&[-2, 0, 1]);
        let k = a.field.clone();
        let u = FieldElement::from_i64(&[1, 1]);
        let v = log_embed(&k, &u, 128).unwrap();
        let f = gram_form(&a, &v, 128).unwrap();
        let l = Float::with_val(128, 1).asinh();
        let want = Float::with_val(128, &l * &l) * 2;
        let got = f.matrix.get(0, 0).mid().clone();
        assert!(Float::with_val(128, got - want).abs() < ball::pow2(-110, 64));
        let lat = log_lattice(&k, &UnitSystem::new(vec![u], "t"), 128).unwrap();
        let c = change_of_basis_certificate(&lat, &f, &Integer::from(1000), 128).unwrap();
        assert_eq!(c.a, qmat::identity(1));
    }

    #[test]
    fn cubic_certificate() {
        let a = action(&[-1, -2, 1, 1]);
        let k = a.field.clone();
        let units = UnitSystem::new(vec![FieldElement::from_i64(&[0, 1, 0]), FieldElement::from_i64(&[1, 1, 0])], "t");
        let u = weak_minkowski_search(&k, &a, &units, 2, 256).unwrap();
        assert!(weak_minkowski_check(&k, &a, &u, 256).unwrap().0);
        let v = log_embed(&k, &u, 256).unwrap();
        let f = gram_form(&a, &v, 256).unwrap();
        assert!(f.matrix.is_positive_definite());
        let lat = log_lattice(&k, &units, 256).unwrap();
        let c = change_of_basis_certificate(&lat, &f, &Integer::from(DEFAULT_DENOM_BOUND), 256).unwrap();
        assert_eq!(c.a.len(), 2);
        assert!(c.residual < ball::pow2(-100, 64));
    }

    #[test]
    fn rank_deficient_search() {
        let a = action(&[-1, -2, 1, 1]);
        let k = a.field.clone();
        let units = UnitSystem::new(vec![FieldElement::from_i64(&[0, 1, 0])], "t");
        assert!(matches!(
            weak_minkowski_search(&k, &a, &units, 1, 128),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn biquadratic_subfields() {
        let (a, units) = biquad();
        let k = a.field.clone();
        let u = weak_minkowski_search(&k, &a, &units, 2, 128).unwrap();
        let v = log_embed(&k, &u, 128).unwrap();
        assert_eq!(subfield_log_basis(&a, &[0], &v, 128).unwrap().len(), 3);
        assert!(subfield_log_basis(&a, &[0, 1, 2, 3], &v, 128).unwrap().is_empty());
        for x in 1..4 {
            let h = a.table.subgroup(&[x]);
            assert_eq!(subfield_log_basis(&a, &h, &v, 128).unwrap().len(), 1);
            let s = norm_to_subfield(&a, &h, &u, 128).unwrap();
            assert_eq!(s.field.degree(), 2);
            assert!(s.weak_minkowski);
        }
        let full = norm_to_subfield(&a, &[0, 1, 2, 3], &u, 128);
        assert!(full.is_err() || full.unwrap().field.degree() == 1);
        let id = norm_to_subfield(&a, &[0], &u, 128).unwrap();
        assert_eq!(id.in_k, u);
    }
}

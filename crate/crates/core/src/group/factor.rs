//! Factorization `eta = nu bar(nu)` in `R_C[G]` and the solver for vectors
//! with a prescribed Gram form.

use rug::Float;

use super::{CharacterTable, GroupTable};
use crate::error::{Error, Result};
use crate::numeric::ball::BigReal;
use crate::numeric::cmat::{self, CMat};
use crate::numeric::complex::{BigComplex, MpComplex};

/// Complex group-ring element, one coefficient per group element.
pub type CVec = Vec<MpComplex>;

fn czero(n: usize, prec: u32) -> CVec {
    vec![MpComplex::zero(prec); n]
}

pub fn cmul(t: &GroupTable, a: &[MpComplex], b: &[MpComplex], prec: u32) -> CVec {
    let mut out = czero(t.order(), prec);
    for (x, ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            let k = t.mul(x, y);
            out[k] = &out[k] + &(ax * by);
        }
    }
    out
}

pub fn cbar(t: &GroupTable, a: &[MpComplex]) -> CVec {
    let mut out = a.to_vec();
    for (x, ax) in a.iter().enumerate() {
        out[t.inv(x)] = ax.clone();
    }
    out
}

pub fn cmean_zero(a: &[MpComplex]) -> CVec {
    let p = a[0].prec();
    let n = Float::with_val(p, a.len() as u32);
    let s = a.iter().fold(MpComplex::zero(p), |s, x| &s + x);
    let mean = MpComplex::new(Float::with_val(p, &s.re / &n), Float::with_val(p, &s.im / &n));
    a.iter().map(|x| x - &mean).collect()
}

fn add(a: &[MpComplex], b: &[MpComplex]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[MpComplex], b: &[MpComplex]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[MpComplex], s: &MpComplex) -> CVec {
    a.iter().map(|x| x * s).collect()
}

fn sup_norm(a: &[MpComplex]) -> Float {
    let p = a[0].prec();
    a.iter().map(|x| x.abs()).fold(Float::new(p), |m, v| if v > m { v } else { m })
}

/// `x` with `(w + 1 - e) x = e`, the inverse of `w` inside the block `e`.
fn block_inverse(t: &GroupTable, w: &[MpComplex], e: &[MpComplex], prec: u32) -> Option<CVec> {
    let n = t.order();
    let mut one = czero(n, prec);
    one[0] = MpComplex::one(prec);
    let shifted = add(w, &sub(&one, e));
    // (a b)_z = sum_y a_{z y^{-1}} b_y
    let l: CMat = (0..n)
        .map(|z| (0..n).map(|y| shifted[t.mul(z, t.inv(y))].clone()).collect())
        .collect();
    cmat::solve(&l, e, prec)
}

/// Principal square root of `a` inside the block `e` by Denman-Beavers.
fn block_sqrt(t: &GroupTable, a: &[MpComplex], e: &[MpComplex], prec: u32) -> Option<CVec> {
    let half = Float::with_val(prec, 0.5);
    let mut y = a.to_vec();
    let mut z = e.to_vec();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 24));
    for _ in 0..200 {
        let yi = block_inverse(t, &y, e, prec)?;
        let zi = block_inverse(t, &z, e, prec)?;
        let y2: CVec = add(&y, &zi).iter().map(|v| v.scale(&half)).collect();
        let z2: CVec = add(&z, &yi).iter().map(|v| v.scale(&half)).collect();
        let delta = sup_norm(&sub(&y2, &y));
        y = y2;
        z = z2;
        if delta < tol {
            return Some(y);
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct NuFactor {
    pub nu: CVec,
    /// Certified upper bound on `|nu bar(nu) - eta|_inf`.
    pub residual: Float,
}

/// Certified sup-norm of `a b - c` on mean-zero representatives.
fn ball_residual(t: &GroupTable, a: &[MpComplex], b: &[MpComplex], c: &[MpComplex]) -> Float {
    let p = a[0].prec();
    let n = t.order();
    let ab: Vec<BigComplex> = a.iter().map(BigComplex::from_mp).collect();
    let bb: Vec<BigComplex> = b.iter().map(BigComplex::from_mp).collect();
    let mut prod = vec![BigComplex::zero(p); n];
    for x in 0..n {
        for y in 0..n {
            let k = t.mul(x, y);
            prod[k] = &prod[k] + &(&ab[x] * &bb[y]);
        }
    }
    // subtract means, then compare
    let inv_n = rug::Rational::from((1, n as i64));
    let mean_of = |v: &[BigComplex]| -> BigComplex {
        let s = v.iter().fold(BigComplex::zero(p), |s, x| &s + x);
        BigComplex::new(s.re.mul_rational(&inv_n), s.im.mul_rational(&inv_n))
    };
    let cb: Vec<BigComplex> = c.iter().map(BigComplex::from_mp).collect();
    let mp = mean_of(&prod);
    let mc = mean_of(&cb);
    let mut worst = Float::new(64);
    for k in 0..n {
        let d = &(&prod[k] - &mp) - &(&cb[k] - &mc);
        let m = Float::with_val(64, d.re.mag() + d.im.mag());
        if m > worst {
            worst = m;
        }
    }
    worst
}

/// `nu` with `nu bar(nu) = eta` in `R_C`, for `eta = bar(eta)` invertible.
pub fn factor_nu(t: &GroupTable, eta: &[MpComplex], prec: u32) -> Result<NuFactor> {
    let wp = prec + 64;
    let ct = CharacterTable::new(t, wp)?;
    factor_nu_with(t, &ct, eta, prec)
}

pub(crate) fn factor_nu_with(t: &GroupTable, ct: &CharacterTable, eta: &[MpComplex], prec: u32) -> Result<NuFactor> {
    let n = t.order();
    if eta.len() != n {
        return Err(Error::Invalid(format!("eta has {} coefficients, group order {n}", eta.len())));
    }
    let wp = prec + 64;
    let eta = cmean_zero(&eta.iter().map(|x| x.with_prec(wp)).collect::<Vec<_>>());
    let tol = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    let asym = sup_norm(&sub(&cbar(t, &eta), &eta));
    if asym >= tol {
        return Err(Error::InvarianceViolated(format!("eta differs from its bar by {}", asym.to_f64())));
    }
    let mut nu = czero(n, wp);
    let mut done = vec![false; ct.len()];
    done[0] = true;
    let angles = [0.0, 0.5, -0.5, 1.0, 0.25, -0.25, 0.75, -0.75];
    for chi in 1..ct.len() {
        if done[chi] {
            continue;
        }
        let e = ct.central_idempotent(chi, wp);
        let block = cmul(t, &eta, &e, wp);
        let cc = ct.conjugate(chi);
        if cc != chi {
            let ebar = ct.central_idempotent(cc, wp);
            let partner = cmul(t, &eta, &ebar, wp);
            if block_inverse(t, &block, &e, wp).is_none() || block_inverse(t, &partner, &ebar, wp).is_none() {
                return Err(Error::SingularBlock(chi));
            }
            nu = add(&add(&nu, &block), &ebar);
            done[chi] = true;
            done[cc] = true;
            continue;
        }
        if block_inverse(t, &block, &e, wp).is_none() {
            return Err(Error::SingularBlock(chi));
        }
        let pi = Float::with_val(wp, rug::float::Constant::Pi);
        let mut root = None;
        for &a in &angles {
            let theta = Float::with_val(wp, &pi * a);
            let rot = MpComplex::new(Float::with_val(wp, theta.cos_ref()), -Float::with_val(wp, theta.sin_ref()));
            let half = Float::with_val(wp, &theta / 2u32);
            let back = MpComplex::new(Float::with_val(wp, half.cos_ref()), Float::with_val(wp, half.sin_ref()));
            if let Some(s) = block_sqrt(t, &scale(&block, &rot), &e, wp) {
                let cand = scale(&s, &back);
                let check = sub(&cmul(t, &cand, &cand, wp), &block);
                if sup_norm(&check) < Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 16)) {
                    root = Some(cand);
                    break;
                }
            }
        }
        let r = root.ok_or(Error::SingularBlock(chi))?;
        nu = add(&nu, &r);
        done[chi] = true;
    }
    let residual = ball_residual(t, &nu, &cbar(t, &nu), &eta);
    if residual >= tol {
        return Err(Error::ResidualTooLarge(format!("{}", residual.to_f64())));
    }
    Ok(NuFactor { nu: nu.iter().map(|x| x.with_prec(wp)).collect(), residual })
}

/// A permutation module: `(g v)_i = v_{perm[g][i]}` with reference vector `w`.
#[derive(Clone, Debug)]
pub struct PermModule {
    pub perms: Vec<Vec<usize>>,
    pub w: CVec,
}

impl PermModule {
    /// The left regular module `C[G]`, `(g v)_x = v_{g^{-1} x}`.
    pub fn regular(t: &GroupTable, w: CVec) -> Self {
        let n = t.order();
        let perms = (0..n).map(|g| (0..n).map(|x| t.mul(t.inv(g), x)).collect()).collect();
        PermModule { perms, w }
    }

    pub fn act(&self, g: usize, v: &[MpComplex]) -> CVec {
        self.perms[g].iter().map(|&i| v[i].clone()).collect()
    }

    /// `mu v = sum_g mu_g (g v)`.
    pub fn act_ring(&self, mu: &[MpComplex], v: &[MpComplex], prec: u32) -> CVec {
        let mut out = czero(v.len(), prec);
        for (g, c) in mu.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let gv = self.act(g, v);
            for (o, x) in out.iter_mut().zip(&gv) {
                *o = &*o + &(c * x);
            }
        }
        out
    }
}

/// `(<g_i x, g_j x>)` over the standard basis, bilinear without conjugation.
pub fn gram_of_vector(t: &GroupTable, m: &PermModule, x: &[MpComplex], prec: u32) -> CMat {
    let k = t.order() - 1;
    let vs: Vec<CVec> = (0..k).map(|g| m.act(g, x)).collect();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| vs[i].iter().zip(&vs[j]).fold(MpComplex::zero(prec), |s, (a, b)| &s + &(a * b)))
                .collect()
        })
        .collect()
}

/// The `eta` with `Tr_eta = b`, read off the first row.
fn eta_of_form(t: &GroupTable, b: &CMat, prec: u32) -> CVec {
    let n = t.order();
    let inv_n = Float::with_val(prec, 1) / n as u32;
    let mut eta: CVec = b[0].iter().map(|x| x.with_prec(prec).scale(&inv_n)).collect();
    let s = eta.iter().fold(MpComplex::zero(prec), |s, x| &s + x);
    eta.push(-&s);
    eta
}

fn form_of_eta(t: &GroupTable, eta: &[MpComplex], prec: u32) -> CMat {
    let n = t.order();
    let eps = eta.iter().fold(MpComplex::zero(prec), |s, x| &s + x);
    let nf = Float::with_val(prec, n as u32);
    (0..n - 1)
        .map(|i| (0..n - 1).map(|j| &eta[t.mul(t.inv(i), j)].scale(&nf) - &eps).collect())
        .collect()
}

fn cmat_dist(a: &CMat, b: &CMat) -> Float {
    let mut worst = Float::new(64);
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            let d = Float::with_val(64, (x - y).abs());
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct Preimage {
    pub x: CVec,
    pub residual: Float,
}

/// A vector `x = nu'' nu'^{-1} w` whose Gram form is `b`.
pub fn solve_gram_preimage(t: &GroupTable, b: &CMat, module: &PermModule, prec: u32) -> Result<Preimage> {
    let n = t.order();
    if b.len() != n - 1 {
        return Err(Error::Invalid(format!("form has size {}, expected {}", b.len(), n - 1)));
    }
    let wp = prec + 64;
    let ct = CharacterTable::new(t, wp)?;
    let tol = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    let gw = gram_of_vector(t, module, &module.w, wp);
    let gamma = eta_of_form(t, &gw, wp);
    let scale_w = sup_norm(&gw.iter().flatten().cloned().collect::<Vec<_>>()).max(&Float::with_val(64, 1));
    if cmat_dist(&form_of_eta(t, &gamma, wp), &gw) > Float::with_val(64, &tol * &scale_w) {
        return Err(Error::Invalid("reference vector has a trivial component".into()));
    }
    let eta = eta_of_form(t, b, wp);
    let scale_b = sup_norm(&b.iter().flatten().cloned().collect::<Vec<_>>()).max(&Float::with_val(64, 1));
    if cmat_dist(&form_of_eta(t, &eta, wp), b) > Float::with_val(64, &tol * &scale_b) {
        return Err(Error::InvarianceViolated("form is not a G-invariant trace form".into()));
    }
    let nu1 = factor_nu_with(t, &ct, &gamma, prec)?.nu;
    let nu2 = factor_nu_with(t, &ct, &eta, prec)?.nu;
    // inverse of nu1 in R_C: solve inside the complement of the trivial block
    let mut e = czero(n, wp);
    let inv_n = Float::with_val(wp, 1) / n as u32;
    for (g, c) in e.iter_mut().enumerate() {
        *c = MpComplex::from_real(-inv_n.clone());
        if g == 0 {
            *c = &*c + &MpComplex::one(wp);
        }
    }
    let nu1_inv = block_inverse(t, &nu1, &e, wp).ok_or(Error::SingularBlock(0))?;
    let mu = cmul(t, &nu2, &nu1_inv, wp);
    let x = module.act_ring(&mu, &module.w, wp);
    let gx = gram_of_vector(t, module, &x, wp);
    let residual = cmat_dist(&gx, b);
    if residual >= Float::with_val(64, &tol * &scale_b) {
        return Err(Error::ResidualTooLarge(format!("{}", residual.to_f64())));
    }
    Ok(Preimage { x, residual })
}

/// Real ball vector from midpoints, for handing results to lattice code.
pub fn to_real_balls(x: &[MpComplex]) -> Vec<BigReal> {
    x.iter().map(|z| BigReal::exact(z.re.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::super::cyclic;
    use super::*;

    fn real(v: &[f64], p: u32) -> CVec {
        v.iter().map(|&x| MpComplex::from_f64(x, 0.0, p)).collect()
    }

    #[test]
    fn identity_factors_to_identity() {
        let t = cyclic(3);
        let p = 128;
        let one = real(&[1.0, 0.0, 0.0], p);
        let f = factor_nu(&t, &one, p).unwrap();
        let want = cmean_zero(&one.iter().map(|x| x.with_prec(p + 64)).collect::<Vec<_>>());
        let d = sup_norm(&sub(&cmean_zero(&f.nu), &want));
        assert!(d < 1e-30);
    }

    #[test]
    fn c2_scalar() {
        let t = cyclic(2);
        let p = 128;
        // eta = 9 on the sign block: 9 (1 - g) / 2
        let eta = real(&[4.5, -4.5], p);
        let f = factor_nu(&t, &eta, p).unwrap();
        let (a, _) = f.nu[0].to_f64();
        assert!((a - 1.5).abs() < 1e-12);
    }

    #[test]
    fn c2_preimage_doubles() {
        let t = cyclic(2);
        let p = 128;
        let s = 0.5f64.sqrt();
        let m = PermModule::regular(&t, real(&[s, -s], p));
        let b = vec![vec![MpComplex::from_f64(4.0, 0.0, p)]];
        let x = solve_gram_preimage(&t, &b, &m, p).unwrap().x;
        assert!((x[0].to_f64().0 - 2.0 * s).abs() < 1e-12);
        assert!((x[1].to_f64().0 + 2.0 * s).abs() < 1e-12);
    }
}

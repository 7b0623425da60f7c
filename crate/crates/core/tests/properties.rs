use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use logunit::bundle::FieldBundle;
use logunit::elimination::{desquare, sign_orbit_product, MultiPoly};
use logunit::field::{log_embed, NumberField};
use logunit::galois::{recover_galois_action, DEFAULT_DENOM_BOUND};
use logunit::group::{cyclic, direct_product, gassmann_equivalent, rational_idempotents, Perm, PermGroupData};
use logunit::lab::{probe_with, residue_at_one, Verdict};
use logunit::lattice::isometry::{default_tol, verify_witness};
use logunit::lattice::{isometry_test, similarity_test, GramMatrix};
use logunit::numeric::ball::{pow2, BigReal};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rug::{Float, Integer, Rational};

fn bundle(name: &str) -> FieldBundle {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "bundles", name].iter().collect();
    FieldBundle::load(p).unwrap()
}

fn random_perm(n: usize, rng: &mut StdRng) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm(v)
}

fn symmetric(n: usize) -> PermGroupData {
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    PermGroupData::new(n, vec![Perm((1..n).chain([0]).collect()), Perm(t)]).unwrap()
}

fn rationals() -> impl Strategy<Value = Rational> {
    (prop_oneof![-20i64..=-1, 1i64..=20], 1i64..=9).prop_map(|(p, q)| Rational::from((p, q)))
}

/// `prod_s (c_0 x_0 + sum s_i c_i x_i)` evaluated directly.
fn sign_product_at(c: &[Rational], x: &[Rational]) -> Rational {
    let n = c.len();
    let mut acc = Rational::from(1);
    for mask in 0..1u32 << (n - 1) {
        let mut f = Rational::from(&c[0] * &x[0]);
        for i in 1..n {
            let t = Rational::from(&c[i] * &x[i]);
            if mask >> (i - 1) & 1 == 1 {
                f -= t;
            } else {
                f += t;
            }
        }
        acc *= f;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_subgroups_are_equivalent(n in 4usize..=6, seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = symmetric(n);
        let h: Vec<Perm> = (0..k).map(|_| random_perm(n, &mut rng)).collect();
        let s = random_perm(n, &mut rng);
        let hc: Vec<Perm> = h.iter().map(|x| s.compose(x).compose(&s.inverse())).collect();
        let r = gassmann_equivalent(&g, &h, &hc).unwrap();
        prop_assert!(r.equivalent);
        prop_assert!(r.conjugate);
        prop_assert_eq!(&r.counts.0, &r.counts.1);
    }

    #[test]
    fn sign_orbit_product_properties(c in prop::collection::vec(rationals(), 2..=5), x in prop::collection::vec(rationals(), 5)) {
        let h = sign_orbit_product(&c).unwrap();
        for i in 0..c.len() {
            prop_assert_eq!(&h.flip_sign(i), &h);
        }
        prop_assert!(h.is_even());
        prop_assert_eq!(h.degree(), Some(1u32 << (c.len() - 1)));
        prop_assert_eq!(&desquare(&h).unwrap().square_substitute(), &h);
        let x = &x[..c.len()];
        prop_assert_eq!(h.eval_rational(x), sign_product_at(&c, x));
    }

    #[test]
    fn polynomial_display_parses_back(c in prop::collection::vec(rationals(), 2..=4)) {
        let h = sign_orbit_product(&c).unwrap();
        let back = MultiPoly::parse(&h.to_string(), Some(c.len())).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn abelian_idempotents(a in 1usize..=12, b in 1usize..=4) {
        prop_assume!(a * b <= 24);
        let t = direct_product(&cyclic(a), &cyclic(b));
        let es = rational_idempotents(&t).unwrap();
        let n = a * b;
        prop_assert_eq!(es.iter().map(|e| e.dim as usize).sum::<usize>(), n);
        // one idempotent per cyclic subgroup in an abelian group
        let cyc: BTreeSet<Vec<usize>> = (0..n).map(|x| { let mut s = t.subgroup(&[x]); s.sort(); s }).collect();
        prop_assert_eq!(es.len(), cyc.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Shanks' simplest cubics are cyclic for every integer `t`.
    #[test]
    fn galois_action_composes(t in -6i64..=6) {
        let k = NumberField::from_i64(&[-1, -(t + 3), -t, 1], 128).unwrap();
        let a = recover_galois_action(&k, 128, &Integer::from(DEFAULT_DENOM_BOUND)).unwrap();
        prop_assert_eq!(a.order(), 3);
        let theta = k.gen();
        let v = log_embed(&k, &theta, 128).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let xy = a.table.mul(x, y);
                prop_assert_eq!(a.apply(x, &a.apply(y, &theta)), a.apply(xy, &theta));
                let lhs = a.act_log(xy, &v);
                let rhs = a.act_log(x, &a.act_log(y, &v));
                prop_assert!(lhs.iter().zip(&rhs).all(|(p, q)| p.overlaps(q)));
            }
        }
    }

    #[test]
    fn log_relations_are_found(i in 0usize..5, j in 0usize..5, e in 1i64..=4, f in 1i64..=4) {
        prop_assume!(i != j);
        let primes = [2i64, 3, 5, 7, 11];
        let (p, q) = (primes[i], primes[j]);
        let r = probe_with(
            vec!["a".into(), "b".into(), "c".into()],
            |prec| {
                let c = Integer::from(Integer::u_pow_u(p as u32, e as u32)) * Integer::from(Integer::u_pow_u(q as u32, f as u32));
                Ok(vec![
                    BigReal::from_i64(p, prec).ln()?,
                    BigReal::from_i64(q, prec).ln()?,
                    BigReal::from_integer(&c, prec).ln()?,
                ])
            },
            &Integer::from(1000),
            192,
        )
        .unwrap();
        prop_assert_eq!(r.verdict, Verdict::Found);
        let want = [Integer::from(e), Integer::from(f), Integer::from(-1)];
        prop_assert_eq!(r.relation().unwrap(), &want[..]);
    }

    #[test]
    fn unimodular_images_are_isometric(a in prop::collection::vec(-3i64..=3, 9), ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6)) {
        let m: Vec<Vec<i64>> = a.chunks(3).map(|r| r.to_vec()).collect();
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        prop_assume!(det != 0);
        let gram = |b: &[Vec<i64>]| -> Vec<Vec<i64>> {
            (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| b[i][k] * b[j][k]).sum()).collect()).collect()
        };
        // row operations on the basis keep the lattice
        let mut b = m.clone();
        for (x, y, c) in ops {
            if x != y {
                for k in 0..3 {
                    b[x][k] += c * b[y][k];
                }
            }
        }
        let prec = 128;
        let g1 = gram(&m);
        let g2 = gram(&b);
        let r1: Vec<&[i64]> = g1.iter().map(Vec::as_slice).collect();
        let r2: Vec<&[i64]> = g2.iter().map(Vec::as_slice).collect();
        let g1 = GramMatrix::from_i64(&r1, prec).unwrap();
        let g2 = GramMatrix::from_i64(&r2, prec).unwrap();
        let tol = default_tol(prec);
        let v = isometry_test(&g1, &g2, &tol).unwrap();
        let logunit::lattice::IsometryVerdict::Isometric { witness } = v else {
            return Err(TestCaseError::fail(format!("verdict {}", v.tag())));
        };
        prop_assert!(verify_witness(&g1, &g2, &witness, &tol));
        let s = similarity_test(&g1, &g2.scale(&BigReal::from_i64(3, prec)), &tol).unwrap();
        prop_assert_eq!(s.tag(), "Similar");
        let third = BigReal::from_rational(&Rational::from((1, 3)), prec);
        prop_assert!((&s.lambda - &third).mag() < pow2(-60, 64));
    }

    #[test]
    fn bundle_json_round_trip(label in "[A-Za-z0-9()+ ]{1,20}", h in proptest::option::of(1u64..100)) {
        let mut b = bundle("q_sqrt5.json");
        b.label = label;
        b.class_number = h;
        let again = FieldBundle::from_json(&b.to_json()).unwrap();
        prop_assert_eq!(again, b);
    }
}

/// `L(1, chi_D) = -D^{-1/2} sum_{a<D} (D/a) log sin(pi a / D)` for a real
/// quadratic fundamental discriminant `D`.
fn l_one(d: i64, prec: u32) -> Float {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mut s = Float::new(prec);
    for a in 1..d {
        let chi = Integer::from(d).kronecker(&Integer::from(a));
        if chi != 0 {
            let x = Float::with_val(prec, &pi * a) / d;
            s -= x.sin().ln() * chi;
        }
    }
    s / Float::with_val(prec, d).sqrt()
}

#[test]
fn residues_match_dirichlet_l_values() {
    for (name, d) in [("q_sqrt2.json", 8), ("q_sqrt3.json", 12), ("q_sqrt5.json", 5), ("q_sqrt6.json", 24)] {
        let r = residue_at_one(&bundle(name), 128).unwrap();
        let want = BigReal::exact(l_one(d, 256));
        assert!((&r.residue - &want).mag() < pow2(-100, 64), "{name}: {} vs {}", r.residue.to_f64(), want.to_f64());
    }
}

#[test]
fn residue_without_class_number_is_an_error() {
    let mut b = bundle("q_sqrt2.json");
    b.class_number = None;
    assert!(residue_at_one(&b, 128).is_err());
}

#[test]
fn golden_bundles_are_consistent() {
    let mut labels = BTreeMap::new();
    for name in [
        "q_cbrt2.json",
        "q_sqrt2.json",
        "q_sqrt2_sqrt3.json",
        "q_sqrt3.json",
        "q_sqrt5.json",
        "q_sqrt6.json",
        "q_zeta7plus.json",
        "septic_a.json",
        "septic_b.json",
    ] {
        let b = bundle(name);
        let v = logunit::bundle::validate(&b, 128);
        assert!(v.ok(), "{name}: {:?}", v.checks);
        labels.insert(b.label.clone(), name);
    }
    assert_eq!(labels.len(), 9);
}

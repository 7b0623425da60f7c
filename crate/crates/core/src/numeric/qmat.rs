//! Exact linear algebra over the rationals. Matrices are row-major
//! `Vec<Vec<Rational>>`.

use rug::Rational;

use super::poly::RationalPoly;

pub type QMat = Vec<Vec<Rational>>;

pub fn zeros(r: usize, c: usize) -> QMat {
    vec![vec![Rational::new(); c]; r]
}

pub fn identity(n: usize) -> QMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::from(1);
    }
    m
}

pub fn from_i64(rows: &[&[i64]]) -> QMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
        .collect()
}

pub fn transpose(m: &QMat) -> QMat {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mul(a: &QMat, b: &QMat) -> QMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::new();
                    for k in 0..inner {
                        if row[k] != 0 && b[k][j] != 0 {
                            s += Rational::from(&row[k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &QMat, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::new(), |s, (x, y)| s + Rational::from(x * y))
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::new(), |s, (x, y)| s + Rational::from(x * y))
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::from(a[r][c].recip_ref());
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = Rational::from(&f * &a[r][j]);
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMat) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}` as a list of vectors.
pub fn nullspace(m: &QMat, cols: usize) -> Vec<Vec<Rational>> {
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::new(); cols];
            v[f] = Rational::from(1);
            for (k, &p) in piv.iter().enumerate() {
                v[p] = -r[k][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &QMat) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return Rational::new();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = Rational::from(a[c][c].recip_ref());
        for i in c + 1..n {
            if a[i][c] != 0 {
                let f = Rational::from(&a[i][c] * &inv);
                for j in c..n {
                    let t = Rational::from(&f * &a[c][j]);
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from((i == j) as i32)));
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve(m: &QMat, b: &[Rational]) -> Option<Vec<Rational>> {
    inverse(m).map(|inv| mul_vec(&inv, b))
}

/// Characteristic polynomial `det(x I - m)` by the Faddeev–LeVerrier
/// recurrence.
pub fn charpoly(m: &QMat) -> RationalPoly {
    let n = m.len();
    let mut c = vec![Rational::new(); n + 1];
    c[n] = Rational::from(1);
    let mut mk = zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mul(m, &mk);
        let tr = (0..n).fold(Rational::new(), |s, i| s + &am[i][i]);
        c[n - k] = -tr / Rational::from(k as u32);
    }
    RationalPoly::new(c)
}

/// Coefficients expressing `v` as a combination of the rows of `basis`.
pub fn express_in_rows(basis: &QMat, v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    if k == 0 {
        return if v.iter().all(|x| *x == 0) { Some(vec![]) } else { None };
    }
    // solve basis^T c = v
    let n = v.len();
    let aug: QMat = (0..n)
        .map(|j| {
            let mut r: Vec<Rational> = basis.iter().map(|b| b[j].clone()).collect();
            r.push(v[j].clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::new(); k];
    for (row, &p) in piv.iter().enumerate() {
        c[p] = r[row][k].clone();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(det(&m), 1);
        let inv = inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(2));
        assert!(inverse(&from_i64(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let m = from_i64(&[&[1, 1, 1], &[2, 2, 2]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mul_vec(&m, v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn charpoly_companion() {
        // companion matrix of x^3 + x^2 - 2x - 1
        let m = from_i64(&[&[0, 0, 1], &[1, 0, 2], &[0, 1, -1]]);
        assert_eq!(charpoly(&m), RationalPoly::from_i64(&[-1, -2, 1, 1]));
    }

    #[test]
    fn express_vector() {
        let b = from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        let c = express_in_rows(&b, &[Rational::from(2), Rational::from(3), Rational::from(5)]).unwrap();
        assert_eq!(c, vec![Rational::from(2), Rational::from(3)]);
        assert!(express_in_rows(&b, &[Rational::from(1), Rational::from(0), Rational::from(0)]).is_none());
    }
}

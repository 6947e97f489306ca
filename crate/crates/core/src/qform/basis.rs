//! Basis extraction for degenerate (redundantly generated) forms.

use super::{reduce, QformError, QuadraticForm};
use crate::linalg::{self, IntMatrix};

/// Extended gcd: `(g, x, y)` with `x a + y b = g >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column echelon form `M U` of an integer matrix by unimodular column
/// operations. Returns `U` and the number of nonzero pivot columns `p`;
/// columns `p..` of `U` are a basis of the integer kernel and columns
/// `..p` complete it to a basis of `Z^n`.
fn column_echelon(m: &IntMatrix) -> (Vec<Vec<i128>>, usize) {
    let rows = m.len();
    let n = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let combine = |mat: &mut Vec<Vec<i128>>, p: usize, c: usize, x: i128, y: i128, s: i128, t: i128| {
        // col_p <- x col_p + y col_c ; col_c <- s col_p + t col_c
        for row in mat.iter_mut() {
            let (vp, vc) = (row[p], row[c]);
            row[p] = x * vp + y * vc;
            row[c] = s * vp + t * vc;
        }
    };
    let mut p = 0;
    for r in 0..rows {
        if p == n {
            break;
        }
        for c in p + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let (av, bv) = (a[r][p], a[r][c]);
            let (g, x, y) = ext_gcd(av, bv);
            let (s, t) = (-bv / g, av / g);
            combine(&mut a, p, c, x, y, s, t);
            combine(&mut u, p, c, x, y, s, t);
        }
        if a[r][p] != 0 {
            p += 1;
        }
    }
    (u, p)
}

/// Turns a positive-semidefinite form into a positive-definite form on the
/// quotient by its kernel. Returns `(R, T)` where `T` is an `n x r` integer
/// matrix with `Q o T = R`; every value of `Q` is a value of `R` and vice
/// versa. The result is passed through [`reduce`].
pub fn extract_basis(q: &QuadraticForm) -> Result<(QuadraticForm, IntMatrix), QformError> {
    let n = q.n();
    if n == 0 || q.is_positive_definite() {
        return Ok((q.clone(), linalg::identity(n)));
    }
    if q.rank() == 0 {
        return Ok((QuadraticForm::empty(), vec![Vec::new(); n]));
    }
    let (u, p) = column_echelon(&q.gram2());
    let t: IntMatrix = u
        .iter()
        .map(|row| row[..p].iter().map(|&x| i64::try_from(x).map_err(|_| QformError::Overflow)).collect())
        .collect::<Result<_, _>>()?;
    let restricted = q.compose(&t)?;
    let (r, v) = reduce(&restricted)?;
    let t = linalg::mul(&t, v.matrix()).ok_or(QformError::Overflow)?;
    Ok((r, t))
}

/// Basis of the integer kernel of the doubled Gram matrix, as columns.
pub fn kernel_basis(q: &QuadraticForm) -> IntMatrix {
    let (u, p) = column_echelon(&q.gram2());
    u.iter().map(|row| row[p..].iter().map(|&x| x as i64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{catalog_entry, HermitianLattice};
    use crate::qform::{is_equivalent, parse_form, trace_form};
    use crate::ring::make_field;

    #[test]
    fn nondegenerate_is_untouched() {
        let q = parse_form("w^2+wx+2x^2+3y^2+3yz+6z^2").unwrap();
        let (r, t) = extract_basis(&q).unwrap();
        assert_eq!(r, q);
        assert_eq!(t, linalg::identity(4));
    }

    #[test]
    fn sqrt_minus_6_block() {
        let q = trace_form(&catalog_entry("Qm6:<1>_|_[2,w;3]").unwrap()).unwrap();
        let (r, t) = extract_basis(&q).unwrap();
        assert_eq!(r.n(), 4);
        assert_eq!(q.compose(&t).unwrap(), r);
        let target = parse_form("w^2+2x^2+3y^2+6z^2").unwrap();
        assert!(is_equivalent(&r, &target).unwrap().is_some());
    }

    #[test]
    fn gaussian_singular_pair() {
        // generators v and i v of the same line
        let f = make_field(1).unwrap();
        let w = f.omega();
        let l = HermitianLattice::new(f, vec![vec![f.one(), w.clone()], vec![w.conj(), f.one()]]).unwrap();
        assert_eq!(l.rank(), 1);
        let q = trace_form(&l).unwrap();
        assert_eq!(q.rank(), 2);
        let (r, _) = extract_basis(&q).unwrap();
        assert_eq!(r, parse_form("x^2+y^2").unwrap());
    }

    #[test]
    fn kernel_vectors_are_null() {
        let q = trace_form(&catalog_entry("Qm23:<1>_|_[2,-1+w;3]").unwrap()).unwrap();
        let k = kernel_basis(&q);
        assert_eq!(k[0].len(), 2);
        for c in 0..2 {
            let v: Vec<i64> = k.iter().map(|r| r[c]).collect();
            assert_eq!(q.value(&v), 0);
        }
    }

    #[test]
    fn zero_form() {
        let q = QuadraticForm::from_coeffs(3, &[]).unwrap();
        let (r, t) = extract_basis(&q).unwrap();
        assert_eq!(r.n(), 0);
        assert_eq!(t.len(), 3);
    }
}

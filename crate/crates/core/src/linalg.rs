//! Small exact integer matrix helpers shared by the form and lattice layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense row-major integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Product in i128, `None` if a result entry does not fit in i64.
pub fn mul(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let s: i128 = (0..inner).map(|k| row[k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(s).ok()
                })
                .collect()
        })
        .collect()
}

/// `U^T G U`.
pub fn congruence(g: &IntMatrix, u: &IntMatrix) -> Option<IntMatrix> {
    mul(&transpose(u), &mul(g, u)?)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Sylvester's criterion on a symmetric integer matrix.
pub fn is_positive_definite(a: &IntMatrix) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev = 1i128;
    for k in 0..n {
        // after k elimination steps m[k][k] is the (k+1)-th leading minor
        if m[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    true
}

/// Outcome of exact symmetric elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub rank: usize,
    pub semidefinite: bool,
}

/// Exact rank and positive-semidefiniteness of a symmetric matrix given
/// with arbitrary-precision entries.
pub fn symmetric_inertia(a: &[Vec<BigInt>]) -> Inertia {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    loop {
        if active.iter().any(|&i| m[i][i].is_negative()) {
            return Inertia { rank, semidefinite: false };
        }
        // a zero diagonal in a PSD matrix forces a zero row
        for &i in &active {
            if m[i][i].is_zero() && active.iter().any(|&j| !m[i][j].is_zero()) {
                return Inertia { rank, semidefinite: false };
            }
        }
        let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) else {
            return Inertia { rank, semidefinite: true };
        };
        let p = active.remove(pos);
        rank += 1;
        let pivot = m[p][p].clone();
        for &i in &active {
            let f = &m[i][p] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let d = &f * &m[p][j];
                m[i][j] -= d;
            }
        }
    }
}

/// Inverse of an integer matrix with determinant +-1.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .chain((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }))
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    m.iter()
        .map(|r| r[n..].iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
        .collect()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// `floor(sqrt(x))` for `x >= 0`.
pub fn isqrt(x: i128) -> i128 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

pub fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&vec![vec![2, 1], vec![1, 2]]), 3);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 0);
        assert_eq!(det(&vec![vec![2, 0, 1], vec![0, 3, 0], vec![1, 0, 4]]), 21);
        assert_eq!(det(&Vec::new()), 1);
    }

    #[test]
    fn definiteness() {
        assert!(is_positive_definite(&vec![vec![2, 1], vec![1, 2]]));
        assert!(!is_positive_definite(&vec![vec![2, 2], vec![2, 2]]));
        assert!(!is_positive_definite(&vec![vec![1, 2], vec![2, 1]]));
        let psd = |m: Vec<Vec<i64>>| {
            symmetric_inertia(&m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
        };
        assert_eq!(psd(vec![vec![2, 2], vec![2, 2]]), Inertia { rank: 1, semidefinite: true });
        assert!(!psd(vec![vec![0, 1], vec![1, 0]]).semidefinite);
        assert!(!psd(vec![vec![1, 2], vec![2, 1]]).semidefinite);
        assert_eq!(psd(vec![vec![0, 0], vec![0, 0]]), Inertia { rank: 0, semidefinite: true });
    }

    #[test]
    fn inverse() {
        let u = vec![vec![2, 1], vec![1, 1]];
        let inv = unimodular_inverse(&u).unwrap();
        assert_eq!(mul(&u, &inv).unwrap(), identity(2));
        assert_eq!(unimodular_inverse(&vec![vec![2, 0], vec![0, 1]]), None);
    }

    #[test]
    fn integer_helpers() {
        assert_eq!(isqrt(24), 4);
        assert_eq!(isqrt(25), 5);
        assert_eq!(isqrt(0), 0);
        assert_eq!(div_floor(-7, 2), -4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_floor(7, 2), 3);
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(lcm(4, 6), 12);
    }
}

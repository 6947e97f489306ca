//! Integer-valued quadratic forms.
//!
//! A form `Q(x) = sum_{i<=j} c_ij x_i x_j` is stored through its doubled
//! Gram matrix `G = 2A`, which is an integer matrix with even diagonal
//! (`G_ii = 2 c_ii`, `G_ij = c_ij`). Everything downstream works on `G`, so
//! half-integral Gram entries never appear.

mod basis;
mod equiv;
mod reduce;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::enumerate::EnumError;
use crate::hermitian::HermitianLattice;
use crate::linalg::{self, IntMatrix};

pub use basis::{extract_basis, kernel_basis};
pub use equiv::{is_equivalent, match_paper_form, MatchVerdict};
pub use reduce::reduce;
pub use text::parse_form;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QformError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("doubled Gram matrix has an odd diagonal entry at {0}")]
    OddDiagonal(usize),
    #[error("form is not positive semidefinite")]
    Indefinite,
    #[error("form is degenerate (rank {rank} < {n} variables)")]
    Degenerate { rank: usize, n: usize },
    #[error("forms have different variable counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("transform is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error(transparent)]
    Enumeration(Box<EnumError>),
}

impl From<EnumError> for QformError {
    fn from(e: EnumError) -> Self {
        QformError::Enumeration(Box::new(e))
    }
}

/// A positive-semidefinite integer-valued quadratic form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    n: usize,
    gram2: Vec<i64>,
}

impl QuadraticForm {
    /// Builds a form from its doubled Gram matrix, checking symmetry, even
    /// diagonal and positive semidefiniteness.
    pub fn from_gram2(g: &IntMatrix) -> Result<Self, QformError> {
        let q = Self::from_gram2_unchecked(g)?;
        let big: Vec<Vec<BigInt>> = g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        if !linalg::symmetric_inertia(&big).semidefinite {
            return Err(QformError::Indefinite);
        }
        Ok(q)
    }

    /// Shape checks only; callers guarantee semidefiniteness.
    pub(crate) fn from_gram2_unchecked(g: &IntMatrix) -> Result<Self, QformError> {
        let n = g.len();
        if g.iter().any(|r| r.len() != n) {
            return Err(QformError::NotSymmetric);
        }
        for i in 0..n {
            if g[i][i] % 2 != 0 {
                return Err(QformError::OddDiagonal(i));
            }
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(QformError::NotSymmetric);
                }
            }
        }
        Ok(QuadraticForm { n, gram2: g.iter().flatten().copied().collect() })
    }

    /// Builds a form from monomial coefficients `(i, j, c)` meaning `c x_i x_j`
    /// (0-based, repeated monomials add up).
    pub fn from_coeffs(n: usize, terms: &[(usize, usize, i64)]) -> Result<Self, QformError> {
        let mut g = vec![vec![0i64; n]; n];
        for &(i, j, c) in terms {
            if i >= n || j >= n {
                return Err(QformError::DimensionMismatch(n, i.max(j) + 1));
            }
            if i == j {
                g[i][i] += 2 * c;
            } else {
                g[i][j] += c;
                g[j][i] += c;
            }
        }
        Self::from_gram2(&g)
    }

    /// `sum d_i x_i^2`.
    pub fn diagonal(diag: &[i64]) -> Result<Self, QformError> {
        let terms: Vec<_> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
        Self::from_coeffs(diag.len(), &terms)
    }

    /// The form in zero variables.
    pub fn empty() -> Self {
        QuadraticForm { n: 0, gram2: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `G_ij` of the doubled Gram matrix.
    #[inline]
    pub fn g(&self, i: usize, j: usize) -> i64 {
        self.gram2[i * self.n + j]
    }

    pub fn gram2(&self) -> IntMatrix {
        (0..self.n).map(|i| self.gram2[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    /// Coefficient of `x_i x_j` (of `x_i^2` when `i == j`).
    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.g(i, i) / 2
        } else {
            self.g(i, j)
        }
    }

    pub fn diag(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.coeff(i, i)).collect()
    }

    pub fn value(&self, x: &[i64]) -> i128 {
        assert_eq!(x.len(), self.n, "vector length must match the variable count");
        let mut acc = 0i128;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            acc += self.coeff(i, i) as i128 * xi * xi;
            for j in i + 1..self.n {
                acc += self.g(i, j) as i128 * xi * x[j] as i128;
            }
        }
        acc
    }

    /// `2 B(x, y) = x^T G y`.
    pub fn polar(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut acc = 0i128;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += x[i] as i128 * self.g(i, j) as i128 * y[j] as i128;
            }
        }
        acc
    }

    /// Determinant of the doubled Gram matrix.
    pub fn det2(&self) -> i128 {
        linalg::det(&self.gram2())
    }

    pub fn rank(&self) -> usize {
        let big: Vec<Vec<BigInt>> = self.gram2().iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        linalg::symmetric_inertia(&big).rank
    }

    pub fn is_positive_definite(&self) -> bool {
        linalg::is_positive_definite(&self.gram2())
    }

    pub(crate) fn require_positive_definite(&self) -> Result<(), QformError> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(QformError::Degenerate { rank: self.rank(), n: self.n })
        }
    }

    /// Classically integral: every cross coefficient is even.
    pub fn is_classical(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.g(i, j) % 2 == 0))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.g(i, j) == 0))
    }

    /// `Q o U`, the form `y -> Q(U y)` for an `n x r` integer matrix `U`.
    pub fn compose(&self, u: &IntMatrix) -> Result<Self, QformError> {
        if u.len() != self.n {
            return Err(QformError::DimensionMismatch(self.n, u.len()));
        }
        let g = linalg::congruence(&self.gram2(), u).ok_or(QformError::Overflow)?;
        Self::from_gram2_unchecked(&g)
    }

    /// Paper-style rendering with `w, x, y, z` variables, e.g.
    /// `w^2+w*x+2*x^2+y^2`; falls back to `x1..xn` beyond four variables.
    pub fn to_alias_string(&self) -> String {
        text::render(self, true)
    }
}

/// Block-diagonal sum; values add.
pub fn direct_sum(q1: &QuadraticForm, q2: &QuadraticForm) -> QuadraticForm {
    let n = q1.n + q2.n;
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..q1.n {
        for j in 0..q1.n {
            g[i][j] = q1.g(i, j);
        }
    }
    for i in 0..q2.n {
        for j in 0..q2.n {
            g[q1.n + i][q1.n + j] = q2.g(i, j);
        }
    }
    QuadraticForm { n, gram2: g.into_iter().flatten().collect() }
}

/// The quadratic form of a Hermitian lattice in the variables
/// `(g_1, w g_1, g_2, w g_2, ...)`: its value at integer coordinates
/// `(a_1, b_1, a_2, b_2, ...)` is `H(sum (a_i + b_i w) g_i)`.
pub fn trace_form(l: &HermitianLattice) -> Result<QuadraticForm, QformError> {
    let g = l
        .trace_gram()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(QformError::Overflow)).collect())
        .collect::<Result<IntMatrix, _>>()?;
    QuadraticForm::from_gram2_unchecked(&g)
}

/// An integer change of variables with determinant `+-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMap(IntMatrix);

impl UnimodularMap {
    pub fn new(u: IntMatrix) -> Result<Self, QformError> {
        let d = linalg::det(&u);
        if u.iter().any(|r| r.len() != u.len()) {
            return Err(QformError::NotSymmetric);
        }
        if d.abs() != 1 {
            return Err(QformError::NotUnimodular(d));
        }
        Ok(UnimodularMap(u))
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap(linalg::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn det(&self) -> i128 {
        linalg::det(&self.0)
    }

    pub fn inverse(&self) -> Self {
        UnimodularMap(linalg::unimodular_inverse(&self.0).expect("unimodular matrices are invertible over Z"))
    }

    /// `self * other`: apply `self` first, then `other` (`Q o (U V)`).
    pub fn then(&self, other: &Self) -> Result<Self, QformError> {
        Ok(UnimodularMap(linalg::mul(&self.0, &other.0).ok_or(QformError::Overflow)?))
    }

    /// Exact check that `q1 o U == q2`.
    pub fn verifies(&self, q1: &QuadraticForm, q2: &QuadraticForm) -> bool {
        q1.n() == self.0.len() && q1.compose(&self.0).map(|q| &q == q2).unwrap_or(false)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self, false))
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm({})", text::render(self, true))
    }
}

//! Integral Hermitian lattices given by Gram presentations.
//!
//! A lattice is described by the Gram matrix `h_ij = H(g_i, g_j)` of a
//! generating set `g_1, ..., g_k`. The generating set may be redundant: the
//! non-free lattices of the catalog are written as `<1>` plus a singular
//! 2x2 block, and the redundancy is removed later at the quadratic-form
//! level.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::symmetric_inertia;
use crate::ring::{parse_element, AlgebraicInteger, FieldParams, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HermitianError {
    #[error("Gram matrix must be square and non-empty")]
    NotSquare,
    #[error("Gram entry ({0},{1}) belongs to a different field")]
    WrongField(usize, usize),
    #[error("Gram matrix is not conjugate-symmetric at ({0},{1})")]
    NotConjugateSymmetric(usize, usize),
    #[error("diagonal entry {0} is not a nonnegative rational integer")]
    BadDiagonal(usize),
    #[error("Gram presentation is not positive semidefinite")]
    Indefinite,
    #[error("vector has {got} coordinates, lattice has {expected} generators")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattices live over different fields (m = {0} and m = {1})")]
    MixedFields(i64, i64),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cannot parse lattice: {0}")]
    Parse(String),
}

/// A positive-semidefinite integral Hermitian Gram presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianLattice {
    field: FieldParams,
    gram: Vec<Vec<AlgebraicInteger>>,
    label: Option<String>,
    rank: usize,
}

/// Doubled Gram of the trace form over the ordered Z-generators
/// `(g_1, w g_1, g_2, w g_2, ...)`. Entry for `(a g_i, b g_j)` is
/// `Tr(a h_ij conj(b))`.
fn doubled_trace_gram(field: FieldParams, gram: &[Vec<AlgebraicInteger>]) -> Vec<Vec<BigInt>> {
    let k = gram.len();
    let units = [field.one(), field.omega()];
    let mut out = vec![vec![BigInt::zero(); 2 * k]; 2 * k];
    for i in 0..k {
        for j in 0..k {
            for (s, alpha) in units.iter().enumerate() {
                for (t, beta) in units.iter().enumerate() {
                    let v = &(alpha * &gram[i][j]) * &beta.conj();
                    out[2 * i + s][2 * j + t] = v.trace();
                }
            }
        }
    }
    out
}

impl HermitianLattice {
    /// Validates a Gram presentation.
    pub fn new(field: FieldParams, gram: Vec<Vec<AlgebraicInteger>>) -> Result<Self, HermitianError> {
        let k = gram.len();
        if k == 0 || gram.iter().any(|r| r.len() != k) {
            return Err(HermitianError::NotSquare);
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                if h.field() != field {
                    return Err(HermitianError::WrongField(i, j));
                }
            }
        }
        for i in 0..k {
            if !gram[i][i].is_rational() || gram[i][i].a().is_negative() {
                return Err(HermitianError::BadDiagonal(i));
            }
            for j in i + 1..k {
                if gram[j][i] != gram[i][j].conj() {
                    return Err(HermitianError::NotConjugateSymmetric(j, i));
                }
            }
        }
        let inertia = symmetric_inertia(&doubled_trace_gram(field, &gram));
        if !inertia.semidefinite {
            return Err(HermitianError::Indefinite);
        }
        Ok(HermitianLattice { field, gram, label: None, rank: inertia.rank / 2 })
    }

    /// Diagonal lattice `<d_1, ..., d_k>`.
    pub fn diagonal(field: FieldParams, diag: &[i64]) -> Result<Self, HermitianError> {
        let k = diag.len();
        let gram =
            (0..k).map(|i| (0..k).map(|j| field.element(if i == j { diag[i] } else { 0 }, 0)).collect()).collect();
        Self::new(field, gram)
    }

    /// The zero-generator lattice, neutral for [`orthogonal_sum`].
    pub fn empty(field: FieldParams) -> Self {
        HermitianLattice { field, gram: Vec::new(), label: None, rank: 0 }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn gram(&self) -> &[Vec<AlgebraicInteger>] {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of generators in the presentation.
    pub fn generators(&self) -> usize {
        self.gram.len()
    }

    /// Rank over the field.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Doubled Gram of the associated trace form; see [`crate::qform::trace_form`].
    pub fn trace_gram(&self) -> Vec<Vec<BigInt>> {
        doubled_trace_gram(self.field, &self.gram)
    }

    /// `H(x, x) = sum_ij h_ij x_i conj(x_j)`.
    pub fn evaluate(&self, x: &[AlgebraicInteger]) -> Result<BigInt, HermitianError> {
        if x.len() != self.gram.len() {
            return Err(HermitianError::DimensionMismatch { expected: self.gram.len(), got: x.len() });
        }
        let mut acc = self.field.zero();
        for (i, row) in self.gram.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                let term = h.try_mul(&x[i])?.try_mul(&x[j].conj())?;
                acc = acc.try_add(&term)?;
            }
        }
        debug_assert!(acc.is_rational());
        Ok(acc.a().clone())
    }
}

/// Block-diagonal sum `L1 _|_ L2`.
pub fn orthogonal_sum(l1: &HermitianLattice, l2: &HermitianLattice) -> Result<HermitianLattice, HermitianError> {
    if l1.field != l2.field {
        return Err(HermitianError::MixedFields(l1.field.m(), l2.field.m()));
    }
    let (k1, k2) = (l1.generators(), l2.generators());
    let zero = l1.field.zero();
    let gram = (0..k1 + k2)
        .map(|i| {
            (0..k1 + k2)
                .map(|j| match (i < k1, j < k1) {
                    (true, true) => l1.gram[i][j].clone(),
                    (false, false) => l2.gram[i - k1][j - k1].clone(),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    Ok(HermitianLattice { field: l1.field, gram, label: None, rank: l1.rank + l2.rank })
}

/// Label used for `<1> _|_ [[d1, h], [conj h, d2]]`.
fn block_label(m: i64, d1: i64, h: &AlgebraicInteger, d2: i64) -> String {
    let h = match (h.a().is_zero(), h.b()) {
        (true, b) if *b == BigInt::from(1) => "w".to_string(),
        (false, b) if *b == BigInt::from(1) => format!("{}+w", h.a()),
        _ => h.to_string(),
    };
    format!("Qm{m}:<1>_|_[{d1},{h};{d2}]")
}

fn catalog_block(m: i64, d1: i64, shift: i64, d2: i64) -> HermitianLattice {
    let f = FieldParams::new(m).expect("catalog field");
    let h = f.element(shift, 1);
    let block = HermitianLattice::new(f, vec![vec![f.element(d1, 0), h.clone()], vec![h.conj(), f.element(d2, 0)]])
        .expect("catalog block");
    let one = HermitianLattice::diagonal(f, &[1]).expect("catalog unit");
    orthogonal_sum(&one, &block).expect("same field").with_label(block_label(m, d1, &h, d2))
}

fn catalog_diag(m: i64, d2: i64) -> HermitianLattice {
    let f = FieldParams::new(m).expect("catalog field");
    HermitianLattice::diagonal(f, &[1, d2]).expect("catalog diagonal").with_label(format!("Qm{m}:<1,{d2}>"))
}

/// The 25 universal binary Hermitian lattices, grouped by field.
pub fn catalog() -> Vec<HermitianLattice> {
    let mut out = Vec::with_capacity(25);
    out.extend([1, 2, 3].map(|d| catalog_diag(1, d)));
    out.extend([1, 2, 3, 4, 5].map(|d| catalog_diag(2, d)));
    out.extend([1, 2].map(|d| catalog_diag(3, d)));
    out.push(catalog_diag(5, 2));
    out.push(catalog_block(5, 2, -1, 3));
    out.push(catalog_block(6, 2, 0, 3));
    out.extend([1, 2, 3].map(|d| catalog_diag(7, d)));
    out.push(catalog_block(10, 2, 0, 5));
    out.extend([1, 2].map(|d| catalog_diag(11, d)));
    out.push(catalog_block(15, 2, 0, 2));
    out.push(catalog_diag(19, 2));
    out.push(catalog_block(23, 2, 0, 3));
    out.push(catalog_block(23, 2, -1, 3));
    out.push(catalog_block(31, 2, 0, 4));
    out.push(catalog_block(31, 2, -1, 4));
    out
}

/// Looks up a catalog lattice by its label.
pub fn catalog_entry(label: &str) -> Option<HermitianLattice> {
    catalog().into_iter().find(|l| l.label() == Some(label))
}

/// `m=<int>: a+b*w, ...; ...` with rows separated by `;` and entries by `,`.
impl fmt::Display for HermitianLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}:", self.field.m())?;
        for (i, row) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, h) in row.iter().enumerate() {
                write!(f, "{}{}", if j > 0 { ", " } else { " " }, h)?;
            }
        }
        Ok(())
    }
}

/// Parses the lattice text format, or a catalog label such as `Qm5:<1,2>`.
pub fn parse_lattice(text: &str) -> Result<HermitianLattice, HermitianError> {
    let text = text.trim();
    if let Some(l) = catalog_entry(text) {
        return Ok(l);
    }
    let body = text
        .strip_prefix("m=")
        .ok_or_else(|| HermitianError::Parse(format!("expected `m=<int>:` prefix in {text:?}")))?;
    let (m, rows) = body.split_once(':').ok_or_else(|| HermitianError::Parse("missing `:` after field tag".into()))?;
    let m: i64 = m.trim().parse().map_err(|_| HermitianError::Parse(format!("bad field tag {m:?}")))?;
    let field = FieldParams::new(m)?;
    let gram = rows
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| parse_element(field, e).ok_or_else(|| HermitianError::Parse(format!("bad entry {e:?}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    HermitianLattice::new(field, gram)
}

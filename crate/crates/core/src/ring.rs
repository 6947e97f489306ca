//! Arithmetic in the ring of integers of an imaginary quadratic field.
//!
//! Elements are stored in coordinates over the Z-basis `{1, w}` where
//! `w = (1 + sqrt(-m)) / 2` when `m = 3 mod 4` and `w = sqrt(-m)` otherwise.
//! The minimal polynomial of `w` is `X^2 - t X + n` with `t = Tr(w)` and
//! `n = N(w)`, so multiplication only needs those two integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("field parameter m must be positive, got {0}")]
    NonPositive(i64),
    #[error("field parameter m = {m} is not squarefree (divisible by {p}^2)")]
    NotSquarefree { m: i64, p: i64 },
    #[error("operands live in different fields (m = {0} and m = {1})")]
    MixedFields(i64, i64),
}

/// The imaginary quadratic field `Q(sqrt(-m))` together with the trace and
/// norm of its integral generator `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    m: i64,
    omega_trace: i64,
    omega_norm: i64,
}

impl FieldParams {
    pub fn new(m: i64) -> Result<Self, RingError> {
        if m <= 0 {
            return Err(RingError::NonPositive(m));
        }
        let mut p = 2i64;
        while p * p <= m {
            if m % (p * p) == 0 {
                return Err(RingError::NotSquarefree { m, p });
            }
            p += 1;
        }
        let (omega_trace, omega_norm) = if m % 4 == 3 { (1, (1 + m) / 4) } else { (0, m) };
        Ok(FieldParams { m, omega_trace, omega_norm })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `Tr(w)`, either 0 or 1.
    pub fn omega_trace(&self) -> i64 {
        self.omega_trace
    }

    /// `N(w)`, always at least 1.
    pub fn omega_norm(&self) -> i64 {
        self.omega_norm
    }

    pub fn zero(&self) -> AlgebraicInteger {
        AlgebraicInteger::new(*self, 0, 0)
    }

    pub fn one(&self) -> AlgebraicInteger {
        AlgebraicInteger::new(*self, 1, 0)
    }

    pub fn omega(&self) -> AlgebraicInteger {
        AlgebraicInteger::new(*self, 0, 1)
    }

    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> AlgebraicInteger {
        AlgebraicInteger::new(*self, a, b)
    }
}

/// Shorthand for [`FieldParams::new`].
pub fn make_field(m: i64) -> Result<FieldParams, RingError> {
    FieldParams::new(m)
}

/// An element `a + b w` of the ring of integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicInteger {
    a: BigInt,
    b: BigInt,
    field: FieldParams,
}

impl AlgebraicInteger {
    pub fn new(field: FieldParams, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        AlgebraicInteger { a: a.into(), b: b.into(), field }
    }

    /// Coefficient of 1.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of `w`.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element is a rational integer (no `w` part).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Complex conjugation. Uses `conj(w) = Tr(w) - w`.
    pub fn conj(&self) -> Self {
        let t = BigInt::from(self.field.omega_trace);
        AlgebraicInteger { a: &self.a + &t * &self.b, b: -&self.b, field: self.field }
    }

    pub fn norm(&self) -> BigInt {
        let t = BigInt::from(self.field.omega_trace);
        let n = BigInt::from(self.field.omega_norm);
        &self.a * &self.a + t * &self.a * &self.b + n * &self.b * &self.b
    }

    pub fn trace(&self) -> BigInt {
        let t = BigInt::from(self.field.omega_trace);
        BigInt::from(2) * &self.a + t * &self.b
    }

    fn same_field(&self, other: &Self) -> Result<(), RingError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(RingError::MixedFields(self.field.m, other.field.m))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_field(other)?;
        Ok(AlgebraicInteger { a: &self.a + &other.a, b: &self.b + &other.b, field: self.field })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.same_field(other)?;
        Ok(AlgebraicInteger { a: &self.a - &other.a, b: &self.b - &other.b, field: self.field })
    }

    /// Product using `w^2 = t w - n`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.same_field(other)?;
        let t = BigInt::from(self.field.omega_trace);
        let n = BigInt::from(self.field.omega_norm);
        let bb = &self.b * &other.b;
        Ok(AlgebraicInteger {
            a: &self.a * &other.a - n * &bb,
            b: &self.a * &other.b + &self.b * &other.a + t * bb,
            field: self.field,
        })
    }
}

// Operator forms panic on mixed fields; use the `try_` methods when the
// operands come from untrusted input.
impl Add for &AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn add(self, rhs: Self) -> AlgebraicInteger {
        self.try_add(rhs).expect("mixed-field addition")
    }
}

impl Sub for &AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn sub(self, rhs: Self) -> AlgebraicInteger {
        self.try_sub(rhs).expect("mixed-field subtraction")
    }
}

impl Mul for &AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn mul(self, rhs: Self) -> AlgebraicInteger {
        self.try_mul(rhs).expect("mixed-field multiplication")
    }
}

impl Neg for &AlgebraicInteger {
    type Output = AlgebraicInteger;
    fn neg(self) -> AlgebraicInteger {
        AlgebraicInteger { a: -&self.a, b: -&self.b, field: self.field }
    }
}

impl fmt::Debug for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})_m{}", self.a, self.b, self.field.m)
    }
}

/// Prints `a+b*w` with both coefficients always present, e.g. `-1+1*w`,
/// `3+0*w`, `0-2*w`.
impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*w", self.a, sign, self.b.abs())
    }
}

/// Parses an entry such as `2`, `w`, `-1+w`, `1-w`, `3+0*w`, `-2*w`.
pub fn parse_element(field: FieldParams, text: &str) -> Option<AlgebraicInteger> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'+' if !first => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if first => (false, rest),
            _ => return None,
        };
        first = false;
        let end = body[1.min(body.len())..].find(['+', '-']).map(|i| i + 1).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return None;
        }
        let (coef, is_omega) = if let Some(c) = term.strip_suffix("*w") {
            (c.parse::<BigInt>().ok()?, true)
        } else if term == "w" {
            (BigInt::one(), true)
        } else if let Some(c) = term.strip_suffix('w') {
            (c.parse::<BigInt>().ok()?, true)
        } else {
            (term.parse::<BigInt>().ok()?, false)
        };
        let coef = if neg { -coef } else { coef };
        if is_omega {
            b += coef;
        } else {
            a += coef;
        }
    }
    Some(AlgebraicInteger { a, b, field })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(m: i64, a: i64, b: i64) -> AlgebraicInteger {
        make_field(m).unwrap().element(a, b)
    }

    #[test]
    fn field_parameters() {
        let f1 = make_field(1).unwrap();
        assert_eq!((f1.omega_trace(), f1.omega_norm()), (0, 1));
        let f3 = make_field(3).unwrap();
        assert_eq!((f3.omega_trace(), f3.omega_norm()), (1, 1));
        let f19 = make_field(19).unwrap();
        assert_eq!((f19.omega_trace(), f19.omega_norm()), (1, 5));
        assert_eq!(make_field(12), Err(RingError::NotSquarefree { m: 12, p: 2 }));
        assert_eq!(make_field(0), Err(RingError::NonPositive(0)));
        assert_eq!(make_field(-7), Err(RingError::NonPositive(-7)));
        assert!(make_field(50).is_err());
        for m in [1, 2, 3, 5, 6, 7, 10, 11, 15, 19, 23, 31] {
            let f = make_field(m).unwrap();
            assert!(f.omega_trace() * f.omega_trace() - 4 * f.omega_norm() < 0);
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(el(1, 0, 1).conj(), el(1, 0, -1));
        assert_eq!(el(7, 0, 1).conj(), el(7, 1, -1));
        assert_eq!(el(7, 1, -1).conj(), el(7, 0, 1));
    }

    #[test]
    fn norm_and_trace() {
        assert_eq!(el(1, 1, 1).norm(), 2.into());
        assert_eq!(el(1, 1, 1).trace(), 2.into());
        assert_eq!(el(3, 0, 1).norm(), 1.into());
        assert_eq!(el(3, 0, 1).trace(), 1.into());
        assert_eq!(el(19, 0, 1).norm(), 5.into());
        assert_eq!(el(19, 0, 1).trace(), 1.into());
    }

    #[test]
    fn multiplication() {
        assert_eq!(&el(1, 0, 1) * &el(1, 0, 1), el(1, -1, 0));
        assert_eq!(&el(3, 0, 1) * &el(3, 0, 1), el(3, -1, 1));
        let z = el(23, -4, 9);
        assert_eq!(&z * &el(23, 1, 0), z);
    }

    #[test]
    fn mixed_fields_rejected() {
        assert_eq!(el(1, 1, 0).try_mul(&el(2, 1, 0)), Err(RingError::MixedFields(1, 2)));
        assert!(el(1, 1, 0).try_add(&el(3, 1, 0)).is_err());
    }

    #[test]
    fn element_text() {
        let f = make_field(23).unwrap();
        assert_eq!(el(23, -1, 1).to_string(), "-1+1*w");
        assert_eq!(el(23, 0, -2).to_string(), "0-2*w");
        assert_eq!(parse_element(f, "-1+w"), Some(el(23, -1, 1)));
        assert_eq!(parse_element(f, "1-w"), Some(el(23, 1, -1)));
        assert_eq!(parse_element(f, "3"), Some(el(23, 3, 0)));
        assert_eq!(parse_element(f, "-2*w"), Some(el(23, 0, -2)));
        assert_eq!(parse_element(f, "0-2*w"), Some(el(23, 0, -2)));
        assert_eq!(parse_element(f, "w"), Some(el(23, 0, 1)));
        assert_eq!(parse_element(f, "1+x"), None);
        assert_eq!(parse_element(f, ""), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field() -> impl Strategy<Value = FieldParams> {
            prop::sample::select(vec![1i64, 2, 3, 5, 6, 7, 10, 11, 15, 19, 23, 31, 35])
                .prop_map(|m| make_field(m).unwrap())
        }

        proptest! {
            #[test]
            fn ring_identities(f in field(), a1 in -50i64..50, b1 in -50i64..50,
                               a2 in -50i64..50, b2 in -50i64..50) {
                let z1 = f.element(a1, b1);
                let z2 = f.element(a2, b2);
                let zz = &z1 * &z1.conj();
                prop_assert_eq!(zz.a(), &z1.norm());
                prop_assert!(zz.b().is_zero());
                let s = &z1 + &z1.conj();
                prop_assert_eq!(s.a(), &z1.trace());
                prop_assert!(s.b().is_zero());
                prop_assert_eq!(z1.conj().conj(), z1.clone());
                prop_assert_eq!((&z1 * &z2).conj(), &z1.conj() * &z2.conj());
                prop_assert_eq!((&z1 * &z2).norm(), z1.norm() * z2.norm());
                prop_assert!(z1.norm() >= BigInt::zero());
                prop_assert_eq!(z1.norm().is_zero(), z1.is_zero());
                prop_assert_eq!(parse_element(f, &z1.to_string()), Some(z1.clone()));
            }
        }
    }
}

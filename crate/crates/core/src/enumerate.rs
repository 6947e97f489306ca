//! Exact representation testing for positive-definite forms.
//!
//! The doubled Gram matrix is decomposed over the rationals as
//! `x^T G x = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`, then every level is
//! rescaled to integers: with `L_i` the common denominator of row `i` of
//! `mu` and `D` a common denominator of the `d_i / L_i^2`,
//!
//! ```text
//! D x^T G x = sum_i e_i (L_i x_i + s_i)^2,   s_i = sum_{j>i} (L_i mu_ij) x_j,
//! ```
//!
//! with integer `e_i`, `L_i` and `s_i`. Coordinates are enumerated from
//! `x_{n-1}` down to `x_0`, each over the exact integer interval allowed by
//! the remaining budget, so no solution can be skipped. The innermost
//! coordinate is solved directly from its integer quadratic.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{div_ceil, div_floor, isqrt};
use crate::qform::{extract_basis, QformError, QuadraticForm};

/// Default cap for truant searches.
pub const DEFAULT_TRUANT_CAP: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration needs a positive-definite form (rank {rank} < {n} variables)")]
    Degenerate { rank: usize, n: usize },
    #[error("bound {0} is too large for exact enumeration of this form")]
    Overflow(i64),
    #[error("target must be nonnegative, got {0}")]
    NegativeTarget(i64),
    #[error(transparent)]
    Form(#[from] Box<QformError>),
}

/// A vector attaining a value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationWitness {
    pub t: i64,
    pub vector: Vec<i64>,
}

impl RepresentationWitness {
    pub fn verify(&self, q: &QuadraticForm) -> bool {
        self.vector.len() == q.n() && q.value(&self.vector) == self.t as i128
    }
}

#[derive(Debug, Clone)]
struct Level {
    /// `L_i`
    scale: i128,
    /// `L_i mu_ij` for `j > i`, indexed by `j`
    shift: Vec<i128>,
    /// `e_i`
    weight: i128,
}

/// Precomputed enumeration data for one positive-definite form.
#[derive(Debug, Clone)]
pub struct Enumerator {
    form: QuadraticForm,
    levels: Vec<Level>,
    denom: i128,
}

fn to_i128(x: &BigInt) -> Option<i128> {
    x.to_i128()
}

impl Enumerator {
    pub fn new(q: &QuadraticForm) -> Result<Self, EnumError> {
        let n = q.n();
        if !q.is_positive_definite() {
            return Err(EnumError::Degenerate { rank: q.rank(), n });
        }
        // rational LDL^T, eliminating x_0 first
        let mut s: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(q.g(i, j).into())).collect()).collect();
        let mut d = Vec::with_capacity(n);
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let di = s[i][i].clone();
            for j in i + 1..n {
                mu[i][j] = &s[i][j] / &di;
            }
            for a in i + 1..n {
                for b in i + 1..n {
                    let delta = &mu[i][a] * &di * &mu[i][b];
                    s[a][b] -= delta;
                }
            }
            d.push(di);
        }
        let overflow = || EnumError::Overflow(0);
        let mut scales = Vec::with_capacity(n);
        let mut denom = BigInt::one();
        for i in 0..n {
            let l = mu[i][i + 1..].iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let w = &d[i] / BigRational::from_integer(&l * &l);
            denom = denom.lcm(w.denom());
            scales.push(l);
        }
        let mut levels = Vec::with_capacity(n);
        for i in 0..n {
            let l = BigRational::from_integer(scales[i].clone());
            let shift = (0..n)
                .map(|j| {
                    if j > i {
                        let v = &mu[i][j] * &l;
                        debug_assert!(v.is_integer());
                        to_i128(&v.to_integer()).ok_or_else(overflow)
                    } else {
                        Ok(0)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let w = &d[i] / (&l * &l) * BigRational::from_integer(denom.clone());
            debug_assert!(w.is_integer());
            levels.push(Level {
                scale: to_i128(&scales[i]).ok_or_else(overflow)?,
                shift,
                weight: to_i128(&w.to_integer()).ok_or_else(overflow)?,
            });
        }
        Ok(Enumerator { form: q.clone(), levels, denom: to_i128(&denom).ok_or_else(overflow)? })
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    fn budget(&self, bound: i64) -> Result<i128, EnumError> {
        self.denom
            .checked_mul(2 * bound as i128)
            .filter(|b| b.checked_mul(64).is_some())
            .ok_or(EnumError::Overflow(bound))
    }

    /// Visits every vector with `Q(x) <= bound` (including zero) together
    /// with its value, in increasing order of each coordinate.
    pub fn for_each_vector<F>(&self, bound: i64, mut visit: F) -> Result<ControlFlow<()>, EnumError>
    where
        F: FnMut(&[i64], i64) -> ControlFlow<()>,
    {
        let n = self.form.n();
        if bound < 0 {
            return Ok(ControlFlow::Continue(()));
        }
        if n == 0 {
            return Ok(visit(&[], 0));
        }
        let budget = self.budget(bound)?;
        let mut x = vec![0i64; n];
        Ok(self.walk(n - 1, budget, 0, &mut x, &mut |x, v| {
            if v <= bound {
                visit(x, v)
            } else {
                ControlFlow::Continue(())
            }
        }))
    }

    /// `partial` is `Q` evaluated on the coordinates above `level` (those
    /// at or below it being zero).
    fn walk<F>(&self, level: usize, budget: i128, partial: i64, x: &mut [i64], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], i64) -> ControlFlow<()>,
    {
        let q = &self.form;
        let n = q.n();
        let lv = &self.levels[level];
        let s: i128 = (level + 1..n).map(|j| lv.shift[j] * x[j] as i128).sum();
        let r = isqrt(budget / lv.weight);
        let lo = div_ceil(-r - s, lv.scale);
        let hi = div_floor(r - s, lv.scale);
        // linear coefficient of x_level from the fixed coordinates
        let lin: i64 = (level + 1..n).map(|j| q.g(level, j) * x[j]).sum();
        let diag = q.coeff(level, level);
        for xi in lo..=hi {
            let xi = xi as i64;
            x[level] = xi;
            let value = partial + diag * xi * xi + lin * xi;
            let flow = if level == 0 {
                visit(x, value)
            } else {
                let t = lv.scale * xi as i128 + s;
                self.walk(level - 1, budget - lv.weight * t * t, value, x, visit)
            };
            if flow.is_break() {
                x[level] = 0;
                return flow;
            }
        }
        x[level] = 0;
        ControlFlow::Continue(())
    }

    /// First vector (in witness order) with `Q(x) = t`.
    pub fn find(&self, t: i64) -> Result<Option<Vec<i64>>, EnumError> {
        if t < 0 {
            return Err(EnumError::NegativeTarget(t));
        }
        let n = self.form.n();
        if n == 0 {
            return Ok((t == 0).then(Vec::new));
        }
        let budget = self.budget(t)?;
        let mut x = vec![0i64; n];
        Ok(self.search(n - 1, budget, 0, t, &mut x).then_some(x))
    }

    /// Witness order: at every level candidates are tried by increasing
    /// absolute value, positive before negative.
    fn search(&self, level: usize, budget: i128, partial: i64, t: i64, x: &mut [i64]) -> bool {
        let q = &self.form;
        let n = q.n();
        let lin: i64 = (level + 1..n).map(|j| q.g(level, j) * x[j]).sum();
        let diag = q.coeff(level, level);
        if level == 0 {
            // diag x^2 + lin x + partial - t = 0
            let c = (partial - t) as i128;
            let (a, b) = (diag as i128, lin as i128);
            let disc = b * b - 4 * a * c;
            if disc < 0 {
                return false;
            }
            let sq = isqrt(disc);
            if sq * sq != disc {
                return false;
            }
            let mut roots: Vec<i128> =
                [-b + sq, -b - sq].into_iter().filter(|num| num % (2 * a) == 0).map(|num| num / (2 * a)).collect();
            roots.sort_by_key(|&r| (r.abs(), r < 0));
            if let Some(&r) = roots.first() {
                x[0] = r as i64;
                return true;
            }
            return false;
        }
        let lv = &self.levels[level];
        let s: i128 = (level + 1..n).map(|j| lv.shift[j] * x[j] as i128).sum();
        let r = isqrt(budget / lv.weight);
        let lo = div_ceil(-r - s, lv.scale) as i64;
        let hi = div_floor(r - s, lv.scale) as i64;
        let reach = lo.abs().max(hi.abs());
        let candidates = (0..=reach).flat_map(|mag| if mag == 0 { vec![0] } else { vec![mag, -mag] });
        for xi in candidates.filter(|xi| (lo..=hi).contains(xi)) {
            x[level] = xi;
            let value = partial + diag * xi * xi + lin * xi;
            let tt = lv.scale * xi as i128 + s;
            if self.search(level - 1, budget - lv.weight * tt * tt, value, t, x) {
                return true;
            }
        }
        x[level] = 0;
        false
    }

    pub fn represents(&self, t: i64) -> Result<Option<RepresentationWitness>, EnumError> {
        Ok(self.find(t)?.map(|vector| RepresentationWitness { t, vector }))
    }

    pub fn represented_set(&self, bound: i64) -> Result<RepresentedSet, EnumError> {
        let mut mask = vec![false; bound.max(0) as usize + 1];
        let _ = self.for_each_vector(bound, |_, v| {
            mask[v as usize] = true;
            ControlFlow::Continue(())
        })?;
        Ok(RepresentedSet { mask })
    }

    /// Number of vectors of each value `0..=bound` (theta series coefficients).
    pub fn counts(&self, bound: i64) -> Result<Vec<u64>, EnumError> {
        let mut counts = vec![0u64; bound.max(0) as usize + 1];
        let _ = self.for_each_vector(bound, |_, v| {
            counts[v as usize] += 1;
            ControlFlow::Continue(())
        })?;
        Ok(counts)
    }

    /// All vectors with value in `1..=bound`, grouped by value.
    pub fn vectors_by_value(&self, bound: i64) -> Result<Vec<Vec<Vec<i64>>>, EnumError> {
        let mut out = vec![Vec::new(); bound.max(0) as usize + 1];
        let _ = self.for_each_vector(bound, |x, v| {
            if v > 0 {
                out[v as usize].push(x.to_vec());
            }
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// Membership mask of the values `0..=bound` attained by a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentedSet {
    mask: Vec<bool>,
}

impl RepresentedSet {
    pub fn bound(&self) -> i64 {
        self.mask.len() as i64 - 1
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= 0 && (t as usize) < self.mask.len() && self.mask[t as usize]
    }

    /// Represented values in `1..=bound`, ascending.
    pub fn values(&self) -> Vec<i64> {
        (1..self.mask.len()).filter(|&t| self.mask[t]).map(|t| t as i64).collect()
    }

    /// Smallest value in `1..=bound` that is not represented.
    pub fn first_missing(&self) -> Option<i64> {
        (1..self.mask.len()).find(|&t| !self.mask[t]).map(|t| t as i64)
    }
}

fn positive_definite_part(q: &QuadraticForm) -> Result<QuadraticForm, EnumError> {
    if q.is_positive_definite() {
        return Ok(q.clone());
    }
    Ok(extract_basis(q).map_err(Box::new)?.0)
}

/// Does `q` represent `t`? Returns the first witness in search order.
pub fn represents(q: &QuadraticForm, t: i64) -> Result<Option<RepresentationWitness>, EnumError> {
    Enumerator::new(q)?.represents(t)
}

/// The values `1..=bound` represented by `q`.
pub fn represented_set(q: &QuadraticForm, bound: i64) -> Result<RepresentedSet, EnumError> {
    Enumerator::new(q)?.represented_set(bound)
}

/// Outcome of a truant search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truant {
    Value(i64),
    /// Every value up to the cap is represented.
    Exhausted,
}

impl Truant {
    pub fn value(self) -> Option<i64> {
        match self {
            Truant::Value(t) => Some(t),
            Truant::Exhausted => None,
        }
    }
}

/// Smallest positive integer up to `cap` not represented by `q`.
/// Degenerate forms are first reduced to their nondegenerate quotient.
pub fn truant(q: &QuadraticForm, cap: i64) -> Result<Truant, EnumError> {
    let q = positive_definite_part(q)?;
    if cap < 1 {
        return Ok(Truant::Exhausted);
    }
    if q.n() == 0 {
        return Ok(Truant::Value(1));
    }
    let e = Enumerator::new(&q)?;
    // widen the window geometrically; small truants are found cheaply
    let mut bound = cap.min(32);
    loop {
        if let Some(t) = e.represented_set(bound)?.first_missing() {
            return Ok(Truant::Value(t));
        }
        if bound >= cap {
            return Ok(Truant::Exhausted);
        }
        bound = (bound * 4).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::parse_form;

    fn form(s: &str) -> QuadraticForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn represents_examples() {
        let w = represents(&form("w^2+x^2+y^2+z^2"), 7).unwrap().unwrap();
        assert_eq!(w.vector, vec![2, 1, 1, 1]);
        assert!(represents(&form("x^2+2y^2"), 5).unwrap().is_none());
        let q = form("w^2+wx+2x^2+3y^2+3yz+6z^2");
        let w = represents(&q, 290).unwrap().unwrap();
        assert!(w.verify(&q));
        assert_eq!(represents(&q, 0).unwrap().unwrap().vector, vec![0; 4]);
        assert!(matches!(represents(&q, -1), Err(EnumError::NegativeTarget(-1))));
    }

    #[test]
    fn degenerate_rejected() {
        let q = form("x^2+2xy+y^2");
        assert!(matches!(represents(&q, 1), Err(EnumError::Degenerate { rank: 1, n: 2 })));
    }

    #[test]
    fn represented_set_examples() {
        assert_eq!(represented_set(&form("x^2+y^2"), 10).unwrap().values(), vec![1, 2, 4, 5, 8, 9, 10]);
        assert_eq!(represented_set(&form("w^2+x^2+y^2+z^2"), 30).unwrap().values(), (1..=30).collect::<Vec<_>>());
        assert_eq!(represented_set(&form("x^2"), 9).unwrap().values(), vec![1, 4, 9]);
    }

    #[test]
    fn theta_counts() {
        // r_2(n) for n = 0..5
        assert_eq!(Enumerator::new(&form("x^2+y^2")).unwrap().counts(5).unwrap(), vec![1, 4, 4, 0, 4, 8]);
        // r_4(1) = 8, r_4(2) = 24
        assert_eq!(Enumerator::new(&form("w^2+x^2+y^2+z^2")).unwrap().counts(2).unwrap(), vec![1, 8, 24]);
    }

    #[test]
    fn truant_examples() {
        assert_eq!(truant(&form("x^2"), 1000).unwrap(), Truant::Value(2));
        assert_eq!(truant(&form("x^2+y^2"), 1000).unwrap(), Truant::Value(3));
        assert_eq!(truant(&form("w^2+x^2+5y^2+5z^2"), 1000).unwrap(), Truant::Value(3));
        assert_eq!(truant(&form("w^2+x^2+y^2+z^2"), 200).unwrap(), Truant::Exhausted);
        assert_eq!(truant(&QuadraticForm::empty(), 10).unwrap(), Truant::Value(1));
        // degenerate input goes through basis extraction
        assert_eq!(truant(&form("x^2+2xy+y^2+z^2"), 100).unwrap(), Truant::Value(3));
    }

    #[test]
    fn empty_form() {
        let e = Enumerator::new(&QuadraticForm::empty()).unwrap();
        assert_eq!(e.find(0).unwrap(), Some(vec![]));
        assert_eq!(e.find(3).unwrap(), None);
    }

    /// Naive complete search over a box large enough to contain every
    /// solution: each coordinate is bounded by `8 (t + 1)`.
    fn naive_represents(q: &QuadraticForm, t: i64) -> bool {
        fn rec(q: &QuadraticForm, t: i64, x: &mut Vec<i64>, k: usize, r: i64) -> bool {
            if k == x.len() {
                return q.value(x) == t as i128;
            }
            for v in -r..=r {
                x[k] = v;
                if rec(q, t, x, k + 1, r) {
                    return true;
                }
            }
            false
        }
        // for these test forms the minimum eigenvalue of A is >= 1/8
        let r = isqrt(8 * (t as i128 + 1)) as i64 + 1;
        rec(q, t, &mut vec![0; q.n()], 0, r)
    }

    #[test]
    fn agrees_with_naive_search() {
        for s in ["x^2+xy+2y^2", "2x^2+2xy+3y^2+z^2", "x^2+y^2+yz+3z^2", "3x^2+xy+3y^2"] {
            let q = form(s);
            let e = Enumerator::new(&q).unwrap();
            for t in 0..=30 {
                assert_eq!(e.find(t).unwrap().is_some(), naive_represents(&q, t), "{s} at {t}");
            }
        }
    }
}

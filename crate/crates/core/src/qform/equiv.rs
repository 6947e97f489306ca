//! Integral equivalence of positive-definite forms.
//!
//! Both forms are reduced, compared on cheap invariants, and then an
//! isometry is searched for by backtracking: the images of the basis
//! vectors of the second form are chosen among the vectors of the first
//! form with the right norm, pruning on every inner product as soon as both
//! sides are fixed.

use serde::{Deserialize, Serialize};

use super::{reduce, QformError, QuadraticForm, UnimodularMap};
use crate::enumerate::Enumerator;
use crate::linalg;

/// Searches for `U` with `q1 o U = q2`.
pub fn is_equivalent(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Option<UnimodularMap>, QformError> {
    if q1.n() != q2.n() {
        return Err(QformError::DimensionMismatch(q1.n(), q2.n()));
    }
    q1.require_positive_definite()?;
    q2.require_positive_definite()?;
    let n = q1.n();
    if n == 0 {
        return Ok(Some(UnimodularMap::identity(0)));
    }
    if q1.det2() != q2.det2() {
        return Ok(None);
    }
    let (r1, u1) = reduce(q1)?;
    let (r2, u2) = reduce(q2)?;
    let v = if r1 == r2 { Some(linalg::identity(n)) } else { isometry(&r1, &r2)? };
    let Some(v) = v else { return Ok(None) };
    // q1 o U1 = r1, r1 o V = r2, r2 o U2^-1 = q2
    let w = u1.then(&UnimodularMap::new(v)?)?.then(&u2.inverse())?;
    debug_assert!(w.verifies(q1, q2));
    if !w.verifies(q1, q2) {
        return Ok(None);
    }
    Ok(Some(w))
}

/// Backtracking search for `V` with `r1 o V = r2`.
fn isometry(r1: &QuadraticForm, r2: &QuadraticForm) -> Result<Option<linalg::IntMatrix>, QformError> {
    let n = r1.n();
    let diag2 = r2.diag();
    let top = *diag2.iter().max().expect("n > 0");
    let e1 = Enumerator::new(r1)?;
    let by_value = e1.vectors_by_value(top)?;
    let counts1: Vec<usize> = by_value.iter().map(Vec::len).collect();
    let counts2: Vec<usize> = Enumerator::new(r2)?.counts(top)?.iter().map(|&c| c as usize).collect();
    if counts1[1..] != counts2[1..] {
        return Ok(None);
    }
    let candidates: Vec<&Vec<Vec<i64>>> = diag2.iter().map(|&d| &by_value[d as usize]).collect();
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
    fn rec(
        k: usize,
        r1: &QuadraticForm,
        r2: &QuadraticForm,
        candidates: &[&Vec<Vec<i64>>],
        chosen: &mut Vec<Vec<i64>>,
    ) -> bool {
        let n = r2.n();
        if k == n {
            let m: linalg::IntMatrix = (0..n).map(|r| chosen.iter().map(|c| c[r]).collect()).collect();
            return linalg::det(&m).abs() == 1;
        }
        for v in candidates[k].iter() {
            // the sign of the first image is free
            if k == 0 && v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                continue;
            }
            if (0..k).all(|j| r1.polar(&chosen[j], v) == r2.g(j, k) as i128) {
                chosen.push(v.clone());
                if rec(k + 1, r1, r2, candidates, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if rec(0, r1, r2, &candidates, &mut chosen) {
        Ok(Some((0..n).map(|r| chosen.iter().map(|c| c[r]).collect()).collect()))
    } else {
        Ok(None)
    }
}

/// How a computed form relates to a printed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchVerdict {
    IdenticalUnderSignedPermutation,
    Equivalent,
    Distinct,
}

/// Coefficient-exact match up to signed variable permutation, falling back
/// to integral equivalence.
pub fn match_paper_form(q: &QuadraticForm, target: &QuadraticForm) -> Result<MatchVerdict, QformError> {
    if q.n() != target.n() {
        return Err(QformError::DimensionMismatch(q.n(), target.n()));
    }
    let n = q.n();
    if signed_permutation_match(q, target, n) {
        return Ok(MatchVerdict::IdenticalUnderSignedPermutation);
    }
    Ok(match is_equivalent(q, target)? {
        Some(_) => MatchVerdict::Equivalent,
        None => MatchVerdict::Distinct,
    })
}

fn signed_permutation_match(q: &QuadraticForm, target: &QuadraticForm, n: usize) -> bool {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = false;
    permutations(&mut perm, 0, &mut |p| {
        if found {
            return;
        }
        // diagonal must agree under the permutation before signs matter
        if (0..n).any(|i| q.g(p[i], p[i]) != target.g(i, i)) {
            return;
        }
        for mask in 0..(1u32 << n) {
            let sign = |i: usize| if mask >> i & 1 == 1 { -1 } else { 1 };
            if (0..n).all(|i| (0..n).all(|j| sign(i) * sign(j) * q.g(p[i], p[j]) == target.g(i, j))) {
                found = true;
                return;
            }
        }
    });
    found
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

//! Greedy reduction of positive-definite forms.
//!
//! Basis vectors are shortened by pair moves `e_k -= q e_i` and by
//! replacements `e_k -> e_k + sum eps_i e_i` with `eps_i in {-1, 0, 1}`
//! until no move decreases a norm; the basis is then sorted by norm and
//! the best signed permutation is chosen. The result is not guaranteed to
//! be canonical, so callers that need class identity must confirm with
//! [`super::is_equivalent`].

use std::cmp::Ordering;

use super::{QformError, QuadraticForm, UnimodularMap};

/// Working state: doubled Gram `g` of the current basis and the basis
/// itself as columns of `basis` (in original coordinates).
struct Reducer {
    n: usize,
    g: Vec<Vec<i128>>,
    basis: Vec<Vec<i128>>,
}

impl Reducer {
    fn new(q: &QuadraticForm) -> Self {
        let n = q.n();
        Reducer {
            n,
            g: (0..n).map(|i| (0..n).map(|j| q.g(i, j) as i128).collect()).collect(),
            basis: (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect(),
        }
    }

    /// Doubled norm of `e_k + sum_i c_i e_i` (with `c_k` ignored).
    fn norm_with(&self, k: usize, c: &[i128]) -> i128 {
        let mut w = c.to_vec();
        w[k] = 1;
        let mut acc = 0;
        for i in 0..self.n {
            if w[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += w[i] * self.g[i][j] * w[j];
            }
        }
        acc
    }

    /// Replaces `e_k` by `e_k + sum_i c_i e_i`.
    fn replace(&mut self, k: usize, c: &[i128]) {
        let n = self.n;
        let mut w = c.to_vec();
        w[k] = 1;
        let new_kk = self.norm_with(k, c);
        let col: Vec<i128> = (0..n).map(|j| (0..n).map(|l| w[l] * self.g[l][j]).sum()).collect();
        for j in 0..n {
            if j != k {
                self.g[k][j] = col[j];
                self.g[j][k] = col[j];
            }
        }
        self.g[k][k] = new_kk;
        for r in 0..n {
            let v: i128 = (0..n).map(|l| self.basis[r][l] * w[l]).sum();
            self.basis[r][k] = v;
        }
    }

    fn pair_pass(&mut self) -> bool {
        let mut changed = false;
        for k in 0..self.n {
            for i in 0..self.n {
                if i == k || self.g[i][i] == 0 {
                    continue;
                }
                // nearest integer to g_ik / g_ii
                let (num, den) = (self.g[i][k], self.g[i][i]);
                let q = (2 * num + den).div_euclid(2 * den);
                if q == 0 {
                    continue;
                }
                let mut c = vec![0; self.n];
                c[i] = -q;
                if self.norm_with(k, &c) < self.g[k][k] {
                    self.replace(k, &c);
                    changed = true;
                }
            }
        }
        changed
    }

    fn ternary_pass(&mut self) -> bool {
        let n = self.n;
        if n < 3 {
            return false;
        }
        let mut changed = false;
        let total = 3usize.pow(n as u32 - 1);
        for k in 0..n {
            for code in 1..total {
                let mut c = vec![0i128; n];
                let mut rest = code;
                for (i, ci) in c.iter_mut().enumerate() {
                    if i == k {
                        continue;
                    }
                    *ci = (rest % 3) as i128 - 1;
                    rest /= 3;
                }
                if c.iter().all(|&x| x == 0) {
                    continue;
                }
                if self.norm_with(k, &c) < self.g[k][k] {
                    self.replace(k, &c);
                    changed = true;
                }
            }
        }
        changed
    }

    fn sort_by_norm(&mut self) {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.g[i][i]);
        self.permute_signed(&order, &vec![1; n]);
    }

    /// New basis vector `k` is `sign[k] * old e_{perm[k]}`.
    fn permute_signed(&mut self, perm: &[usize], sign: &[i128]) {
        let n = self.n;
        let g = (0..n).map(|i| (0..n).map(|j| sign[i] * sign[j] * self.g[perm[i]][perm[j]]).collect()).collect();
        let basis = (0..n).map(|r| (0..n).map(|k| sign[k] * self.basis[r][perm[k]]).collect()).collect();
        self.g = g;
        self.basis = basis;
    }
}

/// Ordering key: diagonal ascending first, then off-diagonal entries in
/// row-major order with larger values preferred.
fn key_cmp(a: &[Vec<i128>], b: &[Vec<i128>]) -> Ordering {
    let n = a.len();
    for i in 0..n {
        match a[i][i].cmp(&b[i][i]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            match b[i][j].cmp(&a[i][j]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
    }
    Ordering::Equal
}

/// Upper limit on signed permutations tried in the final minimisation.
const MAX_SIGNED_PERMUTATIONS: usize = 50_000;

fn permutations_within_groups(diag: &[i128]) -> Vec<Vec<usize>> {
    fn rec(groups: &[Vec<usize>], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((first, rest)) = groups.split_first() else {
            out.push(acc.clone());
            return;
        };
        let mut items = first.clone();
        permute(&mut items, 0, &mut |p| {
            let len = acc.len();
            acc.extend_from_slice(p);
            rec(rest, acc, out);
            acc.truncate(len);
        });
    }
    fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if diag[g[0]] == *d => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut out = Vec::new();
    rec(&groups, &mut Vec::new(), &mut out);
    out
}

fn minimise_signed_permutation(r: &mut Reducer) {
    let n = r.n;
    if n < 2 {
        return;
    }
    let diag: Vec<i128> = (0..n).map(|i| r.g[i][i]).collect();
    let mut group_perms: usize = 1;
    let mut run = 1;
    for i in 1..=n {
        if i < n && diag[i] == diag[i - 1] {
            run += 1;
        } else {
            group_perms = group_perms.saturating_mul((1..=run).product());
            run = 1;
        }
    }
    let signs = 1usize << (n - 1);
    if group_perms.saturating_mul(signs) > MAX_SIGNED_PERMUTATIONS {
        // greedy: make each first-row entry nonnegative
        let mut sign = vec![1i128; n];
        for j in 1..n {
            if r.g[0][j] < 0 {
                sign[j] = -1;
            }
        }
        let id: Vec<usize> = (0..n).collect();
        r.permute_signed(&id, &sign);
        return;
    }
    // (permutation, signs, resulting Gram)
    type Candidate = (Vec<usize>, Vec<i128>, Vec<Vec<i128>>);
    let mut best: Option<Candidate> = None;
    for perm in permutations_within_groups(&diag) {
        for mask in 0..signs {
            let sign: Vec<i128> = (0..n).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect();
            let g: Vec<Vec<i128>> =
                (0..n).map(|i| (0..n).map(|j| sign[i] * sign[j] * r.g[perm[i]][perm[j]]).collect()).collect();
            if best.as_ref().is_none_or(|(_, _, bg)| key_cmp(&g, bg) == Ordering::Less) {
                best = Some((perm.clone(), sign, g));
            }
        }
    }
    let (perm, sign, _) = best.expect("at least the identity");
    r.permute_signed(&perm, &sign);
}

/// Returns `(R, U)` with `Q o U = R`.
pub fn reduce(q: &QuadraticForm) -> Result<(QuadraticForm, UnimodularMap), QformError> {
    q.require_positive_definite()?;
    let mut r = Reducer::new(q);
    loop {
        let a = r.pair_pass();
        let b = r.ternary_pass();
        if !a && !b {
            break;
        }
    }
    r.sort_by_norm();
    minimise_signed_permutation(&mut r);
    let to64 = |m: &Vec<Vec<i128>>| -> Result<Vec<Vec<i64>>, QformError> {
        m.iter().map(|row| row.iter().map(|&x| i64::try_from(x).map_err(|_| QformError::Overflow)).collect()).collect()
    };
    let form = QuadraticForm::from_gram2_unchecked(&to64(&r.g)?)?;
    let u = UnimodularMap::new(to64(&r.basis)?)?;
    debug_assert!(u.verifies(q, &form));
    Ok((form, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::parse_form;

    fn reduced(s: &str) -> QuadraticForm {
        let q = parse_form(s).unwrap();
        let (r, u) = reduce(&q).unwrap();
        assert!(u.verifies(&q, &r));
        r
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduced("x^2+2xy+2y^2"), parse_form("x^2+y^2").unwrap());
        assert_eq!(reduced("w^2+x^2+y^2+z^2"), parse_form("w^2+x^2+y^2+z^2").unwrap());
        assert_eq!(reduced("2x^2+2xy+3y^2"), parse_form("2x^2+2xy+3y^2").unwrap());
        assert_eq!(reduced("3x^2+2xy+2y^2"), parse_form("2x^2+2xy+3y^2").unwrap());
        assert_eq!(reduced("2x^2-2xy+3y^2"), parse_form("2x^2+2xy+3y^2").unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        let q = parse_form("x^2+2xy+y^2").unwrap();
        assert!(matches!(reduce(&q), Err(QformError::Degenerate { rank: 1, n: 2 })));
    }

    /// Brute force over all 2x2 unimodular matrices with entries in [-4, 4].
    fn brute_min_binary(q: &QuadraticForm) -> Vec<i64> {
        let mut best: Option<Vec<i64>> = None;
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    for d in -4i64..=4 {
                        if (a * d - b * c).abs() != 1 {
                            continue;
                        }
                        let t = q.compose(&vec![vec![a, b], vec![c, d]]).unwrap();
                        let key = vec![t.coeff(0, 0), t.coeff(1, 1), -t.coeff(0, 1)];
                        if best.as_ref().is_none_or(|k| key < *k) {
                            best = Some(key);
                        }
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn binary_reduction_matches_brute_force() {
        for s in
            ["2x^2+2xy+3y^2", "5x^2+7xy+3y^2", "x^2+xy+2y^2", "11x^2-6xy+15y^2", "7x^2+13xy+7y^2", "3x^2+10xy+9y^2"]
        {
            let r = reduced(s);
            assert_eq!(
                vec![r.coeff(0, 0), r.coeff(1, 1), -r.coeff(0, 1)],
                brute_min_binary(&parse_form(s).unwrap()),
                "{s}"
            );
        }
    }
}

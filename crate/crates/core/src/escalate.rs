//! Escalation trees.
//!
//! Starting from the zero form, a node whose truant is `t` is escalated by
//! adjoining one basis vector of norm `t`. Its cross coefficients with the
//! existing basis are bounded by Cauchy-Schwarz, `c_{i,new}^2 <= 4 c_ii t`
//! (and even in the classical regime); extensions that are not positive
//! definite are dropped and the rest are deduplicated up to integral
//! equivalence.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{represents, truant, EnumError, Enumerator, RepresentationWitness};
use crate::linalg::{self, isqrt};
use crate::qform::{is_equivalent, reduce, QformError, QuadraticForm};

/// Escalation trees are built up to this rank at most.
pub const MAX_TREE_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EscalateError {
    #[error("node has no truant below the cap and cannot be escalated")]
    NoTruant,
    #[error("tree rank {0} exceeds the supported maximum of {MAX_TREE_RANK}")]
    RankTooLarge(usize),
    #[error(transparent)]
    Form(#[from] QformError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Even cross coefficients (15-Theorem setting).
    Classical,
    /// Arbitrary integer cross coefficients (290-Theorem setting).
    IntegerValued,
}

/// One equivalence class in an escalation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscalatorNode {
    pub form: QuadraticForm,
    pub rank: usize,
    /// `None` when every value up to the cap is represented.
    pub truant: Option<i64>,
    /// Index of the first parent (in the previous rank level) producing this class.
    pub parent: Option<usize>,
    pub regime: Regime,
    /// Shows that this form represents its parent's truant.
    pub parent_truant_witness: Option<RepresentationWitness>,
}

impl EscalatorNode {
    /// The zero-dimensional form; its truant is 1.
    pub fn root(regime: Regime) -> Self {
        EscalatorNode {
            form: QuadraticForm::empty(),
            rank: 0,
            truant: Some(1),
            parent: None,
            regime,
            parent_truant_witness: None,
        }
    }

    /// A node for an arbitrary positive-definite form, with its truant computed up to `cap`.
    pub fn from_form(form: QuadraticForm, regime: Regime, cap: i64) -> Result<Self, EscalateError> {
        let t = truant(&form, cap)?.value();
        Ok(EscalatorNode { rank: form.n(), form, truant: t, parent: None, regime, parent_truant_witness: None })
    }
}

/// Orders reduced forms: diagonal ascending, then off-diagonal entries
/// (row-major) with larger values first.
pub(crate) fn form_order_key(q: &QuadraticForm) -> (Vec<i64>, Vec<i64>) {
    let n = q.n();
    let off = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| -q.g(i, j)).collect();
    (q.diag(), off)
}

/// Dedup index over equivalence classes: exact reduced-form hits first,
/// then invariant buckets confirmed by [`is_equivalent`].
#[derive(Debug, Default, Clone)]
pub struct ClassIndex {
    classes: Vec<QuadraticForm>,
    exact: HashMap<QuadraticForm, usize>,
    buckets: HashMap<(i128, Vec<u64>), Vec<usize>>,
}

/// Theta coefficients used to bucket classes.
const THETA_KEY_BOUND: i64 = 12;

impl ClassIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[QuadraticForm] {
        &self.classes
    }

    fn invariant(q: &QuadraticForm) -> Result<(i128, Vec<u64>), EscalateError> {
        Ok((q.det2(), Enumerator::new(q)?.counts(THETA_KEY_BOUND)?))
    }

    /// Class id of a reduced form, if already present.
    pub fn find(&mut self, reduced: &QuadraticForm) -> Result<Option<usize>, EscalateError> {
        if let Some(&id) = self.exact.get(reduced) {
            return Ok(Some(id));
        }
        let key = Self::invariant(reduced)?;
        if let Some(ids) = self.buckets.get(&key) {
            for &id in ids {
                if is_equivalent(&self.classes[id], reduced)?.is_some() {
                    self.exact.insert(reduced.clone(), id);
                    return Ok(Some(id));
                }
            }
        }
        Ok(None)
    }

    /// Inserts a reduced form; returns `(id, is_new)`.
    pub fn insert(&mut self, reduced: QuadraticForm) -> Result<(usize, bool), EscalateError> {
        if let Some(id) = self.find(&reduced)? {
            return Ok((id, false));
        }
        let key = Self::invariant(&reduced)?;
        let id = self.classes.len();
        self.classes.push(reduced.clone());
        self.exact.insert(reduced, id);
        self.buckets.entry(key).or_default().push(id);
        Ok((id, true))
    }
}

/// All cross-coefficient vectors allowed for a new vector of norm `t`.
fn cross_terms(q: &QuadraticForm, t: i64, regime: Regime) -> Vec<Vec<i64>> {
    let bounds: Vec<i64> = q.diag().iter().map(|&c| isqrt(4 * c as i128 * t as i128) as i64).collect();
    let mut out = vec![Vec::new()];
    for &b in &bounds {
        let range: Vec<i64> = (-b..=b).filter(|c| regime == Regime::IntegerValued || c % 2 == 0).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                range.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Positive-definite extensions of `q` by a vector of norm `t`, reduced,
/// in cross-term lexicographic order (not yet deduplicated).
fn raw_escalations(q: &QuadraticForm, t: i64, regime: Regime) -> Result<Vec<QuadraticForm>, EscalateError> {
    let n = q.n();
    let base = q.gram2();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for c in cross_terms(q, t, regime) {
        let mut g = vec![vec![0i64; n + 1]; n + 1];
        for i in 0..n {
            g[i][..n].copy_from_slice(&base[i]);
            g[i][n] = c[i];
            g[n][i] = c[i];
        }
        g[n][n] = 2 * t;
        if !linalg::is_positive_definite(&g) {
            continue;
        }
        let (r, _) = reduce(&QuadraticForm::from_gram2_unchecked(&g)?)?;
        if seen.insert(r.clone()) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Children of a node: one class per equivalence class of escalation,
/// in reduced-form order, with truants computed up to `cap`.
pub fn escalations(node: &EscalatorNode, cap: i64) -> Result<Vec<EscalatorNode>, EscalateError> {
    let t = node.truant.ok_or(EscalateError::NoTruant)?;
    let mut index = ClassIndex::new();
    for r in raw_escalations(&node.form, t, node.regime)? {
        index.insert(r)?;
    }
    let mut forms = index.classes().to_vec();
    forms.sort_by_key(form_order_key);
    forms
        .into_par_iter()
        .map(|form| {
            let witness = represents(&form, t)?;
            let tr = truant(&form, cap)?.value();
            Ok(EscalatorNode {
                rank: form.n(),
                form,
                truant: tr,
                parent: None,
                regime: node.regime,
                parent_truant_witness: witness,
            })
        })
        .collect()
}

/// Rank-by-rank escalation classes.
#[derive(Debug, Clone)]
pub struct EscalatorTree {
    pub regime: Regime,
    pub truant_cap: i64,
    /// `levels[k]` holds the rank-`k` nodes; `levels[0]` is the root.
    pub levels: Vec<Vec<EscalatorNode>>,
    indexes: Vec<ClassIndex>,
}

impl EscalatorTree {
    pub fn level(&self, rank: usize) -> &[EscalatorNode] {
        self.levels.get(rank).map_or(&[], Vec::as_slice)
    }

    pub fn max_rank(&self) -> usize {
        self.levels.len() - 1
    }

    /// Nodes with no truant below the cap (candidates for universality).
    pub fn leaf_candidates(&self, rank: usize) -> impl Iterator<Item = &EscalatorNode> {
        self.level(rank).iter().filter(|n| n.truant.is_none())
    }

    /// Index of the class of `q` among the rank-`n` nodes, if any.
    pub fn locate(&self, q: &QuadraticForm) -> Result<Option<usize>, EscalateError> {
        let n = q.n();
        if n > self.max_rank() {
            return Ok(None);
        }
        let (r, _) = reduce(q)?;
        let mut index = self.indexes[n].clone();
        index.find(&r)
    }

    /// The chain of nodes from the root to the class of `q`, if present.
    pub fn lineage(&self, q: &QuadraticForm) -> Result<Option<Vec<&EscalatorNode>>, EscalateError> {
        let Some(mut i) = self.locate(q)? else { return Ok(None) };
        let mut chain = Vec::with_capacity(q.n() + 1);
        for rank in (0..=q.n()).rev() {
            let node = &self.levels[rank][i];
            chain.push(node);
            match node.parent {
                Some(p) => i = p,
                None => break,
            }
        }
        chain.reverse();
        Ok(Some(chain))
    }

    /// Every truant observed at ranks `0..=max_rank`, ascending.
    pub fn truants(&self) -> Vec<i64> {
        let mut t: Vec<i64> = self.levels.iter().flatten().filter_map(|n| n.truant).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// Breadth-first escalation from the zero form up to `max_rank`.
pub fn build_tree(regime: Regime, max_rank: usize, cap: i64) -> Result<EscalatorTree, EscalateError> {
    if max_rank > MAX_TREE_RANK {
        return Err(EscalateError::RankTooLarge(max_rank));
    }
    let root = EscalatorNode::root(regime);
    let mut root_index = ClassIndex::new();
    root_index.insert(QuadraticForm::empty())?;
    let mut levels = vec![vec![root]];
    let mut indexes = vec![root_index];
    for rank in 1..=max_rank {
        let parents = &levels[rank - 1];
        let raw: Vec<Vec<QuadraticForm>> = parents
            .par_iter()
            .map(|p| match p.truant {
                Some(t) => raw_escalations(&p.form, t, regime),
                None => Ok(Vec::new()),
            })
            .collect::<Result<_, _>>()?;
        // deterministic merge: parents in level order, candidates in cross-term order
        let mut index = ClassIndex::new();
        let mut first_parent: Vec<usize> = Vec::new();
        for (pi, forms) in raw.into_iter().enumerate() {
            for r in forms {
                let (id, new) = index.insert(r)?;
                if new {
                    debug_assert_eq!(id, first_parent.len());
                    first_parent.push(pi);
                }
            }
        }
        let mut order: Vec<usize> = (0..index.len()).collect();
        order.sort_by_key(|&i| form_order_key(&index.classes()[i]));
        let mut sorted_index = ClassIndex::new();
        for &i in &order {
            sorted_index.insert(index.classes()[i].clone())?;
        }
        let nodes: Vec<EscalatorNode> = order
            .par_iter()
            .map(|&i| {
                let form = index.classes()[i].clone();
                let parent = first_parent[i];
                let t = parents[parent].truant.expect("expanded parents have truants");
                Ok(EscalatorNode {
                    rank,
                    truant: truant(&form, cap)?.value(),
                    parent_truant_witness: represents(&form, t)?,
                    form,
                    parent: Some(parent),
                    regime,
                })
            })
            .collect::<Result<_, EscalateError>>()?;
        levels.push(nodes);
        indexes.push(sorted_index);
    }
    Ok(EscalatorTree { regime, truant_cap: cap, levels, indexes })
}

type TreeCache = Mutex<BTreeMap<(Regime, i64), Arc<EscalatorTree>>>;

/// Shared rank-4 trees, built once per `(regime, cap)`.
pub fn cached_tree(regime: Regime, cap: i64) -> Result<Arc<EscalatorTree>, EscalateError> {
    static CACHE: OnceLock<TreeCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("tree cache").get(&(regime, cap)) {
        return Ok(Arc::clone(t));
    }
    let tree = Arc::new(build_tree(regime, MAX_TREE_RANK, cap)?);
    cache.lock().expect("tree cache").insert((regime, cap), Arc::clone(&tree));
    Ok(tree)
}

/// Is the quaternary form `q` equivalent to a rank-4 node of the tree?
pub fn is_escalator(q: &QuadraticForm, regime: Regime) -> Result<bool, EscalateError> {
    is_escalator_in(&*cached_tree(regime, crate::enumerate::DEFAULT_TRUANT_CAP)?, q)
}

pub fn is_escalator_in(tree: &EscalatorTree, q: &QuadraticForm) -> Result<bool, EscalateError> {
    if q.n() != MAX_TREE_RANK || tree.max_rank() < MAX_TREE_RANK {
        return Ok(false);
    }
    Ok(tree.locate(q)?.is_some())
}

/// Truants of the tree that fall outside `allowed`.
pub fn unexpected_truants(tree: &EscalatorTree, allowed: &[i64]) -> Vec<i64> {
    tree.truants().into_iter().filter(|t| !allowed.contains(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::parse_form;

    fn form(s: &str) -> QuadraticForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn root_escalates_to_x_squared() {
        let kids = escalations(&EscalatorNode::root(Regime::IntegerValued), 100).unwrap();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].form, form("x^2"));
        assert_eq!(kids[0].truant, Some(2));
    }

    #[test]
    fn binary_escalations() {
        let node = EscalatorNode::from_form(form("x^2"), Regime::IntegerValued, 100).unwrap();
        let kids = escalations(&node, 100).unwrap();
        let forms: Vec<_> = kids.iter().map(|k| k.form.clone()).collect();
        assert_eq!(forms, vec![form("x^2+y^2"), form("x^2+xy+2y^2"), form("x^2+2y^2")]);
        for k in &kids {
            assert!(k.parent_truant_witness.as_ref().unwrap().verify(&k.form));
        }

        let node = EscalatorNode::from_form(form("x^2"), Regime::Classical, 100).unwrap();
        let kids = escalations(&node, 100).unwrap();
        let forms: Vec<_> = kids.iter().map(|k| k.form.clone()).collect();
        assert_eq!(forms, vec![form("x^2+y^2"), form("x^2+2y^2")]);
    }

    #[test]
    fn universal_node_cannot_escalate() {
        let node = EscalatorNode::from_form(form("w^2+x^2+y^2+z^2"), Regime::Classical, 50).unwrap();
        assert_eq!(node.truant, None);
        assert_eq!(escalations(&node, 50), Err(EscalateError::NoTruant));
    }

    #[test]
    fn shallow_trees() {
        let tree = build_tree(Regime::IntegerValued, 2, 1000).unwrap();
        assert_eq!(tree.level(1).len(), 1);
        let truants: Vec<_> = tree.level(2).iter().map(|n| n.truant.unwrap()).collect();
        assert_eq!(truants, vec![3, 3, 5]);
        let tree = build_tree(Regime::Classical, 2, 1000).unwrap();
        assert_eq!(tree.level(2).len(), 2);
        assert!(matches!(build_tree(Regime::Classical, 5, 10), Err(EscalateError::RankTooLarge(5))));
    }

    #[test]
    fn classical_ternary_level() {
        let tree = build_tree(Regime::Classical, 3, 1000).unwrap();
        assert!(!tree.level(3).is_empty());
        for node in tree.level(3) {
            assert!(node.form.is_classical());
        }
    }

    #[test]
    fn class_index_merges_equivalent_forms() {
        let mut idx = ClassIndex::new();
        let (a, new_a) = idx.insert(reduce(&form("x^2+y^2")).unwrap().0).unwrap();
        let (b, new_b) = idx.insert(reduce(&form("x^2+2xy+2y^2")).unwrap().0).unwrap();
        assert!(new_a && !new_b);
        assert_eq!(a, b);
        let (c, new_c) = idx.insert(reduce(&form("x^2+2y^2")).unwrap().0).unwrap();
        assert!(new_c && c != a);
    }
}

//! Escalation trees below the full integer-valued rank-4 build.

use hermitia::criteria::CriterionSet;
use hermitia::enumerate::{represents, DEFAULT_TRUANT_CAP};
use hermitia::escalate::{build_tree, escalations, EscalateError, EscalatorNode, Regime};
use hermitia::linalg;

#[test]
fn binary_levels() {
    let int = build_tree(Regime::IntegerValued, 2, DEFAULT_TRUANT_CAP).unwrap();
    let forms: Vec<String> = int.level(2).iter().map(|n| n.form.to_alias_string()).collect();
    assert_eq!(forms, ["x^2+y^2", "x^2+x*y+2*y^2", "x^2+2*y^2"]);
    let mut t: Vec<i64> = int.level(2).iter().map(|n| n.truant.unwrap()).collect();
    t.sort_unstable();
    assert_eq!(t, [3, 3, 5]);
    let cls = build_tree(Regime::Classical, 2, DEFAULT_TRUANT_CAP).unwrap();
    assert_eq!(cls.level(2).len(), 2);
}

#[test]
fn classical_tree_through_rank_four() {
    let tree = build_tree(Regime::Classical, 4, DEFAULT_TRUANT_CAP).unwrap();
    let sizes: Vec<usize> = tree.levels.iter().map(Vec::len).collect();
    assert_eq!(sizes, [1, 1, 2, 9, 207]);
    assert_eq!(tree.leaf_candidates(4).count(), 201);
    assert_eq!(tree.truants(), CriterionSet::S15.values());
    for rank in 1..=4 {
        for n in tree.level(rank) {
            assert!(n.form.is_classical());
            let g = n.form.gram2();
            for k in 1..=rank {
                let minor: linalg::IntMatrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
                assert!(linalg::det(&minor) > 0);
            }
            // the child represents the parent's truant
            let parent = &tree.level(rank - 1)[n.parent.unwrap()];
            let w = n.parent_truant_witness.as_ref().unwrap();
            assert_eq!(Some(w.t), parent.truant);
            assert!(w.verify(&n.form));
            if let Some(t) = n.truant {
                assert!(represents(&n.form, t).unwrap().is_none());
            }
        }
    }
}

#[test]
fn ternary_integer_level_is_deterministic() {
    let a = build_tree(Regime::IntegerValued, 3, DEFAULT_TRUANT_CAP).unwrap();
    let b = build_tree(Regime::IntegerValued, 3, DEFAULT_TRUANT_CAP).unwrap();
    assert_eq!(a.levels, b.levels);
    assert_eq!(a.level(3).len(), 35);
    assert!(a.truants().iter().all(|t| CriterionSet::S290.values().contains(t)));
}

#[test]
fn escalation_errors() {
    assert!(matches!(build_tree(Regime::Classical, 5, 100), Err(EscalateError::RankTooLarge(5))));
    let universal =
        EscalatorNode::from_form(hermitia::qform::parse_form("w^2+x^2+y^2+z^2").unwrap(), Regime::IntegerValued, 200)
            .unwrap();
    assert_eq!(universal.truant, None);
    assert_eq!(escalations(&universal, 200), Err(EscalateError::NoTruant));
}

//! Builds an escalation tree and prints its levels.
//!
//! `cargo run --release --example escalator_tree -- classical 4`
//! (`integral 4` takes under a minute on one core)

use hermitia::enumerate::DEFAULT_TRUANT_CAP;
use hermitia::escalate::{build_tree, Regime};

fn main() {
    let mut args = std::env::args().skip(1);
    let regime = match args.next().as_deref() {
        Some("integral") => Regime::IntegerValued,
        _ => Regime::Classical,
    };
    let rank: usize = args.next().map_or(4, |r| r.parse().expect("rank"));
    let tree = build_tree(regime, rank, DEFAULT_TRUANT_CAP).expect("tree");
    for (k, level) in tree.levels.iter().enumerate() {
        let leaves = level.iter().filter(|n| n.truant.is_none()).count();
        println!("rank {k}: {} classes, {leaves} without truant below {DEFAULT_TRUANT_CAP}", level.len());
        if k == 3 {
            for n in level {
                println!("    {:<36} truant {:?}", n.form.to_alias_string(), n.truant);
            }
        }
    }
    println!("truants: {:?}", tree.truants());
}

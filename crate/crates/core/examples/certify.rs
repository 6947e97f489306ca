//! Certification report for one lattice.
//!
//! `cargo run --release --example certify -- 'Qm7:<1,3>'`

use hermitia::criteria::{certify, DEFAULT_EMPIRICAL_BOUND};
use hermitia::hermitian::parse_lattice;

fn main() {
    let label = std::env::args().nth(1).unwrap_or_else(|| "Qm7:<1,3>".into());
    let l = parse_lattice(&label).expect("lattice");
    let report = certify(&l, DEFAULT_EMPIRICAL_BOUND).expect("certification");
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
}

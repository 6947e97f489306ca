//! Checks a form against the three criterion sets.
//!
//! `cargo run --example criteria -- 'w^2+wx+3x^2+y^2+yz+3z^2'`

use hermitia::criteria::{check_criterion, criterion_sets};
use hermitia::qform::parse_form;

fn main() {
    let form = std::env::args().nth(1).unwrap_or_else(|| "w^2+wx+3x^2+y^2+yz+3z^2".into());
    let q = parse_form(&form).expect("form");
    for set in criterion_sets() {
        let c = check_criterion(&q, set).expect("check");
        match c.first_failure {
            None => println!("{:<5} pass ({} witnesses)", set.name(), set.values().len()),
            Some(t) => println!("{:<5} fails at {t}", set.name()),
        }
    }
}

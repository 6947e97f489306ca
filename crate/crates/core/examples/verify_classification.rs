//! Runs the whole classification check and prints the text summary.

use hermitia::classify::verify_classification;
use hermitia::criteria::DEFAULT_EMPIRICAL_BOUND;

fn main() {
    let report = verify_classification(DEFAULT_EMPIRICAL_BOUND).expect("pipeline");
    print!("{}", report.to_text());
}

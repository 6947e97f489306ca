//! Representation queries: a witness, the represented set, and the truant.
//!
//! `cargo run --example representation -- 'w^2+x^2+2y^2+5z^2' 60`

use hermitia::enumerate::{represented_set, represents, truant, DEFAULT_TRUANT_CAP};
use hermitia::qform::parse_form;

fn main() {
    let mut args = std::env::args().skip(1);
    let form = args.next().unwrap_or_else(|| "w^2+x^2+2y^2+5z^2".into());
    let bound: i64 = args.next().map_or(60, |b| b.parse().expect("bound"));
    let q = parse_form(&form).expect("form");
    for t in [7, 15, 23] {
        match represents(&q, t).expect("search") {
            Some(w) => println!("{t} = Q{:?}", w.vector),
            None => println!("{t} is not represented"),
        }
    }
    let set = represented_set(&q, bound).expect("set");
    let missing: Vec<i64> = (1..=bound).filter(|&t| !set.contains(t)).collect();
    println!("missing up to {bound}: {missing:?}");
    println!("truant: {:?}", truant(&q, DEFAULT_TRUANT_CAP).expect("truant"));
}

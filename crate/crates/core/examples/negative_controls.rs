//! Lattices just outside the catalog and the values they miss.

use hermitia::classify::negative_controls;

fn main() {
    for c in negative_controls().expect("controls") {
        match c.truant {
            Some(t) => println!("{:<12} {:<36} misses {t} (re-verified: {})", c.label, c.reduced_form, c.verified),
            None => println!("{:<12} {:<36} inconclusive", c.label, c.reduced_form),
        }
    }
}

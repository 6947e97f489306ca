//! Lists the 25 universal binary Hermitian lattices with their trace forms.

use hermitia::hermitian::catalog;
use hermitia::qform::{extract_basis, trace_form};

fn main() {
    for l in catalog() {
        let q = trace_form(&l).expect("catalog trace form");
        let (r, _) = extract_basis(&q).expect("basis");
        println!("{:<24} rank {}  {}", l.label().unwrap_or_default(), l.rank(), r.to_alias_string());
    }
}

//! Trace form of a lattice given on a redundant generating set, its basis
//! extraction, and the equivalence with a printed quaternary form.
//!
//! `cargo run --example trace_forms -- 'm=23: 1, 0, 0; 0, 2, w; 0, 1-w, 3' 'w^2+2x^2+xy+3y^2+wz+6z^2'`

use hermitia::hermitian::parse_lattice;
use hermitia::qform::{extract_basis, is_equivalent, parse_form, trace_form};

fn main() {
    let mut args = std::env::args().skip(1);
    let lattice = args.next().unwrap_or_else(|| "Qm23:<1>_|_[2,w;3]".into());
    let printed = args.next().unwrap_or_else(|| "w^2+2x^2+xy+3y^2+wz+6z^2".into());
    let l = parse_lattice(&lattice).expect("lattice");
    let q = trace_form(&l).expect("trace form");
    println!("lattice     {l}");
    println!("trace form  {q}  (rank {} in {} variables)", q.rank(), q.n());
    let (r, t) = extract_basis(&q).expect("basis");
    println!("extracted   {}", r.to_alias_string());
    println!("basis       {t:?}");
    let target = parse_form(&printed).expect("printed form");
    match is_equivalent(&r, &target).expect("equivalence") {
        Some(u) => println!("equivalent to {printed} via {:?}", u.matrix()),
        None => println!("not equivalent to {printed}"),
    }
}

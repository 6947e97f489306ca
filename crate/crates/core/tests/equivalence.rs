//! Invariants of reduction and integral equivalence.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hermitia::enumerate::Enumerator;
use hermitia::linalg;
use hermitia::qform::{is_equivalent, parse_form, reduce, QuadraticForm, UnimodularMap};

fn random_unimodular(rng: &mut StdRng, n: usize) -> linalg::IntMatrix {
    let mut u = linalg::identity(n);
    for _ in 0..rng.gen_range(0..10) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let c = rng.gen_range(-2..=2);
        if i != j {
            for row in u.iter_mut() {
                row[j] += c * row[i];
            }
        }
        if rng.gen_bool(0.2) {
            for row in u.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    u
}

const SAMPLES: [&str; 8] = [
    "w^2+x^2+y^2+z^2",
    "w^2+wx+2x^2+3y^2+3yz+6z^2",
    "w^2+2x^2+xy+3y^2+wz+6z^2",
    "w^2+2x^2+2xy+3y^2+5z^2",
    "x^2+xy+y^2+xz+z^2",
    "x^2+2y^2+5z^2",
    "2x^2+xy+3y^2",
    "3x^2+x*y+5*y^2",
];

#[test]
fn transformed_forms_are_equivalent_with_equal_theta() {
    let mut rng = StdRng::seed_from_u64(23);
    for s in SAMPLES {
        let q = parse_form(s).unwrap();
        let theta = Enumerator::new(&q).unwrap().counts(50).unwrap();
        for _ in 0..6 {
            let u = random_unimodular(&mut rng, q.n());
            let q2 = q.compose(&u).unwrap();
            assert_eq!(q2.det2(), q.det2());
            assert_eq!(Enumerator::new(&q2).unwrap().counts(50).unwrap(), theta);
            let w = is_equivalent(&q, &q2).unwrap().expect("equivalent by construction");
            assert!(w.verifies(&q, &q2));
            let (r, v) = reduce(&q2).unwrap();
            assert!(v.verifies(&q2, &r));
        }
    }
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let mut rng = StdRng::seed_from_u64(29);
    let q = parse_form(SAMPLES[1]).unwrap();
    let a = q.compose(&random_unimodular(&mut rng, 4)).unwrap();
    let b = q.compose(&random_unimodular(&mut rng, 4)).unwrap();
    let ab = is_equivalent(&a, &b).unwrap().unwrap();
    let ba = is_equivalent(&b, &a).unwrap().unwrap();
    assert!(ab.verifies(&a, &b) && ba.verifies(&b, &a));
    let aa = is_equivalent(&a, &a).unwrap().unwrap();
    assert!(aa.verifies(&a, &a));
    // composition of witnesses
    let qa = is_equivalent(&q, &a).unwrap().unwrap();
    let qb = qa.then(&ab).unwrap();
    assert!(qb.verifies(&q, &b));
}

#[test]
fn inequivalent_samples_stay_apart() {
    let forms: Vec<QuadraticForm> = SAMPLES.iter().map(|s| parse_form(s).unwrap()).collect();
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if a.n() == b.n() {
                assert!(is_equivalent(a, b).unwrap().is_none(), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn genus_mates_are_separated() {
    // same determinant and local data, different classes
    let a = parse_form("x^2+xy+6y^2").unwrap();
    let b = parse_form("2x^2+xy+3y^2").unwrap();
    assert!(is_equivalent(&a, &b).unwrap().is_none());
    let u = UnimodularMap::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
    assert!(u.verifies(&b, &b.compose(u.matrix()).unwrap()));
}

mod common;

use common::{group, ints, CYCLIC, DIHEDRAL};
use qinv::dunkl::{c_scalar, check_axioms, DunklFamily};
use qinv::exactnum::Cyc;
use qinv::polyring::MultiPoly;
use qinv::refgroup::{character_inner, Multiplicity};

const ALL: [&str; 10] = [
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "dihedral:2:1",
    "dihedral:2:2",
    "dihedral:3:1",
    "dihedral:3:3",
    "dihedral:4:1",
    "dihedral:4:4",
    "symmetric:3",
];

fn expected_order(spec: &str) -> usize {
    let parts: Vec<usize> = spec.split(':').skip(1).map(|p| p.parse().expect("number")).collect();
    match spec.split(':').next() {
        Some("cyclic") => parts[0],
        Some("dihedral") => parts[0] * parts[0] * 2 / parts[1],
        Some("symmetric") => (1..=parts[0]).product(),
        _ => unreachable!(),
    }
}

#[test]
fn group_orders_match_closed_form() {
    for spec in ALL {
        assert_eq!(group(spec).order(), expected_order(spec), "{spec}");
    }
}

#[test]
fn fundamental_degrees_determine_order_and_reflections() {
    for spec in ALL {
        let g = group(spec);
        let degrees = g.fundamental_degrees();
        assert_eq!(degrees.iter().map(|&d| d as usize).product::<usize>(), g.order(), "{spec}");
        assert_eq!(degrees.iter().map(|&d| d as usize - 1).sum::<usize>(), g.reflection_count(), "{spec}");
        for f in g.fundamental_invariants() {
            assert!(g.is_invariant(&f, 0), "{spec}");
        }
    }
}

#[test]
fn irreducible_characters_are_orthonormal() {
    for spec in ALL {
        let g = group(spec);
        let reps = g.irreps().expect("irreps");
        assert_eq!(reps.iter().map(|r| r.dim * r.dim).sum::<usize>(), g.order(), "{spec}");
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let expected = Cyc::from_int(i64::from(i == j));
                assert_eq!(character_inner(&a.character, &b.character), expected, "{spec} {i} {j}");
            }
        }
    }
}

#[test]
fn dunkl_operators_kill_constants() {
    for spec in CYCLIC.iter().chain(&DIHEDRAL) {
        let g = group(spec);
        let family = DunklFamily::new(&g, &Multiplicity::unit(&g, 0, 1));
        for i in 0..g.dim() {
            assert!(family.coordinate(i).apply_poly(&MultiPoly::one(g.dim())).is_zero(), "{spec}");
        }
    }
}

#[test]
fn central_scalar_vanishes_at_zero_multiplicity() {
    for spec in ALL {
        let g = group(spec);
        let k = Multiplicity::zero(&g);
        for rep in g.irreps().expect("irreps") {
            assert!(c_scalar(&g, &k, rep).is_zero(), "{spec} {}", rep.name);
        }
    }
}

#[test]
fn axioms_hold_for_symmetric_three() {
    let g = group("symmetric:3");
    for kv in 0..=2 {
        let report = check_axioms(&DunklFamily::new(&g, &ints(&[&[0, kv]])), 3);
        assert!(report.passed(), "k = {kv}: {:?}", report.failures);
    }
}

#[test]
fn dual_group_has_conjugate_matrices() {
    for spec in ["cyclic:3", "dihedral:3:1", "dihedral:4:4"] {
        let g = group(spec);
        let dual = g.dual().expect("dual");
        assert_eq!(dual.order(), g.order());
        for (a, b) in g.elements().iter().zip(dual.elements()) {
            assert_eq!(b.matrix, a.matrix.conj(), "{spec}");
        }
    }
}

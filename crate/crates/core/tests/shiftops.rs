mod common;

use common::{group, ints, random_rational_ks};
use qinv::dunkl::{DiffOp, DunklFamily};
use qinv::exactnum::Cyc;
use qinv::polyring::{LocalizedPoly, Monomial, MultiPoly};
use qinv::refgroup::Multiplicity;
use qinv::shiftops::{
    calogero_moser_equalities, chain_operator, compose_chain, dual_fundamental_invariants, elementary_shift,
    intertwine_check, intertwines, shift_preserves_q, Direction,
};

/// `x∂ − c` on the line.
fn euler_minus(arr: &std::sync::Arc<qinv::polyring::Arrangement>, c: i64) -> DiffOp {
    let mut op = DiffOp::zero(arr);
    op.add_term(Monomial(vec![1]), LocalizedPoly::from_poly(MultiPoly::var(0, 1), arr));
    op.add_term(Monomial(vec![0]), LocalizedPoly::constant(Cyc::from_int(-c), arr));
    op
}

#[test]
fn rank_one_chain_is_product_of_euler_shifts() {
    let g = group("cyclic:2");
    let chain = compose_chain(&g, &ints(&[&[0, 2]])).expect("chain");
    assert_eq!(chain.len(), 2);
    for (j, step) in chain.iter().enumerate() {
        assert_eq!(step.op, euler_minus(g.arrangement(), 2 * j as i64 + 1));
    }
    let product = euler_minus(g.arrangement(), 3).compose(&euler_minus(g.arrangement(), 1));
    assert_eq!(chain_operator(&g, &chain), product);
}

#[test]
fn zero_target_gives_empty_chain() {
    for spec in ["cyclic:3", "dihedral:3:3"] {
        let g = group(spec);
        assert!(compose_chain(&g, &Multiplicity::zero(&g)).expect("chain").is_empty());
    }
}

#[test]
fn first_rank_one_shift_fixes_x_squared() {
    let g = group("cyclic:2");
    let shift = elementary_shift(&g, &Multiplicity::zero(&g), 0, 1, Direction::Raising).expect("shift");
    let x2 = MultiPoly::monomial(Monomial(vec![2]), Cyc::one());
    assert_eq!(shift.op.apply_poly(&x2).as_polynomial(), Some(&x2));
}

#[test]
fn chain_steps_preserve_quasi_invariants() {
    for (spec, rows) in [("cyclic:2", &[&[0i64, 2][..]][..]), ("cyclic:3", &[&[0, 1, 1]]), ("dihedral:2:2", &[&[0, 1], &[0, 1]])] {
        let g = group(spec);
        for step in compose_chain(&g, &ints(rows)).expect("chain") {
            let report = shift_preserves_q(&step, 9).expect("preservation");
            assert!(report.checked > 0, "{spec}");
        }
    }
}

#[test]
fn every_chain_step_intertwines() {
    let g = group("cyclic:3");
    for step in compose_chain(&g, &ints(&[&[0, 2, 1]])).expect("chain") {
        for p in dual_fundamental_invariants(&g) {
            assert!(intertwine_check(&step, &p).expect("check").passed);
        }
    }
}

#[test]
fn shifts_intertwine_at_random_rational_multiplicity() {
    let g = group("dihedral:3:3");
    let p = &dual_fundamental_invariants(&g)[0];
    for k in random_rational_ks(&g, 3, 11) {
        for direction in [Direction::Raising, Direction::Lowering] {
            let shift = elementary_shift(&g, &k, 0, 1, direction).expect("shift");
            assert!(intertwine_check(&shift, p).expect("check").passed, "{k} {direction:?}");
        }
    }
}

#[test]
fn identity_does_not_intertwine_distinct_multiplicities() {
    let g = group("cyclic:2");
    let p = &dual_fundamental_invariants(&g)[0];
    let identity = DiffOp::identity(g.arrangement());
    let (k0, k1) = (ints(&[&[0, 0]]), ints(&[&[0, 1]]));
    assert!(intertwines(&g, &identity, &k0, &k0, p).expect("check").passed);
    assert!(!intertwines(&g, &identity, &k0, &k1, p).expect("check").passed);
}

#[test]
fn calogero_moser_operators_commute() {
    for (spec, rows) in [("dihedral:3:3", &[&[0i64, 1][..]][..]), ("dihedral:2:1", &[&[0, 1], &[0, 2]])] {
        let g = group(spec);
        let family = DunklFamily::new(&g, &ints(rows));
        let ops: Vec<DiffOp> = dual_fundamental_invariants(&g)
            .iter()
            .map(|p| family.calogero_moser(p).expect("restriction"))
            .collect();
        assert!(ops[0].compose(&ops[1]).sub(&ops[1].compose(&ops[0])).is_zero(), "{spec}");
    }
}

#[test]
fn conjugation_with_zero_exponent_is_trivial() {
    let g = group("cyclic:3");
    let k = ints(&[&[0, 1, 2]]);
    let p = &dual_fundamental_invariants(&g)[0];
    assert!(calogero_moser_equalities(&g, &k, p, 0, 0).expect("equalities").conjugation_equal);
}

#[test]
fn rejects_out_of_range_shift_parameters() {
    let g = group("cyclic:3");
    let k = Multiplicity::zero(&g);
    for (orbit, a) in [(0, 0), (0, 3), (1, 1)] {
        assert!(elementary_shift(&g, &k, orbit, a, Direction::Raising).is_err(), "orbit {orbit} a {a}");
    }
}

//! Acceptance suite: each test checks one criterion exactly, enforces its
//! runtime budget and prints a single PASS/FAIL line.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{group, integral_ks, ints, random_rational_ks, CYCLIC, DIHEDRAL};
use qinv::baf::{
    apply_diffop_to_exp, bispectral_check, construct_baf, default_truncation, eigen_check, is_bidegree_zero,
    membership_checks, phi_checks, uniqueness_check,
};
use qinv::dunkl::{c_scalar, check_axioms, DunklFamily};
use qinv::exactnum::Cyc;
use qinv::polyring::{Monomial, MultiPoly};
use qinv::quasiinv::{
    compute_basis, free_generators, g_orbit_checks, is_quasi_invariant_poly, kz_twist, normal_expansion_test,
    poincare_by_formula, poincare_by_membership, qfat_check, TwistPermutation,
};
use qinv::refgroup::{Multiplicity, ReflectionGroup};
use qinv::shiftops::{
    calogero_moser_equalities, dual_fundamental_invariants, elementary_shift, intertwine_check, Direction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, limit: Duration, start: Instant, failures: &[String]) {
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed <= limit;
    println!(
        "criterion {id} [{title}]: {} in {:.2}s (limit {}s){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if failures.is_empty() { String::new() } else { format!("; {} failure(s), first: {}", failures.len(), failures[0]) }
    );
    assert!(failures.is_empty(), "criterion {id}: {failures:?}");
    assert!(elapsed <= limit, "criterion {id} exceeded its runtime budget: {elapsed:?}");
}

fn lowest_invariants(g: &ReflectionGroup) -> Vec<MultiPoly> {
    dual_fundamental_invariants(g).into_iter().take(2).collect()
}

#[test]
fn criterion_1_rank_one_closed_form() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for spec in CYCLIC {
        let g = group(spec);
        let n = g.orbit_n(0) as i64;
        for k in integral_ks(&g, 2) {
            let basis = compute_basis(&g, &k, 30).unwrap();
            for d in 0..=30i64 {
                let i = d % n;
                let k_i = k.k(0, i).to_integer();
                let expected = d >= n * i64::try_from(k_i).unwrap() + i;
                let elems = basis.degree(d);
                let is_monomial = elems.len() == 1 && elems[0].num_terms() == 1 && elems[0].degree() == Some(d as u32);
                if expected != (elems.len() == 1) || (expected && !is_monomial) || elems.len() > 1 {
                    failures.push(format!("{spec} k={k} degree {d}: expected {expected}, basis size {}", elems.len()));
                }
            }
        }
    }
    report(1, "rank-one closed form", Duration::from_secs(5), start, &failures);
}

#[test]
fn criterion_2_dunkl_axioms() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let specs = CYCLIC.iter().chain(DIHEDRAL.iter()).chain(["symmetric:3"].iter());
    for (seed, spec) in specs.enumerate() {
        let g = group(spec);
        let ks = integral_ks(&g, 2).into_iter().chain(random_rational_ks(&g, 5, 100 + seed as u64));
        for k in ks {
            let r = check_axioms(&DunklFamily::new(&g, &k), 3);
            if !r.passed() {
                failures.push(format!("{spec} k={k}: {:?}", r.failures));
            }
        }
    }
    report(2, "Dunkl axioms", Duration::from_secs(60), start, &failures);
}

/// `Σ_d a_d t^d · Π_i (1 − t^{e_i})`, truncated at `len` coefficients.
fn times_denominator(series: &[i64], degrees: &[u32], len: usize) -> Vec<i64> {
    let mut out = series[..len.min(series.len())].to_vec();
    for &e in degrees {
        let e = e as usize;
        for d in (e..out.len()).rev() {
            out[d] -= out[d - e];
        }
    }
    out
}

#[test]
fn criterion_3_poincare_consistency() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for spec in CYCLIC.iter().chain(DIHEDRAL.iter()) {
        let g = group(spec);
        let degrees = g.fundamental_degrees().to_vec();
        for k in integral_ks(&g, 2) {
            let basis = compute_basis(&g, &k, 25).unwrap();
            let by_membership = poincare_by_membership(&basis);
            let by_formula = poincare_by_formula(&g, &k, 25).unwrap();
            if !by_membership.agrees_with(&by_formula) || by_membership.max_degree() < 25 {
                failures.push(format!("{spec} k={k}: membership and formula series differ"));
                continue;
            }
            let Some(closed) = by_formula.closed_form.as_ref() else {
                failures.push(format!("{spec} k={k}: no closed form"));
                continue;
            };
            let mut numerator: Vec<i64> = vec![0; 26];
            for (i, &c) in closed.numerator.iter().enumerate() {
                let d = by_formula.min_degree + i as i64;
                if (0..=25).contains(&d) {
                    numerator[d as usize] = c;
                }
            }
            let series: Vec<i64> = (0..=25).map(|d| by_membership.coefficient(d)).collect();
            let quotient = times_denominator(&series, &degrees, 26);
            let sum: i64 = closed.numerator.iter().sum();
            if quotient != numerator
                || closed.numerator.iter().any(|&c| c < 0)
                || sum != g.order() as i64
                || by_formula.min_degree < 0
            {
                failures.push(format!("{spec} k={k}: quotient {quotient:?} vs numerator {:?}", closed.numerator));
            }
            match free_generators(&g, &k) {
                Ok(gens) => {
                    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
                    for d in gens.degrees() {
                        *counts.entry(d).or_default() += 1;
                    }
                    let expected: BTreeMap<i64, i64> = closed
                        .numerator
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (by_formula.min_degree + i as i64, c))
                        .collect();
                    if gens.generators.len() != g.order() || counts != expected || gens.certificates.is_empty() {
                        failures.push(format!("{spec} k={k}: generator degrees {counts:?}, expected {expected:?}"));
                    }
                }
                Err(e) => failures.push(format!("{spec} k={k}: free generators failed: {e}")),
            }
        }
    }
    report(3, "Poincare consistency", Duration::from_secs(300), start, &failures);
}

#[test]
fn criterion_4_shift_intertwining() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let specs = ["cyclic:2", "cyclic:3", "cyclic:4", "dihedral:2:1", "dihedral:2:2", "dihedral:3:3", "dihedral:4:4"];
    let mut checks = 0;
    for (seed, spec) in specs.iter().enumerate() {
        let g = group(spec);
        let ps = lowest_invariants(&g);
        let ks = integral_ks(&g, 2).into_iter().chain(random_rational_ks(&g, 3, 400 + seed as u64));
        for k in ks {
            for c in 0..g.orbits().len() {
                for a in 1..g.orbit_n(c) as i64 {
                    for dir in [Direction::Raising, Direction::Lowering] {
                        let shift = match elementary_shift(&g, &k, c, a, dir) {
                            Ok(s) => s,
                            Err(e) => {
                                failures.push(format!("{spec} k={k} orbit {c} a={a} {}: {e}", dir.name()));
                                continue;
                            }
                        };
                        for p in &ps {
                            checks += 1;
                            if !intertwine_check(&shift, p).unwrap().passed {
                                failures.push(format!("{spec} k={k} orbit {c} a={a} {}", dir.name()));
                            }
                        }
                    }
                }
            }
        }
    }
    println!("{checks} intertwining identities checked");
    report(4, "shift intertwining", Duration::from_secs(120), start, &failures);
}

fn twisted(spec: &str, k: &str, twist: &str) -> (std::sync::Arc<ReflectionGroup>, Multiplicity) {
    let g = group(spec);
    let tw = Multiplicity::parse_twist(&g, twist).unwrap();
    let k = Multiplicity::parse(&g, k).unwrap().with_twist(Some(tw));
    (g, k)
}

#[test]
fn criterion_5_g_orbit_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases = [
        ("cyclic:2", "1/2,3/2", "1"),
        ("cyclic:3", "1/3,4/3,1/3", "1"),
        ("cyclic:3", "2/3,2/3,5/3", "2"),
        ("dihedral:3:3", "1/2,3/2", "1"),
        ("dihedral:4:4", "1/2,3/2;1", "1;0"),
    ];
    for (spec, k, twist) in cases {
        let (g, k) = twisted(spec, k, twist);
        assert!(k.check_compatible().is_ok(), "{spec} {k} must be compatible");
        let r = g_orbit_checks(&g, &k, 10).unwrap();
        if !r.passed() {
            failures.push(format!("{spec} k={k}: module equality {}", r.to_json()));
        }
        for p in lowest_invariants(&g) {
            for c in 0..g.orbits().len() {
                for a in 0..g.orbit_n(c) as i64 {
                    let eq = calogero_moser_equalities(&g, &k, &p, c, a).unwrap();
                    if !eq.passed() || eq.g_orbit_equal.is_none() {
                        failures.push(format!("{spec} k={k} orbit {c} a={a}: {}", eq.to_json()));
                    }
                }
            }
        }
    }
    report(5, "G-orbit identities", Duration::from_secs(120), start, &failures);
}

#[test]
fn criterion_6_kz_twist_laws() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for spec in CYCLIC.iter().chain(DIHEDRAL.iter()) {
        let g = group(spec);
        let reps = g.irreps().unwrap();
        let by_name = |name: &str| reps.iter().find(|r| r.name == name).unwrap();
        let mut cache: BTreeMap<String, TwistPermutation> = BTreeMap::new();
        let mut twist = |k: &Multiplicity, failures: &mut Vec<String>| -> Option<TwistPermutation> {
            if let Some(t) = cache.get(&k.to_string()) {
                return Some(t.clone());
            }
            match kz_twist(&g, k) {
                Ok(t) => {
                    if !t.is_bijective() {
                        failures.push(format!("{spec} k={k}: not a permutation"));
                    }
                    for (sigma, tau) in &t.mapping {
                        let (a, b) = (by_name(sigma), by_name(tau));
                        if a.dim != b.dim || c_scalar(&g, k, a) != c_scalar(&g, k, b) {
                            failures.push(format!("{spec} k={k}: {sigma} -> {tau} changes dimension or c"));
                        }
                    }
                    cache.insert(k.to_string(), t.clone());
                    Some(t)
                }
                Err(e) => {
                    failures.push(format!("{spec} k={k}: {e}"));
                    None
                }
            }
        };
        let zero = Multiplicity::zero(&g);
        if let Some(t) = twist(&zero, &mut failures) {
            if !t.is_identity() {
                failures.push(format!("{spec}: kz_0 is not the identity"));
            }
        }
        let small = integral_ks(&g, 1);
        for k1 in &small {
            for k2 in &small {
                let (Some(t1), Some(t2), Some(t12)) =
                    (twist(k1, &mut failures), twist(k2, &mut failures), twist(&k1.add(k2), &mut failures))
                else {
                    continue;
                };
                if t1.compose(&t2) != t12.mapping {
                    failures.push(format!("{spec}: kz_{k1} o kz_{k2} != kz_(k1+k2)"));
                }
            }
        }
    }
    report(6, "KZ twist laws", Duration::from_secs(600), start, &failures);
}

#[test]
fn criterion_7_symmetrization() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for spec in ["cyclic:3", "dihedral:3:3"] {
        let g = group(spec);
        for k in integral_ks(&g, 1) {
            let r = qfat_check(&g, &k, 10).unwrap();
            if !r.passed() || r.degrees.len() < 11 {
                failures.push(format!("{spec} k={k}: {}", r.to_json()));
            }
        }
    }
    report(7, "symmetrization of the regular module", Duration::from_secs(120), start, &failures);
}

#[test]
fn criterion_8_baker_akhiezer_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases: [(&str, &[&[i64]]); 5] = [
        ("cyclic:2", &[&[0, 1]]),
        ("cyclic:2", &[&[0, 2]]),
        ("cyclic:2", &[&[0, 3]]),
        ("cyclic:3", &[&[0, 1, 1]]),
        ("dihedral:2:2", &[&[0, 1], &[0, 1]]),
    ];
    for (spec, rows) in cases {
        let g = group(spec);
        let k = ints(rows);
        let mut fail = |what: &str| failures.push(format!("{spec} k={k}: {what}"));
        let b = match construct_baf(&g, &k) {
            Ok(b) => b,
            Err(e) => {
                fail(&e.to_string());
                continue;
            }
        };
        let vars = b.vars();
        let top = b.leading_term.partial_degree(0..vars.rank).unwrap_or(0);
        let top_part = b
            .prefactor()
            .homogeneous_components(&vars.lambda_weights())
            .into_iter()
            .find(|(d, _)| *d == top as i64)
            .map(|(_, p)| p);
        if top_part.as_ref() != Some(&b.leading_term) || !is_bidegree_zero(&b) {
            fail("leading term or bidegree");
        }
        let invariants = dual_fundamental_invariants(&g);
        for p in &invariants {
            if !eigen_check(&b, p).unwrap() {
                fail("eigenfunction");
            }
        }
        let (p, q) = (&invariants[0], invariants.last().unwrap());
        let fam = DunklFamily::new(&g, &k);
        let (lp, lq) = (fam.calogero_moser(p).unwrap(), fam.calogero_moser(q).unwrap());
        let twice = apply_diffop_to_exp(&lp, &apply_diffop_to_exp(&lq, &b.psi));
        let eigen = p.mul(q).embed(0, vars.nvars());
        if twice.prefactor != b.psi.prefactor.mul_poly(&eigen) {
            fail("L_p L_q psi != p q psi");
        }
        match membership_checks(&b, default_truncation(&g, &k)) {
            Ok(r) if r.passed() => {}
            Ok(_) => fail("exchange symmetry"),
            Err(e) => fail(&e.to_string()),
        }
        if !bispectral_check(&b).unwrap().passed() {
            fail("bispectrality");
        }
        let phi = phi_checks(&b, 4, 6).unwrap();
        if !phi.passed() {
            fail(&format!("phi checks {}", phi.to_json(vars)));
        }
        if !uniqueness_check(&b, default_truncation(&g, &k)).unwrap().passed() {
            fail("uniqueness");
        }
    }
    report(8, "Baker-Akhiezer suite", Duration::from_secs(300), start, &failures);
}

fn random_coefficient(rng: &mut ChaCha8Rng, conductor: u32) -> Cyc {
    let c = Cyc::from_int(rng.gen_range(-4..=4));
    if conductor > 2 && rng.gen_bool(0.3) {
        &c + &Cyc::root_of_unity(rng.gen_range(0..conductor as i64), conductor)
    } else {
        c
    }
}

#[test]
fn criterion_9_membership_cross_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut positives = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for spec in CYCLIC.iter().chain(DIHEDRAL.iter()).chain(["symmetric:3"].iter()) {
        let g = group(spec);
        let n = g.dim();
        let ks = integral_ks(&g, 2);
        let bases: Vec<_> = ks.iter().map(|k| compute_basis(&g, k, 8).unwrap()).collect();
        for _ in 0..200 {
            let idx = rng.gen_range(0..ks.len());
            let (k, basis) = (&ks[idx], &bases[idx]);
            let d = rng.gen_range(0..=8i64);
            let mut f = MultiPoly::zero(n);
            for e in basis.degree(d) {
                f = f.add(&e.scale(&random_coefficient(&mut rng, g.conductor())));
            }
            if f.is_zero() || rng.gen_bool(0.4) {
                let monos = Monomial::all_of_degree(n, d as u32);
                let m = monos[rng.gen_range(0..monos.len())].clone();
                f.add_term(m, random_coefficient(&mut rng, g.conductor()));
            }
            let direct = is_quasi_invariant_poly(&g, &f, k).unwrap();
            let expansion = normal_expansion_test(&g, &f, k).unwrap();
            positives += usize::from(direct);
            if direct != expansion {
                failures.push(format!("{spec} k={k}: oracles disagree on a degree-{d} polynomial"));
            }
        }
    }
    assert!(positives > 200, "too few quasi-invariant samples: {positives}");
    report(9, "membership cross-oracle", Duration::from_secs(60), start, &failures);
}

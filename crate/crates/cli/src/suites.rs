//! Named verification suites for `verify`.

use std::sync::Arc;

use qinv::dunkl::{check_axioms, DunklFamily};
use qinv::exactnum::Cyc;
use qinv::polyring::{Monomial, MultiPoly};
use qinv::quasiinv::{
    compute_basis, fake_degree_symmetry, free_generators, is_quasi_invariant_poly, kz_twist, normal_expansion_test,
    poincare_by_formula, poincare_by_membership,
};
use qinv::refgroup::{GroupSpec, Multiplicity, ReflectionGroup};
use qinv::shiftops::{dual_fundamental_invariants, elementary_shift, intertwine_check, Direction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::{baf_report, twist_preserves_dim_and_c, Outcome};
use crate::config::{JobConfig, SUITES};
use crate::CliError;

/// Groups and multiplicity bound used when `verify` gets no `--group`.
const DEFAULT_GROUPS: [&str; 7] =
    ["cyclic:2", "cyclic:3", "cyclic:4", "dihedral:2:1", "dihedral:2:2", "dihedral:3:3", "dihedral:4:4"];
const DEFAULT_MAX_ENTRY: i64 = 1;
const CROSSCHECK_SAMPLES: usize = 50;

enum Status {
    Pass(Value),
    Fail(Value),
    Skipped(String),
}

impl Status {
    fn from_check(passed: bool, details: Value) -> Status {
        if passed {
            Status::Pass(details)
        } else {
            Status::Fail(details)
        }
    }
}

/// Every integral multiplicity with `k_{C,0} = 0` and entries in `0..=max`.
fn integral_ks(group: &ReflectionGroup, max: i64) -> Vec<Multiplicity> {
    let mut rows: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for c in 0..group.orbits().len() {
        let n = group.orbit_n(c) as u32;
        let count = (max + 1).pow(n - 1);
        rows = rows
            .iter()
            .flat_map(|prefix| {
                (0..count).map(move |code| {
                    let mut rest = code;
                    let mut orbit = vec![0];
                    for _ in 1..n {
                        orbit.push(rest % (max + 1));
                        rest /= max + 1;
                    }
                    let mut next = prefix.clone();
                    next.push(orbit);
                    next
                })
            })
            .collect();
    }
    rows.iter().map(|r| Multiplicity::from_ints(&r.iter().map(Vec::as_slice).collect::<Vec<_>>())).collect()
}

fn is_baf_multiplicity(k: &Multiplicity) -> bool {
    k.is_integral() && k.is_nonnegative() && k.values().iter().all(|v| num_traits::Zero::is_zero(&v[0]))
}

fn dunkl_axioms(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Status {
    let r = check_axioms(&DunklFamily::new(group, k), 3);
    Status::from_check(r.passed(), r.to_json())
}

fn membership_crosscheck(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<Status, CliError> {
    let basis = compute_basis(group, k, max_deg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = group.dim();
    let (mut agree, mut positives) = (0, 0);
    let mut disagreements = Vec::new();
    for _ in 0..CROSSCHECK_SAMPLES {
        let d = rng.gen_range(0..=max_deg);
        let mut f = MultiPoly::zero(n);
        for e in basis.degree(d) {
            f = f.add(&e.scale(&Cyc::from_int(rng.gen_range(-3..=3))));
        }
        if f.is_zero() || rng.gen_bool(0.4) {
            let monos = Monomial::all_of_degree(n, d as u32);
            f.add_term(monos[rng.gen_range(0..monos.len())].clone(), Cyc::from_int(rng.gen_range(1..=3)));
        }
        let direct = is_quasi_invariant_poly(group, &f, k)?;
        let expansion = normal_expansion_test(group, &f, k)?;
        positives += usize::from(direct);
        if direct == expansion {
            agree += 1;
        } else {
            disagreements.push(f.to_string());
        }
    }
    let details = json!({ "samples": CROSSCHECK_SAMPLES, "agree": agree, "quasiInvariant": positives, "disagreements": disagreements });
    Ok(Status::from_check(disagreements.is_empty(), details))
}

fn poincare(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<Status, CliError> {
    if !k.is_integral() {
        return Ok(Status::Skipped("needs an integral multiplicity".into()));
    }
    let by_membership = poincare_by_membership(&compute_basis(group, k, max_deg)?);
    let by_formula = poincare_by_formula(group, k, max_deg)?;
    let numerator_ok = by_formula.closed_form.as_ref().is_some_and(|cf| {
        cf.numerator.iter().all(|&c| c >= 0) && cf.numerator.iter().sum::<i64>() == group.order() as i64
    });
    let agree = by_membership.agrees_with(&by_formula);
    let details = json!({
        "agree": agree,
        "numeratorNonnegativeWithSumOrder": numerator_ok,
        "closedFormConsistent": by_formula.closed_form_consistent(),
        "byFormula": by_formula.to_json(),
    });
    Ok(Status::from_check(agree && numerator_ok && by_formula.closed_form_consistent(), details))
}

fn freeness(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<Status, CliError> {
    if !k.is_integral() {
        return Ok(Status::Skipped("needs an integral multiplicity".into()));
    }
    let gens = free_generators(group, k)?;
    let passed = gens.generators.len() == group.order();
    Ok(Status::from_check(passed, json!({ "count": gens.generators.len(), "degrees": gens.degrees() })))
}

fn intertwining(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<Status, CliError> {
    let invariants: Vec<MultiPoly> = dual_fundamental_invariants(group).into_iter().take(2).collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for c in 0..group.orbits().len() {
        for a in 1..group.orbit_n(c) as i64 {
            for dir in [Direction::Raising, Direction::Lowering] {
                let shift = elementary_shift(group, k, c, a, dir)?;
                for p in &invariants {
                    checked += 1;
                    if !intertwine_check(&shift, p)?.passed {
                        failures.push(json!({ "orbit": c, "a": a, "direction": dir.name(), "invariantDegree": p.degree() }));
                    }
                }
            }
        }
    }
    Ok(Status::from_check(failures.is_empty(), json!({ "checked": checked, "failures": failures })))
}

fn kz_additivity(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<Status, CliError> {
    if !k.is_integral() {
        return Ok(Status::Skipped("needs an integral multiplicity".into()));
    }
    let zero = kz_twist(group, &Multiplicity::zero(group))?;
    let base = kz_twist(group, k)?;
    let mut preserving = twist_preserves_dim_and_c(group, k, &base)? && base.is_bijective();
    let mut additive = Vec::new();
    for c in 0..group.orbits().len() {
        for j in 1..group.orbit_n(c) as i64 {
            let unit = Multiplicity::unit(group, c, j);
            let step = kz_twist(group, &unit)?;
            let sum = k.add(&unit);
            let combined = kz_twist(group, &sum)?;
            preserving &= twist_preserves_dim_and_c(group, &sum, &combined)?;
            additive.push(json!({ "orbit": c, "j": j, "holds": base.compose(&step) == combined.mapping }));
        }
    }
    let passed = zero.is_identity() && preserving && additive.iter().all(|a| a["holds"] == json!(true));
    let details = json!({
        "zeroIsIdentity": zero.is_identity(),
        "preservesDimensionAndC": preserving,
        "additivity": additive,
        "twist": base.to_json(),
    });
    Ok(Status::from_check(passed, details))
}

fn baf(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<Status, CliError> {
    if !is_baf_multiplicity(k) {
        return Ok(Status::Skipped("needs a non-negative integral multiplicity".into()));
    }
    let (details, passed, _) = baf_report(group, k, None)?;
    Ok(Status::from_check(passed, details))
}

fn fake_degrees(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<Status, CliError> {
    let vectors: Vec<Vec<i64>> = match k.twist() {
        Some(a) => vec![a.to_vec()],
        None => {
            let sizes: Vec<i64> = (0..group.orbits().len()).map(|c| group.orbit_n(c) as i64).collect();
            let total: i64 = sizes.iter().product();
            (0..total)
                .map(|mut code| {
                    sizes
                        .iter()
                        .map(|&n| {
                            let v = code % n;
                            code /= n;
                            v
                        })
                        .collect()
                })
                .collect()
        }
    };
    let reports = vectors.iter().map(|a| fake_degree_symmetry(group, a)).collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    Ok(Status::from_check(passed, json!(reports.iter().map(|r| r.to_json()).collect::<Vec<_>>())))
}

fn run_suite(name: &str, group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<Status, CliError> {
    match name {
        "dunkl-axioms" => Ok(dunkl_axioms(group, k)),
        "membership-crosscheck" => membership_crosscheck(group, k, max_deg),
        "poincare" => poincare(group, k, max_deg),
        "freeness" => freeness(group, k),
        "intertwining" => intertwining(group, k),
        "kz-additivity" => kz_additivity(group, k),
        "baf" => baf(group, k),
        "fake-degrees" => fake_degrees(group, k),
        other => Err(CliError::Config(format!("unknown suite `{other}`"))),
    }
}

pub fn verify(job: &JobConfig) -> Result<Outcome, CliError> {
    let cases: Vec<(Arc<ReflectionGroup>, Multiplicity)> = match (&job.group, &job.k) {
        (Some(g), Some(k)) => vec![(g.clone(), k.clone())],
        _ => DEFAULT_GROUPS
            .iter()
            .map(|s| ReflectionGroup::cached(&GroupSpec::parse(s).expect("built-in spec")).expect("built-in group"))
            .flat_map(|g| integral_ks(&g, DEFAULT_MAX_ENTRY).into_iter().map(move |k| (g.clone(), k)))
            .collect(),
    };
    let suites: Vec<&str> =
        if job.suite == "all" { SUITES.iter().copied().filter(|s| *s != "all").collect() } else { vec![job.suite.as_str()] };
    let max_deg = job.max_deg.unwrap_or(8);
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    let mut reports = Vec::new();
    for (group, k) in &cases {
        let mut entries = Vec::new();
        for suite in &suites {
            let status = match run_suite(suite, group, k, max_deg) {
                Ok(s) => s,
                Err(CliError::Config(msg)) => Status::Skipped(msg),
                Err(e) => Status::Fail(json!({ "error": e.to_string() })),
            };
            let entry = match status {
                Status::Pass(details) => {
                    passed += 1;
                    json!({ "suite": suite, "status": "pass", "details": details })
                }
                Status::Fail(details) => {
                    failed += 1;
                    json!({ "suite": suite, "status": "fail", "details": details })
                }
                Status::Skipped(reason) => {
                    skipped += 1;
                    json!({ "suite": suite, "status": "skipped", "reason": reason })
                }
            };
            entries.push(entry);
        }
        reports.push(json!({ "group": group.spec().to_string(), "k": k.to_string(), "suites": entries }));
    }
    let result = json!({
        "cases": reports,
        "summary": { "passed": passed, "failed": failed, "skipped": skipped },
    });
    Ok(Outcome { result, passed: failed == 0, max_deg: Some(max_deg) })
}

//! Command implementations. Each returns a JSON result and a pass flag.

use std::sync::Arc;

use qinv::baf::{
    bispectral_check, construct_baf, default_truncation, eigen_check, membership_checks, phi_checks, uniqueness_check,
};
use qinv::quasiinv::{
    compute_basis, free_generators, kz_twist, poincare_by_formula, poincare_by_membership, regular_rep,
    tau_quasi_invariants, TwistPermutation,
};
use qinv::dunkl::c_scalar;
use qinv::refgroup::{Multiplicity, ReflectionGroup};
use qinv::shiftops::{dual_fundamental_invariants, elementary_shift, intertwine_check, Direction};
use serde_json::{json, Value};

use crate::config::{CommandName, DirectionArg, JobConfig};
use crate::suites;
use crate::CliError;

pub struct Outcome {
    pub result: Value,
    pub passed: bool,
    /// Degree bound actually used, echoed in the report.
    pub max_deg: Option<i64>,
}

impl Outcome {
    fn new(result: Value, passed: bool, max_deg: Option<i64>) -> Outcome {
        Outcome { result, passed, max_deg }
    }
}

pub fn run(job: &JobConfig) -> Result<Outcome, CliError> {
    if job.command == CommandName::Verify {
        return suites::verify(job);
    }
    let group = job.group.as_ref().expect("validated");
    let k = job.k.as_ref().expect("validated");
    match job.command {
        CommandName::GroupInfo => Ok(Outcome::new(group.info_json(), true, None)),
        CommandName::QiBasis => qi_basis(group, k, job),
        CommandName::QiPoincare => qi_poincare(group, k, job.max_deg.unwrap_or(20)),
        CommandName::FreeGens => {
            let gens = free_generators(group, k)?;
            let passed = gens.generators.len() == group.order();
            Ok(Outcome::new(gens.to_json(), passed, None))
        }
        CommandName::KzTwist => {
            let twist = kz_twist(group, k)?;
            let preserving = twist_preserves_dim_and_c(group, k, &twist)?;
            let mut result = twist.to_json();
            result["identity"] = json!(twist.is_identity());
            result["preservesDimensionAndC"] = json!(preserving);
            Ok(Outcome::new(result, preserving && twist.is_bijective(), None))
        }
        CommandName::ShiftOp => shift_op(group, k, job),
        CommandName::Baf => baf(group, k, job.max_deg),
        CommandName::Verify => unreachable!("handled above"),
    }
}

fn qi_basis(group: &Arc<ReflectionGroup>, k: &Multiplicity, job: &JobConfig) -> Result<Outcome, CliError> {
    let max_deg = job.max_deg.unwrap_or(12);
    let result = match job.tau.as_deref() {
        None => compute_basis(group, k, max_deg)?.to_json(),
        Some("regular") => tau_quasi_invariants(group, &regular_rep(group), k, max_deg)?.to_json(),
        Some(name) => {
            let rep = group.irrep_by_name(name)?;
            tau_quasi_invariants(group, rep, k, max_deg)?.to_json()
        }
    };
    Ok(Outcome::new(result, true, Some(max_deg)))
}

fn qi_poincare(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<Outcome, CliError> {
    let by_membership = poincare_by_membership(&compute_basis(group, k, max_deg)?);
    let by_formula = if k.is_integral() { Some(poincare_by_formula(group, k, max_deg)?) } else { None };
    let agree = by_formula.as_ref().map(|f| by_membership.agrees_with(f));
    let text = by_formula
        .as_ref()
        .and_then(|f| f.to_json().get("closedForm").and_then(|c| c.get("text")).cloned())
        .unwrap_or(Value::Null);
    let result = json!({
        "byMembership": by_membership.to_json(),
        "byFormula": by_formula.as_ref().map(|f| f.to_json()),
        "agree": agree,
        "series": text,
    });
    Ok(Outcome::new(result, agree != Some(false), Some(max_deg)))
}

pub fn twist_preserves_dim_and_c(
    group: &ReflectionGroup,
    k: &Multiplicity,
    twist: &TwistPermutation,
) -> Result<bool, CliError> {
    let reps = group.irreps()?;
    let find = |name: &str| reps.iter().find(|r| r.name == name);
    Ok(twist.mapping.iter().all(|(sigma, tau)| match (find(sigma), find(tau)) {
        (Some(a), Some(b)) => a.dim == b.dim && c_scalar(group, k, a) == c_scalar(group, k, b),
        _ => false,
    }))
}

fn shift_op(group: &Arc<ReflectionGroup>, k: &Multiplicity, job: &JobConfig) -> Result<Outcome, CliError> {
    let direction = match job.direction {
        DirectionArg::Raising => Direction::Raising,
        DirectionArg::Lowering => Direction::Lowering,
    };
    let shift = elementary_shift(group, k, job.orbit, job.shift_a, direction)?;
    let mut certificates = Vec::new();
    for p in dual_fundamental_invariants(group).into_iter().take(2) {
        let r = intertwine_check(&shift, &p)?;
        certificates.push(json!({
            "invariantDegree": p.degree(),
            "passed": r.passed,
            "difference": r.difference.to_string(),
        }));
    }
    let passed = certificates.iter().all(|c| c["passed"] == json!(true));
    let result = json!({
        "shift": shift.to_json(),
        "normalForm": shift.op.to_json(),
        "intertwining": certificates,
    });
    Ok(Outcome::new(result, passed, None))
}

/// Constructs ψ and runs every check on it.
pub fn baf_report(
    group: &Arc<ReflectionGroup>,
    k: &Multiplicity,
    max_deg: Option<i64>,
) -> Result<(Value, bool, i64), CliError> {
    let b = construct_baf(group, k)?;
    let truncation = max_deg.map_or_else(|| default_truncation(group, k), |d| d as u32);
    let eigen = dual_fundamental_invariants(group)
        .iter()
        .map(|p| eigen_check(&b, p))
        .collect::<Result<Vec<bool>, _>>()?;
    let membership = membership_checks(&b, truncation);
    let bispectral = bispectral_check(&b)?;
    let phi = phi_checks(&b, 4, 6)?;
    let uniqueness = uniqueness_check(&b, truncation)?;
    let membership_json = match &membership {
        Ok(r) => r.to_json(),
        Err(e) => json!({ "passed": false, "error": e.to_string() }),
    };
    let passed = eigen.iter().all(|&e| e)
        && membership.as_ref().is_ok_and(|r| r.passed())
        && bispectral.passed()
        && phi.passed()
        && uniqueness.passed();
    let result = json!({
        "baf": b.to_json(),
        "eigen": eigen,
        "membership": membership_json,
        "bispectral": bispectral.to_json(),
        "phi": phi.to_json(b.vars()),
        "uniqueness": {
            "unknowns": uniqueness.unknowns,
            "maxDeg": uniqueness.max_deg,
            "unique": uniqueness.unique,
            "agrees": uniqueness.agrees,
            "passed": uniqueness.passed(),
        },
        "passed": passed,
    });
    Ok((result, passed, i64::from(truncation)))
}

fn baf(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: Option<i64>) -> Result<Outcome, CliError> {
    let (result, passed, truncation) = baf_report(group, k, max_deg)?;
    Ok(Outcome::new(result, passed, Some(truncation)))
}

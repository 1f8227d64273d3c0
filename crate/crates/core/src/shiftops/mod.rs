//! Shift operators between Calogero–Moser systems at multiplicities differing
//! by a unit vector, their intertwining relations, chains of elementary
//! shifts, and Calogero–Moser equalities along G-orbits.

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::dunkl::{delta_power, DiffOp, DiffReflOp, DunklError, DunklFamily};
use crate::polyring::{LocalizedPoly, MultiPoly};
use crate::quasiinv::{compute_basis, quasi_invariance_witness, QiError, Witness};
use crate::refgroup::{Multiplicity, ReflectionGroup};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Dunkl(#[from] DunklError),
    #[error(transparent)]
    Qi(#[from] QiError),
    #[error("target multiplicity is not reachable by elementary shifts: {0}")]
    UnreachableTarget(String),
    #[error("image of a degree {degree} basis element is not quasi-invariant")]
    PreservationFailure { degree: i64, witness: Box<Witness> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Raising,
    Lowering,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Raising => "raising",
            Direction::Lowering => "lowering",
        }
    }
}

/// An elementary shift between `source_k` and `target_k = source_k + ℓ_{C,n_C−a}`.
/// Raising operators map the `source_k` system to the `target_k` one;
/// lowering operators go the other way.
#[derive(Debug, Clone)]
pub struct ShiftOp {
    pub group: Arc<ReflectionGroup>,
    pub op: DiffOp,
    pub orbit: usize,
    pub a: i64,
    pub source_k: Multiplicity,
    pub target_k: Multiplicity,
    pub direction: Direction,
}

impl ShiftOp {
    /// Multiplicity of the functions the operator acts on.
    pub fn domain(&self) -> &Multiplicity {
        match self.direction {
            Direction::Raising => &self.source_k,
            Direction::Lowering => &self.target_k,
        }
    }

    /// Multiplicity of the functions the operator produces.
    pub fn codomain(&self) -> &Multiplicity {
        match self.direction {
            Direction::Raising => &self.target_k,
            Direction::Lowering => &self.source_k,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "orbit": self.orbit,
            "a": self.a,
            "direction": self.direction.name(),
            "sourceK": self.source_k.to_json(),
            "targetK": self.target_k.to_json(),
            "order": self.op.order(),
            "operator": self.op.to_string(),
        })
    }
}

/// `k' = k + Σ_{i=1..a} ℓ_{C,n_C−i}`.
pub fn auxiliary_multiplicity(group: &ReflectionGroup, k: &Multiplicity, orbit: usize, a: i64) -> Multiplicity {
    let n = group.orbit_n(orbit) as i64;
    (1..=a).fold(k.clone(), |acc, i| acc.plus_unit(orbit, n - i))
}

/// `T_{δ*_C,k} = Π_{H∈C} T_{v_H,k}`.
pub fn delta_star_operator(family: &DunklFamily, orbit: usize) -> DiffReflOp {
    let group = family.group();
    group.orbits()[orbit]
        .iter()
        .fold(DiffReflOp::identity(group), |acc, &h| acc.compose(&family.operator(&group.hyperplane(h).v)))
}

fn check_orbit_and_a(group: &ReflectionGroup, orbit: usize, a: i64) -> Result<i64, ShiftError> {
    if orbit >= group.orbits().len() {
        return Err(ShiftError::InvalidArgument(format!("orbit {orbit} out of range")));
    }
    let n = group.orbit_n(orbit) as i64;
    if !(1..n).contains(&a) {
        return Err(ShiftError::InvalidArgument(format!("a must lie in 1..{}, got {a}", n - 1)));
    }
    Ok(n)
}

/// The elementary shift: raising `Res(δ_C^{1−a} T_{δ*_C,k'} δ_C^a)` or
/// lowering `Res(δ_C^{−a} (T_{δ*_C,k'})^{n_C−1} δ_C^{a−1})`.
pub fn elementary_shift(
    group: &Arc<ReflectionGroup>,
    k: &Multiplicity,
    orbit: usize,
    a: i64,
    direction: Direction,
) -> Result<ShiftOp, ShiftError> {
    let n = check_orbit_and_a(group, orbit, a)?;
    let kp = auxiliary_multiplicity(group, k, orbit, a);
    let family = DunklFamily::new(group, &kp);
    let tstar = delta_star_operator(&family, orbit);
    let (left, middle, right) = match direction {
        Direction::Raising => (1 - a, tstar, a),
        Direction::Lowering => (-a, tstar.pow((n - 1) as u32), a - 1),
    };
    let mult = |e: i64| DiffReflOp::multiplication(group, delta_power(group, orbit, e));
    let full = mult(left).compose(&middle).compose(&mult(right));
    let op = full.res()?;
    Ok(ShiftOp {
        group: group.clone(),
        op,
        orbit,
        a,
        source_k: k.clone(),
        target_k: k.plus_unit(orbit, n - a),
        direction,
    })
}

/// Result of comparing `L_{p,codomain} S` with `S L_{p,domain}`.
#[derive(Debug, Clone)]
pub struct IntertwineResult {
    pub passed: bool,
    pub difference: DiffOp,
}

impl IntertwineResult {
    pub fn to_json(&self) -> Value {
        json!({ "passed": self.passed, "difference": self.difference.to_string() })
    }
}

/// Exact check of `L_{p,k_out} ∘ S = S ∘ L_{p,k_in}` for an operator `S`
/// from the `k_in` system to the `k_out` system.
pub fn intertwines(
    group: &Arc<ReflectionGroup>,
    op: &DiffOp,
    k_in: &Multiplicity,
    k_out: &Multiplicity,
    p: &MultiPoly,
) -> Result<IntertwineResult, ShiftError> {
    let l_in = DunklFamily::new(group, k_in).calogero_moser(p)?;
    let l_out = DunklFamily::new(group, k_out).calogero_moser(p)?;
    let difference = l_out.compose(op).sub(&op.compose(&l_in));
    Ok(IntertwineResult { passed: difference.is_zero(), difference })
}

pub fn intertwine_check(shift: &ShiftOp, p: &MultiPoly) -> Result<IntertwineResult, ShiftError> {
    intertwines(&shift.group, &shift.op, shift.domain(), shift.codomain(), p)
}

/// Invariants of the dual action, in the dual coordinates, ordered by degree.
pub fn dual_fundamental_invariants(group: &ReflectionGroup) -> Vec<MultiPoly> {
    group.fundamental_invariants().iter().map(MultiPoly::conj_coeffs).collect()
}

#[derive(Debug, Clone)]
pub struct CmEqualities {
    pub orbit: usize,
    pub a: i64,
    /// `L_{p,k} = L_{p,g_C·k}`; absent when `k` carries no compatible twist.
    pub g_orbit_equal: Option<bool>,
    /// `L_{p,k} = Res(δ_C^{−a} T_{p,k'} δ_C^a)`.
    pub conjugation_equal: bool,
}

impl CmEqualities {
    pub fn passed(&self) -> bool {
        self.conjugation_equal && self.g_orbit_equal != Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "orbit": self.orbit,
            "a": self.a,
            "gOrbitEqual": self.g_orbit_equal,
            "conjugationEqual": self.conjugation_equal,
            "passed": self.passed(),
        })
    }
}

/// Calogero–Moser equalities for one orbit: invariance under `g_C` and the
/// `δ_C^a`-conjugation identity with `k' = k + Σ_{i=1..a} ℓ_{C,n_C−i}`.
pub fn calogero_moser_equalities(
    group: &Arc<ReflectionGroup>,
    k: &Multiplicity,
    p: &MultiPoly,
    orbit: usize,
    a: i64,
) -> Result<CmEqualities, ShiftError> {
    if orbit >= group.orbits().len() {
        return Err(ShiftError::InvalidArgument(format!("orbit {orbit} out of range")));
    }
    let n = group.orbit_n(orbit) as i64;
    if !(0..n).contains(&a) {
        return Err(ShiftError::InvalidArgument(format!("a must lie in 0..{}, got {a}", n - 1)));
    }
    let base = DunklFamily::new(group, k).calogero_moser(p)?;
    let g_orbit_equal = match k.check_compatible() {
        Ok(()) => Some(DunklFamily::new(group, &k.g_transform(orbit)).calogero_moser(p)? == base),
        Err(_) => None,
    };
    let kp = auxiliary_multiplicity(group, k, orbit, a);
    let conjugated = DunklFamily::new(group, &kp).polynomial_operator(p).conjugate_by_delta(orbit, -a).res()?;
    Ok(CmEqualities { orbit, a, g_orbit_equal, conjugation_equal: conjugated == base })
}

/// Raising shifts from 0 to `target`: orbits in index order, within an orbit
/// indices `j` descending, each step adding `ℓ_{C,j}` with `a = n_C − j`.
pub fn compose_chain(group: &Arc<ReflectionGroup>, target: &Multiplicity) -> Result<Vec<ShiftOp>, ShiftError> {
    let orbits = group.orbits().len();
    if target.values().len() != orbits {
        return Err(ShiftError::UnreachableTarget(format!("expected {orbits} orbits")));
    }
    let mut steps = Vec::new();
    for c in 0..orbits {
        let n = group.orbit_n(c);
        let values = target.orbit_values(c);
        if values.len() != n {
            return Err(ShiftError::UnreachableTarget(format!("orbit {c} needs {n} values")));
        }
        if !num_traits::Zero::is_zero(&values[0]) {
            return Err(ShiftError::UnreachableTarget(format!("k_{{{c},0}} must be 0")));
        }
        for (j, q) in values.iter().enumerate().skip(1) {
            if !q.is_integer() || num_traits::Signed::is_negative(q) {
                return Err(ShiftError::UnreachableTarget(format!("k_{{{c},{j}}} = {q} is not a non-negative integer")));
            }
        }
    }
    let mut current = Multiplicity::zero(group);
    for c in 0..orbits {
        let n = group.orbit_n(c);
        for j in (1..n).rev() {
            let count = target.orbit_values(c)[j].to_integer();
            let mut done = num_bigint::BigInt::from(0);
            while done < count {
                let step = elementary_shift(group, &current, c, (n - j) as i64, Direction::Raising)?;
                current = step.target_k.clone();
                steps.push(step);
                done += 1;
            }
        }
    }
    Ok(steps)
}

/// The composite `S_last ∘ … ∘ S_first` of a chain.
pub fn chain_operator(group: &ReflectionGroup, chain: &[ShiftOp]) -> DiffOp {
    chain.iter().fold(DiffOp::identity(group.arrangement()), |acc, s| s.op.compose(&acc))
}

#[derive(Debug, Clone)]
pub struct PreservationReport {
    pub max_deg: i64,
    pub checked: usize,
}

impl PreservationReport {
    pub fn to_json(&self) -> Value {
        json!({ "maxDeg": self.max_deg, "checked": self.checked, "passed": true })
    }
}

/// Applies the shift to a basis of the domain module up to `max_deg` and
/// checks that every image lies in the codomain module.
pub fn shift_preserves_q(shift: &ShiftOp, max_deg: i64) -> Result<PreservationReport, ShiftError> {
    let (domain, codomain) = (shift.domain(), shift.codomain());
    if !domain.is_integral() || !codomain.is_integral() {
        return Err(ShiftError::Qi(QiError::NotIntegral));
    }
    let basis = compute_basis(&shift.group, domain, max_deg)?;
    let mut checked = 0;
    for (degree, f) in basis.all_elements(basis.min_deg(), max_deg) {
        let image: LocalizedPoly = shift.op.apply(&f);
        if let Some(witness) = quasi_invariance_witness(&shift.group, &image, codomain)? {
            return Err(ShiftError::PreservationFailure { degree, witness: Box::new(witness) });
        }
        checked += 1;
    }
    Ok(PreservationReport { max_deg, checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Cyc;
    use crate::polyring::Monomial;
    use crate::refgroup::GroupSpec;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    /// `x∂ − c` on the line.
    fn euler_minus(g: &ReflectionGroup, c: i64) -> DiffOp {
        let arr = g.arrangement();
        let mut op = DiffOp::zero(arr);
        op.add_term(Monomial(vec![1]), LocalizedPoly::from_poly(MultiPoly::var(0, 1), arr));
        op.add_term(Monomial(vec![0]), LocalizedPoly::constant(Cyc::from_int(-c), arr));
        op
    }

    #[test]
    fn rank_one_raising_shift() {
        let g = group("cyclic:2");
        for kv in 0..3 {
            let k = Multiplicity::from_ints(&[&[0, kv]]);
            let s = elementary_shift(&g, &k, 0, 1, Direction::Raising).unwrap();
            assert_eq!(s.op, euler_minus(&g, 2 * kv + 1));
            assert_eq!(s.target_k, Multiplicity::from_ints(&[&[0, kv + 1]]));
        }
    }

    #[test]
    fn chain_bookkeeping() {
        let g = group("cyclic:3");
        assert!(compose_chain(&g, &Multiplicity::zero(&g)).unwrap().is_empty());
        let chain = compose_chain(&g, &Multiplicity::from_ints(&[&[0, 1, 1]])).unwrap();
        assert_eq!(chain.iter().map(|s| s.a).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(chain[0].target_k, Multiplicity::from_ints(&[&[0, 0, 1]]));
        assert!(matches!(
            compose_chain(&g, &Multiplicity::from_ints(&[&[0, -1, 1]])),
            Err(ShiftError::UnreachableTarget(_))
        ));
    }
}

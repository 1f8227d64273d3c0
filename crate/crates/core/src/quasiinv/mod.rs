//! Quasi-invariants: membership, normal expansions along hyperplanes, graded
//! bases of `Q_k`, τ-valued modules `Q_k(τ)`, Poincaré series, free
//! generators over the invariants, KZ twists and multiplicity symmetries.

mod basis;
pub mod expansion;
mod poincare;
mod tau;
mod twist;

pub use basis::{compute_basis, QIBasis};
pub use poincare::{
    fake_degree, free_generators, poincare_by_formula, poincare_by_membership, FakeDegree, FreeGenSet,
    PoincareData,
};
pub use tau::{
    dunkl_stability_basis, dunkl_stability_tau, qfat_check, regular_rep, tau_quasi_invariants, PolyDunkl,
    QfatReport, StabilityReport, TauModule,
};
pub use twist::{fake_degree_symmetry, g_orbit_checks, kz_twist, FakeDegreeReport, GOrbitReport, TwistPermutation};

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;

use crate::dunkl::DunklError;
use crate::exactnum::Rational;
use crate::polyring::{LocalizedPoly, MultiPoly};
use crate::refgroup::{GroupError, Multiplicity, MultiplicityError, ReflectionGroup};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QiError {
    #[error("incompatible multiplicity: {0}")]
    IncompatibleMultiplicity(#[from] MultiplicityError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dunkl(#[from] DunklError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("this operation needs an integral multiplicity")]
    NotIntegral,
    #[error("stability failure: {0}")]
    StabilityFailure(String),
    #[error("freeness mismatch: {0}")]
    FreenessMismatch(String),
    #[error("joint kernel for {tau} has dimension {found}, expected {expected}")]
    KernelShape { tau: String, expected: usize, found: usize },
}

/// Why a function fails to be quasi-invariant: the component
/// `e_{H,−i−a}(f)` vanishes to order `valuation` along H, below `required`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub hyperplane: usize,
    pub index: i64,
    pub valuation: i64,
    pub required: i64,
    pub remainder: LocalizedPoly,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "hyperplane": self.hyperplane,
            "index": self.index,
            "valuation": self.valuation,
            "required": self.required,
            "remainder": self.remainder.to_string(),
        })
    }
}

/// `e_{H,j}` applied to a localized function.
pub fn idempotent_localized(group: &ReflectionGroup, h: usize, j: i64, f: &LocalizedPoly) -> LocalizedPoly {
    let hp = group.hyperplane(h);
    let mut acc = LocalizedPoly::zero(f.arrangement());
    for (l, &w) in hp.stabilizer.iter().enumerate() {
        acc = acc.add(&group.act_localized(w, f, 0).scale(&group.idempotent_coeff(h, j, l)));
    }
    acc
}

/// Membership in `Q_k`: `e_{H,−i−a_H}(f)` vanishes to order at least
/// `n_H k_{H,i}` along every H. Returns the first failing component.
pub fn quasi_invariance_witness(
    group: &ReflectionGroup,
    f: &LocalizedPoly,
    k: &Multiplicity,
) -> Result<Option<Witness>, QiError> {
    k.check_usable()?;
    if f.is_zero() {
        return Ok(None);
    }
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        let c = hp.orbit;
        let a = k.a(c);
        let base = f.valuation(h, 0);
        for i in 0..hp.n as i64 {
            let required = k.scaled(c, i).expect("checked");
            if base >= required {
                continue;
            }
            let comp = idempotent_localized(group, h, -i - a, f);
            if comp.is_zero() {
                continue;
            }
            let valuation = comp.valuation(h, required.max(0) as u32);
            if valuation < required {
                return Ok(Some(Witness { hyperplane: h, index: i, valuation, required, remainder: comp }));
            }
        }
    }
    Ok(None)
}

pub fn is_quasi_invariant(group: &ReflectionGroup, f: &LocalizedPoly, k: &Multiplicity) -> Result<bool, QiError> {
    Ok(quasi_invariance_witness(group, f, k)?.is_none())
}

pub fn is_quasi_invariant_poly(group: &ReflectionGroup, f: &MultiPoly, k: &Multiplicity) -> Result<bool, QiError> {
    is_quasi_invariant(group, &LocalizedPoly::from_poly(f.clone(), group.arrangement()), k)
}

/// An eventually periodic subset of the integers: `x` belongs iff
/// `x ≥ bases[x mod period]` (and `x ≥ floor`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSet {
    pub period: usize,
    pub bases: Vec<i64>,
}

impl PeriodicSet {
    pub fn contains(&self, x: i64) -> bool {
        x >= self.bases[x.rem_euclid(self.period as i64) as usize]
    }

    /// Members in `[lo, hi]`.
    pub fn members(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&x| self.contains(x)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "period": self.period, "bases": self.bases })
    }
}

/// The exponent sets of the normal expansion along one hyperplane:
/// `S = ∪_i {i + n k_i + nZ_{≥0}}` and `R = {r ≥ 0 : r + S ⊆ S}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionSets {
    pub hyperplane: usize,
    pub s: PeriodicSet,
    pub r: PeriodicSet,
}

impl ExpansionSets {
    /// `k'_ρ = (min{r ∈ R : r ≡ ρ} − ρ)/n`.
    pub fn decoded(&self) -> Vec<i64> {
        let n = self.r.period as i64;
        self.r.bases.iter().enumerate().map(|(rho, &b)| (b - rho as i64) / n).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "hyperplane": self.hyperplane, "S": self.s.to_json(), "R": self.r.to_json() })
    }
}

pub fn normal_expansion_sets(group: &ReflectionGroup, k: &Multiplicity, h: usize) -> Result<ExpansionSets, QiError> {
    if !k.is_integral() {
        return Err(QiError::NotIntegral);
    }
    let hp = group.hyperplane(h);
    let n = hp.n;
    let s_bases: Vec<i64> = (0..n as i64).map(|i| i + k.scaled(hp.orbit, i).expect("integral")).collect();
    let r_bases = (0..n)
        .map(|rho| {
            let need = (0..n).map(|i| s_bases[(i + rho) % n] - s_bases[i]).max().unwrap_or(0);
            need.max(rho as i64)
        })
        .collect();
    Ok(ExpansionSets {
        hyperplane: h,
        s: PeriodicSet { period: n, bases: s_bases },
        r: PeriodicSet { period: n, bases: r_bases },
    })
}

/// The multiplicity `k'` with `A_k = Q_{k'}`.
pub fn compute_ak(group: &ReflectionGroup, k: &Multiplicity) -> Result<Multiplicity, QiError> {
    let values = group
        .orbits()
        .iter()
        .map(|orbit| {
            let sets = normal_expansion_sets(group, k, orbit[0])?;
            Ok(sets.decoded().into_iter().map(|v| Rational::from_integer(v.into())).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>, QiError>>()?;
    Ok(Multiplicity::new(values, None))
}

/// Membership through normal expansions: every `t`-exponent of `f(y + t v_H)`
/// must lie in `S_H`.
pub fn normal_expansion_test(group: &ReflectionGroup, f: &MultiPoly, k: &Multiplicity) -> Result<bool, QiError> {
    let mut checked = BTreeSet::new();
    for h in 0..group.hyperplanes().len() {
        let sets = normal_expansion_sets(group, k, h)?;
        if !checked.insert((h, sets.s.bases.clone())) {
            continue;
        }
        if expansion::normal_exponents(group, h, f).into_iter().any(|e| !sets.s.contains(e as i64)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `r = max(0, max −n_C k_{C,i})`: the power of δ clearing all poles.
pub(crate) fn pole_shift(group: &ReflectionGroup, k: &Multiplicity) -> u32 {
    (0..group.orbits().len())
        .flat_map(|c| (0..group.orbit_n(c) as i64).map(move |i| (c, i)))
        .map(|(c, i)| -k.scaled(c, i).expect("checked"))
        .max()
        .unwrap_or(0)
        .max(0) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;
    use std::sync::Arc;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_membership() {
        let g = group("cyclic:2");
        let k = Multiplicity::from_ints(&[&[0, 1]]);
        let x = MultiPoly::var(0, 1);
        assert!(is_quasi_invariant_poly(&g, &x.pow(2), &k).unwrap());
        assert!(!is_quasi_invariant_poly(&g, &x, &k).unwrap());
        assert!(is_quasi_invariant_poly(&g, &x.pow(3), &k).unwrap());
        let w = quasi_invariance_witness(&g, &LocalizedPoly::from_poly(x, g.arrangement()), &k).unwrap().unwrap();
        assert_eq!((w.index, w.valuation, w.required), (1, 1, 2));
    }

    #[test]
    fn expansion_sets_rank_one() {
        let g = group("cyclic:2");
        let sets = normal_expansion_sets(&g, &Multiplicity::from_ints(&[&[0, 2]]), 0).unwrap();
        assert_eq!(sets.s.members(0, 9), vec![0, 2, 4, 5, 6, 7, 8, 9]);
        assert_eq!(sets.r.members(0, 7), vec![0, 2, 4, 5, 6, 7]);
        assert_eq!(sets.decoded(), vec![0, 2]);
        let zero = normal_expansion_sets(&g, &Multiplicity::from_ints(&[&[0, 0]]), 0).unwrap();
        assert_eq!(zero.r.members(0, 5), vec![0, 1, 2, 3, 4, 5]);
    }
}

//! KZ twists from lowest-degree Dunkl kernels, the `g_C` symmetries of
//! multiplicities, and the fake-degree symmetry.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::exactnum::{rat, Cyc};
use crate::linalg::{Echelon, Mat};
use crate::polyring::Monomial;
use crate::refgroup::{character_inner, Multiplicity, ReflectionGroup, WRep};

use super::basis::compute_basis;
use super::poincare::{fake_degree, integral_c};
use super::tau::{act_tau, tau_coefficients, tau_from_coefficients, tau_quasi_invariants, PolyDunkl, TauVector};
use super::QiError;

/// `kz_k` as a permutation of irreducibles: `mapping[τ'] = τ` when the
/// lowest-degree Dunkl kernel of `Q_k(τ)` has isotype `τ'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistPermutation {
    pub k: Multiplicity,
    pub mapping: BTreeMap<String, String>,
    pub generator_degrees: BTreeMap<String, i64>,
    /// Irreducible names in the group's canonical order.
    pub names: Vec<String>,
}

impl TwistPermutation {
    pub fn identity(names: &[String], k: Multiplicity) -> TwistPermutation {
        TwistPermutation {
            k,
            mapping: names.iter().map(|n| (n.clone(), n.clone())).collect(),
            generator_degrees: BTreeMap::new(),
            names: names.to_vec(),
        }
    }

    pub fn apply(&self, name: &str) -> &str {
        &self.mapping[name]
    }

    pub fn inverse(&self, name: &str) -> Option<&str> {
        self.mapping.iter().find(|(_, v)| v.as_str() == name).map(|(k, _)| k.as_str())
    }

    /// `σ ↦ self(other(σ))`.
    pub fn compose(&self, other: &TwistPermutation) -> BTreeMap<String, String> {
        other.mapping.iter().map(|(k, v)| (k.clone(), self.mapping[v].clone())).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(k, v)| k == v)
    }

    pub fn is_bijective(&self) -> bool {
        let mut images: Vec<&String> = self.mapping.values().collect();
        images.sort();
        images.dedup();
        images.len() == self.mapping.len() && self.mapping.len() == self.names.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k.to_json(),
            "permutation": self.names.iter().map(|n| self.mapping[n].clone()).collect::<Vec<_>>(),
            "irreps": self.names,
            "generatorDegrees": self.generator_degrees,
        })
    }
}

/// Joint kernel of the Dunkl operators on `Q_k(τ)` in degree `d`.
fn dunkl_kernel(
    group: &Arc<ReflectionGroup>,
    dunkl: &PolyDunkl,
    tau: &WRep,
    basis: &[TauVector],
    d: i64,
) -> Result<Vec<TauVector>, QiError> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    if d == 0 {
        return Ok(basis.to_vec());
    }
    let dim = group.dim();
    let lower = Monomial::all_of_degree(dim, (d - 1) as u32);
    let width = lower.len() * tau.dim;
    let mut m = Mat::zeros(width * dim, basis.len());
    for (col, v) in basis.iter().enumerate() {
        for j in 0..dim {
            let img = dunkl.apply(j, Some(&tau.matrices), v)?;
            for (r, c) in tau_coefficients(&img, &lower).into_iter().enumerate() {
                m[(j * width + r, col)] = c;
            }
        }
    }
    let upper = Monomial::all_of_degree(dim, d as u32);
    Ok(m.nullspace()
        .into_iter()
        .map(|coeffs| {
            let mut acc = vec![Cyc::zero(); upper.len() * tau.dim];
            for (c, v) in coeffs.iter().zip(basis) {
                if c.is_zero() {
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(tau_coefficients(v, &upper)) {
                    *a += &(c * &b);
                }
            }
            tau_from_coefficients(&acc, &upper, tau.dim, dim)
        })
        .collect())
}

/// Character of the diagonal W-action on a W-stable span of τ-valued polynomials.
fn span_character(group: &ReflectionGroup, tau: &WRep, space: &[TauVector], d: i64) -> Option<Vec<Cyc>> {
    let monos = Monomial::all_of_degree(group.dim(), d as u32);
    let mut ech = Echelon::new(monos.len() * tau.dim);
    for v in space {
        ech.insert(&tau_coefficients(v, &monos));
    }
    let rows: Vec<TauVector> =
        ech.rows().iter().map(|r| tau_from_coefficients(r, &monos, tau.dim, group.dim())).collect();
    let mut chi = Vec::with_capacity(group.order());
    for w in 0..group.order() {
        let mut tr = Cyc::zero();
        for (i, v) in rows.iter().enumerate() {
            let img = act_tau(group, &tau.matrices, w, v);
            tr += &ech.coordinates(&tau_coefficients(&img, &monos))?[i];
        }
        chi.push(tr);
    }
    Some(chi)
}

/// Computes `kz_k` for integral `k` from the Dunkl kernels of every `Q_k(τ)`.
pub fn kz_twist(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<TwistPermutation, QiError> {
    if !k.is_integral() {
        return Err(QiError::NotIntegral);
    }
    let reps = group.irreps()?;
    let names: Vec<String> = reps.iter().map(|r| r.name.clone()).collect();
    let cs = reps.iter().map(|r| integral_c(group, k, r)).collect::<Result<Vec<i64>, QiError>>()?;
    let bound = cs.iter().copied().max().unwrap_or(0);
    let dunkl = PolyDunkl::new(group, k);
    let mut mapping = BTreeMap::new();
    let mut generator_degrees = BTreeMap::new();
    for tau in reps {
        let module = tau_quasi_invariants(group, tau, k, bound)?;
        if module.shift() != 0 {
            return Err(QiError::NotIntegral);
        }
        let mut found: Option<(i64, Vec<TauVector>)> = None;
        let mut total = 0;
        for d in module.min_deg().max(0)..=bound {
            let ker = dunkl_kernel(group, &dunkl, tau, module.degree(d), d)?;
            if ker.is_empty() {
                continue;
            }
            total += ker.len();
            if found.is_none() {
                found = Some((d, ker));
            }
        }
        let shape_error = |found: usize| QiError::KernelShape { tau: tau.name.clone(), expected: tau.dim, found };
        let Some((d, ker)) = found else { return Err(shape_error(0)) };
        if total != tau.dim || ker.len() != tau.dim {
            return Err(shape_error(total));
        }
        let chi = span_character(group, tau, &ker, d).ok_or_else(|| shape_error(ker.len()))?;
        let source = reps
            .iter()
            .find(|r| r.dim == tau.dim && character_inner(&chi, &r.character).is_one())
            .ok_or_else(|| shape_error(ker.len()))?;
        mapping.insert(source.name.clone(), tau.name.clone());
        generator_degrees.insert(source.name.clone(), d);
    }
    let perm = TwistPermutation { k: k.clone(), mapping, generator_degrees, names };
    if !perm.is_bijective() {
        return Err(QiError::KernelShape { tau: "twist".into(), expected: perm.names.len(), found: perm.mapping.len() });
    }
    Ok(perm)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GOrbitEntry {
    pub orbit: usize,
    pub image: Multiplicity,
    pub same_space: bool,
    pub period_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GOrbitReport {
    pub k: Multiplicity,
    pub max_deg: i64,
    pub entries: Vec<GOrbitEntry>,
}

impl GOrbitReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.same_space && e.period_ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k.to_json(),
            "maxDeg": self.max_deg,
            "passed": self.passed(),
            "entries": self.entries.iter().map(|e| json!({
                "orbit": e.orbit,
                "image": e.image.to_json(),
                "sameSpace": e.same_space,
                "periodOk": e.period_ok,
            })).collect::<Vec<_>>(),
        })
    }
}

/// For each orbit C: `Q_{g_C k} = Q_k` up to `max_deg` and `(g_C)^{n_C} k = k`.
pub fn g_orbit_checks(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<GOrbitReport, QiError> {
    k.check_compatible()?;
    let k = if k.twist().is_none() { k.clone().with_twist(Some(vec![0; group.orbits().len()])) } else { k.clone() };
    let base = compute_basis(group, &k, max_deg)?;
    let mut entries = Vec::new();
    for c in 0..group.orbits().len() {
        let image = k.g_transform(c);
        let other = compute_basis(group, &image, max_deg)?;
        let lo = base.min_deg().min(other.min_deg());
        let mut cur = k.clone();
        for _ in 0..group.orbit_n(c) {
            cur = cur.g_transform(c);
        }
        entries.push(GOrbitEntry {
            orbit: c,
            image,
            same_space: base.same_space(&other, lo, max_deg),
            period_ok: cur.normalized_twist() == k.normalized_twist(),
        });
    }
    Ok(GOrbitReport { k, max_deg, entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeDegreeEntry {
    pub tau: String,
    pub tau_prime: String,
    /// `t^{deg δ_a} χ_{ε_a⊗τ}(t)`, numerator over `Π(1 − t^{e_i})`.
    pub left: Vec<i64>,
    /// `t^{c_{τ'}(k')} χ_{τ'}(t)`, same denominator.
    pub right: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeDegreeReport {
    pub a: Vec<i64>,
    pub k_prime: Multiplicity,
    pub entries: Vec<FakeDegreeEntry>,
}

impl FakeDegreeReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.left == e.right)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "kPrime": self.k_prime.to_json(),
            "passed": self.passed(),
            "entries": self.entries.iter().map(|e| json!({
                "tau": e.tau,
                "tauPrime": e.tau_prime,
                "left": e.left,
                "right": e.right,
            })).collect::<Vec<_>>(),
        })
    }
}

fn shifted(poly: &[i64], by: i64) -> Vec<i64> {
    let mut out = vec![0; by.max(0) as usize];
    out.extend_from_slice(poly);
    out
}

/// The identity `t^{deg δ_a} χ_{ε_a⊗τ}(t) = t^{c_{τ'}(k')} χ_{τ'}(t)` with
/// `k_{C,i} = a_C/n_C`, `k' = Π_C g_C^{a_C} · k` and `τ = kz_{k'}(τ')`.
pub fn fake_degree_symmetry(group: &Arc<ReflectionGroup>, a: &[i64]) -> Result<FakeDegreeReport, QiError> {
    let orbits = group.orbits().len();
    if a.len() != orbits || a.iter().enumerate().any(|(c, &v)| v < 0 || v >= group.orbit_n(c) as i64) {
        return Err(QiError::InvalidArgument(format!("twist {a:?} needs one value 0 ≤ a_C < n_C per orbit")));
    }
    let values =
        (0..orbits).map(|c| vec![rat(a[c], group.orbit_n(c) as i64); group.orbit_n(c)]).collect::<Vec<_>>();
    let k = Multiplicity::new(values, Some(a.to_vec()));
    let mut k_prime = k.clone();
    for (c, &ac) in a.iter().enumerate() {
        for _ in 0..ac {
            k_prime = k_prime.g_transform(c);
        }
    }
    let k_prime = Multiplicity::new(k_prime.values().to_vec(), None);
    let twist = kz_twist(group, &k_prime)?;
    let reps = group.irreps()?;
    let deg_delta: i64 = (0..orbits).map(|c| a[c] * group.orbits()[c].len() as i64).sum();
    let epsilon: Vec<Cyc> = (0..group.order())
        .map(|w| {
            let mut v = Cyc::one();
            for (c, &ac) in a.iter().enumerate() {
                v = &v * &group.det_orbit(c, w).pow(-ac).expect("root of unity");
            }
            v
        })
        .collect();
    let mut entries = Vec::new();
    for tau in reps {
        let product: Vec<Cyc> = tau.character.iter().zip(&epsilon).map(|(x, e)| x * e).collect();
        let twisted = reps
            .iter()
            .find(|r| r.dim == tau.dim && character_inner(&product, &r.character).is_one())
            .ok_or_else(|| QiError::InvalidArgument(format!("no irreducible matches the twist of {}", tau.name)))?;
        let left = shifted(&fake_degree(group, twisted)?.numerator, deg_delta);
        let source = twist.inverse(&tau.name).expect("bijective").to_string();
        let source_rep = group.irrep_by_name(&source)?;
        let c = integral_c(group, &k_prime, source_rep)?;
        let right = shifted(&fake_degree(group, source_rep)?.numerator, c);
        entries.push(FakeDegreeEntry { tau: tau.name.clone(), tau_prime: source, left, right });
    }
    Ok(FakeDegreeReport { a: a.to_vec(), k_prime, entries })
}

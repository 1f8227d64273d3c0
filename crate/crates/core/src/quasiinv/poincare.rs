//! Poincaré series of `Q_k` (by membership and by the character formula),
//! fake degrees, and free generators over the invariants.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::dunkl::c_scalar;
use crate::linalg::Echelon;
use crate::polyring::{LocalizedPoly, Monomial, MultiPoly};
use crate::refgroup::{Multiplicity, ReflectionGroup, WRep};
use crate::tseries;

use super::basis::{coefficients, compute_basis, QIBasis};
use super::QiError;

/// `Π(1 − t^{d_i})` over the given degrees, as integer coefficients.
fn denominator(degrees: &[u32]) -> Vec<i64> {
    tseries::to_integers(&tseries::denominator(degrees)).expect("integer coefficients")
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Power series `numerator / Π(1 − t^{d_i})` truncated to `len` terms.
fn expand(numerator: &[i64], degrees: &[u32], len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (i, c) in numerator.iter().enumerate().take(len) {
        out[i] = *c;
    }
    for &d in degrees {
        let d = d as usize;
        for i in d..len {
            out[i] += out[i - d];
        }
    }
    out
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// `numerator / Π(1 − t^{d_i})`, with the numerator indexed from `min_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub numerator: Vec<i64>,
    pub denominator_degrees: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareData {
    /// Degree of the first entry of `truncated` and of the numerator.
    pub min_degree: i64,
    pub truncated: Vec<i64>,
    pub closed_form: Option<ClosedForm>,
}

impl PoincareData {
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.truncated.len() as i64 - 1
    }

    pub fn coefficient(&self, d: i64) -> i64 {
        if d < self.min_degree {
            return 0;
        }
        self.truncated.get((d - self.min_degree) as usize).copied().unwrap_or(0)
    }

    /// Whether the closed form expands to the stored truncation.
    pub fn closed_form_consistent(&self) -> bool {
        match &self.closed_form {
            None => true,
            Some(cf) => expand(&cf.numerator, &cf.denominator_degrees, self.truncated.len()) == self.truncated,
        }
    }

    /// Agreement with another series on the common degree range.
    pub fn agrees_with(&self, other: &PoincareData) -> bool {
        let lo = self.min_degree.min(other.min_degree);
        let hi = self.max_degree().min(other.max_degree());
        (lo..=hi).all(|d| self.coefficient(d) == other.coefficient(d))
    }

    pub fn to_json(&self) -> Value {
        let closed = self.closed_form.as_ref().map(|cf| {
            json!({
                "numerator": cf.numerator,
                "numeratorMinDegree": self.min_degree,
                "denominatorDegrees": cf.denominator_degrees,
                "text": format!(
                    "({}) / {}",
                    shifted_poly_string(&cf.numerator, self.min_degree),
                    cf.denominator_degrees.iter().map(|d| format!("(1 - t^{d})")).collect::<Vec<_>>().join("")
                ),
            })
        });
        json!({
            "minDegree": self.min_degree,
            "coefficients": self.truncated,
            "closedForm": closed,
        })
    }
}

fn shifted_poly_string(coeffs: &[i64], shift: i64) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, &c)| {
            let e = i as i64 + shift;
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (-1, false) => format!("-{mono}"),
                _ => format!("{c}*{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// The fake degree `χ_τ(t) = P((C[V]⊗τ)^W, t)` as `numerator / Π(1 − t^{e_i})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeDegree {
    pub tau: String,
    pub numerator: Vec<i64>,
}

pub fn fake_degree(group: &ReflectionGroup, tau: &WRep) -> Result<FakeDegree, QiError> {
    let degrees = group.fundamental_degrees().to_vec();
    let top = group.reflection_count();
    let len = top + degrees.iter().sum::<u32>() as usize + 2;
    let series = group.molien(&tau.character, len);
    let num = tseries::mul(&series, &tseries::denominator(&degrees), len);
    let num = tseries::to_integers(&num)
        .ok_or_else(|| QiError::FreenessMismatch(format!("non-integral fake degree for {}", tau.name)))?;
    if num[top + 1..].iter().any(|&c| c != 0) {
        return Err(QiError::FreenessMismatch(format!("fake degree of {} is not a polynomial", tau.name)));
    }
    Ok(FakeDegree { tau: tau.name.clone(), numerator: trim(num) })
}

/// `c_τ(k)` as an integer, for integral `k`.
pub(crate) fn integral_c(group: &ReflectionGroup, k: &Multiplicity, tau: &WRep) -> Result<i64, QiError> {
    c_scalar(group, k, tau).to_i64().ok_or(QiError::NotIntegral)
}

/// `P(Q_k, t) = Σ_τ (dim τ) t^{c_τ(k)} χ_τ(t)`, truncated at `max_deg`.
pub fn poincare_by_formula(group: &ReflectionGroup, k: &Multiplicity, max_deg: i64) -> Result<PoincareData, QiError> {
    if !k.is_integral() {
        return Err(QiError::NotIntegral);
    }
    let reps = group.irreps()?;
    let mut parts = Vec::new();
    for tau in reps {
        parts.push((integral_c(group, k, tau)?, tau.dim as i64, fake_degree(group, tau)?.numerator));
    }
    let min_degree = parts.iter().map(|p| p.0).min().unwrap_or(0).min(0);
    let mut numerator = Vec::new();
    for (c, dim, fake) in parts {
        let off = (c - min_degree) as usize;
        if numerator.len() < off + fake.len() {
            numerator.resize(off + fake.len(), 0);
        }
        for (i, f) in fake.iter().enumerate() {
            numerator[off + i] += dim * f;
        }
    }
    let degrees = group.fundamental_degrees().to_vec();
    let len = (max_deg - min_degree + 1).max(0) as usize;
    let truncated = expand(&numerator, &degrees, len);
    Ok(PoincareData {
        min_degree,
        truncated,
        closed_form: Some(ClosedForm { numerator: trim(numerator), denominator_degrees: degrees }),
    })
}

/// Dimensions of the computed basis; the closed form is reported when the
/// truncation times `Π(1 − t^{e_i})` stabilizes well inside the range.
pub fn poincare_by_membership(basis: &QIBasis) -> PoincareData {
    let truncated: Vec<i64> = basis.dims().into_iter().map(|(_, n)| n as i64).collect();
    let degrees = basis.group().fundamental_degrees().to_vec();
    let product = poly_mul(&truncated, &denominator(&degrees));
    let len = truncated.len();
    let tail = degrees.iter().max().copied().unwrap_or(1) as usize + 1;
    let closed_form = (len > tail && product[len - tail..len].iter().all(|&c| c == 0)).then(|| ClosedForm {
        numerator: trim(product[..len].to_vec()),
        denominator_degrees: degrees.clone(),
    });
    PoincareData { min_degree: basis.min_deg(), truncated, closed_form }
}

/// Per-degree linear-independence certificate of the greedy extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCertificate {
    pub degree: i64,
    pub module_dim: usize,
    /// Rank of `Σ C[V]^W_{d−d_j} g_j` over earlier generators.
    pub submodule_rank: usize,
    /// `Σ_j dim C[V]^W_{d−d_j}`; equal to the rank when no relations occur.
    pub free_rank: usize,
    pub new_generators: usize,
}

#[derive(Debug, Clone)]
pub struct FreeGenSet {
    pub group: Arc<ReflectionGroup>,
    pub k: Multiplicity,
    pub generators: Vec<(i64, LocalizedPoly)>,
    pub certificates: Vec<GeneratorCertificate>,
    pub invariant_degrees: Vec<u32>,
}

impl FreeGenSet {
    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.0).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k.to_json(),
            "count": self.generators.len(),
            "degrees": self.degrees(),
            "invariantDegrees": self.invariant_degrees,
            "generators": self.generators.iter().map(|(d, g)| json!({"degree": d, "poly": g.to_string()})).collect::<Vec<_>>(),
            "certificates": self.certificates.iter().map(|c| json!({
                "degree": c.degree,
                "moduleDim": c.module_dim,
                "submoduleRank": c.submodule_rank,
                "freeRank": c.free_rank,
                "newGenerators": c.new_generators,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Greedy extraction of homogeneous free generators of `Q_k` over `C[V]^W`,
/// checked against the character formula degree by degree.
pub fn free_generators(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<FreeGenSet, QiError> {
    if !k.is_integral() {
        return Err(QiError::NotIntegral);
    }
    let formula = poincare_by_formula(group, k, 0)?;
    let cf = formula.closed_form.clone().expect("formula has a closed form");
    if cf.numerator.iter().any(|&c| c < 0) || cf.numerator.iter().sum::<i64>() != group.order() as i64 {
        return Err(QiError::FreenessMismatch(format!(
            "numerator {:?} is not a non-negative polynomial with value |W| = {} at t = 1",
            cf.numerator,
            group.order()
        )));
    }
    let top = formula.min_degree + cf.numerator.len() as i64 - 1;
    let basis = compute_basis(group, k, top)?;
    let arrs = group.hyperplanes().len() as i64;
    let dim = group.dim();
    let shift = basis.shift() as i64;
    let mut generators: Vec<(i64, MultiPoly)> = Vec::new();
    let mut certificates = Vec::new();
    for d in basis.min_deg()..=top {
        let nd = d + shift * arrs;
        let monos = Monomial::all_of_degree(dim, nd as u32);
        let mut sub = Echelon::new(monos.len());
        let mut free_rank = 0;
        for (gd, g) in &generators {
            let inv = group.invariant_basis((d - gd) as u32);
            free_rank += inv.len();
            for p in &inv {
                sub.insert(&coefficients(&p.mul(g), &monos));
            }
        }
        let submodule_rank = sub.rank();
        let mut new = 0;
        for f in basis.degree(d) {
            if sub.insert(&coefficients(f, &monos)) {
                generators.push((d, f.clone()));
                new += 1;
            }
        }
        let expected = cf.numerator.get((d - formula.min_degree) as usize).copied().unwrap_or(0);
        let module_dim = basis.dim(d);
        if submodule_rank != free_rank || new as i64 != expected {
            return Err(QiError::FreenessMismatch(format!(
                "degree {d}: submodule rank {submodule_rank}, free rank {free_rank}, {new} new generators, expected {expected}"
            )));
        }
        certificates.push(GeneratorCertificate { degree: d, module_dim, submodule_rank, free_rank, new_generators: new });
    }
    if generators.len() != group.order() {
        return Err(QiError::FreenessMismatch(format!("found {} generators, expected {}", generators.len(), group.order())));
    }
    let mut inv_delta = LocalizedPoly::one(group.arrangement());
    for h in 0..group.hyperplanes().len() {
        inv_delta = inv_delta.mul(&LocalizedPoly::form_power(h, -shift, group.arrangement()));
    }
    Ok(FreeGenSet {
        group: group.clone(),
        k: k.clone(),
        generators: generators.into_iter().map(|(d, g)| (d, inv_delta.mul_poly(&g))).collect(),
        certificates,
        invariant_degrees: group.fundamental_degrees().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn cyclic_three_formula() {
        let g = group("cyclic:3");
        let p = poincare_by_formula(&g, &Multiplicity::from_ints(&[&[0, 1, 1]]), 10).unwrap();
        let cf = p.closed_form.clone().unwrap();
        assert_eq!(cf.numerator, vec![1, 0, 0, 0, 1, 1]);
        assert_eq!(cf.denominator_degrees, vec![3]);
        assert!(p.closed_form_consistent());
    }

    #[test]
    fn rank_one_generators() {
        let g = group("cyclic:2");
        let gens = free_generators(&g, &Multiplicity::from_ints(&[&[0, 1]])).unwrap();
        assert_eq!(gens.degrees(), vec![0, 3]);
    }
}

//! τ-valued quasi-invariants `Q_k(τ) ⊂ C[V_reg] ⊗ τ`, Dunkl operators acting
//! on vector-valued polynomials, and the symmetrization identity for the
//! regular representation.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::dunkl::reflection_weight;
use crate::exactnum::{rat, Cyc};
use crate::linalg::{Echelon, Mat};
use crate::polyring::{Monomial, MultiPoly};
use crate::refgroup::{Multiplicity, ReflectionGroup, WRep};

use super::basis::{coefficients, compute_basis, kernel_canonical, QIBasis};
use super::expansion::{expansion_rows, SparseRow};
use super::{pole_shift, QiError};

/// A vector of polynomials, one per basis vector of τ.
pub type TauVector = Vec<MultiPoly>;

#[derive(Debug, Clone)]
pub struct TauModule {
    group: Arc<ReflectionGroup>,
    tau: WRep,
    k: Multiplicity,
    max_deg: i64,
    min_deg: i64,
    shift: u32,
    sandwich: i64,
    per_degree: Vec<Vec<TauVector>>,
}

impl TauModule {
    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn tau(&self) -> &WRep {
        &self.tau
    }

    pub fn multiplicity(&self) -> &Multiplicity {
        &self.k
    }

    pub fn max_deg(&self) -> i64 {
        self.max_deg
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Elements are `numerator / δ^shift`.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// An exponent `r` with `δ^r C[V]⊗τ ⊆ Q_k(τ) ⊆ δ^{−r} C[V]⊗τ`.
    pub fn sandwich_exponent(&self) -> i64 {
        self.sandwich
    }

    /// Numerators of the degree-`d` basis.
    pub fn degree(&self, d: i64) -> &[TauVector] {
        if d < self.min_deg || d > self.max_deg {
            return &[];
        }
        &self.per_degree[(d - self.min_deg) as usize]
    }

    pub fn dim(&self, d: i64) -> usize {
        self.degree(d).len()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        (self.min_deg..=self.max_deg).map(|d| (d, self.dim(d))).collect()
    }

    fn numerator_degree(&self, d: i64) -> i64 {
        d + self.shift as i64 * self.group.hyperplanes().len() as i64
    }

    /// Echelon form of the degree-`d` span in `(component, monomial)` coordinates.
    pub fn span(&self, d: i64) -> Echelon {
        let monos = self.monomials(d);
        let mut ech = Echelon::new(monos.len() * self.tau.dim);
        for v in self.degree(d) {
            ech.insert(&tau_coefficients(v, &monos));
        }
        ech
    }

    fn monomials(&self, d: i64) -> Vec<Monomial> {
        let nd = self.numerator_degree(d);
        if nd < 0 {
            return Vec::new();
        }
        Monomial::all_of_degree(self.group.dim(), nd as u32)
    }

    pub fn to_json(&self) -> Value {
        let names = MultiPoly::default_names(self.group.dim());
        let per: Vec<Value> = (self.min_deg..=self.max_deg)
            .map(|d| {
                let basis: Vec<Vec<String>> = self
                    .degree(d)
                    .iter()
                    .map(|v| v.iter().map(|f| f.to_string_with(&names)).collect())
                    .collect();
                json!({ "degree": d, "dim": self.dim(d), "basis": basis })
            })
            .collect();
        json!({
            "tau": self.tau.name,
            "k": self.k.to_json(),
            "deltaShift": self.shift,
            "sandwichExponent": self.sandwich,
            "perDegree": per,
        })
    }
}

pub(crate) fn tau_coefficients(v: &[MultiPoly], monos: &[Monomial]) -> Vec<Cyc> {
    v.iter().flat_map(|f| coefficients(f, monos)).collect()
}

pub(crate) fn tau_from_coefficients(v: &[Cyc], monos: &[Monomial], comps: usize, nvars: usize) -> TauVector {
    (0..comps)
        .map(|c| super::basis::from_coefficients(&v[c * monos.len()..(c + 1) * monos.len()], monos, nvars))
        .collect()
}

/// Diagonal action `w·(f ⊗ u) = f^w ⊗ τ(w)u`.
pub fn act_tau(group: &ReflectionGroup, rep: &[Mat], w: usize, v: &[MultiPoly]) -> TauVector {
    let moved: Vec<MultiPoly> = v.iter().map(|f| group.act_poly(w, f, 0)).collect();
    let m = &rep[w];
    (0..v.len())
        .map(|i| {
            let mut acc = MultiPoly::zero(group.dim());
            for (j, f) in moved.iter().enumerate() {
                let c = &m[(i, j)];
                if !c.is_zero() && !f.is_zero() {
                    acc = acc.add(&f.scale(c));
                }
            }
            acc
        })
        .collect()
}

/// `E = (1/n) Σ_l ζ^{−jl} τ(s_H^l)`, the image of `e_{H,j}` in `End(τ)`.
fn tau_idempotent(group: &ReflectionGroup, tau: &WRep, h: usize, j: i64) -> Mat {
    let hp = group.hyperplane(h);
    let mut e = Mat::zeros(tau.dim, tau.dim);
    for (l, &w) in hp.stabilizer.iter().enumerate() {
        e = e.add(&tau.matrices[w].scale(&group.idempotent_coeff(h, j, l)));
    }
    e
}

fn nonzero_rows(m: &Mat) -> Vec<Vec<Cyc>> {
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

fn tau_rows(group: &ReflectionGroup, tau: &WRep, k: &Multiplicity, shift: u32, nd: u32, mlen: usize) -> Vec<SparseRow> {
    let mut rows = Vec::new();
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        let c = hp.orbit;
        let a = k.a(c);
        for i in 0..hp.n as i64 {
            let bound = k.scaled(c, i).expect("checked") + shift as i64;
            if bound <= 0 {
                continue;
            }
            let proj = nonzero_rows(&tau_idempotent(group, tau, h, i + a));
            if proj.is_empty() {
                continue;
            }
            for s in 0..bound.min(nd as i64 + 1) {
                for frame in expansion_rows(group, h, nd, s as u32).iter() {
                    for prow in &proj {
                        let mut row = SparseRow::new();
                        for (comp, pc) in prow.iter().enumerate() {
                            if pc.is_zero() {
                                continue;
                            }
                            for (j, fc) in frame {
                                row.push((comp * mlen + j, pc * fc));
                            }
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

/// Per-degree bases of `Q_k(τ)` up to `max_deg`.
pub fn tau_quasi_invariants(
    group: &Arc<ReflectionGroup>,
    tau: &WRep,
    k: &Multiplicity,
    max_deg: i64,
) -> Result<TauModule, QiError> {
    k.check_usable()?;
    let shift = pole_shift(group, k);
    let min_deg = -(shift as i64) * group.hyperplanes().len() as i64;
    let dim = group.dim();
    let per_degree = (min_deg..=max_deg.max(min_deg - 1))
        .map(|d| {
            let nd = (d - min_deg) as u32;
            let monos = Monomial::all_of_degree(dim, nd);
            let rows = tau_rows(group, tau, k, shift, nd, monos.len());
            kernel_canonical(&rows, monos.len() * tau.dim)
                .iter()
                .map(|v| tau_from_coefficients(v, &monos, tau.dim, dim))
                .collect()
        })
        .collect();
    let mut sandwich = shift as i64;
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        for i in 0..hp.n as i64 {
            let e = tau_idempotent(group, tau, h, i + k.a(hp.orbit));
            if e.rows() > 0 && !nonzero_rows(&e).is_empty() {
                sandwich = sandwich.max(k.scaled(hp.orbit, i).expect("checked"));
            }
        }
    }
    Ok(TauModule { group: group.clone(), tau: tau.clone(), k: k.clone(), max_deg, min_deg, shift, sandwich, per_degree })
}

/// The regular representation `CW` with W acting by left multiplication.
pub fn regular_rep(group: &ReflectionGroup) -> WRep {
    let n = group.order();
    let matrices: Vec<Mat> = (0..n)
        .map(|w| {
            let mut m = Mat::zeros(n, n);
            for v in 0..n {
                m[(group.mul(w, v), v)] = Cyc::one();
            }
            m
        })
        .collect();
    let character = matrices.iter().map(Mat::trace).collect();
    WRep { name: "regular".to_string(), dim: n, matrices, character }
}

/// Dunkl operators applied to polynomials and τ-valued polynomials by
/// exact division: `T_ξ φ = ∂_ξ φ − Σ_H (α_H(ξ)/α_H) Σ_l c_{H,l} s_H^l·φ`.
pub struct PolyDunkl {
    group: Arc<ReflectionGroup>,
    /// `weights[h][l] = c_{H,l}`.
    weights: Vec<Vec<Cyc>>,
    forms: Vec<MultiPoly>,
}

impl PolyDunkl {
    pub fn new(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> PolyDunkl {
        let weights = group
            .hyperplanes()
            .iter()
            .enumerate()
            .map(|(h, hp)| (0..hp.n).map(|l| reflection_weight(group, k, h, l)).collect())
            .collect();
        let forms = group.hyperplanes().iter().map(|hp| hp.alpha_poly(0, group.dim())).collect();
        PolyDunkl { group: group.clone(), weights, forms }
    }

    /// `T_{e_j}` on a τ-valued polynomial; `rep` gives the action on τ
    /// (`None` for scalar functions).
    pub fn apply(&self, j: usize, rep: Option<&[Mat]>, v: &[MultiPoly]) -> Result<TauVector, QiError> {
        let dim = self.group.dim();
        let mut out: TauVector = v.iter().map(|f| f.derivative(j)).collect();
        for (h, hp) in self.group.hyperplanes().iter().enumerate() {
            let a = &hp.alpha[j];
            if a.is_zero() {
                continue;
            }
            let mut num: TauVector = vec![MultiPoly::zero(dim); v.len()];
            for (l, &w) in hp.stabilizer.iter().enumerate() {
                let c = &self.weights[h][l];
                if c.is_zero() {
                    continue;
                }
                let moved = match rep {
                    Some(r) => act_tau(&self.group, r, w, v),
                    None => v.iter().map(|f| self.group.act_poly(w, f, 0)).collect(),
                };
                for (acc, f) in num.iter_mut().zip(&moved) {
                    *acc = acc.add(&f.scale(c));
                }
            }
            for (o, f) in out.iter_mut().zip(&num) {
                let q = f.divide_exact_by_linear_form(&self.forms[h], 1).map_err(|_| {
                    QiError::StabilityFailure(format!("T_{j} leaves polynomials along hyperplane {h}"))
                })?;
                *o = o.sub(&q.scale(a));
            }
        }
        Ok(out)
    }

    pub fn apply_scalar(&self, j: usize, f: &MultiPoly) -> Result<MultiPoly, QiError> {
        Ok(self.apply(j, None, std::slice::from_ref(f))?.remove(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub checked: usize,
}

impl StabilityReport {
    pub fn to_json(&self) -> Value {
        json!({ "checked": self.checked, "passed": true })
    }
}

/// Checks `T_{e_j}(φ) ∈ Q_k(τ)` for every basis element of degree ≥ 1.
pub fn dunkl_stability_tau(module: &TauModule) -> Result<StabilityReport, QiError> {
    if module.shift != 0 {
        return Err(QiError::NotIntegral);
    }
    let dunkl = PolyDunkl::new(&module.group, &module.k);
    let rep = &module.tau.matrices;
    let mut checked = 0;
    for d in 1..=module.max_deg {
        let target = module.span(d - 1);
        let monos = module.monomials(d - 1);
        for v in module.degree(d) {
            for j in 0..module.group.dim() {
                let img = dunkl.apply(j, Some(rep), v)?;
                if !target.contains(&tau_coefficients(&img, &monos)) {
                    return Err(QiError::StabilityFailure(format!(
                        "T_{j} maps a degree-{d} element of Q_k({}) outside the module",
                        module.tau.name
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(StabilityReport { checked })
}

/// Checks `L_{p,k}(f) ∈ Q_k` for the fundamental invariants `p` of degree at
/// most `max_p_degree` and every basis element `f`.
pub fn dunkl_stability_basis(basis: &QIBasis, max_p_degree: u32) -> Result<StabilityReport, QiError> {
    if basis.shift() != 0 {
        return Err(QiError::NotIntegral);
    }
    let group = basis.group();
    let family = crate::dunkl::DunklFamily::new(group, basis.multiplicity());
    let mut checked = 0;
    for p in group.fundamental_invariants() {
        let pd = p.degree().unwrap_or(0) as i64;
        if pd as u32 > max_p_degree {
            continue;
        }
        let op = family.calogero_moser(&p.conj_coeffs())?;
        for d in pd..=basis.max_deg() {
            for f in basis.elements(d) {
                let img = op.apply(&f);
                if !basis.contains(d - pd, &img) {
                    return Err(QiError::StabilityFailure(format!(
                        "L_p with deg p = {pd} maps a degree-{d} quasi-invariant outside Q_k: {img}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(StabilityReport { checked })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfatDegree {
    pub degree: i64,
    pub symmetrized_dim: usize,
    pub scalar_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfatReport {
    pub degrees: Vec<QfatDegree>,
}

impl QfatReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.equal)
    }

    pub fn to_json(&self) -> Value {
        let per: Vec<Value> = self
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "degree": d.degree,
                    "symmetrizedDim": d.symmetrized_dim,
                    "scalarDim": d.scalar_dim,
                    "equal": d.equal,
                })
            })
            .collect();
        json!({ "passed": self.passed(), "degrees": per })
    }
}

/// Compares the symmetrization of `Q_k(CW)` with `{e(f⊗1) : f ∈ Q_k}` in
/// each degree up to `max_deg`.
pub fn qfat_check(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<QfatReport, QiError> {
    let reg = regular_rep(group);
    let module = tau_quasi_invariants(group, &reg, k, max_deg)?;
    let scalar = compute_basis(group, k, max_deg)?;
    let order = group.order();
    let scale = Cyc::from_rational(&rat(1, order as i64));
    if module.shift != 0 {
        return Err(QiError::NotIntegral);
    }
    let dim = group.dim();
    let mut degrees = Vec::new();
    for d in module.min_deg..=max_deg {
        let monos = module.monomials(d);
        let mut left = Echelon::new(monos.len() * order);
        for v in module.degree(d) {
            let mut acc: TauVector = vec![MultiPoly::zero(dim); order];
            for w in 0..order {
                for (a, f) in acc.iter_mut().zip(act_tau(group, &reg.matrices, w, v)) {
                    *a = a.add(&f);
                }
            }
            let acc: TauVector = acc.iter().map(|f| f.scale(&scale)).collect();
            left.insert(&tau_coefficients(&acc, &monos));
        }
        let mut right = Echelon::new(monos.len() * order);
        for g in scalar.degree(d) {
            let v: TauVector = (0..order).map(|w| group.act_poly(w, g, 0).scale(&scale)).collect();
            right.insert(&tau_coefficients(&v, &monos));
        }
        degrees.push(QfatDegree {
            degree: d,
            symmetrized_dim: left.rank(),
            scalar_dim: right.rank(),
            equal: left.same_span(&right),
        });
    }
    Ok(QfatReport { degrees })
}

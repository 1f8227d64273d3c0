//! Baker–Akhiezer functions `ψ(λ, x) = P(λ, x) e^{⟨λ,x⟩}` for non-negative
//! integral multiplicities, built by applying chains of shift operators to
//! the exponential, and exact checks of their properties.
//!
//! Joint polynomials use `2N` variables: the spectral coordinates `λ` (dual
//! coordinates on V*) first, then the space coordinates `x`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::dunkl::{DiffOp, DunklFamily};
use crate::exactnum::{rat, Cyc};
use crate::linalg::{Echelon, Mat};
use crate::polyring::{Arrangement, LocalizedPoly, Monomial, MultiPoly};
use crate::quasiinv::{compute_basis, quasi_invariance_witness, PolyDunkl, QiError, Witness};
use crate::refgroup::{GroupError, Multiplicity, ReflectionGroup};
use crate::shiftops::{chain_operator, compose_chain, ShiftError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BafError {
    #[error("multiplicity must be non-negative and integral with k_{{C,0}} = 0")]
    InvalidMultiplicity,
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Qi(#[from] QiError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("prefactor keeps a denominator: {0}")]
    DenominatorSurvived(String),
    #[error("top component is not a multiple of the expected leading term")]
    ZeroLeadingTerm,
    #[error("{side}-component of degree {degree} is not quasi-invariant")]
    Membership { side: &'static str, degree: u32, witness: Box<Witness> },
}

/// Layout of the joint variables for a group of rank `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointVars {
    pub rank: usize,
}

impl JointVars {
    pub fn nvars(self) -> usize {
        2 * self.rank
    }

    pub fn x_offset(self) -> usize {
        self.rank
    }

    /// Weights giving the λ-degree of a joint monomial.
    pub fn lambda_weights(self) -> Vec<i64> {
        (0..self.nvars()).map(|i| i64::from(i < self.rank)).collect()
    }

    /// Weights giving the x-degree of a joint monomial.
    pub fn x_weights(self) -> Vec<i64> {
        (0..self.nvars()).map(|i| i64::from(i >= self.rank)).collect()
    }

    /// `⟨λ, x⟩ = Σ λ_i x_i`.
    pub fn pairing(self) -> MultiPoly {
        let n = self.nvars();
        (0..self.rank).fold(MultiPoly::zero(n), |acc, i| acc.add(&MultiPoly::var(i, n).mul(&MultiPoly::var(self.rank + i, n))))
    }

    /// Exchanges the λ and x blocks.
    pub fn swap(self, f: &MultiPoly) -> MultiPoly {
        let perm: Vec<usize> = (0..self.nvars()).map(|i| (i + self.rank) % self.nvars()).collect();
        f.permute_vars(&perm)
    }

    pub fn names(self) -> Vec<String> {
        if self.rank == 1 {
            return vec!["l".into(), "x".into()];
        }
        let lam = (1..=self.rank).map(|i| format!("l{i}"));
        let xs = (1..=self.rank).map(|i| format!("x{i}"));
        lam.chain(xs).collect()
    }
}

/// `prefactor · e^{⟨λ,x⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolynomial {
    pub vars: JointVars,
    pub prefactor: LocalizedPoly,
}

impl ExpPolynomial {
    /// `e^{⟨λ,x⟩}` with the x-forms of `group` available as denominators.
    pub fn exponential(group: &ReflectionGroup) -> ExpPolynomial {
        let vars = JointVars { rank: group.dim() };
        let arr = Arc::new(group.arrangement().embed(vars.x_offset(), vars.nvars()));
        ExpPolynomial { vars, prefactor: LocalizedPoly::one(&arr) }
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        self.prefactor.arrangement()
    }

    pub fn scale(&self, c: &Cyc) -> ExpPolynomial {
        ExpPolynomial { vars: self.vars, prefactor: self.prefactor.scale(c) }
    }

}

impl std::fmt::Display for ExpPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) * exp(<l,x>)", self.prefactor.to_string_with(&self.vars.names()))
    }
}

fn sub_monomials(alpha: &Monomial) -> Vec<Monomial> {
    alpha.0.iter().fold(vec![Vec::new()], |acc, &a| {
        acc.into_iter().flat_map(|prefix| (0..=a).map(move |e| [prefix.clone(), vec![e]].concat())).collect()
    })
    .into_iter()
    .map(Monomial)
    .collect()
}

/// Applies an operator in `x` to `φ`, using `∂_{x_i} e^{⟨λ,x⟩} = λ_i e^{⟨λ,x⟩}`:
/// the prefactor is acted on by `D` with `∂_{x_i}` replaced by `λ_i + ∂_{x_i}`.
pub fn apply_diffop_to_exp(op: &DiffOp, phi: &ExpPolynomial) -> ExpPolynomial {
    let vars = phi.vars;
    let n = vars.nvars();
    let arr = phi.arrangement().clone();
    let mut derivs: BTreeMap<Monomial, LocalizedPoly> = BTreeMap::new();
    let mut parts = Vec::new();
    for (alpha, a) in op.terms() {
        let coeff = a.embed(vars.x_offset(), &arr);
        for delta in sub_monomials(alpha) {
            let d = derivs.entry(delta.clone()).or_insert_with(|| phi.prefactor.derivative_multi(&delta, vars.x_offset()));
            if d.is_zero() {
                continue;
            }
            let rest = alpha.checked_div(&delta).expect("divisor");
            let mut lam = vec![0; n];
            lam[..vars.rank].copy_from_slice(&rest.0);
            let factor = MultiPoly::monomial(Monomial(lam), Cyc::from_int(alpha.binomial(&delta) as i64));
            parts.push(coeff.mul(d).mul_poly(&factor));
        }
    }
    ExpPolynomial { vars, prefactor: LocalizedPoly::sum(&parts, &arr) }
}

/// `Π_C (δ*_C(λ) δ_C(x))^{N_C}` with `N_C = Σ_i k_{C,i}`.
pub fn leading_term(group: &ReflectionGroup, k: &Multiplicity) -> MultiPoly {
    let vars = JointVars { rank: group.dim() };
    let n = vars.nvars();
    let mut out = MultiPoly::one(n);
    for (c, orbit) in group.orbits().iter().enumerate() {
        let total = k.orbit_values(c).iter().fold(rat(0, 1), |acc, q| acc + q);
        let power = u32::try_from(total.to_integer()).expect("non-negative multiplicity");
        let factor = orbit.iter().fold(MultiPoly::one(n), |acc, &h| {
            let hp = group.hyperplane(h);
            acc.mul(&hp.v_poly(0, n)).mul(&hp.alpha_poly(vars.x_offset(), n))
        });
        out = out.mul(&factor.pow(power));
    }
    out
}

#[derive(Debug, Clone)]
pub struct BafData {
    pub group: Arc<ReflectionGroup>,
    pub k: Multiplicity,
    pub psi: ExpPolynomial,
    pub leading_term: MultiPoly,
    /// Scalar applied to the raw chain output.
    pub normalization: Cyc,
    pub chain_length: usize,
}

impl BafData {
    pub fn vars(&self) -> JointVars {
        self.psi.vars
    }

    /// The polynomial prefactor `P(λ, x)`.
    pub fn prefactor(&self) -> &MultiPoly {
        self.psi.prefactor.as_polynomial().expect("checked at construction")
    }

    pub fn to_json(&self) -> Value {
        let names = self.vars().names();
        json!({
            "k": self.k.to_json(),
            "variables": names,
            "prefactor": self.prefactor().to_json(),
            "prefactorText": self.prefactor().to_string_with(&names),
            "leadingTerm": self.leading_term.to_string_with(&names),
            "normalization": self.normalization.to_string(),
            "chainLength": self.chain_length,
        })
    }
}

fn check_baf_multiplicity(group: &ReflectionGroup, k: &Multiplicity) -> Result<(), BafError> {
    let ok = k.values().len() == group.orbits().len()
        && k.is_integral()
        && k.is_nonnegative()
        && (0..group.orbits().len()).all(|c| num_traits::Zero::is_zero(k.k(c, 0)));
    if ok {
        Ok(())
    } else {
        Err(BafError::InvalidMultiplicity)
    }
}

/// Builds `ψ` by applying the shift chain from 0 to `k` to `e^{⟨λ,x⟩}` and
/// scales it so that its top component equals the expected leading term.
pub fn construct_baf(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<BafData, BafError> {
    check_baf_multiplicity(group, k)?;
    let chain = compose_chain(group, k)?;
    let mut psi = ExpPolynomial::exponential(group);
    for step in &chain {
        psi = apply_diffop_to_exp(&step.op, &psi);
    }
    let raw = psi.prefactor.clone().into_polynomial().map_err(|r| BafError::DenominatorSurvived(r.to_string()))?;
    let lead = leading_term(group, k);
    let vars = psi.vars;
    let top_degree = lead.partial_degree(0..vars.rank).unwrap_or(0);
    let top = raw
        .homogeneous_components(&vars.lambda_weights())
        .into_iter()
        .find(|(d, _)| *d == top_degree as i64)
        .map(|(_, p)| p)
        .ok_or(BafError::ZeroLeadingTerm)?;
    let (m, c) = lead.leading_term().expect("nonzero leading term");
    let ratio = top.coeff(m);
    if ratio.is_zero() || top.scale(&c.inv().expect("nonzero")).scale(&ratio.inv().expect("nonzero")).scale(c) != lead.scale(&ratio.inv().expect("nonzero")).scale(&ratio) {
        return Err(BafError::ZeroLeadingTerm);
    }
    let normalization = (c * &ratio.inv().expect("nonzero")).clone();
    let scaled = raw.scale(&normalization);
    if scaled.homogeneous_components(&vars.lambda_weights()).first().map(|(_, p)| p) != Some(&lead) {
        return Err(BafError::ZeroLeadingTerm);
    }
    Ok(BafData {
        group: group.clone(),
        k: k.clone(),
        psi: ExpPolynomial { vars, prefactor: LocalizedPoly::from_poly(scaled, psi.arrangement()) },
        leading_term: lead,
        normalization,
        chain_length: chain.len(),
    })
}

/// Every term of the prefactor has equal degree in λ and in x.
pub fn is_bidegree_zero(b: &BafData) -> bool {
    let vars = b.vars();
    b.prefactor().terms().keys().all(|m| {
        let (l, x) = m.0.split_at(vars.rank);
        l.iter().sum::<u32>() == x.iter().sum::<u32>()
    })
}

/// `L_{p,k} ψ = p(λ) ψ`, compared exactly.
pub fn eigen_check(b: &BafData, p: &MultiPoly) -> Result<bool, BafError> {
    let op = DunklFamily::new(&b.group, &b.k).calogero_moser(p).map_err(ShiftError::from)?;
    let left = apply_diffop_to_exp(&op, &b.psi);
    let eigen = p.embed(0, b.vars().nvars());
    Ok(left.prefactor == b.psi.prefactor.mul_poly(&eigen))
}

/// Degree-`d` Taylor component of `ψ` in the variables of one block.
fn taylor_component(b: &BafData, lambda_side: bool, d: u32) -> MultiPoly {
    let vars = b.vars();
    let weights = if lambda_side { vars.lambda_weights() } else { vars.x_weights() };
    let pairing = vars.pairing();
    let mut out = MultiPoly::zero(vars.nvars());
    for (j, part) in b.prefactor().homogeneous_components(&weights) {
        if j < 0 || j as u32 > d {
            continue;
        }
        let m = d - j as u32;
        let factorial: i64 = (1..=m as i64).product();
        out = out.add(&part.mul(&pairing.pow(m)).scale(&Cyc::from_rational(&rat(1, factorial))));
    }
    out
}

/// Splits a joint polynomial by the monomials of one block, returning the
/// coefficients as polynomials in the other block's `rank` variables.
fn split_block(f: &MultiPoly, vars: JointVars, keep_lambda: bool) -> Vec<MultiPoly> {
    let (keep, other) = if keep_lambda { (0, vars.rank) } else { (vars.rank, 0) };
    let mut parts: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let key = m.0[other..other + vars.rank].to_vec();
        let mono = Monomial(m.0[keep..keep + vars.rank].to_vec());
        parts.entry(key).or_insert_with(|| MultiPoly::zero(vars.rank)).add_term(mono, c.clone());
    }
    parts.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub max_deg: u32,
    pub x_components: usize,
    pub lambda_components: usize,
    pub symmetric: bool,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.symmetric
    }

    pub fn to_json(&self) -> Value {
        json!({
            "maxDeg": self.max_deg,
            "xComponents": self.x_components,
            "lambdaComponents": self.lambda_components,
            "symmetric": self.symmetric,
            "passed": self.passed(),
        })
    }
}

/// Default Taylor truncation `2 (1 + max n_C k_{C,i})`.
pub fn default_truncation(group: &ReflectionGroup, k: &Multiplicity) -> u32 {
    let top = (0..group.orbits().len())
        .flat_map(|c| (0..group.orbit_n(c) as i64).map(move |i| (c, i)))
        .filter_map(|(c, i)| k.scaled(c, i))
        .max()
        .unwrap_or(0);
    2 * (1 + top.max(0) as u32)
}

/// Quasi-invariance of every Taylor component in `x` and (through the
/// antilinear identification of V* with V) in `λ`, and the diagonal
/// symmetry `ψ(wλ, wx) = ψ(λ, x)`.
pub fn membership_checks(b: &BafData, max_deg: u32) -> Result<MembershipReport, BafError> {
    let vars = b.vars();
    let mut counts = [0usize; 2];
    for (idx, lambda_side) in [false, true].into_iter().enumerate() {
        let side = if lambda_side { "lambda" } else { "x" };
        for d in 0..=max_deg {
            let comp = taylor_component(b, lambda_side, d);
            for f in split_block(&comp, vars, lambda_side) {
                let f = if lambda_side { f.conj_coeffs() } else { f };
                let lf = LocalizedPoly::from_poly(f, b.group.arrangement());
                if let Some(w) = quasi_invariance_witness(&b.group, &lf, &b.k)? {
                    return Err(BafError::Membership { side, degree: d, witness: Box::new(w) });
                }
                counts[idx] += 1;
            }
        }
    }
    let dual = b.group.dual()?;
    let p = b.prefactor();
    let symmetric = b.group.generators().iter().all(|&g| {
        let moved = dual.act_poly(g, &b.group.act_poly(g, p, vars.x_offset()), 0);
        moved == *p
    });
    Ok(MembershipReport { max_deg, x_components: counts[0], lambda_components: counts[1], symmetric })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BispectralReport {
    /// The dual-side construction equals the conjugate prefactor.
    pub dual_is_conjugate: bool,
    /// `ψ_V(λ, x) = ψ_{V*}(x, λ)`.
    pub swap_symmetric: bool,
}

impl BispectralReport {
    pub fn passed(&self) -> bool {
        self.dual_is_conjugate && self.swap_symmetric
    }

    pub fn to_json(&self) -> Value {
        json!({ "dualIsConjugate": self.dual_is_conjugate, "swapSymmetric": self.swap_symmetric, "passed": self.passed() })
    }
}

/// Builds the Baker–Akhiezer function of the dual representation with the
/// same multiplicity and compares it with `ψ`.
pub fn bispectral_check(b: &BafData) -> Result<BispectralReport, BafError> {
    let dual = Arc::new(b.group.dual()?);
    let other = construct_baf(&dual, &b.k)?;
    let vars = b.vars();
    let p = b.prefactor();
    let q = other.prefactor();
    Ok(BispectralReport { dual_is_conjugate: *q == p.conj_coeffs(), swap_symmetric: *p == vars.swap(q) })
}

/// `Σ_j prefactor_j e^{exponent_j}` with distinct linear exponents.
#[derive(Debug, Clone)]
pub struct ExpSum {
    pub terms: Vec<(MultiPoly, MultiPoly)>,
}

impl ExpSum {
    fn from_parts(parts: impl IntoIterator<Item = (MultiPoly, MultiPoly)>) -> ExpSum {
        let mut terms: Vec<(MultiPoly, MultiPoly)> = Vec::new();
        for (exponent, pre) in parts {
            match terms.iter_mut().find(|(e, _)| *e == exponent) {
                Some(slot) => slot.1 = slot.1.add(&pre),
                None => terms.push((exponent, pre)),
            }
        }
        terms.retain(|(_, p)| !p.is_zero());
        ExpSum { terms }
    }

    fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> ExpSum {
        ExpSum::from_parts(self.terms.iter().map(|(exponent, pre)| (f(exponent), f(pre))))
    }
}

impl PartialEq for ExpSum {
    fn eq(&self, other: &ExpSum) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(e, p)| other.terms.iter().any(|(f, q)| e == f && p == q))
    }
}

/// `Φ(λ, x) = Σ_w ψ(wλ, x)`.
pub fn phi_function(b: &BafData) -> Result<ExpSum, BafError> {
    let dual = b.group.dual()?;
    let vars = b.vars();
    let pairing = vars.pairing();
    Ok(ExpSum::from_parts((0..b.group.order()).map(|w| {
        let wi = b.group.inv(w);
        (dual.act_poly(wi, &pairing, 0), dual.act_poly(wi, b.prefactor(), 0))
    })))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingBlock {
    pub degree: u32,
    pub size: usize,
    pub rank: usize,
    /// `(p, q)_k = conj((q*, p*)_k)` on the monomial bases.
    pub hermitian: bool,
}

impl PairingBlock {
    pub fn passed(&self) -> bool {
        self.rank == self.size && self.hermitian
    }
}

/// The matrices `((λ^β, x^γ)_k)` for `|β| = |γ| = d`, `d ≤ max_deg`.
pub fn pairing_blocks(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: u32) -> Result<Vec<PairingBlock>, BafError> {
    let dunkl = PolyDunkl::new(group, k);
    let n = group.dim();
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let monos = Monomial::all_of_degree(n, d);
        let mut rows = Vec::new();
        for beta in &monos {
            let mut row = Vec::new();
            for gamma in &monos {
                let mut f = MultiPoly::monomial(gamma.clone(), Cyc::one());
                for (j, &e) in beta.0.iter().enumerate() {
                    for _ in 0..e {
                        f = dunkl.apply_scalar(j, &f)?;
                    }
                }
                row.push(f.constant_term());
            }
            rows.push(row);
        }
        let m = Mat::from_rows(rows);
        let hermitian = m.conj_transpose() == m;
        out.push(PairingBlock { degree: d, size: monos.len(), rank: m.rank(), hermitian });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiReport {
    pub x_invariant: bool,
    pub lambda_invariant: bool,
    /// `Φ_i` for `i ≤ max_order`.
    pub components: Vec<MultiPoly>,
    pub bihomogeneous: bool,
    pub components_invariant: bool,
    pub value_at_origin: Cyc,
    pub pairing: Vec<PairingBlock>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.x_invariant
            && self.lambda_invariant
            && self.bihomogeneous
            && self.components_invariant
            && !self.value_at_origin.is_zero()
            && self.pairing.iter().all(PairingBlock::passed)
    }

    pub fn to_json(&self, vars: JointVars) -> Value {
        let names = vars.names();
        json!({
            "xInvariant": self.x_invariant,
            "lambdaInvariant": self.lambda_invariant,
            "bihomogeneous": self.bihomogeneous,
            "componentsInvariant": self.components_invariant,
            "valueAtOrigin": self.value_at_origin.to_string(),
            "components": self.components.iter().map(|c| c.to_string_with(&names)).collect::<Vec<_>>(),
            "pairingBlocks": self.pairing.iter().map(|p| json!({
                "degree": p.degree,
                "size": p.size,
                "rank": p.rank,
                "hermitian": p.hermitian,
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

/// Invariance of `Φ` in each variable, its expansion into bihomogeneous
/// invariant components up to `max_order`, `Φ(0,0) ≠ 0`, and the pairing
/// blocks up to `pairing_degree`.
pub fn phi_checks(b: &BafData, max_order: u32, pairing_degree: u32) -> Result<PhiReport, BafError> {
    let phi = phi_function(b)?;
    let dual = b.group.dual()?;
    let vars = b.vars();
    let n = vars.nvars();
    let gens = b.group.generators();
    let x_invariant = gens.iter().all(|&g| phi.map(|f| b.group.act_poly(g, f, vars.x_offset())) == phi);
    let lambda_invariant = gens.iter().all(|&g| phi.map(|f| dual.act_poly(g, f, 0)) == phi);

    let mut series = MultiPoly::zero(n);
    for (exponent, pre) in &phi.terms {
        for (j, part) in pre.homogeneous_components(&vars.lambda_weights()) {
            if j < 0 || j as u32 > max_order {
                continue;
            }
            for m in 0..=(max_order - j as u32) {
                let factorial: i64 = (1..=m as i64).product();
                series = series.add(&part.mul(&exponent.pow(m)).scale(&Cyc::from_rational(&rat(1, factorial))));
            }
        }
    }
    let bihomogeneous = is_bidegree_zero_poly(&series, vars);
    let components: Vec<MultiPoly> = (0..=max_order).map(|i| series.homogeneous_part(2 * i)).collect();
    let components_invariant = components.iter().all(|c| {
        gens.iter().all(|&g| b.group.act_poly(g, c, vars.x_offset()) == *c && dual.act_poly(g, c, 0) == *c)
    });
    let value_at_origin = series.constant_term();
    let pairing = pairing_blocks(&b.group, &b.k, pairing_degree)?;
    Ok(PhiReport { x_invariant, lambda_invariant, components, bihomogeneous, components_invariant, value_at_origin, pairing })
}

fn is_bidegree_zero_poly(f: &MultiPoly, vars: JointVars) -> bool {
    f.terms().keys().all(|m| {
        let (l, x) = m.0.split_at(vars.rank);
        l.iter().sum::<u32>() == x.iter().sum::<u32>()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub unknowns: usize,
    pub max_deg: u32,
    pub unique: bool,
    pub agrees: bool,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.unique && self.agrees
    }
}

/// Solves for all prefactors `P_0 + (lower bidegrees)` whose λ-Taylor
/// components up to `max_deg` are quasi-invariant, and compares the solution
/// set with the constructed `ψ`.
pub fn uniqueness_check(b: &BafData, max_deg: u32) -> Result<UniquenessReport, BafError> {
    let vars = b.vars();
    let rank = vars.rank;
    let top = b.leading_term.partial_degree(0..rank).unwrap_or(0);
    let mut unknown_monos = Vec::new();
    for j in 0..top {
        for l in Monomial::all_of_degree(rank, j) {
            for x in Monomial::all_of_degree(rank, j) {
                unknown_monos.push(Monomial([l.0.clone(), x.0].concat()));
            }
        }
    }
    let basis = compute_basis(&b.group, &b.k, max_deg as i64)?;
    let pairing = vars.pairing();
    // Column 0 is the constant part; column i + 1 belongs to unknown i.
    let candidates: Vec<MultiPoly> = std::iter::once(b.leading_term.clone())
        .chain(unknown_monos.iter().map(|m| MultiPoly::monomial(m.clone(), Cyc::one())))
        .collect();
    let mut rows: Vec<Vec<Cyc>> = Vec::new();
    for d in 0..=max_deg {
        let monos = Monomial::all_of_degree(rank, d);
        let mut ech = Echelon::new(monos.len());
        for g in basis.degree(d as i64) {
            ech.insert(&monos.iter().map(|m| g.coeff(m)).collect::<Vec<_>>());
        }
        // Residues modulo the quasi-invariants, per x-monomial, per candidate.
        let mut residues: BTreeMap<Vec<u32>, Vec<Vec<Cyc>>> = BTreeMap::new();
        for (col, cand) in candidates.iter().enumerate() {
            let j = cand.partial_degree(0..rank).unwrap_or(0);
            if j > d {
                continue;
            }
            let m = d - j;
            let factorial: i64 = (1..=m as i64).product();
            let comp = cand.mul(&pairing.pow(m)).scale(&Cyc::from_rational(&rat(1, factorial)));
            let mut by_x: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
            for (mono, c) in comp.terms() {
                by_x.entry(mono.0[rank..].to_vec())
                    .or_insert_with(|| MultiPoly::zero(rank))
                    .add_term(Monomial(mono.0[..rank].to_vec()), c.conj());
            }
            for (key, f) in by_x {
                let v: Vec<Cyc> = monos.iter().map(|m| f.coeff(m)).collect();
                let r = ech.reduce(&v);
                let entry = residues.entry(key).or_insert_with(|| vec![vec![Cyc::zero(); candidates.len()]; monos.len()]);
                for (i, c) in r.into_iter().enumerate() {
                    entry[i][col] = c;
                }
            }
        }
        rows.extend(residues.into_values().flatten().filter(|r| r.iter().any(|c| !c.is_zero())));
    }
    let unknowns = unknown_monos.len();
    let system = if rows.is_empty() { Mat::zeros(1, candidates.len()) } else { Mat::from_rows(rows) };
    let kernel = system.nullspace();
    let homogeneous: Vec<&Vec<Cyc>> = kernel.iter().filter(|v| v[0].is_zero()).collect();
    let unique = kernel.len() == 1 && homogeneous.is_empty();
    // The unknowns satisfy the conjugated system, so compare with conj(P).
    let agrees = unique && {
        let v = &kernel[0];
        let s = v[0].inv().expect("nonzero constant column");
        let mut solved = b.leading_term.clone();
        for (i, m) in unknown_monos.iter().enumerate() {
            solved.add_term(m.clone(), (&v[i + 1] * &s).conj());
        }
        solved == *b.prefactor()
    };
    Ok(UniquenessReport { unknowns, max_deg, unique, agrees })
}

/// The composite shift operator `ψ` is built from, for reporting.
pub fn chain_diffop(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> Result<DiffOp, BafError> {
    let chain = compose_chain(group, k)?;
    Ok(chain_operator(group, &chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_k_one() {
        let g = group("cyclic:2");
        let b = construct_baf(&g, &Multiplicity::from_ints(&[&[0, 1]])).unwrap();
        let lx = MultiPoly::var(0, 2).mul(&MultiPoly::var(1, 2));
        assert_eq!(*b.prefactor(), lx.sub(&MultiPoly::one(2)));
        assert_eq!(b.normalization, Cyc::one());
    }
}

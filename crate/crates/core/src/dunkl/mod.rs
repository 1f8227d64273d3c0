//! The algebra of differential-reflection operators on V_reg, normal-ordered
//! as `coefficient · ∂^α · w`, together with Dunkl operators, the Res map,
//! Euler elements and the Dunkl pairing.

mod axioms;
mod operators;

pub use axioms::{check_axioms, AxiomReport};
pub use operators::{central_element, c_scalar, delta_power, reflection_weight, DunklFamily};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::exactnum::Cyc;
use crate::polyring::{Arrangement, LocalizedPoly, Monomial, MultiPoly};
use crate::refgroup::ReflectionGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DunklError {
    #[error("result has a nontrivial denominator: {0}")]
    UnexpectedDenominator(String),
    #[error("operator is not W-invariant: conjugation by generator {generator} changes it")]
    NotInvariant { generator: usize },
    #[error("value at the origin is undefined: {0}")]
    NotPolynomial(String),
}

/// A differential operator `Σ_α a_α ∂^α` with coefficients in C[V_reg].
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    arr: Arc<Arrangement>,
    terms: BTreeMap<Monomial, LocalizedPoly>,
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({})", self)
    }
}

impl DiffOp {
    pub fn zero(arr: &Arc<Arrangement>) -> DiffOp {
        DiffOp { arr: arr.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(arr: &Arc<Arrangement>) -> DiffOp {
        Self::multiplication(LocalizedPoly::one(arr))
    }

    pub fn multiplication(f: LocalizedPoly) -> DiffOp {
        let arr = f.arrangement().clone();
        let mut op = DiffOp::zero(&arr);
        op.add_term(Monomial::one(arr.nvars()), f);
        op
    }

    pub fn partial(i: usize, arr: &Arc<Arrangement>) -> DiffOp {
        let mut op = DiffOp::zero(arr);
        op.add_term(Monomial::unit(i, arr.nvars()), LocalizedPoly::one(arr));
        op
    }

    /// `∂_ξ = Σ ξ_i ∂_i`.
    pub fn directional(xi: &[Cyc], arr: &Arc<Arrangement>) -> DiffOp {
        let mut op = DiffOp::zero(arr);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                op.add_term(Monomial::unit(i, arr.nvars()), LocalizedPoly::constant(c.clone(), arr));
            }
        }
        op
    }

    /// Constant-coefficient operator `p(∂)`.
    pub fn constant_coefficient(p: &MultiPoly, arr: &Arc<Arrangement>) -> DiffOp {
        let mut op = DiffOp::zero(arr);
        for (m, c) in p.terms() {
            op.add_term(m.clone(), LocalizedPoly::constant(c.clone(), arr));
        }
        op
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        &self.arr
    }

    pub fn nvars(&self) -> usize {
        self.arr.nvars()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, LocalizedPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &Monomial) -> LocalizedPoly {
        self.terms.get(alpha).cloned().unwrap_or_else(|| LocalizedPoly::zero(&self.arr))
    }

    /// Highest total order of ∂ appearing.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, alpha: Monomial, c: LocalizedPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&alpha);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&Cyc::from_int(-1))
    }

    pub fn scale(&self, c: &Cyc) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(&self.arr);
        }
        DiffOp { arr: self.arr.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a.scale(c))).collect() }
    }

    /// `f · L`.
    pub fn mul_left(&self, f: &LocalizedPoly) -> DiffOp {
        let mut out = DiffOp::zero(&self.arr);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), f.mul(a));
        }
        out
    }

    /// `self ∘ other`, normal-ordered by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut derivs: HashMap<(Monomial, Monomial), LocalizedPoly> = HashMap::new();
        let mut collected: BTreeMap<Monomial, Vec<LocalizedPoly>> = BTreeMap::new();
        for (alpha, a) in &self.terms {
            let lower = divisors(alpha);
            for (beta, b) in &other.terms {
                for delta in &lower {
                    let db = derivs.entry((beta.clone(), delta.clone())).or_insert_with(|| b.derivative_multi(delta, 0));
                    if db.is_zero() {
                        continue;
                    }
                    let coeff = Cyc::from_int(alpha.binomial(delta) as i64);
                    let rest = alpha.checked_div(delta).unwrap().mul(beta);
                    collected.entry(rest).or_default().push(a.mul_unreduced(db).scale(&coeff));
                }
            }
        }
        let mut out = DiffOp::zero(&self.arr);
        for (m, parts) in collected {
            out.add_term(m, LocalizedPoly::sum(&parts, &self.arr));
        }
        out
    }

    pub fn apply(&self, f: &LocalizedPoly) -> LocalizedPoly {
        let mut out = LocalizedPoly::zero(&self.arr);
        for (alpha, a) in &self.terms {
            let d = f.derivative_multi(alpha, 0);
            if !d.is_zero() {
                out = out.add(&a.mul(&d));
            }
        }
        out
    }

    pub fn apply_poly(&self, f: &MultiPoly) -> LocalizedPoly {
        self.apply(&LocalizedPoly::from_poly(f.clone(), &self.arr))
    }

    /// `g L g⁻¹`: coefficients move by g and `g ∂_i g⁻¹ = Σ_j g_{ji} ∂_j`.
    pub fn conjugate_by(&self, group: &ReflectionGroup, g: usize) -> DiffOp {
        if g == 0 {
            return self.clone();
        }
        let gt = group.element(g).matrix.transpose();
        let mut out = DiffOp::zero(&self.arr);
        for (alpha, a) in &self.terms {
            let moved = group.act_localized(g, a, 0);
            let symbol = MultiPoly::monomial(alpha.clone(), Cyc::one()).substitute_linear(&gt, 0).expect("dimension");
            for (beta, c) in symbol.terms() {
                out.add_term(beta.clone(), moved.scale(c));
            }
        }
        out
    }

    /// Sum of the top-order terms, as a polynomial in ∂ with
    /// localized coefficients.
    pub fn principal_part(&self) -> DiffOp {
        let top = self.order().unwrap_or(0);
        DiffOp {
            arr: self.arr.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == top).map(|(m, a)| (m.clone(), a.clone())).collect(),
        }
    }

    /// True when every coefficient is a polynomial.
    pub fn has_polynomial_coefficients(&self) -> bool {
        self.terms.values().all(LocalizedPoly::is_polynomial)
    }

    /// Exponent of δ-powers needed to clear all denominators, per form.
    pub fn denominator_exponents(&self) -> BTreeMap<usize, u32> {
        let mut out: BTreeMap<usize, u32> = BTreeMap::new();
        for a in self.terms.values() {
            for (&h, &e) in a.denominator() {
                let slot = out.entry(h).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        out
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(alpha, a)| {
                let mut d = Vec::new();
                for (i, &e) in alpha.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => d.push(format!("d{}", names[i])),
                        _ => d.push(format!("d{}^{}", names[i], e)),
                    }
                }
                let c = a.to_string_with(names);
                if d.is_empty() {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, d.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .terms
            .iter()
            .rev()
            .map(|(alpha, a)| json!([alpha.0, a.to_json()]))
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&MultiPoly::default_names(self.nvars())))
    }
}

fn divisors(alpha: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &a in &alpha.0 {
        let mut next = Vec::new();
        for prefix in &out {
            for e in 0..=a {
                let mut p: Vec<u32> = prefix.clone();
                p.push(e);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(Monomial).collect()
}

/// A differential-reflection operator `Σ_w L_w · w`, normal-ordered with
/// the group element on the right.
#[derive(Clone)]
pub struct DiffReflOp {
    group: Arc<ReflectionGroup>,
    terms: BTreeMap<usize, DiffOp>,
}

impl PartialEq for DiffReflOp {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for DiffReflOp {}

impl fmt::Debug for DiffReflOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffReflOp({})", self)
    }
}

impl DiffReflOp {
    pub fn zero(group: &Arc<ReflectionGroup>) -> DiffReflOp {
        DiffReflOp { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(group: &Arc<ReflectionGroup>) -> DiffReflOp {
        Self::from_diffop(group, DiffOp::identity(group.arrangement()))
    }

    pub fn element(group: &Arc<ReflectionGroup>, g: usize) -> DiffReflOp {
        let mut op = DiffReflOp::zero(group);
        op.add_term(g, DiffOp::identity(group.arrangement()));
        op
    }

    pub fn from_diffop(group: &Arc<ReflectionGroup>, op: DiffOp) -> DiffReflOp {
        let mut out = DiffReflOp::zero(group);
        out.add_term(0, op);
        out
    }

    pub fn multiplication(group: &Arc<ReflectionGroup>, f: LocalizedPoly) -> DiffReflOp {
        Self::from_diffop(group, DiffOp::multiplication(f))
    }

    pub fn partial(group: &Arc<ReflectionGroup>, i: usize) -> DiffReflOp {
        Self::from_diffop(group, DiffOp::partial(i, group.arrangement()))
    }

    /// An element `Σ c_w w` of the group algebra.
    pub fn group_algebra(group: &Arc<ReflectionGroup>, coeffs: &[Cyc]) -> DiffReflOp {
        let mut out = DiffReflOp::zero(group);
        for (g, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(g, DiffOp::identity(group.arrangement()).scale(c));
            }
        }
        out
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<usize, DiffOp> {
        &self.terms
    }

    pub fn part(&self, g: usize) -> DiffOp {
        self.terms.get(&g).cloned().unwrap_or_else(|| DiffOp::zero(self.group.arrangement()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: usize, op: DiffOp) {
        if op.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(existing) => {
                let s = existing.add(&op);
                if s.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(g, op);
            }
        }
    }

    pub fn add(&self, other: &DiffReflOp) -> DiffReflOp {
        let mut out = self.clone();
        for (g, op) in &other.terms {
            out.add_term(*g, op.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffReflOp) -> DiffReflOp {
        self.add(&other.scale(&Cyc::from_int(-1)))
    }

    pub fn scale(&self, c: &Cyc) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (g, op) in &self.terms {
            out.add_term(*g, op.scale(c));
        }
        out
    }

    pub fn mul_left(&self, f: &LocalizedPoly) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (g, op) in &self.terms {
            out.add_term(*g, op.mul_left(f));
        }
        out
    }

    /// `(A g)(B h) = A (g B g⁻¹) gh`.
    pub fn compose(&self, other: &DiffReflOp) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (&g, a) in &self.terms {
            for (&h, b) in &other.terms {
                let moved = b.conjugate_by(&self.group, g);
                out.add_term(self.group.mul(g, h), a.compose(&moved));
            }
        }
        out
    }

    pub fn commutator(&self, other: &DiffReflOp) -> DiffReflOp {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn pow(&self, e: u32) -> DiffReflOp {
        let mut acc = DiffReflOp::identity(&self.group);
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn apply(&self, f: &LocalizedPoly) -> LocalizedPoly {
        let mut out = LocalizedPoly::zero(self.group.arrangement());
        for (&g, op) in &self.terms {
            out = out.add(&op.apply(&self.group.act_localized(g, f, 0)));
        }
        out
    }

    pub fn apply_poly(&self, f: &MultiPoly) -> LocalizedPoly {
        self.apply(&LocalizedPoly::from_poly(f.clone(), self.group.arrangement()))
    }

    /// Application that must produce a polynomial.
    pub fn apply_poly_strict(&self, f: &MultiPoly) -> Result<MultiPoly, DunklError> {
        self.apply_poly(f).into_polynomial().map_err(|r| DunklError::UnexpectedDenominator(r.to_string()))
    }

    /// `g L g⁻¹`.
    pub fn conjugate_by(&self, g: usize) -> DiffReflOp {
        let gi = self.group.inv(g);
        let mut out = DiffReflOp::zero(&self.group);
        for (&h, op) in &self.terms {
            out.add_term(self.group.mul(self.group.mul(g, h), gi), op.conjugate_by(&self.group, g));
        }
        out
    }

    /// The first generator `s` with `s L s⁻¹ ≠ L`, if any.
    pub fn invariance_witness(&self) -> Option<usize> {
        self.group.generators().iter().copied().find(|&s| self.conjugate_by(s) != *self)
    }

    /// Res: for W-invariant `L`, the differential operator agreeing with
    /// `L` on invariant functions.
    pub fn res(&self) -> Result<DiffOp, DunklError> {
        if let Some(generator) = self.invariance_witness() {
            return Err(DunklError::NotInvariant { generator });
        }
        Ok(self.res_unchecked())
    }

    /// Image of `self · d` in DW modulo the left ideal spanned by `w − 1`,
    /// identified with differential operators: `Σ_g L_g ∘ (g d g⁻¹)`.
    pub fn act_on_quotient(&self, d: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero(self.group.arrangement());
        for (&g, op) in &self.terms {
            out = out.add(&op.compose(&d.conjugate_by(&self.group, g)));
        }
        out
    }

    pub fn res_unchecked(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.group.arrangement());
        for op in self.terms.values() {
            out = out.add(op);
        }
        out
    }

    /// Automorphism `w ↦ χ(w) w` for a linear character χ.
    pub fn twist_by_character(&self, chi: &[Cyc]) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (&g, op) in &self.terms {
            out.add_term(g, op.scale(&chi[g]));
        }
        out
    }

    /// Automorphism `∂_ξ ↦ ∂_ξ + ω(ξ)` for `ω = λ d log δ_C`.
    pub fn twist_by_one_form(&self, orbit: usize, lambda: &Cyc) -> DiffReflOp {
        let arr = self.group.arrangement();
        let dim = self.group.dim();
        let shifted: Vec<DiffOp> = (0..dim)
            .map(|i| {
                let mut omega = LocalizedPoly::zero(arr);
                for &h in &self.group.orbits()[orbit] {
                    let c = &self.group.hyperplane(h).alpha[i];
                    if !c.is_zero() {
                        omega = omega.add(&LocalizedPoly::form_power(h, -1, arr).scale(&(c * lambda)));
                    }
                }
                DiffOp::partial(i, arr).add(&DiffOp::multiplication(omega))
            })
            .collect();
        let mut out = DiffReflOp::zero(&self.group);
        for (&g, op) in &self.terms {
            let mut new = DiffOp::zero(arr);
            for (alpha, a) in op.terms() {
                let mut term = DiffOp::multiplication(a.clone());
                for (i, &e) in alpha.0.iter().enumerate() {
                    for _ in 0..e {
                        term = term.compose(&shifted[i]);
                    }
                }
                new = new.add(&term);
            }
            out.add_term(g, new);
        }
        out
    }

    /// `δ_C^a L δ_C^{−a}`.
    pub fn conjugate_by_delta(&self, orbit: usize, a: i64) -> DiffReflOp {
        if a == 0 {
            return self.clone();
        }
        let left = DiffReflOp::multiplication(&self.group, delta_power(&self.group, orbit, a));
        let right = DiffReflOp::multiplication(&self.group, delta_power(&self.group, orbit, -a));
        left.compose(self).compose(&right)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(g, op)| format!("[{}] {}", op.to_string_with(names), element_name(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .terms
            .iter()
            .map(|(g, op)| json!({"element": g, "op": op.to_json()}))
            .collect::<Vec<_>>())
    }
}

fn element_name(g: &usize) -> String {
    if *g == 0 {
        "1".to_string()
    } else {
        format!("w{}", g)
    }
}

impl fmt::Display for DiffReflOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&MultiPoly::default_names(self.group.dim())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    fn z2() -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::Cyclic(2)).unwrap()
    }

    #[test]
    fn weyl_relation() {
        let g = z2();
        let arr = g.arrangement();
        let d = DiffReflOp::partial(&g, 0);
        let x = DiffReflOp::multiplication(&g, LocalizedPoly::from_poly(MultiPoly::var(0, 1), arr));
        assert_eq!(d.compose(&x).sub(&x.compose(&d)), DiffReflOp::identity(&g));
    }

    #[test]
    fn reflection_moves_coordinate() {
        let g = z2();
        let arr = g.arrangement();
        let x = LocalizedPoly::from_poly(MultiPoly::var(0, 1), arr);
        let s = DiffReflOp::element(&g, 1);
        let sx = s.compose(&DiffReflOp::multiplication(&g, x.clone()));
        let expected = DiffReflOp::element(&g, 1).mul_left(&x.neg());
        assert_eq!(sx, expected);
    }

    #[test]
    fn res_of_symmetrizer() {
        let g = ReflectionGroup::cached(&GroupSpec::parse("dihedral:3:3").unwrap()).unwrap();
        let ones = vec![Cyc::one(); g.order()];
        let sym = DiffReflOp::group_algebra(&g, &ones);
        let res = sym.res().unwrap();
        assert_eq!(res, DiffOp::identity(g.arrangement()).scale(&Cyc::from_int(6)));
        let s = DiffReflOp::element(&g, g.generators()[0]);
        assert!(matches!(s.res(), Err(DunklError::NotInvariant { .. })));
    }
}

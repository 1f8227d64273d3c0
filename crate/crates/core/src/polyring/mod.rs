//! Sparse multivariate polynomials over [`Cyc`] and their localizations at
//! products of linear forms.

mod localized;

pub use localized::{Arrangement, LocalizedPoly};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::exactnum::Cyc;
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not divisible: remainder {remainder} after {divided} successful divisions")]
    NotDivisible { remainder: MultiPoly, divided: u32 },
    #[error("linear form expected")]
    NotLinear,
}

/// A named block of variables inside a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpace {
    pub name: String,
    pub offset: usize,
    pub dim: usize,
    pub grade_weight: i64,
}

impl VarSpace {
    pub fn new(name: &str, offset: usize, dim: usize, grade_weight: i64) -> Self {
        VarSpace { name: name.to_string(), offset, dim, grade_weight }
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }
}

/// Exponent vector, ordered graded-lexicographically (x₁ > x₂ > …).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn unit(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// All exponent vectors of total degree `d` in `nvars` variables, in
    /// descending graded-lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }

    /// Multinomial-style product of binomial coefficients `Π C(self_i, other_i)`.
    pub fn binomial(&self, other: &Monomial) -> u64 {
        self.0.iter().zip(&other.0).map(|(&n, &k)| binom(n, k)).product()
    }
}

pub fn binom(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n as u64 - i) / (i + 1);
    }
    r
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Cyc>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Cyc, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Cyc::one(), nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        Self::monomial(Monomial::unit(i, nvars), Cyc::one())
    }

    pub fn monomial(m: Monomial, c: Cyc) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    /// The linear form `Σ coeffs[i] x_{offset+i}`.
    pub fn linear(coeffs: &[Cyc], offset: usize, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::unit(offset + i, nvars), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Cyc)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyc> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Cyc> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Cyc {
        self.terms.get(m).cloned().unwrap_or_else(Cyc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Cyc)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn constant_term(&self) -> Cyc {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Cyc) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut acc: HashMap<Monomial, Cyc> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let t = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += &t,
                    None => {
                        acc.insert(m, t);
                    }
                }
            }
        }
        MultiPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Cyc) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * &Cyc::from_int(e as i64));
        }
        out
    }

    /// `∂_ξ f = Σ ξ_i ∂f/∂x_{offset+i}`.
    pub fn directional_derivative(&self, xi: &[Cyc], offset: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.derivative(offset + i).scale(c));
            }
        }
        out
    }

    /// `∂^α f` for a multi-index over variables `offset..offset+α.len()`.
    pub fn derivative_multi(&self, alpha: &Monomial, offset: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut factor: i64 = 1;
            let mut ok = true;
            for (j, &a) in alpha.0.iter().enumerate() {
                let e = m.0[offset + j];
                if e < a {
                    ok = false;
                    break;
                }
                for t in 0..a {
                    factor *= (e - t) as i64;
                }
                m2.0[offset + j] = e - a;
            }
            if ok {
                out.add_term(m2, c * &Cyc::from_int(factor));
            }
        }
        out
    }

    /// Substitutes `x_{offset+i} ↦ Σ_j a[i][j] x_{offset+j}`, i.e. returns `f(a·x)`
    /// in the given block of variables.
    pub fn substitute_linear(&self, a: &Mat, offset: usize) -> Result<MultiPoly, PolyError> {
        let dim = a.rows();
        if !a.is_square() || offset + dim > self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: dim });
        }
        if a.is_monomial() {
            let map: Vec<(usize, Cyc)> = (0..dim)
                .map(|i| {
                    let j = (0..dim).find(|&j| !a[(i, j)].is_zero()).unwrap();
                    (j, a[(i, j)].clone())
                })
                .collect();
            let mut out = MultiPoly::zero(self.nvars);
            for (m, c) in &self.terms {
                let mut m2 = m.clone();
                for i in 0..dim {
                    m2.0[offset + i] = 0;
                }
                let mut coef = c.clone();
                for (i, (j, s)) in map.iter().enumerate() {
                    let e = m.0[offset + i];
                    if e > 0 {
                        m2.0[offset + j] += e;
                        coef = &coef * &s.pow(e as i64).expect("nonzero");
                    }
                }
                out.add_term(m2, coef);
            }
            return Ok(out);
        }
        let images: Vec<MultiPoly> = (0..dim)
            .map(|i| MultiPoly::linear(a.row(i), offset, self.nvars))
            .collect();
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            for i in 0..dim {
                rest.0[offset + i] = 0;
            }
            let mut prod = MultiPoly::monomial(rest, c.clone());
            for (i, &e) in m.0[offset..offset + dim].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
                prod = prod.mul(&p);
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Cyc]) -> Cyc {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Cyc::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                if *e > 0 {
                    t = &t * &x.pow(*e as i64).expect("nonzero power");
                }
            }
            acc += &t;
        }
        acc
    }

    /// Sets the variables in `range` to zero.
    pub fn set_zero(&self, range: std::ops::Range<usize>) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| range.clone().all(|i| m.0[i] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits into homogeneous components for the given variable weights,
    /// in decreasing weighted degree.
    pub fn homogeneous_components(&self, weights: &[i64]) -> Vec<(i64, MultiPoly)> {
        let mut parts: BTreeMap<i64, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.weighted_degree(weights);
            parts.entry(d).or_insert_with(|| MultiPoly::zero(self.nvars)).add_term(m.clone(), c.clone());
        }
        parts.into_iter().rev().collect()
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Degree in the variables of `range` only.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> Option<u32> {
        self.terms.keys().map(|m| range.clone().map(|i| m.0[i]).sum()).max()
    }

    /// Re-embeds into a ring with `nvars` variables, placing ours at `offset`.
    pub fn embed(&self, offset: usize, nvars: usize) -> MultiPoly {
        assert!(offset + self.nvars <= nvars);
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; nvars];
                    e[offset..offset + self.nvars].copy_from_slice(&m.0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Restricts to the variables `offset..offset+n`; all other exponents must be zero.
    pub fn restrict(&self, offset: usize, n: usize) -> MultiPoly {
        MultiPoly {
            nvars: n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!(m.0.iter().enumerate().all(|(i, &e)| e == 0 || (offset..offset + n).contains(&i)));
                    (Monomial(m.0[offset..offset + n].to_vec()), c.clone())
                })
                .collect(),
        }
    }

    /// Renames variables: variable `i` becomes `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; self.nvars];
                    for (i, &x) in m.0.iter().enumerate() {
                        e[perm[i]] = x;
                    }
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Cyc) -> Cyc) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn conj_coeffs(&self) -> MultiPoly {
        self.map_coeffs(Cyc::conj)
    }

    /// Coefficients of a linear form `Σ c_i x_i` (no constant term allowed).
    pub fn linear_coeffs(&self) -> Result<Vec<Cyc>, PolyError> {
        let mut v = vec![Cyc::zero(); self.nvars];
        for (m, c) in &self.terms {
            if m.degree() != 1 {
                return Err(PolyError::NotLinear);
            }
            let i = m.0.iter().position(|&e| e == 1).unwrap();
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// One step of division by a linear form: `self = q·α + r` where `r` is free
    /// of the pivot variable (first variable with a nonzero coefficient in α).
    pub fn div_rem_linear(&self, alpha: &MultiPoly) -> Result<(MultiPoly, MultiPoly), PolyError> {
        let coeffs = alpha.linear_coeffs()?;
        let p = coeffs.iter().position(|c| !c.is_zero()).ok_or(PolyError::NotLinear)?;
        let inv = coeffs[p].inv().expect("nonzero");
        let mut rem = self.terms.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        let max_e = rem.keys().map(|m| m.0[p]).max().unwrap_or(0);
        for e in (1..=max_e).rev() {
            let layer: Vec<(Monomial, Cyc)> =
                rem.iter().filter(|(m, _)| m.0[p] == e).map(|(m, c)| (m.clone(), c.clone())).collect();
            for (m, c) in layer {
                rem.remove(&m);
                let mut qm = m.clone();
                qm.0[p] -= 1;
                let qc = &c * &inv;
                for (j, a) in coeffs.iter().enumerate() {
                    if j == p || a.is_zero() {
                        continue;
                    }
                    let mut tm = qm.clone();
                    tm.0[j] += 1;
                    let t = -(&qc * a);
                    let entry = rem.entry(tm).or_insert_with(Cyc::zero);
                    *entry += &t;
                }
                quot.add_term(qm, qc);
            }
            rem.retain(|_, c| !c.is_zero());
        }
        Ok((quot, MultiPoly { nvars: self.nvars, terms: rem }))
    }

    /// Returns `g` with `self = α^m · g`, or the remainder witness.
    pub fn divide_exact_by_linear_form(&self, alpha: &MultiPoly, m: u32) -> Result<MultiPoly, PolyError> {
        let mut cur = self.clone();
        for step in 0..m {
            if cur.is_zero() {
                return Ok(cur);
            }
            let (q, r) = cur.div_rem_linear(alpha)?;
            if !r.is_zero() {
                return Err(PolyError::NotDivisible { remainder: r, divided: step });
            }
            cur = q;
        }
        Ok(cur)
    }

    /// Largest `m ≤ cap` with `α^m | self` (returns `cap` for the zero polynomial).
    pub fn linear_valuation(&self, alpha: &MultiPoly, cap: u32) -> u32 {
        let mut cur = self.clone();
        for m in 0..cap {
            if cur.is_zero() {
                return cap;
            }
            match cur.div_rem_linear(alpha) {
                Ok((q, r)) if r.is_zero() => cur = q,
                _ => return m,
            }
        }
        cap
    }

    /// Terms as `[exponentVector, cyc]` pairs in descending graded-lex order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms.iter().rev().map(|(m, c)| json!([m.0, c.to_json()])).collect(),
        )
    }

    pub fn from_json(v: &Value, nvars: usize) -> Option<MultiPoly> {
        let mut p = MultiPoly::zero(nvars);
        for t in v.as_array()? {
            let pair = t.as_array()?;
            let exps: Vec<u32> =
                pair.first()?.as_array()?.iter().map(|e| e.as_u64().map(|x| x as u32)).collect::<Option<_>>()?;
            if exps.len() != nvars {
                return None;
            }
            p.add_term(Monomial(exps), Cyc::from_json(pair.get(1)?)?);
        }
        Some(p)
    }

    /// Canonical text form with the given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let cs = c.to_string();
            let (neg, body) = if c.is_rational() && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let simple = c.is_rational();
            let coef = if !simple { format!("({})", body) } else { body };
            let term = if mono.is_empty() {
                coef
            } else if simple && coef == "1" {
                mono.join("*")
            } else {
                format!("{}*{}", coef, mono.join("*"))
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        if nvars <= 3 {
            ["x", "y", "z"].iter().take(nvars).map(|s| s.to_string()).collect()
        } else {
            (1..=nvars).map(|i| format!("x{}", i)).collect()
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&MultiPoly::default_names(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Cyc;

    fn x() -> MultiPoly {
        MultiPoly::var(0, 2)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(1, 2)
    }
    fn c(v: i64) -> Cyc {
        Cyc::from_int(v)
    }

    #[test]
    fn substitution() {
        let f = MultiPoly::var(0, 1).pow(3);
        let a = Mat::from_rows(vec![vec![c(-1)]]);
        assert_eq!(f.substitute_linear(&a, 0).unwrap(), f.neg());
        let swap = Mat::from_rows(vec![vec![c(0), c(1)], vec![c(1), c(0)]]);
        let g = x().add(&y());
        assert_eq!(g.substitute_linear(&swap, 0).unwrap(), g);
        let shear = Mat::from_rows(vec![vec![c(1), c(1)], vec![c(0), c(1)]]);
        let h = x().mul(&y());
        assert_eq!(h.substitute_linear(&shear, 0).unwrap(), x().add(&y()).mul(&y()));
    }

    #[test]
    fn exact_division() {
        let f = x().pow(2).sub(&y().pow(2));
        let a = x().sub(&y());
        assert_eq!(f.divide_exact_by_linear_form(&a, 1).unwrap(), x().add(&y()));
        let err = x().pow(2).divide_exact_by_linear_form(&x(), 3).unwrap_err();
        assert!(matches!(err, PolyError::NotDivisible { divided: 2, .. }));
        let x1 = MultiPoly::var(0, 1);
        assert_eq!(x1.pow(3).divide_exact_by_linear_form(&x1, 1).unwrap(), x1.pow(2));
    }

    #[test]
    fn components() {
        let x1 = MultiPoly::var(0, 1);
        let f = x1.pow(2).add(&x1);
        let parts = f.homogeneous_components(&[1]);
        assert_eq!(parts, vec![(2, x1.pow(2)), (1, x1.clone())]);
        let lx = MultiPoly::var(0, 2).mul(&MultiPoly::var(1, 2));
        assert_eq!(lx.homogeneous_components(&[1, -1]), vec![(0, lx.clone())]);
        assert!(MultiPoly::zero(1).homogeneous_components(&[1]).is_empty());
    }

    #[test]
    fn derivatives_and_display() {
        let f = x().pow(2).mul(&y());
        assert_eq!(f.derivative(0), x().mul(&y()).scale(&c(2)));
        assert_eq!(f.to_string(), "x^2*y");
        assert_eq!(x().sub(&y().scale(&c(2))).to_string(), "x - 2*y");
        let mono = Monomial::all_of_degree(2, 2);
        assert_eq!(mono, vec![Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 2])]);
    }

    #[test]
    fn json_round_trip() {
        let f = x().pow(2).add(&y().scale(&Cyc::root_of_unity(1, 3)));
        let v = f.to_json();
        assert_eq!(MultiPoly::from_json(&v, 2).unwrap(), f);
    }
}

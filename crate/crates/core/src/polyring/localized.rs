use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{Monomial, MultiPoly};
use crate::exactnum::Cyc;

/// A fixed list of pairwise non-proportional linear forms that may appear
/// in denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    nvars: usize,
    forms: Vec<MultiPoly>,
    /// `partials[h][i]` = ∂α_h/∂x_i.
    partials: Vec<Vec<Cyc>>,
}

impl Arrangement {
    pub fn new(nvars: usize, forms: Vec<MultiPoly>) -> Self {
        let partials = forms
            .iter()
            .map(|f| {
                assert_eq!(f.nvars(), nvars);
                f.linear_coeffs().expect("arrangement forms must be linear")
            })
            .collect();
        Arrangement { nvars, forms, partials }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn forms(&self) -> &[MultiPoly] {
        &self.forms
    }

    pub fn form(&self, h: usize) -> &MultiPoly {
        &self.forms[h]
    }

    /// The same forms placed at `offset` inside a ring of `nvars` variables.
    pub fn embed(&self, offset: usize, nvars: usize) -> Arrangement {
        Arrangement::new(nvars, self.forms.iter().map(|f| f.embed(offset, nvars)).collect())
    }
}

/// `numerator / Π α_h^{e_h}` kept in reduced form: no denominator form divides
/// the numerator.
#[derive(Clone, Debug)]
pub struct LocalizedPoly {
    num: MultiPoly,
    den: BTreeMap<usize, u32>,
    arr: Arc<Arrangement>,
}

impl PartialEq for LocalizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for LocalizedPoly {}

impl LocalizedPoly {
    pub fn zero(arr: &Arc<Arrangement>) -> Self {
        LocalizedPoly { num: MultiPoly::zero(arr.nvars), den: BTreeMap::new(), arr: arr.clone() }
    }

    pub fn one(arr: &Arc<Arrangement>) -> Self {
        Self::from_poly(MultiPoly::one(arr.nvars), arr)
    }

    pub fn constant(c: Cyc, arr: &Arc<Arrangement>) -> Self {
        Self::from_poly(MultiPoly::constant(c, arr.nvars), arr)
    }

    pub fn from_poly(p: MultiPoly, arr: &Arc<Arrangement>) -> Self {
        assert_eq!(p.nvars(), arr.nvars, "variable count mismatch");
        LocalizedPoly { num: p, den: BTreeMap::new(), arr: arr.clone() }
    }

    /// `p / Π α_h^{e_h}`, reduced.
    pub fn new(p: MultiPoly, den: BTreeMap<usize, u32>, arr: &Arc<Arrangement>) -> Self {
        let mut f = LocalizedPoly { num: p, den, arr: arr.clone() };
        f.den.retain(|_, e| *e > 0);
        f.reduce();
        f
    }

    /// `α_h^{power}` for any integer power.
    pub fn form_power(h: usize, power: i64, arr: &Arc<Arrangement>) -> Self {
        if power >= 0 {
            Self::from_poly(arr.forms[h].pow(power as u32), arr)
        } else {
            let mut den = BTreeMap::new();
            den.insert(h, (-power) as u32);
            LocalizedPoly { num: MultiPoly::one(arr.nvars), den, arr: arr.clone() }
        }
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        &self.arr
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn into_polynomial(self) -> Result<MultiPoly, LocalizedPoly> {
        if self.den.is_empty() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    /// Constant value if this is a constant.
    pub fn as_constant(&self) -> Option<Cyc> {
        if !self.den.is_empty() {
            return None;
        }
        match self.num.degree() {
            None => Some(Cyc::zero()),
            Some(0) => Some(self.num.constant_term()),
            _ => None,
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let ids: Vec<usize> = self.den.keys().copied().collect();
        for h in ids {
            let alpha = &self.arr.forms[h];
            loop {
                let e = self.den[&h];
                if e == 0 {
                    break;
                }
                let (q, r) = self.num.div_rem_linear(alpha).expect("linear form");
                if !r.is_zero() {
                    break;
                }
                self.num = q;
                *self.den.get_mut(&h).unwrap() -= 1;
            }
        }
        self.den.retain(|_, e| *e > 0);
    }

    /// Degree of the numerator minus the degree of the denominator (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        let d = self.num.degree()? as i64;
        Some(d - self.den.values().map(|&e| e as i64).sum::<i64>())
    }

    /// Numerator multiplied to the common denominator `Π α_h^{target_h}`.
    fn lift_to(&self, target: &BTreeMap<usize, u32>) -> MultiPoly {
        let mut n = self.num.clone();
        for (&h, &t) in target {
            let e = self.den.get(&h).copied().unwrap_or(0);
            if t > e {
                n = n.mul(&self.arr.forms[h].pow(t - e));
            }
        }
        n
    }

    pub fn add(&self, other: &LocalizedPoly) -> LocalizedPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return LocalizedPoly::new(self.num.add(&other.num), self.den.clone(), &self.arr);
        }
        let mut target = self.den.clone();
        for (&h, &e) in &other.den {
            let t = target.entry(h).or_insert(0);
            *t = (*t).max(e);
        }
        let n = self.lift_to(&target).add(&other.lift_to(&target));
        LocalizedPoly::new(n, target, &self.arr)
    }

    pub fn neg(&self) -> LocalizedPoly {
        LocalizedPoly { num: self.num.neg(), den: self.den.clone(), arr: self.arr.clone() }
    }

    pub fn sub(&self, other: &LocalizedPoly) -> LocalizedPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Cyc) -> LocalizedPoly {
        if c.is_zero() {
            return LocalizedPoly::zero(&self.arr);
        }
        LocalizedPoly { num: self.num.scale(c), den: self.den.clone(), arr: self.arr.clone() }
    }

    pub fn mul(&self, other: &LocalizedPoly) -> LocalizedPoly {
        if self.is_zero() || other.is_zero() {
            return LocalizedPoly::zero(&self.arr);
        }
        let mut den = self.den.clone();
        for (&h, &e) in &other.den {
            *den.entry(h).or_insert(0) += e;
        }
        let num = self.num.mul(&other.num);
        if self.den.is_empty() || other.den.is_empty() {
            // Only the factors of one side can cancel against the other numerator.
            let mut f = LocalizedPoly { num, den, arr: self.arr.clone() };
            f.reduce();
            return f;
        }
        LocalizedPoly::new(num, den, &self.arr)
    }

    /// Sum of many terms over their least common denominator, reduced once.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a LocalizedPoly>, arr: &Arc<Arrangement>) -> LocalizedPoly {
        let items: Vec<&LocalizedPoly> = items.into_iter().filter(|f| !f.is_zero()).collect();
        let mut target: BTreeMap<usize, u32> = BTreeMap::new();
        for f in &items {
            for (&h, &e) in &f.den {
                let t = target.entry(h).or_insert(0);
                *t = (*t).max(e);
            }
        }
        let mut num = MultiPoly::zero(arr.nvars);
        for f in &items {
            num = num.add(&f.lift_to(&target));
        }
        LocalizedPoly::new(num, target, arr)
    }

    /// Product without cancelling common factors; only for feeding [`LocalizedPoly::sum`].
    pub(crate) fn mul_unreduced(&self, other: &LocalizedPoly) -> LocalizedPoly {
        let mut den = self.den.clone();
        for (&h, &e) in &other.den {
            *den.entry(h).or_insert(0) += e;
        }
        LocalizedPoly { num: self.num.mul(&other.num), den, arr: self.arr.clone() }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> LocalizedPoly {
        self.mul(&LocalizedPoly::from_poly(p.clone(), &self.arr))
    }

    pub fn pow(&self, e: u32) -> LocalizedPoly {
        let mut acc = LocalizedPoly::one(&self.arr);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> LocalizedPoly {
        if self.den.is_empty() {
            return LocalizedPoly::from_poly(self.num.derivative(i), &self.arr);
        }
        let active: Vec<(usize, u32)> = self
            .den
            .iter()
            .filter(|(h, _)| !self.arr.partials[**h][i].is_zero())
            .map(|(&h, &e)| (h, e))
            .collect();
        if active.is_empty() {
            return LocalizedPoly::new(self.num.derivative(i), self.den.clone(), &self.arr);
        }
        // d(N/D) = (N' Π α_h − N Σ_h e_h α_h' Π_{h'≠h} α_{h'}) / (D Π α_h), h over active forms.
        let mut prod_all = MultiPoly::one(self.arr.nvars);
        for &(h, _) in &active {
            prod_all = prod_all.mul(&self.arr.forms[h]);
        }
        let mut n = self.num.derivative(i).mul(&prod_all);
        for (idx, &(h, e)) in active.iter().enumerate() {
            let mut others = MultiPoly::one(self.arr.nvars);
            for (jdx, &(g, _)) in active.iter().enumerate() {
                if jdx != idx {
                    others = others.mul(&self.arr.forms[g]);
                }
            }
            let c = &self.arr.partials[h][i] * &Cyc::from_int(e as i64);
            n = n.sub(&self.num.mul(&others).scale(&c));
        }
        let mut den = self.den.clone();
        for &(h, _) in &active {
            *den.get_mut(&h).unwrap() += 1;
        }
        LocalizedPoly::new(n, den, &self.arr)
    }

    /// ∂^α with α over the variables `offset..`.
    pub fn derivative_multi(&self, alpha: &Monomial, offset: usize) -> LocalizedPoly {
        if self.den.is_empty() {
            return LocalizedPoly::from_poly(self.num.derivative_multi(alpha, offset), &self.arr);
        }
        let mut cur = self.clone();
        for (j, &a) in alpha.0.iter().enumerate() {
            for _ in 0..a {
                cur = cur.derivative(offset + j);
            }
        }
        cur
    }

    pub fn directional_derivative(&self, xi: &[Cyc], offset: usize) -> LocalizedPoly {
        let mut out = LocalizedPoly::zero(&self.arr);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.derivative(offset + i).scale(c));
            }
        }
        out
    }

    /// Order of vanishing along α_h (negative for poles), capped at `cap`.
    pub fn valuation(&self, h: usize, cap: u32) -> i64 {
        let pole = self.den.get(&h).copied().unwrap_or(0) as i64;
        if pole > 0 {
            return -pole;
        }
        self.num.linear_valuation(&self.arr.forms[h], cap) as i64
    }

    /// Applies a coefficient map (e.g. conjugation) to the numerator.
    pub fn map_coeffs(&self, f: impl Fn(&Cyc) -> Cyc) -> LocalizedPoly {
        LocalizedPoly::new(self.num.map_coeffs(f), self.den.clone(), &self.arr)
    }

    /// Re-embeds into a larger arrangement with the same form ids.
    pub fn embed(&self, offset: usize, arr: &Arc<Arrangement>) -> LocalizedPoly {
        LocalizedPoly { num: self.num.embed(offset, arr.nvars), den: self.den.clone(), arr: arr.clone() }
    }

    /// Replaces the numerator and denominator by images under a map of forms:
    /// `α_h ↦ scale_h · α_{target_h}`.
    pub fn map_denominator(&self, num: MultiPoly, image: &[(usize, Cyc)]) -> LocalizedPoly {
        let mut n = num;
        let mut den = BTreeMap::new();
        for (&h, &e) in &self.den {
            let (t, s) = &image[h];
            *den.entry(*t).or_insert(0) += e;
            let inv = s.pow(-(e as i64)).expect("nonzero scale");
            n = n.scale(&inv);
        }
        LocalizedPoly::new(n, den, &self.arr)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let n = self.num.to_string_with(names);
        if self.den.is_empty() {
            return n;
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(&h, &e)| {
                let f = format!("({})", self.arr.forms[h].to_string_with(names));
                if e == 1 {
                    f
                } else {
                    format!("{}^{}", f, e)
                }
            })
            .collect();
        format!("({})/({})", n, d.join("*"))
    }

    pub fn to_json(&self) -> Value {
        let den: Vec<Value> = self.den.iter().map(|(h, e)| json!([h, e])).collect();
        json!({"numerator": self.num.to_json(), "denominator": den})
    }
}

impl fmt::Display for LocalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&MultiPoly::default_names(self.arr.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr2() -> Arc<Arrangement> {
        let x = MultiPoly::var(0, 2);
        let y = MultiPoly::var(1, 2);
        Arc::new(Arrangement::new(2, vec![x.clone(), y.clone(), x.sub(&y)]))
    }

    #[test]
    fn derivative_of_inverse() {
        let a = Arc::new(Arrangement::new(1, vec![MultiPoly::var(0, 1)]));
        let inv = LocalizedPoly::form_power(0, -1, &a);
        let d = inv.derivative(0);
        assert_eq!(d, LocalizedPoly::form_power(0, -2, &a).scale(&Cyc::from_int(-1)));
    }

    #[test]
    fn cancellation() {
        let a = arr2();
        let x = MultiPoly::var(0, 2);
        let y = MultiPoly::var(1, 2);
        let f = LocalizedPoly::from_poly(x.pow(2).sub(&y.pow(2)), &a).mul(&LocalizedPoly::form_power(2, -1, &a));
        assert_eq!(f.as_polynomial().unwrap(), &x.add(&y));
        let g = LocalizedPoly::form_power(0, -1, &a).add(&LocalizedPoly::form_power(1, -1, &a));
        // 1/x + 1/y = (x+y)/(xy)
        assert_eq!(g.numerator(), &x.add(&y));
        assert_eq!(g.denominator().len(), 2);
    }

    #[test]
    fn leibniz_on_power_of_form() {
        let a = arr2();
        let x = MultiPoly::var(0, 2);
        let y = MultiPoly::var(1, 2);
        let alpha = x.sub(&y);
        let g = x.add(&y);
        let m = 3;
        let lhs = LocalizedPoly::from_poly(alpha.pow(m).mul(&g), &a).derivative(0);
        let rhs = alpha.pow(m - 1).mul(&g).scale(&Cyc::from_int(m as i64)).add(&alpha.pow(m));
        assert_eq!(lhs.as_polynomial().unwrap(), &rhs);
    }
}

//! Graded bases of `Q_k` by exact linear algebra, one degree at a time.
//!
//! For twisted `k` with negative entries, elements are stored as numerators
//! `g` of `f = g/δ^r`. Since `δ = α_H·u` with `u` invariant under `W_H`,
//! the condition on `f` becomes: the normal expansion of `g` along H has no
//! `t^s` term with `s ≡ i + a_H + r (mod n_H)` and `s < n_H k_{H,i} + r`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::exactnum::Cyc;
use crate::linalg::{Echelon, Mat};
use crate::polyring::{LocalizedPoly, Monomial, MultiPoly};
use crate::refgroup::{InvariantScope, Multiplicity, ReflectionGroup};

use super::expansion::{expansion_rows, SparseRow};
use super::{pole_shift, QiError};

#[derive(Debug, Clone)]
pub struct QIBasis {
    group: Arc<ReflectionGroup>,
    k: Multiplicity,
    max_deg: i64,
    min_deg: i64,
    shift: u32,
    per_degree: Vec<Vec<MultiPoly>>,
}

impl QIBasis {
    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn multiplicity(&self) -> &Multiplicity {
        &self.k
    }

    pub fn max_deg(&self) -> i64 {
        self.max_deg
    }

    /// Lowest degree that can carry elements (negative when poles are allowed).
    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// The exponent `r` with elements `g/δ^r`.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Degree of the numerators representing degree `d` elements.
    pub fn numerator_degree(&self, d: i64) -> i64 {
        d + self.shift as i64 * self.group.hyperplanes().len() as i64
    }

    /// Numerators of the degree-`d` basis elements.
    pub fn degree(&self, d: i64) -> &[MultiPoly] {
        if d < self.min_deg || d > self.max_deg {
            return &[];
        }
        &self.per_degree[(d - self.min_deg) as usize]
    }

    pub fn dim(&self, d: i64) -> usize {
        self.degree(d).len()
    }

    /// `(degree, dimension)` for every degree in range.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        (self.min_deg..=self.max_deg).map(|d| (d, self.dim(d))).collect()
    }

    pub fn elements(&self, d: i64) -> Vec<LocalizedPoly> {
        let den = self.delta_inverse();
        self.degree(d).iter().map(|g| den.mul_poly(g)).collect()
    }

    /// All elements in degrees `lo..=hi`, as `(degree, element)`.
    pub fn all_elements(&self, lo: i64, hi: i64) -> Vec<(i64, LocalizedPoly)> {
        (lo.max(self.min_deg)..=hi.min(self.max_deg)).flat_map(|d| self.elements(d).into_iter().map(move |e| (d, e))).collect()
    }

    fn delta_inverse(&self) -> LocalizedPoly {
        let arr = self.group.arrangement();
        let mut out = LocalizedPoly::one(arr);
        for h in 0..self.group.hyperplanes().len() {
            out = out.mul(&LocalizedPoly::form_power(h, -(self.shift as i64), arr));
        }
        out
    }

    /// Whether a homogeneous element of degree `d` lies in the span.
    pub fn contains(&self, d: i64, f: &LocalizedPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        if d < self.min_deg || d > self.max_deg {
            return false;
        }
        let delta = self.group.relative_invariant(InvariantScope::All).pow(self.shift);
        let g = f.mul_poly(&delta);
        let Some(g) = g.as_polynomial() else { return false };
        let nd = self.numerator_degree(d);
        if g.degree() != Some(nd as u32) || !g.is_homogeneous() {
            return false;
        }
        let monos = Monomial::all_of_degree(self.group.dim(), nd as u32);
        let ech = span(self.degree(d), &monos);
        ech.contains(&coefficients(g, &monos))
    }

    /// Degreewise equality of spans on `lo..=hi`, after clearing poles with a
    /// common power of δ.
    pub fn same_space(&self, other: &QIBasis, lo: i64, hi: i64) -> bool {
        let r = self.shift.max(other.shift);
        let delta = self.group.relative_invariant(InvariantScope::All);
        let lift = |b: &QIBasis, d: i64| -> Vec<MultiPoly> {
            let extra = delta.pow(r - b.shift);
            b.degree(d).iter().map(|g| g.mul(&extra)).collect()
        };
        let arrs = self.group.hyperplanes().len() as i64;
        (lo..=hi).all(|d| {
            let nd = d + r as i64 * arrs;
            if nd < 0 {
                return true;
            }
            let monos = Monomial::all_of_degree(self.group.dim(), nd as u32);
            let a = span(&lift(self, d), &monos);
            let b = span(&lift(other, d), &monos);
            a.same_span(&b)
        })
    }

    pub fn to_json(&self) -> Value {
        let per: Vec<Value> = (self.min_deg..=self.max_deg)
            .map(|d| {
                json!({
                    "degree": d,
                    "dim": self.dim(d),
                    "basis": self.elements(d).iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "k": self.k.to_json(),
            "maxDeg": self.max_deg,
            "minDeg": self.min_deg,
            "deltaShift": self.shift,
            "perDegree": per,
        })
    }
}

pub(crate) fn coefficients(f: &MultiPoly, monos: &[Monomial]) -> Vec<Cyc> {
    monos.iter().map(|m| f.coeff(m)).collect()
}

pub(crate) fn span(polys: &[MultiPoly], monos: &[Monomial]) -> Echelon {
    let mut ech = Echelon::new(monos.len());
    for p in polys {
        ech.insert(&coefficients(p, monos));
    }
    ech
}

pub(crate) fn from_coefficients(v: &[Cyc], monos: &[Monomial], nvars: usize) -> MultiPoly {
    MultiPoly::from_terms(nvars, v.iter().zip(monos).filter(|(c, _)| !c.is_zero()).map(|(c, m)| (m.clone(), c.clone())))
}

/// Kernel of the sparse system, returned as canonical reduced echelon rows:
/// the leading (largest) monomial has coefficient 1 and no basis vector
/// involves another's leading monomial.
pub(crate) fn kernel_canonical(rows: &[SparseRow], cols: usize) -> Vec<Vec<Cyc>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|j| {
                let mut v = vec![Cyc::zero(); cols];
                v[j] = Cyc::one();
                v
            })
            .collect();
    }
    let mut m = Mat::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in row {
            m[(i, *j)] = c.clone();
        }
    }
    let mut ech = Echelon::new(cols);
    for v in m.nullspace() {
        ech.insert(&v);
    }
    ech.rows().to_vec()
}

/// Numerator rows for degree `d` of `Q_k` with pole shift `shift`.
fn scalar_rows(group: &ReflectionGroup, k: &Multiplicity, shift: u32, nd: u32) -> Vec<SparseRow> {
    let mut rows = Vec::new();
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        let n = hp.n as i64;
        let c = hp.orbit;
        let a = k.a(c);
        for i in 0..n {
            let bound = k.scaled(c, i).expect("checked") + shift as i64;
            let residue = (i + a + shift as i64).rem_euclid(n);
            let mut s = residue;
            while s < bound && s <= nd as i64 {
                rows.extend(expansion_rows(group, h, nd, s as u32).iter().cloned());
                s += n;
            }
        }
    }
    rows
}

/// Exact per-degree bases of `Q_k` for degrees up to `max_deg`.
pub fn compute_basis(group: &Arc<ReflectionGroup>, k: &Multiplicity, max_deg: i64) -> Result<QIBasis, QiError> {
    k.check_usable()?;
    let shift = pole_shift(group, k);
    let arrs = group.hyperplanes().len() as i64;
    let min_deg = -(shift as i64) * arrs;
    let dim = group.dim();
    let per_degree = (min_deg..=max_deg.max(min_deg - 1))
        .map(|d| {
            let nd = (d - min_deg) as u32;
            let monos = Monomial::all_of_degree(dim, nd);
            let rows = scalar_rows(group, k, shift, nd);
            kernel_canonical(&rows, monos.len()).iter().map(|v| from_coefficients(v, &monos, dim)).collect()
        })
        .collect();
    Ok(QIBasis { group: group.clone(), k: k.clone(), max_deg, min_deg, shift, per_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn cyclic_three_dims() {
        let g = group("cyclic:3");
        let b = compute_basis(&g, &Multiplicity::from_ints(&[&[0, 1, 1]]), 8).unwrap();
        let dims: Vec<usize> = b.dims().into_iter().map(|(_, n)| n).collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn zero_multiplicity_is_everything() {
        let g = group("dihedral:3:3");
        let b = compute_basis(&g, &Multiplicity::zero(&g), 5).unwrap();
        let dims: Vec<usize> = b.dims().into_iter().map(|(_, n)| n).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 6]);
    }
}

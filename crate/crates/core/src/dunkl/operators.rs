//! Dunkl operators `T_{ξ,k}`, their polynomial extensions `T_{p,k}`, the
//! Euler element and central element `z(k)`, and the pairing `(p, q)_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::exactnum::{rat, Cyc};
use crate::polyring::{LocalizedPoly, Monomial, MultiPoly};
use crate::refgroup::{Multiplicity, ReflectionGroup, WRep};

use super::{DiffOp, DiffReflOp, DunklError};

/// `δ_C^e` as a localized polynomial.
pub fn delta_power(group: &ReflectionGroup, orbit: usize, e: i64) -> LocalizedPoly {
    let arr = group.arrangement();
    let mut out = LocalizedPoly::one(arr);
    for &h in &group.orbits()[orbit] {
        out = out.mul(&LocalizedPoly::form_power(h, e, arr));
    }
    out
}

/// Coefficient of `s_H^l` in `Σ_i n_H k_{H,i} e_{H,i}`, i.e. `Σ_i k_{H,i} ζ^{−il}`.
pub fn reflection_weight(group: &ReflectionGroup, k: &Multiplicity, h: usize, l: usize) -> Cyc {
    let hp = group.hyperplane(h);
    let n = hp.n as i64;
    let mut s = Cyc::zero();
    for i in 0..n {
        let q = k.k(hp.orbit, i);
        if !num_traits::Zero::is_zero(q) {
            s += &Cyc::root_of_unity(-(i * l as i64), n as u32).scale_rational(q);
        }
    }
    s
}

/// Dunkl operators for a fixed group and multiplicity, with a cache of
/// monomial products `T^β`.
pub struct DunklFamily {
    group: Arc<ReflectionGroup>,
    k: Multiplicity,
    coordinates: Vec<DiffReflOp>,
    cache: Mutex<HashMap<Monomial, DiffReflOp>>,
    res_cache: Mutex<HashMap<Monomial, DiffOp>>,
}

impl DunklFamily {
    pub fn new(group: &Arc<ReflectionGroup>, k: &Multiplicity) -> DunklFamily {
        let dim = group.dim();
        let coordinates = (0..dim)
            .map(|i| {
                let mut xi = vec![Cyc::zero(); dim];
                xi[i] = Cyc::one();
                Self::build(group, k, &xi)
            })
            .collect();
        DunklFamily { group: group.clone(), k: k.clone(), coordinates, cache: Mutex::new(HashMap::new()), res_cache: Mutex::new(HashMap::new()) }
    }

    fn build(group: &Arc<ReflectionGroup>, k: &Multiplicity, xi: &[Cyc]) -> DiffReflOp {
        let arr = group.arrangement();
        let mut op = DiffReflOp::from_diffop(group, DiffOp::directional(xi, arr));
        for (h, hp) in group.hyperplanes().iter().enumerate() {
            let a = hp.alpha_at(xi);
            if a.is_zero() {
                continue;
            }
            let inv = LocalizedPoly::form_power(h, -1, arr).scale(&a);
            for (l, &w) in hp.stabilizer.iter().enumerate() {
                let c = reflection_weight(group, k, h, l);
                if !c.is_zero() {
                    op.add_term(w, DiffOp::multiplication(inv.scale(&(-&c))));
                }
            }
        }
        op
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn multiplicity(&self) -> &Multiplicity {
        &self.k
    }

    /// `T_{e_i}` for the i-th standard basis vector.
    pub fn coordinate(&self, i: usize) -> &DiffReflOp {
        &self.coordinates[i]
    }

    /// `T_ξ = Σ ξ_i T_{e_i}`.
    pub fn operator(&self, xi: &[Cyc]) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.coordinates[i].scale(c));
            }
        }
        out
    }

    /// `T^β = Π_i T_{e_i}^{β_i}`.
    pub fn monomial_operator(&self, beta: &Monomial) -> DiffReflOp {
        if let Some(op) = self.cache.lock().unwrap().get(beta) {
            return op.clone();
        }
        let op = match beta.0.iter().position(|&e| e > 0) {
            None => DiffReflOp::identity(&self.group),
            Some(i) => {
                let mut lower = beta.clone();
                lower.0[i] -= 1;
                self.coordinates[i].compose(&self.monomial_operator(&lower))
            }
        };
        self.cache.lock().unwrap().insert(beta.clone(), op.clone());
        op
    }

    /// `T_{p,k}` for a polynomial `p` on V* (variables are the dual coordinates).
    pub fn polynomial_operator(&self, p: &MultiPoly) -> DiffReflOp {
        let mut out = DiffReflOp::zero(&self.group);
        for (beta, c) in p.terms() {
            out = out.add(&self.monomial_operator(beta).scale(c));
        }
        out
    }

    /// `T^β` modulo the left ideal spanned by `w − 1`, built one factor at a time.
    fn monomial_res(&self, beta: &Monomial) -> DiffOp {
        if let Some(op) = self.res_cache.lock().unwrap().get(beta) {
            return op.clone();
        }
        let op = match beta.0.iter().position(|&e| e > 0) {
            None => DiffOp::identity(self.group.arrangement()),
            Some(i) => {
                let mut lower = beta.clone();
                lower.0[i] -= 1;
                self.coordinates[i].act_on_quotient(&self.monomial_res(&lower))
            }
        };
        self.res_cache.lock().unwrap().insert(beta.clone(), op.clone());
        op
    }

    /// The Calogero–Moser operator `L_{p,k} = Res(T_{p,k})` for `p` invariant
    /// under the dual action.
    pub fn calogero_moser(&self, p: &MultiPoly) -> Result<DiffOp, DunklError> {
        let q = p.conj_coeffs();
        if let Some(&generator) = self.group.generators().iter().find(|&&g| self.group.act_poly(g, &q, 0) != q) {
            return Err(DunklError::NotInvariant { generator });
        }
        let mut out = DiffOp::zero(self.group.arrangement());
        for (beta, c) in p.terms() {
            out = out.add(&self.monomial_res(beta).scale(c));
        }
        Ok(out)
    }

    /// `E(k) = Σ_i x_i T_{e_i}`.
    pub fn euler(&self) -> DiffReflOp {
        let arr = self.group.arrangement();
        let mut out = DiffReflOp::zero(&self.group);
        for i in 0..self.group.dim() {
            let x = LocalizedPoly::from_poly(MultiPoly::var(i, self.group.dim()), arr);
            out = out.add(&self.coordinates[i].mul_left(&x));
        }
        out
    }

    /// Coefficients of `z(k) = Σ_H Σ_i n_H k_{H,i} e_{H,i}` in the group algebra.
    pub fn central_element(&self) -> Vec<Cyc> {
        central_element(&self.group, &self.k)
    }

    /// `c_τ(k) = tr(z(k)|_τ) / dim τ`.
    pub fn c_scalar(&self, rep: &WRep) -> Cyc {
        c_scalar(&self.group, &self.k, rep)
    }

    /// `(p, q)_k = T_{p,k}(q)(0)`.
    pub fn pairing(&self, p: &MultiPoly, q: &MultiPoly) -> Result<Cyc, DunklError> {
        let r = self.polynomial_operator(p).apply_poly(q);
        match r.as_polynomial() {
            Some(poly) => Ok(poly.constant_term()),
            None => Err(DunklError::NotPolynomial(r.to_string())),
        }
    }
}

pub fn central_element(group: &ReflectionGroup, k: &Multiplicity) -> Vec<Cyc> {
    let mut z = vec![Cyc::zero(); group.order()];
    for (h, hp) in group.hyperplanes().iter().enumerate() {
        for (l, &w) in hp.stabilizer.iter().enumerate() {
            z[w] += &reflection_weight(group, k, h, l);
        }
    }
    z
}

pub fn c_scalar(group: &ReflectionGroup, k: &Multiplicity, rep: &WRep) -> Cyc {
    let z = central_element(group, k);
    let mut tr = Cyc::zero();
    for (c, chi) in z.iter().zip(&rep.character) {
        if !c.is_zero() {
            tr += &(c * chi);
        }
    }
    tr.scale_rational(&rat(1, rep.dim as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    #[test]
    fn rank_one_examples() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(2)).unwrap();
        let k = Multiplicity::from_ints(&[&[0, 1]]);
        let fam = DunklFamily::new(&g, &k);
        let x = MultiPoly::var(0, 1);
        let t = fam.coordinate(0);
        assert_eq!(t.apply_poly_strict(&x).unwrap(), MultiPoly::constant(Cyc::from_int(-1), 1));
        assert_eq!(t.apply_poly_strict(&x.pow(2)).unwrap(), x.scale(&Cyc::from_int(2)));
        assert!(t.apply_poly_strict(&MultiPoly::one(1)).unwrap().is_zero());

        let z3 = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let fam = DunklFamily::new(&z3, &Multiplicity::from_ints(&[&[0, 1, 1]]));
        let id = fam.coordinate(0).part(0);
        let expected = DiffOp::partial(0, z3.arrangement())
            .add(&DiffOp::multiplication(LocalizedPoly::form_power(0, -1, z3.arrangement()).scale(&Cyc::from_int(-2))));
        assert_eq!(id, expected);
    }

    #[test]
    fn c_scalars_cyclic() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let k = Multiplicity::from_ints(&[&[0, 1, 2]]);
        for (j, rep) in g.irreps().unwrap().iter().enumerate() {
            assert_eq!(c_scalar(&g, &k, rep), Cyc::from_int(3 * [0, 1, 2][j]));
        }
    }

    #[test]
    fn calogero_moser_matches_full_normal_form() {
        for (spec, k) in [("cyclic:3", vec![0, 1, 2]), ("dihedral:3:3", vec![0, 1]), ("dihedral:2:1", vec![0, 2])] {
            let g = ReflectionGroup::cached(&GroupSpec::parse(spec).unwrap()).unwrap();
            let k = Multiplicity::parse(&g, &k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")).unwrap();
            let fam = DunklFamily::new(&g, &k);
            for f in g.fundamental_invariants() {
                let p = f.conj_coeffs();
                assert_eq!(fam.calogero_moser(&p).unwrap(), fam.polynomial_operator(&p).res().unwrap());
            }
        }
    }
}

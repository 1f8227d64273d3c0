//! Exact checks of the defining identities of a Dunkl family.

use serde_json::{json, Value};

use super::DunklFamily;
use crate::exactnum::Cyc;
use crate::polyring::{LocalizedPoly, Monomial, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// `[T_i, T_j] = 0` for all coordinate pairs.
    pub commuting: bool,
    /// `w T_ξ w⁻¹ = T_{wξ}` for every generator and coordinate direction.
    pub equivariant: bool,
    /// `T_i` lowers the degree of every monomial up to the tested degree by one.
    pub homogeneous: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.commuting && self.equivariant && self.homogeneous
    }

    pub fn to_json(&self) -> Value {
        json!({
            "commuting": self.commuting,
            "equivariant": self.equivariant,
            "homogeneous": self.homogeneous,
            "failures": self.failures,
            "passed": self.passed(),
        })
    }
}

fn lowers_degree(f: &LocalizedPoly, d: u32) -> bool {
    f.is_zero() || (f.numerator().is_homogeneous() && f.degree() == Some(d as i64 - 1))
}

/// Checks commutativity, equivariance and homogeneity as normal-form
/// identities, the last on all monomials of degree at most `max_degree`.
pub fn check_axioms(family: &DunklFamily, max_degree: u32) -> AxiomReport {
    let group = family.group();
    let n = group.dim();
    let mut failures = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            if !family.coordinate(i).commutator(family.coordinate(j)).is_zero() {
                failures.push(format!("[T_{i}, T_{j}] != 0"));
            }
        }
    }
    let commuting = failures.is_empty();

    let mut equivariant = true;
    for &g in group.generators() {
        let matrix = &group.element(g).matrix;
        for i in 0..n {
            let mut basis = vec![Cyc::zero(); n];
            basis[i] = Cyc::one();
            let moved = family.operator(&matrix.mul_vec(&basis));
            if family.coordinate(i).conjugate_by(g) != moved {
                equivariant = false;
                failures.push(format!("element {g} does not move T_{i} to T_(w e_{i})"));
            }
        }
    }

    let arr = group.arrangement();
    let mut homogeneous = true;
    for d in 0..=max_degree {
        for m in Monomial::all_of_degree(n, d) {
            let f = LocalizedPoly::from_poly(MultiPoly::monomial(m.clone(), Cyc::one()), arr);
            for i in 0..n {
                if !lowers_degree(&family.coordinate(i).apply(&f), d) {
                    homogeneous = false;
                    failures.push(format!("T_{i} does not lower the degree of {:?}", m.0));
                }
            }
        }
    }
    AxiomReport { commuting, equivariant, homogeneous, failures }
}

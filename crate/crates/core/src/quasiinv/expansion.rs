//! Normal expansions along a hyperplane: writing `x = y + t·v_H` with `y ∈ H`,
//! the coefficient of `t^s` in `f(y + t v_H)` is the restriction to H of
//! `(1/s!) ∂_{v_H}^s f`. The rows produced here express those coefficients as
//! linear functionals on the monomial coefficients of a homogeneous polynomial.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::exactnum::Cyc;
use crate::linalg::Mat;
use crate::polyring::{Monomial, MultiPoly};
use crate::refgroup::ReflectionGroup;

/// A sparse linear functional: `(column, coefficient)` pairs.
pub type SparseRow = Vec<(usize, Cyc)>;

type FrameKey = (u64, usize, u32, u32);

fn frame_cache() -> &'static Mutex<HashMap<FrameKey, Arc<Vec<SparseRow>>>> {
    static CACHE: OnceLock<Mutex<HashMap<FrameKey, Arc<Vec<SparseRow>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Rows whose vanishing on a degree-`degree` polynomial (columns indexed by
/// `Monomial::all_of_degree`) says that the `t^s` coefficient of its normal
/// expansion along hyperplane `h` is zero.
pub fn expansion_rows(group: &ReflectionGroup, h: usize, degree: u32, s: u32) -> Arc<Vec<SparseRow>> {
    let key = (group.id(), h, degree, s);
    if let Some(rows) = frame_cache().lock().unwrap().get(&key) {
        return rows.clone();
    }
    let rows = Arc::new(build_rows(group, h, degree, s));
    frame_cache().lock().unwrap().insert(key, rows.clone());
    rows
}

fn build_rows(group: &ReflectionGroup, h: usize, degree: u32, s: u32) -> Vec<SparseRow> {
    if s > degree {
        return Vec::new();
    }
    let dim = group.dim();
    let hp = group.hyperplane(h);
    let pivot = hp.alpha.iter().position(|c| !c.is_zero()).expect("nonzero form");
    // On H: x_pivot = −Σ_{j≠pivot} (α_j/α_pivot) x_j.
    let inv = hp.alpha[pivot].inv().expect("nonzero");
    let mut restriction = vec![Cyc::zero(); dim];
    for (j, slot) in restriction.iter_mut().enumerate() {
        if j != pivot {
            *slot = -(&hp.alpha[j] * &inv);
        }
    }
    let ell = MultiPoly::linear(&restriction, 0, dim);
    let mut ell_pows = vec![MultiPoly::one(dim)];
    for e in 1..=degree as usize {
        let next = ell_pows[e - 1].mul(&ell);
        ell_pows.push(next);
    }
    let support: Vec<usize> = (0..dim).filter(|&i| !hp.v[i].is_zero()).collect();
    let v_pows: Vec<Vec<Cyc>> = hp
        .v
        .iter()
        .map(|c| {
            let mut p = vec![Cyc::one()];
            for e in 1..=s as usize {
                let next = &p[e - 1] * c;
                p.push(next);
            }
            p
        })
        .collect();
    let betas = multi_indices(&support, dim, s);

    let monos = Monomial::all_of_degree(dim, degree);
    let mut rows: BTreeMap<Monomial, SparseRow> = BTreeMap::new();
    for (col, m) in monos.iter().enumerate() {
        let mut acc: BTreeMap<Monomial, Cyc> = BTreeMap::new();
        for beta in &betas {
            let Some(rest) = m.checked_div(beta) else { continue };
            let mut coef = Cyc::from_int(m.binomial(beta) as i64);
            for &i in &support {
                if beta.0[i] > 0 {
                    coef = &coef * &v_pows[i][beta.0[i] as usize];
                }
            }
            let e = rest.0[pivot] as usize;
            let mut base = rest.clone();
            base.0[pivot] = 0;
            for (lm, lc) in ell_pows[e].terms() {
                let entry = acc.entry(base.mul(lm)).or_insert_with(Cyc::zero);
                *entry += &(&coef * lc);
            }
        }
        for (r, c) in acc {
            if !c.is_zero() {
                rows.entry(r).or_default().push((col, c));
            }
        }
    }
    rows.into_values().collect()
}

/// Exponent vectors of total degree `s` supported on `support`.
fn multi_indices(support: &[usize], dim: usize, s: u32) -> Vec<Monomial> {
    Monomial::all_of_degree(support.len(), s)
        .into_iter()
        .map(|m| {
            let mut full = vec![0u32; dim];
            for (k, &i) in support.iter().enumerate() {
                full[i] = m.0[k];
            }
            Monomial(full)
        })
        .collect()
}

/// Change of variables `x = P·(y, t)`: the columns of `P` are a basis of H
/// followed by `v_H`, so the last variable is the normal coordinate `t`.
pub fn normal_frame(group: &ReflectionGroup, h: usize) -> Mat {
    let dim = group.dim();
    let hp = group.hyperplane(h);
    let pivot = hp.alpha.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let inv = hp.alpha[pivot].inv().expect("nonzero");
    let mut cols: Vec<Vec<Cyc>> = Vec::new();
    for j in (0..dim).filter(|&j| j != pivot) {
        let mut b = vec![Cyc::zero(); dim];
        b[j] = Cyc::one();
        b[pivot] = -(&hp.alpha[j] * &inv);
        cols.push(b);
    }
    cols.push(hp.v.clone());
    let mut p = Mat::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            p[(i, j)] = col[i].clone();
        }
    }
    p
}

/// The exponents of `t` occurring in the normal expansion of `f` along `h`,
/// computed by direct substitution.
pub fn normal_exponents(group: &ReflectionGroup, h: usize, f: &MultiPoly) -> Vec<u32> {
    let p = normal_frame(group, h);
    let g = f.substitute_linear(&p, 0).expect("dimension");
    let last = group.dim() - 1;
    let mut out: Vec<u32> = g.terms().keys().map(|m| m.0[last]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

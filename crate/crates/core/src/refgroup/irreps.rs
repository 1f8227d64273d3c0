//! Irreducible representations, built constructively: linear characters,
//! the defining representation and its dual, Young's seminormal form for
//! symmetric groups, representations induced from the diagonal subgroup of
//! rank-2 monomial groups, and twists of these by linear characters.

use std::collections::VecDeque;

use crate::exactnum::{rat, Cyc};
use crate::linalg::Mat;
use crate::polyring::MultiPoly;

use super::{GroupError, ReflectionGroup};

#[derive(Debug, Clone, PartialEq)]
pub struct WRep {
    pub name: String,
    pub dim: usize,
    /// `matrices[g]` is ρ(g) in the element numbering of the group.
    pub matrices: Vec<Mat>,
    pub character: Vec<Cyc>,
}

impl WRep {
    fn from_matrices(name: String, matrices: Vec<Mat>) -> WRep {
        let dim = matrices[0].rows();
        let character = matrices.iter().map(Mat::trace).collect();
        WRep { name, dim, matrices, character }
    }

    pub fn is_linear(&self) -> bool {
        self.dim == 1
    }

    /// The dual representation, realized by conjugate matrices (the
    /// character is the conjugate character).
    pub fn conj_matrices(&self) -> Vec<Mat> {
        self.matrices.iter().map(Mat::conj).collect()
    }
}

/// `(1/|W|) Σ_w a(w) conj(b(w))`.
pub fn character_inner(a: &[Cyc], b: &[Cyc]) -> Cyc {
    let mut s = Cyc::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * &y.conj());
        }
    }
    s.scale_rational(&rat(1, a.len() as i64))
}

/// Extends generator images to all elements along BFS words and checks the
/// homomorphism property on every (element, generator) pair.
fn extend(group: &ReflectionGroup, gens: &[(usize, Mat)]) -> Option<Vec<Mat>> {
    let order = group.order();
    let dim = gens[0].1.rows();
    let mut images: Vec<Option<Mat>> = vec![None; order];
    images[0] = Some(Mat::identity(dim));
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, ms) in gens {
            let y = group.mul(x, *s);
            if images[y].is_none() {
                images[y] = Some(images[x].as_ref().unwrap().mul(ms));
                queue.push_back(y);
            }
        }
    }
    let images: Vec<Mat> = images.into_iter().collect::<Option<_>>()?;
    for x in 0..order {
        for (s, ms) in gens {
            if images[x].mul(ms) != images[group.mul(x, *s)] {
                return None;
            }
        }
    }
    Some(images)
}

fn linear_characters(group: &ReflectionGroup) -> Vec<Vec<Cyc>> {
    let gens = group.generators();
    let orders: Vec<u32> = gens
        .iter()
        .map(|&g| {
            let mut k = 1;
            let mut cur = g;
            while cur != 0 {
                cur = group.mul(cur, g);
                k += 1;
            }
            k
        })
        .collect();
    let total: usize = orders.iter().map(|&o| o as usize).product();
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut assignment = Vec::new();
        for (&g, &o) in gens.iter().zip(&orders) {
            let e = (c % o as usize) as i64;
            c /= o as usize;
            assignment.push((g, Mat::from_rows(vec![vec![Cyc::root_of_unity(e, o)]])));
        }
        if let Some(images) = extend(group, &assignment) {
            out.push(images.into_iter().map(|m| m[(0, 0)].clone()).collect());
        }
    }
    out
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Standard Young tableaux as `position[entry] = (row, col)`.
fn standard_tableaux(shape: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    fn rec(entry: usize, n: usize, shape: &[usize], filled: &mut Vec<usize>, pos: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if entry == n {
            out.push(pos.clone());
            return;
        }
        for r in 0..shape.len() {
            let c = filled[r];
            if c < shape[r] && (r == 0 || filled[r - 1] > c) {
                filled[r] += 1;
                pos.push((r, c));
                rec(entry + 1, n, shape, filled, pos, out);
                pos.pop();
                filled[r] -= 1;
            }
        }
    }
    rec(0, n, shape, &mut vec![0; shape.len()], &mut Vec::new(), &mut out);
    out
}

/// Young's seminormal matrices for the adjacent transpositions (i, i+1).
fn seminormal(shape: &[usize], flip: bool) -> Vec<Mat> {
    let tabs = standard_tableaux(shape);
    let n: usize = shape.iter().sum();
    let d = tabs.len();
    let mut mats = Vec::new();
    for i in 0..n - 1 {
        let mut m = Mat::zeros(d, d);
        for (t, pos) in tabs.iter().enumerate() {
            let (r1, c1) = pos[i];
            let (r2, c2) = pos[i + 1];
            let axial = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
            let rho = rat(1, axial);
            m[(t, t)] = Cyc::from_rational(&rho);
            if r1 == r2 || c1 == c2 {
                continue;
            }
            let mut swapped = pos.clone();
            swapped.swap(i, i + 1);
            let u = tabs.iter().position(|p| *p == swapped).expect("swap stays standard");
            // Column t holds the image of v_t.
            let upper = (axial > 0) != flip;
            let off = if upper { Cyc::one() } else { Cyc::from_rational(&(rat(1, 1) - &rho * &rho)) };
            m[(u, t)] = off;
        }
        mats.push(m);
    }
    mats
}

fn symmetric_candidates(group: &ReflectionGroup, n: usize) -> Vec<Vec<Mat>> {
    // Elements realizing the adjacent transpositions.
    let mut transpositions = Vec::new();
    for i in 0..n - 1 {
        let mut p = Mat::identity(n);
        p[(i, i)] = Cyc::zero();
        p[(i + 1, i + 1)] = Cyc::zero();
        p[(i, i + 1)] = Cyc::one();
        p[(i + 1, i)] = Cyc::one();
        match group.elements().iter().position(|e| e.matrix == p) {
            Some(g) => transpositions.push(g),
            None => return Vec::new(),
        }
    }
    let mut out = Vec::new();
    for shape in partitions(n) {
        for flip in [false, true] {
            let gens: Vec<(usize, Mat)> = transpositions.iter().copied().zip(seminormal(&shape, flip)).collect();
            if let Some(images) = extend(group, &gens) {
                out.push(images);
                break;
            }
        }
    }
    out
}

/// Representations induced from characters of the diagonal subgroup.
fn induced_candidates(group: &ReflectionGroup, m: u32) -> Vec<Vec<Mat>> {
    let dim = group.dim();
    let diagonal: Vec<bool> = group
        .elements()
        .iter()
        .map(|e| (0..dim).all(|i| (0..dim).all(|j| i == j || e.matrix[(i, j)].is_zero())))
        .collect();
    // Left coset representatives t_i of D.
    let mut reps: Vec<usize> = Vec::new();
    let mut covered = vec![false; group.order()];
    for g in 0..group.order() {
        if covered[g] {
            continue;
        }
        reps.push(g);
        for d in (0..group.order()).filter(|&d| diagonal[d]) {
            covered[group.mul(g, d)] = true;
        }
    }
    let r = reps.len();
    let exps: Vec<Vec<u32>> = group
        .elements()
        .iter()
        .map(|e| (0..dim).map(|i| e.matrix[(i, i)].root_exponent(m).unwrap_or(0)).collect())
        .collect();
    let mut out = Vec::new();
    let total = (m as usize).pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let mut js = Vec::new();
        for _ in 0..dim {
            js.push((c % m as usize) as i64);
            c /= m as usize;
        }
        let psi = |d: usize| {
            let e: i64 = exps[d].iter().zip(&js).map(|(&a, &j)| a as i64 * j).sum();
            Cyc::root_of_unity(e, m)
        };
        let mats: Vec<Mat> = (0..group.order())
            .map(|g| {
                let mut mat = Mat::zeros(r, r);
                for (i, &ti) in reps.iter().enumerate() {
                    for (j, &tj) in reps.iter().enumerate() {
                        let x = group.mul(group.mul(group.inv(ti), g), tj);
                        if diagonal[x] {
                            mat[(i, j)] = psi(x);
                        }
                    }
                }
                mat
            })
            .collect();
        out.push(mats);
    }
    out
}

pub(super) fn build(group: &ReflectionGroup) -> Result<Vec<WRep>, GroupError> {
    let order = group.order();
    let linear = linear_characters(group);
    let det: Vec<Cyc> = group.elements().iter().map(|e| e.det.clone()).collect();
    let mut candidates: Vec<Vec<Mat>> = Vec::new();
    candidates.push(group.elements().iter().map(|e| e.matrix.clone()).collect());
    candidates.push(group.elements().iter().map(|e| e.matrix.conj()).collect());
    if let Some((m, _, n)) = group.spec().monomial_params() {
        if m == 1 && n >= 3 {
            candidates.extend(symmetric_candidates(group, n as usize));
        } else if n == 2 {
            candidates.extend(induced_candidates(group, m));
        }
    }
    let mut reps: Vec<(Vec<Cyc>, Vec<Mat>)> = Vec::new();
    let push = |chi: Vec<Cyc>, mats: Vec<Mat>, reps: &mut Vec<(Vec<Cyc>, Vec<Mat>)>| {
        if reps.iter().any(|(c, _)| *c == chi) {
            return;
        }
        if character_inner(&chi, &chi).is_one() {
            reps.push((chi, mats));
        }
    };
    for chi in &linear {
        let mats = chi.iter().map(|c| Mat::from_rows(vec![vec![c.clone()]])).collect();
        push(chi.clone(), mats, &mut reps);
    }
    for cand in &candidates {
        if cand[0].rows() == 1 {
            continue;
        }
        for lin in &linear {
            let mats: Vec<Mat> = cand.iter().zip(lin).map(|(m, c)| m.scale(c)).collect();
            let chi = mats.iter().map(Mat::trace).collect();
            push(chi, mats, &mut reps);
        }
    }
    let total: usize = reps.iter().map(|(_, m)| m[0].rows().pow(2)).sum();
    if total != order || reps.len() != group.classes().len() {
        return Err(GroupError::IrrepsUnavailable(group.spec().to_string()));
    }

    // Names and ordering: linear characters by power of det, then higher dims.
    let cyclic = group.dim() == 1;
    let det_power = |chi: &[Cyc]| -> Option<u32> {
        let conductor = group.conductor();
        (0..conductor).find(|&j| chi.iter().zip(&det).all(|(c, d)| *c == d.pow(j as i64).unwrap()))
    };
    let defining = group.defining_character();
    let dual = group.dual_character();
    let mut named: Vec<(usize, u32, usize, String, Vec<Mat>)> = Vec::new();
    for (idx, (chi, mats)) in reps.into_iter().enumerate() {
        let dim = mats[0].rows();
        let (rank, name) = if dim == 1 {
            match det_power(&chi) {
                Some(j) if cyclic => (j, format!("sigma{}", j)),
                Some(0) => (0, "triv".to_string()),
                Some(1) => (1, "det".to_string()),
                Some(j) => (j, format!("det{}", j)),
                None => (u32::MAX, format!("lin{}", idx)),
            }
        } else if chi == defining {
            (0, "refl".to_string())
        } else if chi == dual {
            (1, "refl*".to_string())
        } else {
            (u32::MAX, format!("rho{}_{}", dim, idx))
        };
        named.push((dim, rank, idx, name, mats));
    }
    named.sort_by_key(|a| (a.0, a.1, a.2));
    let reps: Vec<WRep> = named.into_iter().map(|(_, _, _, name, mats)| WRep::from_matrices(name, mats)).collect();
    Ok(reps)
}

impl ReflectionGroup {
    /// Multiplicities of each irreducible in a W-stable span of vectors of
    /// polynomials (each element of `space` has one entry per component;
    /// W acts on entries by `f ↦ f(w⁻¹x)` and on components by `component_action`).
    pub fn isotype_decompose(
        &self,
        space: &[Vec<MultiPoly>],
        component_action: Option<&[Mat]>,
    ) -> Result<Vec<(String, usize)>, GroupError> {
        use crate::linalg::Echelon;
        use crate::polyring::Monomial;
        use std::collections::BTreeMap;
        let reps = self.irreps()?;
        if space.is_empty() {
            return Ok(reps.iter().map(|r| (r.name.clone(), 0)).collect());
        }
        let comps = space[0].len();
        let mut monos: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        let act = |g: usize, v: &[MultiPoly]| -> Vec<MultiPoly> {
            let moved: Vec<MultiPoly> = v.iter().map(|f| self.act_poly(g, f, 0)).collect();
            match component_action {
                None => moved,
                Some(mats) => (0..comps)
                    .map(|i| {
                        let mut acc = MultiPoly::zero(self.dim());
                        for (j, f) in moved.iter().enumerate() {
                            let c = &mats[g][(i, j)];
                            if !c.is_zero() {
                                acc = acc.add(&f.scale(c));
                            }
                        }
                        acc
                    })
                    .collect(),
            }
        };
        let mut images: Vec<Vec<Vec<MultiPoly>>> = Vec::new();
        for g in 0..self.order() {
            images.push(space.iter().map(|v| act(g, v)).collect());
        }
        for vs in images.iter().flatten().chain(std::iter::once(space).flatten()) {
            for (c, f) in vs.iter().enumerate() {
                for m in f.terms().keys() {
                    let len = monos.len();
                    monos.entry((c, m.clone())).or_insert(len);
                }
            }
        }
        let width = monos.len();
        let to_vec = |v: &[MultiPoly]| {
            let mut out = vec![Cyc::zero(); width];
            for (c, f) in v.iter().enumerate() {
                for (m, a) in f.terms() {
                    out[monos[&(c, m.clone())]] = a.clone();
                }
            }
            out
        };
        let mut ech = Echelon::new(width);
        for v in space {
            ech.insert(&to_vec(v));
        }
        let mut chi = Vec::with_capacity(self.order());
        for g in 0..self.order() {
            let mut tr = Cyc::zero();
            for (r, row) in ech.rows().iter().enumerate() {
                let v = from_vec(row, &monos, comps, self.dim());
                let img = act(g, &v);
                let coords = ech.coordinates(&to_vec(&img)).ok_or(GroupError::NotStable)?;
                tr += &coords[r];
            }
            chi.push(tr);
        }
        let mut out = Vec::new();
        for r in reps {
            let m = character_inner(&chi, &r.character);
            let m = m.to_i64().ok_or(GroupError::NotStable)?;
            out.push((r.name.clone(), m as usize));
        }
        Ok(out)
    }
}

fn from_vec(
    row: &[Cyc],
    monos: &std::collections::BTreeMap<(usize, crate::polyring::Monomial), usize>,
    comps: usize,
    nvars: usize,
) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(nvars); comps];
    for ((c, m), &i) in monos {
        if !row[i].is_zero() {
            out[*c].add_term(m.clone(), row[i].clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    fn orthonormal(spec: &str) {
        let g = ReflectionGroup::cached(&GroupSpec::parse(spec).unwrap()).unwrap();
        let reps = g.irreps().unwrap();
        let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
        assert_eq!(total, g.order(), "{}", spec);
        for a in reps {
            for b in reps {
                let ip = character_inner(&a.character, &b.character);
                assert_eq!(ip.is_one(), a.name == b.name, "{} {} {}", spec, a.name, b.name);
                if a.name != b.name {
                    assert!(ip.is_zero());
                }
            }
        }
    }

    #[test]
    fn orthogonality_on_families() {
        for s in ["cyclic:2", "cyclic:3", "cyclic:4", "dihedral:3:3", "dihedral:4:4", "dihedral:4:1", "G:2:1:2", "G:3:1:2", "G:3:3:2", "symmetric:3", "symmetric:4"] {
            orthonormal(s);
        }
    }

    #[test]
    fn cyclic_names() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let names: Vec<&str> = g.irreps().unwrap().iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["sigma0", "sigma1", "sigma2"]);
    }

    #[test]
    fn decompositions() {
        let g = ReflectionGroup::cached(&GroupSpec::parse("dihedral:3:3").unwrap()).unwrap();
        let x = MultiPoly::var(0, 2);
        let y = MultiPoly::var(1, 2);
        let dec = g.isotype_decompose(&[vec![x.clone()], vec![y]], None).unwrap();
        // Linear forms span V*.
        assert!(dec.iter().any(|(n, m)| n == "refl*" && *m == 1) || dec.iter().any(|(n, m)| n == "refl" && *m == 1));
        let one = g.isotype_decompose(&[vec![MultiPoly::one(2)]], None).unwrap();
        assert_eq!(one.iter().find(|(n, _)| n == "triv").unwrap().1, 1);
        assert!(g.isotype_decompose(&[vec![x]], None).is_err());

        let z3 = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let dec = z3.isotype_decompose(&[vec![MultiPoly::var(0, 1)]], None).unwrap();
        assert_eq!(dec.iter().find(|(_, m)| *m == 1).unwrap().0, "sigma2");
    }
}

//! Finite complex reflection groups: element enumeration, the reflection
//! arrangement with its orbits and stabilizer idempotents, relative
//! invariants and the W-action on polynomials.
//!
//! Convention: `(w·f)(x) = f(w⁻¹x)`. The dual representation on V* is
//! realized by complex-conjugate matrices.

mod irreps;
mod multiplicity;

pub use irreps::{character_inner, WRep};
pub use multiplicity::{Multiplicity, MultiplicityError};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::exactnum::{lcm_u32, Cyc};
use crate::linalg::{Echelon, Mat};
use crate::polyring::{Arrangement, LocalizedPoly, Monomial, MultiPoly};
use crate::tseries;

static NEXT_GROUP_ID: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

pub const DEFAULT_ORDER_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order {order} exceeds the cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
    #[error("generators do not define a unitary reflection group: {0}")]
    NotReflectionGroup(String),
    #[error("irreducible representations are not available for {0}")]
    IrrepsUnavailable(String),
    #[error("no irreducible representation named {0}")]
    UnknownRep(String),
    #[error("span is not W-stable")]
    NotStable,
}

/// Which built-in family (or explicit generators) a group comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral { m: u32, p: u32 },
    Symmetric(u32),
    Imprimitive { m: u32, p: u32, n: u32 },
    Explicit { generators: Vec<Mat> },
}

impl GroupSpec {
    /// Parses `cyclic:3`, `dihedral:3:3`, `symmetric:3`, `G:3:1:2`.
    pub fn parse(s: &str) -> Result<GroupSpec, GroupError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let nums: Result<Vec<u32>, _> = parts[1..].iter().map(|p| p.trim().parse::<u32>()).collect();
        let nums = nums.map_err(|_| GroupError::InvalidParameters(s.to_string()))?;
        let spec = match (parts[0].to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("cyclic", [n]) => GroupSpec::Cyclic(*n),
            ("dihedral", [m, p]) => GroupSpec::Dihedral { m: *m, p: *p },
            ("dihedral", [m]) => GroupSpec::Dihedral { m: *m, p: *m },
            ("symmetric", [n]) => GroupSpec::Symmetric(*n),
            ("g", [m, p, n]) => GroupSpec::Imprimitive { m: *m, p: *p, n: *n },
            _ => return Err(GroupError::InvalidParameters(s.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `{"family": "G", "m": 3, "p": 3, "N": 2}` or
    /// `{"generators": [[[cyc, …], …], …]}`.
    pub fn from_json(v: &Value) -> Result<GroupSpec, GroupError> {
        let bad = || GroupError::InvalidParameters(v.to_string());
        if let Some(gens) = v.get("generators") {
            let mut mats = Vec::new();
            for g in gens.as_array().ok_or_else(bad)? {
                let rows: Option<Vec<Vec<Cyc>>> = g
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|r| r.as_array().and_then(|r| r.iter().map(Cyc::from_json).collect()))
                    .collect();
                let rows = rows.ok_or_else(bad)?;
                if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(bad());
                }
                mats.push(Mat::from_rows(rows));
            }
            if mats.is_empty() {
                return Err(bad());
            }
            return Ok(GroupSpec::Explicit { generators: mats });
        }
        let family = v.get("family").and_then(Value::as_str).ok_or_else(bad)?;
        let num = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as u32);
        let spec = match family.to_ascii_lowercase().as_str() {
            "cyclic" => GroupSpec::Cyclic(num("n").ok_or_else(bad)?),
            "dihedral" => {
                let m = num("m").ok_or_else(bad)?;
                GroupSpec::Dihedral { m, p: num("p").unwrap_or(m) }
            }
            "symmetric" => GroupSpec::Symmetric(num("N").or_else(|| num("n")).ok_or_else(bad)?),
            "g" => GroupSpec::Imprimitive {
                m: num("m").ok_or_else(bad)?,
                p: num("p").ok_or_else(bad)?,
                n: num("N").or_else(|| num("n")).ok_or_else(bad)?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let err = |s: &str| Err(GroupError::InvalidParameters(s.to_string()));
        match *self {
            GroupSpec::Cyclic(n) if n < 2 => err("cyclic order must be at least 2"),
            GroupSpec::Dihedral { m, p } if m < 2 || (p != 1 && p != m) => {
                err("dihedral requires m >= 2 and p in {1, m}")
            }
            GroupSpec::Symmetric(n) if n < 2 => err("symmetric degree must be at least 2"),
            GroupSpec::Imprimitive { m, p, n } if m < 1 || p < 1 || n < 1 || m % p != 0 || (m == 1 && n == 1) => {
                err("G(m,p,N) requires p | m and a nontrivial group")
            }
            _ => Ok(()),
        }
    }

    /// `(m, p, N)` for the monomial families.
    pub fn monomial_params(&self) -> Option<(u32, u32, u32)> {
        match *self {
            GroupSpec::Cyclic(n) => Some((n, 1, 1)),
            GroupSpec::Dihedral { m, p } => Some((m, p, 2)),
            GroupSpec::Symmetric(n) => Some((1, 1, n)),
            GroupSpec::Imprimitive { m, p, n } => Some((m, p, n)),
            GroupSpec::Explicit { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupSpec::Cyclic(n) => json!({"family": "cyclic", "n": n}),
            GroupSpec::Dihedral { m, p } => json!({"family": "dihedral", "m": m, "p": p}),
            GroupSpec::Symmetric(n) => json!({"family": "symmetric", "N": n}),
            GroupSpec::Imprimitive { m, p, n } => json!({"family": "G", "m": m, "p": p, "N": n}),
            GroupSpec::Explicit { generators } => json!({
                "generators": generators.iter().map(|g| {
                    g.to_rows().iter().map(|r| r.iter().map(Cyc::to_json).collect::<Vec<_>>()).collect::<Vec<_>>()
                }).collect::<Vec<_>>()
            }),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{}", n),
            GroupSpec::Dihedral { m, p } => write!(f, "dihedral:{}:{}", m, p),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{}", n),
            GroupSpec::Imprimitive { m, p, n } => write!(f, "G:{}:{}:{}", m, p, n),
            GroupSpec::Explicit { generators } => write!(f, "explicit({} generators)", generators.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupElement {
    pub index: usize,
    pub matrix: Mat,
    pub inverse_matrix: Mat,
    pub det: Cyc,
}

#[derive(Debug, Clone)]
pub struct Hyperplane {
    /// Coefficients of α_H (first nonzero coordinate is 1).
    pub alpha: Vec<Cyc>,
    /// The normal vector v_H with α_H = v_H* under the standard Hermitian form.
    pub v: Vec<Cyc>,
    pub n: usize,
    pub orbit: usize,
    /// `stabilizer[l]` is the element `s_H^l`, where `det s_H = exp(2πi/n)`.
    pub stabilizer: Vec<usize>,
}

impl Hyperplane {
    /// α_H as a linear polynomial in `nvars` variables starting at `offset`.
    pub fn alpha_poly(&self, offset: usize, nvars: usize) -> MultiPoly {
        MultiPoly::linear(&self.alpha, offset, nvars)
    }

    /// v_H as a linear function on V*.
    pub fn v_poly(&self, offset: usize, nvars: usize) -> MultiPoly {
        MultiPoly::linear(&self.v, offset, nvars)
    }

    /// α_H(ξ).
    pub fn alpha_at(&self, xi: &[Cyc]) -> Cyc {
        let mut s = Cyc::zero();
        for (a, b) in self.alpha.iter().zip(xi) {
            if !a.is_zero() && !b.is_zero() {
                s += &(a * b);
            }
        }
        s
    }
}

/// Scope of a relative invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantScope {
    All,
    Orbit(usize),
    DualAll,
    DualOrbit(usize),
}

pub struct ReflectionGroup {
    id: u64,
    spec: GroupSpec,
    dim: usize,
    conductor: u32,
    elements: Vec<GroupElement>,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    words: Vec<Vec<usize>>,
    hyperplanes: Vec<Hyperplane>,
    orbits: Vec<Vec<usize>>,
    arrangement: Arc<Arrangement>,
    /// `hyperplane_action[g][h] = (h', c)` with `g·α_h = c α_{h'}`.
    hyperplane_action: Vec<Vec<(usize, Cyc)>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    dual_source: bool,
    irreps: OnceLock<Result<Vec<WRep>, GroupError>>,
    degrees: OnceLock<Vec<u32>>,
    invariant_cache: Mutex<HashMap<u32, Vec<MultiPoly>>>,
}

impl fmt::Debug for ReflectionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReflectionGroup")
            .field("spec", &self.spec)
            .field("order", &self.order())
            .field("dim", &self.dim)
            .field("hyperplanes", &self.hyperplanes.len())
            .finish()
    }
}

fn matrix_key(m: &Mat, n: u32) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        for a in m.row(i) {
            s.push_str(&a.promote(lcm_u32(a.conductor(), n)).to_string());
            s.push(';');
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn factorial(n: u32) -> usize {
    (1..=n as usize).product()
}

impl ReflectionGroup {
    pub fn new(spec: GroupSpec) -> Result<ReflectionGroup, GroupError> {
        Self::with_cap(spec, DEFAULT_ORDER_CAP)
    }

    /// Shared instance per spec (construction is deterministic).
    pub fn cached(spec: &GroupSpec) -> Result<Arc<ReflectionGroup>, GroupError> {
        type Cache = Mutex<Vec<(GroupSpec, Arc<ReflectionGroup>)>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
        if let Some((_, g)) = cache.lock().unwrap().iter().find(|(s, _)| s == spec) {
            return Ok(g.clone());
        }
        let g = Arc::new(Self::new(spec.clone())?);
        cache.lock().unwrap().push((spec.clone(), g.clone()));
        Ok(g)
    }

    pub fn with_cap(spec: GroupSpec, cap: usize) -> Result<ReflectionGroup, GroupError> {
        spec.validate()?;
        let mats = match &spec {
            GroupSpec::Explicit { generators } => closure(generators, cap)?,
            _ => {
                let (m, p, n) = spec.monomial_params().unwrap();
                let order = (m as usize).pow(n) * factorial(n) / p as usize;
                if order > cap {
                    return Err(GroupError::CapExceeded { order, cap });
                }
                monomial_elements(m, p, n)
            }
        };
        Self::from_elements(spec, mats, false)
    }

    /// Builds all structure from a complete element list (identity first).
    fn from_elements(spec: GroupSpec, mats: Vec<Mat>, dual_source: bool) -> Result<ReflectionGroup, GroupError> {
        let dim = mats[0].rows();
        let order = mats.len();
        let mut conductor = 1u32;
        for m in &mats {
            for i in 0..dim {
                for a in m.row(i) {
                    conductor = lcm_u32(conductor, a.conductor());
                }
            }
        }
        let index: HashMap<String, usize> =
            mats.iter().enumerate().map(|(i, m)| (matrix_key(m, conductor), i)).collect();
        if index.len() != order {
            return Err(GroupError::NotReflectionGroup("duplicate elements".into()));
        }
        let lookup = |m: &Mat| index.get(&matrix_key(m, conductor)).copied();
        let mut mult = vec![vec![0usize; order]; order];
        for a in 0..order {
            for b in 0..order {
                let p = mats[a].mul(&mats[b]);
                mult[a][b] = lookup(&p).ok_or_else(|| GroupError::NotReflectionGroup("not closed".into()))?;
            }
        }
        let inverse: Vec<usize> = (0..order).map(|a| (0..order).find(|&b| mult[a][b] == 0).unwrap()).collect();
        // Exponent of the group and its conductor.
        let element_order =
            |a: usize| std::iter::successors(Some(a), |&cur| (cur != 0).then(|| mult[cur][a])).count() as u32;
        conductor = (0..order).map(element_order).fold(conductor, lcm_u32);
        let elements: Vec<GroupElement> = mats
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let inv = mats[inverse[i]].clone();
                if m.conj_transpose() != inv {
                    return Err(GroupError::NotReflectionGroup("element is not unitary".into()));
                }
                Ok(GroupElement { index: i, matrix: m.clone(), inverse_matrix: inv, det: m.det() })
            })
            .collect::<Result<_, _>>()?;

        // Greedy generating set and BFS words.
        let mut generators = Vec::new();
        let mut reached = vec![false; order];
        reached[0] = true;
        for g in 1..order {
            if reached[g] {
                continue;
            }
            generators.push(g);
            let mut frontier: Vec<usize> = (0..order).filter(|&x| reached[x]).collect();
            while let Some(x) = frontier.pop() {
                for &s in &generators {
                    let y = mult[x][s];
                    if !reached[y] {
                        reached[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        let mut words = vec![None; order];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &generators {
                let y = mult[x][s];
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(s);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let words: Vec<Vec<usize>> = words.into_iter().map(Option::unwrap).collect();

        // Reflections grouped by their fixed hyperplane.
        let ident = Mat::identity(dim);
        let mut by_alpha: Vec<(Vec<Cyc>, Vec<usize>)> = Vec::new();
        for (i, e) in elements.iter().enumerate().skip(1) {
            let mut d = e.matrix.clone();
            for r in 0..dim {
                d[(r, r)] = &d[(r, r)] - &ident[(r, r)];
            }
            if d.rank() != 1 {
                continue;
            }
            let col = (0..dim).find(|&c| (0..dim).any(|r| !d[(r, c)].is_zero())).unwrap();
            let root: Vec<Cyc> = (0..dim).map(|r| d[(r, col)].clone()).collect();
            let alpha = normalize_form(&root.iter().map(Cyc::conj).collect::<Vec<_>>());
            match by_alpha.iter_mut().find(|(a, _)| *a == alpha) {
                Some((_, v)) => v.push(i),
                None => by_alpha.push((alpha, vec![i])),
            }
        }
        let reflection_count: usize = by_alpha.iter().map(|(_, v)| v.len()).sum();
        let mut hyperplanes = Vec::new();
        for (alpha, refl) in by_alpha {
            let n = refl.len() + 1;
            let gen_det = Cyc::root_of_unity(1, n as u32);
            let s = *refl
                .iter()
                .find(|&&r| elements[r].det == gen_det)
                .ok_or_else(|| GroupError::NotReflectionGroup("stabilizer is not cyclic".into()))?;
            let mut stabilizer = vec![0usize];
            for l in 1..n {
                stabilizer.push(mult[stabilizer[l - 1]][s]);
            }
            let v: Vec<Cyc> = alpha.iter().map(Cyc::conj).collect();
            hyperplanes.push(Hyperplane { alpha, v, n, orbit: 0, stabilizer });
        }
        let forms: Vec<MultiPoly> = hyperplanes.iter().map(|h| h.alpha_poly(0, dim)).collect();
        let arrangement = Arc::new(Arrangement::new(dim, forms));

        let mut hyperplane_action = Vec::with_capacity(order);
        for e in &elements {
            let mut row = Vec::with_capacity(hyperplanes.len());
            for h in &hyperplanes {
                // (g·α)(x) = α(g⁻¹x): coefficients (g⁻¹)ᵀ α.
                let coeffs: Vec<Cyc> = (0..dim)
                    .map(|j| {
                        let mut s = Cyc::zero();
                        for i in 0..dim {
                            let a = &e.inverse_matrix[(i, j)];
                            if !a.is_zero() && !h.alpha[i].is_zero() {
                                s += &(&h.alpha[i] * a);
                            }
                        }
                        s
                    })
                    .collect();
                let p = coeffs.iter().position(|c| !c.is_zero()).unwrap();
                let normalized = normalize_form(&coeffs);
                let target = hyperplanes
                    .iter()
                    .position(|k| k.alpha == normalized)
                    .ok_or_else(|| GroupError::NotReflectionGroup("arrangement not W-stable".into()))?;
                row.push((target, coeffs[p].clone()));
            }
            hyperplane_action.push(row);
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut orbit_of = vec![usize::MAX; hyperplanes.len()];
        for h in 0..hyperplanes.len() {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members: Vec<usize> =
                hyperplane_action.iter().map(|row| row[h].0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            members.sort();
            for &m in &members {
                orbit_of[m] = id;
            }
            orbits.push(members);
        }
        for (h, hp) in hyperplanes.iter_mut().enumerate() {
            hp.orbit = orbit_of[h];
        }
        let counted: usize = hyperplanes.iter().map(|h| h.n - 1).sum();
        assert_eq!(counted, reflection_count);

        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..order).map(|h| mult[mult[h][g]][inverse[h]]).collect();
            members.sort();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }

        Ok(ReflectionGroup {
            spec,
            dim,
            conductor,
            elements,
            mult,
            inverse,
            generators,
            words,
            hyperplanes,
            orbits,
            arrangement,
            hyperplane_action,
            classes,
            class_of,
            dual_source,
            irreps: OnceLock::new(),
            degrees: OnceLock::new(),
            invariant_cache: Mutex::new(HashMap::new()),
            id: NEXT_GROUP_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
        })
    }

    /// The same abstract group acting on V* (conjugate matrices), with the
    /// same element numbering, hyperplane numbering and orbit ids.
    pub fn dual(&self) -> Result<ReflectionGroup, GroupError> {
        let mats = self.elements.iter().map(|e| e.matrix.conj()).collect();
        let g = Self::from_elements(self.spec.clone(), mats, !self.dual_source)?;
        if let Some(Ok(reps)) = self.irreps.get() {
            let _ = g.irreps.set(Ok(reps.clone()));
        }
        Ok(g)
    }

    /// Process-unique identifier, usable as a cache key.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_dual(&self) -> bool {
        self.dual_source
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &GroupElement {
        &self.elements[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, h: usize) -> &Hyperplane {
        &self.hyperplanes[h]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// `n_C` for an orbit.
    pub fn orbit_n(&self, c: usize) -> usize {
        self.hyperplanes[self.orbits[c][0]].n
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        &self.arrangement
    }

    pub fn hyperplane_image(&self, g: usize, h: usize) -> &(usize, Cyc) {
        &self.hyperplane_action[g][h]
    }

    pub fn reflection_count(&self) -> usize {
        self.hyperplanes.iter().map(|h| h.n - 1).sum()
    }

    pub fn is_reflection(&self, g: usize) -> bool {
        g != 0 && self.hyperplanes.iter().any(|h| h.stabilizer.contains(&g))
    }

    /// `f ↦ w·f = f(w⁻¹x)` on the variables `offset..offset+dim`.
    pub fn act_poly(&self, g: usize, f: &MultiPoly, offset: usize) -> MultiPoly {
        if g == 0 {
            return f.clone();
        }
        f.substitute_linear(&self.elements[g].inverse_matrix, offset).expect("dimension")
    }

    /// W-action on localized polynomials whose denominators use this
    /// group's arrangement (possibly embedded at `offset`).
    pub fn act_localized(&self, g: usize, f: &LocalizedPoly, offset: usize) -> LocalizedPoly {
        if g == 0 {
            return f.clone();
        }
        let num = self.act_poly(g, f.numerator(), offset);
        f.map_denominator(num, &self.hyperplane_action[g])
    }

    /// `e_{H,i}(f) = (1/n_H) Σ_{w ∈ W_H} (det w)^{-i} w·f`.
    pub fn idempotent_apply(&self, h: usize, i: i64, f: &MultiPoly, offset: usize) -> MultiPoly {
        let hp = &self.hyperplanes[h];
        let n = hp.n as i64;
        let mut acc = MultiPoly::zero(f.nvars());
        for (l, &w) in hp.stabilizer.iter().enumerate() {
            // det(s_H^l) = ζ_n^l
            let c = Cyc::root_of_unity(-(i * l as i64), n as u32);
            acc = acc.add(&self.act_poly(w, f, offset).scale(&c));
        }
        acc.scale(&Cyc::from_rational(&crate::exactnum::rat(1, n)))
    }

    /// Coefficient of `w` in `e_{H,i}`, for `w = s_H^l`.
    pub fn idempotent_coeff(&self, h: usize, i: i64, l: usize) -> Cyc {
        let n = self.hyperplanes[h].n as i64;
        Cyc::root_of_unity(-(i * l as i64), n as u32).scale_rational(&crate::exactnum::rat(1, n))
    }

    /// δ, δ_C (products of α_H) or δ*, δ*_C (products of v_H as functions on V*).
    pub fn relative_invariant(&self, scope: InvariantScope) -> MultiPoly {
        let dim = self.dim;
        let (hs, dual): (Vec<usize>, bool) = match scope {
            InvariantScope::All => ((0..self.hyperplanes.len()).collect(), false),
            InvariantScope::Orbit(c) => (self.orbits[c].clone(), false),
            InvariantScope::DualAll => ((0..self.hyperplanes.len()).collect(), true),
            InvariantScope::DualOrbit(c) => (self.orbits[c].clone(), true),
        };
        let mut p = MultiPoly::one(dim);
        for h in hs {
            let f = if dual { self.hyperplanes[h].v_poly(0, dim) } else { self.hyperplanes[h].alpha_poly(0, dim) };
            p = p.mul(&f);
        }
        p
    }

    /// `det_C(w)`, defined by `w·δ_C = det_C(w)^{-1} δ_C`.
    pub fn det_orbit(&self, c: usize, g: usize) -> Cyc {
        let mut s = Cyc::one();
        for &h in &self.orbits[c] {
            s = &s * &self.hyperplane_action[g][h].1;
        }
        s.inv().expect("nonzero")
    }

    /// Character values of the action on V* (conjugate of the defining character).
    pub fn dual_character(&self) -> Vec<Cyc> {
        self.elements.iter().map(|e| e.matrix.trace().conj()).collect()
    }

    pub fn defining_character(&self) -> Vec<Cyc> {
        self.elements.iter().map(|e| e.matrix.trace()).collect()
    }

    /// Reynolds projection onto invariants: `(1/|W|) Σ_w w·f`.
    pub fn reynolds(&self, f: &MultiPoly, offset: usize) -> MultiPoly {
        let mut acc = MultiPoly::zero(f.nvars());
        for g in 0..self.order() {
            acc = acc.add(&self.act_poly(g, f, offset));
        }
        acc.scale(&Cyc::from_rational(&crate::exactnum::rat(1, self.order() as i64)))
    }

    pub fn is_invariant(&self, f: &MultiPoly, offset: usize) -> bool {
        self.generators.iter().all(|&g| self.act_poly(g, f, offset) == *f)
    }

    /// Basis of the degree-`d` invariants (echelon form over monomials).
    pub fn invariant_basis(&self, d: u32) -> Vec<MultiPoly> {
        if let Some(b) = self.invariant_cache.lock().unwrap().get(&d) {
            return b.clone();
        }
        let basis = self.compute_invariant_basis(d);
        self.invariant_cache.lock().unwrap().insert(d, basis.clone());
        basis
    }

    fn compute_invariant_basis(&self, d: u32) -> Vec<MultiPoly> {
        let monos = Monomial::all_of_degree(self.dim, d);
        let pos: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::new(monos.len());
        for m in &monos {
            let r = self.reynolds(&MultiPoly::monomial(m.clone(), Cyc::one()), 0);
            let mut v = vec![Cyc::zero(); monos.len()];
            for (mm, c) in r.terms() {
                v[pos[mm]] = c.clone();
            }
            ech.insert(&v);
        }
        ech.rows()
            .iter()
            .map(|row| {
                MultiPoly::from_terms(
                    self.dim,
                    row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (monos[i].clone(), c.clone())),
                )
            })
            .collect()
    }

    /// Molien series of the invariants, `(1/|W|) Σ_w 1/det(1 − t·w|_{V*})`,
    /// truncated to `len` coefficients, weighted by `weights[w]`.
    pub fn molien(&self, weights: &[Cyc], len: usize) -> tseries::Series {
        let mut acc = tseries::zeros(len);
        for (g, e) in self.elements.iter().enumerate() {
            if weights[g].is_zero() {
                continue;
            }
            let dual = e.matrix.conj();
            let charpoly = det_one_minus_t(&dual);
            let inv = tseries::inverse(&charpoly, len);
            acc = tseries::add(&acc, &tseries::scale(&inv, &weights[g]));
        }
        tseries::scale(&acc, &Cyc::from_rational(&crate::exactnum::rat(1, self.order() as i64)))
    }

    /// Degrees of the fundamental invariants, ascending.
    pub fn fundamental_degrees(&self) -> &[u32] {
        self.degrees.get_or_init(|| {
            let len = self.order() + 2;
            let ones = vec![Cyc::one(); self.order()];
            let mut s = self.molien(&ones, len);
            let mut degrees = Vec::new();
            while degrees.len() < self.dim {
                let e = (1..len).find(|&i| !s[i].is_zero()).expect("invariant ring is polynomial");
                degrees.push(e as u32);
                s = tseries::mul(&s, &tseries::denominator(&[e as u32]), len);
            }
            degrees
        })
    }

    /// Fundamental invariants: homogeneous invariants of the fundamental degrees,
    /// each outside the subalgebra generated by the lower ones.
    pub fn fundamental_invariants(&self) -> Vec<MultiPoly> {
        let mut gens: Vec<MultiPoly> = Vec::new();
        let degrees = self.fundamental_degrees().to_vec();
        let mut distinct = degrees.clone();
        distinct.dedup();
        for &d in &distinct {
            let need = degrees.iter().filter(|&&e| e == d).count();
            let monos = Monomial::all_of_degree(self.dim, d);
            let pos: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let to_vec = |p: &MultiPoly| {
                let mut v = vec![Cyc::zero(); monos.len()];
                for (m, c) in p.terms() {
                    v[pos[m]] = c.clone();
                }
                v
            };
            let mut ech = Echelon::new(monos.len());
            for p in products_of_degree(&gens, d, self.dim) {
                ech.insert(&to_vec(&p));
            }
            let mut added = 0;
            for b in self.invariant_basis(d) {
                if added == need {
                    break;
                }
                if ech.insert(&to_vec(&b)) {
                    gens.push(b);
                    added += 1;
                }
            }
        }
        gens
    }

    pub fn irreps(&self) -> Result<&[WRep], GroupError> {
        self.irreps
            .get_or_init(|| irreps::build(self))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    pub fn irrep_by_name(&self, name: &str) -> Result<&WRep, GroupError> {
        self.irreps()?
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| GroupError::UnknownRep(name.to_string()))
    }

    /// Summary for reports.
    pub fn info_json(&self) -> Value {
        let hyperplanes: Vec<Value> = self
            .hyperplanes
            .iter()
            .map(|h| {
                json!({
                    "alpha": h.alpha.iter().map(Cyc::to_json).collect::<Vec<_>>(),
                    "v": h.v.iter().map(Cyc::to_json).collect::<Vec<_>>(),
                    "n": h.n,
                    "orbit": h.orbit,
                    "stabilizer": h.stabilizer,
                })
            })
            .collect();
        let irreps = match self.irreps() {
            Ok(reps) => json!(reps.iter().map(|r| json!({"name": r.name, "dim": r.dim})).collect::<Vec<_>>()),
            Err(e) => json!({"unavailable": e.to_string()}),
        };
        json!({
            "spec": self.spec.to_json(),
            "order": self.order(),
            "dim": self.dim,
            "conductor": self.conductor,
            "reflections": self.reflection_count(),
            "hyperplanes": hyperplanes,
            "orbits": self.orbits,
            "orbitN": (0..self.orbits.len()).map(|c| self.orbit_n(c)).collect::<Vec<_>>(),
            "fundamentalDegrees": self.fundamental_degrees(),
            "alphaNormalization": "first nonzero coordinate of alpha_H is 1; v_H is its conjugate",
            "irreps": irreps,
        })
    }
}

/// All products of the given homogeneous polynomials with total degree `d`.
pub fn products_of_degree(gens: &[MultiPoly], d: u32, nvars: usize) -> Vec<MultiPoly> {
    let degs: Vec<u32> = gens.iter().map(|g| g.degree().unwrap_or(0)).collect();
    let mut out = Vec::new();
    fn rec(i: usize, left: u32, cur: MultiPoly, gens: &[MultiPoly], degs: &[u32], out: &mut Vec<MultiPoly>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        if i == gens.len() {
            return;
        }
        let mut p = cur;
        let mut used = 0;
        loop {
            rec(i + 1, left - used, p.clone(), gens, degs, out);
            if degs[i] == 0 || used + degs[i] > left {
                break;
            }
            used += degs[i];
            p = p.mul(&gens[i]);
        }
    }
    rec(0, d, MultiPoly::one(nvars), gens, &degs, &mut out);
    out
}

/// Exponent vectors of monomials in the fundamental invariants of total degree `d`.
pub fn invariant_monomials_of_degree(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, degrees: &[u32], out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * degrees[i] <= left {
            cur.push(e);
            rec(i + 1, left - e * degrees[i], cur, degrees, out);
            cur.pop();
            e += 1;
        }
    }
    rec(0, d, &mut Vec::new(), degrees, &mut out);
    out
}

fn normalize_form(coeffs: &[Cyc]) -> Vec<Cyc> {
    let p = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let inv = coeffs[p].inv().unwrap();
    coeffs.iter().map(|c| c * &inv).collect()
}

/// `det(1 − t·M)` as a polynomial in t.
fn det_one_minus_t(m: &Mat) -> tseries::Series {
    // Expand over permutations; dimensions are small.
    let n = m.rows();
    let mut acc = tseries::zeros(n + 1);
    for perm in permutations(n) {
        let mut sign = 1i64;
        for i in 0..n {
            for j in (i + 1)..n {
                if perm[i] > perm[j] {
                    sign = -sign;
                }
            }
        }
        let mut prod = tseries::monomial(0, n + 1);
        for i in 0..n {
            let j = perm[i];
            let mut entry = tseries::zeros(2);
            if i == j {
                entry[0] = Cyc::one();
            }
            entry[1] = -&m[(i, j)];
            prod = tseries::mul(&prod, &entry, n + 1);
        }
        acc = tseries::add(&acc, &tseries::scale(&prod, &Cyc::from_int(sign)));
    }
    acc
}

fn monomial_elements(m: u32, p: u32, n: u32) -> Vec<Mat> {
    let n = n as usize;
    let mut out = Vec::new();
    let roots: Vec<Cyc> = (0..m).map(|a| Cyc::root_of_unity(a as i64, m)).collect();
    let total = (m as usize).pow(n as u32);
    for perm in permutations(n) {
        for code in 0..total {
            let mut exps = vec![0u32; n];
            let mut c = code;
            for e in exps.iter_mut().rev() {
                *e = (c % m as usize) as u32;
                c /= m as usize;
            }
            if exps.iter().sum::<u32>() % p != 0 {
                continue;
            }
            let mut mat = Mat::zeros(n, n);
            for i in 0..n {
                mat[(perm[i], i)] = roots[exps[i] as usize].clone();
            }
            out.push(mat);
        }
    }
    out
}

fn closure(generators: &[Mat], cap: usize) -> Result<Vec<Mat>, GroupError> {
    let dim = generators[0].rows();
    if generators.iter().any(|g| g.rows() != dim || !g.is_square()) {
        return Err(GroupError::InvalidParameters("generator dimensions differ".into()));
    }
    let mut n = 1u32;
    for g in generators {
        for i in 0..dim {
            for a in g.row(i) {
                n = lcm_u32(n, a.conductor());
            }
        }
    }
    let mut elems = vec![Mat::identity(dim)];
    let mut seen: HashMap<String, usize> = HashMap::new();
    seen.insert(matrix_key(&elems[0], n), 0);
    let mut i = 0;
    while i < elems.len() {
        for g in generators {
            let p = elems[i].mul(g);
            let key = matrix_key(&p, n);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(elems.len());
                elems.push(p);
                if elems.len() > cap {
                    return Err(GroupError::CapExceeded { order: elems.len(), cap });
                }
            }
        }
        i += 1;
    }
    Ok(elems)
}

/// Per-orbit data keyed by orbit id, for reports.
pub fn orbit_map<T: Clone>(values: &[T]) -> BTreeMap<String, T> {
    values.iter().enumerate().map(|(i, v)| (i.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> Arc<ReflectionGroup> {
        ReflectionGroup::cached(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn cyclic_three() {
        let g = group("cyclic:3");
        assert_eq!(g.order(), 3);
        assert_eq!(g.hyperplanes().len(), 1);
        assert_eq!(g.hyperplane(0).n, 3);
        assert_eq!(g.relative_invariant(InvariantScope::All), MultiPoly::var(0, 1));
        assert_eq!(g.fundamental_degrees(), &[3]);
    }

    #[test]
    fn dihedral_three() {
        let g = group("dihedral:3:3");
        assert_eq!(g.order(), 6);
        assert_eq!(g.hyperplanes().len(), 3);
        assert_eq!(g.orbits().len(), 1);
        assert!(g.hyperplanes().iter().all(|h| h.n == 2));
        let delta = g.relative_invariant(InvariantScope::All);
        assert_eq!(delta.degree(), Some(3));
        for (i, e) in g.elements().iter().enumerate() {
            let w = g.act_poly(i, &delta, 0);
            assert_eq!(w, delta.scale(&e.det.inv().unwrap()));
        }
        assert_eq!(g.fundamental_degrees(), &[2, 3]);
    }

    #[test]
    fn hyperoctahedral_two() {
        let g = group("G:2:1:2");
        assert_eq!(g.order(), 8);
        assert_eq!(g.orbits().len(), 2);
        assert!(g.orbits().iter().all(|o| o.len() == 2));
        let coord = g
            .orbits()
            .iter()
            .position(|o| g.hyperplane(o[0]).alpha.iter().filter(|a| !a.is_zero()).count() == 1)
            .unwrap();
        let x = MultiPoly::var(0, 2);
        let y = MultiPoly::var(1, 2);
        assert_eq!(g.relative_invariant(InvariantScope::Orbit(coord)), x.mul(&y));
        assert_eq!(g.fundamental_degrees(), &[2, 4]);
    }

    #[test]
    fn idempotents() {
        let z2 = group("cyclic:2");
        let x = MultiPoly::var(0, 1);
        assert_eq!(z2.idempotent_apply(0, 1, &x.pow(3), 0), x.pow(3));
        assert!(z2.idempotent_apply(0, 1, &x.pow(2), 0).is_zero());
        let z3 = group("cyclic:3");
        assert!(z3.idempotent_apply(0, 2, &x.pow(2), 0).is_zero());
        assert_eq!(z3.idempotent_apply(0, 1, &x.pow(2), 0), x.pow(2));
    }

    #[test]
    fn cap_and_parse_errors() {
        assert!(matches!(
            ReflectionGroup::new(GroupSpec::Symmetric(6)),
            Err(GroupError::CapExceeded { order: 720, cap: 200 })
        ));
        assert!(GroupSpec::parse("dihedral:4:2").is_err());
        assert!(GroupSpec::parse("nonsense").is_err());
    }

    #[test]
    fn dual_preserves_numbering() {
        let g = group("cyclic:3");
        let d = g.dual().unwrap();
        assert_eq!(d.element(1).det, g.element(1).det.conj());
        assert_eq!(d.hyperplane(0).stabilizer[1], g.hyperplane(0).stabilizer[2]);
    }
}

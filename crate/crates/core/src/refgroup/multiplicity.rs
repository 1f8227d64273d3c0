//! Multiplicity functions: per hyperplane orbit C, a vector
//! `(k_{C,0}, …, k_{C,n_C−1})` of rationals with indices periodic mod `n_C`,
//! optionally paired with a twist `a_C`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::exactnum::{parse_rational, rat, rational_to_string, Rational};

use super::ReflectionGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiplicityError {
    #[error("expected {expected} orbit entries, got {got}")]
    OrbitCount { expected: usize, got: usize },
    #[error("orbit {orbit}: expected {expected} values (or {} without k_0), got {got}", expected - 1)]
    VectorLength { orbit: usize, expected: usize, got: usize },
    #[error("cannot parse multiplicity value {0:?}")]
    Parse(String),
    #[error("orbit {orbit}: k_{index} = {value} is not congruent to a/n = {a}/{n} mod Z")]
    Incompatible { orbit: usize, index: usize, value: String, a: i64, n: usize },
    #[error("fractional multiplicity requires a twist function a")]
    MissingTwist,
    #[error("multiplicity must be integral here")]
    NotIntegral,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    values: Vec<Vec<Rational>>,
    twist: Option<Vec<i64>>,
}

impl Multiplicity {
    pub fn new(values: Vec<Vec<Rational>>, twist: Option<Vec<i64>>) -> Multiplicity {
        Multiplicity { values, twist }
    }

    pub fn zero(group: &ReflectionGroup) -> Multiplicity {
        let values = (0..group.orbits().len()).map(|c| vec![Rational::zero(); group.orbit_n(c)]).collect();
        Multiplicity { values, twist: None }
    }

    /// Same value `k` at every nonzero index of every orbit.
    pub fn constant(group: &ReflectionGroup, k: Rational) -> Multiplicity {
        let values = (0..group.orbits().len())
            .map(|c| {
                let mut v = vec![k.clone(); group.orbit_n(c)];
                v[0] = Rational::zero();
                v
            })
            .collect();
        Multiplicity { values, twist: None }
    }

    /// Integer vectors per orbit, for tests and examples.
    pub fn from_ints(values: &[&[i64]]) -> Multiplicity {
        Multiplicity {
            values: values.iter().map(|v| v.iter().map(|&x| rat(x, 1)).collect()).collect(),
            twist: None,
        }
    }

    pub fn with_twist(mut self, twist: Option<Vec<i64>>) -> Multiplicity {
        self.twist = twist;
        self
    }

    /// Parses `0,1,1` or `1;0,2` (orbits separated by `;`). A vector of
    /// length `n_C − 1` omits `k_{C,0} = 0`; a single vector applies to
    /// every orbit it fits.
    pub fn parse(group: &ReflectionGroup, s: &str) -> Result<Multiplicity, MultiplicityError> {
        let parse_list = |t: &str| -> Result<Vec<Rational>, MultiplicityError> {
            t.split(',')
                .map(|x| parse_rational(x.trim()).ok_or_else(|| MultiplicityError::Parse(x.trim().to_string())))
                .collect()
        };
        let lists: Vec<Vec<Rational>> = s.split(';').map(parse_list).collect::<Result<_, _>>()?;
        let orbits = group.orbits().len();
        let lists = if lists.len() == 1 && orbits > 1 { vec![lists[0].clone(); orbits] } else { lists };
        Self::from_lists(group, lists, None)
    }

    fn from_lists(
        group: &ReflectionGroup,
        lists: Vec<Vec<Rational>>,
        twist: Option<Vec<i64>>,
    ) -> Result<Multiplicity, MultiplicityError> {
        let orbits = group.orbits().len();
        if lists.len() != orbits {
            return Err(MultiplicityError::OrbitCount { expected: orbits, got: lists.len() });
        }
        let mut values = Vec::with_capacity(orbits);
        for (c, list) in lists.into_iter().enumerate() {
            let n = group.orbit_n(c);
            let v = if list.len() == n {
                list
            } else if list.len() + 1 == n {
                std::iter::once(Rational::zero()).chain(list).collect()
            } else {
                return Err(MultiplicityError::VectorLength { orbit: c, expected: n, got: list.len() });
            };
            values.push(v);
        }
        if let Some(a) = &twist {
            if a.len() != orbits {
                return Err(MultiplicityError::OrbitCount { expected: orbits, got: a.len() });
            }
        }
        Ok(Multiplicity { values, twist })
    }

    /// Parses a twist list `1` or `1;0` (one integer per orbit).
    pub fn parse_twist(group: &ReflectionGroup, s: &str) -> Result<Vec<i64>, MultiplicityError> {
        let a: Vec<i64> = s
            .split([';', ','])
            .map(|x| x.trim().parse::<i64>().map_err(|_| MultiplicityError::Parse(x.to_string())))
            .collect::<Result<_, _>>()?;
        let orbits = group.orbits().len();
        match a.len() {
            1 => Ok(vec![a[0]; orbits]),
            l if l == orbits => Ok(a),
            l => Err(MultiplicityError::OrbitCount { expected: orbits, got: l }),
        }
    }

    /// `{"orbits": {"0": [0, 1, 1]}, "a": {"0": 0}}`; values may be
    /// numbers or `"p/q"` strings.
    pub fn from_json(group: &ReflectionGroup, v: &Value) -> Result<Multiplicity, MultiplicityError> {
        let bad = || MultiplicityError::Parse(v.to_string());
        let orbits = v.get("orbits").and_then(Value::as_object).ok_or_else(bad)?;
        let value = |x: &Value| -> Result<Rational, MultiplicityError> {
            match x {
                Value::Number(n) => n.as_i64().map(|i| rat(i, 1)).ok_or_else(bad),
                Value::String(s) => parse_rational(s).ok_or_else(|| MultiplicityError::Parse(s.clone())),
                _ => Err(bad()),
            }
        };
        let mut lists = Vec::new();
        for c in 0..group.orbits().len() {
            let list = orbits.get(&c.to_string()).and_then(Value::as_array).ok_or_else(bad)?;
            lists.push(list.iter().map(value).collect::<Result<Vec<_>, _>>()?);
        }
        let twist = v.get("a").and_then(Value::as_object).map(|a| (0..group.orbits().len())
                    .map(|c| a.get(&c.to_string()).and_then(Value::as_i64).unwrap_or(0))
                    .collect());
        Self::from_lists(group, lists, twist)
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn orbit_values(&self, c: usize) -> &[Rational] {
        &self.values[c]
    }

    pub fn twist(&self) -> Option<&[i64]> {
        self.twist.as_deref()
    }

    /// `a_C`, zero when no twist is attached.
    pub fn a(&self, c: usize) -> i64 {
        self.twist.as_ref().map_or(0, |a| a[c])
    }

    /// `k_{C,i}` with `i` taken mod `n_C`.
    pub fn k(&self, c: usize, i: i64) -> &Rational {
        let v = &self.values[c];
        &v[i.rem_euclid(v.len() as i64) as usize]
    }

    /// `k_{H,i}` for a hyperplane.
    pub fn k_hyperplane(&self, group: &ReflectionGroup, h: usize, i: i64) -> &Rational {
        self.k(group.hyperplane(h).orbit, i)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().flatten().all(|q| q.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().flatten().all(|q| !q.is_negative())
    }

    /// `n_C k_{C,i}` as an integer, when integral.
    pub fn scaled(&self, c: usize, i: i64) -> Option<i64> {
        let q = self.k(c, i) * Rational::from_integer((self.values[c].len() as i64).into());
        q.is_integer().then(|| i64::try_from(q.to_integer()).expect("small multiplicity"))
    }

    /// Checks `k_{C,i} ≡ a_C/n_C mod Z` for every orbit and index.
    pub fn check_compatible(&self) -> Result<(), MultiplicityError> {
        let twist = match &self.twist {
            Some(t) => t,
            None if self.is_integral() => return Ok(()),
            None => return Err(MultiplicityError::MissingTwist),
        };
        for (c, v) in self.values.iter().enumerate() {
            let n = v.len();
            for (i, q) in v.iter().enumerate() {
                if !(q - rat(twist[c], n as i64)).is_integer() {
                    return Err(MultiplicityError::Incompatible {
                        orbit: c,
                        index: i,
                        value: rational_to_string(q),
                        a: twist[c],
                        n,
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks the condition and that each `n_C k_{C,i}` is an integer, which
    /// membership tests need.
    pub fn check_usable(&self) -> Result<(), MultiplicityError> {
        self.check_compatible()?;
        for c in 0..self.values.len() {
            for i in 0..self.values[c].len() {
                if self.scaled(c, i as i64).is_none() {
                    return Err(MultiplicityError::NotIntegral);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Multiplicity) -> Multiplicity {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Multiplicity { values, twist: self.twist.clone() }
    }

    pub fn sub(&self, other: &Multiplicity) -> Multiplicity {
        self.add(&other.scale(&rat(-1, 1)))
    }

    pub fn scale(&self, q: &Rational) -> Multiplicity {
        let values = self.values.iter().map(|v| v.iter().map(|x| x * q).collect()).collect();
        Multiplicity { values, twist: self.twist.clone() }
    }

    /// The unit vector `ℓ_{C,j}` (index taken mod `n_C`).
    pub fn unit(group: &ReflectionGroup, c: usize, j: i64) -> Multiplicity {
        let mut m = Multiplicity::zero(group);
        let n = group.orbit_n(c) as i64;
        m.values[c][j.rem_euclid(n) as usize] = Rational::one();
        m
    }

    /// `k + ℓ_{C,j}`.
    pub fn plus_unit(&self, c: usize, j: i64) -> Multiplicity {
        let mut m = self.clone();
        let n = m.values[c].len() as i64;
        let slot = &mut m.values[c][j.rem_euclid(n) as usize];
        *slot = &*slot + Rational::one();
        m
    }

    /// The transformation g_C: `k'_{C,i} = k_{C,i−1} − 1/n_C + δ_{i,0}`,
    /// `a'_C = a_C − 1`, other orbits unchanged.
    pub fn g_transform(&self, c: usize) -> Multiplicity {
        let mut m = self.clone();
        let v = &self.values[c];
        let n = v.len();
        m.values[c] = (0..n)
            .map(|i| {
                let prev = &v[(i + n - 1) % n];
                let mut x = prev - rat(1, n as i64);
                if i == 0 {
                    x += Rational::one();
                }
                x
            })
            .collect();
        let mut twist = self.twist.clone().unwrap_or_else(|| vec![0; self.values.len()]);
        twist[c] -= 1;
        m.twist = Some(twist);
        m
    }

    /// Twist reduced to `0..n_C`.
    pub fn normalized_twist(&self) -> Multiplicity {
        let mut m = self.clone();
        if let Some(t) = &mut m.twist {
            for (c, a) in t.iter_mut().enumerate() {
                *a = a.mod_floor(&(self.values[c].len() as i64));
            }
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let orbits: serde_json::Map<String, Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(c, v)| (c.to_string(), json!(v.iter().map(rational_to_string).collect::<Vec<_>>())))
            .collect();
        let mut out = json!({ "orbits": orbits });
        if let Some(a) = &self.twist {
            let a: serde_json::Map<String, Value> =
                a.iter().enumerate().map(|(c, x)| (c.to_string(), json!(x))).collect();
            out["a"] = Value::Object(a);
        }
        out
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|v| v.iter().map(rational_to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join(";"))?;
        if let Some(a) = &self.twist {
            write!(f, " a={}", a.iter().map(i64::to_string).collect::<Vec<_>>().join(";"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup::GroupSpec;

    #[test]
    fn parse_forms() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let a = Multiplicity::parse(&g, "0,1,1").unwrap();
        let b = Multiplicity::parse(&g, "1,1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.scaled(0, 4), Some(3));
        assert!(Multiplicity::parse(&g, "1").is_err());
        let d = ReflectionGroup::cached(&GroupSpec::parse("G:2:1:2").unwrap()).unwrap();
        let k = Multiplicity::parse(&d, "1").unwrap();
        assert_eq!(k.values().len(), 2);
        let k = Multiplicity::parse(&d, "1;2").unwrap();
        assert_eq!(k.k(1, 1), &rat(2, 1));
    }

    #[test]
    fn g_transform_has_order_n() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(3)).unwrap();
        let k = Multiplicity::parse(&g, "1/3,4/3,1/3").unwrap().with_twist(Some(vec![1]));
        k.check_compatible().unwrap();
        let mut cur = k.clone();
        for _ in 0..3 {
            cur = cur.g_transform(0);
            cur.check_compatible().unwrap();
        }
        assert_eq!(cur.values(), k.values());
        assert_eq!(cur.normalized_twist().twist(), k.twist());
    }

    #[test]
    fn incompatibility_detected() {
        let g = ReflectionGroup::cached(&GroupSpec::Cyclic(2)).unwrap();
        let k = Multiplicity::parse(&g, "0,1/2").unwrap().with_twist(Some(vec![1]));
        assert!(matches!(k.check_compatible(), Err(MultiplicityError::Incompatible { index: 0, .. })));
        let k = Multiplicity::parse(&g, "0,1/2").unwrap();
        assert_eq!(k.check_compatible(), Err(MultiplicityError::MissingTwist));
    }
}

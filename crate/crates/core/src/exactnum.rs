//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyc`] is an element of Q(ζ_N) stored in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}` modulo the N-th cyclotomic polynomial, with a single
//! positive common denominator. Values of different conductors are promoted
//! to the lcm of their conductors before any binary operation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Parses `"3"`, `"-2/5"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut result = n as usize;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p as usize;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m as usize;
    }
    result
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Per-conductor data: the cyclotomic polynomial and the power-basis
/// coordinates of every ζ^e, 0 ≤ e < N.
#[derive(Debug)]
struct Field {
    phi: usize,
    /// `powers[e]` = coordinates of ζ^e in the power basis.
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both monic integer polynomials, low-to-high coefficients.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut p = num;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let pd = cyclotomic_poly(d, cache);
            p = poly_div_exact(&p, &pd);
        }
    }
    cache.insert(n, p.clone());
    p
}

fn field(n: u32) -> Arc<Field> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    static POLYS: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = fields.lock().unwrap().get(&n) {
        return f.clone();
    }
    let poly = {
        let mut polys = POLYS.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
        cyclotomic_poly(n, &mut polys)
    };
    let phi = poly.len() - 1;
    let mut powers: Vec<Vec<i64>> = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by ζ: shift, then reduce the overflow coefficient.
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
        if top != 0 {
            for j in 0..phi {
                next[j] -= top * poly[j];
            }
        }
        cur = next;
    }
    let f = Arc::new(Field { phi, powers });
    fields.lock().unwrap().insert(n, f.clone());
    f
}

/// An element of the cyclotomic field Q(ζ_N), in canonical form.
#[derive(Clone, Debug)]
pub struct Cyc {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc { n: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Cyc { n: 1, num: vec![BigInt::from(v)], den: BigInt::one() }
    }

    pub fn from_rational(q: &Rational) -> Self {
        Cyc { n: 1, num: vec![q.numer().clone()], den: q.denom().clone() }
    }

    /// ζ_N^j.
    pub fn root_of_unity(j: i64, n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let f = field(n);
        let e = j.rem_euclid(n as i64) as usize;
        let num = f.powers[e].iter().map(|&c| BigInt::from(c)).collect();
        Cyc { n, num, den: BigInt::one() }.normalized()
    }

    /// Builds `Σ coeffs[j] ζ_N^j`; `coeffs` may be longer than φ(N).
    pub fn from_power_coeffs(n: u32, coeffs: &[Rational]) -> Self {
        let mut acc = Cyc::zero().promote(n);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(&Cyc::root_of_unity(j as i64, n) * &Cyc::from_rational(c));
            }
        }
        acc
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Rational coordinates in the power basis of Q(ζ_N).
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|a| Rational::new(a.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|a| a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|a| a.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|a| a.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Integer value if this is a rational integer.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_rational() && self.den.is_one() {
            self.num[0].to_i64()
        } else {
            None
        }
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for a in self.num.iter_mut() {
                *a = -&*a;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return self;
        }
        if !self.den.is_one() {
            let mut g = self.den.clone();
            for a in &self.num {
                if g.is_one() {
                    break;
                }
                if !a.is_zero() {
                    g = g.gcd(a);
                }
            }
            if !g.is_one() {
                self.den = &self.den / &g;
                for a in self.num.iter_mut() {
                    *a = &*a / &g;
                }
            }
        }
        self
    }

    /// Reduces exponent-indexed integer coefficients (exponents taken mod N).
    fn from_exponent_vector(n: u32, v: Vec<BigInt>, den: BigInt) -> Self {
        let f = field(n);
        let mut num = vec![BigInt::zero(); f.phi];
        for (e, c) in v.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = e % n as usize;
            if e < f.phi {
                num[e] += c;
            } else {
                for (j, &p) in f.powers[e].iter().enumerate() {
                    if p != 0 {
                        num[j] += &c * p;
                    }
                }
            }
        }
        Cyc { n, num, den }.normalized()
    }

    /// Embeds into Q(ζ_m) for a multiple m of the conductor.
    pub fn promote(&self, m: u32) -> Self {
        if m == self.n {
            return self.clone();
        }
        if self.is_rational() {
            let mut num = vec![BigInt::zero(); field(m).phi];
            num[0] = self.num[0].clone();
            return Cyc { n: m, num, den: self.den.clone() };
        }
        assert!(m.is_multiple_of(self.n), "conductor {} does not divide {}", self.n, m);
        let step = (m / self.n) as usize;
        let mut v = vec![BigInt::zero(); m as usize];
        for (j, a) in self.num.iter().enumerate() {
            v[j * step] = a.clone();
        }
        Self::from_exponent_vector(m, v, self.den.clone())
    }

    fn unify(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        let m = lcm_u32(a.n, b.n);
        (a.promote(m), b.promote(m))
    }

    /// Field automorphism ζ ↦ ζ^j, gcd(j, N) = 1.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.n;
        let j = j.rem_euclid(n as i64) as usize;
        let mut v = vec![BigInt::zero(); n as usize];
        for (e, a) in self.num.iter().enumerate() {
            if !a.is_zero() {
                v[(e * j) % n as usize] += a;
            }
        }
        Self::from_exponent_vector(n, v, self.den.clone())
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Cyc::from_rational(&q.recip()).promote(self.n));
        }
        // Product of the other Galois conjugates, divided by the norm.
        let mut others = Cyc::one().promote(self.n);
        for j in 2..self.n as i64 {
            if j.gcd(&(self.n as i64)) == 1 {
                others = &others * &self.galois(j);
            }
        }
        let norm = (&others * self).to_rational().expect("norm is rational");
        Ok(&others * &Cyc::from_rational(&norm.recip()))
    }

    pub fn div(&self, other: &Cyc) -> Result<Self, ArithError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ArithError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::one().promote(self.n);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Cyc::zero().promote(self.n);
        }
        Cyc {
            n: self.n,
            num: self.num.iter().map(|a| a * q.numer()).collect(),
            den: &self.den * q.denom(),
        }
        .normalized()
    }

    /// Multiplicative order if this is a root of unity of order dividing N.
    pub fn root_order(&self) -> Option<u32> {
        let one = Cyc::one();
        let mut p = self.clone();
        for k in 1..=(2 * self.n.max(1)) {
            if p == one {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    /// Writes this value as ζ_N^e if it is an N-th root of unity.
    pub fn root_exponent(&self, n: u32) -> Option<u32> {
        (0..n).find(|&e| *self == Cyc::root_of_unity(e as i64, n))
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs()
            .iter()
            .map(|q| json!([bigint_json(q.numer()), bigint_json(q.denom())]))
            .collect();
        json!({"conductor": self.n, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let n = v.get("conductor")?.as_u64()? as u32;
        let coeffs = v.get("coeffs")?.as_array()?;
        let mut qs = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            let pair = c.as_array()?;
            let a = json_bigint(pair.first()?)?;
            let b = json_bigint(pair.get(1)?)?;
            if b.is_zero() {
                return None;
            }
            qs.push(Rational::new(a, b));
        }
        Some(Cyc::from_power_coeffs(n.max(1), &qs))
    }

    /// Floating-point approximation for display only.
    pub fn approx(&self) -> (f64, f64) {
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, a) in self.num.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
            let c = a.to_f64().unwrap_or(f64::NAN) / d;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

fn bigint_json(a: &BigInt) -> Value {
    match a.to_i64() {
        Some(v) => json!(v),
        None => json!(a.to_string()),
    }
}

fn json_bigint(v: &Value) -> Option<BigInt> {
    if let Some(i) = v.as_i64() {
        return Some(BigInt::from(i));
    }
    v.as_str()?.parse().ok()
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.den == other.den && self.num == other.num;
        }
        if self.is_rational() && other.is_rational() {
            return self.den == other.den && self.num[0] == other.num[0];
        }
        let (a, b) = Cyc::unify(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", rational_to_string(&self.to_rational().unwrap()));
        }
        let mut first = true;
        for (j, q) in self.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match j {
                0 => String::new(),
                1 => format!("z{}", self.n),
                _ => format!("z{}^{}", self.n, j),
            };
            if root.is_empty() {
                write!(f, "{}", rational_to_string(&a))?;
            } else if a.is_one() {
                write!(f, "{}", root)?;
            } else {
                write!(f, "{}*{}", rational_to_string(&a), root)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'a Cyc) -> Cyc {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.n != rhs.n {
            if rhs.is_rational() {
                let r = rhs.promote(self.n);
                return self + &r;
            }
            if self.is_rational() {
                let s = self.promote(rhs.n);
                return &s + rhs;
            }
            let (a, b) = Cyc::unify(self, rhs);
            return &a + &b;
        }
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return Cyc { n: self.n, num, den: self.den.clone() }.normalized();
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        Cyc { n: self.n, num, den: &self.den * &rhs.den }.normalized()
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'a Cyc) -> Cyc {
        if self.is_zero() || rhs.is_zero() {
            return Cyc::zero().promote(lcm_u32(self.n, rhs.n));
        }
        if rhs.is_rational() {
            let n = lcm_u32(self.n, rhs.n);
            let s = self.promote(n);
            let c = &rhs.num[0];
            return Cyc { n, num: s.num.iter().map(|a| a * c).collect(), den: &s.den * &rhs.den }
                .normalized();
        }
        if self.is_rational() {
            return rhs * self;
        }
        if self.n != rhs.n {
            let (a, b) = Cyc::unify(self, rhs);
            return &a * &b;
        }
        let phi = self.num.len();
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        Cyc::from_exponent_vector(self.n, conv, &self.den * &rhs.den)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { n: self.n, num: self.num.iter().map(|a| -a).collect(), den: self.den.clone() }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'a Cyc) -> Cyc {
        self + &(-rhs)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: Cyc) -> Cyc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: &'a Cyc) -> Cyc {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: &Cyc) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Cyc> for Cyc {
    fn mul_assign(&mut self, rhs: &Cyc) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Cyc {
    fn from(v: i64) -> Self {
        Cyc::from_int(v)
    }
}

impl From<&Rational> for Cyc {
    fn from(q: &Rational) -> Self {
        Cyc::from_rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(j: i64, n: u32) -> Cyc {
        Cyc::root_of_unity(j, n)
    }

    #[test]
    fn roots_of_unity() {
        assert!(z(0, 5).is_one());
        assert_eq!(z(2, 4), Cyc::from_int(-1));
        assert_eq!(&z(1, 3) + &z(2, 3), Cyc::from_int(-1));
        assert_eq!(z(3, 12).root_order(), Some(4));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(1, 3).conj(), z(2, 3));
        let q = Cyc::from_rational(&rat(2, 3));
        assert_eq!(q.conj(), q);
        assert_eq!(z(1, 4).conj(), -z(1, 4));
    }

    #[test]
    fn field_ops() {
        assert!((&z(1, 3) * &z(2, 3)).is_one());
        let a = &Cyc::one() + &z(1, 4);
        let expected = (&Cyc::one() - &z(1, 4)).scale_rational(&rat(1, 2));
        assert_eq!(a.inv().unwrap(), expected);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(&z(1, 6) + &z(1, 6).conj(), Cyc::one());
        assert_eq!(Cyc::zero().inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn conductor_promotion() {
        // ζ_3 = ζ_6^2 and ζ_4 · ζ_3 lands in Q(ζ_12).
        assert_eq!(z(1, 3), z(2, 6));
        let p = &z(1, 4) * &z(1, 3);
        assert_eq!(p, z(7, 12));
    }

    #[test]
    fn json_round_trip() {
        let a = &z(1, 5).scale_rational(&rat(-3, 7)) + &Cyc::from_rational(&rat(1, 2));
        let v = a.to_json();
        assert_eq!(Cyc::from_json(&v).unwrap(), a);
        assert_eq!(Cyc::from_int(-1).to_json(), json!({"conductor": 1, "coeffs": [[-1, 1]]}));
    }

    #[test]
    fn display() {
        assert_eq!(Cyc::from_rational(&rat(-1, 2)).to_string(), "-1/2");
        assert_eq!((&Cyc::one() - &z(1, 4).scale_rational(&rat(3, 2))).to_string(), "1 - 3/2*z4");
    }

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(8), 4);
        assert_eq!(totient(12), 4);
        assert_eq!(parse_rational("-2/4"), Some(rat(-1, 2)));
    }
}

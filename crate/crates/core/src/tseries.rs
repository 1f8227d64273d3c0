//! Univariate polynomials and truncated power series in `t`, stored as dense
//! coefficient vectors (index = power of `t`).

use crate::exactnum::Cyc;

pub type Series = Vec<Cyc>;

pub fn zeros(len: usize) -> Series {
    vec![Cyc::zero(); len]
}

pub fn monomial(power: usize, len: usize) -> Series {
    let mut s = zeros(len);
    if power < len {
        s[power] = Cyc::one();
    }
    s
}

pub fn add(a: &[Cyc], b: &[Cyc]) -> Series {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Cyc::zero(),
        })
        .collect()
}

pub fn scale(a: &[Cyc], c: &Cyc) -> Series {
    a.iter().map(|x| x * c).collect()
}

/// Product truncated to `len` coefficients.
pub fn mul(a: &[Cyc], b: &[Cyc], len: usize) -> Series {
    let mut out = zeros(len);
    for (i, x) in a.iter().enumerate() {
        if i >= len || x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// Multiplicative inverse truncated to `len` coefficients; `a[0]` must be nonzero.
pub fn inverse(a: &[Cyc], len: usize) -> Series {
    let inv0 = a[0].inv().expect("constant term must be invertible");
    let mut out = zeros(len);
    if len == 0 {
        return out;
    }
    out[0] = inv0.clone();
    for n in 1..len {
        let mut s = Cyc::zero();
        for k in 1..=n.min(a.len() - 1) {
            if !a[k].is_zero() && !out[n - k].is_zero() {
                s += &(&a[k] * &out[n - k]);
            }
        }
        out[n] = -(&s * &inv0);
    }
    out
}

/// Multiplies by `t^shift`, keeping `len` coefficients.
pub fn shift(a: &[Cyc], shift: usize, len: usize) -> Series {
    let mut out = zeros(len);
    for (i, x) in a.iter().enumerate() {
        if i + shift < len {
            out[i + shift] = x.clone();
        }
    }
    out
}

/// `Π (1 - t^{d})` over the given degrees.
pub fn denominator(degrees: &[u32]) -> Series {
    let total: usize = degrees.iter().map(|&d| d as usize).sum();
    let mut p = monomial(0, total + 1);
    for &d in degrees {
        let mut f = zeros(d as usize + 1);
        f[0] = Cyc::one();
        f[d as usize] = Cyc::from_int(-1);
        p = mul(&p, &f, total + 1);
    }
    p
}

/// Drops trailing zeros.
pub fn trim(mut a: Series) -> Series {
    while a.last().is_some_and(Cyc::is_zero) {
        a.pop();
    }
    a
}

/// Integer coefficients, if all coefficients are rational integers.
pub fn to_integers(a: &[Cyc]) -> Option<Vec<i64>> {
    a.iter().map(Cyc::to_i64).collect()
}

pub fn from_integers(a: &[i64]) -> Series {
    a.iter().map(|&v| Cyc::from_int(v)).collect()
}

/// Human-readable polynomial in `t`.
pub fn poly_to_string(a: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let body = match (i, c.abs()) {
            (0, v) => v.to_string(),
            (1, 1) => "t".to_string(),
            (1, v) => format!("{}t", v),
            (_, 1) => format!("t^{}", i),
            (_, v) => format!("{}t^{}", v, i),
        };
        if parts.is_empty() {
            parts.push(if c < 0 { format!("-{}", body) } else { body });
        } else {
            parts.push(format!("{} {}", if c < 0 { "-" } else { "+" }, body));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let d = denominator(&[3]);
        let inv = inverse(&d, 10);
        assert_eq!(to_integers(&inv).unwrap(), vec![1, 0, 0, 1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(poly_to_string(&[1, 0, 0, 0, 1, 1]), "1 + t^4 + t^5");
        assert_eq!(poly_to_string(&[0, -1, 2]), "-t + 2t^2");
    }
}

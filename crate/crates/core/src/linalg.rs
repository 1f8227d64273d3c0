//! Dense matrices over [`Cyc`] with exact Gaussian elimination.

use std::fmt;

use crate::exactnum::Cyc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Cyc>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Cyc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cyc::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Cyc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Cyc>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(Cyc::conj).collect() }
    }

    pub fn conj_transpose(&self) -> Mat {
        self.transpose().conj()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyc]) -> Vec<Cyc> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyc::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Cyc {
        let mut t = Cyc::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let a = &self[(i, j)];
                    if i == j {
                        a.is_one()
                    } else {
                        a.is_zero()
                    }
                })
            })
    }

    /// Every row has exactly one nonzero entry.
    pub fn is_monomial(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).iter().filter(|a| !a.is_zero()).count() == 1)
    }

    pub fn det(&self) -> Cyc {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Cyc::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Cyc::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in (c + 1)..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(r, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Cyc::one();
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form using pivots among the first `limit` columns.
    /// Returns the pivot columns; zero rows are moved to the bottom.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = &self[(r, j)] * &inv;
                }
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let t = &f * &self[(r, j)];
                    self[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place(self.cols);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column,
    /// with a 1 in that free column.
    pub fn nullspace(&self) -> Vec<Vec<Cyc>> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(&r, &pivots, self.cols)
    }
}

fn nullspace_from_rref(r: &Mat, pivots: &[usize], cols: usize) -> Vec<Vec<Cyc>> {
    let mut is_pivot = vec![None; cols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![Cyc::zero(); cols];
        v[free] = Cyc::one();
        for (i, &p) in pivots.iter().enumerate() {
            let a = &r[(i, free)];
            if !a.is_zero() {
                v[p] = -a;
            }
        }
        basis.push(v);
    }
    basis
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Cyc;
    fn index(&self, (i, j): (usize, usize)) -> &Cyc {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cyc {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An incrementally built subspace of `Cyc^dim`, kept in reduced echelon form.
///
/// Rows are sparse-ish vectors; each stored row has a pivot with coefficient 1
/// and every other stored row vanishes in that pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Cyc>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Cyc>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Cyc]) -> Vec<Cyc> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    let t = &f * a;
                    v[j] -= &t;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Cyc]) -> bool {
        self.reduce(v).iter().all(Cyc::is_zero)
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Cyc]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for a in r.iter_mut() {
            if !a.is_zero() {
                *a = &*a * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (j, a) in r.iter().enumerate() {
                if !a.is_zero() {
                    let t = &f * a;
                    row[j] -= &t;
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Coordinates of `v` with respect to the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Cyc]) -> Option<Vec<Cyc>> {
        let coords: Vec<Cyc> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Cyc::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    recon[j] += &(c * a);
                }
            }
        }
        (recon == v).then_some(coords)
    }

    pub fn same_span(&self, other: &Echelon) -> bool {
        self.dim == other.dim && self.pivots == other.pivots && self.rows == other.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| Cyc::from_int(v)).collect()).collect())
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), Cyc::from_int(1));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Cyc::is_zero));
    }

    #[test]
    fn echelon_span() {
        let mut e = Echelon::new(3);
        let v = |a: i64, b: i64, c: i64| vec![Cyc::from_int(a), Cyc::from_int(b), Cyc::from_int(c)];
        assert!(e.insert(&v(1, 2, 3)));
        assert!(e.insert(&v(0, 1, 1)));
        assert!(!e.insert(&v(1, 3, 4)));
        assert_eq!(e.rank(), 2);
        let c = e.coordinates(&v(2, 5, 7)).unwrap();
        assert_eq!(c.len(), 2);
        let mut f = Echelon::new(3);
        f.insert(&v(1, 3, 4));
        f.insert(&v(1, 2, 3));
        assert!(e.same_span(&f));
    }
}

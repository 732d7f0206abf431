//! Dense linear algebra over a prime field.
//!
//! Every Hom, Ext, kernel and pullback in the crate bottoms out here. Row
//! reduction always picks the leftmost nonzero column and the first row that
//! has a nonzero entry in it, so echelon forms (and everything derived from
//! them) are canonical for a given input.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: u32,
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Iterates over all vectors of `F_p^len` in lexicographic order, last
/// coordinate fastest.
pub struct VectorIter {
    p: u32,
    current: Option<Vec<u32>>,
}

impl VectorIter {
    pub fn new(p: u32, len: usize) -> Self {
        VectorIter {
            p,
            current: Some(vec![0; len]),
        }
    }
}

impl Iterator for VectorIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.p {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// `p^d`, saturating.
pub fn space_size(p: u32, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(p as u128);
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Result of [`Mat::cokernel_data`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    /// `q` with `q * m = 0`, surjective onto `F_p^dim`.
    pub proj: Mat,
    /// Columns are the standard vectors spanning the chosen complement of the
    /// column space; `proj * section = I`.
    pub section: Mat,
    pub dim: usize,
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Mat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from raw row-major entries, reducing them mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let data = entries.into_iter().map(|e| e % p).collect();
        Mat {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|e| e % p));
        }
        Mat {
            p,
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Mat::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % p;
            }
        }
        m
    }

    pub fn column_vector(p: u32, v: &[u32]) -> Self {
        Mat::from_columns(p, v.len(), &[v.to_vec()])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> Field {
        Field { p: self.p }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "dimension mismatch in product {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let p = self.p as u64;
        let mut out = Mat::zeros(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o = ((*o as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (k, &x) in v.iter().enumerate() {
                    acc += self.data[i * self.cols + k] as u64 * x as u64;
                }
                (acc % p) as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "dimension mismatch in sum");
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat { data, ..*self }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "dimension mismatch in difference");
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Mat { data, ..*self }
    }

    pub fn scale(&self, s: u32) -> Mat {
        let f = self.field();
        let data = self.data.iter().map(|&a| f.mul(a, s % self.p)).collect();
        Mat { data, ..*self }
    }

    pub fn neg(&self) -> Mat {
        let f = self.field();
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Mat { data, ..*self }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let mut out = Mat::zeros(self.p, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * out.cols + c] = self.get(r, c);
            }
            for c in 0..rhs.cols {
                out.data[r * out.cols + self.cols + c] = rhs.get(r, c);
            }
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Mat {
            p: self.p,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Mat::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let cols: Vec<Vec<u32>> = idx.iter().map(|&c| self.column(c)).collect();
        Mat::from_columns(self.p, self.rows, &cols)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in 0..m.cols {
                let v = m.get(row, c);
                m.data[row * m.cols + c] = f.mul(v, inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field();
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis packed as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Mat {
        Mat::from_columns(self.p, self.cols, &self.kernel_basis())
    }

    /// One solution of `self * x = b` plus a basis of the solution space of
    /// the homogeneous system, or `None` when `b` is not in the image.
    pub fn solve_all(&self, b: &[u32]) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let aug = self.hstack(&Mat::column_vector(self.p, b));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some((x, self.kernel_basis()))
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        self.solve_all(b).map(|(x, _)| x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve_matrix");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.p, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[pc * rhs.cols + j] = r.get(i, self.cols + j);
            }
        }
        Some(x)
    }

    /// Projection onto a pivot-determined complement of the column space.
    ///
    /// The complement is spanned by the standard vectors at the coordinates
    /// that are not pivots of the echelonized column space.
    pub fn cokernel_data(&self) -> Cokernel {
        let f = self.field();
        let (r, pivots) = self.transpose().rref();
        let mut is_pivot = vec![false; self.rows];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.rows).filter(|&i| !is_pivot[i]).collect();
        // q(x) = free coordinates of x - sum_j x[pivot_j] * w_j
        let mut proj = Mat::zeros(self.p, free.len(), self.rows);
        for (k, &fc) in free.iter().enumerate() {
            proj.data[k * self.rows + fc] = 1;
            for (j, &pc) in pivots.iter().enumerate() {
                let w = r.get(j, fc);
                if w != 0 {
                    let cur = proj.get(k, pc);
                    proj.data[k * self.rows + pc] = f.sub(cur, w);
                }
            }
        }
        let mut section = Mat::zeros(self.p, self.rows, free.len());
        for (k, &fc) in free.iter().enumerate() {
            section.data[fc * free.len() + k] = 1;
        }
        Cokernel {
            dim: free.len(),
            proj,
            section,
        }
    }

    /// Columns forming a basis of the column space (pivot columns of `self`).
    pub fn column_space(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        self.solve_matrix(&Mat::identity(self.p, self.rows))
    }

    pub fn pow(&self, mut e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(rows: &[Vec<u32>]) -> Mat {
        Mat::from_rows(2, rows)
    }

    #[test]
    fn field_rejects_composites() {
        assert!(Field::new(2).is_ok());
        assert!(Field::new(97).is_ok());
        assert!(matches!(Field::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(Field::new(12), Err(Error::NotPrime(12))));
    }

    #[test]
    fn field_inverse() {
        let f = Field::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::identity(2, 2).rank(), 2);
        assert_eq!(Mat::zeros(2, 3, 4).rank(), 0);
        assert_eq!(f2(&[vec![1, 1], vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Mat::identity(3, 3).kernel_basis().is_empty());
        let k = Mat::zeros(2, 2, 3).kernel_basis();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(f2(&[vec![1, 1]]).kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let (x, k) = Mat::identity(5, 3).solve_all(&[4, 0, 2]).unwrap();
        assert_eq!(x, vec![4, 0, 2]);
        assert!(k.is_empty());
        assert!(Mat::zeros(2, 2, 2).solve_all(&[1, 0]).is_none());
        let (x, k) = f2(&[vec![1, 1]]).solve_all(&[1]).unwrap();
        assert_eq!(x, vec![1, 0]);
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(Mat::identity(2, 3).cokernel_data().dim, 0);
        let z = Mat::zeros(3, 2, 4).cokernel_data();
        assert_eq!(z.dim, 2);
        assert!(z.proj.is_identity());
        let c = f2(&[vec![1], vec![1]]).cokernel_data();
        assert_eq!(c.dim, 1);
        assert!(c.proj.mul(&f2(&[vec![1], vec![1]])).is_zero());
        assert!(c.proj.mul(&c.section).is_identity());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(f2(&[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn vector_iter_counts() {
        assert_eq!(VectorIter::new(3, 2).count(), 9);
        assert_eq!(VectorIter::new(2, 0).count(), 1);
        let all: Vec<_> = VectorIter::new(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}

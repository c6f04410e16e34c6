//! Dense row-major matrices over a [`Field`].

use std::fmt;

use super::field::{Elem, Field};
use super::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Result of [`Mat::solve`]: a particular solution (absent when the system is
/// inconsistent) and a basis of the homogeneous solution space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Option<Vec<Elem>>,
    pub homogeneous: Vec<Vec<Elem>>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for k in 0..n {
            m.data[k * n + k] = 1;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        debug_assert!(data.iter().all(|&x| (x as u32) < field.order()));
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from integer rows, reducing into the prime subfield.
    pub fn from_rows<R: AsRef<[i64]>>(field: &Field, rows: &[R]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| field.from_int(x)));
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, nrows: usize, columns: &[Vec<Elem>]) -> Mat {
        let mut m = Mat::zeros(field, nrows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), nrows);
            for (r, &x) in v.iter().enumerate() {
                m.data[r * m.cols + c] = x;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as Elem))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn neg(&self) -> Mat {
        let f = &self.field;
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn scaled(&self, c: Elem) -> Mat {
        let mut m = self.clone();
        self.field.scale(&mut m.data, c);
        m
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: Elem, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add_scaled");
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        if other.cols == 0 {
            return out;
        }
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a != 0 {
                    f.axpy(dst, a, &other.data[k * other.cols..(k + 1) * other.cols]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows).map(|r| f.dot(self.row(r), v)).collect()
    }

    pub fn pow(&self, mut n: u64) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(&self.field, self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Elem {
        (0..self.rows.min(self.cols)).fold(0, |acc, k| self.field.add(acc, self.get(k, k)))
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        Mat::from_fn(&self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        Mat::from_fn(&self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let f = &self.field;
        Mat::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(self.get(r / other.rows, c / other.cols), other.get(r % other.rows, c % other.cols))
        })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&k| self.data[k * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale(&mut self.data[r * cols..(r + 1) * cols], inv);
            let pivot_row: Vec<Elem> = self.data[r * cols..(r + 1) * cols].to_vec();
            for k in 0..rows {
                if k == r {
                    continue;
                }
                let a = self.data[k * cols + c];
                if a != 0 {
                    f.axpy(&mut self.data[k * cols..(k + 1) * cols], f.neg(a), &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in order of the free columns.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(&r, &pivots)
    }

    pub fn solve(&self, b: &[Elem]) -> Solution {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let aug = self.hstack(&Mat::from_columns(&self.field, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        let homogeneous = {
            let (rc, pc) = self.rref();
            nullspace_from_rref(&rc, &pc)
        };
        if pivots.last() == Some(&self.cols) {
            return Solution { particular: None, homogeneous };
        }
        let mut x = vec![0; self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(k, self.cols);
        }
        Solution { particular: Some(x), homogeneous }
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(&self.field, n, n, |i, j| r.get(i, n + j)))
    }

    /// Minimal polynomial of a square matrix.
    ///
    /// Built as the lcm of local minimal polynomials of standard basis vectors,
    /// skipping vectors that already lie in the invariant subspace spanned so far.
    pub fn min_poly(&self) -> Poly {
        assert!(self.is_square(), "min_poly needs a square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut acc = Poly::one(f);
        let mut span = Echelon::new(f, n);
        for start in 0..n {
            let mut e = vec![0; n];
            e[start] = 1;
            if span.contains(&e) {
                continue;
            }
            let local = local_min_poly(self, &e, &mut span);
            acc = acc.lcm(&local);
        }
        acc
    }

    /// Evaluates `poly(self)`.
    pub fn eval_poly(&self, poly: &Poly) -> Mat {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Mat::zeros(&self.field, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self);
            for k in 0..n {
                let v = self.field.add(acc.get(k, k), c);
                acc.set(k, k, v);
            }
        }
        acc
    }
}

fn nullspace_from_rref(r: &Mat, pivots: &[usize]) -> Vec<Vec<Elem>> {
    let f = r.field();
    let cols = r.cols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(k, free));
        }
        basis.push(v);
    }
    basis
}

/// Krylov sequence of `v` under `m`; returns the monic polynomial of least degree
/// annihilating `v`, and adds the Krylov vectors to `span`.
fn local_min_poly(m: &Mat, v: &[Elem], span: &mut Echelon) -> Poly {
    let f = m.field();
    let n = m.rows();
    // incremental echelon over the Krylov vectors, tracking combinations
    let mut basis: Vec<(Vec<Elem>, Vec<Elem>, usize)> = Vec::new();
    let mut cur = v.to_vec();
    for k in 0..=n {
        let mut vec = cur.clone();
        let mut combo = vec![0; n + 2];
        combo[k] = 1;
        for (bv, bc, piv) in &basis {
            let a = vec[*piv];
            if a != 0 {
                let na = f.neg(a);
                f.axpy(&mut vec, na, bv);
                f.axpy(&mut combo, na, bc);
            }
        }
        match vec.iter().position(|&x| x != 0) {
            None => {
                // combo expresses A^k v as a combination of lower powers
                combo.truncate(k + 1);
                return Poly::new(f, combo).monic();
            }
            Some(piv) => {
                let inv = f.inv(vec[piv]);
                f.scale(&mut vec, inv);
                f.scale(&mut combo, inv);
                span.insert(cur.clone());
                basis.push((vec, combo, piv));
            }
        }
        cur = m.mul_vec(&cur);
    }
    unreachable!("Krylov sequence must become dependent within n+1 steps")
}

/// Incrementally maintained row-echelon basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    n: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, n: usize) -> Echelon {
        Echelon { field: field.clone(), n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place; returns the first nonzero position left.
    pub fn reduce(&self, v: &mut [Elem]) -> Option<usize> {
        let f = &self.field;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let a = v[piv];
            if a != 0 {
                f.axpy(v, f.neg(a), row);
            }
        }
        v.iter().position(|&x| x != 0)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.n);
        let Some(piv) = self.reduce(&mut v) else {
            return false;
        };
        let f = self.field.clone();
        let inv = f.inv(v[piv]);
        f.scale(&mut v, inv);
        // keep earlier rows reduced at the new pivot
        for row in self.rows.iter_mut() {
            let a = row[piv];
            if a != 0 {
                f.axpy(row, f.neg(a), &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    /// Basis vectors sorted by pivot position (a reduced echelon basis).
    pub fn sorted_basis(&self) -> Vec<Vec<Elem>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&k| self.pivots[k]);
        idx.into_iter().map(|k| self.rows[k].clone()).collect()
    }

    /// Basis of `{x : <x, r> = 0 for every basis row r}`.
    pub fn annihilator(&self) -> Vec<Vec<Elem>> {
        let m = Mat::from_vec(&self.field, self.rows.len(), self.n, self.rows.concat());
        m.nullspace()
    }
}

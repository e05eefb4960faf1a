use std::fmt;

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub struct Uld<T> {
    pub u: Matrix<T>,
    pub lw: Matrix<T>,
    pub dg: Matrix<T>,
}

pub struct Bruhat<T> {
    pub nu: Matrix<T>,
    pub b: Matrix<T>,
}

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<T> = rows.into_iter().flatten().collect();
        Matrix::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The antidiagonal permutation matrix of the longest element.
    pub fn w0(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).plus(o.get(i, j)))
    }

    pub fn sub(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).minus(o.get(i, j)))
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|x| x.times(c))
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Half-open block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix<T> {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `self · w0`: reverse the column order.
    pub fn rev_cols(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, self.cols - 1 - j).clone())
    }

    /// `w0 · self`: reverse the row order.
    pub fn rev_rows(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(self.rows - 1 - i, j).clone())
    }

    pub fn is_unit_upper(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        *x == T::one()
                    } else if i > j {
                        x.is_zero()
                    } else {
                        true
                    }
                })
            })
    }

    pub fn is_unit_lower(&self) -> bool {
        self.transpose().is_unit_upper()
    }

    pub fn is_upper(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn invert(&self) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&r| a.get(r, c).is_unit()).ok_or(Error::SingularMatrix)?;
            if piv != c {
                a.swap_rows(piv, c);
                inv.swap_rows(piv, c);
            }
            let pinv = a.get(c, c).inverse().ok_or(Error::SingularMatrix)?;
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(r, c, &f);
                inv.axpy_row(r, c, &f);
            }
        }
        Ok(inv)
    }

    /// Inverse of a unit upper-triangular matrix by back substitution.
    pub fn invert_unit_upper(&self) -> Matrix<T> {
        debug_assert!(self.is_unit_upper());
        let n = self.rows;
        let mut inv = Matrix::identity(n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut acc = T::zero();
                for k in i + 1..=j {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.plus(&a.times(inv.get(k, j)));
                }
                inv.set(i, j, acc.negated());
            }
        }
        inv
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &T) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].times(c);
        }
    }

    /// row[r] -= f · row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &T) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let d = f.times(s);
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].minus(&d);
        }
    }

    /// Unique factorization `M = U · Lw · Dg` with `U` unit upper, `Lw` unit lower and
    /// `Dg` invertible diagonal. Exists iff every trailing principal minor is invertible.
    pub fn uld_factor(&self) -> Result<Uld<T>> {
        assert!(self.is_square(), "uld_factor needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut u = Matrix::identity(n);
        for k in (0..n).rev() {
            let pinv = a.get(k, k).inverse().ok_or(Error::SingularWindow(n - k))?;
            for i in 0..k {
                let c = a.get(i, k).times(&pinv);
                if c.is_zero() {
                    continue;
                }
                for j in 0..=k {
                    let s = a.get(k, j);
                    if s.is_zero() {
                        continue;
                    }
                    let d = c.times(s);
                    let idx = i * n + j;
                    a.data[idx] = a.data[idx].minus(&d);
                }
                u.set(i, k, c);
            }
        }
        let d: Vec<T> = (0..n).map(|i| a.get(i, i).clone()).collect();
        let dinv: Vec<T> = d.iter().map(|x| x.inverse().expect("pivot checked")).collect();
        let lw = Matrix::from_fn(n, n, |i, j| {
            if j > i {
                T::zero()
            } else if i == j {
                T::one()
            } else {
                a.get(i, j).times(&dinv[j])
            }
        });
        Ok(Uld { u, lw, dg: Matrix::diag(&d) })
    }

    /// Factor `M = Nu · w0 · B` with `Nu` unit upper and `B` invertible upper.
    pub fn bruhat_w0_factor(&self) -> Result<Bruhat<T>> {
        let f = self.rev_cols().uld_factor().map_err(|e| match e {
            Error::SingularWindow(k) => Error::NotInBigCell(k),
            other => other,
        })?;
        let lam = f.lw.mul(&f.dg);
        let b = lam.rev_rows().rev_cols();
        Ok(Bruhat { nu: f.u, b })
    }

    /// First `k` for which the bottom-left `k x k` corner is not invertible, if any.
    /// Runs the pivoted elimination, which is exact and agrees with the minor test.
    pub fn big_cell_failure_fast(&self) -> Option<usize> {
        match self.bruhat_w0_factor() {
            Ok(_) => None,
            Err(Error::NotInBigCell(k)) => Some(k),
            Err(_) => Some(1),
        }
    }
}

impl Matrix<Scalar> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| super::field::q(x)).collect()).collect())
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Scalar::zero();
            };
            if piv != c {
                a.swap_rows(piv, c);
                det = det.negated();
            }
            let p = a.get(c, c).clone();
            det = det.times(&p);
            let pinv = p.inverse().unwrap();
            for r in c + 1..n {
                let f = a.get(r, c).times(&pinv);
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(r, c, &f);
            }
        }
        det
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Scalar {
        self.select(rows, cols).det()
    }

    /// Bottom-left `k x k` corner minor.
    pub fn corner_minor(&self, k: usize) -> Scalar {
        let n = self.rows;
        let rows: Vec<usize> = (n - k..n).collect();
        let cols: Vec<usize> = (0..k).collect();
        self.minor(&rows, &cols)
    }

    /// First `k` whose bottom-left corner minor vanishes.
    pub fn big_cell_failure(&self) -> Option<usize> {
        (1..=self.rows).find(|&k| self.corner_minor(k).is_zero())
    }

    pub fn in_big_cell(&self) -> bool {
        self.big_cell_failure().is_none()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<Scalar>, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let pinv = a.get(r, c).inverse().unwrap();
            a.scale_row(r, &pinv);
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(i, r, &f);
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, free).negated();
            }
            out.push(v);
        }
        out
    }
}

//! Dense exact matrices over a [`Field`].

use std::fmt;

use super::rat::Rat;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Scalar operations needed by exact linear algebra.
///
/// Methods take a prototype (`zero_like`, `one_like`) because rational
/// functions carry their variable count.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// Structural size; pivots with smaller weight are preferred.
    fn weight(&self) -> u64;

    fn mat_mul(a: &QMatrix<Self>, b: &QMatrix<Self>) -> QMatrix<Self> {
        a.mul_generic(b)
    }

    fn mat_inverse(a: &QMatrix<Self>) -> Result<QMatrix<Self>> {
        a.inverse_generic()
    }
}

impl Field for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
    fn weight(&self) -> u64 {
        self.bit_size()
    }
    fn mat_mul(a: &QMatrix<Self>, b: &QMatrix<Self>) -> QMatrix<Self> {
        super::intmat::mul(a, b)
    }
    fn mat_inverse(a: &QMatrix<Self>) -> Result<QMatrix<Self>> {
        super::intmat::inverse(a)
    }
}

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.nvars())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn weight(&self) -> u64 {
        self.num_terms() as u64
    }
}

/// A dense `rows × cols` matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct QMatrix<T: Field> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> QMatrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count must equal rows × cols"
        );
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity_like(n: usize, proto: &T) -> Self {
        let mut m = Self::filled(n, n, proto.zero_like());
        for i in 0..n {
            m.data[i * n + i] = proto.one_like();
        }
        m
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    /// Position and value of the first nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &T)> {
        self.data
            .iter()
            .position(|x| !x.is_zero())
            .map(|k| (k / self.cols, k % self.cols, &self.data[k]))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(Field::negated)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        T::mat_mul(self, other)
    }

    /// Entry-by-entry product, used for fields without a faster kernel.
    pub fn mul_generic(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let proto = self
            .data
            .first()
            .or(other.data.first())
            .expect("empty matrix product");
        let zero = proto.zero_like();
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = &self.data[i * self.cols + k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.data[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.plus(&a.times(b));
                }
                out.push(acc);
            }
        }
        QMatrix {
            rows: self.rows,
            cols: other.cols,
            data: out,
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let zero = self.data[0].zero_like();
        let mut data = vec![zero; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i * self.cols + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        data[(i * other.rows + k) * cols + j * other.cols + l] =
                            a.times(&other.data[k * other.cols + l]);
                    }
                }
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        QMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        T::mat_inverse(self)
    }

    /// Gauss–Jordan inverse. Pivots are the lowest-weight nonzero entries
    /// of the current column.
    pub fn inverse_generic(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "cannot invert a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let proto = self.data[0].clone();
        let mut a = self.clone();
        let mut inv = Self::identity_like(n, &proto);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by_key(|&r| a.get(r, col).weight())
                .ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = a.get(col, col).inverse().ok_or(Error::Singular)?;
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                a.axpy_row(r, col, &factor);
                inv.axpy_row(r, col, &factor);
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Err(Error::Shape(
                "determinant of an empty matrix needs a prototype".into(),
            ));
        }
        let mut a = self.clone();
        let mut det = self.data[0].one_like();
        for col in 0..n {
            let Some(pivot) = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by_key(|&r| a.get(r, col).weight())
            else {
                return Ok(det.zero_like());
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = det.negated();
            }
            let p = a.get(col, col).clone();
            det = det.times(&p);
            let p_inv = p.inverse().expect("nonzero pivot");
            for r in col + 1..n {
                let factor = a.get(r, col).times(&p_inv);
                if factor.is_zero() {
                    continue;
                }
                a.axpy_row(r, col, &factor);
            }
        }
        Ok(det)
    }

    /// Determinant by the signed permutation sum.
    pub fn leibniz_determinant(&self) -> T {
        assert!(
            self.is_square() && self.rows > 0,
            "square nonempty matrix required"
        );
        let n = self.rows;
        let proto = &self.data[0];
        let mut acc = proto.zero_like();
        for (perm, sign) in crate::perm::Permutations::new(n) {
            let mut t = proto.one_like();
            for (i, &p) in perm.iter().enumerate() {
                t = t.times(self.get(i, p));
                if t.is_zero() {
                    break;
                }
            }
            if t.is_zero() {
                continue;
            }
            acc = if sign > 0 {
                acc.plus(&t)
            } else {
                acc.minus(&t)
            };
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &T) {
        for j in 0..self.cols {
            let k = r * self.cols + j;
            self.data[k] = self.data[k].times(c);
        }
    }

    /// row[r] -= factor * row[src]
    fn axpy_row(&mut self, r: usize, src: usize, factor: &T) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let k = r * self.cols + j;
            self.data[k] = self.data[k].minus(&factor.times(s));
        }
    }
}

impl QMatrix<Rat> {
    pub fn identity(n: usize) -> Self {
        Self::identity_like(n, &Rat::zero())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Rat::zero())
    }

    pub fn from_ints(rows: usize, cols: usize, v: &[i64]) -> Self {
        Self::from_vec(rows, cols, v.iter().map(|&x| Rat::from_int(x)).collect())
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            let inv = a.get(rank, col).recip().unwrap();
            for r in rank + 1..self.rows {
                let f = a.get(r, col) * &inv;
                if !f.is_zero() {
                    a.axpy_row(r, rank, &f);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<T: Field> fmt::Display for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Field> fmt::Debug for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact inverse of a square matrix; `Singular` if none exists.
pub fn mat_inverse<T: Field>(m: &QMatrix<T>) -> Result<QMatrix<T>> {
    m.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverse() {
        let i4 = QMatrix::identity(4);
        assert_eq!(mat_inverse(&i4).unwrap(), i4);
    }

    #[test]
    fn unipotent_inverse() {
        let m = QMatrix::from_ints(2, 2, &[1, 1, 0, 1]);
        assert_eq!(
            mat_inverse(&m).unwrap(),
            QMatrix::from_ints(2, 2, &[1, -1, 0, 1])
        );
    }

    #[test]
    fn singular_and_nonsquare() {
        let m = QMatrix::from_ints(2, 2, &[1, 2, 2, 4]);
        assert!(matches!(mat_inverse(&m), Err(Error::Singular)));
        let r = QMatrix::from_ints(1, 2, &[1, 2]);
        assert!(matches!(mat_inverse(&r), Err(Error::Shape(_))));
    }

    #[test]
    fn determinants_agree() {
        let m = QMatrix::from_ints(3, 3, &[2, -1, 0, 4, 3, 5, -2, 7, 1]);
        assert_eq!(m.determinant().unwrap(), m.leibniz_determinant());
        assert_eq!(m.leibniz_determinant(), Rat::from_int(-50));
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = QMatrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let b = QMatrix::from_ints(2, 2, &[0, 1, 1, 0]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(*k.get(0, 1), Rat::from_int(1));
        assert_eq!(*k.get(3, 2), Rat::from_int(4));
        assert_eq!(*k.get(2, 3), Rat::from_int(4));
    }

    #[test]
    fn ratfunc_matrix_inverse() {
        let x = RatFunc::var(1, 0);
        let one = RatFunc::one(1);
        let m = QMatrix::from_rows(vec![
            vec![x.clone(), one.clone()],
            vec![one.clone(), x.clone()],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity_like(2, &one));
    }

    #[test]
    fn rank_counts_independent_rows() {
        let m = QMatrix::from_ints(3, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        assert_eq!(m.rank(), 2);
    }
}

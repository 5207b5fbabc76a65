//! Dense matrices and row vectors over `F_{q^2}`.
//!
//! Vectors are rows; a matrix `A` acts on the right, `v ↦ v·A`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, Fq2};

pub type Vector = Vec<Fq2>;

pub fn zero_vector(field: FieldParams, len: usize) -> Vector {
    vec![field.zero(); len]
}

/// The `i`-th standard basis vector of length `len`.
pub fn unit_vector(field: FieldParams, len: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, len);
    v[i] = field.one();
    v
}

pub fn add(u: &[Fq2], v: &[Fq2]) -> Vector {
    u.iter().zip(v).map(|(a, b)| *a + *b).collect()
}

pub fn sub(u: &[Fq2], v: &[Fq2]) -> Vector {
    u.iter().zip(v).map(|(a, b)| *a - *b).collect()
}

pub fn scale(c: Fq2, v: &[Fq2]) -> Vector {
    v.iter().map(|a| c * *a).collect()
}

/// `Σ u_i v_i`, no conjugation.
pub fn dot(u: &[Fq2], v: &[Fq2]) -> Fq2 {
    let mut acc = u[0].field().zero();
    for (a, b) in u.iter().zip(v) {
        acc += *a * *b;
    }
    acc
}

pub fn frobenius(v: &[Fq2]) -> Vector {
    v.iter().map(|a| a.frobenius()).collect()
}

pub fn is_zero(v: &[Fq2]) -> bool {
    v.iter().all(|a| a.is_zero())
}

/// Scales `v` so that its first nonzero entry is 1.
pub fn normalize(v: &[Fq2]) -> Option<Vector> {
    let lead = v.iter().find(|a| !a.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(scale(inv, v))
}

/// `Σ c_i·rows_i`.
pub fn combine(coeffs: &[Fq2], rows: &[Vector]) -> Vector {
    let field = coeffs[0].field();
    let mut acc = zero_vector(field, rows[0].len());
    for (c, r) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (a, b) in acc.iter_mut().zip(r) {
            *a += *c * *b;
        }
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq2>,
    field: FieldParams,
}

impl Matrix {
    pub fn zeros(field: FieldParams, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![field.zero(); rows * cols], field }
    }

    pub fn identity(field: FieldParams, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(c: Fq2, n: usize) -> Self {
        let mut m = Self::zeros(c.field(), n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is used when `rows` is empty.
    pub fn from_rows(field: FieldParams, rows: &[Vector], cols: usize) -> Result<Self> {
        let cols = rows.first().map_or(cols, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Self { rows: rows.len(), cols, data, field })
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fq2 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq2) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq2] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(Fq2) -> Fq2) -> Self {
        Self { data: self.data.iter().map(|a| f(*a)).collect(), ..self.clone() }
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> Self {
        self.map(|a| a.frobenius())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scale(&self, c: Fq2) -> Self {
        self.map(|a| c * a)
    }

    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect();
        Self { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect();
        Self { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// `v·A`.
    pub fn apply_row(&self, v: &[Fq2]) -> Vector {
        assert_eq!(v.len(), self.rows);
        let mut out = zero_vector(self.field, self.cols);
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += *a * self.get(k, j);
            }
        }
        out
    }

    /// `A·vᵗ` as a vector.
    pub fn apply_col(&self, v: &[Fq2]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j) * inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - factor * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A·xᵗ = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vector(self.field, self.cols);
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Result<Fq2> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c);
            det *= pivot;
            let inv = pivot.inv()?;
            for i in c + 1..m.rows {
                let factor = m.get(i, c) * inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(inv)
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<Fq2> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j { c } else { self.field.zero() };
                if self.get(i, j) != expected {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: FieldParams, rows: &[&[(i64, i64)]]) -> Matrix {
        let rows: Vec<Vector> =
            rows.iter().map(|r| r.iter().map(|&(a, b)| k.elem(a, b)).collect()).collect();
        Matrix::from_rows(k, &rows, 0).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let k = FieldParams::new(5).unwrap();
        let a = m(k, &[&[(1, 1), (2, 0)], &[(0, 3), (4, 2)]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        let d = a.det().unwrap();
        assert_eq!(d, k.elem(1, 1) * k.elem(4, 2) - k.elem(2, 0) * k.elem(0, 3));
        let singular = m(k, &[&[(1, 1), (2, 0)], &[(2, 2), (4, 0)]]);
        assert!(singular.det().unwrap().is_zero());
        assert!(matches!(singular.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let k = FieldParams::new(3).unwrap();
        let a = m(k, &[&[(1, 0), (0, 1), (2, 2), (0, 0)], &[(0, 0), (1, 0), (1, 1), (2, 0)]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero(&a.apply_col(v)));
        }
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn row_action_matches_product() {
        let k = FieldParams::new(7).unwrap();
        let a = m(k, &[&[(1, 2), (3, 4)], &[(5, 6), (0, 1)]]);
        let v = vec![k.elem(2, 5), k.elem(6, 1)];
        let as_matrix = Matrix::from_rows(k, std::slice::from_ref(&v), 0).unwrap().mul(&a);
        assert_eq!(a.apply_row(&v), as_matrix.row(0).to_vec());
    }
}

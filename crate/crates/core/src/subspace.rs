//! Subspaces of `F_{q^2}^m` in canonical (reduced row echelon) form.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, Fq2};
use crate::linalg::{self, Matrix, Vector};

/// A subspace, stored by its reduced row echelon basis, so equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    field: FieldParams,
}

impl Subspace {
    pub fn zero(field: FieldParams, ambient: usize) -> Self {
        Self { ambient, basis: Vec::new(), field }
    }

    pub fn whole(field: FieldParams, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| linalg::unit_vector(field, ambient, i)).collect();
        Self { ambient, basis, field }
    }

    /// Span of arbitrary (possibly dependent) vectors of length `ambient`.
    pub fn span(field: FieldParams, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "expected vectors of length {ambient}"
            )));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(field, ambient));
        }
        let (r, pivots) = Matrix::from_rows(field, vectors, ambient)?.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Self { ambient, basis, field })
    }

    /// Span of a single nonzero vector.
    pub fn point(v: &[Fq2]) -> Result<Self> {
        if linalg::is_zero(v) {
            return Err(Error::NotAPoint);
        }
        Self::span(v[0].field(), v.len(), &[v.to_vec()])
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// The normalized spanning vector of a point.
    pub fn point_vector(&self) -> Result<&Vector> {
        if self.dim() != 1 {
            return Err(Error::NotAPoint);
        }
        Ok(&self.basis[0])
    }

    pub fn contains_vector(&self, v: &[Fq2]) -> bool {
        if linalg::is_zero(v) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(self.field, &rows, self.ambient).expect("equal lengths").rank()
            == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &rows).expect("same ambient")
    }

    /// Intersection via the kernel of `[A; -B]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        let (a, b) = (self.dim(), other.dim());
        // Columns of the system are the combined basis vectors; solve Σx_i a_i - Σy_j b_j = 0.
        let mut sys = Matrix::zeros(self.field, self.ambient, a + b);
        for (j, v) in self.basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                sys.set(i, j, *x);
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                sys.set(i, a + j, -*x);
            }
        }
        let vectors: Vec<Vector> = sys
            .nullspace()
            .into_iter()
            .map(|sol| linalg::combine(&sol[..a], &self.basis))
            .collect();
        Subspace::span(self.field, self.ambient, &vectors).expect("same ambient")
    }

    /// Coordinates of `v` in the canonical basis, if it lies in the subspace.
    pub fn coordinates(&self, v: &[Fq2]) -> Option<Vector> {
        if !self.contains_vector(v) {
            return None;
        }
        // In echelon form the coordinates are the entries at the pivot columns.
        Some(
            self.basis
                .iter()
                .map(|b| {
                    let p = b.iter().position(|x| !x.is_zero()).expect("nonzero row");
                    v[p]
                })
                .collect(),
        )
    }

    /// Number of points, `(Q^k - 1)/(Q - 1)` with `Q = q^2`.
    pub fn point_count(&self) -> u128 {
        let qq = self.field.size() as u128;
        (0..self.dim() as u32).map(|i| qq.pow(i)).sum()
    }

    /// All points, each as its normalized spanning vector.
    ///
    /// Points are listed by the position of the leading coefficient (with
    /// respect to the canonical basis), then by the remaining coefficients in
    /// lexicographic order. Since the basis is canonical, so is the order.
    pub fn points(&self) -> PointIter<'_> {
        PointIter { space: self, lead: 0, counter: 0 }
    }
}

pub struct PointIter<'a> {
    space: &'a Subspace,
    lead: usize,
    counter: u128,
}

impl Iterator for PointIter<'_> {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        let k = self.space.dim();
        let qq = self.space.field.size() as u128;
        loop {
            if self.lead >= k {
                return None;
            }
            let tail = (k - self.lead - 1) as u32;
            if self.counter >= qq.pow(tail) {
                self.lead += 1;
                self.counter = 0;
                continue;
            }
            let f = self.space.field;
            let mut coeffs = vec![f.zero(); k];
            coeffs[self.lead] = f.one();
            let mut c = self.counter;
            for i in (self.lead + 1..k).rev() {
                coeffs[i] = f.from_index((c % qq) as usize);
                c /= qq;
            }
            self.counter += 1;
            return Some(linalg::combine(&coeffs, &self.space.basis));
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        write!(f, "⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_ignores_basis_choice() {
        let k = FieldParams::new(3).unwrap();
        let u = vec![k.elem(1, 0), k.elem(0, 1), k.elem(2, 0)];
        let v = vec![k.elem(0, 0), k.elem(1, 1), k.elem(1, 0)];
        let a = Subspace::span(k, 3, &[u.clone(), v.clone()]).unwrap();
        let w = linalg::add(&linalg::scale(k.elem(2, 1), &u), &v);
        let b = Subspace::span(k, 3, &[w, v]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn point_enumeration_counts_and_membership() {
        let k = FieldParams::new(3).unwrap();
        let whole = Subspace::whole(k, 3);
        let pts: Vec<_> = whole.points().collect();
        assert_eq!(pts.len() as u128, whole.point_count());
        assert_eq!(pts.len(), 1 + 9 + 81);
        let set: std::collections::HashSet<_> =
            pts.iter().map(|p| Subspace::point(p).unwrap()).collect();
        assert_eq!(set.len(), pts.len());
    }

    #[test]
    fn dimension_formula_for_sum_and_intersection() {
        let k = FieldParams::new(5).unwrap();
        let e = |i| linalg::unit_vector(k, 4, i);
        let a = Subspace::span(k, 4, &[e(0), e(1)]).unwrap();
        let b = Subspace::span(k, 4, &[linalg::add(&e(1), &e(2)), e(3)]).unwrap();
        let c = Subspace::span(k, 4, &[e(1), e(2)]).unwrap();
        assert_eq!(a.sum(&b).dim() + a.intersect(&b).dim(), a.dim() + b.dim());
        assert_eq!(a.intersect(&c), Subspace::point(&e(1)).unwrap());
        assert!(a.sum(&c).contains(&a));
    }

    #[test]
    fn coordinates_reconstruct_vector() {
        let k = FieldParams::new(7).unwrap();
        let s = Subspace::span(
            k,
            3,
            &[vec![k.elem(1, 2), k.elem(3, 0), k.elem(0, 5)], vec![k.elem(0, 0), k.elem(2, 2), k.elem(1, 1)]],
        )
        .unwrap();
        for p in s.points().take(20) {
            let c = s.coordinates(&p).unwrap();
            assert_eq!(linalg::combine(&c, s.basis()), p);
        }
    }
}

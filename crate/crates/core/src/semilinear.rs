//! Semilinear maps `v ↦ τ(v)·A` and the forms they induce.

use crate::error::{Error, Result};
use crate::field::{Fq, Fq2};
use crate::linalg::{Matrix, Vector};
use crate::space::{Form, HermitianSpace, Twist};
use crate::subspace::Subspace;

/// A bijective `τ`-semilinear map with `τ ∈ {id, σ}`.
///
/// Row `i` of the matrix is the image of the `i`-th standard basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    mat: Matrix,
    tau: Twist,
}

impl SemilinearMap {
    pub fn new(mat: Matrix, tau: Twist) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch("map matrix must be square".into()));
        }
        if mat.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { mat, tau })
    }

    pub fn identity(space: &HermitianSpace) -> Self {
        Self { mat: Matrix::identity(space.field(), space.dim()), tau: Twist::Identity }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn tau(&self) -> Twist {
        self.tau
    }

    pub fn is_linear(&self) -> bool {
        self.tau == Twist::Identity
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, v: &[Fq2]) -> Vector {
        self.mat.apply_row(&self.tau.apply_vec(v))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SemilinearMap) -> SemilinearMap {
        let mat = self.tau.apply_matrix(&other.mat).mul(&self.mat);
        SemilinearMap { mat, tau: self.tau.compose(other.tau) }
    }

    pub fn square(&self) -> SemilinearMap {
        self.compose(self)
    }

    pub fn inverse(&self) -> SemilinearMap {
        let inv = self.mat.inverse().expect("maps are invertible by construction");
        SemilinearMap { mat: self.tau.apply_matrix(&inv), tau: self.tau }
    }

    /// `c·f`.
    pub fn scaled(&self, c: Fq2) -> Result<SemilinearMap> {
        if c.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(SemilinearMap { mat: self.mat.scale(c), tau: self.tau })
    }

    /// Conjugate `g ∘ self ∘ g⁻¹` by a linear map `g` given as a matrix.
    pub fn conjugate_by(&self, g: &Matrix) -> Result<SemilinearMap> {
        let g = SemilinearMap::new(g.clone(), Twist::Identity)?;
        Ok(g.compose(self).compose(&g.inverse()))
    }

    pub fn image(&self, u: &Subspace) -> Subspace {
        let rows: Vec<Vector> = u.basis().iter().map(|b| self.apply(b)).collect();
        Subspace::span(u.field(), u.ambient(), &rows).expect("same ambient")
    }

    /// The factor `a ∈ F_q` with `β(f(u), f(v)) = a·τ(β(u, v))`, read off the
    /// Gram identity `A·G·σ(A)ᵗ = a·τ(G)`.
    pub fn similitude_factor(&self, space: &HermitianSpace) -> Result<Fq> {
        let g = space.gram();
        let lhs = self.mat.mul(g).mul(&self.mat.frobenius().transpose());
        let rhs = self.tau.apply_matrix(g);
        let (i, j) = (0..rhs.nrows())
            .flat_map(|i| (0..rhs.ncols()).map(move |j| (i, j)))
            .find(|&(i, j)| !rhs.get(i, j).is_zero())
            .ok_or(Error::NotSimilitude)?;
        let a = lhs.get(i, j) * rhs.get(i, j).inv()?;
        if a.is_zero() || !a.is_base() || rhs.scale(a) != lhs {
            return Err(Error::NotSimilitude);
        }
        Ok(a.to_base().expect("checked base"))
    }

    /// `Some(λ)` when `f^2 = λ·id`.
    pub fn is_projective_involution(&self) -> Option<Fq2> {
        self.square().mat.as_scalar()
    }

    pub fn is_involution(&self) -> bool {
        self.square().mat.is_identity()
    }

    /// `β(u, f(v))` for any map, involutive or not.
    pub fn induced_form(&self, space: &HermitianSpace) -> Form {
        let gram = space.gram().mul(&self.mat.frobenius().transpose());
        Form { gram, twist: Twist::Frobenius.compose(self.tau) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// From a `σ`-semilinear map.
    Bilinear,
    /// From a linear map.
    Sesquilinear,
}

/// `β_φ(u, v) = β(u, φ(v))` for an involution `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedForm {
    pub form: Form,
    pub kind: FormKind,
}

impl InducedForm {
    pub fn gram(&self) -> &Matrix {
        &self.form.gram
    }

    pub fn eval(&self, u: &[Fq2], v: &[Fq2]) -> Fq2 {
        self.form.eval(u, v)
    }
}

pub fn beta_phi(space: &HermitianSpace, f: &SemilinearMap) -> Result<InducedForm> {
    if !f.is_involution() {
        return Err(Error::NotInvolution);
    }
    let kind = if f.is_linear() { FormKind::Sesquilinear } else { FormKind::Bilinear };
    Ok(InducedForm { form: f.induced_form(space), kind })
}

/// `Q_φ(v) = ½·β_φ(v, v)`.
pub fn q_phi(space: &HermitianSpace, f: &SemilinearMap, v: &[Fq2]) -> Result<Fq2> {
    let b = beta_phi(space, f)?;
    Ok(Fq2::from(space.field().half()) * b.eval(v, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;
    use crate::linalg;

    fn swap_map(space: &HermitianSpace, tau: Twist) -> SemilinearMap {
        let n = space.n();
        let mut rows = Vec::new();
        for i in 0..n {
            rows.push(space.f(i));
        }
        for i in 0..n {
            rows.push(space.e(i));
        }
        SemilinearMap::new(Matrix::from_rows(space.field(), &rows, 0).unwrap(), tau).unwrap()
    }

    #[test]
    fn semilinearity_and_composition() {
        let k = FieldParams::new(5).unwrap();
        let s = HermitianSpace::standard(1, k).unwrap();
        let a = Matrix::from_rows(k, &[vec![k.elem(1, 2), k.elem(0, 1)], vec![k.elem(3, 0), k.elem(2, 2)]], 0)
            .unwrap();
        let f = SemilinearMap::new(a.clone(), Twist::Frobenius).unwrap();
        let g = SemilinearMap::new(a.transpose(), Twist::Identity).unwrap();
        let v = vec![k.elem(2, 3), k.elem(1, 4)];
        let c = k.elem(3, 1);
        assert_eq!(f.apply(&linalg::scale(c, &v)), linalg::scale(c.frobenius(), &f.apply(&v)));
        assert_eq!(f.compose(&g).apply(&v), f.apply(&g.apply(&v)));
        assert_eq!(g.compose(&f).apply(&v), g.apply(&f.apply(&v)));
        assert_eq!(f.compose(&f.inverse()).matrix(), &Matrix::identity(k, 2));
        assert!(SemilinearMap::identity(&s).is_involution());
    }

    #[test]
    fn swap_is_isometry_and_involution() {
        let s = HermitianSpace::standard(2, FieldParams::new(3).unwrap()).unwrap();
        for tau in [Twist::Identity, Twist::Frobenius] {
            let f = swap_map(&s, tau);
            assert!(f.similitude_factor(&s).unwrap().value() == 1);
            assert!(f.is_projective_involution().unwrap().is_one());
            assert_eq!(f.apply(&s.e(0)), s.f(0));
        }
    }

    #[test]
    fn induced_form_gram_for_semilinear_swap() {
        let s = HermitianSpace::standard(1, FieldParams::new(3).unwrap()).unwrap();
        let f = swap_map(&s, Twist::Frobenius);
        let b = beta_phi(&s, &f).unwrap();
        assert_eq!(b.kind, FormKind::Bilinear);
        assert!(b.gram().is_identity());
        let v = linalg::add(&s.e(0), &s.f(0));
        assert_eq!(b.eval(&v, &v), s.beta(&v, &f.apply(&v)).unwrap());
    }

    #[test]
    fn non_involution_is_refused() {
        let k = FieldParams::new(3).unwrap();
        let s = HermitianSpace::standard(1, k).unwrap();
        let f = SemilinearMap::new(Matrix::scalar(k.omega(), 2), Twist::Identity).unwrap();
        assert!(matches!(beta_phi(&s, &f), Err(Error::NotInvolution)));
    }
}

//! The hermitian space `(V, β)` and general sesquilinear/bilinear forms on it.

use crate::error::{Error, Result};
use crate::field::{FieldParams, Fq2};
use crate::linalg::{self, Matrix, Vector};
use crate::subspace::Subspace;

/// Field automorphism applied to the second argument of a form, or by a semilinear map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    Identity,
    Frobenius,
}

impl Twist {
    pub fn apply(self, a: Fq2) -> Fq2 {
        match self {
            Twist::Identity => a,
            Twist::Frobenius => a.frobenius(),
        }
    }

    pub fn apply_vec(self, v: &[Fq2]) -> Vector {
        match self {
            Twist::Identity => v.to_vec(),
            Twist::Frobenius => linalg::frobenius(v),
        }
    }

    pub fn apply_matrix(self, m: &Matrix) -> Matrix {
        match self {
            Twist::Identity => m.clone(),
            Twist::Frobenius => m.frobenius(),
        }
    }

    pub fn compose(self, other: Twist) -> Twist {
        if self == other {
            Twist::Identity
        } else {
            Twist::Frobenius
        }
    }
}

/// The form `(u, v) ↦ u·gram·twist(v)ᵗ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub gram: Matrix,
    pub twist: Twist,
}

impl Form {
    pub fn eval(&self, u: &[Fq2], v: &[Fq2]) -> Fq2 {
        linalg::dot(&self.gram.apply_row(u), &self.twist.apply_vec(v))
    }

    /// Gram matrix of the form restricted to the given vectors.
    pub fn gram_of(&self, vectors: &[Vector]) -> Matrix {
        let field = self.gram.field();
        let mut m = Matrix::zeros(field, vectors.len(), vectors.len());
        for (i, u) in vectors.iter().enumerate() {
            let ug = self.gram.apply_row(u);
            for (j, v) in vectors.iter().enumerate() {
                m.set(i, j, linalg::dot(&ug, &self.twist.apply_vec(v)));
            }
        }
        m
    }

    /// Right orthogonal complement `{v : form(u, v) = 0 for all u ∈ U}`.
    pub fn perp(&self, u: &Subspace) -> Subspace {
        let field = self.gram.field();
        let m = self.gram.ncols();
        if u.dim() == 0 {
            return Subspace::whole(field, m);
        }
        let rows: Vec<Vector> = u.basis().iter().map(|b| self.gram.apply_row(b)).collect();
        let sys = Matrix::from_rows(field, &rows, m).expect("equal lengths");
        // twist(v) lies in the right kernel; the twist is an involution.
        let kernel: Vec<Vector> =
            sys.nullspace().into_iter().map(|w| self.twist.apply_vec(&w)).collect();
        Subspace::span(field, m, &kernel).expect("ambient matches")
    }

    pub fn radical(&self, u: &Subspace) -> Subspace {
        u.intersect(&self.perp(u))
    }

    pub fn is_nondegenerate_on(&self, u: &Subspace) -> bool {
        self.gram_of(u.basis()).det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    pub fn is_totally_singular_on(&self, u: &Subspace) -> bool {
        let g = self.gram_of(u.basis());
        (0..g.nrows()).all(|i| (0..g.ncols()).all(|j| g.get(i, j).is_zero()))
    }
}

/// The `2n`-dimensional space with the hyperbolic hermitian form in the
/// ordered basis `e_1, …, e_n, f_1, …, f_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSpace {
    n: usize,
    field: FieldParams,
    beta: Form,
}

impl HermitianSpace {
    pub fn standard(n: usize, field: FieldParams) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        let mut gram = Matrix::zeros(field, 2 * n, 2 * n);
        for i in 0..n {
            gram.set(i, n + i, field.one());
            gram.set(n + i, i, field.one());
        }
        Ok(Self { n, field, beta: Form { gram, twist: Twist::Frobenius } })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn gram(&self) -> &Matrix {
        &self.beta.gram
    }

    pub fn form(&self) -> &Form {
        &self.beta
    }

    pub fn e(&self, i: usize) -> Vector {
        linalg::unit_vector(self.field, self.dim(), i)
    }

    pub fn f(&self, i: usize) -> Vector {
        linalg::unit_vector(self.field, self.dim(), self.n + i)
    }

    /// `β(u, v) = u·G·σ(v)ᵗ`.
    pub fn beta(&self, u: &[Fq2], v: &[Fq2]) -> Result<Fq2> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("expected length {}", self.dim())));
        }
        Ok(self.beta.eval(u, v))
    }

    pub fn perp(&self, u: &Subspace) -> Subspace {
        self.beta.perp(u)
    }

    pub fn radical(&self, u: &Subspace) -> Subspace {
        self.beta.radical(u)
    }

    pub fn is_totally_isotropic(&self, u: &Subspace) -> bool {
        self.beta.is_totally_singular_on(u)
    }

    pub fn is_isotropic(&self, v: &[Fq2]) -> bool {
        self.beta.eval(v, v).is_zero()
    }

    pub fn span(&self, vectors: &[Vector]) -> Result<Subspace> {
        Subspace::span(self.field, self.dim(), vectors)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::whole(self.field, self.dim())
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.field, self.dim())
    }

    /// Turns `v` with `β(e, v) ≠ 0` into an isotropic `f` with `β(e, f) = 1`,
    /// for isotropic `e`.
    pub fn hyperbolic_partner(&self, e: &[Fq2], v: &[Fq2]) -> Result<Vector> {
        let c = self.beta.eval(e, v);
        let t = c.inv()?.frobenius();
        let f1 = linalg::scale(t, v);
        // β(f1 + s e, f1 + s e) = b + Tr(s); take s = -b/2.
        let b = self.beta.eval(&f1, &f1);
        let s = -b * Fq2::from(self.field.half());
        Ok(linalg::add(&f1, &linalg::scale(s, e)))
    }

    /// A hyperbolic basis `e_1, …, e_m, f_1, …, f_m` of a nondegenerate
    /// subspace, choosing first points in enumeration order.
    pub fn hyperbolic_basis(&self, w: &Subspace) -> Result<Vec<Vector>> {
        if w.dim() % 2 == 1 || !self.beta.is_nondegenerate_on(w) {
            return Err(Error::DegenerateSubspace);
        }
        let mut rest = w.clone();
        let (mut es, mut fs) = (Vec::new(), Vec::new());
        while rest.dim() > 0 {
            let e = rest.points().find(|p| self.is_isotropic(p)).ok_or(Error::DegenerateSubspace)?;
            let v = rest
                .points()
                .find(|p| !self.beta.eval(&e, p).is_zero())
                .ok_or(Error::DegenerateSubspace)?;
            let f = self.hyperbolic_partner(&e, &v)?;
            rest = rest.intersect(&self.perp(&self.span(&[e.clone(), f.clone()])?));
            es.push(e);
            fs.push(f);
        }
        es.extend(fs);
        Ok(es)
    }

    /// Coordinates of `v ∈ ⟨basis⟩` for a hyperbolic `basis`, read off by pairing with partners.
    pub fn hyperbolic_coordinates(&self, basis: &[Vector], v: &[Fq2]) -> Vector {
        let m = basis.len() / 2;
        (0..2 * m)
            .map(|i| {
                let partner = if i < m { &basis[m + i] } else { &basis[i - m] };
                self.beta.eval(v, partner)
            })
            .collect()
    }
}

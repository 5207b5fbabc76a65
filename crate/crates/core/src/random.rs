//! Seeded random sampling of field elements, subspaces and unitary matrices.

use rand::Rng;

use crate::building::Chamber;
use crate::classify::ClassifiedFlip;
use crate::error::{Error, Result};
use crate::geometry::{disc, Variant};
use crate::field::{FieldParams, Fq2};
use crate::linalg::{self, Matrix, Vector};
use crate::space::HermitianSpace;
use crate::subspace::Subspace;

pub fn element<R: Rng + ?Sized>(field: FieldParams, rng: &mut R) -> Fq2 {
    field.from_index(rng.gen_range(0..field.size()))
}

pub fn nonzero_element<R: Rng + ?Sized>(field: FieldParams, rng: &mut R) -> Fq2 {
    field.from_index(rng.gen_range(1..field.size()))
}

/// A uniformly random vector of `w`.
pub fn vector_in<R: Rng + ?Sized>(w: &Subspace, rng: &mut R) -> Vector {
    let f = w.field();
    if w.dim() == 0 {
        return linalg::zero_vector(f, w.ambient());
    }
    let coeffs: Vec<Fq2> = (0..w.dim()).map(|_| element(f, rng)).collect();
    linalg::combine(&coeffs, w.basis())
}

pub fn nonzero_vector_in<R: Rng + ?Sized>(w: &Subspace, rng: &mut R) -> Vector {
    loop {
        let v = vector_in(w, rng);
        if !linalg::is_zero(&v) {
            return v;
        }
    }
}

/// A random subspace of `w` of dimension `k ≤ dim w`.
pub fn subspace_in<R: Rng + ?Sized>(w: &Subspace, k: usize, rng: &mut R) -> Subspace {
    loop {
        let vs: Vec<Vector> = (0..k).map(|_| vector_in(w, rng)).collect();
        let s = Subspace::span(w.field(), w.ambient(), &vs).expect("same ambient");
        if s.dim() == k {
            return s;
        }
    }
}

/// A random hyperbolic basis `e_1, …, e_n, f_1, …, f_n` of the space.
pub fn hyperbolic_basis<R: Rng + ?Sized>(space: &HermitianSpace, rng: &mut R) -> Result<Vec<Vector>> {
    let mut rest = space.whole();
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while rest.dim() > 0 {
        let e = loop {
            let v = nonzero_vector_in(&rest, rng);
            if space.is_isotropic(&v) {
                break v;
            }
        };
        let v = loop {
            let v = vector_in(&rest, rng);
            if !space.beta(&e, &v)?.is_zero() {
                break v;
            }
        };
        let f = space.hyperbolic_partner(&e, &v)?;
        rest = rest.intersect(&space.perp(&space.span(&[e.clone(), f.clone()])?));
        es.push(e);
        fs.push(f);
    }
    es.extend(fs);
    Ok(es)
}

/// A random element of the unitary group: the matrix sending the standard
/// basis to a random hyperbolic basis.
pub fn unitary<R: Rng + ?Sized>(space: &HermitianSpace, rng: &mut R) -> Result<Matrix> {
    let rows = hyperbolic_basis(space, rng)?;
    Matrix::from_rows(space.field(), &rows, space.dim())
}

/// A random chamber of the flip's geometry of the given variant, grown one
/// biorthogonal point at a time.
pub fn chamber<R: Rng + ?Sized>(flip: &ClassifiedFlip, variant: Variant, rng: &mut R) -> Result<Chamber> {
    if variant != Variant::Full && flip.is_linear() {
        return Err(Error::VariantRequiresSemilinear);
    }
    let space = flip.space();
    let n = flip.n();
    let wanted = match variant {
        Variant::Full => None,
        Variant::Plus => Some(1),
        Variant::Minus => Some(-1),
    };
    let mut flag: Vec<Subspace> = Vec::with_capacity(n);
    let mut current = space.zero();
    for i in 1..=n {
        let rest = flip.biorthogonal_complement(&current);
        let next = loop {
            let v = nonzero_vector_in(&rest, rng);
            if !space.is_isotropic(&v) || flip.beta_phi(&v, &v).is_zero() {
                continue;
            }
            let next = current.sum(&Subspace::point(&v)?);
            if i == n || wanted.is_none() || Some(disc(flip, &next)?) == wanted {
                break next;
            }
        };
        flag.push(next.clone());
        current = next;
    }
    Chamber::new(space, flag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_preserves_beta() {
        let s = HermitianSpace::standard(2, FieldParams::new(3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = unitary(&s, &mut rng).unwrap();
            assert_eq!(g.mul(s.gram()).mul(&g.frobenius().transpose()), *s.gram());
        }
    }
}

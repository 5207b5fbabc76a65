//! The centralizer of a flip in the unitary group: membership, transporters
//! between chambers, Gram-equalizing bases and the predicted isomorphism type.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::building::Chamber;
use crate::classify::{hyperbolic_from_points, ClassifiedFlip, FlipClass};
use crate::error::{Error, Result};
use crate::field::{Fq, Fq2};
use crate::geometry::{disc, is_object, Variant};
use crate::linalg::{self, Matrix, Vector};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    UxU,
    GL,
    OPlus,
    OMinus,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::UxU => "U_n(q^2) x U_n(q^2)",
            Family::GL => "GL_n(q^2)",
            Family::OPlus => "O+_2n(q)",
            Family::OMinus => "O-_2n(q)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub family: Family,
    pub n: usize,
    pub q: u32,
    pub order: u128,
}

/// `|GU_n(q)| = q^{n(n-1)/2} ∏ (q^i - (-1)^i)`.
pub fn unitary_order(n: usize, q: u32) -> u128 {
    let q = q as i128;
    let n = n as u32;
    let mut order = q.pow(n * (n - 1) / 2);
    for i in 1..=n {
        order *= q.pow(i) - (-1i128).pow(i);
    }
    order as u128
}

/// `|GL_n(q^2)| = q^{n(n-1)} ∏ (q^{2i} - 1)`.
pub fn general_linear_order(n: usize, q: u32) -> u128 {
    let q = q as u128;
    let n = n as u32;
    let mut order = q.pow(n * (n - 1));
    for i in 1..=n {
        order *= q.pow(2 * i) - 1;
    }
    order
}

/// `|O^ε_{2n}(q)| = 2 q^{n(n-1)} (q^n - ε) ∏_{i<n} (q^{2i} - 1)`.
pub fn orthogonal_order(n: usize, q: u32, plus: bool) -> u128 {
    let q = q as u128;
    let n = n as u32;
    let mut order = 2 * q.pow(n * (n - 1));
    order *= if plus { q.pow(n) - 1 } else { q.pow(n) + 1 };
    for i in 1..n {
        order *= q.pow(2 * i) - 1;
    }
    order
}

pub fn descriptor(family: Family, n: usize, q: u32) -> GroupDescriptor {
    let order = match family {
        Family::UxU => unitary_order(n, q).pow(2),
        Family::GL => general_linear_order(n, q),
        Family::OPlus => orthogonal_order(n, q, true),
        Family::OMinus => orthogonal_order(n, q, false),
    };
    GroupDescriptor { family, n, q, order }
}

/// The isomorphism type of the centralizer, read off the class, the parity
/// of `n` and the quadratic character of `-1` in `F_q`.
pub fn predicted_group(flip: &ClassifiedFlip) -> GroupDescriptor {
    let n = flip.n();
    let field = flip.space().field();
    let plus_for_square = n.is_multiple_of(2) || !field.minus_one_is_square();
    let family = match flip.class {
        FlipClass::I => Family::UxU,
        FlipClass::II => Family::GL,
        FlipClass::III if plus_for_square => Family::OPlus,
        FlipClass::III => Family::OMinus,
        FlipClass::IV if plus_for_square => Family::OMinus,
        FlipClass::IV => Family::OPlus,
    };
    descriptor(family, n, field.q())
}

/// `g ∈ U(V)`: `g·G·σ(g)ᵗ = G`.
fn is_unitary(flip: &ClassifiedFlip, g: &Matrix) -> bool {
    let gram = flip.space().gram();
    g.mul(gram).mul(&g.frobenius().transpose()) == *gram
}

/// `g ∘ φ = φ ∘ g` for the linear `g: v ↦ v·g`, i.e. `τ(g)·A = A·g`.
fn commutes(flip: &ClassifiedFlip, g: &Matrix) -> bool {
    let a = flip.map.matrix();
    flip.map.tau().apply_matrix(g).mul(a) == a.mul(g)
}

/// `g` preserves `β_φ`.
fn preserves_beta_phi(flip: &ClassifiedFlip, g: &Matrix) -> bool {
    let form = flip.form();
    g.mul(&form.gram).mul(&form.twist.apply_matrix(g).transpose()) == form.gram
}

/// Membership in the centralizer of the flip inside `U(V)`, decided both as
/// "commutes with φ" and as "preserves β_φ"; the two must agree.
pub fn in_stabilizer(flip: &ClassifiedFlip, g: &Matrix) -> Result<bool> {
    if g.nrows() != flip.space().dim() || !g.is_square() {
        return Err(Error::DimensionMismatch("stabilizer candidates are 2n x 2n".into()));
    }
    if g.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let unitary = is_unitary(flip, g);
    let by_commuting = unitary && commutes(flip, g);
    let by_form = unitary && preserves_beta_phi(flip, g);
    if by_commuting != by_form {
        return Err(Error::CharacterizationMismatch);
    }
    Ok(by_commuting)
}

/// Whether `c` is a chamber of the given variant of the flip's geometry.
pub fn chamber_variant_ok(flip: &ClassifiedFlip, c: &Chamber, variant: Variant) -> Result<()> {
    if variant != Variant::Full && flip.is_linear() {
        return Err(Error::VariantRequiresSemilinear);
    }
    let n = flip.n();
    if c.rank() != n || !c.flag().iter().all(|ci| is_object(flip, ci)) {
        return Err(Error::NotAChamber);
    }
    let wanted = match variant {
        Variant::Full => return Ok(()),
        Variant::Plus => 1,
        Variant::Minus => -1,
    };
    for ci in &c.flag()[..n - 1] {
        if disc(flip, ci)? != wanted {
            return Err(Error::WrongVariant);
        }
    }
    Ok(())
}

/// Hyperbolic basis `e_1, …, e_n, f_1, …, f_n` with `C_i = ⟨e_1, …, e_i⟩`,
/// scaled point by point as in classification.
pub fn typed_adapted_basis(flip: &ClassifiedFlip, c: &Chamber) -> Result<Vec<Vector>> {
    let space = flip.space();
    let mut points = Vec::with_capacity(flip.n());
    let mut prev = space.zero();
    for ci in c.flag() {
        let line = flip.biorthogonal_complement(&prev).intersect(ci);
        let p = line.point_vector().map_err(|_| Error::NotAChamber)?.clone();
        points.push(p);
        prev = ci.clone();
    }
    let isometry = flip.class != FlipClass::II;
    hyperbolic_from_points(space, &flip.map, flip.form(), isometry, &points)
}

/// The adapted basis of a chamber of the geometry (classes I/II) or of its
/// square-type part (classes III/IV); satisfies the class relations.
pub fn adapted_basis(flip: &ClassifiedFlip, c: &Chamber) -> Result<Vec<Vector>> {
    let variant = if flip.is_linear() { Variant::Full } else { Variant::Plus };
    chamber_variant_ok(flip, c, variant)?;
    let basis = typed_adapted_basis(flip, c)?;
    debug_assert!(flip.relations_hold(&basis));
    Ok(basis)
}

fn point_types(flip: &ClassifiedFlip, basis: &[Vector]) -> Vec<bool> {
    basis[..flip.n()]
        .iter()
        .map(|e| {
            let s = flip.beta_phi(e, e);
            flip.is_linear() || s.is_square().expect("nonsingular")
        })
        .collect()
}

/// A stabilizer element sending `C_i` to `D_i` for all `i`, obtained by
/// mapping the adapted basis of `c` onto that of `d`.
pub fn transporter(flip: &ClassifiedFlip, c: &Chamber, d: &Chamber, variant: Variant) -> Result<Matrix> {
    chamber_variant_ok(flip, c, variant)?;
    chamber_variant_ok(flip, d, variant)?;
    let bc = typed_adapted_basis(flip, c)?;
    let bd = typed_adapted_basis(flip, d)?;
    if point_types(flip, &bc) != point_types(flip, &bd) {
        return Err(Error::WrongVariant);
    }
    let field = flip.space().field();
    let mc = Matrix::from_rows(field, &bc, 0)?;
    let md = Matrix::from_rows(field, &bd, 0)?;
    Ok(mc.inverse()?.mul(&md))
}

/// The image of a subspace under `v ↦ v·g`.
pub fn image(g: &Matrix, u: &Subspace) -> Subspace {
    let rows: Vec<Vector> = u.basis().iter().map(|b| g.apply_row(b)).collect();
    Subspace::span(u.field(), u.ambient(), &rows).expect("same ambient")
}

/// `T ∈ U^φ` and `T(C_i) = D_i` for all `i`.
pub fn verify_transporter(flip: &ClassifiedFlip, t: &Matrix, c: &Chamber, d: &Chamber) -> Result<bool> {
    Ok(in_stabilizer(flip, t)?
        && c.flag().iter().zip(d.flag()).all(|(ci, di)| image(t, ci) == *di))
}

/// The basis `h_1, …, h_{2n}` of `φ`-fixed vectors on which the Gram
/// matrices of `β` and `β_φ` coincide: `h_{2i-1} = e_i + f_i`,
/// `h_{2i} = α(e_i - f_i)`, with `f_n` replaced by `λ f_n` in class IV.
pub fn gram_equalizing_basis(flip: &ClassifiedFlip) -> Result<Vec<Vector>> {
    if flip.is_linear() {
        return Err(Error::WrongClass);
    }
    let n = flip.n();
    let alpha = flip.space().field().trace_zero_unit();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = &flip.basis[i];
        let f = if flip.class == FlipClass::IV && i == n - 1 {
            linalg::scale(flip.scalar, &flip.basis[n + i])
        } else {
            flip.basis[n + i].clone()
        };
        out.push(linalg::add(e, &f));
        out.push(linalg::scale(alpha, &linalg::sub(e, &f)));
    }
    Ok(out)
}

/// The `2×2` diagonal blocks of the Gram matrix of `β` on a Gram-equalizing
/// basis, over `F_q`. Fails if an off-block entry is nonzero or an entry
/// leaves `F_q`.
pub fn gram_blocks(flip: &ClassifiedFlip, basis: &[Vector]) -> Result<Vec<[[Fq; 2]; 2]>> {
    let g = flip.space().form().gram_of(basis);
    let mut blocks = Vec::new();
    for b in 0..basis.len() / 2 {
        let mut block = [[flip.space().field().fq(0); 2]; 2];
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let v = g.get(i, j);
                if i / 2 == b && j / 2 == b {
                    block[i % 2][j % 2] = v.to_base().ok_or(Error::WrongClass)?;
                } else if i / 2 != j / 2 && !v.is_zero() {
                    return Err(Error::WrongClass);
                }
            }
        }
        blocks.push(block);
    }
    Ok(blocks)
}

/// The orthogonal type read off a Gram-equalizing basis: `+` exactly when
/// `(-1)^n det M` is a square in `F_q`.
pub fn orthogonal_type_from_gram(flip: &ClassifiedFlip) -> Result<Family> {
    let basis = gram_equalizing_basis(flip)?;
    let blocks = gram_blocks(flip, &basis)?;
    let field = flip.space().field();
    let mut det = field.fq(1);
    for b in &blocks {
        det = det * (b[0][0] * b[1][1] - b[0][1] * b[1][0]);
    }
    if flip.n() % 2 == 1 {
        det = -det;
    }
    Ok(if det.is_square() { Family::OPlus } else { Family::OMinus })
}

/// Counts the `2×2` matrices preserving `β` and commuting with the flip, by
/// running over all `q^8` matrices.
pub fn enumerate_stabilizer_order(flip: &ClassifiedFlip) -> Result<u128> {
    if flip.n() != 1 {
        return Err(Error::TooLarge);
    }
    let k = flip.space().field();
    let size = k.size();
    let count: u128 = (0..size * size)
        .into_par_iter()
        .map(|first| {
            let (a, b) = (k.from_index(first / size), k.from_index(first % size));
            let mut local = 0u128;
            for c in k.elements() {
                for d in k.elements() {
                    if (a * d - b * c).is_zero() {
                        continue;
                    }
                    let g = Matrix::from_rows(k, &[vec![a, b], vec![c, d]], 2).expect("2x2");
                    if is_unitary(flip, &g) && commutes(flip, &g) {
                        local += 1;
                    }
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// Block form of a stabilizer element in the basis `b` (rows), i.e. `b·g·b⁻¹`.
pub fn in_basis(g: &Matrix, b: &[Vector]) -> Result<Matrix> {
    let field = g.field();
    let m = Matrix::from_rows(field, b, g.ncols())?;
    Ok(m.mul(g).mul(&m.inverse()?))
}

/// Splits a `2n×2n` matrix into its `n×n` blocks `[[A, B], [C, D]]`.
pub fn blocks(m: &Matrix) -> [Matrix; 4] {
    let n = m.nrows() / 2;
    let field = m.field();
    let mut out = [
        Matrix::zeros(field, n, n),
        Matrix::zeros(field, n, n),
        Matrix::zeros(field, n, n),
        Matrix::zeros(field, n, n),
    ];
    for i in 0..2 * n {
        for j in 0..2 * n {
            out[(i / n) * 2 + j / n].set(i % n, j % n, m.get(i, j));
        }
    }
    out
}

/// The eigenbasis of a linear flip: `e_i + c f_i` then `e_i - c f_i`, with
/// `c = 1` in class I and `c = α` in class II.
pub fn block_basis(flip: &ClassifiedFlip) -> Vec<Vector> {
    let n = flip.n();
    let c: Fq2 = if flip.class == FlipClass::II {
        flip.space().field().trace_zero_unit()
    } else {
        flip.space().field().one()
    };
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(linalg::add(&flip.basis[i], &linalg::scale(c, &flip.basis[n + i])));
    }
    for i in 0..n {
        out.push(linalg::sub(&flip.basis[i], &linalg::scale(c, &flip.basis[n + i])));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_flip, classify};
    use crate::field::FieldParams;
    use crate::random;
    use crate::space::HermitianSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flip(n: usize, q: u32, class: FlipClass) -> ClassifiedFlip {
        let s = HermitianSpace::standard(n, FieldParams::new(q).unwrap()).unwrap();
        classify(&s, &canonical_flip(&s, class)).unwrap()
    }

    #[test]
    fn order_formulas_at_rank_one() {
        assert_eq!(unitary_order(1, 3), 4);
        assert_eq!(general_linear_order(1, 3), 8);
        assert_eq!(orthogonal_order(1, 3, true), 4);
        assert_eq!(orthogonal_order(1, 3, false), 8);
        assert_eq!(orthogonal_order(1, 5, false), 12);
        assert_eq!(orthogonal_order(1, 5, true), 8);
        // |GU_2(3)| = 3·4·8 and |O+_4(3)| = 2·9·8·8.
        assert_eq!(unitary_order(2, 3), 96);
        assert_eq!(orthogonal_order(2, 3, true), 1152);
    }

    #[test]
    fn predictions_at_rank_one() {
        let want = [
            (3, FlipClass::I, Family::UxU, 16),
            (3, FlipClass::II, Family::GL, 8),
            (3, FlipClass::III, Family::OPlus, 4),
            (3, FlipClass::IV, Family::OMinus, 8),
            (5, FlipClass::I, Family::UxU, 36),
            (5, FlipClass::II, Family::GL, 24),
            (5, FlipClass::III, Family::OMinus, 12),
            (5, FlipClass::IV, Family::OPlus, 8),
        ];
        for (q, class, family, order) in want {
            let g = predicted_group(&flip(1, q, class));
            assert_eq!((g.family, g.order), (family, order), "q={q} class {class}");
        }
    }

    #[test]
    fn identity_is_in_every_stabilizer() {
        for class in FlipClass::ALL {
            let f = flip(2, 3, class);
            let id = Matrix::identity(f.space().field(), 4);
            assert!(in_stabilizer(&f, &id).unwrap());
        }
    }

    #[test]
    fn standard_chamber_has_standard_adapted_basis() {
        for class in FlipClass::ALL {
            let f = flip(2, 3, class);
            let c = Chamber::standard(f.space());
            let b = adapted_basis(&f, &c).unwrap();
            assert_eq!(b, f.basis);
            let t = transporter(&f, &c, &c, if class.is_linear() { Variant::Full } else { Variant::Plus }).unwrap();
            assert!(t.is_identity());
        }
    }

    #[test]
    fn gram_equalizing_rank_one_class_three() {
        let f = flip(1, 3, FlipClass::III);
        let b = gram_equalizing_basis(&f).unwrap();
        let blocks = gram_blocks(&f, &b).unwrap();
        assert_eq!(blocks[0][0][0].value(), 2);
        assert_eq!(blocks[0][1][1].value(), 1);
        assert_eq!(f.space().form().gram_of(&b), f.form().gram_of(&b));
        for h in &b {
            assert_eq!(f.apply(h), *h);
        }
    }

    fn variant_for(class: FlipClass) -> Variant {
        if class.is_linear() {
            Variant::Full
        } else {
            Variant::Plus
        }
    }

    #[test]
    fn brute_force_orders_match_predictions_at_q3() {
        for class in FlipClass::ALL {
            let f = flip(1, 3, class);
            assert_eq!(enumerate_stabilizer_order(&f).unwrap(), predicted_group(&f).order, "class {class}");
        }
        assert!(matches!(enumerate_stabilizer_order(&flip(2, 3, FlipClass::I)), Err(Error::TooLarge)));
    }

    #[test]
    fn random_transporters_verify_and_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for class in FlipClass::ALL {
            let f = flip(2, 3, class);
            let v = variant_for(class);
            let mut ts = Vec::new();
            for _ in 0..10 {
                let c = random::chamber(&f, v, &mut rng).unwrap();
                let d = random::chamber(&f, v, &mut rng).unwrap();
                assert!(adapted_basis(&f, &c).map(|b| f.relations_hold(&b)).unwrap());
                let t = transporter(&f, &c, &d, v).unwrap();
                assert!(verify_transporter(&f, &t, &c, &d).unwrap(), "class {class}");
                ts.push(t);
            }
            for w in ts.windows(2) {
                assert!(in_stabilizer(&f, &w[0].mul(&w[1])).unwrap());
                assert!(in_stabilizer(&f, &w[0].inverse().unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn minus_chambers_transport_but_have_no_strict_adapted_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for class in [FlipClass::III, FlipClass::IV] {
            let f = flip(2, 3, class);
            let c = random::chamber(&f, Variant::Minus, &mut rng).unwrap();
            let d = random::chamber(&f, Variant::Minus, &mut rng).unwrap();
            assert!(matches!(adapted_basis(&f, &c), Err(Error::WrongVariant)));
            let t = transporter(&f, &c, &d, Variant::Minus).unwrap();
            assert!(verify_transporter(&f, &t, &c, &d).unwrap());
        }
    }

    #[test]
    fn random_unitary_outside_stabilizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for class in FlipClass::ALL {
            let f = flip(2, 3, class);
            let g = loop {
                let g = random::unitary(f.space(), &mut rng).unwrap();
                if !commutes(&f, &g) {
                    break g;
                }
            };
            assert!(!in_stabilizer(&f, &g).unwrap());
            assert!(!preserves_beta_phi(&f, &g));
        }
    }

    #[test]
    fn linear_flip_stabilizers_are_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for class in [FlipClass::I, FlipClass::II] {
            let f = flip(2, 5, class);
            let b = block_basis(&f);
            for _ in 0..5 {
                let c = random::chamber(&f, Variant::Full, &mut rng).unwrap();
                let d = random::chamber(&f, Variant::Full, &mut rng).unwrap();
                let t = transporter(&f, &c, &d, Variant::Full).unwrap();
                let [a, bb, cc, dd] = blocks(&in_basis(&t, &b).unwrap());
                let zero = Matrix::zeros(f.space().field(), 2, 2);
                match class {
                    FlipClass::I => {
                        assert_eq!((bb, cc), (zero.clone(), zero));
                        for m in [a, dd] {
                            let g = Matrix::scalar(f.space().field().elem(2, 0), 2);
                            assert_eq!(m.mul(&g).mul(&m.frobenius().transpose()), g);
                        }
                    }
                    _ => {
                        assert_eq!((bb, cc), (zero.clone(), zero));
                        assert!(a.frobenius().transpose().mul(&dd).is_identity());
                    }
                }
            }
        }
    }

    #[test]
    fn determinetype_agrees_with_prediction() {
        for q in [3, 5, 7] {
            for n in [1, 2] {
                for class in [FlipClass::III, FlipClass::IV] {
                    let f = flip(n, q, class);
                    assert_eq!(orthogonal_type_from_gram(&f).unwrap(), predicted_group(&f).family);
                }
            }
        }
    }

    #[test]
    fn gram_equalizing_requires_semilinear() {
        assert!(matches!(gram_equalizing_basis(&flip(1, 3, FlipClass::I)), Err(Error::WrongClass)));
    }
}

//! Recognising flips, normalising them to involutions, and producing a
//! hyperbolic basis on which a flip takes one of four canonical shapes:
//!
//! * I: linear isometry, `f(e_i) = f_i`;
//! * II: linear anti-isometry, `f(e_i) = α·f_i`, `f(f_i) = α⁻¹·e_i` with `α = ω`;
//! * III: `σ`-semilinear isometry, `f(e_i) = f_i`, every maximal object of square type;
//! * IV: as III for `i < n`, but `f(e_n) = λ·f_n`, `f(f_n) = σ(λ⁻¹)·e_n`, `λ` the smallest non-square.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::building::Chamber;
use crate::error::{Error, Result};
use crate::field::Fq2;
use crate::linalg::{self, Matrix, Vector};
use crate::semilinear::SemilinearMap;
use crate::space::{Form, HermitianSpace, Twist};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FlipClass {
    I,
    II,
    III,
    IV,
}

impl FlipClass {
    pub const ALL: [FlipClass; 4] = [FlipClass::I, FlipClass::II, FlipClass::III, FlipClass::IV];

    pub fn is_linear(self) -> bool {
        matches!(self, FlipClass::I | FlipClass::II)
    }
}

impl fmt::Display for FlipClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FlipClass::I => "I",
            FlipClass::II => "II",
            FlipClass::III => "III",
            FlipClass::IV => "IV",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for FlipClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(FlipClass::I),
            "II" => Ok(FlipClass::II),
            "III" => Ok(FlipClass::III),
            "IV" => Ok(FlipClass::IV),
            other => Err(Error::InvalidParams(format!("unknown flip class {other:?}"))),
        }
    }
}

/// The scalar carried by a class: `α` for II, `λ` for IV, 1 otherwise.
pub fn class_scalar(space: &HermitianSpace, class: FlipClass) -> Fq2 {
    let k = space.field();
    match class {
        FlipClass::II => k.trace_zero_unit(),
        FlipClass::IV => k.smallest_non_square(),
        _ => k.one(),
    }
}

/// The flip acting on the standard basis by the relations of `class`.
pub fn canonical_flip(space: &HermitianSpace, class: FlipClass) -> SemilinearMap {
    let n = space.n();
    let c = class_scalar(space, class);
    let mut rows: Vec<Vector> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let image = match class {
            FlipClass::II => linalg::scale(c, &space.f(i)),
            FlipClass::IV if i == n - 1 => linalg::scale(c, &space.f(i)),
            _ => space.f(i),
        };
        rows.push(image);
    }
    for i in 0..n {
        let image = match class {
            FlipClass::II => linalg::scale(c.inv().expect("nonzero"), &space.e(i)),
            FlipClass::IV if i == n - 1 => {
                linalg::scale(c.inv().expect("nonzero").frobenius(), &space.e(i))
            }
            _ => space.e(i),
        };
        rows.push(image);
    }
    let tau = if class.is_linear() { Twist::Identity } else { Twist::Frobenius };
    let mat = Matrix::from_rows(space.field(), &rows, 0).expect("square");
    SemilinearMap::new(mat, tau).expect("canonical flips are invertible")
}

/// A flip rescaled so that `g^2 = id`, with its similitude factor `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub map: SemilinearMap,
    pub isometry: bool,
}

fn check_shape(space: &HermitianSpace, f: &SemilinearMap) -> Result<()> {
    if f.dim() != space.dim() || f.matrix().field() != space.field() {
        return Err(Error::DimensionMismatch(format!(
            "map of size {} on a space of dimension {}",
            f.dim(),
            space.dim()
        )));
    }
    Ok(())
}

/// Rescales a similitude that squares to a scalar into an involution.
///
/// Linear maps are multiplied by the smallest square root of `λ⁻¹`, which
/// leaves a factor `±1`. `σ`-semilinear maps are multiplied by the smallest
/// `μ` with `N(μ) = λ⁻¹` (or left alone when `λ = 1`); only isometries can
/// result for flips.
pub fn normalize_map(space: &HermitianSpace, f: &SemilinearMap) -> Result<Normalized> {
    check_shape(space, f)?;
    let a = f.similitude_factor(space).map_err(|_| Error::NotAFlip)?;
    let lambda = f.is_projective_involution().ok_or(Error::NotAFlip)?;
    let k = space.field();
    let c = if lambda.is_one() {
        k.one()
    } else if f.is_linear() {
        lambda.inv()?.sqrt().map_err(|_| Error::NotAFlip)?
    } else {
        let l = lambda.to_base().ok_or(Error::NotAFlip)?;
        k.solve_norm(l.inv()?)?
    };
    let map = f.scaled(c)?;
    let factor = c.norm() * a;
    let isometry = factor.value() == 1;
    if !isometry && factor != -k.fq(1) {
        return Err(Error::NotAFlip);
    }
    if !f.is_linear() && !isometry {
        return Err(Error::NotAFlip);
    }
    debug_assert!(map.is_involution());
    Ok(Normalized { map, isometry })
}

/// Greedy biorthogonal points: repeatedly take the first `β`-isotropic,
/// `form`-nonsingular point of `⟨u_1, f(u_1), …⟩^⊥`.
///
/// Succeeds exactly when the map sends some chamber to an opposite one.
fn greedy_points(space: &HermitianSpace, f: &SemilinearMap, form: &Form) -> Result<Vec<Vector>> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut spanning: Vec<Vector> = Vec::new();
    for _ in 0..space.n() {
        let x = space.perp(&space.span(&spanning)?);
        let u = x
            .points()
            .find(|p| space.is_isotropic(p) && !form.eval(p, p).is_zero())
            .ok_or(Error::NotAFlip)?;
        spanning.push(u.clone());
        spanning.push(f.apply(&u));
        chosen.push(u);
    }
    Ok(chosen)
}

fn is_flip_checked(space: &HermitianSpace, f: &SemilinearMap) -> Result<()> {
    check_shape(space, f)?;
    f.similitude_factor(space).map_err(|_| Error::NotAFlip)?;
    f.is_projective_involution().ok_or(Error::NotAFlip)?;
    greedy_points(space, f, &f.induced_form(space))?;
    Ok(())
}

/// Similitude, projective involution, and some chamber sent to an opposite.
pub fn is_flip(space: &HermitianSpace, f: &SemilinearMap) -> bool {
    is_flip_checked(space, f).is_ok()
}

pub fn normalize(space: &HermitianSpace, f: &SemilinearMap) -> Result<SemilinearMap> {
    is_flip_checked(space, f)?;
    Ok(normalize_map(space, f)?.map)
}

/// A chamber whose members are all nondegenerate for the induced form.
pub fn witness_chamber(space: &HermitianSpace, f: &SemilinearMap) -> Result<Chamber> {
    check_shape(space, f)?;
    let points = greedy_points(space, f, &f.induced_form(space))?;
    Chamber::from_vectors(space, &points)
}

/// A flip together with a hyperbolic basis on which it has canonical shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedFlip {
    pub class: FlipClass,
    /// The normalised map, an involution.
    pub map: SemilinearMap,
    /// `e_1, …, e_n, f_1, …, f_n`.
    pub basis: Vec<Vector>,
    pub scalar: Fq2,
    space: HermitianSpace,
    form: Form,
}

impl ClassifiedFlip {
    pub fn space(&self) -> &HermitianSpace {
        &self.space
    }

    /// `β_φ` of the normalised map.
    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn is_linear(&self) -> bool {
        self.class.is_linear()
    }

    pub fn apply(&self, v: &[Fq2]) -> Vector {
        self.map.apply(v)
    }

    /// `β_φ(u, v)`.
    pub fn beta_phi(&self, u: &[Fq2], v: &[Fq2]) -> Fq2 {
        self.form.eval(u, v)
    }

    /// `U^⊥⊥ = ⟨U, φ(U)⟩^⊥`.
    pub fn biorthogonal_complement(&self, u: &Subspace) -> Subspace {
        self.space.perp(u).intersect(&self.form.perp(u))
    }

    /// Checks the defining relations of the class on `basis`.
    pub fn relations_hold(&self, basis: &[Vector]) -> bool {
        basis_has_shape(&self.space, &self.map, self.class, self.scalar, basis)
    }
}

/// Whether `basis` is hyperbolic and `f` acts on it by the relations of `class` with `scalar`.
pub fn basis_has_shape(
    space: &HermitianSpace,
    f: &SemilinearMap,
    class: FlipClass,
    scalar: Fq2,
    basis: &[Vector],
) -> bool {
    let n = space.n();
    if basis.len() != 2 * n || space.form().gram_of(basis) != *space.gram() {
        return false;
    }
    let Ok(inv) = scalar.inv() else { return false };
    (0..n).all(|i| {
        let (e, ff) = (&basis[i], &basis[n + i]);
        let (fe, fff) = match class {
            FlipClass::I | FlipClass::III => (ff.clone(), e.clone()),
            FlipClass::II => (linalg::scale(scalar, ff), linalg::scale(inv, e)),
            FlipClass::IV if i == n - 1 => {
                (linalg::scale(scalar, ff), linalg::scale(inv.frobenius(), e))
            }
            FlipClass::IV => (ff.clone(), e.clone()),
        };
        f.apply(e) == fe && f.apply(ff) == fff
    })
}

/// Biorthogonal basis of a maximal object for a semilinear flip, typed so
/// that at most one point (placed last) is of non-square type.
pub(crate) fn typed_points(form: &Form, m: &Subspace, non_square_last: bool) -> Result<Vec<Vector>> {
    let mut rest = m.clone();
    let mut out = Vec::new();
    let mut last = None;
    if non_square_last {
        let u = rest
            .points()
            .find(|p| {
                let s = form.eval(p, p);
                !s.is_zero() && !s.is_square().expect("nonzero")
            })
            .ok_or(Error::NoPoint)?;
        rest = rest.intersect(&form.perp(&Subspace::point(&u)?));
        last = Some(u);
    }
    while rest.dim() > 0 {
        let u = rest
            .points()
            .find(|p| {
                let s = form.eval(p, p);
                !s.is_zero() && s.is_square().expect("nonzero")
            })
            .ok_or(Error::NoPoint)?;
        rest = rest.intersect(&form.perp(&Subspace::point(&u)?));
        out.push(u);
    }
    out.extend(last);
    Ok(out)
}

/// `γ` with `N(γ) = c`: 1 when that works, otherwise the smallest solution.
fn norm_preimage(space: &HermitianSpace, c: crate::field::Fq) -> Result<Fq2> {
    let k = space.field();
    if c.value() == 1 {
        Ok(k.one())
    } else {
        k.solve_norm(c)
    }
}

/// Rescales biorthogonal points `u_i` into a hyperbolic basis `e_i, f_i`.
///
/// Linear flips: `f_i = φ(e_i)` for isometries, `f_i = α⁻¹φ(e_i)` for
/// anti-isometries. Semilinear flips: square type points get
/// `β_φ(e_i, e_i) = 1` and `f_i = φ(e_i)`; non-square type points get
/// `β_φ(e_i, e_i) = σ(λ)` and `f_i = λ⁻¹φ(e_i)`.
pub(crate) fn hyperbolic_from_points(
    space: &HermitianSpace,
    g: &SemilinearMap,
    form: &Form,
    isometry: bool,
    points: &[Vector],
) -> Result<Vec<Vector>> {
    let k = space.field();
    let n = points.len();
    let alpha = k.trace_zero_unit();
    let lambda = k.smallest_non_square();
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    for u in points {
        let s = form.eval(u, u);
        let (e, f) = if g.is_linear() && isometry {
            let c = s.to_base().ok_or(Error::NotAFlip)?;
            let e = linalg::scale(norm_preimage(space, c.inv()?)?, u);
            let f = g.apply(&e);
            (e, f)
        } else if g.is_linear() {
            let c = (-alpha * s.inv()?).to_base().ok_or(Error::NotAFlip)?;
            let e = linalg::scale(norm_preimage(space, c)?, u);
            let f = linalg::scale(alpha.inv()?, &g.apply(&e));
            (e, f)
        } else if s.is_square()? {
            let e = linalg::scale(s.inv()?.sqrt()?, u);
            let f = g.apply(&e);
            (e, f)
        } else {
            let gamma = (lambda.frobenius() * s.inv()?).sqrt()?;
            let e = linalg::scale(gamma, u);
            let f = linalg::scale(lambda.inv()?, &g.apply(&e));
            (e, f)
        };
        es.push(e);
        fs.push(f);
    }
    es.extend(fs);
    Ok(es)
}

/// Discriminant sign of a `form`-nondegenerate subspace: `true` for square type.
pub(crate) fn square_type(form: &Form, u: &Subspace) -> Result<bool> {
    let d = form.gram_of(u.basis()).det()?;
    if d.is_zero() {
        return Err(Error::DegenerateSubspace);
    }
    d.is_square()
}

/// Normalises `f`, decides its class and builds the canonical basis.
pub fn classify(space: &HermitianSpace, f: &SemilinearMap) -> Result<ClassifiedFlip> {
    is_flip_checked(space, f)?;
    let Normalized { map, isometry } = normalize_map(space, f)?;
    let form = map.induced_form(space);
    let points = greedy_points(space, &map, &form)?;
    let (class, points) = if map.is_linear() {
        (if isometry { FlipClass::I } else { FlipClass::II }, points)
    } else {
        let m = space.span(&points)?;
        let square = square_type(&form, &m)?;
        let class = if square { FlipClass::III } else { FlipClass::IV };
        // Reuse the greedy points when at most one is of non-square type.
        let (sq, nonsq): (Vec<Vector>, Vec<Vector>) = points
            .into_iter()
            .partition(|p| form.eval(p, p).is_square().expect("nonsingular"));
        let typed = if nonsq.len() <= 1 {
            sq.into_iter().chain(nonsq).collect()
        } else {
            typed_points(&form, &m, !square)?
        };
        (class, typed)
    };
    let basis = hyperbolic_from_points(space, &map, &form, isometry, &points)?;
    let scalar = class_scalar(space, class);
    if !basis_has_shape(space, &map, class, scalar, &basis) {
        return Err(Error::NotAFlip);
    }
    Ok(ClassifiedFlip { class, map, basis, scalar, space: space.clone(), form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::is_opposite;
    use crate::field::FieldParams;

    fn space(n: usize, q: u32) -> HermitianSpace {
        HermitianSpace::standard(n, FieldParams::new(q).unwrap()).unwrap()
    }

    #[test]
    fn canonical_shapes() {
        let s = space(1, 3);
        let i = canonical_flip(&s, FlipClass::I);
        assert_eq!(i.tau(), Twist::Identity);
        assert_eq!(i.matrix().to_rows(), vec![s.f(0), s.e(0)]);
        let ii = canonical_flip(&s, FlipClass::II);
        assert_eq!(ii.apply(&s.e(0)), linalg::scale(s.field().omega(), &s.f(0)));
        assert_eq!(ii.similitude_factor(&s).unwrap(), -s.field().fq(1));
        assert_eq!(i.similitude_factor(&s).unwrap().value(), 1);
        let s2 = space(2, 3);
        let iv = canonical_flip(&s2, FlipClass::IV);
        let lambda = s2.field().elem(1, 1);
        assert_eq!(iv.apply(&s2.e(1)), linalg::scale(lambda, &s2.f(1)));
        assert_eq!(iv.apply(&s2.f(1)), linalg::scale(lambda.inv().unwrap().frobenius(), &s2.e(1)));
        assert!(iv.is_involution());
    }

    #[test]
    fn round_trip_small() {
        for (n, q) in [(1, 3), (1, 5), (2, 3)] {
            let s = space(n, q);
            for class in FlipClass::ALL {
                let f = canonical_flip(&s, class);
                assert!(is_flip(&s, &f));
                let c = classify(&s, &f).unwrap();
                assert_eq!(c.class, class, "(n,q)=({n},{q})");
                assert!(c.relations_hold(&c.basis));
            }
        }
    }

    #[test]
    fn canonical_flips_classify_onto_the_standard_basis() {
        for q in [3, 5] {
            let s = space(2, q);
            let standard: Vec<Vector> = (0..4).map(|i| linalg::unit_vector(s.field(), 4, i)).collect();
            for class in FlipClass::ALL {
                let c = classify(&s, &canonical_flip(&s, class)).unwrap();
                assert_eq!(c.basis, standard, "q={q} class {class}");
            }
        }
    }

    #[test]
    fn identity_is_not_a_flip() {
        let s = space(2, 3);
        let id = SemilinearMap::identity(&s);
        assert!(!is_flip(&s, &id));
        assert!(matches!(classify(&s, &id), Err(Error::NotAFlip)));
    }

    #[test]
    fn swapping_the_two_hyperbolic_pairs_is_a_class_one_flip() {
        let s = space(2, 3);
        let rows = vec![s.e(1), s.e(0), s.f(1), s.f(0)];
        let f = SemilinearMap::new(Matrix::from_rows(s.field(), &rows, 0).unwrap(), Twist::Identity).unwrap();
        assert!(is_flip(&s, &f));
        let c = classify(&s, &f).unwrap();
        assert_eq!(c.class, FlipClass::I);
        assert!(c.relations_hold(&c.basis));
    }

    #[test]
    fn normalization_examples() {
        let s = space(2, 3);
        let k = s.field();
        let i = canonical_flip(&s, FlipClass::I);
        assert_eq!(normalize(&s, &i).unwrap(), i);
        for lambda in k.nonzero_elements().filter(|l| l.norm().value() == 1) {
            if !lambda.is_square().unwrap() {
                continue;
            }
            let g = normalize(&s, &i.scaled(lambda).unwrap()).unwrap();
            let m = g.matrix();
            assert!(*m == *i.matrix() || *m == i.matrix().scale(-k.one()));
        }
        let iii = canonical_flip(&s, FlipClass::III);
        for mu in k.nonzero_elements().filter(|l| l.norm().value() == 1) {
            let g = normalize(&s, &iii.scaled(mu).unwrap()).unwrap();
            assert!(g.is_involution());
            assert_eq!(g.similitude_factor(&s).unwrap().value(), 1);
        }
    }

    #[test]
    fn witness_chamber_is_sent_to_an_opposite() {
        let s = space(2, 3);
        for class in FlipClass::ALL {
            let f = canonical_flip(&s, class);
            let c = witness_chamber(&s, &f).unwrap();
            assert!(is_opposite(&s, &c, &c.image(&f)));
        }
    }
}

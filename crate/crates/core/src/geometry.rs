//! Geometries induced by a flip: the `β`-isotropic, `β_φ`-nondegenerate
//! subspaces, their discriminants, residues, and the constructive basis
//! lemmas used for classification and transitivity.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::building::{self, all_subspaces};
use crate::classify::{self, ClassifiedFlip};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::semilinear::SemilinearMap;
use crate::space::HermitianSpace;
use crate::subspace::Subspace;

/// Largest geometry (in objects) on which incidence is computed; the
/// containment relation is built pairwise.
pub const INCIDENCE_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Full,
    Plus,
    Minus,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "plus" => Ok(Variant::Plus),
            "minus" => Ok(Variant::Minus),
            other => Err(Error::InvalidParams(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeometryObject {
    pub sub: Subspace,
    /// `±1` for semilinear flips, `None` for linear ones.
    pub disc: Option<i8>,
}

impl GeometryObject {
    pub fn dim(&self) -> usize {
        self.sub.dim()
    }
}

/// Whether `u` is `β`-totally isotropic and `β_φ`-nondegenerate.
pub fn is_object(flip: &ClassifiedFlip, u: &Subspace) -> bool {
    u.dim() > 0 && flip.space().is_totally_isotropic(u) && flip.form().is_nondegenerate_on(u)
}

/// `+1` when the `β_φ` Gram determinant of `u` is a square, `-1` otherwise.
pub fn disc(flip: &ClassifiedFlip, u: &Subspace) -> Result<i8> {
    if flip.is_linear() {
        return Err(Error::VariantRequiresSemilinear);
    }
    Ok(if classify::square_type(flip.form(), u)? { 1 } else { -1 })
}

fn object_disc(flip: &ClassifiedFlip, u: &Subspace) -> Option<i8> {
    (!flip.is_linear()).then(|| disc(flip, u).expect("objects are nondegenerate"))
}

fn in_variant(variant: Variant, n: usize, obj: &GeometryObject) -> bool {
    match variant {
        Variant::Full => true,
        Variant::Plus => obj.disc == Some(1) || obj.dim() == n,
        Variant::Minus => obj.disc == Some(-1) || obj.dim() == n,
    }
}

/// The first point of `x` (in its enumeration order) that is a point of the geometry.
pub fn first_point_in(flip: &ClassifiedFlip, x: &Subspace) -> Option<Vector> {
    let space = flip.space();
    x.points().find(|p| space.is_isotropic(p) && !flip.beta_phi(p, p).is_zero())
}

/// A point of the geometry inside the object `u`.
///
/// Tries the canonical basis vectors first; if all are `β_φ`-singular, takes
/// the first pair `b_i, b_j` with `β_φ(b_i, b_j) ≠ 0` and the smallest `λ`
/// making `b_i + λ·b_j` nonsingular.
pub fn find_point(flip: &ClassifiedFlip, u: &Subspace) -> Result<Vector> {
    if !is_object(flip, u) {
        return Err(Error::NoPoint);
    }
    let b = u.basis();
    if let Some(v) = b.iter().find(|v| !flip.beta_phi(v, v).is_zero()) {
        return Ok(v.clone());
    }
    let k = u.field();
    for i in 0..b.len() {
        for j in 0..b.len() {
            if i == j || flip.beta_phi(&b[i], &b[j]).is_zero() {
                continue;
            }
            for lambda in k.nonzero_elements() {
                let w = linalg::add(&b[i], &linalg::scale(lambda, &b[j]));
                if !flip.beta_phi(&w, &w).is_zero() {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::NoPoint)
}

/// Pairwise biorthogonal points spanning the object `u`.
pub fn biorthogonal_basis(flip: &ClassifiedFlip, u: &Subspace) -> Result<Vec<Vector>> {
    let mut rest = u.clone();
    let mut out = Vec::new();
    while rest.dim() > 0 {
        let w = find_point(flip, &rest)?;
        rest = rest.intersect(&flip.biorthogonal_complement(&Subspace::point(&w)?));
        out.push(w);
    }
    Ok(out)
}

/// An `n`-dimensional object containing the object `u`, built by adjoining
/// first points of `⟨U, φ(U)⟩^⊥`.
pub fn extend_to_maximal(flip: &ClassifiedFlip, u: &Subspace) -> Result<GeometryObject> {
    if !is_object(flip, u) {
        return Err(Error::NoPoint);
    }
    let mut cur = u.clone();
    while cur.dim() < flip.n() {
        let x = flip.biorthogonal_complement(&cur);
        let p = first_point_in(flip, &x).ok_or(Error::NoPoint)?;
        cur = cur.sum(&Subspace::point(&p)?);
        debug_assert!(is_object(flip, &cur));
    }
    let disc = object_disc(flip, &cur);
    Ok(GeometryObject { sub: cur, disc })
}

/// Extends `w_basis`, a `β_φ`-orthogonal basis of an object `W ⊆ M`, to a
/// `β_φ`-orthogonal basis of the maximal object `M`.
pub fn orthogonal_extension(
    flip: &ClassifiedFlip,
    w_basis: &[Vector],
    m: &Subspace,
) -> Result<Vec<Vector>> {
    let space = flip.space();
    let w = space.span(w_basis)?;
    if w.dim() != w_basis.len() || !m.contains(&w) {
        return Err(Error::NotContained);
    }
    if !is_object(flip, m) || m.dim() != flip.n() {
        return Err(Error::NotAChamber);
    }
    let g = flip.form().gram_of(w_basis);
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if (i == j) == g.get(i, j).is_zero() {
                return Err(Error::DegenerateSubspace);
            }
        }
    }
    let rest = flip.biorthogonal_complement(&w).intersect(m);
    let mut out = w_basis.to_vec();
    out.extend(biorthogonal_basis(flip, &rest)?);
    Ok(out)
}

/// Objects of a geometry by dimension, with containment between them.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub variant: Variant,
    pub n: usize,
    /// `objects[d - 1]` holds the `d`-dimensional objects, sorted.
    pub objects: Vec<Vec<GeometryObject>>,
}

pub fn build_geometry(flip: &ClassifiedFlip, variant: Variant, limit: u128) -> Result<Geometry> {
    if variant != Variant::Full && flip.is_linear() {
        return Err(Error::VariantRequiresSemilinear);
    }
    let space = flip.space();
    let n = space.n();
    let q = space.field().q();
    let estimate: u128 = (1..=n).map(|k| building::isotropic_count(n, q, k)).sum();
    if estimate > limit {
        return Err(Error::EnumerationTooLarge { estimate, limit });
    }
    let mut objects = Vec::with_capacity(n);
    for k in 1..=n {
        let level: Vec<GeometryObject> = building::enumerate_isotropic(space, k, limit)?
            .into_par_iter()
            .filter(|u| flip.form().is_nondegenerate_on(u))
            .map(|u| {
                let disc = object_disc(flip, &u);
                GeometryObject { sub: u, disc }
            })
            .filter(|o| in_variant(variant, n, o))
            .collect();
        objects.push(level);
    }
    Ok(Geometry { variant, n, objects })
}

impl Geometry {
    pub fn counts_by_dim(&self) -> Vec<usize> {
        self.objects.iter().map(|l| l.len()).collect()
    }

    /// `(square, non-square)` counts per dimension; empty for linear flips.
    pub fn disc_histogram_by_dim(&self) -> Vec<(usize, usize)> {
        self.objects
            .iter()
            .map(|l| {
                let plus = l.iter().filter(|o| o.disc == Some(1)).count();
                let minus = l.iter().filter(|o| o.disc == Some(-1)).count();
                (plus, minus)
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.objects.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether incidence computations stay within [`INCIDENCE_LIMIT`].
    pub fn incidence_feasible(&self) -> bool {
        self.len() <= INCIDENCE_LIMIT
    }

    pub fn all_objects(&self) -> impl Iterator<Item = &GeometryObject> {
        self.objects.iter().flatten()
    }

    pub fn points(&self) -> &[GeometryObject] {
        &self.objects[0]
    }

    /// Drops every object of dimension `d`.
    pub fn without_dimension(&self, d: usize) -> Geometry {
        let mut g = self.clone();
        g.objects[d - 1].clear();
        g
    }

    /// For each object, the indices (into the flattened object list) of the objects it strictly contains.
    fn below(&self) -> Vec<Vec<usize>> {
        let all: Vec<&GeometryObject> = self.all_objects().collect();
        let index: HashMap<&Subspace, usize> =
            all.iter().enumerate().map(|(i, o)| (&o.sub, i)).collect();
        all.par_iter()
            .map(|y| {
                let d = y.dim();
                let field = y.sub.field();
                let mut out = Vec::new();
                for k in 1..d {
                    for s in all_subspaces(field, d, k) {
                        let vs: Vec<Vector> =
                            s.basis().iter().map(|c| linalg::combine(c, y.sub.basis())).collect();
                        let sub = Subspace::span(field, y.sub.ambient(), &vs).expect("same ambient");
                        if let Some(&i) = index.get(&sub) {
                            out.push(i);
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Lengths of all maximal flags, found by walking covering relations
    /// from minimal to maximal objects.
    pub fn maximal_flag_types(&self) -> Vec<Vec<usize>> {
        let all: Vec<&GeometryObject> = self.all_objects().collect();
        let below = self.below();
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); all.len()];
        for (y, bs) in below.iter().enumerate() {
            for &x in bs {
                above[x].push(y);
            }
        }
        // x ⋖ y when nothing sits strictly between.
        let covers: Vec<Vec<usize>> = (0..all.len())
            .map(|x| {
                above[x]
                    .iter()
                    .copied()
                    .filter(|&y| !above[x].iter().any(|&z| z != y && below[y].contains(&z)))
                    .collect()
            })
            .collect();
        let mut flags = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn walk(
            x: usize,
            covers: &[Vec<usize>],
            all: &[&GeometryObject],
            stack: &mut Vec<usize>,
            flags: &mut Vec<Vec<usize>>,
        ) {
            stack.push(x);
            if covers[x].is_empty() {
                flags.push(stack.iter().map(|&i| all[i].dim()).collect());
            }
            for &y in &covers[x] {
                walk(y, covers, all, stack, flags);
            }
            stack.pop();
        }
        for x in (0..all.len()).filter(|&x| below[x].is_empty()) {
            walk(x, &covers, &all, &mut stack, &mut flags);
        }
        flags
    }

    /// Every maximal flag contains exactly one object of each type `1..=n`.
    pub fn is_transversal(&self) -> bool {
        let want: Vec<usize> = (1..=self.n).collect();
        let flags = self.maximal_flag_types();
        !flags.is_empty() && flags.iter().all(|f| *f == want)
    }

    /// Objects of the geometry strictly containing the point `u`.
    pub fn residue(&self, u: &Subspace) -> Result<Vec<GeometryObject>> {
        if u.dim() != 1 || !self.points().iter().any(|p| p.sub == *u) {
            return Err(Error::NotAPoint);
        }
        Ok(self.all_objects().filter(|o| o.dim() > 1 && o.sub.contains(u)).cloned().collect())
    }
}

/// `r_U(X) = X ∩ U^⊥⊥`.
pub fn residue_map(flip: &ClassifiedFlip, u: &Subspace, x: &Subspace) -> Subspace {
    x.intersect(&flip.biorthogonal_complement(u))
}

/// The flip restricted to `W = U^⊥⊥`, written in a hyperbolic basis of `W`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Hyperbolic basis of `W` inside the ambient space.
    pub basis: Vec<Vector>,
    pub space: HermitianSpace,
    pub map: SemilinearMap,
}

impl Restriction {
    /// Pushes a subspace of the restricted space into the ambient space.
    pub fn lift(&self, s: &Subspace) -> Subspace {
        let vs: Vec<Vector> = s.basis().iter().map(|c| linalg::combine(c, &self.basis)).collect();
        let ambient = self.basis[0].len();
        Subspace::span(s.field(), ambient, &vs).expect("same ambient")
    }
}

pub fn restrict(flip: &ClassifiedFlip, u: &Subspace) -> Result<Restriction> {
    if !is_object(flip, u) {
        return Err(Error::NoPoint);
    }
    if u.dim() >= flip.n() {
        return Err(Error::InvalidParams("restriction needs a non-maximal object".into()));
    }
    let outer = flip.space();
    let w = flip.biorthogonal_complement(u);
    let basis = outer.hyperbolic_basis(&w)?;
    let rows: Vec<Vector> =
        basis.iter().map(|b| outer.hyperbolic_coordinates(&basis, &flip.apply(b))).collect();
    let mat = Matrix::from_rows(outer.field(), &rows, basis.len())?;
    let space = HermitianSpace::standard(basis.len() / 2, outer.field())?;
    let map = SemilinearMap::new(mat, flip.map.tau())?;
    Ok(Restriction { basis, space, map })
}

/// Outcome of comparing `r_u` on a residue with the geometry of the restricted flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCheck {
    pub residue_size: usize,
    pub target_size: usize,
    pub bijective: bool,
    pub incidence_preserved: bool,
    pub discs_match: bool,
}

impl ResidueCheck {
    pub fn ok(&self) -> bool {
        self.bijective && self.incidence_preserved && self.discs_match
    }
}

/// Checks that `r_u` maps the residue of the point `u` bijectively and
/// incidence-preservingly onto the geometry the restricted flip induces.
///
/// For `Full` the target is the full restricted geometry and discs multiply
/// by `disc(u)`. For `Plus`/`Minus` the target is the restricted `Plus` geometry.
pub fn check_residue(geom: &Geometry, flip: &ClassifiedFlip, u: &Subspace, limit: u128) -> Result<ResidueCheck> {
    let res = geom.residue(u)?;
    let r = restrict(flip, u)?;
    let inner = classify::classify(&r.space, &r.map)?;
    let target_variant = if geom.variant == Variant::Full { Variant::Full } else { Variant::Plus };
    let target = build_geometry(&inner, target_variant, limit)?;
    let target_objs: HashMap<Subspace, Option<i8>> =
        target.all_objects().map(|o| (r.lift(&o.sub), o.disc)).collect();

    let images: Vec<Subspace> = res.iter().map(|x| residue_map(flip, u, &x.sub)).collect();
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    let bijective = distinct.len() == images.len()
        && images.len() == target_objs.len()
        && images.iter().zip(&res).all(|(img, x)| img.dim() + 1 == x.dim() && target_objs.contains_key(img));

    let mut incidence_preserved = true;
    for (i, x) in res.iter().enumerate() {
        for (j, y) in res.iter().enumerate() {
            if i != j && y.sub.contains(&x.sub) != images[j].contains(&images[i]) {
                incidence_preserved = false;
            }
        }
    }

    // Discs split as disc(X) = disc(u)·disc(r_u(X)), both in the restricted
    // geometry and when recomputed in the ambient space.
    let u_disc = object_disc(flip, u);
    let discs_match = res.iter().zip(&images).all(|(x, img)| {
        let Some(&t) = target_objs.get(img) else { return false };
        match (x.disc, u_disc, t) {
            (None, None, None) => true,
            (Some(dx), Some(du), Some(dt)) => {
                dx * du == dt && disc(flip, img).map(|d| d == dt).unwrap_or(false)
            }
            _ => false,
        }
    });

    Ok(ResidueCheck {
        residue_size: res.len(),
        target_size: target_objs.len(),
        bijective,
        incidence_preserved,
        discs_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::DEFAULT_ENUMERATION_LIMIT;
    use crate::classify::{canonical_flip, classify, FlipClass};
    use crate::field::FieldParams;

    fn flip(n: usize, q: u32, class: FlipClass) -> ClassifiedFlip {
        let s = HermitianSpace::standard(n, FieldParams::new(q).unwrap()).unwrap();
        classify(&s, &canonical_flip(&s, class)).unwrap()
    }

    #[test]
    fn disc_of_e_plus_f_under_class_three() {
        let f = flip(1, 3, FlipClass::III);
        let s = f.space();
        let u = s.span(&[linalg::add(&s.e(0), &s.f(0))]).unwrap();
        assert_eq!(f.beta_phi(&u.basis()[0], &u.basis()[0]), s.field().elem(2, 0));
        assert!(!is_object(&f, &u));
        assert_eq!(disc(&f, &u).unwrap(), 1);
    }

    #[test]
    fn find_point_in_standard_objects() {
        for class in FlipClass::ALL {
            let f = flip(2, 3, class);
            let s = f.space();
            let e1 = s.span(&[s.e(0)]).unwrap();
            assert_eq!(find_point(&f, &e1).unwrap(), s.e(0));
            let e12 = s.span(&[s.e(0), s.e(1)]).unwrap();
            let p = find_point(&f, &e12).unwrap();
            assert!(!f.beta_phi(&p, &p).is_zero());
            assert_eq!(biorthogonal_basis(&f, &e12).unwrap(), vec![s.e(0), s.e(1)]);
        }
    }

    #[test]
    fn degenerate_object_has_no_point() {
        let f = flip(2, 3, FlipClass::I);
        let s = f.space();
        let x = s.field().solve_norm(-s.field().fq(1)).unwrap();
        let u = s.span(&[linalg::add(&s.e(0), &linalg::scale(x, &s.e(1)))]).unwrap();
        assert!(s.is_totally_isotropic(&u));
        assert!(matches!(find_point(&f, &u), Err(Error::NoPoint)));
    }

    #[test]
    fn truncated_geometry_is_not_transversal() {
        let f = flip(2, 3, FlipClass::I);
        let g = build_geometry(&f, Variant::Full, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert!(g.is_transversal());
        assert!(!g.without_dimension(1).is_transversal());
    }

    #[test]
    fn linear_flips_have_no_signed_variants() {
        let f = flip(2, 3, FlipClass::II);
        assert!(matches!(
            build_geometry(&f, Variant::Plus, DEFAULT_ENUMERATION_LIMIT),
            Err(Error::VariantRequiresSemilinear)
        ));
    }

    #[test]
    fn extension_of_e1() {
        let f = flip(2, 3, FlipClass::I);
        let s = f.space();
        let m = extend_to_maximal(&f, &s.span(&[s.e(0)]).unwrap()).unwrap();
        assert_eq!(m.sub, s.span(&[s.e(0), s.e(1)]).unwrap());
        let ext = orthogonal_extension(&f, &[s.e(0)], &m.sub).unwrap();
        assert_eq!(ext, vec![s.e(0), s.e(1)]);
    }
}

//! The building as a chamber system: totally isotropic subspaces, chambers,
//! opposition, apartments and the set of chambers a flip sends to opposites.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldParams;
use crate::linalg::{self, Matrix, Vector};
use crate::semilinear::SemilinearMap;
use crate::space::{Form, HermitianSpace};
use crate::subspace::Subspace;

pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// A maximal flag `C_1 ⊂ … ⊂ C_n` of totally isotropic subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chamber {
    flag: Vec<Subspace>,
}

impl Chamber {
    pub fn new(space: &HermitianSpace, flag: Vec<Subspace>) -> Result<Self> {
        if !is_chamber(space, &flag) {
            return Err(Error::NotAChamber);
        }
        Ok(Self { flag })
    }

    /// `C_i = ⟨v_1, …, v_i⟩`.
    pub fn from_vectors(space: &HermitianSpace, vectors: &[Vector]) -> Result<Self> {
        let flag = (1..=space.n())
            .map(|i| space.span(&vectors[..i]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, flag)
    }

    /// `(⟨e_1⟩, ⟨e_1, e_2⟩, …)`.
    pub fn standard(space: &HermitianSpace) -> Self {
        let es: Vec<Vector> = (0..space.n()).map(|i| space.e(i)).collect();
        Self::from_vectors(space, &es).expect("standard flag is a chamber")
    }

    pub fn flag(&self) -> &[Subspace] {
        &self.flag
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.flag[i]
    }

    pub fn rank(&self) -> usize {
        self.flag.len()
    }

    pub fn image(&self, f: &SemilinearMap) -> Chamber {
        Chamber { flag: self.flag.iter().map(|c| f.image(c)).collect() }
    }
}

pub fn is_chamber(space: &HermitianSpace, flag: &[Subspace]) -> bool {
    flag.len() == space.n()
        && flag.iter().enumerate().all(|(i, c)| {
            c.ambient() == space.dim() && c.dim() == i + 1 && space.is_totally_isotropic(c)
        })
        && flag.windows(2).all(|w| w[1].contains(&w[0]))
}

/// Opposition: `C_i^⊥ ∩ D_i = 0` for every `i`.
pub fn is_opposite(space: &HermitianSpace, c: &Chamber, d: &Chamber) -> bool {
    c.flag.iter().zip(&d.flag).all(|(ci, di)| space.perp(ci).intersect(di).dim() == 0)
}

fn gaussian_binomial(n: u32, k: u32, base: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= base.pow(n - i) - 1;
        den *= base.pow(i + 1) - 1;
    }
    num / den
}

/// Closed-form number of totally isotropic `k`-subspaces of the `2n`-dimensional unitary space.
pub fn isotropic_count(n: usize, q: u32, k: usize) -> u128 {
    let q = q as u128;
    let (n, k) = (n as u32, k as u32);
    let mut count = gaussian_binomial(n, k, q * q);
    for i in (n - k + 1)..=n {
        count *= q.pow(2 * i - 1) + 1;
    }
    count
}

/// Closed-form number of complete flags of `F_{q^2}^n`.
pub fn full_flag_count(n: usize, q: u32) -> u128 {
    let qq = (q as u128) * (q as u128);
    (1..=n as u32).map(|i| (qq.pow(i) - 1) / (qq - 1)).product()
}

pub fn chamber_count(n: usize, q: u32) -> u128 {
    isotropic_count(n, q, n) * full_flag_count(n, q)
}

/// Chambers per apartment, `2^n·n!`.
pub fn apartment_size(n: usize) -> u128 {
    (1..=n as u128).product::<u128>() << n
}

fn guard(estimate: u128, limit: u128) -> Result<()> {
    if estimate > limit {
        Err(Error::EnumerationTooLarge { estimate, limit })
    } else {
        Ok(())
    }
}

/// Isotropic points of `w` as canonical one-dimensional subspaces, in `w`'s point order.
pub fn isotropic_points_in(space: &HermitianSpace, w: &Subspace) -> Vec<Vector> {
    w.points().filter(|p| space.is_isotropic(p)).collect()
}

/// All totally isotropic `k`-subspaces, sorted.
pub fn enumerate_isotropic(space: &HermitianSpace, k: usize, limit: u128) -> Result<Vec<Subspace>> {
    if k == 0 || k > space.n() {
        return Err(Error::InvalidParams(format!("k must lie in 1..={}", space.n())));
    }
    guard(isotropic_count(space.n(), space.field().q(), k), limit)?;
    let points: Vec<Subspace> = isotropic_points_in(space, &space.whole())
        .par_iter()
        .map(|p| Subspace::point(p).expect("nonzero"))
        .collect();
    let mut level: Vec<Subspace> = points;
    for _ in 1..k {
        // Each extension of U inside U^⊥ is U + p for exactly one point p of
        // a complement of U in U^⊥, and U + p is isotropic iff p is.
        let next: BTreeSet<Subspace> = level
            .par_iter()
            .fold(BTreeSet::new, |mut acc, u| {
                let rest = space.perp(u).intersect(&pivot_complement(u));
                for p in isotropic_points_in(space, &rest) {
                    acc.insert(u.sum(&Subspace::point(&p).expect("nonzero")));
                }
                acc
            })
            .reduce(BTreeSet::new, |mut a, mut b| {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                a.extend(b);
                a
            });
        level = next.into_iter().collect();
    }
    level.sort();
    Ok(level)
}

/// The span of the unit vectors at the non-pivot columns of `u`'s echelon basis.
fn pivot_complement(u: &Subspace) -> Subspace {
    let field = u.field();
    let m = u.ambient();
    let pivots: Vec<usize> = u
        .basis()
        .iter()
        .map(|b| b.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let units: Vec<Vector> =
        (0..m).filter(|j| !pivots.contains(j)).map(|j| linalg::unit_vector(field, m, j)).collect();
    Subspace::span(field, m, &units).expect("same ambient")
}

/// Hyperplanes of `m`, listed by their defining functional in point order.
pub fn hyperplanes(m: &Subspace) -> Vec<Subspace> {
    let field = m.field();
    let k = m.dim();
    Subspace::whole(field, k)
        .points()
        .map(|c| {
            let functional = Matrix::from_rows(field, &[c], k).expect("one row");
            let kernel: Vec<Vector> = functional
                .nullspace()
                .into_iter()
                .map(|x| linalg::combine(&x, m.basis()))
                .collect();
            Subspace::span(field, m.ambient(), &kernel).expect("same ambient")
        })
        .collect()
}

/// All complete flags ending in `m`.
pub fn full_flags(m: &Subspace) -> Vec<Vec<Subspace>> {
    if m.dim() == 1 {
        return vec![vec![m.clone()]];
    }
    let mut out = Vec::new();
    for h in hyperplanes(m) {
        for mut flag in full_flags(&h) {
            flag.push(m.clone());
            out.push(flag);
        }
    }
    out
}

/// All chambers, sorted; built as (generator, complete flag inside it).
pub fn enumerate_chambers(space: &HermitianSpace, limit: u128) -> Result<Vec<Chamber>> {
    guard(chamber_count(space.n(), space.field().q()), limit)?;
    let generators = enumerate_isotropic(space, space.n(), limit)?;
    let mut chambers: Vec<Chamber> = generators
        .par_iter()
        .flat_map_iter(|m| full_flags(m).into_iter().map(|flag| Chamber { flag }))
        .collect();
    chambers.sort();
    Ok(chambers)
}

/// All `k`-subspaces of `F_{q^2}^m`, by running over reduced echelon shapes.
pub fn all_subspaces(field: FieldParams, m: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    pivot_sets(m, k, 0, &mut pivots, &mut |pivots| {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let qq = field.size();
        let total = qq.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![linalg::zero_vector(field, m); k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = field.one();
            }
            for &(r, c) in &free {
                rows[r][c] = field.from_index(idx % qq);
                idx /= qq;
            }
            out.push(Subspace::span(field, m, &rows).expect("ambient matches"));
        }
    });
    out
}

fn pivot_sets(m: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for c in start..m {
        acc.push(c);
        pivot_sets(m, k, c + 1, acc, f);
        acc.pop();
    }
}

/// `2n` points paired as `(⟨e_i⟩, ⟨f_i⟩)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarFrame {
    pairs: Vec<(Subspace, Subspace)>,
}

impl PolarFrame {
    pub fn new(space: &HermitianSpace, pairs: Vec<(Subspace, Subspace)>) -> Result<Self> {
        if pairs.len() != space.n() {
            return Err(Error::InvalidFrame);
        }
        let mut reps = Vec::new();
        for (a, b) in &pairs {
            if a.dim() != 1 || b.dim() != 1 || a.ambient() != space.dim() || b.ambient() != space.dim() {
                return Err(Error::InvalidFrame);
            }
            reps.push((a.basis()[0].clone(), b.basis()[0].clone()));
        }
        let n = space.n();
        for i in 0..n {
            for j in 0..n {
                let (ei, fi) = &reps[i];
                let (ej, fj) = &reps[j];
                let ef = space.beta(ei, fj)?;
                if space.beta(ei, ej)? != space.field().zero()
                    || space.beta(fi, fj)? != space.field().zero()
                    || (i == j) == ef.is_zero()
                {
                    return Err(Error::InvalidFrame);
                }
            }
        }
        Ok(Self { pairs })
    }

    /// The frame of a hyperbolic basis ordered `e_1, …, e_n, f_1, …, f_n`.
    pub fn from_basis(space: &HermitianSpace, basis: &[Vector]) -> Result<Self> {
        let n = space.n();
        let pairs = (0..n)
            .map(|i| Ok((Subspace::point(&basis[i])?, Subspace::point(&basis[n + i])?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, pairs)
    }

    pub fn pairs(&self) -> &[(Subspace, Subspace)] {
        &self.pairs
    }
}

/// Chambers spanned by frame points: one per ordering of the pairs and choice of side.
pub fn apartment(space: &HermitianSpace, frame: &PolarFrame) -> Vec<Chamber> {
    let n = space.n();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |perm| {
        for signs in 0..(1usize << n) {
            let vectors: Vec<Vector> = perm
                .iter()
                .map(|&i| {
                    let (a, b) = &frame.pairs[i];
                    if signs >> i & 1 == 0 { a.basis()[0].clone() } else { b.basis()[0].clone() }
                })
                .collect();
            out.push(Chamber::from_vectors(space, &vectors).expect("frame flags are chambers"));
        }
    });
    out.sort();
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Chambers sent to an opposite chamber by `f`.
pub fn delta_phi(space: &HermitianSpace, f: &SemilinearMap, chambers: &[Chamber]) -> Vec<Chamber> {
    chambers.par_iter().filter(|c| is_opposite(space, c, &c.image(f))).cloned().collect()
}

/// Chambers all of whose members are nondegenerate for `form`.
pub fn nondegenerate_chambers(form: &Form, chambers: &[Chamber]) -> Vec<Chamber> {
    chambers
        .par_iter()
        .filter(|c| c.flag.iter().all(|ci| form.is_nondegenerate_on(ci)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, q: u32) -> HermitianSpace {
        HermitianSpace::standard(n, FieldParams::new(q).unwrap()).unwrap()
    }

    #[test]
    fn closed_forms_at_small_parameters() {
        assert_eq!(isotropic_count(2, 3, 1), 280);
        assert_eq!(isotropic_count(2, 3, 2), 112);
        assert_eq!(chamber_count(2, 3), 1120);
        assert_eq!(isotropic_count(1, 3, 1), 4);
        assert_eq!(apartment_size(2), 8);
        assert_eq!(apartment_size(3), 48);
        assert!(chamber_count(3, 3) > DEFAULT_ENUMERATION_LIMIT);
    }

    #[test]
    fn isotropic_enumeration_matches_brute_force_at_1_3() {
        let s = space(1, 3);
        let mut brute: Vec<Subspace> = all_subspaces(s.field(), 2, 1)
            .into_iter()
            .filter(|u| s.is_totally_isotropic(u))
            .collect();
        brute.sort();
        assert_eq!(brute.len(), 4);
        assert_eq!(enumerate_isotropic(&s, 1, DEFAULT_ENUMERATION_LIMIT).unwrap(), brute);
    }

    #[test]
    fn chamber_predicate() {
        let s = space(2, 3);
        let e1 = s.span(&[s.e(0)]).unwrap();
        let e12 = s.span(&[s.e(0), s.e(1)]).unwrap();
        let e1f1 = s.span(&[s.e(0), s.f(0)]).unwrap();
        assert!(is_chamber(&s, &[e1.clone(), e12]));
        assert!(!is_chamber(&s, &[e1, e1f1]));
    }

    #[test]
    fn opposition_examples() {
        let s = space(2, 3);
        let c = Chamber::standard(&s);
        let d = Chamber::from_vectors(&s, &[s.f(0), s.f(1)]).unwrap();
        assert!(is_opposite(&s, &c, &d));
        assert!(is_opposite(&s, &d, &c));
        assert!(!is_opposite(&s, &c, &c));
    }

    #[test]
    fn guard_rejects_large_requests() {
        let s = space(3, 3);
        assert!(matches!(
            enumerate_chambers(&s, DEFAULT_ENUMERATION_LIMIT),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn apartments_have_expected_size() {
        for n in [1, 2, 3] {
            let s = space(n, 3);
            let basis: Vec<Vector> = (0..2 * n).map(|i| linalg::unit_vector(s.field(), 2 * n, i)).collect();
            let frame = PolarFrame::from_basis(&s, &basis).unwrap();
            let apt = apartment(&s, &frame);
            assert_eq!(apt.len() as u128, apartment_size(n));
            let distinct: BTreeSet<_> = apt.iter().collect();
            assert_eq!(distinct.len(), apt.len());
        }
    }

    #[test]
    fn invalid_frame_is_rejected() {
        let s = space(2, 3);
        let p = |v: Vector| Subspace::point(&v).unwrap();
        let bad = vec![(p(s.e(0)), p(s.f(0))), (p(s.e(1)), p(s.f(0)))];
        assert!(matches!(PolarFrame::new(&s, bad), Err(Error::InvalidFrame)));
    }
}

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unitary_flips::building::{is_opposite, Chamber};
use unitary_flips::classify::{canonical_flip, classify, ClassifiedFlip, FlipClass};
use unitary_flips::field::{FieldParams, Fq2};
use unitary_flips::geometry::{disc, Variant};
use unitary_flips::linalg::{self, Vector};
use unitary_flips::random;
use unitary_flips::semilinear::SemilinearMap;
use unitary_flips::space::{HermitianSpace, Twist};
use unitary_flips::stabilizer;
use unitary_flips::subspace::Subspace;

fn space(n: usize, q: u32) -> HermitianSpace {
    HermitianSpace::standard(n, FieldParams::new(q).unwrap()).unwrap()
}

fn flip(s: &HermitianSpace, class: FlipClass) -> ClassifiedFlip {
    classify(s, &canonical_flip(s, class)).unwrap()
}

fn class_strategy() -> impl Strategy<Value = FlipClass> {
    prop::sample::select(FlipClass::ALL.to_vec())
}

fn semilinear_class() -> impl Strategy<Value = FlipClass> {
    prop::sample::select(vec![FlipClass::III, FlipClass::IV])
}

fn params() -> impl Strategy<Value = (usize, u32)> {
    prop::sample::select(vec![(1, 3), (1, 5), (2, 3), (2, 5), (1, 7)])
}

fn element_pair() -> impl Strategy<Value = (u32, [u32; 4])> {
    prop::sample::select(vec![3u32, 5, 7, 11])
        .prop_flat_map(|q| (Just(q), prop::array::uniform4(0..q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_norm_and_trace_laws((q, [a0, a1, b0, b1]) in element_pair()) {
        let k = FieldParams::new(q).unwrap();
        let a = k.elem(a0 as i64, a1 as i64);
        let b = k.elem(b0 as i64, b1 as i64);
        prop_assert_eq!((a * b).frobenius(), a.frobenius() * b.frobenius());
        prop_assert_eq!((a + b).frobenius(), a.frobenius() + b.frobenius());
        prop_assert_eq!(a.frobenius().frobenius(), a);
        prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        prop_assert_eq!((a + b).trace(), a.trace() + b.trace());
        prop_assert_eq!(a * a.frobenius(), Fq2::from(a.norm()));
        if !a.is_zero() && !a.is_square().unwrap() {
            prop_assert!(!a.norm().is_square());
        }
    }

    #[test]
    fn echelon_form_ignores_row_operations((n, q) in params(), seed in any::<u64>()) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=s.dim());
        let rows: Vec<Vector> = (0..k).map(|_| random::vector_in(&s.whole(), &mut rng)).collect();
        let mut mixed = rows.clone();
        for _ in 0..10 {
            let i = rng.gen_range(0..k);
            let j = rng.gen_range(0..k);
            match rng.gen_range(0..3) {
                0 => mixed.swap(i, j),
                1 => mixed[i] = linalg::scale(random::nonzero_element(s.field(), &mut rng), &mixed[i]),
                _ if i != j => {
                    let c = random::element(s.field(), &mut rng);
                    mixed[i] = linalg::add(&mixed[i], &linalg::scale(c, &mixed[j]));
                }
                _ => {}
            }
        }
        prop_assert_eq!(s.span(&rows).unwrap(), s.span(&mixed).unwrap());
    }

    #[test]
    fn double_perp_and_complement_dimension((n, q) in params(), seed in any::<u64>()) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random::subspace_in(&s.whole(), rng.gen_range(0..=s.dim()), &mut rng);
        let p = s.perp(&u);
        prop_assert_eq!(u.dim() + p.dim(), s.dim());
        prop_assert_eq!(s.perp(&p), u);
    }

    #[test]
    fn perp_equals_induced_perp_of_image(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let f = flip(&s, class);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random::subspace_in(&s.whole(), rng.gen_range(1..=s.dim()), &mut rng);
        let fu = f.map.image(&u);
        prop_assert_eq!(s.perp(&u), f.form().perp(&fu));
        let both = u.sum(&fu);
        prop_assert_eq!(s.perp(&both), f.biorthogonal_complement(&u));
        prop_assert_eq!(f.form().perp(&both), f.biorthogonal_complement(&u));
    }

    #[test]
    fn class_is_a_conjugation_invariant(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::unitary(&s, &mut rng).unwrap();
        let conj = canonical_flip(&s, class).conjugate_by(&g).unwrap();
        let f = classify(&s, &conj).unwrap();
        prop_assert_eq!(f.class, class);
        prop_assert!(f.relations_hold(&f.basis));
    }

    #[test]
    fn scalar_multiples_satisfy_norm_relation(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random::nonzero_element(s.field(), &mut rng);
        let f = canonical_flip(&s, class).scaled(c).unwrap();
        let lambda = f.is_projective_involution().unwrap();
        let a = f.similitude_factor(&s).unwrap();
        prop_assert_eq!(lambda.norm(), a * a);
        prop_assert_eq!(classify(&s, &f).unwrap().class, class);
    }

    #[test]
    fn induced_form_depends_on_the_image_only(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = canonical_flip(&s, class);
        let g = SemilinearMap::new(random::unitary(&s, &mut rng).unwrap(), Twist::Identity).unwrap();
        let fg = f.compose(&g);
        let (form_f, form_fg) = (f.induced_form(&s), fg.induced_form(&s));
        for _ in 0..10 {
            let u = random::vector_in(&s.whole(), &mut rng);
            let v = random::vector_in(&s.whole(), &mut rng);
            let w = g.inverse().apply(&v);
            prop_assert_eq!(form_fg.eval(&u, &w), form_f.eval(&u, &v));
        }
    }

    #[test]
    fn similitudes_preserve_opposition(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chamber = |rng: &mut ChaCha8Rng| {
            let b = random::hyperbolic_basis(&s, rng).unwrap();
            Chamber::from_vectors(&s, &b[..n]).unwrap()
        };
        let (c, d) = (chamber(&mut rng), chamber(&mut rng));
        let scale = random::nonzero_element(s.field(), &mut rng);
        let g = canonical_flip(&s, class)
            .compose(&SemilinearMap::new(random::unitary(&s, &mut rng).unwrap(), Twist::Identity).unwrap())
            .scaled(scale)
            .unwrap();
        prop_assert_eq!(is_opposite(&s, &c, &d), is_opposite(&s, &c.image(&g), &d.image(&g)));
    }

    #[test]
    fn discriminants_multiply_along_nested_objects(
        q in prop::sample::select(vec![3u32, 5]), class in semilinear_class(), seed in any::<u64>()
    ) {
        let s = space(2, q);
        let f = flip(&s, class);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random::chamber(&f, Variant::Full, &mut rng).unwrap();
        let (inner, outer): (&Subspace, &Subspace) = (c.get(0), c.get(1));
        let w = f.biorthogonal_complement(inner).intersect(outer);
        prop_assert_eq!(w.dim(), 1);
        prop_assert_eq!(disc(&f, outer).unwrap(), disc(&f, inner).unwrap() * disc(&f, &w).unwrap());
        prop_assert_eq!(disc(&f, outer).unwrap(), if class == FlipClass::III { 1 } else { -1 });
    }

    #[test]
    fn objects_and_their_images_are_independent(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let f = flip(&s, class);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random::chamber(&f, Variant::Full, &mut rng).unwrap();
        for w in c.flag() {
            let both = w.sum(&f.map.image(w));
            prop_assert_eq!(both.dim(), 2 * w.dim());
            prop_assert!(s.form().is_nondegenerate_on(&both));
        }
    }

    #[test]
    fn transporters_compose_inside_the_stabilizer(
        (n, q) in params(), class in class_strategy(), seed in any::<u64>()
    ) {
        let s = space(n, q);
        let f = flip(&s, class);
        let variant = if class.is_linear() { Variant::Full } else { Variant::Plus };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cs: Vec<Chamber> = (0..3).map(|_| random::chamber(&f, variant, &mut rng).unwrap()).collect();
        let t01 = stabilizer::transporter(&f, &cs[0], &cs[1], variant).unwrap();
        let t12 = stabilizer::transporter(&f, &cs[1], &cs[2], variant).unwrap();
        prop_assert!(stabilizer::verify_transporter(&f, &t01, &cs[0], &cs[1]).unwrap());
        prop_assert!(stabilizer::verify_transporter(&f, &t01.mul(&t12), &cs[0], &cs[2]).unwrap());
        prop_assert!(stabilizer::verify_transporter(&f, &t01.inverse().unwrap(), &cs[1], &cs[0]).unwrap());
    }
}

//! The geometry of isotropic subspaces on which the induced form is
//! nondegenerate, for each canonical flip, with its discriminant split.

use unitary_flips::building::DEFAULT_ENUMERATION_LIMIT;
use unitary_flips::classify::{canonical_flip, classify, FlipClass};
use unitary_flips::field::FieldParams;
use unitary_flips::geometry::{build_geometry, check_residue, Variant};
use unitary_flips::space::HermitianSpace;

fn main() -> unitary_flips::Result<()> {
    let space = HermitianSpace::standard(2, FieldParams::new(3)?)?;
    for class in FlipClass::ALL {
        let flip = classify(&space, &canonical_flip(&space, class))?;
        let variants: &[Variant] =
            if class.is_linear() { &[Variant::Full] } else { &[Variant::Full, Variant::Plus, Variant::Minus] };
        for &variant in variants {
            let geom = build_geometry(&flip, variant, DEFAULT_ENUMERATION_LIMIT)?;
            let residues_ok = geom
                .points()
                .iter()
                .all(|p| check_residue(&geom, &flip, &p.sub, DEFAULT_ENUMERATION_LIMIT).is_ok_and(|r| r.ok()));
            print!("{class} {variant}: objects per dim {:?}", geom.counts_by_dim());
            if !class.is_linear() {
                print!(", (square, non-square) {:?}", geom.disc_histogram_by_dim());
            }
            println!(", transversal {}, residues ok {residues_ok}", geom.is_transversal());
        }
    }
    Ok(())
}

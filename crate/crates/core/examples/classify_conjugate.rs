//! Hides a canonical flip behind a random unitary change of basis and a
//! scalar, then recovers its class and a witness basis.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitary_flips::classify::{canonical_flip, classify, FlipClass};
use unitary_flips::field::FieldParams;
use unitary_flips::random;
use unitary_flips::space::HermitianSpace;

fn main() -> unitary_flips::Result<()> {
    let space = HermitianSpace::standard(2, FieldParams::new(5)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for class in FlipClass::ALL {
        let g = random::unitary(&space, &mut rng)?;
        let c = random::nonzero_element(space.field(), &mut rng);
        let hidden = canonical_flip(&space, class).conjugate_by(&g)?.scaled(c)?;
        let flip = classify(&space, &hidden)?;
        println!(
            "hid class {class} (scaled by {c}); recovered class {} with scalar {}, relations hold: {}",
            flip.class,
            flip.scalar,
            flip.relations_hold(&flip.basis)
        );
    }
    Ok(())
}

//! Flag transitivity made explicit: a centralizer element carrying one
//! chamber of the geometry onto another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitary_flips::classify::{canonical_flip, classify, FlipClass};
use unitary_flips::field::FieldParams;
use unitary_flips::geometry::Variant;
use unitary_flips::random;
use unitary_flips::space::HermitianSpace;
use unitary_flips::stabilizer::{transporter, verify_transporter};

fn main() -> unitary_flips::Result<()> {
    let space = HermitianSpace::standard(2, FieldParams::new(3)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for class in FlipClass::ALL {
        let flip = classify(&space, &canonical_flip(&space, class))?;
        let variant = if class.is_linear() { Variant::Full } else { Variant::Plus };
        let c = random::chamber(&flip, variant, &mut rng)?;
        let d = random::chamber(&flip, variant, &mut rng)?;
        let t = transporter(&flip, &c, &d, variant)?;
        println!("class {class}, {variant} chambers: transporter verified = {}", verify_transporter(&flip, &t, &c, &d)?);
        for row in t.to_rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    Ok(())
}

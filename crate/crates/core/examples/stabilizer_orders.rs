//! Predicted centralizer types and orders, with a brute-force count over
//! all 2×2 matrices when n = 1.

use unitary_flips::classify::{canonical_flip, classify, FlipClass};
use unitary_flips::field::FieldParams;
use unitary_flips::space::HermitianSpace;
use unitary_flips::stabilizer::{enumerate_stabilizer_order, orthogonal_type_from_gram, predicted_group};

fn main() -> unitary_flips::Result<()> {
    for q in [3, 5] {
        let space = HermitianSpace::standard(1, FieldParams::new(q)?)?;
        for class in FlipClass::ALL {
            let flip = classify(&space, &canonical_flip(&space, class))?;
            let g = predicted_group(&flip);
            println!("q = {q}, class {class}: {} of order {}, counted {}", g.family, g.order, enumerate_stabilizer_order(&flip)?);
        }
    }
    let space = HermitianSpace::standard(3, FieldParams::new(5)?)?;
    for class in FlipClass::ALL {
        let flip = classify(&space, &canonical_flip(&space, class))?;
        let g = predicted_group(&flip);
        print!("n = 3, q = 5, class {class}: {} of order {}", g.family, g.order);
        if !class.is_linear() {
            print!(" (Gram-equalizing basis gives {})", orthogonal_type_from_gram(&flip)?);
        }
        println!();
    }
    Ok(())
}

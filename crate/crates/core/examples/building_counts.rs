//! Counts of isotropic subspaces and chambers, closed form against enumeration.

use unitary_flips::building::{self, DEFAULT_ENUMERATION_LIMIT};
use unitary_flips::field::FieldParams;
use unitary_flips::space::HermitianSpace;

fn main() -> unitary_flips::Result<()> {
    for (n, q) in [(1, 3), (2, 3), (2, 5), (3, 3)] {
        let space = HermitianSpace::standard(n, FieldParams::new(q)?)?;
        print!("(n, q) = ({n}, {q}):");
        for k in 1..=n {
            print!(" {} isotropic {k}-spaces,", building::isotropic_count(n, q, k));
        }
        println!(" {} chambers, apartments of {}", building::chamber_count(n, q), building::apartment_size(n));
        match building::enumerate_chambers(&space, DEFAULT_ENUMERATION_LIMIT) {
            Ok(chambers) => println!("  enumerated {} chambers", chambers.len()),
            Err(e) => println!("  enumeration refused: {e}"),
        }
    }
    Ok(())
}

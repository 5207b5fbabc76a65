//! The four canonical flips and their induced forms.

use unitary_flips::classify::{canonical_flip, FlipClass};
use unitary_flips::field::FieldParams;
use unitary_flips::serial::FlipFile;
use unitary_flips::space::HermitianSpace;

fn main() -> unitary_flips::Result<()> {
    let space = HermitianSpace::standard(2, FieldParams::new(3)?)?;
    for class in FlipClass::ALL {
        let f = canonical_flip(&space, class);
        let form = f.induced_form(&space);
        println!("class {class}: similitude factor {}", f.similitude_factor(&space)?.value());
        println!("  flip file: {}", serde_json::to_string(&FlipFile::from_map(&space, &f)).unwrap());
        for row in form.gram.to_rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    Ok(())
}

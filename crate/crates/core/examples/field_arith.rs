//! Arithmetic in F_{q^2} = F_q[ω]: Frobenius, norm, trace, square roots.

use unitary_flips::field::FieldParams;

fn main() -> unitary_flips::Result<()> {
    let q = std::env::args().nth(1).map_or(Ok(5), |s| s.parse()).expect("q must be an integer");
    let k = FieldParams::new(q)?;
    println!("F_{}^2 with ω^2 = {}", q, k.r());

    let a = k.elem(1, 2);
    let b = k.elem(3, 1);
    println!("a = {a}, b = {b}");
    println!("a·b = {}, a/b = {}", a * b, a * b.inv()?);
    println!("σ(a) = {}, N(a) = {}, Tr(a) = {}", a.frobenius(), a.norm().value(), a.trace().value());

    let squares = k.nonzero_elements().filter(|x| x.is_square().unwrap()).count();
    println!("{squares} nonzero squares out of {}", k.size() - 1);
    println!("smallest non-square λ = {}", k.smallest_non_square());
    println!("trace-zero unit α = {}", k.trace_zero_unit());
    if a.is_square()? {
        println!("sqrt(a) = {}", a.sqrt()?);
    }
    let c = k.solve_norm(k.fq(2))?;
    println!("N({c}) = 2");
    Ok(())
}

//! Decide whether a field is tangent to the torus and print its cofactor.

use std::error::Error;

use torus_fields::families::recognize;
use torus_fields::vfield::{Invariance, Torus, VectorField};

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    let fields = [
        ("cubic", "(1/4)*x*z + x*y^2", "(1/4)*y*z - x^2*y", "(1/2)*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)"),
        ("rotation", "y", "-x", "0"),
        ("radial", "x", "y", "z"),
    ];
    for (name, p, q, r) in fields {
        let chi = VectorField::parse(p, q, r, torus.field())?;
        match chi.cofactor_on_torus(&torus) {
            Invariance::Invariant { cofactor } => {
                println!("{name:>8}: on torus, K = {cofactor}, family {}", recognize(&chi, &torus).name())
            }
            Invariance::NotInvariant => println!("{name:>8}: not tangent to the torus"),
        }
    }
    Ok(())
}

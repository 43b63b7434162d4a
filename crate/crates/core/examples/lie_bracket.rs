//! Lie brackets of tangent fields stay tangent to the torus.

use std::error::Error;

use torus_fields::vfield::{Torus, VectorField};

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    let k = torus.field();
    let x = VectorField::parse("x^2*z", "x*y*z", "2*x*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)", k)?;
    let y = VectorField::parse("y^3", "-x*y^2", "0", k)?;
    let b = x.lie_bracket(&y);
    println!("X = {x}");
    println!("Y = {y}");
    println!("[X, Y] = {b}");
    let k_b = b.cofactor_on_torus(&torus);
    println!("[X, Y] tangent to the torus: {}", k_b.is_invariant());
    if let Some(c) = k_b.cofactor() {
        println!("cofactor of [X, Y]: {c}");
    }
    Ok(())
}

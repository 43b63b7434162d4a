//! Invariant meridian planes from the extactic polynomial `Qx − Py`.

use std::error::Error;

use torus_fields::curves::{extactic_xy, invariant_meridians, Planes};
use torus_fields::families::{build_cubic, CubicParams};
use torus_fields::algebra::Scalar;
use torus_fields::vfield::Torus;

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    // f = (x - y)(x + 2y): four meridians, in the planes x = y and x = -2y
    let params = CubicParams::new(torus.parse("1 + z")?, torus.parse("(x - y)*(x + 2*y)")?, Scalar::zero(), Scalar::zero());
    let chi = build_cubic(&params, &torus)?;
    println!("chi = {chi}");
    println!("extactic: {}", extactic_xy(&chi));
    match invariant_meridians(&chi)? {
        Planes::Infinite => println!("every meridian is invariant"),
        Planes::Finite(planes) => {
            for w in planes {
                println!("  {}  (multiplicity {})", w.plane, w.multiplicity);
            }
        }
    }
    Ok(())
}

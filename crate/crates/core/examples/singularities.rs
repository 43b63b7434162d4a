//! Singular points of a field `(Ay, −Ax, 0)` and their linear type.

use std::error::Error;

use torus_fields::dynamics::{classify_singularity, singular_points, GridOptions, SingularSet};
use torus_fields::families::recognize;
use torus_fields::vfield::{Torus, VectorField};

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    // A = y^2 + (z - 1/2)^2 vanishes at isolated points; A = x - z/2 along curves
    for a in ["y^2 + (z - 1/2)^2", "x - (1/2)*z"] {
        let chi = VectorField::parse(&format!("y*({a})"), &format!("-x*({a})"), "0", torus.field())?;
        let tag = recognize(&chi, &torus);
        let found = singular_points(&chi, &tag, &torus, GridOptions { n: 256 })?;
        println!("A = {a}: {:?}", found.method);
        match &found.set {
            SingularSet::IsolatedPoints { points } => {
                for p in points {
                    let class = classify_singularity(&chi, p.point, &torus)?;
                    println!("  point {:?}: {class:?}", p.point.map(|c| (c * 1e6).round() / 1e6));
                }
            }
            SingularSet::Curves { components, .. } => println!("  {} curve component(s)", components.len()),
            other => println!("  {other:?}"),
        }
    }
    Ok(())
}

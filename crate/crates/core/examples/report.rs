//! The full analysis report, as text and JSON.

use std::error::Error;

use torus_fields::report::{analyse, InputEcho, ReportOptions};
use torus_fields::vfield::{Torus, VectorField};

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    let (p, q, r) = ("(1/4)*x*z + x*y^2", "(1/4)*y*z - x^2*y", "(1/2)*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)");
    let chi = VectorField::parse(p, q, r, torus.field())?;
    let input = InputEcho { px: p.into(), qy: q.into(), rz: r.into(), m: "4".into() };
    let report = analyse(&chi, &torus, input, &ReportOptions::default());
    println!("{}", report.to_text());
    println!("{}", report.to_json());
    Ok(())
}

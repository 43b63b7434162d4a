//! Invariant parallels and their periodicity for the two-parallel family.

use std::error::Error;

use torus_fields::algebra::Scalar;
use torus_fields::curves::{invariant_parallels, Planes};
use torus_fields::dynamics::{parallel_periodicity, ParallelSide};
use torus_fields::families::{build_two_parallel, TwoParallelParams};
use torus_fields::vfield::Torus;

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    for f in ["x^2 + y^2 + 5", "x*y"] {
        let params = TwoParallelParams { p: Scalar::from_integer(1), q: Scalar::zero(), f: torus.parse(f)? };
        let chi = build_two_parallel(&params, &torus)?;
        println!("f = {f}");
        if let Planes::Finite(planes) = invariant_parallels(&chi)? {
            for w in planes {
                println!("  invariant plane z = {}", w.plane.k);
            }
        }
        for side in [ParallelSide::Top, ParallelSide::Bottom] {
            println!("  z = {:>2}: {:?}", side.z(), parallel_periodicity(&params, &torus, side)?);
        }
    }
    Ok(())
}

//! Limit cycles on the invariant meridians of a cubic field, with stability.

use std::error::Error;

use torus_fields::algebra::Scalar;
use torus_fields::curves::check_four_meridian_criterion;
use torus_fields::dynamics::{meridian_periodicity, PeriodicityVerdict};
use torus_fields::families::CubicParams;
use torus_fields::vfield::Torus;

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    for (k_prime, f) in [("2 + z", "x*y"), ("-1", "x^2 - 4*y^2"), ("1 + 2*z", "x*y")] {
        let params = CubicParams::new(torus.parse(k_prime)?, torus.parse(f)?, Scalar::zero(), Scalar::zero());
        println!("K' = {k_prime}, f = {f}: four meridians = {}", check_four_meridian_criterion(&params, &torus));
        for v in meridian_periodicity(&params, &torus)? {
            let text = match &v.verdict {
                PeriodicityVerdict::LimitCycle { stability } => format!("limit cycle ({stability:?})"),
                PeriodicityVerdict::NotPeriodic { witness } => {
                    format!("not periodic, K' vanishes at phi = {:.6}", witness.parameter)
                }
                other => format!("{other:?}"),
            };
            println!("  theta = {:>9.6}: {text}", v.theta);
        }
    }
    Ok(())
}

//! RK4 trajectories on the torus, exported as CSV.

use std::error::Error;

use torus_fields::families::{build_kolmogorov, KolmogorovParams};
use torus_fields::integrator::{integrate_with, IntegrateOptions};
use torus_fields::algebra::Scalar;
use torus_fields::vfield::Torus;

fn main() -> Result<(), Box<dyn Error>> {
    let torus = Torus::with_m(4)?;
    let chi = build_kolmogorov(&KolmogorovParams { c1: Scalar::from_integer(1), c2: Scalar::from_integer(2) }, &torus);
    let start = torus.point(0.3, 1.0);
    let mut opts = IntegrateOptions::new(5.0, 1e-3);
    opts.sample_every = 500;
    let traj = integrate_with(&chi, &torus, start, opts)?;
    eprintln!("max drift off the torus: {:.3e}", traj.max_drift(&torus));
    print!("{}", traj.to_csv());
    Ok(())
}

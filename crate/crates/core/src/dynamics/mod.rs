//! Cylindrical reduction, periodic orbits on invariant meridians and
//! parallels, and singular points on the torus.

mod periodic;
mod scan;
mod singular;

pub use periodic::{
    meridian_periodicity, meridian_verdicts, parallel_periodicity, parallel_verdicts,
    MeridianVerdict, ParallelSide, ParallelVerdict, PeriodicityVerdict, Stability, Witness,
    MERIDIAN_SCAN_POINTS,
};
pub use singular::{
    chart_jacobian, classify_singularity, min_norm_on_grid, singular_points, CurveComponent,
    GridOptions, SingClass, SingularAnalysis, SingularMethod, SingularPoint, SingularSet,
};

use thiserror::Error;

use crate::algebra::{FloatPoly, MultiPoly, Var};
use crate::curves::CurvesError;
use crate::families::FamilyError;
use crate::vfield::VectorField;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("chart z = ±√(1 − (x² + y² − m)²) is singular at z = {z}")]
    ChartError { z: f64 },
    #[error(transparent)]
    Curves(#[from] CurvesError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// `χ` in cylindrical coordinates: `ṙ = (Px + Qy)/r`, `θ̇ = (Qx − Py)/r²`,
/// `ż = R`. Valid for `r > 0`, which always holds on the torus.
#[derive(Debug, Clone)]
pub struct CylindricalField {
    radial: MultiPoly,
    angular: MultiPoly,
    vertical: MultiPoly,
    radial_f: FloatPoly,
    angular_f: FloatPoly,
    vertical_f: FloatPoly,
}

impl CylindricalField {
    /// `Px + Qy`, so that `ṙ = radial / r`.
    pub fn radial_numerator(&self) -> &MultiPoly {
        &self.radial
    }

    /// `Qx − Py`, so that `θ̇ = angular / r²`.
    pub fn angular_numerator(&self) -> &MultiPoly {
        &self.angular
    }

    pub fn z_dot_poly(&self) -> &MultiPoly {
        &self.vertical
    }

    pub fn r_dot(&self, pt: [f64; 3]) -> f64 {
        self.radial_f.eval(pt) / pt[0].hypot(pt[1])
    }

    pub fn theta_dot(&self, pt: [f64; 3]) -> f64 {
        self.angular_f.eval(pt) / (pt[0] * pt[0] + pt[1] * pt[1])
    }

    pub fn z_dot(&self, pt: [f64; 3]) -> f64 {
        self.vertical_f.eval(pt)
    }

    /// `(ṙ, θ̇, ż)` at a Cartesian point.
    pub fn eval(&self, pt: [f64; 3]) -> [f64; 3] {
        [self.r_dot(pt), self.theta_dot(pt), self.z_dot(pt)]
    }
}

pub fn cylindrical_form(chi: &VectorField) -> CylindricalField {
    let k = chi.field();
    let x = MultiPoly::var(k, Var::X);
    let y = MultiPoly::var(k, Var::Y);
    let radial = &(chi.p() * &x) + &(chi.q() * &y);
    let angular = crate::curves::extactic_xy(chi);
    let vertical = chi.r().clone();
    CylindricalField {
        radial_f: radial.to_float(),
        angular_f: angular.to_float(),
        vertical_f: vertical.to_float(),
        radial,
        angular,
        vertical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;
    use crate::families::{build_cubic, build_two_parallel, CubicParams, TwoParallelParams};
    use crate::vfield::Torus;

    #[test]
    fn example_theta_dot() {
        let t = Torus::with_m(4).unwrap();
        let chi = build_cubic(
            &CubicParams::new(
                t.parse("1").unwrap(),
                t.parse("x*y").unwrap(),
                Scalar::zero(),
                Scalar::zero(),
            ),
            &t,
        )
        .unwrap();
        let cyl = cylindrical_form(&chi);
        for i in 0..50 {
            let (th, ph) = (0.37 * i as f64, 1.13 * i as f64);
            let p = t.point(th, ph);
            let r2 = p[0] * p[0] + p[1] * p[1];
            assert!((cyl.theta_dot(p) + 0.5 * r2 * (2.0 * th).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn rotation() {
        let t = Torus::with_m(4).unwrap();
        let chi = VectorField::parse("y", "-x", "0", t.field()).unwrap();
        let v = cylindrical_form(&chi).eval(t.point(0.3, 2.0));
        assert!(v[0].abs() < 1e-15 && (v[1] + 1.0).abs() < 1e-15 && v[2] == 0.0);
    }

    #[test]
    fn two_parallel_z_dot() {
        let t = Torus::with_m(4).unwrap();
        let params = TwoParallelParams {
            p: Scalar::from_integer(2),
            q: Scalar::from_integer(-1),
            f: t.parse("x*z").unwrap(),
        };
        let chi = build_two_parallel(&params, &t).unwrap();
        let cyl = cylindrical_form(&chi);
        for i in 0..20 {
            let (th, ph) = (0.5 * i as f64, 0.77 * i as f64);
            let p = t.point(th, ph);
            let r = p[0].hypot(p[1]);
            let expect = r * (2.0 * th.cos() - th.sin()) * (p[2] * p[2] - 1.0);
            assert!((cyl.z_dot(p) - expect).abs() < 1e-10);
        }
    }
}

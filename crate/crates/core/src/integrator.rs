//! Fixed-step RK4 integration of trajectories on the torus, with CSV and
//! JSON export.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{FloatPoly, Var};
use crate::vfield::{FloatField, Torus, VectorField};

/// Integration aborts once `‖state‖` exceeds this.
pub const ESCAPE_NORM: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error("step size and end time must be positive and finite (dt = {dt}, t_end = {t_end})")]
    InvalidStep { dt: f64, t_end: f64 },
    #[error("trajectory escaped at t = {t}: |state| = {norm:.3e}")]
    StepOverflow { t: f64, norm: f64 },
    #[error("malformed trajectory JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Sample {
    pub fn point(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Samples in time order; immutable once returned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Whether each step was followed by a projection onto the torus.
    pub projected: bool,
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    /// One Newton step along `∇F` after every RK4 step.
    pub project: bool,
    /// Record every `k`-th step (the final state is always recorded).
    pub sample_every: usize,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        IntegrateOptions {
            t_end,
            dt,
            project: false,
            sample_every: 1,
        }
    }
}

struct Projector {
    f: FloatPoly,
    grad: [FloatPoly; 3],
}

impl Projector {
    fn new(torus: &Torus) -> Self {
        let f = torus.polynomial();
        Projector {
            f: f.to_float(),
            grad: Var::ALL.map(|v| f.derivative(v).to_float()),
        }
    }

    fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let g = self.grad.each_ref().map(|d| d.eval(p));
        let g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        if g2 == 0.0 {
            return p;
        }
        let c = self.f.eval(p) / g2;
        [p[0] - c * g[0], p[1] - c * g[1], p[2] - c * g[2]]
    }
}

fn axpy(a: f64, x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

/// One classical Runge–Kutta step.
pub fn rk4_step(field: &FloatField, p: [f64; 3], h: f64) -> [f64; 3] {
    let k1 = field.eval(p);
    let k2 = field.eval(axpy(0.5 * h, k1, p));
    let k3 = field.eval(axpy(0.5 * h, k2, p));
    let k4 = field.eval(axpy(h, k3, p));
    std::array::from_fn(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn sample(torus: &Torus, t: f64, p: [f64; 3]) -> Sample {
    let (theta, phi) = torus.angles(p);
    Sample {
        t,
        x: p[0],
        y: p[1],
        z: p[2],
        theta,
        phi,
    }
}

/// Integrates `χ` from `start` over `[0, t_end]` with step `dt`; the last
/// step is shortened to land on `t_end`.
pub fn integrate_with(
    chi: &VectorField,
    torus: &Torus,
    start: [f64; 3],
    opts: IntegrateOptions,
) -> Result<Trajectory, IntegratorError> {
    let IntegrateOptions {
        t_end,
        dt,
        project,
        sample_every,
    } = opts;
    if !(dt > 0.0 && t_end > 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(IntegratorError::InvalidStep { dt, t_end });
    }
    let field = chi.to_float();
    let projector = project.then(|| Projector::new(torus));
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let every = sample_every.max(1);
    let mut samples = Vec::with_capacity(steps / every + 2);
    let mut p = start;
    samples.push(sample(torus, 0.0, p));
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * dt;
        let t = if k == steps { t_end } else { k as f64 * dt };
        p = rk4_step(&field, p, t - t_prev);
        if let Some(proj) = &projector {
            p = proj.apply(p);
        }
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if !(norm <= ESCAPE_NORM) {
            return Err(IntegratorError::StepOverflow { t, norm });
        }
        if k % every == 0 || k == steps {
            samples.push(sample(torus, t, p));
        }
    }
    Ok(Trajectory {
        projected: project,
        samples,
    })
}

pub fn integrate(
    chi: &VectorField,
    torus: &Torus,
    start: [f64; 3],
    t_end: f64,
    dt: f64,
    project: bool,
) -> Result<Trajectory, IntegratorError> {
    integrate_with(
        chi,
        torus,
        start,
        IntegrateOptions {
            project,
            ..IntegrateOptions::new(t_end, dt)
        },
    )
}

/// Independent trajectories from several starting points, in parallel.
pub fn integrate_many(
    chi: &VectorField,
    torus: &Torus,
    starts: &[[f64; 3]],
    opts: IntegrateOptions,
) -> Vec<Result<Trajectory, IntegratorError>> {
    starts
        .par_iter()
        .map(|&s| integrate_with(chi, torus, s, opts))
        .collect()
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// `max |F|` over the samples.
    pub fn max_drift(&self, torus: &Torus) -> f64 {
        let f = torus.polynomial().to_float();
        self.samples
            .iter()
            .map(|s| f.eval(s.point()).abs())
            .fold(0.0, f64::max)
    }

    /// Columns `t,x,y,z,theta,phi`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,theta,phi\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t, s.x, s.y, s.z, s.theta, s.phi
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trajectory serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, IntegratorError> {
        serde_json::from_str(text).map_err(|e| IntegratorError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn export(traj: &Trajectory, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Csv => traj.to_csv().into_bytes(),
        ExportFormat::Json => traj.to_json().into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn t4() -> Torus {
        Torus::with_m(4).unwrap()
    }

    #[test]
    fn rotation_returns_to_start() {
        let t = t4();
        let chi = VectorField::parse("y", "-x", "0", t.field()).unwrap();
        let start = t.point(0.0, std::f64::consts::PI);
        let tr = integrate(&chi, &t, start, TAU, 1e-3, false).unwrap();
        let end = tr.last().unwrap();
        assert_eq!(end.t, TAU);
        for i in 0..3 {
            assert!((end.point()[i] - start[i]).abs() < 1e-8);
        }
        assert!(tr.max_drift(&t) < 1e-12);
    }

    #[test]
    fn rejects_bad_steps() {
        let t = t4();
        let chi = VectorField::parse("y", "-x", "0", t.field()).unwrap();
        assert!(matches!(
            integrate(&chi, &t, [2.0, 0.0, 1.0], 1.0, 0.0, false),
            Err(IntegratorError::InvalidStep { .. })
        ));
        assert!(matches!(
            integrate(&chi, &t, [2.0, 0.0, 1.0], -1.0, 0.1, false),
            Err(IntegratorError::InvalidStep { .. })
        ));
    }

    #[test]
    fn escape_is_reported() {
        let t = t4();
        let chi = VectorField::parse("x^2", "0", "0", t.field()).unwrap();
        assert!(matches!(
            integrate(&chi, &t, [1.0, 0.0, 0.0], 2.0, 1e-3, false),
            Err(IntegratorError::StepOverflow { .. })
        ));
    }

    #[test]
    fn projection_pulls_back_to_torus() {
        let t = t4();
        let chi = VectorField::parse("y", "-x", "0", t.field()).unwrap();
        let start = [2.01, 0.0, 1e-3];
        let tr = integrate(&chi, &t, start, 1.0, 0.1, true).unwrap();
        assert!(tr.projected);
        let f = t.polynomial().to_float();
        assert!(f.eval(tr.last().unwrap().point()).abs() < 1e-6);
    }

    #[test]
    fn csv_shapes() {
        let empty = Trajectory {
            projected: false,
            samples: vec![],
        };
        assert_eq!(empty.to_csv(), "t,x,y,z,theta,phi\n");
        let one = Trajectory {
            projected: false,
            samples: vec![Sample {
                t: 0.0,
                x: 2.0,
                y: 0.0,
                z: 1.0,
                theta: 0.0,
                phi: 1.5707963267948966,
            }],
        };
        let csv = one.to_csv();
        assert_eq!(csv.lines().count(), 2);
        let row: Vec<f64> = csv
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(row[5], 1.5707963267948966);
    }

    #[test]
    fn json_round_trip() {
        let t = t4();
        let chi = VectorField::parse(
            "(1/4)*x*z + x*y^2",
            "(1/4)*y*z - x^2*y",
            "(1/2)*(-4*(x^2+y^2) + z^2 + 15)",
            t.field(),
        )
        .unwrap();
        let tr = integrate(&chi, &t, t.point(0.4, 0.9), 1.0, 0.01, false).unwrap();
        let json = tr.to_json();
        let back = Trajectory::from_json(&json).unwrap();
        assert_eq!(back, tr);
        assert_eq!(back.to_json(), json);
        assert!(Trajectory::from_json("{").is_err());
    }

    #[test]
    fn sample_stride() {
        let t = t4();
        let chi = VectorField::parse("y", "-x", "0", t.field()).unwrap();
        let opts = IntegrateOptions {
            sample_every: 10,
            ..IntegrateOptions::new(1.0, 0.01)
        };
        let tr = integrate_with(&chi, &t, t.point(0.0, 0.0), opts).unwrap();
        assert_eq!(tr.samples.len(), 11);
        assert_eq!(tr.last().unwrap().t, 1.0);
    }
}

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::scan::{scan_closed, ScanOutcome};
use super::{cylindrical_form, DynamicsError};
use crate::algebra::{real_roots, MultiPoly, RootError, Scalar, UniPoly, Var};
use crate::curves::{
    check_four_meridian_criterion, invariant_meridians, MeridianPlane, ParallelPlane, Planes,
};
use crate::families::{build_cubic, CubicParams, TwoParallelParams};
use crate::vfield::{Torus, VectorField};

/// Samples per closed-curve scan.
pub const MERIDIAN_SCAN_POINTS: usize = 8192;
/// Below this (scaled) value a scan without sign change is inconclusive.
const NEAR_ZERO_BAND: f64 = 1e-7;
/// A refined minimum below this counts as a genuine (tangential) zero.
const TOUCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    /// Attracting from one side, repelling from the other.
    SemiStable,
}

/// A point where the periodicity test found a zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Curve parameter (`φ` on a meridian, `θ` on a parallel).
    pub parameter: f64,
    pub point: [f64; 3],
    /// `|value|` of the tested function at the witness.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PeriodicityVerdict {
    PeriodicOrbit,
    LimitCycle { stability: Stability },
    NotPeriodic { witness: Witness },
    Inconclusive { reason: String },
}

impl PeriodicityVerdict {
    pub fn is_periodic(&self) -> bool {
        matches!(
            self,
            PeriodicityVerdict::PeriodicOrbit | PeriodicityVerdict::LimitCycle { .. }
        )
    }
}

/// Verdict for the meridian at polar angle `theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeridianVerdict {
    pub theta: f64,
    pub verdict: PeriodicityVerdict,
}

/// Outcome of scanning `g` around a closed curve parametrised by `s`.
fn closed_curve_verdict(
    g: impl Fn(f64) -> f64,
    point: impl Fn(f64) -> [f64; 3],
    band: f64,
) -> Result<(), PeriodicityVerdict> {
    match scan_closed(&g, MERIDIAN_SCAN_POINTS, band) {
        ScanOutcome::Clear { .. } => Ok(()),
        ScanOutcome::Root { param } => Err(PeriodicityVerdict::NotPeriodic {
            witness: Witness {
                parameter: param,
                point: point(param),
                residual: g(param).abs(),
            },
        }),
        ScanOutcome::NearZero { param, value } if value < TOUCH_TOL => {
            Err(PeriodicityVerdict::NotPeriodic {
                witness: Witness {
                    parameter: param,
                    point: point(param),
                    residual: value,
                },
            })
        }
        ScanOutcome::NearZero { param, value } => Err(PeriodicityVerdict::Inconclusive {
            reason: format!("minimum {value:.3e} at parameter {param:.6} without sign change"),
        }),
    }
}

fn distinct_meridian_angles(planes: &[MeridianPlane]) -> Vec<f64> {
    let mut angles: Vec<f64> = planes
        .iter()
        .flat_map(|p| [p.angle(), p.angle() + PI])
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    angles
}

/// Midpoints between each meridian angle and its circular neighbours.
fn neighbour_midpoints(angles: &[f64], i: usize) -> (f64, f64) {
    let n = angles.len();
    let prev = if i == 0 {
        angles[n - 1] - TAU
    } else {
        angles[i - 1]
    };
    let next = if i + 1 == n {
        angles[0] + TAU
    } else {
        angles[i + 1]
    };
    (0.5 * (prev + angles[i]), 0.5 * (angles[i] + next))
}

/// Periodic-orbit test for the meridians of a cubic field with four
/// invariant meridians.
///
/// On such a meridian the field is `K'` times a nonvanishing tangent field,
/// so the meridian is a periodic orbit iff `K'` has no zero on it. Each
/// meridian is then a limit cycle whose stability is read from the sign of
/// `θ̇` half-way to the neighbouring meridians.
pub fn meridian_periodicity(
    params: &CubicParams,
    torus: &Torus,
) -> Result<Vec<MeridianVerdict>, DynamicsError> {
    if !check_four_meridian_criterion(params, torus) {
        return Err(DynamicsError::Precondition(
            "field does not have four invariant meridians (needs β = γ = 0 and f a product of two real linear forms)"
                .into(),
        ));
    }
    let chi = build_cubic(params, torus)?;
    let planes = match invariant_meridians(&chi)? {
        Planes::Finite(v) => v.into_iter().map(|w| w.plane).collect::<Vec<_>>(),
        Planes::Infinite => {
            return Err(DynamicsError::Precondition(
                "extactic polynomial vanishes".into(),
            ))
        }
    };
    let angles = distinct_meridian_angles(&planes);
    let cyl = cylindrical_form(&chi);
    let k_prime = params.k_prime.to_float();
    let band = NEAR_ZERO_BAND * k_prime.coeff_scale().max(1.0);
    let theta_dot = |th: f64| cyl.theta_dot(torus.point(th, 0.0));

    let verdicts = angles
        .iter()
        .enumerate()
        .map(|(i, &th0)| {
            let point = |phi: f64| torus.point(th0, phi);
            let verdict = match closed_curve_verdict(|phi| k_prime.eval(point(phi)), point, band) {
                Err(v) => v,
                Ok(()) => {
                    let (left, right) = neighbour_midpoints(&angles, i);
                    // stable: flow moves towards θ₀ from both sides
                    let from_left = theta_dot(left) > 0.0;
                    let from_right = theta_dot(right) < 0.0;
                    let stability = match (from_left, from_right) {
                        (true, true) => Stability::Stable,
                        (false, false) => Stability::Unstable,
                        _ => Stability::SemiStable,
                    };
                    PeriodicityVerdict::LimitCycle { stability }
                }
            };
            MeridianVerdict {
                theta: th0,
                verdict,
            }
        })
        .collect();
    Ok(verdicts)
}

/// Periodic-orbit test for the invariant meridians of an arbitrary field.
///
/// The field is tangent to an invariant meridian, so the meridian is a
/// periodic orbit iff the tangential component has no zero. No stability
/// or isolation claim is made.
pub fn meridian_verdicts(
    chi: &VectorField,
    torus: &Torus,
    planes: &[MeridianPlane],
) -> Vec<MeridianVerdict> {
    let fl = chi.to_float();
    let m = torus.m_f64();
    let scale = [&fl.p, &fl.q, &fl.r]
        .iter()
        .map(|p| p.coeff_scale())
        .fold(0.0, f64::max)
        .max(1.0);
    distinct_meridian_angles(planes)
        .into_iter()
        .map(|th0| {
            let point = |phi: f64| torus.point(th0, phi);
            let tangential = |phi: f64| {
                let pt = point(phi);
                let rho = (m + phi.cos()).sqrt();
                let drho = -phi.sin() / (2.0 * rho);
                let t = [drho * th0.cos(), drho * th0.sin(), phi.cos()];
                let norm = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
                let v = fl.eval(pt);
                (v[0] * t[0] + v[1] * t[1] + v[2] * t[2]) / norm
            };
            let verdict = match closed_curve_verdict(tangential, point, NEAR_ZERO_BAND * scale) {
                Err(v) => v,
                Ok(()) => PeriodicityVerdict::PeriodicOrbit,
            };
            MeridianVerdict {
                theta: th0,
                verdict,
            }
        })
        .collect()
}

/// Which parallel plane of the two-parallel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParallelSide {
    /// `z = 1`.
    Top,
    /// `z = −1`.
    Bottom,
}

impl ParallelSide {
    pub fn z(self) -> i64 {
        match self {
            ParallelSide::Top => 1,
            ParallelSide::Bottom => -1,
        }
    }
}

/// `Σ c_ij aⁱ⁺ʲ cosⁱθ sinʲθ` of a polynomial in `x, y` of degree ≤ 2 with
/// `x = a cos θ, y = a sin θ`, as a polynomial in `t = tan(θ/2)` after
/// multiplying by `(1 + t²)²`.
fn weierstrass(g: &MultiPoly, torus: &Torus) -> UniPoly {
    let k = torus.field();
    let a = k.radical();
    let one_minus = UniPoly::from_ints(k, &[1, 0, -1]);
    let two_t = UniPoly::from_ints(k, &[0, 2]);
    let one_plus = UniPoly::from_ints(k, &[1, 0, 1]);
    let mut out = UniPoly::zero(k);
    for (e, c) in g.terms() {
        let (i, j) = (e.0[0], e.0[1]);
        let coeff = c.mul(&a.pow(i + j, k), k);
        let term = one_minus
            .pow(i)
            .mul(&two_t.pow(j))
            .mul(&one_plus.pow(2 - i - j))
            .scale(&coeff);
        out = out.add(&term);
    }
    out
}

/// Periodic-orbit test for one parallel of the two-parallel family.
///
/// On the circle `x² + y² = m, z = ±1` the flow has `θ̇ = −g(θ)` with
/// `g = f(a cos θ, a sin θ, ±1) ∓ ½(p a sin θ − q a cos θ)`; the parallel is
/// a periodic orbit iff `g` has no zero. Zeros are located exactly via
/// `t = tan(θ/2)` with `θ = π` checked separately.
pub fn parallel_periodicity(
    params: &TwoParallelParams,
    torus: &Torus,
    which: ParallelSide,
) -> Result<PeriodicityVerdict, DynamicsError> {
    if params.p.is_zero() && params.q.is_zero() {
        return Err(DynamicsError::Precondition("(p, q) must be nonzero".into()));
    }
    if params.f.degree().unwrap_or(0) > 2 {
        return Err(DynamicsError::Precondition(
            "deg f must be at most 2".into(),
        ));
    }
    let k = torus.field();
    let sign = which.z();
    let x = torus.var(Var::X);
    let y = torus.var(Var::Y);
    let f_plane = params
        .f
        .substitute(Var::Z, &torus.constant(Scalar::from_integer(sign)));
    let twist = &y.scale(&params.p) - &x.scale(&params.q);
    let g = &f_plane - &twist.scale(&Scalar::from_ratio(sign, 2));
    let a = k.sqrt_m_f64();
    let point = |th: f64| [a * th.cos(), a * th.sin(), sign as f64];
    let g_at = |th: f64| g.eval_f64(point(th));
    let not_periodic = |th: f64| PeriodicityVerdict::NotPeriodic {
        witness: Witness {
            parameter: th,
            point: point(th),
            residual: g_at(th).abs(),
        },
    };

    let mut witnesses = Vec::new();
    let minus_a = -k.radical();
    if g.eval_exact([&minus_a, &Scalar::zero(), &Scalar::zero()])
        .reduce(k)
        .is_zero()
    {
        witnesses.push(PI);
    }
    match real_roots(&weierstrass(&g, torus), f64::NEG_INFINITY, f64::INFINITY) {
        Ok(roots) => witnesses.extend(roots.iter().map(|r| (2.0 * r.value.atan()).rem_euclid(TAU))),
        Err(RootError::ZeroPolynomial) => witnesses.push(0.0),
        Err(e) => {
            return Ok(PeriodicityVerdict::Inconclusive {
                reason: e.to_string(),
            })
        }
    }
    Ok(match witnesses.into_iter().min_by(f64::total_cmp) {
        Some(th) => not_periodic(th),
        None => PeriodicityVerdict::PeriodicOrbit,
    })
}

/// Verdict for one circle of an invariant parallel plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelVerdict {
    pub k: f64,
    /// `x² + y²` on this circle.
    pub radius_squared: f64,
    pub verdict: PeriodicityVerdict,
}

/// Periodic-orbit test for every circle of the given invariant parallel
/// planes: a circle is a periodic orbit iff `θ̇` has no zero on it.
pub fn parallel_verdicts(
    chi: &VectorField,
    torus: &Torus,
    planes: &[ParallelPlane],
) -> Vec<ParallelVerdict> {
    let cyl = cylindrical_form(chi);
    let scale = cyl.angular_numerator().to_float().coeff_scale().max(1.0);
    let m = torus.m_f64();
    let mut out = Vec::new();
    for plane in planes {
        let k = plane.k.clamp(-1.0, 1.0);
        let c = (1.0 - k * k).max(0.0).sqrt();
        let mut radii = vec![m + c];
        if c > 1e-12 {
            radii.push(m - c);
        }
        for r2 in radii {
            let r = r2.sqrt();
            let point = |th: f64| [r * th.cos(), r * th.sin(), k];
            let verdict = match closed_curve_verdict(
                |th| cyl.theta_dot(point(th)),
                point,
                NEAR_ZERO_BAND * scale,
            ) {
                Err(v) => v,
                Ok(()) => PeriodicityVerdict::PeriodicOrbit,
            };
            out.push(ParallelVerdict {
                k: plane.k,
                radius_squared: r2,
                verdict,
            });
        }
    }
    out
}

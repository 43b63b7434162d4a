//! Invariant meridians and parallels.
//!
//! A meridian plane `ax + by = 0` invariant under `χ` divides the extactic
//! polynomial `E = Qx − Py`; a parallel plane `z = k` is invariant iff
//! `z − k` divides `R`. Candidates are found from these necessary
//! conditions and every candidate is then verified independently.

use std::fmt;

use thiserror::Error;

use crate::algebra::{common_roots, CommonRoot, MultiPoly, RootError, Scalar, UniPoly};
use crate::families::CubicParams;
use crate::vfield::{Torus, VectorField};

/// Relative residual accepted when verifying a plane with an irrational
/// (floating-point) coefficient.
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvesError {
    #[error(transparent)]
    Root(#[from] RootError),
}

/// The plane `a x + b y = 0`, normalised so that `a² + b² = 1` and the first
/// nonzero coefficient is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct MeridianPlane {
    pub a: f64,
    pub b: f64,
    /// Exact (unnormalised) coefficients when the plane is defined over
    /// `ℚ(√m)` and was found exactly.
    pub exact: Option<(Scalar, Scalar)>,
}

impl MeridianPlane {
    fn from_normal(a: f64, b: f64, exact: Option<(Scalar, Scalar)>) -> Self {
        let n = a.hypot(b);
        let (mut a, mut b) = (a / n, b / n);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
        }
        // avoid printing -0
        MeridianPlane {
            a: a + 0.0,
            b: b + 0.0,
            exact,
        }
    }

    /// The plane `x = 0`.
    pub fn x_axis_normal() -> Self {
        Self::from_normal(1.0, 0.0, Some((Scalar::one(), Scalar::zero())))
    }

    /// The plane `y = t x`, i.e. `t x − y = 0`.
    pub fn from_slope(t: f64, exact: Option<Scalar>) -> Self {
        Self::from_normal(t, -1.0, exact.map(|t| (t, -Scalar::one())))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Polar angle of the meridian half-plane direction in `[0, π)`; the
    /// plane contains the two meridians at `θ₀` and `θ₀ + π`.
    pub fn angle(&self) -> f64 {
        // direction vector (−b, a) spans the line a x + b y = 0
        let th = self.a.atan2(-self.b);
        th.rem_euclid(std::f64::consts::PI)
    }
}

impl fmt::Display for MeridianPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some((a, b)) if b.is_zero() => {
                debug_assert!(!a.is_zero());
                f.write_str("x = 0")
            }
            Some((a, _)) if a.is_zero() => f.write_str("y = 0"),
            // from_slope stores (t, −1): the plane y = t x
            Some((a, b)) if *b == -Scalar::one() => {
                let t = crate::parser::format_scalar(a);
                match t.as_str() {
                    "1" => f.write_str("y = x"),
                    "-1" => f.write_str("y = -x"),
                    _ if t.contains(' ') => write!(f, "y = ({t})*x"),
                    _ => write!(f, "y = {t}*x"),
                }
            }
            Some((a, b)) => write!(
                f,
                "({})*x + ({})*y = 0",
                crate::parser::format_scalar(a),
                crate::parser::format_scalar(b)
            ),
            None => {
                let sign = if self.b < 0.0 { '-' } else { '+' };
                write!(f, "{:.12}*x {sign} {:.12}*y = 0", self.a, self.b.abs())
            }
        }
    }
}

/// The plane `z = k` with `−1 ≤ k ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelPlane {
    pub k: f64,
    pub exact: Option<Scalar>,
}

impl ParallelPlane {
    /// Number of parallels cut out on the torus: one at `k = ±1`, else two.
    pub fn parallel_count(&self) -> u32 {
        if (self.k.abs() - 1.0).abs() < 1e-12 {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for ParallelPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(k) => write!(f, "z = {k}"),
            None => write!(f, "z = {:.12}", self.k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weighted<T> {
    pub plane: T,
    pub multiplicity: u32,
}

/// Either every plane of the pencil is invariant or a finite list.
#[derive(Debug, Clone, PartialEq)]
pub enum Planes<T> {
    Infinite,
    Finite(Vec<Weighted<T>>),
}

impl<T> Planes<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Planes::Infinite)
    }

    pub fn finite(&self) -> Option<&[Weighted<T>]> {
        match self {
            Planes::Infinite => None,
            Planes::Finite(v) => Some(v),
        }
    }

    /// Number of distinct planes.
    pub fn distinct(&self) -> Count {
        match self {
            Planes::Infinite => Count::Infinite,
            Planes::Finite(v) => Count::Finite(v.len() as u32),
        }
    }

    /// Number of planes counted with multiplicity.
    pub fn with_multiplicity(&self) -> Count {
        match self {
            Planes::Infinite => Count::Infinite,
            Planes::Finite(v) => Count::Finite(v.iter().map(|w| w.multiplicity).sum()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(u32),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u32> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }

    fn doubled(self) -> Count {
        match self {
            Count::Finite(n) => Count::Finite(2 * n),
            Count::Infinite => Count::Infinite,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

/// `E = Q x − P y`.
pub fn extactic_xy(chi: &VectorField) -> MultiPoly {
    let k = chi.field();
    let x = MultiPoly::var(k, crate::algebra::Var::X);
    let y = MultiPoly::var(k, crate::algebra::Var::Y);
    &(chi.q() * &x) - &(chi.p() * &y)
}

/// Relative size of `u(t)` against `Σ|c_i||t|^i`.
fn relative_residual(u: &UniPoly, t: f64) -> f64 {
    let c = u.to_f64_coeffs();
    let (v, mag) = c.iter().rev().fold((0.0f64, 0.0f64), |(v, m), ci| {
        (v * t + ci, m * t.abs() + ci.abs())
    });
    if mag == 0.0 {
        0.0
    } else {
        v.abs() / mag
    }
}

fn vanishes_at(u: &UniPoly, root: &CommonRoot) -> bool {
    match &root.exact {
        Some(t) => u.eval(t).reduce(u.field()).is_zero(),
        None => relative_residual(u, root.value) < FLOAT_RESIDUAL_TOL,
    }
}

/// Is the plane `y = t₀ x` invariant, i.e. does `y − t₀x` divide `Q − t₀P`?
fn slope_plane_invariant(chi: &VectorField, root: &CommonRoot) -> bool {
    let p = chi.p().restrict_to_line();
    let q = chi.q().restrict_to_line();
    let k = chi.field();
    let t = UniPoly::new(k, vec![Scalar::zero(), Scalar::one()]);
    let mut keys: Vec<_> = p.keys().chain(q.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().all(|key| {
        let zero = UniPoly::zero(k);
        let pg = p.get(&key).unwrap_or(&zero);
        let qg = q.get(&key).unwrap_or(&zero);
        vanishes_at(&qg.sub(&t.mul(pg)), root)
    })
}

/// Every invariant meridian plane with its multiplicity as a factor of the
/// extactic polynomial; `Infinite` when the extactic polynomial vanishes.
pub fn invariant_meridians(chi: &VectorField) -> Result<Planes<MeridianPlane>, CurvesError> {
    let e = extactic_xy(chi);
    if e.is_zero() {
        return Ok(Planes::Infinite);
    }
    let groups = e.restrict_to_line();
    let mut out = Vec::new();

    // x = 0: the power of x dividing every homogeneous component
    let x_mult = groups
        .iter()
        .filter_map(|(&(d, _), u)| u.degree().map(|deg| d - deg as u32))
        .min()
        .unwrap_or(0);
    if x_mult > 0 && chi.p().terms().all(|(exp, _)| exp.0[0] > 0) {
        out.push(Weighted {
            plane: MeridianPlane::x_axis_normal(),
            multiplicity: x_mult,
        });
    }

    let polys: Vec<UniPoly> = groups.into_values().collect();
    let roots = common_roots(&polys, f64::NEG_INFINITY, f64::INFINITY)?.unwrap_or_default();
    for root in roots {
        if slope_plane_invariant(chi, &root) {
            out.push(Weighted {
                plane: MeridianPlane::from_slope(root.value, root.exact.clone()),
                multiplicity: root.multiplicity,
            });
        }
    }
    out.sort_by(|l, r| l.plane.angle().total_cmp(&r.plane.angle()));
    Ok(Planes::Finite(out))
}

/// Every invariant parallel plane `z = k`, `k ∈ [−1, 1]`, with its
/// multiplicity as a factor of `R`; `Infinite` when `R = 0`.
pub fn invariant_parallels(chi: &VectorField) -> Result<Planes<ParallelPlane>, CurvesError> {
    if chi.r().is_zero() {
        return Ok(Planes::Infinite);
    }
    let coeffs: Vec<UniPoly> = chi.r().coefficients_in_z().into_values().collect();
    let roots = common_roots(&coeffs, -1.0, 1.0)?.unwrap_or_default();
    let out = roots
        .into_iter()
        .filter(|root| coeffs.iter().all(|u| vanishes_at(u, root)))
        .map(|root| Weighted {
            plane: ParallelPlane {
                k: root.value,
                exact: root.exact,
            },
            multiplicity: root.multiplicity,
        })
        .collect();
    Ok(Planes::Finite(out))
}

/// Meridian and parallel inventory of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCurveSet {
    pub meridian_planes: Planes<MeridianPlane>,
    pub parallel_planes: Planes<ParallelPlane>,
}

impl InvariantCurveSet {
    pub fn of(chi: &VectorField) -> Result<Self, CurvesError> {
        Ok(InvariantCurveSet {
            meridian_planes: invariant_meridians(chi)?,
            parallel_planes: invariant_parallels(chi)?,
        })
    }

    /// Meridians counted with multiplicity (two per plane).
    pub fn meridian_count(&self) -> Count {
        self.meridian_planes.with_multiplicity().doubled()
    }

    /// Meridians without multiplicity.
    pub fn distinct_meridian_count(&self) -> Count {
        self.meridian_planes.distinct().doubled()
    }

    pub fn parallel_count(&self) -> Count {
        match &self.parallel_planes {
            Planes::Infinite => Count::Infinite,
            Planes::Finite(v) => Count::Finite(v.iter().map(|w| w.plane.parallel_count()).sum()),
        }
    }
}

/// Comparison of the inventory against the degree bounds: at most
/// `2(n − 1)` meridians (with multiplicity) and `n − 1` parallel planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsCheck {
    pub degree: u32,
    pub meridians: Count,
    pub meridian_bound: u32,
    pub parallel_planes: Count,
    pub parallel_plane_bound: u32,
}

impl BoundsCheck {
    pub fn new(degree: u32, set: &InvariantCurveSet) -> Self {
        let n = degree.max(1);
        BoundsCheck {
            degree,
            meridians: set.meridian_count(),
            meridian_bound: 2 * (n - 1),
            parallel_planes: set.parallel_planes.distinct(),
            parallel_plane_bound: n - 1,
        }
    }

    /// `true` when each finite count respects its bound.
    pub fn holds(&self) -> bool {
        let ok = |c: Count, b: u32| c.finite().is_none_or(|n| n <= b);
        ok(self.meridians, self.meridian_bound)
            && ok(self.parallel_planes, self.parallel_plane_bound)
    }
}

/// Exactly four invariant meridians (counted with multiplicity) for a cubic
/// field iff `β = γ = 0` and `f = c·L₁·L₂` with real linear forms `Lᵢ`
/// in `x, y` and `c ≠ 0`.
pub fn check_four_meridian_criterion(params: &CubicParams, torus: &Torus) -> bool {
    if !params.beta.is_zero() || !params.gamma.is_zero() {
        return false;
    }
    let f = &params.f;
    if f.is_zero()
        || !f.is_homogeneous()
        || f.degree() != Some(2)
        || !f.is_free_of(crate::algebra::Var::Z)
    {
        return false;
    }
    let k = torus.field();
    let c = |i, j| f.coeff(crate::algebra::Exp::new(i, j, 0));
    let (a, b, cc) = (c(2, 0), c(1, 1), c(0, 2));
    // a x² + b xy + c y² splits over ℝ iff b² − 4ac ≥ 0
    let disc = b.mul(&b, k) - a.mul(&cc, k).mul(&Scalar::from_integer(4), k);
    disc.signum(k) >= 0
}

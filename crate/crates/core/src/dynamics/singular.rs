use std::collections::VecDeque;
use std::f64::consts::TAU;

use log::debug;
use rayon::prelude::*;
use serde::Serialize;

use super::DynamicsError;
use crate::algebra::{Exp, FloatPoly, MultiPoly, Var};
use crate::families::FamilyTag;
use crate::vfield::{FloatField, Torus, VectorField};

/// Jacobian entries (and the trace) below this are treated as zero.
const CLASS_TOL: f64 = 1e-8;
/// Relative `|A|` accepted for a refined isolated zero of `A`.
const ZERO_TOL: f64 = 1e-10;
/// Grid values of `A / scale` below this are treated as zero.
const ROUNDOFF: f64 = 1e-13;
/// Relative `‖χ‖` accepted for a refined zero of a generic field.
const GENERIC_ZERO_TOL: f64 = 1e-6;
/// Above this many refined points the generic search reports curves.
const GENERIC_CURVE_THRESHOLD: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingClass {
    SemiHyperbolic,
    NilpotentOrLinearlyZero,
    LinearlyZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    pub point: [f64; 3],
    /// Present for `(Ay, −Ax, 0)` fields at points with `z ≠ 0`.
    pub class: Option<SingClass>,
}

/// A connected set of grid nodes on which the singular set was detected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveComponent {
    pub nodes: usize,
    pub z_range: [f64; 2],
    /// Range of `x² + y²` over the component.
    pub r2_range: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SingularSet {
    Empty,
    IsolatedPoints {
        points: Vec<SingularPoint>,
    },
    Curves {
        components: Vec<CurveComponent>,
        isolated: Vec<SingularPoint>,
    },
    WholeTorus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularMethod {
    /// Decided in closed form from the family structure.
    ClosedForm,
    /// Zero set of `A` for fields `(Ay, −Ax, 0)`, scanned on a grid.
    ZeroSetScan,
    /// Grid minimisation of `‖χ‖` with Gauss–Newton refinement; numerical
    /// evidence only.
    NumericalMinimization,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularAnalysis {
    pub set: SingularSet,
    pub method: SingularMethod,
    /// Grid-resolution warnings: ambiguous components or candidates that
    /// did not refine cleanly.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    /// Grid size per angle.
    pub n: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { n: 512 }
    }
}

/// `A` with `χ = (Ay, −Ax, 0)`, if `χ` has that shape.
fn rotation_factor(chi: &VectorField) -> Option<MultiPoly> {
    if !chi.r().is_zero() {
        return None;
    }
    let a = chi.p().div_monomial(Exp::new(0, 1, 0))?;
    let ax = a.mul_monomial(&crate::algebra::Scalar::one(), Exp::new(1, 0, 0));
    (&(-ax) == chi.q()).then_some(a)
}

/// Singular points of `χ` on the torus.
///
/// Degree-one fields and quadratic fields with `R ≢ 0` have none. For
/// `χ = (Ay, −Ax, 0)` the singular set is `{A = 0}` on the torus, found on a
/// `(θ, φ)` grid: sign-change components become curves, isolated zeros are
/// refined by Newton's method. Other fields are handled numerically.
pub fn singular_points(
    chi: &VectorField,
    tag: &FamilyTag,
    torus: &Torus,
    opts: GridOptions,
) -> Result<SingularAnalysis, DynamicsError> {
    let closed = |set| {
        Ok(SingularAnalysis {
            set,
            method: SingularMethod::ClosedForm,
            warnings: Vec::new(),
        })
    };
    match tag {
        FamilyTag::NotOnTorus => {
            return Err(DynamicsError::Precondition(
                "field is not tangent to the torus".into(),
            ))
        }
        FamilyTag::Zero => return closed(SingularSet::WholeTorus),
        FamilyTag::DegreeOne { .. } => return closed(SingularSet::Empty),
        FamilyTag::Quadratic(_) if !chi.r().is_zero() => return closed(SingularSet::Empty),
        _ => {}
    }
    if opts.n < 8 {
        return Err(DynamicsError::Precondition(
            "grid needs at least 8 points per angle".into(),
        ));
    }
    match rotation_factor(chi) {
        Some(a) => {
            // x² + y² > 0 on the torus, so the zeros are exactly those of A
            if a.as_constant().is_some() {
                return closed(SingularSet::Empty);
            }
            Ok(zero_set_scan(chi, &a, torus, opts.n))
        }
        None => Ok(generic_scan(chi, torus, opts.n)),
    }
}

struct Grid {
    n: usize,
    vals: Vec<f64>,
}

impl Grid {
    fn new(n: usize, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let h = TAU / n as f64;
        let vals = (0..n * n)
            .into_par_iter()
            .map(|idx| f((idx / n) as f64 * h, (idx % n) as f64 * h))
            .collect();
        Grid { n, vals }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.vals[(i % self.n) * self.n + j % self.n]
    }

    fn angles(&self, idx: usize) -> (f64, f64) {
        let h = TAU / self.n as f64;
        ((idx / self.n) as f64 * h, (idx % self.n) as f64 * h)
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        (0..9).filter(|&k| k != 4).map(move |k| {
            let di = (i + n + k / 3 - 1) % n;
            let dj = (j + n + k % 3 - 1) % n;
            di * n + dj
        })
    }

    /// Nodes at which `|v|` is no larger than at any neighbour.
    fn local_minima(&self, key: impl Fn(f64) -> f64) -> Vec<usize> {
        (0..self.vals.len())
            .filter(|&idx| {
                let v = key(self.vals[idx]);
                let nb: Vec<f64> = self.neighbours(idx).map(|k| key(self.vals[k])).collect();
                nb.iter().all(|&w| v <= w) && nb.iter().any(|&w| v < w)
            })
            .collect()
    }
}

fn component_summary(torus: &Torus, grid: &Grid, nodes: &[usize]) -> CurveComponent {
    let mut z = [f64::INFINITY, f64::NEG_INFINITY];
    let mut r2 = [f64::INFINITY, f64::NEG_INFINITY];
    for &idx in nodes {
        let (th, ph) = grid.angles(idx);
        let p = torus.point(th, ph);
        let rr = p[0] * p[0] + p[1] * p[1];
        z = [z[0].min(p[2]), z[1].max(p[2])];
        r2 = [r2[0].min(rr), r2[1].max(rr)];
    }
    CurveComponent {
        nodes: nodes.len(),
        z_range: z,
        r2_range: r2,
    }
}

/// Partial derivatives of the torus parametrisation at `(θ, φ)`.
fn param_tangents(m: f64, th: f64, ph: f64) -> [[f64; 3]; 2] {
    let rho = (m + ph.cos()).sqrt();
    let drho = -ph.sin() / (2.0 * rho);
    [
        [-rho * th.sin(), rho * th.cos(), 0.0],
        [drho * th.cos(), drho * th.sin(), ph.cos()],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Gradient {
    d: [FloatPoly; 3],
}

impl Gradient {
    fn new(a: &MultiPoly) -> Self {
        Gradient {
            d: Var::ALL.map(|v| a.derivative(v).to_float()),
        }
    }

    fn eval(&self, p: [f64; 3]) -> [f64; 3] {
        [self.d[0].eval(p), self.d[1].eval(p), self.d[2].eval(p)]
    }
}

/// Newton's method on `∇(A ∘ torus)`, seeking a critical point of `A` on the
/// torus near `(θ, φ)`.
fn newton_critical(
    torus: &Torus,
    grad: &Gradient,
    mut th: f64,
    mut ph: f64,
    max_step: f64,
) -> (f64, f64) {
    let m = torus.m_f64();
    let g = |th: f64, ph: f64| {
        let p = torus.point(th, ph);
        let ga = grad.eval(p);
        let t = param_tangents(m, th, ph);
        [dot(ga, t[0]), dot(ga, t[1])]
    };
    let h = 1e-6;
    for _ in 0..100 {
        let g0 = g(th, ph);
        let (gp, gm) = (g(th + h, ph), g(th - h, ph));
        let (gq, gn) = (g(th, ph + h), g(th, ph - h));
        let hess = [
            [(gp[0] - gm[0]) / (2.0 * h), (gq[0] - gn[0]) / (2.0 * h)],
            [(gp[1] - gm[1]) / (2.0 * h), (gq[1] - gn[1]) / (2.0 * h)],
        ];
        let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let mut d0 = -(hess[1][1] * g0[0] - hess[0][1] * g0[1]) / det;
        let mut d1 = -(-hess[1][0] * g0[0] + hess[0][0] * g0[1]) / det;
        let len = d0.hypot(d1);
        if len > max_step {
            d0 *= max_step / len;
            d1 *= max_step / len;
        }
        th += d0;
        ph += d1;
        if len < 1e-15 {
            break;
        }
    }
    (th, ph)
}

fn push_unique(points: &mut Vec<[f64; 3]>, p: [f64; 3]) {
    let close = |q: &[f64; 3]| (0..3).all(|i| (p[i] - q[i]).abs() < 1e-7);
    if !points.iter().any(close) {
        points.push(p);
    }
}

fn sort_points(points: &mut [[f64; 3]]) {
    points.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
}

/// Golden-section minimum of `f` on `[lo, hi]`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..80 {
        if fa < fb {
            hi = b;
            (b, fb) = (a, fa);
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            (a, fa) = (b, fb);
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    fa.min(fb)
}

/// Nodes on zero curves of even multiplicity, where `A` touches zero
/// without changing sign.
///
/// Each discrete minimum of `|A|` along a grid line is refined in 1-D; a
/// refined value at round-off level marks the node. Isolated zeros meet a
/// grid line only by coincidence and leave at most a couple of marks, so
/// only connected runs of `MIN_TOUCH_RUN` nodes or more are kept.
fn touching_zeros(af: &FloatPoly, scale: f64, torus: &Torus, grid: &Grid) -> Vec<bool> {
    const MIN_TOUCH_RUN: usize = 4;
    let n = grid.n;
    let h = TAU / n as f64;
    let abs_a = |th: f64, ph: f64| af.eval(torus.point(th, ph)).abs() / scale;
    let hits: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let v = grid.vals[idx].abs();
            let (th, ph) = grid.angles(idx);
            [(1, 0), (0, 1)].into_iter().any(|(di, dj)| {
                let before = grid.at(i + n - di, j + n - dj).abs();
                let after = grid.at(i + di, j + dj).abs();
                v <= before
                    && v <= after
                    && v < before.max(after)
                    && golden_min(
                        |s| abs_a(th + s * di as f64, ph + s * dj as f64),
                        -h,
                        h,
                    ) < ROUNDOFF
            })
        })
        .collect();
    let mut keep = vec![false; n * n];
    let mut seen = vec![false; n * n];
    for start in 0..n * n {
        if !hits[start] || seen[start] {
            continue;
        }
        let mut nodes = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < nodes.len() {
            for nb in grid.neighbours(nodes[k]) {
                if hits[nb] && !seen[nb] {
                    seen[nb] = true;
                    nodes.push(nb);
                }
            }
            k += 1;
        }
        if nodes.len() >= MIN_TOUCH_RUN {
            for idx in nodes {
                keep[idx] = true;
            }
        }
    }
    keep
}

/// Whether the grid node nearest `(θ, φ)`, or one of its neighbours, is marked.
fn near_marked(grid: &Grid, marked: &[bool], th: f64, ph: f64) -> bool {
    let n = grid.n;
    let h = TAU / n as f64;
    let i = (th.rem_euclid(TAU) / h).round() as usize % n;
    let j = (ph.rem_euclid(TAU) / h).round() as usize % n;
    let idx = i * n + j;
    marked[idx] || grid.neighbours(idx).any(|k| marked[k])
}

fn zero_set_scan(chi: &VectorField, a: &MultiPoly, torus: &Torus, n: usize) -> SingularAnalysis {
    let af = a.to_float();
    let scale = af.coeff_scale();
    let grid = Grid::new(n, |th, ph| af.eval(torus.point(th, ph)) / scale);
    let mut warnings = Vec::new();

    // nodes adjacent to a sign change; values at round-off level carry no
    // sign, and a zero node is marked only when its two neighbours along a
    // grid line have strictly opposite signs
    let sign = |v: f64| if v.abs() < ROUNDOFF { 0.0 } else { v.signum() };
    let mut marked = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = sign(grid.at(i, j));
            for (di, dj) in [(1, 0), (0, 1)] {
                let next = ((i + di) % n) * n + (j + dj) % n;
                if v * sign(grid.at(i + di, j + dj)) < 0.0 {
                    marked[i * n + j] = true;
                    marked[next] = true;
                }
                let prev = ((i + n - di) % n) * n + (j + n - dj) % n;
                if v == 0.0 && sign(grid.vals[prev]) * sign(grid.vals[next]) < 0.0 {
                    marked[prev] = true;
                    marked[i * n + j] = true;
                    marked[next] = true;
                }
            }
        }
    }
    for (idx, hit) in touching_zeros(&af, scale, torus, &grid).into_iter().enumerate() {
        marked[idx] |= hit;
    }
    let mut seen = vec![false; n * n];
    let mut components = Vec::new();
    for start in 0..n * n {
        if !marked[start] || seen[start] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(idx) = queue.pop_front() {
            nodes.push(idx);
            for nb in grid.neighbours(idx) {
                if marked[nb] && !seen[nb] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        if nodes.len() < 4 {
            warnings.push(format!(
                "GridResolutionWarning: zero-set component with only {} grid nodes",
                nodes.len()
            ));
        }
        components.push(component_summary(torus, &grid, &nodes));
    }

    // isolated zeros: local minima of |A| that are within one grid step of 0
    let grad = Gradient::new(a);
    let h = TAU / n as f64;
    let mut points = Vec::new();
    for idx in grid.local_minima(f64::abs) {
        if marked[idx] {
            continue;
        }
        let v = grid.vals[idx].abs();
        let spread = grid
            .neighbours(idx)
            .map(|k| (grid.vals[k] - grid.vals[idx]).abs())
            .fold(0.0, f64::max);
        if v > spread {
            continue;
        }
        let (th0, ph0) = grid.angles(idx);
        let (th, ph) = newton_critical(torus, &grad, th0, ph0, 2.0 * h);
        let p = torus.point(th, ph);
        let val = af.eval(p).abs() / scale;
        if near_marked(&grid, &marked, th, ph) {
            continue;
        }
        if val < ZERO_TOL {
            push_unique(&mut points, p);
        } else if val < 1e-6 {
            warnings.push(format!(
                "GridResolutionWarning: near-zero of A at ({:.6}, {:.6}, {:.6}) with |A| = {val:.3e} did not refine",
                p[0], p[1], p[2]
            ));
        }
    }
    sort_points(&mut points);
    debug!(
        "zero-set scan: {} components, {} isolated points",
        components.len(),
        points.len()
    );
    let isolated: Vec<SingularPoint> = points
        .into_iter()
        .map(|point| SingularPoint {
            class: classify_singularity(chi, point, torus).ok(),
            point,
        })
        .collect();
    let set = if !components.is_empty() {
        SingularSet::Curves {
            components,
            isolated,
        }
    } else if !isolated.is_empty() {
        SingularSet::IsolatedPoints { points: isolated }
    } else {
        SingularSet::Empty
    };
    SingularAnalysis {
        set,
        method: SingularMethod::ZeroSetScan,
        warnings,
    }
}

struct FieldJacobian {
    field: FloatField,
    d: [[FloatPoly; 3]; 3],
}

impl FieldJacobian {
    fn new(chi: &VectorField) -> Self {
        FieldJacobian {
            field: chi.to_float(),
            d: chi
                .components()
                .map(|c| Var::ALL.map(|v| c.derivative(v).to_float())),
        }
    }

    fn scale(&self) -> f64 {
        [&self.field.p, &self.field.q, &self.field.r]
            .iter()
            .map(|p| p.coeff_scale())
            .fold(0.0, f64::max)
    }
}

/// Gauss–Newton on `χ ∘ torus` from `(θ, φ)`.
fn gauss_newton(
    torus: &Torus,
    fj: &FieldJacobian,
    mut th: f64,
    mut ph: f64,
    max_step: f64,
) -> [f64; 3] {
    let m = torus.m_f64();
    for _ in 0..100 {
        let p = torus.point(th, ph);
        let r = fj.field.eval(p);
        let t = param_tangents(m, th, ph);
        // J = Dχ · [∂θ p, ∂φ p], a 3×2 matrix
        let mut jac = [[0.0; 2]; 3];
        for (i, row) in fj.d.iter().enumerate() {
            let grad = [row[0].eval(p), row[1].eval(p), row[2].eval(p)];
            jac[i] = [dot(grad, t[0]), dot(grad, t[1])];
        }
        let mut jtj = [[0.0; 2]; 2];
        let mut jtr = [0.0; 2];
        for i in 0..3 {
            for a in 0..2 {
                jtr[a] += jac[i][a] * r[i];
                for b in 0..2 {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        let damp = 1e-14 * (jtj[0][0] + jtj[1][1]);
        jtj[0][0] += damp;
        jtj[1][1] += damp;
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let mut d0 = -(jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        let mut d1 = -(-jtj[1][0] * jtr[0] + jtj[0][0] * jtr[1]) / det;
        let len = d0.hypot(d1);
        if len > max_step {
            d0 *= max_step / len;
            d1 *= max_step / len;
        }
        th += d0;
        ph += d1;
        if len < 1e-15 {
            break;
        }
    }
    torus.point(th, ph)
}

fn generic_scan(chi: &VectorField, torus: &Torus, n: usize) -> SingularAnalysis {
    let fj = FieldJacobian::new(chi);
    let scale = fj.scale().max(f64::MIN_POSITIVE);
    let grid = Grid::new(n, |th, ph| fj.field.norm(torus.point(th, ph)) / scale);
    let h = TAU / n as f64;
    let mut minima = grid.local_minima(|v| v);
    minima.sort_by(|&a, &b| grid.vals[a].total_cmp(&grid.vals[b]).then(a.cmp(&b)));
    minima.truncate(256);
    let mut points = Vec::new();
    for idx in minima {
        let (th, ph) = grid.angles(idx);
        let p = gauss_newton(torus, &fj, th, ph, 2.0 * h);
        if fj.field.norm(p) / scale < GENERIC_ZERO_TOL {
            push_unique(&mut points, p);
        }
    }
    sort_points(&mut points);
    let mut warnings = Vec::new();
    let set = if points.len() > GENERIC_CURVE_THRESHOLD {
        warnings.push(format!(
            "GridResolutionWarning: {} refined zeros; reported as a curve-like singular set",
            points.len()
        ));
        let mut z = [f64::INFINITY, f64::NEG_INFINITY];
        let mut r2 = [f64::INFINITY, f64::NEG_INFINITY];
        for p in &points {
            let rr = p[0] * p[0] + p[1] * p[1];
            z = [z[0].min(p[2]), z[1].max(p[2])];
            r2 = [r2[0].min(rr), r2[1].max(rr)];
        }
        SingularSet::Curves {
            components: vec![CurveComponent {
                nodes: points.len(),
                z_range: z,
                r2_range: r2,
            }],
            isolated: Vec::new(),
        }
    } else if points.is_empty() {
        SingularSet::Empty
    } else {
        SingularSet::IsolatedPoints {
            points: points
                .into_iter()
                .map(|point| SingularPoint { point, class: None })
                .collect(),
        }
    };
    SingularAnalysis {
        set,
        method: SingularMethod::NumericalMinimization,
        warnings,
    }
}

/// Minimum of `‖χ‖` over an `n × n` grid of the torus, with its location.
pub fn min_norm_on_grid(chi: &VectorField, torus: &Torus, n: usize) -> (f64, [f64; 3]) {
    let fl = chi.to_float();
    let grid = Grid::new(n, |th, ph| fl.norm(torus.point(th, ph)));
    let (idx, v) = grid
        .vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .unwrap_or((0, f64::INFINITY));
    let (th, ph) = grid.angles(idx);
    (v, torus.point(th, ph))
}

/// Jacobian `[[J₀₀, J₀₁], [J₁₀, J₁₁]]` at `q` of the chart field of
/// `χ = (Ay, −Ax, 0)` on the half of the torus containing `q`.
///
/// With `B(x, y) = A(x, y, z(x, y))` the chart field is `(By, −Bx)`, whose
/// Jacobian at a zero of `B` is `[[B_x y, B_y y], [−B_x x, −B_y x]]` with
/// trace `B_x y − B_y x`.
pub fn chart_jacobian(
    chi: &VectorField,
    q: [f64; 3],
    torus: &Torus,
) -> Result<[[f64; 2]; 2], DynamicsError> {
    let a = rotation_factor(chi).ok_or_else(|| {
        DynamicsError::Precondition("field is not of the form (Ay, -Ax, 0)".into())
    })?;
    let af = a.to_float();
    let scale = af.coeff_scale().max(1.0);
    let [x, y, z] = q;
    let m = torus.m_f64();
    let s = x * x + y * y - m;
    if (s * s + z * z - 1.0).abs() > 1e-6 {
        return Err(DynamicsError::Precondition(format!(
            "point {q:?} is not on the torus"
        )));
    }
    if z.abs() < 1e-6 {
        return Err(DynamicsError::ChartError { z });
    }
    let value = af.eval(q);
    if value.abs() > 1e-8 * scale {
        return Err(DynamicsError::Precondition(format!(
            "A(q) = {value:.3e} is not zero"
        )));
    }
    let g = Gradient::new(&a).eval(q);
    let bx = g[0] + g[2] * (-2.0 * x * s / z);
    let by = g[1] + g[2] * (-2.0 * y * s / z);
    Ok([[bx * y, by * y], [-bx * x, -by * x]])
}

/// Linear type of the singular point `q` of `χ = (Ay, −Ax, 0)`, read off
/// the chart Jacobian.
pub fn classify_singularity(
    chi: &VectorField,
    q: [f64; 3],
    torus: &Torus,
) -> Result<SingClass, DynamicsError> {
    let j = chart_jacobian(chi, q, torus)?;
    let trace = j[0][0] + j[1][1];
    Ok(if trace.abs() > CLASS_TOL {
        SingClass::SemiHyperbolic
    } else if j.iter().flatten().all(|e| e.abs() < CLASS_TOL) {
        SingClass::LinearlyZero
    } else {
        SingClass::NilpotentOrLinearlyZero
    })
}

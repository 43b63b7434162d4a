//! Acceptance criteria. Each test prints exactly one `PASS` / `FAIL` line to
//! stderr (uncaptured) and then asserts.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use torus_fields::algebra::{Exp, MultiPoly, Scalar};
use torus_fields::curves::{
    extactic_xy, invariant_meridians, invariant_parallels, InvariantCurveSet, Planes,
};
use torus_fields::dynamics::{
    classify_singularity, meridian_periodicity, min_norm_on_grid, parallel_periodicity,
    singular_points, GridOptions, ParallelSide, PeriodicityVerdict, SingClass, SingularSet,
    Stability,
};
use torus_fields::families::{
    build_kolmogorov, build_pseudo_type, build_quadratic, build_two_parallel, extract_cubic,
    recognize, torus_ratio_integral, FamilyTag, KolmogorovParams, PseudoTypeParams,
    TwoParallelParams,
};
use torus_fields::integrator::{integrate, integrate_many, IntegrateOptions};
use torus_fields::sample;
use torus_fields::vfield::{RationalFn, Torus, VectorField};

const EXAMPLE_P: &str = "(1/4)*x*z + x*y^2";
const EXAMPLE_Q: &str = "(1/4)*y*z - x^2*y";
const EXAMPLE_R: &str = "(1/2)*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)";

// pinned tolerances
const COFACTOR_BUDGET_SECS: f64 = 1.0;
const LIMIT_CYCLE_BUDGET_SECS: f64 = 10.0;
const CONTRACTION_HORIZON: f64 = 30.0;
const CONTRACTION_PERTURBATION: f64 = 1e-3;
const CONTRACTION_TOL: f64 = 1e-4;
const WITNESS_TOL: f64 = 1e-9;
const SINGULAR_GRID_MIN_NORM: f64 = 1e-3;
const CLOSED_FORM_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-5;
const FD_JACOBIAN_TOL: f64 = 1e-6;
const KOLMOGOROV_DRIFT_TOL: f64 = 1e-6;
const RK4_MIN_RATIO: f64 = 8.0;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!(
        "criterion {id:>2} [{}] {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{line}");
}

fn t4() -> Torus {
    Torus::with_m(4).unwrap()
}

fn example_field(t: &Torus) -> VectorField {
    VectorField::parse(EXAMPLE_P, EXAMPLE_Q, EXAMPLE_R, t.field()).unwrap()
}

fn quadratic_field(rng: &mut ChaCha8Rng, t: &Torus, nonzero_alpha: bool) -> VectorField {
    build_quadratic(&sample::quadratic_params(rng, t, 3, nonzero_alpha), t).unwrap()
}

fn kolmogorov_field(rng: &mut ChaCha8Rng, t: &Torus) -> (i64, i64, VectorField) {
    let (c1, c2) = (
        sample::nonzero_int_in(rng, 3),
        sample::nonzero_int_in(rng, 3),
    );
    let params = KolmogorovParams {
        c1: Scalar::from_integer(c1),
        c2: Scalar::from_integer(c2),
    };
    (c1, c2, build_kolmogorov(&params, t))
}

#[test]
fn c01_cofactor_reproduction() {
    let start = Instant::now();
    let t = t4();
    let chi = example_field(&t);
    let inv = chi.cofactor_on_torus(&t);
    let k = inv.cofactor().cloned();
    let secs = start.elapsed().as_secs_f64();
    let pass = k.as_ref() == Some(&t.parse("z").unwrap()) && secs < COFACTOR_BUDGET_SECS;
    verdict(
        1,
        "cofactor of the example field",
        pass,
        format!(
            "K = {}, {secs:.3} s",
            k.map(|k| k.to_string()).unwrap_or_else(|| "none".into())
        ),
    );
}

#[test]
fn c02_bracket_z_component() {
    let t = t4();
    let x = VectorField::parse(
        "x^2*z",
        "x*y*z",
        "2*x*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)",
        t.field(),
    )
    .unwrap();
    let y = VectorField::parse("y^3", "-x*y^2", "0", t.field()).unwrap();
    let r = x.lie_bracket(&y).r().clone();
    let expected = t.parse("-2*y^3*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)").unwrap();
    verdict(
        2,
        "z-component of the example bracket",
        r == expected,
        format!("R = {r}"),
    );
}

/// `A` with `(P, Q, R) = (Ay, −Ax, 0)`, if the field has that shape.
fn rotation_factor(chi: &VectorField) -> Option<MultiPoly> {
    if !chi.r().is_zero() {
        return None;
    }
    let a = chi.p().div_monomial(Exp::new(0, 1, 0))?;
    let ax = a.mul_monomial(&Scalar::one(), Exp::new(1, 0, 0));
    (&(-ax) == chi.q()).then_some(a)
}

#[test]
fn c03_quadratic_brackets_are_rotations() {
    let t = t4();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields: Vec<_> = (0..200)
        .map(|_| quadratic_field(&mut rng, &t, false))
        .collect();
    let r2 = RationalFn::polynomial(t.parse("x^2 + y^2").unwrap());
    let z = RationalFn::polynomial(t.parse("z").unwrap());
    let pairs: Vec<(usize, usize)> = (0..fields.len())
        .flat_map(|i| (i + 1..fields.len()).map(move |j| (i, j)))
        .collect();
    let failures: usize = pairs
        .par_iter()
        .filter(|&&(i, j)| {
            let b = fields[i].lie_bracket(&fields[j]);
            let shape = rotation_factor(&b).is_some_and(|a| a.degree().map_or(true, |d| d <= 2));
            !(shape
                && b.cofactor_on_torus(&t).is_invariant()
                && b.check_first_integral(&r2)
                && b.check_first_integral(&z))
        })
        .count();
    verdict(
        3,
        "brackets of quadratic fields",
        failures == 0,
        format!("{} brackets, {failures} failures", pairs.len()),
    );
}

#[test]
fn c04_kolmogorov_invariant_planes() {
    let t = t4();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    for k in 0..50 {
        let (c1, _, chi) = kolmogorov_field(&mut rng, &t);
        let merid = match invariant_meridians(&chi).unwrap() {
            Planes::Finite(v) => {
                let mut angles: Vec<f64> = v.iter().map(|w| w.plane.angle()).collect();
                angles.sort_by(f64::total_cmp);
                angles.len() == 2
                    && angles[0].abs() < 1e-15
                    && (angles[1] - FRAC_PI_2).abs() < 1e-15
            }
            Planes::Infinite => false,
        };
        let par = match invariant_parallels(&chi).unwrap() {
            Planes::Finite(v) => v.len() == 1 && v[0].plane.exact == Some(Scalar::zero()),
            Planes::Infinite => false,
        };
        let e = t.parse(&format!("-({c1})*x*y*(x^2+y^2)")).unwrap();
        if !(merid && par && extactic_xy(&chi) == e) {
            bad.push(k);
        }
    }
    verdict(
        4,
        "Kolmogorov invariant planes and extactic",
        bad.is_empty(),
        format!("50 fields, failing {bad:?}"),
    );
}

#[test]
fn c05_rational_first_integral() {
    let t = t4();
    let h = torus_ratio_integral(&t);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fails = 0;
    for _ in 0..50 {
        fails += usize::from(!kolmogorov_field(&mut rng, &t).2.check_first_integral(&h));
        fails += usize::from(!quadratic_field(&mut rng, &t, false).check_first_integral(&h));
    }
    verdict(
        5,
        "F/(x^2+y^2)^2 is an exact first integral",
        fails == 0,
        format!("100 fields, {fails} failures"),
    );
}

#[test]
fn c06_meridian_bound() {
    let t = t4();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let specs: Vec<(u32, u64)> = (0..500)
        .map(|_| (rng.gen_range(2..=6), rng.gen()))
        .collect();
    let results: Vec<Option<(u32, u32)>> = specs
        .par_iter()
        .map(|&(n, seed)| {
            let chi = sample::on_torus_field(&mut ChaCha8Rng::seed_from_u64(seed), &t, n, 3);
            let d = chi.degree()?;
            let count = InvariantCurveSet::of(&chi)
                .ok()?
                .meridian_count()
                .finite()?;
            Some((d, count))
        })
        .collect();
    let finite: Vec<_> = results.iter().flatten().collect();
    let violations = finite
        .iter()
        .filter(|(d, c)| *d >= 1 && *c > 2 * (d - 1))
        .count();
    // saturating construction: A a product of n − 1 distinct rational lines
    let lines = ["x", "y", "(x - y)", "(x + y)", "(x - 2*y)"];
    let mut saturated = Vec::new();
    for n in 2..=6u32 {
        let a = t.parse(&lines[..(n - 1) as usize].join("*")).unwrap();
        let chi = build_pseudo_type(&PseudoTypeParams { n, a }, &t).unwrap();
        let count = InvariantCurveSet::of(&chi)
            .unwrap()
            .meridian_count()
            .finite();
        saturated.push((n, count == Some(2 * (n - 1))));
    }
    let pass = violations == 0 && saturated.iter().all(|s| s.1);
    verdict(
        6,
        "meridian bound 2(n-1)",
        pass,
        format!(
            "{} finite of 500 random fields, {violations} violations; saturation {saturated:?}",
            finite.len()
        ),
    );
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn c07_alternating_limit_cycles() {
    let start = Instant::now();
    let t = t4();
    let chi = example_field(&t);
    let params = extract_cubic(&chi, &t).unwrap();
    let verdicts = meridian_periodicity(&params, &t).unwrap();
    let stab: Vec<Option<Stability>> = verdicts
        .iter()
        .map(|v| match &v.verdict {
            PeriodicityVerdict::LimitCycle { stability } => Some(*stability),
            _ => None,
        })
        .collect();
    let four_cycles = stab.len() == 4 && stab.iter().all(Option::is_some);
    let alternating = four_cycles
        && (0..4).all(|i| {
            matches!(
                (stab[i], stab[(i + 1) % 4]),
                (Some(Stability::Stable), Some(Stability::Unstable))
                    | (Some(Stability::Unstable), Some(Stability::Stable))
            )
        });
    // θ-contraction from perturbations on both sides of each stable meridian
    let stable: Vec<f64> = verdicts
        .iter()
        .filter(|v| {
            matches!(
                v.verdict,
                PeriodicityVerdict::LimitCycle {
                    stability: Stability::Stable
                }
            )
        })
        .map(|v| v.theta)
        .collect();
    let mut starts = Vec::new();
    let mut targets = Vec::new();
    for &th in &stable {
        for side in [-1.0, 1.0] {
            for phi in [0.3, 1.9, 4.0] {
                let p = t.point(th + side * CONTRACTION_PERTURBATION, phi);
                starts.push(p);
                targets.push(th);
            }
        }
    }
    let opts = IntegrateOptions::new(CONTRACTION_HORIZON, 1e-2);
    let worst = integrate_many(&chi, &t, &starts, opts)
        .into_iter()
        .zip(&targets)
        .map(|(tr, &th)| {
            let tr = tr.unwrap();
            angle_distance(tr.last().unwrap().theta, th)
        })
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    let pass = alternating
        && !stable.is_empty()
        && worst < CONTRACTION_TOL
        && secs < LIMIT_CYCLE_BUDGET_SECS;
    verdict(
        7,
        "four alternating limit cycles",
        pass,
        format!("stabilities {stab:?}, worst final theta-distance {worst:.3e}, {secs:.2} s"),
    );
}

#[test]
fn c08_two_parallel_periodicity() {
    let t = t4();
    let a = t.m_f64().sqrt();
    let m = t.m_f64();
    let periodic = TwoParallelParams {
        p: Scalar::one(),
        q: Scalar::zero(),
        f: t.parse("y^2 + a^2 + 1").unwrap(),
    };
    // oracle: positivity of g by dense scan before trusting the build
    let g_pos = |th: f64| a * a * th.sin().powi(2) + m + 1.0 - 0.5 * a * th.sin();
    let scan_min = (0..100_000)
        .map(|i| g_pos(i as f64 * TAU / 1e5))
        .fold(f64::INFINITY, f64::min);
    let chi = build_two_parallel(&periodic, &t).unwrap();
    let recognised = matches!(recognize(&chi, &t), FamilyTag::TwoParallel(_));
    let v1 = parallel_periodicity(&periodic, &t, ParallelSide::Top).unwrap();
    let zero_f = TwoParallelParams {
        f: MultiPoly::zero(t.field()),
        ..periodic.clone()
    };
    let v2 = parallel_periodicity(&zero_f, &t, ParallelSide::Top).unwrap();
    // g(θ) = f(a cos θ, a sin θ, 1) − ½(p a sin θ − q a cos θ) with f = 0, p = 1, q = 0
    let g_zero = |th: f64| -0.5 * a * th.sin();
    let witness_ok = match &v2 {
        PeriodicityVerdict::NotPeriodic { witness } => {
            g_zero(witness.parameter).abs() < WITNESS_TOL
        }
        _ => false,
    };
    let pass =
        scan_min > 0.0 && recognised && v1 == PeriodicityVerdict::PeriodicOrbit && witness_ok;
    verdict(
        8,
        "two-parallel periodicity on z = +1",
        pass,
        format!("min g = {scan_min:.4}; f = y^2+m+1 -> {v1:?}; f = 0 -> {v2:?}"),
    );
}

#[test]
fn c09_quadratic_fields_have_no_singular_points() {
    let t = t4();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fields: Vec<_> = (0..50)
        .map(|_| quadratic_field(&mut rng, &t, true))
        .collect();
    let results: Vec<(bool, f64)> = fields
        .par_iter()
        .map(|chi| {
            let tag = recognize(chi, &t);
            let empty = singular_points(chi, &tag, &t, GridOptions::default())
                .is_ok_and(|s| s.set == SingularSet::Empty);
            // normalised by the largest coefficient magnitude of the field
            let fl = chi.to_float();
            let scale = [&fl.p, &fl.q, &fl.r]
                .iter()
                .map(|c| c.coeff_scale())
                .fold(1.0, f64::max);
            (empty, min_norm_on_grid(chi, &t, 512).0 / scale)
        })
        .collect();
    let all_empty = results.iter().all(|r| r.0);
    let min_norm = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    verdict(
        9,
        "quadratic fields with alpha != 0 are singularity free",
        all_empty && min_norm > SINGULAR_GRID_MIN_NORM,
        format!("all empty: {all_empty}, normalised min |chi| on a 512x512 grid = {min_norm:.4}"),
    );
}

/// Chart field of `(Ay, −Ax, 0)` on the upper half of the torus:
/// `(x, y) ↦ (B y, −B x)` with `B(x, y) = A(x, y, z(x, y))`.
fn chart_field(a: &MultiPoly, m: f64, x: f64, y: f64) -> [f64; 2] {
    let s = x * x + y * y - m;
    let z = (1.0 - s * s).sqrt();
    let b = a.eval_f64([x, y, z]);
    [b * y, -b * x]
}

#[test]
fn c10_isolated_singular_points() {
    let t = t4();
    let m = t.m_f64();
    let a = t.parse("y^2 + (z - 1/2)^2").unwrap();
    let chi = VectorField::new(
        a.mul_monomial(&Scalar::one(), Exp::new(0, 1, 0)),
        -a.mul_monomial(&Scalar::one(), Exp::new(1, 0, 0)),
        MultiPoly::zero(t.field()),
    );
    let tag = recognize(&chi, &t);
    let analysis = singular_points(&chi, &tag, &t, GridOptions::default()).unwrap();
    let r = (3f64).sqrt() / 2.0;
    let mut expected: Vec<[f64; 3]> = [m + r, m - r]
        .iter()
        .flat_map(|&x2| [[x2.sqrt(), 0.0, 0.5], [-x2.sqrt(), 0.0, 0.5]])
        .collect();
    expected.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let (points_ok, classes_ok, max_err) = match &analysis.set {
        SingularSet::IsolatedPoints { points } if points.len() == 4 => {
            let mut got: Vec<_> = points.clone();
            got.sort_by(|p, q| p.point[0].total_cmp(&q.point[0]));
            let err = got
                .iter()
                .zip(&expected)
                .flat_map(|(g, e)| (0..3).map(move |i| (g.point[i] - e[i]).abs()))
                .fold(0.0, f64::max);
            let classes = got.iter().all(|p| p.class == Some(SingClass::LinearlyZero));
            (err < CLOSED_FORM_TOL, classes, err)
        }
        _ => (false, false, f64::NAN),
    };
    let q = [(m + r).sqrt(), 0.0, 0.5];
    let class = classify_singularity(&chi, q, &t);
    // finite-difference Jacobian of the chart field at q
    let fd = |x: f64, y: f64| chart_field(&a, m, x, y);
    let (x0, y0) = (q[0], q[1]);
    let h = FD_STEP;
    let dx = fd(x0 + h, y0)
        .iter()
        .zip(fd(x0 - h, y0))
        .map(|(p, n)| (p - n) / (2.0 * h))
        .collect::<Vec<_>>();
    let dy = fd(x0, y0 + h)
        .iter()
        .zip(fd(x0, y0 - h))
        .map(|(p, n)| (p - n) / (2.0 * h))
        .collect::<Vec<_>>();
    let jac_max = dx.iter().chain(&dy).fold(0.0f64, |acc, v| acc.max(v.abs()));
    let pass = points_ok
        && classes_ok
        && class == Ok(SingClass::LinearlyZero)
        && jac_max < FD_JACOBIAN_TOL;
    verdict(
        10,
        "isolated singular points of A = y^2 + (z - 1/2)^2",
        pass,
        format!(
            "max coordinate error {max_err:.2e}, class {class:?}, FD Jacobian max {jac_max:.2e}"
        ),
    );
}

#[test]
fn c11_numeric_integrity() {
    let t = t4();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = torus_ratio_integral(&t);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let (_, _, chi) = kolmogorov_field(&mut rng, &t);
        let start = sample::torus_point(&mut rng, &t);
        let tr = integrate(&chi, &t, start, 50.0, 1e-3, false).unwrap();
        let h0 = h.eval_f64(start);
        let drift = tr
            .samples
            .iter()
            .map(|s| (h.eval_f64(s.point()) - h0).abs())
            .fold(0.0, f64::max);
        worst = worst.max(drift);
    }
    // RK4 order: halving dt must shrink the F-drift by at least 8
    let chi = example_field(&t);
    let start = t.point(0.7, 0.4);
    let drift = |dt: f64| {
        integrate(&chi, &t, start, 5.0, dt, false)
            .unwrap()
            .max_drift(&t)
    };
    let (d1, d2) = (drift(0.1), drift(0.05));
    let ratio = d1 / d2;
    let pass = worst < KOLMOGOROV_DRIFT_TOL && ratio >= RK4_MIN_RATIO;
    verdict(
        11,
        "first-integral drift and RK4 order",
        pass,
        format!("Kolmogorov H-drift {worst:.2e}; F-drift {d1:.2e} -> {d2:.2e}, ratio {ratio:.1}"),
    );
}

#[test]
fn c12_report_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_torus-fields"))
            .args([
                "report", "--px", EXAMPLE_P, "--qy", EXAMPLE_Q, "--rz", EXAMPLE_R, "--m", "4",
                "--json", "--seed", "17",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let pass =
        a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    verdict(
        12,
        "report JSON is byte-identical across runs",
        pass,
        format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()),
    );
}

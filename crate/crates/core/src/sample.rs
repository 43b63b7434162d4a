//! Seeded random generators for polynomials and on-torus vector fields,
//! used by property tests, acceptance checks and examples.

use rand::Rng;

use crate::algebra::{Exp, MultiPoly, Scalar};
use crate::families::{
    CubicParams, KolmogorovParams, PseudoTypeParams, QuadraticParams, TwoParallelParams,
};
use crate::vfield::{Torus, VectorField};

/// Integer in `−r..=r`.
pub fn int_in(rng: &mut impl Rng, r: i64) -> i64 {
    rng.gen_range(-r..=r)
}

/// Integer in `−r..=r` other than zero.
pub fn nonzero_int_in(rng: &mut impl Rng, r: i64) -> i64 {
    loop {
        let v = int_in(rng, r.max(1));
        if v != 0 {
            return v;
        }
    }
}

/// Dense polynomial of degree ≤ `d` with integer coefficients in `−r..=r`.
pub fn poly_up_to(rng: &mut impl Rng, torus: &Torus, d: u32, r: i64) -> MultiPoly {
    let mut terms = Vec::new();
    for deg in 0..=d {
        terms.extend(homogeneous_terms(rng, deg, r));
    }
    MultiPoly::from_terms(torus.field(), terms)
}

fn homogeneous_terms(rng: &mut impl Rng, d: u32, r: i64) -> Vec<(Exp, Scalar)> {
    let mut terms = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            terms.push((
                Exp::new(i, j, d - i - j),
                Scalar::from_integer(int_in(rng, r)),
            ));
        }
    }
    terms
}

/// Polynomial in `x, y` only, of degree ≤ `d`.
pub fn poly_xy_up_to(rng: &mut impl Rng, torus: &Torus, d: u32, r: i64) -> MultiPoly {
    let mut terms = Vec::new();
    for deg in 0..=d {
        for i in 0..=deg {
            terms.push((
                Exp::new(i, deg - i, 0),
                Scalar::from_integer(int_in(rng, r)),
            ));
        }
    }
    MultiPoly::from_terms(torus.field(), terms)
}

/// Nonzero homogeneous polynomial of degree `d` in `x, y, z`.
pub fn homogeneous(rng: &mut impl Rng, torus: &Torus, d: u32, r: i64) -> MultiPoly {
    loop {
        let p = MultiPoly::from_terms(torus.field(), homogeneous_terms(rng, d, r));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn cubic_params(rng: &mut impl Rng, torus: &Torus, r: i64) -> CubicParams {
    CubicParams::new(
        poly_up_to(rng, torus, 1, r),
        poly_up_to(rng, torus, 2, r),
        Scalar::from_integer(int_in(rng, r)),
        Scalar::from_integer(int_in(rng, r)),
    )
}

/// Quadratic-family parameters; `α ≠ 0` when `nonzero_alpha`.
pub fn quadratic_params(
    rng: &mut impl Rng,
    torus: &Torus,
    r: i64,
    nonzero_alpha: bool,
) -> QuadraticParams {
    let alpha = if nonzero_alpha {
        nonzero_int_in(rng, r)
    } else {
        int_in(rng, r)
    };
    QuadraticParams {
        alpha: Scalar::from_integer(alpha),
        f: poly_up_to(rng, torus, 1, r),
    }
}

/// Kolmogorov parameters with `c₁, c₂ ≠ 0`.
pub fn kolmogorov_params(rng: &mut impl Rng, r: i64) -> KolmogorovParams {
    KolmogorovParams {
        c1: Scalar::from_integer(nonzero_int_in(rng, r)),
        c2: Scalar::from_integer(nonzero_int_in(rng, r)),
    }
}

pub fn two_parallel_params(rng: &mut impl Rng, torus: &Torus, r: i64) -> TwoParallelParams {
    loop {
        let (p, q) = (int_in(rng, r), int_in(rng, r));
        if p != 0 || q != 0 {
            return TwoParallelParams {
                p: Scalar::from_integer(p),
                q: Scalar::from_integer(q),
                f: poly_up_to(rng, torus, 2, r),
            };
        }
    }
}

/// `A` homogeneous of degree `n − 1` in `x, y, z`.
pub fn pseudo_type_params(rng: &mut impl Rng, torus: &Torus, n: u32, r: i64) -> PseudoTypeParams {
    PseudoTypeParams {
        n,
        a: homogeneous(rng, torus, n - 1, r),
    }
}

/// A random field tangent to the torus of degree ≤ `n`:
///
/// ```text
/// g₁(y, −x, 0) + g₂(0, −2z, 4ys) + g₃(2z, 0, −4xs) + g₄(xz, yz, 2S)
/// ```
///
/// with `s = x² + y² − m`, `S = −m(x² + y²) + z² + m² − 1` and
/// `deg g₁ ≤ n − 1`, `deg g₂, g₃ ≤ n − 3`, `deg g₄ ≤ n − 2`.
pub fn on_torus_field(rng: &mut impl Rng, torus: &Torus, n: u32, r: i64) -> VectorField {
    let t = torus;
    let parse = |s: &str| t.parse(s).expect("static expression");
    let mut g = |d: i64| {
        if d < 0 {
            MultiPoly::zero(t.field())
        } else {
            poly_up_to(rng, t, d as u32, r)
        }
    };
    let n = n as i64;
    let (g1, g2, g3, g4) = (g(n - 1), g(n - 3), g(n - 3), g(n - 2));
    let rot = VectorField::new(parse("y"), parse("-x"), parse("0"));
    let v2 = VectorField::new(parse("0"), parse("-2*z"), parse("4*y*(x^2 + y^2 - a^2)"));
    let v3 = VectorField::new(parse("2*z"), parse("0"), parse("-4*x*(x^2 + y^2 - a^2)"));
    let v4 = VectorField::new(
        parse("x*z"),
        parse("y*z"),
        parse("2*(-a^2*(x^2 + y^2) + z^2 + a^4 - 1)"),
    );
    rot.mul_poly(&g1)
        .add(&v2.mul_poly(&g2))
        .add(&v3.mul_poly(&g3))
        .add(&v4.mul_poly(&g4))
}

/// Uniformly spread random point on the torus (uniform in the angles).
pub fn torus_point(rng: &mut impl Rng, torus: &Torus) -> [f64; 3] {
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    let ph = rng.gen_range(0.0..std::f64::consts::TAU);
    torus.point(th, ph)
}

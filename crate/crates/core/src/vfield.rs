//! Polynomial vector fields, the torus surface, invariance with cofactor
//! extraction, Lie brackets and first-integral checks.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{AlgebraError, FloatPoly, MultiPoly, QuadField, Scalar, Var};
use crate::parser::{self, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VFieldError {
    #[error("torus needs m = a^2 > 1 (a in (1, inf)), got m = {0}")]
    RadiusTooSmall(BigRational),
    #[error("unsupported surface shape: {0}")]
    UnsupportedShape(String),
    #[error("denominator of a rational function must be nonzero")]
    ZeroDenominator,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The torus `F = (x² + y² − m)² + z² − 1 = 0`, `m = a² > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    field: QuadField,
    f: MultiPoly,
}

impl Torus {
    pub fn new(m: BigRational) -> Result<Torus, VFieldError> {
        if m <= BigRational::one() {
            return Err(VFieldError::RadiusTooSmall(m));
        }
        Ok(Self::over(&QuadField::new(m)))
    }

    pub fn with_m(m: i64) -> Result<Torus, VFieldError> {
        Self::new(BigRational::from_integer(m.into()))
    }

    /// Torus over an existing field handle. The caller guarantees `m > 1`.
    pub fn over(field: &QuadField) -> Torus {
        let x = MultiPoly::var(field, Var::X);
        let y = MultiPoly::var(field, Var::Y);
        let z = MultiPoly::var(field, Var::Z);
        let m = MultiPoly::constant(field, field.m_scalar());
        let one = MultiPoly::one(field);
        let s = &(&(&x * &x) + &(&y * &y)) - &m;
        let f = &(&(&s * &s) + &(&z * &z)) - &one;
        Torus {
            field: field.clone(),
            f,
        }
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn m(&self) -> &BigRational {
        self.field.m()
    }

    pub fn m_f64(&self) -> f64 {
        self.field.m_f64()
    }

    /// The defining polynomial.
    pub fn polynomial(&self) -> &MultiPoly {
        &self.f
    }

    /// Parses a polynomial over this torus' field.
    pub fn parse(&self, text: &str) -> Result<MultiPoly, ParseError> {
        parser::parse(text, &self.field)
    }

    pub fn var(&self, v: Var) -> MultiPoly {
        MultiPoly::var(&self.field, v)
    }

    pub fn constant(&self, c: Scalar) -> MultiPoly {
        MultiPoly::constant(&self.field, c)
    }

    /// Point of the torus at angles `(θ, φ)`: radius `r = √(m + cos φ)`,
    /// height `sin φ`.
    pub fn point(&self, theta: f64, phi: f64) -> [f64; 3] {
        let r = (self.m_f64() + phi.cos()).sqrt();
        [r * theta.cos(), r * theta.sin(), phi.sin()]
    }

    /// Inverse of [`Torus::point`] for points on (or near) the surface.
    pub fn angles(&self, p: [f64; 3]) -> (f64, f64) {
        let theta = p[1].atan2(p[0]);
        let phi = p[2].atan2(p[0] * p[0] + p[1] * p[1] - self.m_f64());
        (theta, phi)
    }
}

/// `χ = P ∂x + Q ∂y + R ∂z`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    p: MultiPoly,
    q: MultiPoly,
    r: MultiPoly,
}

impl VectorField {
    pub fn new(p: MultiPoly, q: MultiPoly, r: MultiPoly) -> Self {
        assert!(
            p.field() == q.field() && q.field() == r.field(),
            "vector field components over different radicands"
        );
        VectorField { p, q, r }
    }

    pub fn parse(px: &str, qy: &str, rz: &str, field: &QuadField) -> Result<Self, ParseError> {
        Ok(Self::new(
            parser::parse(px, field)?,
            parser::parse(qy, field)?,
            parser::parse(rz, field)?,
        ))
    }

    pub fn zero(field: &QuadField) -> Self {
        let z = MultiPoly::zero(field);
        Self::new(z.clone(), z.clone(), z)
    }

    pub fn field(&self) -> &QuadField {
        self.p.field()
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn r(&self) -> &MultiPoly {
        &self.r
    }

    pub fn components(&self) -> [&MultiPoly; 3] {
        [&self.p, &self.q, &self.r]
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.r.is_zero()
    }

    /// Maximum of the component degrees; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.components().iter().filter_map(|c| c.degree()).max()
    }

    /// Directional derivative `χf = P f_x + Q f_y + R f_z`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.field());
        for (c, v) in self.components().into_iter().zip(Var::ALL) {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(v);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// `[X, Y]_i = X(Y_i) − Y(X_i)`.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        let comp = |a: &MultiPoly, b: &MultiPoly| &self.apply(b) - &other.apply(a);
        VectorField::new(
            comp(&self.p, &other.p),
            comp(&self.q, &other.q),
            comp(&self.r, &other.r),
        )
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField::new(&self.p + &other.p, &self.q + &other.q, &self.r + &other.r)
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        VectorField::new(self.p.scale(c), self.q.scale(c), self.r.scale(c))
    }

    /// `g · χ` for a polynomial `g`.
    pub fn mul_poly(&self, g: &MultiPoly) -> VectorField {
        VectorField::new(&self.p * g, &self.q * g, &self.r * g)
    }

    /// Tests `χF = K·F` by exact division along z.
    pub fn cofactor_on_torus(&self, torus: &Torus) -> Invariance {
        let chi_f = self.apply(torus.polynomial());
        match chi_f.divide_exact_z(torus.polynomial()) {
            Ok(k) => Invariance::Invariant { cofactor: k },
            Err(_) => Invariance::NotInvariant,
        }
    }

    /// `χH = 0` for `H = num/den`, checked as the polynomial identity
    /// `den·χ(num) − num·χ(den) = 0`.
    pub fn check_first_integral(&self, h: &RationalFn) -> bool {
        let lhs = &h.den * &self.apply(&h.num);
        let rhs = &h.num * &self.apply(&h.den);
        (&lhs - &rhs).is_zero()
    }

    /// Cofactor of an invariant surface `{f = 0}` for the two shapes used
    /// here: `f` with an invertible scalar leading z-coefficient (parallel
    /// planes, the torus), or a z-free linear form `αx + βy` (meridian
    /// planes).
    pub fn invariant_surface_cofactor(&self, f: &MultiPoly) -> Result<Invariance, VFieldError> {
        let along = surface_division_axis(f)?;
        let chi_f = self.apply(f);
        Ok(match chi_f.divide_exact_along(along, f) {
            Ok(k) => Invariance::Invariant { cofactor: k },
            Err(AlgebraError::NotDivisible) => Invariance::NotInvariant,
            Err(e) => return Err(e.into()),
        })
    }

    pub fn to_float(&self) -> FloatField {
        FloatField {
            p: self.p.to_float(),
            q: self.q.to_float(),
            r: self.r.to_float(),
        }
    }

    /// `(P, Q, R)` as canonical text.
    pub fn to_strings(&self) -> [String; 3] {
        [self.p.to_string(), self.q.to_string(), self.r.to_string()]
    }
}

fn surface_division_axis(f: &MultiPoly) -> Result<Var, VFieldError> {
    if f.degree_in(Var::Z).unwrap_or(0) > 0 {
        let d = f.degree_in(Var::Z).unwrap_or(0);
        let lead_is_scalar = f
            .terms()
            .filter(|(e, _)| e.get(Var::Z) == d)
            .all(|(e, _)| e.degree() == d);
        if lead_is_scalar {
            return Ok(Var::Z);
        }
        return Err(VFieldError::UnsupportedShape(format!(
            "{f}: leading z-coefficient is not a scalar"
        )));
    }
    if f.degree() == Some(1) && f.is_homogeneous() {
        return Ok(if f.degree_in(Var::Y) == Some(1) {
            Var::Y
        } else {
            Var::X
        });
    }
    Err(VFieldError::UnsupportedShape(format!(
        "{f}: expected a polynomial monic in z or a linear form ax + by"
    )))
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.r)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}\nQ = {}\nR = {}", self.p, self.q, self.r)
    }
}

/// Outcome of an invariance test `χf = K f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariance {
    Invariant { cofactor: MultiPoly },
    NotInvariant,
}

impl Invariance {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Invariant { .. })
    }

    pub fn cofactor(&self) -> Option<&MultiPoly> {
        match self {
            Invariance::Invariant { cofactor } => Some(cofactor),
            Invariance::NotInvariant => None,
        }
    }
}

/// `num / den` with `den ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, VFieldError> {
        if den.is_zero() {
            return Err(VFieldError::ZeroDenominator);
        }
        Ok(RationalFn { num, den })
    }

    pub fn polynomial(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.field());
        RationalFn { num, den }
    }

    pub fn eval_f64(&self, pt: [f64; 3]) -> f64 {
        self.num.eval_f64(pt) / self.den.eval_f64(pt)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Float-compiled field for numerics.
#[derive(Debug, Clone)]
pub struct FloatField {
    pub p: FloatPoly,
    pub q: FloatPoly,
    pub r: FloatPoly,
}

impl FloatField {
    pub fn eval(&self, pt: [f64; 3]) -> [f64; 3] {
        [self.p.eval(pt), self.q.eval(pt), self.r.eval(pt)]
    }

    pub fn norm(&self, pt: [f64; 3]) -> f64 {
        let v = self.eval(pt);
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
    }
}

//! Exact elements `p + q·√m` of the quadratic extension ℚ(√m).

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shared handle to the radicand `m = a²` every scalar of a session is
/// interpreted against.
///
/// Cloning is cheap. Two handles compare equal when their radicands do.
#[derive(Clone)]
pub struct QuadField(Arc<FieldInner>);

struct FieldInner {
    m: BigRational,
    /// `Some(s)` with `s² = m` when `m` is the square of a rational.
    rational_sqrt: Option<BigRational>,
    sqrt_f64: f64,
}

impl QuadField {
    pub fn new(m: BigRational) -> Self {
        let rational_sqrt = rational_sqrt(&m);
        if rational_sqrt.is_some() {
            log::warn!(
                "m = {m} is a perfect square; scalars still compare structurally as p + q*sqrt(m)"
            );
        }
        let sqrt_f64 = m.to_f64().unwrap_or(f64::NAN).sqrt();
        QuadField(Arc::new(FieldInner {
            m,
            rational_sqrt,
            sqrt_f64,
        }))
    }

    pub fn from_integer(m: i64) -> Self {
        Self::new(BigRational::from_integer(m.into()))
    }

    pub fn m(&self) -> &BigRational {
        &self.0.m
    }

    pub fn m_f64(&self) -> f64 {
        self.0.m.to_f64().unwrap_or(f64::NAN)
    }

    /// √m as a float.
    pub fn sqrt_m_f64(&self) -> f64 {
        self.0.sqrt_f64
    }

    /// The rational square root of `m`, when it exists.
    pub fn rational_sqrt(&self) -> Option<&BigRational> {
        self.0.rational_sqrt.as_ref()
    }

    pub fn is_square(&self) -> bool {
        self.0.rational_sqrt.is_some()
    }

    /// The scalar `a = √m`.
    pub fn radical(&self) -> Scalar {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    /// `m` as a scalar.
    pub fn m_scalar(&self) -> Scalar {
        Scalar::rational(self.0.m.clone())
    }
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.m == other.0.m
    }
}

impl Eq for QuadField {}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadField(m = {})", self.0.m)
    }
}

fn rational_sqrt(m: &BigRational) -> Option<BigRational> {
    if m.is_negative() {
        return None;
    }
    let n = m.numer();
    let d = m.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// `p + q·√m`. Equality is structural (componentwise), even when `m` is a
/// perfect square.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    p: BigRational,
    q: BigRational,
}

impl Scalar {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Scalar { p, q }
    }

    pub fn rational(p: BigRational) -> Self {
        Scalar {
            p,
            q: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Rational part.
    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Coefficient of √m.
    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// The rational value, if the √m component vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.q.is_zero().then_some(&self.p)
    }

    pub fn mul(&self, rhs: &Scalar, field: &QuadField) -> Scalar {
        let p = &self.p * &rhs.p + &self.q * &rhs.q * field.m();
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        Scalar { p, q }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Scalar {
        Scalar {
            p: &self.p * r,
            q: &self.q * r,
        }
    }

    /// Field norm `p² − m·q²`.
    pub fn norm(&self, field: &QuadField) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * field.m()
    }

    /// Exact inverse; `None` when the norm vanishes (zero, or a structural
    /// zero divisor when `m` is a perfect square).
    pub fn inv(&self, field: &QuadField) -> Option<Scalar> {
        let n = self.norm(field);
        if n.is_zero() {
            return None;
        }
        Some(Scalar {
            p: &self.p / &n,
            q: -(&self.q / &n),
        })
    }

    pub fn pow(&self, e: u32, field: &QuadField) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            base = base.mul(&base, field);
            e >>= 1;
        }
        acc
    }

    /// Real value under the embedding √m ↦ +√m.
    pub fn to_f64(&self, field: &QuadField) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        if self.q.is_zero() {
            return p;
        }
        p + self.q.to_f64().unwrap_or(f64::NAN) * field.sqrt_m_f64()
    }

    /// Maps the scalar to its real value when `m` is a perfect square, so the
    /// result is a plain rational. Returns `self` unchanged otherwise.
    pub fn reduce(&self, field: &QuadField) -> Scalar {
        match field.rational_sqrt() {
            Some(s) if !self.q.is_zero() => Scalar::rational(&self.p + &self.q * s),
            _ => self.clone(),
        }
    }

    /// Sign of the real value. Exact.
    pub fn signum(&self, field: &QuadField) -> i32 {
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // p and q·√m have opposite signs: compare p² against m·q².
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * field.m();
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sp,
            std::cmp::Ordering::Less => sq,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::rational(BigRational::from_integer(n))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Renders in the expression grammar, e.g. `3`, `(1/4)`, `a`, `(1 - 2*a)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_scalar(self))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", fmt_rational(&self.p))
        } else {
            write!(f, "{} + {}*a", fmt_rational(&self.p), fmt_rational(&self.q))
        }
    }
}

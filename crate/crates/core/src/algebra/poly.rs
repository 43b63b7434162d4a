//! Sparse trivariate polynomials over ℚ(√m).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::scalar::{QuadField, Scalar};
use super::unipoly::UniPoly;
use super::AlgebraError;

/// One of the three coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }
}

/// Exponent triple `(i, j, k)` of the monomial `x^i y^j z^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exp(pub [u32; 3]);

impl Exp {
    pub const ONE: Exp = Exp([0, 0, 0]);

    pub fn new(i: u32, j: u32, k: u32) -> Self {
        Exp([i, j, k])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn with(mut self, v: Var, e: u32) -> Self {
        self.0[v.index()] = e;
        self
    }

    fn mul(self, other: Exp) -> Exp {
        Exp([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    fn checked_div(self, other: Exp) -> Option<Exp> {
        Some(Exp([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }
}

/// A polynomial in `x, y, z` with coefficients in ℚ(√m).
///
/// Zero coefficients are never stored, so the term map is a canonical form
/// and derived equality is polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: QuadField,
    terms: BTreeMap<Exp, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: &QuadField) -> Self {
        MultiPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &QuadField, c: Scalar) -> Self {
        Self::monomial(field, c, Exp::ONE)
    }

    pub fn one(field: &QuadField) -> Self {
        Self::constant(field, Scalar::one())
    }

    pub fn var(field: &QuadField, v: Var) -> Self {
        Self::monomial(field, Scalar::one(), Exp::ONE.with(v, 1))
    }

    pub fn monomial(field: &QuadField, c: Scalar, e: Exp) -> Self {
        let mut p = Self::zero(field);
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I>(field: &QuadField, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exp, Scalar)>,
    {
        let mut p = Self::zero(field);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Integer-coefficient shorthand used heavily in tests and builders.
    pub fn from_int_terms(field: &QuadField, terms: &[(i64, [u32; 3])]) -> Self {
        Self::from_terms(
            field,
            terms
                .iter()
                .map(|&(c, e)| (Exp(e), Scalar::from_integer(c))),
        )
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exp) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Total degree; `None` stands for the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exp::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e.get(v)).max()
    }

    /// The constant term, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.degree() {
            None => Some(Scalar::zero()),
            Some(0) => Some(self.coeff(Exp::ONE)),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exp::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_free_of(&self, v: Var) -> bool {
        self.terms.keys().all(|e| e.get(v) == 0)
    }

    fn add_term(&mut self, e: Exp, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn assert_same_field(&self, other: &MultiPoly) {
        assert!(
            self.field == other.field,
            "polynomials over different radicands: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (*e, v.mul(c, &self.field)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        MultiPoly {
            field: self.field.clone(),
            terms,
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> MultiPoly {
        self.scale(&Scalar::rational(r.clone()))
    }

    pub fn scale_int(&self, n: i64) -> MultiPoly {
        self.scale(&Scalar::from_integer(n))
    }

    /// Multiplies by the monomial `c · x^e`.
    pub fn mul_monomial(&self, c: &Scalar, e: Exp) -> MultiPoly {
        let mut out = Self::zero(&self.field);
        for (te, tc) in &self.terms {
            out.add_term(te.mul(e), tc.mul(c, &self.field));
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = Self::zero(&self.field);
        for (e, c) in &self.terms {
            let k = e.get(v);
            if k == 0 {
                continue;
            }
            let factor = Scalar::from_integer(k as i64);
            out.add_term(e.with(v, k - 1), c.mul(&factor, &self.field));
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Composition `p(…, v := q, …)`.
    pub fn substitute(&self, v: Var, q: &MultiPoly) -> MultiPoly {
        self.assert_same_field(q);
        // Group by the exponent of v, then Horner in q.
        let mut groups: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            groups
                .entry(e.get(v))
                .or_insert_with(|| Self::zero(&self.field))
                .add_term(e.with(v, 0), c.clone());
        }
        let top = match groups.keys().next_back() {
            Some(&t) => t,
            None => return Self::zero(&self.field),
        };
        let mut acc = Self::zero(&self.field);
        for k in (0..=top).rev() {
            acc = &acc * q;
            if let Some(g) = groups.get(&k) {
                acc = &acc + g;
            }
        }
        acc
    }

    pub fn eval_exact(&self, pt: [&Scalar; 3]) -> Scalar {
        let f = &self.field;
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in pt.iter().enumerate() {
                if e.0[i] > 0 {
                    t = t.mul(&x.pow(e.0[i], f), f);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Floating-point evaluation with √m embedded numerically. For repeated
    /// evaluation prefer [`MultiPoly::to_float`].
    pub fn eval_f64(&self, pt: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64(&self.field)
                    * pt[0].powi(e.0[0] as i32)
                    * pt[1].powi(e.0[1] as i32)
                    * pt[2].powi(e.0[2] as i32)
            })
            .sum()
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::new(
            self.terms
                .iter()
                .map(|(e, c)| (e.0, c.to_f64(&self.field)))
                .collect(),
        )
    }

    /// Leading coefficient with respect to `v`, as a polynomial in the other
    /// variables, together with the `v`-degree.
    fn leading_in(&self, v: Var) -> Option<(u32, MultiPoly)> {
        let d = self.degree_in(v)?;
        let lc = MultiPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.get(v) == d)
                .map(|(e, c)| (e.with(v, 0), c.clone()))
                .collect(),
        };
        Some((d, lc))
    }

    /// Exact division in `ℚ(√m)[x,y][z]` by a divisor whose leading
    /// z-coefficient is an invertible scalar.
    pub fn divide_exact_z(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.divide_exact_along(Var::Z, divisor)
    }

    /// Exact division treating both operands as polynomials in `v` over the
    /// ring of the remaining two variables. The divisor's leading
    /// `v`-coefficient must be an invertible scalar.
    pub fn divide_exact_along(
        &self,
        v: Var,
        divisor: &MultiPoly,
    ) -> Result<MultiPoly, AlgebraError> {
        self.assert_same_field(divisor);
        let (dd, lc) = divisor
            .leading_in(v)
            .ok_or_else(|| AlgebraError::MalformedDivisor("division by zero".into()))?;
        let lc = lc.as_constant().ok_or_else(|| {
            AlgebraError::MalformedDivisor(format!(
                "leading {}-coefficient is not a scalar",
                v.name()
            ))
        })?;
        let lc_inv = lc.inv(&self.field).ok_or_else(|| {
            AlgebraError::MalformedDivisor("leading coefficient is not invertible".into())
        })?;

        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field);
        while let Some((dr, lead)) = rem.leading_in(v) {
            if dr < dd {
                break;
            }
            let shift = Exp::ONE.with(v, dr - dd);
            let mut t = Self::zero(&self.field);
            for (e, c) in &lead.terms {
                t.add_term(e.mul(shift), c.mul(&lc_inv, &self.field));
            }
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(AlgebraError::NotDivisible)
        }
    }

    /// Exact division by the monomial `x^e`, if every term is a multiple of it.
    pub fn div_monomial(&self, e: Exp) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (te, c) in &self.terms {
            terms.insert(te.checked_div(e)?, c.clone());
        }
        Some(MultiPoly {
            field: self.field.clone(),
            terms,
        })
    }

    /// Views the polynomial in `ℚ(√m)[x,y][z]`: for each `x^i y^j` the
    /// coefficient polynomial in `z`.
    pub fn coefficients_in_z(&self) -> BTreeMap<(u32, u32), UniPoly> {
        let mut raw: BTreeMap<(u32, u32), Vec<Scalar>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let slot = raw.entry((e.0[0], e.0[1])).or_default();
            let k = e.0[2] as usize;
            if slot.len() <= k {
                slot.resize(k + 1, Scalar::zero());
            }
            slot[k] = c.clone();
        }
        raw.into_iter()
            .map(|(key, coeffs)| (key, UniPoly::new(&self.field, coeffs)))
            .collect()
    }

    /// Substitutes `y := t·x`. A monomial `x^i y^j z^k` becomes
    /// `x^(i+j) z^k t^j`; the result is keyed by `(i+j, k)` with the
    /// coefficient polynomial in `t`. The polynomial is divisible by
    /// `y − t₀x` iff every returned polynomial vanishes at `t₀`.
    pub fn restrict_to_line(&self) -> BTreeMap<(u32, u32), UniPoly> {
        let mut raw: BTreeMap<(u32, u32), Vec<Scalar>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let slot = raw.entry((e.0[0] + e.0[1], e.0[2])).or_default();
            let j = e.0[1] as usize;
            if slot.len() <= j {
                slot.resize(j + 1, Scalar::zero());
            }
            slot[j] = c.clone();
        }
        raw.into_iter()
            .map(|(key, coeffs)| (key, UniPoly::new(&self.field, coeffs)))
            .collect()
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        Self::from_terms(&self.field, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::serialize(self))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", crate::parser::serialize(self))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_field(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_field(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_field(rhs);
        let mut out = MultiPoly::zero(&self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.mul(*eb), ca.mul(cb, &self.field));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// A polynomial compiled to `f64` coefficients for fast repeated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    terms: Vec<([u32; 3], f64)>,
    max_exp: [u32; 3],
}

impl FloatPoly {
    pub fn new(terms: Vec<([u32; 3], f64)>) -> Self {
        let mut max_exp = [0u32; 3];
        for (e, _) in &terms {
            for i in 0..3 {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        FloatPoly { terms, max_exp }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, pt: [f64; 3]) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        // Power tables; degrees here are small.
        let mut pows: [[f64; 16]; 3] = [[1.0; 16]; 3];
        let small = self.max_exp.iter().all(|&d| d < 16);
        if small {
            for i in 0..3 {
                for k in 1..=self.max_exp[i] as usize {
                    pows[i][k] = pows[i][k - 1] * pt[i];
                }
            }
            self.terms
                .iter()
                .map(|(e, c)| {
                    c * pows[0][e[0] as usize] * pows[1][e[1] as usize] * pows[2][e[2] as usize]
                })
                .sum()
        } else {
            self.terms
                .iter()
                .map(|(e, c)| {
                    c * pt[0].powi(e[0] as i32) * pt[1].powi(e[1] as i32) * pt[2].powi(e[2] as i32)
                })
                .sum()
        }
    }

    /// Largest absolute coefficient, used to scale tolerances.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }
}

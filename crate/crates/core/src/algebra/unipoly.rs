//! Dense univariate polynomials over ℚ(√m).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{QuadField, Scalar};
use super::AlgebraError;

/// Coefficients in ascending degree; the leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: QuadField,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: &QuadField, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &QuadField, coeffs: &[i64]) -> Self {
        Self::new(
            field,
            coeffs.iter().map(|&c| Scalar::from_integer(c)).collect(),
        )
    }

    pub fn zero(field: &QuadField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &QuadField, c: Scalar) -> Self {
        Self::new(field, vec![c])
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul(t, &self.field) + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64(&self.field)).collect()
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_integer(i as i64), &self.field))
            .collect();
        Self::new(&self.field, coeffs)
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Scalar::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Self::new(&self.field, coeffs)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.scale(&Scalar::from_integer(-1)))
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &a.mul(b, &self.field);
            }
        }
        Self::new(&self.field, out)
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|x| x.mul(c, &self.field)).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = Self::constant(&self.field, Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces every coefficient by its real value when `m` is a perfect
    /// square, so that the coefficient ring becomes a field again.
    pub fn reduce(&self) -> UniPoly {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|c| c.reduce(&self.field)).collect(),
        )
    }

    /// Euclidean division. Fails when the divisor's leading coefficient has
    /// no inverse.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let lead = divisor
            .leading()
            .ok_or_else(|| AlgebraError::MalformedDivisor("division by zero".into()))?;
        let inv = lead.inv(&self.field).ok_or_else(|| {
            AlgebraError::MalformedDivisor("leading coefficient is not invertible".into())
        })?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].mul(&inv, &self.field);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &c.mul(d, &self.field);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(&self.field, quot), Self::new(&self.field, rem)))
    }

    /// Exact quotient, or `NotDivisible`.
    pub fn div_exact(&self, divisor: &UniPoly) -> Result<UniPoly, AlgebraError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible)
        }
    }

    pub fn monic(&self) -> Result<UniPoly, AlgebraError> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(l) => {
                let inv = l.inv(&self.field).ok_or_else(|| {
                    AlgebraError::MalformedDivisor("leading coefficient is not invertible".into())
                })?;
                Ok(self.scale(&inv))
            }
        }
    }

    /// Monic greatest common divisor. Coefficients are first mapped to real
    /// values when `m` is a perfect square (see [`UniPoly::reduce`]), so the
    /// result is exact in every case.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly, AlgebraError> {
        let mut a = self.reduce();
        let mut b = other.reduce();
        if a.is_zero() {
            return b.monic();
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic()?;
        }
        a.monic()
    }

    /// Square-free decomposition `u = c · Π s_k^k` (Yun), exact. Returns the
    /// non-constant `(s_k, k)`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u32)>, AlgebraError> {
        let f = self.reduce().monic()?;
        if f.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let fp = f.derivative();
        let g = f.gcd(&fp)?;
        let mut b = f.div_exact(&g)?;
        let mut d = fp.div_exact(&g)?.sub(&b.derivative());
        let mut out = Vec::new();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a)?;
            d = d.div_exact(&a)?.sub(&b.derivative());
            k += 1;
        }
        Ok(out)
    }

    /// All rational roots with exact multiplicities, for polynomials whose
    /// coefficients are rational (after [`UniPoly::reduce`]). Returns `None`
    /// when a coefficient is irrational or the coefficients are too large for
    /// divisor enumeration.
    pub fn rational_roots(&self) -> Option<Vec<(BigRational, u32)>> {
        let u = self.reduce();
        if u.is_zero() || !u.is_rational() {
            return None;
        }
        let rat: Vec<BigRational> = u.coeffs.iter().map(|c| c.p().clone()).collect();
        let lcm = rat.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rat
            .iter()
            .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();

        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push((BigRational::zero(), low as u32));
        }
        let ints = &ints[low..];
        if ints.len() <= 1 {
            return Some(roots);
        }
        let c0 = ints[0].abs().to_u64()?;
        let cn = ints[ints.len() - 1].abs().to_u64()?;
        const LIMIT: u64 = 1_000_000_000_000;
        if c0 > LIMIT || cn > LIMIT {
            return None;
        }
        let fl: Vec<f64> = ints
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        let mut rest = UniPoly::new(
            &u.field,
            ints.iter().map(|c| Scalar::from(c.clone())).collect(),
        );
        for p in divisors(c0) {
            for q in divisors(cn) {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for sgn in [1i64, -1] {
                    let r = sgn as f64 * p as f64 / q as f64;
                    // cheap float screen before the exact check
                    let (val, mag) = fl.iter().rev().fold((0.0f64, 0.0f64), |(v, m), c| {
                        (v * r + c, m * r.abs() + c.abs())
                    });
                    if val.abs() > 1e-6 * mag.max(1e-300) {
                        continue;
                    }
                    let root =
                        BigRational::new(BigInt::from(sgn) * BigInt::from(p), BigInt::from(q));
                    let lin = UniPoly::new(
                        &u.field,
                        vec![Scalar::rational(-root.clone()), Scalar::one()],
                    );
                    let mut mult = 0;
                    while let Ok(next) = rest.div_exact(&lin) {
                        rest = next;
                        mult += 1;
                    }
                    if mult > 0 {
                        roots.push((root, mult));
                    }
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

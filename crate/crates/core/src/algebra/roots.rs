//! Real root isolation.
//!
//! Multiplicities come from an exact square-free decomposition; each
//! square-free factor is then embedded in `f64` and its roots are isolated
//! with a Sturm sequence and refined by bisection.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::scalar::Scalar;
use super::unipoly::UniPoly;
use super::AlgebraError;

/// Bisection stops once the bracketing interval is narrower than this.
pub const ROOT_TOL: f64 = 1e-12;
/// Sturm-chain values closer to zero than this (relative) are considered
/// unreliable at an evaluation point.
pub const STURM_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("root isolation is ill-conditioned near t = {near}")]
    IllConditioned { near: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u32,
}

/// A root shared by a family of polynomials, exact when rational.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonRoot {
    pub value: f64,
    pub exact: Option<Scalar>,
    pub multiplicity: u32,
}

/// Real roots of `u` in `[lo, hi]` with multiplicities, sorted ascending.
pub fn real_roots(u: &UniPoly, lo: f64, hi: f64) -> Result<Vec<RealRoot>, RootError> {
    if u.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (factor, mult) in u.squarefree_decomposition()? {
        for value in squarefree_roots(&factor.to_f64_coeffs(), lo, hi)? {
            out.push(RealRoot {
                value,
                multiplicity: mult,
            });
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

/// `1 + max |c_i / c_n|`: every complex root lies inside this radius.
pub fn cauchy_bound(coeffs: &[f64]) -> f64 {
    match coeffs.last() {
        Some(&lead) if lead != 0.0 => {
            1.0 + coeffs[..coeffs.len() - 1]
                .iter()
                .map(|c| (c / lead).abs())
                .fold(0.0, f64::max)
        }
        _ => 1.0,
    }
}

/// Common roots in `[lo, hi]` of a set of polynomials, i.e. the roots of
/// their gcd. Rational roots are found exactly; the rest are isolated
/// numerically. The multiplicity of a root is its multiplicity in the gcd.
///
/// Returns `Ok(None)` when every polynomial is zero (every point is common).
pub fn common_roots(
    polys: &[UniPoly],
    lo: f64,
    hi: f64,
) -> Result<Option<Vec<CommonRoot>>, RootError> {
    let mut nonzero = polys.iter().filter(|p| !p.is_zero());
    let first = match nonzero.next() {
        Some(p) => p.reduce(),
        None => return Ok(None),
    };
    let mut g = first.monic()?;
    for p in nonzero {
        if g.degree() == Some(0) {
            break;
        }
        g = g.gcd(p)?;
    }
    let mut out = Vec::new();
    if g.degree().unwrap_or(0) == 0 {
        return Ok(Some(out));
    }
    let field = g.field().clone();
    for (factor, mult) in g.squarefree_decomposition()? {
        let mut rest = factor.clone();
        if let Some(rational) = factor.rational_roots() {
            for (r, _) in rational {
                let v = r.to_f64().unwrap_or(f64::NAN);
                if v < lo || v > hi {
                    continue;
                }
                let lin = UniPoly::new(&field, vec![Scalar::rational(-r.clone()), Scalar::one()]);
                rest = rest.div_exact(&lin)?;
                out.push(CommonRoot {
                    value: v,
                    exact: Some(Scalar::rational(r)),
                    multiplicity: mult,
                });
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            for value in squarefree_roots(&rest.to_f64_coeffs(), lo, hi)? {
                out.push(CommonRoot {
                    value,
                    exact: None,
                    multiplicity: mult,
                });
            }
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(Some(out))
}

/// Rational roots in `[lo, hi]`, as exact values.
pub fn rational_roots_in(
    u: &UniPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, u32)> {
    u.rational_roots()
        .unwrap_or_default()
        .into_iter()
        .filter(|(r, _)| r >= lo && r <= hi)
        .collect()
}

fn trim(mut c: Vec<f64>) -> Vec<f64> {
    let scale = c.iter().map(|x| x.abs()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().is_some_and(|x| x.abs() <= 1e-14 * scale) {
        c.pop();
    }
    c
}

fn normalize(c: &mut [f64]) {
    let scale = c.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        c.iter_mut().for_each(|x| *x /= scale);
    }
}

fn deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, x)| i as f64 * x)
        .collect()
}

fn rem(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = r[k] / lead;
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] -= c * bj;
        }
        r.pop();
    }
    r
}

/// Value and absolute magnitude bound `Σ|c_i||t|^i`.
fn eval_with_scale(c: &[f64], t: f64) -> (f64, f64) {
    c.iter().rev().fold((0.0, 0.0), |(v, m), ci| {
        (v * t + ci, m * t.abs() + ci.abs())
    })
}

struct Sturm {
    chain: Vec<Vec<f64>>,
}

impl Sturm {
    fn new(p: &[f64]) -> Self {
        let mut p0 = trim(p.to_vec());
        normalize(&mut p0);
        let mut p1 = trim(deriv(&p0));
        normalize(&mut p1);
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].len() <= 1 {
                break;
            }
            let mut r: Vec<f64> = rem(&chain[n - 2], &chain[n - 1])
                .into_iter()
                .map(|x| -x)
                .collect();
            let scale = r.iter().map(|x| x.abs()).fold(0.0, f64::max);
            // remainder that is numerically zero ends the chain
            if scale <= 1e-13 {
                break;
            }
            r = trim(r);
            normalize(&mut r);
            chain.push(r);
        }
        Sturm { chain }
    }

    /// Sign variations at `t`, or `None` when a non-leading chain member is
    /// too close to zero to trust its sign.
    fn variations(&self, t: f64) -> Option<usize> {
        let mut last = 0i8;
        let mut count = 0;
        for (i, c) in self.chain.iter().enumerate() {
            let (v, mag) = eval_with_scale(c, t);
            let tiny = v.abs() <= STURM_ZERO_TOL * mag;
            if tiny && i > 0 {
                return None;
            }
            if v == 0.0 || (tiny && i == 0) {
                continue;
            }
            let s = if v > 0.0 { 1 } else { -1 };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        Some(count)
    }

    /// Variations at `t`, nudging the point slightly when the chain is
    /// ambiguous there.
    fn variations_near(&self, t: f64, width: f64) -> Result<(f64, usize), RootError> {
        if let Some(v) = self.variations(t) {
            return Ok((t, v));
        }
        for k in 1..=8 {
            let delta = width * 1e-3 * k as f64;
            for cand in [t + delta, t - delta] {
                if let Some(v) = self.variations(cand) {
                    return Ok((cand, v));
                }
            }
        }
        Err(RootError::IllConditioned { near: t })
    }
}

/// Roots of a square-free `f64` polynomial in `[lo, hi]`.
fn squarefree_roots(coeffs: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>, RootError> {
    let p = trim(coeffs.to_vec());
    if p.len() <= 1 {
        return Ok(Vec::new());
    }
    let bound = cauchy_bound(&p);
    let lo_c = lo.max(-bound);
    let hi_c = hi.min(bound);
    if lo_c > hi_c {
        return Ok(Vec::new());
    }
    // widen slightly so roots sitting on the boundary are not lost
    let pad = 1e-9 * lo_c.abs().max(hi_c.abs()).max(1.0);
    let (a, b) = (lo_c - pad, hi_c + pad);
    let sturm = Sturm::new(&p);
    let (a, va) = sturm.variations_near(a, hi_c - lo_c + pad)?;
    let (b, vb) = sturm.variations_near(b, hi_c - lo_c + pad)?;
    let mut roots = Vec::new();
    let mut stack = vec![(a, va, b, vb)];
    while let Some((l, vl, r, vr)) = stack.pop() {
        let n = vl.saturating_sub(vr);
        if n == 0 {
            continue;
        }
        if n == 1 {
            roots.push(bisect(&sturm.chain[0], l, r));
            continue;
        }
        if r - l < 1e-10 {
            return Err(RootError::IllConditioned {
                near: 0.5 * (l + r),
            });
        }
        let (mid, vm) = sturm.variations_near(0.5 * (l + r), r - l)?;
        if mid <= l || mid >= r {
            return Err(RootError::IllConditioned { near: mid });
        }
        stack.push((mid, vm, r, vr));
        stack.push((l, vl, mid, vm));
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots
        .into_iter()
        .filter(|x| *x >= lo - pad && *x <= hi + pad)
        .map(|x| x.clamp(lo, hi))
        .collect())
}

/// One simple root in `(l, r]`.
fn bisect(p: &[f64], mut l: f64, mut r: f64) -> f64 {
    let f = |t: f64| eval_with_scale(p, t).0;
    let mut fl = f(l);
    let fr = f(r);
    if fr == 0.0 {
        return r;
    }
    if fl == 0.0 || fl.signum() == fr.signum() {
        // the root sits at an endpoint within rounding; take the smaller one
        return if fl.abs() <= fr.abs() { l } else { r };
    }
    while r - l > ROOT_TOL {
        let mid = 0.5 * (l + r);
        if mid <= l || mid >= r {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fl.signum() {
            l = mid;
            fl = fm;
        } else {
            r = mid;
        }
    }
    0.5 * (l + r)
}

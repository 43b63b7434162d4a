//! Constructors and recognizers for the classified families of vector fields
//! on the torus.
//!
//! Every on-torus field of degree at most three has the form
//!
//! ```text
//! P = ¼ K x + f y + β z
//! Q = ¼ K y − f x + γ z
//! R = ½ K' (−m(x² + y²) + z² + m² − 1) − 2(βx + γy)(x² + y² − m)
//! ```
//!
//! with `K = K' z` the cofactor, `deg K' ≤ 1`, `deg f ≤ 2`. The special
//! families below are parameter restrictions of this form, except
//! pseudo-type-n fields `(Ay, −Ax, 0)` which exist in every degree.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Exp, MultiPoly, Scalar, Var};
use crate::vfield::{RationalFn, Torus, VectorField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("degree bound violated: {0}")]
    DegreeViolation(String),
    #[error("no known first integral for the {0} family")]
    NoKnownIntegral(&'static str),
}

/// Parameters `(K', f, β, γ)` of the general cubic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicParams {
    pub k_prime: MultiPoly,
    pub f: MultiPoly,
    pub beta: Scalar,
    pub gamma: Scalar,
}

impl CubicParams {
    pub fn new(k_prime: MultiPoly, f: MultiPoly, beta: Scalar, gamma: Scalar) -> Self {
        CubicParams {
            k_prime,
            f,
            beta,
            gamma,
        }
    }

    /// Cofactor `K = K' z`.
    pub fn cofactor(&self) -> MultiPoly {
        self.k_prime.mul_monomial(&Scalar::one(), Exp::new(0, 0, 1))
    }

    fn check(&self) -> Result<(), FamilyError> {
        if self.k_prime.degree().unwrap_or(0) > 1 {
            return Err(FamilyError::DegreeViolation(format!(
                "deg K' = {} > 1",
                self.k_prime.degree().unwrap_or(0)
            )));
        }
        if self.f.degree().unwrap_or(0) > 2 {
            return Err(FamilyError::DegreeViolation(format!(
                "deg f = {} > 2",
                self.f.degree().unwrap_or(0)
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KolmogorovParams {
    pub c1: Scalar,
    pub c2: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticParams {
    pub alpha: Scalar,
    /// Linear (degree ≤ 1) polynomial.
    pub f: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoTypeParams {
    pub n: u32,
    /// Homogeneous of degree `n − 1`.
    pub a: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoParallelParams {
    pub p: Scalar,
    pub q: Scalar,
    /// Degree ≤ 2.
    pub f: MultiPoly,
}

/// Classification result. Variants are listed from most to least specific.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyTag {
    /// The zero field.
    Zero,
    /// `c·(y, −x, 0)`.
    DegreeOne {
        c: Scalar,
    },
    Quadratic(QuadraticParams),
    Kolmogorov(KolmogorovParams),
    TwoParallel(TwoParallelParams),
    PseudoType(PseudoTypeParams),
    Cubic(CubicParams),
    /// On the torus but outside the classified families (degree > 3).
    General {
        degree: u32,
    },
    NotOnTorus,
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Zero => "zero",
            FamilyTag::DegreeOne { .. } => "degree-one",
            FamilyTag::Quadratic(_) => "quadratic",
            FamilyTag::Kolmogorov(_) => "kolmogorov",
            FamilyTag::TwoParallel(_) => "two-parallel",
            FamilyTag::PseudoType(_) => "pseudo-type",
            FamilyTag::Cubic(_) => "cubic",
            FamilyTag::General { .. } => "general",
            FamilyTag::NotOnTorus => "not-on-torus",
        }
    }

    /// Named parameters as `(name, text)` pairs, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match self {
            FamilyTag::Zero | FamilyTag::NotOnTorus => Vec::new(),
            FamilyTag::DegreeOne { c } => vec![("c", c.to_string())],
            FamilyTag::Quadratic(p) => vec![("alpha", p.alpha.to_string()), ("f", p.f.to_string())],
            FamilyTag::Kolmogorov(p) => vec![("c1", p.c1.to_string()), ("c2", p.c2.to_string())],
            FamilyTag::TwoParallel(p) => vec![
                ("p", p.p.to_string()),
                ("q", p.q.to_string()),
                ("f", p.f.to_string()),
            ],
            FamilyTag::PseudoType(p) => vec![("n", p.n.to_string()), ("A", p.a.to_string())],
            FamilyTag::Cubic(p) => vec![
                ("K'", p.k_prime.to_string()),
                ("f", p.f.to_string()),
                ("beta", p.beta.to_string()),
                ("gamma", p.gamma.to_string()),
            ],
            FamilyTag::General { degree } => vec![("degree", degree.to_string())],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        write!(f, "{} {{ {} }}", self.name(), inner.join(", "))
    }
}

/// `−m(x² + y²) + z² + m² − 1`.
pub fn torus_companion(torus: &Torus) -> MultiPoly {
    let k = torus.field();
    let m = k.m_scalar();
    MultiPoly::from_terms(
        k,
        [
            (Exp::new(2, 0, 0), -m.clone()),
            (Exp::new(0, 2, 0), -m.clone()),
            (Exp::new(0, 0, 2), Scalar::one()),
            (Exp::ONE, m.mul(&m, k) - Scalar::one()),
        ],
    )
}

fn x(t: &Torus) -> MultiPoly {
    t.var(Var::X)
}
fn y(t: &Torus) -> MultiPoly {
    t.var(Var::Y)
}
fn z(t: &Torus) -> MultiPoly {
    t.var(Var::Z)
}

/// The general cubic form; the result has cofactor `K' z`.
pub fn build_cubic(params: &CubicParams, torus: &Torus) -> Result<VectorField, FamilyError> {
    params.check()?;
    let k = torus.field();
    let quarter = Scalar::from_ratio(1, 4);
    let half = Scalar::from_ratio(1, 2);
    let kz = params.cofactor();
    let (x, y, z) = (x(torus), y(torus), z(torus));
    let p = &(&(&kz * &x).scale(&quarter) + &(&params.f * &y)) + &z.scale(&params.beta);
    let q = &(&(&kz * &y).scale(&quarter) - &(&params.f * &x)) + &z.scale(&params.gamma);
    let lin = &x.scale(&params.beta) + &y.scale(&params.gamma);
    let s = &(&(&x * &x) + &(&y * &y)) - &MultiPoly::constant(k, k.m_scalar());
    let r = &(&params.k_prime * &torus_companion(torus)).scale(&half) - &(&lin * &s).scale_int(2);
    Ok(VectorField::new(p, q, r))
}

pub fn build_quadratic(
    params: &QuadraticParams,
    torus: &Torus,
) -> Result<VectorField, FamilyError> {
    if params.f.degree().unwrap_or(0) > 1 {
        return Err(FamilyError::DegreeViolation(
            "quadratic family needs deg f <= 1".into(),
        ));
    }
    build_cubic(
        &CubicParams::new(
            torus.constant(params.alpha.clone()),
            params.f.clone(),
            Scalar::zero(),
            Scalar::zero(),
        ),
        torus,
    )
}

/// Kolmogorov form: `K = c₂ z²`, so `K' = c₂ z` and `f = c₁ x y`.
pub fn build_kolmogorov(params: &KolmogorovParams, torus: &Torus) -> VectorField {
    let k = torus.field();
    let cubic = CubicParams::new(
        MultiPoly::monomial(k, params.c2.clone(), Exp::new(0, 0, 1)),
        MultiPoly::monomial(k, params.c1.clone(), Exp::new(1, 1, 0)),
        Scalar::zero(),
        Scalar::zero(),
    );
    build_cubic(&cubic, torus).expect("Kolmogorov parameters respect the cubic degree bounds")
}

/// Two invariant parallel planes `z = ±1`: `K' = 2(px + qy)`,
/// `β = −m p / 2`, `γ = −m q / 2`.
pub fn build_two_parallel(
    params: &TwoParallelParams,
    torus: &Torus,
) -> Result<VectorField, FamilyError> {
    let k = torus.field();
    let half_m = k.m_scalar().mul(&Scalar::from_ratio(-1, 2), k);
    let k_prime = MultiPoly::from_terms(
        k,
        [
            (Exp::new(1, 0, 0), params.p.mul(&Scalar::from_integer(2), k)),
            (Exp::new(0, 1, 0), params.q.mul(&Scalar::from_integer(2), k)),
        ],
    );
    build_cubic(
        &CubicParams::new(
            k_prime,
            params.f.clone(),
            params.p.mul(&half_m, k),
            params.q.mul(&half_m, k),
        ),
        torus,
    )
}

/// `(A y, −A x, 0)`.
pub fn build_pseudo_type(
    params: &PseudoTypeParams,
    torus: &Torus,
) -> Result<VectorField, FamilyError> {
    if params.n == 0 {
        return Err(FamilyError::DegreeViolation(
            "pseudo-type-n needs n >= 1".into(),
        ));
    }
    if !params.a.is_homogeneous() || params.a.degree().is_some_and(|d| d != params.n - 1) {
        return Err(FamilyError::DegreeViolation(format!(
            "A must be homogeneous of degree {}",
            params.n - 1
        )));
    }
    Ok(VectorField::new(
        &params.a * &y(torus),
        -(&params.a * &x(torus)),
        MultiPoly::zero(torus.field()),
    ))
}

/// Recovers `(K', f, β, γ)` from an on-torus field of degree ≤ 3.
///
/// Extraction is canonical: `K` from the cofactor, `β, γ` as the
/// coefficients of the monomial `z` in `P, Q`, then
/// `f = (P − ¼Kx − βz) / y`. The candidate is rebuilt and compared with
/// the input, so a `Some` result is exact.
pub fn extract_cubic(chi: &VectorField, torus: &Torus) -> Option<CubicParams> {
    if chi.degree().unwrap_or(0) > 3 {
        return None;
    }
    let kz = chi.cofactor_on_torus(torus).cofactor()?.clone();
    let k_prime = kz.div_monomial(Exp::new(0, 0, 1))?;
    let z_exp = Exp::new(0, 0, 1);
    let beta = chi.p().coeff(z_exp);
    let gamma = chi.q().coeff(z_exp);
    let quarter_kx = (&kz * &x(torus)).scale(&Scalar::from_ratio(1, 4));
    let rest = &(chi.p() - &quarter_kx) - &z(torus).scale(&beta);
    let f = rest.div_monomial(Exp::new(0, 1, 0))?;
    let params = CubicParams::new(k_prime, f, beta, gamma);
    match build_cubic(&params, torus) {
        Ok(rebuilt) if &rebuilt == chi => Some(params),
        _ => None,
    }
}

/// `(A y, −A x, 0)` with `A` homogeneous, if `χ` has that shape.
pub fn pseudo_type_params(chi: &VectorField) -> Option<PseudoTypeParams> {
    if !chi.r().is_zero() || chi.p().is_zero() {
        return None;
    }
    let n = chi.p().degree()?;
    if !chi.p().is_homogeneous() || !chi.q().is_homogeneous() || chi.q().degree() != Some(n) {
        return None;
    }
    let a = chi.p().div_monomial(Exp::new(0, 1, 0))?;
    let ax = a.mul_monomial(&Scalar::one(), Exp::new(1, 0, 0));
    if &(-ax) != chi.q() {
        return None;
    }
    Some(PseudoTypeParams { n, a })
}

fn only_monomial(p: &MultiPoly, e: Exp) -> Option<Scalar> {
    if p.terms().all(|(te, _)| *te == e) {
        Some(p.coeff(e))
    } else {
        None
    }
}

fn kolmogorov_of(c: &CubicParams) -> Option<KolmogorovParams> {
    if !c.beta.is_zero() || !c.gamma.is_zero() {
        return None;
    }
    let c2 = only_monomial(&c.k_prime, Exp::new(0, 0, 1))?;
    let c1 = only_monomial(&c.f, Exp::new(1, 1, 0))?;
    if c1.is_zero() && c2.is_zero() {
        return None;
    }
    Some(KolmogorovParams { c1, c2 })
}

fn two_parallel_of(c: &CubicParams, torus: &Torus) -> Option<TwoParallelParams> {
    let k = torus.field();
    if !c.k_prime.is_homogeneous() || !c.k_prime.is_free_of(Var::Z) {
        return None;
    }
    let half = Scalar::from_ratio(1, 2);
    let p = c.k_prime.coeff(Exp::new(1, 0, 0)).mul(&half, k);
    let q = c.k_prime.coeff(Exp::new(0, 1, 0)).mul(&half, k);
    if p.is_zero() && q.is_zero() {
        return None;
    }
    let half_m = k.m_scalar().mul(&Scalar::from_ratio(-1, 2), k);
    if c.beta != p.mul(&half_m, k) || c.gamma != q.mul(&half_m, k) {
        return None;
    }
    Some(TwoParallelParams {
        p,
        q,
        f: c.f.clone(),
    })
}

/// Every family `χ` belongs to, most specific first. `NotOnTorus` alone when
/// the torus is not invariant.
pub fn matching_families(chi: &VectorField, torus: &Torus) -> Vec<FamilyTag> {
    if !chi.cofactor_on_torus(torus).is_invariant() {
        return vec![FamilyTag::NotOnTorus];
    }
    let degree = match chi.degree() {
        None => return vec![FamilyTag::Zero],
        Some(d) => d,
    };
    let mut tags = Vec::new();
    if degree <= 3 {
        if let Some(c) = extract_cubic(chi, torus) {
            if degree == 1 {
                tags.push(FamilyTag::DegreeOne {
                    c: c.f.as_constant().unwrap_or_default(),
                });
            }
            if degree == 2 {
                if let Some(alpha) = c.k_prime.as_constant() {
                    tags.push(FamilyTag::Quadratic(QuadraticParams {
                        alpha,
                        f: c.f.clone(),
                    }));
                }
            }
            if degree == 3 {
                if let Some(k) = kolmogorov_of(&c) {
                    tags.push(FamilyTag::Kolmogorov(k));
                }
                if let Some(tp) = two_parallel_of(&c, torus) {
                    tags.push(FamilyTag::TwoParallel(tp));
                }
            }
            if let Some(pt) = pseudo_type_params(chi) {
                tags.push(FamilyTag::PseudoType(pt));
            }
            tags.push(FamilyTag::Cubic(c));
            return tags;
        }
    }
    if let Some(pt) = pseudo_type_params(chi) {
        tags.push(FamilyTag::PseudoType(pt));
    }
    tags.push(FamilyTag::General { degree });
    tags
}

/// The most specific family of `χ`.
pub fn recognize(chi: &VectorField, torus: &Torus) -> FamilyTag {
    matching_families(chi, torus)
        .into_iter()
        .next()
        .unwrap_or(FamilyTag::NotOnTorus)
}

/// `H = F / (x² + y²)²`.
pub fn torus_ratio_integral(torus: &Torus) -> RationalFn {
    let r2 = torus.parse("x^2 + y^2").expect("static expression");
    RationalFn::new(torus.polynomial().clone(), r2.pow(2)).expect("nonzero denominator")
}

/// Known first integrals for a family: `F/(x²+y²)²` for Kolmogorov and
/// quadratic fields; `x² + y²` and `z` for pseudo-type and degree-one
/// fields.
pub fn canonical_first_integrals(
    tag: &FamilyTag,
    torus: &Torus,
) -> Result<Vec<RationalFn>, FamilyError> {
    match tag {
        FamilyTag::Kolmogorov(_) | FamilyTag::Quadratic(_) => Ok(vec![torus_ratio_integral(torus)]),
        FamilyTag::PseudoType(_) | FamilyTag::DegreeOne { .. } => Ok(vec![
            RationalFn::polynomial(torus.parse("x^2 + y^2").expect("static expression")),
            RationalFn::polynomial(torus.var(Var::Z)),
        ]),
        other => Err(FamilyError::NoKnownIntegral(other.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> Torus {
        Torus::with_m(4).unwrap()
    }

    fn poly(t: &Torus, s: &str) -> MultiPoly {
        t.parse(s).unwrap()
    }

    fn example_params(t: &Torus) -> CubicParams {
        CubicParams::new(poly(t, "1"), poly(t, "x*y"), Scalar::zero(), Scalar::zero())
    }

    #[test]
    fn builds_worked_example() {
        let t = t4();
        let chi = build_cubic(&example_params(&t), &t).unwrap();
        let expect = VectorField::parse(
            "(1/4)*x*z + x*y^2",
            "(1/4)*y*z - x^2*y",
            "(1/2)*(-4*(x^2+y^2) + z^2 + 15)",
            t.field(),
        )
        .unwrap();
        assert_eq!(chi, expect);
        assert_eq!(
            chi.cofactor_on_torus(&t).cofactor().unwrap(),
            &poly(&t, "z")
        );
    }

    #[test]
    fn rotation_from_cubic_form() {
        let t = t4();
        let p = CubicParams::new(poly(&t, "0"), poly(&t, "1"), Scalar::zero(), Scalar::zero());
        assert_eq!(
            build_cubic(&p, &t).unwrap(),
            VectorField::parse("y", "-x", "0", t.field()).unwrap()
        );
    }

    #[test]
    fn degree_violations() {
        let t = t4();
        let p = CubicParams::new(
            poly(&t, "4*z^2"),
            poly(&t, "x"),
            Scalar::zero(),
            Scalar::zero(),
        );
        assert!(matches!(
            build_cubic(&p, &t),
            Err(FamilyError::DegreeViolation(_))
        ));
        let p = CubicParams::new(
            poly(&t, "1"),
            poly(&t, "x^3"),
            Scalar::zero(),
            Scalar::zero(),
        );
        assert!(matches!(
            build_cubic(&p, &t),
            Err(FamilyError::DegreeViolation(_))
        ));
    }

    #[test]
    fn recognizes_worked_example_as_cubic() {
        let t = t4();
        let chi = build_cubic(&example_params(&t), &t).unwrap();
        assert_eq!(recognize(&chi, &t), FamilyTag::Cubic(example_params(&t)));
    }

    #[test]
    fn recognizes_pseudo_type() {
        let t = t4();
        let chi = VectorField::parse("y^3", "-x*y^2", "0", t.field()).unwrap();
        assert_eq!(
            recognize(&chi, &t),
            FamilyTag::PseudoType(PseudoTypeParams {
                n: 3,
                a: poly(&t, "y^2")
            })
        );
    }

    #[test]
    fn radial_is_not_on_torus() {
        let t = t4();
        let chi = VectorField::parse("x", "y", "z", t.field()).unwrap();
        assert_eq!(recognize(&chi, &t), FamilyTag::NotOnTorus);
    }

    #[test]
    fn kolmogorov_builder() {
        let t = t4();
        let one = Scalar::one();
        let k = build_kolmogorov(
            &KolmogorovParams {
                c1: one,
                c2: Scalar::zero(),
            },
            &t,
        );
        assert_eq!(
            k,
            VectorField::parse("x*y^2", "-x^2*y", "0", t.field()).unwrap()
        );
        let k = build_kolmogorov(
            &KolmogorovParams {
                c1: Scalar::zero(),
                c2: Scalar::from_integer(2),
            },
            &t,
        );
        assert_eq!(
            k,
            VectorField::parse(
                "(1/2)*x*z^2",
                "(1/2)*y*z^2",
                "z*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)",
                t.field()
            )
            .unwrap()
        );
        let params = KolmogorovParams {
            c1: Scalar::from_integer(3),
            c2: Scalar::from_integer(-2),
        };
        let k = build_kolmogorov(&params, &t);
        assert_eq!(
            k.cofactor_on_torus(&t).cofactor().unwrap(),
            &poly(&t, "-2*z^2")
        );
        assert_eq!(recognize(&k, &t), FamilyTag::Kolmogorov(params));
    }

    #[test]
    fn two_parallel_builder() {
        let t = t4();
        let params = TwoParallelParams {
            p: Scalar::one(),
            q: Scalar::zero(),
            f: poly(&t, "0"),
        };
        let chi = build_two_parallel(&params, &t).unwrap();
        assert_eq!(
            chi,
            VectorField::parse("(1/2)*x^2*z - 2*z", "(1/2)*x*y*z", "x*(z^2 - 1)", t.field())
                .unwrap()
        );
        assert!(chi.r().divide_exact_z(&poly(&t, "z - 1")).is_ok());
        assert!(chi.r().divide_exact_z(&poly(&t, "z + 1")).is_ok());
        assert_eq!(recognize(&chi, &t), FamilyTag::TwoParallel(params));

        let flat = TwoParallelParams {
            p: Scalar::zero(),
            q: Scalar::zero(),
            f: poly(&t, "x + z^2"),
        };
        let chi = build_two_parallel(&flat, &t).unwrap();
        assert_eq!(
            chi,
            VectorField::parse("(x + z^2)*y", "-(x + z^2)*x", "0", t.field()).unwrap()
        );
    }

    #[test]
    fn quadratic_and_degree_one_tags() {
        let t = t4();
        let q = QuadraticParams {
            alpha: Scalar::from_integer(2),
            f: poly(&t, "x - 3"),
        };
        let chi = build_quadratic(&q, &t).unwrap();
        assert_eq!(recognize(&chi, &t), FamilyTag::Quadratic(q));
        let rot = VectorField::parse("3*y", "-3*x", "0", t.field()).unwrap();
        let tags = matching_families(&rot, &t);
        assert_eq!(
            tags[0],
            FamilyTag::DegreeOne {
                c: Scalar::from_integer(3)
            }
        );
        assert!(matches!(
            tags[1],
            FamilyTag::PseudoType(PseudoTypeParams { n: 1, .. })
        ));
    }

    #[test]
    fn first_integrals_by_family() {
        let t = t4();
        let k = build_kolmogorov(
            &KolmogorovParams {
                c1: Scalar::one(),
                c2: Scalar::from_integer(2),
            },
            &t,
        );
        let tag = recognize(&k, &t);
        for h in canonical_first_integrals(&tag, &t).unwrap() {
            assert!(k.check_first_integral(&h));
        }
        let pt = VectorField::parse("y^3", "-x*y^2", "0", t.field()).unwrap();
        let hs = canonical_first_integrals(&recognize(&pt, &t), &t).unwrap();
        assert_eq!(hs.len(), 2);
        assert!(hs.iter().all(|h| pt.check_first_integral(h)));
        let cubic = build_cubic(&example_params(&t), &t).unwrap();
        assert_eq!(
            canonical_first_integrals(&recognize(&cubic, &t), &t),
            Err(FamilyError::NoKnownIntegral("cubic"))
        );
    }

    #[test]
    fn example_bracket_pair_from_parameters() {
        let t = t4();
        let x = build_cubic(
            &CubicParams::new(
                poly(&t, "4*x"),
                poly(&t, "0"),
                Scalar::zero(),
                Scalar::zero(),
            ),
            &t,
        )
        .unwrap();
        assert_eq!(
            x,
            VectorField::parse(
                "x^2*z",
                "x*y*z",
                "2*x*(-a^2*(x^2+y^2) + z^2 + a^4 - 1)",
                t.field()
            )
            .unwrap()
        );
    }
}

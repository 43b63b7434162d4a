//! Text form of polynomials.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | 'a' | 'x' | 'y' | 'z' | '(' expr ')' | '-' factor
//! rational := uint ('/' uint)?
//! ```
//!
//! Whitespace is insignificant and there is no implicit multiplication. The
//! symbol `a` is the torus radius, i.e. the scalar `√m`.

use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{fmt_rational, Exp, MultiPoly, QuadField, Scalar, Var};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("exponent {exponent} at byte {offset} exceeds {MAX_EXPONENT}")]
    Overflow { offset: usize, exponent: String },
    #[error("zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::Overflow { offset, .. }
            | ParseError::ZeroDenominator { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt, String),
    Ident(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bad(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(_, s) => write!(f, "number {s}"),
            Tok::Ident(c) => write!(f, "'{c}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Bad(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let s = &text[i..end];
            out.push((i, Tok::Num(s.parse().expect("digits"), s.to_string())));
            continue;
        }
        chars.next();
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' | 'y' | 'z' | 'a' => Tok::Ident(c),
            other => Tok::Bad(other),
        };
        out.push((i, tok));
    }
    out.push((text.len(), Tok::End));
    out
}

const BASE_START: &[&str] = &["number", "'a'", "'x'", "'y'", "'z'", "'('", "'-'"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: &'a QuadField,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let off = self.offset();
        match self.bump().1 {
            Tok::Num(n, s) => {
                let e: u32 = match u32::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => {
                        return Err(ParseError::Overflow {
                            offset: off,
                            exponent: s,
                        })
                    }
                };
                Ok(base.pow(e))
            }
            other => Err(ParseError::Syntax {
                offset: off,
                expected: vec!["exponent"],
                found: other.to_string(),
            }),
        }
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        let field = self.field;
        match self.peek().clone() {
            Tok::Num(n, _) => {
                self.bump();
                let mut value = BigRational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let off = self.offset();
                    match self.bump().1 {
                        Tok::Num(d, _) => {
                            if d.is_zero() {
                                return Err(ParseError::ZeroDenominator { offset: off });
                            }
                            value /= BigRational::from_integer(d);
                        }
                        other => {
                            return Err(ParseError::Syntax {
                                offset: off,
                                expected: vec!["number"],
                                found: other.to_string(),
                            })
                        }
                    }
                }
                Ok(MultiPoly::constant(field, Scalar::rational(value)))
            }
            Tok::Ident(c) => {
                self.bump();
                Ok(match c {
                    'x' => MultiPoly::var(field, Var::X),
                    'y' => MultiPoly::var(field, Var::Y),
                    'z' => MultiPoly::var(field, Var::Z),
                    _ => MultiPoly::constant(field, field.radical()),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["'+'", "'-'", "'*'", "'^'", "')'"]));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Minus => {
                self.bump();
                Ok(-self.factor()?)
            }
            _ => Err(self.error(BASE_START)),
        }
    }
}

/// Parses `text` into a polynomial over the given field.
pub fn parse(text: &str, field: &QuadField) -> Result<MultiPoly, ParseError> {
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
        field,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
    }
    Ok(out)
}

fn monomial_text(e: &Exp) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match e.get(v) {
            0 => {}
            1 => parts.push(v.name().to_string()),
            k => parts.push(format!("{}^{}", v.name(), k)),
        }
    }
    parts.join("*")
}

fn rational_factor(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({})", fmt_rational(r))
    }
}

/// Sign and unsigned text of a coefficient (without the monomial).
fn coeff_parts(c: &Scalar) -> (bool, Option<String>) {
    let (p, q) = (c.p(), c.q());
    if q.is_zero() {
        let mag = p.abs();
        let text = (!mag.is_integer() || *mag.numer() != 1.into()).then(|| rational_factor(&mag));
        return (p.is_negative(), text);
    }
    if p.is_zero() {
        let mag = q.abs();
        let text = if mag.is_integer() && *mag.numer() == 1.into() {
            "a".to_string()
        } else {
            format!("{}*a", rational_factor(&mag))
        };
        return (q.is_negative(), Some(text));
    }
    let qa = q.abs();
    let qtext = if qa.is_integer() && *qa.numer() == 1.into() {
        "a".to_string()
    } else {
        format!("{}*a", rational_factor(&qa))
    };
    let sep = if q.is_negative() { "-" } else { "+" };
    (
        false,
        Some(format!("({} {} {})", fmt_rational(p), sep, qtext)),
    )
}

fn format_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Exp, &'a Scalar)>,
{
    let mut sorted: Vec<(&Exp, &Scalar)> = terms.into_iter().collect();
    // graded lexicographic, x > y > z, highest first
    sorted.sort_by_key(|(e, _)| Reverse((e.degree(), e.0)));
    if sorted.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in sorted.into_iter().enumerate() {
        let (neg, coeff) = coeff_parts(c);
        let mono = monomial_text(e);
        let body = match (coeff, mono.is_empty()) {
            (None, true) => "1".to_string(),
            (None, false) => mono,
            (Some(c), true) => c,
            (Some(c), false) => format!("{c}*{mono}"),
        };
        match (idx, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// Canonical text: terms in graded lexicographic order (x > y > z).
/// Always re-parses to the same polynomial.
pub fn serialize(p: &MultiPoly) -> String {
    format_terms(p.terms())
}

/// Text of a single scalar in the same grammar.
pub fn format_scalar(c: &Scalar) -> String {
    format_terms([(&Exp::ONE, c)].into_iter().filter(|(_, c)| !c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(m: i64) -> QuadField {
        QuadField::from_integer(m)
    }

    #[test]
    fn parses_example_component() {
        let f = k(4);
        let p = parse("(1/4)*x*z + x*y^2", &f).unwrap();
        let expect = MultiPoly::from_terms(
            &f,
            [
                (Exp::new(1, 0, 1), Scalar::from_ratio(1, 4)),
                (Exp::new(1, 2, 0), Scalar::one()),
            ],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn radical_squares_to_m() {
        assert_eq!(
            parse("a^2", &k(4)).unwrap(),
            MultiPoly::constant(&k(4), Scalar::from_integer(4))
        );
    }

    #[test]
    fn syntax_error_offset() {
        let err = parse("x + * y", &k(4)).unwrap_err();
        assert_eq!(err.offset(), 4);
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn overflow_and_other_errors() {
        assert!(matches!(
            parse("x^65", &k(2)),
            Err(ParseError::Overflow { offset: 2, .. })
        ));
        assert!(parse("x^64", &k(2)).is_ok());
        assert!(matches!(
            parse("1/0", &k(2)),
            Err(ParseError::ZeroDenominator { .. })
        ));
        assert!(parse("2x", &k(2)).is_err());
        assert!(parse("w", &k(2)).is_err());
        assert!(parse("(x", &k(2)).is_err());
        assert!(parse("", &k(2)).is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let f = k(3);
        assert_eq!(parse("-x^2", &f).unwrap(), -parse("x^2", &f).unwrap());
        assert_eq!(parse("--x", &f).unwrap(), parse("x", &f).unwrap());
    }

    #[test]
    fn serialization_examples() {
        let f = k(4);
        assert_eq!(serialize(&MultiPoly::zero(&f)), "0");
        assert_eq!(serialize(&parse("x^2 - y^2", &f).unwrap()), "x^2 - y^2");
        assert_eq!(
            serialize(&parse("(1/4)*x*z + x*y^2", &f).unwrap()),
            "x*y^2 + (1/4)*x*z"
        );
        assert_eq!(
            serialize(&parse("-3*a*x + (1/2 - a)*z + a - 7", &f).unwrap()),
            "-3*a*x + (1/2 - a)*z + (-7 + a)"
        );
    }

    #[test]
    fn scalar_text() {
        let f = k(5);
        assert_eq!(format_scalar(&Scalar::from_ratio(-1, 4)), "-(1/4)");
        assert_eq!(format_scalar(&f.radical()), "a");
        assert_eq!(format_scalar(&Scalar::zero()), "0");
        let s = format_scalar(&(Scalar::from_ratio(-1, 4) - f.radical()));
        assert_eq!(
            parse(&s, &f).unwrap().as_constant().unwrap(),
            Scalar::from_ratio(-1, 4) - f.radical()
        );
    }
}

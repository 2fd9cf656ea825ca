//! Polynomial grammar for the command line:
//!
//! ```text
//! poly  := term ('+' term)*
//! term  := [coeff '*'] 'x' ['^' uint] | coeff
//! coeff := hex literal | 'a' | 'a^' uint
//! ```
//!
//! `a` denotes the field's canonical generator (the polynomial-basis element
//! x). Coefficient literals are hex (the `0x` prefix is optional); exponents
//! after `^` are decimal. Whitespace is insignificant. Repeated exponents
//! accumulate, so `x + x` is 0 in characteristic 2.

use std::fmt;

use apn_surface::{FieldElement, FieldSpec, UniPoly};

const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, expected: String },
    CoefficientNotInField { pos: usize, bits: u64, n: u32 },
    ExponentTooLarge { pos: usize, value: u64 },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, expected } => {
                write!(f, "syntax error at position {pos}: expected {expected}")
            }
            ParseError::CoefficientNotInField { pos, bits, n } => write!(
                f,
                "coefficient 0x{bits:X} at position {pos} does not fit in GF(2^{n})"
            ),
            ParseError::ExponentTooLarge { pos, value } => {
                write!(f, "exponent {value} at position {pos} exceeds the cap {MAX_EXPONENT}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Plus,
    Star,
    Caret,
    X,
    A,
    Number(u64),
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token; numbers are read with the given radix.
    fn next(&mut self, radix: u32) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.text.len() {
            return Ok((start, Tok::End));
        }
        let c = self.text[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'x' | b'X' => {
                self.pos += 1;
                Tok::X
            }
            b'a' | b'A' => {
                self.pos += 1;
                Tok::A
            }
            b'0'..=b'9' | b'b'..=b'f' | b'B'..=b'F' => {
                let mut s = String::new();
                let mut radix = radix;
                if c == b'0'
                    && self.pos + 1 < self.text.len()
                    && (self.text[self.pos + 1] == b'x' || self.text[self.pos + 1] == b'X')
                {
                    self.pos += 2;
                    radix = 16;
                }
                while self.pos < self.text.len()
                    && self.text[self.pos].is_ascii_alphanumeric()
                {
                    s.push(self.text[self.pos] as char);
                    self.pos += 1;
                }
                let v = u64::from_str_radix(&s, radix).map_err(|_| ParseError::Syntax {
                    pos: start,
                    expected: format!("a base-{radix} number"),
                })?;
                Tok::Number(v)
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    expected: "'+', '*', '^', 'x', 'a' or a number".into(),
                })
            }
        };
        Ok((start, tok))
    }
}

/// Parses the grammar above into a dense univariate polynomial over `spec`.
pub fn parse_poly(text: &str, spec: FieldSpec) -> Result<UniPoly, ParseError> {
    let mut lx = Lexer::new(text);
    let mut acc = UniPoly::zero(spec);
    loop {
        let term = parse_term(&mut lx, spec)?;
        acc = acc.add(&term);
        let (pos, tok) = lx.next(16)?;
        match tok {
            Tok::Plus => continue,
            Tok::End => break,
            _ => {
                return Err(ParseError::Syntax {
                    pos,
                    expected: "'+' or end of input".into(),
                })
            }
        }
    }
    Ok(acc)
}

fn parse_exponent(lx: &mut Lexer) -> Result<u64, ParseError> {
    let (pos, tok) = lx.next(10)?;
    match tok {
        Tok::Number(e) => {
            if e > MAX_EXPONENT {
                Err(ParseError::ExponentTooLarge { pos, value: e })
            } else {
                Ok(e)
            }
        }
        _ => Err(ParseError::Syntax {
            pos,
            expected: "a decimal exponent".into(),
        }),
    }
}

fn element(spec: FieldSpec, bits: u64, pos: usize) -> Result<FieldElement, ParseError> {
    spec.element(bits)
        .map_err(|_| ParseError::CoefficientNotInField {
            pos,
            bits,
            n: spec.n(),
        })
}

fn parse_term(lx: &mut Lexer, spec: FieldSpec) -> Result<UniPoly, ParseError> {
    let (pos, tok) = lx.next(16)?;
    let (coeff, saw_coeff) = match tok {
        Tok::Number(bits) => (element(spec, bits, pos)?, true),
        Tok::A => {
            // optional '^' uint
            let save = lx.pos;
            let (_, t2) = lx.next(10)?;
            let e = if t2 == Tok::Caret {
                parse_exponent(lx)?
            } else {
                lx.pos = save;
                1
            };
            (spec.generator().pow(e), true)
        }
        Tok::X => {
            // bare variable term
            return finish_power(lx, spec, spec.one());
        }
        _ => {
            return Err(ParseError::Syntax {
                pos,
                expected: "a coefficient, 'a' or 'x'".into(),
            })
        }
    };
    debug_assert!(saw_coeff);
    // optional '*' x ['^' uint]
    let save = lx.pos;
    let (pos2, t2) = lx.next(16)?;
    match t2 {
        Tok::Star => {
            let (pos3, t3) = lx.next(16)?;
            if t3 != Tok::X {
                return Err(ParseError::Syntax {
                    pos: pos3,
                    expected: "'x' after '*'".into(),
                });
            }
            finish_power(lx, spec, coeff)
        }
        Tok::Plus | Tok::End => {
            lx.pos = save;
            Ok(UniPoly::constant(coeff))
        }
        _ => Err(ParseError::Syntax {
            pos: pos2,
            expected: "'*', '+' or end of input".into(),
        }),
    }
}

fn finish_power(
    lx: &mut Lexer,
    _spec: FieldSpec,
    coeff: FieldElement,
) -> Result<UniPoly, ParseError> {
    let save = lx.pos;
    let (_, tok) = lx.next(10)?;
    let e = if tok == Tok::Caret {
        parse_exponent(lx)?
    } else {
        lx.pos = save;
        1
    };
    Ok(UniPoly::monomial(coeff, e as usize))
}

/// Position-aware field parser for `--field` values.
pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(text).map_err(|e| format!("invalid field `{text}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::with_default_modulus(n).unwrap()
    }

    #[test]
    fn remark_polynomial_over_gf8() {
        let spec = gf(3);
        let p = parse_poly("x^57 + a*x^30 + a^2*x^3", spec).unwrap();
        assert_eq!(p.degree(), Some(57));
        let a = spec.generator();
        assert_eq!(p.coeff(30), a);
        assert_eq!(p.coeff(3), a * a);
        assert_eq!(p.coeff(57), spec.one());
    }

    #[test]
    fn bare_monomial() {
        let p = parse_poly("x^3", gf(1)).unwrap();
        assert_eq!(p.to_string(), "x^3");
        let q = parse_poly("x", gf(1)).unwrap();
        assert_eq!(q.degree(), Some(1));
    }

    #[test]
    fn hex_coefficients() {
        let spec = gf(2);
        let p = parse_poly("0x3*x^2 + 0x2", spec).unwrap();
        assert_eq!(p.coeff(2).bits(), 3);
        assert_eq!(p.coeff(0).bits(), 2);
        // bare literals read as hex
        let q = parse_poly("3*x^2 + 2", spec).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn whitespace_insignificant() {
        let spec = gf(3);
        assert_eq!(
            parse_poly("x^5+a*x", spec).unwrap(),
            parse_poly("  x^5 + a * x ", spec).unwrap()
        );
    }

    #[test]
    fn accumulation_in_char2() {
        let p = parse_poly("x + x", gf(1)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_poly("x^5 + * 3", gf(1)) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("x^", gf(1)) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn coefficient_range_checked() {
        match parse_poly("0x4*x", gf(2)) {
            Err(ParseError::CoefficientNotInField { bits: 4, n: 2, .. }) => {}
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn generator_in_gf2_is_one() {
        let p = parse_poly("a*x^2", gf(1)).unwrap();
        assert_eq!(p.coeff(2).bits(), 1);
    }
}

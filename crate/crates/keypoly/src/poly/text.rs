//! Text grammar for polynomials: terms "c*x^k", "x^k", "x", "c" joined by
//! "+" or "-", coefficients written "a/b". Parsing is whitespace-insensitive
//! and accepts the unicode minus sign; printing is canonical (descending
//! powers, reduced fractions).

use super::RatPoly;
use crate::error::{Error, Result};
use crate::value::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub(super) fn format_poly(p: &RatPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for i in (0..p.coeffs().len()).rev() {
        let c = &p.coeffs()[i];
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if i == 0 {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if i == 1 {
                write!(f, "x")?;
            } else {
                write!(f, "x^{i}")?;
            }
        }
    }
    Ok(())
}

pub(super) fn parse_poly(input: &str) -> Result<RatPoly> {
    let src: String = input
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = src.as_bytes();
    let mut pos = 0usize;
    let mut coeffs: Vec<Rat> = Vec::new();

    let add_term = |coef: Rat, power: usize, coeffs: &mut Vec<Rat>| {
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rat::zero());
        }
        coeffs[power] = &coeffs[power] + &coef;
    };

    while pos < bytes.len() {
        // sign
        let mut negative = false;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                negative = true;
                pos += 1;
            }
            _ if pos == 0 => {}
            _ => {
                return Err(Error::Parse(format!(
                    "expected '+' or '-' at position {pos} in {input:?}"
                )))
            }
        }
        if pos >= bytes.len() {
            return Err(Error::Parse(format!("dangling sign in {input:?}")));
        }
        // optional coefficient
        let mut coef: Option<Rat> = None;
        if bytes[pos].is_ascii_digit() {
            coef = Some(scan_rational(bytes, &mut pos, input)?);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                if pos >= bytes.len() || bytes[pos] != b'x' {
                    return Err(Error::Parse(format!("expected x after '*' in {input:?}")));
                }
            }
        }
        // optional x-part
        let mut power = 0usize;
        if pos < bytes.len() && bytes[pos] == b'x' {
            pos += 1;
            power = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(Error::Parse(format!("missing exponent in {input:?}")));
                }
                power = src[start..pos]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {input:?}")))?;
            }
        } else if coef.is_none() {
            return Err(Error::Parse(format!(
                "expected a term at position {pos} in {input:?}"
            )));
        }
        let mut c = coef.unwrap_or_else(Rat::one);
        if negative {
            c = -c;
        }
        add_term(c, power, &mut coeffs);
    }
    Ok(RatPoly::new(coeffs))
}

fn scan_rational(bytes: &[u8], pos: &mut usize, input: &str) -> Result<Rat> {
    let scan_int = |pos: &mut usize| -> Result<BigInt> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse(format!("expected a number in {input:?}")));
        }
        std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad number in {input:?}")))
    };
    let num = scan_int(pos)?;
    if *pos < bytes.len() && bytes[*pos] == b'/' {
        *pos += 1;
        let den = scan_int(pos)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {input:?}")));
        }
        Ok(Rat::new(num, den))
    } else {
        Ok(Rat::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::super::RatPoly;
    use crate::value::rat_i64;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_grammar_forms() {
        assert_eq!(p("x^2 + 2"), RatPoly::from_i64_coeffs(&[2, 0, 1]));
        assert_eq!(p("2*x + 1"), RatPoly::from_i64_coeffs(&[1, 2]));
        assert_eq!(p("-x"), RatPoly::from_i64_coeffs(&[0, -1]));
        assert_eq!(p("x"), RatPoly::x());
        assert_eq!(
            p("1/2*x^3 - x"),
            RatPoly::new(vec![
                rat_i64(0, 1),
                rat_i64(-1, 1),
                rat_i64(0, 1),
                rat_i64(1, 2)
            ])
        );
        // whitespace-insensitive, unicode minus, repeated powers collapse
        assert_eq!(p("  x ^ 2+2 "), p("x^2 + 2"));
        assert_eq!(p("x\u{2212}1"), p("x - 1"));
        assert_eq!(p("x + x"), p("2*x"));
        assert_eq!(p("3/6"), p("1/2"));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("2 + x^2").to_string(), "x^2 + 2");
        assert_eq!(p("-x^2 - 1/2").to_string(), "-x^2 - 1/2");
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(p("x").to_string(), "x");
        assert_eq!(p("3*x^2").to_string(), "3*x^2");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x^", "1/0", "y + 1", "x++1", "1.5*x", "*x", "3*"] {
            assert!(bad.parse::<RatPoly>().is_err(), "accepted {bad:?}");
        }
    }
}

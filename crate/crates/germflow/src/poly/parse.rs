//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! poly    := term ('+' term | '-' term)* | '0'
//! term    := [sign] coeff ['*' factors] | [sign] factors
//! coeff   := integer | integer '/' positive-integer
//! factors := factor (factor)*          (juxtaposition = product)
//! factor  := varname ['^' nonneg-integer]
//! ```
//!
//! Whitespace-insensitive. Variables must come from the declared list.

use super::{Monomial, MultiPoly, PolyError, Rational, MAX_DEGREE, MAX_VARS};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Parse `text` into a polynomial over the ordered variable list `vars`.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MultiPoly, PolyError> {
    if vars.len() > MAX_VARS {
        return Err(PolyError::TooManyVariables { n: vars.len() });
    }
    let mut parser = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        vars,
    };
    parser.parse()
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn parse(&mut self) -> Result<MultiPoly, PolyError> {
        let n = self.vars.len();
        let mut acc = MultiPoly::zero(n);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.syntax("empty input"));
        }
        loop {
            let term = self.parse_term(n)?;
            acc = acc.add(&term);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') | Some('-') => {
                    // consumed by the next term's sign handling
                }
                Some(c) => {
                    return Err(self.syntax(&format!("unexpected character `{c}`")));
                }
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self, n: usize) -> Result<MultiPoly, PolyError> {
        self.skip_ws();
        let mut sign = Rational::one();
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                }
                '-' => {
                    sign = -sign;
                    self.bump();
                }
                _ => break,
            }
            self.skip_ws();
        }
        self.skip_ws();
        let mut coeff = sign;
        let mut mono = vec![0u32; n];

        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let numer = self.parse_integer()?;
                let mut denom = BigInt::one();
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    denom = self.parse_integer()?;
                    if denom.is_zero() {
                        return Err(self.syntax("zero denominator"));
                    }
                }
                coeff *= Rational::new(numer, denom);
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.bump();
                    self.parse_factors(&mut mono)?;
                }
            }
            Some(c) if is_name_start(c) => {
                self.parse_factors(&mut mono)?;
            }
            Some(c) => return Err(self.syntax(&format!("expected term, found `{c}`"))),
            None => return Err(self.syntax("expected term, found end of input")),
        }

        let degree: u32 = mono.iter().sum();
        if degree > MAX_DEGREE {
            return Err(PolyError::DegreeTooLarge { degree });
        }
        Ok(MultiPoly::from_terms(n, [(Monomial::new(mono), coeff)]))
    }

    fn parse_factors(&mut self, mono: &mut [u32]) -> Result<(), PolyError> {
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if is_name_start(c) => {
                    let (name, start) = self.parse_name();
                    let idx = self
                        .vars
                        .iter()
                        .position(|v| *v == name)
                        .ok_or(PolyError::UnknownVariable { name, pos: start })?;
                    let mut exp: u32 = 1;
                    self.skip_ws();
                    if self.peek() == Some('^') {
                        self.bump();
                        self.skip_ws();
                        if self.peek() == Some('-') {
                            return Err(PolyError::NegativeExponent { pos: self.byte_pos() });
                        }
                        let e = self.parse_integer()?;
                        exp = e
                            .try_into()
                            .map_err(|_| PolyError::DegreeTooLarge { degree: u32::MAX })?;
                    }
                    mono[idx] = mono[idx]
                        .checked_add(exp)
                        .ok_or(PolyError::DegreeTooLarge { degree: u32::MAX })?;
                }
                _ => break,
            }
        }
        Ok(())
    }

    fn parse_integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.byte_pos();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(PolyError::Syntax {
                pos: start,
                message: "expected integer".into(),
            });
        }
        Ok(digits.parse().expect("digit string parses as BigInt"))
    }

    fn parse_name(&mut self) -> (String, usize) {
        let start = self.byte_pos();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        (name, start)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn byte_pos(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map(|&(i, c)| i + c.len_utf8()).unwrap_or(0))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.byte_pos(),
            message: message.into(),
        }
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sum_of_squares() {
        let f = parse_poly("1*x^2 + 1*y^2", &["x", "y"]).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.total_degree(), 2);
        assert_eq!(f, parse_poly("x^2+y^2", &["x", "y"]).unwrap());
    }

    #[test]
    fn parses_negative_coefficient() {
        let f = parse_poly("-2*x^2", &["x"]).unwrap();
        assert_eq!(f.eval(&[1.0]), -2.0);
    }

    #[test]
    fn parses_zero() {
        let f = parse_poly("0", &["x", "y"]).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.num_terms(), 0);
    }

    #[test]
    fn parses_rational_coefficient_and_juxtaposition() {
        let f = parse_poly("3/2*x y^2 - x", &["x", "y"]).unwrap();
        assert!((f.eval(&[2.0, 1.0]) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_variable() {
        match parse_poly("x + q", &["x", "y"]) {
            Err(PolyError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "q");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_exponent() {
        assert!(matches!(
            parse_poly("x^-1", &["x"]),
            Err(PolyError::NegativeExponent { pos: 2 })
        ));
    }

    #[test]
    fn rejects_syntax_error_with_position() {
        match parse_poly("x^2 $ y", &["x", "y"]) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_degree_cap() {
        assert!(matches!(
            parse_poly("x^65", &["x"]),
            Err(PolyError::DegreeTooLarge { degree: 65 })
        ));
        assert!(parse_poly("x^64", &["x"]).is_ok());
    }

    #[test]
    fn rejects_too_many_variables() {
        let vars: Vec<&str> = vec!["a", "b", "c", "d", "e", "f", "g", "h", "i"];
        assert!(matches!(
            parse_poly("a", &vars),
            Err(PolyError::TooManyVariables { n: 9 })
        ));
    }

    #[test]
    fn double_sign_and_whitespace() {
        let f = parse_poly("  - 1*x + + 2*x ", &["x"]).unwrap();
        assert_eq!(f, parse_poly("x", &["x"]).unwrap());
    }
}

//! Recursive-descent parser for rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::ratfunc::RatFunc;
use super::Rational;

/// Parse with the default variable names `x1..xn`.
pub fn parse_ratfunc(text: &str, nvars: usize) -> Result<RatFunc> {
    let names: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    parse_with_names(text, &names)
}

pub fn parse_with_names(text: &str, names: &[String]) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| Error::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected integer exponent"));
        }
        let e: i32 = digits.parse().map_err(|_| Error::Parse {
            pos: at,
            msg: "exponent too large".into(),
        })?;
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| Error::Parse {
            pos: at,
            msg: "negative power of zero".into(),
        })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let v: BigInt = d.parse().expect("digits");
                Ok(RatFunc::constant(n, Rational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|v| v == name) {
                    Some(i) => Ok(RatFunc::var(n, i)),
                    None => Err(Error::Parse {
                        pos: start,
                        msg: format!("undeclared variable '{name}'"),
                    }),
                }
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_expression() {
        let r = parse_ratfunc("(x1^2 - 1)/(x1 - 1) + 2*x2^-1", 2).unwrap();
        let x1 = RatFunc::var(2, 0);
        let x2 = RatFunc::var(2, 1);
        let expected =
            &(&x1 + &RatFunc::one(2)) + &(&RatFunc::from_int(2, 2) * &x2.recip().unwrap());
        assert_eq!(r, expected);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(
            parse_ratfunc("-x1^2", 1).unwrap(),
            -RatFunc::var(1, 0).pow(2).unwrap()
        );
    }

    #[test]
    fn positioned_errors() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(
            parse_with_names("x +* y", &names),
            Err(Error::Parse {
                pos: 3,
                msg: "expected a number, variable or '('".into()
            })
        );
        assert!(matches!(
            parse_with_names("x + z", &names),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_with_names("(x", &names),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_with_names("x/0", &names),
            Err(Error::Parse { pos: 2, .. })
        ));
    }
}

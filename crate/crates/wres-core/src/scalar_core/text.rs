//! Canonical text form: integers, `i`, `xin`, `+ - * / ^` and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::{GaussRational, Poly, RatFuncXi};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    I,
    Xin,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let st = k;
            while k < cs.len() && cs[k].is_ascii_digit() {
                k += 1;
            }
            let lit: String = cs[st..k].iter().collect();
            out.push((col, Tok::Int(lit.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let st = k;
            while k < cs.len() && cs[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let w: String = cs[st..k].iter().collect();
            match w.as_str() {
                "i" => out.push((col, Tok::I)),
                "xin" => out.push((col, Tok::Xin)),
                _ => return Err(ParseError { col, msg: format!("unknown identifier `{}`", w) }),
            }
        } else if "+-*/^()".contains(c) {
            out.push((col, Tok::Op(c)));
            k += 1;
        } else {
            return Err(ParseError { col, msg: format!("unexpected character `{}`", c) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { col: self.col(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<RatFuncXi, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFuncXi, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let col = self.col();
            let t = self.unary()?;
            acc = if c == '*' {
                acc.mul(&t)
            } else {
                acc.div(&t).map_err(|e| ParseError { col, msg: e.to_string() })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFuncXi, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFuncXi, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError { col: self.col(), msg: "exponent too large".into() })?;
                    let mut acc = RatFuncXi::one();
                    for _ in 0..e {
                        acc = acc.mul(&base);
                    }
                    return Ok(acc);
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFuncXi, ParseError> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match t {
            Tok::Int(n) => Ok(RatFuncXi::constant(GaussRational::real(BigRational::from_integer(n)))),
            Tok::I => Ok(RatFuncXi::constant(GaussRational::i())),
            Tok::Xin => Ok(RatFuncXi::poly(Poly::x())),
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, `i`, `xin` or `(`")
            }
        }
    }
}

pub fn parse_ratfunc(s: &str) -> Result<RatFuncXi, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_gauss(s: &str) -> Result<GaussRational, ParseError> {
    parse_ratfunc(s)?
        .as_constant()
        .ok_or(ParseError { col: 1, msg: "expression depends on xin".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_examples() {
        for s in ["0", "-3/4*i", "1/2-1/2*i", "xin^2+1", "(xin)/(xin^4+2*xin^2+1)", "2*xin^3-i*xin+(1+i)"] {
            let r = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&r.to_string()).unwrap(), r, "{}", s);
        }
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(parse_ratfunc("(xin^2+1)/(xin+i)").unwrap().to_string(), "xin-i");
        assert_eq!(parse_ratfunc("2/(2*xin+2*i)").unwrap().to_string(), "(1)/(xin+i)");
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_ratfunc("1 + y").unwrap_err();
        assert_eq!(e.col, 5);
        assert!(parse_ratfunc("1/(xin-xin)").is_err());
        assert!(parse_ratfunc("(1").is_err());
    }
}

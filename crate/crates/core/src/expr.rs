//! Text syntax for field specifications, rational functions and forms.
//!
//! Expressions use `x` for the variable, `t` for the field generator and
//! `dx` for the differential; `*` may be omitted between factors. This is
//! the notation the `render` methods print, so rendered output parses back.
//!
//! ```
//! use hurwitz::expr::{parse_field, parse_form};
//! let f = parse_field("2").unwrap();
//! let w = parse_form(&f, "dx/(x^3 (x+1)^4)").unwrap();
//! assert_eq!(parse_form(&f, &w.cartier().unwrap().render()).unwrap(), parse_form(&f, "dx/(x^2 (x+1)^2)").unwrap());
//! ```

use crate::differential::DifferentialForm;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;

/// `"p"` for a prime field or `"p:c0,c1,...,cd"` with the modulus in ascending degree.
pub fn parse_field(s: &str) -> Result<Field> {
    let bad = |what: &str| Error::Parse(format!("field `{s}`: {what}"));
    let (p, modulus) = match s.split_once(':') {
        None => (s, None),
        Some((p, m)) => (p, Some(m)),
    };
    let p: u32 = p.trim().parse().map_err(|_| bad("characteristic is not an integer"))?;
    let spec = match modulus {
        None => FieldSpec::prime(p),
        Some(m) => {
            let coeffs = m
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("modulus coefficients must be integers"))?;
            FieldSpec::new(p, coeffs)
        }
    };
    Field::new(spec)
}

pub fn parse_function(field: &Field, s: &str) -> Result<RationalFunction> {
    let v = Parser::new(field, s)?.parse()?;
    if v.dx != 0 && !v.f.is_zero() {
        return Err(Error::Parse(format!("`{s}` is a form, expected a function")));
    }
    Ok(v.f)
}

pub fn parse_form(field: &Field, s: &str) -> Result<DifferentialForm> {
    let v = Parser::new(field, s)?.parse()?;
    if v.dx != 1 && !v.f.is_zero() {
        return Err(Error::Parse(format!("`{s}` must contain dx exactly once as a factor")));
    }
    Ok(DifferentialForm::new(v.f))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
}

struct Val {
    f: RationalFunction,
    dx: i64,
}

struct Parser<'a> {
    field: &'a Field,
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Field, src: &'a str) -> Result<Self> {
        let mut toks = Vec::new();
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c.is_ascii_digit() {
                let mut n = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    n.push(d);
                    chars.next();
                }
                toks.push(Tok::Num(n.parse().map_err(|_| Error::Parse(format!("number {n} is too large")))?));
            } else if c.is_ascii_alphabetic() {
                let mut id = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphabetic()) {
                    id.push(d);
                    chars.next();
                }
                toks.push(Tok::Ident(id));
            } else if "+-*/^()".contains(c) {
                toks.push(Tok::Sym(c));
                chars.next();
            } else {
                return Err(Error::Parse(format!("unexpected character `{c}` in `{src}`")));
            }
        }
        Ok(Parser { field, src, toks, pos: 0 })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} of `{}`", self.pos + 1, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Val> {
        if self.toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let v = self.sum()?;
        if self.pos != self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn sum(&mut self) -> Result<Val> {
        let mut acc = self.product()?;
        loop {
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let mut rhs = self.product()?;
            if neg {
                rhs.f = rhs.f.neg();
            }
            if acc.f.is_zero() {
                acc = rhs;
            } else if !rhs.f.is_zero() {
                if rhs.dx != acc.dx {
                    return Err(self.err("cannot add a form and a function"));
                }
                acc.f = acc.f.add(&rhs.f);
            }
        }
    }

    fn product(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = Val { f: acc.f.mul(&rhs.f), dx: acc.dx + rhs.dx };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let f = acc.f.div(&rhs.f).map_err(|_| self.err("division by zero"))?;
                acc = Val { f, dx: acc.dx - rhs.dx };
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let rhs = self.power()?;
                acc = Val { f: acc.f.mul(&rhs.f), dx: acc.dx + rhs.dx };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Val { f: v.f.neg(), dx: v.dx });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let Some(Tok::Num(e)) = self.peek().cloned() else {
            return Err(self.err("expected an integer exponent"));
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(self.err("expected `)`"));
        }
        let e = if neg { -(e as i64) } else { e as i64 };
        let f = base.f.powi(e).map_err(|_| self.err("negative power of zero"))?;
        Ok(Val { f, dx: base.dx * e })
    }

    fn atom(&mut self) -> Result<Val> {
        let field = self.field;
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        let (f, dx) = match tok {
            Tok::Num(n) => (RationalFunction::constant(field, field.from_int((n % field.characteristic() as u64) as i64)), 0),
            Tok::Ident(id) => match id.as_str() {
                "x" => (RationalFunction::x(field), 0),
                "t" => (RationalFunction::from_poly(Polynomial::constant(field, field.t())), 0),
                "dx" => (RationalFunction::one(field), 1),
                _ => return Err(self.err(&format!("unknown name `{id}`"))),
            },
            Tok::Sym('(') => {
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                return Ok(v);
            }
            Tok::Sym(c) => return Err(self.err(&format!("unexpected `{c}`"))),
        };
        Ok(Val { f, dx })
    }
}

//! Text forms of distributions and operators.
//!
//! Distributions:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := ['-'] factor ('*' factor)*
//! factor  := number | 'i' | 'sqrt(' q ')' | '(' expr ')' | atom
//! atom    := 'delta' ['^' k | '^(' k ')'] | 'x' ['^' p] | 'phi(' n ')'
//!          | 'psi(' n ')' | 'exp(' q ')' | 'cos(' q ')' | 'sin(' q ')'
//!          | 'e(' n ')' | 'hermite[' expr (',' expr)* ']'
//! number  := 12 | 3/4 | 0.25 | 1.5e-3, optionally followed by 'i'
//! ```
//!
//! Whitespace is ignored between tokens. Operators use the letters `c`,
//! `cdag`, `x`, `D`, juxtaposed into words, with scalar factors and `+`/`-`.

use std::fmt;

use eprod_core::{Distribution, Letter, OperatorExpr, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error at {}: {m}", self.position),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol '{s}' at {}", self.position),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Imag(BigRational),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let (q, next) = number(src, i)?;
            if b.get(next) == Some(&b'i') && !b.get(next + 1).is_some_and(|d| d.is_ascii_alphanumeric()) {
                out.push((Tok::Imag(q), i));
                i = next + 1;
            } else {
                out.push((Tok::Num(q), i));
                i = next;
            }
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(ch.to_string()), position: i });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// `int`, `int/int`, `int.frac` or a decimal with exponent, read exactly.
fn number(src: &str, start: usize) -> Result<(BigRational, usize), ParseError> {
    let b = src.as_bytes();
    let digits = |mut j: usize| {
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let int_end = digits(start);
    let int_part: BigInt = if int_end > start { src[start..int_end].parse().expect("digits") } else { BigInt::zero() };
    if b.get(int_end) == Some(&b'/') && b.get(int_end + 1).is_some_and(u8::is_ascii_digit) {
        let den_end = digits(int_end + 1);
        let den: BigInt = src[int_end + 1..den_end].parse().expect("digits");
        if den.is_zero() {
            return Err(syntax(int_end + 1, "zero denominator"));
        }
        return Ok((BigRational::new(int_part, den), den_end));
    }
    let mut end = int_end;
    let mut q = BigRational::from_integer(int_part);
    if b.get(end) == Some(&b'.') {
        let frac_end = digits(end + 1);
        let frac = &src[end + 1..frac_end];
        if !frac.is_empty() {
            let num: BigInt = frac.parse().expect("digits");
            q += BigRational::new(num, BigInt::from(10).pow(frac.len() as u32));
        }
        end = frac_end;
    }
    if matches!(b.get(end), Some(b'e' | b'E')) {
        let mut j = end + 1;
        let negative = b.get(j) == Some(&b'-');
        if matches!(b.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        if b.get(j).is_some_and(u8::is_ascii_digit) {
            let exp_end = digits(j);
            let k: u32 = src[j..exp_end].parse().map_err(|_| syntax(j, "exponent too large"))?;
            let scale = BigRational::from_integer(BigInt::from(10).pow(k));
            q = if negative { q / scale } else { q * scale };
            end = exp_end;
        }
    }
    Ok((q, end))
}

fn syntax(position: usize, msg: &str) -> ParseError {
    ParseError { kind: ParseErrorKind::Syntax(msg.to_string()), position }
}

/// A parsed subexpression: either a plain number or a distribution.
#[derive(Debug, Clone)]
enum Value {
    Num(Scalar),
    Dist(Distribution),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), &format!("expected '{c}'")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(syntax(self.pos(), "unexpected trailing input")),
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let negate = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let mut rhs = self.term()?;
            if negate {
                rhs = scale(rhs, &-Scalar::one());
            }
            acc = add(acc, rhs, pos)?;
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let negative = self.eat('-');
        let mut acc = self.factor()?;
        loop {
            let pos = self.pos();
            if !self.eat('*') {
                break;
            }
            let rhs = self.factor()?;
            acc = match (acc, rhs) {
                (Value::Num(a), Value::Num(b)) => Value::Num(&a * &b),
                (Value::Num(s), d @ Value::Dist(_)) | (d @ Value::Dist(_), Value::Num(s)) => scale(d, &s),
                (Value::Dist(_), Value::Dist(_)) => return Err(syntax(pos, "distributions cannot be multiplied")),
            };
        }
        Ok(if negative { scale(acc, &-Scalar::one()) } else { acc })
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(q) => Ok(Value::Num(Scalar::real(q))),
            Tok::Imag(q) => Ok(Value::Num(Scalar::new(BigRational::zero(), q))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) => self.atom(&name, pos),
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            Tok::Sym(c) => Err(syntax(pos, &format!("unexpected '{c}'"))),
        }
    }

    fn atom(&mut self, name: &str, pos: usize) -> Result<Value, ParseError> {
        let d = match name {
            "i" => return Ok(Value::Num(Scalar::i())),
            "sqrt" => {
                let q = self.paren_rational()?;
                return Scalar::sqrt(&q).map(Value::Num).map_err(|e| syntax(pos, &e.to_string()));
            }
            "delta" => Distribution::DeltaDeriv(self.power()?.unwrap_or(0)),
            "x" => Distribution::Monomial(self.power()?.unwrap_or(1)),
            "phi" => Distribution::NormalizedMonomial(self.paren_index()?),
            "psi" => Distribution::NormalizedDeltaDeriv(self.paren_index()?),
            "exp" => Distribution::ExpReal(self.paren_rational()?),
            "cos" => Distribution::CosWave(self.paren_rational()?),
            "sin" => Distribution::SinWave(self.paren_rational()?),
            "e" => Distribution::hermite(self.paren_index()? as usize),
            "hermite" => Distribution::hermite_coefficients(self.list()?),
            other => {
                return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(other.to_string()), position: pos })
            }
        };
        Ok(Value::Dist(d))
    }

    /// `^k` or `^(k)` after `delta` and `x`.
    fn power(&mut self) -> Result<Option<u32>, ParseError> {
        if !self.eat('^') {
            return Ok(None);
        }
        if self.eat('(') {
            let k = self.index()?;
            self.expect(')')?;
            Ok(Some(k))
        } else {
            self.index().map(Some)
        }
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(q) if q.is_integer() => {
                u32::try_from(q.to_integer()).map_err(|_| syntax(pos, "index out of range"))
            }
            _ => Err(syntax(pos, "expected a nonnegative integer")),
        }
    }

    fn paren_index(&mut self) -> Result<u32, ParseError> {
        self.expect('(')?;
        let k = self.index()?;
        self.expect(')')?;
        Ok(k)
    }

    /// A signed real rational in parentheses, e.g. `(-1/2)` or `(0.25)`.
    fn paren_rational(&mut self) -> Result<BigRational, ParseError> {
        self.expect('(')?;
        let negative = self.eat('-');
        let pos = self.pos();
        let q = match self.bump() {
            Tok::Num(q) => q,
            _ => return Err(syntax(pos, "expected a real number")),
        };
        self.expect(')')?;
        Ok(if negative { -q } else { q })
    }

    fn list(&mut self) -> Result<Vec<Scalar>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            match self.expr()? {
                Value::Num(s) => out.push(s),
                Value::Dist(_) => return Err(syntax(pos, "hermite[...] entries must be numbers")),
            }
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}

fn scale(v: Value, s: &Scalar) -> Value {
    match v {
        Value::Num(a) => Value::Num(&a * s),
        Value::Dist(d) => Value::Dist(d.scaled(s.clone())),
    }
}

fn add(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Num(x), Value::Num(y)) => x
            .checked_add(&y)
            .map(Value::Num)
            .map_err(|_| syntax(pos, "sum of numbers with different square roots")),
        (Value::Dist(x), Value::Dist(y)) => Ok(Value::Dist(x.plus(y))),
        _ => Err(syntax(pos, "cannot add a number to a distribution (write x^0 for the constant 1)")),
    }
}

/// Parses the distribution mini-language.
pub fn parse_distribution(src: &str) -> Result<Distribution, ParseError> {
    let mut p = Parser::new(src)?;
    let pos = p.pos();
    let v = p.expr()?;
    p.finish()?;
    match v {
        Value::Dist(d) => Ok(d),
        Value::Num(_) => Err(syntax(pos, "expected a distribution, found a number")),
    }
}

/// Parses a complex scalar such as `3/2`, `(1-2i)` or `1/2*sqrt(3)`.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(src)?;
    let pos = p.pos();
    let v = p.expr()?;
    p.finish()?;
    match v {
        Value::Num(s) => Ok(s),
        Value::Dist(_) => Err(syntax(pos, "expected a number")),
    }
}

/// Parses an operator such as `c cdag - 3/2*x` or `(1+i)*x D`.
pub fn parse_operator(src: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser::new(src)?;
    let mut acc = OperatorExpr::zero();
    let mut first = true;
    loop {
        let negate = if first {
            p.eat('-')
        } else if p.eat('+') {
            false
        } else if p.eat('-') {
            true
        } else {
            break;
        };
        first = false;
        let mut t = op_term(&mut p)?;
        if negate {
            t = t.scaled(&-Scalar::one());
        }
        acc = acc.add(t);
    }
    p.finish()?;
    Ok(acc.normalize())
}

/// Scalar factors joined by `*`, then a word of juxtaposed letters.
fn op_term(p: &mut Parser) -> Result<OperatorExpr, ParseError> {
    let mut coeff = Scalar::one();
    let mut word = Vec::new();
    let mut saw_any = false;
    loop {
        let pos = p.pos();
        match p.peek().clone() {
            Tok::Ident(name) => match letter(&name) {
                Some(l) => {
                    p.bump();
                    word.push(l);
                }
                None if word.is_empty() && matches!(name.as_str(), "i" | "sqrt") => {
                    p.bump();
                    match p.atom(&name, pos)? {
                        Value::Num(s) => coeff = &coeff * &s,
                        Value::Dist(_) => unreachable!("i and sqrt are numbers"),
                    }
                }
                None => {
                    return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(name), position: pos });
                }
            },
            Tok::Num(_) | Tok::Imag(_) | Tok::Sym('(') if word.is_empty() => match p.factor()? {
                Value::Num(s) => coeff = &coeff * &s,
                Value::Dist(_) => return Err(syntax(pos, "expected an operator term")),
            },
            _ => break,
        }
        saw_any = true;
        p.eat('*');
    }
    if !saw_any {
        return Err(syntax(p.pos(), "expected an operator term"));
    }
    Ok(OperatorExpr::word(&word).scaled(&coeff))
}

fn letter(name: &str) -> Option<Letter> {
    match name {
        "c" => Some(Letter::C),
        "cdag" => Some(Letter::Cdag),
        "x" => Some(Letter::X),
        "D" => Some(Letter::D),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eprod_core::exact::rational;

    fn q(a: i64, b: i64) -> BigRational {
        rational(a, b)
    }

    #[test]
    fn atoms() {
        assert_eq!(parse_distribution("delta^(2)").unwrap(), Distribution::DeltaDeriv(2));
        assert_eq!(parse_distribution(" delta ^ 3 ").unwrap(), Distribution::DeltaDeriv(3));
        assert_eq!(parse_distribution("psi(3)").unwrap(), Distribution::NormalizedDeltaDeriv(3));
        assert_eq!(parse_distribution("x").unwrap(), Distribution::Monomial(1));
        assert_eq!(parse_distribution("exp(-0.5)").unwrap(), Distribution::ExpReal(q(-1, 2)));
        assert_eq!(parse_distribution("cos(3/2)").unwrap(), Distribution::CosWave(q(3, 2)));
        assert_eq!(parse_distribution("sin(1.5e-1)").unwrap(), Distribution::SinWave(q(3, 20)));
        assert_eq!(parse_distribution("e(4)").unwrap(), Distribution::hermite(4));
    }

    #[test]
    fn combinations() {
        let want = Distribution::combo(vec![
            (Scalar::real(q(2, 1)), Distribution::Monomial(2)),
            (Scalar::i(), Distribution::delta()),
        ]);
        assert_eq!(parse_distribution("2*x^2 + i*delta").unwrap(), want);
        assert_eq!(parse_distribution("2x^2+i*delta").unwrap_err().position, 1);
        let d = parse_distribution("(1-2i)*phi(1) - 1/2*sqrt(3)*(delta + x^2)").unwrap();
        assert_eq!(d.to_string(), "(1-2i)*phi(1) - 1/2*sqrt(3)*delta - 1/2*sqrt(3)*x^2");
        let h = parse_distribution("hermite[1/3, 0, -2+1/5i, 7/4]").unwrap();
        assert_eq!(
            h,
            Distribution::hermite_coefficients(vec![
                Scalar::real(q(1, 3)),
                Scalar::zero(),
                Scalar::new(q(-2, 1), q(1, 5)),
                Scalar::real(q(7, 4)),
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_distribution("delta + foo(2)").unwrap_err();
        assert_eq!(e, ParseError { kind: ParseErrorKind::UnknownSymbol("foo".into()), position: 8 });
        let e = parse_distribution("delta +").unwrap_err();
        assert_eq!(e.position, 7);
        assert!(matches!(parse_distribution("phi(1/2)").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(parse_distribution("delta * x").is_err());
        assert!(parse_distribution("3").is_err());
        assert_eq!(parse_distribution("x & 2").unwrap_err().kind, ParseErrorKind::UnknownSymbol("&".into()));
    }

    #[test]
    fn operators() {
        let c = OperatorExpr::letter(Letter::C);
        let cd = OperatorExpr::letter(Letter::Cdag);
        assert_eq!(parse_operator("c").unwrap(), c);
        assert_eq!(parse_operator("c cdag").unwrap(), OperatorExpr::word(&[Letter::C, Letter::Cdag]));
        assert_eq!(parse_operator("c + cdag").unwrap(), c.clone().add(cd).normalize());
        assert_eq!(parse_operator("-D").unwrap(), OperatorExpr::letter(Letter::D).scaled(&-Scalar::one()));
        assert_eq!(parse_operator("1").unwrap(), OperatorExpr::identity());
        let op = parse_operator("c cdag - 3/2*x").unwrap();
        assert_eq!(op.to_string(), "c cdag - 3/2*x");
        let op = parse_operator("(1+i)*x D + sqrt(2)*c").unwrap();
        assert_eq!(parse_operator(&op.to_string()).unwrap(), op);
        assert_eq!(parse_operator("c y").unwrap_err().kind, ParseErrorKind::UnknownSymbol("y".into()));
        assert_eq!(parse_operator("2*c*cdag").unwrap(), parse_operator("2 * c cdag").unwrap());
        assert!(parse_operator("c * 2").is_err());
        assert!(parse_operator("").is_err());
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("(1-2i)").unwrap(), Scalar::new(q(1, 1), q(-2, 1)));
        assert_eq!(parse_scalar("-1/2i").unwrap(), Scalar::new(q(0, 1), q(-1, 2)));
        assert!(parse_scalar("sqrt(2) + 1").is_err());
        assert_eq!(parse_scalar("2*sqrt(3/4)").unwrap(), Scalar::sqrt(&q(3, 1)).unwrap());
    }
}

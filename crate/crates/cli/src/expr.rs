//! The `--expr` grammar.
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "conv") unary)*
//! unary   := "-" unary | ("D" | "F" | "Finv" | "Fs") unary | atom
//! atom    := number | "x" | "zero" | name[":" param] | "(" sum ")"
//! ```
//!
//! Names are the distributions `delta one heaviside dprime xplus:p
//! hermite:k abs:a sgn:a delta_at:a gauss:c`, each embedded with ι. `gauss:c`
//! is the test function `exp(-c x²)`. Numbers and `x` act as multipliers; on
//! their own they stand for multiples of `ι(1)`. `F` is the analytic Fourier
//! transform, `Finv` its inverse and `Fs` the spectral one.

use std::sync::Arc;

use num_traits::One;

use tempered::algebra::{FourierBackend, RepSequence};
use tempered::dist::{embed, stream_classic, stream_general, ClassicKind, CoefficientStream, GeneralKind};
use tempered::gauss::{poly, poly_x};
use tempered::scalar::{cx, parse_rational};
use tempered::{Basis, BigComplex, BigFloat, Direction, Gps, Real, Seq};

use crate::error::{CliError, CliResult};

type B = BigFloat;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> CliResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i < chars.len() && chars[i] == ':' {
                i += 1;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && !chars[i].is_whitespace() && !"+-*()".contains(chars[i]) {
                    i += 1;
                }
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else {
            return Err(CliError::usage(format!("unexpected character {c:?} in expression")));
        }
    }
    Ok(out)
}

/// Intermediate values: plain multipliers are kept apart from sequences so
/// that `x*delta` becomes a polynomial multiplication.
enum Value {
    Scalar(BigComplex),
    Poly(poly::Poly<B>),
    Seq(Seq),
}

fn real_param(name: &str, param: Option<&str>) -> CliResult<B> {
    let p = param.ok_or_else(|| CliError::usage(format!("{name} needs a parameter, as in {name}:0.5")))?;
    parse_rational(p)
        .map(|q| B::of_ratio(&q))
        .ok_or_else(|| CliError::usage(format!("{name}: {p:?} is not a number")))
}

/// The coefficient stream named by `name[:param]`.
pub fn parse_stream(spec: &str, basis: &Arc<Basis>) -> CliResult<CoefficientStream<B>> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let stream = match name {
        "delta" => stream_classic(ClassicKind::Delta)?,
        "one" => stream_classic(ClassicKind::One)?,
        "heaviside" => stream_classic(ClassicKind::Heaviside)?,
        "dprime" => stream_classic(ClassicKind::DeltaPrime)?,
        "xplus" => stream_classic(ClassicKind::XPlus(real_param(name, param)?))?,
        "abs" => stream_general(GeneralKind::Abs(real_param(name, param)?), basis)?,
        "sgn" => stream_general(GeneralKind::Sgn(real_param(name, param)?), basis)?,
        "delta_at" => stream_general(GeneralKind::DeltaAt(real_param(name, param)?), basis)?,
        "hermite" => {
            let k = param
                .and_then(|p| p.parse::<usize>().ok())
                .ok_or_else(|| CliError::usage("hermite needs an index, as in hermite:3"))?;
            basis.cap_check(k)?;
            stream_general(GeneralKind::FromGps(basis.function(k)?), basis)?
        }
        "gauss" => {
            let p = param.ok_or_else(|| CliError::usage("gauss needs a rate, as in gauss:1/2"))?;
            let rate = parse_rational(p).ok_or_else(|| CliError::usage(format!("gauss: {p:?} is not a rate")))?;
            stream_general(GeneralKind::FromGps(Gps::gaussian(rate, cx(B::one()))?), basis)?
        }
        _ => return Err(CliError::usage(format!("unknown distribution {spec:?}"))),
    };
    Ok(stream)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    basis: &'a Arc<Basis>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn one(&self) -> CliResult<Seq> {
        Ok(embed(&stream_classic(ClassicKind::One)?, self.basis))
    }

    fn as_seq(&self, v: Value) -> CliResult<Seq> {
        Ok(match v {
            Value::Seq(s) => s,
            Value::Scalar(c) => self.one()?.scale(c),
            Value::Poly(p) => self.one()?.mul_poly(&p),
        })
    }

    fn sum(&mut self) -> CliResult<Value> {
        let mut acc = self.product()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            let rhs = if op == '-' { negate(rhs) } else { rhs };
            acc = match (acc, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
                (Value::Poly(a), Value::Poly(b)) => {
                    let mut a = a;
                    poly::add_into(&mut a, &b);
                    Value::Poly(a)
                }
                (a, b) => Value::Seq(self.as_seq(a)?.add(&self.as_seq(b)?)),
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> CliResult<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.multiply(acc, rhs)?;
                }
                Some(Token::Ident(word)) if word == "conv" => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = Value::Seq(self.as_seq(acc)?.convolve(&self.as_seq(rhs)?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn multiply(&self, a: Value, b: Value) -> CliResult<Value> {
        Ok(match (a, b) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
            (Value::Scalar(s), Value::Poly(p)) | (Value::Poly(p), Value::Scalar(s)) => {
                Value::Poly(poly::scale(&p, &s))
            }
            (Value::Poly(p), Value::Poly(q)) => Value::Poly(poly::mul(&p, &q)),
            (Value::Scalar(s), Value::Seq(f)) | (Value::Seq(f), Value::Scalar(s)) => Value::Seq(f.scale(s)),
            (Value::Poly(p), Value::Seq(f)) | (Value::Seq(f), Value::Poly(p)) => Value::Seq(f.mul_poly(&p)),
            (Value::Seq(f), Value::Seq(g)) => Value::Seq(f.mul(&g)),
        })
    }

    fn unary(&mut self) -> CliResult<Value> {
        match self.peek().cloned() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(negate(self.unary()?))
            }
            Some(Token::Ident(word)) if matches!(word.as_str(), "D" | "F" | "Finv" | "Fs") => {
                self.pos += 1;
                let arg = self.unary()?;
                let seq = self.as_seq(arg)?;
                Ok(Value::Seq(match word.as_str() {
                    "D" => seq.derive(),
                    "F" => seq.fourier(Direction::Forward, &FourierBackend::Analytic)?,
                    "Finv" => seq.fourier(Direction::Inverse, &FourierBackend::Analytic)?,
                    _ => seq.fourier(Direction::Forward, &FourierBackend::Spectral(self.basis.clone()))?,
                }))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> CliResult<Value> {
        match self.next() {
            Some(Token::Num(s)) => {
                let q = parse_rational(&s).ok_or_else(|| CliError::usage(format!("bad number {s:?}")))?;
                Ok(Value::Scalar(cx(B::of_ratio(&q))))
            }
            Some(Token::Op('(')) => {
                let v = self.sum()?;
                match self.next() {
                    Some(Token::Op(')')) => Ok(v),
                    _ => Err(CliError::usage("missing ')' in expression")),
                }
            }
            Some(Token::Ident(word)) => match word.as_str() {
                "x" => Ok(Value::Poly(poly_x())),
                "zero" => Ok(Value::Seq(RepSequence::zero())),
                "conv" | "D" | "F" | "Finv" | "Fs" => Err(CliError::usage(format!("{word} needs an operand"))),
                _ => Ok(Value::Seq(embed(&parse_stream(&word, self.basis)?, self.basis))),
            },
            Some(t) => Err(CliError::usage(format!("unexpected {t:?} in expression"))),
            None => Err(CliError::usage("expression ended early")),
        }
    }
}

fn negate(v: Value) -> Value {
    let minus = cx(-B::one());
    match v {
        Value::Scalar(c) => Value::Scalar(-c),
        Value::Poly(p) => Value::Poly(poly::scale(&p, &minus)),
        Value::Seq(s) => Value::Seq(s.scale(minus)),
    }
}

/// Parses `src` into a representative sequence.
pub fn parse_expr(src: &str, basis: &Arc<Basis>) -> CliResult<Seq> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        basis,
    };
    if p.tokens.is_empty() {
        return Err(CliError::usage("empty expression"));
    }
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(CliError::usage(format!("trailing input in expression {src:?}")));
    }
    p.as_seq(v)
}

//! Ad-hoc expressions over the named vectors of a model.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | atom
//! atom  := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Names resolve to model vectors; sequences and chains appear only as
//! function arguments. Functions: `meet`, `join`, `pos`, `neg`, `abs`,
//! `inf` (infinite part), `fin` (finite part), `band` (infinite band),
//! `proj(band, x)`, `trunc(x, k)`, `T(chain, level, x)`, `term(seq, n)`,
//! `sum(seq)`, `limsup(seq)`, `liminf(seq)`, `exp(x)` (float backend only).

use std::str::FromStr;

use serde_json::{json, Value as Json};
use supcone::band::{finite_part, infinite_part};
use supcone::{Band, Ext, ExtVec, LatVec, Scalar};

use crate::error::{VerifyError, VerifyResult};
use crate::model::{Model, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum Value<S> {
    Num(S),
    Vec(ExtVec<S>),
    Band(Band),
}

impl<S: Scalar> Value<S> {
    pub fn to_json(&self) -> Json {
        match self {
            Value::Num(v) => json!({ "kind": "scalar", "value": v.to_string() }),
            Value::Vec(x) => json!({
                "kind": "vector",
                "value": x.coords().iter().map(Ext::to_string).collect::<Vec<_>>(),
            }),
            Value::Band(b) => json!({ "kind": "band", "value": b.atoms() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Sym(char),
}

fn bad(message: impl Into<String>) -> VerifyError {
    VerifyError::Validation {
        field: "expr".into(),
        message: message.into(),
    }
}

fn tokenize(text: &str) -> VerifyResult<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                i += 1;
            }
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*(),".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(bad(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

/// Parses `3`, `-3/4` or `1.25` exactly.
fn parse_number<S: Scalar>(text: &str) -> VerifyResult<S> {
    if let Some((int, frac)) = text.split_once('.') {
        let digits = format!("{int}{frac}");
        let den = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| bad(format!("too many decimals in {text}")))?;
        let num: i64 = digits.parse().map_err(|_| bad(format!("bad number {text}")))?;
        return Ok(S::from_ratio(num, den));
    }
    let q = Q::from_str(text).map_err(|e| bad(format!("bad number {text}: {e}")))?;
    Ok(S::from_rational(&q.0))
}

struct Parser<'a, S> {
    model: &'a Model<S>,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> VerifyResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(bad(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn ident(&mut self) -> VerifyResult<String> {
        match self.tokens.get(self.pos) {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(name.clone())
            }
            _ => Err(bad(format!("expected a name at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> VerifyResult<Value<S>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(acc, self.term()?)?;
            } else if self.eat('-') {
                acc = add(acc, negate(self.term()?)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> VerifyResult<Value<S>> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = mul(acc, self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> VerifyResult<Value<S>> {
        if self.eat('-') {
            return negate(self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> VerifyResult<Value<S>> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(text)) => {
                self.pos += 1;
                Ok(Value::Num(parse_number(&text)?))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    self.call(&name)
                } else {
                    self.model
                        .vectors
                        .get(&name)
                        .cloned()
                        .map(Value::Vec)
                        .ok_or_else(|| bad(format!("unknown vector {name:?}")))
                }
            }
            _ => Err(bad(format!("unexpected end or symbol at token {}", self.pos))),
        }
    }

    fn sequence(&mut self) -> VerifyResult<supcone::VecSeq<S>> {
        let name = self.ident()?;
        if let Some(xs) = self.model.sequences.get(&name) {
            return Ok(xs.clone());
        }
        self.model
            .processes
            .get(&name)
            .map(|(p, _)| p.xs().clone())
            .ok_or_else(|| bad(format!("unknown sequence {name:?}")))
    }

    fn index(&mut self) -> VerifyResult<usize> {
        match self.tokens.get(self.pos) {
            Some(Token::Num(text)) => {
                self.pos += 1;
                text.parse().map_err(|_| bad(format!("expected an index, got {text}")))
            }
            _ => Err(bad(format!("expected an index at token {}", self.pos))),
        }
    }

    fn call(&mut self, name: &str) -> VerifyResult<Value<S>> {
        let v = match name {
            "T" => {
                let chain = self.ident()?;
                self.expect(',')?;
                let level = self.index()?;
                self.expect(',')?;
                let x = vector(self.expr()?)?;
                let f = self
                    .model
                    .filtrations
                    .get(&chain)
                    .ok_or_else(|| bad(format!("unknown chain {chain:?}")))?;
                let t = f.at(level);
                match x.to_lat() {
                    Some(x) => Value::Vec(t.apply(&x)?.to_ext()),
                    None => Value::Vec(t.apply_ext(&x)?),
                }
            }
            "term" => {
                let xs = self.sequence()?;
                self.expect(',')?;
                let n = self.index()?;
                if n == 0 {
                    return Err(bad("sequence terms are indexed from 1"));
                }
                Value::Vec(xs.term(n).to_ext())
            }
            "sum" => Value::Vec(self.sequence()?.series_sum()?),
            "limsup" => Value::Vec(self.sequence()?.limsup_seq()),
            "liminf" => Value::Vec(self.sequence()?.liminf_seq().to_ext()),
            _ => {
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                return apply(name, args);
            }
        };
        self.expect(')')?;
        Ok(v)
    }
}

fn vector<S: Scalar>(v: Value<S>) -> VerifyResult<ExtVec<S>> {
    match v {
        Value::Vec(x) => Ok(x),
        other => Err(bad(format!("expected a vector, got {}", other.to_json()))),
    }
}

fn finite<S: Scalar>(v: Value<S>) -> VerifyResult<LatVec<S>> {
    vector(v)?.to_lat().ok_or_else(|| bad("expected a finite vector"))
}

fn add<S: Scalar>(a: Value<S>, b: Value<S>) -> VerifyResult<Value<S>> {
    match (a, b) {
        (Value::Num(a), Value::Num(b)) => Ok(Value::Num(a + b)),
        (Value::Vec(a), Value::Vec(b)) => Ok(Value::Vec(a.add(&b)?)),
        _ => Err(bad("+ and - need two scalars or two vectors")),
    }
}

fn negate<S: Scalar>(v: Value<S>) -> VerifyResult<Value<S>> {
    match v {
        Value::Num(a) => Ok(Value::Num(-a)),
        Value::Vec(x) => Ok(Value::Vec(
            x.to_lat()
                .ok_or_else(|| bad("only finite vectors can be negated"))?
                .scale(&-S::one())
                .to_ext(),
        )),
        Value::Band(_) => Err(bad("bands cannot be negated")),
    }
}

fn mul<S: Scalar>(a: Value<S>, b: Value<S>) -> VerifyResult<Value<S>> {
    match (a, b) {
        (Value::Num(a), Value::Num(b)) => Ok(Value::Num(a * b)),
        (Value::Num(c), Value::Vec(x)) | (Value::Vec(x), Value::Num(c)) => {
            if c < S::zero() {
                negate(Value::Vec(x.scale(&-c)?))
            } else {
                Ok(Value::Vec(x.scale(&c)?))
            }
        }
        (Value::Vec(x), Value::Vec(y)) => match (x.to_lat(), y.to_lat()) {
            (Some(x), Some(y)) => Ok(Value::Vec(x.mul(&y)?.to_ext())),
            _ => Ok(Value::Vec(x.multiply(&y)?)),
        },
        (Value::Vec(x), Value::Band(b)) | (Value::Band(b), Value::Vec(x)) => Ok(Value::Vec(x.mul_infinity_band(&b)?)),
        _ => Err(bad("unsupported operands for *")),
    }
}

fn apply<S: Scalar>(name: &str, args: Vec<Value<S>>) -> VerifyResult<Value<S>> {
    let arity = match name {
        "meet" | "join" | "proj" | "trunc" => 2,
        "pos" | "neg" | "abs" | "inf" | "fin" | "band" | "exp" => 1,
        _ => return Err(bad(format!("unknown function {name:?}"))),
    };
    if args.len() != arity {
        return Err(bad(format!("{name} takes {arity} argument(s), got {}", args.len())));
    }
    let mut args = args.into_iter();
    let mut next = || args.next().expect("arity checked");
    Ok(match name {
        "meet" => Value::Vec(vector(next())?.meet(&vector(next())?)?),
        "join" => Value::Vec(vector(next())?.join(&vector(next())?)?),
        "pos" => Value::Vec(vector(next())?.pos_part()),
        "neg" => Value::Vec(vector(next())?.neg_part().to_ext()),
        "abs" => {
            let x = vector(next())?;
            Value::Vec(x.pos_part().add(&x.neg_part().to_ext())?)
        }
        // x = x⁺ − x⁻ with x⁻ finite, so both parts come from x⁺.
        "inf" => Value::Vec(infinite_part(&vector(next())?.pos_part())?),
        "fin" => {
            let x = vector(next())?;
            Value::Vec(finite_part(&x.pos_part())?.sub(&x.neg_part())?.to_ext())
        }
        "band" => Value::Band(vector(next())?.infinite_band()),
        "proj" => {
            let b = match next() {
                Value::Band(b) => b,
                _ => return Err(bad("proj takes a band first")),
            };
            Value::Vec(b.project(&vector(next())?)?)
        }
        "trunc" => {
            let x = vector(next())?;
            match next() {
                Value::Num(k) => Value::Vec(x.truncate(&k)?.to_ext()),
                _ => return Err(bad("trunc takes a scalar level")),
            }
        }
        "exp" => Value::Vec(finite(next())?.exp()?.to_ext()),
        _ => unreachable!("arity table covers every name"),
    })
}

/// Evaluates `text` against `model`.
pub fn evaluate<S: Scalar>(model: &Model<S>, text: &str) -> VerifyResult<Value<S>> {
    let mut parser = Parser {
        model,
        tokens: tokenize(text)?,
        pos: 0,
    };
    let v = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(bad(format!("trailing input at token {}", parser.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;
    use supcone::{ext_ints, Rational};

    fn model() -> Model<Rational> {
        let spec = ModelSpec::from_json(
            r#"{
                "atoms": ["a", "b", "c"],
                "weights": ["1/2", "1/4", "1/4"],
                "vectors": { "x": ["1/1", "inf", "-2/1"], "y": ["3/1", "1/2", "inf"] },
                "partitions": { "f": { "levels": [[0, 0, 0], [0, 1, 1]] } },
                "sequences": { "h": { "prefix": [], "tail": { "kind": "geometric", "v": ["1/1", "2/1", "0/1"], "ratio": "1/2" } } }
            }"#,
        )
        .unwrap();
        spec.instantiate().unwrap()
    }

    fn ev(text: &str) -> Value<Rational> {
        evaluate(&model(), text).unwrap()
    }

    #[test]
    fn lattice_operations() {
        let q = supcone::ratio;
        let meet = ExtVec::new(vec![Ext::Fin(q(1, 1)), Ext::Fin(q(1, 2)), Ext::Fin(q(-2, 1))]);
        assert_eq!(ev("meet(x, y)"), Value::Vec(meet));
        assert_eq!(ev("band(x + y)"), Value::Band(Band::from_indices(3, &[1, 2])));
        assert_eq!(ev("fin(x)"), Value::Vec(ext_ints(&[Some(1), Some(0), Some(-2)])));
        assert_eq!(ev("neg(x)"), Value::Vec(ext_ints(&[Some(0), Some(0), Some(2)])));
    }

    #[test]
    fn arithmetic_and_expectation() {
        assert_eq!(ev("2 * fin(x) - 1/2 * fin(x)"), ev("3/2 * fin(x)"));
        assert_eq!(ev("1.5"), Value::Num(supcone::ratio(3, 2)));
        assert_eq!(ev("T(f, 0, pos(x))"), Value::Vec(ext_ints(&[None, None, None])));
        assert_eq!(ev("T(f, 1, fin(x))"), Value::Vec(ext_ints(&[Some(1), Some(-1), Some(-1)])));
    }

    #[test]
    fn sequences() {
        assert_eq!(ev("sum(h)"), Value::Vec(ext_ints(&[Some(2), Some(4), Some(0)])));
        assert_eq!(ev("term(h, 2)"), Value::Vec(ExtVec::new(vec![Ext::Fin(supcone::ratio(1, 2)), Ext::Fin(supcone::ratio(1, 1)), Ext::Fin(supcone::ratio(0, 1))])));
        assert_eq!(ev("limsup(h)"), Value::Vec(ext_ints(&[Some(0), Some(0), Some(0)])));
    }

    #[test]
    fn errors_name_the_problem() {
        let m = model();
        for text in ["zz", "meet(x)", "x +", "exp(fin(x))", "term(h, 0)", "x $ y"] {
            assert!(evaluate(&m, text).is_err(), "{text}");
        }
    }
}

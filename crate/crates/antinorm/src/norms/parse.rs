//! Textual form of norm and anti-norm specs.
//!
//! Grammar (whitespace-insensitive, names case-sensitive):
//!
//! ```text
//! antinorm := trace | minkowski
//!           | kyfan_anti(k=INT) | delta(k=INT)
//!           | schatten_anti(q=NUM) | schatten_neg(r=NUM)
//!           | weighted_sum(NUM, NUM, ...) | weighted_geo(NUM, NUM, ...)
//!           | qlift(q=NUM, inner=antinorm)
//!           | geo_mean(antinorm, antinorm)
//!           | harmonic_mean(antinorm, antinorm)
//!           | sum(antinorm, antinorm)
//! norm     := operator_norm | ky_fan(k=INT) | schatten(p=NUM)
//! ```
//!
//! Key prefixes (`k=`, `q=`, `p=`, `r=`, `inner=`) are optional; bare
//! positional values are accepted. `ky_fan_anti` and `q_lift` are accepted
//! as spellings of `kyfan_anti` and `qlift`.

use std::fmt;

use crate::error::{Error, Result};
use crate::norms::{AntiNormSpec, NormSpec};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Eq,
}

pub(crate) fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            ',' => {
                tokens.push(Token::Comma);
                i += 1;
            }
            '=' => {
                tokens.push(Token::Eq);
                i += 1;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                tokens.push(Token::Number(value));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(tokens)
}

pub(crate) struct Cursor {
    pub(crate) tokens: Vec<Token>,
    pub(crate) pos: usize,
}

impl Cursor {
    pub(crate) fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {what}, found {other:?}"))),
        }
    }

    /// Consumes `key =` if the next two tokens are exactly that.
    pub(crate) fn skip_key(&mut self, key: &str) {
        if let (Some(Token::Ident(k)), Some(Token::Eq)) =
            (self.tokens.get(self.pos), self.tokens.get(self.pos + 1))
        {
            if k == key {
                self.pos += 2;
            }
        }
    }

    pub(crate) fn number(&mut self, what: &str) -> Result<f64> {
        match self.next() {
            Some(Token::Number(x)) => Ok(x),
            other => Err(Error::Parse(format!("expected {what}, found {other:?}"))),
        }
    }

    pub(crate) fn keyed_number(&mut self, key: &str) -> Result<f64> {
        self.skip_key(key);
        self.number(key)
    }

    pub(crate) fn keyed_count(&mut self, key: &str) -> Result<usize> {
        let x = self.keyed_number(key)?;
        if x.fract() != 0.0 || x < 0.0 || x > u32::MAX as f64 {
            return Err(Error::Parse(format!("{key}={x} is not a valid count")));
        }
        Ok(x as usize)
    }

    pub(crate) fn number_list(&mut self) -> Result<Vec<f64>> {
        let mut v = vec![self.number("weight")?];
        while self.peek() == Some(&Token::Comma) {
            self.next();
            v.push(self.number("weight")?);
        }
        Ok(v)
    }
}

pub fn parse_antinorm(input: &str) -> Result<AntiNormSpec> {
    let mut cur = Cursor {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let spec = antinorm(&mut cur)?;
    if cur.peek().is_some() {
        return Err(Error::Parse(format!(
            "trailing input after anti-norm spec in `{input}`"
        )));
    }
    Ok(spec)
}

pub fn parse_norm(input: &str) -> Result<NormSpec> {
    let mut cur = Cursor {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let spec = norm(&mut cur)?;
    if cur.peek().is_some() {
        return Err(Error::Parse(format!(
            "trailing input after norm spec in `{input}`"
        )));
    }
    Ok(spec)
}

fn antinorm(cur: &mut Cursor) -> Result<AntiNormSpec> {
    let name = match cur.next() {
        Some(Token::Ident(name)) => name,
        other => return Err(Error::Parse(format!("expected spec name, found {other:?}"))),
    };
    match name.as_str() {
        "trace" => Ok(AntiNormSpec::Trace),
        "minkowski" => Ok(AntiNormSpec::Minkowski),
        "kyfan_anti" | "ky_fan_anti" => {
            cur.expect(Token::LParen, "(")?;
            let k = cur.keyed_count("k")?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::KyFanAnti(k))
        }
        "delta" => {
            cur.expect(Token::LParen, "(")?;
            let k = cur.keyed_count("k")?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::Delta(k))
        }
        "schatten_anti" => {
            cur.expect(Token::LParen, "(")?;
            let q = cur.keyed_number("q")?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::SchattenAnti(q))
        }
        "schatten_neg" => {
            cur.expect(Token::LParen, "(")?;
            let r = cur.keyed_number("r")?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::SchattenNeg(r))
        }
        "weighted_sum" => {
            cur.expect(Token::LParen, "(")?;
            let w = cur.number_list()?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::WeightedSum(w))
        }
        "weighted_geo" => {
            cur.expect(Token::LParen, "(")?;
            let w = cur.number_list()?;
            cur.expect(Token::RParen, ")")?;
            Ok(AntiNormSpec::WeightedGeo(w))
        }
        "qlift" | "q_lift" => {
            cur.expect(Token::LParen, "(")?;
            let q = cur.keyed_number("q")?;
            cur.expect(Token::Comma, ",")?;
            cur.skip_key("inner");
            let inner = antinorm(cur)?;
            cur.expect(Token::RParen, ")")?;
            AntiNormSpec::q_lift(inner, q)
        }
        "geo_mean" | "harmonic_mean" | "sum" => {
            cur.expect(Token::LParen, "(")?;
            let a = antinorm(cur)?;
            cur.expect(Token::Comma, ",")?;
            let b = antinorm(cur)?;
            cur.expect(Token::RParen, ")")?;
            Ok(match name.as_str() {
                "geo_mean" => AntiNormSpec::geo_mean(a, b),
                "harmonic_mean" => AntiNormSpec::harmonic_mean(a, b),
                _ => AntiNormSpec::sum(a, b),
            })
        }
        other => Err(Error::Parse(format!("unknown anti-norm `{other}`"))),
    }
}

fn norm(cur: &mut Cursor) -> Result<NormSpec> {
    let name = match cur.next() {
        Some(Token::Ident(name)) => name,
        other => return Err(Error::Parse(format!("expected norm name, found {other:?}"))),
    };
    match name.as_str() {
        "operator_norm" => Ok(NormSpec::OperatorNorm),
        "ky_fan" | "kyfan" => {
            cur.expect(Token::LParen, "(")?;
            let k = cur.keyed_count("k")?;
            cur.expect(Token::RParen, ")")?;
            Ok(NormSpec::KyFan(k))
        }
        "schatten" => {
            cur.expect(Token::LParen, "(")?;
            let p = cur.keyed_number("p")?;
            cur.expect(Token::RParen, ")")?;
            Ok(NormSpec::Schatten(p))
        }
        other => Err(Error::Parse(format!("unknown norm `{other}`"))),
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn display_antinorm(spec: &AntiNormSpec) -> String {
    match spec {
        AntiNormSpec::Trace => "trace".into(),
        AntiNormSpec::Minkowski => "minkowski".into(),
        AntiNormSpec::KyFanAnti(k) => format!("kyfan_anti(k={k})"),
        AntiNormSpec::Delta(k) => format!("delta(k={k})"),
        AntiNormSpec::SchattenAnti(q) => format!("schatten_anti(q={q})"),
        AntiNormSpec::SchattenNeg(r) => format!("schatten_neg(r={r})"),
        AntiNormSpec::WeightedSum(w) => format!("weighted_sum({})", join(w)),
        AntiNormSpec::WeightedGeo(w) => format!("weighted_geo({})", join(w)),
        AntiNormSpec::QLift { q, inner } => {
            format!("qlift(q={q}, inner={})", display_antinorm(inner))
        }
        AntiNormSpec::GeoMean(a, b) => format!(
            "geo_mean({}, {})",
            display_antinorm(a),
            display_antinorm(b)
        ),
        AntiNormSpec::HarmonicMean(a, b) => format!(
            "harmonic_mean({}, {})",
            display_antinorm(a),
            display_antinorm(b)
        ),
        AntiNormSpec::Sum(a, b) => {
            format!("sum({}, {})", display_antinorm(a), display_antinorm(b))
        }
    }
}

pub fn display_norm(spec: &NormSpec) -> String {
    match spec {
        NormSpec::OperatorNorm => "operator_norm".into(),
        NormSpec::KyFan(k) => format!("ky_fan(k={k})"),
        NormSpec::Schatten(p) => format!("schatten(p={p})"),
    }
}

impl fmt::Display for AntiNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_antinorm(self))
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_norm(self))
    }
}

impl std::str::FromStr for AntiNormSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_antinorm(s)
    }
}

impl std::str::FromStr for NormSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_norm(s)
    }
}

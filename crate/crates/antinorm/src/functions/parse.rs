//! Textual form of scalar functions, sharing the norm-spec tokenizer.
//!
//! Grammar (whitespace-insensitive, names case-sensitive):
//!
//! ```text
//! fn := poly(NUM, NUM, ...)        coefficients a_0..a_m, ascending degree
//!     | roots(NUM, NUM, ...)       a_1 t + a_2 t^(1/2) + ... + a_m t^(1/m)
//!     | pow(q=NUM)                 t^q
//!     | pow_of(q=NUM, inner=fn)    inner(t)^q
//!     | ramp_plus                  t + (t-1)_+
//!     | ramp_minus_half            t - (t-1)_+/2
//!     | log | exp | id | sqrt
//!     | star_kink                  t + t min(t,1)/2
//!     | tent                       min(t, 2-t) on [0,2]
//!     | cap                        min(t, 2)
//!     | neg_gauss                  -exp(-t^2/2) on [1.05, 3]
//! ```
//!
//! The `q=` and `inner=` key prefixes are optional.

use crate::error::{Error, Result};
use crate::norms::parse::{tokenize, Cursor, Token};

use super::ScalarFn;

/// Names accepted by [`parse_scalar_fn`], for help text.
pub const FUNCTION_NAMES: &[&str] = &[
    "poly(a0,a1,...)",
    "roots(a1,a2,...)",
    "pow(q)",
    "pow_of(q, fn)",
    "ramp_plus",
    "ramp_minus_half",
    "log",
    "exp",
    "id",
    "sqrt",
    "star_kink",
    "tent",
    "cap",
    "neg_gauss",
];

pub fn parse_scalar_fn(input: &str) -> Result<ScalarFn> {
    let mut cur = Cursor {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let f = scalar_fn(&mut cur)?;
    if cur.peek().is_some() {
        return Err(Error::Parse(format!(
            "trailing input after function in `{input}`"
        )));
    }
    Ok(f)
}

fn scalar_fn(cur: &mut Cursor) -> Result<ScalarFn> {
    let name = match cur.next() {
        Some(Token::Ident(s)) => s,
        other => return Err(Error::Parse(format!("expected function name, found {other:?}"))),
    };
    match name.as_str() {
        "poly" => {
            cur.expect(Token::LParen, "`(` after poly")?;
            let coeffs = cur.number_list()?;
            cur.expect(Token::RParen, "`)` closing poly")?;
            super::poly(&coeffs)
        }
        "roots" => {
            cur.expect(Token::LParen, "`(` after roots")?;
            let coeffs = cur.number_list()?;
            cur.expect(Token::RParen, "`)` closing roots")?;
            super::roots(&coeffs)
        }
        "pow" => {
            cur.expect(Token::LParen, "`(` after pow")?;
            let q = cur.keyed_number("q")?;
            cur.expect(Token::RParen, "`)` closing pow")?;
            super::pow(q)
        }
        "pow_of" => {
            cur.expect(Token::LParen, "`(` after pow_of")?;
            let q = cur.keyed_number("q")?;
            cur.expect(Token::Comma, "`,` between pow_of arguments")?;
            cur.skip_key("inner");
            let inner = scalar_fn(cur)?;
            cur.expect(Token::RParen, "`)` closing pow_of")?;
            super::pow_of(&inner, q)
        }
        "ramp_plus" => Ok(super::ramp_plus()),
        "ramp_minus_half" => Ok(super::ramp_minus_half()),
        "log" => Ok(super::log()),
        "exp" => Ok(super::exp()),
        "id" => Ok(super::id()),
        "sqrt" => Ok(super::sqrt()),
        "star_kink" => Ok(super::star_kink()),
        "tent" => Ok(super::tent()),
        "cap" => Ok(super::cap()),
        "neg_gauss" => Ok(super::neg_gauss()),
        other => Err(Error::Parse(format!("unknown function `{other}`"))),
    }
}

impl std::str::FromStr for ScalarFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scalar_fn(s)
    }
}

//! Parsers for the command-line mini-syntax: nested-sum specs, classical
//! Euler-sum specs, and letter lists.
//!
//! Grammar (documented in the README):
//!   s-sum:      S[k1,...,kn;x1,...,xn|k;x]     (n = 0: S[;|k;x])
//!   weights:    decimal literal | q | q^<real>
//!   euler-sum:  S(e1,...,en;k)  with nonzero integers e_i (negative
//!               selects the alternating harmonic) and integer outer k
//!               (negative k encodes the alternating outer factor)
//!   letters:    [k;w][k;w]...  with w a weight as above or a variable name
//!               (symbolic mode)

use astro_float::BigFloat;
use qeuler_core::classical::EulerSumSpec;
use qeuler_core::error::{Error, Result};
use qeuler_core::numerics::{parse_decimal, q_pow, Precision, QParam};
use qeuler_core::qseries::SeriesSpec;
use qeuler_core::stuffle::{Letter, Weight};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses a weight token: a decimal literal, `q`, or `q^<real>`.
pub fn parse_weight(tok: &str, q: &QParam, prec: &Precision) -> Result<BigFloat> {
    let tok = tok.trim();
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, tok),
    };
    let value = if body == "q" {
        q.q().clone()
    } else if let Some(exp) = body.strip_prefix("q^") {
        let e = parse_decimal(exp, prec.bits())?;
        q_pow(&e, q, prec)?.value().clone()
    } else {
        parse_decimal(body, prec.bits())?
    };
    Ok(if neg { value.neg() } else { value })
}

/// Parses `S[k1,...,kn;x1,...,xn|k;x]`.
pub fn parse_s_sum(spec: &str, q: &QParam, prec: &Precision) -> Result<SeriesSpec> {
    let s = spec.trim();
    let body = s
        .strip_prefix("S[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(format!("expected S[...|...], got `{s}`")))?;
    let (left, right) =
        body.split_once('|').ok_or_else(|| parse_err("missing `|` between inner and outer parts"))?;
    let (outer_k_str, outer_x_str) = right
        .split_once(';')
        .ok_or_else(|| parse_err("outer part must be `k;x`"))?;
    let outer_k: u32 = outer_k_str
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("bad outer exponent `{outer_k_str}`")))?;
    let outer_x = parse_weight(outer_x_str, q, prec)?;
    let left = left.trim();
    let (ks, xs) = if left.is_empty() || left == ";" {
        (Vec::new(), Vec::new())
    } else {
        let (ks_str, xs_str) = left
            .split_once(';')
            .ok_or_else(|| parse_err("inner part must be `k1,..;x1,..`"))?;
        let ks: Vec<u32> = ks_str
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| parse_err(format!("bad inner exponent `{t}`"))))
            .collect::<Result<_>>()?;
        let xs: Vec<BigFloat> =
            xs_str.split(',').map(|t| parse_weight(t, q, prec)).collect::<Result<_>>()?;
        (ks, xs)
    };
    SeriesSpec::new(ks, xs, outer_k, outer_x, q.clone())
}

/// Parses `S(e1,...,en;k)` into a classical Euler-sum spec.
pub fn parse_euler_sum(spec: &str) -> Result<EulerSumSpec> {
    let s = spec.trim();
    let body = s
        .strip_prefix("S(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("expected S(...;k), got `{s}`")))?;
    let (inner_str, outer_str) =
        body.rsplit_once(';').ok_or_else(|| parse_err("missing `;` before the outer exponent"))?;
    let outer: i64 = outer_str
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("bad outer exponent `{outer_str}`")))?;
    let inner: Vec<i32> = if inner_str.trim().is_empty() {
        Vec::new()
    } else {
        inner_str
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| parse_err(format!("bad inner entry `{t}`"))))
            .collect::<std::result::Result<_, Error>>()?
    };
    let alternating = outer < 0;
    let outer_k = u32::try_from(outer.unsigned_abs())
        .map_err(|_| parse_err("outer exponent out of range"))?;
    EulerSumSpec::new(inner, outer_k, alternating)
}

/// Parses a letter list `[k;w][k;w] ...` (whitespace between letters is
/// allowed). Variable-looking weights produce symbolic letters.
pub fn parse_letters(input: &str, q: &QParam, prec: &Precision) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    let mut rest = input.trim();
    while !rest.is_empty() {
        let open = rest
            .find('[')
            .ok_or_else(|| parse_err(format!("expected `[k;w]`, got `{rest}`")))?;
        if !rest[..open].trim().is_empty() {
            return Err(parse_err(format!("unexpected text before letter: `{}`", &rest[..open])));
        }
        let close = rest
            .find(']')
            .ok_or_else(|| parse_err("unterminated letter, missing `]`"))?;
        let body = &rest[open + 1..close];
        let (k_str, w_str) = body
            .split_once(';')
            .ok_or_else(|| parse_err(format!("letter must be `k;w`, got `{body}`")))?;
        let k: u32 =
            k_str.trim().parse().map_err(|_| parse_err(format!("bad exponent `{k_str}`")))?;
        let w_str = w_str.trim();
        let is_symbol = w_str
            .chars()
            .next()
            .map(|c| c.is_ascii_alphabetic() && w_str != "q" && !w_str.starts_with("q^"))
            .unwrap_or(false);
        let letter = if is_symbol {
            if !w_str.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(parse_err(format!("bad variable name `{w_str}`")));
            }
            Letter::new(k, Weight::var(w_str))?
        } else {
            let w = parse_weight(w_str, q, prec)?;
            Letter::new(k, Weight::Concrete(qeuler_core::numerics::bigfloat_to_rational(&w)?))?
        };
        letters.push(letter);
        rest = rest[close + 1..].trim_start();
    }
    if letters.is_empty() {
        return Err(parse_err("at least one letter is required"));
    }
    Ok(letters)
}

//! High-precision reals for bounds whose exponents are irrational.
//!
//! Values are computed with 256-bit binary floats and stored as a canonical
//! decimal string with [`SIGNIFICANT_DIGITS`] significant digits. The string
//! is the value: serialization round-trips exactly. Verdicts that compare a
//! real bound against an exact count never go through this type; they are
//! decided with integer or rational arithmetic at the call site.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 32;

const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    text: String,
}

impl Real {
    pub fn parse(s: &str) -> Result<Self> {
        let mut ctx = RealCtx::new();
        let x = BigFloat::parse(s.trim(), Radix::Dec, PRECISION, RM, &mut ctx.cc);
        if x.is_nan() || x.is_inf() {
            return Err(Error::Parse {
                position: 0,
                message: format!("not a finite decimal: {s:?}"),
            });
        }
        Ok(ctx.to_real(&x))
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn to_f64(&self) -> f64 {
        self.text.parse().unwrap_or(f64::NAN)
    }

    pub fn is_negative(&self) -> bool {
        self.text.starts_with('-')
    }

    pub(crate) fn to_float(&self, ctx: &mut RealCtx) -> BigFloat {
        BigFloat::parse(&self.text, Radix::Dec, PRECISION, RM, &mut ctx.cc)
    }

    /// Numeric comparison (not string order).
    pub fn compare(&self, other: &Real) -> Ordering {
        let mut ctx = RealCtx::new();
        let a = self.to_float(&mut ctx);
        let b = other.to_float(&mut ctx);
        match a.cmp(&b) {
            Some(x) if x < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Real::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Arithmetic context wrapping the constants cache needed by `ln`/`exp`.
pub(crate) struct RealCtx {
    cc: Consts,
}

impl RealCtx {
    pub fn new() -> Self {
        RealCtx {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, PRECISION)
    }

    pub fn big(&mut self, v: &BigUint) -> BigFloat {
        BigFloat::parse(&v.to_str_radix(10), Radix::Dec, PRECISION, RM, &mut self.cc)
    }

    pub fn ratio(&mut self, q: &BigRational) -> BigFloat {
        let num = self.big(q.numer().magnitude());
        let den = self.big(q.denom().magnitude());
        let v = num.div(&den, PRECISION, RM);
        if q.is_negative() {
            v.neg()
        } else {
            v
        }
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PRECISION, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, PRECISION, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PRECISION, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, PRECISION, RM)
    }

    pub fn log2(&mut self, a: &BigFloat) -> BigFloat {
        a.log2(PRECISION, RM, &mut self.cc)
    }

    /// `2^x`.
    pub fn exp2(&mut self, x: &BigFloat) -> BigFloat {
        let two = self.int(2);
        two.pow(x, PRECISION, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(PRECISION, RM)
    }

    pub fn cbrt(&self, a: &BigFloat) -> BigFloat {
        a.cbrt(PRECISION, RM)
    }

    pub fn to_real(&mut self, x: &BigFloat) -> Real {
        let raw = x
            .format(Radix::Dec, RM, &mut self.cc)
            .unwrap_or_else(|_| "NaN".to_string());
        Real {
            text: canonical_decimal(&raw, SIGNIFICANT_DIGITS),
        }
    }
}

/// Rewrites `[-]d.ddd[e±x]` into `[-]d.ddd…e<x>` with at most `digits`
/// significant digits, rounding half up on the decimal string.
fn canonical_decimal(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let all: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    let Some(lead) = all.iter().position(|&d| d != 0) else {
        return "0".to_string();
    };
    // value = 0.d1d2... * 10^(point), where point counts integer digits
    let mut point = int_part.len() as i64 - lead as i64 + exp;
    let mut sig: Vec<u8> = all[lead..].to_vec();
    if sig.len() > digits {
        let round_up = sig[digits] >= 5;
        sig.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    sig.insert(0, 1);
                    sig.truncate(digits);
                    point += 1;
                    break;
                }
                i -= 1;
                if sig[i] == 9 {
                    sig[i] = 0;
                } else {
                    sig[i] += 1;
                    break;
                }
            }
        }
    }
    while sig.len() > 1 && *sig.last().unwrap() == 0 {
        sig.pop();
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + sig[0]) as char);
    if sig.len() > 1 {
        out.push('.');
        out.extend(sig[1..].iter().map(|&d| (b'0' + d) as char));
    }
    out.push('e');
    out.push_str(&(point - 1).to_string());
    out
}

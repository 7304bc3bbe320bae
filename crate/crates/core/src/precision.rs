//! Working-precision bookkeeping and small multiprecision helpers.

use rug::ops::Pow;
use rug::float::Constant;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Target significant digits plus guard digits carried through intermediate work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionSpec {
    pub digits: u32,
    pub guard: u32,
}

impl PrecisionSpec {
    pub const DEFAULT_GUARD: u32 = 20;
    pub const DEFAULT_DIGITS: u32 = 50;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::InvalidParams(format!("precision must be at least 10 digits, got {digits}")));
        }
        if guard < 10 {
            return Err(Error::InvalidParams(format!("guard must be at least 10 digits, got {guard}")));
        }
        Ok(Self { digits, guard })
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    pub fn bits(&self) -> u32 {
        bits_for_digits(self.working_digits())
    }

    /// Same guard, doubled target digits.
    pub fn doubled(&self) -> Self {
        Self { digits: self.digits * 2, guard: self.guard }
    }

    /// `10^-(digits + guard)` at working precision.
    pub fn working_eps(&self) -> Float {
        pow10(self.bits(), -(self.working_digits() as i32))
    }
}

impl Default for PrecisionSpec {
    fn default() -> Self {
        Self { digits: Self::DEFAULT_DIGITS, guard: Self::DEFAULT_GUARD }
    }
}

pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 16
}

pub fn pow10(prec: u32, e: i32) -> Float {
    let ten = Float::with_val(prec, 10);
    ten.pow(e)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn to_float(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// Number of agreeing decimal digits between `x` and `y`, relative to `max(1, |y|)`.
/// Capped at `cap` when the two values coincide.
pub fn agreement_digits(x: &Float, y: &Float, cap: f64) -> f64 {
    let prec = x.prec().max(y.prec());
    let diff = Float::with_val(prec, x - y).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = Float::with_val(prec, y.abs_ref()).max(&Float::with_val(prec, 1));
    let rel = diff / scale;
    (-rel.log10().to_f64()).min(cap)
}

/// `|z|` as a real.
pub fn complex_abs(z: &Complex) -> Float {
    Complex::with_val(z.prec().0, z.abs_ref()).real().clone()
}

/// `x + yi` / `x - yi` with [`fmt_decimal`] parts.
pub fn fmt_complex(z: &Complex, digits: usize) -> String {
    let re = fmt_decimal(z.real(), digits);
    let im = z.imag();
    if im.is_sign_negative() {
        let abs = Float::with_val(im.prec(), im.abs_ref());
        format!("{re} - {}i", fmt_decimal(&abs, digits))
    } else {
        format!("{re} + {}i", fmt_decimal(im, digits))
    }
}

/// Decimal rendering with `digits` significant digits. Plain positional notation for
/// moderate exponents, scientific notation otherwise.
pub fn fmt_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mant, exp) = x.to_sign_string_exp(10, Some(digits.max(1)));
    let exp = exp.unwrap_or(0);
    let mant = mant.trim_end_matches('0');
    let mant = if mant.is_empty() { "0" } else { mant };
    let sign = if neg { "-" } else { "" };
    // value = 0.mant * 10^exp
    if (-5..=21).contains(&exp) {
        let s = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mant)
        } else if (exp as usize) >= mant.len() {
            format!("{}{}", mant, "0".repeat(exp as usize - mant.len()))
        } else {
            let (int, frac) = mant.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        format!("{sign}{s}")
    } else {
        let (first, rest) = mant.split_at(1);
        let e = exp - 1;
        if rest.is_empty() {
            format!("{sign}{first}e{e}")
        } else {
            format!("{sign}{first}.{rest}e{e}")
        }
    }
}

//! Multiprecision evaluation of `L(j)`, the tail sum `I(n)` and its coefficient form.

mod form;
mod tail;
mod zeta;

pub use form::{cross_check, i_from_coeffs, rate_empirical, EvalReport, RatePoint};
pub use tail::{i_tail, i_tail_with, TailSum, TailTarget};
pub use zeta::{bernoulli, digamma_float, hurwitz_zeta, hurwitz_zeta_float, l_value, zeta_m};

use rug::Float;

use crate::precision::fmt_decimal;

/// A value that is real, or complex when the series carries imaginary coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitValue {
    pub re: Float,
    pub im: Option<Float>,
}

impl SplitValue {
    pub fn abs(&self) -> Float {
        match &self.im {
            None => Float::with_val(self.re.prec(), self.re.abs_ref()),
            Some(im) => Float::with_val(self.re.prec(), self.re.hypot_ref(im)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.as_ref().is_none_or(|v| v.is_zero())
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match &self.im {
            None => fmt_decimal(&self.re, digits),
            Some(im) => {
                let sign = if im.is_sign_negative() { "-" } else { "+" };
                let mag = Float::with_val(im.prec(), im.abs_ref());
                format!("{} {sign} {}i", fmt_decimal(&self.re, digits), fmt_decimal(&mag, digits))
            }
        }
    }
}

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which expression for the decay exponent α is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    ClosedWithSlack,
    ClosedNoSlack,
    ExactSaddle,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [Self::ClosedWithSlack, Self::ClosedNoSlack, Self::ExactSaddle];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedWithSlack => "closed_with_slack",
            Self::ClosedNoSlack => "closed_no_slack",
            Self::ExactSaddle => "exact_saddle",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_with_slack" | "with_slack" => Ok(Self::ClosedWithSlack),
            "closed_no_slack" | "no_slack" => Ok(Self::ClosedNoSlack),
            "exact_saddle" | "exact" => Ok(Self::ExactSaddle),
            other => Err(Error::InvalidParams(format!("unknown bound variant '{other}'"))),
        }
    }
}

pub(crate) fn check_abd(a: u64, b: u64, d: u64) -> Result<()> {
    if d < 1 || b < 1 || a < 2 * b {
        return Err(Error::InvalidParams(format!("need d >= 1 and a >= 2b >= 2 (got a={a}, b={b}, d={d})")));
    }
    Ok(())
}

fn xlogx(x: &Float) -> Float {
    if x.is_zero() {
        Float::with_val(x.prec(), 0)
    } else {
        Float::with_val(x.prec(), x.ln_ref()) * x
    }
}

/// `2ad + 2a log 2 + 4(b+d) log(b+d) - 4d log d`.
pub fn beta(a: u64, b: u64, d: u64, prec: u32) -> Result<Float> {
    check_abd(a, b, d)?;
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let bd = Float::with_val(prec, b + d);
    let df = Float::with_val(prec, d);
    let mut out = Float::with_val(prec, 2 * a * d);
    out += Float::with_val(prec, &ln2 * (2 * a));
    out += xlogx(&bd) * 4u32;
    out -= xlogx(&df) * 4u32;
    Ok(out)
}

/// Closed-form lower bound for α; `ClosedWithSlack` subtracts the extra 1/3.
pub fn alpha_closed(a: u64, b: u64, d: u64, variant: BoundVariant, prec: u32) -> Result<Float> {
    check_abd(a, b, d)?;
    let slack = match variant {
        BoundVariant::ClosedWithSlack => true,
        BoundVariant::ClosedNoSlack => false,
        BoundVariant::ExactSaddle => {
            return Err(Error::InvalidParams("alpha_closed takes a closed variant".into()));
        }
    };
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let df = Float::with_val(prec, d);
    // r = (d + 2b)/d, R = (a + d)/d
    let r = Float::with_val(prec, d + 2 * b) / d;
    let big_r = Float::with_val(prec, a + d) / d;
    let rp = Float::with_val(prec, &r + 1u32);
    let rm = Float::with_val(prec, &r - 1u32);
    let mut out = (xlogx(&rp) - xlogx(&rm)) * &big_r * &df;
    out -= (Float::with_val(prec, &ln2 + d)) * (2 * a);
    out -= (Float::with_val(prec, df.ln_ref()) - &ln2) * (4 * b);
    let two_r = Float::with_val(prec, &r * 2u32);
    out -= Float::with_val(prec, two_r.ln_ref()) * &r * (2 * d);
    if slack {
        out -= Float::with_val(prec, 1) / 3u32;
    }
    Ok(out)
}

/// `(τ1 + 1) / (1 + τ1 - τ2)`.
pub fn nesterenko_ratio(tau1: f64, tau2: f64) -> Result<f64> {
    let den = 1.0 + tau1 - tau2;
    if den <= 0.0 {
        return Err(Error::Domain(format!("1 + tau1 - tau2 = {den} must be positive")));
    }
    Ok((tau1 + 1.0) / den)
}

/// `1 + α/β`.
pub fn limit_form(alpha: &Float, beta: &Float) -> Result<Float> {
    if *beta <= 0 {
        return Err(Error::Domain("beta must be positive".into()));
    }
    Ok(Float::with_val(alpha.prec().max(beta.prec()), alpha / beta) + 1u32)
}

/// Dimension lower bound implied by `value`: `⌈value⌉`.
pub fn delta_threshold(value: &Float) -> i64 {
    let c = Float::with_val(value.prec(), value.ceil_ref());
    c.to_integer().and_then(|i| i.to_i64()).unwrap_or(i64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn beta_values() {
        let v = beta(9, 1, 1, P).unwrap().to_f64();
        assert!((v - (18.0 + 26.0 * std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((v - 36.0218267).abs() < 1e-7);
        let v = beta(88, 10, 2, P).unwrap().to_f64();
        assert!((v - 587.7242).abs() < 1e-4, "{v}");
        assert!(beta(1, 1, 1, P).is_err());
    }

    #[test]
    fn alpha_values() {
        let w = alpha_closed(9, 1, 1, BoundVariant::ClosedWithSlack, P).unwrap();
        let n = alpha_closed(9, 1, 1, BoundVariant::ClosedNoSlack, P).unwrap();
        assert!((w.to_f64() - 2.8008801).abs() < 1e-7);
        assert!((n.to_f64() - 3.1342135).abs() < 1e-7);
        let diff = Float::with_val(P, &n - &w) - Float::with_val(P, 1) / 3u32;
        assert!(diff.abs() < 1e-70);
        let v = alpha_closed(88, 10, 2, BoundVariant::ClosedWithSlack, P).unwrap().to_f64();
        assert!((v - 1.0394930167496141).abs() < 1e-12, "{v}");
        assert!(alpha_closed(9, 1, 1, BoundVariant::ExactSaddle, P).is_err());
    }

    #[test]
    fn nesterenko_and_limit() {
        assert_eq!(nesterenko_ratio(2.5, 2.5).unwrap(), 3.5);
        assert_eq!(nesterenko_ratio(1.0, 0.0).unwrap(), 1.0);
        assert!(nesterenko_ratio(1.0, 2.0).is_err());
        let v = limit_form(&Float::with_val(P, 3.1342135), &Float::with_val(P, 36.0218267)).unwrap();
        assert!((v.to_f64() - 1.08700873).abs() < 5e-9);
        assert_eq!(delta_threshold(&v), 2);
        assert_eq!(delta_threshold(&Float::with_val(P, 2.00305848)), 3);
    }

    #[test]
    fn variant_parsing() {
        for v in BoundVariant::ALL {
            assert_eq!(v.as_str().parse::<BoundVariant>().unwrap(), v);
        }
        assert!("bogus".parse::<BoundVariant>().is_err());
    }
}

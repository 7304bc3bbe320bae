//! Periodic coefficient sequences `a_1, ..., a_d` and their JSON file format.

use std::path::Path;

use rug::Rational;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A Dirichlet series whose coefficients repeat with period `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSeries {
    pub d: u32,
    pub coeffs_re: Vec<Rational>,
    pub coeffs_im: Option<Vec<Rational>>,
    pub label: String,
}

/// Result of splitting a complex series into real and imaginary parts.
/// A `None` slot marks a part that vanishes identically.
#[derive(Clone, Debug, PartialEq)]
pub struct Realified {
    pub real: Option<PeriodicSeries>,
    pub imag: Option<PeriodicSeries>,
}

impl Realified {
    pub fn parts(&self) -> impl Iterator<Item = &PeriodicSeries> {
        self.real.iter().chain(self.imag.iter())
    }
}

impl PeriodicSeries {
    pub fn new(d: u32, coeffs_re: Vec<Rational>, coeffs_im: Option<Vec<Rational>>, label: impl Into<String>) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d", "period must be at least 1"));
        }
        if coeffs_re.len() != d as usize {
            return Err(invalid("coeffs_re", &format!("expected {d} entries, found {}", coeffs_re.len())));
        }
        if let Some(im) = &coeffs_im {
            if im.len() != d as usize {
                return Err(invalid("coeffs_im", &format!("expected {d} entries, found {}", im.len())));
            }
        }
        let any_nonzero = coeffs_re.iter().chain(coeffs_im.iter().flatten()).any(|c| *c != 0);
        if !any_nonzero {
            return Err(invalid("coeffs_re", "all coefficients are zero"));
        }
        Ok(Self { d, coeffs_re, coeffs_im, label: label.into() })
    }

    pub fn real(d: u32, coeffs: &[i64], label: &str) -> Result<Self> {
        Self::new(d, coeffs.iter().map(|&c| Rational::from(c)).collect(), None, label)
    }

    /// Riemann zeta function: period 1, `a_1 = 1`.
    pub fn zeta() -> Self {
        Self::real(1, &[1], "zeta").expect("valid preset")
    }

    /// Non-trivial character modulo 3.
    pub fn chi3() -> Self {
        Self::real(3, &[1, -1, 0], "chi3").expect("valid preset")
    }

    /// Non-trivial character modulo 4.
    pub fn chi4() -> Self {
        Self::real(4, &[1, 0, -1, 0], "chi4").expect("valid preset")
    }

    /// Real non-trivial character modulo 5.
    pub fn chi5() -> Self {
        Self::real(5, &[1, -1, -1, 1, 0], "chi5").expect("valid preset")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "zeta" => Some(Self::zeta()),
            "chi3" => Some(Self::chi3()),
            "chi4" => Some(Self::chi4()),
            "chi5" => Some(Self::chi5()),
            _ => None,
        }
    }

    /// `a_m` for `1 <= m <= d`.
    pub fn coeff(&self, m: u32) -> &Rational {
        &self.coeffs_re[(m - 1) as usize]
    }

    /// `a_k` for any `k >= 1`, using periodicity.
    pub fn coeff_at(&self, k: u64) -> &Rational {
        &self.coeffs_re[((k - 1) % self.d as u64) as usize]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs_im.as_ref().is_none_or(|im| im.iter().all(|c| *c == 0))
    }

    pub fn period_sum(&self) -> Rational {
        self.coeffs_re.iter().fold(Rational::new(), |acc, c| acc + c)
    }

    /// Real-coefficient view, failing when imaginary parts are present.
    pub fn require_real(&self) -> Result<&Self> {
        if self.is_real() {
            Ok(self)
        } else {
            Err(Error::NotReal)
        }
    }

    pub fn realify(&self) -> Realified {
        let make = |coeffs: &[Rational], suffix: &str| {
            if coeffs.iter().all(|c| *c == 0) {
                None
            } else {
                Some(PeriodicSeries {
                    d: self.d,
                    coeffs_re: coeffs.to_vec(),
                    coeffs_im: None,
                    label: format!("{}{}", self.label, suffix),
                })
            }
        };
        match &self.coeffs_im {
            None => Realified { real: Some(self.clone()), imag: None },
            Some(im) => Realified { real: make(&self.coeffs_re, ".re"), imag: make(im, ".im") },
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v.as_object().ok_or_else(|| invalid("<root>", "expected a JSON object"))?;
        let d = obj
            .get("d")
            .ok_or_else(|| invalid("d", "missing"))?
            .as_u64()
            .filter(|&d| d >= 1 && d <= u32::MAX as u64)
            .ok_or_else(|| invalid("d", "expected a positive integer"))? as u32;
        let coeffs_re = parse_rationals(obj.get("coeffs_re"), "coeffs_re")?
            .ok_or_else(|| invalid("coeffs_re", "missing"))?;
        let coeffs_im = parse_rationals(obj.get("coeffs_im"), "coeffs_im")?;
        let label = match obj.get("label") {
            None => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(invalid("label", "expected a string")),
        };
        Self::new(d, coeffs_re, coeffs_im, label)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> Value {
        let strs = |v: &[Rational]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut out = json!({ "d": self.d, "coeffs_re": strs(&self.coeffs_re), "label": self.label });
        if let Some(im) = &self.coeffs_im {
            out["coeffs_im"] = json!(strs(im));
        }
        out
    }
}

fn invalid(field: &str, reason: &str) -> Error {
    Error::InvalidSeries { field: field.to_string(), reason: reason.to_string() }
}

fn parse_rationals(v: Option<&Value>, field: &str) -> Result<Option<Vec<Rational>>> {
    let Some(v) = v else { return Ok(None) };
    if v.is_null() {
        return Ok(None);
    }
    let arr = v.as_array().ok_or_else(|| invalid(field, "expected an array of fraction strings"))?;
    arr.iter()
        .enumerate()
        .map(|(i, item)| {
            let name = format!("{field}[{i}]");
            let s = item.as_str().ok_or_else(|| invalid(&name, "expected a string like \"p/q\""))?;
            parse_rational(s).ok_or_else(|| invalid(&name, &format!("cannot parse {s:?} as a fraction")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Parses `"p"` or `"p/q"` with decimal integers.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let ok = |part: &str| {
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((p, q)) if ok(p) && ok(q) => {
            let q: rug::Integer = q.parse().ok()?;
            if q == 0 {
                return None;
            }
            let p: rug::Integer = p.parse().ok()?;
            Some(Rational::from((p, q)))
        }
        None if ok(s) => s.parse::<rug::Integer>().ok().map(Rational::from),
        _ => None,
    }
}

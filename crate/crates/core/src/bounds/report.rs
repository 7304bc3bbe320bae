//! Hypothesis check, saddle-exact α and the assembled bound report.

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::closed::{alpha_closed, beta, check_abd, delta_threshold, limit_form, BoundVariant};
use crate::error::{Error, Result};
use crate::precision::{fmt_decimal, PrecisionSpec};
use crate::saddle::{b_lambdas, find_x1_rho, rate_predicted, RatePrediction, SaddleContext};
use crate::series::PeriodicSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisMode {
    /// `ρ` replaced by its bound `5r / (2 e^(R/r))`.
    Analytic,
    /// `ρ` computed from `x1`.
    Numeric,
}

impl HypothesisMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::Numeric => "numeric",
        }
    }
}

impl fmt::Display for HypothesisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HypothesisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "numeric" => Ok(Self::Numeric),
            other => Err(Error::InvalidParams(format!("unknown hypothesis mode '{other}'"))),
        }
    }
}

/// Default strictness: the trigonometric terms only matter when `d ≥ 2`.
pub fn default_strict(d: u64) -> bool {
    d != 1
}

#[derive(Clone, Debug, Serialize)]
pub struct MinTerm {
    pub name: &'static str,
    pub value: f64,
    pub active: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub mode: HypothesisMode,
    pub strict: bool,
    pub r_ge_2: bool,
    #[serde(rename = "R_ge_3r")]
    pub big_r_ge_3r: bool,
    /// `None` when `x1` does not exist (numeric mode with `a = 2b`).
    pub rho_used: Option<f64>,
    pub min_terms: Vec<MinTerm>,
    pub min_value: f64,
    pub passed: bool,
    pub note: Option<String>,
}

/// `r ≥ 2`, `R ≥ 3r` and `ρ < min{rπ/(10Rd), π/(2d²), (r/4R) sin(π/2d), (r/38R)(cos(π/2d) - cos(3π/2d))}`.
pub fn hypothesis_check(a: u64, b: u64, d: u64, mode: HypothesisMode, strict: bool) -> Result<HypothesisReport> {
    check_abd(a, b, d)?;
    let r_num = d + 2 * b;
    let big_r_num = a + d;
    let r_ge_2 = r_num >= 2 * d;
    let big_r_ge_3r = big_r_num >= 3 * r_num;

    let r = r_num as f64 / d as f64;
    let big_r = big_r_num as f64 / d as f64;
    let df = d as f64;
    let pi = std::f64::consts::PI;
    let trig_active = strict || d != 1;
    let min_terms = vec![
        MinTerm { name: "r*pi/(10*R*d)", value: r * pi / (10.0 * big_r * df), active: true },
        MinTerm { name: "pi/(2*d^2)", value: pi / (2.0 * df * df), active: true },
        MinTerm { name: "(r/(4R))*sin(pi/(2d))", value: r / (4.0 * big_r) * (pi / (2.0 * df)).sin(), active: trig_active },
        MinTerm {
            name: "(r/(38R))*(cos(pi/(2d))-cos(3pi/(2d)))",
            value: r / (38.0 * big_r) * ((pi / (2.0 * df)).cos() - (3.0 * pi / (2.0 * df)).cos()),
            active: trig_active,
        },
    ];
    let min_value = min_terms.iter().filter(|t| t.active).map(|t| t.value).fold(f64::INFINITY, f64::min);

    let mut note = None;
    let rho_used = match mode {
        HypothesisMode::Analytic => {
            // 5r / (2 e^(R/r)), computed in log space
            Some((5.0 * r / 2.0).ln().exp() * (-(big_r / r)).exp())
        }
        HypothesisMode::Numeric => {
            let ctx = SaddleContext::new(d as u32, a, b, PrecisionSpec::new(20)?)?;
            match find_x1_rho(&ctx) {
                Ok(g) => Some(g.rho.to_f64()),
                Err(e) => {
                    note = Some(e.to_string());
                    None
                }
            }
        }
    };
    let passed = r_ge_2 && big_r_ge_3r && rho_used.map(|rho| rho < min_value).unwrap_or(false);
    Ok(HypothesisReport { mode, strict, r_ge_2, big_r_ge_3r, rho_used, min_terms, min_value, passed, note })
}

/// `-(2ad + 2(a-2b) log 2 + 4b log d + Re h(t_λ0))`.
pub fn alpha_exact(a: u64, b: u64, d: u64, lambda0: Option<u32>, prec: PrecisionSpec) -> Result<(Float, RatePrediction)> {
    check_abd(a, b, d)?;
    let ctx = SaddleContext::new(d as u32, a, b, prec)?;
    let lambda0 = lambda0.unwrap_or(d as u32);
    if lambda0 > d as u32 {
        return Err(Error::InvalidParams(format!("lambda0 = {lambda0} exceeds d = {d}")));
    }
    let rate = rate_predicted(&ctx, lambda0)?;
    let alpha = -(Float::with_val(ctx.bits, &rate.value + 2 * a * d));
    Ok((Float::with_val(prec.bits(), alpha), rate))
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub d: u64,
    pub a: u64,
    pub b: u64,
    pub variant: BoundVariant,
    pub lambda0: u32,
    pub alpha_with_slack: Float,
    pub alpha_no_slack: Float,
    /// Absent when the saddle data cannot be computed (e.g. `a = 2b`).
    pub alpha_exact: Option<Float>,
    pub beta: Float,
    pub value: Float,
    pub delta: i64,
    pub hypothesis: HypothesisReport,
    pub rigorous: bool,
}

impl BoundReport {
    pub fn alpha(&self, variant: BoundVariant) -> Option<&Float> {
        match variant {
            BoundVariant::ClosedWithSlack => Some(&self.alpha_with_slack),
            BoundVariant::ClosedNoSlack => Some(&self.alpha_no_slack),
            BoundVariant::ExactSaddle => self.alpha_exact.as_ref(),
        }
    }

    /// Replace the hypothesis verdict, e.g. after re-checking with another strictness.
    pub fn with_hypothesis(mut self, hypothesis: HypothesisReport) -> Self {
        self.rigorous = hypothesis.passed && self.variant != BoundVariant::ClosedNoSlack;
        self.hypothesis = hypothesis;
        self
    }

    pub fn value_of(&self, variant: BoundVariant) -> Option<Float> {
        self.alpha(variant).and_then(|al| limit_form(al, &self.beta).ok())
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let s = |x: &Float| fmt_decimal(x, digits);
        let mut alpha = serde_json::Map::new();
        let mut value = serde_json::Map::new();
        for v in BoundVariant::ALL {
            if let Some(al) = self.alpha(v) {
                alpha.insert(v.as_str().into(), json!(s(al)));
            }
            if let Some(val) = self.value_of(v) {
                value.insert(v.as_str().into(), json!(s(&val)));
            }
        }
        json!({
            "d": self.d, "a": self.a, "b": self.b,
            "variant": self.variant.as_str(),
            "lambda0": self.lambda0,
            "alpha": alpha,
            "beta": s(&self.beta),
            "value_per_variant": value,
            "value": s(&self.value),
            "delta_threshold": self.delta,
            "hypothesis": serde_json::to_value(&self.hypothesis).unwrap_or(Value::Null),
            "rigorous": self.rigorous,
        })
    }
}

/// Assemble α, β, `1 + α/β` and the dimension threshold for one parameter set.
pub fn delta_bound(
    series: Option<&PeriodicSeries>,
    a: u64,
    b: u64,
    d: u64,
    variant: BoundVariant,
    mode: HypothesisMode,
    prec: PrecisionSpec,
) -> Result<BoundReport> {
    check_abd(a, b, d)?;
    let bits = prec.bits();
    let lambda0 = match (series, variant) {
        (Some(s), BoundVariant::ExactSaddle) => {
            if s.d as u64 != d {
                return Err(Error::InvalidParams(format!("series period {} does not match d = {d}", s.d)));
            }
            b_lambdas(s, prec)?.lambda0
        }
        _ => d as u32,
    };
    let alpha_with_slack = alpha_closed(a, b, d, BoundVariant::ClosedWithSlack, bits)?;
    let alpha_no_slack = alpha_closed(a, b, d, BoundVariant::ClosedNoSlack, bits)?;
    let alpha_exact = match alpha_exact(a, b, d, Some(lambda0), prec) {
        Ok((al, _)) => Some(al),
        Err(e) if variant == BoundVariant::ExactSaddle => return Err(e),
        Err(_) => None,
    };
    let beta = beta(a, b, d, bits)?;
    let alpha = match variant {
        BoundVariant::ClosedWithSlack => &alpha_with_slack,
        BoundVariant::ClosedNoSlack => &alpha_no_slack,
        BoundVariant::ExactSaddle => alpha_exact.as_ref().expect("checked above"),
    };
    let value = limit_form(alpha, &beta)?;
    let delta = delta_threshold(&value);
    let hypothesis = hypothesis_check(a, b, d, mode, default_strict(d))?;
    let report = BoundReport {
        d,
        a,
        b,
        variant,
        lambda0,
        alpha_with_slack,
        alpha_no_slack,
        alpha_exact,
        beta,
        value,
        delta,
        hypothesis: hypothesis.clone(),
        rigorous: false,
    };
    Ok(report.with_hypothesis(hypothesis))
}

/// `log(t) / (d + log 2)`, the leading growth of the bound along `a = t^μ`, `b = t`.
pub fn growth_reference(t: f64, d: u64, bits: u32) -> Float {
    let ln2 = Float::with_val(bits, Constant::Log2);
    Float::with_val(bits, t).ln() / (ln2 + d)
}

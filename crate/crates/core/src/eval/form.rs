use rug::{Float, Rational};
use serde::Serialize;

use super::{i_tail, i_tail_with, l_value, SplitValue, TailTarget};
use crate::bounds::beta;
use crate::error::{Error, Result};
use crate::forms::{build_p, linear_form_coeffs, partial_fractions, FormParams, LinearFormCoeffs};
use crate::precision::{agreement_digits, fmt_decimal, PrecisionSpec};
use crate::series::PeriodicSeries;

/// Extra decimal digits absorbing the cancellation in `sum_j A_j L(j) - sum_m B_m a_m`.
pub fn cancellation_digits(params: &FormParams) -> u32 {
    let FormParams { d, a, b, n } = *params;
    let beta = beta(a as u64, b as u64, d as u64, 64).map(|v| v.to_f64()).unwrap_or(0.0);
    (n as f64 * beta / std::f64::consts::LN_10).ceil() as u32
}

/// `sum_j A_j L(j) - sum_m B_m a_m`.
pub fn i_from_coeffs(series: &PeriodicSeries, coeffs: &LinearFormCoeffs, prec: PrecisionSpec) -> Result<SplitValue> {
    if series.d != coeffs.params.d {
        return Err(Error::InvalidParams(format!(
            "series period {} differs from form parameter d = {}",
            series.d, coeffs.params.d
        )));
    }
    let wp = PrecisionSpec { digits: prec.digits + cancellation_digits(&coeffs.params), guard: prec.guard };
    let bits = wp.bits();
    let mut re = Float::with_val(bits, 0);
    let mut im = series.coeffs_im.as_ref().map(|_| Float::with_val(bits, 0));
    for j in coeffs.active_exponents() {
        let aj = coeffs.a_coeff(j);
        if aj == 0 {
            continue;
        }
        let l = l_value(series, j, wp)?;
        re += Float::with_val(bits, &l.re * &aj);
        if let (Some(acc), Some(li)) = (im.as_mut(), l.im.as_ref()) {
            *acc += Float::with_val(bits, li * &aj);
        }
    }
    for (m, bm) in coeffs.b.iter().enumerate() {
        re -= Float::with_val(bits, &Rational::from(bm * &series.coeffs_re[m]));
        if let (Some(acc), Some(ci)) = (im.as_mut(), series.coeffs_im.as_ref()) {
            *acc -= Float::with_val(bits, &Rational::from(bm * &ci[m]));
        }
    }
    let out = prec.bits();
    Ok(SplitValue { re: Float::with_val(out, re), im: im.map(|v| Float::with_val(out, v)) })
}

/// Both evaluations of `I(n)` and how far they agree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub n: u32,
    pub params: FormParams,
    pub digits: u32,
    #[serde(rename = "I_tail")]
    pub i_tail: String,
    #[serde(rename = "I_coeff")]
    pub i_coeff: String,
    pub agreement_digits: f64,
    pub truncation_bound: String,
    pub passed: bool,
}

impl EvalReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn cross_check(series: &PeriodicSeries, params: &FormParams, prec: PrecisionSpec) -> Result<EvalReport> {
    let tail = i_tail(series, params, prec)?;
    let coeffs = linear_form_coeffs(&partial_fractions(&build_p(*params)));
    let direct = i_from_coeffs(series, &coeffs, prec)?;
    let cap = prec.working_digits() as f64;
    let mut agree = agreement_digits(&tail.value.re, &direct.re, cap);
    if let (Some(x), Some(y)) = (&tail.value.im, &direct.im) {
        agree = agree.min(agreement_digits(x, y, cap));
    }
    let shown = prec.digits as usize + 5;
    Ok(EvalReport {
        n: params.n,
        params: *params,
        digits: prec.digits,
        i_tail: tail.value.to_decimal(shown),
        i_coeff: direct.to_decimal(shown),
        agreement_digits: (agree * 100.0).floor() / 100.0,
        truncation_bound: fmt_decimal(&tail.bound, 6),
        passed: agree >= prec.digits as f64,
    })
}

/// `(n, log|I(n)|/n)`; `None` marks an exactly vanishing form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: u32,
    pub rate: Option<f64>,
}

pub fn rate_empirical(series: &PeriodicSeries, base: &FormParams, ns: &[u32], prec: PrecisionSpec) -> Result<Vec<RatePoint>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("n list must be strictly increasing".into()));
    }
    ns.iter()
        .map(|&n| {
            let p = base.with_n(n)?;
            let t = i_tail_with(series, &p, prec, TailTarget::Relative, None)?;
            let abs = t.value.abs();
            let rate = if abs.is_zero() {
                None
            } else {
                Some(Float::with_val(abs.prec(), abs.ln_ref()).to_f64() / n as f64)
            };
            Ok(RatePoint { n, rate })
        })
        .collect()
}

//! Predicted decay rate of `I(n)` and the asymptotics of `J_λ(n)`.

use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

use super::context::SaddleContext;
use super::geometry::{find_t_lambda, find_x1_rho, GeometryReport, SaddlePoint, TINY_RHO};
use super::spectral::b_lambdas;
use crate::error::{Error, Result};
use crate::precision::PrecisionSpec;
use crate::series::PeriodicSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    /// `Re h(t_λ0)` evaluated at the computed saddle point.
    Direct,
    /// First-order expansion in `ε_λ0`, valid when `ρ` is tiny.
    Expansion,
}

#[derive(Clone, Debug)]
pub struct RatePrediction {
    pub lambda0: u32,
    /// `2(a-2b) log 2 + 4b log d + Re h(t_λ0)`
    pub value: Float,
    pub re_h: Float,
    pub method: RateMethod,
    /// `(4dR/r)|ε|^2` when the expansion is used.
    pub error_bound: Option<f64>,
    pub saddle: SaddlePoint,
}

/// `2dr log 2r + dR((r-1) log(r-1) - (r+1) log(r+1)) - d Re ε`.
pub fn re_h_expansion(ctx: &SaddleContext, eps: &Complex) -> Float {
    let bits = ctx.bits;
    let r = ctx.rf();
    let d = ctx.d;
    let two_r = Float::with_val(bits, &r * 2u32);
    let mut out = Float::with_val(bits, two_r.ln_ref()) * &two_r * d;
    let rm = Float::with_val(bits, &r - 1u32);
    let rp = Float::with_val(bits, &r + 1u32);
    let inner = Float::with_val(bits, rm.ln_ref()) * &rm - Float::with_val(bits, rp.ln_ref()) * &rp;
    out += inner * ctx.big_rf() * d;
    out -= Float::with_val(bits, eps.real() * d);
    out
}

fn rate_offset(ctx: &SaddleContext) -> Float {
    let bits = ctx.bits;
    let ln2 = Float::with_val(bits, Constant::Log2);
    let lnd = Float::with_val(bits, ctx.d).ln();
    ln2 * (2 * (ctx.a - 2 * ctx.b)) + lnd * (4 * ctx.b)
}

pub fn rate_predicted_with(ctx: &SaddleContext, geom: &GeometryReport, lambda0: u32) -> Result<RatePrediction> {
    let sp = find_t_lambda(ctx, geom, lambda0)?;
    let bits = ctx.bits;
    let (re_h, method, error_bound) = if geom.rho < TINY_RHO {
        let r = ctx.rf().to_f64();
        let big_r = ctx.big_rf().to_f64();
        let m = Complex::with_val(bits, sp.eps.abs_ref()).real().to_f64();
        (re_h_expansion(ctx, &sp.eps), RateMethod::Expansion, Some(4.0 * ctx.d as f64 * big_r / r * m * m))
    } else {
        (sp.h.real().clone(), RateMethod::Direct, None)
    };
    let value = rate_offset(ctx) + &re_h;
    Ok(RatePrediction { lambda0, value, re_h, method, error_bound, saddle: sp })
}

/// `lim log|I(n)|/n` predicted from the saddle `t_λ0`.
pub fn rate_predicted(ctx: &SaddleContext, lambda0: u32) -> Result<RatePrediction> {
    let geom = find_x1_rho(ctx)?;
    rate_predicted_with(ctx, &geom, lambda0)
}

#[derive(Clone, Debug)]
pub struct JAsymptotic {
    pub log_magnitude: Float,
    pub phase: Float,
}

/// Saddle-point approximation of `J_λ(n)`.
pub fn j_asymptotic(ctx: &SaddleContext, sp: &SaddlePoint, n: u64) -> Result<JAsymptotic> {
    let bits = ctx.bits;
    let fpp_abs = Complex::with_val(bits, sp.fpp.abs_ref()).real().clone();
    if fpp_abs.is_zero() || fpp_abs.get_exp().unwrap_or(0) < -(bits as i32) / 2 {
        return Err(Error::DegenerateSaddle);
    }
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let g_abs = Complex::with_val(bits, sp.g.abs_ref()).real().clone();
    let mut lm = Float::with_val(bits, sp.h.real() * n);
    lm += g_abs.ln();
    lm += (two_pi / (fpp_abs * n)).ln() / 2u32;
    Ok(JAsymptotic { log_magnitude: lm, phase: sp.psi(n) })
}

/// Default quadrature line: midpoint of `x0` and `r`.
pub fn default_line(ctx: &SaddleContext, geom: &GeometryReport) -> Float {
    Float::with_val(ctx.bits, &geom.x0 + &ctx.rf()) / 2u32
}

/// Log of the integrand `e^(n(f(t) - iλπt)) g(t)` at `t = x + iy`.
fn log_integrand(ctx: &SaddleContext, lambda: i64, n: u64, xi: &Float, y: &Float) -> Complex {
    let bits = ctx.bits;
    let eps = Complex::with_val(bits, (xi, -y.clone()));
    let lg = ctx.logs(&eps);
    let f = ctx.f_eps(&eps, &lg);
    // -iλπ t with t = r - ε
    let t = ctx.t_of(&eps);
    let pi = Float::with_val(bits, Constant::Pi);
    let rot = Complex::with_val(bits, (0, -Float::with_val(bits, &pi * lambda))) * t;
    (f + rot) * n + ctx.log_g_eps(&lg)
}

/// `J_λ(n) = ∫ e^(n(f(t) - iλπt)) g(t) dt` along `Re t = x`, by the trapezoid rule in `τ`
/// with `y = s sinh τ`.
pub fn j_quadrature(ctx: &SaddleContext, lambda: i64, n: u64, x: &Float, prec: PrecisionSpec) -> Result<Complex> {
    let r = ctx.rf();
    if *x <= 1 || *x >= r {
        return Err(Error::Domain("quadrature line must satisfy 1 < x < r".into()));
    }
    let mut extra = 0u32;
    for _ in 0..4 {
        let work = SaddleContext { bits: ctx.bits + extra, ..ctx.clone() };
        let (value, log_peak) = trapezoid(&work, lambda, n, x, prec)?;
        let bits = work.bits;
        let mag = Complex::with_val(bits, value.abs_ref()).real().clone();
        let lost = if mag.is_zero() {
            bits as f64
        } else {
            (log_peak.to_f64() - mag.ln().to_f64()) / std::f64::consts::LN_2
        };
        if lost + (prec.bits() as f64) < (bits as f64) - 16.0 {
            return Ok(Complex::with_val(ctx.bits, value));
        }
        extra += lost.ceil().max(0.0) as u32 + 64;
    }
    Err(Error::Domain("quadrature cancellation exceeds the precision budget".into()))
}

fn trapezoid(ctx: &SaddleContext, lambda: i64, n: u64, x: &Float, prec: PrecisionSpec) -> Result<(Complex, Float)> {
    let bits = ctx.bits;
    let xi = Float::with_val(bits, ctx.rf() - x);
    let s = Float::with_val(bits, n).sqrt().recip();
    let cut = prec.working_digits() as f64 * std::f64::consts::LN_10 + 5.0;
    let y_of = |tau: f64| Float::with_val(bits, &s * Float::with_val(bits, tau).sinh());
    let jac = |tau: f64| Float::with_val(bits, &s * Float::with_val(bits, tau).cosh());
    let ell = |tau: f64| {
        let v = log_integrand(ctx, lambda, n, &xi, &y_of(tau));
        v + Complex::with_val(bits, jac(tau).ln())
    };

    // coarse scan for the peak and the truncation window
    let h0 = 0.125;
    let tmax = 40.0;
    let steps = (tmax / h0) as i64;
    let samples: Vec<(f64, f64)> = (-steps..=steps)
        .map(|k| {
            let tau = k as f64 * h0;
            (tau, ell(tau).real().to_f64())
        })
        .collect();
    let peak = samples.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    if !peak.is_finite() {
        return Err(Error::Domain("integrand overflowed".into()));
    }
    let above: Vec<f64> = samples.iter().filter(|&&(_, v)| v > peak - cut).map(|&(t, _)| t).collect();
    let lo = above.first().copied().unwrap_or(0.0) - 2.0 * h0;
    let hi = above.last().copied().unwrap_or(0.0) + 2.0 * h0;
    if lo <= -tmax || hi >= tmax {
        return Err(Error::Domain("integrand does not decay inside the scanned window".into()));
    }

    let scale = Float::with_val(bits, peak);
    let term = |tau: f64| -> Complex { (ell(tau) - &scale).exp() };
    let mut h = 0.125f64;
    let count = |h: f64| ((hi - lo) / h).ceil() as i64;
    let mut sum = Complex::with_val(bits, (0, 0));
    for k in 0..=count(h) {
        sum += term(lo + k as f64 * h);
    }
    let mut prev = Complex::with_val(bits, &sum * h);
    let tol = crate::precision::pow10(bits, -(prec.digits as i32));
    for _ in 0..14 {
        h /= 2.0;
        for k in 0..count(h) {
            if k % 2 == 1 {
                sum += term(lo + k as f64 * h);
            }
        }
        let cur = Complex::with_val(bits, &sum * h);
        let diff = Complex::with_val(bits, &cur - &prev).abs().real().clone();
        let size = Complex::with_val(bits, cur.abs_ref()).real().clone();
        prev = cur;
        if diff <= Float::with_val(bits, &size * &tol) {
            break;
        }
    }
    // dt = i dy
    let i = Complex::with_val(bits, (0, 1));
    let value = prev * i * Float::with_val(bits, scale.exp_ref());
    Ok((value, scale))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsequenceReport {
    pub lambda0: u32,
    pub indices: Vec<u64>,
    /// Smallest `w ≥ 1` with `w Im h(t_λ0) ∈ [π/3, 2π/3] (mod π)`; absent when no subsequence is needed.
    pub w: Option<u64>,
    pub gap_bound: Option<u64>,
    pub max_gap: Option<u64>,
}

fn mod_pi(x: &Float) -> Float {
    let bits = x.prec();
    let pi = Float::with_val(bits, Constant::Pi);
    let q = Float::with_val(bits, x / &pi).floor();
    Float::with_val(bits, x - q * pi)
}

/// Indices `n ≤ n_max` where `arg b_λ0 + ψ_λ0(n) ∈ [π/6, 5π/6] (mod π)`.
pub fn subsequence_select(series: &PeriodicSeries, ctx: &SaddleContext, n_max: u64, prec: PrecisionSpec) -> Result<SubsequenceReport> {
    let spec = b_lambdas(series, prec)?;
    let lambda0 = spec.lambda0;
    if lambda0 == 0 || lambda0 == ctx.d {
        return Ok(SubsequenceReport { lambda0, indices: (1..=n_max).collect(), w: None, gap_bound: None, max_gap: None });
    }
    let geom = find_x1_rho(ctx)?;
    let sp = find_t_lambda(ctx, &geom, lambda0)?;
    let bits = ctx.bits;
    let pi = Float::with_val(bits, Constant::Pi);
    let lo = Float::with_val(bits, &pi / 6u32);
    let hi = Float::with_val(bits, &pi * 5u32) / 6u32;
    let b = spec.get(lambda0 as i64).expect("lambda0 present");
    let arg_b = Float::with_val(bits, b.arg_ref());
    let indices: Vec<u64> = (1..=n_max)
        .filter(|&n| {
            let v = mod_pi(&Float::with_val(bits, &arg_b + sp.psi(n)));
            v >= lo && v <= hi
        })
        .collect();
    let third = Float::with_val(bits, &pi / 3u32);
    let two_thirds = Float::with_val(bits, &third * 2u32);
    let w = (1..=10_000u64).find(|&w| {
        let v = mod_pi(&Float::with_val(bits, sp.h.imag() * w));
        v >= third && v <= two_thirds
    });
    let max_gap = indices.windows(2).map(|p| p[1] - p[0]).max();
    Ok(SubsequenceReport { lambda0, indices, w, gap_bound: w.map(|w| w + 1), max_gap })
}

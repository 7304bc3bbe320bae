//! Location of `x0`, `x1 = r + ρ` and the saddle points `t_λ`.

use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

use super::context::{Logs, SaddleContext};
use crate::error::{Error, Result};

/// Below this the saddle points are found by the log-space fixed point.
pub const TINY_RHO: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Bisection,
    FixedPoint,
}

#[derive(Clone, Debug)]
pub struct GeometryReport {
    pub x0: Float,
    pub x1: Float,
    /// `x1 - r`
    pub rho: Float,
    /// `r - x0`
    pub rho0: Float,
    pub analytic_rho_bound: Float,
    pub method: SolveMethod,
    /// `(x - r, y_x)` along the curve `Re f'(x + i y_x) = 0`, `x ∈ [x0, x1]`.
    pub curve: Vec<(f64, f64)>,
}

impl GeometryReport {
    /// Geometric invariants: `1 < x0 < r < x1`, `ρ < (r-1)/2`, `ρ ≤ 5r/(2e^(R/r))`.
    pub fn invariants_hold(&self, ctx: &SaddleContext) -> bool {
        let r = ctx.rf();
        let half = Float::with_val(ctx.bits, &r - 1u32) / 2u32;
        self.x0 > 1 && self.x0 < r && self.x1 > r && self.rho < half && self.rho <= self.analytic_rho_bound
    }
}

fn real_c(ctx: &SaddleContext, x: &Float) -> Complex {
    Complex::with_val(ctx.bits, (x, 0))
}

/// `Re f'` at real `ε` (negative `ε` means `t > r`).
fn re_fprime_real(ctx: &SaddleContext, eps: &Float) -> Float {
    let e = real_c(ctx, eps);
    ctx.fprime_eps(&ctx.logs(&e)).real().clone()
}

/// Bisection in `u = log|ε|` for a real root; `sign` is `+1` for `ε > 0` (x0) and `-1` (x1).
/// Re f' is positive at `u_lo`, negative at `u_hi`.
fn bisect_log(ctx: &SaddleContext, sign: i32, mut u_lo: Float, mut u_hi: Float) -> Float {
    let bits = ctx.bits;
    let eps_of = |u: &Float| {
        let e = Float::with_val(bits, u.exp_ref());
        if sign < 0 {
            -e
        } else {
            e
        }
    };
    for _ in 0..(bits + 64) {
        let mid = Float::with_val(bits, &u_lo + &u_hi) / 2u32;
        if mid == u_lo || mid == u_hi {
            break;
        }
        if re_fprime_real(ctx, &eps_of(&mid)) > 0 {
            u_lo = mid;
        } else {
            u_hi = mid;
        }
    }
    let u = Float::with_val(bits, &u_lo + &u_hi) / 2u32;
    eps_of(&u)
}

/// Starting value `log 2r + R log((r-1)/(r+1))` of the fixed point.
fn log_rho_guess(ctx: &SaddleContext) -> Float {
    let bits = ctx.bits;
    let r = ctx.rf();
    let ratio = Float::with_val(bits, &r - 1u32) / Float::with_val(bits, &r + 1u32);
    Float::with_val(bits, &r * 2u32).ln() + ratio.ln() * ctx.big_rf()
}

/// Real positive root `ε0 = r - x0`.
fn x0_eps(ctx: &SaddleContext) -> Float {
    let bits = ctx.bits;
    let r = ctx.rf();
    let mut u_lo = log_rho_guess(ctx) - 1u32;
    while re_fprime_real(ctx, &Float::with_val(bits, u_lo.exp_ref())) <= 0 {
        u_lo -= 4u32;
    }
    // ε -> r - 1 drives Re f' to -inf
    let mut gap = Float::with_val(bits, 1) >> 20u32;
    let mut u_hi;
    loop {
        let e = Float::with_val(bits, &r - 1u32) * (Float::with_val(bits, 1) - &gap);
        u_hi = Float::with_val(bits, e.ln_ref());
        if re_fprime_real(ctx, &e) < 0 {
            break;
        }
        gap >>= 20u32;
    }
    bisect_log(ctx, 1, u_lo, u_hi)
}

/// Real positive `ρ` by bisection over `(0, (r-1)/2)`, bracket expanded if needed.
fn rho_bisection(ctx: &SaddleContext) -> Result<Float> {
    let bits = ctx.bits;
    let r = ctx.rf();
    let mut u_lo = log_rho_guess(ctx) - 1u32;
    while re_fprime_real(ctx, &-Float::with_val(bits, u_lo.exp_ref())) <= 0 {
        u_lo -= 4u32;
    }
    let mut hi = Float::with_val(bits, &r - 1u32) / 2u32;
    let mut tries = 0;
    while re_fprime_real(ctx, &-hi.clone()) >= 0 {
        hi *= 4u32;
        tries += 1;
        if tries > 40 {
            return Err(Error::NoBracket(format!(
                "Re f' has no sign change on (r, inf) for d={}, a={}, b={}",
                ctx.d, ctx.a, ctx.b
            )));
        }
    }
    let u_hi = Float::with_val(bits, hi.ln_ref());
    let e = bisect_log(ctx, -1, u_lo, u_hi);
    Ok(-e)
}

/// Log-space fixed point `w ← log(2r+ρ) + R log((r-1+ρ)/(r+1+ρ))`.
fn rho_fixed_point(ctx: &SaddleContext) -> Result<Float> {
    let bits = ctx.bits;
    let r = ctx.rf();
    let big_r = ctx.big_rf();
    let mut w = log_rho_guess(ctx);
    for _ in 0..500 {
        let rho = Float::with_val(bits, w.exp_ref());
        let l1 = Float::with_val(bits, &r * 2u32) + &rho;
        let num = Float::with_val(bits, &r - 1u32) + &rho;
        let den = Float::with_val(bits, &r + 1u32) + &rho;
        let next = l1.ln() + (num / den).ln() * &big_r;
        let step = Float::with_val(bits, &next - &w).abs();
        w = next;
        if step.is_zero() || step.get_exp().unwrap_or(0) < -(bits as i32) + 8 {
            return Ok(Float::with_val(bits, w.exp_ref()));
        }
    }
    Err(Error::NoBracket("fixed point for rho did not converge".into()))
}

pub fn find_x0(ctx: &SaddleContext) -> Float {
    ctx.rf() - x0_eps(ctx)
}

/// `x0`, `x1`, `ρ` and the `y_x` curve.
pub fn find_x1_rho(ctx: &SaddleContext) -> Result<GeometryReport> {
    if ctx.a == 2 * ctx.b {
        return Err(Error::NoBracket("x1 does not exist when a = 2b: Re f' > 0 on all of (r, inf)".into()));
    }
    let bits = ctx.bits;
    let bound = ctx.analytic_rho_bound();
    let (rho, method) = if bound >= TINY_RHO {
        (rho_bisection(ctx)?, SolveMethod::Bisection)
    } else {
        (rho_fixed_point(ctx)?, SolveMethod::FixedPoint)
    };
    let rho0 = x0_eps(ctx);
    let r = ctx.rf();
    let mut report = GeometryReport {
        x0: Float::with_val(bits, &r - &rho0),
        x1: Float::with_val(bits, &r + &rho),
        rho,
        rho0,
        analytic_rho_bound: bound,
        method,
        curve: Vec::new(),
    };
    if report.rho >= TINY_RHO {
        let k = 8;
        for i in 0..=k {
            // ξ = r - x runs from ρ0 (x0) to -ρ (x1)
            let s = Float::with_val(bits, i) / k as u32;
            let xi = Float::with_val(bits, &report.rho0) - Float::with_val(bits, &report.rho0 + &report.rho) * s;
            let y = y_on_curve(ctx, &xi, &report.rho, 60);
            report.curve.push(((-xi).to_f64(), y.to_f64()));
        }
    }
    Ok(report)
}

/// `y_x` with `ξ = r - x`: Re f'(ξ - i y) changes sign from + to - at `y_x`.
fn y_on_curve(ctx: &SaddleContext, xi: &Float, rho: &Float, rel_bits: u32) -> Float {
    let bits = ctx.bits;
    let re_at = |y: &Float| {
        let e = Complex::with_val(bits, (xi, -y.clone()));
        ctx.fprime_eps(&ctx.logs(&e)).real().clone()
    };
    let zero = Float::with_val(bits, 0);
    if xi.is_zero() {
        // t = r exactly: ε = -iy with y > 0 is still inside the domain
    } else if re_at(&zero) <= 0 {
        return zero;
    }
    let mut lo = Float::with_val(bits, 0);
    let mut hi = Float::with_val(bits, rho * 2u32);
    while re_at(&hi) > 0 {
        lo = hi.clone();
        hi *= 2u32;
    }
    let tol = Float::with_val(bits, rho) >> rel_bits;
    while Float::with_val(bits, &hi - &lo) > tol {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let v = re_at(&mid);
        if v > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Float::with_val(bits, &lo + &hi) / 2u32
}

/// One saddle point `t_λ` with the data the asymptotics need.
#[derive(Clone, Debug)]
pub struct SaddlePoint {
    pub lambda: u32,
    /// `ε_λ = r - t_λ`
    pub eps: Complex,
    pub t: Complex,
    pub h: Complex,
    pub fpp: Complex,
    pub g: Complex,
    /// `|f'(t_λ) - λπi|`
    pub residual: f64,
    /// `-(λ+1/2)π/d ≤ arg ε_λ ≤ -(λ-1/2)π/d`
    pub arg_window_ok: bool,
    /// `|t_λ - r| ≤ ρ` (with a relative slack of `10^-20`)
    pub within_rho: bool,
    /// Set when the continuation `x ↦ Im f'(x + i y_x)` is not monotone.
    pub multiple_root_suspect: bool,
    pub method: SolveMethod,
}

impl SaddlePoint {
    /// `arg f''` normalized so that `(π - arg f'')/2 ∈ [-π/4, 3π/4]`.
    pub fn arg_fpp(&self) -> Float {
        let bits = self.fpp.prec().0;
        let pi = Float::with_val(bits, Constant::Pi);
        let mut th = Float::with_val(bits, self.fpp.arg_ref());
        if th < Float::with_val(bits, &pi / -2i32) {
            th += Float::with_val(bits, &pi * 2u32);
        }
        th
    }

    /// `ψ_λ(n) = (π - arg f'')/2 + arg g + n Im h`.
    pub fn psi(&self, n: u64) -> Float {
        let bits = self.fpp.prec().0;
        let pi = Float::with_val(bits, Constant::Pi);
        let mut out = (pi - self.arg_fpp()) / 2u32;
        out += Float::with_val(bits, self.g.arg_ref());
        out += Float::with_val(bits, self.h.imag() * n);
        out
    }
}

/// Newton in `w = log ε` for `F(w) = L1 + R(L3 - L4) - iλπ/d - w`, `F' = -ε f''/d`.
fn newton_polish(ctx: &SaddleContext, mut w: Complex, lambda: u32) -> Complex {
    let bits = ctx.bits;
    let shift = Complex::with_val(bits, (0, Float::with_val(bits, ctx.pi() * lambda) / ctx.d));
    for _ in 0..60 {
        let eps = Complex::with_val(bits, w.exp_ref());
        let lg = ctx.logs(&eps);
        let f = residual_w(ctx, &lg, &w, &shift);
        let df = Complex::with_val(bits, -(Complex::with_val(bits, &eps * ctx.fsecond_eps(&eps)))) / ctx.d;
        if df.is_zero() {
            break;
        }
        let step = f / df;
        w -= &step;
        let size = Complex::with_val(bits, step.abs_ref()).real().clone();
        if size.is_zero() || size.get_exp().unwrap_or(0) < -(bits as i32) + 8 {
            break;
        }
    }
    w
}

fn residual_w(ctx: &SaddleContext, lg: &Logs, w: &Complex, shift: &Complex) -> Complex {
    let bits = ctx.bits;
    let mut f = Complex::with_val(bits, &lg.l3 - &lg.l4) * ctx.big_rf();
    f += &lg.l1;
    f -= shift;
    f - w
}

/// Fixed point `w ← L1 + R(L3 - L4) - iλπ/d` from the leading-order guess.
fn fixed_point_w(ctx: &SaddleContext, lambda: u32) -> Result<Complex> {
    let bits = ctx.bits;
    let shift = Complex::with_val(bits, (0, Float::with_val(bits, ctx.pi() * lambda) / ctx.d));
    let mut w = Complex::with_val(bits, log_rho_guess(ctx)) - &shift;
    for _ in 0..500 {
        let eps = Complex::with_val(bits, w.exp_ref());
        let lg = ctx.logs(&eps);
        let f = residual_w(ctx, &lg, &w, &shift);
        w += &f;
        let size = Complex::with_val(bits, f.abs_ref()).real().clone();
        if size.is_zero() || size.get_exp().unwrap_or(0) < -(bits as i32) + 8 {
            return Ok(w);
        }
    }
    Err(Error::NoBracket(format!("fixed point for t_{lambda} did not converge")))
}

/// `log ε` for the λ-th saddle found by bisection along the `y_x` curve.
fn continuation_w(ctx: &SaddleContext, geom: &GeometryReport, lambda: u32) -> (Complex, bool) {
    let bits = ctx.bits;
    let target = Float::with_val(bits, ctx.pi() * lambda);
    let im_at = |xi: &Float| -> (Float, Float) {
        let y = y_on_curve(ctx, xi, &geom.rho, 50);
        let e = Complex::with_val(bits, (xi, -y.clone()));
        let v = ctx.fprime_eps(&ctx.logs(&e)).imag().clone();
        (v, y)
    };
    // ξ = ρ0 gives Im f' = 0, ξ = -ρ gives dπ; Im f' grows as ξ decreases
    let mut lo = geom.rho0.clone();
    let mut hi = Float::with_val(bits, -&geom.rho);
    let samples = 16;
    let mut prev = Float::with_val(bits, -1);
    let mut monotone = true;
    for i in 0..=samples {
        let s = Float::with_val(bits, i) / samples as u32;
        let xi = Float::with_val(bits, &lo - Float::with_val(bits, &lo - &hi) * s);
        let (v, _) = im_at(&xi);
        if v < prev {
            monotone = false;
        }
        prev = v;
    }
    let tol = Float::with_val(bits, &geom.rho) >> 44u32;
    while Float::with_val(bits, &lo - &hi).abs() > tol {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let (v, _) = im_at(&mid);
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi = Float::with_val(bits, &lo + &hi) / 2u32;
    let (_, y) = im_at(&xi);
    let eps = Complex::with_val(bits, (xi, -y));
    let w = Complex::with_val(bits, eps.ln_ref());
    (w, !monotone)
}

fn finish(ctx: &SaddleContext, geom: &GeometryReport, lambda: u32, eps: Complex, suspect: bool, method: SolveMethod) -> SaddlePoint {
    let bits = ctx.bits;
    let lg = ctx.logs(&eps);
    let fp = ctx.fprime_eps(&lg);
    let want = Complex::with_val(bits, (0, Float::with_val(bits, ctx.pi() * lambda)));
    let residual = Complex::with_val(bits, (fp - want).abs_ref()).real().to_f64();
    let pi = ctx.pi();
    let arg = if eps.imag().is_zero() && eps.real().is_sign_negative() {
        -pi.clone()
    } else {
        Float::with_val(bits, eps.arg_ref())
    };
    let lo = -Float::with_val(bits, &pi * (2 * lambda as u64 + 1)) / (2 * ctx.d);
    let hi = -Float::with_val(bits, &pi * (2 * lambda as i64 - 1)) / (2 * ctx.d as i64);
    let slack = Float::with_val(bits, 1) >> (bits - 16);
    let arg_window_ok = arg >= Float::with_val(bits, &lo - &slack) && arg <= Float::with_val(bits, &hi + &slack);
    let modulus = Complex::with_val(bits, eps.abs_ref()).real().clone();
    let within_rho = modulus <= Float::with_val(bits, &geom.rho * (1.0 + 1e-20));
    SaddlePoint {
        lambda,
        t: ctx.t_of(&eps),
        h: ctx.h_eps(&lg),
        fpp: ctx.fsecond_eps(&eps),
        g: ctx.log_g_eps(&lg).exp(),
        eps,
        residual,
        arg_window_ok,
        within_rho,
        multiple_root_suspect: suspect,
        method,
    }
}

/// Saddle point `t_λ` of `f(t) - λπ i t`, `0 ≤ λ ≤ d`.
pub fn find_t_lambda(ctx: &SaddleContext, geom: &GeometryReport, lambda: u32) -> Result<SaddlePoint> {
    if lambda > ctx.d {
        return Err(Error::InvalidParams(format!("lambda = {lambda} exceeds d = {}", ctx.d)));
    }
    let bits = ctx.bits;
    if lambda == 0 {
        let eps = Complex::with_val(bits, (&geom.rho0, 0));
        return Ok(finish(ctx, geom, 0, eps, false, geom.method));
    }
    if lambda == ctx.d {
        let eps = Complex::with_val(bits, (-geom.rho.clone(), 0));
        return Ok(finish(ctx, geom, lambda, eps, false, geom.method));
    }
    let (w, suspect, method) = if geom.rho < TINY_RHO {
        (fixed_point_w(ctx, lambda)?, false, SolveMethod::FixedPoint)
    } else {
        let (w, s) = continuation_w(ctx, geom, lambda);
        (w, s, SolveMethod::Bisection)
    };
    let w = newton_polish(ctx, w, lambda);
    let eps = Complex::with_val(bits, w.exp_ref());
    Ok(finish(ctx, geom, lambda, eps, suspect, method))
}

/// All `t_λ` for `λ = 0..=d`.
pub fn all_saddle_points(ctx: &SaddleContext, geom: &GeometryReport) -> Result<Vec<SaddlePoint>> {
    (0..=ctx.d).map(|l| find_t_lambda(ctx, geom, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionSpec;

    fn ctx(d: u32, a: u64, b: u64) -> SaddleContext {
        SaddleContext::new(d, a, b, PrecisionSpec::new(30).unwrap()).unwrap()
    }

    /// Bisection oracle in f64 on (x+3)/(3-x) = ((x+1)/(x-1))^10.
    fn x0_oracle_9_1_1() -> f64 {
        let g = |x: f64| ((x + 3.0) / (3.0 - x)).ln() - 10.0 * ((x + 1.0) / (x - 1.0)).ln();
        let (mut lo, mut hi) = (1.5f64, 2.999999);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if g(m) < 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn x0_for_a9() {
        let k = ctx(1, 9, 1);
        let x0 = find_x0(&k).to_f64();
        assert!(x0 > 2.99 && x0 < 2.999, "{x0}");
        assert!((x0 - x0_oracle_9_1_1()).abs() < 1e-12);
        let re = re_fprime_real(&k, &Float::with_val(k.bits, 3.0 - x0)).to_f64();
        assert!(re.abs() < 1e-9);
        for x in [1.1, 2.0, 2.9] {
            assert!(re_fprime_real(&k, &Float::with_val(k.bits, 3.0 - x)) < 0);
        }
    }

    #[test]
    fn rho_paths_agree() {
        let k = ctx(1, 9, 1);
        let b = rho_bisection(&k).unwrap();
        let f = rho_fixed_point(&k).unwrap();
        let rel = (Float::with_val(k.bits, &b - &f) / &b).abs().to_f64();
        assert!(rel < 1e-40, "{rel}");
        assert!((b.to_f64() - 0.0059529315).abs() < 1e-9);
        let g = find_x1_rho(&k).unwrap();
        assert!(g.invariants_hold(&k));
        assert_eq!(g.method, SolveMethod::Bisection);
    }

    #[test]
    fn tiny_rho_row() {
        let k = ctx(1, 173, 11);
        let g = find_x1_rho(&k).unwrap();
        assert!((g.rho.to_f64() / 1.22e-5 - 1.0).abs() < 0.01, "{}", g.rho.to_f64());
        assert!((g.analytic_rho_bound.to_f64() - 0.0299).abs() < 1e-3);
        assert!(g.invariants_hold(&k));
        let r = rho_fixed_point(&k).unwrap();
        let rel = (Float::with_val(k.bits, &r - &g.rho) / &r).abs().to_f64();
        assert!(rel < 1e-40);
    }

    #[test]
    fn no_x1_when_a_is_2b() {
        assert!(matches!(find_x1_rho(&ctx(1, 2, 1)), Err(Error::NoBracket(_))));
    }

    #[test]
    fn middle_saddle_for_d2() {
        let k = ctx(2, 88, 10);
        let g = find_x1_rho(&k).unwrap();
        let sp = find_t_lambda(&k, &g, 1).unwrap();
        assert!(sp.t.imag().to_f64() > 0.0);
        assert!(sp.within_rho && sp.arg_window_ok, "{sp:?}");
        assert!(sp.residual < 1e-12, "{}", sp.residual);
        let arg = sp.eps.arg_ref();
        let arg = Float::with_val(64, arg).to_f64();
        let pi = std::f64::consts::PI;
        assert!(arg >= -0.75 * pi && arg <= -0.25 * pi);
    }

    #[test]
    fn endpoints_are_real() {
        let k = ctx(3, 20, 2);
        let g = find_x1_rho(&k).unwrap();
        let pts = all_saddle_points(&k, &g).unwrap();
        assert!(pts[0].t.imag().is_zero());
        assert!(pts[3].t.imag().is_zero());
        for p in &pts {
            assert!(p.residual < 1e-12, "{p:?}");
            assert!(p.within_rho && p.arg_window_ok, "{p:?}");
        }
    }

    #[test]
    fn continuation_and_fixed_point_agree() {
        let k = ctx(4, 60, 3);
        let g = find_x1_rho(&k).unwrap();
        for lambda in 1..4 {
            let (w1, _) = continuation_w(&k, &g, lambda);
            let w1 = newton_polish(&k, w1, lambda);
            let w2 = newton_polish(&k, fixed_point_w(&k, lambda).unwrap(), lambda);
            let diff = Complex::with_val(k.bits, &w1 - &w2).abs().real().to_f64();
            assert!(diff < 1e-30, "lambda={lambda}: {diff}");
        }
    }
}

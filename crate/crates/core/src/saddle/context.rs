//! `f`, `f'`, `f''`, `g`, `h` and `log|φ(n)|` under a fixed branch convention.
//!
//! All evaluation happens in the local coordinate `ε = r - t`, which keeps
//! full relative precision for saddle points extremely close to `r`.

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::forms::FormParams;
use crate::precision::PrecisionSpec;

/// Text of the branch convention used by every evaluation in this module.
pub const BRANCH_CONVENTION: &str =
    "principal logs of t+r, t-1, t+1; log(r-t) principal except arg = -pi on (r, inf)";

#[derive(Clone, Debug)]
pub struct SaddleContext {
    pub d: u32,
    pub a: u64,
    pub b: u64,
    /// `(d + 2b)/d`
    pub r: Rational,
    /// `(a + d)/d`
    pub big_r: Rational,
    pub bits: u32,
    pub branch: &'static str,
}

/// The four logarithms at one point.
#[derive(Clone, Debug)]
pub struct Logs {
    /// `log(t + r) = log(2r - ε)`
    pub l1: Complex,
    /// `log(r - t) = log ε`
    pub le: Complex,
    /// `log(t - 1) = log(r - 1 - ε)`
    pub l3: Complex,
    /// `log(t + 1) = log(r + 1 - ε)`
    pub l4: Complex,
}

impl SaddleContext {
    pub fn new(d: u32, a: u64, b: u64, prec: PrecisionSpec) -> Result<Self> {
        crate::bounds::check_abd(a, b, d as u64)?;
        let r = Rational::from((d as u64 + 2 * b, d as u64));
        let big_r = Rational::from((a + d as u64, d as u64));
        // saddle points sit at distance ~ e^(-R/r) from r; keep that many extra bits
        let ratio = Float::with_val(64, &big_r / Rational::from(&r)).to_f64();
        let bits = prec.bits() + (ratio / std::f64::consts::LN_2).ceil() as u32 + 32;
        Ok(Self { d, a, b, r, big_r, bits, branch: BRANCH_CONVENTION })
    }

    pub fn from_params(p: &FormParams, prec: PrecisionSpec) -> Result<Self> {
        Self::new(p.d, p.a as u64, p.b as u64, prec)
    }

    pub fn rf(&self) -> Float {
        Float::with_val(self.bits, &self.r)
    }

    pub fn big_rf(&self) -> Float {
        Float::with_val(self.bits, &self.big_r)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// `5r / (2 e^(R/r))`.
    pub fn analytic_rho_bound(&self) -> Float {
        let q = Float::with_val(self.bits, &self.big_r / Rational::from(&self.r));
        let r = self.rf();
        Float::with_val(self.bits, r * 5u32) / 2u32 / q.exp()
    }

    pub fn zero(&self) -> Complex {
        Complex::with_val(self.bits, (0, 0))
    }

    /// `ε = r - t`, rejecting the points and cuts where the functions are undefined.
    pub fn eps_of(&self, t: &Complex) -> Result<Complex> {
        let (re, im) = (t.real(), t.imag());
        if im.is_zero() && *re <= 1 {
            return Err(Error::Domain(format!("t = {} lies on a cut or branch point", re.to_f64())));
        }
        let eps = Complex::with_val(self.bits, self.rf() - t);
        if eps.is_zero() {
            return Err(Error::Domain("t = r is a branch point".into()));
        }
        Ok(eps)
    }

    pub fn t_of(&self, eps: &Complex) -> Complex {
        Complex::with_val(self.bits, self.rf() - eps)
    }

    pub fn logs(&self, eps: &Complex) -> Logs {
        let bits = self.bits;
        let r = self.rf();
        let two_r = Float::with_val(bits, &r * 2u32);
        let l1 = Complex::with_val(bits, two_r - eps).ln();
        let le = log_eps(eps, bits);
        let l3 = Complex::with_val(bits, Float::with_val(bits, &r - 1u32) - eps).ln();
        let l4 = Complex::with_val(bits, Float::with_val(bits, &r + 1u32) - eps).ln();
        Logs { l1, le, l3, l4 }
    }

    pub fn f_eps(&self, eps: &Complex, lg: &Logs) -> Complex {
        let bits = self.bits;
        let r = self.rf();
        let d = self.d;
        let two_r = Float::with_val(bits, &r * 2u32);
        let mut first = Complex::with_val(bits, two_r - eps) * &lg.l1;
        first += Complex::with_val(bits, eps * &lg.le);
        let mut second = Complex::with_val(bits, Float::with_val(bits, &r - 1u32) - eps) * &lg.l3;
        second -= Complex::with_val(bits, Float::with_val(bits, &r + 1u32) - eps) * &lg.l4;
        first * d + second * (self.a + d as u64)
    }

    pub fn fprime_eps(&self, lg: &Logs) -> Complex {
        let bits = self.bits;
        let x = Complex::with_val(bits, &lg.l1 - &lg.le) * self.d;
        x + Complex::with_val(bits, &lg.l3 - &lg.l4) * (self.a + self.d as u64)
    }

    pub fn fsecond_eps(&self, eps: &Complex) -> Complex {
        let bits = self.bits;
        let r = self.rf();
        let two_r = Float::with_val(bits, &r * 2u32);
        let inv = |z: Complex| z.recip();
        let x = inv(Complex::with_val(bits, two_r - eps)) + inv(eps.clone());
        let y = inv(Complex::with_val(bits, Float::with_val(bits, &r - 1u32) - eps))
            - inv(Complex::with_val(bits, Float::with_val(bits, &r + 1u32) - eps));
        x * self.d + y * (self.a + self.d as u64)
    }

    pub fn log_g_eps(&self, lg: &Logs) -> Complex {
        let bits = self.bits;
        let half = Complex::with_val(bits, &lg.l1 + &lg.le) / 2u32;
        let rest = Complex::with_val(bits, &lg.l3 + &lg.l4) * Rational::from((self.a as i64 - 1, 2));
        half - rest
    }

    pub fn h_eps(&self, lg: &Logs) -> Complex {
        let bits = self.bits;
        let dr = Float::with_val(bits, &self.r * Rational::from(self.d));
        let x = Complex::with_val(bits, &lg.l1 + &lg.le) * dr;
        x - Complex::with_val(bits, &lg.l3 + &lg.l4) * (self.a + self.d as u64)
    }
}

/// `log ε` with argument `-π` on the negative real axis.
pub(crate) fn log_eps(eps: &Complex, bits: u32) -> Complex {
    if eps.imag().is_zero() && eps.real().is_sign_negative() {
        let m = Float::with_val(bits, eps.real().abs_ref()).ln();
        let pi = Float::with_val(bits, Constant::Pi);
        Complex::with_val(bits, (m, -pi))
    } else {
        Complex::with_val(bits, eps.ln_ref())
    }
}

pub fn f_eval(ctx: &SaddleContext, t: &Complex) -> Result<Complex> {
    let e = ctx.eps_of(t)?;
    Ok(ctx.f_eps(&e, &ctx.logs(&e)))
}

pub fn fprime_eval(ctx: &SaddleContext, t: &Complex) -> Result<Complex> {
    let e = ctx.eps_of(t)?;
    Ok(ctx.fprime_eps(&ctx.logs(&e)))
}

pub fn fsecond_eval(ctx: &SaddleContext, t: &Complex) -> Result<Complex> {
    let e = ctx.eps_of(t)?;
    if t.imag().is_zero() && (t.real().clone() + &ctx.rf()).is_zero() {
        return Err(Error::Domain("t = -r".into()));
    }
    Ok(ctx.fsecond_eps(&e))
}

pub fn g_eval(ctx: &SaddleContext, t: &Complex) -> Result<Complex> {
    let e = ctx.eps_of(t)?;
    Ok(ctx.log_g_eps(&ctx.logs(&e)).exp())
}

pub fn h_eval(ctx: &SaddleContext, t: &Complex) -> Result<Complex> {
    let e = ctx.eps_of(t)?;
    Ok(ctx.h_eps(&ctx.logs(&e)))
}

/// `log|φ(n)|` for
/// `φ(n) = (-n/2i) (-1)^(dn) 2^(2(a-2b)n+1+a-2b) π^((a-2b)/2) d^(4bn+2-a) n^((4-a-2b)/2)`.
pub fn phi_log_abs(ctx: &SaddleContext, n: u64) -> Float {
    let bits = ctx.bits;
    let (a, b) = (ctx.a as i64, ctx.b as i64);
    let n_i = n as i64;
    let nf = Float::with_val(bits, n);
    let ln2 = Float::with_val(bits, Constant::Log2);
    let lnpi = Float::with_val(bits, Constant::Pi).ln();
    let lnd = Float::with_val(bits, ctx.d).ln();
    let lnn = Float::with_val(bits, nf.ln_ref());
    let mut out = Float::with_val(bits, &lnn - &ln2);
    out += Float::with_val(bits, &ln2 * (2 * (a - 2 * b) * n_i + 1 + a - 2 * b));
    out += Float::with_val(bits, &lnpi * (a - 2 * b)) / 2u32;
    out += Float::with_val(bits, &lnd * (4 * b * n_i + 2 - a));
    out += Float::with_val(bits, &lnn * (4 - a - 2 * b)) / 2u32;
    out
}

//! Direct evaluation of `I = sum_m a_m sum_{k > drn, k ≡ m} P(k)`.
//!
//! Terms with `drn < k < K` are summed one by one. Beyond `K` every class is
//! summed in closed form from the expansion of `P` at infinity,
//! `P(k) = scalar * k^-g * G(1/k^2)`, one Hurwitz zeta per power of `1/k^2`.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{hurwitz_zeta_float, SplitValue};
use crate::error::Result;
use crate::forms::{build_p, FormParams, RationalFunctionRep};
use crate::precision::PrecisionSpec;
use crate::series::PeriodicSeries;

/// How the truncation bound is compared with the computed sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailTarget {
    /// bound ≤ 10^-(digits+guard) · max(1, |I|)
    Absolute,
    /// bound ≤ 10^-(digits+guard) · |I|
    Relative,
}

#[derive(Clone, Debug)]
pub struct TailSum {
    pub value: SplitValue,
    /// Rigorous bound on the dropped part of the expansion at infinity.
    pub bound: Float,
    /// Class sums `I_m` for `m = 1..=d`.
    pub class_sums: Vec<Float>,
    /// Terms of the expansion at infinity that were kept.
    pub series_terms: u32,
    /// Start of the closed-form part.
    pub cutoff: u64,
    pub bits: u32,
}

struct Layout {
    start: u64,
    cutoff: u64,
    gap: u64,
}

fn layout(p: &FormParams) -> Layout {
    let (d, b, n) = (p.d as u64, p.b as u64, p.n as u64);
    let start = (d + 2 * b) * n;
    let cutoff = (4 * start).max(8 * d * n) + 1;
    Layout { start, cutoff, gap: p.degree_gap() }
}

/// `P(k)` at `bits` from the factored form; `k` is above every zero and pole.
fn p_float(rep: &RationalFunctionRep, k: u64, bits: u32) -> Float {
    let k = k as i64;
    let mut num = Float::with_val(bits, &rep.scalar);
    for &z in &rep.numerator_zeros {
        num *= k - z;
    }
    let mut den = Float::with_val(bits, 1);
    for &(p, _) in &rep.poles {
        den *= k - p;
    }
    num / den.pow(rep.params.a)
}

/// Coefficients of `G(v) = prod_z (1 - z^2 v) prod_{l=1..n} (1 - d^2 l^2 v)^-a` up to `v^terms`.
/// With `majorant` the zero factors become `(1 + z^2 v)`.
fn g_coeffs(p: &FormParams, terms: usize, majorant: bool) -> Vec<Integer> {
    let (d, b, n) = (p.d as u64, p.b as u64, p.n as u64);
    let mut e = vec![Integer::new(); terms + 1];
    e[0] = Integer::from(1);
    for z in (d * n + 1)..=((d + 2 * b) * n) {
        let c = Integer::from(z * z);
        for s in (1..=terms).rev() {
            let t = Integer::from(&e[s - 1] * &c);
            if majorant {
                e[s] += t;
            } else {
                e[s] -= t;
            }
        }
    }
    for l in 1..=n {
        let c = Integer::from(d * d * l * l);
        for _ in 0..p.a {
            for s in 1..=terms {
                let t = Integer::from(&e[s - 1] * &c);
                e[s] += t;
            }
        }
    }
    e
}

/// `Ḡ(v)` in closed form.
fn g_majorant_at(p: &FormParams, v: &Float) -> Float {
    let (d, b, n) = (p.d as u64, p.b as u64, p.n as u64);
    let bits = v.prec();
    let mut out = Float::with_val(bits, 1);
    for z in (d * n + 1)..=((d + 2 * b) * n) {
        out *= Float::with_val(bits, v * (z * z)) + 1u32;
    }
    for l in 1..=n {
        let f = Float::with_val(bits, 1) - Float::with_val(bits, v * (d * d * l * l));
        out /= f.pow(p.a);
    }
    out
}

/// Per-class sums and the truncation bound for one choice of `bits` and `terms`.
fn class_sums(rep: &RationalFunctionRep, bits: u32, terms: u32) -> Result<(Vec<Float>, Float)> {
    let p = rep.params;
    let Layout { start, cutoff, gap } = layout(&p);
    let d = p.d as u64;
    let mut sums = vec![Float::with_val(bits, 0); p.d as usize];
    for k in (start + 1)..cutoff {
        sums[((k - 1) % d) as usize] += p_float(rep, k, bits);
    }

    let scalar = Float::with_val(bits, &rep.scalar);
    let e = g_coeffs(&p, terms as usize, false);
    let df = Float::with_val(bits, d);
    for (i, sum) in sums.iter_mut().enumerate() {
        let m = i as u64 + 1;
        let k_m = cutoff + (m + d - cutoff % d) % d;
        let x = Float::with_val(bits, Rational::from((k_m, d)));
        let mut acc = Float::with_val(bits, 0);
        for (s, es) in e.iter().enumerate() {
            if *es == 0 {
                continue;
            }
            let q = (gap + 2 * s as u64) as u32;
            let z = hurwitz_zeta_float(q, &x, bits)?;
            let dq = Float::with_val(bits, (&df).pow(q));
            acc += Float::with_val(bits, es * z) / dq;
        }
        *sum += acc * &scalar;
    }

    // dropped part <= scalar Ḡ(v1) Q^{S+1}/(1-Q) K^-g (1 + K/(g-1)),
    // v1 = (2dn)^-2, Q = (2dn/K)^2 <= 1/16
    let two_dn = 2 * d * p.n as u64;
    let v1 = Float::with_val(bits, Rational::from((1, two_dn * two_dn)));
    let q = Float::with_val(bits, Rational::from((two_dn * two_dn, cutoff * cutoff)));
    let kf = Float::with_val(bits, cutoff);
    let mut bound = g_majorant_at(&p, &v1) * &scalar;
    bound *= Float::with_val(bits, (&q).pow(terms + 1));
    bound /= Float::with_val(bits, 1) - &q;
    bound /= Float::with_val(bits, (&kf).pow(gap));
    bound *= Float::with_val(bits, &kf / (gap - 1)) + 1u32;
    Ok((sums, bound))
}

fn combine(series: &PeriodicSeries, sums: &[Float], bits: u32) -> SplitValue {
    let dot = |coeffs: &[Rational]| {
        let mut acc = Float::with_val(bits, 0);
        for (c, s) in coeffs.iter().zip(sums) {
            if *c != 0 {
                acc += Float::with_val(bits, s * c);
            }
        }
        acc
    };
    SplitValue { re: dot(&series.coeffs_re), im: series.coeffs_im.as_deref().map(dot) }
}

fn coeff_scale(series: &PeriodicSeries, bits: u32) -> (Float, Float) {
    let mut max = Float::with_val(bits, 0);
    let mut total = Float::with_val(bits, 0);
    for m in 0..series.d as usize {
        let mut c = Float::with_val(bits, &series.coeffs_re[m]).abs();
        if let Some(im) = &series.coeffs_im {
            c += Float::with_val(bits, &im[m]).abs();
        }
        total += &c;
        max.max_mut(&c);
    }
    (max, total)
}

/// `I(n)` by direct summation, absolute target `10^-(digits+guard) · max(1, |I|)`.
pub fn i_tail(series: &PeriodicSeries, params: &FormParams, prec: PrecisionSpec) -> Result<TailSum> {
    i_tail_with(series, params, prec, TailTarget::Absolute, None)
}

/// `I(n)` by direct summation with an explicit target; `min_terms` forces at least that
/// many terms of the expansion at infinity.
pub fn i_tail_with(
    series: &PeriodicSeries,
    params: &FormParams,
    prec: PrecisionSpec,
    target: TailTarget,
    min_terms: Option<u32>,
) -> Result<TailSum> {
    let rep = build_p(*params);
    let lay = layout(params);
    let mut bits = prec.bits() + 64;
    // each term gains log2(1/Q) >= 4 bits
    let q_bits = 2.0 * (lay.cutoff as f64 / (2.0 * params.d as f64 * params.n as f64)).log2();
    let mut terms = ((bits as f64 / q_bits).ceil() as u32 + 4).max(min_terms.unwrap_or(0));
    loop {
        let (sums, bound) = class_sums(&rep, bits, terms)?;
        let value = combine(series, &sums, bits);
        let (max_c, total_c) = coeff_scale(series, bits);
        let bound = bound * &max_c;
        let abs = value.abs();
        let eps = prec.working_eps();
        let scale = match target {
            TailTarget::Absolute => Float::with_val(bits, abs.max_ref(&Float::with_val(bits, 1))),
            TailTarget::Relative => abs.clone(),
        };
        // cancellation between classes costs log2(sum |a_m| I_m / |I|) bits
        let mass = sums.iter().fold(Float::with_val(bits, 0), |acc, s| acc + s) * &total_c;
        let lost = if abs.is_zero() {
            bits as f64
        } else {
            (log2_f64(&mass) - log2_f64(&abs)).max(0.0)
        };
        let lost_ok = target == TailTarget::Absolute || lost + (prec.bits() as f64) + 32.0 < bits as f64;
        if bound <= Float::with_val(bits, &eps * &scale) && lost_ok {
            let out_bits = prec.bits();
            return Ok(TailSum {
                value: SplitValue {
                    re: Float::with_val(out_bits, &value.re),
                    im: value.im.map(|v| Float::with_val(out_bits, v)),
                },
                bound: Float::with_val(64, &bound),
                class_sums: sums.into_iter().map(|s| Float::with_val(out_bits, s)).collect(),
                series_terms: terms,
                cutoff: lay.cutoff,
                bits,
            });
        }
        if !lost_ok {
            if lost >= bits as f64 * 4.0 {
                // genuinely zero up to the cost budget; report what we have
                return Ok(TailSum {
                    value,
                    bound,
                    class_sums: sums,
                    series_terms: terms,
                    cutoff: lay.cutoff,
                    bits,
                });
            }
            bits = bits + lost.ceil() as u32 + 32;
        }
        terms = terms * 2 + 8;
    }
}

fn log2_f64(x: &Float) -> f64 {
    Float::with_val(x.prec(), x.log2_ref()).to_f64()
}

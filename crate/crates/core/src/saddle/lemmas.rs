//! Numeric checks of the ordering and sign lemmas at given parameters.

use rug::float::Constant;
use rug::{Complex, Float};
use serde::Serialize;

use super::context::SaddleContext;
use super::geometry::{all_saddle_points, find_x1_rho, GeometryReport, SaddlePoint};
use crate::error::Result;

/// Distance of `Im h(t_λ)` to `πℤ` must exceed this.
pub const IM_H_MARGIN: f64 = 1e-11;

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    /// `(λ, Re h(t_λ))` over `λ ≡ d (mod 2)`
    pub re_h: Vec<(u32, f64)>,
    pub re_h_increasing: bool,
    /// `(λ, distance of Im h(t_λ) to πℤ)` for `1 ≤ λ ≤ d-1`
    pub im_h_distance: Vec<(u32, f64)>,
    pub im_h_off_lattice: bool,
    pub disc_samples: usize,
    pub disc_sign_ok: bool,
    pub witnesses: Vec<Witness>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.re_h_increasing && self.im_h_off_lattice && self.disc_sign_ok
    }
}

fn dist_to_pi_lattice(x: &Float) -> Float {
    let bits = x.prec();
    let pi = Float::with_val(bits, Constant::Pi);
    let q = Float::with_val(bits, x / &pi).round();
    Float::with_val(bits, x - q * pi).abs()
}

/// Points with `Re t > 1`, `Im t ≥ 0` and `|t - r| > ρ`: rings around `r` plus a coarse grid.
fn disc_samples(ctx: &SaddleContext, geom: &GeometryReport) -> Vec<Complex> {
    let bits = ctx.bits;
    let r = ctx.rf();
    let rho = &geom.rho;
    let mut out = Vec::new();
    for scale in [1.01f64, 1.1, 1.5, 2.0, 4.0, 16.0, 256.0] {
        let rad = Float::with_val(bits, rho * scale);
        for k in 0..=24 {
            let th = std::f64::consts::PI * k as f64 / 24.0;
            let t = Complex::with_val(bits, (&r + Float::with_val(bits, &rad * th.cos()), Float::with_val(bits, &rad * th.sin())));
            out.push(t);
        }
    }
    let rv = r.to_f64();
    for i in 1..=16 {
        let x = 1.0 + (3.0 * rv) * (i as f64 / 16.0).powi(2);
        for j in 0..=16 {
            let y = 3.0 * rv * (j as f64 / 16.0).powi(2);
            out.push(Complex::with_val(bits, (x, y)));
        }
    }
    out.retain(|t| {
        if *t.real() <= 1 {
            return false;
        }
        let diff = Complex::with_val(bits, t - &r);
        let m = Complex::with_val(bits, diff.abs_ref()).real().clone();
        m > *rho
    });
    out
}

pub fn lemma_suite_with(ctx: &SaddleContext, geom: &GeometryReport, points: &[SaddlePoint]) -> Result<LemmaReport> {
    let d = ctx.d;
    let mut witnesses = Vec::new();

    let same_parity: Vec<&SaddlePoint> = points.iter().filter(|p| (p.lambda % 2) == (d % 2)).collect();
    let re_h: Vec<(u32, f64)> = same_parity.iter().map(|p| (p.lambda, p.h.real().to_f64())).collect();
    let mut re_h_increasing = true;
    for w in same_parity.windows(2) {
        if w[0].h.real() >= w[1].h.real() {
            re_h_increasing = false;
            witnesses.push(Witness {
                check: "re_h_increasing",
                detail: format!("Re h(t_{}) = {} >= Re h(t_{}) = {}", w[0].lambda, w[0].h.real().to_f64(), w[1].lambda, w[1].h.real().to_f64()),
            });
        }
    }

    let mut im_h_distance = Vec::new();
    let mut im_h_off_lattice = true;
    for p in points.iter().filter(|p| p.lambda >= 1 && p.lambda < d) {
        let dist = dist_to_pi_lattice(p.h.imag()).to_f64();
        im_h_distance.push((p.lambda, dist));
        if dist <= IM_H_MARGIN {
            im_h_off_lattice = false;
            witnesses.push(Witness { check: "im_h_off_lattice", detail: format!("λ = {}: distance {dist:e}", p.lambda) });
        }
    }

    let samples = disc_samples(ctx, geom);
    let mut disc_sign_ok = true;
    for t in &samples {
        let eps = ctx.eps_of(t)?;
        let fp = ctx.fprime_eps(&ctx.logs(&eps));
        if *fp.real() >= 0 {
            disc_sign_ok = false;
            if witnesses.len() < 32 {
                witnesses.push(Witness {
                    check: "disc_sign",
                    detail: format!("t = {} + {}i: Re f' = {:e}", t.real().to_f64(), t.imag().to_f64(), fp.real().to_f64()),
                });
            }
        }
    }

    Ok(LemmaReport { re_h, re_h_increasing, im_h_distance, im_h_off_lattice, disc_samples: samples.len(), disc_sign_ok, witnesses })
}

/// Monotonicity of `Re h(t_λ)`, `Im h(t_λ) ∉ πℤ`, and `Re f' < 0` outside the `ρ`-disc.
pub fn lemma_suite(ctx: &SaddleContext) -> Result<LemmaReport> {
    let geom = find_x1_rho(ctx)?;
    let points = all_saddle_points(ctx, &geom)?;
    lemma_suite_with(ctx, &geom, &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionSpec;

    fn ctx(d: u32, a: u64, b: u64) -> SaddleContext {
        SaddleContext::new(d, a, b, PrecisionSpec::new(30).unwrap()).unwrap()
    }

    #[test]
    fn d1_is_vacuous_for_im_h() {
        let rep = lemma_suite(&ctx(1, 9, 1)).unwrap();
        assert!(rep.im_h_distance.is_empty());
        assert!(rep.passed(), "{:?}", rep.witnesses);
    }

    #[test]
    fn d4_table_row() {
        let rep = lemma_suite(&ctx(4, 2594, 186)).unwrap();
        assert_eq!(rep.re_h.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 2, 4]);
        assert!(rep.passed(), "{:?}", rep.witnesses);
    }

    #[test]
    fn d2_im_h_window() {
        let k = ctx(2, 88, 10);
        let rep = lemma_suite(&k).unwrap();
        assert!(rep.passed(), "{:?}", rep.witnesses);
        let g = find_x1_rho(&k).unwrap();
        let t1 = super::super::geometry::find_t_lambda(&k, &g, 1).unwrap();
        let r = k.rf().to_f64();
        let im = t1.h.imag().to_f64();
        let pi = std::f64::consts::PI;
        let upper = -r * pi - 2.0 * 2.0 * t1.eps.imag().to_f64();
        assert!(im > -r * pi && im < upper, "{im} not in ({}, {upper})", -r * pi);
        assert!(upper < -r * pi + pi / 2.0);
    }
}

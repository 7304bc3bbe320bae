use dirforms::bounds::{alpha_closed, hypothesis_check, BoundVariant, HypothesisMode};
use dirforms::eval::{hurwitz_zeta, i_tail_with, TailTarget};
use dirforms::forms::integrality_check;
use dirforms::saddle::{f_eval, fprime_eval, fsecond_eval, g_eval, h_eval, SaddleContext};
use dirforms::{build_p, eval_p_exact, linear_form_coeffs, partial_fractions, FormParams, PeriodicSeries, PrecisionSpec};
use proptest::prelude::*;
use rug::{Complex, Float, Rational};

/// `(d, a, b, n)` with `d ≤ 4`, `a ≤ 8`, `b ≤ 3`, `a ≥ 2b`, `n ≤ 4`.
fn grid() -> impl Strategy<Value = FormParams> {
    (1u32..=4, 1u32..=3, 0u32..=4, 1u32..=4)
        .prop_filter_map("a <= 8", |(d, b, extra, n)| {
            let a = 2 * b + extra;
            (a <= 8).then(|| FormParams::new(d, a, b, n).unwrap())
        })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-400i64..400, 1i64..60).prop_map(|(p, q)| Rational::from((p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstruction_is_exact(p in grid(), t in rational()) {
        let rep = build_p(p);
        prop_assume!(!rep.is_pole(&t));
        let table = partial_fractions(&rep);
        prop_assert_eq!(eval_p_exact(&rep, &t).unwrap(), table.evaluate(&t).unwrap());
    }

    #[test]
    fn parity_sums_and_reflection(p in grid()) {
        let table = partial_fractions(&build_p(p));
        prop_assert!(table.reflection_holds());
        for j in 1..=p.a {
            if (p.a - j) % 2 == 1 {
                prop_assert_eq!(table.sum_over_l(j), Rational::new());
            }
        }
    }

    #[test]
    fn coefficients_clear_with_lcm_powers(p in grid()) {
        let table = partial_fractions(&build_p(p));
        let coeffs = linear_form_coeffs(&table);
        let rep = integrality_check(&table, &coeffs);
        prop_assert!(rep.passed, "{:?}", rep.first_failure);
    }

    #[test]
    fn slack_gap_is_one_third(d in 1u64..=6, b in 1u64..=5000, extra in 0u64..=100_000) {
        let a = 2 * b + extra;
        let w = alpha_closed(a, b, d, BoundVariant::ClosedWithSlack, 256).unwrap();
        let n = alpha_closed(a, b, d, BoundVariant::ClosedNoSlack, 256).unwrap();
        let gap = Float::with_val(256, &n - &w) - Float::with_val(256, 1) / 3u32;
        // cancellation in the closed form costs at most ~ log2 of its largest term
        prop_assert!(gap.abs().to_f64() < 1e-40);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn analytic_pass_implies_numeric_pass(d in 1u64..=4, b in 1u64..=40, extra in 0u64..=400) {
        let a = 2 * b + extra;
        let strict = d != 1;
        let an = hypothesis_check(a, b, d, HypothesisMode::Analytic, strict).unwrap();
        if an.passed {
            prop_assert!(hypothesis_check(a, b, d, HypothesisMode::Numeric, strict).unwrap().passed);
        }
    }

    #[test]
    fn derivatives_match_central_differences(x in 1.05f64..6.0, y in 0.01f64..3.0, b in 1u64..=2, extra in 1u64..=6) {
        let ctx = SaddleContext::new(1, 2 * b + extra, b, PrecisionSpec::new(30).unwrap()).unwrap();
        let bits = ctx.bits;
        let t = Complex::with_val(bits, (x, y));
        let delta = Float::with_val(bits, Float::i_exp(1, -30));
        let tp = Complex::with_val(bits, &t + &delta);
        let tm = Complex::with_val(bits, &t - &delta);
        let two_delta = Float::with_val(bits, &delta * 2u32);
        let fd1 = Complex::with_val(bits, f_eval(&ctx, &tp).unwrap() - f_eval(&ctx, &tm).unwrap()) / &two_delta;
        let fd2 = Complex::with_val(bits, fprime_eval(&ctx, &tp).unwrap() - fprime_eval(&ctx, &tm).unwrap()) / &two_delta;
        let e1 = Complex::with_val(bits, fd1 - fprime_eval(&ctx, &t).unwrap()).abs().real().to_f64();
        let e2 = Complex::with_val(bits, fd2 - fsecond_eval(&ctx, &t).unwrap()).abs().real().to_f64();
        // O(δ²) with δ = 2^-30, scaled by the size of the third derivative
        prop_assert!(e1 < 1e-12 && e2 < 1e-12, "{} {}", e1, e2);
    }

    #[test]
    fn branch_continuity_on_segments(x0 in 1.1f64..5.0, y0 in 0.0f64..2.0, x1 in 1.1f64..5.0, y1 in 0.0f64..2.0) {
        let ctx = SaddleContext::new(1, 5, 1, PrecisionSpec::new(20).unwrap()).unwrap();
        let bits = ctx.bits;
        // keep the segment away from the cut (r, inf) on the real axis and from t = r
        prop_assume!(y0 > 0.05 || x0 < 2.9);
        prop_assume!(y1 > 0.05 || x1 < 2.9);
        let steps = 200;
        let mut prev: Option<[f64; 6]> = None;
        for k in 0..=steps {
            let s = k as f64 / steps as f64;
            let (x, y) = (x0 + s * (x1 - x0), y0 + s * (y1 - y0));
            if y < 0.05 && x > 2.9 {
                prev = None;
                continue;
            }
            let t = Complex::with_val(bits, (x, y));
            let f = f_eval(&ctx, &t).unwrap();
            let g = g_eval(&ctx, &t).unwrap();
            let h = h_eval(&ctx, &t).unwrap();
            let cur = [f.real().to_f64(), f.imag().to_f64(), g.real().to_f64(), g.imag().to_f64(), h.real().to_f64(), h.imag().to_f64()];
            if let Some(p) = prev {
                let step = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt() / steps as f64;
                for i in 0..6 {
                    // Lipschitz-style jump test scaled to the step length
                    prop_assert!((cur[i] - p[i]).abs() < 100.0 * step.max(1e-3), "component {} jumps at ({}, {})", i, x, y);
                }
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn hurwitz_two_precision(j in 2u32..=12, p in 1i64..=30, q in 1i64..=7) {
        let x = Rational::from((p, q));
        let lo = PrecisionSpec::new(30).unwrap();
        let a = hurwitz_zeta(j, &x, lo).unwrap();
        let b = hurwitz_zeta(j, &x, lo.doubled()).unwrap();
        let rel = (Float::with_val(400, &a - &b) / &b).abs().to_f64();
        prop_assert!(rel < 1e-30, "{}", rel);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn tail_bound_covers_extra_terms(which in 0usize..3, ab in 0usize..4, n in 1u32..=4) {
        let s = [PeriodicSeries::zeta(), PeriodicSeries::chi3(), PeriodicSeries::chi4()][which].clone();
        let (a, b) = [(4, 1), (5, 1), (5, 2), (6, 2)][ab];
        let p = FormParams::new(s.d, a, b, n).unwrap();
        let prec = PrecisionSpec::new(30).unwrap();
        let base = i_tail_with(&s, &p, prec, TailTarget::Absolute, None).unwrap();
        let more = i_tail_with(&s, &p, prec, TailTarget::Absolute, Some(base.series_terms + 10)).unwrap();
        let diff = Float::with_val(base.bits, &base.value.re - &more.value.re).abs();
        // both are rounded to the working precision; allow that on top of the bound
        let slop = Float::with_val(64, base.value.re.abs_ref()) >> (prec.bits() as i32 - 4);
        prop_assert!(diff <= Float::with_val(64, &base.bound + &slop), "{} > {}", diff.to_f64(), base.bound.to_f64());
    }
}

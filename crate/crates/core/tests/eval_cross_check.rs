use dirforms::eval::{cross_check, rate_empirical};
use dirforms::{FormParams, PeriodicSeries, PrecisionSpec};

fn prec30() -> PrecisionSpec {
    PrecisionSpec::new(30).unwrap()
}

#[test]
fn listed_cross_checks_agree() {
    let cases = [
        (PeriodicSeries::zeta(), FormParams::new(1, 5, 1, 6).unwrap()),
        (PeriodicSeries::chi4(), FormParams::new(4, 6, 1, 3).unwrap()),
        (PeriodicSeries::chi3(), FormParams::new(3, 5, 2, 2).unwrap()),
        (PeriodicSeries::chi3(), FormParams::new(3, 4, 1, 1).unwrap()),
        (PeriodicSeries::zeta(), FormParams::new(1, 9, 1, 2).unwrap()),
    ];
    for (s, p) in cases {
        let r = cross_check(&s, &p, prec30()).unwrap();
        assert!(r.passed, "{} {:?}: {r:?}", s.label, p);
    }
}

#[test]
fn cross_check_grid() {
    for s in [PeriodicSeries::zeta(), PeriodicSeries::chi3(), PeriodicSeries::chi4()] {
        for (a, b) in [(4, 1), (5, 1), (5, 2), (6, 2)] {
            for n in 1..=6 {
                let p = FormParams::new(s.d, a, b, n).unwrap();
                let r = cross_check(&s, &p, prec30()).unwrap();
                assert!(r.passed, "{} {:?}: {r:?}", s.label, p);
                assert!(r.i_tail.trim_start_matches('-') != "0");
            }
        }
    }
}

#[test]
fn rate_sequence_is_monotone_toward_prediction() {
    let base = FormParams::new(1, 9, 1, 1).unwrap();
    let pts = rate_empirical(&PeriodicSeries::zeta(), &base, &[5, 10, 20, 30], PrecisionSpec::new(15).unwrap()).unwrap();
    let rates: Vec<f64> = pts.iter().map(|p| p.rate.unwrap()).collect();
    let expected = [-23.7805, -22.7837, -22.1248, -21.8592];
    for (r, e) in rates.iter().zip(expected) {
        assert!((r - e).abs() < 1e-3, "{r} vs {e}");
    }
    assert!(rates.windows(2).all(|w| w[1] > w[0]));
}

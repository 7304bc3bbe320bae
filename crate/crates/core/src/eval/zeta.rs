//! Hurwitz zeta, digamma and `L(j)` by Euler–Maclaurin summation.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::PrecisionSpec;
use crate::series::PeriodicSeries;

use super::SplitValue;

static BERNOULLI: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// Exact `B_0, ..., B_m` (with `B_1 = -1/2`), extended on demand and shared between threads.
pub fn bernoulli(m: usize) -> Rational {
    let cache = BERNOULLI.get_or_init(|| RwLock::new(vec![Rational::from(1)]));
    if let Some(v) = cache.read().expect("bernoulli cache poisoned").get(m) {
        return v.clone();
    }
    let mut table = cache.write().expect("bernoulli cache poisoned");
    while table.len() <= m {
        let k = table.len();
        let value = if k == 1 {
            Rational::from((-1, 2))
        } else if k % 2 == 1 {
            Rational::new()
        } else {
            // sum_{i<k} C(k+1, i) B_i + (k+1) B_k = 0
            let mut s = Rational::new();
            let mut binom = Integer::from(1);
            for (i, b) in table.iter().enumerate() {
                if *b != 0 {
                    s += Rational::from(b * &binom);
                }
                binom *= (k + 1 - i) as u64;
                binom /= (i + 1) as u64;
            }
            -s / Rational::from(k as u64 + 1)
        };
        table.push(value);
    }
    table[m].clone()
}

/// Number of Euler–Maclaurin correction terms and the shift needed for relative error `2^-bits`.
fn em_plan(s: f64, x: f64, bits: u32) -> (u32, u64) {
    let p = (bits as f64 / 5.3).ceil() as u32 + 2;
    // relative remainder <= 4 (s)_{2P} / (2 pi (x+N))^{2P}
    let log_poch: f64 = (0..2 * p).map(|i| (s + i as f64).ln()).sum();
    let target = -(bits as f64 + 2.0) * std::f64::consts::LN_2 - 4f64.ln();
    // need 2P ln(2 pi (x+N)) >= log_poch - target
    let y = ((log_poch - target) / (2.0 * p as f64)).exp() / (2.0 * std::f64::consts::PI);
    let n = (y - x).ceil().max(0.0) as u64 + 1;
    (p, n)
}

/// `sum_{k>=0} (k + x)^-s` for integer `s >= 2` and real `x > 0`, to relative precision `2^-prec`.
pub fn hurwitz_zeta_float(s: u32, x: &Float, prec: u32) -> Result<Float> {
    if s < 2 {
        return Err(Error::Domain(format!("hurwitz zeta needs s >= 2, got {s}")));
    }
    if *x <= 0 {
        return Err(Error::Domain("hurwitz zeta needs x > 0".into()));
    }
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    let (p, n) = em_plan(s as f64, x.to_f64(), wp);
    let mut sum = Float::with_val(wp, 0);
    for k in 0..n {
        let t = Float::with_val(wp, &x + k);
        sum += Float::with_val(wp, t.pow(-(s as i32)));
    }
    let y = Float::with_val(wp, &x + n);
    let yinv = Float::with_val(wp, y.recip_ref());
    let y_pow = Float::with_val(wp, (&y).pow(1 - s as i32)); // y^(1-s)
    sum += Float::with_val(wp, &y_pow / (s - 1));
    let mut ys = Float::with_val(wp, &y_pow * &yinv); // y^-s
    sum += Float::with_val(wp, &ys / 2u32);
    // term_p = B_2p/(2p)! (s)_{2p-1} y^{-s-2p+1}
    let yinv2 = Float::with_val(wp, &yinv * &yinv);
    let mut poch = Float::with_val(wp, s); // (s)_{2p-1}
    let mut fact = Integer::from(2); // (2p)!
    ys *= &yinv; // y^{-s-1}
    for k in 1..=p {
        let b = bernoulli(2 * k as usize);
        let coeff = Float::with_val(wp, &b) / &fact;
        sum += Float::with_val(wp, &coeff * &poch) * &ys;
        let s2 = s as u64 + 2 * k as u64;
        poch *= (s2 - 1) * s2;
        fact *= (2 * k as u64 + 1) * (2 * k as u64 + 2);
        ys *= &yinv2;
    }
    Ok(Float::with_val(prec, sum))
}

/// `zeta(j, x) = sum_{k>=0} (k + x)^-j` for exact rational `x > 0`.
pub fn hurwitz_zeta(j: u32, x: &Rational, prec: PrecisionSpec) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::Domain(format!("hurwitz zeta needs x > 0, got {x}")));
    }
    let bits = prec.bits();
    hurwitz_zeta_float(j, &Float::with_val(bits + 16, x), bits)
}

/// `psi(x)` for real `x > 0` by shifting and the asymptotic series.
pub fn digamma_float(x: &Float, prec: u32) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::Domain("digamma needs x > 0".into()));
    }
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    // first omitted term |B_{2P+2}| / ((2P+2) y^{2P+2}) ~ 2 (2P+1)! / (2 pi y)^{2P+2}
    let p = (wp as f64 / 5.3).ceil() as u64 + 2;
    let log_fact: f64 = (1..=2 * p + 1).map(|i| (i as f64).ln()).sum();
    let target = -(wp as f64 + 4.0) * std::f64::consts::LN_2;
    let y_min = ((log_fact + 2f64.ln() - target) / (2.0 * p as f64 + 2.0)).exp() / (2.0 * std::f64::consts::PI);
    let n = (y_min - x.to_f64()).ceil().max(0.0) as u64 + 1;
    let mut shift = Float::with_val(wp, 0);
    for k in 0..n {
        shift += Float::with_val(wp, &x + k).recip();
    }
    let y = Float::with_val(wp, &x + n);
    let yinv = Float::with_val(wp, y.recip_ref());
    let yinv2 = Float::with_val(wp, &yinv * &yinv);
    let mut out = Float::with_val(wp, y.ln_ref()) - Float::with_val(wp, &yinv / 2u32);
    let mut ypow = yinv2.clone();
    for k in 1..=p {
        let b = bernoulli(2 * k as usize);
        out -= Float::with_val(wp, &b) / (2 * k) * &ypow;
        ypow *= &yinv2;
    }
    Ok(Float::with_val(prec, out - shift))
}

/// `zeta_m(j) = sum_{k ≡ m (mod d), k >= 1} k^-j = d^-j zeta(j, m/d)`.
pub fn zeta_m(j: u32, m: u32, d: u32, prec: PrecisionSpec) -> Result<Float> {
    if j < 2 {
        return Err(Error::Domain(format!("zeta_m needs j >= 2, got {j}")));
    }
    if d == 0 || m == 0 || m > d {
        return Err(Error::Domain(format!("zeta_m needs 1 <= m <= d (m={m}, d={d})")));
    }
    let h = hurwitz_zeta(j, &Rational::from((m, d)), prec)?;
    let dp = Float::with_val(prec.bits() + 16, d);
    Ok(Float::with_val(prec.bits(), h / dp.pow(j)))
}

/// `sum_m a_m zeta_m(j)`; `j = 1` only when the coefficients sum to zero over a period.
pub fn l_value(series: &PeriodicSeries, j: u32, prec: PrecisionSpec) -> Result<SplitValue> {
    let bits = prec.bits();
    let d = series.d;
    let part = |coeffs: &[Rational]| -> Result<Float> {
        let mut acc = Float::with_val(bits + 16, 0);
        if j == 1 {
            // L(1) = -(1/d) sum_m a_m psi(m/d) when sum_m a_m = 0
            for (i, c) in coeffs.iter().enumerate() {
                if *c != 0 {
                    let x = Float::with_val(bits + 16, &Rational::from((i as u32 + 1, d)));
                    acc -= digamma_float(&x, bits + 16)? * c;
                }
            }
            return Ok(Float::with_val(bits, acc / d));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if *c != 0 {
                acc += zeta_m(j, i as u32 + 1, d, prec)? * c;
            }
        }
        Ok(Float::with_val(bits, acc))
    };
    if j == 0 {
        return Err(Error::Domain("L(j) needs j >= 1".into()));
    }
    if j == 1 {
        let sum_re: Rational = series.coeffs_re.iter().sum();
        let sum_im: Rational = series.coeffs_im.iter().flatten().sum();
        if sum_re != 0 || sum_im != 0 {
            return Err(Error::Domain("L(1) diverges: coefficients do not sum to zero over a period".into()));
        }
    }
    let re = part(&series.coeffs_re)?;
    let im = series.coeffs_im.as_deref().map(part).transpose()?;
    Ok(SplitValue { re, im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{agreement_digits, pi};

    fn prec(d: u32) -> PrecisionSpec {
        PrecisionSpec::new(d).unwrap()
    }

    /// Partial sum plus the integral tail bounds; averages the two brackets.
    fn direct_oracle(s: u32, x: f64, terms: u64) -> f64 {
        let mut sum = 0.0;
        for k in 0..terms {
            sum += (k as f64 + x).powi(-(s as i32));
        }
        let y = terms as f64 + x;
        sum + y.powi(1 - s as i32) / (s as f64 - 1.0) + 0.5 * y.powi(-(s as i32))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(13), 0);
    }

    #[test]
    fn hurwitz_known_values() {
        let p = prec(40);
        let z2 = hurwitz_zeta(2, &Rational::from(1), p).unwrap();
        let pi2_6 = Float::with_val(300, pi(300).square_ref()) / 6u32;
        assert!(agreement_digits(&z2, &pi2_6, 80.0) > 40.0);
        let half = hurwitz_zeta(2, &Rational::from((1, 2)), p).unwrap();
        let pi2_2 = Float::with_val(300, pi(300).square_ref()) / 2u32;
        assert!(agreement_digits(&half, &pi2_2, 80.0) > 40.0);
        let z3 = hurwitz_zeta(3, &Rational::from(1), p).unwrap().to_f64();
        assert!((z3 - direct_oracle(3, 1.0, 100_000)).abs() < 1e-12);
        assert!((z3 - 1.2020569031595942).abs() < 1e-15);
        assert!(hurwitz_zeta(2, &Rational::from(0), p).is_err());
    }

    #[test]
    fn hurwitz_large_argument_and_order() {
        let p = prec(30);
        for (s, x) in [(40u32, 37.5f64), (7, 123.25), (60, 300.0)] {
            let v = hurwitz_zeta_float(s, &Float::with_val(200, x), p.bits()).unwrap();
            let w = hurwitz_zeta_float(s, &Float::with_val(400, x), p.doubled().bits()).unwrap();
            assert!(agreement_digits(&Float::with_val(400, &v / &w), &Float::with_val(400, 1), 80.0) > 30.0);
            let o = direct_oracle(s, x, 20_000);
            assert!(((v.to_f64() - o) / o).abs() < 1e-9, "s={s} x={x}");
        }
    }

    #[test]
    fn zeta_m_values() {
        let p = prec(30);
        let a = zeta_m(2, 1, 2, p).unwrap().to_f64();
        assert!((a - 1.2337005501361697).abs() < 1e-14);
        let b = zeta_m(2, 2, 2, p).unwrap().to_f64();
        assert!((b - std::f64::consts::PI.powi(2) / 24.0).abs() < 1e-14);
        assert!(zeta_m(1, 1, 2, p).is_err());
    }

    #[test]
    fn digamma_values() {
        let g = digamma_float(&Float::with_val(200, 1), 200).unwrap().to_f64();
        assert!((g + 0.5772156649015329).abs() < 1e-15);
        let h = digamma_float(&Float::with_val(200, 0.5), 200).unwrap().to_f64();
        assert!((h + 0.5772156649015329 + 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn l_values_of_characters() {
        let p = prec(30);
        let chi4 = PeriodicSeries::chi4();
        let l1 = l_value(&chi4, 1, p).unwrap().re;
        let pi4 = pi(300) / 4u32;
        assert!(agreement_digits(&l1, &pi4, 80.0) > 30.0);
        let l3 = l_value(&chi4, 3, p).unwrap().re;
        let pi3 = Float::with_val(300, pi(300).pow(3u32)) / 32u32;
        assert!(agreement_digits(&l3, &pi3, 80.0) > 30.0);
        let chi3 = PeriodicSeries::chi3();
        let l1 = l_value(&chi3, 1, p).unwrap().re;
        let want = pi(300) / Float::with_val(300, 27).sqrt();
        assert!(agreement_digits(&l1, &want, 80.0) > 30.0);
        assert!(l_value(&PeriodicSeries::zeta(), 1, p).is_err());
    }
}

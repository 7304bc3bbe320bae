//! `b_λ = sum_m (-1)^m a_m e^(i m λ π/d)` and the dominant frequency `λ0`.

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::precision::{pow10, PrecisionSpec};
use crate::series::PeriodicSeries;

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub d: u32,
    /// `(λ, b_λ)` for `λ = -d, -d+2, ..., d`.
    pub values: Vec<(i64, Complex)>,
    /// Exact vanishing of each `b_λ`, same order as `values`.
    pub exact_zero: Vec<bool>,
    pub lambda0: u32,
}

impl SpectralData {
    pub fn get(&self, lambda: i64) -> Option<&Complex> {
        self.values.iter().find(|(l, _)| *l == lambda).map(|(_, v)| v)
    }

    pub fn is_zero(&self, lambda: i64) -> bool {
        self.values
            .iter()
            .zip(&self.exact_zero)
            .find(|((l, _), _)| *l == lambda)
            .is_some_and(|(_, z)| *z)
    }
}

/// `Φ_n` with integer coefficients, lowest degree first.
pub(crate) fn cyclotomic(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_k for every proper divisor k
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for k in 1..n {
        if n.is_multiple_of(k) {
            num = div_exact(&num, &cyclotomic(k));
        }
    }
    num
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&v| v == 0));
    q
}

/// Remainder of a rational polynomial modulo a monic integer polynomial.
fn reduce_mod(mut p: Vec<Rational>, m: &[i64]) -> Vec<Rational> {
    let dm = m.len() - 1;
    while p.len() > dm {
        let c = p.pop().expect("nonempty");
        if c == 0 {
            continue;
        }
        let shift = p.len() - dm;
        for (j, &mj) in m.iter().take(dm).enumerate() {
            p[shift + j] -= Rational::from(&c * mj);
        }
    }
    p
}

/// `b_λ` for real-coefficient series, with exact zero detection in `Q(e^(iπ/d))`.
pub fn b_lambdas(series: &PeriodicSeries, prec: PrecisionSpec) -> Result<SpectralData> {
    series.require_real()?;
    let d = series.d;
    let bits = prec.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let phi = cyclotomic(2 * d);
    let two_d = 2 * d as i64;
    let mut values = Vec::new();
    let mut exact_zero = Vec::new();
    let tol = pow10(bits, -(prec.digits as i32 - 5));
    let mut lambda = -(d as i64);
    while lambda <= d as i64 {
        let half = lambda.unsigned_abs() == d as u64;
        let mut poly = vec![Rational::new(); 2 * d as usize];
        let mut num = Complex::with_val(bits, (0, 0));
        for m in 1..=d as i64 {
            let mut c = series.coeff(m as u32).clone();
            if m % 2 == 1 {
                c = -c;
            }
            if half {
                c /= 2;
            }
            if c == 0 {
                continue;
            }
            let e = (m * lambda).rem_euclid(two_d);
            poly[e as usize] += &c;
            let angle = Float::with_val(bits, &pi * (m * lambda)) / d;
            let unit = Complex::with_val(bits, (angle.clone().cos(), angle.sin()));
            num += unit * Float::with_val(bits, &c);
        }
        let reduced = reduce_mod(poly, &phi);
        let is_zero = reduced.iter().all(|c| *c == 0);
        let modulus = Complex::with_val(bits, num.abs_ref()).real().clone();
        if is_zero != (modulus < tol) {
            return Err(Error::Inconsistent(format!(
                "b_{lambda}: exact zero test says {is_zero}, numeric modulus {}",
                modulus.to_f64()
            )));
        }
        values.push((lambda, num));
        exact_zero.push(is_zero);
        lambda += 2;
    }
    let lambda0 = values
        .iter()
        .zip(&exact_zero)
        .filter(|((l, _), z)| *l >= 0 && !**z)
        .map(|((l, _), _)| *l as u32)
        .max()
        .ok_or_else(|| Error::Inconsistent("all b_lambda vanish for a nonzero series".into()))?;
    Ok(SpectralData { d, values, exact_zero, lambda0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PrecisionSpec {
        PrecisionSpec::new(30).unwrap()
    }

    fn close(z: &Complex, re: f64, im: f64) -> bool {
        (z.real().to_f64() - re).abs() < 1e-25 && (z.imag().to_f64() - im).abs() < 1e-25
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_spectrum() {
        let s = b_lambdas(&PeriodicSeries::zeta(), p()).unwrap();
        assert!(close(s.get(1).unwrap(), 0.5, 0.0));
        assert_eq!(s.lambda0, 1);
    }

    #[test]
    fn chi4_spectrum() {
        let s = b_lambdas(&PeriodicSeries::chi4(), p()).unwrap();
        assert!(s.is_zero(4) && s.is_zero(-4) && s.is_zero(0));
        assert!(close(s.get(2).unwrap(), 0.0, -2.0));
        assert_eq!(s.lambda0, 2);
    }

    #[test]
    fn chi3_spectrum() {
        let s = b_lambdas(&PeriodicSeries::chi3(), p()).unwrap();
        assert!(s.is_zero(3));
        assert!(close(s.get(1).unwrap(), 0.0, -3f64.sqrt()));
        assert_eq!(s.lambda0, 1);
    }

    #[test]
    fn conjugate_symmetry() {
        for s in [PeriodicSeries::chi5(), PeriodicSeries::real(6, &[1, 2, -3, 0, 5, -1], "x").unwrap()] {
            let sp = b_lambdas(&s, p()).unwrap();
            for (l, v) in &sp.values {
                let w = sp.get(-l).unwrap();
                assert!(close(&Complex::with_val(200, v - w.clone().conj()), 0.0, 0.0));
            }
            let top = sp.get(s.d as i64).unwrap();
            assert!(top.imag().to_f64().abs() < 1e-25);
        }
    }

    #[test]
    fn complex_series_rejected() {
        let s = PeriodicSeries::from_json_str(r#"{"d":1,"coeffs_re":["1"],"coeffs_im":["1"],"label":"c"}"#).unwrap();
        assert!(matches!(b_lambdas(&s, p()), Err(Error::NotReal)));
    }
}

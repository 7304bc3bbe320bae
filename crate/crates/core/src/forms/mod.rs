//! Exact construction of the rational function `P_n(t)`, its partial-fraction
//! table and the coefficients of the resulting linear form.
//!
//! Everything in this module is exact rational arithmetic.

mod checks;
mod coeffs;
mod partial;

pub use checks::{growth_bound, growth_report, integrality_check, GrowthReport, GrowthRow, IntegralityReport};
pub use coeffs::{linear_form_coeffs, LinearFormCoeffs};
pub use partial::{partial_fractions, PartialFractionTable};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(d, a, b, n)` of one linear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormParams {
    pub d: u32,
    pub a: u32,
    pub b: u32,
    pub n: u32,
}

impl FormParams {
    pub fn new(d: u32, a: u32, b: u32, n: u32) -> Result<Self> {
        if d < 1 || b < 1 || n < 1 {
            return Err(Error::InvalidParams(format!("need d, b, n >= 1 (got d={d}, b={b}, n={n})")));
        }
        if a < 2 {
            return Err(Error::InvalidParams(format!("need a >= 2 (got {a})")));
        }
        if a < 2 * b {
            return Err(Error::InvalidParams(format!("need a >= 2b (got a={a}, b={b})")));
        }
        Ok(Self { d, a, b, n })
    }

    /// Same `(d, a, b)` with a different index `n`.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(self.d, self.a, self.b, n)
    }

    /// `r = (d + 2b) / d`.
    pub fn r(&self) -> Rational {
        Rational::from((self.d + 2 * self.b, self.d))
    }

    /// `R = (a + d) / d`.
    pub fn big_r(&self) -> Rational {
        Rational::from((self.a + self.d, self.d))
    }

    /// `2(a - 2b)n + a`, the excess of denominator over numerator degree.
    pub fn degree_gap(&self) -> u64 {
        2 * (self.a as u64 - 2 * self.b as u64) * self.n as u64 + self.a as u64
    }
}

/// `P_n(t) = scalar * prod (t - z) / prod_{|l| <= n} (t - d l)^a` in factored form.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunctionRep {
    pub params: FormParams,
    /// `±l` for `dn < l <= (d + 2b) n`, ascending.
    pub numerator_zeros: Vec<i64>,
    /// `(d l, multiplicity a)` for `l = -n..=n`.
    pub poles: Vec<(i64, u32)>,
    /// `((2n)!)^(a - 2b) * d^(2na)`.
    pub scalar: Integer,
}

impl RationalFunctionRep {
    pub fn numerator_degree(&self) -> u64 {
        self.numerator_zeros.len() as u64
    }

    pub fn denominator_degree(&self) -> u64 {
        self.poles.iter().map(|&(_, m)| m as u64).sum()
    }

    pub fn degree_gap(&self) -> u64 {
        self.denominator_degree() - self.numerator_degree()
    }

    pub fn is_pole(&self, t: &Rational) -> bool {
        t.denom() == &1 && self.poles.iter().any(|&(p, _)| *t.numer() == p)
    }
}

/// `lcm{1, ..., n}` as a product of maximal prime powers.
pub fn lcm_upto(n: u64) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Domain("lcm_upto needs N >= 1".into()));
    }
    let mut out = Integer::from(1);
    for p in primes_upto(n) {
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        out *= pk;
    }
    Ok(out)
}

pub(crate) fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn build_p(params: FormParams) -> RationalFunctionRep {
    let FormParams { d, a, b, n } = params;
    let (d64, n64) = (d as i64, n as i64);
    let lo = d64 * n64;
    let hi = (d64 + 2 * b as i64) * n64;
    let mut numerator_zeros: Vec<i64> = ((lo + 1)..=hi).flat_map(|l| [-l, l]).collect();
    numerator_zeros.sort_unstable();
    let poles = (-n64..=n64).map(|l| (d64 * l, a)).collect();
    let fact = Integer::from(Integer::factorial(2 * n));
    let scalar = fact.pow(a - 2 * b) * Integer::from(d).pow(2 * n * a);
    RationalFunctionRep { params, numerator_zeros, poles, scalar }
}

/// Exact value of `P(t)` from the factored form.
pub fn eval_p_exact(rep: &RationalFunctionRep, t: &Rational) -> Result<Rational> {
    if rep.is_pole(t) {
        return Err(Error::Pole(t.to_string()));
    }
    let mut num = Rational::from(&rep.scalar);
    for &z in &rep.numerator_zeros {
        num *= Rational::from(t - z);
    }
    let mut den = Rational::from(1);
    for &(p, m) in &rep.poles {
        den *= Rational::from(t - p).pow(m as i32);
    }
    Ok(num / den)
}

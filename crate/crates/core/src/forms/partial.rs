use rug::ops::Pow;
use rug::{Integer, Rational};

use super::{FormParams, RationalFunctionRep};
use crate::error::{Error, Result};

/// Coefficients `A_{l,j}` of `P(t) = sum_{l,j} A_{l,j} / (t - d l)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionTable {
    pub params: FormParams,
    /// Row-major, `(l + n) * a + (j - 1)`.
    entries: Vec<Rational>,
}

impl PartialFractionTable {
    pub fn get(&self, l: i64, j: u32) -> &Rational {
        let FormParams { a, n, .. } = self.params;
        assert!(l.unsigned_abs() <= n as u64 && (1..=a).contains(&j), "index out of range");
        &self.entries[(l + n as i64) as usize * a as usize + (j - 1) as usize]
    }

    /// `(l, j, A_{l,j})` for all entries.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u32, &Rational)> + '_ {
        let a = self.params.a as usize;
        let n = self.params.n as i64;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, v)| ((i / a) as i64 - n, (i % a) as u32 + 1, v))
    }

    pub fn sum_over_l(&self, j: u32) -> Rational {
        let n = self.params.n as i64;
        let mut s = Rational::new();
        for l in -n..=n {
            s += self.get(l, j);
        }
        s
    }

    /// `A_{-l,j} = (-1)^(a-j) A_{l,j}` for every entry.
    pub fn reflection_holds(&self) -> bool {
        let FormParams { a, n, .. } = self.params;
        (1..=n as i64).all(|l| {
            (1..=a).all(|j| {
                let v = self.get(l, j);
                let w = self.get(-l, j);
                if (a - j) % 2 == 0 {
                    v == w
                } else {
                    *v == Rational::from(-w)
                }
            })
        })
    }

    /// Evaluate the partial-fraction expansion at a non-pole `t`.
    pub fn evaluate(&self, t: &Rational) -> Result<Rational> {
        let d = self.params.d as i64;
        let mut s = Rational::new();
        let mut last_l = None;
        let mut inv = Rational::new();
        let mut pow = Rational::new();
        for (l, j, v) in self.iter() {
            if last_l != Some(l) {
                let diff = Rational::from(t - d * l);
                if diff == 0 {
                    return Err(Error::Pole(t.to_string()));
                }
                inv = diff.recip();
                pow = Rational::from(1);
                last_l = Some(l);
            }
            pow *= &inv;
            debug_assert!(j >= 1);
            s += Rational::from(v * &pow);
        }
        Ok(s)
    }
}

/// Truncated power series in `eps` with `len` terms.
fn mul_linear(series: &mut [Rational], c: &Integer) {
    for i in (0..series.len()).rev() {
        let mut v = Rational::from(&series[i] * c);
        if i > 0 {
            v += &series[i - 1];
        }
        series[i] = v;
    }
}

fn mul_series(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let len = x.len();
    let mut out = vec![Rational::new(); len];
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (k, yk) in y.iter().take(len - i).enumerate() {
            out[i + k] += Rational::from(xi * yk);
        }
    }
    out
}

/// Series of `(c + eps)^(-a)`: `sum_i (-1)^i C(a+i-1, i) c^(-a-i) eps^i`.
fn inverse_power_series(c: &Integer, a: u32, len: usize) -> Vec<Rational> {
    let cinv = Rational::from((Integer::from(1), c.clone()));
    let mut term = cinv.clone().pow(a as i32);
    let mut out = Vec::with_capacity(len);
    for i in 0..len as u32 {
        out.push(term.clone());
        // next: multiply by -(a + i) / ((i + 1) c)
        term *= &cinv;
        term *= Rational::from((-(Integer::from(a + i)), Integer::from(i + 1)));
    }
    out
}

/// Compute `A_{l,j}` for all `|l| <= n`, `1 <= j <= a`.
///
/// `A_{l,j}` is the coefficient of `eps^(a-j)` in `P(d l + eps) eps^a`.
pub fn partial_fractions(rep: &RationalFunctionRep) -> PartialFractionTable {
    let FormParams { d, a, n, .. } = rep.params;
    let (d, n) = (d as i64, n as i64);
    let len = a as usize;
    let mut entries = Vec::with_capacity((2 * n as usize + 1) * len);
    for l in -n..=n {
        let mut num = vec![Rational::new(); len];
        num[0] = Rational::from(&rep.scalar);
        for &z in &rep.numerator_zeros {
            mul_linear(&mut num, &Integer::from(d * l - z));
        }
        let mut acc = num;
        for k in -n..=n {
            if k == l {
                continue;
            }
            let inv = inverse_power_series(&Integer::from(d * (l - k)), a, len);
            acc = mul_series(&acc, &inv);
        }
        // coefficient of eps^(a-j) for j = 1..=a
        for j in 1..=a {
            entries.push(acc[(a - j) as usize].clone());
        }
    }
    PartialFractionTable { params: rep.params, entries }
}

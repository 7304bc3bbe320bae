use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::{FormParams, LinearFormCoeffs, PartialFractionTable};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralityReport {
    pub passed: bool,
    /// Number of quantities tested.
    pub checked: usize,
    pub first_failure: Option<String>,
}

/// Checks `D^(a-j) A_{l,j}`, `D^a A_j` and `D^a B_m` are integers.
pub fn integrality_check(table: &PartialFractionTable, coeffs: &LinearFormCoeffs) -> IntegralityReport {
    let a = table.params.a;
    let lcm = &coeffs.lcm;
    let powers: Vec<Integer> = (0..=a).map(|e| Integer::from(lcm.pow(e))).collect();
    let mut checked = 0;
    let mut first_failure = None;
    let mut note = |ok: bool, what: String| {
        checked += 1;
        if !ok && first_failure.is_none() {
            first_failure = Some(what);
        }
    };
    for (l, j, v) in table.iter() {
        let s = Rational::from(v * &powers[(a - j) as usize]);
        note(s.denom() == &1, format!("D^{}*A[{l},{j}] = {s}", a - j));
    }
    for j in 1..=a {
        let s = coeffs.a_coeff(j) * &powers[a as usize];
        note(s.denom() == &1, format!("D^{a}*A_{j} = {s}"));
    }
    for (m, s) in coeffs.scaled_b().iter().enumerate() {
        note(s.denom() == &1, format!("D^{a}*B_{} = {s}", m + 1));
    }
    IntegralityReport { passed: first_failure.is_none(), checked, first_failure }
}

/// `2a log 2 + 4(b+d) log(b+d) - 4d log d`.
pub fn growth_bound(d: u32, a: u32, b: u32) -> f64 {
    let (d, a, b) = (d as f64, a as f64, b as f64);
    2.0 * a * std::f64::consts::LN_2 + 4.0 * (b + d) * (b + d).ln() - 4.0 * d * d.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: u32,
    /// `log max(|A_j|, |B_m|) / n`.
    pub ratio: f64,
    pub exceeds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub bound: f64,
    pub slack: f64,
    pub rows: Vec<GrowthRow>,
    pub passed: bool,
}

fn ln_abs(q: &Rational) -> Option<f64> {
    if *q == 0 {
        return None;
    }
    let f = Float::with_val(128, q).abs();
    Some(f.ln().to_f64())
}

/// Measured coefficient growth against the bound, flagging rows above `bound + 1`.
pub fn growth_report(coeffs_by_n: &[LinearFormCoeffs]) -> GrowthReport {
    const SLACK: f64 = 1.0;
    let bound = coeffs_by_n
        .first()
        .map(|c| {
            let FormParams { d, a, b, .. } = c.params;
            growth_bound(d, a, b)
        })
        .unwrap_or(f64::NAN);
    let rows: Vec<GrowthRow> = coeffs_by_n
        .iter()
        .map(|c| {
            let n = c.params.n;
            let max_log = c
                .a_all
                .iter()
                .chain(c.b.iter())
                .filter_map(ln_abs)
                .fold(f64::NEG_INFINITY, f64::max);
            let ratio = max_log / n as f64;
            GrowthRow { n, ratio, exceeds: ratio > bound + SLACK }
        })
        .collect();
    let passed = rows.iter().all(|r| !r.exceeds);
    GrowthReport { bound, slack: SLACK, rows, passed }
}

#[cfg(test)]
mod tests {
    use super::super::{build_p, linear_form_coeffs, partial_fractions};
    use super::*;

    fn coeffs(d: u32, a: u32, b: u32, n: u32) -> (PartialFractionTable, LinearFormCoeffs) {
        let t = partial_fractions(&build_p(FormParams::new(d, a, b, n).unwrap()));
        let c = linear_form_coeffs(&t);
        (t, c)
    }

    #[test]
    fn worked_example_integrality() {
        let (t, c) = coeffs(1, 2, 1, 1);
        let rep = integrality_check(&t, &c);
        assert!(rep.passed);
        assert_eq!(rep.checked, 6 + 2 + 1);
        assert_eq!(Rational::from(t.get(1, 1) * &c.lcm), -47);
    }

    #[test]
    fn growth_worked_example() {
        assert!((growth_bound(1, 2, 1) - 12.0 * std::f64::consts::LN_2).abs() < 1e-12);
        let (_, c) = coeffs(1, 2, 1, 1);
        let rep = growth_report(&[c]);
        assert!((rep.rows[0].ratio - (315.0f64 / 4.0).ln()).abs() < 1e-12);
        assert!(rep.passed);
    }
}

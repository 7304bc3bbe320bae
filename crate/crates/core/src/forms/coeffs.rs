use rug::ops::Pow;
use rug::{Integer, Rational};

use super::{lcm_upto, FormParams, PartialFractionTable};

/// Coefficients of `I = sum_j A_j zeta-part(j) - sum_m a_m B_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormCoeffs {
    pub params: FormParams,
    /// `A_j = sum_l A_{l,j}` for `j = 1..=a` (index `j - 1`), including the vanishing ones.
    pub a_all: Vec<Rational>,
    /// `B_m` for `m = 1..=d` (index `m - 1`).
    pub b: Vec<Rational>,
    /// `lcm{1, ..., 2dn}`.
    pub lcm: Integer,
}

impl LinearFormCoeffs {
    /// `A_j`, zero outside `1..=a`.
    pub fn a_coeff(&self, j: u32) -> Rational {
        if j == 0 || j as usize > self.a_all.len() {
            Rational::new()
        } else {
            self.a_all[j as usize - 1].clone()
        }
    }

    /// Exponents `j` with `2 <= j <= a`, `j ≡ a (mod 2)`, where `A_j` may be nonzero.
    pub fn active_exponents(&self) -> Vec<u32> {
        let a = self.params.a;
        (2..=a).filter(|j| (a - j).is_multiple_of(2)).collect()
    }

    pub fn scale(&self) -> Integer {
        Integer::from((&self.lcm).pow(self.params.a))
    }

    /// `lcm^a * A_j` for the active exponents.
    pub fn scaled_a(&self) -> Vec<(u32, Rational)> {
        let s = self.scale();
        self.active_exponents()
            .into_iter()
            .map(|j| (j, self.a_coeff(j) * &s))
            .collect()
    }

    /// `lcm^a * B_m` for `m = 1..=d`.
    pub fn scaled_b(&self) -> Vec<Rational> {
        let s = self.scale();
        self.b.iter().map(|v| Rational::from(v * &s)).collect()
    }
}

pub fn linear_form_coeffs(table: &PartialFractionTable) -> LinearFormCoeffs {
    let params = table.params;
    let FormParams { d, a, n, .. } = params;
    let a_all: Vec<Rational> = (1..=a).map(|j| table.sum_over_l(j)).collect();

    let n_i = n as i64;
    let kmax = 2 * n as usize;
    let mut b = Vec::with_capacity(d as usize);
    for m in 1..=d as i64 {
        // prefix[j-1][K] = sum_{k<K} 1/(dk+m)^j
        let mut prefix = vec![vec![Rational::new(); kmax + 1]; a as usize];
        for k in 0..kmax {
            let base = Rational::from((1, d as i64 * k as i64 + m));
            let mut pw = Rational::from(1);
            for row in prefix.iter_mut() {
                pw *= &base;
                let next = Rational::from(&row[k] + &pw);
                row[k + 1] = next;
            }
        }
        let mut s = Rational::new();
        for l in -n_i..n_i {
            let upto = (n_i - l) as usize;
            for j in 1..=a {
                let v = table.get(l, j);
                if *v != 0 {
                    s += Rational::from(v * &prefix[j as usize - 1][upto]);
                }
            }
        }
        b.push(s);
    }
    let lcm = lcm_upto(2 * d as u64 * n as u64).expect("2dn >= 2");
    LinearFormCoeffs { params, a_all, b, lcm }
}

#[cfg(test)]
mod tests {
    use super::super::{build_p, partial_fractions};
    use super::*;

    #[test]
    fn worked_example_coefficients() {
        let p = FormParams::new(1, 2, 1, 1).unwrap();
        let c = linear_form_coeffs(&partial_fractions(&build_p(p)));
        assert_eq!(c.a_coeff(2), 48);
        assert_eq!(c.a_coeff(1), 0);
        assert_eq!(c.b, vec![Rational::from((315, 4))]);
        assert_eq!(c.lcm, 2);
        assert_eq!(c.scaled_a(), vec![(2, Rational::from(192))]);
        assert_eq!(c.scaled_b(), vec![Rational::from(315)]);
        assert_eq!(c.active_exponents(), vec![2]);
    }

    #[test]
    fn parity_vanishing() {
        for (d, a, b, n) in [(1, 5, 1, 2), (2, 4, 1, 2), (3, 6, 2, 1), (4, 3, 1, 1)] {
            let p = FormParams::new(d, a, b, n).unwrap();
            let c = linear_form_coeffs(&partial_fractions(&build_p(p)));
            assert_eq!(c.a_coeff(1), 0);
            for j in 1..=a {
                if (a - j) % 2 == 1 {
                    assert_eq!(c.a_coeff(j), 0, "j={j} for {p:?}");
                }
            }
        }
    }
}

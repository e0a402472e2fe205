//! Small statistics kit for the experiment summaries.

use serde::Serialize;

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 in the denominator); 0 for fewer than two values.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

pub fn std_error(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    sample_sd(xs) / (xs.len() as f64).sqrt()
}

/// Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("incomplete beta undefined for a={a}, b={b}, x={x}")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x) / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x) / b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

/// Two-sided paired t-test of `a` against `b`.
///
/// Identical samples give `t = 0, p = 1`; a constant nonzero difference
/// gives an infinite statistic and `p = 0`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("paired samples of sizes {} and {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::Domain("paired t-test needs at least two pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let df = (d.len() - 1) as f64;
    let m = mean(&d);
    let sd = sample_sd(&d);
    if sd == 0.0 {
        return Ok(if m == 0.0 {
            TTest { t: 0.0, df, p_value: 1.0 }
        } else {
            TTest { t: m.signum() * f64::INFINITY, df, p_value: 0.0 }
        });
    }
    let t = m / (sd / (d.len() as f64).sqrt());
    let p = incomplete_beta(df / 2.0, 0.5, df / (df + t * t))?;
    Ok(TTest { t, df, p_value: p.clamp(0.0, 1.0) })
}

/// One-sided sign test that `a` tends to exceed `b`; ties are dropped.
///
/// Returns `P(X >= wins)` for `X ~ Binomial(n, 1/2)`, `n` the untied pairs.
pub fn sign_test_greater(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("paired samples of sizes {} and {}", a.len(), b.len())));
    }
    let wins = a.iter().zip(b).filter(|(x, y)| x > y).count();
    let losses = a.iter().zip(b).filter(|(x, y)| x < y).count();
    Ok(binomial_upper_tail(wins + losses, wins))
}

/// `P(X >= k)` for `X ~ Binomial(n, 1/2)`.
pub fn binomial_upper_tail(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ln_half_n = n as f64 * 0.5f64.ln();
    let ln_choose = |i: usize| ln_gamma(n as f64 + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma((n - i) as f64 + 1.0);
    (k..=n).map(|i| (ln_choose(i) + ln_half_n).exp()).sum::<f64>().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_at_integers() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-10, "n={n}");
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        for x in [0.1, 0.3, 0.77] {
            assert!((incomplete_beta(1.0, 1.0, x).unwrap() - x).abs() < 1e-12);
            assert!((incomplete_beta(2.0, 1.0, x).unwrap() - x * x).abs() < 1e-12);
            let sym = incomplete_beta(2.5, 3.5, x).unwrap() + incomplete_beta(3.5, 2.5, 1.0 - x).unwrap();
            assert!((sym - 1.0).abs() < 1e-12);
        }
        assert!(incomplete_beta(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn degenerate_t_tests() {
        let a = [0.3, 0.5, 0.9];
        assert_eq!(paired_t_test(&a, &a).unwrap().p_value, 1.0);
        let b: Vec<f64> = a.iter().map(|x| x - 0.1).collect();
        let r = paired_t_test(&a, &b).unwrap();
        assert!(r.p_value < 0.05 && r.t > 0.0);
        assert!(paired_t_test(&a[..1], &b[..1]).is_err());
    }

    #[test]
    fn t_test_with_two_pairs_matches_cauchy_tail() {
        // one degree of freedom: p = 1 - (2/pi) atan|t|
        let r = paired_t_test(&[1.0, 2.0], &[0.0, 0.5]).unwrap();
        let expect = 1.0 - 2.0 / std::f64::consts::PI * r.t.abs().atan();
        assert!((r.p_value - expect).abs() < 1e-12);
    }

    #[test]
    fn sign_test_tails() {
        assert!((binomial_upper_tail(10, 10) - 1.0 / 1024.0).abs() < 1e-15);
        assert!((binomial_upper_tail(4, 2) - 11.0 / 16.0).abs() < 1e-12);
        assert_eq!(sign_test_greater(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 1.0);
        let p = sign_test_greater(&[1.0; 6], &[0.0; 6]).unwrap();
        assert!((p - 1.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn standard_error_uses_sample_deviation() {
        assert!((std_error(&[0.0, 1.0]) - 0.5).abs() < 1e-12);
        assert_eq!(std_error(&[0.4]), 0.0);
    }
}

use ehba::harness::stats::{binomial_upper_tail, incomplete_beta, ln_gamma, paired_t_test};
use ehba::rng::seeded;
use rand::Rng;
use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, StudentsT};
use statrs::function::{beta::beta_reg, gamma::ln_gamma as sr_ln_gamma};

#[test]
fn special_functions_agree_with_statrs() {
    let mut rng = seeded(41);
    for _ in 0..500 {
        let a = rng.gen_range(0.1..40.0);
        let b = rng.gen_range(0.1..40.0);
        let x = rng.gen::<f64>();
        let ours = incomplete_beta(a, b, x).unwrap();
        assert!((ours - beta_reg(a, b, x)).abs() < 1e-10, "I_{x}({a},{b})");
        assert!((ln_gamma(a) - sr_ln_gamma(a)).abs() < 1e-10 * sr_ln_gamma(a).abs().max(1.0));
    }
}

#[test]
fn paired_t_p_values_agree_with_students_t() {
    let mut rng = seeded(42);
    for _ in 0..200 {
        let n = rng.gen_range(2..40);
        let shift = rng.gen_range(-0.3..0.3);
        let a: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let b: Vec<f64> = a.iter().map(|x| x + shift + rng.gen_range(-0.2..0.2)).collect();
        let r = paired_t_test(&a, &b).unwrap();
        let dist = StudentsT::new(0.0, 1.0, r.df).unwrap();
        let p = 2.0 * (1.0 - dist.cdf(r.t.abs()));
        assert!((r.p_value - p).abs() < 1e-8, "{} vs {p}", r.p_value);
    }
}

#[test]
fn sign_test_tail_agrees_with_the_binomial() {
    for n in 1..60u64 {
        let d = Binomial::new(0.5, n).unwrap();
        for k in 1..=n {
            let want = 1.0 - d.cdf(k - 1);
            assert!((binomial_upper_tail(n as usize, k as usize) - want).abs() < 1e-10);
        }
    }
}

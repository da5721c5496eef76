use degchain_core::{log_gamma, log_gamma_ratio};
use proptest::prelude::*;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8;

/// ζ(2n) by direct summation plus an integral tail.
fn zeta_even(n: u32) -> f64 {
    if n == 1 {
        return std::f64::consts::PI.powi(2) / 6.0;
    }
    let s = 2.0 * n as f64;
    let terms = 2_000u32;
    let mut acc = 0.0;
    for j in (1..=terms).rev() {
        acc += (j as f64).powf(-s);
    }
    acc + (terms as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
}

/// Independent log-gamma: 50-term Stirling series at x + 20, coefficients
/// from B_2n = (-1)^(n+1) 2 (2n)! ζ(2n) / (2π)^(2n), shifted back down.
fn ln_gamma_oracle(x: f64) -> f64 {
    let y = x + 20.0;
    let mut series = 0.0;
    let two_pi_ln = (2.0 * std::f64::consts::PI).ln();
    // ln((2n-2)!) accumulated as n grows
    let mut ln_fact = 0.0f64;
    for n in 1..=50u32 {
        if n >= 2 {
            ln_fact += ((2 * n - 3) as f64).ln() + ((2 * n - 2) as f64).ln();
        }
        // B_2n / (2n (2n-1) y^(2n-1)) = (-1)^(n+1) 2 (2n-2)! ζ(2n) / ((2π)^(2n) y^(2n-1))
        let log_mag = std::f64::consts::LN_2 + ln_fact
            - 2.0 * n as f64 * two_pi_ln
            - (2 * n - 1) as f64 * y.ln();
        let term = zeta_even(n) * log_mag.exp();
        series += if n % 2 == 1 { term } else { -term };
    }
    let big = (y - 0.5) * y.ln() - y + LN_2PI_HALF + series;
    let shift: f64 = (0..20).map(|i| (x + i as f64).ln()).sum();
    big - shift
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn matches_long_stirling_oracle() {
    let mut x = 0.05;
    while x < 2e5 {
        let got = log_gamma(x).unwrap();
        let want = ln_gamma_oracle(x);
        assert!(close(got, want, 1e-13), "x = {x}: {got} vs {want}");
        x *= 1.37;
    }
}

#[test]
fn matches_statrs() {
    for i in 1..=4000 {
        let x = i as f64 * 0.0375;
        let got = log_gamma(x).unwrap();
        let want = statrs::function::gamma::ln_gamma(x);
        assert!(close(got, want, 1e-12), "x = {x}: {got} vs {want}");
    }
}

#[test]
fn ratio_matches_oracle_difference_at_moderate_arguments() {
    for &(x, d) in &[
        (0.5, 3.0),
        (1.25, 2.5),
        (12.0, 1.5),
        (300.7, 4.0),
        (5e3, 3.0),
    ] {
        let got = log_gamma_ratio(x, d).unwrap();
        let want = ln_gamma_oracle(x) - ln_gamma_oracle(x + d);
        assert!(
            (got - want).abs() <= 1e-11 * want.abs().max(1.0),
            "{x}, {d}: {got} vs {want}"
        );
    }
}

proptest! {
    #[test]
    fn ratio_telescopes(x in 0.1..1e6f64, d in 0.1..8.0f64) {
        // ln Γ(x)/Γ(x+d) = ln Γ(x)/Γ(x+1) + ln Γ(x+1)/Γ(x+1+d) - ln Γ(x+d)/Γ(x+d+1)
        let lhs = log_gamma_ratio(x, d).unwrap();
        let rhs = -x.ln() + log_gamma_ratio(x + 1.0, d).unwrap() + (x + d).ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn ratio_behaves_like_power(x in 1e3..1e9f64, d in 0.5..6.0f64) {
        // Γ(x)/Γ(x+d) = x^-d (1 + O(1/x))
        let r = log_gamma_ratio(x, d).unwrap() + d * x.ln();
        prop_assert!(r.abs() < d * (d + 1.0) / x);
    }
}

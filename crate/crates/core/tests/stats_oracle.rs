//! Independent numerical oracles for the statistics module: the Student t
//! CDF against adaptive quadrature, and the exact signed-rank distribution
//! against full enumeration of all 2^n sign assignments.

#![allow(clippy::too_many_arguments)]

use pgflab_core::stats::{
    t_cdf, unpaired_t_test, wilcoxon_signed_rank, Sidedness, TTestVariant, TestMethod,
};

// ---------------------------------------------------------------------------
// quadrature oracle
// ---------------------------------------------------------------------------

/// Adaptive Simpson integration.
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= 15.0 * eps {
        split + (split - whole) / 15.0
    } else {
        simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1)
            + simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1)
    }
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    simpson(&f, a, b, fa, fb, fm, eps, 60)
}

/// t CDF by quadrature. The substitution u = sqrt(df) * tan(theta) maps the
/// density's infinite support onto (-pi/2, pi/2) with integrand
/// cos(theta)^(df-1); normalizing by the full integral removes the gamma
/// normalization constant entirely, so this route shares nothing with the
/// incomplete-beta implementation under test.
fn quadrature_t_cdf(t: f64, df: f64) -> f64 {
    let g = |theta: f64| theta.cos().powf(df - 1.0);
    let upper = (t / df.sqrt()).atan();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let numerator = integrate(g, -half_pi, upper, 1e-14);
    let denominator = integrate(g, -half_pi, half_pi, 1e-14);
    numerator / denominator
}

#[test]
fn t_cdf_matches_quadrature_on_a_grid() {
    // 10 df values x 20 t values = 200 grid points
    let dfs = [1.0, 1.5, 2.0, 3.0, 5.0, 9.0, 24.0, 60.0, 120.0, 200.0];
    let ts: Vec<f64> = (0..20).map(|k| -50.0 + k as f64 * (100.0 / 19.0)).collect();
    let mut worst = 0.0f64;
    for &df in &dfs {
        for &t in &ts {
            let implemented = t_cdf(t, df).unwrap();
            let reference = quadrature_t_cdf(t, df);
            let err = (implemented - reference).abs();
            worst = worst.max(err);
            assert!(
                err <= 1e-10,
                "t={t} df={df}: {implemented} vs quadrature {reference} (err {err:.2e})"
            );
        }
    }
    assert!(worst <= 1e-10);
}

#[test]
fn cauchy_closed_form() {
    // df = 1: F(t) = 1/2 + atan(t)/pi
    for t in [-7.0f64, -1.0, 0.0, 0.3, 1.0, 42.0] {
        let expected = 0.5 + t.atan() / std::f64::consts::PI;
        let got = t_cdf(t, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-12, "t={t}: {got} vs {expected}");
    }
}

#[test]
fn welch_p_value_against_quadrature() {
    let a = [2.0f64, 4.0, 6.0];
    let b = [1.0f64, 2.0, 3.0];
    let r = unpaired_t_test(&a, &b, TTestVariant::Welch, Sidedness::TwoSided).unwrap();
    // recompute Welch pieces directly
    let (ma, mb) = (4.0, 2.0);
    let (va, vb) = (4.0, 1.0);
    let se2: f64 = va / 3.0 + vb / 3.0;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / ((va / 3.0f64).powi(2) / 2.0 + (vb / 3.0f64).powi(2) / 2.0);
    let p = 2.0 * (1.0 - quadrature_t_cdf(t.abs(), df));
    assert!((r.statistic - t).abs() < 1e-12);
    assert!((r.p_value - p).abs() < 1e-6, "{} vs {p}", r.p_value);
}

// ---------------------------------------------------------------------------
// signed-rank enumeration oracle
// ---------------------------------------------------------------------------

/// Tail probabilities of W+ for tie-free ranks 1..n by literal enumeration
/// of every sign assignment.
fn enumerate_tail_ge(n: usize, w_obs: usize) -> f64 {
    let mut count = 0u64;
    for mask in 0u64..(1 << n) {
        let w: usize = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).sum();
        if w >= w_obs {
            count += 1;
        }
    }
    count as f64 / (1u64 << n) as f64
}

fn enumerate_tail_le(n: usize, w_obs: usize) -> f64 {
    let mut count = 0u64;
    for mask in 0u64..(1 << n) {
        let w: usize = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).sum();
        if w <= w_obs {
            count += 1;
        }
    }
    count as f64 / (1u64 << n) as f64
}

/// Every tie-free sample of size n realizes some sign mask over ranks
/// 1..n, and the exact p depends only on (n, W+). Sweeping every mask for
/// every n <= 12 therefore covers the whole space.
#[test]
fn exact_p_matches_full_enumeration_for_all_masks_up_to_n_12() {
    for n in 1usize..=12 {
        for mask in 0u64..(1 << n) {
            let samples: Vec<f64> = (1..=n)
                .map(|i| {
                    let sign = if mask >> (i - 1) & 1 == 1 { 1.0 } else { -1.0 };
                    sign * i as f64
                })
                .collect();
            let w_obs: usize = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).sum();

            let greater = wilcoxon_signed_rank(&samples, 0.0, Sidedness::OneSidedGreater).unwrap();
            assert_eq!(greater.method, TestMethod::WilcoxonExact);
            assert_eq!(greater.statistic, w_obs as f64);
            let expected_g = enumerate_tail_ge(n, w_obs);
            assert!(
                (greater.p_value - expected_g).abs() < 1e-12,
                "n={n} mask={mask:b}: greater {} vs {expected_g}",
                greater.p_value
            );

            let less = wilcoxon_signed_rank(&samples, 0.0, Sidedness::OneSidedLess).unwrap();
            let expected_l = enumerate_tail_le(n, w_obs);
            assert!((less.p_value - expected_l).abs() < 1e-12);

            let two = wilcoxon_signed_rank(&samples, 0.0, Sidedness::TwoSided).unwrap();
            let expected_t = (2.0 * expected_g.min(expected_l)).min(1.0);
            assert!((two.p_value - expected_t).abs() < 1e-12);
        }
    }
}

#[test]
fn all_positive_five_sample_case() {
    let r = wilcoxon_signed_rank(
        &[0.2f64, 0.9, 1.4, 2.2, 3.1],
        0.0,
        Sidedness::OneSidedGreater,
    )
    .unwrap();
    assert_eq!(r.method, TestMethod::WilcoxonExact);
    assert!((r.p_value - 1.0 / 32.0).abs() < 1e-15);
}

#[test]
fn location_shift_is_respected() {
    // testing against mu0 shifts the differences, not the samples
    let samples = [5.2f64, 5.9, 6.4, 7.2, 8.1];
    let against_five = wilcoxon_signed_rank(&samples, 5.0, Sidedness::OneSidedGreater).unwrap();
    assert!((against_five.p_value - 1.0 / 32.0).abs() < 1e-15);
}

//! Self-contained statistical primitives: Wilcoxon signed-rank test,
//! unpaired t-test (Welch and pooled), the Student t CDF, and pairwise
//! cosine similarity.
//!
//! The special functions (log-gamma, regularized incomplete beta and
//! gamma) are implemented here directly; nothing in this module depends on
//! an external statistics crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest sample size for which the signed-rank null distribution is
/// evaluated exactly. Above it (or when |differences| tie) the
/// tie-corrected normal approximation is used.
pub const WILCOXON_EXACT_CUTOFF: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    OneSidedGreater,
    OneSidedLess,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    WilcoxonExact,
    WilcoxonNormalApprox,
    WelchT,
    PooledT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TTestVariant {
    Welch,
    Pooled,
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult<S> {
    pub statistic: S,
    pub p_value: S,
    pub sidedness: Sidedness,
    pub method: TestMethod,
    /// (n, None) for one-sample tests, (n_a, Some(n_b)) for two-sample.
    pub sample_sizes: (usize, Option<usize>),
}

// ---------------------------------------------------------------------------
// special functions
// ---------------------------------------------------------------------------

/// Natural log of the gamma function (Lanczos, g = 7).
fn ln_gamma<S: Scalar>(x: S) -> S {
    #[allow(clippy::excessive_precision)]
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let half = S::from_f64_lossy(0.5);
    let one = S::one();
    if x < half {
        // reflection: ln Γ(x) = ln(π / sin(πx)) − ln Γ(1 − x)
        let pi = S::from_f64_lossy(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(one - x);
    }
    let x = x - one;
    #[allow(clippy::excessive_precision)]
    let mut acc = S::from_f64_lossy(0.99999999999980993);
    for (i, &c) in COEFFS.iter().enumerate() {
        acc = acc + S::from_f64_lossy(c) / (x + S::from_count(i + 1));
    }
    let g = S::from_f64_lossy(7.5);
    let t = x + g;
    let sqrt_two_pi = S::from_f64_lossy((2.0 * std::f64::consts::PI).sqrt());
    sqrt_two_pi.ln() + (x + half) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf<S: Scalar>(a: S, b: S, x: S) -> S {
    let one = S::one();
    let two = S::from_f64_lossy(2.0);
    let tiny = S::from_f64_lossy(1e-300);
    let eps = S::epsilon();

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = one / d;
    let mut h = d;
    for m in 1..=300 {
        let mf = S::from_count(m);
        let m2 = two * mf;
        // even step
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        h = h * d * c;
        // odd step
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let del = d * c;
        h = h * del;
        if (del - one).abs() < eps {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
fn reg_inc_beta<S: Scalar>(a: S, b: S, x: S) -> S {
    let one = S::one();
    if x <= S::zero() {
        return S::zero();
    }
    if x >= one {
        return one;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (one - x).ln();
    let front = ln_front.exp();
    let two = S::from_f64_lossy(2.0);
    if x < (a + one) / (a + b + two) {
        front * beta_cf(a, b, x) / a
    } else {
        one - front * beta_cf(b, a, one - x) / b
    }
}

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
fn gamma_q<S: Scalar>(a: S, x: S) -> S {
    let one = S::one();
    if x < S::zero() {
        return one;
    }
    if x == S::zero() {
        return one;
    }
    if x < a + one {
        one - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series<S: Scalar>(a: S, x: S) -> S {
    let eps = S::epsilon();
    let mut ap = a;
    let mut sum = S::one() / a;
    let mut del = sum;
    for _ in 0..500 {
        ap = ap + S::one();
        del = del * x / ap;
        sum = sum + del;
        if del.abs() < sum.abs() * eps {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_cf<S: Scalar>(a: S, x: S) -> S {
    let one = S::one();
    let tiny = S::from_f64_lossy(1e-300);
    let eps = S::epsilon();
    let mut b = x + one - a;
    let mut c = one / tiny;
    let mut d = one / b;
    let mut h = d;
    for i in 1..=500 {
        let an = -S::from_count(i) * (S::from_count(i) - a);
        b = b + S::from_f64_lossy(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let del = d * c;
        h = h * del;
        if (del - one).abs() < eps {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Complementary error function, accurate in both tails.
fn erfc<S: Scalar>(x: S) -> S {
    let half = S::from_f64_lossy(0.5);
    if x >= S::zero() {
        gamma_q(half, x * x)
    } else {
        S::from_f64_lossy(2.0) - gamma_q(half, x * x)
    }
}

/// Standard normal CDF.
fn normal_cdf<S: Scalar>(z: S) -> S {
    let sqrt2 = S::from_f64_lossy(std::f64::consts::SQRT_2);
    S::from_f64_lossy(0.5) * erfc(-z / sqrt2)
}

/// Standard normal survival function P(Z > z).
fn normal_sf<S: Scalar>(z: S) -> S {
    let sqrt2 = S::from_f64_lossy(std::f64::consts::SQRT_2);
    S::from_f64_lossy(0.5) * erfc(z / sqrt2)
}

// ---------------------------------------------------------------------------
// Student t
// ---------------------------------------------------------------------------

/// Student t cumulative distribution function, via the regularized
/// incomplete beta function.
pub fn t_cdf<S: Scalar>(t: S, df: S) -> Result<S> {
    Ok(S::one() - t_sf(t, df)?)
}

/// Student t survival function P(T > t). Exact complement of [`t_cdf`];
/// preferred for small upper-tail probabilities.
pub fn t_sf<S: Scalar>(t: S, df: S) -> Result<S> {
    if df <= S::zero() || df.is_nan() || df.is_infinite() {
        return Err(Error::InvalidDegreesOfFreedom(
            df.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let half = S::from_f64_lossy(0.5);
    if t == S::zero() {
        return Ok(half);
    }
    let x = df / (df + t * t);
    let tail = half * reg_inc_beta(half * df, half, x);
    if t > S::zero() {
        Ok(tail)
    } else {
        Ok(S::one() - tail)
    }
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank
// ---------------------------------------------------------------------------

/// Counts of rank subsets of {1..n} by sum: the exact tie-free null
/// distribution of W+ is counts[w] / 2^n.
fn signed_rank_counts(n: usize) -> Vec<u64> {
    let max = n * (n + 1) / 2;
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for rank in 1..=n {
        for w in (rank..=max).rev() {
            counts[w] += counts[w - rank];
        }
    }
    counts
}

fn exact_signed_rank_p(n: usize, w_obs: usize, sidedness: Sidedness) -> f64 {
    let counts = signed_rank_counts(n);
    let total = (1u64 << n) as f64;
    let tail_ge: u64 = counts[w_obs..].iter().sum();
    let tail_le: u64 = counts[..=w_obs].iter().sum();
    let p_greater = tail_ge as f64 / total;
    let p_less = tail_le as f64 / total;
    match sidedness {
        Sidedness::OneSidedGreater => p_greater,
        Sidedness::OneSidedLess => p_less,
        Sidedness::TwoSided => (2.0 * p_greater.min(p_less)).min(1.0),
    }
}

fn normal_signed_rank_p<S: Scalar>(w: S, n: usize, tie_correction: S, sidedness: Sidedness) -> S {
    let nf = S::from_count(n);
    let one = S::one();
    let mean = nf * (nf + one) / S::from_f64_lossy(4.0);
    let var = nf * (nf + one) * (S::from_f64_lossy(2.0) * nf + one) / S::from_f64_lossy(24.0)
        - tie_correction;
    let sd = var.sqrt();
    let half = S::from_f64_lossy(0.5);
    match sidedness {
        Sidedness::OneSidedGreater => normal_sf((w - mean - half) / sd),
        Sidedness::OneSidedLess => normal_cdf((w - mean + half) / sd),
        Sidedness::TwoSided => {
            let z = ((w - mean).abs() - half).max(S::zero()) / sd;
            (S::from_f64_lossy(2.0) * normal_sf(z)).min(one)
        }
    }
}

/// One-sample Wilcoxon signed-rank test of the location `mu0`.
///
/// Differences equal to zero are dropped. The statistic is W+, the sum of
/// the ranks of positive differences. The p-value is exact (full null
/// distribution over all 2^n sign assignments) when the effective sample
/// is at most [`WILCOXON_EXACT_CUTOFF`] and the |differences| are tie-free;
/// otherwise a tie-corrected, continuity-corrected normal approximation is
/// used, as recorded in `method`.
pub fn wilcoxon_signed_rank<S: Scalar>(
    samples: &[S],
    mu0: S,
    sidedness: Sidedness,
) -> Result<TestResult<S>> {
    let mut diffs: Vec<S> = samples
        .iter()
        .map(|&x| x - mu0)
        .filter(|d| *d != S::zero())
        .collect();
    if diffs.is_empty() {
        return Err(Error::AllZeroDifferences);
    }
    let n = diffs.len();
    diffs.sort_by(|a, b| {
        a.abs()
            .partial_cmp(&b.abs())
            .expect("samples must not contain NaN")
    });

    // average ranks over tie groups and accumulate the tie correction
    let mut ranks = vec![S::zero(); n];
    let mut tie_correction = S::zero();
    let mut has_ties = false;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && diffs[j].abs() == diffs[i].abs() {
            j += 1;
        }
        let group = j - i;
        if group > 1 {
            has_ties = true;
            let t = S::from_count(group);
            tie_correction = tie_correction + (t * t * t - t) / S::from_f64_lossy(48.0);
        }
        let avg_rank = S::from_f64_lossy((i + j + 1) as f64 / 2.0);
        for r in ranks.iter_mut().take(j).skip(i) {
            *r = avg_rank;
        }
        i = j;
    }

    let mut w_plus = S::zero();
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > S::zero() {
            w_plus = w_plus + *r;
        }
    }

    if n <= WILCOXON_EXACT_CUTOFF && !has_ties {
        let w_obs = w_plus.to_f64().expect("rank sum fits f64").round() as usize;
        let p = exact_signed_rank_p(n, w_obs, sidedness);
        Ok(TestResult {
            statistic: w_plus,
            p_value: S::from_f64_lossy(p),
            sidedness,
            method: TestMethod::WilcoxonExact,
            sample_sizes: (n, None),
        })
    } else {
        let p = normal_signed_rank_p(w_plus, n, tie_correction, sidedness);
        Ok(TestResult {
            statistic: w_plus,
            p_value: p,
            sidedness,
            method: TestMethod::WilcoxonNormalApprox,
            sample_sizes: (n, None),
        })
    }
}

// ---------------------------------------------------------------------------
// unpaired t-test
// ---------------------------------------------------------------------------

fn mean_and_var<S: Scalar>(xs: &[S]) -> (S, S) {
    let n = S::from_count(xs.len());
    let mut sum = S::zero();
    for &x in xs {
        sum = sum + x;
    }
    let mean = sum / n;
    let mut ss = S::zero();
    for &x in xs {
        let d = x - mean;
        ss = ss + d * d;
    }
    (mean, ss / (n - S::one()))
}

/// Two-sample t-test for independent groups. Welch (default elsewhere in
/// this crate) does not assume equal variances; Pooled does.
pub fn unpaired_t_test<S: Scalar>(
    a: &[S],
    b: &[S],
    variant: TTestVariant,
    sidedness: Sidedness,
) -> Result<TestResult<S>> {
    let (na, nb) = (a.len(), b.len());
    if na < 2 || nb < 2 {
        return Err(Error::InsufficientSamples(na, nb));
    }
    let (ma, va) = mean_and_var(a);
    let (mb, vb) = mean_and_var(b);
    if va == S::zero() && vb == S::zero() {
        return Err(Error::ZeroVarianceBoth);
    }
    let naf = S::from_count(na);
    let nbf = S::from_count(nb);
    let one = S::one();

    let (t, df, method) = match variant {
        TTestVariant::Welch => {
            let sa = va / naf;
            let sb = vb / nbf;
            let se2 = sa + sb;
            let t = (ma - mb) / se2.sqrt();
            let df = se2 * se2 / (sa * sa / (naf - one) + sb * sb / (nbf - one));
            (t, df, TestMethod::WelchT)
        }
        TTestVariant::Pooled => {
            let df = naf + nbf - S::from_f64_lossy(2.0);
            let sp2 = ((naf - one) * va + (nbf - one) * vb) / df;
            let t = (ma - mb) / (sp2 * (one / naf + one / nbf)).sqrt();
            (t, df, TestMethod::PooledT)
        }
    };

    let p = match sidedness {
        Sidedness::OneSidedGreater => t_sf(t, df)?,
        Sidedness::OneSidedLess => t_cdf(t, df)?,
        Sidedness::TwoSided => (S::from_f64_lossy(2.0) * t_sf(t.abs(), df)?).min(one),
    };
    Ok(TestResult {
        statistic: t,
        p_value: p,
        sidedness,
        method,
        sample_sizes: (na, Some(nb)),
    })
}

// ---------------------------------------------------------------------------
// cosine similarity
// ---------------------------------------------------------------------------

/// Symmetric matrix of pairwise cosine similarities, unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineMatrix<S> {
    pub ids: Vec<String>,
    pub values: Vec<Vec<S>>,
}

/// Pairwise cosine similarity of the given vectors.
pub fn cosine_similarity_matrix<S: Scalar>(
    vectors: &[(String, Vec<S>)],
) -> Result<CosineMatrix<S>> {
    let first = vectors.first().ok_or(Error::EmptyInput("no vectors"))?;
    let dim = first.1.len();
    if dim == 0 {
        return Err(Error::EmptyInput("zero-length vectors"));
    }
    let mut norms = Vec::with_capacity(vectors.len());
    for (id, v) in vectors {
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                id: id.clone(),
                len: v.len(),
                expected: dim,
            });
        }
        let mut ss = S::zero();
        for &x in v {
            ss = ss + x * x;
        }
        let norm = ss.sqrt();
        if norm == S::zero() {
            return Err(Error::ZeroVector(id.clone()));
        }
        norms.push(norm);
    }
    let k = vectors.len();
    let mut values = vec![vec![S::zero(); k]; k];
    for i in 0..k {
        values[i][i] = S::one();
        for j in (i + 1)..k {
            let mut dot = S::zero();
            for (x, y) in vectors[i].1.iter().zip(&vectors[j].1) {
                dot = dot + *x * *y;
            }
            let sim = dot / (norms[i] * norms[j]);
            values[i][j] = sim;
            values[j][i] = sim;
        }
    }
    Ok(CosineMatrix {
        ids: vectors.iter().map(|(id, _)| id.clone()).collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_cdf_symmetry_and_known_points() {
        // df = 1 is the Cauchy distribution: F(1) = 1/2 + atan(1)/pi = 0.75
        let v = t_cdf(1.0f64, 1.0).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
        assert_eq!(t_cdf(0.0f64, 5.0).unwrap(), 0.5);
        assert!((t_cdf(1e8f64, 3.0).unwrap() - 1.0).abs() < 1e-12);
        for &(t, df) in &[(0.5f64, 1.0f64), (2.3, 7.0), (10.0, 2.5), (40.0, 180.0)] {
            let a = t_cdf(-t, df).unwrap();
            let b = 1.0 - t_cdf(t, df).unwrap();
            assert!((a - b).abs() < 1e-12, "symmetry failed at t={t} df={df}");
        }
        assert!(matches!(
            t_cdf(1.0f64, 0.0).unwrap_err(),
            Error::InvalidDegreesOfFreedom(_)
        ));
    }

    #[test]
    fn wilcoxon_exact_small_cases() {
        let r = wilcoxon_signed_rank(
            &[1.0f64, 2.0, 3.0, 4.0, 5.0],
            0.0,
            Sidedness::OneSidedGreater,
        )
        .unwrap();
        assert_eq!(r.statistic, 15.0);
        assert_eq!(r.method, TestMethod::WilcoxonExact);
        assert!((r.p_value - 1.0 / 32.0).abs() < 1e-15);

        let single = wilcoxon_signed_rank(&[1.0f64], 0.0, Sidedness::OneSidedGreater).unwrap();
        assert!((single.p_value - 0.5).abs() < 1e-15);

        assert!(matches!(
            wilcoxon_signed_rank(&[2.0f64, 2.0, 2.0], 2.0, Sidedness::TwoSided).unwrap_err(),
            Error::AllZeroDifferences
        ));
    }

    #[test]
    fn wilcoxon_exact_distribution_sums_to_one() {
        for n in 1..=12 {
            let counts = signed_rank_counts(n);
            let total: u64 = counts.iter().sum();
            assert_eq!(total, 1u64 << n);
        }
    }

    #[test]
    fn wilcoxon_greater_plus_less_exceeds_one_by_point_mass() {
        let samples = [3.0f64, -1.0, 2.0, 5.0, -4.0, 6.0];
        let g = wilcoxon_signed_rank(&samples, 0.0, Sidedness::OneSidedGreater).unwrap();
        let l = wilcoxon_signed_rank(&samples, 0.0, Sidedness::OneSidedLess).unwrap();
        let n = 6;
        let counts = signed_rank_counts(n);
        let w = g.statistic as usize;
        let point = counts[w] as f64 / (1u64 << n) as f64;
        assert!((g.p_value + l.p_value - (1.0 + point)).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_ties_switch_to_normal_approximation() {
        let r = wilcoxon_signed_rank(&[1.0f64, 1.0, 2.0, 3.0], 0.0, Sidedness::OneSidedGreater)
            .unwrap();
        assert_eq!(r.method, TestMethod::WilcoxonNormalApprox);
        assert!(r.p_value > 0.0 && r.p_value < 1.0);
    }

    #[test]
    fn wilcoxon_normal_approx_tracks_exact_for_moderate_n() {
        // deterministic pseudo-random tie-free samples
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.4
        };
        for n in [15usize, 17, 20] {
            for _ in 0..20 {
                let samples: Vec<f64> = (0..n).map(|_| next()).collect();
                let exact = wilcoxon_signed_rank(&samples, 0.0, Sidedness::TwoSided).unwrap();
                assert_eq!(exact.method, TestMethod::WilcoxonExact);
                let approx = normal_signed_rank_p(exact.statistic, n, 0.0, Sidedness::TwoSided);
                assert!(
                    (exact.p_value - approx).abs() < 0.02,
                    "n={n}: exact {} vs approx {approx}",
                    exact.p_value
                );
            }
        }
    }

    #[test]
    fn t_test_identical_samples() {
        let r = unpaired_t_test(
            &[1.0f64, 2.0, 3.0],
            &[1.0f64, 2.0, 3.0],
            TTestVariant::Welch,
            Sidedness::TwoSided,
        )
        .unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t_test_error_paths() {
        assert!(matches!(
            unpaired_t_test(
                &[1.0f64],
                &[1.0f64, 2.0],
                TTestVariant::Welch,
                Sidedness::TwoSided
            )
            .unwrap_err(),
            Error::InsufficientSamples(1, 2)
        ));
        assert!(matches!(
            unpaired_t_test(
                &[2.0f64, 2.0],
                &[2.0f64, 2.0],
                TTestVariant::Welch,
                Sidedness::TwoSided
            )
            .unwrap_err(),
            Error::ZeroVarianceBoth
        ));
    }

    #[test]
    fn t_test_swap_mirrors_statistic() {
        let a = [2.0f64, 4.0, 6.0, 5.0];
        let b = [1.0f64, 2.0, 3.0];
        let ab = unpaired_t_test(&a, &b, TTestVariant::Welch, Sidedness::OneSidedGreater).unwrap();
        let ba = unpaired_t_test(&b, &a, TTestVariant::Welch, Sidedness::OneSidedLess).unwrap();
        assert!((ab.statistic + ba.statistic).abs() < 1e-12);
        assert!((ab.p_value - ba.p_value).abs() < 1e-12);
    }

    #[test]
    fn pooled_variant_uses_integer_df() {
        let a = [2.0f64, 4.0, 6.0];
        let b = [1.0f64, 2.0, 3.0];
        let r = unpaired_t_test(&a, &b, TTestVariant::Pooled, Sidedness::TwoSided).unwrap();
        assert_eq!(r.method, TestMethod::PooledT);
        // t = (4 - 2) / (sp * sqrt(2/3)), sp^2 = (4 + 1) / 2 + ... computed
        // directly below
        let sp2 = (2.0f64 * 4.0 + 2.0 * 1.0) / 4.0;
        let t = 2.0 / (sp2 * (2.0 / 3.0)).sqrt();
        assert!((r.statistic - t).abs() < 1e-12);
    }

    #[test]
    fn cosine_similarity_basics() {
        let v = |xs: &[f64]| xs.to_vec();
        let m = cosine_similarity_matrix(&[
            ("a".to_string(), v(&[1.0, 0.0])),
            ("b".to_string(), v(&[2.0, 0.0])),
            ("c".to_string(), v(&[0.0, 3.0])),
            ("d".to_string(), v(&[-1.0, 0.0])),
        ])
        .unwrap();
        assert!((m.values[0][1] - 1.0).abs() < 1e-12); // v and 2v
        assert!(m.values[0][2].abs() < 1e-12); // orthogonal
        assert!((m.values[0][3] + 1.0).abs() < 1e-12); // v and -v
        for i in 0..4 {
            assert_eq!(m.values[i][i], 1.0);
            for j in 0..4 {
                assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
    }

    #[test]
    fn cosine_error_paths() {
        assert!(matches!(
            cosine_similarity_matrix(&[("z".to_string(), vec![0.0, 0.0])]).unwrap_err(),
            Error::ZeroVector(id) if id == "z"
        ));
        assert!(matches!(
            cosine_similarity_matrix(&[
                ("a".to_string(), vec![1.0]),
                ("b".to_string(), vec![1.0, 2.0])
            ])
            .unwrap_err(),
            Error::LengthMismatch { .. }
        ));
    }
}

//! Monte Carlo sampling of chaos variables.
//!
//! Sample `i` always draws from the stream keyed by `(seed, SAMPLE_TAG,
//! i)`, so the output vector is a pure function of `(kernel, count, seed)`
//! regardless of thread count or scheduling. Two kernels of equal
//! dimension sampled with the same seed see the *same* underlying ξ draws
//! per index, which makes joint statistics (covariances, ratios)
//! meaningful across calls.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaos::ChaosPolynomial;
use crate::rng;
use crate::tensor::CoefficientTensor;

const SAMPLE_TAG: u64 = 0x5A_D21;

/// `count` independent draws of `Z(f)(ξ)` with ξ ~ N(0, I_dim).
pub fn sample_chaos(f: &CoefficientTensor, count: usize, seed: u64) -> Vec<f64> {
    let z = ChaosPolynomial::compile(f);
    let dim = z.dim();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, &[SAMPLE_TAG, i as u64]);
            let xi: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            z.evaluate(&xi)
        })
        .collect()
}

/// One point of an empirical survival function for `|Z|`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TailPoint {
    pub x: f64,
    /// Empirical `P(|Z| > x)`.
    pub p_hat: f64,
    /// Wilson-score half-width at 95% (z = 1.96); strictly positive even
    /// when no sample exceeds `x`.
    pub ci_half: f64,
}

/// Empirical survival function of `|samples|` on `grid`.
pub fn empirical_tail(samples: &[f64], grid: &[f64]) -> Vec<TailPoint> {
    let mut magnitudes: Vec<f64> = samples.iter().map(|s| s.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = magnitudes.len() as f64;
    const Z: f64 = 1.96;
    grid.iter()
        .map(|&x| {
            let below = magnitudes.partition_point(|&m| m <= x);
            let exceed = magnitudes.len() - below;
            let p_hat = exceed as f64 / n;
            let denom = 1.0 + Z * Z / n;
            let ci_half =
                Z / denom * (p_hat * (1.0 - p_hat) / n + Z * Z / (4.0 * n * n)).sqrt();
            TailPoint { x, p_hat, ci_half }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::isserlis_moment;
    use crate::gen;
    use crate::tensor::CoefficientTensor;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn samples_reproduce_bitwise() {
        let f = gen::random_sparse(2, 3, 5, 17);
        let a = sample_chaos(&f, 4096, 99);
        let b = sample_chaos(&f, 4096, 99);
        assert_eq!(a, b);
        assert_ne!(a, sample_chaos(&f, 4096, 100));
        // A shorter run is a prefix of a longer one.
        let c = sample_chaos(&f, 1024, 99);
        assert_eq!(&a[..1024], &c[..]);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let f = gen::random_sparse(2, 3, 5, 17);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_chaos(&f, 2048, 5));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sample_chaos(&f, 2048, 5));
        assert_eq!(one, four);
    }

    #[test]
    fn moments_match_exact_values() {
        // Z = :ξ₁²: has E Z = 0, E Z² = 2, E Z⁴ = 60.
        let f = CoefficientTensor::from_entries(2, 2, vec![(vec![1, 1], 1.0)]).unwrap();
        let s = sample_chaos(&f, 200_000, 31);
        assert!(mean(&s).abs() < 0.05);
        let m2: Vec<f64> = s.iter().map(|v| v * v).collect();
        let exact = isserlis_moment(&f, 2).unwrap();
        // Var(Z²) = E Z⁴ − (E Z²)² = 56, so 5·SE ≈ 0.084.
        assert!((mean(&m2) - exact).abs() < 0.1, "{} vs {exact}", mean(&m2));
    }

    #[test]
    fn disjoint_supports_are_uncorrelated() {
        // Z₁ = :ξ₁²:, Z₂ = :ξ₂²: share the seed, hence the same ξ draws.
        let f1 = CoefficientTensor::from_entries(2, 2, vec![(vec![1, 1], 1.0)]).unwrap();
        let f2 = CoefficientTensor::from_entries(2, 2, vec![(vec![2, 2], 1.0)]).unwrap();
        let s1 = sample_chaos(&f1, 100_000, 77);
        let s2 = sample_chaos(&f2, 100_000, 77);
        let prod: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a * b).collect();
        // E Z₁Z₂ = 0 with Var(Z₁Z₂) = 4: 6·SE ≈ 0.038.
        assert!(mean(&prod).abs() < 0.04, "{}", mean(&prod));
    }

    #[test]
    fn tail_is_monotone_and_anchored() {
        let f = CoefficientTensor::from_entries(1, 1, vec![(vec![1], 1.0)]).unwrap();
        let s = sample_chaos(&f, 100_000, 3);
        let grid = [0.0, 0.5, 1.0, 1.96, 3.0, 50.0];
        let tail = empirical_tail(&s, &grid);
        assert_eq!(tail[0].p_hat, 1.0);
        for w in tail.windows(2) {
            assert!(w[1].p_hat <= w[0].p_hat);
        }
        // P(|ξ| > 1.96) ≈ 0.05 within the Wilson interval (with margin).
        let p = tail[3];
        assert!(
            (p.p_hat - 0.05).abs() <= 1.5 * p.ci_half,
            "{} ± {}",
            p.p_hat,
            p.ci_half
        );
        // Far point: no exceedances, yet the interval stays positive.
        let far = tail[5];
        assert_eq!(far.p_hat, 0.0);
        assert!(far.ci_half > 0.0);
    }
}

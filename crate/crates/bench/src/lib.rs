//! Shared inputs for the benchmarks.

use num_rational::Ratio;
use theta_tails::thetagroup::IwasawaPoint;
use theta_tails::weylsum::WeylSumSpec;

/// The heavy-tail pair (1/2, 0) at length `n`.
pub fn heavy_spec(n: u64) -> WeylSumSpec {
    WeylSumSpec::rational(n, Ratio::new(1, 2), Ratio::new(0, 1))
}

/// Points spread over the upper half plane, away from the real axis.
pub fn sample_points(count: usize) -> Vec<IwasawaPoint> {
    (0..count)
        .map(|i| {
            let t = i as f64 / count as f64;
            IwasawaPoint::new(7.3 * t - 3.1, 0.02 + 1.5 * t * t, 0.9 * t, [0.3 * t, -0.2 + t])
        })
        .collect()
}

//! Exact discrete probability engine: binomial PMFs, convolutions, total
//! variation distance, discretized Gaussians, and tail queries.

use statrs::function::erf::erf;

use crate::error::{Error, Result};

/// A probability distribution on a contiguous range of integers.
///
/// `offset` is the smallest support point; `probs[i]` is the mass at
/// `offset + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    offset: i64,
    probs: Vec<f64>,
}

impl CountDistribution {
    /// Wraps a raw probability vector after sanity checks.
    pub fn from_probs(offset: i64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter(
                "distribution needs at least one support point".into(),
            ));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(CountDistribution { offset, probs })
    }

    /// All mass on a single integer.
    pub fn point_mass(value: i64) -> CountDistribution {
        CountDistribution {
            offset: value,
            probs: vec![1.0],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest support point.
    pub fn max_support(&self) -> i64 {
        self.offset + self.probs.len() as i64 - 1
    }

    /// Mass at integer `x` (zero outside the stored support).
    pub fn pmf(&self, x: i64) -> f64 {
        if x < self.offset || x > self.max_support() {
            0.0
        } else {
            self.probs[(x - self.offset) as usize]
        }
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (self.offset + i as i64) as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = (self.offset + i as i64) as f64 - m;
                d * d * p
            })
            .sum()
    }

    /// Pr[X > threshold] + tie_weight * Pr[X = threshold].
    ///
    /// Equality is tested on the integer support, so a half-integer
    /// threshold never collects tie mass.
    pub fn upper_tail(&self, threshold: f64, tie_weight: f64) -> f64 {
        let mut tail = 0.0;
        for (i, p) in self.probs.iter().enumerate() {
            let x = (self.offset + i as i64) as f64;
            if x > threshold {
                tail += p;
            } else if x == threshold {
                tail += tie_weight * p;
            }
        }
        tail.min(1.0)
    }

    /// Suffix sums: `out[i] = Pr[X >= offset + i]`, with a trailing 0.
    ///
    /// Summed from the top so each entry is a non-negative forward sum.
    pub fn suffix_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.probs.len() + 1];
        for i in (0..self.probs.len()).rev() {
            out[i] = out[i + 1] + self.probs[i];
        }
        out
    }
}

/// Binomial distribution Bin(n, p) with pmf computed by a multiplicative
/// recurrence from the mode outward, then normalized. Stable for large n.
pub fn binomial(n: u64, p: f64) -> Result<CountDistribution> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "binomial probability p = {p} must lie in [0, 1]"
        )));
    }
    if n == 0 {
        return Ok(CountDistribution::point_mass(0));
    }
    if p == 0.0 {
        return Ok(CountDistribution::point_mass(0));
    }
    if p == 1.0 {
        return Ok(CountDistribution::point_mass(n as i64));
    }
    let n_us = n as usize;
    let mut probs = vec![0.0; n_us + 1];
    // Mode of Bin(n, p); start the recurrence there with unnormalized mass 1.
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    probs[mode] = 1.0;
    let odds = p / (1.0 - p);
    // pmf(k+1)/pmf(k) = (n-k)/(k+1) * p/(1-p)
    for k in mode..n_us {
        probs[k + 1] = probs[k] * ((n_us - k) as f64) / ((k + 1) as f64) * odds;
    }
    for k in (0..mode).rev() {
        probs[k] = probs[k + 1] * ((k + 1) as f64) / ((n_us - k) as f64) / odds;
    }
    let total: f64 = probs.iter().sum();
    for q in probs.iter_mut() {
        *q /= total;
    }
    CountDistribution::from_probs(0, probs)
}

/// Distribution of the sum of two independent draws.
pub fn convolve(a: &CountDistribution, b: &CountDistribution) -> CountDistribution {
    let mut probs = vec![0.0; a.probs.len() + b.probs.len() - 1];
    for (i, &pa) in a.probs.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        for (j, &pb) in b.probs.iter().enumerate() {
            probs[i + j] += pa * pb;
        }
    }
    CountDistribution {
        offset: a.offset + b.offset,
        probs,
    }
}

/// Pr[X + Y > threshold] + tie_weight * Pr[X + Y = threshold] for
/// independent X, Y, computed without materializing the convolution.
pub fn convolved_upper_tail(
    a: &CountDistribution,
    b: &CountDistribution,
    threshold: f64,
    tie_weight: f64,
) -> f64 {
    let suffix = a.suffix_sums();
    let mut tail = 0.0;
    for (j, &pb) in b.probs.iter().enumerate() {
        if pb == 0.0 {
            continue;
        }
        let y = b.offset + j as i64;
        // Need x > threshold - y, plus tie mass at x = threshold - y.
        let cut = threshold - y as f64;
        let strict_from = cut.floor() as i64 + 1;
        let idx = (strict_from - a.offset).clamp(0, a.probs.len() as i64) as usize;
        let mut inner = suffix[idx];
        if cut.fract() == 0.0 {
            inner += tie_weight * a.pmf(cut as i64);
        }
        tail += pb * inner;
    }
    tail.min(1.0)
}

/// Half the L1 distance between the two pmfs over the union support.
pub fn tvd(a: &CountDistribution, b: &CountDistribution) -> f64 {
    let lo = a.offset.min(b.offset);
    let hi = a.max_support().max(b.max_support());
    let mut sum = 0.0;
    for x in lo..=hi {
        sum += (a.pmf(x) - b.pmf(x)).abs();
    }
    0.5 * sum
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// Discretization of a Gaussian: pmf(i) = Phi((i - mean + 1/2)/sigma) -
/// Phi((i - mean - 1/2)/sigma), truncated at mean +/- 12 sigma and
/// renormalized (truncated mass < 1e-30).
pub fn discretized_gaussian(mean: f64, variance: f64) -> Result<CountDistribution> {
    if !(variance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "variance = {variance} must be positive"
        )));
    }
    let sigma = variance.sqrt();
    let lo = (mean - 12.0 * sigma).floor() as i64;
    let hi = (mean + 12.0 * sigma).ceil() as i64;
    let mut probs = Vec::with_capacity((hi - lo + 1) as usize);
    for i in lo..=hi {
        let x = i as f64;
        let p = std_normal_cdf((x - mean + 0.5) / sigma) - std_normal_cdf((x - mean - 0.5) / sigma);
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    CountDistribution::from_probs(lo, probs)
}

/// One-sided Chernoff/Hoeffding tail: exp(-2 * deviation^2 * n).
pub fn hoeffding_bound(n: u64, deviation: f64) -> f64 {
    (-2.0 * deviation * deviation * n as f64).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use proptest::prelude::*;

    #[test]
    fn binomial_small_cases() {
        let d = binomial(0, 0.3).unwrap();
        assert_eq!(d.pmf(0), 1.0);
        let d = binomial(2, 0.5).unwrap();
        assert!((d.pmf(0) - 0.25).abs() < 1e-15);
        assert!((d.pmf(1) - 0.5).abs() < 1e-15);
        assert!((d.pmf(2) - 0.25).abs() < 1e-15);
        let d = binomial(3, 0.75).unwrap();
        assert!((d.pmf(3) - 27.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_rejects_bad_p() {
        assert!(binomial(3, 1.5).is_err());
        assert!(binomial(3, -0.1).is_err());
    }

    #[test]
    fn binomial_matches_rational_oracle() {
        for &(n, num, den) in &[(7u64, 1u64, 3u64), (12, 3, 4), (20, 1, 7)] {
            let d = binomial(n, num as f64 / den as f64).unwrap();
            let exact = exact::binomial_rational(n, num, den);
            for k in 0..=n {
                let e = exact::to_f64(&exact[k as usize]);
                assert!(
                    (d.pmf(k as i64) - e).abs() < 1e-13,
                    "n={n} k={k}: {} vs {e}",
                    d.pmf(k as i64)
                );
            }
        }
    }

    #[test]
    fn convolve_identity_and_additivity() {
        let d = binomial(5, 0.3).unwrap();
        let id = CountDistribution::point_mass(0);
        assert_eq!(convolve(&id, &d), d);

        let a = binomial(1, 0.5).unwrap();
        let sum = convolve(&a, &a);
        let direct = binomial(2, 0.5).unwrap();
        for k in 0..=2 {
            assert!((sum.pmf(k) - direct.pmf(k)).abs() < 1e-15);
        }

        let a = binomial(5, 0.3).unwrap();
        let b = binomial(7, 0.3).unwrap();
        let sum = convolve(&a, &b);
        let direct = binomial(12, 0.3).unwrap();
        for k in 0..=12 {
            assert!((sum.pmf(k) - direct.pmf(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn tvd_examples() {
        let d = binomial(4, 0.6).unwrap();
        assert_eq!(tvd(&d, &d), 0.0);
        let p0 = CountDistribution::point_mass(0);
        let p1 = CountDistribution::point_mass(1);
        assert_eq!(tvd(&p0, &p1), 1.0);
        let a = binomial(2, 0.5).unwrap();
        let b = binomial(2, 0.25).unwrap();
        assert!((tvd(&a, &b) - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn discretized_gaussian_standard_cell() {
        let d = discretized_gaussian(0.0, 1.0).unwrap();
        let expect = std_normal_cdf(0.5) - std_normal_cdf(-0.5);
        assert!((d.pmf(0) - expect).abs() < 1e-12);
        assert!((d.pmf(0) - 0.382925).abs() < 1e-6);
        // Integer mean => symmetric pmf.
        for i in 1..5 {
            assert!((d.pmf(i) - d.pmf(-i)).abs() < 1e-15);
        }
        assert!(discretized_gaussian(0.0, 0.0).is_err());
    }

    #[test]
    fn gaussian_approximates_binomial_within_tvd_bound() {
        for &n in &[100u64, 1000, 10000] {
            let p = 0.5;
            let b = binomial(n, p).unwrap();
            let var = n as f64 * p * (1.0 - p);
            let g = discretized_gaussian(n as f64 * p, var).unwrap();
            let sigma = var.sqrt();
            assert!(tvd(&b, &g) <= 7.6 / sigma, "n = {n}");
        }
    }

    #[test]
    fn upper_tail_examples() {
        let d = binomial(2, 0.5).unwrap();
        assert!((d.upper_tail(1.0, 0.5) - 0.5).abs() < 1e-15);
        let d = binomial(3, 0.75).unwrap();
        assert!((d.upper_tail(1.5, 0.5) - 27.0 / 32.0).abs() < 1e-15);
        assert_eq!(d.upper_tail(-1.0, 0.5), 1.0);
    }

    #[test]
    fn convolved_upper_tail_matches_materialized() {
        let a = binomial(9, 0.62).unwrap();
        let b = binomial(4, 0.31).unwrap();
        let full = convolve(&a, &b);
        for t in [-1.0, 0.0, 3.0, 6.5, 7.0, 13.0, 20.0] {
            let fast = convolved_upper_tail(&a, &b, t, 0.5);
            let slow = full.upper_tail(t, 0.5);
            assert!((fast - slow).abs() < 1e-12, "threshold {t}");
        }
    }

    #[test]
    fn hoeffding_examples() {
        assert!((hoeffding_bound(100, 0.1) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(hoeffding_bound(1234, 0.0), 1.0);
        assert!(hoeffding_bound(200, 0.1) < hoeffding_bound(100, 0.1));
    }

    proptest! {
        #[test]
        fn binomial_moments_match(n in 1u64..400, p in 0.01f64..0.99) {
            let d = binomial(n, p).unwrap();
            prop_assert!((d.mean() - n as f64 * p).abs() < 1e-9);
            prop_assert!((d.variance() - n as f64 * p * (1.0 - p)).abs() < 1e-9);
        }

        #[test]
        fn convolve_commutative_associative(
            (n1, n2, n3) in (1u64..40, 1u64..40, 1u64..40),
            (p1, p2, p3) in (0.05f64..0.95, 0.05f64..0.95, 0.05f64..0.95),
        ) {
            let a = binomial(n1, p1).unwrap();
            let b = binomial(n2, p2).unwrap();
            let c = binomial(n3, p3).unwrap();
            let ab = convolve(&a, &b);
            let ba = convolve(&b, &a);
            for k in 0..=(n1 + n2) as i64 {
                prop_assert!((ab.pmf(k) - ba.pmf(k)).abs() < 1e-12);
            }
            let l = convolve(&ab, &c);
            let r = convolve(&a, &convolve(&b, &c));
            for k in 0..=(n1 + n2 + n3) as i64 {
                prop_assert!((l.pmf(k) - r.pmf(k)).abs() < 1e-12);
            }
        }

        #[test]
        fn tvd_is_a_metric(
            (n1, n2, n3) in (1u64..60, 1u64..60, 1u64..60),
            (p1, p2, p3) in (0.05f64..0.95, 0.05f64..0.95, 0.05f64..0.95),
        ) {
            let a = binomial(n1, p1).unwrap();
            let b = binomial(n2, p2).unwrap();
            let c = binomial(n3, p3).unwrap();
            prop_assert!((tvd(&a, &b) - tvd(&b, &a)).abs() < 1e-14);
            prop_assert!(tvd(&a, &a) < 1e-14);
            prop_assert!(tvd(&a, &c) <= tvd(&a, &b) + tvd(&b, &c) + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&tvd(&a, &b)));
        }

        #[test]
        fn tvd_of_sums_bounded_by_sum_of_tvds(
            (na, nb) in (1u64..50, 1u64..50),
            (p1, p2, p3, p4) in (0.05f64..0.95, 0.05f64..0.95, 0.05f64..0.95, 0.05f64..0.95),
        ) {
            let a1 = binomial(na, p1).unwrap();
            let a2 = binomial(na, p2).unwrap();
            let b1 = binomial(nb, p3).unwrap();
            let b2 = binomial(nb, p4).unwrap();
            let lhs = tvd(&convolve(&a1, &b1), &convolve(&a2, &b2));
            let rhs = tvd(&a1, &a2) + tvd(&b1, &b2);
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }
}

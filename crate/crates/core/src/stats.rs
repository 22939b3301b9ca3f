//! Interval estimates and goodness-of-fit tests for the Monte Carlo layer.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::gamma_lr;

/// Two-sided 95% standard-normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if k as f64 == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Half-width of the 95% Wilson interval.
pub fn wilson_half_width(k: u64, n: u64) -> f64 {
    let (lo, hi) = wilson_interval(k, n, Z95);
    0.5 * (hi - lo)
}

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl MeanEstimate {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut m = Self::default();
        for v in values {
            m.push(v);
        }
        m
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.m2 / (self.n - 1) as f64
    }

    pub fn std_err(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bin edges: bin `i` holds counts `edges[i]..edges[i+1]`, last bin open.
    pub edges: Vec<u64>,
}

impl GofResult {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_factorial(k)).exp()
}

fn ln_factorial(k: u64) -> f64 {
    statrs::function::factorial::ln_factorial(k)
}

/// Pearson chi-square test of integer counts against Poisson(`mean`) with a
/// fully specified mean. Adjacent values are pooled so every bin expects at
/// least `min_expected` observations; the last bin is the open tail.
pub fn chi_square_poisson(counts: &[u64], mean: f64, min_expected: f64) -> GofResult {
    let n = counts.len() as f64;
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut observed = vec![0u64; max as usize + 2];
    for &c in counts {
        observed[c as usize] += 1;
    }
    // greedy pooling from the left; the open last bin absorbs a short remainder
    let mut edges = vec![0u64];
    let mut acc = 0.0;
    let mut k = 0u64;
    loop {
        acc += n * poisson_pmf(k, mean);
        let tail = n * poisson_tail(k + 1, mean);
        k += 1;
        if acc >= min_expected && tail >= min_expected {
            edges.push(k);
            acc = 0.0;
        } else if tail < min_expected {
            break;
        }
    }
    let bins = edges.len();
    let mut stat = 0.0;
    for i in 0..bins {
        let lo = edges[i];
        let (exp, obs) = if i + 1 < bins {
            let hi = edges[i + 1];
            let e: f64 = (lo..hi).map(|j| n * poisson_pmf(j, mean)).sum();
            let o: u64 = (lo..hi)
                .map(|j| observed.get(j as usize).copied().unwrap_or(0))
                .sum();
            (e, o)
        } else {
            let o: u64 = observed.iter().skip(lo as usize).sum();
            (n * poisson_tail(lo, mean), o)
        };
        stat += (obs as f64 - exp).powi(2) / exp;
    }
    let dof = bins.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(stat)
    };
    GofResult {
        statistic: stat,
        dof,
        p_value,
        edges,
    }
}

/// `P{N >= k}` for `N ~ Poisson(mean)`.
fn poisson_tail(k: u64, mean: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if mean == 0.0 {
        return 0.0;
    }
    // P{N >= k} = P{Gamma(k, 1) <= mean}
    gamma_lr(k as f64, mean)
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and a
/// distribution with right-continuous CDF `cdf` and left limits `cdf_left`.
/// Atoms in the reference law are handled exactly.
pub fn ks_statistic_mixed(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    cdf_left: impl Fn(f64) -> f64,
) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        d = d
            .max((cdf(x) - j as f64 / n).abs())
            .max((cdf_left(x) - i as f64 / n).abs());
        i = j;
    }
    d
}

pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    ks_statistic_mixed(samples, &cdf, &cdf)
}

/// Asymptotic p-value of the one-sample KS statistic `d` with `n` samples,
/// using Stephens' small-sample correction. Conservative for laws with atoms.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

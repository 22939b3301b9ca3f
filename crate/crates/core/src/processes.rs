//! Poisson point processes and the rectangle Boolean scheme inside a disk
//! window centered on the typical user.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point2, Rect};
use crate::quad::{integrate_with_breaks, QuadOptions};

/// Distribution of a nonnegative size attribute (length, width, height).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Constant { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { mean: f64 },
}

impl DistSpec {
    pub fn constant(value: f64) -> Self {
        DistSpec::Constant { value }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        DistSpec::Uniform { lo, hi }
    }

    pub fn exponential(mean: f64) -> Self {
        DistSpec::Exponential { mean }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        let ok = match *self {
            DistSpec::Constant { value } => value.is_finite() && value >= 0.0,
            DistSpec::Uniform { lo, hi } => {
                lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi
            }
            DistSpec::Exponential { mean } => mean.is_finite() && mean > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(name, format!("invalid distribution {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            DistSpec::Constant { value } => value,
            DistSpec::Uniform { lo, hi } => 0.5 * (lo + hi),
            DistSpec::Exponential { mean } => mean,
        }
    }

    pub fn second_moment(&self) -> f64 {
        match *self {
            DistSpec::Constant { value } => value * value,
            DistSpec::Uniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
            DistSpec::Exponential { mean } => 2.0 * mean * mean,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistSpec::Constant { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
            DistSpec::Uniform { lo, hi } => {
                if x < lo {
                    0.0
                } else if x >= hi {
                    1.0
                } else {
                    (x - lo) / (hi - lo)
                }
            }
            DistSpec::Exponential { mean } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / mean).exp_m1()
                }
            }
        }
    }

    /// Smallest `x` with `cdf(x) >= q`, for `q ∈ (0, 1)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(invalid("quantile", format!("must lie in (0, 1), got {q}")));
        }
        Ok(match *self {
            DistSpec::Constant { value } => value,
            DistSpec::Uniform { lo, hi } => lo + q * (hi - lo),
            DistSpec::Exponential { mean } => -mean * (-q).ln_1p(),
        })
    }

    /// `∫_{-∞}^{x} cdf(h) dh`, the antiderivative used by the height factor.
    pub fn cdf_integral(&self, x: f64) -> Option<f64> {
        match *self {
            DistSpec::Constant { value } => Some((x - value).max(0.0)),
            DistSpec::Uniform { lo, hi } if hi > lo => Some(if x < lo {
                0.0
            } else if x <= hi {
                (x - lo) * (x - lo) / (2.0 * (hi - lo))
            } else {
                0.5 * (hi - lo) + (x - hi)
            }),
            DistSpec::Uniform { lo, .. } => Some((x - lo).max(0.0)),
            DistSpec::Exponential { .. } => None,
        }
    }

    fn is_degenerate(&self) -> bool {
        match *self {
            DistSpec::Constant { .. } => true,
            DistSpec::Uniform { lo, hi } => lo == hi,
            DistSpec::Exponential { .. } => false,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistSpec::Constant { value } => value,
            DistSpec::Uniform { lo, hi } => {
                if hi > lo {
                    rng.random_range(lo..hi)
                } else {
                    lo
                }
            }
            DistSpec::Exponential { mean } => Exp::new(1.0 / mean)
                .expect("validated positive mean")
                .sample(rng),
        }
    }
}

/// Boolean scheme of rectangles: centers form a PPP of density `lambda`
/// (per m²); length, width, orientation and the optional height mark are
/// drawn independently per rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockageParams {
    pub lambda: f64,
    pub length: DistSpec,
    pub width: DistSpec,
    #[serde(default)]
    pub height: Option<DistSpec>,
}

impl BlockageParams {
    pub fn new(lambda: f64, length: DistSpec, width: DistSpec) -> Self {
        Self {
            lambda,
            length,
            width,
            height: None,
        }
    }

    pub fn none() -> Self {
        Self::new(0.0, DistSpec::constant(1.0), DistSpec::constant(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid(
                "lambda",
                format!("must be finite and >= 0, got {}", self.lambda),
            ));
        }
        self.length.validate("length")?;
        self.width.validate("width")?;
        if let Some(h) = &self.height {
            h.validate("height")?;
        }
        if self.lambda > 0.0 && self.length.mean() <= 0.0 {
            return Err(invalid("length", "mean length must be > 0"));
        }
        let p = self.p();
        if p >= 1.0 {
            log::warn!(
                "blockage coverage parameter p = {p:.3} >= 1; land is almost entirely covered"
            );
        }
        Ok(())
    }

    /// Per-meter growth rate of the mean blockage count on a link.
    pub fn beta(&self) -> f64 {
        2.0 * self.lambda * (self.length.mean() + self.width.mean()) / PI
    }

    /// Mean blockage count of a zero-length link.
    pub fn p(&self) -> f64 {
        self.lambda * self.length.mean() * self.width.mean()
    }
}

/// Disk observation window. Blockage centers are sampled in the disk dilated
/// by `guard` so rectangles centered outside can still cross in-window links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    #[serde(default)]
    pub center: Point2,
    pub radius: f64,
    #[serde(default)]
    pub guard: f64,
}

impl Window {
    pub fn disk(radius: f64) -> Self {
        Self {
            center: Point2::ORIGIN,
            radius,
            guard: 0.0,
        }
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(invalid(
                "window.radius",
                format!("must be > 0, got {}", self.radius),
            ));
        }
        if !(self.guard.is_finite() && self.guard >= 0.0) {
            return Err(invalid(
                "window.guard",
                format!("must be >= 0, got {}", self.guard),
            ));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn dilated(&self) -> Window {
        Window {
            center: self.center,
            radius: self.radius + self.guard,
            guard: 0.0,
        }
    }

    pub fn contains(&self, q: Point2) -> bool {
        q.distance(self.center) <= self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub base_stations: Vec<Point2>,
    pub blockages: Vec<Rect>,
    pub seed: u64,
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let n: f64 = Poisson::new(mean)
        .expect("finite positive mean")
        .sample(rng);
    n as usize
}

fn uniform_in_disk<R: Rng + ?Sized>(w: &Window, rng: &mut R) -> Point2 {
    let r = w.radius * rng.random::<f64>().sqrt();
    let phi = rng.random_range(0.0..TAU);
    w.center + Point2::from_polar(r, phi)
}

/// Homogeneous PPP of the given density restricted to the window disk.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, window: &Window, rng: &mut R) -> Vec<Point2> {
    let n = poisson_count(density * window.area(), rng);
    (0..n).map(|_| uniform_in_disk(window, rng)).collect()
}

/// Boolean scheme of rectangles with centers in the guard-dilated window.
pub fn sample_boolean_scheme<R: Rng + ?Sized>(
    params: &BlockageParams,
    window: &Window,
    rng: &mut R,
) -> Vec<Rect> {
    let centers = sample_ppp(params.lambda, &window.dilated(), rng);
    centers
        .into_iter()
        .map(|c| {
            let length = params.length.sample(rng);
            let width = params.width.sample(rng);
            let theta = rng.random_range(0.0..TAU);
            let mut r = Rect::new_unchecked(c, length, width, theta);
            if let Some(h) = &params.height {
                r.height = Some(h.sample(rng));
            }
            r
        })
        .collect()
}

/// Half-diagonal `m` with `P{√(L² + W²)/2 > m} <= 1 - quantile`, found by
/// bisection on the exact distribution function of the half-diagonal.
pub fn guard_margin(params: &BlockageParams, quantile: f64) -> Result<f64> {
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(invalid(
            "quantile",
            format!("must lie in (0, 1), got {quantile}"),
        ));
    }
    params.length.validate("length")?;
    params.width.validate("width")?;
    let (l, w) = (params.length, params.width);
    if l.is_degenerate() && w.is_degenerate() {
        return Ok(l.mean().hypot(w.mean()) / 2.0);
    }
    // union bound: each side below its (1+q)/2 quantile with prob >= q
    let q2 = 0.5 * (1.0 + quantile);
    let mut hi = l.quantile(q2)?.hypot(w.quantile(q2)?) / 2.0;
    let mut lo = 0.0;
    if half_diagonal_cdf(&l, &w, hi)? < quantile {
        // quadrature noise at the bracket edge; widen slightly
        hi *= 1.0 + 1e-6;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if half_diagonal_cdf(&l, &w, mid)? >= quantile {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-10 * hi.max(1e-12) {
            break;
        }
    }
    Ok(hi)
}

/// `P{√(L² + W²)/2 <= m}` for independent `L`, `W`.
pub fn half_diagonal_cdf(l: &DistSpec, w: &DistSpec, m: f64) -> Result<f64> {
    if m < 0.0 {
        return Ok(0.0);
    }
    let s = 2.0 * m;
    // integrate over the non-degenerate side, conditioning on the other
    let (x, y) = if l.is_degenerate() { (w, l) } else { (l, w) };
    if x.is_degenerate() {
        return Ok(if x.mean().hypot(y.mean()) <= s {
            1.0
        } else {
            0.0
        });
    }
    let inner = |t: f64| -> f64 {
        if t > s {
            0.0
        } else {
            y.cdf((s * s - t * t).max(0.0).sqrt())
        }
    };
    let kinks: Vec<f64> = match *y {
        DistSpec::Constant { value } => vec![value],
        DistSpec::Uniform { lo, hi } => vec![lo, hi],
        DistSpec::Exponential { .. } => vec![],
    }
    .into_iter()
    .filter(|&k| k <= s)
    .map(|k| (s * s - k * k).sqrt())
    .chain(std::iter::once(s))
    .collect();
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        max_intervals: 4000,
    };
    let est = match *x {
        DistSpec::Uniform { lo, hi } => {
            let upper = hi.min(s);
            if upper <= lo {
                return Ok(0.0);
            }
            integrate_with_breaks(inner, lo, upper, &kinks, &opts)?.value / (hi - lo)
        }
        DistSpec::Exponential { mean } => {
            let f = |t: f64| inner(t) * (-t / mean).exp() / mean;
            integrate_with_breaks(f, 0.0, s, &kinks, &opts)?.value
        }
        DistSpec::Constant { .. } => unreachable!("degenerate case handled above"),
    };
    Ok(est.clamp(0.0, 1.0))
}

//! Exact simulation of the blockage model.
//!
//! Every trial draws a fresh realization around a typical user at the window
//! center, counts the buildings crossed by each link geometrically and
//! computes the SIR of nearest-visible association. Trials own independent
//! random streams derived from the master seed, so results do not depend on
//! how trials are scheduled across threads.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{clip_segment, Point2, Rect, Segment};
use crate::link_stats::GammaModel;
use crate::network::{
    coverage_probability, coverage_probability_in_disk, nearest_visible_ccdf, silent_fraction,
    NetworkParams, QuadratureConfig,
};
use crate::processes::{guard_margin, sample_boolean_scheme, sample_ppp, BlockageParams, Window};
use crate::rng::{stream, SimRng};
use crate::spatial::BlockageIndex;
use crate::stats::{chi_square_poisson, wilson_half_width, GofResult, MeanEstimate};

/// Quantile of the half-diagonal law used for the default guard band.
pub const GUARD_QUANTILE: f64 = 0.9999;

/// Rays cast per trial when estimating the visible area.
pub const VISIBLE_AREA_RAYS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockageGeometry {
    #[default]
    Boolean,
    /// Axis-aligned `E[L] × E[W]` sites, each occupied with probability `p`.
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

fn default_gamma() -> GammaModel {
    GammaModel::Impenetrable
}

fn default_t_max_db() -> f64 {
    40.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub blockage: BlockageParams,
    /// Base-station density per m².
    pub mu: f64,
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: GammaModel,
    #[serde(default = "default_t_max_db")]
    pub t_max_db: f64,
    pub window: Window,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub geometry: BlockageGeometry,
    /// Reject realizations whose origin lies inside a building.
    #[serde(default)]
    pub condition_outdoor_user: bool,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.blockage.validate()?;
        self.gamma.validate()?;
        self.window.validate()?;
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(invalid(
                "mu",
                format!("must be finite and >= 0, got {}", self.mu),
            ));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(invalid(
                "alpha",
                format!("must exceed 2, got {}", self.alpha),
            ));
        }
        if !self.t_max_db.is_finite() {
            return Err(invalid("t_max_db", "must be finite"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        if self.geometry == BlockageGeometry::Lattice && self.blockage.lambda > 0.0 {
            if self.blockage.p() > 1.0 {
                return Err(invalid(
                    "lambda",
                    "lattice occupancy λ·E[L]·E[W] must not exceed 1",
                ));
            }
            if self.blockage.width.mean() <= 0.0 {
                return Err(invalid("width", "lattice sites need a positive mean width"));
            }
        }
        if self.window_tail_mass() >= 1e-4 {
            log::warn!(
                "window radius {} m leaves {:.2e} of connected users outside",
                self.window.radius,
                self.window_tail_mass()
            );
        }
        Ok(())
    }

    /// `P{R₀ > radius} - ξ`: mass of connected users the window cuts off.
    pub fn window_tail_mass(&self) -> f64 {
        let (beta, p) = (self.blockage.beta(), self.blockage.p());
        nearest_visible_ccdf(self.window.radius, self.mu, beta, p)
            - silent_fraction(self.mu, beta, p)
    }

    pub fn t_max_linear(&self) -> f64 {
        10f64.powf(self.t_max_db / 10.0)
    }

    fn sampling_window(&self) -> Result<Window> {
        let guard = match self.geometry {
            _ if self.blockage.lambda == 0.0 => 0.0,
            BlockageGeometry::Boolean => guard_margin(&self.blockage, GUARD_QUANTILE)?,
            BlockageGeometry::Lattice => {
                0.5 * self
                    .blockage
                    .length
                    .mean()
                    .hypot(self.blockage.width.mean())
            }
        };
        Ok(self.window.with_guard(self.window.guard.max(guard)))
    }
}

/// Smallest radius at which `P{R₀ > r} - ξ < tol`.
pub fn recommended_window_radius(mu: f64, beta: f64, p: f64, tol: f64) -> f64 {
    let xi = silent_fraction(mu, beta, p);
    let tail = |r: f64| nearest_visible_ccdf(r, mu, beta, p) - xi;
    let mut hi = 1.0;
    while tail(hi) >= tol && hi < 1e9 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Radius at which a simulation window no longer biases coverage: grown from
/// [`recommended_window_radius`] in 25% steps until the coverage with stations
/// confined to the disk is within `tol` of the unbounded coverage at every
/// threshold of `t_grid_db`. Without this, sparse blockage leaves interferers
/// beyond the serving-distance radius that still matter.
pub fn coverage_window_radius(
    params: &NetworkParams,
    t_grid_db: &[f64],
    tol: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    params.validate()?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid("tol", format!("must lie in (0, 1), got {tol}")));
    }
    let thresholds: Vec<f64> = t_grid_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();
    let full = thresholds
        .iter()
        .map(|&t| coverage_probability(t, params, quad).map(|c| c.unconditional))
        .collect::<Result<Vec<_>>>()?;
    let mut r = recommended_window_radius(params.mu, params.beta, params.p, tol);
    for _ in 0..200 {
        let mut worst: f64 = 0.0;
        for (&t, &pc) in thresholds.iter().zip(&full) {
            let c = coverage_probability_in_disk(t, params, r, quad)?;
            worst = worst.max((c.unconditional - pc).abs());
        }
        if worst < tol {
            return Ok(r);
        }
        r *= 1.25;
    }
    Err(crate::error::domain(
        "coverage_window_radius",
        "no radius below 1e19 m meets the tolerance",
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirSample {
    /// Capped SIR; 0 when no base station is visible.
    pub sir_linear: f64,
    pub connected: bool,
    /// Infinite when not connected.
    pub serving_distance: f64,
    pub num_blockages_serving: u64,
    pub visible_count: u64,
    pub user_indoor: bool,
}

struct World {
    stations: Vec<Point2>,
    fading: Vec<f64>,
    index: BlockageIndex,
    user_indoor: bool,
}

fn streams(seed: u64, trial: u64) -> [SimRng; 4] {
    let base = trial.wrapping_mul(4);
    [0, 1, 2, 3].map(|k| stream(seed, base.wrapping_add(k)))
}

fn sample_blockages(scenario: &Scenario, window: &Window, rng: &mut SimRng) -> Vec<Rect> {
    match scenario.geometry {
        BlockageGeometry::Boolean => sample_boolean_scheme(&scenario.blockage, window, rng),
        BlockageGeometry::Lattice => {
            let b = &scenario.blockage;
            sample_lattice_sites(
                b.length.mean(),
                b.width.mean(),
                b.p(),
                window,
                b.height.as_ref(),
                rng,
            )
            .rects
        }
    }
}

fn build_world(
    scenario: &Scenario,
    window: &Window,
    rng_bs: &mut SimRng,
    rng_blk: &mut SimRng,
) -> World {
    let stations = sample_ppp(scenario.mu, &scenario.window, rng_bs);
    let fading: Vec<f64> = (0..stations.len()).map(|_| Exp1.sample(rng_bs)).collect();
    let half_extent = window.radius + window.guard;
    let center = scenario.window.center;
    let mut attempts = 0;
    loop {
        let rects = sample_blockages(scenario, window, rng_blk);
        let index = BlockageIndex::new(rects, center, half_extent);
        let user_indoor = index.covers(center);
        attempts += 1;
        if !(scenario.condition_outdoor_user && user_indoor) || attempts >= 10_000 {
            if user_indoor && scenario.condition_outdoor_user {
                log::warn!("no outdoor realization after {attempts} attempts");
            }
            return World {
                stations,
                fading,
                index,
                user_indoor,
            };
        }
    }
}

fn evaluate(scenario: &Scenario, world: &World, rng_loss: &mut SimRng) -> SirSample {
    let user = scenario.window.center;
    let impenetrable = scenario.gamma.is_impenetrable();
    let mut serving: Option<(usize, f64, u64)> = None;
    let mut powers = Vec::with_capacity(world.stations.len());
    let mut visible = 0u64;
    for (i, &bs) in world.stations.iter().enumerate() {
        let d = user.distance(bs);
        let k = world.index.count(&Segment::new(user, bs)) as u64;
        if k == 0 {
            visible += 1;
            if serving.is_none_or(|(_, best, _)| d < best) {
                serving = Some((i, d, k));
            }
        }
        let loss = if k == 0 {
            1.0
        } else if impenetrable {
            0.0
        } else {
            (0..k).map(|_| scenario.gamma.sample(rng_loss)).product()
        };
        powers.push(world.fading[i] * loss * d.powf(-scenario.alpha));
    }
    let Some((srv, dist, k_srv)) = serving else {
        return SirSample {
            sir_linear: 0.0,
            connected: false,
            serving_distance: f64::INFINITY,
            num_blockages_serving: 0,
            visible_count: 0,
            user_indoor: world.user_indoor,
        };
    };
    let interference: f64 = powers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != srv)
        .map(|(_, &p)| p)
        .sum();
    let cap = scenario.t_max_linear();
    let sir = if interference > 0.0 {
        (powers[srv] / interference).min(cap)
    } else {
        cap
    };
    SirSample {
        sir_linear: sir,
        connected: true,
        serving_distance: dist,
        num_blockages_serving: k_srv,
        visible_count: visible,
        user_indoor: world.user_indoor,
    }
}

/// Area of the region visible from the window center, by ray casting at
/// `rays` equally spaced angles with a random common offset.
fn visible_area(world: &World, center: Point2, radius: f64, rays: usize, rng: &mut SimRng) -> f64 {
    let step = std::f64::consts::TAU / rays as f64;
    let offset = rng.random::<f64>() * step;
    let sum_sq: f64 = (0..rays)
        .map(|j| {
            let dir = Point2::from_polar(1.0, offset + j as f64 * step);
            let r = world.index.first_hit_distance(center, dir, radius);
            r * r
        })
        .sum();
    0.5 * step * sum_sq
}

/// One trial of the scenario; deterministic in `(scenario.seed, trial)`.
pub fn run_trial(scenario: &Scenario, trial: u64) -> Result<SirSample> {
    let window = scenario.sampling_window()?;
    Ok(trial_with_window(scenario, &window, trial, 0).0)
}

fn trial_with_window(
    scenario: &Scenario,
    window: &Window,
    trial: u64,
    rays: usize,
) -> (SirSample, f64) {
    let [mut rng_bs, mut rng_blk, mut rng_loss, mut rng_ray] = streams(scenario.seed, trial);
    let world = build_world(scenario, window, &mut rng_bs, &mut rng_blk);
    let sample = evaluate(scenario, &world, &mut rng_loss);
    let area = if rays > 0 {
        visible_area(
            &world,
            scenario.window.center,
            scenario.window.radius,
            rays,
            &mut rng_ray,
        )
    } else {
        0.0
    };
    (sample, area)
}

fn map_trials<T: Send>(trials: u64, exec: Execution, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    match exec {
        Execution::Sequential => (0..trials).map(f).collect(),
        Execution::Parallel => (0..trials).into_par_iter().map(f).collect(),
    }
}

/// All trials of the scenario, in trial order.
pub fn simulate(scenario: &Scenario, exec: Execution) -> Result<Vec<SirSample>> {
    scenario.validate()?;
    let window = scenario.sampling_window()?;
    Ok(map_trials(scenario.trials, exec, |i| {
        trial_with_window(scenario, &window, i, 0).0
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// 95% interval half-widths.
    pub half_widths: Vec<f64>,
    pub n: u64,
}

impl EmpiricalCurve {
    /// Fraction of `xs` strictly above each grid point, with Wilson intervals.
    pub fn exceedance(xs: &[f64], grid: &[f64], map: impl Fn(f64) -> f64) -> Self {
        let n = xs.len() as u64;
        let mut values = Vec::with_capacity(grid.len());
        let mut half_widths = Vec::with_capacity(grid.len());
        for &g in grid {
            let threshold = map(g);
            let k = xs.iter().filter(|&&x| x > threshold).count() as u64;
            values.push(if n > 0 { k as f64 / n as f64 } else { 0.0 });
            half_widths.push(wilson_half_width(k, n));
        }
        Self {
            grid: grid.to_vec(),
            values,
            half_widths,
            n,
        }
    }
}

/// Empirical `P{SIR > T}` over a grid of thresholds in dB.
pub fn coverage_curve(samples: &[SirSample], t_grid_db: &[f64]) -> EmpiricalCurve {
    let sir: Vec<f64> = samples.iter().map(|s| s.sir_linear).collect();
    EmpiricalCurve::exceedance(&sir, t_grid_db, |db| 10f64.powf(db / 10.0))
}

pub fn estimate_coverage(
    scenario: &Scenario,
    t_grid_db: &[f64],
    exec: Execution,
) -> Result<EmpiricalCurve> {
    Ok(coverage_curve(&simulate(scenario, exec)?, t_grid_db))
}

/// Blockage count and loss on a single link of fixed length, sampled in a
/// disk around the link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkExperiment {
    pub blockage: BlockageParams,
    #[serde(default)]
    pub geometry: BlockageGeometry,
    pub length: f64,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// `(h_user, h_base)`: count only buildings that cut the 3-D ray.
    #[serde(default)]
    pub antenna_heights: Option<(f64, f64)>,
    #[serde(default = "default_gamma")]
    pub gamma: GammaModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkOutcome {
    pub count: u64,
    /// Product of the per-building loss ratios along the link.
    pub loss: f64,
}

/// Number of footprints crossing `s` that rise above the straight ray from
/// height `h_start` at `s.a` to `h_end` at `s.b` somewhere over the footprint.
pub fn count_blocking_3d(index: &BlockageIndex, s: &Segment, h_start: f64, h_end: f64) -> usize {
    index
        .hits(s)
        .into_iter()
        .filter(|&id| {
            let r = &index.rects()[id];
            match (r.height, clip_segment(s, r)) {
                (_, None) => false,
                (None, Some(_)) => true,
                (Some(h), Some((t0, t1))) => {
                    let at = |t: f64| h_start + t * (h_end - h_start);
                    h > at(t0).min(at(t1))
                }
            }
        })
        .count()
}

pub fn run_link_experiment(exp: &LinkExperiment, exec: Execution) -> Result<Vec<LinkOutcome>> {
    exp.blockage.validate()?;
    exp.gamma.validate()?;
    if !(exp.length > 0.0 && exp.length.is_finite()) {
        return Err(invalid(
            "length",
            format!("must be > 0, got {}", exp.length),
        ));
    }
    if let Some((hu, hb)) = exp.antenna_heights {
        if !(hu >= 0.0 && hb > hu) {
            return Err(invalid("antenna_heights", "need h_base > h_user >= 0"));
        }
    }
    let scenario = Scenario {
        blockage: exp.blockage,
        mu: 0.0,
        alpha: 4.0,
        gamma: exp.gamma,
        t_max_db: 40.0,
        window: Window::disk(0.5 * exp.length),
        trials: exp.trials,
        seed: exp.seed,
        geometry: exp.geometry,
        condition_outdoor_user: false,
    };
    let window = scenario.sampling_window()?;
    Ok(map_trials(exp.trials, exec, |i| {
        let [mut rng_dir, mut rng_blk, mut rng_loss, _] = streams(exp.seed, i);
        let phi = rng_dir.random_range(0.0..std::f64::consts::TAU);
        let half = Point2::from_polar(0.5 * exp.length, phi);
        let s = Segment::new(Point2::ORIGIN - half, Point2::ORIGIN + half);
        let rects = sample_blockages(&scenario, &window, &mut rng_blk);
        let index = BlockageIndex::new(rects, Point2::ORIGIN, window.radius + window.guard);
        let count = match exp.antenna_heights {
            None => index.count(&s),
            Some((hu, hb)) => count_blocking_3d(&index, &s, hu, hb),
        } as u64;
        let loss = (0..count)
            .map(|_| exp.gamma.sample(&mut rng_loss))
            .product();
        LinkOutcome { count, loss }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub length: f64,
    pub n: u64,
    pub mean_count: f64,
    pub count_std_err: f64,
    pub los_frequency: f64,
    pub los_half_width: f64,
    /// Goodness of fit against Poisson(βR + p).
    pub poisson_fit: GofResult,
}

impl LinkSummary {
    pub fn from_outcomes(length: f64, beta: f64, p: f64, outcomes: &[LinkOutcome]) -> Self {
        let counts: Vec<u64> = outcomes.iter().map(|o| o.count).collect();
        let stats = MeanEstimate::from_values(counts.iter().map(|&c| c as f64));
        let n = counts.len() as u64;
        let los = counts.iter().filter(|&&c| c == 0).count() as u64;
        Self {
            length,
            n,
            mean_count: stats.mean,
            count_std_err: stats.std_err(),
            los_frequency: los as f64 / n.max(1) as f64,
            los_half_width: wilson_half_width(los, n),
            poisson_fit: chi_square_poisson(&counts, beta * length + p, 5.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub estimate: f64,
    pub half_width: f64,
    pub n: u64,
}

impl Proportion {
    pub fn new(k: u64, n: u64) -> Self {
        Self {
            estimate: k as f64 / n.max(1) as f64,
            half_width: wilson_half_width(k, n),
            n,
        }
    }

    /// Binomial standard error at the estimate.
    pub fn std_err(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.n.max(1) as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanWithError {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
}

impl From<MeanEstimate> for MeanWithError {
    fn from(m: MeanEstimate) -> Self {
        Self {
            mean: m.mean,
            std_err: m.std_err(),
            n: m.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub links: Vec<LinkSummary>,
    pub mean_visible_bs: MeanWithError,
    pub mean_visible_area: MeanWithError,
    pub silent_fraction: Proportion,
    pub indoor_fraction: Proportion,
    /// `P{R₀ > x}` on the requested distance grid.
    pub nearest_visible_ccdf: EmpiricalCurve,
}

/// Empirical counterparts of the connectivity closed forms. Link statistics
/// use `scenario.trials` independent links per requested length.
pub fn estimate_connectivity(
    scenario: &Scenario,
    link_lengths: &[f64],
    distance_grid: &[f64],
    exec: Execution,
) -> Result<ConnectivityReport> {
    scenario.validate()?;
    let (beta, p) = (scenario.blockage.beta(), scenario.blockage.p());
    let links = link_lengths
        .iter()
        .enumerate()
        .map(|(j, &length)| {
            let exp = LinkExperiment {
                blockage: scenario.blockage,
                geometry: scenario.geometry,
                length,
                trials: scenario.trials,
                seed: crate::rng::derive_seed(scenario.seed, 0x4C49_4E4B + j as u64),
                antenna_heights: None,
                gamma: GammaModel::Impenetrable,
            };
            run_link_experiment(&exp, exec).map(|o| LinkSummary::from_outcomes(length, beta, p, &o))
        })
        .collect::<Result<Vec<_>>>()?;

    let window = scenario.sampling_window()?;
    let runs = map_trials(scenario.trials, exec, |i| {
        trial_with_window(scenario, &window, i, VISIBLE_AREA_RAYS)
    });
    let n = runs.len() as u64;
    let silent = runs.iter().filter(|(s, _)| !s.connected).count() as u64;
    let indoor = runs.iter().filter(|(s, _)| s.user_indoor).count() as u64;
    let distances: Vec<f64> = runs.iter().map(|(s, _)| s.serving_distance).collect();
    Ok(ConnectivityReport {
        links,
        mean_visible_bs: MeanEstimate::from_values(
            runs.iter().map(|(s, _)| s.visible_count as f64),
        )
        .into(),
        mean_visible_area: MeanEstimate::from_values(runs.iter().map(|&(_, a)| a)).into(),
        silent_fraction: Proportion::new(silent, n),
        indoor_fraction: Proportion::new(indoor, n),
        nearest_visible_ccdf: EmpiricalCurve::exceedance(&distances, distance_grid, |x| x),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSites {
    pub rects: Vec<Rect>,
    /// Number of sites considered, occupied or not.
    pub sites: usize,
}

/// Axis-aligned lattice of `length × width` sites covering the bounding square
/// of the guard-dilated window, with a uniformly random offset; each site is
/// occupied independently with probability `p`.
pub fn sample_lattice_sites<R: Rng + ?Sized>(
    length: f64,
    width: f64,
    p: f64,
    window: &Window,
    heights: Option<&crate::processes::DistSpec>,
    rng: &mut R,
) -> LatticeSites {
    let reach = window.radius + window.guard;
    let c = window.center;
    let ox = rng.random::<f64>() * length;
    let oy = rng.random::<f64>() * width;
    let nx = ((2.0 * reach + ox) / length).ceil() as usize;
    let ny = ((2.0 * reach + oy) / width).ceil() as usize;
    let mut rects = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if rng.random::<f64>() < p {
                let center = Point2::new(
                    c.x - reach - ox + (ix as f64 + 0.5) * length,
                    c.y - reach - oy + (iy as f64 + 0.5) * width,
                );
                let mut r = Rect::new_unchecked(center, length, width, 0.0);
                if let Some(h) = heights {
                    r.height = Some(h.sample(rng));
                }
                rects.push(r);
            }
        }
    }
    LatticeSites {
        rects,
        sites: nx * ny,
    }
}

pub fn sample_lattice_blockages(
    mean_length: f64,
    mean_width: f64,
    p: f64,
    window: &Window,
    seed: u64,
) -> Result<Vec<Rect>> {
    if !(mean_length > 0.0 && mean_width > 0.0) {
        return Err(invalid("lattice", "site sides must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(
            "p",
            format!("occupancy must lie in [0, 1], got {p}"),
        ));
    }
    window.validate()?;
    let mut rng = stream(seed, 0);
    Ok(sample_lattice_sites(mean_length, mean_width, p, window, None, &mut rng).rects)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub boolean: EmpiricalCurve,
    pub lattice: EmpiricalCurve,
    /// Boolean minus lattice coverage per grid point.
    pub gaps: Vec<f64>,
    /// 95% half-width of each difference, `√(h_B² + h_L²)`.
    pub joint_half_widths: Vec<f64>,
    pub max_gap: f64,
    pub max_gap_t_db: f64,
}

impl ModelComparison {
    /// Grid points where the curves differ beyond the joint interval.
    pub fn separated_points(&self) -> Vec<f64> {
        self.gaps
            .iter()
            .zip(&self.joint_half_widths)
            .zip(&self.boolean.grid)
            .filter(|((g, h), _)| g.abs() > **h)
            .map(|(_, &t)| t)
            .collect()
    }
}

/// Coverage under the Boolean scheme and under the lattice with matched
/// parameters. Both runs share seeds, so station layouts and fading agree.
pub fn compare_models(
    boolean: &Scenario,
    lattice: &Scenario,
    t_grid_db: &[f64],
    exec: Execution,
) -> Result<ModelComparison> {
    let b = Scenario {
        geometry: BlockageGeometry::Boolean,
        ..boolean.clone()
    };
    let l = Scenario {
        geometry: BlockageGeometry::Lattice,
        ..lattice.clone()
    };
    let cb = estimate_coverage(&b, t_grid_db, exec)?;
    let cl = estimate_coverage(&l, t_grid_db, exec)?;
    let gaps: Vec<f64> = cb
        .values
        .iter()
        .zip(&cl.values)
        .map(|(x, y)| x - y)
        .collect();
    let joint_half_widths: Vec<f64> = cb
        .half_widths
        .iter()
        .zip(&cl.half_widths)
        .map(|(x, y)| x.hypot(*y))
        .collect();
    let (imax, max_gap) = gaps
        .iter()
        .enumerate()
        .map(|(i, g)| (i, g.abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(ModelComparison {
        max_gap_t_db: t_grid_db.get(imax).copied().unwrap_or(f64::NAN),
        boolean: cb,
        lattice: cl,
        gaps,
        joint_half_widths,
        max_gap,
    })
}

//! Network-level closed forms for impenetrable blockages: visible region,
//! nearest visible base station, silent area, coverage and average rate.
//!
//! The typical user sits at the origin and connects to the nearest base
//! station it can see. Blockage counts on different links are treated as
//! independent, so a base station at distance `t` is visible with probability
//! `e^{-(βt + p)}` and the visible stations form an inhomogeneous PPP.

use std::cell::Cell;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::processes::BlockageParams;
use crate::quad::{integrate, integrate_with_breaks, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Base-station density per m².
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    /// SIR cap in dB.
    #[serde(default = "default_t_max_db")]
    pub t_max_db: f64,
}

fn default_t_max_db() -> f64 {
    40.0
}

impl NetworkParams {
    pub fn new(mu: f64, alpha: f64, beta: f64, p: f64) -> Self {
        Self {
            mu,
            alpha,
            beta,
            p,
            t_max_db: default_t_max_db(),
        }
    }

    pub fn from_blockage(mu: f64, alpha: f64, blockage: &BlockageParams) -> Self {
        Self::new(mu, alpha, blockage.beta(), blockage.p())
    }

    pub fn with_t_max_db(mut self, t_max_db: f64) -> Self {
        self.t_max_db = t_max_db;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid(
                "mu",
                format!("must be positive and finite, got {}", self.mu),
            ));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(invalid(
                "alpha",
                format!(
                    "path-loss exponent must exceed 2 for finite interference, got {}",
                    self.alpha
                ),
            ));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(invalid(
                "beta",
                format!("must be finite and >= 0, got {}", self.beta),
            ));
        }
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(invalid(
                "p",
                format!("must be finite and >= 0, got {}", self.p),
            ));
        }
        if !self.t_max_db.is_finite() {
            return Err(invalid("t_max_db", "must be finite"));
        }
        Ok(())
    }

    pub fn has_blockages(&self) -> bool {
        self.beta > 0.0 || self.p > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Connected-user mass allowed beyond the outer truncation point.
    pub outer_tail_mass: f64,
    /// Subinterval budget of each adaptive integration.
    pub max_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            outer_tail_mass: 1e-8,
            max_depth: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(invalid("quadrature", "tolerances must be positive"));
        }
        if !(self.outer_tail_mass > 0.0 && self.outer_tail_mass < 1.0) {
            return Err(invalid("quadrature", "outer_tail_mass must lie in (0, 1)"));
        }
        if self.max_depth < 2 {
            return Err(invalid("quadrature", "max_depth must be at least 2"));
        }
        Ok(())
    }

    fn options(&self) -> QuadOptions {
        QuadOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_intervals: self.max_depth,
        }
    }
}

/// `E|Q| = 2π e^{-p} / β²`; infinite without blockages.
pub fn mean_visible_area(beta: f64, p: f64) -> f64 {
    if beta == 0.0 {
        return f64::INFINITY;
    }
    2.0 * PI * (-p).exp() / (beta * beta)
}

/// Radius of the disk whose area equals the mean visible area.
pub fn effective_visible_range(beta: f64, p: f64) -> f64 {
    if beta == 0.0 {
        return f64::INFINITY;
    }
    (2.0 * (-p).exp()).sqrt() / beta
}

pub fn mean_visible_bs(mu: f64, beta: f64, p: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    mu * mean_visible_area(beta, p)
}

/// `U(x) = ∫₀ˣ t e^{-(βt+p)} dt = e^{-p}/β² [1 - (βx+1) e^{-βx}]`.
pub fn visible_measure(x: f64, beta: f64, p: f64) -> f64 {
    let s = beta * x;
    let bracket_over_s2 = if s < 0.5 {
        // 1 - (1+s)e^{-s} = Σ_{n>=2} (-1)^n (n-1) sⁿ / n!
        let mut term = 0.5; // s^{n-2} / n! at n = 2
        let mut sum = 0.5;
        for n in 3..40 {
            term *= -s / n as f64;
            let add = (n - 1) as f64 * term;
            sum += add;
            if add.abs() < 1e-18 * sum {
                break;
            }
        }
        sum
    } else {
        (1.0 - (s + 1.0) * (-s).exp()) / (s * s)
    };
    (-p).exp() * x * x * bracket_over_s2
}

/// `P{R₀ > x} = exp(-2πμ U(x))`.
pub fn nearest_visible_ccdf(x: f64, mu: f64, beta: f64, p: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    (-2.0 * PI * mu * visible_measure(x, beta, p)).exp()
}

/// `f_{R₀}(x) = 2πμx exp(-(βx + p + 2πμU(x)))`; total mass `1 - ξ`.
pub fn nearest_visible_pdf(x: f64, mu: f64, beta: f64, p: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    2.0 * PI * mu * x * (-(beta * x + p + 2.0 * PI * mu * visible_measure(x, beta, p))).exp()
}

/// Fraction of the plane with no visible base station,
/// `ξ = exp(-2πμ e^{-p} / β²)`.
pub fn silent_fraction(mu: f64, beta: f64, p: f64) -> f64 {
    if beta == 0.0 {
        return if mu > 0.0 { 0.0 } else { 1.0 };
    }
    (-mu * mean_visible_area(beta, p)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    /// `P{SIR > T}` with silent users counted as not covered.
    pub unconditional: f64,
    /// Coverage given that a visible base station exists.
    pub conditional: f64,
    pub abs_error: f64,
}

/// Interference-limited coverage for Rayleigh fading without blockages,
/// `1 / (1 + ρ)`, `ρ = T^{2/α} ∫_{T^{-2/α}}^∞ du / (1 + u^{α/2})`.
pub fn baseline_coverage_no_blockage(t_linear: f64, alpha: f64) -> Result<f64> {
    Ok(1.0 / (1.0 + baseline_rho(t_linear, alpha)?))
}

fn baseline_rho(t: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(
            "baseline coverage",
            format!("threshold must be positive, got {t}"),
        ));
    }
    if !(alpha > 2.0) {
        return Err(invalid("alpha", format!("must exceed 2, got {alpha}")));
    }
    let k = alpha / 2.0;
    let c = t.powf(-2.0 / alpha);
    let opts = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_intervals: 500,
    };
    // ∫_c^1 (empty when c >= 1) plus ∫_{max(c,1)}^∞, the latter mapped by
    // u = w^{-1/(k-1)} onto a finite smooth integral over [0, max(c,1)^{1-k}]
    let head = if c < 1.0 {
        integrate(|u: f64| 1.0 / (1.0 + u.powf(k)), c, 1.0, &opts)?.value
    } else {
        0.0
    };
    let w_max = c.max(1.0).powf(1.0 - k);
    let e = k / (k - 1.0);
    let tail = integrate(|w: f64| 1.0 / (1.0 + w.powf(e)), 0.0, w_max, &opts)?.value / (k - 1.0);
    Ok((head + tail) / c)
}

/// Coverage probability `P{SIR > T}` for nearest-visible association with
/// impenetrable blockages:
///
/// `∫₀^∞ exp(-2πμ ∫ₓ^∞ T x^α e^{-(βt+p)} t / (t^α + T x^α) dt) f_{R₀}(x) dx`.
///
/// Without blockages (`β = p = 0`) this is the baseline closed form. The SIR
/// is capped at `T_max`, so thresholds at or above the cap give zero.
pub fn coverage_probability(
    t_linear: f64,
    params: &NetworkParams,
    quad: &QuadratureConfig,
) -> Result<Coverage> {
    params.validate()?;
    quad.validate()?;
    if !(t_linear > 0.0) {
        return Err(domain(
            "coverage_probability",
            format!("threshold must be positive, got {t_linear}"),
        ));
    }
    if !params.has_blockages() {
        let pc = baseline_coverage_no_blockage(t_linear, params.alpha)?;
        return Ok(Coverage {
            unconditional: pc,
            conditional: pc,
            abs_error: 0.0,
        });
    }
    // SIR is capped at T_max, so no user exceeds thresholds at or above it
    if t_linear >= 10f64.powf(params.t_max_db / 10.0) {
        return Ok(Coverage {
            unconditional: 0.0,
            conditional: 0.0,
            abs_error: 0.0,
        });
    }
    coverage_integral(t_linear, params, f64::INFINITY, quad)
}

/// Coverage when base stations exist only within `radius` of the user: both
/// the serving station and the interferers are confined to the disk, as in a
/// simulation window of that radius. Users with no visible station inside
/// the disk are not covered.
pub fn coverage_probability_in_disk(
    t_linear: f64,
    params: &NetworkParams,
    radius: f64,
    quad: &QuadratureConfig,
) -> Result<Coverage> {
    params.validate()?;
    quad.validate()?;
    if !(t_linear > 0.0) {
        return Err(domain(
            "coverage_probability_in_disk",
            format!("threshold must be positive, got {t_linear}"),
        ));
    }
    if !(radius > 0.0) {
        return Err(invalid("radius", format!("must be > 0, got {radius}")));
    }
    if t_linear >= 10f64.powf(params.t_max_db / 10.0) {
        return Ok(Coverage {
            unconditional: 0.0,
            conditional: 0.0,
            abs_error: 0.0,
        });
    }
    coverage_integral(t_linear, params, radius, quad)
}

fn coverage_integral(
    t_linear: f64,
    params: &NetworkParams,
    radius: f64,
    quad: &QuadratureConfig,
) -> Result<Coverage> {
    let NetworkParams {
        mu, alpha, beta, p, ..
    } = *params;
    let connected = if radius.is_finite() {
        1.0 - nearest_visible_ccdf(radius, mu, beta, p)
    } else {
        1.0 - silent_fraction(mu, beta, p)
    };
    let x_end = outer_truncation(
        mu,
        beta,
        p,
        silent_fraction(mu, beta, p),
        quad.outer_tail_mass,
    )
    .min(radius);

    let failure: Cell<Option<Error>> = Cell::new(None);
    let e_p = (-p).exp();
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let j = match interference_kernel(t_linear, alpha, beta * x, (radius / x).ln(), quad) {
            Ok(j) => j,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        };
        let exponent =
            2.0 * PI * mu * (x * x * e_p * j + visible_measure(x, beta, p)) + beta * x + p;
        2.0 * PI * mu * x * (-exponent).exp()
    };
    let breaks: Vec<f64> = (1..40).map(|k| x_end * 0.5f64.powi(k)).collect();
    let est = integrate_with_breaks(integrand, 0.0, x_end, &breaks, &quad.options())?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let pc = est.value.clamp(0.0, connected);
    Ok(Coverage {
        unconditional: pc,
        conditional: if connected > 0.0 {
            (pc / connected).min(1.0)
        } else {
            0.0
        },
        abs_error: est.abs_error,
    })
}

/// Smallest doubling of a natural scale with `CCDF(x) - ξ <= tail·(1 - ξ)`.
fn outer_truncation(mu: f64, beta: f64, p: f64, xi: f64, tail: f64) -> f64 {
    let target = tail * (1.0 - xi);
    let mut x = if beta > 0.0 {
        (1.0 / beta).min(1.0 / mu.sqrt())
    } else {
        1.0 / mu.sqrt()
    };
    for _ in 0..200 {
        if nearest_visible_ccdf(x, mu, beta, p) - xi <= target {
            return x;
        }
        x *= 2.0;
    }
    x
}

/// `J(s) = ∫₁^U T u e^{-su} / (u^α + T) du` with `U = e^{v_max}`, the
/// interference exponent per unit `x² e^{-p}` after substituting `t = xu`,
/// integrated in `v = ln u`.
fn interference_kernel(
    t: f64,
    alpha: f64,
    s: f64,
    v_max: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    // algebraic tail ∫_U^∞ T u^{1-α} du = T U^{2-α}/(α-2) below 1e-3·abs_tol
    let tol = 1e-3 * quad.abs_tol;
    let ln_u_alg = ((t / ((alpha - 2.0) * tol)).ln() / (alpha - 2.0)).max(1.0);
    let ln_u_exp = if s > 0.0 {
        (1.0 + 40.0 / s).ln()
    } else {
        f64::INFINITY
    };
    let v_end = ln_u_alg.min(ln_u_exp).min(700.0).min(v_max);
    if v_end <= 0.0 {
        return Ok(0.0);
    }
    let opts = QuadOptions {
        rel_tol: (quad.rel_tol * 1e-3).max(1e-12),
        abs_tol: tol,
        max_intervals: quad.max_depth,
    };
    let f = |v: f64| {
        let u = v.exp();
        t * u * u * (-s * u).exp() / (u.powf(alpha) + t)
    };
    let step = (v_end / 48.0).max(0.5);
    let breaks: Vec<f64> = (1..)
        .map(|k| k as f64 * step)
        .take_while(|&b| b < v_end)
        .collect();
    Ok(integrate_with_breaks(f, 0.0, v_end, &breaks, &opts)?.value)
}

/// Average rate `τ = (1/ln 2) ∫₀^{T_max} P_c(t)/(t+1) dt` in bit/s/Hz.
///
/// Integrated over `t` in dB on 5 dB panels; the part below -60 dB, where
/// `P_c ≈ P_c(10^{-6})`, is added in closed form.
pub fn average_rate(params: &NetworkParams, quad: &QuadratureConfig) -> Result<f64> {
    average_rate_with(
        params.t_max_db,
        |t| coverage_probability(t, params, quad).map(|c| c.unconditional),
        quad,
    )
}

/// Rate integral for an arbitrary coverage curve `pc(t_linear)`.
pub fn average_rate_with(
    t_max_db: f64,
    pc: impl Fn(f64) -> Result<f64>,
    quad: &QuadratureConfig,
) -> Result<f64> {
    const LO_DB: f64 = -60.0;
    if t_max_db <= LO_DB {
        let t = 10f64.powf(t_max_db / 10.0);
        return Ok(pc(t)? * t.ln_1p() / LN_2);
    }
    let failure: Cell<Option<Error>> = Cell::new(None);
    let scale = std::f64::consts::LN_10 / 10.0;
    let f = |db: f64| {
        let t = 10f64.powf(db / 10.0);
        match pc(t) {
            Ok(v) => v * t / (t + 1.0) * scale,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let breaks: Vec<f64> = (1..)
        .map(|k| LO_DB + 5.0 * k as f64)
        .take_while(|&b| b < t_max_db)
        .collect();
    let opts = QuadOptions {
        rel_tol: quad.rel_tol,
        abs_tol: quad.abs_tol,
        max_intervals: quad.max_depth,
    };
    let body = integrate_with_breaks(f, LO_DB, t_max_db, &breaks, &opts)?.value;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let t_lo = 10f64.powf(LO_DB / 10.0);
    let head = pc(t_lo)? * t_lo.ln_1p();
    Ok((body + head) / LN_2)
}

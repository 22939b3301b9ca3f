//! Closed-form statistics of a single link of length `R` crossing a Boolean
//! scheme of blockages with parameters `(β, p)`.
//!
//! The blockage count on the link is Poisson with mean `βR + p`. Everything
//! else here (LOS and indoor probabilities, the penetration-loss law, the
//! blockage-aware link budget) follows from that count together with the
//! per-building loss ratio `γ`.

use std::f64::consts::{LN_10, PI};

use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta as BetaLaw, ContinuousCDF};

use crate::error::{domain, invalid, Error, Result};
use crate::processes::DistSpec;
use crate::quad::{integrate, QuadOptions};
use crate::special::bessel_i1_scaled;

/// `0.1·ln 10`: rate of `-[γ]` (loss in dB) when `γ ~ U[0, 1]`.
pub const DB_RATE: f64 = 0.1 * LN_10;

pub fn derive_beta_p(lambda: f64, mean_length: f64, mean_width: f64) -> (f64, f64) {
    (
        2.0 * lambda * (mean_length + mean_width) / PI,
        lambda * mean_length * mean_width,
    )
}

/// Mean number of blockages crossing a link of length `r`.
pub fn expected_blockages(beta: f64, p: f64, r: f64) -> f64 {
    beta * r + p
}

pub fn los_probability(beta: f64, p: f64, r: f64) -> f64 {
    (-(beta * r + p)).exp()
}

/// Probability that a fixed location lies inside some blockage.
pub fn indoor_probability(p: f64) -> f64 {
    -(-p).exp_m1()
}

/// Per-building penetration power-loss ratio `γ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaModel {
    /// `γ ≡ 0`; a link crossed by any building carries no power.
    Impenetrable,
    Constant {
        gamma: f64,
    },
    /// `γ ~ U[0, 1]`, i.e. the loss in dB is exponential.
    Uniform01,
    /// Only the first two moments are known.
    Custom {
        mean: f64,
        mean_sq: f64,
    },
}

impl GammaModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GammaModel::Constant { gamma } if !(0.0..=1.0).contains(&gamma) => {
                Err(invalid("gamma", format!("must lie in [0, 1], got {gamma}")))
            }
            GammaModel::Custom { mean, mean_sq } => {
                if !(0.0..=1.0).contains(&mean) || !(0.0..=1.0).contains(&mean_sq) {
                    return Err(invalid("gamma", "moments must lie in [0, 1]"));
                }
                // E[γ²] ∈ [E[γ]², E[γ]] for γ ∈ [0, 1]
                let slack = 1e-12;
                if mean_sq < mean * mean - slack || mean_sq > mean + slack {
                    return Err(invalid(
                        "gamma",
                        format!(
                            "need mean² <= mean_sq <= mean, got mean={mean}, mean_sq={mean_sq}"
                        ),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_impenetrable(&self) -> bool {
        match *self {
            GammaModel::Impenetrable => true,
            GammaModel::Constant { gamma } => gamma == 0.0,
            _ => false,
        }
    }

    /// `E[γⁿ]` with the convention `0⁰ = 1`.
    pub fn moment(&self, n: u32) -> Result<f64> {
        if n == 0 {
            return Ok(1.0);
        }
        match *self {
            GammaModel::Impenetrable => Ok(0.0),
            GammaModel::Constant { gamma } => Ok(gamma.powi(n as i32)),
            GammaModel::Uniform01 => Ok(1.0 / (n as f64 + 1.0)),
            GammaModel::Custom { mean, .. } if n == 1 => Ok(mean),
            GammaModel::Custom { mean_sq, .. } if n == 2 => Ok(mean_sq),
            GammaModel::Custom { .. } => Err(Error::Unsupported {
                op: "moments above the second",
                model: "a custom gamma model".into(),
            }),
        }
    }

    pub fn mean(&self) -> f64 {
        self.moment(1).expect("first moment always defined")
    }

    /// Laplace transform `E[exp(-t·|[γ]|)]` of the per-building loss in dB.
    pub fn laplace_db(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain("laplace_db", format!("t must be >= 0, got {t}")));
        }
        match *self {
            _ if self.is_impenetrable() => Err(Error::Unsupported {
                op: "the dB-loss Laplace transform",
                model: "impenetrable blockages (infinite loss)".into(),
            }),
            GammaModel::Uniform01 => Ok(DB_RATE / (DB_RATE + t)),
            // |[γ]| = -10·log10 γ, so exp(-t|[γ]|) = γ^{10 t / ln 10}
            GammaModel::Constant { gamma } => Ok(gamma.powf(10.0 * t / LN_10)),
            _ => Err(Error::Unsupported {
                op: "the dB-loss Laplace transform",
                model: "a custom gamma model (only two moments known)".into(),
            }),
        }
    }

    /// One draw of `γ`. Custom models draw from the beta law with the given
    /// first two moments (a point mass when the variance vanishes, Bernoulli
    /// when it is maximal).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            GammaModel::Impenetrable => 0.0,
            GammaModel::Constant { gamma } => gamma,
            GammaModel::Uniform01 => rng.random::<f64>(),
            GammaModel::Custom { mean, mean_sq } => {
                let var = mean_sq - mean * mean;
                let cap = mean * (1.0 - mean);
                if var <= 1e-15 {
                    mean
                } else if var >= cap - 1e-15 {
                    if rng.random::<f64>() < mean {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    let n = cap / var - 1.0;
                    BetaDist::new(mean * n, (1.0 - mean) * n)
                        .expect("positive shapes")
                        .sample(rng)
                }
            }
        }
    }
}

/// Building and antenna heights for the height-thinning factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightContext {
    pub h_base: f64,
    pub h_user: f64,
    pub heights: DistSpec,
}

/// Probability that a building whose footprint crosses the link is tall
/// enough to cut the straight ray between user and base station:
/// `η = 1 - (1/(H_B - H_U)) ∫_{H_U}^{H_B} F_H(h) dh`.
pub fn height_factor(ctx: &HeightContext) -> Result<f64> {
    let HeightContext {
        h_base,
        h_user,
        heights,
    } = *ctx;
    if !(h_user >= 0.0 && h_base > h_user && h_base.is_finite()) {
        return Err(invalid(
            "heights",
            format!("need h_base > h_user >= 0, got {h_base}, {h_user}"),
        ));
    }
    heights.validate("heights")?;
    let span = h_base - h_user;
    let swept = match (heights.cdf_integral(h_base), heights.cdf_integral(h_user)) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => integrate(|h| heights.cdf(h), h_user, h_base, &QuadOptions::default())?.value,
    };
    Ok((1.0 - swept / span).clamp(0.0, 1.0))
}

/// `L_{[S]}(t) = exp((βR + p)(L_{[γ]}(t) - 1))`.
pub fn laplace_s_db(t: f64, gamma: &GammaModel, beta: f64, p: f64, r: f64) -> Result<f64> {
    let lg = gamma.laplace_db(t)?;
    Ok((expected_blockages(beta, p, r) * (lg - 1.0)).exp())
}

/// Atom at `y = 1` and continuous density at `y` of the link loss `S` when
/// `γ ~ U[0, 1]`:
/// `f(y) = e^{-m} √(m / (-ln y)) I₁(2√(-m ln y))`, `m = βR + p`.
pub fn pdf_s_uniform_gamma(y: f64, beta: f64, p: f64, r: f64) -> Result<(f64, f64)> {
    let m = expected_blockages(beta, p, r);
    if !(m > 0.0) {
        return Err(domain(
            "pdf_s_uniform_gamma",
            format!("need βR + p > 0, got {m}"),
        ));
    }
    if !(y > 0.0 && y <= 1.0) {
        return Err(domain(
            "pdf_s_uniform_gamma",
            format!("y must lie in (0, 1], got {y}"),
        ));
    }
    Ok(((-m).exp(), density_in_log_loss(m, -y.ln()) / y))
}

/// Density of `-ln S` at `l > 0` (continuous part), `= f_S(e^{-l}) e^{-l}`.
pub(crate) fn density_in_log_loss(m: f64, l: f64) -> f64 {
    if l <= 0.0 {
        return m * (-m).exp();
    }
    let z = 2.0 * (m * l).sqrt();
    (m / l).sqrt() * (z - m - l).exp() * bessel_i1_scaled(z)
}

/// `P{S <= y}` for `γ ~ U[0, 1]`, by quadrature of the closed-form density in
/// the log-loss variable.
pub fn cdf_s_uniform_gamma(y: f64, beta: f64, p: f64, r: f64) -> Result<f64> {
    let m = expected_blockages(beta, p, r);
    if !(m > 0.0) {
        return Err(domain(
            "cdf_s_uniform_gamma",
            format!("need βR + p > 0, got {m}"),
        ));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y >= 1.0 {
        return Ok(1.0);
    }
    let l_lo = -y.ln();
    // the integrand decays like exp(-l + 2√(ml)); past l_hi the tail is < 1e-16
    let l_hi = l_lo.max(40.0 + 8.0 * m + 8.0 * m.sqrt() * 10.0);
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_intervals: 4000,
    };
    let v = integrate(|l| density_in_log_loss(m, l), l_lo, l_hi, &opts)?.value;
    Ok(v.clamp(0.0, 1.0))
}

/// `E[Sⁿ] = exp(-(βR + p)(1 - E[γⁿ]))`.
pub fn moment_s(n: u32, gamma: &GammaModel, beta: f64, p: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("moment_s", "n must be >= 1"));
    }
    let g = gamma.moment(n)?;
    Ok((-expected_blockages(beta, p, r) * (1.0 - g)).exp())
}

/// Distribution of the link loss `S ∈ [0, 1]`: an atom `δ₀` at 1 (LOS) plus
/// either an atom at 0 (impenetrable, exact) or a beta density on `(0, 1)`
/// carrying mass `1 - δ₀` (moment-matched approximation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossModel {
    Bernoulli { delta0: f64 },
    BetaMixture { delta0: f64, a: f64, b: f64 },
}

impl LossModel {
    pub fn for_link(gamma: &GammaModel, beta: f64, p: f64, r: f64) -> Result<Self> {
        if gamma.is_impenetrable() {
            Ok(LossModel::Bernoulli {
                delta0: los_probability(beta, p, r),
            })
        } else {
            beta_approx(gamma, beta, p, r)
        }
    }

    pub fn delta0(&self) -> f64 {
        match *self {
            LossModel::Bernoulli { delta0 } | LossModel::BetaMixture { delta0, .. } => delta0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LossModel::Bernoulli { .. })
    }

    pub fn moment(&self, n: u32) -> f64 {
        match *self {
            LossModel::Bernoulli { delta0 } => {
                if n == 0 {
                    1.0
                } else {
                    delta0
                }
            }
            LossModel::BetaMixture { delta0, a, b } => {
                let beta_moment: f64 = (0..n)
                    .map(|k| (a + k as f64) / (a + b + k as f64))
                    .product();
                (1.0 - delta0) * beta_moment + delta0
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match *self {
            LossModel::Bernoulli { delta0 } => 1.0 - delta0,
            LossModel::BetaMixture { delta0, a, b } => {
                let law = BetaLaw::new(a, b).expect("validated shapes");
                (1.0 - delta0) * law.cdf(x)
            }
        }
    }
}

/// Moment-matched beta mixture for a penetrable gamma model.
///
/// With `m = βR + p`, `δ₀ = e^{-m}`, `δ₁ = δ₀^{1-E[γ]}`, `δ₂ = δ₀^{1-E[γ²]}`, the
/// beta part must have mean `m₁ = (δ₁ - δ₀)/(1 - δ₀)` and second moment
/// `m₂ = (δ₂ - δ₀)/(1 - δ₀)`, giving `a + b = (m₁ - m₂)/(m₂ - m₁²)`,
/// `a = m₁(a + b)`. Equivalently
/// `a = (δ₂-δ₁)(δ₁-δ₀) / ((δ₁-δ₀)² - (δ₂-δ₀)(1-δ₀))` and
/// `b = (δ₂-δ₁)(1-δ₁) / ((δ₁-δ₀)² - (δ₂-δ₀)(1-δ₀))`.
pub fn beta_approx(gamma: &GammaModel, beta: f64, p: f64, r: f64) -> Result<LossModel> {
    gamma.validate()?;
    if gamma.is_impenetrable() {
        return Err(Error::Unsupported {
            op: "the beta approximation",
            model: "impenetrable blockages (use the exact Bernoulli law)".into(),
        });
    }
    let m = expected_blockages(beta, p, r);
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain("beta_approx", format!("need βR + p > 0, got {m}")));
    }
    let g1 = gamma.moment(1)?;
    let g2 = gamma.moment(2)?;
    // (δₖ - δ₀)/(1 - δ₀) = expm1(m E[γᵏ]) / expm1(m), cancellation-free
    let denom = m.exp_m1();
    let m1 = (m * g1).exp_m1() / denom;
    let m2 = (m * g2).exp_m1() / denom;
    let var = m2 - m1 * m1;
    if !(m1 > 0.0 && m1 < 1.0) || !(var > 0.0) || !(m1 - m2 > 0.0) {
        return Err(Error::DegenerateMoments(format!(
            "beta part mean {m1}, second moment {m2} (E[γ]={g1}, E[γ²]={g2}, βR+p={m})"
        )));
    }
    let total = (m1 - m2) / var;
    Ok(LossModel::BetaMixture {
        delta0: (-m).exp(),
        a: m1 * total,
        b: (1.0 - m1) * total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkType {
    /// Endpoints unconstrained.
    General,
    /// Both endpoints outside every building.
    OutdoorOutdoor,
    /// Exactly one endpoint inside a building.
    IndoorOutdoor,
}

/// Mean received power `M·E[g]·E[S]/R^α` on a link of length `r`, with `E[S]`
/// conditioned on the endpoint configuration.
pub fn mean_received_power(
    m: f64,
    r: f64,
    alpha: f64,
    gamma: &GammaModel,
    beta: f64,
    p: f64,
    link: LinkType,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain(
            "mean_received_power",
            format!("distance must be > 0, got {r}"),
        ));
    }
    let eg = gamma.mean();
    let path = m / r.powf(alpha);
    let loss = match link {
        LinkType::General => (-(beta * r + p) * (1.0 - eg)).exp(),
        LinkType::OutdoorOutdoor => (-(beta * r - p) * (1.0 - eg)).exp(),
        LinkType::IndoorOutdoor => {
            // (1 - e^{-E[γ]p}) / (1 - e^{-p}) → E[γ] as p → 0
            let wall = if p > 0.0 {
                (-eg * p).exp_m1() / (-p).exp_m1()
            } else {
                eg
            };
            wall * (-beta * r * (1.0 - eg)).exp()
        }
    };
    Ok(path * loss)
}

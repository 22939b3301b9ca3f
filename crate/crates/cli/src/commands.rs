//! The four run modes. Each writes its CSV files into the output directory
//! and returns their paths.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use blockage_core::link_stats::los_probability;
use blockage_core::montecarlo::{
    compare_models, coverage_curve, estimate_connectivity, simulate, Scenario,
};
use blockage_core::network::{
    average_rate, coverage_probability, effective_visible_range, mean_visible_area,
    mean_visible_bs, nearest_visible_ccdf, silent_fraction, visible_measure, NetworkParams,
    QuadratureConfig,
};
use blockage_core::stats::Z95;
use serde::Serialize;

use crate::config::{Mode, RunConfig, SweepVariable};
use crate::error::{CliError, Result};
use crate::table::{Format, Table};

pub const ANALYTIC_COVERAGE: &str = "analytic_coverage.csv";
pub const CONNECTIVITY: &str = "connectivity.csv";
pub const RATE: &str = "rate.csv";
pub const MC_COVERAGE: &str = "mc_coverage.csv";
pub const MC_CONNECTIVITY: &str = "mc_connectivity.csv";
pub const COMPARISON: &str = "comparison.csv";
pub const SWEEP: &str = "sweep.csv";
pub const SUMMARY: &str = "summary.json";

#[derive(Serialize)]
struct Summary<'a> {
    mode: Mode,
    seed: u64,
    beta: f64,
    p: f64,
    files: Vec<String>,
    scenario: &'a Scenario,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn network(s: &Scenario) -> NetworkParams {
    NetworkParams::from_blockage(s.mu, s.alpha, &s.blockage).with_t_max_db(s.t_max_db)
}

fn warn_analytic_scope(s: &Scenario) {
    if !s.gamma.is_impenetrable() {
        log::warn!("analytic coverage treats buildings as impenetrable; the gamma model only affects simulation");
    }
    if s.blockage.height.is_some() {
        log::warn!("analytic coverage ignores building heights");
    }
}

fn replay_comment(s: &Scenario) -> String {
    format!(
        "seed={} trials={} window_radius_m={} geometry={}",
        s.seed,
        s.trials,
        s.window.radius,
        serde_json::to_string(&s.geometry)
            .expect("enum serializes")
            .trim_matches('"')
    )
}

fn analytic_coverage(
    s: &Scenario,
    grid: &[f64],
    quad: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    let net = network(s);
    grid.iter()
        .map(|&db| {
            let c = coverage_probability(db_to_linear(db), &net, quad)?;
            Ok((c.unconditional, c.conditional))
        })
        .collect()
}

/// Runs the configured mode. The config must already be validated.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = cfg.output_dir()?;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.display().to_string(),
        source,
    })?;
    let mode = cfg.mode()?;
    let mut files = match mode {
        Mode::Analyze => analyze(cfg, dir)?,
        Mode::Simulate => simulate_mode(cfg, dir)?,
        Mode::Compare => compare(cfg, dir)?,
        Mode::Sweep => sweep(cfg, dir)?,
    };
    let summary = Summary {
        mode,
        seed: cfg.scenario.seed,
        beta: cfg.scenario.blockage.beta(),
        p: cfg.scenario.blockage.p(),
        files: files
            .iter()
            .filter_map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        scenario: &cfg.scenario,
    };
    let path = dir.join(SUMMARY);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&path, text + "\n").map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })?;
    files.push(path);
    Ok(files)
}

fn save(table: &Table, dir: &Path, name: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    table.write_to(&path)?;
    log::info!("wrote {}", path.display());
    files.push(path);
    Ok(())
}

fn analyze(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let s = &cfg.scenario;
    warn_analytic_scope(s);
    let quad = QuadratureConfig::default();
    let mut files = Vec::new();

    let mut cov = Table::new(&[
        ("T_dB", Format::Exact),
        ("Pc", Format::Prob),
        ("Pc_conditional", Format::Prob),
    ]);
    for (&db, (pc, cond)) in cfg
        .t_grid_db
        .iter()
        .zip(analytic_coverage(s, &cfg.t_grid_db, &quad)?)
    {
        cov.push(vec![db.into(), pc.into(), cond.into()]);
    }
    save(&cov, dir, ANALYTIC_COVERAGE, &mut files)?;

    let (beta, p) = (s.blockage.beta(), s.blockage.p());
    let mut conn = Table::new(&[
        ("beta", Format::Sig6),
        ("p", Format::Sig6),
        ("meanVisibleArea", Format::Sig6),
        ("R_eff", Format::Sig6),
        ("meanVisibleBs", Format::Sig6),
        ("xi", Format::Prob),
    ]);
    conn.push(vec![
        beta.into(),
        p.into(),
        mean_visible_area(beta, p).into(),
        effective_visible_range(beta, p).into(),
        mean_visible_bs(s.mu, beta, p).into(),
        silent_fraction(s.mu, beta, p).into(),
    ]);
    save(&conn, dir, CONNECTIVITY, &mut files)?;

    let mut rate = Table::new(&[("tau", Format::Sig6)]);
    rate.push(vec![average_rate(&network(s), &quad)?.into()]);
    save(&rate, dir, RATE, &mut files)?;
    Ok(files)
}

fn simulate_mode(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let s = &cfg.scenario;
    let mut files = Vec::new();
    log::info!("simulating {} trials", s.trials);
    let samples = simulate(s, cfg.execution)?;
    let curve = coverage_curve(&samples, &cfg.t_grid_db);
    let mut cov = Table::new(&[
        ("T_dB", Format::Exact),
        ("Pc", Format::Prob),
        ("ciHalfWidth", Format::Prob),
        ("n", Format::Int),
    ])
    .with_comment(replay_comment(s));
    for i in 0..curve.grid.len() {
        cov.push(vec![
            curve.grid[i].into(),
            curve.values[i].into(),
            curve.half_widths[i].into(),
            curve.n.into(),
        ]);
    }
    save(&cov, dir, MC_COVERAGE, &mut files)?;

    let report =
        estimate_connectivity(s, &cfg.link_lengths_m, &cfg.distance_grid_m, cfg.execution)?;
    let (beta, p) = (s.blockage.beta(), s.blockage.p());
    let radius = s.window.radius;
    let mut conn = Table::new(&[
        ("metric", Format::Text),
        ("x", Format::Exact),
        ("estimate", Format::Sig6),
        ("ciHalfWidth", Format::Sig6),
        ("analytic", Format::Sig6),
    ])
    .with_comment(replay_comment(s));
    for link in &report.links {
        let r = link.length;
        conn.push(vec![
            "mean_blockages".into(),
            r.into(),
            link.mean_count.into(),
            (Z95 * link.count_std_err).into(),
            (beta * r + p).into(),
        ]);
        conn.push(vec![
            "los_probability".into(),
            r.into(),
            link.los_frequency.into(),
            link.los_half_width.into(),
            los_probability(beta, p, r).into(),
        ]);
        conn.push(vec![
            "poisson_gof_p_value".into(),
            r.into(),
            link.poisson_fit.p_value.into(),
            f64::NAN.into(),
            f64::NAN.into(),
        ]);
    }
    // window-level quantities are compared with their in-window analytic values
    let clipped = 2.0 * PI * visible_measure(radius, beta, p);
    let silent = &report.silent_fraction;
    conn.push(vec![
        "silent_fraction".into(),
        0.0.into(),
        silent.estimate.into(),
        silent.half_width.into(),
        nearest_visible_ccdf(radius, s.mu, beta, p).into(),
    ]);
    let indoor = &report.indoor_fraction;
    conn.push(vec![
        "indoor_fraction".into(),
        0.0.into(),
        indoor.estimate.into(),
        indoor.half_width.into(),
        (-(-p).exp_m1()).into(),
    ]);
    let bs = &report.mean_visible_bs;
    conn.push(vec![
        "mean_visible_bs".into(),
        0.0.into(),
        bs.mean.into(),
        (Z95 * bs.std_err).into(),
        (s.mu * clipped).into(),
    ]);
    let area = &report.mean_visible_area;
    conn.push(vec![
        "mean_visible_area".into(),
        0.0.into(),
        area.mean.into(),
        (Z95 * area.std_err).into(),
        clipped.into(),
    ]);
    let ccdf = &report.nearest_visible_ccdf;
    for i in 0..ccdf.grid.len() {
        let x = ccdf.grid[i];
        conn.push(vec![
            "nearest_visible_ccdf".into(),
            x.into(),
            ccdf.values[i].into(),
            ccdf.half_widths[i].into(),
            nearest_visible_ccdf(x, s.mu, beta, p).into(),
        ]);
    }
    save(&conn, dir, MC_CONNECTIVITY, &mut files)?;
    Ok(files)
}

fn compare(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let s = &cfg.scenario;
    warn_analytic_scope(s);
    let quad = QuadratureConfig::default();
    let analytic = analytic_coverage(s, &cfg.t_grid_db, &quad)?;
    log::info!("simulating {} trials per geometry", s.trials);
    let cmp = compare_models(s, s, &cfg.t_grid_db, cfg.execution)?;
    let mut table = Table::new(&[
        ("T_dB", Format::Exact),
        ("Pc_analytic", Format::Prob),
        ("Pc_boolean", Format::Prob),
        ("ciBoolean", Format::Prob),
        ("Pc_lattice", Format::Prob),
        ("ciLattice", Format::Prob),
        ("n", Format::Int),
    ])
    .with_comment(replay_comment(s));
    for (i, &db) in cfg.t_grid_db.iter().enumerate() {
        table.push(vec![
            db.into(),
            analytic[i].0.into(),
            cmp.boolean.values[i].into(),
            cmp.boolean.half_widths[i].into(),
            cmp.lattice.values[i].into(),
            cmp.lattice.half_widths[i].into(),
            cmp.boolean.n.into(),
        ]);
    }
    let mut files = Vec::new();
    save(&table, dir, COMPARISON, &mut files)?;
    Ok(files)
}

fn sweep(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep", "required in sweep mode"))?;
    warn_analytic_scope(&cfg.scenario);
    let quad = QuadratureConfig::default();
    let headers: Vec<String> = std::iter::once(sw.variable.name().to_string())
        .chain(cfg.t_grid_db.iter().map(|db| format!("Pc_{db}dB")))
        .collect();
    let mut columns: Vec<(&str, Format)> = vec![(headers[0].as_str(), Format::Exact)];
    columns.extend(headers[1..].iter().map(|h| (h.as_str(), Format::Prob)));
    let mut table = Table::new(&columns);
    for &v in &sw.grid {
        let mut s = cfg.scenario.clone();
        match sw.variable {
            SweepVariable::Mu => s.mu = v,
            SweepVariable::Lambda => s.blockage.lambda = v,
        }
        let mut row = vec![v.into()];
        row.extend(
            analytic_coverage(&s, &cfg.t_grid_db, &quad)?
                .into_iter()
                .map(|(pc, _)| pc.into()),
        );
        table.push(row);
    }
    let mut files = Vec::new();
    save(&table, dir, SWEEP, &mut files)?;
    Ok(files)
}

//! CSV emitters for the three experiment kinds.
//!
//! All floating-point values are written with 17 significant digits in
//! scientific notation with a `.` separator, which round-trips f64 exactly
//! and is locale-independent; identical configs therefore produce
//! byte-identical files.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use backflow_core::bounds::{evolve_pair, sweep_curves, Quantifier, Trajectory};
use backflow_core::divergences::TelescopicParameter;

use crate::config::ExperimentConfig;

/// 17 significant digits, scientific notation.
pub fn fmt(value: f64) -> String {
    format!("{value:.16e}")
}

fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .with_context(|| format!("creating output file {}", path.display()))?;
    file.write_all(contents.as_bytes())?;
    file.flush()?;
    Ok(())
}

fn evolve(cfg: &ExperimentConfig) -> Result<Trajectory> {
    let scenario = cfg.scenario()?;
    Ok(evolve_pair(&scenario)?)
}

/// Per-time distinguishability and bound contributions for the fixed
/// quantifier triple TD, TRE at the reference parameter and sqrt-QJSD.
pub fn run_trajectory(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let traj = evolve(cfg)?;
    let quantifiers = [
        Quantifier::TraceDistance,
        Quantifier::Tre(TelescopicParameter::optimal()),
        Quantifier::SqrtQjsd,
    ];
    let labels = ["td", "tre", "sqrt_qjsd"];
    let points = sweep_curves(&traj, &quantifiers)?;

    let mut csv = String::from("time");
    for label in labels {
        csv.push_str(&format!(
            ",{label}_system,{label}_env,{label}_corr_rho,{label}_corr_sigma"
        ));
    }
    csv.push('\n');
    for (i, &t) in traj.times().iter().enumerate() {
        csv.push_str(&fmt(t));
        for q in 0..quantifiers.len() {
            let b = &points[i].rhs[q];
            for value in [points[i].system[q], b.env, b.corr_rho, b.corr_sigma] {
                csv.push(',');
                csv.push_str(&fmt(value));
            }
        }
        csv.push('\n');
    }
    write_atomically(out, &csv)
}

/// Fixed reference time, sweep over the earlier time `s`: per quantifier the
/// revival, the combined bound, the slack and the three bound terms.
pub fn run_bound_slice(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let traj = evolve(cfg)?;
    let quantifiers = cfg.quantifiers();
    let horizon = *traj.times().last().expect("nonempty grid");
    let t_idx = cfg.t_ref_index(horizon, traj.len())?;
    let points = sweep_curves(&traj, &quantifiers)?;

    let mut csv = String::from("s");
    for q in &quantifiers {
        let label = q.label();
        csv.push_str(&format!(
            ",{label}_lhs,{label}_rhs_total,{label}_slack,{label}_rhs_env,{label}_rhs_corr_rho,{label}_rhs_corr_sigma"
        ));
    }
    csv.push('\n');
    for s in 0..=t_idx {
        csv.push_str(&fmt(traj.times()[s]));
        for (qi, _) in quantifiers.iter().enumerate() {
            let lhs = points[t_idx].system[qi] - points[s].system[qi];
            let b = &points[s].rhs[qi];
            for value in [lhs, b.total, b.total - lhs, b.env, b.corr_rho, b.corr_sigma] {
                csv.push(',');
                csv.push_str(&fmt(value));
            }
        }
        csv.push('\n');
    }
    write_atomically(out, &csv)
}

/// Full `(s, t)` upper-triangular grid in long format.
pub fn run_bound_surface(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let traj = evolve(cfg)?;
    let quantifiers = cfg.quantifiers();
    let points = sweep_curves(&traj, &quantifiers)?;

    let mut csv = String::from("s,t,quantifier,lhs,rhs_total,slack\n");
    for s in 0..traj.len() {
        for t in s..traj.len() {
            for (qi, q) in quantifiers.iter().enumerate() {
                let lhs = points[t].system[qi] - points[s].system[qi];
                let b = &points[s].rhs[qi];
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt(traj.times()[s]),
                    fmt(traj.times()[t]),
                    q.label(),
                    fmt(lhs),
                    fmt(b.total),
                    fmt(b.total - lhs),
                ));
            }
        }
    }
    write_atomically(out, &csv)
}

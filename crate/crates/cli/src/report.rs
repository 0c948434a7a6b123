//! The `verify` subcommand: run every property suite, print a line per
//! property and optionally write the report as CSV.

use std::path::Path;

use anyhow::{bail, Context, Result};
use backflow_core::verify::{run_all, PropertyReport, VerifyOptions};

use crate::experiments::fmt;

pub fn run_verify(seed: u64, negative_control: bool, out: Option<&Path>) -> Result<()> {
    let options = VerifyOptions {
        seed,
        corrupt_contractivity: negative_control,
        ..Default::default()
    };
    let reports = run_all(&options)?;

    for r in &reports {
        println!(
            "{}: {} ({} checks, worst slack {:.3e}, tolerance {:.1e})",
            r.name,
            if r.passed() { "pass" } else { "FAIL" },
            r.checks,
            r.worst_slack,
            r.tolerance
        );
    }

    if let Some(path) = out {
        let mut csv = String::from("property,passed,checks,worst_slack,tolerance\n");
        for r in &reports {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                r.name,
                r.passed(),
                r.checks,
                fmt(r.worst_slack),
                fmt(r.tolerance)
            ));
        }
        std::fs::write(path, csv).with_context(|| format!("writing report {}", path.display()))?;
    }

    let failures: Vec<&PropertyReport> = reports.iter().filter(|r| !r.passed()).collect();
    if !failures.is_empty() {
        bail!(
            "{} propert{} failed: {}",
            failures.len(),
            if failures.len() == 1 { "y" } else { "ies" },
            failures
                .iter()
                .map(|r| r.name)
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    println!("all {} properties passed", reports.len());
    Ok(())
}

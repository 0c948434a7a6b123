//! Joint evolution of a state pair and the upper bounds on revivals of
//! reduced-state distinguishability.
//!
//! A revival of a contractive quantifier between the two evolved system
//! states signals information flowing back from the environment. For each
//! quantifier the revival between times `s <= t` is bounded by three terms
//! evaluated at `s`: the distinguishability of the environment marginals and
//! the two system-environment correlation terms, combined with
//! quantifier-specific roots and prefactors:
//!
//! - trace distance: plain sum of the three trace distances;
//! - TRE at parameter `mu`: prefactor `(2 mu^2 log^3(1/mu))^(-1/4)` times the
//!   sum of fourth roots;
//! - alternate TRE bound: prefactor `(2 mu^2 log(1/mu))^(-1/2)`, fourth roots
//!   on the correlation terms and a square root on the environment term;
//! - sqrt-QJSD: plain sum of square roots (metric property, no prefactor).

use rayon::prelude::*;

use crate::divergences::{
    qjsd, sqrt_qjsd, telescopic_re, trace_distance, tre_bound_prefactor, tre_bound_prefactor_alt,
    TelescopicParameter,
};
use crate::linalg::{propagator, HermitianMatrix, Subsystem};
use crate::models::{build_hamiltonian, ScenarioSpec};
use crate::states::{BipartiteState, DensityMatrix};
use crate::{Error, Result};

/// Slack tolerance for the bound theorems: an order of magnitude above the
/// spectral error accumulated at dimensions up to 64.
pub const BOUND_SLACK_TOL: f64 = 1e-9;

/// Snapshot of both global states and all four marginals at one grid time.
#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    pub rho_global: BipartiteState,
    pub sigma_global: BipartiteState,
    pub rho_s: DensityMatrix,
    pub sigma_s: DensityMatrix,
    pub rho_e: DensityMatrix,
    pub sigma_e: DensityMatrix,
}

/// Uniform-grid evolution of a fixed initial pair under the joint unitary.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self, index: usize) -> &TrajectoryStep {
        &self.steps[index]
    }

    pub fn steps(&self) -> &[TrajectoryStep] {
        &self.steps
    }

    pub fn system_dim(&self) -> usize {
        self.steps[0].rho_global.system_dim()
    }

    pub fn environment_dim(&self) -> usize {
        self.steps[0].rho_global.environment_dim()
    }
}

/// Evolve both initial products under the same propagator and record all
/// marginals on a uniform grid over `[0, horizon]`.
pub fn evolve_pair(scenario: &ScenarioSpec) -> Result<Trajectory> {
    scenario.validate()?;
    let h = build_hamiltonian(&scenario.model)?;
    let h_spec = h.eigh()?;
    let d_s = scenario.model.system_dim();
    let d_e = scenario.model.environment_dim();
    let rho0 = BipartiteState::product(&scenario.rho_s0, &scenario.env0)?;
    let sigma0 = BipartiteState::product(&scenario.sigma_s0, &scenario.env0)?;
    let n = scenario.grid_points;
    let times: Vec<f64> = (0..n)
        .map(|i| scenario.horizon * i as f64 / (n - 1) as f64)
        .collect();

    let steps: Vec<TrajectoryStep> = times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| -> Result<TrajectoryStep> {
            if i == 0 {
                // Keep t = 0 exact: identical environment marginals and
                // product globals to the bit, not just within roundoff.
                return Ok(TrajectoryStep {
                    rho_global: rho0.clone(),
                    sigma_global: sigma0.clone(),
                    rho_s: scenario.rho_s0.clone(),
                    sigma_s: scenario.sigma_s0.clone(),
                    rho_e: scenario.env0.clone(),
                    sigma_e: scenario.env0.clone(),
                });
            }
            let u = propagator(&h_spec, t);
            let u_dag = u.adjoint();
            let conjugate = |state: &BipartiteState| -> Result<BipartiteState> {
                let m = &(&u * state.state().matrix()) * &u_dag;
                BipartiteState::new(d_s, d_e, DensityMatrix::new(HermitianMatrix::new(m)?)?)
            };
            let rho_global = conjugate(&rho0)?;
            let sigma_global = conjugate(&sigma0)?;
            Ok(TrajectoryStep {
                rho_s: rho_global.marginal(Subsystem::System)?,
                rho_e: rho_global.marginal(Subsystem::Environment)?,
                sigma_s: sigma_global.marginal(Subsystem::System)?,
                sigma_e: sigma_global.marginal(Subsystem::Environment)?,
                rho_global,
                sigma_global,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Trajectory { times, steps })
}

/// Distinguishability quantifier whose revivals are bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantifier {
    TraceDistance,
    /// Telescopic relative entropy; bound with fourth roots on all terms.
    Tre(TelescopicParameter),
    /// Same revival as `Tre`, bounded with the alternate prefactor and a
    /// square root on the environment term.
    TreAlt(TelescopicParameter),
    SqrtQjsd,
}

impl Quantifier {
    /// Stable label used in CSV output and reports.
    pub fn label(&self) -> String {
        match self {
            Quantifier::TraceDistance => "td".into(),
            Quantifier::Tre(mu) => format!("tre_mu_{}", mu.get()),
            Quantifier::TreAlt(mu) => format!("tre_alt_mu_{}", mu.get()),
            Quantifier::SqrtQjsd => "sqrt_qjsd".into(),
        }
    }

    /// Argument order of the (asymmetric) TRE environment term as each bound
    /// is stated: the main bound reads it as `S_mu(rho_E, sigma_E)`, the
    /// alternate bound as `S_mu(sigma_E, rho_E)`.
    pub fn canonical_env_ordering(&self) -> EnvOrdering {
        match self {
            Quantifier::TreAlt(_) => EnvOrdering::SigmaRho,
            _ => EnvOrdering::RhoSigma,
        }
    }
}

/// Argument order for the asymmetric environment term `S_mu(. , .)`.
///
/// Both orderings satisfy the bounds on the supported scenarios; the sweep
/// can be forced to either to verify that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvOrdering {
    /// `S_mu(rho_E(s), sigma_E(s))`
    RhoSigma,
    /// `S_mu(sigma_E(s), rho_E(s))`
    SigmaRho,
}

/// The three contributions bounding a revival, stored pre-root and
/// pre-prefactor so they can be plotted separately, plus the combined total.
#[derive(Debug, Clone, Copy)]
pub struct RhsBreakdown {
    pub env: f64,
    pub corr_rho: f64,
    pub corr_sigma: f64,
    pub total: f64,
}

/// Per-record result of a bound sweep.
#[derive(Debug, Clone)]
pub struct BoundRecord {
    pub s_index: usize,
    pub t_index: usize,
    pub quantifier: Quantifier,
    pub lhs: f64,
    pub rhs_env: f64,
    pub rhs_corr_rho: f64,
    pub rhs_corr_sigma: f64,
    pub rhs_total: f64,
    pub slack: f64,
}

impl BoundRecord {
    pub fn holds(&self) -> bool {
        self.slack >= -BOUND_SLACK_TOL
    }
}

/// `[TD, TRE(mu)..., TRE-alt(mu)..., sqrt-QJSD]` for a list of parameters.
pub fn standard_quantifiers(mu_list: &[TelescopicParameter]) -> Vec<Quantifier> {
    let mut qs = vec![Quantifier::TraceDistance];
    qs.extend(mu_list.iter().map(|&mu| Quantifier::Tre(mu)));
    qs.extend(mu_list.iter().map(|&mu| Quantifier::TreAlt(mu)));
    qs.push(Quantifier::SqrtQjsd);
    qs
}

/// Quantifier value on the system marginals at one grid index.
pub fn system_divergence(traj: &Trajectory, quantifier: Quantifier, index: usize) -> Result<f64> {
    let step = traj.step(index);
    let value = match quantifier {
        Quantifier::TraceDistance => trace_distance(&step.rho_s, &step.sigma_s)?,
        Quantifier::Tre(mu) | Quantifier::TreAlt(mu) => {
            telescopic_re(&step.rho_s, &step.sigma_s, mu)?
        }
        Quantifier::SqrtQjsd => sqrt_qjsd(&step.rho_s, &step.sigma_s)?,
    };
    Ok(value.value())
}

/// Revival `quantifier(t) - quantifier(s)` on the system marginals.
pub fn lhs_revival(
    traj: &Trajectory,
    quantifier: Quantifier,
    s_index: usize,
    t_index: usize,
) -> Result<f64> {
    if s_index > t_index || t_index >= traj.len() {
        return Err(Error::InvalidArgument(format!(
            "revival needs grid indices s <= t < {}, got ({s_index}, {t_index})",
            traj.len()
        )));
    }
    Ok(system_divergence(traj, quantifier, t_index)?
        - system_divergence(traj, quantifier, s_index)?)
}

fn combine(quantifier: Quantifier, env: f64, corr_rho: f64, corr_sigma: f64) -> f64 {
    match quantifier {
        Quantifier::TraceDistance => env + corr_rho + corr_sigma,
        Quantifier::Tre(mu) => {
            tre_bound_prefactor(mu) * (env.powf(0.25) + corr_rho.powf(0.25) + corr_sigma.powf(0.25))
        }
        Quantifier::TreAlt(mu) => {
            tre_bound_prefactor_alt(mu) * (env.sqrt() + corr_rho.powf(0.25) + corr_sigma.powf(0.25))
        }
        Quantifier::SqrtQjsd => env.sqrt() + corr_rho.sqrt() + corr_sigma.sqrt(),
    }
}

fn step_breakdown(
    step: &TrajectoryStep,
    prod_rho: &DensityMatrix,
    prod_sigma: &DensityMatrix,
    quantifier: Quantifier,
    ordering: EnvOrdering,
) -> Result<RhsBreakdown> {
    let (env, corr_rho, corr_sigma) = match quantifier {
        Quantifier::TraceDistance => (
            trace_distance(&step.rho_e, &step.sigma_e)?.value(),
            trace_distance(step.rho_global.state(), prod_rho)?.value(),
            trace_distance(step.sigma_global.state(), prod_sigma)?.value(),
        ),
        Quantifier::Tre(mu) | Quantifier::TreAlt(mu) => {
            let env = match ordering {
                EnvOrdering::RhoSigma => telescopic_re(&step.rho_e, &step.sigma_e, mu)?,
                EnvOrdering::SigmaRho => telescopic_re(&step.sigma_e, &step.rho_e, mu)?,
            };
            (
                env.value(),
                telescopic_re(step.rho_global.state(), prod_rho, mu)?.value(),
                telescopic_re(step.sigma_global.state(), prod_sigma, mu)?.value(),
            )
        }
        Quantifier::SqrtQjsd => (
            qjsd(&step.rho_e, &step.sigma_e)?.value(),
            qjsd(step.rho_global.state(), prod_rho)?.value(),
            qjsd(step.sigma_global.state(), prod_sigma)?.value(),
        ),
    };
    Ok(RhsBreakdown {
        env,
        corr_rho,
        corr_sigma,
        total: combine(quantifier, env, corr_rho, corr_sigma),
    })
}

/// The three bound contributions at grid index `s`, with the environment
/// term ordered as the quantifier's bound states it.
pub fn rhs_bound(
    traj: &Trajectory,
    quantifier: Quantifier,
    s_index: usize,
) -> Result<RhsBreakdown> {
    rhs_bound_with_env_ordering(
        traj,
        quantifier,
        s_index,
        quantifier.canonical_env_ordering(),
    )
}

/// Same as [`rhs_bound`] with an explicit environment-term ordering.
pub fn rhs_bound_with_env_ordering(
    traj: &Trajectory,
    quantifier: Quantifier,
    s_index: usize,
    ordering: EnvOrdering,
) -> Result<RhsBreakdown> {
    if s_index >= traj.len() {
        return Err(Error::InvalidArgument(format!(
            "grid index {s_index} out of range {}",
            traj.len()
        )));
    }
    let step = traj.step(s_index);
    let prod_rho = step.rho_s.product(&step.rho_e)?;
    let prod_sigma = step.sigma_s.product(&step.sigma_e)?;
    step_breakdown(step, &prod_rho, &prod_sigma, quantifier, ordering)
}

/// Sweep values at one grid index, aligned with the quantifier list passed
/// to [`sweep_curves`]: `system[q]` is the system-marginal divergence and
/// `rhs[q]` the bound terms of quantifier `q` at this time.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub system: Vec<f64>,
    pub rhs: Vec<RhsBreakdown>,
}

fn step_values(
    step: &TrajectoryStep,
    quantifiers: &[Quantifier],
    forced_ordering: Option<EnvOrdering>,
) -> Result<SweepPoint> {
    let prod_rho = step.rho_s.product(&step.rho_e)?;
    let prod_sigma = step.sigma_s.product(&step.sigma_e)?;

    // The system divergence of Tre and TreAlt at equal mu coincides; memoize
    // on a coarse key so the sweep never diagonalizes the same pair twice.
    let mut sys_memo: Vec<(u64, f64)> = Vec::new();
    let mut system = Vec::with_capacity(quantifiers.len());
    for &q in quantifiers {
        let key = match q {
            Quantifier::TraceDistance => 0,
            Quantifier::Tre(mu) | Quantifier::TreAlt(mu) => 1 ^ mu.get().to_bits(),
            Quantifier::SqrtQjsd => 2,
        };
        let value = match sys_memo.iter().find(|(k, _)| *k == key) {
            Some(&(_, v)) => v,
            None => {
                let v = match q {
                    Quantifier::TraceDistance => {
                        trace_distance(&step.rho_s, &step.sigma_s)?.value()
                    }
                    Quantifier::Tre(mu) | Quantifier::TreAlt(mu) => {
                        telescopic_re(&step.rho_s, &step.sigma_s, mu)?.value()
                    }
                    Quantifier::SqrtQjsd => sqrt_qjsd(&step.rho_s, &step.sigma_s)?.value(),
                };
                sys_memo.push((key, v));
                v
            }
        };
        system.push(value);
    }

    // Correlation terms of Tre/TreAlt at equal mu coincide as well; reuse the
    // computed breakdown and only recombine.
    let mut tre_memo: Vec<(u64, EnvOrdering, RhsBreakdown)> = Vec::new();
    let mut rhs = Vec::with_capacity(quantifiers.len());
    for &q in quantifiers {
        let ordering = forced_ordering.unwrap_or_else(|| q.canonical_env_ordering());
        let breakdown = match q {
            Quantifier::Tre(mu) | Quantifier::TreAlt(mu) => {
                let key = mu.get().to_bits();
                match tre_memo
                    .iter()
                    .find(|(k, o, _)| *k == key && *o == ordering)
                {
                    Some(&(_, _, b)) => RhsBreakdown {
                        total: combine(q, b.env, b.corr_rho, b.corr_sigma),
                        ..b
                    },
                    None => {
                        let b = step_breakdown(step, &prod_rho, &prod_sigma, q, ordering)?;
                        tre_memo.push((key, ordering, b));
                        b
                    }
                }
            }
            _ => step_breakdown(step, &prod_rho, &prod_sigma, q, ordering)?,
        };
        rhs.push(breakdown);
    }
    Ok(SweepPoint { system, rhs })
}

fn sweep(
    traj: &Trajectory,
    quantifiers: &[Quantifier],
    forced_ordering: Option<EnvOrdering>,
) -> Result<Vec<SweepPoint>> {
    traj.steps
        .par_iter()
        .map(|step| step_values(step, quantifiers, forced_ordering))
        .collect()
}

/// Per-index system divergences and bound terms for a quantifier list, with
/// canonical environment-term orderings. One parallel pass over the grid.
pub fn sweep_curves(traj: &Trajectory, quantifiers: &[Quantifier]) -> Result<Vec<SweepPoint>> {
    sweep(traj, quantifiers, None)
}

fn assemble_records(
    traj: &Trajectory,
    quantifiers: &[Quantifier],
    forced_ordering: Option<EnvOrdering>,
) -> Result<Vec<BoundRecord>> {
    let values = sweep(traj, quantifiers, forced_ordering)?;
    let n = traj.len();
    let mut records = Vec::with_capacity(n * (n + 1) / 2 * quantifiers.len());
    for s in 0..n {
        for t in s..n {
            for (qi, &quantifier) in quantifiers.iter().enumerate() {
                let lhs = values[t].system[qi] - values[s].system[qi];
                let b = values[s].rhs[qi];
                records.push(BoundRecord {
                    s_index: s,
                    t_index: t,
                    quantifier,
                    lhs,
                    rhs_env: b.env,
                    rhs_corr_rho: b.corr_rho,
                    rhs_corr_sigma: b.corr_sigma,
                    rhs_total: b.total,
                    slack: b.total - lhs,
                });
            }
        }
    }
    Ok(records)
}

/// Evaluate every bound for every `(s, t)` with `s <= t` on the grid.
///
/// Records are ordered by `(s, t, quantifier)`; violations show up as
/// negative slack in the returned records rather than as errors, so callers
/// can report them.
pub fn check_bounds(traj: &Trajectory, quantifiers: &[Quantifier]) -> Result<Vec<BoundRecord>> {
    assemble_records(traj, quantifiers, None)
}

/// [`check_bounds`] with the environment term forced to one argument order
/// for the asymmetric quantifiers.
pub fn check_bounds_with_env_ordering(
    traj: &Trajectory,
    quantifiers: &[Quantifier],
    ordering: EnvOrdering,
) -> Result<Vec<BoundRecord>> {
    assemble_records(traj, quantifiers, Some(ordering))
}

/// Most negative slack over a record set; `+inf` when empty.
pub fn worst_slack(records: &[BoundRecord]) -> f64 {
    records
        .iter()
        .map(|r| r.slack)
        .fold(f64::INFINITY, f64::min)
}

/// One intermediate quantity of the revival-bound derivation.
#[derive(Debug, Clone)]
pub struct ChainLink {
    pub label: &'static str,
    pub value: f64,
}

/// Evaluate the full derivation chain of the entropic revival bound at one
/// `(s, t)` cell. Adjacent values are non-decreasing up to numerical slack:
/// the revival, the entropy gap of the globals, the split into two absolute
/// differences, the logarithmic triangle bounds on each, their square-root
/// relaxations, the environment split and finally the entropic form with the
/// fourth-root prefactor.
pub fn intermediate_chain_check(
    traj: &Trajectory,
    s_index: usize,
    t_index: usize,
    mu: TelescopicParameter,
) -> Result<Vec<ChainLink>> {
    if s_index > t_index || t_index >= traj.len() {
        return Err(Error::InvalidArgument(format!(
            "chain check needs s <= t < {}, got ({s_index}, {t_index})",
            traj.len()
        )));
    }
    let step = traj.step(s_index);
    let l = mu.log_inv();
    let m = mu.get();
    let prod_rho = step.rho_s.product(&step.rho_e)?;
    let prod_sigma = step.sigma_s.product(&step.sigma_e)?;
    // The derivation splits against sigma_S (x) rho_E, not the sigma product.
    let prod_sigma_mixed = step.sigma_s.product(&step.rho_e)?;

    let revival = lhs_revival(traj, Quantifier::Tre(mu), s_index, t_index)?;

    let global_gap = telescopic_re(step.rho_global.state(), step.sigma_global.state(), mu)?.value()
        - telescopic_re(&step.rho_s, &step.sigma_s, mu)?.value();

    let mid = telescopic_re(&prod_rho, step.sigma_global.state(), mu)?.value();
    let abs_split =
        (telescopic_re(step.rho_global.state(), step.sigma_global.state(), mu)?.value() - mid)
            .abs()
            + (mid - telescopic_re(&prod_rho, &prod_sigma_mixed, mu)?.value()).abs();

    let d_rho = trace_distance(step.rho_global.state(), &prod_rho)?.value();
    let d_sigma_mixed = trace_distance(step.sigma_global.state(), &prod_sigma_mixed)?.value();
    let first = if d_rho == 0.0 {
        0.0
    } else {
        d_rho / l * (1.0 + (1.0 - m) / (m * d_rho)).ln()
    };
    let second = (1.0 + d_sigma_mixed * (1.0 - m) / m).ln() / l;
    let log_triangle = first + second;

    let root_scale = ((1.0 - m) / m).sqrt() / l;
    let sqrt_relaxation = root_scale * (d_rho.sqrt() + d_sigma_mixed.sqrt());

    let d_sigma = trace_distance(step.sigma_global.state(), &prod_sigma)?.value();
    let d_env = trace_distance(&step.sigma_e, &step.rho_e)?.value();
    let env_split = root_scale * (d_rho.sqrt() + d_sigma.sqrt() + d_env.sqrt());

    let entropic = tre_bound_prefactor(mu)
        * (telescopic_re(step.rho_global.state(), &prod_rho, mu)?
            .value()
            .powf(0.25)
            + telescopic_re(step.sigma_global.state(), &prod_sigma, mu)?
                .value()
                .powf(0.25)
            + telescopic_re(&step.sigma_e, &step.rho_e, mu)?
                .value()
                .powf(0.25));

    Ok(vec![
        ChainLink {
            label: "reduced_revival",
            value: revival,
        },
        ChainLink {
            label: "global_entropy_gap",
            value: global_gap,
        },
        ChainLink {
            label: "absolute_difference_split",
            value: abs_split,
        },
        ChainLink {
            label: "log_triangle_bounds",
            value: log_triangle,
        },
        ChainLink {
            label: "sqrt_relaxation",
            value: sqrt_relaxation,
        },
        ChainLink {
            label: "environment_split",
            value: env_split,
        },
        ChainLink {
            label: "entropic_fourth_roots",
            value: entropic,
        },
    ])
}

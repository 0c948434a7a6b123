//! Randomized property suites for the distinguishability quantifiers.
//!
//! Every suite draws from a seeded ChaCha12 stream, so a report is a pure
//! function of `(seed, draws)`. Each report carries the worst observed slack;
//! a property passes when that slack stays above minus its tolerance.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::divergences::{
    pinsker_coefficient, qjsd, relative_entropy, scalar_tre, sqrt_qjsd, symmetrized_tre,
    telescopic_re, trace_distance, TelescopicParameter,
};
use crate::linalg::HermitianMatrix;
use crate::states::{
    random_cptp_with, random_density_with, DensityMatrix, QuantumChannel, RngSeed,
};
use crate::{Error, Result};

/// Outcome of one property suite.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    /// Number of individual inequality/identity checks performed.
    pub checks: usize,
    /// Most negative margin observed (larger is safer).
    pub worst_slack: f64,
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.worst_slack >= -self.tolerance
    }
}

/// Configuration of [`run_all`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Draws per randomized suite.
    pub draws: usize,
    /// Negative control: replace the channel in the trace-distance
    /// contractivity suite by a deliberately non-trace-preserving Kraus map
    /// (renormalized to a state); the suite must then fail.
    pub corrupt_contractivity: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            draws: 500,
            corrupt_contractivity: false,
        }
    }
}

const SLACK_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-12;

fn mu_cycle(i: usize) -> TelescopicParameter {
    match i % 4 {
        0 => TelescopicParameter::new(0.1).unwrap(),
        1 => TelescopicParameter::optimal(),
        2 => TelescopicParameter::half(),
        _ => TelescopicParameter::new(0.9).unwrap(),
    }
}

fn dim_cycle(i: usize) -> usize {
    2 + i % 3
}

/// Deliberately broken evolution: reweight the Kraus operators (breaking
/// trace preservation) and renormalize the output back to a state.
fn corrupted_apply(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let mut out = crate::linalg::ComplexMatrix::zeros(channel.output_dim(), channel.output_dim());
    for (k, kraus) in channel.kraus_operators().iter().enumerate() {
        let weight = 1.0 + 0.75 * k as f64;
        out = &out + &(&(kraus * rho.matrix()) * &kraus.adjoint()).scaled_real(weight * weight);
    }
    let trace = out.trace().re;
    if trace <= 0.0 {
        return Err(Error::NumericalInstability(
            "corrupted map lost all mass".into(),
        ));
    }
    DensityMatrix::new(HermitianMatrix::new(out.scaled_real(1.0 / trace))?)
}

struct Slack {
    worst: f64,
    checks: usize,
}

impl Slack {
    fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            checks: 0,
        }
    }

    fn push(&mut self, slack: f64) {
        self.worst = self.worst.min(slack);
        self.checks += 1;
    }

    fn report(self, name: &'static str, tolerance: f64) -> PropertyReport {
        PropertyReport {
            name,
            checks: self.checks,
            worst_slack: self.worst,
            tolerance,
        }
    }
}

fn td_contractivity(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let channel = random_cptp_with(dim, 1 + i % 3, rng)?;
        let before = trace_distance(&rho, &sigma)?.value();
        let after = if opts.corrupt_contractivity {
            let a = corrupted_apply(&channel, &rho)?;
            let b = corrupted_apply(&channel, &sigma)?;
            trace_distance(&a, &b)?.value()
        } else {
            trace_distance(&channel.apply(&rho)?, &channel.apply(&sigma)?)?.value()
        };
        slack.push(before - after);
    }
    Ok(slack.report("td_contractivity", SLACK_TOL))
}

fn tre_contractivity(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let channel = random_cptp_with(dim, 1 + i % 3, rng)?;
        let before = telescopic_re(&rho, &sigma, mu)?.value();
        let after = telescopic_re(&channel.apply(&rho)?, &channel.apply(&sigma)?, mu)?.value();
        slack.push(before - after);
    }
    Ok(slack.report("tre_contractivity", SLACK_TOL))
}

fn qjsd_contractivity(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let channel = random_cptp_with(dim, 1 + i % 3, rng)?;
        let before = qjsd(&rho, &sigma)?.value();
        let after = qjsd(&channel.apply(&rho)?, &channel.apply(&sigma)?)?.value();
        slack.push(before - after);
    }
    Ok(slack.report("qjsd_contractivity", SLACK_TOL))
}

fn pinsker_sandwich(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let d = trace_distance(&rho, &sigma)?.value();
        let s = telescopic_re(&rho, &sigma, mu)?.value();
        slack.push(s - pinsker_coefficient(mu) * d * d);
        slack.push(d - s);
    }
    Ok(slack.report("pinsker_sandwich", SLACK_TOL))
}

/// `S_mu(rho,sigma) - S_mu(rho,tau) <= 1 - S_mu(1, D(sigma,tau))` and its
/// rearranged logarithmic form.
fn triangle_like_second_argument(
    rng: &mut ChaCha12Rng,
    opts: &VerifyOptions,
) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let tau = random_density_with(dim, rng)?;
        let gap = telescopic_re(&rho, &sigma, mu)?.value() - telescopic_re(&rho, &tau, mu)?.value();
        let d = trace_distance(&sigma, &tau)?.value();
        slack.push(1.0 - scalar_tre(1.0, d, mu)? - gap);
        let m = mu.get();
        let rearranged = (1.0 + d * (1.0 - m) / m).ln() / mu.log_inv();
        slack.push(rearranged - gap);
    }
    Ok(slack.report("triangle_like_second_argument", SLACK_TOL))
}

/// `S_mu(rho,sigma) - S_mu(eta,sigma) <= D(rho,eta) - S_mu(D(rho,eta), 1)`
/// and its rearranged logarithmic form.
fn triangle_like_first_argument(
    rng: &mut ChaCha12Rng,
    opts: &VerifyOptions,
) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let eta = random_density_with(dim, rng)?;
        let gap =
            telescopic_re(&rho, &sigma, mu)?.value() - telescopic_re(&eta, &sigma, mu)?.value();
        let d = trace_distance(&rho, &eta)?.value();
        slack.push(d - scalar_tre(d, 1.0, mu)? - gap);
        let m = mu.get();
        let rearranged = if d == 0.0 {
            0.0
        } else {
            d * (1.0 + (1.0 - m) / (m * d)).ln() / mu.log_inv()
        };
        slack.push(rearranged - gap);
    }
    Ok(slack.report("triangle_like_first_argument", SLACK_TOL))
}

fn sqrt_qjsd_triangle(rng: &mut ChaCha12Rng, _opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for _ in 0..1000 {
        let rho = random_density_with(2, rng)?;
        let sigma = random_density_with(2, rng)?;
        let tau = random_density_with(2, rng)?;
        let direct = sqrt_qjsd(&rho, &tau)?.value();
        let via = sqrt_qjsd(&rho, &sigma)?.value() + sqrt_qjsd(&sigma, &tau)?.value();
        slack.push(via - direct);
    }
    Ok(slack.report("sqrt_qjsd_triangle", SLACK_TOL))
}

fn boundedness(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        for v in [
            trace_distance(&rho, &sigma)?.value(),
            telescopic_re(&rho, &sigma, mu)?.value(),
            qjsd(&rho, &sigma)?.value(),
            sqrt_qjsd(&rho, &sigma)?.value(),
        ] {
            slack.push(v + 1e-12);
            slack.push(1.0 + 1e-10 - v);
        }
    }
    Ok(slack.report("boundedness", 0.0))
}

fn tensor_invariance(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws.min(200) {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let tau = random_density_with(2 + i % 2, rng)?;
        let td_gap = trace_distance(&rho.product(&tau)?, &sigma.product(&tau)?)?.value()
            - trace_distance(&rho, &sigma)?.value();
        let tre_gap = telescopic_re(&rho.product(&tau)?, &sigma.product(&tau)?, mu)?.value()
            - telescopic_re(&rho, &sigma, mu)?.value();
        slack.push(-td_gap.abs());
        slack.push(-tre_gap.abs());
    }
    Ok(slack.report("tensor_invariance", SLACK_TOL))
}

fn unitary_invariance(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws.min(200) {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        // A random CPTP map with trivial environment is a Haar-like unitary.
        let unitary = random_cptp_with(dim, 1, rng)?;
        let td_gap = trace_distance(&unitary.apply(&rho)?, &unitary.apply(&sigma)?)?.value()
            - trace_distance(&rho, &sigma)?.value();
        let tre_gap = telescopic_re(&unitary.apply(&rho)?, &unitary.apply(&sigma)?, mu)?.value()
            - telescopic_re(&rho, &sigma, mu)?.value();
        slack.push(-td_gap.abs());
        slack.push(-tre_gap.abs());
    }
    Ok(slack.report("unitary_invariance", SLACK_TOL))
}

fn joint_convexity(rng: &mut ChaCha12Rng, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..opts.draws.min(200) {
        let dim = dim_cycle(i);
        let mu = mu_cycle(i);
        let rho1 = random_density_with(dim, rng)?;
        let rho2 = random_density_with(dim, rng)?;
        let sigma1 = random_density_with(dim, rng)?;
        let sigma2 = random_density_with(dim, rng)?;
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mix = |a: &DensityMatrix, b: &DensityMatrix| -> Result<DensityMatrix> {
            DensityMatrix::new(HermitianMatrix::new(
                &a.matrix().scaled_real(lambda) + &b.matrix().scaled_real(1.0 - lambda),
            )?)
        };
        let mixed = telescopic_re(&mix(&rho1, &rho2)?, &mix(&sigma1, &sigma2)?, mu)?.value();
        let convex = lambda * telescopic_re(&rho1, &sigma1, mu)?.value()
            + (1.0 - lambda) * telescopic_re(&rho2, &sigma2, mu)?.value();
        slack.push(convex - mixed);
    }
    Ok(slack.report("joint_convexity", SLACK_TOL))
}

fn topsoe_inequality(_rng: &mut ChaCha12Rng, _opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for k in 0..=10_000 {
        let x = k as f64 * 0.01;
        slack.push(x / (1.0 + x).sqrt() - (1.0 + x).ln());
    }
    Ok(slack.report("topsoe_inequality", IDENTITY_TOL))
}

fn qjsd_matches_symmetrized_tre(
    rng: &mut ChaCha12Rng,
    _opts: &VerifyOptions,
) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for i in 0..1000 {
        let dim = dim_cycle(i);
        let rho = random_density_with(dim, rng)?;
        let sigma = random_density_with(dim, rng)?;
        let j = qjsd(&rho, &sigma)?.value();
        let s = symmetrized_tre(&rho, &sigma, TelescopicParameter::half())?.value();
        slack.push(-(j - s).abs());
    }
    Ok(slack.report("qjsd_matches_symmetrized_tre", IDENTITY_TOL))
}

fn relative_entropy_detects_support_escape(
    rng: &mut ChaCha12Rng,
    _opts: &VerifyOptions,
) -> Result<PropertyReport> {
    let mut slack = Slack::new();
    for _ in 0..50 {
        let rho = random_density_with(2, rng)?;
        let sigma = random_density_with(2, rng)?;
        // Full-rank arguments stay finite.
        let s = relative_entropy(&rho, &sigma)?;
        slack.push(if s.is_finite() { 0.0 } else { -1.0 });
    }
    let up = crate::states::qubit_from_bloch([0.0, 0.0, 1.0])?;
    let down = crate::states::qubit_from_bloch([0.0, 0.0, -1.0])?;
    slack.push(if relative_entropy(&up, &down)?.is_finite() {
        -1.0
    } else {
        0.0
    });
    Ok(slack.report("relative_entropy_support_detection", 0.0))
}

/// Run every property suite with one seeded stream.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<PropertyReport>> {
    let mut rng = RngSeed(opts.seed).rng();
    let suites: Vec<fn(&mut ChaCha12Rng, &VerifyOptions) -> Result<PropertyReport>> = vec![
        td_contractivity,
        tre_contractivity,
        qjsd_contractivity,
        pinsker_sandwich,
        triangle_like_second_argument,
        triangle_like_first_argument,
        sqrt_qjsd_triangle,
        boundedness,
        tensor_invariance,
        unitary_invariance,
        joint_convexity,
        topsoe_inequality,
        qjsd_matches_symmetrized_tre,
        relative_entropy_detects_support_escape,
    ];
    suites.into_iter().map(|f| f(&mut rng, opts)).collect()
}

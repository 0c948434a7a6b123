//! Hamiltonian builders and scenario defaults for the two example systems:
//! a qubit exchanging excitations with a truncated bosonic mode
//! (Jaynes-Cummings) and a qubit coupled to a resonant partner qubit.
//!
//! Conventions: the system qubit basis is `{|up>, |down>}` with
//! `sigma_z |up> = +|up>`; composite indices are system-slow
//! (`i = i_s * d_e + i_e`); energies and times are expressed in units of the
//! coupling `g` (so `g = 1` makes `t` dimensionless).

use num_complex::Complex64 as C64;

use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::states::{pure_state, qubit_from_bloch, thermal_oscillator, DensityMatrix};
use crate::{Error, Result};

/// Normalization of the raising/lowering operators entering the coupling.
///
/// `Unnormalized` uses `sigma_+- = sigma_x +- i sigma_y`, which carries twice
/// the matrix element of the halved convention and therefore rescales the
/// effective coupling by 2 (by 4 for the qubit-qubit exchange term).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliConvention {
    Unnormalized,
    Halved,
}

impl PauliConvention {
    /// Matrix element of `sigma_+` between `|up>` and `|down>`.
    fn raising_weight(self) -> f64 {
        match self {
            PauliConvention::Unnormalized => 2.0,
            PauliConvention::Halved => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    JaynesCummings,
    TwoQubitExchange,
}

/// Physical parameters of one of the two example models.
#[derive(Debug, Clone, Copy)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// System level splitting (units of `g`).
    pub omega_s: f64,
    /// Environment frequency (units of `g`).
    pub omega_e: f64,
    /// Coupling strength; sets the inverse time unit.
    pub g: f64,
    /// Fock-space truncation (Jaynes-Cummings only).
    pub n_trunc: usize,
    pub pauli_convention: PauliConvention,
}

impl ModelSpec {
    /// Resonant Jaynes-Cummings defaults: `omega_s = omega_e = 1`, `g = 1`,
    /// 30 Fock levels, unnormalized raising/lowering operators.
    pub fn jaynes_cummings() -> Self {
        Self {
            kind: ModelKind::JaynesCummings,
            omega_s: 1.0,
            omega_e: 1.0,
            g: 1.0,
            n_trunc: 30,
            pauli_convention: PauliConvention::Unnormalized,
        }
    }

    /// Two-qubit exchange defaults: vanishing local terms (the exchange
    /// dynamics is invariant under resonant local terms), `g = 1`.
    pub fn two_qubit_exchange() -> Self {
        Self {
            kind: ModelKind::TwoQubitExchange,
            omega_s: 0.0,
            omega_e: 0.0,
            g: 1.0,
            n_trunc: 2,
            pauli_convention: PauliConvention::Unnormalized,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // g = 0 is allowed so the decoupled limit stays testable; scenarios
        // whose horizon is derived from 1/g reject it separately.
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coupling g must be finite and nonnegative, got {}",
                self.g
            )));
        }
        if self.kind == ModelKind::JaynesCummings && self.n_trunc < 2 {
            return Err(Error::InvalidArgument(format!(
                "Fock truncation must keep at least two levels, got {}",
                self.n_trunc
            )));
        }
        if !(self.omega_s.is_finite() && self.omega_e.is_finite()) {
            return Err(Error::InvalidArgument("non-finite frequency".into()));
        }
        Ok(())
    }

    pub fn system_dim(&self) -> usize {
        2
    }

    pub fn environment_dim(&self) -> usize {
        match self.kind {
            ModelKind::JaynesCummings => self.n_trunc,
            ModelKind::TwoQubitExchange => 2,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.system_dim() * self.environment_dim()
    }
}

fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `sigma_+` with the convention's weight on `|up><down|`.
fn sigma_plus(convention: PauliConvention) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, C64::new(convention.raising_weight(), 0.0));
    m
}

/// Truncated annihilation operator, `<n|b|n+1> = sqrt(n+1)`.
fn annihilation(n_trunc: usize) -> ComplexMatrix {
    let mut b = ComplexMatrix::zeros(n_trunc, n_trunc);
    for n in 0..n_trunc - 1 {
        b.set(n, n + 1, C64::new(((n + 1) as f64).sqrt(), 0.0));
    }
    b
}

/// Joint Hamiltonian of system and environment.
///
/// Jaynes-Cummings:
/// `H = omega_s sigma_z (x) I + g (sigma_+ (x) b + sigma_- (x) b^dag) + omega_e I (x) b^dag b`.
/// Two-qubit exchange:
/// `H = omega_s sigma_z (x) I + g (sigma_+ (x) sigma_- + sigma_- (x) sigma_+) + omega_e I (x) sigma_z`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let sp = sigma_plus(spec.pauli_convention);
    let sm = sp.adjoint();
    let d_e = spec.environment_dim();
    let (env_lower, env_local) = match spec.kind {
        ModelKind::JaynesCummings => {
            let b = annihilation(spec.n_trunc);
            let number = &b.adjoint() * &b;
            (b, number)
        }
        ModelKind::TwoQubitExchange => (sm.clone(), sigma_z()),
    };
    let local_s = sigma_z().kron(&ComplexMatrix::identity(d_e));
    let local_e = ComplexMatrix::identity(2).kron(&env_local);
    let interaction = &sp.kron(&env_lower) + &sm.kron(&env_lower.adjoint());
    let h = &(&local_s.scaled_real(spec.omega_s) + &interaction.scaled_real(spec.g))
        + &local_e.scaled_real(spec.omega_e);
    HermitianMatrix::new(h)
}

/// Total excitation number `(sigma_z + I)/2 (x) I + I (x) N_env`, with
/// `N_env = b^dag b` for the oscillator and `(sigma_z + I)/2` for the
/// partner qubit. Commutes with the exchange interaction.
pub fn excitation_operator(spec: &ModelSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let d_e = spec.environment_dim();
    let sys_number = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let env_number = match spec.kind {
        ModelKind::JaynesCummings => {
            let b = annihilation(spec.n_trunc);
            &b.adjoint() * &b
        }
        ModelKind::TwoQubitExchange => ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
    };
    let n = &sys_number.kron(&ComplexMatrix::identity(d_e))
        + &ComplexMatrix::identity(2).kron(&env_number);
    HermitianMatrix::new(n)
}

/// A fully specified experiment: model, the two initial system states, the
/// shared initial environment state, time horizon and grid resolution.
///
/// Both initial global states are products with the *same* environmental
/// marginal, which is what grants the reduced dynamics a well-defined
/// dynamical map at all later times.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub model: ModelSpec,
    pub rho_s0: DensityMatrix,
    pub sigma_s0: DensityMatrix,
    pub env0: DensityMatrix,
    /// Evolution horizon in units of `1/g`.
    pub horizon: f64,
    pub grid_points: usize,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.rho_s0.dim() != self.model.system_dim()
            || self.sigma_s0.dim() != self.model.system_dim()
        {
            return Err(Error::dims(
                "ScenarioSpec system states",
                self.model.system_dim(),
                self.rho_s0.dim().max(self.sigma_s0.dim()),
            ));
        }
        if self.env0.dim() != self.model.environment_dim() {
            return Err(Error::dims(
                "ScenarioSpec environment state",
                self.model.environment_dim(),
                self.env0.dim(),
            ));
        }
        if self.horizon <= 0.0 || self.horizon.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least two points, got {}",
                self.grid_points
            )));
        }
        Ok(())
    }
}

/// Tunable knobs of [`default_scenario`]; `None` keeps the default.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScenarioOptions {
    /// Two-qubit: polar angle of the system Bloch pair `+-(0, sin t, cos t)`.
    pub theta: Option<f64>,
    /// Two-qubit: polar angle of the environment Bloch vector `(sin p, 0, cos p)`.
    pub phi: Option<f64>,
    /// Jaynes-Cummings: `beta omega_e` of the thermal environment.
    pub beta_omega: Option<f64>,
    /// Horizon override, units of `1/g`.
    pub horizon: Option<f64>,
    pub grid_points: Option<usize>,
}

/// Canonical scenario for a model.
///
/// Jaynes-Cummings: system pair up / symmetric superposition, thermal
/// environment at `beta omega_e = 1`, horizon `8.9 / g`.
/// Two-qubit: antipodal pure system pair in the yz plane (default `+-y`),
/// pure environment in the xz plane (default at `pi/4`), horizon `pi / g`.
pub fn default_scenario(model: ModelSpec, options: &ScenarioOptions) -> Result<ScenarioSpec> {
    model.validate()?;
    if model.g == 0.0 && options.horizon.is_none() {
        return Err(Error::InvalidArgument(
            "default horizons scale as 1/g; pass an explicit horizon for g = 0".into(),
        ));
    }
    let grid_points = options.grid_points.unwrap_or(200);
    let scenario = match model.kind {
        ModelKind::JaynesCummings => {
            let beta_omega = options.beta_omega.unwrap_or(1.0);
            let one = C64::new(1.0, 0.0);
            ScenarioSpec {
                model,
                rho_s0: pure_state(&[one, C64::new(0.0, 0.0)])?,
                sigma_s0: pure_state(&[one, one])?,
                env0: thermal_oscillator(beta_omega, model.n_trunc)?,
                horizon: options.horizon.unwrap_or(8.9 / model.g),
                grid_points,
            }
        }
        ModelKind::TwoQubitExchange => {
            let theta = options.theta.unwrap_or(std::f64::consts::FRAC_PI_2);
            let phi = options.phi.unwrap_or(std::f64::consts::FRAC_PI_4);
            ScenarioSpec {
                model,
                rho_s0: qubit_from_bloch([0.0, theta.sin(), theta.cos()])?,
                sigma_s0: qubit_from_bloch([0.0, -theta.sin(), -theta.cos()])?,
                env0: qubit_from_bloch([phi.sin(), 0.0, phi.cos()])?,
                horizon: options.horizon.unwrap_or(std::f64::consts::PI / model.g),
                grid_points,
            }
        }
    };
    scenario.validate()?;
    Ok(scenario)
}

//! Density matrices, bipartite states and random CPTP channels.
//!
//! Random ensembles draw from a ChaCha12 stream seeded explicitly, so every
//! draw is reproducible across runs and platforms. RNG state is passed by
//! value; there is no hidden global generator.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{
    partial_trace, ComplexMatrix, HermitianMatrix, SpectralDecomposition, Subsystem,
};
use crate::{Error, Result};

/// Tolerance on `|Tr rho - 1|` and on negative eigenvalues.
pub const DENSITY_TOL: f64 = 1e-10;

/// Trace-preservation tolerance for channels.
pub const CHANNEL_TOL: f64 = 1e-10;

/// Seed for the reproducible ensemble generator (ChaCha12).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub(crate) fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }
}

fn standard_complex(rng: &mut ChaCha12Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Unit-trace positive-semidefinite Hermitian operator.
///
/// The validated spectral decomposition is kept alongside the matrix; the
/// entropic quantifiers reuse it heavily. Eigenvalues in `[-1e-10, 0)` are
/// clipped to zero (spectral roundoff); anything more negative is rejected.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(m: HermitianMatrix) -> Result<Self> {
        let trace = m.matrix().trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} deviates from one"
            )));
        }
        let spec = m.eigh()?;
        let min = spec.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        if min >= 0.0 {
            return Ok(Self {
                matrix: m,
                spectrum: spec,
            });
        }
        // Clip spectral noise and renormalize the trace over the clipped set.
        let clipped: Vec<f64> = spec.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensityMatrix("zero spectrum".into()));
        }
        let u = spec.eigenvectors().clone();
        let normalized: Vec<f64> = clipped.iter().map(|l| l / total).collect();
        Self::from_spectrum(normalized, u)
    }

    /// Assemble `U diag(populations) U^dag` from a nonnegative spectrum.
    fn from_spectrum(populations: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        let diag = ComplexMatrix::from_real_diagonal(&populations);
        let matrix = HermitianMatrix::new(&(&basis * &diag) * &basis.adjoint())?;
        let spectrum = matrix.eigh()?;
        Ok(Self { matrix, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// Eigenvalues ascending, clipped to be nonnegative.
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.spectrum.eigenvalues().iter().map(|l| l * l).sum()
    }

    /// Product state `self (x) other` (system-slow index convention).
    pub fn product(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(HermitianMatrix::new(self.matrix().kron(other.matrix()))?)
    }
}

/// Normalized projector onto the span of `amplitudes`.
pub fn pure_state(amplitudes: &[C64]) -> Result<DensityMatrix> {
    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq == 0.0 {
        return Err(Error::InvalidArgument(
            "pure state requires a nonzero amplitude vector".into(),
        ));
    }
    let n = amplitudes.len();
    let m = ComplexMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / norm_sq);
    DensityMatrix::new(HermitianMatrix::new(m)?)
}

/// Qubit state `(I + r . sigma)/2` from a Bloch vector with `|r| <= 1`.
pub fn qubit_from_bloch(r: [f64; 3]) -> Result<DensityMatrix> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "Bloch vector norm {norm} exceeds one"
        )));
    }
    let m = ComplexMatrix::from_row_major(
        2,
        2,
        &[
            C64::new(0.5 * (1.0 + r[2]), 0.0),
            C64::new(0.5 * r[0], -0.5 * r[1]),
            C64::new(0.5 * r[0], 0.5 * r[1]),
            C64::new(0.5 * (1.0 - r[2]), 0.0),
        ],
    )?;
    DensityMatrix::new(HermitianMatrix::new(m)?)
}

/// Truncated thermal oscillator state, populations `p_n ~ exp(-beta_omega n)`
/// renormalized over `n = 0..n_trunc-1`.
pub fn thermal_oscillator(beta_omega: f64, n_trunc: usize) -> Result<DensityMatrix> {
    if beta_omega <= 0.0 || beta_omega.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "beta_omega must be positive, got {beta_omega}"
        )));
    }
    if n_trunc < 2 {
        return Err(Error::InvalidArgument(format!(
            "thermal oscillator needs n_trunc >= 2, got {n_trunc}"
        )));
    }
    let weights: Vec<f64> = (0..n_trunc)
        .map(|n| (-beta_omega * n as f64).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let populations: Vec<f64> = weights.iter().map(|w| w / total).collect();
    DensityMatrix::new(HermitianMatrix::new(ComplexMatrix::from_real_diagonal(
        &populations,
    ))?)
}

/// Hilbert-Schmidt random state `G G^dag / Tr(G G^dag)` with complex
/// Gaussian `G`.
pub fn random_density(dim: usize, seed: RngSeed) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut rng = seed.rng();
    random_density_with(dim, &mut rng)
}

pub(crate) fn random_density_with(dim: usize, rng: &mut ChaCha12Rng) -> Result<DensityMatrix> {
    // Entries drawn row by row so the ensemble is pinned by the ChaCha stream
    // alone, independent of any backend fill order.
    let entries: Vec<C64> = (0..dim * dim).map(|_| standard_complex(rng)).collect();
    let g = ComplexMatrix::from_row_major(dim, dim, &entries)?;
    let gg = &g * &g.adjoint();
    let trace = gg.trace().re;
    DensityMatrix::new(HermitianMatrix::new(gg.scaled_real(1.0 / trace))?)
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Validate trace preservation `sum K^dag K = I` within [`CHANNEL_TOL`].
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus set".into()))?;
        let (rows, cols) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != rows || k.cols() != cols) {
            return Err(Error::InvalidChannel(
                "Kraus operators must share one shape".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(cols, cols);
        for k in &kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = (&sum - &ComplexMatrix::identity(cols)).max_abs();
        if defect > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "sum K^dag K deviates from identity by {defect:.3e}"
            )));
        }
        Ok(Self { kraus })
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].cols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].rows()
    }

    /// `sum K rho K^dag`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim() {
            return Err(Error::dims(
                "QuantumChannel::apply",
                self.input_dim(),
                rho.dim(),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.output_dim(), self.output_dim());
        for k in &self.kraus {
            out = &out + &(&(k * rho.matrix()) * &k.adjoint());
        }
        DensityMatrix::new(HermitianMatrix::new(out)?)
    }
}

/// Random CPTP channel from a Haar-like isometry `dim -> dim * env_dim`,
/// obtained as the Q factor of a complex Gaussian matrix.
pub fn random_cptp(dim: usize, env_dim: usize, seed: RngSeed) -> Result<QuantumChannel> {
    if dim == 0 || env_dim == 0 {
        return Err(Error::InvalidArgument(
            "channel dimensions must be positive".into(),
        ));
    }
    let mut rng = seed.rng();
    random_cptp_with(dim, env_dim, &mut rng)
}

pub(crate) fn random_cptp_with(
    dim: usize,
    env_dim: usize,
    rng: &mut ChaCha12Rng,
) -> Result<QuantumChannel> {
    use nalgebra::DMatrix;
    let rows = dim * env_dim;
    let entries: Vec<C64> = (0..rows * dim).map(|_| standard_complex(rng)).collect();
    let g = DMatrix::from_row_slice(rows, dim, &entries);
    let q = g.qr().q();
    // V|psi> = sum_k (K_k |psi>) (x) |k>_env with row index i*env_dim + k.
    let kraus: Vec<ComplexMatrix> = (0..env_dim)
        .map(|k| ComplexMatrix::from_fn(dim, dim, |i, j| q[(i * env_dim + k, j)]))
        .collect();
    QuantumChannel::new(kraus)
}

/// Density matrix on a `d_s * d_e` tensor-product space.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    d_s: usize,
    d_e: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(d_s: usize, d_e: usize, state: DensityMatrix) -> Result<Self> {
        if state.dim() != d_s * d_e {
            return Err(Error::dims("BipartiteState::new", d_s * d_e, state.dim()));
        }
        Ok(Self { d_s, d_e, state })
    }

    /// `rho_s (x) rho_e`.
    pub fn product(rho_s: &DensityMatrix, rho_e: &DensityMatrix) -> Result<Self> {
        Self::new(rho_s.dim(), rho_e.dim(), rho_s.product(rho_e)?)
    }

    pub fn system_dim(&self) -> usize {
        self.d_s
    }

    pub fn environment_dim(&self) -> usize {
        self.d_e
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let m = partial_trace(self.state.matrix(), self.d_s, self.d_e, keep)?;
        DensityMatrix::new(HermitianMatrix::new(m)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pure_state_up_is_projector() {
        let rho = pure_state(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((rho.matrix().get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho.matrix().get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn pure_state_plus_has_uniform_entries() {
        let rho = pure_state(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix().get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pure_state_purity_is_one() {
        let rho = pure_state(&[c(0.3, 0.4), c(-0.2, 0.9), c(0.0, -0.5)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_rejects_zero_vector() {
        assert!(pure_state(&[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn bloch_origin_is_maximally_mixed() {
        let rho = qubit_from_bloch([0.0, 0.0, 0.0]).unwrap();
        assert!((rho.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
        assert!(rho.matrix().get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn bloch_north_pole_is_up_projector() {
        let rho = qubit_from_bloch([0.0, 0.0, 1.0]).unwrap();
        assert!((rho.matrix().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(rho.matrix().get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn bloch_rejects_vectors_outside_sphere() {
        assert!(qubit_from_bloch([0.8, 0.8, 0.0]).is_err());
    }

    #[test]
    fn thermal_low_temperature_limit_is_ground_state() {
        let rho = thermal_oscillator(700.0, 10).unwrap();
        assert!((rho.matrix().get(0, 0).re - 1.0).abs() < 1e-15);
        for n in 1..10 {
            assert!(rho.matrix().get(n, n).norm() < 1e-15);
        }
    }

    #[test]
    fn thermal_ground_population_approaches_geometric_weight() {
        let rho = thermal_oscillator(1.0, 200).unwrap();
        let expected = 1.0 - (-1.0f64).exp();
        assert!((rho.matrix().get(0, 0).re - expected).abs() < 1e-12);
    }

    #[test]
    fn thermal_populations_decrease_monotonically() {
        let rho = thermal_oscillator(0.7, 12).unwrap();
        for n in 1..12 {
            assert!(rho.matrix().get(n, n).re < rho.matrix().get(n - 1, n - 1).re);
        }
    }

    #[test]
    fn thermal_truncation_tail_is_bounded_by_geometric_series() {
        let bw = 1.0;
        let n = 30usize;
        let rho = thermal_oscillator(bw, n).unwrap();
        // Untruncated weights: q_k = exp(-bw k)(1 - exp(-bw)).
        let q = |k: usize| (-bw * k as f64).exp() * (1.0 - (-bw).exp());
        let covered: f64 = (0..n).map(q).sum();
        let bound = (-bw * n as f64).exp() / (1.0 - (-bw).exp());
        assert!(1.0 - covered <= bound + 1e-15);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thermal_rejects_bad_arguments() {
        assert!(thermal_oscillator(0.0, 10).is_err());
        assert!(thermal_oscillator(1.0, 1).is_err());
    }

    #[test]
    fn random_density_is_deterministic_in_the_seed() {
        let a = random_density(4, RngSeed(42)).unwrap();
        let b = random_density(4, RngSeed(42)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_density(4, RngSeed(43)).unwrap();
        assert!((a.matrix() - c.matrix()).max_abs() > 1e-3);
    }

    #[test]
    fn random_density_of_dimension_one_is_scalar_one() {
        let rho = random_density(1, RngSeed(5)).unwrap();
        assert!((rho.matrix().get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hilbert_schmidt_ensemble_has_no_preferred_bloch_direction() {
        let mut rng = RngSeed(271828).rng();
        let mut mean = [0.0f64; 3];
        let draws = 10_000;
        for _ in 0..draws {
            let rho = random_density_with(2, &mut rng).unwrap();
            let m = rho.matrix();
            mean[0] += 2.0 * m.get(1, 0).re;
            mean[1] += 2.0 * m.get(1, 0).im;
            mean[2] += m.get(0, 0).re - m.get(1, 1).re;
        }
        let norm = mean
            .iter()
            .map(|x| (x / draws as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(norm <= 0.05, "mean Bloch vector norm {norm}");
    }

    #[test]
    fn random_cptp_with_trivial_environment_is_unitary() {
        let ch = random_cptp(3, 1, RngSeed(7)).unwrap();
        assert_eq!(ch.kraus_operators().len(), 1);
        let k = &ch.kraus_operators()[0];
        let gram = &k.adjoint() * k;
        assert!((&gram - &ComplexMatrix::identity(3)).max_abs() < 1e-10);
    }

    #[test]
    fn random_cptp_outputs_valid_states() {
        let ch = random_cptp(3, 4, RngSeed(11)).unwrap();
        let rho = random_density(3, RngSeed(12)).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(out.spectrum().eigenvalues().iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn identity_channel_fixes_input() {
        let ch = QuantumChannel::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let rho = qubit_from_bloch([0.3, -0.4, 0.2]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn depolarizing_kraus_set_sends_qubit_to_maximally_mixed() {
        // K_ij = |i><j| / sqrt(2) fully depolarizes.
        let s = 1.0 / 2.0f64.sqrt();
        let mut kraus = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut k = ComplexMatrix::zeros(2, 2);
                k.set(i, j, c(s, 0.0));
                kraus.push(k);
            }
        }
        let ch = QuantumChannel::new(kraus).unwrap();
        let rho = qubit_from_bloch([0.1, 0.9, 0.0]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix() - &ComplexMatrix::identity(2).scaled_real(0.5)).max_abs() < 1e-14);
    }

    #[test]
    fn channel_rejects_non_trace_preserving_kraus_set() {
        let k = ComplexMatrix::identity(2).scaled_real(1.01);
        assert!(QuantumChannel::new(vec![k]).is_err());
    }

    #[test]
    fn channel_apply_rejects_dimension_mismatch() {
        let ch = QuantumChannel::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let rho = random_density(3, RngSeed(1)).unwrap();
        assert!(ch.apply(&rho).is_err());
    }

    #[test]
    fn bipartite_product_marginals_recover_factors() {
        let a = random_density(2, RngSeed(21)).unwrap();
        let b = random_density(3, RngSeed(22)).unwrap();
        let joint = BipartiteState::product(&a, &b).unwrap();
        let ms = joint.marginal(Subsystem::System).unwrap();
        let me = joint.marginal(Subsystem::Environment).unwrap();
        assert!((ms.matrix() - a.matrix()).max_abs() < 1e-12);
        assert!((me.matrix() - b.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn density_constructor_rejects_bad_trace_and_negative_spectra() {
        let half = HermitianMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.25])).unwrap();
        assert!(DensityMatrix::new(half).is_err());
        let neg = HermitianMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).unwrap();
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn density_constructor_clips_spectral_noise() {
        let eps = 5e-11;
        let m =
            HermitianMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0 + eps, -eps])).unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.spectrum().eigenvalues().iter().all(|&l| l >= 0.0));
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}

//! Distinguishability quantifiers and the scalar prefactors of the revival
//! bounds.
//!
//! All entropies use the natural logarithm internally. The telescopic
//! relative entropy (TRE) normalizes by `log(1/mu)`, which makes its value
//! independent of the logarithm base; the quantum Jensen-Shannon divergence
//! (QJSD) is defined here as the symmetrized TRE at `mu = 1/2`, so the
//! identity between the two holds by construction and the QJSD is likewise
//! bounded in `[0, 1]`.

use crate::linalg::{HermitianMatrix, SpectralDecomposition, ZERO_EIGENVALUE_THRESHOLD};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Mass of a state outside the other's support above which the Umegaki
/// relative entropy is reported as infinite.
pub const SUPPORT_VIOLATION_TOL: f64 = 1e-10;

/// Divergence outputs with magnitude below this floor are exactly zero.
///
/// Trace-distance and entropy values at this scale are spectral roundoff, and
/// flooring them keeps the fourth roots in the revival bounds from amplifying
/// noise into spurious bound violations.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Upper slack allowed on the `[0, 1]` boundedness contract.
const BOUNDED_TOL: f64 = 1e-10;

/// Mixing weight of the telescopic family, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelescopicParameter(f64);

impl TelescopicParameter {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "telescopic parameter must lie strictly in (0,1), got {mu}"
            )));
        }
        Ok(Self(mu))
    }

    /// `exp(-3/2)`: minimizes the prefactor of the main revival bound.
    pub fn optimal() -> Self {
        Self((-1.5f64).exp())
    }

    /// `exp(-1/2)`: minimizes the prefactor of the alternate revival bound.
    pub fn alt_optimal() -> Self {
        Self((-0.5f64).exp())
    }

    /// `1/2`: the choice whose symmetrized TRE is the QJSD.
    pub fn half() -> Self {
        Self(0.5)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `log(1/mu)`, the TRE normalization.
    pub fn log_inv(self) -> f64 {
        -self.0.ln()
    }
}

/// Nonnegative divergence value; infinite only for the unregularized
/// relative entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue(f64);

impl DivergenceValue {
    /// For quantifiers bounded in `[0, 1]` (TD, TRE, QJSD).
    fn bounded(v: f64) -> Result<Self> {
        let v = Self::floor(v)?;
        if v > 1.0 + BOUNDED_TOL {
            return Err(Error::NumericalInstability(format!(
                "bounded divergence evaluated to {v}"
            )));
        }
        Ok(Self(v))
    }

    /// For the unregularized relative entropy (may be `+inf`).
    fn nonnegative(v: f64) -> Result<Self> {
        Ok(Self(if v.is_infinite() { v } else { Self::floor(v)? }))
    }

    fn floor(v: f64) -> Result<f64> {
        if v < -NOISE_FLOOR || v.is_nan() {
            return Err(Error::NumericalInstability(format!(
                "divergence evaluated to {v}"
            )));
        }
        Ok(if v.abs() < NOISE_FLOOR { 0.0 } else { v })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl From<DivergenceValue> for f64 {
    fn from(v: DivergenceValue) -> f64 {
        v.0
    }
}

fn check_dims(context: &'static str, a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(context, a.dim(), b.dim()));
    }
    Ok(())
}

/// Trace distance `Tr|rho - sigma| / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    check_dims("trace_distance", rho, sigma)?;
    let diff = HermitianMatrix::new(rho.matrix() - sigma.matrix())?;
    DivergenceValue::bounded(0.5 * diff.trace_norm()?)
}

enum Relative {
    Finite(f64),
    SupportViolation,
}

/// `Tr(rho log rho - rho log tau)` evaluated from both spectra as
/// `sum_i lr_i log lr_i - sum_ij |<u_i|v_j>|^2 lr_i log lt_j`, with the
/// `0 log 0 = 0` convention applied at the trace level. Eigenvalues of `tau`
/// below the zero threshold are skipped; if the total overlap mass on the
/// skipped directions exceeds [`SUPPORT_VIOLATION_TOL`], the support of `rho`
/// leaks outside the support of `tau`.
fn umegaki(rho: &DensityMatrix, tau: &SpectralDecomposition) -> Relative {
    let zt = ZERO_EIGENVALUE_THRESHOLD;
    let rho_spec = rho.spectrum();
    let overlap = &rho_spec.eigenvectors().adjoint() * tau.eigenvectors();
    let n = rho.dim();
    let mut entropy_term = 0.0;
    for &l in rho_spec.eigenvalues() {
        if l > zt {
            entropy_term += l * l.ln();
        }
    }
    let mut cross_term = 0.0;
    let mut escaped_mass = 0.0;
    for j in 0..n {
        let lt = tau.eigenvalues()[j];
        let mut weight = 0.0;
        for i in 0..n {
            weight += overlap.get(i, j).norm_sqr() * rho_spec.eigenvalues()[i];
        }
        if lt <= zt {
            escaped_mass += weight;
        } else {
            cross_term += weight * lt.ln();
        }
    }
    if escaped_mass > SUPPORT_VIOLATION_TOL {
        Relative::SupportViolation
    } else {
        Relative::Finite(entropy_term - cross_term)
    }
}

/// Umegaki quantum relative entropy `S(rho, sigma)`, natural logarithm.
///
/// Returns `+inf` when the support of `rho` is not contained in the support
/// of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    check_dims("relative_entropy", rho, sigma)?;
    match umegaki(rho, sigma.spectrum()) {
        Relative::Finite(s) => DivergenceValue::nonnegative(s),
        Relative::SupportViolation => DivergenceValue::nonnegative(f64::INFINITY),
    }
}

/// Telescopic relative entropy
/// `S_mu(rho, sigma) = S(rho, mu rho + (1-mu) sigma) / log(1/mu)`.
///
/// Always finite and bounded in `[0, 1]`: the mixture dominates `mu rho`, so
/// its support contains the support of `rho`.
pub fn telescopic_re(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    mu: TelescopicParameter,
) -> Result<DivergenceValue> {
    check_dims("telescopic_re", rho, sigma)?;
    let m = mu.get();
    let mix =
        HermitianMatrix::new(&rho.matrix().scaled_real(m) + &sigma.matrix().scaled_real(1.0 - m))?;
    match umegaki(rho, &mix.eigh()?) {
        Relative::Finite(s) => DivergenceValue::bounded(s / mu.log_inv()),
        Relative::SupportViolation => Err(Error::NumericalInstability(
            "telescopic mixture lost the support of its first argument".into(),
        )),
    }
}

/// Arithmetic mean of the TRE over both argument orders; symmetric exactly.
pub fn symmetrized_tre(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    mu: TelescopicParameter,
) -> Result<DivergenceValue> {
    let forward = telescopic_re(rho, sigma, mu)?.value();
    let backward = telescopic_re(sigma, rho, mu)?.value();
    DivergenceValue::bounded(0.5 * (forward + backward))
}

/// Quantum Jensen-Shannon divergence: the symmetrized TRE at `mu = 1/2`.
pub fn qjsd(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    symmetrized_tre(rho, sigma, TelescopicParameter::half())
}

/// Square root of the QJSD; a proper metric on states.
pub fn sqrt_qjsd(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    DivergenceValue::bounded(qjsd(rho, sigma)?.value().sqrt())
}

/// TRE extended to nonnegative scalars:
/// `a log(a / (mu a + (1-mu) b)) / log(1/mu)`, with `0 log 0 = 0`.
pub fn scalar_tre(a: f64, b: f64, mu: TelescopicParameter) -> Result<f64> {
    if a < 0.0 || b < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "scalar TRE requires nonnegative inputs, got ({a}, {b})"
        )));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let m = mu.get();
    Ok(a * (a / (m * a + (1.0 - m) * b)).ln() / mu.log_inv())
}

/// Coefficient `2 (1-mu)^2 / log(1/mu)` of the generalized Pinsker lower
/// bound `coeff * D^2 <= S_mu`.
pub fn pinsker_coefficient(mu: TelescopicParameter) -> f64 {
    let m = mu.get();
    2.0 * (1.0 - m) * (1.0 - m) / mu.log_inv()
}

/// Prefactor `(2 mu^2 log^3(1/mu))^(-1/4)` of the entropic revival bound
/// with fourth roots on all three terms. Minimized at `mu = exp(-3/2)` where
/// it equals `(4 e^3 / 27)^(1/4)`.
pub fn tre_bound_prefactor(mu: TelescopicParameter) -> f64 {
    let m = mu.get();
    let l = mu.log_inv();
    (2.0 * m * m * l * l * l).powf(-0.25)
}

/// Prefactor `(2 mu^2 log(1/mu))^(-1/2)` of the alternate revival bound
/// (square root on the environment term). Minimized at `mu = exp(-1/2)`
/// where it equals `sqrt(e)`.
pub fn tre_bound_prefactor_alt(mu: TelescopicParameter) -> f64 {
    let m = mu.get();
    (2.0 * m * m * mu.log_inv()).powf(-0.5)
}

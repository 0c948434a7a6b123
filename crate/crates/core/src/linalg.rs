//! Dense complex linear algebra for Hilbert-space dimensions up to ~100.
//!
//! Everything is stored densely; the target problems (a qubit coupled to a
//! truncated oscillator or to a second qubit) never exceed dimension 128, so
//! exact diagonalization is both adequate and the most robust choice.
//! All operations are pure functions on immutable values.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Relative tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Default absolute threshold below which eigenvalues are treated as zero.
pub const ZERO_EIGENVALUE_THRESHOLD: f64 = 1e-12;

/// Which tensor factor a partial trace keeps.
///
/// The composite index convention is `i = i_s * d_e + i_e`: the system is the
/// slow index, matching `kron(system_op, env_op)` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

/// Dense complex matrix with row-major logical indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Build from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(
                "ComplexMatrix::from_row_major",
                rows * cols,
                entries.len(),
            ));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Build from real entries listed row by row.
    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &complex)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.inner[(row, col)] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        self.scaled(C64::new(factor, 0.0))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest asymmetry `|M[i][j] - conj(M[j][i])|` over all index pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows() {
            for j in i..self.cols() {
                let d = (self.inner[(i, j)] - self.inner[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn all_finite(&self) -> bool {
        self.inner
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Kronecker (tensor) product; `self` is the slow factor.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

/// Marginal of a square operator on a `d_s * d_e` composite space.
pub fn partial_trace(
    m: &ComplexMatrix,
    d_s: usize,
    d_e: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let dim = d_s * d_e;
    if !m.is_square() || m.rows() != dim {
        return Err(Error::dims(
            "partial_trace",
            format!("{dim}x{dim}"),
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    let out = match keep {
        Subsystem::System => ComplexMatrix::from_fn(d_s, d_s, |i, j| {
            (0..d_e).map(|a| m.get(i * d_e + a, j * d_e + a)).sum()
        }),
        Subsystem::Environment => ComplexMatrix::from_fn(d_e, d_e, |a, b| {
            (0..d_s).map(|i| m.get(i * d_e + a, i * d_e + b)).sum()
        }),
    };
    Ok(out)
}

/// Square complex matrix with a validated Hermiticity contract.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validate squareness, finiteness and Hermiticity (relative tolerance
    /// [`HERMITICITY_TOL`] on the largest entry magnitude), then symmetrize
    /// `(M + M^dag)/2` so the stored matrix satisfies the contract exactly.
    ///
    /// Exact symmetrization matters downstream: sums, real scalings, tensor
    /// products and partial traces of exactly Hermitian matrices stay exactly
    /// Hermitian, so differences of nearly equal states keep a zero defect
    /// instead of one at the scale of their entries.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::dims(
                "HermitianMatrix::new",
                "square matrix",
                format!("{}x{}", mat.rows(), mat.cols()),
            ));
        }
        if !mat.all_finite() {
            return Err(Error::InvalidArgument(
                "matrix contains non-finite entries".into(),
            ));
        }
        let scale = mat.max_abs();
        let defect = mat.hermiticity_defect();
        let tolerance = HERMITICITY_TOL * scale.max(1e-300);
        if scale > 0.0 && defect > tolerance {
            return Err(Error::NotHermitian {
                asymmetry: defect,
                tolerance,
            });
        }
        let mat = if defect == 0.0 {
            mat
        } else {
            (&mat + &mat.adjoint()).scaled_real(0.5)
        };
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Hermitian eigendecomposition with eigenvalues sorted ascending.
    ///
    /// The tridiagonalization-based solver is used as a seed and its result
    /// is polished with cyclic complex Jacobi rotations on `U^dag A U` until
    /// the off-diagonal mass reaches machine precision. The seed alone can
    /// lose five to six digits on matrices with clustered small eigenvalues
    /// (tensor products are a reliable trigger); the polish restores full
    /// accuracy at the cost of a couple of sweeps in the common case.
    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        let n = self.dim();
        let a = &self.mat.inner;
        let scale = self.mat.max_abs();
        if scale == 0.0 {
            return Ok(SpectralDecomposition {
                eigenvalues: vec![0.0; n],
                eigenvectors: ComplexMatrix::identity(n),
            });
        }
        let (mut b, mut u) = match a.clone().try_symmetric_eigen(f64::EPSILON, 50_000) {
            Some(seed) => {
                let u = seed.eigenvectors;
                (u.adjoint() * a * &u, u)
            }
            // Jacobi from the identity still converges, just more slowly.
            None => (a.clone(), DMatrix::identity(n, n)),
        };
        b = (&b + &b.adjoint()).scale(0.5);
        jacobi_diagonalize(&mut b, &mut u, scale)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| b[(i, i)].re.total_cmp(&b[(j, j)].re));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| b[(k, k)].re).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigh()?.eigenvalues.iter().map(|l| l.abs()).sum())
    }

    /// Apply `f` to every eigenvalue: `U f(L) U^dag`.
    ///
    /// Errors if `f` produces a non-finite value on any eigenvalue.
    pub fn spectral_fn(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        self.eigh()?.map_eigenvalues(f)
    }

    /// Like [`spectral_fn`](Self::spectral_fn) but eigenvalues with
    /// `|lambda| <= zero_threshold` map to 0 instead of `f(lambda)`,
    /// implementing the `0 log 0 = 0` style conventions at the spectral level.
    pub fn spectral_fn_zeroed(
        &self,
        f: impl Fn(f64) -> f64,
        zero_threshold: f64,
    ) -> Result<HermitianMatrix> {
        self.eigh()?
            .map_eigenvalues(|l| if l.abs() <= zero_threshold { 0.0 } else { f(l) })
    }
}

/// Cyclic complex Jacobi diagonalization of the Hermitian matrix `b`,
/// accumulating the rotations into `u` (so `u` maps the original basis to the
/// eigenbasis). Each rotation aligns the phase of the targeted off-diagonal
/// entry and then applies the classic real Jacobi angle, which annihilates
/// that entry exactly; convergence is quadratic once nearly diagonal.
fn jacobi_diagonalize(b: &mut DMatrix<C64>, u: &mut DMatrix<C64>, scale: f64) -> Result<()> {
    let n = b.nrows();
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off_max = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off_max = off_max.max(b[(p, q)].norm());
            }
        }
        if off_max <= tol {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                let f = b[(p, q)];
                let h = f.norm();
                if h == 0.0 {
                    continue;
                }
                let phase = f / h;
                let theta = (b[(q, q)].re - b[(p, p)].re) / (2.0 * h);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let cs = C64::new(c, 0.0);
                let sp = phase * s;
                // Rows: B <- G^dag B.
                for k in 0..n {
                    let bpk = b[(p, k)];
                    let bqk = b[(q, k)];
                    b[(p, k)] = bpk * cs - bqk * sp;
                    b[(q, k)] = bpk * sp.conj() + bqk * cs;
                }
                // Columns: B <- B G.
                for k in 0..n {
                    let bkp = b[(k, p)];
                    let bkq = b[(k, q)];
                    b[(k, p)] = bkp * cs - bkq * sp.conj();
                    b[(k, q)] = bkp * sp + bkq * cs;
                }
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = ukp * cs - ukq * sp.conj();
                    u[(k, q)] = ukp * sp + ukq * cs;
                }
            }
        }
    }
    Err(Error::EigenDecompositionFailed)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and ascending; eigenvectors are the columns of a
/// unitary matrix in matching order. Within degenerate subspaces the basis is
/// an arbitrary orthonormal choice, so consumers must stay basis-independent.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// `U diag(f(lambda)) U^dag` for complex-valued `f`.
    pub fn apply_complex(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.eigenvectors.inner;
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                f(self.eigenvalues[i])
            } else {
                C64::new(0.0, 0.0)
            }
        });
        ComplexMatrix {
            inner: u * diag * u.adjoint(),
        }
    }

    /// `U diag(f(lambda)) U^dag` for real `f`, validated Hermitian.
    fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let mut mapped = Vec::with_capacity(self.dim());
        for &l in &self.eigenvalues {
            let v = f(l);
            if !v.is_finite() {
                return Err(Error::SpectralFunctionDomain { eigenvalue: l });
            }
            mapped.push(v);
        }
        let n = self.dim();
        let u = &self.eigenvectors.inner;
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(mapped[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        HermitianMatrix::new(ComplexMatrix {
            inner: u * diag * u.adjoint(),
        })
    }

    /// `U diag(lambda) U^dag`; equals the decomposed matrix up to roundoff.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_complex(|l| C64::new(l, 0.0))
    }

    /// Unitarity defect `max |U^dag U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let u = &self.eigenvectors;
        let gram = &u.adjoint() * u;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram.get(i, j) - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }
}

/// Propagator `exp(-i H t)` from a precomputed decomposition of `H`.
pub fn propagator(h: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    h.apply_complex(|l| C64::new(0.0, -l * t).exp())
}

/// Conjugate `state` by `exp(-i h t)`.
pub fn evolve_unitary(h: &HermitianMatrix, t: f64, state: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !state.is_square() || state.rows() != h.dim() {
        return Err(Error::dims(
            "evolve_unitary",
            format!("{0}x{0}", h.dim()),
            format!("{}x{}", state.rows(), state.cols()),
        ));
    }
    let u = propagator(&h.eigh()?, t);
    Ok(&(&u * state) * &u.adjoint())
}

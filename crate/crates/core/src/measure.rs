//! Verification measurement bases and density-matrix figures of merit.
//!
//! The verifier projects an incoming qudit onto the expected hash state
//! ψ_j(x2) together with d−1 phase-orthogonal companions obtained by adding
//! Fourier phases 2π·g·(k−1)/d to the basis modes. The d states form an
//! orthonormal basis, so outcome probabilities are a complete measurement.
//!
//! Density-matrix utilities (Uhlmann fidelity, purity as the largest
//! eigenvalue) operate on given matrices; reconstructing them from count
//! data is out of scope.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hash::{mul_mod, HashParams, QuditState};

/// Pairwise-orthogonality tolerance on basis Gram matrices.
const GRAM_TOL: f64 = 1e-10;
/// Default Hermiticity tolerance for density matrices.
const HERM_TOL: f64 = 1e-9;
/// Default trace tolerance for density matrices.
const TRACE_TOL: f64 = 1e-6;
/// Eigenvalues above −PSD_TOL are clamped to zero; below it they are errors.
const PSD_TOL: f64 = 1e-6;

/// Orthonormal measurement basis: index 0 is the target state, indices
/// 1..d are its phase-orthogonal companions.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    states: Vec<QuditState>,
}

impl MeasurementBasis {
    /// Validates that the states form a complete orthonormal basis.
    pub fn new(states: Vec<QuditState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParams("basis must contain at least one state".into()));
        }
        let d = states[0].dim();
        if states.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: states.len() });
        }
        let mut worst: f64 = 0.0;
        for (g, a) in states.iter().enumerate() {
            for (h, b) in states.iter().enumerate() {
                let overlap = a.inner(b)?;
                let expect = if g == h { 1.0 } else { 0.0 };
                worst = worst.max((overlap.norm() - expect).abs());
            }
        }
        if worst > GRAM_TOL {
            return Err(Error::NotOrthonormal { deviation: worst });
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[QuditState] {
        &self.states
    }

    /// The target state ψ_j(x2).
    pub fn target(&self) -> &QuditState {
        &self.states[0]
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.states.len()
    }
}

/// Measurement basis for qudit j against the expected input x2.
///
/// State g carries amplitudes (1/√d)·exp(i·2π·s_{j,k}·x2/q + i·φ_{g,k}) with
/// φ_{g,k} = 2π·g·(k−1)/d; g = 0 is the target state itself. The combined
/// phases are exact multiples of 2π/(q·d), so the basis is built without
/// accumulating rounding error.
pub fn orthogonal_basis(params: &HashParams, j: usize, x2: u64) -> Result<MeasurementBasis> {
    params.check_input(x2)?;
    let row = params.row(j)?;
    let q = params.q();
    let d = row.len() as u64;
    let modulus = q.checked_mul(d).ok_or_else(|| {
        Error::InvalidParams(format!("phase modulus q·d overflows for q = {q}, d = {d}"))
    })?;
    let mut states = Vec::with_capacity(row.len());
    for g in 0..d {
        let indices = row
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                // s·x2·d + g·k·q  (mod q·d), with k the 0-based mode index.
                let hash_part = mul_mod(mul_mod(s, x2, modulus), d, modulus);
                let fourier_part = mul_mod(mul_mod(g, k as u64, modulus), q, modulus);
                (hash_part + fourier_part) % modulus
            })
            .collect();
        states.push(QuditState::from_phase_indices(modulus, indices)?);
    }
    MeasurementBasis::new(states)
}

/// Outcome distribution p_g = |⟨basis_g|state⟩|² of the projective
/// measurement; sums to 1 for unit-norm inputs.
pub fn outcome_probabilities(state: &QuditState, basis: &MeasurementBasis) -> Result<Vec<f64>> {
    if state.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: state.dim() });
    }
    basis
        .states
        .iter()
        .map(|b| Ok(b.inner(state)?.norm_sqr().min(1.0)))
        .collect()
}

/// A d×d density matrix: Hermitian with unit trace, within tolerances.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Construct with the default tolerances (Hermitian within 1e-9, trace
    /// within 1e-6 of 1).
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerances(dim, entries, HERM_TOL, TRACE_TOL)
    }

    /// Construct with caller-chosen tolerances. Reconstructed experimental
    /// matrices often miss unit trace by more than 1e-6; loosen `trace_tol`
    /// for those.
    pub fn with_tolerances(
        dim: usize,
        entries: Vec<Complex64>,
        herm_tol: f64,
        trace_tol: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("density matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        let m = DMatrix::from_row_slice(dim, dim, &entries);
        let herm_dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_dev > herm_tol {
            return Err(Error::NotHermitian { deviation: herm_dev });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > trace_tol {
            return Err(Error::TraceNotUnit { trace, tolerance: trace_tol });
        }
        Ok(Self { entries: m })
    }

    /// Projector |ψ⟩⟨ψ| of a pure state.
    pub fn from_pure(state: &QuditState) -> Self {
        let d = state.dim();
        let amps = state.amplitudes();
        let entries = DMatrix::from_fn(d, d, |i, j| amps[i] * amps[j].conj());
        Self { entries }
    }

    /// I/d.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("density matrix dimension must be positive".into()));
        }
        let inv = Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self { entries: DMatrix::from_diagonal_element(dim, dim, inv) })
    }

    /// Parse the text format: the dimension d, then d×d real entries, then
    /// d×d imaginary entries, whitespace-separated. Lines starting with `#`
    /// are comments.
    pub fn parse_text(input: &str, herm_tol: f64, trace_tol: f64) -> Result<Self> {
        let mut tokens = input
            .lines()
            .filter(|line| !line.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace);
        let dim: usize = tokens
            .next()
            .ok_or_else(|| Error::MatrixParse("missing dimension".into()))?
            .parse()
            .map_err(|e| Error::MatrixParse(format!("bad dimension: {e}")))?;
        let mut values = Vec::with_capacity(2 * dim * dim);
        for token in tokens {
            let v: f64 =
                token.parse().map_err(|e| Error::MatrixParse(format!("bad entry {token:?}: {e}")))?;
            values.push(v);
        }
        if values.len() != 2 * dim * dim {
            return Err(Error::MatrixParse(format!(
                "expected {} entries for d = {dim}, got {}",
                2 * dim * dim,
                values.len()
            )));
        }
        let entries = (0..dim * dim)
            .map(|i| Complex64::new(values[i], values[dim * dim + i]))
            .collect();
        Self::with_tolerances(dim, entries, herm_tol, trace_tol)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }
}

/// Eigendecomposition of the Hermitian part; eigenvalues ascending.
fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Eigenvalues clamped to [0, ∞); values below −PSD_TOL are rejected.
/// Positive values under the relative noise floor are zeroed too: the
/// square roots taken downstream would otherwise amplify O(ε)·λ_max
/// eigensolver noise into O(√ε) fidelity errors.
fn psd_eigenvalues(values: &[f64]) -> Result<Vec<f64>> {
    if let Some(&lowest) = values.first() {
        if lowest < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lowest });
        }
    }
    let floor = values.last().copied().unwrap_or(0.0).max(0.0) * 1e-12;
    Ok(values.iter().map(|&v| if v > floor { v } else { 0.0 }).collect())
}

/// Uhlmann fidelity F = [Tr √(√ρ_t ρ √ρ_t)]² between two density matrices.
///
/// For a pure target this reduces to ⟨ψ|ρ_measured|ψ⟩. Small negative
/// eigenvalues (above −1e-6), as produced by experimental reconstruction,
/// are clamped to zero before the square roots; the result is clamped to
/// [0, 1].
pub fn density_fidelity(target: &DensityMatrix, measured: &DensityMatrix) -> Result<f64> {
    if target.dim() != measured.dim() {
        return Err(Error::DimensionMismatch { expected: target.dim(), got: measured.dim() });
    }
    let (t_vals, t_vecs) = hermitian_eigen(target.matrix());
    let t_vals = psd_eigenvalues(&t_vals)?;
    let (m_vals, _) = hermitian_eigen(measured.matrix());
    psd_eigenvalues(&m_vals)?;

    let sqrt_diag = DMatrix::from_diagonal(
        &nalgebra::DVector::from_iterator(
            t_vals.len(),
            t_vals.iter().map(|&v| Complex64::new(v.sqrt(), 0.0)),
        ),
    );
    let sqrt_t = &t_vecs * sqrt_diag * t_vecs.adjoint();
    let inner = &sqrt_t * measured.matrix() * &sqrt_t;
    let (inner_vals, _) = hermitian_eigen(&inner);
    let floor = inner_vals.last().copied().unwrap_or(0.0).max(0.0) * 1e-12;
    let root_sum: f64 =
        inner_vals.iter().map(|&v| if v > floor { v.sqrt() } else { 0.0 }).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Largest eigenvalue of the density matrix; 1 for pure states.
pub fn purity_max_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(rho.matrix());
    values
        .last()
        .copied()
        .ok_or_else(|| Error::InvalidParams("empty density matrix".into()))
}

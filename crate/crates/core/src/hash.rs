//! Hash-state construction over Z_q, character-sum bias, and collision fidelity.
//!
//! The j-th qudit of the hash of x carries amplitudes
//! (1/√d)·exp(i·2π·s_{j,k}·x/q) on the d basis modes, and the full hash is the
//! ordered product of m such qudits. Collision behaviour is governed by the
//! normalized character sums of the parameter rows: the squared modulus of
//! the row sum at the input difference is exactly the per-qudit collision
//! probability.
//!
//! Phases are tracked as integer indices modulo q. Products over many qudits
//! therefore accumulate no rounding error; complex amplitudes are evaluated
//! from the indices only where a caller needs them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |‖ψ‖² − 1| for state construction.
const NORM_TOL: f64 = 1e-12;

/// exp(i·2π·t/modulus).
#[inline]
pub(crate) fn unit_phase(t: u64, modulus: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (t as f64) / (modulus as f64))
}

/// (a·b) mod q without intermediate overflow.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// (a − b) mod q for a, b < q.
#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (q - b)
    }
}

/// Precomputed q-th roots of unity, indexed by phase index.
///
/// Scans over all of Z_q cost O(q·d) anyway, so the O(q) table build
/// amortizes immediately and removes per-term trigonometry.
pub(crate) struct PhaseTable {
    q: u64,
    roots: Vec<Complex64>,
}

impl PhaseTable {
    pub(crate) fn new(q: u64) -> Self {
        let roots = (0..q).map(|t| unit_phase(t, q)).collect();
        Self { q, roots }
    }

    #[inline]
    pub(crate) fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub(crate) fn root(&self, t: u64) -> Complex64 {
        self.roots[t as usize]
    }

    /// Collision-probability factor of one parameter row at input difference x:
    /// |Σ_k exp(i·2π·s_k·x/q)|² / d².
    #[inline]
    pub(crate) fn row_factor(&self, row: &[u64], x: u64) -> f64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for &s in row {
            sum += self.root(mul_mod(s, x, self.q));
        }
        let d = row.len() as f64;
        (sum.norm_sqr() / (d * d)).min(1.0)
    }
}

fn validate_set(set: &[u64], q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("q must be at least 2, got {q}")));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for &s in set {
        if s >= q {
            return Err(Error::ElementOutOfRange { value: s, q });
        }
    }
    Ok(())
}

fn check_distinct(sorted: &[u64]) -> Result<()> {
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateElement { value: w[0] });
        }
    }
    Ok(())
}

/// Normalized character-sum modulus of `set` at `x`:
/// (1/|S|)·|Σ_{s∈S} exp(i·2π·s·x/q)|.
pub fn bias(set: &[u64], x: u64, q: u64) -> Result<f64> {
    validate_set(set, q)?;
    if x >= q {
        return Err(Error::InputOutOfRange { x, q });
    }
    let sum: Complex64 = set.iter().map(|&s| unit_phase(mul_mod(s, x, q), q)).sum();
    Ok((sum.norm() / set.len() as f64).min(1.0))
}

/// Maximum of [`bias`] over all nonzero x, with the smallest attaining x.
pub fn max_bias(set: &[u64], q: u64) -> Result<(u64, f64)> {
    validate_set(set, q)?;
    let table = PhaseTable::new(q);
    Ok(max_bias_scan(set, &table))
}

/// Full scan over x ∈ [1, q); ties broken by the smallest x.
pub(crate) fn max_bias_scan(set: &[u64], table: &PhaseTable) -> (u64, f64) {
    let q = table.q();
    let inv = 1.0 / set.len() as f64;
    let mut x_star = 1;
    let mut best = -1.0;
    for x in 1..q {
        let mut sum = Complex64::new(0.0, 0.0);
        for &s in set {
            sum += table.root(mul_mod(s, x, q));
        }
        let b = sum.norm() * inv;
        if b > best {
            best = b;
            x_star = x;
        }
    }
    (x_star, best.min(1.0))
}

/// Shift the set so its first element becomes 0, then sort.
///
/// The bias at every x is invariant under this shift, so the canonical form
/// is interchangeable with the original set wherever only bias matters.
pub fn normalize_set(set: &[u64], q: u64) -> Result<Vec<u64>> {
    validate_set(set, q)?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    check_distinct(&sorted)?;
    let first = set[0];
    let mut out: Vec<u64> = set.iter().map(|&s| sub_mod(s, first, q)).collect();
    out.sort_unstable();
    Ok(out)
}

/// Raw serialization form; `d` and `m` are carried redundantly and checked
/// against the matrix shape on load.
#[derive(Serialize, Deserialize)]
struct RawHashParams {
    q: u64,
    d: usize,
    m: usize,
    s: Vec<Vec<u64>>,
}

/// Parameters of the hash scheme: input space Z_q and the m×d matrix of
/// phase parameters s_{j,k}.
///
/// Rows are kept in canonical form: the first entry of every row is 0 and
/// entries within a row are pairwise distinct. Construction validates this,
/// so a `HashParams` value is always usable as-is.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHashParams", into = "RawHashParams")]
pub struct HashParams {
    q: u64,
    s: Vec<Vec<u64>>,
}

impl HashParams {
    pub fn new(q: u64, s: Vec<Vec<u64>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("q must be at least 2, got {q}")));
        }
        if s.is_empty() {
            return Err(Error::InvalidParams("at least one qudit row is required".into()));
        }
        let d = s[0].len();
        if d < 2 {
            return Err(Error::InvalidParams(format!(
                "qudit dimension must be at least 2, got {d}"
            )));
        }
        for (j, row) in s.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidParams(format!(
                    "row {j} has {} entries, expected {d}",
                    row.len()
                )));
            }
            if row[0] != 0 {
                return Err(Error::InvalidParams(format!(
                    "row {j} must start with 0 (canonical form), got {}",
                    row[0]
                )));
            }
            for &v in row {
                if v >= q {
                    return Err(Error::InvalidParams(format!(
                        "row {j} entry {v} outside [0, {q})"
                    )));
                }
            }
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if check_distinct(&sorted).is_err() {
                return Err(Error::InvalidParams(format!("row {j} has repeated entries")));
            }
        }
        Ok(Self { q, s })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.s[0].len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.s.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.s
    }

    pub fn row(&self, j: usize) -> Result<&[u64]> {
        self.s
            .get(j)
            .map(|r| r.as_slice())
            .ok_or(Error::QuditIndexOutOfRange { index: j, m: self.m() })
    }

    pub(crate) fn check_input(&self, x: u64) -> Result<()> {
        if x >= self.q {
            return Err(Error::InputOutOfRange { x, q: self.q });
        }
        Ok(())
    }
}

impl TryFrom<RawHashParams> for HashParams {
    type Error = Error;

    fn try_from(raw: RawHashParams) -> Result<Self> {
        if raw.s.len() != raw.m {
            return Err(Error::InvalidParams(format!(
                "declared m = {} but matrix has {} rows",
                raw.m,
                raw.s.len()
            )));
        }
        if raw.s.first().map(Vec::len) != Some(raw.d) {
            return Err(Error::InvalidParams(format!(
                "declared d = {} but first row has {} entries",
                raw.d,
                raw.s.first().map_or(0, Vec::len)
            )));
        }
        HashParams::new(raw.q, raw.s)
    }
}

impl From<HashParams> for RawHashParams {
    fn from(p: HashParams) -> Self {
        RawHashParams { q: p.q, d: p.d(), m: p.m(), s: p.s }
    }
}

/// Exact description of an equal-magnitude phase state: the k-th amplitude
/// is (1/√d)·exp(i·2π·t_k/modulus) with t_k the k-th phase index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPhases {
    pub modulus: u64,
    pub phase_indices: Vec<u64>,
}

/// A d-dimensional unit state vector, optionally carrying the exact
/// phase-index form it was built from.
#[derive(Clone, Debug)]
pub struct QuditState {
    amplitudes: Vec<Complex64>,
    exact: Option<ExactPhases>,
}

impl QuditState {
    /// Build from raw amplitudes; the squared norm must be 1 within 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParams("state must have at least one amplitude".into()));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes, exact: None })
    }

    /// Build the equal-magnitude state with the given phase indices.
    pub fn from_phase_indices(modulus: u64, phase_indices: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParams("phase modulus must be positive".into()));
        }
        if phase_indices.is_empty() {
            return Err(Error::InvalidParams("state must have at least one amplitude".into()));
        }
        for &t in &phase_indices {
            if t >= modulus {
                return Err(Error::ElementOutOfRange { value: t, q: modulus });
            }
        }
        let inv_sqrt_d = 1.0 / (phase_indices.len() as f64).sqrt();
        let amplitudes = phase_indices
            .iter()
            .map(|&t| unit_phase(t, modulus) * inv_sqrt_d)
            .collect();
        Ok(Self { amplitudes, exact: Some(ExactPhases { modulus, phase_indices }) })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The exact phase-index form, when the state was built from one.
    pub fn exact(&self) -> Option<&ExactPhases> {
        self.exact.as_ref()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &QuditState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Ordered product of m qudit states; no entanglement is represented.
#[derive(Clone, Debug)]
pub struct QuantumHash {
    qudits: Vec<QuditState>,
}

impl QuantumHash {
    pub fn qudits(&self) -> &[QuditState] {
        &self.qudits
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.qudits.len()
    }

    /// ⟨self|other⟩ = product of per-qudit inner products.
    pub fn inner(&self, other: &QuantumHash) -> Result<Complex64> {
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: other.m() });
        }
        let mut prod = Complex64::new(1.0, 0.0);
        for (a, b) in self.qudits.iter().zip(&other.qudits) {
            prod *= a.inner(b)?;
        }
        Ok(prod)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &QuantumHash) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }
}

/// A subset of Z_q together with its exact worst-case bias.
///
/// `epsilon` is always the exact maximum of [`bias`] over nonzero x for
/// `elements`; the `certified` flag records whether the set is additionally
/// known to be globally optimal among canonical sets of its size (it is set
/// by exhaustive enumeration and cleared by sampled searches).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasedSet {
    pub q: u64,
    pub elements: Vec<u64>,
    pub epsilon: f64,
    pub certified: bool,
}

impl BiasedSet {
    /// Sorts `elements`, validates them, and computes the exact bias maximum.
    pub fn from_elements(q: u64, mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        validate_set(&elements, q)?;
        check_distinct(&elements)?;
        let (_, epsilon) = max_bias(&elements, q)?;
        Ok(Self { q, elements, epsilon, certified: false })
    }
}

/// The j-th qudit (0-based) of the hash of x: phase index (s_{j,k}·x) mod q
/// on basis mode k.
pub fn qudit_hash_state(params: &HashParams, j: usize, x: u64) -> Result<QuditState> {
    params.check_input(x)?;
    let row = params.row(j)?;
    let q = params.q();
    let indices = row.iter().map(|&s| mul_mod(s, x, q)).collect();
    QuditState::from_phase_indices(q, indices)
}

/// The full m-qudit hash of x.
pub fn quantum_hash(params: &HashParams, x: u64) -> Result<QuantumHash> {
    params.check_input(x)?;
    let qudits = (0..params.m())
        .map(|j| qudit_hash_state(params, j, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantumHash { qudits })
}

/// Collision fidelity |⟨ψ(x1)|ψ(x2)⟩|² in closed form.
///
/// Evaluated from the exact phase-index differences, so it depends on x1 and
/// x2 only through (x1 − x2) mod q and agrees with the state-vector inner
/// product to machine precision.
pub fn hash_fidelity(params: &HashParams, x1: u64, x2: u64) -> Result<f64> {
    params.check_input(x1)?;
    params.check_input(x2)?;
    let q = params.q();
    let delta = sub_mod(x1, x2, q);
    let mut fid = 1.0;
    for row in params.rows() {
        let sum: Complex64 = row.iter().map(|&s| unit_phase(mul_mod(s, delta, q), q)).sum();
        let d = row.len() as f64;
        fid *= (sum.norm_sqr() / (d * d)).min(1.0);
    }
    Ok(fid)
}

/// Worst-case collision: the nonzero input difference maximizing
/// [`hash_fidelity`] against 0, with the smallest attaining x.
///
/// By translation invariance this covers every colliding pair (x1, x2).
pub fn worst_case_collision(params: &HashParams) -> (u64, f64) {
    let table = PhaseTable::new(params.q());
    worst_case_scan(params.rows(), &table)
}

/// Full scan over x ∈ [1, q); ties broken by the smallest x.
pub(crate) fn worst_case_scan(rows: &[Vec<u64>], table: &PhaseTable) -> (u64, f64) {
    let q = table.q();
    let mut x_star = 1;
    let mut best = -1.0;
    for x in 1..q {
        let mut fid = 1.0;
        for row in rows {
            fid *= table.row_factor(row, x);
        }
        if fid > best {
            best = fid;
            x_star = x;
        }
    }
    (x_star, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(q: u64, s: Vec<Vec<u64>>) -> HashParams {
        HashParams::new(q, s).unwrap()
    }

    /// Independent of the library path: direct complex exponential sum.
    /// Phases are reduced mod q before the trig calls; unreduced multiples
    /// of 2π lose precision long before the 1e-12 comparisons here.
    fn brute_bias(set: &[u64], x: u64, q: u64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &s in set {
            let angle = 2.0 * PI * ((s * x % q) as f64) / q as f64;
            re += angle.cos();
            im += angle.sin();
        }
        (re * re + im * im).sqrt() / set.len() as f64
    }

    #[test]
    fn bias_of_full_group_vanishes() {
        let set: Vec<u64> = (0..8).collect();
        assert_abs_diff_eq!(bias(&set, 3, 8).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bias_periodic_collapse() {
        assert_abs_diff_eq!(bias(&[0, 128], 2, 256).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bias(&[0, 128], 1, 256).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bias_rejects_bad_input() {
        assert!(matches!(bias(&[], 1, 8), Err(Error::EmptySet)));
        assert!(matches!(bias(&[9], 1, 8), Err(Error::ElementOutOfRange { .. })));
        assert!(matches!(bias(&[0], 8, 8), Err(Error::InputOutOfRange { .. })));
    }

    #[test]
    fn max_bias_adjacent_pair() {
        let (x_star, value) = max_bias(&[0, 1], 256).unwrap();
        // Brute force over all 255 nonzero x.
        let mut expect = (0u64, -1.0);
        for x in 1..256 {
            let b = brute_bias(&[0, 1], x, 256);
            if b > expect.1 {
                expect = (x, b);
            }
        }
        assert_eq!(x_star, expect.0);
        assert_abs_diff_eq!(value, expect.1, epsilon = 1e-12);
        assert_abs_diff_eq!(value, (PI / 256.0).cos(), epsilon = 1e-12);
    }

    #[test]
    fn max_bias_degenerate_pair() {
        let (x_star, value) = max_bias(&[0, 128], 256).unwrap();
        assert_eq!(x_star, 2);
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn max_bias_matches_brute_force_scan() {
        let set = [0, 85, 171];
        let (x_star, value) = max_bias(&set, 256).unwrap();
        let mut expect = (0u64, -1.0);
        for x in 1..256 {
            let b = brute_bias(&set, x, 256);
            if b > expect.1 {
                expect = (x, b);
            }
        }
        assert_eq!(x_star, expect.0);
        assert_abs_diff_eq!(value, expect.1, epsilon = 1e-12);
    }

    #[test]
    fn normalize_set_shifts_and_sorts() {
        assert_eq!(normalize_set(&[5, 6], 256).unwrap(), vec![0, 1]);
        assert_eq!(normalize_set(&[0, 3, 7], 256).unwrap(), vec![0, 3, 7]);
        assert!(matches!(
            normalize_set(&[4, 4], 256),
            Err(Error::DuplicateElement { value: 4 })
        ));
    }

    #[test]
    fn normalize_set_preserves_bias() {
        let set = [13, 201, 77];
        let normalized = normalize_set(&set, 256).unwrap();
        for x in 0..256 {
            assert_abs_diff_eq!(
                bias(&set, x, 256).unwrap(),
                bias(&normalized, x, 256).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn hash_state_zero_input_is_equal_superposition() {
        let p = params(256, vec![vec![0, 7, 19]]);
        let state = qudit_hash_state(&p, 0, 0).unwrap();
        let exact = state.exact().unwrap();
        assert!(exact.phase_indices.iter().all(|&t| t == 0));
        let expect = 1.0 / 3.0_f64.sqrt();
        for a in state.amplitudes() {
            assert_abs_diff_eq!(a.re, expect, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hash_state_half_period_is_antisymmetric() {
        let p = params(256, vec![vec![0, 1]]);
        let state = qudit_hash_state(&p, 0, 128).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(state.amplitudes()[0].re, inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitudes()[1].re, -inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitudes()[1].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hash_state_phases_step_through_quarter_turns() {
        let p = params(4, vec![vec![0, 1, 2]]);
        let state = qudit_hash_state(&p, 0, 1).unwrap();
        let exact = state.exact().unwrap();
        assert_eq!(exact.phase_indices, vec![0, 1, 2]); // phases 0, π/2, π
        assert_abs_diff_eq!(state.amplitudes()[1].im, 1.0 / 3.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn hash_state_rejects_out_of_range() {
        let p = params(8, vec![vec![0, 1]]);
        assert!(matches!(qudit_hash_state(&p, 1, 0), Err(Error::QuditIndexOutOfRange { .. })));
        assert!(matches!(qudit_hash_state(&p, 0, 8), Err(Error::InputOutOfRange { .. })));
    }

    #[test]
    fn quantum_hash_has_m_normalized_qudits() {
        let p = params(16, vec![vec![0, 1], vec![0, 5], vec![0, 7]]);
        let hash = quantum_hash(&p, 9).unwrap();
        assert_eq!(hash.m(), 3);
        for qudit in hash.qudits() {
            let norm_sqr: f64 = qudit.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert_abs_diff_eq!(norm_sqr, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fidelity_of_identical_inputs_is_one() {
        let p = params(256, vec![vec![0, 3, 50], vec![0, 9, 200]]);
        assert_abs_diff_eq!(hash_fidelity(&p, 77, 77).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_qubit_quarter_group() {
        let p = params(4, vec![vec![0, 1]]);
        assert_abs_diff_eq!(hash_fidelity(&p, 0, 2).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_adjacent_inputs_matches_cosine() {
        let p = params(256, vec![vec![0, 1]]);
        let f = hash_fidelity(&p, 0, 1).unwrap();
        assert_abs_diff_eq!(f, (PI / 256.0).cos().powi(2), epsilon = 1e-12);
        // Table value for a single qubit, 4 printed digits.
        assert!((f - 0.9998).abs() < 5e-5);
    }

    #[test]
    fn fidelity_rejects_out_of_range() {
        let p = params(8, vec![vec![0, 1]]);
        assert!(matches!(hash_fidelity(&p, 8, 0), Err(Error::InputOutOfRange { .. })));
    }

    #[test]
    fn fidelity_matches_state_inner_product() {
        let p = params(64, vec![vec![0, 5, 17], vec![0, 2, 33]]);
        for (x1, x2) in [(0, 1), (7, 50), (63, 12)] {
            let closed = hash_fidelity(&p, x1, x2).unwrap();
            let h1 = quantum_hash(&p, x1).unwrap();
            let h2 = quantum_hash(&p, x2).unwrap();
            assert_abs_diff_eq!(closed, h1.fidelity(&h2).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn worst_case_single_qubit() {
        let p = params(256, vec![vec![0, 1]]);
        let (x_star, fid) = worst_case_collision(&p);
        let mut expect = (0u64, -1.0);
        for x in 1..256 {
            let f = hash_fidelity(&p, x, 0).unwrap();
            if f > expect.1 {
                expect = (x, f);
            }
        }
        assert_eq!(x_star, expect.0);
        assert_eq!(x_star, 1);
        assert_abs_diff_eq!(fid, (PI / 256.0).cos().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn worst_case_degenerate_row_collapses_at_shared_period() {
        // Row entries share factor 128 with q = 256: all phases collapse at x = 2.
        let p = params(256, vec![vec![0, 128]]);
        let (x_star, fid) = worst_case_collision(&p);
        assert_eq!(x_star, 2);
        assert_abs_diff_eq!(fid, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn params_validation_rejects_malformed_rows() {
        assert!(HashParams::new(256, vec![]).is_err());
        assert!(HashParams::new(256, vec![vec![1, 2]]).is_err()); // row must start at 0
        assert!(HashParams::new(256, vec![vec![0, 7, 7]]).is_err()); // repeated entry
        assert!(HashParams::new(256, vec![vec![0]]).is_err()); // d < 2
        assert!(HashParams::new(256, vec![vec![0, 300]]).is_err()); // entry ≥ q
        assert!(HashParams::new(1, vec![vec![0, 1]]).is_err()); // q too small
    }

    #[test]
    fn params_json_round_trip() {
        let p = params(256, vec![vec![0, 1, 5], vec![0, 9, 11]]);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"q\":256"));
        assert!(text.contains("\"d\":3"));
        assert!(text.contains("\"m\":2"));
        let back: HashParams = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn params_json_rejects_inconsistent_shape() {
        let text = r#"{"q":16,"d":3,"m":1,"s":[[0,1]]}"#;
        assert!(serde_json::from_str::<HashParams>(text).is_err());
    }

    #[test]
    fn state_norm_is_checked() {
        let err = QuditState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]);
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
    }
}

//! Classical toolkit for multiqudit quantum hashing over the cyclic group Z_q.
//!
//! A hash of a classical input x ∈ Z_q is a product of m single-qudit states
//! whose relative phases encode x through an m×d matrix of integer parameters
//! s_{j,k}. The crate covers the full pipeline around that construction:
//!
//! * [`hash`]: exact state construction, character-sum bias of parameter
//!   sets, and the closed-form collision fidelity between two hashes;
//! * [`optimize`]: exhaustive and stochastic searches for small-bias sets
//!   and for min-max optimal parameter matrices, plus the collision /
//!   decoding trade-off;
//! * [`measure`]: the projective verification basis (target state plus
//!   d−1 phase-orthogonal states) and density-matrix fidelity/purity
//!   utilities;
//! * [`simulate`]: Monte Carlo simulation of the single-photon
//!   verification protocol with a configurable detector and loss model.
//!
//! All phase bookkeeping is done with integer indices modulo q, so repeated
//! products over qudits lose no precision; complex amplitudes materialize
//! only at API boundaries. Every operation is a pure function over immutable
//! values and is safe to call from concurrent tasks.

pub mod error;
pub mod hash;
pub mod measure;
pub mod optimize;
pub mod simulate;

mod rng;

pub use error::{Error, Result};
pub use hash::{
    bias, hash_fidelity, max_bias, normalize_set, quantum_hash, qudit_hash_state,
    worst_case_collision, BiasedSet, HashParams, QuantumHash, QuditState,
};
pub use measure::{
    density_fidelity, orthogonal_basis, outcome_probabilities, purity_max_eigenvalue,
    DensityMatrix, MeasurementBasis,
};
pub use optimize::{
    best_biased_set, decoding_probability, epsilon_biased_bound, optimize_params, tradeoff,
    SearchConfig, SearchReport, Strategy, TradeoffEntry,
};
pub use simulate::{
    calibrate, estimate_collision_curve, simulate_verification, CalibrationResult, CurvePoint,
    DetectorModel, LossPolicy, VerificationReport,
};

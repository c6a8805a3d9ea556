//! Monte Carlo simulation of the single-photon verification protocol.
//!
//! Per shot, each of the m qudits of the incoming hash ψ(x1) is projected
//! onto the d-channel basis built around the expected state ψ_j(x2). The
//! quantum outcome channel is sampled first; heralding, signal detection,
//! dark-count accidentals within the coincidence window, and first-order
//! dead-time derating are then applied as independent Bernoulli events. A
//! shot is accepted only when every qudit lands in the target channel.
//!
//! Losses (no coincidence) are handled by policy: resend the qudit, force a
//! mismatch, or drop the shot. Shots are split into fixed chunks, each with
//! its own deterministic RNG substream, so reports are reproducible
//! regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::{hash_fidelity, qudit_hash_state, HashParams};
use crate::measure::{orthogonal_basis, outcome_probabilities};
use crate::optimize::{optimize_params, SearchConfig};
use crate::rng::{derive_seed, substream};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Shots per RNG substream chunk.
const SHOT_CHUNK: u64 = 8192;
/// Retry bound for the resend policy; an exhausted qudit discards the shot.
const MAX_RESENDS: u32 = 100;
/// Pair-generation attempts simulated per calibration trial.
const CALIBRATION_ATTEMPTS: u64 = 1000;

/// What to do with a qudit that produced no coincidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossPolicy {
    /// Retransmit the qudit (bounded retries, then the shot is discarded).
    Resend,
    /// Treat the qudit as a mismatch; the shot is rejected.
    CountAsError,
    /// Drop the whole shot from the accept statistics.
    Discard,
}

impl std::str::FromStr for LossPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "resend" => Ok(Self::Resend),
            "count-as-error" => Ok(Self::CountAsError),
            "discard" => Ok(Self::Discard),
            other => Err(Error::InvalidConfig(format!(
                "unknown loss policy {other:?}; expected resend, count-as-error, or discard"
            ))),
        }
    }
}

/// Detector and source parameters of the simulated setup.
///
/// Defaults follow the reference hardware: 45% / 10% efficiencies, 2 kHz /
/// 15 kHz dark rates, 150 ns / 16 µs dead times for the signal and idler
/// detectors, a 1 ns coincidence window, and a 10⁵ Hz heralded pair rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    pub eta_signal: f64,
    pub eta_idler: f64,
    /// Dark-count rates in Hz.
    pub dark_rate_signal: f64,
    pub dark_rate_idler: f64,
    /// Coincidence window in seconds.
    pub coincidence_window: f64,
    /// Heralded pair generation rate in Hz.
    pub pair_rate: f64,
    /// Dead times in seconds.
    pub dead_time_signal: f64,
    pub dead_time_idler: f64,
    pub loss_policy: LossPolicy,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self {
            eta_signal: 0.45,
            eta_idler: 0.10,
            dark_rate_signal: 2_000.0,
            dark_rate_idler: 15_000.0,
            coincidence_window: 1e-9,
            pair_rate: 1e5,
            dead_time_signal: 150e-9,
            dead_time_idler: 16e-6,
            loss_policy: LossPolicy::Resend,
        }
    }
}

impl DetectorModel {
    /// Lossless, noiseless detectors; every attempt yields a coincidence.
    pub fn ideal() -> Self {
        Self {
            eta_signal: 1.0,
            eta_idler: 1.0,
            dark_rate_signal: 0.0,
            dark_rate_idler: 0.0,
            dead_time_signal: 0.0,
            dead_time_idler: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta_signal", self.eta_signal), ("eta_idler", self.eta_idler)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        for (name, v) in [
            ("dark_rate_signal", self.dark_rate_signal),
            ("dark_rate_idler", self.dark_rate_idler),
            ("pair_rate", self.pair_rate),
            ("dead_time_signal", self.dead_time_signal),
            ("dead_time_idler", self.dead_time_idler),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        if !(self.coincidence_window > 0.0 && self.coincidence_window.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "coincidence_window must be > 0, got {}",
                self.coincidence_window
            )));
        }
        Ok(())
    }
}

/// Per-attempt Bernoulli parameters derived from a [`DetectorModel`].
///
/// Dead time derates each detector's efficiency by its first-order
/// unavailability fraction (click rate × dead time); dark counts fire with
/// probability rate × window and land in a uniformly random channel.
#[derive(Clone, Copy)]
struct AttemptModel {
    eta_signal_eff: f64,
    eta_idler_eff: f64,
    p_dark_signal: f64,
    p_dark_idler: f64,
    d: usize,
}

impl AttemptModel {
    fn new(model: &DetectorModel, d: usize) -> Self {
        let unavail_signal = ((model.pair_rate * model.eta_signal + model.dark_rate_signal)
            * model.dead_time_signal)
            .clamp(0.0, 1.0);
        let unavail_idler = ((model.pair_rate * model.eta_idler + model.dark_rate_idler)
            * model.dead_time_idler)
            .clamp(0.0, 1.0);
        Self {
            eta_signal_eff: model.eta_signal * (1.0 - unavail_signal),
            eta_idler_eff: model.eta_idler * (1.0 - unavail_idler),
            p_dark_signal: (model.dark_rate_signal * model.coincidence_window).clamp(0.0, 1.0),
            p_dark_idler: (model.dark_rate_idler * model.coincidence_window).clamp(0.0, 1.0),
            d,
        }
    }

    /// One qudit transmission: Some(channel) on coincidence, None on loss.
    fn attempt(&self, rng: &mut ChaCha8Rng, cumulative: &[f64]) -> Option<usize> {
        let quantum_channel = sample_channel(rng, cumulative);
        let idler_click =
            rng.random_bool(self.eta_idler_eff) || rng.random_bool(self.p_dark_idler);
        let signal_true = rng.random_bool(self.eta_signal_eff);
        let signal_dark = rng.random_bool(self.p_dark_signal);
        if !idler_click || !(signal_true || signal_dark) {
            return None;
        }
        if signal_true {
            Some(quantum_channel)
        } else {
            Some(rng.random_range(0..self.d))
        }
    }
}

fn sample_channel(rng: &mut ChaCha8Rng, cumulative: &[f64]) -> usize {
    let u: f64 = rng.random();
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
}

/// Statistics of one verification run.
///
/// `accept_rate` is relative to `evaluated_shots` (shots that produced a
/// verdict); with no losses every requested shot is evaluated. `losses`
/// counts transmission attempts with no coincidence, including each failed
/// resend. `unattempted_qudits` counts qudits skipped because their shot was
/// already discarded, so under the discard policy
/// losses + unattempted_qudits + Σ per_qudit_evaluated = m × shots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub shots: u64,
    pub evaluated_shots: u64,
    pub accepts: u64,
    pub accept_rate: f64,
    pub discarded_shots: u64,
    pub losses: u64,
    pub unattempted_qudits: u64,
    pub per_qudit_match_rates: Vec<f64>,
    pub per_qudit_evaluated: Vec<u64>,
    pub theoretical_fidelity: f64,
    pub seed: u64,
}

#[derive(Clone)]
struct Tally {
    evaluated_shots: u64,
    accepts: u64,
    discarded_shots: u64,
    losses: u64,
    unattempted_qudits: u64,
    per_qudit_matched: Vec<u64>,
    per_qudit_evaluated: Vec<u64>,
}

impl Tally {
    fn new(m: usize) -> Self {
        Self {
            evaluated_shots: 0,
            accepts: 0,
            discarded_shots: 0,
            losses: 0,
            unattempted_qudits: 0,
            per_qudit_matched: vec![0; m],
            per_qudit_evaluated: vec![0; m],
        }
    }

    fn absorb(&mut self, other: &Tally) {
        self.evaluated_shots += other.evaluated_shots;
        self.accepts += other.accepts;
        self.discarded_shots += other.discarded_shots;
        self.losses += other.losses;
        self.unattempted_qudits += other.unattempted_qudits;
        for (a, b) in self.per_qudit_matched.iter_mut().zip(&other.per_qudit_matched) {
            *a += b;
        }
        for (a, b) in self.per_qudit_evaluated.iter_mut().zip(&other.per_qudit_evaluated) {
            *a += b;
        }
    }
}

fn run_chunk(
    shots: u64,
    m: usize,
    attempt_model: &AttemptModel,
    cumulative: &[Vec<f64>],
    policy: LossPolicy,
    rng: &mut ChaCha8Rng,
) -> Tally {
    let mut tally = Tally::new(m);
    for _ in 0..shots {
        let mut all_matched = true;
        let mut aborted = false;
        for (j, cum) in cumulative.iter().enumerate() {
            let channel = match policy {
                LossPolicy::Resend => {
                    let mut outcome = None;
                    for _ in 0..=MAX_RESENDS {
                        outcome = attempt_model.attempt(rng, cum);
                        if outcome.is_some() {
                            break;
                        }
                        tally.losses += 1;
                    }
                    outcome
                }
                LossPolicy::CountAsError | LossPolicy::Discard => {
                    let outcome = attempt_model.attempt(rng, cum);
                    if outcome.is_none() {
                        tally.losses += 1;
                    }
                    outcome
                }
            };
            match channel {
                Some(ch) => {
                    tally.per_qudit_evaluated[j] += 1;
                    if ch == 0 {
                        tally.per_qudit_matched[j] += 1;
                    } else {
                        all_matched = false;
                    }
                }
                None => match policy {
                    LossPolicy::CountAsError => {
                        // Forced mismatch still contributes a verdict for this qudit.
                        tally.per_qudit_evaluated[j] += 1;
                        all_matched = false;
                    }
                    LossPolicy::Discard | LossPolicy::Resend => {
                        tally.unattempted_qudits += (m - 1 - j) as u64;
                        aborted = true;
                    }
                },
            }
            if aborted {
                break;
            }
        }
        if aborted {
            tally.discarded_shots += 1;
        } else {
            tally.evaluated_shots += 1;
            if all_matched {
                tally.accepts += 1;
            }
        }
    }
    tally
}

/// Simulate the full verification protocol: does the received hash ψ(x1)
/// pass the projective check against the expected input x2?
///
/// Deterministic given the seed, for any worker count.
pub fn simulate_verification(
    params: &HashParams,
    x1: u64,
    x2: u64,
    model: &DetectorModel,
    shots: u64,
    seed: u64,
) -> Result<VerificationReport> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    model.validate()?;
    let m = params.m();
    let cumulative: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let basis = orthogonal_basis(params, j, x2)?;
            let state = qudit_hash_state(params, j, x1)?;
            let probs = outcome_probabilities(&state, &basis)?;
            let mut acc = 0.0;
            Ok(probs
                .iter()
                .map(|&p| {
                    acc += p;
                    acc
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let attempt_model = AttemptModel::new(model, params.d());
    let policy = model.loss_policy;

    let n_chunks = shots.div_ceil(SHOT_CHUNK);
    let tallies: Vec<Tally> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let chunk_shots = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
            let mut rng = substream(seed, c);
            run_chunk(chunk_shots, m, &attempt_model, &cumulative, policy, &mut rng)
        })
        .collect();
    let mut total = Tally::new(m);
    for t in &tallies {
        total.absorb(t);
    }

    let rate = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Ok(VerificationReport {
        shots,
        evaluated_shots: total.evaluated_shots,
        accepts: total.accepts,
        accept_rate: rate(total.accepts, total.evaluated_shots),
        discarded_shots: total.discarded_shots,
        losses: total.losses,
        unattempted_qudits: total.unattempted_qudits,
        per_qudit_match_rates: total
            .per_qudit_matched
            .iter()
            .zip(&total.per_qudit_evaluated)
            .map(|(&matched, &evaluated)| rate(matched, evaluated))
            .collect(),
        per_qudit_evaluated: total.per_qudit_evaluated,
        theoretical_fidelity: hash_fidelity(params, x1, x2)?,
        seed,
    })
}

/// Calibration summary: the mean equal-state coincidence rate and the
/// derived accept threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub trials: u64,
    pub mean_coincidence_rate: f64,
    pub threshold: f64,
    pub threshold_fraction: f64,
}

/// Calibrate the coincidence-rate threshold from equal-state projections
/// (x1 = x2 = x). Each trial simulates a block of pair-generation attempts
/// on one qudit (cycling through the m qudits) and converts the observed
/// coincidence fraction to a rate; the threshold is `threshold_fraction`
/// times the mean rate (fraction 1.0 picks the average itself).
pub fn calibrate(
    params: &HashParams,
    x: u64,
    model: &DetectorModel,
    trials: u64,
    threshold_fraction: f64,
    seed: u64,
) -> Result<CalibrationResult> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if !(threshold_fraction > 0.0 && threshold_fraction.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "threshold_fraction must be > 0, got {threshold_fraction}"
        )));
    }
    model.validate()?;
    let m = params.m();
    let cumulative: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let basis = orthogonal_basis(params, j, x)?;
            let state = qudit_hash_state(params, j, x)?;
            let probs = outcome_probabilities(&state, &basis)?;
            let mut acc = 0.0;
            Ok(probs
                .iter()
                .map(|&p| {
                    acc += p;
                    acc
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let attempt_model = AttemptModel::new(model, params.d());

    let rates: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let cum = &cumulative[(t % m as u64) as usize];
            let mut coincidences = 0u64;
            for _ in 0..CALIBRATION_ATTEMPTS {
                if attempt_model.attempt(&mut rng, cum).is_some() {
                    coincidences += 1;
                }
            }
            coincidences as f64 / CALIBRATION_ATTEMPTS as f64 * model.pair_rate
        })
        .collect();
    let mean = rates.iter().sum::<f64>() / trials as f64;
    Ok(CalibrationResult {
        trials,
        mean_coincidence_rate: mean,
        threshold: threshold_fraction * mean,
        threshold_fraction,
    })
}

/// One optimized (d, m) point of the collision curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvePoint {
    pub d: usize,
    pub m: usize,
    pub x1: u64,
    pub x2: u64,
    /// Shots that produced a verdict.
    pub shots: u64,
    pub accepts: u64,
    pub losses: u64,
    pub accept_rate: f64,
    /// Binomial standard error of `accept_rate`.
    pub stderr: f64,
    pub theoretical: f64,
    pub seed: u64,
}

/// Worst-case collision curve over qudit counts: optimize parameters for
/// each m, then verify the worst-case input pair empirically.
pub fn estimate_collision_curve(
    q: u64,
    d: usize,
    m_values: &[usize],
    model: &DetectorModel,
    shots: u64,
    config: &SearchConfig,
) -> Result<Vec<CurvePoint>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut points = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let report = optimize_params(q, d, m, config)?;
        let seed = derive_seed(config.seed, m as u64);
        let run = simulate_verification(&report.params, report.x_star, 0, model, shots, seed)?;
        let p = run.accept_rate;
        let stderr = if run.evaluated_shots == 0 {
            0.0
        } else {
            (p * (1.0 - p) / run.evaluated_shots as f64).sqrt()
        };
        points.push(CurvePoint {
            d,
            m,
            x1: report.x_star,
            x2: 0,
            shots: run.evaluated_shots,
            accepts: run.accepts,
            losses: run.losses,
            accept_rate: p,
            stderr,
            theoretical: report.worst_case_fidelity,
            seed,
        });
    }
    Ok(points)
}

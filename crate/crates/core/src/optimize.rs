//! Search for small-bias parameter sets and min-max optimal hash matrices.
//!
//! The objective is the worst-case collision fidelity
//! max_{x≠0} Π_j |Σ_k exp(i·2π·s_{j,k}·x/q)|²/d², minimized over the
//! canonical parameter matrices (first entry of each row 0, entries
//! distinct). The objective itself is always evaluated by a full scan over
//! x ∈ [1, q); there is no sampling error, only the candidate enumeration
//! differs between strategies:
//!
//! * `Exhaustive` enumerates every canonical candidate and certifies the
//!   global optimum; it is only accepted when the candidate count stays
//!   under a fixed ceiling.
//! * `RandomRestart` runs steepest coordinate descent (every alternative
//!   value of one entry is tried per move) from random starting matrices.
//! * `Annealing` perturbs one entry at a time by a bounded step with a
//!   geometric temperature schedule.
//!
//! Candidate evaluations prune against the incumbent: a scan stops as soon
//! as the running maximum proves the candidate cannot win. Pruned scans are
//! exact accept/reject decisions, and every reported optimum is re-scanned
//! in full, so pruning never changes a result.
//!
//! Searches fan out over indexed restarts/chains, each with its own
//! deterministic RNG substream; merging takes the minimum fidelity with
//! lexicographic tie-break, so results do not depend on thread scheduling.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::{max_bias, worst_case_collision, BiasedSet, HashParams, PhaseTable};
use crate::rng::substream;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Candidate-count ceiling for exhaustive enumeration.
const EXHAUSTIVE_CEILING: u128 = 10_000_000;
/// Coordinate-descent restarts are cut off after this many sweeps' worth of
/// candidate evaluations. Descents converge in a handful of sweeps; a tight
/// cap packs more restarts into a budget.
const SWEEPS_PER_RESTART: u64 = 6;
/// Proposals per annealing chain.
const ANNEAL_CHAIN_LEN: u64 = 25_000;
/// Annealing temperature schedule (geometric from T0 to T_END).
const ANNEAL_T0: f64 = 0.05;
const ANNEAL_T_END: f64 = 1e-4;

/// Candidate enumeration strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Enumerate every canonical candidate; certifies the global optimum.
    Exhaustive,
    /// Steepest coordinate descent from random starting points.
    RandomRestart,
    /// Single-entry perturbations with a geometric cooling schedule.
    Annealing,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "random-restart" => Ok(Self::RandomRestart),
            "annealing" => Ok(Self::Annealing),
            other => Err(Error::InvalidConfig(format!(
                "unknown strategy {other:?}; expected exhaustive, random-restart, or annealing"
            ))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Exhaustive => "exhaustive",
            Self::RandomRestart => "random-restart",
            Self::Annealing => "annealing",
        };
        f.write_str(name)
    }
}

/// Search configuration.
///
/// `budget` caps the number of candidate evaluations; the exhaustive
/// strategy ignores it (and the seed). Identical configurations always
/// produce identical results.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub budget: u64,
    pub seed: u64,
    pub symmetry_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::RandomRestart,
            budget: 20_000_000,
            seed: 7,
            symmetry_reduction: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a parameter search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub params: HashParams,
    pub worst_case_fidelity: f64,
    pub x_star: u64,
    pub evaluations: u64,
    pub wall_time: f64,
}

/// One d-row of the collision/decoding trade-off table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TradeoffEntry {
    pub d: usize,
    pub feasible: Vec<FeasiblePoint>,
}

/// A feasible qudit count with its collision and decoding probabilities.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FeasiblePoint {
    pub m: usize,
    pub collision: f64,
    pub decoding: f64,
}

fn validate_space(q: u64, d: usize, m: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("q must be at least 2, got {q}")));
    }
    if d < 2 {
        return Err(Error::InvalidParams(format!("d must be at least 2, got {d}")));
    }
    if d as u64 > q {
        return Err(Error::InvalidParams(format!(
            "d = {d} exceeds q = {q}: a row cannot hold d distinct residues"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    Ok(())
}

/// C(n, k) capped at `cap + 1` to avoid overflow.
fn binomial_capped(n: u64, k: u64, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap {
            return cap + 1;
        }
    }
    acc
}

/// Visit all k-element subsets of [1, q) in lexicographic order.
/// The visitor returns `false` to stop early.
fn for_each_combination(q: u64, k: usize, mut visit: impl FnMut(&[u64]) -> bool) {
    if k == 0 {
        visit(&[]);
        return;
    }
    if (q - 1) < k as u64 {
        return;
    }
    let mut combo: Vec<u64> = (1..=k as u64).collect();
    loop {
        if !visit(&combo) {
            return;
        }
        // Advance: rightmost position that can still grow.
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            let ceiling = q - 1 - (k - 1 - pos) as u64;
            if combo[pos] < ceiling {
                combo[pos] += 1;
                for p in pos + 1..k {
                    combo[p] = combo[p - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Maximum over x of the candidate matrix's fidelity, pruned against
/// `threshold`: returns None as soon as the running maximum reaches it
/// (the candidate cannot strictly improve), otherwise the exact maximum.
fn matrix_max_pruned(table: &PhaseTable, rows: &[&[u64]], threshold: f64) -> Option<f64> {
    let q = table.q();
    let mut running = -1.0;
    for x in 1..q {
        let mut fid = 1.0;
        for row in rows {
            fid *= table.row_factor(row, x);
        }
        if fid > running {
            running = fid;
            if running >= threshold {
                return None;
            }
        }
    }
    Some(running)
}

/// Best candidate found by one worker: (fidelity, rows, evaluations used).
type WorkerResult = (f64, Vec<Vec<u64>>, u64);

/// Merge worker results: minimum fidelity, lexicographic rows on ties.
fn merge_results(results: Vec<WorkerResult>) -> (f64, Vec<Vec<u64>>, u64) {
    let mut evals = 0;
    let mut best: Option<(f64, Vec<Vec<u64>>)> = None;
    for (fid, rows, used) in results {
        evals += used;
        best = match best {
            None => Some((fid, rows)),
            Some((bf, br)) => {
                if fid < bf || (fid == bf && rows < br) {
                    Some((fid, rows))
                } else {
                    Some((bf, br))
                }
            }
        };
    }
    let (fid, rows) = best.expect("at least one worker result");
    (fid, rows, evals)
}

/// Sort entries within each row; with symmetry reduction also sort the rows.
fn canonicalize(rows: &mut [Vec<u64>], symmetry_reduction: bool) {
    for row in rows.iter_mut() {
        row.sort_unstable();
    }
    if symmetry_reduction {
        rows.sort_unstable();
    }
}

/// A random canonical matrix: each row is [0] plus d−1 distinct values.
fn random_rows(rng: &mut ChaCha8Rng, q: u64, d: usize, m: usize) -> Vec<Vec<u64>> {
    (0..m)
        .map(|_| {
            let mut row = Vec::with_capacity(d);
            row.push(0u64);
            while row.len() < d {
                let v = rng.random_range(1..q);
                if !row.contains(&v) {
                    row.push(v);
                }
            }
            row.sort_unstable();
            row
        })
        .collect()
}

/// Mutable search state shared by the local-search strategies.
struct LocalState<'t> {
    table: &'t PhaseTable,
    rows: Vec<Vec<u64>>,
    /// factors[j][x−1] = collision factor of row j at input difference x.
    factors: Vec<Vec<f64>>,
    objective: f64,
}

impl<'t> LocalState<'t> {
    fn new(table: &'t PhaseTable, rows: Vec<Vec<u64>>) -> Self {
        let q = table.q();
        let factors: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| (1..q).map(|x| table.row_factor(row, x)).collect())
            .collect();
        let mut state = Self { table, rows, factors, objective: 0.0 };
        state.objective = state.full_objective();
        state
    }

    fn full_objective(&self) -> f64 {
        let n = self.factors[0].len();
        let mut best = -1.0;
        for xi in 0..n {
            let mut fid = 1.0;
            for f in &self.factors {
                fid *= f[xi];
            }
            if fid > best {
                best = fid;
            }
        }
        best
    }

    /// Product of all rows' factors except row j, per x.
    fn product_excluding(&self, j: usize, out: &mut [f64]) {
        out.fill(1.0);
        for (i, f) in self.factors.iter().enumerate() {
            if i != j {
                for (o, v) in out.iter_mut().zip(f) {
                    *o *= v;
                }
            }
        }
    }

    fn apply_entry(&mut self, j: usize, k: usize, v: u64, objective: f64) {
        self.rows[j][k] = v;
        let q = self.table.q();
        for x in 1..q {
            self.factors[j][(x - 1) as usize] = self.table.row_factor(&self.rows[j], x);
        }
        self.objective = objective;
    }
}

/// Exact maximum of prod_other·factor(candidate row) over x, visited in
/// descending prod_other order. Stops early once the tail cannot matter;
/// returns None as soon as the running maximum reaches `reject_at`.
fn candidate_max(
    table: &PhaseTable,
    prod_other: &[f64],
    order: &[u32],
    row: &[u64],
    reject_at: f64,
) -> Option<f64> {
    let mut cand_max: f64 = 0.0;
    for &xi in order {
        let po = prod_other[xi as usize];
        if po <= cand_max {
            break; // remaining x have prod_other ≤ po: cand_max is final
        }
        let val = po * table.row_factor(row, xi as u64 + 1);
        if val > cand_max {
            cand_max = val;
            if cand_max >= reject_at {
                return None;
            }
        }
    }
    Some(cand_max)
}

/// Steepest coordinate descent from a random start, capped at `allowance`
/// candidate evaluations. Returns the local optimum and evaluations used.
fn descend(
    table: &PhaseTable,
    q: u64,
    d: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
    allowance: u64,
) -> (Vec<Vec<u64>>, u64) {
    let mut state = LocalState::new(table, random_rows(rng, q, d, m));
    let n = (q - 1) as usize;
    let mut prod_other = vec![1.0; n];
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut used: u64 = 0;

    'outer: loop {
        let mut improved = false;
        for j in 0..m {
            state.product_excluding(j, &mut prod_other);
            order.sort_unstable_by(|&a, &b| {
                prod_other[b as usize].partial_cmp(&prod_other[a as usize]).unwrap()
            });
            let mut row_cand = state.rows[j].clone();
            for k in 1..d {
                let current = state.rows[j][k];
                let mut best_v = current;
                let mut best_obj = state.objective;
                for v in 1..q {
                    if v == current || state.rows[j].contains(&v) {
                        continue;
                    }
                    if used >= allowance {
                        break 'outer;
                    }
                    used += 1;
                    row_cand.copy_from_slice(&state.rows[j]);
                    row_cand[k] = v;
                    if let Some(obj) = candidate_max(table, &prod_other, &order, &row_cand, best_obj)
                    {
                        if obj < best_obj {
                            best_obj = obj;
                            best_v = v;
                        }
                    }
                }
                if best_v != current {
                    state.apply_entry(j, k, best_v, best_obj);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (state.rows, used)
}

/// One annealing chain of `allowance` proposals.
fn anneal_chain(
    table: &PhaseTable,
    q: u64,
    d: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
    allowance: u64,
) -> (Vec<Vec<u64>>, u64) {
    let mut state = LocalState::new(table, random_rows(rng, q, d, m));
    let mut best_rows = state.rows.clone();
    let mut best_obj = state.objective;
    let n = (q - 1) as usize;
    let mut prod_other = vec![1.0; n];
    let span = (q / 8).max(1) as i64;
    let alpha = (ANNEAL_T_END / ANNEAL_T0).powf(1.0 / allowance.max(1) as f64);
    let mut temperature = ANNEAL_T0;
    let mut row_cand = vec![0u64; d];

    for _ in 0..allowance {
        temperature *= alpha;
        let j = rng.random_range(0..m);
        let k = rng.random_range(1..d);
        let delta = loop {
            let step = rng.random_range(-span..=span);
            if step != 0 {
                break step;
            }
        };
        let v = (state.rows[j][k] as i64 + delta).rem_euclid(q as i64) as u64;
        if v == 0 || state.rows[j].contains(&v) {
            continue; // duplicate within the row: proposal rejected outright
        }
        state.product_excluding(j, &mut prod_other);
        row_cand.copy_from_slice(&state.rows[j]);
        row_cand[k] = v;
        let mut cand = -1.0;
        for x in 1..q {
            let val = prod_other[(x - 1) as usize] * table.row_factor(&row_cand, x);
            if val > cand {
                cand = val;
            }
        }
        let delta_obj = cand - state.objective;
        let accept = delta_obj < 0.0 || rng.random::<f64>() < (-delta_obj / temperature).exp();
        if accept {
            state.apply_entry(j, k, v, cand);
            if state.objective < best_obj {
                best_obj = state.objective;
                best_rows = state.rows.clone();
            }
        }
    }
    (best_rows, allowance)
}

/// Fan indexed workers out with per-worker allowances summing to ≤ budget.
fn run_workers(
    table: &PhaseTable,
    config: &SearchConfig,
    per_worker: u64,
    worker: impl Fn(&mut ChaCha8Rng, u64) -> (Vec<Vec<u64>>, u64) + Sync,
) -> (f64, Vec<Vec<u64>>, u64) {
    let budget = config.budget;
    let per_worker = per_worker.max(1).min(budget);
    let n_workers = budget.div_ceil(per_worker);
    let results: Vec<WorkerResult> = (0..n_workers)
        .into_par_iter()
        .map(|w| {
            let allowance = per_worker.min(budget - w * per_worker);
            let mut rng = substream(config.seed, w);
            let (mut rows, used) = worker(&mut rng, allowance);
            canonicalize(&mut rows, config.symmetry_reduction);
            let (_, fid) = crate::hash::worst_case_scan(&rows, table);
            (fid, rows, used)
        })
        .collect();
    merge_results(results)
}

/// Exhaustive scan over all canonical matrices (ordered row tuples, or
/// non-decreasing tuples under symmetry reduction).
fn exhaustive_matrices(
    table: &PhaseTable,
    q: u64,
    d: usize,
    m: usize,
    symmetry_reduction: bool,
) -> Result<(f64, Vec<Vec<u64>>, u64)> {
    let n_rows_exact = binomial_capped(q - 1, (d - 1) as u64, EXHAUSTIVE_CEILING);
    let total = if symmetry_reduction {
        // Multisets of m rows: C(n_rows + m − 1, m).
        if n_rows_exact > EXHAUSTIVE_CEILING {
            EXHAUSTIVE_CEILING + 1
        } else {
            binomial_capped((n_rows_exact as u64) + (m as u64) - 1, m as u64, EXHAUSTIVE_CEILING)
        }
    } else if n_rows_exact > EXHAUSTIVE_CEILING {
        EXHAUSTIVE_CEILING + 1
    } else {
        let mut acc: u128 = 1;
        for _ in 0..m {
            acc = acc.saturating_mul(n_rows_exact);
            if acc > EXHAUSTIVE_CEILING {
                break;
            }
        }
        acc
    };
    if total > EXHAUSTIVE_CEILING {
        return Err(Error::Infeasible(format!(
            "exhaustive enumeration would visit more than {EXHAUSTIVE_CEILING} candidates; \
             use the random-restart or annealing strategy"
        )));
    }

    // Materialize the row pool (bounded by the ceiling via `total`).
    let mut pool: Vec<Vec<u64>> = Vec::new();
    for_each_combination(q, d - 1, |combo| {
        let mut row = Vec::with_capacity(d);
        row.push(0);
        row.extend_from_slice(combo);
        pool.push(row);
        true
    });
    let n_rows = pool.len();

    let mut best_fid = f64::INFINITY;
    let mut best_rows: Vec<Vec<u64>> = Vec::new();
    let mut evals: u64 = 0;
    let mut idx = vec![0usize; m];
    let mut rows_ref: Vec<&[u64]> = Vec::with_capacity(m);
    loop {
        rows_ref.clear();
        rows_ref.extend(idx.iter().map(|&i| pool[i].as_slice()));
        evals += 1;
        if let Some(fid) = matrix_max_pruned(table, &rows_ref, best_fid) {
            best_fid = fid;
            best_rows = idx.iter().map(|&i| pool[i].clone()).collect();
        }
        // Advance the (possibly non-decreasing) odometer.
        let mut pos = m;
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            if idx[pos] + 1 < n_rows {
                idx[pos] += 1;
                let fill = if symmetry_reduction { idx[pos] } else { 0 };
                for slot in idx.iter_mut().skip(pos + 1) {
                    *slot = fill;
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    Ok((best_fid, best_rows, evals))
}

/// Smallest-bias canonical set of size d in Z_q.
///
/// The exhaustive strategy enumerates all C(q−1, d−1) canonical sets when
/// that count is at most 10⁷ and certifies the optimum; otherwise (and for
/// the stochastic strategies) a sampled search runs and the result is not
/// certified. The returned epsilon is the exact bias maximum either way.
pub fn best_biased_set(q: u64, d: usize, config: &SearchConfig) -> Result<BiasedSet> {
    validate_space(q, d, 1)?;
    config.validate()?;
    let table = PhaseTable::new(q);

    let count = binomial_capped(q - 1, (d - 1) as u64, EXHAUSTIVE_CEILING);
    if config.strategy == Strategy::Exhaustive && count <= EXHAUSTIVE_CEILING {
        let inv = 1.0 / d as f64;
        let mut best_eps = f64::INFINITY;
        let mut best_set: Vec<u64> = Vec::new();
        for_each_combination(q, d - 1, |combo| {
            let mut running: f64 = -1.0;
            let mut rejected = false;
            for x in 1..q {
                let mut sum = num_complex::Complex64::new(1.0, 0.0); // element 0 contributes 1
                for &s in combo {
                    sum += table.root(crate::hash::mul_mod(s, x, q));
                }
                let b = sum.norm() * inv;
                if b > running {
                    running = b;
                    if running >= best_eps {
                        rejected = true;
                        break;
                    }
                }
            }
            if !rejected {
                best_eps = running;
                best_set = std::iter::once(0).chain(combo.iter().copied()).collect();
            }
            true
        });
        return Ok(BiasedSet { q, elements: best_set, epsilon: best_eps.min(1.0), certified: true });
    }

    // Sampled search: single-row min-max via the generic machinery.
    let (_, rows, _) = match config.strategy {
        Strategy::Annealing => run_workers(&table, config, ANNEAL_CHAIN_LEN, |rng, allowance| {
            anneal_chain(&table, q, d, 1, rng, allowance)
        }),
        _ => {
            let per_restart = SWEEPS_PER_RESTART * ((d - 1) as u64) * (q - 2).max(1);
            run_workers(&table, config, per_restart, |rng, allowance| {
                descend(&table, q, d, 1, rng, allowance)
            })
        }
    };
    let elements = rows.into_iter().next().expect("one row");
    let (_, epsilon) = max_bias(&elements, q)?;
    Ok(BiasedSet { q, elements, epsilon, certified: false })
}

/// Collision bound f₁^m obtained by reusing the best biased set found for
/// (q, d) on every qudit, where f₁ = epsilon² is that set's worst-case
/// single-qudit collision probability.
pub fn epsilon_biased_bound(q: u64, d: usize, m: usize, config: &SearchConfig) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let set = best_biased_set(q, d, config)?;
    let f1 = set.epsilon * set.epsilon;
    Ok(f1.powi(m as i32))
}

/// Min-max search for the parameter matrix minimizing worst-case collision.
///
/// Deterministic given (strategy, budget, seed). The reported fidelity and
/// x* always come from a clean full scan of the returned parameters.
pub fn optimize_params(q: u64, d: usize, m: usize, config: &SearchConfig) -> Result<SearchReport> {
    validate_space(q, d, m)?;
    config.validate()?;
    let start = Instant::now();
    let table = PhaseTable::new(q);

    let (_, mut rows, evaluations) = match config.strategy {
        Strategy::Exhaustive => exhaustive_matrices(&table, q, d, m, config.symmetry_reduction)?,
        Strategy::RandomRestart => {
            let per_restart =
                SWEEPS_PER_RESTART * (m as u64) * ((d - 1) as u64) * (q - 2).max(1);
            run_workers(&table, config, per_restart, |rng, allowance| {
                descend(&table, q, d, m, rng, allowance)
            })
        }
        Strategy::Annealing => run_workers(&table, config, ANNEAL_CHAIN_LEN, |rng, allowance| {
            anneal_chain(&table, q, d, m, rng, allowance)
        }),
    };

    canonicalize(&mut rows, config.symmetry_reduction);
    let params = HashParams::new(q, rows)?;
    let (x_star, worst_case_fidelity) = worst_case_collision(&params);
    Ok(SearchReport {
        params,
        worst_case_fidelity,
        x_star,
        evaluations,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// One-wayness bound δ = d^m / q. Values above 1 mean the state space is
/// larger than the input space (the bound is vacuous); they are reported
/// as-is.
pub fn decoding_probability(params: &HashParams) -> f64 {
    (params.d() as f64).powi(params.m() as i32) / params.q() as f64
}

/// For each d, every m ≤ m_max whose optimized collision probability and
/// decoding probability both stay within the given limits.
///
/// Qudit counts whose decoding bound d^m/q already exceeds the limit are
/// skipped without running the search.
pub fn tradeoff(
    q: u64,
    d_list: &[usize],
    m_max: usize,
    collision_limit: f64,
    decoding_limit: f64,
    config: &SearchConfig,
) -> Result<Vec<TradeoffEntry>> {
    for (name, limit) in [("collision_limit", collision_limit), ("decoding_limit", decoding_limit)]
    {
        if !(limit > 0.0 && limit <= 1.0) {
            return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1], got {limit}")));
        }
    }
    let mut entries = Vec::with_capacity(d_list.len());
    for &d in d_list {
        let mut feasible = Vec::new();
        for m in 1..=m_max {
            let decoding = (d as f64).powi(m as i32) / q as f64;
            if decoding > decoding_limit {
                continue;
            }
            let report = optimize_params(q, d, m, config)?;
            if report.worst_case_fidelity <= collision_limit {
                feasible.push(FeasiblePoint { m, collision: report.worst_case_fidelity, decoding });
            }
        }
        entries.push(TradeoffEntry { d, feasible });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn full_group_is_zero_biased() {
        let config = SearchConfig { strategy: Strategy::Exhaustive, ..Default::default() };
        let set = best_biased_set(4, 4, &config).unwrap();
        assert_eq!(set.elements, vec![0, 1, 2, 3]);
        assert_abs_diff_eq!(set.epsilon, 0.0, epsilon = 1e-12);
        assert!(set.certified);
    }

    #[test]
    fn best_biased_set_rejects_oversized_d() {
        let config = SearchConfig::default();
        assert!(best_biased_set(4, 5, &config).is_err());
    }

    #[test]
    fn qubit_pair_bound_matches_table_value() {
        let config = SearchConfig { strategy: Strategy::Exhaustive, ..Default::default() };
        let set = best_biased_set(256, 2, &config).unwrap();
        // Odd multipliers all reach |cos(π/256)|; degenerate even ones are worse.
        assert_abs_diff_eq!(
            set.epsilon,
            (std::f64::consts::PI / 256.0).cos(),
            epsilon = 1e-12
        );
        let bound = epsilon_biased_bound(256, 2, 1, &config).unwrap();
        assert!((bound - 0.9998).abs() < 5e-4);
        assert_abs_diff_eq!(bound, set.epsilon * set.epsilon, epsilon = 1e-12);
    }

    #[test]
    fn decoding_probability_values() {
        let p = |d: usize, m: usize| {
            let rows = (0..m).map(|j| vec![0, 1 + j as u64, 2 + d as u64 + j as u64, 40 + j as u64][..d].to_vec());
            HashParams::new(256, rows.collect()).unwrap()
        };
        assert_abs_diff_eq!(decoding_probability(&p(2, 5)), 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(decoding_probability(&p(3, 3)), 27.0 / 256.0, epsilon = 1e-15);
        assert_abs_diff_eq!(decoding_probability(&p(4, 2)), 0.0625, epsilon = 1e-15);
        // Over-parameterized schemes report δ > 1 as-is (the bound is vacuous).
        assert_abs_diff_eq!(decoding_probability(&p(4, 5)), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn search_is_deterministic() {
        let config = SearchConfig {
            strategy: Strategy::RandomRestart,
            budget: 20_000,
            seed: 99,
            symmetry_reduction: true,
        };
        let a = optimize_params(16, 2, 2, &config).unwrap();
        let b = optimize_params(16, 2, 2, &config).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.x_star, b.x_star);
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.worst_case_fidelity.to_bits(), b.worst_case_fidelity.to_bits());
    }

    #[test]
    fn annealing_is_deterministic() {
        let config = SearchConfig {
            strategy: Strategy::Annealing,
            budget: 30_000,
            seed: 3,
            symmetry_reduction: true,
        };
        let a = optimize_params(16, 3, 2, &config).unwrap();
        let b = optimize_params(16, 3, 2, &config).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.worst_case_fidelity.to_bits(), b.worst_case_fidelity.to_bits());
    }

    #[test]
    fn report_fidelity_matches_worst_case_collision() {
        let config = SearchConfig { budget: 10_000, ..Default::default() };
        let report = optimize_params(16, 2, 2, &config).unwrap();
        let (x, fid) = worst_case_collision(&report.params);
        assert_eq!(report.x_star, x);
        assert_eq!(report.worst_case_fidelity.to_bits(), fid.to_bits());
    }

    #[test]
    fn exhaustive_rejects_oversized_spaces() {
        let config = SearchConfig { strategy: Strategy::Exhaustive, ..Default::default() };
        assert!(matches!(optimize_params(256, 2, 4, &config), Err(Error::Infeasible(_))));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let config = SearchConfig { budget: 0, ..Default::default() };
        assert!(matches!(optimize_params(16, 2, 1, &config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn trivial_limits_admit_every_m() {
        let config = SearchConfig { budget: 5_000, ..Default::default() };
        let entries = tradeoff(16, &[2], 3, 1.0, 1.0, &config).unwrap();
        let ms: Vec<usize> = entries[0].feasible.iter().map(|f| f.m).collect();
        assert_eq!(ms, vec![1, 2, 3]);
    }

    #[test]
    fn tradeoff_validates_limits() {
        let config = SearchConfig::default();
        assert!(tradeoff(16, &[2], 2, 0.0, 0.5, &config).is_err());
        assert!(tradeoff(16, &[2], 2, 0.5, 1.5, &config).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_capped(255, 1, EXHAUSTIVE_CEILING), 255);
        assert_eq!(binomial_capped(15, 2, EXHAUSTIVE_CEILING), 105);
        assert_eq!(binomial_capped(255, 3, EXHAUSTIVE_CEILING), 2_731_135);
        assert!(binomial_capped(255, 7, EXHAUSTIVE_CEILING) > EXHAUSTIVE_CEILING);
    }
}

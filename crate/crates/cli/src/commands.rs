//! The eight subcommands: argument structs and implementations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qhash_core::{
    best_biased_set, estimate_collision_curve, max_bias, normalize_set, optimize_params,
    quantum_hash, simulate_verification, tradeoff, DensityMatrix, HashParams, SearchConfig,
    Strategy, VerificationReport,
};
use serde_json::{json, Value};

use crate::opts::{
    parse_usize_list, resolve_seed, CliError, FileConfig, ModelOpts, SearchOpts,
};
use crate::output::{csv_document, emit, json_document, Format};

/// Shared per-invocation context resolved from the global flags.
pub struct Context {
    pub file: FileConfig,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed_flag: Option<u64>,
}

impl Context {
    fn seed(&self) -> Result<u64, CliError> {
        resolve_seed(self.seed_flag, &self.file)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn require_json(&self, command: &str) -> Result<(), CliError> {
        if self.format == Some(Format::Csv) {
            return Err(format!("{command} only supports --format json").into());
        }
        Ok(())
    }
}

fn load_params(path: &Path) -> Result<HashParams, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read params file {}: {e}", path.display()))?;
    let params: HashParams = serde_json::from_str(&text)
        .map_err(|e| format!("params file {}: {e}", path.display()))?;
    Ok(params)
}

/// Default maximum qudit count per dimension, matching the published table.
fn default_m_max(d: usize) -> usize {
    match d {
        2 => 7,
        3 => 5,
        _ => 4,
    }
}

fn search_config_json(config: &SearchConfig) -> Value {
    json!({
        "strategy": config.strategy.to_string(),
        "budget": config.budget,
        "seed": config.seed,
        "symmetry_reduction": config.symmetry_reduction,
    })
}

// ---------------------------------------------------------------------------
// table

#[derive(Debug, clap::Args)]
pub struct TableArgs {
    /// Input-space size.
    #[arg(long)]
    pub q: Option<u64>,
    /// Comma-separated qudit dimensions.
    #[arg(long)]
    pub d_list: Option<String>,
    /// Maximum qudit count for every d (default: per-d table ranges).
    #[arg(long)]
    pub m_max: Option<usize>,
    #[command(flatten)]
    pub search: SearchOpts,
}

pub fn cmd_table(args: &TableArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    let q = args.q.or(ctx.file.u64("q")?).unwrap_or(256);
    let d_list = match &args.d_list {
        Some(text) => parse_usize_list(text)?,
        None => ctx.file.usize_list("d-list")?.unwrap_or_else(|| vec![2, 3, 4]),
    };
    let m_max_flag = args.m_max.or(ctx.file.usize("m-max")?);
    let seed = ctx.seed()?;
    let search = args.search.resolve(&ctx.file, seed)?;
    let biased_config = SearchConfig { strategy: Strategy::Exhaustive, ..search };

    let m_ranges: Vec<(usize, usize)> =
        d_list.iter().map(|&d| (d, m_max_flag.unwrap_or_else(|| default_m_max(d)))).collect();
    let config = json!({
        "command": "table",
        "q": q,
        "d_list": d_list,
        "m_ranges": m_ranges.iter().map(|&(d, m)| json!([d, m])).collect::<Vec<_>>(),
        "search": search_config_json(&search),
    });

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut entries: Vec<Value> = Vec::new();
    for &(d, m_max) in &m_ranges {
        let set = best_biased_set(q, d, &biased_config)?;
        let f1 = set.epsilon * set.epsilon;
        for m in 1..=m_max {
            let biased = f1.powi(m as i32);
            let report = optimize_params(q, d, m, &search)?;
            let optimized = report.worst_case_fidelity;
            for (kind, value) in [("biased", biased), ("optimized", optimized)] {
                rows.push(vec![d.to_string(), m.to_string(), kind.into(), value.to_string()]);
                entries.push(json!({ "d": d, "m": m, "column_type": kind, "value": value }));
            }
        }
    }

    let text = match ctx.format_or(Format::Csv) {
        Format::Csv => csv_document(&config, &["d", "m", "column_type", "value"], &rows),
        Format::Json => json_document(config, "rows", Value::Array(entries)),
    };
    emit(ctx.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// optimize

#[derive(Debug, clap::Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub q: Option<u64>,
    /// Qudit dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of qudits.
    #[arg(long)]
    pub m: Option<usize>,
    /// Also write the bare parameter matrix (q, d, m, s) to this file.
    #[arg(long)]
    pub params_out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchOpts,
}

pub fn cmd_optimize(args: &OptimizeArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    ctx.require_json("optimize")?;
    let q = args.q.or(ctx.file.u64("q")?).unwrap_or(256);
    let d = args.d.or(ctx.file.usize("d")?).ok_or("missing --d")?;
    let m = args.m.or(ctx.file.usize("m")?).ok_or("missing --m")?;
    let seed = ctx.seed()?;
    let search = args.search.resolve(&ctx.file, seed)?;

    let report = optimize_params(q, d, m, &search)?;
    eprintln!(
        "optimize: {} evaluations in {:.2} s",
        report.evaluations, report.wall_time
    );
    if let Some(path) = &args.params_out {
        let mut text = serde_json::to_string_pretty(&report.params)?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    let config = json!({
        "command": "optimize",
        "q": q, "d": d, "m": m,
        "search": search_config_json(&search),
    });
    // wall_time is excluded so the artifact regenerates bit-identically.
    let payload = json!({
        "params": serde_json::to_value(&report.params)?,
        "worst_case_fidelity": report.worst_case_fidelity,
        "x_star": report.x_star,
        "evaluations": report.evaluations,
    });
    emit(ctx.output.as_deref(), &json_document(config, "report", payload))?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// bias

#[derive(Debug, clap::Args)]
pub struct BiasArgs {
    /// Comma-separated set elements, e.g. `0,128`.
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Also report the bias at this specific x.
    #[arg(long)]
    pub x: Option<u64>,
}

pub fn cmd_bias(args: &BiasArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    let q = args.q.or(ctx.file.u64("q")?).unwrap_or(256);
    let set_text = args.set.clone().or(ctx.file.string("set")?).ok_or("missing --set")?;
    let set = crate::opts::parse_u64_list(&set_text)?;
    let x = args.x.or(ctx.file.u64("x")?);

    let (x_star, value) = max_bias(&set, q)?;
    let normalized = normalize_set(&set, q)?;
    let bias_at_x = x.map(|x| qhash_core::bias(&set, x, q)).transpose()?;

    let config = json!({ "command": "bias", "q": q, "set": set, "x": x });
    let text = match ctx.format_or(Format::Json) {
        Format::Json => json_document(
            config,
            "result",
            json!({
                "normalized": normalized,
                "x_star": x_star,
                "max_bias": value,
                "bias_at_x": bias_at_x,
            }),
        ),
        Format::Csv => {
            let set_text = set.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let row = vec![
                q.to_string(),
                format!("\"{set_text}\""),
                x_star.to_string(),
                value.to_string(),
                x.map(|x| x.to_string()).unwrap_or_default(),
                bias_at_x.map(|b| b.to_string()).unwrap_or_default(),
            ];
            csv_document(&config, &["q", "set", "x_star", "max_bias", "x", "bias_at_x"], &[row])
        }
    };
    emit(ctx.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// hash

#[derive(Debug, clap::Args)]
pub struct HashArgs {
    /// Parameter file (q, d, m, s) as written by `optimize --params-out`.
    #[arg(long)]
    pub params: PathBuf,
    /// Input to hash.
    #[arg(long)]
    pub x: u64,
}

pub fn cmd_hash(args: &HashArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    ctx.require_json("hash")?;
    let params = load_params(&args.params)?;
    let hash = quantum_hash(&params, args.x)?;
    let qudits: Vec<Value> = hash
        .qudits()
        .iter()
        .map(|qudit| {
            let amplitudes: Vec<Value> =
                qudit.amplitudes().iter().map(|a| json!([a.re, a.im])).collect();
            let phase_indices = qudit.exact().map(|e| e.phase_indices.clone());
            json!({ "phase_indices": phase_indices, "amplitudes": amplitudes })
        })
        .collect();
    let config = json!({
        "command": "hash",
        "params": args.params.display().to_string(),
        "q": params.q(), "d": params.d(), "m": params.m(),
        "x": args.x,
    });
    emit(ctx.output.as_deref(), &json_document(config, "qudits", Value::Array(qudits)))?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Parameter file (q, d, m, s).
    #[arg(long)]
    pub params: PathBuf,
    /// Input encoded in the received hash.
    #[arg(long)]
    pub x1: Option<u64>,
    /// Expected input the verifier projects onto.
    #[arg(long)]
    pub x2: Option<u64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[command(flatten)]
    pub model: ModelOpts,
}

fn report_csv_row(d: usize, m: usize, x1: u64, x2: u64, report: &VerificationReport) -> Vec<String> {
    vec![
        d.to_string(),
        m.to_string(),
        x1.to_string(),
        x2.to_string(),
        report.evaluated_shots.to_string(),
        report.accepts.to_string(),
        report.losses.to_string(),
        report.accept_rate.to_string(),
        report.theoretical_fidelity.to_string(),
        report.seed.to_string(),
    ]
}

const REPORT_COLUMNS: [&str; 10] =
    ["d", "m", "x1", "x2", "shots", "accepts", "losses", "accept_rate", "theoretical", "seed"];

pub fn cmd_verify(args: &VerifyArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    let params = load_params(&args.params)?;
    let x1 = args.x1.or(ctx.file.u64("x1")?).ok_or("missing --x1")?;
    let x2 = args.x2.or(ctx.file.u64("x2")?).ok_or("missing --x2")?;
    let shots = args.shots.or(ctx.file.u64("shots")?).unwrap_or(100_000);
    let seed = ctx.seed()?;
    let model = args.model.resolve(&ctx.file)?;

    let report = simulate_verification(&params, x1, x2, &model, shots, seed)?;
    let config = json!({
        "command": "verify",
        "params": args.params.display().to_string(),
        "x1": x1, "x2": x2, "shots": shots, "seed": seed,
        "model": serde_json::to_value(model)?,
    });
    let text = match ctx.format_or(Format::Json) {
        Format::Json => json_document(config, "report", serde_json::to_value(&report)?),
        Format::Csv => csv_document(
            &config,
            &REPORT_COLUMNS,
            &[report_csv_row(params.d(), params.m(), x1, x2, &report)],
        ),
    };
    emit(ctx.output.as_deref(), &text)?;

    // Majority-of-shots verdict: more than half of the evaluated shots must
    // land in the all-targets channel pattern.
    if report.evaluated_shots == 0 {
        eprintln!("verify: no shot produced a verdict (all discarded); rejecting");
        return Ok(ExitCode::from(1));
    }
    Ok(if report.accept_rate > 0.5 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

// ---------------------------------------------------------------------------
// tradeoff

#[derive(Debug, clap::Args)]
pub struct TradeoffArgs {
    #[arg(long)]
    pub q: Option<u64>,
    /// Comma-separated qudit dimensions.
    #[arg(long)]
    pub d_list: Option<String>,
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Maximum acceptable worst-case collision probability.
    #[arg(long)]
    pub collision_limit: Option<f64>,
    /// Maximum acceptable decoding probability d^m/q.
    #[arg(long)]
    pub decoding_limit: Option<f64>,
    #[command(flatten)]
    pub search: SearchOpts,
}

pub fn cmd_tradeoff(args: &TradeoffArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    let q = args.q.or(ctx.file.u64("q")?).unwrap_or(256);
    let d_list = match &args.d_list {
        Some(text) => parse_usize_list(text)?,
        None => ctx.file.usize_list("d-list")?.unwrap_or_else(|| vec![2, 3, 4]),
    };
    let m_max = args.m_max.or(ctx.file.usize("m-max")?).unwrap_or(7);
    let collision_limit =
        args.collision_limit.or(ctx.file.f64("collision-limit")?).unwrap_or(0.25);
    let decoding_limit = args.decoding_limit.or(ctx.file.f64("decoding-limit")?).unwrap_or(0.15);
    let seed = ctx.seed()?;
    let search = args.search.resolve(&ctx.file, seed)?;

    let entries = tradeoff(q, &d_list, m_max, collision_limit, decoding_limit, &search)?;
    let config = json!({
        "command": "tradeoff",
        "q": q, "d_list": d_list, "m_max": m_max,
        "collision_limit": collision_limit, "decoding_limit": decoding_limit,
        "search": search_config_json(&search),
    });
    let text = match ctx.format_or(Format::Csv) {
        Format::Csv => {
            let mut rows = Vec::new();
            for entry in &entries {
                for point in &entry.feasible {
                    rows.push(vec![
                        entry.d.to_string(),
                        point.m.to_string(),
                        point.collision.to_string(),
                        point.decoding.to_string(),
                    ]);
                }
            }
            csv_document(&config, &["d", "m", "collision", "decoding"], &rows)
        }
        Format::Json => json_document(config, "entries", serde_json::to_value(&entries)?),
    };
    emit(ctx.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// simulate-curve

#[derive(Debug, clap::Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub q: Option<u64>,
    /// Qudit dimension.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m_min: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[command(flatten)]
    pub model: ModelOpts,
    #[command(flatten)]
    pub search: SearchOpts,
}

pub fn cmd_simulate_curve(args: &CurveArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    let q = args.q.or(ctx.file.u64("q")?).unwrap_or(256);
    let d = args.d.or(ctx.file.usize("d")?).ok_or("missing --d")?;
    let m_min = args.m_min.or(ctx.file.usize("m-min")?).unwrap_or(1);
    let m_max = args.m_max.or(ctx.file.usize("m-max")?).unwrap_or_else(|| default_m_max(d));
    if m_min == 0 || m_min > m_max {
        return Err(format!("empty qudit range {m_min}..={m_max}").into());
    }
    let shots = args.shots.or(ctx.file.u64("shots")?).unwrap_or(100_000);
    let seed = ctx.seed()?;
    let model = args.model.resolve(&ctx.file)?;
    let search = args.search.resolve(&ctx.file, seed)?;

    let m_values: Vec<usize> = (m_min..=m_max).collect();
    let points = estimate_collision_curve(q, d, &m_values, &model, shots, &search)?;
    let config = json!({
        "command": "simulate-curve",
        "q": q, "d": d, "m_min": m_min, "m_max": m_max, "shots": shots,
        "model": serde_json::to_value(model)?,
        "search": search_config_json(&search),
    });
    let text = match ctx.format_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| {
                    vec![
                        p.d.to_string(),
                        p.m.to_string(),
                        p.x1.to_string(),
                        p.x2.to_string(),
                        p.shots.to_string(),
                        p.accepts.to_string(),
                        p.losses.to_string(),
                        p.accept_rate.to_string(),
                        p.stderr.to_string(),
                        p.theoretical.to_string(),
                        p.seed.to_string(),
                    ]
                })
                .collect();
            csv_document(
                &config,
                &[
                    "d", "m", "x1", "x2", "shots", "accepts", "losses", "accept_rate", "stderr",
                    "theoretical", "seed",
                ],
                &rows,
            )
        }
        Format::Json => json_document(config, "points", serde_json::to_value(&points)?),
    };
    emit(ctx.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// fidelity

#[derive(Debug, clap::Args)]
pub struct FidelityArgs {
    /// Target density matrix (text format: d, d×d real part, d×d imaginary part).
    #[arg(long)]
    pub target: PathBuf,
    /// Measured/reconstructed density matrix, same format.
    #[arg(long)]
    pub measured: PathBuf,
    /// Hermiticity tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub herm_tol: f64,
    /// Trace tolerance (reconstructed matrices often miss unit trace).
    #[arg(long, default_value_t = 0.05)]
    pub trace_tol: f64,
}

pub fn cmd_fidelity(args: &FidelityArgs, ctx: &Context) -> Result<ExitCode, CliError> {
    ctx.require_json("fidelity")?;
    let load = |path: &Path| -> Result<DensityMatrix, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read matrix file {}: {e}", path.display()))?;
        DensityMatrix::parse_text(&text, args.herm_tol, args.trace_tol)
            .map_err(|e| format!("matrix file {}: {e}", path.display()).into())
    };
    let target = load(&args.target)?;
    let measured = load(&args.measured)?;
    let fidelity = qhash_core::density_fidelity(&target, &measured)?;
    let purity_target = qhash_core::purity_max_eigenvalue(&target)?;
    let purity_measured = qhash_core::purity_max_eigenvalue(&measured)?;

    let config = json!({
        "command": "fidelity",
        "target": args.target.display().to_string(),
        "measured": args.measured.display().to_string(),
        "herm_tol": args.herm_tol,
        "trace_tol": args.trace_tol,
    });
    let payload = json!({
        "fidelity": fidelity,
        "purity_target": purity_target,
        "purity_measured": purity_measured,
    });
    emit(ctx.output.as_deref(), &json_document(config, "result", payload))?;
    Ok(ExitCode::SUCCESS)
}

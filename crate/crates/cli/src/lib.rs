//! The `bireg` command line.
//!
//! Every subcommand accepts `--seed` and `--out`. A human-readable summary
//! goes to standard output; machine-readable results go to the `--out`
//! file (CSV unless the path ends in `.json` or `--format json` is given).
//! Exit codes: 0 on success, 2 on invalid arguments, 1 on runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::num::NonZeroU64;
use std::path::PathBuf;

use bireg_core::analytics::{self, Probability};
use bireg_core::experiments::{self, Mode, SubsetPolicy};
use bireg_core::format::{self, GraphFile};
use bireg_core::output::{self, sig6, OutputFormat, Tabular};
use bireg_core::plunnecke::{self, MagnificationResult};
use bireg_core::sampler::{self, SamplerMethod};
use bireg_core::{Direction, GraphError, GraphParams, LayeredGraph, Ratio, Seed};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "bireg", version, about = "Random biregular bipartite graph experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Master seed; a random one is chosen and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Result file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Result format, `csv` or `json`; defaults from the `--out` extension.
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct Family {
    /// Ratio `|Z|/|Y|` as `p/q` (or an integer).
    #[arg(long)]
    k: Ratio,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MagnificationMethod {
    Flow,
    Brute,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw one graph from G(k, n, d) and write it as BRG1.
    Sample {
        #[command(flatten)]
        family: Family,
        /// pairing, switch or circulant; pairing when feasible, switch
        /// otherwise.
        #[arg(long)]
        method: Option<SamplerMethod>,
        /// Accepted switchings for the switch chain (default 20 per edge).
        #[arg(long)]
        steps: Option<NonZeroU64>,
        #[command(flatten)]
        common: Common,
    },
    /// Count the members of a small family G(k, n, d).
    Enumerate {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        common: Common,
    },
    /// Perfect-matching frequency of G[A, B] over a list of d.
    MatchingSweep {
        #[arg(long)]
        k: Ratio,
        #[arg(long)]
        n: usize,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long, default_value_t = 40)]
        trials: usize,
        /// AB or AGamma.
        #[arg(long, default_value = "AGamma")]
        mode: Mode,
        #[arg(long, default_value = "switch")]
        method: SamplerMethod,
        #[arg(long)]
        steps: Option<NonZeroU64>,
        /// prefix or random.
        #[arg(long, default_value = "prefix")]
        policy: SubsetPolicy,
        /// Write one JSON line per trial to this file.
        #[arg(long)]
        emit_trials: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Perfect-matching frequency of B(n, p) with p = (ln n + c)/n.
    ErBaseline {
        #[arg(long)]
        n: usize,
        /// Comma-separated values of c.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c: Vec<f64>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Commutativity frequency of stacked random layers.
    Commutative {
        #[arg(long)]
        k: Ratio,
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value = "switch")]
        method: SamplerMethod,
        /// Check only this many random edges per condition.
        #[arg(long)]
        sample_edges: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Magnification ratios D_i of a layered graph.
    Magnification {
        /// LAY1 file; otherwise a random graph is built from --k --m --d --h.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        k: Option<Ratio>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        /// Only this level; all levels by default.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value_t = MagnificationMethod::Flow)]
        method: MagnificationMethod,
        /// Write the generated layered graph as LAY1.
        #[arg(long)]
        save_graph: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form quantities for G(k, n, d).
    Analytic {
        #[command(flatten)]
        family: Family,
        /// Set size for the single-vertex no-edge probabilities.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Base size and height for the commutativity thresholds.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Local statistics of G(k, n, d) against their closed forms.
    Stats {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        method: Option<SamplerMethod>,
        /// Average over the whole enumerated family instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Runs the command line `argv` (including the program name).
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let command_line = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match dispatch(cli.command, &command_line, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

struct Context<'a> {
    seed: Seed,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    command_line: &'a str,
}

impl Context<'_> {
    fn new<'a>(common: Common, command_line: &'a str, stdout: &mut dyn Write) -> Result<Context<'a>, CliError> {
        let seed = Seed(common.seed.unwrap_or_else(|| rand::rng().random()));
        say(stdout, format!("seed: {seed}"))?;
        Ok(Context {
            seed,
            out: common.out,
            format: common.format,
            command_line,
        })
    }

    fn emit<T: Tabular + Serialize>(&self, result: &T, stdout: &mut dyn Write) -> Result<(), CliError> {
        let Some(path) = &self.out else {
            return Ok(());
        };
        let format = self.format.unwrap_or_else(|| OutputFormat::from_path(path));
        let metadata = vec![
            ("command".to_string(), self.command_line.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ];
        output::write_results(result, path, format, &metadata)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        say(stdout, format!("wrote {}", path.display()))
    }
}

fn say(stdout: &mut dyn Write, line: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(stdout, "{}", line.as_ref()).map_err(CliError::runtime)
}

fn usage(flag: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {e}"))
}

/// Names the flag responsible for a parameter error.
fn params_flag(e: &GraphError) -> &'static str {
    match e {
        GraphError::NonIntegerKN { .. } => "--k/--n",
        GraphError::NonIntegerKD { .. } | GraphError::KdExceedsN { .. } | GraphError::DExceedsN { .. } => "--d",
        GraphError::NonPositive { name } => match *name {
            "n" => "--n",
            "d" => "--d",
            _ => "--k",
        },
        GraphError::TooLarge { .. } => "--n",
        _ => "--k",
    }
}

fn family_params(k: Ratio, n: usize, d: usize, strict: bool) -> Result<GraphParams, CliError> {
    let result = if strict {
        GraphParams::validate_with(k, n, d)
    } else {
        GraphParams::family_with(k, n, d)
    };
    result.map_err(|e| usage(params_flag(&e), e))
}

fn positive(flag: &str, value: usize) -> Result<(), CliError> {
    if value == 0 {
        Err(usage(flag, "must be at least 1"))
    } else {
        Ok(())
    }
}

fn with_steps(method: SamplerMethod, steps: Option<NonZeroU64>) -> Result<SamplerMethod, CliError> {
    match (method, steps) {
        (SamplerMethod::SwitchChain { .. }, Some(s)) => Ok(SamplerMethod::SwitchChain { steps: Some(s) }),
        (_, Some(_)) => Err(usage("--steps", "only applies to --method switch")),
        (m, None) => Ok(m),
    }
}

fn auto_method(params: &GraphParams, method: Option<SamplerMethod>) -> SamplerMethod {
    method.unwrap_or_else(|| {
        if sampler::pairing_feasible(params) {
            SamplerMethod::PairingRejection
        } else {
            SamplerMethod::default_chain()
        }
    })
}

fn dispatch(command: Command, command_line: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Sample {
            family,
            method,
            steps,
            common,
        } => {
            let params = family_params(family.k, family.n, family.d, true)?;
            let method = with_steps(auto_method(&params, method), steps)?;
            if method == SamplerMethod::PairingRejection && !sampler::pairing_feasible(&params) {
                return Err(usage("--method", "pairing rejection is infeasible for these parameters; use switch"));
            }
            if method == SamplerMethod::Circulant && !params.k().is_integer() {
                return Err(usage("--method", "circulant needs an integer k"));
            }
            let ctx = Context::new(common, command_line, stdout)?;
            let g = sampler::sample(params, method, ctx.seed).map_err(CliError::runtime)?;
            let degrees = g.min_degrees();
            say(stdout, format!("sampled {params} with {method}"))?;
            say(
                stdout,
                format!(
                    "edges: {}, min out-degree: {}, min in-degree: {}, biregular: {}",
                    g.params().edge_count(),
                    degrees.delta_out,
                    degrees.delta_in,
                    g.is_biregular()
                ),
            )?;
            if let Some(path) = &ctx.out {
                format::write_graph(&GraphFile::Bipartite(g), path)
                    .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
                say(stdout, format!("wrote {}", path.display()))?;
            }
            Ok(())
        }
        Command::Enumerate { family, common } => {
            let params = family_params(family.k, family.n, family.d, false)?;
            let ctx = Context::new(common, command_line, stdout)?;
            let members = sampler::enumerate_family(params).map_err(CliError::runtime)?;
            say(stdout, format!("count: {}", members.len()))?;
            ctx.emit(
                &CountResult {
                    k: params.k().to_string(),
                    n: params.n(),
                    d: params.d(),
                    count: members.len(),
                },
                stdout,
            )
        }
        Command::MatchingSweep {
            k,
            n,
            d,
            trials,
            mode,
            method,
            steps,
            policy,
            emit_trials,
            common,
        } => {
            positive("--trials", trials)?;
            let params_list = d
                .iter()
                .map(|&d| family_params(k, n, d, true))
                .collect::<Result<Vec<_>, _>>()?;
            if mode == Mode::AGamma {
                if let Some(p) = params_list.iter().find(|p| p.d() < 2) {
                    return Err(usage("--d", format!("mode AGamma needs d >= 2, got {}", p.d())));
                }
            }
            let method = with_steps(method, steps)?;
            if method == SamplerMethod::PairingRejection {
                if let Some(p) = params_list.iter().find(|p| !sampler::pairing_feasible(p)) {
                    return Err(usage("--method", format!("pairing rejection is infeasible for {p}; use switch")));
                }
            }
            let ctx = Context::new(common, command_line, stdout)?;
            let (result, records) =
                experiments::sweep_matching_with_trials(&params_list, trials, mode, method, policy, ctx.seed)
                    .map_err(CliError::runtime)?;
            say(stdout, format!("mode {mode}, {trials} trials per point, sampler {method}"))?;
            for row in &result.rows {
                say(
                    stdout,
                    format!(
                        "d = {:>5}  c = {:>9}  p_hat = {} [{}, {}]",
                        row.d.unwrap_or_default(),
                        sig6(row.c),
                        sig6(row.p_hat),
                        sig6(row.ci_low),
                        sig6(row.ci_high)
                    ),
                )?;
            }
            if let Some(path) = emit_trials {
                let mut text = String::new();
                for record in &records {
                    text.push_str(&serde_json::to_string(record).map_err(CliError::runtime)?);
                    text.push('\n');
                }
                std::fs::write(&path, text)
                    .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
                say(stdout, format!("wrote {}", path.display()))?;
            }
            ctx.emit(&result, stdout)
        }
        Command::ErBaseline { n, c, trials, common } => {
            positive("--trials", trials)?;
            positive("--n", n)?;
            for &value in &c {
                let p = ((n as f64).ln() + value) / n as f64;
                if !(0.0..=1.0).contains(&p) {
                    return Err(usage("--c", format!("c = {value} gives p = {p} outside [0, 1]")));
                }
            }
            let ctx = Context::new(common, command_line, stdout)?;
            let result = experiments::er_baseline_sweep(n, &c, trials, ctx.seed).map_err(CliError::runtime)?;
            for row in &result.rows {
                say(
                    stdout,
                    format!(
                        "c = {:>6}  p_hat = {} [{}, {}]  limit = {}",
                        sig6(row.c),
                        sig6(row.p_hat),
                        sig6(row.ci_low),
                        sig6(row.ci_high),
                        sig6(row.analytic.unwrap_or(f64::NAN))
                    ),
                )?;
            }
            ctx.emit(&result, stdout)
        }
        Command::Commutative {
            k,
            m,
            d,
            h,
            trials,
            method,
            sample_edges,
            common,
        } => {
            positive("--trials", trials)?;
            for &deg in &d {
                plunnecke::layer_params(k, m, deg, h).map_err(|e| {
                    let flag = match e {
                        plunnecke::PlunneckeError::InvalidDegree(_) => "--d",
                        plunnecke::PlunneckeError::NoLayers => "--h",
                        plunnecke::PlunneckeError::NonIntegralLayer { .. } => "--k/--m/--h",
                        _ => "--k",
                    };
                    usage(flag, e)
                })?;
            }
            let ctx = Context::new(common, command_line, stdout)?;
            let result = experiments::commutative_sweep(k, m, &d, h, trials, ctx.seed, method, sample_edges)
                .map_err(CliError::runtime)?;
            if let Some(row) = result.rows.first() {
                say(stdout, format!("d_low = {}, d_high = {}", sig6(row.d_low), sig6(row.d_high)))?;
            }
            if let Some(e) = sample_edges {
                say(stdout, format!("checking {e} sampled edges per condition"))?;
            }
            for row in &result.rows {
                say(
                    stdout,
                    format!(
                        "d = {:>5}  commutative {}/{}  p_hat = {} [{}, {}]",
                        row.d,
                        row.commutative,
                        row.trials,
                        sig6(row.p_hat),
                        sig6(row.ci_low),
                        sig6(row.ci_high)
                    ),
                )?;
            }
            ctx.emit(&result, stdout)
        }
        Command::Magnification {
            graph,
            k,
            m,
            d,
            h,
            level,
            method,
            save_graph,
            common,
        } => {
            enum Source {
                File(PathBuf),
                Random(Ratio, usize, usize, usize),
            }
            let source = match (graph, k, m, d, h) {
                (Some(path), None, None, None, None) => Source::File(path),
                (None, Some(k), Some(m), Some(d), Some(h)) => {
                    plunnecke::layer_params(k, m, d, h).map_err(|e| usage("--k/--m/--d/--h", e))?;
                    Source::Random(k, m, d, h)
                }
                _ => return Err(usage("--graph", "give either --graph or all of --k --m --d --h")),
            };
            let ctx = Context::new(common, command_line, stdout)?;
            let g = match source {
                Source::File(path) => match format::read_graph(&path) {
                    Ok(GraphFile::Layered(g)) => g,
                    Ok(GraphFile::Bipartite(b)) => LayeredGraph::from_biregular(vec![b]).map_err(CliError::runtime)?,
                    Err(e) => return Err(usage("--graph", format!("{}: {e}", path.display()))),
                },
                Source::Random(k, m, d, h) => {
                    let g = plunnecke::build_random_layered(k, m, d, h, ctx.seed, SamplerMethod::default_chain())
                        .map_err(CliError::runtime)?;
                    if let Some(path) = &save_graph {
                        format::write_graph(&GraphFile::Layered(g.clone()), path)
                            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
                        say(stdout, format!("wrote {}", path.display()))?;
                    }
                    g
                }
            };
            magnification_report(&g, level, method, &ctx, stdout)
        }
        Command::Analytic {
            family,
            s,
            m,
            h,
            common,
        } => {
            let params = family_params(family.k, family.n, family.d, false)?;
            let ctx = Context::new(common, command_line, stdout)?;
            let table = analytic_table(&params, s, m, h)?;
            for row in &table.rows {
                let exact = if row.exact.is_empty() || row.exact.len() > 40 {
                    String::new()
                } else {
                    format!(" ({})", row.exact)
                };
                say(stdout, format!("{}: {}{exact}", row.quantity, row.value))?;
            }
            ctx.emit(&table, stdout)
        }
        Command::Stats {
            family,
            s,
            trials,
            method,
            exhaustive,
            common,
        } => {
            let params = family_params(family.k, family.n, family.d, true)?;
            if s == 0 || s >= params.n() {
                return Err(usage("--s", format!("must lie in 1..={}", params.n() - 1)));
            }
            let method = auto_method(&params, method);
            if !exhaustive {
                positive("--trials", trials)?;
                if method == SamplerMethod::PairingRejection && !sampler::pairing_feasible(&params) {
                    return Err(usage("--method", "pairing rejection is infeasible; use switch"));
                }
            }
            let ctx = Context::new(common, command_line, stdout)?;
            let table = if exhaustive {
                experiments::exhaustive_local_statistics(params, s)
            } else {
                experiments::estimate_local_statistics(params, s, trials, ctx.seed, method)
            }
            .map_err(CliError::runtime)?;
            for row in &table.rows {
                let target = match (&row.oracle_exact, row.oracle, row.lower_bound, row.upper_bound) {
                    (Some(exact), _, _, _) => format!("oracle {exact}"),
                    (None, Some(v), _, _) => format!("oracle {}", sig6(v)),
                    (None, None, lo, Some(hi)) => {
                        format!("bounds [{}, {}]", sig6(lo.unwrap_or(0.0)), sig6(hi))
                    }
                    _ => String::new(),
                };
                let value = match &row.empirical_exact {
                    Some(exact) => exact.to_string(),
                    None => format!("{} [{}, {}]", sig6(row.empirical), sig6(row.ci_low), sig6(row.ci_high)),
                };
                say(
                    stdout,
                    format!("{}: {value}  {target}  {}", row.name, if row.pass { "pass" } else { "FAIL" }),
                )?;
            }
            ctx.emit(&table, stdout)
        }
    }
}

fn magnification_report(
    g: &LayeredGraph,
    level: Option<usize>,
    method: MagnificationMethod,
    ctx: &Context,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let levels: Vec<usize> = match level {
        Some(i) if i == 0 || i > g.h() => return Err(usage("--level", format!("must lie in 1..={}", g.h()))),
        Some(i) => vec![i],
        None => (1..=g.h()).collect(),
    };
    if matches!(method, MagnificationMethod::Brute | MagnificationMethod::Both)
        && g.layer_sizes()[0] > plunnecke::BRUTEFORCE_MAX_BASE
    {
        return Err(usage(
            "--method",
            format!("brute force needs |X_0| <= {}", plunnecke::BRUTEFORCE_MAX_BASE),
        ));
    }
    let mut results: Vec<MagnificationResult> = Vec::with_capacity(levels.len());
    for &i in &levels {
        let r = match method {
            MagnificationMethod::Flow => plunnecke::magnification_flow(g, i),
            MagnificationMethod::Brute => plunnecke::magnification_bruteforce(g, i),
            MagnificationMethod::Both => {
                let flow = plunnecke::magnification_flow(g, i).map_err(CliError::runtime)?;
                let brute = plunnecke::magnification_bruteforce(g, i).map_err(CliError::runtime)?;
                if flow.value != brute.value {
                    return Err(CliError::Runtime(format!(
                        "level {i}: flow gives {} but brute force gives {}",
                        flow.value, brute.value
                    )));
                }
                Ok(flow)
            }
        }
        .map_err(CliError::runtime)?;
        say(
            stdout,
            format!(
                "D_{i} = {} ({}), witness size {}",
                r.value,
                sig6(analytics::ratio_to_f64(&r.value)),
                r.witness.len()
            ),
        )?;
        results.push(r);
    }
    let monotone = if level.is_none() {
        let values: Vec<_> = results.iter().map(|r| r.value.clone()).collect();
        match plunnecke::plunnecke_monotone_check(&values) {
            Ok(ok) => {
                say(stdout, format!("D_i^(1/i) non-increasing: {ok}"))?;
                Some(ok)
            }
            Err(e) => {
                say(stdout, format!("monotonicity not checked: {e}"))?;
                None
            }
        }
    } else {
        None
    };
    ctx.emit(&MagnificationTable { results, monotone }, stdout)
}

#[derive(Debug, Serialize)]
struct CountResult {
    k: String,
    n: usize,
    d: usize,
    count: usize,
}

impl Tabular for CountResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["k", "n", "d", "count"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.k.clone(), self.n.to_string(), self.d.to_string(), self.count.to_string()]]
    }
}

#[derive(Debug, Serialize)]
struct MagnificationTable {
    results: Vec<MagnificationResult>,
    monotone: Option<bool>,
}

impl Tabular for MagnificationTable {
    fn header(&self) -> Vec<&'static str> {
        vec!["level", "value", "value_f64", "witness_size", "witness"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.results
            .iter()
            .map(|r| {
                let witness: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
                vec![
                    r.level.to_string(),
                    r.value.to_string(),
                    sig6(analytics::ratio_to_f64(&r.value)),
                    r.witness.len().to_string(),
                    witness.join(" "),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Serialize)]
struct AnalyticRow {
    quantity: String,
    value: String,
    exact: String,
}

#[derive(Debug, Serialize)]
struct AnalyticTable {
    rows: Vec<AnalyticRow>,
}

impl Tabular for AnalyticTable {
    fn header(&self) -> Vec<&'static str> {
        vec!["quantity", "value", "exact"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.quantity.clone(), r.value.clone(), r.exact.clone()])
            .collect()
    }
}

fn analytic_table(params: &GraphParams, s: usize, m: Option<usize>, h: Option<usize>) -> Result<AnalyticTable, CliError> {
    let mut rows = Vec::new();
    let mut push = |quantity: &str, value: f64, exact: Option<String>| {
        rows.push(AnalyticRow {
            quantity: quantity.into(),
            value: sig6(value),
            exact: exact.unwrap_or_default(),
        })
    };
    let prob = |p: &Probability| p.exact.as_ref().map(|r| r.to_string());

    let c = analytics::threshold_c(params).c;
    push("c", c, None);
    push("er_limit", analytics::er_matching_prob(c), None);
    if params.n() >= 2 {
        let l = analytics::lemma21_expectations(params, None).map_err(CliError::runtime)?;
        push(
            "common_neighbors",
            analytics::ratio_to_f64(&l.common_neighbors),
            Some(l.common_neighbors.to_string()),
        );
    }
    for (name, side, conditioned, pool) in [
        ("no_edge_in", Direction::In, false, params.n()),
        ("no_edge_in_conditioned", Direction::In, true, params.n() - 1),
        ("no_edge_out", Direction::Out, false, params.kn()),
        ("no_edge_out_conditioned", Direction::Out, true, params.kn() - 1),
    ] {
        if s <= pool {
            let r = analytics::no_edge_exact(s, params, side, conditioned).map_err(CliError::runtime)?;
            push(name, analytics::ratio_to_f64(&r), Some(r.to_string()));
        }
    }
    let asym = analytics::isolated_prob_asymptotic(params);
    push("isolated_asymptotic", asym.value, None);
    if params.kd() <= params.n() {
        if let Ok(a) = analytics::a_minus_expectation(params) {
            push("a_minus_expectation", a.value, prob(&a));
        }
        let q = analytics::q_expectation(params);
        push("q_expectation", q.value, prob(&q));
    }
    if params.n() >= 2 {
        let b = analytics::a_plus_bounds(params).map_err(CliError::runtime)?;
        if let Some(lower) = &b.lower {
            push("disjoint_lower", lower.value, prob(lower));
        }
        push("disjoint_upper", b.upper.value, prob(&b.upper));
    }
    push("nonmatching_diagnostic", analytics::nonmatching_diagnostic(params), None);
    match (m, h) {
        (Some(m), Some(h)) => {
            let b = analytics::commutative_d_bounds(params.k(), m, h);
            push("d_low", b.d_low, None);
            push("d_high", b.d_high, None);
        }
        (None, None) => {}
        _ => return Err(usage("--m/--h", "give both or neither")),
    }
    Ok(AnalyticTable { rows })
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}


//! `antinorm` — command-line front end for the inequality check catalog.
//!
//! Subcommands: `list` the catalog, `run` checks by id, `search` for
//! counterexample instances, `report` to re-render a saved JSON document.
//!
//! Exit codes: 0 when every selected check passed (or every search
//! completed), 1 when at least one check failed beyond slack, 2 on usage or
//! configuration errors (one-line diagnostic on stderr).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use antinorm::report::{CheckReport, Verdict};
use antinorm::verifier::search::SearchOutcome;
use antinorm::verifier::{
    self, registry_entry, reports_csv, reports_json, resolve_ids, run_suite, CheckConfig,
    CheckKind, REGISTRY,
};

#[derive(Parser)]
#[command(
    name = "antinorm",
    version,
    about = "Randomized verifier for symmetric-norm and anti-norm inequalities \
             on positive semi-definite matrices",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the check catalog: one line per entry with id, kind, and the
    /// inequality it covers.
    List,
    /// Run checks by id (`all`, or no ids, selects the whole catalog) and
    /// report verdicts; search ids run with the sample budget.
    Run {
        /// Check ids to run, in order; empty or `all` means the full catalog.
        #[arg(value_name = "CHECK")]
        checks: Vec<String>,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run counterexample searches and emit the instance document (JSON by
    /// default; `--format csv` summarizes one row per target).
    Search {
        /// Search targets (`cex_*` / `open_*` ids); empty or `all` means all
        /// four.
        #[arg(value_name = "TARGET")]
        targets: Vec<String>,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-render a saved JSON document (a run report, a report array, or a
    /// search outcome) as text, CSV, or normalized JSON.
    Report {
        /// Path to the JSON document to load.
        #[arg(value_name = "PATH")]
        file: PathBuf,
        /// Tolerance used when summarizing a raw search outcome.
        #[arg(long, value_name = "TOL", default_value_t = verifier::DEFAULT_TOL_REL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Configuration overrides shared by `run` and `search`. Anything left unset
/// falls back to the published defaults (seed 0xA17190, dims {2,3,4,6,8},
/// 1000 trials per dim, tol 1e-9, budget 100000).
#[derive(Args)]
struct ConfigArgs {
    /// Matrix dimension to sweep; repeatable, or comma-separated.
    #[arg(long, value_name = "N", value_delimiter = ',')]
    n: Vec<usize>,
    /// Second block size for the block checks; pairs with exactly one --n
    /// (the first block size), so the matrices are (n+m) x (n+m).
    #[arg(long, value_name = "M")]
    m: Option<usize>,
    /// Randomized trials per dimension.
    #[arg(long, value_name = "COUNT")]
    trials: Option<u64>,
    /// RNG seed, decimal or 0x-hex. Defaults to ANTINORM_SEED, then 0xA17190.
    #[arg(long, value_name = "SEED", value_parser = parse_seed)]
    seed: Option<u64>,
    /// Relative tolerance: a check fails when worst_margin < -tol.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
    /// Eigenvalue law for random matrices: uniform01, exp, rank_deficient(k),
    /// or custom(v1, v2, ...).
    #[arg(long, value_name = "LAW")]
    spectrum: Option<String>,
    /// Norm / anti-norm override in the spec grammar, repeatable; e.g.
    /// ky_fan(2), schatten(1.5), trace, schatten_anti(0.5),
    /// q_lift(ky_fan_anti(1), 0.5).
    #[arg(long, value_name = "SPEC")]
    spec: Vec<String>,
    /// Scalar-function override in the registry grammar, repeatable; e.g.
    /// sqrt, tent, pow(0.5), poly(0,1,0,1), roots(1,1).
    #[arg(long = "fn", value_name = "FN")]
    functions: Vec<String>,
    /// Exponent for the q-side checks; must lie in (0, 1).
    #[arg(long, value_name = "Q")]
    q: Option<f64>,
    /// Exponent for the p-side checks; must exceed 1.
    #[arg(long, value_name = "P")]
    p: Option<f64>,
    /// Schatten anti-norm parameter: negative, or in (0, 1].
    #[arg(long, value_name = "R")]
    r: Option<f64>,
    /// Sample budget for the search targets.
    #[arg(long, value_name = "SAMPLES")]
    budget: Option<u64>,
    /// Worker threads; parallelism is across check ids and never changes the
    /// reported margins.
    #[arg(long, value_name = "COUNT")]
    threads: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; omit for the human-readable rendering (`run` /
    /// `report`) or the JSON instance document (`search`).
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<Format>,
    /// Write the output to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("antinorm: {msg}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::List => {
            print!("{}", render_catalog());
            Ok(0)
        }
        Command::Run { checks, config, output } => run_cmd(&checks, config, &output),
        Command::Search { targets, config, output } => search_cmd(&targets, config, &output),
        Command::Report { file, tol, output } => report_cmd(&file, tol, &output),
    }
}

fn run_cmd(selectors: &[String], config: ConfigArgs, output: &OutputArgs) -> Result<i32, String> {
    let cfg = config.into_config()?;
    let ids = resolve_ids(selectors).map_err(|e| e.to_string())?;
    let reports = run_suite(&ids, &cfg).map_err(|e| e.to_string())?;
    let text = match output.format {
        None => render_reports(&reports),
        Some(Format::Csv) => reports_csv(&reports),
        Some(Format::Json) => json_line(reports_json(&reports).map_err(|e| e.to_string())?),
    };
    output.emit(&text)?;
    Ok(exit_code(&reports))
}

fn search_cmd(targets: &[String], config: ConfigArgs, output: &OutputArgs) -> Result<i32, String> {
    let cfg = config.into_config()?;
    let ids = resolve_search_ids(targets)?;
    let mut outcomes: Vec<SearchOutcome> = Vec::with_capacity(ids.len());
    for id in &ids {
        outcomes.push(verifier::search::run_search(id, &cfg).map_err(|e| e.to_string())?);
    }
    let text = match output.format {
        Some(Format::Csv) => {
            let reports: Vec<CheckReport> =
                outcomes.iter().map(|o| o.clone().into_report(cfg.tol_rel)).collect();
            reports_csv(&reports)
        }
        _ => {
            let json = if outcomes.len() == 1 {
                serde_json::to_string_pretty(&outcomes[0])
            } else {
                serde_json::to_string_pretty(&outcomes)
            }
            .map_err(|e| format!("serialization failed: {e}"))?;
            json_line(json)
        }
    };
    output.emit(&text)?;
    Ok(0)
}

fn report_cmd(file: &PathBuf, tol: f64, output: &OutputArgs) -> Result<i32, String> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(format!("tolerance {tol} must be a positive real"));
    }
    let data = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let reports = parse_report_document(&data, tol)?;
    let text = match output.format {
        None => render_reports(&reports),
        Some(Format::Csv) => reports_csv(&reports),
        Some(Format::Json) => json_line(reports_json(&reports).map_err(|e| e.to_string())?),
    };
    output.emit(&text)?;
    Ok(exit_code(&reports))
}

/// Accepts any JSON this tool writes: a report array (`run --format json`), a
/// single report, a search outcome (`search`), or an outcome array.
fn parse_report_document(data: &str, tol_rel: f64) -> Result<Vec<CheckReport>, String> {
    if let Ok(reports) = serde_json::from_str::<Vec<CheckReport>>(data) {
        return Ok(reports);
    }
    if let Ok(report) = serde_json::from_str::<CheckReport>(data) {
        return Ok(vec![report]);
    }
    if let Ok(outcome) = serde_json::from_str::<SearchOutcome>(data) {
        return Ok(vec![outcome.into_report(tol_rel)]);
    }
    if let Ok(outcomes) = serde_json::from_str::<Vec<SearchOutcome>>(data) {
        return Ok(outcomes.into_iter().map(|o| o.into_report(tol_rel)).collect());
    }
    Err("not a recognizable report document (expected a run report, a report array, \
         or a search outcome)"
        .into())
}

fn render_catalog() -> String {
    let width = REGISTRY.iter().map(|e| e.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for entry in REGISTRY {
        let kind = match entry.kind {
            CheckKind::Check => "check",
            CheckKind::Search => "search",
        };
        let _ = writeln!(out, "{:<width$}  {kind:<6}  {}", entry.id, entry.anchor);
    }
    out
}

fn render_reports(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{r}");
        out.push('\n');
    }
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        out,
        "summary: {} run, {} pass, {} fail, {} hypotheses-not-met",
        reports.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::HypothesesNotMet),
    );
    out
}

fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.verdict.is_fail()) {
        1
    } else {
        0
    }
}

fn json_line(json: String) -> String {
    let mut s = json;
    s.push('\n');
    s
}

fn resolve_search_ids(targets: &[String]) -> Result<Vec<&'static str>, String> {
    if targets.is_empty() || targets.iter().any(|t| t == "all") {
        return Ok(REGISTRY
            .iter()
            .filter(|e| e.kind == CheckKind::Search)
            .map(|e| e.id)
            .collect());
    }
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        let entry = registry_entry(t)
            .ok_or_else(|| format!("unknown search target `{t}`; `antinorm list` shows the catalog"))?;
        if entry.kind != CheckKind::Search {
            return Err(format!("`{t}` is a check, not a search target; use `antinorm run {t}`"));
        }
        if !out.contains(&entry.id) {
            out.push(entry.id);
        }
    }
    Ok(out)
}

impl ConfigArgs {
    fn into_config(self) -> Result<CheckConfig, String> {
        let mut cfg = CheckConfig::default();
        if let Some(m) = self.m {
            if self.n.len() != 1 {
                return Err(
                    "--m needs exactly one --n: the blocks are n x n and m x m".into()
                );
            }
            cfg.block_n = Some(self.n[0]);
            cfg.block_m = Some(m);
            cfg.dims = vec![self.n[0] + m];
        } else if !self.n.is_empty() {
            cfg.dims = self.n;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        cfg.seed = match self.seed {
            Some(s) => s,
            None => seed_default()?,
        };
        if let Some(t) = self.tol {
            cfg.tol_rel = t;
        }
        if let Some(law) = &self.spectrum {
            cfg.spectrum = law.parse().map_err(|e| format!("--spectrum: {e}"))?;
        }
        cfg.specs = self.spec;
        cfg.functions = self.functions;
        cfg.q = self.q;
        cfg.p = self.p;
        cfg.r = self.r;
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<(), String> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                eprintln!("wrote {}", path.display());
                Ok(())
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn seed_default() -> Result<u64, String> {
    match std::env::var("ANTINORM_SEED") {
        Ok(v) => parse_seed(&v).map_err(|e| format!("ANTINORM_SEED: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(verifier::DEFAULT_SEED),
        Err(e) => Err(format!("ANTINORM_SEED: {e}")),
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| format!("`{s}` is not a 64-bit seed (decimal or 0x-hex)"))
}

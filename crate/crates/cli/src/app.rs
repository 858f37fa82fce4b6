//! Argument parsing and the five subcommands.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcorr_core::audit::{all_passed, run_audit, Fault};
use qcorr_core::families::{bisect, detect_kinks, linspace, Family};
use qcorr_core::{analyze, analyze_verified, CorrError, CorrelationReport, CorrelationVector};
use qcorr_xxz::{detect_transitions, sweep_delta, SolverOptions, TransitionOptions};
use serde::Serialize;

use crate::config::{resolve, ConfigError, ConfigFile};
use crate::numfmt::sig12;
use crate::svg::{self, Series};
use crate::table::Table;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const UNPHYSICAL: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const VERIFICATION: i32 = 4;
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Unphysical(String),
    Solver(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Unphysical(_) => exit::UNPHYSICAL,
            Failure::Solver(_) => exit::SOLVER,
            Failure::Verification(_) => exit::VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Unphysical(m)
            | Failure::Solver(m)
            | Failure::Verification(m) => m,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("I/O: {e}"))
    }
}

fn from_corr(e: CorrError) -> Failure {
    match e {
        CorrError::Unphysical { .. } => Failure::Unphysical(e.to_string()),
        CorrError::InvalidParameter(_) | CorrError::OutOfDomain { .. } => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Solver(e.to_string()),
    }
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum, classical and total correlations of Bell-diagonal states"
)]
pub struct Cli {
    /// Plain-text `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "QCORR_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report all six measures of one state.
    Analyze(AnalyzeArgs),
    /// Evaluate a one-parameter family of states.
    Sweep(SweepArgs),
    /// Ground-state correlations of the XXZ ring over an anisotropy range.
    Xxz(XxzArgs),
    /// Run the randomized verification suites.
    Verify(VerifyArgs),
    /// Draw columns of a CSV file as an SVG line plot.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// c1 c2 c3 (config key `c = c1,c2,c3`).
    #[arg(num_args = 3, allow_negative_numbers = true, value_names = ["C1", "C2", "C3"])]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Cross-check every closed form against its matrix-level route.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// (x, x, x)
    Su2,
    /// (x, -x, 0.9)
    U1,
    /// start + x (end - start), x in [0, 1]
    Line,
}

impl std::str::FromStr for FamilyName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <FamilyName as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// First endpoint of the `line` family, `c1,c2,c3`.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<CorrelationVector>,
    /// Second endpoint of the `line` family, `c1,c2,c3`.
    #[arg(long, allow_hyphen_values = true)]
    pub end: Option<CorrelationVector>,
    /// Smallest slope change of T_G reported as a kink.
    #[arg(long)]
    pub kink_threshold: Option<f64>,
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write an SVG of the six measures.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct XxzArgs {
    /// Ring length L (even, 4 to 16).
    #[arg(long, short = 'L')]
    pub sites: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub jump_threshold: Option<f64>,
    #[arg(long)]
    pub kink_window: Option<usize>,
    /// Largest sector diagonalized densely; Lanczos above.
    #[arg(long)]
    pub dense_limit: Option<usize>,
    /// Lanczos iteration cap per run.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InjectedFault {
    None,
    /// Use min instead of max in the closed form of T_G.
    TgMin,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<InjectedFault>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub x: Option<String>,
    /// Comma-separated column names.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    match execute(cli) {
        Ok(()) => exit::OK,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn execute(cli: Cli) -> Outcome {
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let threads = match cli.threads {
        Some(n) => Some(n),
        None => config.get::<usize>("threads")?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::Usage("threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Analyze(a) => cmd_analyze(a, &config),
        Command::Sweep(a) => cmd_sweep(a, &config),
        Command::Xxz(a) => cmd_xxz(a, &config),
        Command::Verify(a) => cmd_verify(a, &config),
        Command::Plot(a) => cmd_plot(a, &config),
    })
}

fn resolve_path(flag: Option<PathBuf>, config: &ConfigFile, key: &str) -> Option<PathBuf> {
    flag.or_else(|| config.raw(key).map(PathBuf::from))
}

fn emit(path: Option<&Path>, content: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Summary lines go to stdout when the data went to a file, else stderr.
fn summary(data_to_file: bool, lines: &[String]) {
    for line in lines {
        if data_to_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn flag_or_config(flag: bool, config: &ConfigFile, key: &str) -> Result<bool, Failure> {
    Ok(flag || config.get::<bool>(key)?.unwrap_or(false))
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Serialize)]
struct AnalyzeJson {
    c: [f64; 3],
    lambda: std::collections::BTreeMap<&'static str, f64>,
    #[serde(rename = "QE")]
    q_e: f64,
    #[serde(rename = "CE")]
    c_e: f64,
    #[serde(rename = "TE")]
    t_e: f64,
    #[serde(rename = "QG")]
    q_g: f64,
    #[serde(rename = "CG")]
    c_g: f64,
    #[serde(rename = "TG")]
    t_g: f64,
    optimal_axis: usize,
}

const LAMBDA_LABELS: [&str; 4] = ["00", "01", "10", "11"];

pub fn render_report_text(r: &CorrelationReport) -> String {
    let mut s = String::new();
    let c = r.c.components().map(sig12);
    s.push_str(&format!("c = ({}, {}, {})\n", c[0], c[1], c[2]));
    let lambdas: Vec<String> = LAMBDA_LABELS
        .iter()
        .zip(r.spectrum)
        .map(|(l, v)| format!("λ{l} = {}", sig12(v)))
        .collect();
    s.push_str(&lambdas.join("  "));
    s.push('\n');
    for (name, v) in [
        ("QE", r.entropic.q_e),
        ("CE", r.entropic.c_e),
        ("TE", r.entropic.t_e),
        ("QG", r.geometric.q_g),
        ("CG", r.geometric.c_g),
        ("TG", r.geometric.t_g),
    ] {
        s.push_str(&format!("{name} = {}\n", sig12(v)));
    }
    s.push_str(&format!(
        "optimal axis = {}\n",
        r.geometric.optimal_axis.number()
    ));
    s
}

pub fn render_report_json(r: &CorrelationReport) -> String {
    let json = AnalyzeJson {
        c: r.c.components(),
        lambda: LAMBDA_LABELS.iter().copied().zip(r.spectrum).collect(),
        q_e: r.entropic.q_e,
        c_e: r.entropic.c_e,
        t_e: r.entropic.t_e,
        q_g: r.geometric.q_g,
        c_g: r.geometric.c_g,
        t_g: r.geometric.t_g,
        optimal_axis: r.geometric.optimal_axis.number(),
    };
    let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_analyze(a: AnalyzeArgs, config: &ConfigFile) -> Outcome {
    let c = match a.c {
        Some(v) => CorrelationVector::from_array([v[0], v[1], v[2]]),
        None => config
            .get::<CorrelationVector>("c")?
            .ok_or_else(|| Failure::Usage("analyze needs three components C1 C2 C3".into()))?,
    };
    if !c.components().iter().all(|x| x.is_finite()) {
        return Err(Failure::Usage("components must be finite".into()));
    }
    let format = match a.format {
        Some(f) => f,
        None => match config.raw("format") {
            None => Format::Text,
            Some(v) => <Format as ValueEnum>::from_str(v, true)
                .map_err(|_| Failure::Usage(format!("config key `format`: unknown `{v}`")))?,
        },
    };
    let verify = flag_or_config(a.verify, config, "verify")?;
    let report = if verify {
        analyze_verified(&c)
    } else {
        analyze(&c)
    }
    .map_err(from_corr)?;
    let text = match format {
        Format::Text => render_report_text(&report),
        Format::Json => render_report_json(&report),
    };
    emit(resolve_path(a.output, config, "output").as_deref(), &text)
}

// ---------------------------------------------------------------- sweep

pub const SWEEP_HEADER: [&str; 11] = [
    "x", "c1", "c2", "c3", "physical", "QE", "CE", "TE", "QG", "CG", "TG",
];
pub const DEFAULT_SWEEP_STEPS: usize = 200;
pub const DEFAULT_KINK_THRESHOLD: f64 = 0.1;
/// Width to which the crossing of T_E and T_G is refined.
pub const CROSSING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub c: CorrelationVector,
    pub report: Option<CorrelationReport>,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Usage(format!("CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::Usage(format!("CSV: {e}")))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, Failure> {
    let mut w = csv_writer();
    let csv_err = |e: csv::Error| Failure::Usage(format!("CSV: {e}"));
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for row in rows {
        let mut rec: Vec<String> = vec![sig12(row.x)];
        rec.extend(row.c.components().map(sig12));
        match &row.report {
            Some(r) => {
                rec.push("true".into());
                rec.extend(
                    [
                        r.entropic.q_e,
                        r.entropic.c_e,
                        r.entropic.t_e,
                        r.geometric.q_g,
                        r.geometric.c_g,
                        r.geometric.t_g,
                    ]
                    .map(sig12),
                );
            }
            None => {
                rec.push("false".into());
                rec.extend(std::iter::repeat(String::new()).take(6));
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish_csv(w)
}

/// Evaluates the family on the grid; unphysical points keep `report: None`.
pub fn sweep_family(family: &Family, xs: &[f64], verify: bool) -> Result<Vec<SweepRow>, Failure> {
    use rayon::prelude::*;
    xs.par_iter()
        .map(|&x| {
            let c = family.state(x);
            if !c.is_physical() {
                return Ok(SweepRow { x, c, report: None });
            }
            let r = if verify {
                analyze_verified(&c)
            } else {
                analyze(&c)
            }
            .map_err(from_corr)?;
            Ok(SweepRow {
                x,
                c,
                report: Some(r),
            })
        })
        .collect()
}

/// Kinks of T_G and sign changes of T_E - T_G along a sweep.
pub fn sweep_summary(
    family: &Family,
    rows: &[SweepRow],
    kink_threshold: f64,
) -> Result<Vec<String>, Failure> {
    let mut lines = Vec::new();
    // Maximal runs of physical rows.
    let mut runs: Vec<Vec<(f64, CorrelationReport)>> = vec![Vec::new()];
    for row in rows {
        match row.report {
            Some(r) => runs.last_mut().expect("non-empty").push((row.x, r)),
            None if !runs.last().expect("non-empty").is_empty() => runs.push(Vec::new()),
            None => {}
        }
    }
    for run in runs.iter().filter(|r| r.len() >= 3) {
        let xs: Vec<f64> = run.iter().map(|(x, _)| *x).collect();
        let tg: Vec<f64> = run.iter().map(|(_, r)| r.geometric.t_g).collect();
        for k in detect_kinks(&xs, &tg, kink_threshold) {
            lines.push(format!(
                "# tg_kink x={} slope_change={}",
                sig12(k.x),
                sig12(k.slope_change)
            ));
        }
    }
    let gap = |x: f64| -> Result<f64, CorrError> {
        let r = analyze(&family.state(x))?;
        Ok(r.entropic.t_e - r.geometric.t_g)
    };
    for run in &runs {
        for w in run.windows(2) {
            let (g0, g1) = (
                w[0].1.entropic.t_e - w[0].1.geometric.t_g,
                w[1].1.entropic.t_e - w[1].1.geometric.t_g,
            );
            if g0 * g1 < 0.0 {
                let x = bisect(gap, w[0].0, w[1].0, CROSSING_TOL).map_err(from_corr)?;
                lines.push(format!("# te_tg_crossing x={}", sig12(x)));
            }
        }
    }
    Ok(lines)
}

fn plot_measures(
    title: &str,
    x_label: &str,
    xs: &[f64],
    columns: &[(&str, Vec<Option<f64>>)],
) -> String {
    let series: Vec<Series> = columns
        .iter()
        .map(|(name, ys)| Series {
            name: (*name).to_string(),
            points: xs
                .iter()
                .zip(ys)
                .filter_map(|(x, y)| y.map(|y| (*x, y)))
                .collect(),
        })
        .collect();
    svg::render(title, x_label, &series)
}

fn cmd_sweep(a: SweepArgs, config: &ConfigFile) -> Outcome {
    let name = resolve(a.family, config, "family", FamilyName::Su2)?;
    let family = match name {
        FamilyName::Su2 => Family::Su2,
        FamilyName::U1 => Family::U1,
        FamilyName::Line => {
            let start = a.start.or(config.get("start")?);
            let end = a.end.or(config.get("end")?);
            match (start, end) {
                (Some(start), Some(end)) => Family::Line { start, end },
                _ => {
                    return Err(Failure::Usage(
                        "family `line` needs --start and --end".into(),
                    ))
                }
            }
        }
    };
    let (dlo, dhi) = family.domain();
    let from = resolve(a.from, config, "from", dlo)?;
    let to = resolve(a.to, config, "to", dhi)?;
    let steps = resolve(a.steps, config, "steps", DEFAULT_SWEEP_STEPS)?;
    family.check_range(from, to).map_err(from_corr)?;
    let xs = if from == to {
        vec![from]
    } else if steps < 2 {
        return Err(Failure::Usage(format!(
            "a sweep over [{from}, {to}] needs at least 2 steps"
        )));
    } else {
        linspace(from, to, steps)
    };
    let verify = flag_or_config(a.verify, config, "verify")?;
    let kink_threshold = resolve(
        a.kink_threshold,
        config,
        "kink_threshold",
        DEFAULT_KINK_THRESHOLD,
    )?;

    let rows = sweep_family(&family, &xs, verify)?;
    let output = resolve_path(a.output, config, "output");
    emit(output.as_deref(), &sweep_csv(&rows)?)?;
    summary(
        output.is_some(),
        &sweep_summary(&family, &rows, kink_threshold)?,
    );

    if let Some(path) = resolve_path(a.plot, config, "plot") {
        let pick = |f: fn(&CorrelationReport) -> f64| {
            rows.iter().map(|r| r.report.as_ref().map(f)).collect()
        };
        let columns: Vec<(&str, Vec<Option<f64>>)> = vec![
            ("QE", pick(|r| r.entropic.q_e)),
            ("CE", pick(|r| r.entropic.c_e)),
            ("TE", pick(|r| r.entropic.t_e)),
            ("QG", pick(|r| r.geometric.q_g)),
            ("CG", pick(|r| r.geometric.c_g)),
            ("TG", pick(|r| r.geometric.t_g)),
        ];
        emit(
            Some(&path),
            &plot_measures("correlations", "x", &xs, &columns),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- xxz

pub const XXZ_HEADER: [&str; 17] = [
    "delta",
    "L",
    "energy_density",
    "Gxx",
    "Gyy",
    "Gzz",
    "c1",
    "c2",
    "c3",
    "QG",
    "CG",
    "TG",
    "QE",
    "CE",
    "TE",
    "degeneracy",
    "status",
];

pub fn xxz_csv(sweep: &qcorr_xxz::Sweep) -> Result<String, Failure> {
    let mut w = csv_writer();
    let csv_err = |e: csv::Error| Failure::Usage(format!("CSV: {e}"));
    w.write_record(XXZ_HEADER).map_err(csv_err)?;
    for row in &sweep.rows {
        let mut rec = vec![sig12(row.delta), sweep.sites.to_string()];
        match &row.outcome {
            Ok(p) => {
                let o = &p.observables;
                let r = &p.report;
                rec.extend(
                    [
                        o.energy_density,
                        o.gxx,
                        o.gyy,
                        o.gzz,
                        p.c.c1,
                        p.c.c2,
                        p.c.c3,
                        r.geometric.q_g,
                        r.geometric.c_g,
                        r.geometric.t_g,
                        r.entropic.q_e,
                        r.entropic.c_e,
                        r.entropic.t_e,
                    ]
                    .map(sig12),
                );
                rec.push(o.degeneracy.to_string());
                rec.push("ok".into());
            }
            Err(e) => {
                rec.extend(std::iter::repeat(String::new()).take(14));
                rec.push(format!("error: {e}"));
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish_csv(w)
}

pub const DEFAULT_XXZ_SITES: usize = 8;
pub const DEFAULT_XXZ_RANGE: (f64, f64) = (-1.5, 1.5);
pub const DEFAULT_XXZ_STEPS: usize = 101;

fn cmd_xxz(a: XxzArgs, config: &ConfigFile) -> Outcome {
    let sites = resolve(a.sites, config, "sites", DEFAULT_XXZ_SITES)?;
    let from = resolve(a.from, config, "from", DEFAULT_XXZ_RANGE.0)?;
    let to = resolve(a.to, config, "to", DEFAULT_XXZ_RANGE.1)?;
    let steps = resolve(a.steps, config, "steps", DEFAULT_XXZ_STEPS)?;
    let defaults = TransitionOptions::default();
    let transition_options = TransitionOptions {
        jump_threshold: resolve(
            a.jump_threshold,
            config,
            "jump_threshold",
            defaults.jump_threshold,
        )?,
        kink_window: resolve(a.kink_window, config, "kink_window", defaults.kink_window)?,
        ..defaults
    };
    let solver_defaults = SolverOptions::default();
    let solver = SolverOptions {
        dense_limit: resolve(
            a.dense_limit,
            config,
            "dense_limit",
            solver_defaults.dense_limit,
        )?,
        max_iterations: resolve(
            a.max_iterations,
            config,
            "max_iterations",
            solver_defaults.max_iterations,
        )?,
        ..solver_defaults
    };
    let sweep =
        sweep_delta(sites, from, to, steps, &solver).map_err(|e| Failure::Usage(e.to_string()))?;

    let output = resolve_path(a.output, config, "output");
    emit(output.as_deref(), &xxz_csv(&sweep)?)?;

    if let Some(path) = resolve_path(a.plot, config, "plot") {
        let xs: Vec<f64> = sweep.rows.iter().map(|r| r.delta).collect();
        let pick = |f: fn(&CorrelationReport) -> f64| {
            sweep
                .rows
                .iter()
                .map(|r| r.outcome.as_ref().ok().map(|p| f(&p.report)))
                .collect()
        };
        let columns: Vec<(&str, Vec<Option<f64>>)> = vec![
            ("QG", pick(|r| r.geometric.q_g)),
            ("CG", pick(|r| r.geometric.c_g)),
            ("TG", pick(|r| r.geometric.t_g)),
            ("QE", pick(|r| r.entropic.q_e)),
            ("CE", pick(|r| r.entropic.c_e)),
            ("TE", pick(|r| r.entropic.t_e)),
        ];
        emit(
            Some(&path),
            &plot_measures(&format!("XXZ ring, L = {sites}"), "Δ", &xs, &columns),
        )?;
    }

    let failures: Vec<String> = sweep
        .failures()
        .map(|(d, e)| format!("Δ = {}: {e}", sig12(d)))
        .collect();
    let ok_rows = sweep.rows.len() - failures.len();
    let mut lines = Vec::new();
    if ok_rows >= qcorr_xxz::sweep::MIN_ROWS {
        let transitions = detect_transitions(&sweep, &transition_options)
            .map_err(|e| Failure::Solver(e.to_string()))?;
        lines.push(format!("# transitions: {}", transitions.len()));
        for t in transitions {
            let kind = match t.kind {
                qcorr_xxz::TransitionKind::FirstOrder => "first_order",
                qcorr_xxz::TransitionKind::Crossing => "crossing",
            };
            lines.push(format!(
                "# {kind} delta={} bracket=[{}, {}]",
                sig12(t.delta),
                sig12(t.bracket.0),
                sig12(t.bracket.1)
            ));
        }
    } else {
        lines.push(format!("# transitions: skipped ({ok_rows} usable rows)"));
    }
    summary(output.is_some(), &lines);
    if !failures.is_empty() {
        return Err(Failure::Solver(format!(
            "{} rows failed; {}",
            failures.len(),
            failures.join("; ")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

pub const DEFAULT_VERIFY_COUNT: usize = 100_000;

fn cmd_verify(a: VerifyArgs, config: &ConfigFile) -> Outcome {
    let seed = resolve(a.seed, config, "seed", 0u64)?;
    let count = resolve(a.count, config, "count", DEFAULT_VERIFY_COUNT)?;
    if count == 0 {
        return Err(Failure::Usage("count must be at least 1".into()));
    }
    let fault = match a.inject_fault.unwrap_or(InjectedFault::None) {
        InjectedFault::None => Fault::None,
        InjectedFault::TgMin => Fault::TotalGeometricMin,
    };
    let report = run_audit(seed, count, fault).map_err(from_corr)?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    emit(resolve_path(a.output, config, "output").as_deref(), &json)?;
    let failed: Vec<&str> = report
        .iter()
        .filter(|(_, s)| !s.passed())
        .map(|(k, _)| k.as_str())
        .collect();
    eprintln!("verify: {} suites, {} failed", report.len(), failed.len());
    if !all_passed(&report) {
        return Err(Failure::Verification(format!(
            "failing suites: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- plot

fn cmd_plot(a: PlotArgs, config: &ConfigFile) -> Outcome {
    let input = resolve_path(a.input, config, "input")
        .ok_or_else(|| Failure::Usage("plot needs --input".into()))?;
    let x =
        a.x.or_else(|| config.raw("x").map(str::to_string))
            .ok_or_else(|| Failure::Usage("plot needs --x".into()))?;
    let y =
        a.y.or_else(|| config.raw("y").map(str::to_string))
            .ok_or_else(|| Failure::Usage("plot needs --y".into()))?;
    let output = resolve_path(a.output, config, "output");
    let title = a
        .title
        .or_else(|| config.raw("title").map(str::to_string))
        .unwrap_or_default();

    let file = fs::File::open(&input)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", input.display())))?;
    let table = Table::read(file).map_err(|e| Failure::Usage(e.to_string()))?;
    let xs = table
        .column(&x)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let mut series = Vec::new();
    for name in y.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let ys = table
            .column(name)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        series.push(Series {
            name: name.to_string(),
            points: xs
                .iter()
                .zip(&ys)
                .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
                .collect(),
        });
    }
    if series.is_empty() {
        return Err(Failure::Usage("--y names no columns".into()));
    }
    emit(output.as_deref(), &svg::render(&title, &x, &series))
}

//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on I/O, usage or file-format errors, 2 when
//! the inputs are well-formed but fail a domain check (degenerate velocity,
//! violated hypotheses, no recovery).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::boost::{boost_x, is_isometry, BoostParams};
use crate::error::Error;
use crate::fit::{recover_lorentz, FitConfig};
use crate::generate::{generate, GenParams, Kind};
use crate::io::{sidecar_path, FitReportFile, InputEcho, SampleFile, REPORT_FORMAT, TOOL_VERSION};
use crate::minkowski::{CausalClass, Event, Metric, DEFAULT_NULL_TOL};
use crate::radar::{light_clock, RadarScenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "alexandrov", version, about = "Light-cone geometry, Lorentz map recovery and radar clocks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded synthetic sample file (plus a ground-truth sidecar).
    Generate(GenerateArgs),
    /// Check a sample file against the cone-preservation hypotheses and recover the map.
    Verify(VerifyArgs),
    /// Print the x-axis boost matrix, one row per line.
    Boost(BoostArgs),
    /// Simulate a light-clock round trip and print the timeline as CSV.
    Radar(RadarArgs),
    /// Causal class and squared interval of the separation between two events.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Lorentz)]
    kind: Kind,
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Translation as comma-separated coordinates; drawn from the seed if absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    shift: Option<Vec<f64>>,
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Image noise standard deviation (noisy-lorentz only).
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Relative half-width of the null band.
    #[arg(long, default_value_t = DEFAULT_NULL_TOL)]
    tol: f64,
    /// Report path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoostArgs {
    #[arg(long, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Debug, Args)]
struct RadarArgs {
    #[arg(long, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    delta_xbar: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    r: Vec<f64>,
    /// Second event; the origin if absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    s: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NULL_TOL)]
    tol: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Boost(a) => cmd_boost(a, stdout),
        Command::Radar(a) => cmd_radar(a, stdout),
        Command::Classify(a) => cmd_classify(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }

    fn domain(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DOMAIN, message: e.to_string() }
    }

    fn format(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Shortest round-trip decimal; never prints `-0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn write_output(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> CmdResult {
    let params = GenParams {
        kind: a.kind,
        n: a.n,
        c: a.c,
        v: a.v,
        alpha: a.alpha,
        shift: a.shift,
        count: a.count,
        noise: a.eps,
        seed: a.seed,
    };
    let g = generate(&params).map_err(Failure::domain)?;
    let file = SampleFile::from_sample_set(&g.samples, Some(a.kind.name().to_string()), Some(a.seed), g.null_pairs);
    fs::write(&a.out, file.to_json()).map_err(|e| Failure::io(&a.out, e))?;
    let sidecar = sidecar_path(&a.out);
    fs::write(&sidecar, g.truth.to_json()).map_err(|e| Failure::io(&sidecar, e))?;
    writeln!(stdout, "wrote {} {} samples to {}", g.samples.len(), a.kind.name(), a.out.display())?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(&a.input).map_err(|e| Failure::io(&a.input, e))?;
    let file = SampleFile::parse(&text).map_err(|e| Failure::io(&a.input, e))?;
    let samples = file.to_sample_set().map_err(|e| Failure::io(&a.input, e))?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Failure::format(format!("tolerance {} must be non-negative", a.tol)));
    }
    let config = FitConfig { null_tol: a.tol, ..FitConfig::default() };
    let report = recover_lorentz(&samples, &config).map_err(|e| match e {
        Error::Input(_) | Error::DimensionMismatch { .. } => Failure::io(&a.input, e),
        other => Failure::domain(other),
    })?;
    let violations = report.violations(&config);
    let ok = report.recovered.is_some() && violations == 0;
    let verdict = match (&report.failure, ok) {
        (_, true) => "affine Lorentz map recovered".to_string(),
        (Some(why), false) if violations > 0 && !why.contains("violation") => {
            format!("{violations} hypothesis violation(s); {why}")
        }
        (Some(why), false) => why.clone(),
        (None, false) => format!("{violations} hypothesis violation(s)"),
    };
    let out = FitReportFile {
        format: REPORT_FORMAT.to_string(),
        tool: TOOL_VERSION.to_string(),
        input: InputEcho {
            path: a.input.display().to_string(),
            metric: file.metric,
            samples: samples.len(),
            kind: file.kind.clone(),
            seed: file.seed,
        },
        config,
        violations,
        verdict,
        report,
    };
    write_output(a.out.as_deref(), &out.to_json(), stdout)?;
    Ok(if ok { EXIT_OK } else { EXIT_DOMAIN })
}

fn cmd_boost(a: BoostArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = BoostParams::new(a.v, a.c).map_err(Failure::domain)?;
    let l = boost_x(p).l().clone();
    debug_assert!(is_isometry(&l, &Metric::new(4, a.c).expect("validated"), 1e-9));
    for row in l.row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        writeln!(stdout, "{}", cells.join(" "))?;
    }
    Ok(EXIT_OK)
}

fn cmd_radar(a: RadarArgs, stdout: &mut dyn Write) -> CmdResult {
    let sc = RadarScenario::new(a.v, a.c, a.delta_xbar, a.t0).map_err(Failure::domain)?;
    let timeline = light_clock(&sc);
    let mut csv = String::from("event,t_K,x_K,t_Kprime,x_Kprime\n");
    for e in timeline.events() {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            e.event,
            format_number(e.t_k),
            format_number(e.x_k),
            format_number(e.t_kprime),
            format_number(e.x_kprime)
        ));
    }
    write_output(a.out.as_deref(), &csv, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_classify(a: ClassifyArgs, stdout: &mut dyn Write) -> CmdResult {
    let n = a.n.unwrap_or(a.r.len());
    let metric = Metric::new(n, a.c).map_err(Failure::domain)?;
    let r = Event::from_slice(&a.r).map_err(Failure::format)?;
    let s = match a.s {
        Some(s) => Event::from_slice(&s).map_err(Failure::format)?,
        None => Event::origin(n),
    };
    let class = metric.classify(&r, &s, a.tol).map_err(Failure::format)?;
    let interval = metric.interval(&r, &s).map_err(Failure::format)?;
    let name = match class {
        CausalClass::Lightlike => "lightlike",
        CausalClass::Spacelike => "spacelike",
        CausalClass::Timelike => "timelike",
    };
    writeln!(stdout, "{name} {}", format_number(interval))?;
    Ok(EXIT_OK)
}

/// Reloads a report and checks that any recovered map is still an isometry
/// up to its scale.
pub fn reload_report(text: &str) -> crate::error::Result<FitReportFile> {
    let file = FitReportFile::parse(text)?;
    if let Some(map) = &file.report.recovered {
        let metric = file.input.metric.to_metric()?;
        if !is_isometry(map.l(), &metric, file.config.conformal_tol) {
            return Err(Error::Input("recovered map is not an isometry".into()));
        }
    }
    Ok(file)
}

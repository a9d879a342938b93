//! The `walklab` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical breach (norm drift above 1e−8 or a failed decomposition).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::closed_forms::{
    build_initial, psi_fourier_pi2, psi_grover_pi2, psi_ms_diagonal, psi_ms_uniform, InitialKind, InitialSpec,
};
use crate::coin::{fourier_coin, grover_coin, Coin, CoinLabel, ShiftKind};
use crate::error::{Result, WalkError};
use crate::evolution::{detect_period, evolve_torus, measure, return_probability_series, running_average};
use crate::io::{self, Format};
use crate::momentum::evolve_via_momentum;
use crate::random::{random_state, rng};
use crate::spectra::{constant_root_certificate, spectrum_sweep, SpectrumLine};
use crate::state::{Amplitude4, TorusState};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Allowed drift of the total norm during a CLI run.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "walklab", version, about = "Four-state quantum walks on the torus and the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve an initial state and write the final state or measure.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = OutputKind::State)]
        output: OutputKind,
    },
    /// Eigenvalues over the momentum grid, or the constant-root certificate.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = LineArg::Full)]
        line: LineArg,
        /// Write the constant-root certificate (JSON) instead of the eigenvalues.
        #[arg(long)]
        certificate: bool,
    },
    /// Evaluate a closed-form state, or the evolution it reproduces.
    ClosedForm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
        source: SourceArg,
    },
    /// Run acceptance checks and print one line per criterion.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Return probability at the origin of the plane and its running average.
    ProbeLocalization {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
    /// Smallest period of the walk on the torus.
    Period {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// fourier, grover or custom:<path to coin JSON>
    #[arg(long, default_value = "fourier")]
    coin: String,
    /// ms or ff; custom coins take the shift from their file
    #[arg(long)]
    shift: Option<ShiftKind>,
    /// Lattice side N
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// delta, uniform, diagonal, random or file:<path>
    #[arg(long, default_value = "delta")]
    init: String,
    /// Eight comma-separated reals re1,im1,..,re4,im4
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Seed for --init random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = Engine::Position)]
    engine: Engine,
    /// Momentum grid resolution M
    #[arg(long, default_value_t = 32)]
    grid: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputKind {
    State,
    Measure,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LineArg {
    Full,
    Diagonal,
    Antidiagonal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    ClosedForm,
    Evolution,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Position,
    Momentum,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum Failure {
    Usage(String),
    Numerical(String),
    /// The criterion table and the names of the failed criteria.
    Verify(String, Vec<String>),
}

impl From<WalkError> for Failure {
    fn from(e: WalkError) -> Failure {
        match e {
            WalkError::Eigen(_) | WalkError::BoundaryContact { .. } => Failure::Numerical(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Parses, runs, and writes to the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut notes = Vec::new();
    let result = match std::env::var("WALKLAB_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| dispatch(cli, &mut notes)),
                Err(e) => Err(Failure::Usage(e.to_string())),
            },
            _ => Err(Failure::Usage(format!("WALKLAB_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => dispatch(cli, &mut notes),
    };
    for note in &notes {
        let _ = writeln!(err, "{note}");
    }
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(err, "numerical error: {msg}");
            EXIT_NUMERICAL
        }
        Err(Failure::Verify(table, failed)) => {
            let _ = out.write_all(table.as_bytes());
            let _ = writeln!(err, "failed: {}", failed.join(", "));
            EXIT_VERIFY_FAILED
        }
    }
}

/// Runs the command. The returned text goes to stdout unless `--out` consumed it.
fn dispatch(cli: Cli, notes: &mut Vec<String>) -> Outcome {
    match cli.command {
        Command::Evolve { common, output } => cmd_evolve(&common, output, notes),
        Command::Spectrum {
            common,
            line,
            certificate,
        } => cmd_spectrum(&common, line, certificate),
        Command::ClosedForm { common, source } => cmd_closed_form(&common, source, notes),
        Command::Verify { suite } => cmd_verify(&suite),
        Command::ProbeLocalization { common, horizon } => cmd_probe(&common, horizon, notes),
        Command::Period { common, horizon } => cmd_period(&common, horizon, notes),
    }
}

fn emit(common: &Common, text: String) -> Outcome {
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn load_coin(common: &Common) -> Result<Coin> {
    if let Some(path) = common.coin.strip_prefix("custom:") {
        let coin = Coin::from_json(&std::fs::read_to_string(path)?)?;
        if let Some(shift) = common.shift {
            if shift != coin.shift() {
                return Err(WalkError::InvalidArgument(format!(
                    "--shift {shift} conflicts with the coin file's shift {}",
                    coin.shift()
                )));
            }
        }
        return Ok(coin);
    }
    let shift = common.shift.unwrap_or(ShiftKind::Moving);
    match common.coin.as_str() {
        "fourier" => Ok(fourier_coin(shift)),
        "grover" => Ok(grover_coin(shift)),
        other => Err(WalkError::Parse(format!("unknown coin '{other}'"))),
    }
}

/// Exact-norm α from `--alpha`; defaults to the first basis vector.
fn parse_alpha(text: Option<&str>, notes: &mut Vec<String>) -> Result<Amplitude4> {
    let Some(text) = text else {
        return Ok(Amplitude4::basis(0));
    };
    let values: Vec<f64> = text
        .split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| WalkError::Parse(format!("bad --alpha entry '{f}'"))))
        .collect::<Result<_>>()?;
    let reals: [f64; 8] = values
        .try_into()
        .map_err(|v: Vec<f64>| WalkError::Parse(format!("--alpha needs 8 reals, got {}", v.len())))?;
    let alpha = Amplitude4::from_reals(reals);
    let norm = alpha.norm();
    let drift = (norm - 1.0).abs();
    if !norm.is_finite() || drift > 1e-3 {
        return Err(WalkError::NotNormalized { norm });
    }
    if drift > 1e-9 {
        notes.push(format!("warning: --alpha has norm {norm:.9}; normalizing"));
    }
    Ok(alpha.normalized())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum InitTag {
    Kind(InitialKind),
    Random,
    File,
}

fn init_tag(init: &str) -> Result<InitTag> {
    Ok(match init {
        "delta" => InitTag::Kind(InitialKind::DeltaOrigin),
        "uniform" => InitTag::Kind(InitialKind::Uniform),
        "diagonal" => InitTag::Kind(InitialKind::DiagonalUniform),
        "random" => InitTag::Random,
        s if s.starts_with("file:") => InitTag::File,
        other => return Err(WalkError::Parse(format!("unknown --init '{other}'"))),
    })
}

fn load_initial(common: &Common, alpha: Amplitude4) -> Result<TorusState> {
    match init_tag(&common.init)? {
        InitTag::Kind(kind) => build_initial(&InitialSpec::new(kind, alpha)?, common.size),
        InitTag::Random => random_state(&mut rng(common.seed), common.size),
        InitTag::File => {
            let path = &common.init["file:".len()..];
            io::state_from_str(&std::fs::read_to_string(path)?)
        }
    }
}

fn check_drift(initial: &TorusState, last: &TorusState) -> std::result::Result<(), Failure> {
    let drift = (last.norm_sqr().sqrt() - initial.norm_sqr().sqrt()).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Failure::Numerical(format!("norm drifted by {drift:.3e}")));
    }
    Ok(())
}

fn cmd_evolve(common: &Common, output: OutputKind, notes: &mut Vec<String>) -> Outcome {
    let coin = load_coin(common)?;
    let alpha = parse_alpha(common.alpha.as_deref(), notes)?;
    let initial = load_initial(common, alpha)?;
    let last = match common.engine {
        Engine::Position => evolve_torus(&initial, &coin, common.steps)?,
        Engine::Momentum => evolve_via_momentum(&initial, &coin, common.steps)?,
    };
    check_drift(&initial, &last)?;
    let format = common.format.into();
    let text = match output {
        OutputKind::State => io::state_to_string(&last, format),
        OutputKind::Measure => io::measure_to_string(&measure(&last)?, format),
    };
    emit(common, text)
}

fn cmd_spectrum(common: &Common, line: LineArg, certificate: bool) -> Outcome {
    let coin = load_coin(common)?;
    if certificate {
        let cert = constant_root_certificate(&coin, common.grid)?;
        return emit(common, io::certificate_to_json(&cert));
    }
    let line = match line {
        LineArg::Full => SpectrumLine::Full,
        LineArg::Diagonal => SpectrumLine::Diagonal,
        LineArg::Antidiagonal => SpectrumLine::AntiDiagonal,
    };
    let rows = spectrum_sweep(&coin, common.grid, line)?;
    let text = match Format::from(common.format) {
        Format::Csv => io::spectrum_to_csv(&rows),
        Format::Json => io::spectrum_to_json(&rows),
    };
    emit(common, text)
}

fn cmd_closed_form(common: &Common, source: SourceArg, notes: &mut Vec<String>) -> Outcome {
    let coin = load_coin(common)?;
    let alpha = parse_alpha(common.alpha.as_deref(), notes)?;
    let InitTag::Kind(kind) = init_tag(&common.init)? else {
        return Err(Failure::Usage("closed forms need --init delta, uniform or diagonal".into()));
    };
    let (n, size, shift) = (common.steps, common.size, coin.shift());
    let closed = match (coin.label(), kind) {
        (CoinLabel::Fourier, InitialKind::DeltaOrigin) if size == 2 => psi_fourier_pi2(n, shift, alpha),
        (CoinLabel::Grover, InitialKind::DeltaOrigin) if size == 2 => psi_grover_pi2(n, shift, alpha),
        (CoinLabel::Fourier, InitialKind::Uniform) if shift == ShiftKind::Moving => psi_ms_uniform(n, size, alpha)?,
        (CoinLabel::Fourier, InitialKind::DiagonalUniform) if shift == ShiftKind::Moving => {
            psi_ms_diagonal(n, size, alpha)?
        }
        _ => {
            return Err(Failure::Usage(
                "no closed form for this combination; available: fourier or grover with delta on size 2, \
                 fourier ms with uniform or diagonal"
                    .into(),
            ))
        }
    };
    let state = match source {
        SourceArg::ClosedForm => closed,
        SourceArg::Evolution => {
            let initial = build_initial(&InitialSpec::new(kind, alpha)?, size)?;
            let last = evolve_torus(&initial, &coin, n)?;
            check_drift(&initial, &last)?;
            last
        }
    };
    emit(common, io::state_to_string(&state, common.format.into()))
}

fn cmd_verify(suite: &str) -> Outcome {
    let suite: Suite = suite.parse()?;
    let outcomes = run_suite(suite);
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.to_string());
        text.push('\n');
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.to_string()).collect();
    if failed.is_empty() {
        text.push_str(&format!("all {} criteria passed\n", outcomes.len()));
        Ok(text)
    } else {
        Err(Failure::Verify(text, failed))
    }
}

fn cmd_probe(common: &Common, horizon: usize, notes: &mut Vec<String>) -> Outcome {
    let coin = load_coin(common)?;
    let alpha = parse_alpha(common.alpha.as_deref(), notes)?;
    let series = return_probability_series(&coin, alpha, horizon)?;
    let avg = running_average(&series);
    let text = match Format::from(common.format) {
        Format::Csv => {
            let mut s = String::from("n,p_n,running_avg\n");
            for (n, (p, a)) in series.iter().zip(avg.iter()).enumerate() {
                s.push_str(&format!("{n},{p:.16e},{a:.16e}\n"));
            }
            s
        }
        Format::Json => serde_json::json!({ "p_n": series, "running_avg": avg }).to_string(),
    };
    emit(common, text)
}

fn cmd_period(common: &Common, horizon: usize, notes: &mut Vec<String>) -> Outcome {
    let coin = load_coin(common)?;
    let alpha = parse_alpha(common.alpha.as_deref(), notes)?;
    let initial = load_initial(common, alpha)?;
    let report = detect_period(&initial, &coin, horizon)?;
    let text = match Format::from(common.format) {
        Format::Csv => format!(
            "period,horizon,max_residual\n{},{},{:.16e}\n",
            report.period.map_or(String::new(), |p| p.to_string()),
            report.horizon,
            report.max_residual
        ),
        Format::Json => serde_json::to_string(&report).expect("report serialises"),
    };
    emit(common, text)
}

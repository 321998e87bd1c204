use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asgeirsson_cli::{curve_samples, run, CliError, ExperimentConfig, ExperimentKind, Format};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "verify", version, about = "Run a mean-value or geometry experiment from a TOML config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean-value check over a conjugate pair of circles or hyperbolae.
    Asgeirsson(Args),
    /// Finite-difference residual of the ultra-hyperbolic equation.
    UheResidual(Args),
    /// Closed-form X-ray transforms against adaptive line quadrature.
    XrayCompare(Args),
    /// Pseudo-circle lines against their ruled quadrics.
    RuledSurface(Args),
    /// Conformal map sending a skew triple to (0, ∞, e₁).
    MapTriple(Args),
    /// Line chart to flat coordinates and back.
    ChartRoundtrip(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output.format` in the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides `output.path`; the report goes to stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes curve samples as CSV (mean-value experiments only).
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

impl Command {
    fn split(&self) -> (&Args, &'static [ExperimentKind]) {
        use ExperimentKind as K;
        match self {
            Self::Asgeirsson(a) => (a, &[K::AsgeirssonCircle, K::AsgeirssonHyperbola]),
            Self::UheResidual(a) => (a, &[K::UheResidual]),
            Self::XrayCompare(a) => (a, &[K::XrayCompare]),
            Self::RuledSurface(a) => (a, &[K::RuledSurface]),
            Self::MapTriple(a) => (a, &[K::MapTriple]),
            Self::ChartRoundtrip(a) => (a, &[K::ChartRoundtrip]),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Asgeirsson(_) => "asgeirsson",
            Self::UheResidual(_) => "uhe-residual",
            Self::XrayCompare(_) => "xray-compare",
            Self::RuledSurface(_) => "ruled-surface",
            Self::MapTriple(_) => "map-triple",
            Self::ChartRoundtrip(_) => "chart-roundtrip",
        }
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn execute(command: &Command) -> Result<bool, CliError> {
    let (args, kinds) = command.split();
    let config = ExperimentConfig::load(&args.config)?;
    if !kinds.contains(&config.kind) {
        return Err(CliError::WrongSubcommand { expected: command.name(), found: config.kind.name() });
    }
    let samples = match &args.dump_samples {
        Some(path) => match curve_samples(&config) {
            Some(bytes) => Some((path, bytes)),
            None => {
                return Err(CliError::Invalid {
                    field: "--dump-samples".into(),
                    message: "only mean-value experiments have curve samples".into(),
                })
            }
        },
        None => None,
    };
    let report = run(&config);
    let format = args.format.or(config.output.format).unwrap_or_default();
    let bytes = report.emit(format);
    match args.out.as_ref().or(config.output.path.as_ref()) {
        Some(path) => write(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io { path: PathBuf::from("<stdout>"), source: e })?,
    }
    if let Some((path, bytes)) = samples {
        write(path, &bytes)?;
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

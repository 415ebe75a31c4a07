mod angle;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use mbqc_core::algorithms::{catalog, catalog_entry, cnot_oracle, cphase_oracle, rotation_oracle, Expected};
use mbqc_core::lab::{calibrate_depolarizing, noisy_c4, MEASURED_EXPECTATIONS};
use mbqc_core::runtime::parse_bits;
use mbqc_core::{
    cnot_pattern, cphase_pattern, parse_pattern, rotation_pattern, run_checks, table1_witness, witness_fidelity,
    ControlOp, LogicalInput, MeasurementPattern, PureState, RotationOrdering, RotationSpec, RunMode, UniformNoise,
    WitnessReport,
};

use crate::angle::parse_angle;
use crate::report::{build_report, RunOptions};

#[derive(Parser)]
#[command(name = "mbqc", version, about = "Measurement-based quantum computing on small cluster states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
    Forced,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Input {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pattern file or a built-in pattern by name.
    Run {
        /// Path to a pattern JSON file, or a built-in name (see list-patterns).
        pattern: String,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Outcome bits in step order, for forced mode.
        #[arg(long)]
        forced: Option<String>,
        /// First angle of a built-in rotation, CNOT or CZ pattern.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Second angle of a built-in rotation or CZ pattern.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Logical input of a built-in rotation.
        #[arg(long, value_enum)]
        input: Option<Input>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate the sixteen-stabilizer witness on the four-qubit cluster.
    Witness {
        /// none, depolarizing:P or dephasing:P.
        #[arg(long)]
        noise: Option<UniformNoise>,
        /// Also scan depolarizing strength for the target fidelity.
        #[arg(long)]
        calibrate: bool,
        #[arg(long, default_value_t = 0.880)]
        target: f64,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks.
    Verify {
        #[arg(long)]
        filter: Option<String>,
        /// Pattern file replacing the built-in pattern of the same name.
        #[arg(long = "pattern")]
        patterns: Vec<PathBuf>,
    },
    /// List built-in pattern names.
    ListPatterns,
}

/// Exit status of a finished command.
enum Outcome {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(3),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Execution(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    /// Bad input: unreadable or invalid files and arguments.
    Usage(anyhow::Error),
    /// The input was valid but could not be executed.
    Execution(anyhow::Error),
}

fn usage<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn execution<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Execution)
}

fn dispatch(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Run { pattern, mode, shots, seed, forced, alpha, beta, input, out, format } => {
            let params = Params { alpha, beta, input };
            let (p, oracle) = usage(resolve_pattern(&pattern, &params))?;
            let mode = usage(run_mode(mode, seed, shots, forced.as_deref()))?;
            let shots = matches!(mode, RunMode::Sample(_)).then_some(shots);
            let report = execution(build_report(&p, &RunOptions { mode, shots, oracle }).map_err(Into::into))?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf).expect("in-memory write");
                    String::from_utf8(buf).expect("utf-8 output")
                }
            };
            usage(emit(&text, out.as_deref()))?;
            Ok(Outcome::Ok)
        }
        Command::Witness { noise, calibrate, target, step, out } => {
            let mut text = match noise {
                Some(n) => witness_csv(n).map_err(Failure::Execution)?,
                None => measured_witness_csv().map_err(Failure::Execution)?,
            };
            if calibrate {
                if !(0.0..=1.0).contains(&target) {
                    return Err(Failure::Usage(anyhow::anyhow!("target must lie in [0, 1], got {target}")));
                }
                let cal = usage(calibrate_depolarizing(target, step).context("calibration"))?;
                match cal.p {
                    Some(p) => text.push_str(&format!("calibrated_p,,,{p:.6}\n")),
                    None => text.push_str("calibrated_p,,,none\n"),
                }
            }
            usage(emit(&text, out.as_deref()))?;
            Ok(Outcome::Ok)
        }
        Command::Verify { filter, patterns } => {
            let overrides = usage(patterns.iter().map(|p| load_pattern(p)).collect::<anyhow::Result<Vec<_>>>())?;
            let checks = run_checks(filter.as_deref(), &overrides);
            if checks.is_empty() {
                return Err(Failure::Usage(anyhow::anyhow!("no check matches the filter")));
            }
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {} passed, {} failed", checks.len(), checks.len() - failed, failed);
            Ok(if failed == 0 { Outcome::Ok } else { Outcome::ChecksFailed })
        }
        Command::ListPatterns => {
            for e in catalog() {
                println!("{:<12} {}", e.pattern.name, e.description);
            }
            Ok(Outcome::Ok)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn witness_csv(noise: UniformNoise) -> anyhow::Result<String> {
    let rho = noisy_c4(noise)?;
    Ok(table1_witness(&rho)?.to_csv())
}

/// Witness over the recorded laboratory expectation values.
fn measured_witness_csv() -> anyhow::Result<String> {
    let ideal = table1_witness(&mbqc_core::make_c4())?;
    let expectations = MEASURED_EXPECTATIONS.to_vec();
    let fidelity = witness_fidelity(&expectations)?;
    Ok(WitnessReport { stabilizers: ideal.stabilizers, expectations, fidelity }.to_csv())
}

fn run_mode(mode: Mode, seed: u64, shots: usize, forced: Option<&str>) -> anyhow::Result<RunMode> {
    match mode {
        Mode::Exhaustive => Ok(RunMode::Exhaustive),
        Mode::Sample => {
            if shots == 0 {
                bail!("--shots must be at least 1");
            }
            Ok(RunMode::Sample(seed))
        }
        Mode::Forced => {
            let bits = forced.context("--mode forced requires --forced BITS")?;
            Ok(RunMode::Forced(parse_bits(bits)?))
        }
    }
}

fn load_pattern(path: &Path) -> anyhow::Result<MeasurementPattern> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pattern(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Params {
    alpha: Option<f64>,
    beta: Option<f64>,
    input: Option<Input>,
}

impl Params {
    fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.beta.is_none() && self.input.is_none()
    }
}

/// Loads `arg` as a file if it exists, otherwise as a built-in name.
/// Returns the pattern and, for built-ins with a state oracle, the oracle.
fn resolve_pattern(arg: &str, params: &Params) -> anyhow::Result<(MeasurementPattern, Option<PureState>)> {
    let path = Path::new(arg);
    if path.exists() || arg.ends_with(".json") {
        if !params.is_empty() {
            bail!("--alpha, --beta and --input apply only to built-in patterns");
        }
        return Ok((load_pattern(path)?, None));
    }
    let entry = catalog_entry(arg).with_context(|| format!("no pattern file or built-in named {arg:?}"))?;
    if params.is_empty() {
        let oracle = match entry.expected {
            Expected::State(s) => Some(s),
            Expected::Bits(_) => None,
        };
        return Ok((entry.pattern, oracle));
    }
    let ordering = match arg {
        "rotation_a" => Some(RotationOrdering::A),
        "rotation_b" => Some(RotationOrdering::B),
        _ => None,
    };
    if let Some(ordering) = ordering {
        let input = match params.input {
            Some(Input::Minus) => LogicalInput::Minus,
            _ => LogicalInput::Plus,
        };
        let (a0, b0) = mbqc_core::algorithms::CATALOG_ROTATION;
        let spec = RotationSpec { alpha: params.alpha.unwrap_or(a0), beta: params.beta.unwrap_or(b0), input, ordering };
        return Ok((rotation_pattern(&spec), Some(rotation_oracle(&spec))));
    }
    if params.input.is_some() {
        bail!("--input applies only to rotation patterns");
    }
    match arg {
        "cnot_h" | "cnot_id" => {
            if params.beta.is_some() {
                bail!("--beta does not apply to {arg}");
            }
            let (op, a0) = if arg == "cnot_h" {
                (ControlOp::Hadamard, mbqc_core::algorithms::CATALOG_CNOT_H_ALPHA)
            } else {
                (ControlOp::Identity, mbqc_core::algorithms::CATALOG_CNOT_ID_ALPHA)
            };
            let alpha = params.alpha.unwrap_or(a0);
            Ok((cnot_pattern(op, alpha), Some(cnot_oracle(op, alpha))))
        }
        "cphase" => {
            let (a0, b0) = mbqc_core::algorithms::CATALOG_CPHASE;
            let (a, b) = (params.alpha.unwrap_or(a0), params.beta.unwrap_or(b0));
            Ok((cphase_pattern(a, b), Some(cphase_oracle(a, b))))
        }
        _ => bail!("{arg} takes no angle or input parameters"),
    }
}

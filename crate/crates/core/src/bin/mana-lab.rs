use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mana_lab::circuits::{beamsplitter, BeamsplitterSpec};
use mana_lab::figures::{figure, FigureId, FigureOptions};
use mana_lab::measures::{LogBase, MeasureKind, MeasureReport, ReportOptions};
use mana_lab::phasespace::PrimeDim;
use mana_lab::search::{default_grid, max_mana_coherent, DEFAULT_REFINE};
use mana_lab::states::{basis, named_state, noisy_mix, parse_state_json, tensor, DensityState};
use mana_lab::verify::{run, Suite, VerifyOptions};

#[derive(Parser, Debug)]
#[command(
    name = "mana-lab",
    version,
    about = "Mana, mutual mana and magic correlations of odd-prime qudits"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Qudit dimension (odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    dim: u64,
    #[arg(long = "log-base", global = true, default_value = "e", value_parser = parse_base)]
    log_base: LogBase,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate measures on one state.
    Measure(MeasureArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Write the CSV data of a figure.
    Figure(FigureArgs),
    /// Search maximally coherent states for the largest mana.
    Maximize(MaximizeArgs),
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Named state (strange, norrell, t, h, phi_lambda, psi_theta, max_coherent, basis, maxmixed).
    #[arg(
        long,
        conflicts_with = "state_file",
        required_unless_present = "state_file"
    )]
    state: Option<String>,
    /// Comma-separated parameters of the named state.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Vec<f64>,
    /// JSON state document.
    #[arg(long = "state-file")]
    state_file: Option<PathBuf>,
    /// Mix with the maximally mixed state: p|ψ⟩⟨ψ| + (1−p)·1/d.
    #[arg(long)]
    noise: Option<f64>,
    /// Apply CSUM to the state with a |0⟩ ancilla on the second qudit.
    #[arg(long)]
    csum: bool,
    #[arg(long, value_delimiter = ',', default_value = "mana")]
    measures: Vec<String>,
    /// Restarts for nonlocal mana.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig1, fig2, fig3a, fig3b, fig4a, fig4b, fig4c or fig4d.
    id: String,
}

#[derive(Args, Debug)]
struct MaximizeArgs {
    /// Grid points per phase (default depends on the dimension).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_REFINE)]
    refine: usize,
    /// Also write the full search result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

/// Eight decimals, without a sign on values that round to zero.
fn fixed8(v: f64) -> String {
    let v = if v.abs() < 5e-9 { 0.0 } else { v };
    format!("{v:.8}")
}

fn load_state(args: &MeasureArgs, dim: PrimeDim) -> Result<(String, DensityState), Failure> {
    let (id, mut rho) = match (&args.state, &args.state_file) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            (
                path.display().to_string(),
                parse_state_json(&text)?.into_density()?,
            )
        }
        (Some(name), None) if name == "maxmixed" => {
            (name.clone(), DensityState::maximally_mixed(&[dim.get()])?)
        }
        (Some(name), None) => {
            let psi = named_state(name, &args.params)?;
            let rho = match args.noise {
                Some(p) => noisy_mix(&psi, p)?,
                None => DensityState::pure(&psi)?,
            };
            (name.clone(), rho)
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --state or --state-file is required".into(),
            ))
        }
    };
    if args.noise.is_some()
        && (args.state_file.is_some() || args.state.as_deref() == Some("maxmixed"))
    {
        return Err(Failure::Usage(
            "--noise applies to named pure states only".into(),
        ));
    }
    if args.csum {
        if rho.subsystems() != 1 {
            return Err(Failure::Usage("--csum needs a single-qudit input".into()));
        }
        let d = rho.dims()[0];
        let pd = PrimeDim::new(d as u64)?;
        let ancilla = DensityState::pure(&basis(d, 0))?;
        rho = tensor(&rho, &ancilla).evolve(&beamsplitter(&BeamsplitterSpec::csum(pd)))?;
    }
    Ok((id, rho))
}

fn cmd_measure(global: &Global, args: &MeasureArgs) -> Result<(), Failure> {
    let dim = PrimeDim::new(global.dim)?;
    let kinds = args
        .measures
        .iter()
        .map(|m| m.trim().parse::<MeasureKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let (id, rho) = load_state(args, dim)?;
    let opts = ReportOptions {
        base: global.log_base,
        restarts: args.restarts,
        seed: global.seed,
    };
    let report = MeasureReport::compute(&id, &rho, &kinds, opts)?;
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        report
            .values
            .iter()
            .map(|(k, v)| format!("{k} = {}\n", fixed8(*v)))
            .collect()
    };
    emit(global, &text)
}

fn cmd_verify(global: &Global, args: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let opts = VerifyOptions {
        trials: args.trials,
        seed: global.seed,
        tol: global.tol,
    };
    let report = run(suite, &opts)?;
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        format!("{report}\n")
    };
    emit(global, &text)?;
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!(
            "{suite}: failed checks: {}",
            names.join("; ")
        )))
    }
}

fn cmd_figure(global: &Global, args: &FigureArgs) -> Result<(), Failure> {
    let id: FigureId = args.id.parse()?;
    let opts = FigureOptions {
        base: global.log_base,
        zero_tol: global.tol,
    };
    emit(global, &figure(id, &opts)?.render())
}

fn cmd_maximize(global: &Global, args: &MaximizeArgs) -> Result<(), Failure> {
    let dim = PrimeDim::new(global.dim)?;
    let grid = args.grid.unwrap_or_else(|| default_grid(dim));
    let result = max_mana_coherent(dim, grid, args.refine)?;
    let base = global.log_base;
    let bound = 0.5 * (dim.get() as f64).ln();
    let mut text = format!(
        "d = {}, grid = {grid}, refine = {}, evaluations = {}\nbest mana = {:.10} (bound (1/2) log d = {:.10}, log base {base})\n",
        dim.get(),
        args.refine,
        result.evaluations,
        base.convert(result.best_value),
        base.convert(bound),
    );
    text.push_str(&format!(
        "argmax ({} phase vectors):\n",
        result.argmax.len()
    ));
    for opt in &result.argmax {
        let thetas: Vec<String> = opt
            .theta
            .thetas()
            .iter()
            .map(|t| format!("{t:.8}"))
            .collect();
        text.push_str(&format!(
            "  ({})  mana = {:.10}\n",
            thetas.join(", "),
            base.convert(opt.value)
        ));
    }
    if bound - result.best_value > global.tol {
        text.push_str(&format!(
            "note: bound not certified attained (gap {:.3e})\n",
            base.convert(bound - result.best_value)
        ));
    }
    if let Some(path) = &args.json {
        let json = serde_json::to_string_pretty(&result)? + "\n";
        fs::write(path, json)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(global, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Measure(a) => cmd_measure(&cli.global, a),
        Command::Verify(a) => cmd_verify(&cli.global, a),
        Command::Figure(a) => cmd_figure(&cli.global, a),
        Command::Maximize(a) => cmd_maximize(&cli.global, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

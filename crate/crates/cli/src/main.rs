use std::path::PathBuf;
use std::process::ExitCode;

use carlo_cli::config::Mode;
use carlo_cli::{load_config, output_dir, presets, run_experiment, CliError, RunOptions, Source};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "carlo", version, about = "Atoms in a bidirectionally pumped ring cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the particle and field equations.
    Nbody(RunArgs),
    /// Integrate the kinetic equation on a phase-space grid.
    Vlasov(RunArgs),
    /// Marginal-stability curves of the homogeneous gas.
    StabilityBoundary(RunArgs),
    /// Regime map over a grid of pump settings.
    PhaseDiagram(RunArgs),
    /// Compare the analytic regime with a simulated run.
    Classify(RunArgs),
    /// Decelerate a moving gas with balanced pumps.
    SlowBeam(RunArgs),
    /// Simulate and check the travelling-wave relation.
    ValidateWave(RunArgs),
    /// Run whichever mode the configuration names.
    Run(RunArgs),
    /// Validate a configuration and print its canonical form.
    Check(SourceArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct SourceArgs {
    /// Configuration file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration (see `carlo presets`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Run directory; defaults to `<out-root>/<config name>`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Parent of default run directories.
    #[arg(long, env = "CARLO_OUT", value_name = "DIR", default_value = "carlo-out")]
    out_root: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
}

impl SourceArgs {
    fn source(&self) -> Source {
        match (&self.config, &self.preset) {
            (Some(p), _) => Source::File(p.clone()),
            (None, Some(n)) => Source::Preset(n.clone()),
            (None, None) => unreachable!("clap requires one of --config and --preset"),
        }
    }
}

fn check(args: &SourceArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.source(), None)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    print!("{}", cfg.to_toml());
    Ok(())
}

fn run(args: &RunArgs, mode: Option<Mode>) -> Result<(), CliError> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::validation("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::validation(format!("cannot configure thread pool: {e}")))?;
    }
    let source = args.source.source();
    let mut cfg = load_config(&source, mode)?;
    if let Some(seed) = args.source.seed {
        cfg.seed = seed;
    }
    let dir = output_dir(args.out.as_deref(), &args.out_root, &source.name());
    let manifest = run_experiment(&cfg, &dir, &RunOptions { svg: args.svg })?;
    println!("{} run written to {}", manifest.mode, dir.display());
    if let Some(class) = manifest.results.get("classification").filter(|c| !c.is_null()) {
        println!("regime: {}", class["regime"].as_str().unwrap_or("?"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Nbody(a) => run(a, Some(Mode::Nbody)),
        Command::Vlasov(a) => run(a, Some(Mode::Vlasov)),
        Command::StabilityBoundary(a) => run(a, Some(Mode::StabilityBoundary)),
        Command::PhaseDiagram(a) => run(a, Some(Mode::PhaseDiagram)),
        Command::Classify(a) => run(a, Some(Mode::Classify)),
        Command::SlowBeam(a) => run(a, Some(Mode::SlowBeam)),
        Command::ValidateWave(a) => run(a, Some(Mode::ValidateWave)),
        Command::Run(a) => run(a, None),
        Command::Check(a) => check(a),
        Command::Presets => {
            for p in presets::PRESETS {
                println!("{:<14} {}", p.name, p.summary);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

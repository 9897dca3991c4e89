use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hbt_speckle::experiment::{self, ExperimentConfig, Preset};
use hbt_speckle::Error;

#[derive(Parser)]
#[command(
    name = "hbt-speckle",
    version,
    about = "Two-particle speckle statistics on disordered chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Four channels at U = 0 and U = J, N = 40, one realization.
    Fig2(PresetArgs),
    /// Windowed contrast against U, N = 26, 100 realizations.
    Fig3(PresetArgs),
    /// Bound-state transitions at U = 200J and 500J with compound Rician fits.
    Fig4(PresetArgs),
    /// Check a config file (or a preset) without running it.
    Validate {
        #[arg(required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_parser = ["fig2", "fig3", "fig4"], conflicts_with = "config")]
        preset: Option<String>,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Base disorder seed (overrides `seeds.base`).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Divide every time window's extent by this factor.
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Args)]
struct PresetArgs {
    #[command(flatten)]
    flags: RunFlags,
    /// Print the preset as a config file and exit.
    #[arg(long)]
    print_config: bool,
}

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Io(_) => ExitCode::from(EXIT_IO),
        _ => ExitCode::from(EXIT_INVALID),
    }
}

fn apply(mut config: ExperimentConfig, flags: &RunFlags) -> ExperimentConfig {
    if let Some(seed) = flags.seed {
        config.seeds.base = seed;
    }
    if let Some(dir) = &flags.out_dir {
        config.out_dir = dir.clone();
    }
    if let Some(scale) = flags.scale {
        config.scale = scale;
    }
    config
}

fn run(config: ExperimentConfig, flags: &RunFlags) -> Result<(), Error> {
    if let Some(n) = flags.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let config = apply(config, flags);
    for d in config.check()? {
        eprintln!("{d}");
    }
    log::info!("running '{}' into {}", config.name, config.out_dir.display());
    let output = experiment::execute(&config)?;
    let paths = experiment::write_artifacts(&output, &config.out_dir)?;
    for case in &output.cases {
        let c = &case.ensemble.contrast;
        println!(
            "{:<48} C = {:.4} ± {:.4} ({} realizations)",
            case.case, c.mean, c.std_error, c.count
        );
    }
    println!("wrote {}", paths.dir.display());
    Ok(())
}

fn validate(config: Option<PathBuf>, preset: Option<String>) -> Result<bool, Error> {
    let config = match (config, preset.as_deref()) {
        (Some(path), _) => ExperimentConfig::load(&path)?,
        (None, Some("fig2")) => Preset::Fig2.config(),
        (None, Some("fig3")) => Preset::Fig3.config(),
        (None, Some("fig4")) => Preset::Fig4.config(),
        _ => unreachable!("clap enforces a config or preset"),
    };
    let diags = config.validate();
    for d in &diags {
        println!("{d}");
    }
    if diags.is_empty() {
        println!("ok");
    }
    Ok(!diags.iter().any(|d| d.is_error()))
}

fn preset(p: Preset, args: &PresetArgs) -> Result<(), Error> {
    if args.print_config {
        print!("{}", apply(p.config(), &args.flags).to_toml_string());
        return Ok(());
    }
    run(p.config(), &args.flags)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, flags } => ExperimentConfig::load(&config).and_then(|c| run(c, &flags)),
        Command::Fig2(args) => preset(Preset::Fig2, &args),
        Command::Fig3(args) => preset(Preset::Fig3, &args),
        Command::Fig4(args) => preset(Preset::Fig4, &args),
        Command::Validate { config, preset } => match validate(config, preset) {
            Ok(true) => return ExitCode::SUCCESS,
            Ok(false) => return ExitCode::from(EXIT_INVALID),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

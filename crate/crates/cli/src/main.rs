use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phnet_cli::config::{load_config, MethodParam};
use phnet_cli::run::{gram_table, run_experiment, spectrum_table, write_outputs, RunOptions};
use phnet_cli::{CliError, FIG2A_JSON, FIG2B_JSON};

#[derive(Parser)]
#[command(
    name = "phnet",
    version,
    about = "Simulator for networks of isomorphic pseudo-Hermitian clusters with Hermitian couplings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the dispersion / mode-block spectrum table (spectrum.csv)
    Spectrum {
        /// Experiment config (JSON); only the model section is used
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Emit the mode Gram (commutator) matrices (gram.csv)
    Gram {
        /// Experiment config (JSON); only the model section is used
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a configured evolution (norms.csv, profiles.csv, optional SVG)
    Evolve {
        /// Experiment config (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Override the evolution method
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Override the RK4 step bound
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Run a built-in figure-reproduction preset
    Demo {
        /// Which preset to run
        #[arg(value_enum)]
        preset: PresetArg,
        /// Output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Override the evolution method
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Override the RK4 step bound
        #[arg(long)]
        dt: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Rk4,
    Expm,
    Spectral,
}

impl From<MethodArg> for MethodParam {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rk4 => MethodParam::Rk4,
            MethodArg::Expm => MethodParam::Expm,
            MethodArg::Spectral => MethodParam::Spectral,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Fig2a,
    Fig2b,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum { config, out_dir } => {
            let cfg = load_config(&fs::read_to_string(config)?)?;
            let table = spectrum_table(&cfg)?;
            fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("spectrum.csv");
            table.write_csv(&path)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Gram { config, out_dir } => {
            let cfg = load_config(&fs::read_to_string(config)?)?;
            let table = gram_table(&cfg)?;
            fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("gram.csv");
            table.write_csv(&path)?;
            if let Some(l) = cfg.model.ladder() {
                let theta = l.theta().map_err(CliError::Value)?;
                eprintln!(
                    "theta = {theta}, sec(theta) = {}, tan(theta) = {}",
                    1.0 / theta.cos(),
                    theta.tan()
                );
            }
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Evolve { config, out_dir, method, dt } => {
            let cfg = load_config(&fs::read_to_string(&config)?)?;
            let title = config
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "evolve".to_string());
            run_and_write(&cfg, &out_dir, method, dt, &title)
        }
        Command::Demo { preset, out_dir, method, dt } => {
            let (text, title) = match preset {
                PresetArg::Fig2a => (FIG2A_JSON, "fig2a"),
                PresetArg::Fig2b => (FIG2B_JSON, "fig2b"),
            };
            let cfg = load_config(text)?;
            run_and_write(&cfg, &out_dir, method, dt, title)
        }
    }
}

fn run_and_write(
    cfg: &phnet_cli::config::ExperimentConfig,
    out_dir: &PathBuf,
    method: Option<MethodArg>,
    dt: Option<f64>,
    title: &str,
) -> Result<(), CliError> {
    let opts = RunOptions { method: method.map(Into::into), dt };
    let output = run_experiment(cfg, &opts)?;
    if let Some((theta, delta, period)) = output.ladder_summary {
        eprintln!("theta = {theta}, delta = {delta}, period = {period}");
    }
    for path in write_outputs(cfg, out_dir, &output, title)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

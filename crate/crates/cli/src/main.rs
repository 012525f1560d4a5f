use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use meson_wigner::inequalities::{ProbabilityConvention, WignerEvaluator};
use meson_wigner::oracle::verify_random_models;
use meson_wigner::scan::{default_t_max, run_rn_curve, run_static_report, run_werner_heatmap};
use meson_wigner::species::{Parameterization, SpeciesEntry, SpeciesRegistry};
use meson_wigner::{Error, EvolutionKernel};

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

/// Tolerance for the classical soundness check.
const CLASSICAL_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "meson-wigner",
    version,
    about = "Wigner inequality scans for neutral meson pairs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// CP parameterization; defaults to the species' active one.
    #[arg(long, global = true, value_enum)]
    param: Option<Param>,
    /// Species TOML file replacing the built-in table.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Condition probabilities on the mesons not having decayed.
    #[arg(long, global = true)]
    normalized: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Eps,
    Zeta,
}

impl From<Param> for Parameterization {
    fn from(p: Param) -> Self {
        match p {
            Param::Eps => Parameterization::Epsilon,
            Param::Zeta => Parameterization::Zeta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the species table.
    Species {
        #[command(subcommand)]
        action: SpeciesAction,
    },
    /// Time-independent inequalities and the Werner purity threshold.
    Static {
        #[arg(long)]
        species: String,
        /// Werner purity; the pure singlet when omitted.
        #[arg(long)]
        x: Option<f64>,
    },
    /// R_N over c t at fixed purity.
    Rn {
        #[arg(long)]
        species: String,
        #[arg(long)]
        n: usize,
        /// Upper end of the c t range in mm.
        #[arg(long)]
        tmax: Option<f64>,
        /// Number of samples including both ends.
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        /// Werner purity; the pure singlet when omitted.
        #[arg(long)]
        x: Option<f64>,
    },
    /// R~_N over (c t, x) with the R~ = 1 contour.
    Heatmap {
        #[arg(long)]
        species: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 401)]
        tsteps: usize,
        #[arg(long, default_value_t = 101)]
        xsteps: usize,
    },
    /// Check random classical models against the inequality.
    ClassicalVerify {
        #[arg(long, default_value_t = 10_000)]
        models: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum SpeciesAction {
    List,
    Show { name: String },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_)) => EXIT_CONFIG,
        Some(_) => EXIT_USAGE,
        None => EXIT_OTHER,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn registry(g: &Global) -> Result<SpeciesRegistry, Error> {
    match &g.config {
        Some(path) => Ok(SpeciesRegistry::load(path)?),
        None => Ok(SpeciesRegistry::builtin()),
    }
}

fn t_max(species: &str, tmax: Option<f64>) -> Result<f64, Error> {
    tmax.or_else(|| default_t_max(species)).ok_or_else(|| {
        Error::InvalidGrid(format!("no default c t range for `{species}`; pass --tmax"))
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    let reg = registry(g)?;
    let convention = if g.normalized {
        ProbabilityConvention::SurvivalNormalized
    } else {
        ProbabilityConvention::Unnormalized
    };
    let kernel_for = |name: &str| -> Result<EvolutionKernel, Error> {
        let species = reg.get(name)?;
        let param = g.param.map_or(species.active_param(), Into::into);
        EvolutionKernel::new(species, param)
    };

    let text = match &cli.command {
        Command::Species { action } => species_output(&reg, action, g.format)?,
        Command::Static { species, x } => {
            let report = run_static_report(reg.get(species)?, g.param.map(Into::into), *x)?;
            match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            }
        }
        Command::Rn {
            species,
            n,
            tmax,
            steps,
            x,
        } => {
            let kernel = kernel_for(species)?;
            let eval = WignerEvaluator::new(&kernel).with_convention(convention);
            let scan = run_rn_curve(&eval, *n, t_max(species, *tmax)?, *steps, *x)?;
            match g.format {
                Format::Csv => scan.to_csv(),
                Format::Json => scan.to_json(),
            }
        }
        Command::Heatmap {
            species,
            n,
            tmax,
            tsteps,
            xsteps,
        } => {
            let kernel = kernel_for(species)?;
            let eval = WignerEvaluator::new(&kernel).with_convention(convention);
            let scan = run_werner_heatmap(&eval, *n, t_max(species, *tmax)?, *tsteps, *xsteps)?;
            match g.format {
                Format::Csv => scan.to_csv(),
                Format::Json => scan.to_json(),
            }
        }
        Command::ClassicalVerify { models, seed } => {
            let summary = verify_random_models(*models, *seed, CLASSICAL_TOL);
            if !summary.passed {
                log::warn!(
                    "{} classical models violate the inequality",
                    summary.violations
                );
            }
            match g.format {
                Format::Csv => summary.to_csv(),
                Format::Json => summary.to_json(),
            }
        }
    };

    match &g.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout")?,
    }
    Ok(())
}

fn species_output(
    reg: &SpeciesRegistry,
    action: &SpeciesAction,
    format: Format,
) -> anyhow::Result<String> {
    let entries: Vec<SpeciesEntry> = match action {
        SpeciesAction::List => reg.iter().map(SpeciesEntry::from).collect(),
        SpeciesAction::Show { name } => vec![SpeciesEntry::from(reg.get(name)?)],
    };
    Ok(match format {
        Format::Json => {
            let mut s = match action {
                SpeciesAction::List => serde_json::to_string_pretty(&entries)?,
                SpeciesAction::Show { .. } => serde_json::to_string_pretty(&entries[0])?,
            };
            s.push('\n');
            s
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let mut s = String::from(
                "name,delta_m_inv_mm,gamma_L_inv_mm,gamma_H_inv_mm,zeta_deg,epsilon_re,epsilon_im,active_param\n",
            );
            for e in &entries {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    e.name,
                    e.delta_m_inv_mm,
                    e.gamma_l_inv_mm,
                    e.gamma_h_inv_mm,
                    opt(e.zeta_deg),
                    opt(e.epsilon_re),
                    opt(e.epsilon_im),
                    e.active_param
                );
            }
            s
        }
    })
}

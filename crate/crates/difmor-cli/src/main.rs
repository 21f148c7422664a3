use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use difmor_cli::commands::{self, CmdResult, ComplexKind, Failure};

/// Exact cohomology and deformation checks for morphisms of
/// differential algebras of fixed weight.
#[derive(Parser)]
#[command(name = "difmor", version)]
struct Cli {
    /// Worker threads for degree-parallel builds.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every object in a problem file against its defining laws.
    Validate { file: PathBuf },
    /// Betti numbers of one complex built from a problem file.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum)]
        complex: KindArg,
        #[arg(long)]
        max_degree: usize,
        /// Algebra to use for alg/do/da (defaults to the only one).
        #[arg(long)]
        algebra: Option<String>,
        /// Morphism whose self-coefficients to use for mor/cm.
        #[arg(long)]
        morphism: Option<String>,
        /// Named coefficient bimodule for mor/cm.
        #[arg(long)]
        bimodule: Option<String>,
    },
    /// Compare morphism cohomology against the mapping-ring side.
    Cct {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(long)]
        bimodule: Option<String>,
    },
    /// Operations on truncated deformations.
    #[command(subcommand)]
    Deform(DeformCommand),
    /// Random property sweep over generated fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DeformCommand {
    /// Check the per-order equations of one named deformation.
    Validate {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Extract the order-1 part and verify it is a degree-2 cocycle.
    Infinitesimal {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Search for a gauge carrying one deformation to another.
    Equivalent {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        order: usize,
    },
    /// Try to gauge a deformation back to the trivial one.
    Trivialize {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Alg,
    Do,
    Da,
    Mor,
    Cm,
}

impl From<KindArg> for ComplexKind {
    fn from(k: KindArg) -> ComplexKind {
        match k {
            KindArg::Alg => ComplexKind::Alg,
            KindArg::Do => ComplexKind::Do,
            KindArg::Da => ComplexKind::Da,
            KindArg::Mor => ComplexKind::Mor,
            KindArg::Cm => ComplexKind::Cm,
        }
    }
}

fn read(file: &PathBuf) -> Result<(String, String), Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", file.display())))?;
    Ok((text, file.display().to_string()))
}

fn dispatch(cli: Cli) -> CmdResult {
    let threads = cli.threads;
    match cli.command {
        Command::Validate { file } => {
            let (text, label) = read(&file)?;
            commands::cmd_validate(&text, &label)
        }
        Command::Cohomology {
            file,
            complex,
            max_degree,
            algebra,
            morphism,
            bimodule,
        } => {
            let (text, label) = read(&file)?;
            commands::cmd_cohomology(
                &text,
                &label,
                complex.into(),
                max_degree,
                algebra.as_deref(),
                morphism.as_deref(),
                bimodule.as_deref(),
                threads,
            )
        }
        Command::Cct {
            file,
            max_degree,
            morphism,
            bimodule,
        } => {
            let (text, label) = read(&file)?;
            commands::cmd_cct(
                &text,
                &label,
                max_degree,
                morphism.as_deref(),
                bimodule.as_deref(),
                threads,
            )
        }
        Command::Deform(cmd) => match cmd {
            DeformCommand::Validate { file, name } => {
                let (text, label) = read(&file)?;
                commands::cmd_deform_validate(&text, &label, &name)
            }
            DeformCommand::Infinitesimal { file, name } => {
                let (text, label) = read(&file)?;
                commands::cmd_deform_infinitesimal(&text, &label, &name)
            }
            DeformCommand::Equivalent { file, a, b, order } => {
                let (text, label) = read(&file)?;
                commands::cmd_deform_equivalent(&text, &label, &a, &b, order)
            }
            DeformCommand::Trivialize { file, name, order } => {
                let (text, label) = read(&file)?;
                commands::cmd_deform_trivialize(&text, &label, &name, order)
            }
        },
        Command::Selftest { seed } => commands::cmd_selftest(seed, threads),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli)));
    match outcome {
        Ok(Ok(report)) => {
            println!("{}", report.to_json());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Err(failure)) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            ExitCode::from(3)
        }
    }
}

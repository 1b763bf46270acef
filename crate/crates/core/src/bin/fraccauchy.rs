use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fraccauchy::app::{execute, replay, write_outcome, Command, EigenArgs, Invocation, MANIFEST_NAME};
use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::config::RunConfig;
use fraccauchy::spatial::OperatorMode;
use fraccauchy::special::{mittag_leffler, stable_density};
use fraccauchy::{Error, Result};

#[derive(Parser)]
#[command(name = "fraccauchy", version, about = "Time-fractional Cauchy problems: spectral and Monte Carlo solvers, principle checks, inverse source")]
struct Cli {
    /// Worker threads for parallel stages (results do not depend on it).
    #[arg(long, global = true, env = "FRACCAUCHY_WORKERS")]
    workers: Option<usize>,
    /// Artifact directory; overrides the config's `outputs.dir`.
    #[arg(long, global = true, env = "FRACCAUCHY_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: solve, simulate, check and invert as configured.
    Run { config: PathBuf },
    /// Spectral solve only.
    Solve { config: PathBuf },
    /// Monte Carlo estimates at the configured probes.
    Simulate { config: PathBuf },
    /// Principle checks; exit 1 when any fails.
    Verify { config: PathBuf },
    /// Recover the source time profile from a point observation.
    Invert { config: PathBuf },
    /// Special-function evaluation.
    Special {
        #[command(subcommand)]
        cmd: SpecialCmd,
    },
    /// Leading eigenvalues of the discrete operator.
    Eigensystem(EigenCli),
    /// Re-run a manifest and compare every artifact digest.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand)]
enum SpecialCmd {
    Eval(EvalArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EvalArgs {
    /// Mittag-Leffler E_{a,b}(z).
    #[arg(long, num_args = 3, value_names = ["ALPHA", "BETA", "Z"], allow_negative_numbers = true)]
    ml: Option<Vec<f64>>,
    /// One-sided stable density g_a(x).
    #[arg(long, num_args = 2, value_names = ["ALPHA", "X"])]
    stable_density: Option<Vec<f64>>,
    /// Gamma function.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct EigenCli {
    #[arg(long)]
    modes: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = 200)]
    n_grid: usize,
    /// Fractional index; the classical Laplacian when omitted.
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long, value_parser = ["restricted_jump_kernel", "spectral_of_dirichlet_laplacian"], default_value = "restricted_jump_kernel")]
    operator: String,
}

fn out_dir_for(cli_dir: &Option<PathBuf>, config: Option<&str>) -> PathBuf {
    if let Some(d) = cli_dir {
        return d.clone();
    }
    config
        .and_then(|t| RunConfig::parse(t).ok())
        .and_then(|c| c.outputs.dir)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fraccauchy_out"))
}

fn emit(inv: Invocation, out_dir: &Option<PathBuf>) -> Result<i32> {
    let out = execute(&inv)?;
    let dir = out_dir_for(out_dir, inv.config.as_deref());
    write_outcome(&dir, &inv, &out)?;
    for line in &out.summary {
        println!("{line}");
    }
    println!("artifacts: {}", dir.display());
    Ok(out.exit_code)
}

fn config_command(command: Command, path: &Path, out_dir: &Option<PathBuf>) -> Result<i32> {
    emit(Invocation::from_config_file(command, path)?, out_dir)
}

fn special(args: &EvalArgs) -> Result<i32> {
    let v = if let Some(m) = &args.ml {
        mittag_leffler(m[0], m[1], m[2])?
    } else if let Some(s) = &args.stable_density {
        stable_density(s[0], s[1])?
    } else {
        fraccauchy::special::gamma::gamma(args.gamma.expect("clap enforces one argument"))
    };
    println!("{v:.7}");
    Ok(0)
}

fn eigen(args: &EigenCli, out_dir: &Option<PathBuf>) -> Result<i32> {
    let psi = match args.nu {
        Some(nu) => BernsteinFunction::fractional(nu).map_err(|e| Error::Usage(e.to_string()))?,
        None => BernsteinFunction::classical(),
    };
    let operator = if args.operator == "restricted_jump_kernel" {
        OperatorMode::RestrictedJumpKernel
    } else {
        OperatorMode::SpectralOfDirichletLaplacian
    };
    let inv = Invocation {
        command: Command::Eigensystem(EigenArgs { modes: args.modes, a: args.a, b: args.b, n_grid: args.n_grid, psi, operator }),
        config: None,
        inputs: Default::default(),
    };
    emit(inv, out_dir)
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Error::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    match &cli.cmd {
        Cmd::Run { config } => config_command(Command::Run, config, &cli.out_dir),
        Cmd::Solve { config } => config_command(Command::Solve, config, &cli.out_dir),
        Cmd::Simulate { config } => config_command(Command::Simulate, config, &cli.out_dir),
        Cmd::Verify { config } => config_command(Command::Verify, config, &cli.out_dir),
        Cmd::Invert { config } => config_command(Command::Invert, config, &cli.out_dir),
        Cmd::Special { cmd: SpecialCmd::Eval(a) } => special(a),
        Cmd::Eigensystem(a) => eigen(a, &cli.out_dir),
        Cmd::Replay { manifest } => {
            let dir = cli.out_dir.clone().unwrap_or_else(|| manifest.parent().unwrap_or(Path::new(".")).join("replay"));
            if dir.join(MANIFEST_NAME) == *manifest {
                return Err(Error::Usage("replay directory must differ from the manifest's".into()));
            }
            let r = replay(manifest, &dir)?;
            if r.identical {
                println!("replay identical: {}", dir.display());
                Ok(0)
            } else {
                println!("replay differs: {:?} (exit code matches: {})", r.mismatched, r.exit_code_matches);
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(fraccauchy::app::exit_code(&e) as u8)
        }
    }
}

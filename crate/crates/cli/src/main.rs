//! `indexforms`: verification pipelines over the engine, one JSON report per run.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 bad input or missing
//! file, 3 internal error.

mod commands;
mod config;
mod error;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::chern::{BatchArgs, ChernArgs};
use commands::getzler::AhatArgs;
use commands::spectral::{DictArgs, FSpecialArgs};
use commands::symbols::SymbolArgs;
use commands::Context;
use config::Config;
use error::CliError;
use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "indexforms",
    version,
    about = "Exact checks for zeta forms, heat coefficients and spectral zeta functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for numeric identities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Machine mode: no summary on stderr.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Getzler-model heat coefficients against the Â-genus.
    Ahat {
        #[arg(long)]
        n: Option<usize>,
        /// Highest form degree compared (even).
        #[arg(long)]
        degree: Option<u32>,
        /// A `getzler-geometry` instance file.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Also check the q recursion and the generating function.
        #[arg(long)]
        check_recursion: bool,
    },
    /// Zeta index sum and its t⁰ limit for superconnections.
    Familyzeta {
        /// A `superconnection` instance file; otherwise a seeded random batch.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Zeta-Chern form, its transgression and the Chern-character transgression.
    Chern {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value = "1/4")]
        t: String,
        #[arg(long = "big-t", default_value = "4")]
        big_t: String,
    },
    /// Zeta-regularized determinant of a diagonal model.
    ZetaDet {
        /// `s1-laplacian`, `linear`, `twisted-dirac:<a>`, inline JSON or a `model-spectrum` file.
        #[arg(long)]
        model: String,
    },
    /// Index from the zeta function and from heat supertraces.
    Index {
        #[arg(long)]
        model: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 1.0, 10.0])]
        t: Vec<f64>,
    },
    /// F_t(s) = Γ(s+t)/(Γ(t)Γ(s+1)) and its identities.
    Fspecial {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![-0.5])]
        s: Vec<f64>,
        #[arg(long)]
        check: bool,
    },
    /// Parametrix, Neumann resolvent and composition of polynomial symbols.
    Symbols {
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Base dimension (number of form generators).
        #[arg(long, default_value_t = 0)]
        base: usize,
        /// Symbol with principal part |ξ|², e.g. "xi1^2 + x1^2".
        #[arg(long)]
        symbol: Option<String>,
        /// Positive-degree form part added for the Neumann resolvent.
        #[arg(long)]
        perturbation: Option<String>,
        /// Second symbol to compose with.
        #[arg(long)]
        with: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Gamma factors between resolvent, zeta and heat coefficients.
    Dict {
        #[arg(long)]
        j: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        w: i64,
        #[arg(long, default_value_t = 2)]
        r: i64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        check: bool,
    },
}

fn context(cli: &Cli) -> Result<Context, CliError> {
    let mut config = Config::load()?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(tol) = cli.tol {
        config.tolerance = tol;
    }
    if let Command::Symbols { steps: Some(s), .. } = &cli.command {
        config.steps = *s;
    }
    Ok(Context { config })
}

fn dispatch(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    match &cli.command {
        Command::Ahat {
            n,
            degree,
            instance,
            check_recursion,
        } => commands::getzler::run(
            &AhatArgs {
                n: *n,
                degree: *degree,
                instance: instance.clone(),
                check_recursion: *check_recursion,
            },
            ctx,
        ),
        Command::Familyzeta { instance, count } => commands::chern::family_zeta(
            &BatchArgs {
                instance: instance.clone(),
                count: *count,
            },
            ctx,
        ),
        Command::Chern {
            instance,
            count,
            t,
            big_t,
        } => commands::chern::chern(
            &ChernArgs {
                batch: BatchArgs {
                    instance: instance.clone(),
                    count: *count,
                },
                t: t.clone(),
                big_t: big_t.clone(),
            },
            ctx,
        ),
        Command::ZetaDet { model } => commands::spectral::zeta_det(model, ctx),
        Command::Index { model, t } => commands::spectral::index(model, t, ctx),
        Command::Fspecial { t, s, check } => commands::spectral::fspecial(
            &FSpecialArgs {
                t: *t,
                s: s.clone(),
                check: *check,
            },
            ctx,
        ),
        Command::Symbols {
            n,
            base,
            symbol,
            perturbation,
            with,
            steps,
            instance,
        } => commands::symbols::run(
            &SymbolArgs {
                n: *n,
                base: *base,
                symbol: symbol.clone(),
                perturbation: perturbation.clone(),
                with: with.clone(),
                steps: *steps,
                instance: instance.clone(),
            },
            ctx,
        ),
        Command::Dict {
            j,
            n,
            w,
            r,
            m,
            check,
        } => commands::spectral::dict(
            &DictArgs {
                j: *j,
                n: *n,
                w: *w,
                r: *r,
                m: *m,
                check: *check,
            },
            ctx,
        ),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let ctx = context(cli)?;
    let report = dispatch(cli, &ctx)?;
    let json = report.to_json(start.elapsed().as_secs_f64() * 1e3);
    let text = serde_json::to_string_pretty(&json).expect("JSON values serialize") + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?,
        // a closed pipe is not a failed check
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    if !cli.json {
        let _ = writeln!(std::io::stderr(), "{}", report.summary());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("indexforms: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

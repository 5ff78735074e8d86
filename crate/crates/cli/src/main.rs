//! `evalrep`: relation checks, Drinfel'd polynomials and isomorphism tests
//! for evaluation modules, with JSON or text reports.

mod commands;
mod config;
mod report;
mod scalars;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use evalrep_cyclotomic::{ExactBackend, FloatBackend, RootOrder};

use config::{parse_signs, BackendKind, Command, ConfigError, Format, LambdaSpec, RunConfig, Suite};
use report::{Outcome, RunReport};
use scalars::CliBackend;

#[derive(Parser)]
#[command(name = "evalrep", version, about = "Schnizer modules and their affine evaluation representations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Defining relations, nilpotency and highest/lowest weight kernels.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suites to run (default: all that apply).
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        /// Flip one coefficient of this generator first; the run should fail.
        #[arg(long)]
        corrupt: Option<String>,
    },
    /// Drinfel'd polynomials, closed form against the module.
    Drinfeld {
        #[command(flatten)]
        common: Common,
    },
    /// Whether the plus and minus evaluation modules are isomorphic.
    Iso {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        a_plus: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a_minus: Option<String>,
        /// Every pair of powers of eps, with the three methods compared.
        #[arg(long)]
        sweep: bool,
    },
    /// Matrix of one generator.
    Dump {
        #[command(flatten)]
        common: Common,
        /// e.g. E1, F0, K2, K2^-1
        #[arg(long)]
        generator: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON or TOML file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    l: Option<u32>,
    /// "1,1", "1,1;2,0", "all" or "random:K"
    #[arg(long)]
    lambda: Option<String>,
    /// Spectral parameter; repeatable.
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Vec<String>,
    /// "+", "-" or "both"
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long, value_enum)]
    backend: Option<BackendKind>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    strict_gcd: bool,
}

impl Common {
    fn into_config(self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(l) = self.l {
            c.l = l;
        }
        if let Some(s) = self.lambda {
            c.lambda = Some(LambdaSpec::Selector(s));
        }
        if !self.a.is_empty() {
            c.a = self.a;
        }
        if let Some(s) = self.sign {
            c.signs = parse_signs(&s)?;
        }
        if let Some(b) = self.backend {
            c.backend = b;
        }
        if let Some(t) = self.tolerance {
            c.tolerance = t;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if let Some(f) = self.format {
            c.format = f;
        }
        c.strict_gcd |= self.strict_gcd;
        Ok(c)
    }
}

fn parse_cli(cli: Cli) -> Result<(Command, RunConfig)> {
    Ok(match cli.command {
        Cmd::Verify { common, suites, corrupt } => {
            let mut c = common.into_config()?;
            if !suites.is_empty() {
                c.suites = suites;
            }
            c.corrupt = corrupt.or(c.corrupt);
            (Command::Verify, c)
        }
        Cmd::Drinfeld { common } => (Command::Drinfeld, common.into_config()?),
        Cmd::Iso { common, a_plus, a_minus, sweep } => {
            let mut c = common.into_config()?;
            c.a_plus = a_plus.or(c.a_plus);
            c.a_minus = a_minus.or(c.a_minus);
            c.sweep |= sweep;
            (Command::Iso, c)
        }
        Cmd::Dump { common, generator } => {
            let mut c = common.into_config()?;
            c.generator = generator.or(c.generator);
            (Command::Dump, c)
        }
    })
}

fn execute<B: CliBackend>(cmd: Command, cfg: &RunConfig, b: &B) -> Result<Outcome> {
    match cmd {
        Command::Verify => commands::verify(cfg, b),
        Command::Drinfeld => commands::drinfeld(cfg, b),
        Command::Iso => commands::iso(cfg, b),
        Command::Dump => commands::dump(cfg, b),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (cmd, cfg) = parse_cli(cli)?;
    let notes = cfg.validate(cmd)?;
    let order = RootOrder::new(cfg.l as i64)?;
    let outcome = match cfg.backend {
        BackendKind::Exact => execute(cmd, &cfg, &ExactBackend::new(order))?,
        BackendKind::Float => execute(cmd, &cfg, &FloatBackend::new(order, cfg.tolerance))?,
    };
    let report = RunReport::new(cmd, cfg, notes, outcome);
    let body = match report.config.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &report.config.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<ConfigError>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use unitl::cache::Cache;
use unitl::config::RunConfig;
use unitl::dwork;
use unitl::euler::{self, EulerOptions, Region};
use unitl::verify::{self, VerificationReport};
use unitl::Error;

/// Exact L-functions of unit F-crystals on opens of the torus over F_p.
#[derive(Debug, Parser)]
#[command(name = "unitl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// TOML run configuration
    #[arg(short = 'c', long = "config")]
    config: PathBuf,
    /// Series bound B (results are exact modulo T^{B+1})
    #[arg(long)]
    bound: Option<usize>,
    /// Precision N of the lift
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for cached per-degree Euler factors
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegionArg {
    Gm,
    DOfA,
    ZOfA,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Region {
        match r {
            RegionArg::Gm => Region::Gm,
            RegionArg::DOfA => Region::DOfA,
            RegionArg::ZOfA => Region::ZOfA,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler product over closed points
    Euler {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "gm")]
        region: RegionArg,
    },
    /// Dwork matrix data: det(1 - ΨT), its unit/nil split and traces
    Dwork(Common),
    /// Trivial-crystal sanity check against the zeta function of the torus
    Zeta(Common),
    /// The normalized crystal and its lift
    Lift(Common),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    Katz(Common),
    Prop416(Common),
    Trace(Common),
    Strat(Common),
}

struct Run {
    cfg: RunConfig,
    opts: EulerOptions,
}

impl Run {
    fn new(common: &Common) -> Result<Self, Error> {
        let mut cfg = RunConfig::load(&common.config)?;
        if let Some(b) = common.bound {
            cfg.run.degree_bound = Some(b);
        }
        if let Some(n) = common.precision {
            cfg.ring.precision = Some(n);
        }
        if let Some(w) = common.workers {
            cfg.run.workers = Some(w);
        }
        if let Some(dir) = &common.cache {
            cfg.run.cache_dir = Some(dir.clone());
        }
        let cache = cfg.run.cache_dir.as_ref().map(Cache::new).transpose()?;
        let opts = EulerOptions {
            workers: cfg.run.workers,
            cache,
        };
        Ok(Run { cfg, opts })
    }
}

/// JSON output and whether it records a failed check.
type Outcome = (Value, bool);

fn report(r: VerificationReport) -> Outcome {
    let failed = !r.passed();
    (serde_json::to_value(r).expect("report serializes"), failed)
}

fn execute(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Euler { common, region } => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            let region = Region::from(*region);
            let s = euler::euler_product_with(&pair.lifted, region, run.cfg.degree_bound(), &run.opts)?;
            Ok((
                json!({
                    "command": "euler",
                    "region": region,
                    "ring": pair.lifted.ring().to_json(),
                    "series": s.to_json(),
                }),
                false,
            ))
        }
        Command::Dwork(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            let dm = dwork::dwork_matrix(&pair.lifted)?;
            let split = dwork::unit_nil_split(&dm)?;
            let traces: Vec<_> = (1..=run.cfg.trace_max() as u64).map(|n| dm.trace_power(n)).collect();
            Ok((serde_json::to_value(dm.to_json(&split, &traces)).expect("serializes"), false))
        }
        Command::Zeta(common) => {
            let run = Run::new(common)?;
            let r = verify::zeta_sanity(
                run.cfg.ring.p,
                run.cfg.crystal.dim,
                run.cfg.degree_bound(),
                run.cfg.precision(),
            )?;
            Ok(report(r))
        }
        Command::Lift(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            Ok((
                json!({
                    "lambda": pair.lambda_crystal.to_json(),
                    "lifted": pair.lifted.to_json(),
                }),
                false,
            ))
        }
        Command::Verify(v) => verify_command(v),
    }
}

fn verify_command(v: &VerifyCommand) -> Result<Outcome, Error> {
    match v {
        VerifyCommand::Katz(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            Ok(report(verify::check_unit_root_ratio(&pair, run.cfg.degree_bound(), &run.opts)?))
        }
        VerifyCommand::Prop416(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            Ok(report(verify::check_torus_identity(&pair.lifted, run.cfg.degree_bound(), &run.opts)?))
        }
        VerifyCommand::Trace(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            Ok(report(verify::check_traces(&pair.lifted, run.cfg.trace_max())?))
        }
        VerifyCommand::Strat(common) => {
            let run = Run::new(common)?;
            let pair = run.cfg.prepare()?;
            let bs = run.cfg.strat_polys(pair.lifted.ring())?;
            if bs.is_empty() {
                return Err(Error::Config("run.strat_b lists no polynomials".into()));
            }
            let mut failed = false;
            let mut out = Vec::new();
            for b in &bs {
                let (v, f) = report(verify::check_stratification(
                    &pair.lifted,
                    b,
                    run.cfg.degree_bound(),
                    &run.opts,
                )?);
                failed |= f;
                out.push(v);
            }
            Ok((Value::Array(out), failed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok((value, failed)) => {
            let text = serde_json::to_string_pretty(&value).expect("json");
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let err = json!({ "error": e.to_string(), "kind": error_kind(&e) });
            eprintln!("{}", serde_json::to_string_pretty(&err).expect("json"));
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::UnknownVariable(_) => "unknown_variable",
        Error::NotLocal => "not_local",
        Error::NotMonic => "not_monic",
        Error::Config(_) => "config",
        Error::Io(_) => "io",
        Error::NormalFormMissing(_) => "normal_form_missing",
        _ => "error",
    }
}

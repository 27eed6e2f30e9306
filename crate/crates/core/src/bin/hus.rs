use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hus_hill::error::{HusError, Result};
use hus_hill::report::{self, exit, AnalysisConfig, Report, Scalar, SweepSpec};

#[derive(Parser)]
#[command(
    name = "hus",
    version,
    about = "Hyers-Ulam stability of periodic h-difference equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// e(nh), S-sums, K0 on both sides, composite constant and verdict.
    Analyze(Common),
    /// Perturb an exact solution and shadow it back.
    Track {
        #[command(flatten)]
        common: Common,
        /// Include psi and the exact solution in the JSON output.
        #[arg(long)]
        trajectory: bool,
    },
    /// Case table over a parameter grid, e.g. `--sweep A:0:3/h:500`.
    Sweep(Common),
    /// Exhaustive or sampled sign-pattern search for the sharpness ratio.
    Oracle(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    h: Option<String>,
    /// Comma-separated cycle values or expressions, e.g. `pi,2*pi`.
    #[arg(long, allow_hyphen_values = true)]
    cycle: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Parameter binding `NAME=VALUE`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    /// `PARAM:MIN:MAX:COUNT`.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: Out,
}

impl Common {
    fn config(&self) -> Result<AnalysisConfig> {
        let mut cfg = match &self.config {
            Some(path) => AnalysisConfig::from_path(path)?,
            None => {
                let missing =
                    |f: &str| HusError::Config(format!("--{f} is required without --config"));
                let h = self.h.as_deref().ok_or_else(|| missing("h"))?;
                let cycle = self.cycle.as_deref().ok_or_else(|| missing("cycle"))?;
                AnalysisConfig::new(scalar(h), parse_cycle(cycle))
            }
        };
        if self.config.is_some() {
            if let Some(h) = &self.h {
                cfg.h = scalar(h);
            }
            if let Some(c) = &self.cycle {
                cfg.cycle = parse_cycle(c);
            }
        }
        for p in &self.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| HusError::Config(format!("--param {p}: expected NAME=VALUE")))?;
            let v = v
                .parse()
                .map_err(|_| HusError::Config(format!("--param {p}: not a number")))?;
            cfg.params.insert(k.trim().to_string(), v);
        }
        if let Some(f) = &self.family {
            cfg.family = f.clone();
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(p) = &self.profile {
            cfg.profile = p.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.window.is_some() {
            cfg.window = self.window;
        }
        if self.horizon.is_some() {
            cfg.horizon = self.horizon;
        }
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        if let Some(s) = &self.sweep {
            cfg.sweep = Some(parse_sweep(s)?);
        }
        Ok(cfg)
    }
}

fn scalar(s: &str) -> Scalar {
    match s.trim().parse::<f64>() {
        Ok(x) => Scalar::Number(x),
        Err(_) => Scalar::Expr(s.trim().to_string()),
    }
}

fn parse_cycle(s: &str) -> Vec<Scalar> {
    s.split(',').map(scalar).collect()
}

fn parse_sweep(s: &str) -> Result<SweepSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, min, max, count] = parts[..] else {
        return Err(HusError::Config(format!(
            "--sweep {s}: expected PARAM:MIN:MAX:COUNT"
        )));
    };
    let count = count
        .parse()
        .map_err(|_| HusError::Config(format!("--sweep {s}: bad count")))?;
    Ok(SweepSpec {
        param: param.to_string(),
        min: scalar(min),
        max: scalar(max),
        count,
    })
}

fn run(cli: Cli) -> Result<(Report, Out)> {
    Ok(match cli.command {
        Command::Analyze(c) => (report::cmd_analyze(&c.config()?)?, c.out),
        Command::Track { common, trajectory } => (
            report::cmd_track(&common.config()?, trajectory)?,
            common.out,
        ),
        Command::Sweep(c) => (report::cmd_sweep(&c.config()?)?, c.out),
        Command::Oracle(c) => (report::cmd_oracle(&c.config()?)?, c.out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HUS_HILL_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok((report, out)) => {
            let text = match out {
                Out::Json => Ok(report.to_json()),
                Out::Csv => report.table.to_csv(),
            };
            match text {
                Ok(t) => {
                    print!("{t}");
                    ExitCode::from(report.code as u8)
                }
                Err(e) => {
                    eprintln!("hus: {e}");
                    ExitCode::from(exit::FAILURE as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("hus: {e}");
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}

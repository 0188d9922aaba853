//! `binlab` command line.
//!
//! Settings come from built-in defaults, then `--config` (JSON or
//! `key = value` lines), then `BINLAB_SEED` / `BINLAB_THREADS`, then flags.
//! Exit status is 0 on success, 2 for usage and validation errors and 1 for
//! runtime failures.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{Kind, Layer, Settings};

#[derive(Parser, Debug)]
#[command(name = "binlab", version, about = "Online bin packing experiments")]
struct Cli {
    /// Config file, JSON object or `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed [env: BINLAB_SEED].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core [env: BINLAB_THREADS].
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write instance files.
    Gen {
        #[command(flatten)]
        data: DataArgs,
        /// Also write a JSON copy of every instance.
        #[arg(long)]
        json: bool,
    },
    /// Run heuristics on a battery and compare with BestFit.
    Run {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated heuristics, e.g. `bestfit,c12,ab-ff(a=5,b=24)`.
        #[arg(long)]
        heuristics: Option<String>,
    },
    /// Sweep the ab thresholds over a grid.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        /// ff, bf or wf.
        #[arg(long)]
        baseline: Option<String>,
        /// faithful or verbatim.
        #[arg(long)]
        variant: Option<String>,
        /// `lo..=hi`.
        #[arg(long)]
        a_range: Option<String>,
        /// `lo..=hi`.
        #[arg(long)]
        b_range: Option<String>,
    },
    /// Mean ratio against BestFit as the stream grows.
    Curve {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        heuristics: Option<String>,
        /// Comma-separated item counts.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Compare a driver heuristic with a shadow decision by decision.
    Diff {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        driver: Option<String>,
        #[arg(long)]
        shadow: Option<String>,
        /// Fail if the shadow ever opens a bin while the driver reuses one.
        #[arg(long)]
        assert_impossible: bool,
    },
    /// Constant item streams against the faithful ab heuristic.
    Adversarial {
        /// Comma-separated `c:a:b:s` cases.
        #[arg(long)]
        cases: Option<String>,
        /// Stream length; `auto` picks an exact period per case.
        #[arg(long)]
        n_items: Option<String>,
        /// ff, bf or wf.
        #[arg(long)]
        baseline: Option<String>,
    },
    /// Combine the `*_summary.json` files of a directory into report.json.
    Report {
        /// Defaults to the output directory.
        dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Item distribution, e.g. `uniform(20,100)` or `weibull(3,45)`.
    #[arg(long)]
    dist: Option<String>,
    /// Bin capacity.
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    n_items: Option<usize>,
    /// Number of instances.
    #[arg(long)]
    instances: Option<usize>,
}

impl DataArgs {
    fn apply(&self, l: &mut Layer) {
        l.set_opt("dist", self.dist.as_ref());
        l.set_opt("cap", self.cap);
        l.set_opt("n_items", self.n_items);
        l.set_opt("instances", self.instances);
    }
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn classify(err: anyhow::Error) -> Failure {
    use binlab::Error as E;
    let usage = err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<E>(),
            Some(
                E::InvalidInstance(_)
                    | E::InvalidDistribution(_)
                    | E::InvalidParameters { .. }
                    | E::ParseHeuristic { .. }
                    | E::ParseDistribution { .. }
            )
        )
    });
    if usage {
        Failure::Usage(err)
    } else {
        Failure::Runtime(err)
    }
}

fn kind_and_flags(cli: &Cli) -> Option<(Kind, Layer)> {
    let mut l = Layer::default();
    l.set_opt("seed", cli.seed);
    l.set_opt("threads", cli.threads);
    l.set_opt("out", cli.out.as_ref().map(|p| p.display()));
    let kind = match &cli.command {
        Command::Gen { data, .. } => {
            data.apply(&mut l);
            Kind::Gen
        }
        Command::Run { data, heuristics } => {
            data.apply(&mut l);
            l.set_opt("heuristics", heuristics.as_ref());
            Kind::Run
        }
        Command::Sweep {
            data,
            baseline,
            variant,
            a_range,
            b_range,
        } => {
            data.apply(&mut l);
            l.set_opt("baseline", baseline.as_ref());
            l.set_opt("variant", variant.as_ref());
            l.set_opt("a_range", a_range.as_ref());
            l.set_opt("b_range", b_range.as_ref());
            Kind::Sweep
        }
        Command::Curve { data, heuristics, grid } => {
            data.apply(&mut l);
            l.set_opt("heuristics", heuristics.as_ref());
            l.set_opt("grid", grid.as_ref());
            Kind::Curve
        }
        Command::Diff {
            data,
            driver,
            shadow,
            assert_impossible,
        } => {
            data.apply(&mut l);
            l.set_opt("driver", driver.as_ref());
            l.set_opt("shadow", shadow.as_ref());
            if *assert_impossible {
                l.set("assert_impossible", true);
            }
            Kind::Diff
        }
        Command::Adversarial {
            cases,
            n_items,
            baseline,
        } => {
            l.set_opt("cases", cases.as_ref());
            l.set_opt("n_items", n_items.as_ref());
            l.set_opt("baseline", baseline.as_ref());
            Kind::Adversarial
        }
        Command::Report { .. } => return None,
    };
    Some((kind, l))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let file = cli
        .config
        .as_deref()
        .map(Layer::from_file)
        .transpose()
        .map_err(Failure::Usage)?;
    let env = Layer::from_env(|k| std::env::var(k).ok());
    let Some((kind, flags)) = kind_and_flags(&cli) else {
        let Command::Report { dir } = &cli.command else {
            unreachable!()
        };
        let dir = match (dir, &cli.out) {
            (Some(d), _) | (None, Some(d)) => d.clone(),
            (None, None) => PathBuf::from("results"),
        };
        return commands::report(&dir).map_err(Failure::Runtime);
    };
    let settings = Settings::resolve(kind, file, env, flags).map_err(Failure::Usage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.threads)
        .build()
        .context("cannot start the worker pool")
        .map_err(Failure::Runtime)?;
    let json = matches!(cli.command, Command::Gen { json: true, .. });
    pool.install(|| match kind {
        Kind::Gen => commands::gen(&settings, json),
        Kind::Run => commands::run(&settings),
        Kind::Sweep => commands::sweep(&settings),
        Kind::Curve => commands::curve(&settings),
        Kind::Adversarial => commands::adversarial(&settings),
        Kind::Diff => match commands::diff(&settings) {
            Ok(true) => Err(anyhow::anyhow!(
                "impossibility check failed: the shadow opened a bin while the driver reused one"
            )),
            other => other.map(|_| ()),
        },
    })
    .map_err(classify)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

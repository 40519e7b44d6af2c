use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use cadlag::constructions::{
    adapted_monotone_step, corrected_integrand, excursion_windows, monotone_bridge, BridgeVariant, PartitionGrid,
    SplitOptions, WindowSplit,
};
use cadlag::experiments::{run_convergence_study, run_machinery_trace, run_metric_decay, ExperimentConfig};
use cadlag::integral::ito_integral;
use cadlag::{d_j1, d_m1, MetricConfig, StepPath};

#[derive(Parser)]
#[command(name = "cadlag", version, about = "Step paths, Skorokhod distances and Stieltjes integrals")]
struct Cli {
    /// Experiment config (key=value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    J1,
    M1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Windows,
    Corrected,
    Bridge,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Settle,
    Endpoint,
    Adapted,
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyMode {
    Convergence,
    Decay,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two path files.
    Metric {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value = "j1")]
        metric: Metric,
        /// M1 resolution (default 1e-3 T).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Integral of H_- against X.
    Integrate { h: PathBuf, x: PathBuf },
    /// Window constructions on path files.
    Construct {
        #[arg(long, value_enum)]
        op: Op,
        /// Integrand path (windows, corrected, split).
        #[arg(long)]
        h: Option<PathBuf>,
        /// Integrator path (bridge, split).
        #[arg(long)]
        x: Option<PathBuf>,
        /// Excursion threshold.
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        /// Dyadic grid level.
        #[arg(long, default_value_t = 6)]
        level: u32,
        #[arg(long, default_value_t = 0.05)]
        gamma: f64,
        #[arg(long, default_value_t = 10.0)]
        r: f64,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        t2: Option<f64>,
        #[arg(long, value_enum, default_value = "settle")]
        variant: Variant,
    },
    /// Convergence study or metric decay over a scenario family.
    Study {
        #[arg(long, value_enum, default_value = "convergence")]
        mode: StudyMode,
    },
    /// Window machinery trace over a scenario family.
    Trace,
}

fn read_path(p: &Path) -> anyhow::Result<StepPath> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    StepPath::from_csv(&text).with_context(|| format!("parsing {}", p.display()))
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    p.as_deref().with_context(|| format!("--{flag} is required for this operation"))
}

fn load_config(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let path = cli.config.as_deref().context("--config is required")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn construct(
    op: Op,
    h: &Option<PathBuf>,
    x: &Option<PathBuf>,
    (a, level, gamma, r): (f64, u32, f64, f64),
    (t1, t2): (Option<f64>, Option<f64>),
    variant: Variant,
) -> anyhow::Result<String> {
    let windows_of = |h: &StepPath| -> anyhow::Result<_> {
        let grid = PartitionGrid::dyadic(h.horizon(), level, &[])?;
        Ok(excursion_windows(h, a, &grid)?)
    };
    Ok(match op {
        Op::Windows => {
            let h = read_path(need(h, "h")?)?;
            let mut s = String::from("floor,tau,rho\n");
            for w in windows_of(&h)? {
                s.push_str(&format!("{},{},{}\n", w.floor, w.tau, w.rho));
            }
            s
        }
        Op::Corrected => {
            let h = read_path(need(h, "h")?)?;
            corrected_integrand(&h, &windows_of(&h)?)?.0.to_csv()
        }
        Op::Bridge => {
            let x = read_path(need(x, "x")?)?;
            let (Some(t1), Some(t2)) = (t1, t2) else { bail!("--t1 and --t2 are required for bridges") };
            match variant {
                Variant::Settle => monotone_bridge(&x, t1, t2, gamma, BridgeVariant::Settle)?.weights.to_csv(),
                Variant::Endpoint => monotone_bridge(&x, t1, t2, gamma, BridgeVariant::EndpointJump)?.weights.to_csv(),
                Variant::Adapted => adapted_monotone_step(&x, t1, t2, gamma, r.ceil() as usize)?.path.to_csv(),
            }
        }
        Op::Split => {
            let hp = read_path(need(h, "h")?)?;
            let xp = read_path(need(x, "x")?)?;
            let mut s = String::from("window,t,term1,term2,term3,term4,term5,window_integral,y\n");
            for (j, w) in windows_of(&hp)?.iter().enumerate() {
                let split = WindowSplit::new(&hp, &xp, w, gamma, r, SplitOptions::default())?;
                for t in split.breakpoints() {
                    let rt = split.terms_at(t)?;
                    let terms: Vec<String> = rt.terms.iter().map(|v| v[0].to_string()).collect();
                    s.push_str(&format!(
                        "{j},{t},{},{},{}\n",
                        terms.join(","),
                        rt.window_integral[0],
                        rt.scaling[0]
                    ));
                }
            }
            s
        }
    })
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let output = match &cli.cmd {
        Command::Metric { x, y, metric, eps } => {
            let (x, y) = (read_path(x)?, read_path(y)?);
            let d = match metric {
                Metric::J1 => d_j1(&x, &y)?,
                Metric::M1 => {
                    let cfg = eps.map(MetricConfig::with_resolution).unwrap_or_default();
                    d_m1(&x, &y, &cfg)?
                }
            };
            format!("{d}\n")
        }
        Command::Integrate { h, x } => ito_integral(&read_path(h)?, &read_path(x)?)?.to_csv(),
        Command::Construct { op, h, x, a, level, gamma, r, t1, t2, variant } => {
            construct(*op, h, x, (*a, *level, *gamma, *r), (*t1, *t2), *variant)?
        }
        Command::Study { mode } => {
            let cfg = load_config(&cli)?;
            match mode {
                StudyMode::Convergence => run_convergence_study(&cfg)?.to_csv(),
                StudyMode::Decay => run_metric_decay(&cfg)?.to_csv(),
            }
        }
        Command::Trace => run_machinery_trace(&load_config(&cli)?)?.to_csv(),
    };
    match &cli.out {
        Some(p) => fs::write(p, output).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{output}"),
    }
    Ok(())
}

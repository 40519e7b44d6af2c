//! Monte Carlo convergence study, metric decay and machinery trace.

use cadlag::experiments::{
    run_convergence_study, run_machinery_trace, run_metric_decay, ExperimentConfig, MetricKind,
};
use cadlag::{MetricConfig, Result};

fn main() -> Result<()> {
    let cfg = ExperimentConfig::parse(
        "scenario = example_1_1\np = 0.5\nn = 10,100,1000\nreps = 10000\nseed = 42\nfunctionals = eval@2,sup,tv\n",
    )?;
    print!("{}", run_convergence_study(&cfg)?.to_csv());

    let anti = ExperimentConfig::parse("scenario=anti_avci\nn=10,100,1000\nreps=10000\nseed=42\n")?;
    print!("{}", run_convergence_study(&anti)?.to_csv());

    let spike = ExperimentConfig::parse("scenario=example_2_1\nn=30,100,300\nreps=1\n")?
        .with_metric(MetricKind::M1, MetricConfig::default());
    print!("{}", run_metric_decay(&spike)?.to_csv());

    let trace = ExperimentConfig::parse("scenario=example_1_1\np=1\nn=100\nreps=100\nseed=7\n")?;
    let report = run_machinery_trace(&trace)?;
    println!(
        "trace: good event frequency {}, bound violations {}, max reconstruction error {:e}",
        report.event_a_frequency(),
        report.bound_violations,
        report.max_reconstruction_error
    );
    Ok(())
}

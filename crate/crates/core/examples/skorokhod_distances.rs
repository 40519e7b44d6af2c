//! J1 and M1 distances, and what separates them.

use cadlag::metrics::{w_prime, MetricConfig};
use cadlag::{d_j1, d_m1, Result, StepPath};

fn main() -> Result<()> {
    let cfg = MetricConfig::default();
    let limit = StepPath::indicator(2.0, 1.0, 3.0)?;
    for n in [10, 20, 40, 80] {
        let x = StepPath::indicator(2.0, 1.0 - 1.0 / n as f64, 3.0)?;
        println!("n={n:>3}  J1={:.6}  M1={:.6}", d_j1(&x, &limit)?, d_m1(&x, &limit, &cfg)?);
    }

    // one jump against two half jumps: far apart in J1, close in M1
    let one = StepPath::indicator(2.0, 1.0, 1.0)?;
    for n in [10, 100, 1000] {
        let two = StepPath::scalar(2.0, 0.0, &[(1.0 - 1.0 / n as f64, 0.5), (1.0, 1.0)])?;
        println!("n={n:>4}  J1={:.4}  M1={:.6}", d_j1(&two, &one)?, d_m1(&two, &one, &cfg)?);
    }

    // a vanishing spike stays at M1 distance 1/2 from zero
    let zero = StepPath::zero(2.0, 1)?;
    for n in [30, 100, 300] {
        let spike = StepPath::scalar(2.0, 0.0, &[(1.0 - 3.0 / n as f64, 0.5), (1.0 - 1.0 / n as f64, 0.0)])?;
        println!(
            "n={n:>3}  w'(0.1)={}  M1 to zero={:.6}",
            w_prime(&spike, 0.1)?,
            d_m1(&spike, &zero, &cfg)?
        );
    }
    Ok(())
}

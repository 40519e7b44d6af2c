//! Monotone bridges and their causal counterpart on a staircase path.

use cadlag::constructions::{adapted_monotone_step, bridge_error, monotone_bridge, BridgeVariant};
use cadlag::{Result, StepPath};

fn main() -> Result<()> {
    let x = StepPath::scalar(1.0, 0.0, &[(0.2, 0.02), (0.35, 0.3), (0.5, 0.31), (0.7, 0.9), (0.9, 1.0)])?;
    let gamma = 0.1;
    for variant in [BridgeVariant::Settle, BridgeVariant::EndpointJump] {
        let b = monotone_bridge(&x, 0.1, 0.95, gamma, variant)?;
        println!("{variant:?}: stops {:?}, error {:.4}", b.stops, bridge_error(&x, &b)?);
        print!("{}", b.weights.to_csv());
    }
    let a = adapted_monotone_step(&x, 0.1, 0.95, gamma, 10)?;
    println!("adapted step, stops {:?}", a.stops);
    print!("{}", a.path.to_csv());
    Ok(())
}

//! Limit conditions on the shipped scenarios.

use cadlag::constructions::ThresholdLadder;
use cadlag::scenarios::{check_r1, check_r2_tail, empirical_condition, OrderCondition, Scenario};
use cadlag::Result;

fn main() -> Result<()> {
    let ladder = ThresholdLadder::geometric(1.0, 6)?;
    for sc in [Scenario::Example11 { p: 0.5 }, Scenario::Example21, Scenario::AntiAvci, Scenario::M1J1] {
        let pair = sc.limit_pair()?;
        let tails: Vec<f64> = (1..=ladder.len()).map(|k| check_r2_tail(&pair.h, &pair.x, &ladder, k)).collect::<Result<_>>()?;
        println!("{:<12} sign condition: {:<5} tail sums: {tails:?}", sc.name(), check_r1(&pair.h, &pair.x)?);
    }

    for (p, delta) in [(1.0, 0.2), (0.0, 0.05)] {
        let f = empirical_condition(&Scenario::Example11 { p }, OrderCondition::IntegrandFirst, 10, delta, 0.5, 1000, 42)?;
        println!("p={p}, delta={delta}: integrand-first frequency {f}");
    }
    let f = empirical_condition(&Scenario::AntiAvci, OrderCondition::IntegratorFirst, 100, 0.005, 0.5, 1000, 42)?;
    println!("anti_avci, integrator-first frequency {f}");
    Ok(())
}

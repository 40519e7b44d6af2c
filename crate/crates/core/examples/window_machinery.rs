//! Excursion windows, corrected integrands and the five-term window expansion.

use cadlag::constructions::{
    corrected_integrand, event_a, event_gamma, excursion_windows, EventLevels, PartitionGrid, SplitOptions,
    WindowSplit,
};
use cadlag::scenarios::example_1_1_early;
use cadlag::Result;

fn main() -> Result<()> {
    let s = example_1_1_early(100)?;
    let grid = PartitionGrid::dyadic(2.0, 6, &[1.0])?;
    println!("grid mesh {}, {} points", grid.mesh(), grid.points().len());

    let (a_k, gamma, r) = (0.5, 0.05, 10.0);
    let windows = excursion_windows(&s.h, a_k, &grid)?;
    let (tilde, rest) = corrected_integrand(&s.h, &windows)?;
    println!("windows: {windows:?}");
    println!("corrected integrand:\n{}remainder:\n{}", tilde.to_csv(), rest.to_csv());

    let lv = EventLevels { gamma, delta: grid.mesh(), r, a_k };
    println!("good event: {}, ordering event: {}", event_a(&s.h, &s.x, &lv)?, event_gamma(&s.h, &s.x, &windows, gamma)?);

    for w in &windows {
        let split = WindowSplit::new(&s.h, &s.x, w, gamma, r, SplitOptions::default())?;
        for t in split.breakpoints() {
            let rt = split.terms_at(t)?;
            let terms: Vec<f64> = rt.terms.iter().map(|v| v[0]).collect();
            println!(
                "t={t:.5} terms={terms:?} window integral={} Y={} within caps: {}",
                rt.window_integral[0],
                rt.scaling[0],
                rt.within_bounds(a_k, gamma, r)
            );
        }
    }
    Ok(())
}

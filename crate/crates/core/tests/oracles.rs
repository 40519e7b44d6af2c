mod common;

use cadlag::{d_j1, d_m1, MetricConfig, StepPath};
use common::{discrete_frechet, j1_oracle, m1_oracle};

#[test]
fn j1_oracle_on_known_pairs() {
    let x = StepPath::indicator(2.0, 0.9, 1.0).unwrap();
    let y = StepPath::indicator(2.0, 1.0, 1.0).unwrap();
    assert!((j1_oracle(&x, &y) - 0.1).abs() < 1e-12);
    let two = StepPath::scalar(2.0, 0.0, &[(0.9, 0.5), (1.0, 1.0)]).unwrap();
    assert!((j1_oracle(&two, &y) - 0.5).abs() < 1e-12);
    let at_end = StepPath::indicator(1.0, 1.0, 1.0).unwrap();
    let before = StepPath::indicator(1.0, 0.95, 1.0).unwrap();
    assert_eq!(j1_oracle(&at_end, &before), 1.0);
    assert_eq!(d_j1(&at_end, &before).unwrap(), 1.0);
}

#[test]
fn discrete_frechet_small_cases() {
    assert_eq!(discrete_frechet(&[[0.0, 0.0], [1.0, 0.0]], &[[0.0, 1.0], [1.0, 1.0]]), 1.0);
    assert_eq!(discrete_frechet(&[[0.0, 0.0]], &[[0.0, 0.0], [0.5, 0.25]]), 0.5);
}

#[test]
fn m1_oracle_tracks_the_shift() {
    let x = StepPath::indicator(1.0, 0.4, 1.0).unwrap();
    let y = StepPath::indicator(1.0, 0.5, 1.0).unwrap();
    let o = m1_oracle(&x, &y, 1e-3);
    let d = d_m1(&x, &y, &MetricConfig::default()).unwrap();
    assert!((o - 0.1).abs() <= 1e-3, "{o}");
    assert!((o - d).abs() <= 1e-3);
}

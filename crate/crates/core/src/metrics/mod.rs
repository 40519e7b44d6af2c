//! Skorokhod J1 and M1 distances and the path moduli used by the tightness criteria.

mod frechet;
mod j1;
mod moduli;

pub use frechet::{frechet_decide, frechet_distance};
pub use j1::{d_j1, j1_feasible};
pub use moduli::{
    hat_w, hat_w_left, increment_count, increment_count_window, u_osc, varsigma, w_prime, w_prime_window, window_gamma_sup,
};

use crate::error::Result;
use crate::path::StepPath;

/// Accuracy controls for the M1 computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig {
    /// Target resolution; `None` means `1e-3 * T`.
    pub resolution: Option<f64>,
    /// Number of halvings of the resolution used as the final bracket width.
    pub max_refinement_levels: u32,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { resolution: None, max_refinement_levels: 4 }
    }
}

impl MetricConfig {
    pub fn with_resolution(resolution: f64) -> Self {
        MetricConfig { resolution: Some(resolution), ..Self::default() }
    }

    pub fn resolution(&self, horizon: f64) -> f64 {
        self.resolution.unwrap_or(1e-3 * horizon)
    }

    /// Width of the final bisection bracket.
    pub fn bracket(&self, horizon: f64) -> f64 {
        self.resolution(horizon) / f64::from(1u32 << self.max_refinement_levels.min(30))
    }
}

/// M1 distance, product form: the largest coordinatewise M1 distance.
///
/// Each coordinate distance is the Fréchet distance (max-norm on `(t, v)`) between
/// completed graphs. The result is an upper bound within `cfg.resolution(T)` of the
/// exact value.
pub fn d_m1(x: &StepPath, y: &StepPath, cfg: &MetricConfig) -> Result<f64> {
    x.sub(y)?;
    let tol = cfg.bracket(x.horizon());
    let mut worst = 0.0f64;
    for i in 0..x.dim() {
        let a = x.coordinate(i)?.completed_graph().vertices();
        let b = y.coordinate(i)?.completed_graph().vertices();
        worst = worst.max(frechet_distance(&a, &b, tol));
    }
    Ok(worst)
}

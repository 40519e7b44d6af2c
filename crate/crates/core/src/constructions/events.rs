use super::windows::Window;
use crate::error::Result;
use crate::metrics::{increment_count, w_prime, window_gamma_sup};
use crate::path::StepPath;

/// Levels defining the good event on which the remainder bounds are asserted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventLevels {
    pub gamma: f64,
    pub delta: f64,
    pub r: f64,
    pub a_k: f64,
}

/// Small M1 oscillation of both paths, few increments of `H`, and both paths bounded by `r`.
pub fn event_a(h: &StepPath, x: &StepPath, lv: &EventLevels) -> Result<bool> {
    let half = 0.5 * lv.gamma;
    if w_prime(x, lv.delta)? > half || w_prime(h, lv.delta)? > half {
        return Ok(false);
    }
    let n = increment_count(h, lv.a_k.min(lv.gamma))? as f64;
    Ok(n <= lv.r && x.sup_norm() <= lv.r && h.sup_norm() <= lv.r)
}

/// No window sees an integrator increment followed by an integrand increment, both above `γ/4`.
pub fn event_gamma(h: &StepPath, x: &StepPath, windows: &[Window], gamma: f64) -> Result<bool> {
    for w in windows {
        let hi = w.rho.min(h.horizon());
        if window_gamma_sup(x, h, w.floor, hi)? > 0.25 * gamma {
            return Ok(false);
        }
    }
    Ok(true)
}

use crate::error::{Error, Result};
use crate::path::StepPath;

/// Multiplicative nudge applied to geometric ladders so that levels miss round jump sizes.
pub const LADDER_NUDGE: f64 = 1.0 + 1e-3 * std::f64::consts::FRAC_1_SQRT_2;

/// Strictly decreasing positive thresholds `a_1 > a_2 > ..`, indexed from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdLadder {
    levels: Vec<f64>,
}

impl ThresholdLadder {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("ladder needs at least one level".into()));
        }
        if levels.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidArgument("ladder levels must be positive".into()));
        }
        if levels.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidArgument("ladder levels must decrease strictly".into()));
        }
        Ok(ThresholdLadder { levels })
    }

    /// `a_k = a_1 2^{-(k-1)}`, nudged by [`LADDER_NUDGE`].
    pub fn geometric(a1: f64, count: usize) -> Result<Self> {
        ThresholdLadder::new((0..count).map(|k| a1 * LADDER_NUDGE * 0.5f64.powi(k as i32)).collect())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `a_k` for `k` in `1..=len`; `a_0 = ∞`.
    pub fn level(&self, k: usize) -> Result<f64> {
        match k {
            0 => Ok(f64::INFINITY),
            k if k <= self.levels.len() => Ok(self.levels[k - 1]),
            _ => Err(Error::InvalidArgument(format!("ladder has {} levels, asked for {k}", self.levels.len()))),
        }
    }

    /// Errors if a level coincides with one of the given jump sizes.
    pub fn check_against(&self, sizes: &[f64]) -> Result<()> {
        for a in &self.levels {
            for s in sizes {
                if (a - s.abs()).abs() <= 1e-12 * a.max(1.0) {
                    return Err(Error::InvalidArgument(format!("ladder level {a} equals a jump size")));
                }
            }
        }
        Ok(())
    }
}

/// Jump times of the limit integrand sorted by ladder band.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitJumpTimes {
    /// `above[k-1]`: times with `|ΔH| > a_k`.
    pub above: Vec<Vec<f64>>,
    /// `bands[k-1]`: times with `a_k < |ΔH| <= a_{k-1}`.
    pub bands: Vec<Vec<f64>>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn limit_jump_times(h: &StepPath, ladder: &ThresholdLadder) -> Result<LimitJumpTimes> {
    let jumps: Vec<(f64, f64)> = h.jumps_up_to(h.horizon()).into_iter().map(|(t, d)| (t, max_abs(&d))).collect();
    let mut above = Vec::with_capacity(ladder.len());
    let mut bands = Vec::with_capacity(ladder.len());
    for k in 1..=ladder.len() {
        let (ak, prev) = (ladder.level(k)?, ladder.level(k - 1)?);
        above.push(jumps.iter().filter(|(_, s)| *s > ak).map(|(t, _)| *t).collect());
        bands.push(jumps.iter().filter(|(_, s)| *s > ak && *s <= prev).map(|(t, _)| *t).collect());
    }
    Ok(LimitJumpTimes { above, bands })
}

//! Monotone step interpolation of a path between two times.

use crate::error::{Error, Result};
use crate::metrics::{increment_count, increment_count_window, w_prime_window};
use crate::path::StepPath;

/// How the weight reaches `1` at the end of the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeVariant {
    /// Switch to `1` as soon as the path is within `γ/2` of its final value.
    Settle,
    /// Hold the last projected weight and switch to `1` only at the right endpoint.
    EndpointJump,
}

/// Non-decreasing weights `ξ` on `[t1, t2]` with `|x(t) - ν(ξ(t))| <= γ`, where
/// `ν(λ) = x(t1) + λ (x(t2) - x(t1))`.
///
/// The weight path is defined on the whole horizon: `ξ(t1)` before `t1` and `1` after `t2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bridge {
    pub t1: f64,
    pub t2: f64,
    pub weights: StepPath,
    /// Times at which the path left the current `γ`-tube.
    pub stops: Vec<f64>,
}

/// Piecewise-constant causal approximation of `x` on `[t1, t2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedStep {
    pub t1: f64,
    pub t2: f64,
    pub path: StepPath,
    pub stops: Vec<f64>,
}

fn check_interval(x: &StepPath, t1: f64, t2: f64, gamma: f64) -> Result<()> {
    if x.dim() != 1 {
        return Err(Error::Dimension { left: 1, right: x.dim() });
    }
    if !(0.0 <= t1 && t1 < t2 && t2 <= x.horizon()) {
        return Err(Error::InvalidArgument(format!("need 0 <= t1 < t2 <= T, got [{t1}, {t2}]")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

/// Jump times of `x` in `(t1, t2]` with the post-jump value.
fn jumps_in(x: &StepPath, t1: f64, t2: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    (1..x.segment_count())
        .map(move |i| (x.segment_start(i), x.segment_value(i)[0]))
        .skip_while(move |(s, _)| *s <= t1)
        .take_while(move |(s, _)| *s <= t2)
}

pub(crate) fn bridge_unchecked(x: &StepPath, t1: f64, t2: f64, gamma: f64, variant: BridgeVariant) -> Result<Bridge> {
    let x1 = x.eval1(t1)?;
    let x2 = x.eval1(t2)?;
    let span = x2 - x1;
    let project = |v: f64| if span == 0.0 { 0.0 } else { ((v - x1) / span).clamp(0.0, 1.0) };

    let mut stops = Vec::new();
    let mut marks: Vec<(f64, f64)> = vec![(t1, 0.0)];
    let mut w = 0.0;
    for (s, v) in jumps_in(x, t1, t2) {
        if s >= t2 {
            break;
        }
        if (v - (x1 + w * span)).abs() > gamma {
            w = project(v);
            stops.push(s);
            marks.push((s, w));
        }
    }
    let end = match variant {
        BridgeVariant::EndpointJump => t2,
        BridgeVariant::Settle => std::iter::once((t1, x1))
            .chain(jumps_in(x, t1, t2))
            .find(|(_, v)| (v - x2).abs() <= 0.5 * gamma)
            .map(|(s, _)| s)
            .unwrap_or(t2),
    };
    marks.retain(|(s, _)| *s < end);
    marks.push((end, 1.0));
    let initial = marks[0].1;
    let weights = StepPath::sample_on(
        x.horizon(),
        1,
        &marks.iter().map(|m| m.0).collect::<Vec<_>>(),
        |t| {
            let i = marks.partition_point(|m| m.0 <= t);
            vec![if i == 0 { initial } else { marks[i - 1].1 }]
        },
    )?;
    Ok(Bridge { t1, t2, weights, stops })
}

/// Monotone bridge of a scalar path over `[t1, t2]`.
///
/// Requires the M1 modulus of `x` on `[t1, t2]` to be below `γ/2`.
pub fn monotone_bridge(x: &StepPath, t1: f64, t2: f64, gamma: f64, variant: BridgeVariant) -> Result<Bridge> {
    check_interval(x, t1, t2, gamma)?;
    let w = w_prime_window(x, t2 - t1, t1, t2)?;
    if w >= 0.5 * gamma {
        return Err(Error::Precondition(format!("oscillation {w} on [{t1}, {t2}] is not below gamma/2 = {}", 0.5 * gamma)));
    }
    bridge_unchecked(x, t1, t2, gamma, variant)
}

pub(crate) fn adapted_unchecked(x: &StepPath, t1: f64, t2: f64, gamma: f64) -> Result<AdaptedStep> {
    let start = x.eval1(t1)?;
    let mut marks = vec![(t1, start)];
    let mut stops = Vec::new();
    let mut current = start;
    let mut at_end = None;
    for (s, v) in jumps_in(x, t1, t2) {
        if (v - current).abs() > gamma {
            if s >= t2 {
                at_end = Some(v);
                break;
            }
            current = v;
            stops.push(s);
            marks.push((s, v));
        }
    }
    // the value at t2 is the left limit unless x leaves the tube exactly at t2
    marks.push((t2, at_end.unwrap_or(current)));
    let path = StepPath::sample_on(x.horizon(), 1, &marks.iter().map(|m| m.0).collect::<Vec<_>>(), |t| {
        let i = marks.partition_point(|m| m.0 <= t);
        vec![if i == 0 { start } else { marks[i - 1].1 }]
    })?;
    Ok(AdaptedStep { t1, t2, path, stops })
}

/// Causal monotone step approximation of a scalar path over `[t1, t2]`.
///
/// Requires the M1 modulus on `[t1, t2]` below `γ/2` and fewer than `r` increments of size `γ`.
pub fn adapted_monotone_step(x: &StepPath, t1: f64, t2: f64, gamma: f64, r: usize) -> Result<AdaptedStep> {
    check_interval(x, t1, t2, gamma)?;
    let w = w_prime_window(x, t2 - t1, t1, t2)?;
    if w >= 0.5 * gamma {
        return Err(Error::Precondition(format!("oscillation {w} on [{t1}, {t2}] is not below gamma/2")));
    }
    let n = increment_count(x, gamma)?;
    if n >= r {
        return Err(Error::Precondition(format!("{n} increments of size {gamma}, need fewer than {r}")));
    }
    adapted_unchecked(x, t1, t2, gamma)
}

/// Local increment count used by the window decompositions.
pub(crate) fn window_increments(x: &StepPath, gamma: f64, t1: f64, t2: f64) -> Result<usize> {
    increment_count_window(x, gamma, t1, t2)
}

/// `sup_{t ∈ [t1, t2]} |x(t) - ν(ξ(t))|` for a bridge built on `x`.
pub fn bridge_error(x: &StepPath, b: &Bridge) -> Result<f64> {
    let x1 = x.eval1(b.t1)?;
    let span = x.eval1(b.t2)? - x1;
    let mut worst = 0.0f64;
    for t in sample_points(&[x, &b.weights], b.t1, b.t2) {
        let e = (x.eval1(t)? - (x1 + b.weights.eval1(t)? * span)).abs();
        worst = worst.max(e);
    }
    Ok(worst)
}

/// Breakpoints of the given paths inside `[lo, hi]`, with both ends.
pub(crate) fn sample_points(paths: &[&StepPath], lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for p in paths {
        pts.extend(p.jump_times().iter().copied().filter(|&t| t > lo && t <= hi));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Is the path monotone (either direction) on `[lo, hi]`?
pub fn is_monotone_on(p: &StepPath, lo: f64, hi: f64, increasing: bool) -> Result<bool> {
    let pts = sample_points(&[p], lo, hi);
    let mut prev = p.eval1(pts[0])?;
    for &t in &pts[1..] {
        let v = p.eval1(t)?;
        let ok = if increasing { v >= prev - 1e-12 } else { v <= prev + 1e-12 };
        if !ok {
            return Ok(false);
        }
        prev = v;
    }
    Ok(true)
}

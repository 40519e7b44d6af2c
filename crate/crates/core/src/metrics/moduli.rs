//! Oscillation moduli of step paths.
//!
//! The suprema range over continua of time triples, but a step path only takes
//! finitely many values. Times are grouped into classes: each breakpoint on its own,
//! and each open gap between breakpoints. A triple's value depends only on the classes
//! it visits, and each window constraint turns into a test on class endpoints.

use crate::error::{Error, Result};
use crate::path::StepPath;

#[derive(Debug, Clone, Copy)]
struct Class {
    lo: f64,
    hi: f64,
    point: bool,
    rep: f64,
}

/// Classes of `[lo, hi]` cut at the given interior breakpoints.
fn classes(lo: f64, hi: f64, breaks: &[f64]) -> Vec<Class> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&t| t > lo && t < hi).collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = Vec::with_capacity(2 * pts.len());
    for w in pts.windows(2) {
        out.push(Class { lo: w[0], hi: w[0], point: true, rep: w[0] });
        out.push(Class { lo: w[0], hi: w[1], point: false, rep: 0.5 * (w[0] + w[1]) });
    }
    let last = *pts.last().unwrap();
    out.push(Class { lo: last, hi: last, point: true, rep: last });
    out
}

/// `(value, closed)` bounds; the set between them is non-empty.
fn nonempty(lo: (f64, bool), hi: (f64, bool)) -> bool {
    lo.0 < hi.0 || (lo.0 == hi.0 && lo.1 && hi.1)
}

fn tighter_lo(a: (f64, bool), b: (f64, bool)) -> (f64, bool) {
    if a.0 > b.0 {
        a
    } else if b.0 > a.0 {
        b
    } else {
        (a.0, a.1 && b.1)
    }
}

fn tighter_hi(a: (f64, bool), b: (f64, bool)) -> (f64, bool) {
    if a.0 < b.0 {
        a
    } else if b.0 < a.0 {
        b
    } else {
        (a.0, a.1 && b.1)
    }
}

/// Can `u - s <= delta` hold with `s` in class `a` and `u` in class `c`?
fn span_ok(a: &Class, c: &Class, delta: f64) -> bool {
    nonempty((c.lo - a.hi, a.point && c.point), (delta, true))
}

fn scalar_values(x: &StepPath, coord: usize, cls: &[Class], left: bool) -> Vec<f64> {
    cls.iter()
        .map(|c| {
            let i = if left && c.point && c.rep > 0.0 {
                x.left_segment_index(c.rep)
            } else {
                x.segment_index(c.rep)
            };
            x.segment_value(i)[coord]
        })
        .collect()
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("window width must be non-negative, got {delta}")));
    }
    Ok(())
}

fn dist_to_segment(v: f64, a: f64, b: f64) -> f64 {
    (v - a.max(b)).max(a.min(b) - v).max(0.0)
}

/// M1 oscillation modulus on `[lo, hi]`:
/// `sup { dist(x_t, [x_s, x_r]) : lo <= s <= t <= r <= hi, t - s <= δ, r - t <= δ }`,
/// taken coordinatewise and maximised over coordinates.
pub fn w_prime_window(x: &StepPath, delta: f64, lo: f64, hi: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(0.0 <= lo && lo <= hi && hi <= x.horizon()) {
        return Err(Error::Domain { t: if lo < 0.0 { lo } else { hi }, lo: 0.0, hi: x.horizon() });
    }
    let cls = classes(lo, hi, x.jump_times());
    let n = cls.len();
    let mut best = 0.0f64;
    for coord in 0..x.dim() {
        let val = scalar_values(x, coord, &cls, false);
        for b in 1..n.saturating_sub(1) {
            let cb = &cls[b];
            let lo_b = (cb.lo, cb.point);
            let hi_b = (cb.hi, cb.point);
            for a in (0..b).rev() {
                let ca = &cls[a];
                // latest t allowed by s
                let s_cap = (ca.hi + delta, ca.point);
                if !nonempty(lo_b, s_cap) {
                    break;
                }
                for c in b + 1..n {
                    let cc = &cls[c];
                    let r_floor = (cc.lo - delta, cc.point);
                    if !nonempty(r_floor, hi_b) {
                        break;
                    }
                    if nonempty(tighter_lo(lo_b, r_floor), tighter_hi(hi_b, s_cap)) {
                        best = best.max(dist_to_segment(val[b], val[a], val[c]));
                    }
                }
            }
        }
    }
    Ok(best)
}

/// M1 oscillation modulus over the whole horizon.
pub fn w_prime(x: &StepPath, delta: f64) -> Result<f64> {
    w_prime_window(x, delta, 0.0, x.horizon())
}

/// `sup |x_r - x_s|` over `r, s` in `[t - δ, t + δ] ∩ [0, T]`, max-norm.
pub fn u_osc(x: &StepPath, t: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    x.eval(t)?;
    let lo = (t - delta).max(0.0);
    let hi = (t + delta).min(x.horizon());
    let first = x.segment_index(lo);
    let last = x.segment_index(hi);
    let mut best = 0.0f64;
    for coord in 0..x.dim() {
        let (mn, mx) = (first..=last)
            .map(|i| x.segment_value(i)[coord])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        best = best.max(mx - mn);
    }
    Ok(best)
}

fn consecutive_sup(x: &StepPath, y: &StepPath, delta: f64, y_left: bool) -> Result<f64> {
    check_delta(delta)?;
    x.sub(y)?;
    let mut breaks = x.jump_times().to_vec();
    breaks.extend_from_slice(y.jump_times());
    let cls = classes(0.0, x.horizon(), &breaks);
    let n = cls.len();
    let mut best = 0.0f64;
    for coord in 0..x.dim() {
        let xv = scalar_values(x, coord, &cls, false);
        let yv = scalar_values(y, coord, &cls, y_left);
        for a in 0..n {
            for c in a + 2..n {
                if !span_ok(&cls[a], &cls[c], delta) {
                    break;
                }
                for b in a + 1..c {
                    let v = (xv[a] - xv[b]).abs().min((yv[b] - yv[c]).abs());
                    best = best.max(v);
                }
            }
        }
    }
    Ok(best)
}

/// `sup { |x_i(s) - x_i(t)| ∧ |y_i(t) - y_i(u)| : s < t < u <= s + δ, i }`.
///
/// Large values mean an increment of `x` is closely followed by one of `y`.
pub fn hat_w(x: &StepPath, y: &StepPath, delta: f64) -> Result<f64> {
    consecutive_sup(x, y, delta, false)
}

/// As [`hat_w`], with the left-limit path `y_-` in place of `y`.
pub fn hat_w_left(x: &StepPath, y: &StepPath, delta: f64) -> Result<f64> {
    consecutive_sup(x, y, delta, true)
}

/// `sup { |x_u - x_s| ∧ |h_{s-} - h_{r-}| : lo <= u < s < r <= hi }`, max over coordinates.
pub fn window_gamma_sup(x: &StepPath, h: &StepPath, lo: f64, hi: f64) -> Result<f64> {
    x.sub(h)?;
    let mut breaks = x.jump_times().to_vec();
    breaks.extend_from_slice(h.jump_times());
    let cls = classes(lo, hi, &breaks);
    let n = cls.len();
    let mut best = 0.0f64;
    for coord in 0..x.dim() {
        let xv = scalar_values(x, coord, &cls, false);
        let hv = scalar_values(h, coord, &cls, true);
        for a in 0..n {
            for b in a + 1..n {
                let dx = (xv[a] - xv[b]).abs();
                if dx <= best {
                    continue;
                }
                for c in b + 1..n {
                    best = best.max(dx.min((hv[b] - hv[c]).abs()));
                }
            }
        }
    }
    Ok(best)
}

/// Greedy count of successive disjoint increments of max-norm size at least `a`.
pub fn increment_count(x: &StepPath, a: f64) -> Result<usize> {
    increment_count_window(x, a, 0.0, x.horizon())
}

/// [`increment_count`] for the path restricted to `[lo, hi]`.
pub fn increment_count_window(x: &StepPath, a: f64, lo: f64, hi: f64) -> Result<usize> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("increment threshold must be positive, got {a}")));
    }
    x.eval(lo)?;
    x.eval(hi)?;
    let d = x.dim();
    let first = x.segment_index(lo);
    let last = x.segment_index(hi);
    let mut lo = x.segment_value(first).to_vec();
    let mut hi = lo.clone();
    let mut count = 0;
    for i in first + 1..=last {
        let v = x.segment_value(i);
        let hit = (0..d).any(|k| v[k] - lo[k] >= a || hi[k] - v[k] >= a);
        if hit {
            count += 1;
            lo.copy_from_slice(v);
            hi.copy_from_slice(v);
        } else {
            for k in 0..d {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
    }
    Ok(count)
}

/// First time after `t` at which the path has moved more than `a` within a trailing
/// window of width `mu` (not reaching back before `t`).
///
/// Returns `T + 1` when no such time exists.
pub fn varsigma(alpha: &StepPath, a: f64, t: f64, mu: f64) -> Result<f64> {
    alpha.eval(t)?;
    check_delta(mu)?;
    let start = alpha.segment_index(t) + 1;
    for k in start..alpha.segment_count() {
        let s = alpha.segment_start(k);
        let window_lo = t.max(s - mu);
        let vk = alpha.segment_value(k);
        let first = alpha.segment_index(window_lo);
        let moved = (first..k).any(|j| {
            alpha.segment_value(j).iter().zip(vk).any(|(p, q)| (p - q).abs() > a)
        });
        if moved {
            return Ok(s);
        }
    }
    Ok(alpha.horizon() + 1.0)
}

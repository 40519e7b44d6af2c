use crate::error::Result;
use crate::path::{StepPath, TOL};

fn value_gap(x: &StepPath, i: usize, y: &StepPath, j: usize) -> f64 {
    x.segment_value(i)
        .iter()
        .zip(y.segment_value(j))
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Decides whether some time change `λ` has `|λ - id| <= eps` and `|x∘λ - y| <= eps`.
///
/// States `(i, j)` mean "x is on its segment `i`, y on its segment `j`". Each state keeps
/// the earliest time (in y's clock) at which it can be entered; x's jumps are placed at
/// the earliest admissible time.
pub fn j1_feasible(x: &StepPath, y: &StepPath, eps: f64) -> bool {
    let horizon = y.horizon();
    let xs = x.jump_times();
    let ys = y.jump_times();
    let (k, m) = (xs.len(), ys.len());
    let slack = TOL * (1.0 + eps.abs());
    let ok = |i: usize, j: usize| value_gap(x, i, y, j) <= eps + slack;
    let at_end = |t: f64| t >= horizon - TOL;

    let mut dp = vec![f64::INFINITY; (k + 1) * (m + 1)];
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    if !ok(0, 0) {
        return false;
    }
    dp[idx(0, 0)] = 0.0;
    for i in 0..=k {
        for j in 0..=m {
            let c = dp[idx(i, j)];
            if !c.is_finite() {
                continue;
            }
            // y jumps alone
            if j < m && ok(i, j + 1) && c <= ys[j] + slack {
                let e = &mut dp[idx(i, j + 1)];
                *e = e.min(ys[j]);
            }
            // x jumps alone, before y's next jump
            if i < k && ok(i + 1, j) && (at_end(xs[i]) || !at_end(c)) {
                let t = xs[i];
                let p = if at_end(t) { horizon } else { c.max(t - eps) };
                let fits_window = p <= t + eps + slack && p >= c - slack;
                let before_next = j == m || p <= ys[j] + slack;
                if fits_window && before_next {
                    let e = &mut dp[idx(i + 1, j)];
                    *e = e.min(p);
                }
            }
            // both jump together
            if i < k && j < m && ok(i + 1, j + 1) {
                let (t, s) = (xs[i], ys[j]);
                if c <= s + slack && (s - t).abs() <= eps + slack && at_end(t) == at_end(s) {
                    let e = &mut dp[idx(i + 1, j + 1)];
                    *e = e.min(s);
                }
            }
        }
    }
    dp[idx(k, m)].is_finite()
}

/// Exact J1 distance between step paths on a common horizon.
///
/// The optimum is one of finitely many critical values (value gaps between segments,
/// gaps between jump times); a binary search over them with [`j1_feasible`] finds it.
pub fn d_j1(x: &StepPath, y: &StepPath) -> Result<f64> {
    x.sub(y)?;
    let mut cands = vec![0.0];
    for i in 0..x.segment_count() {
        for j in 0..y.segment_count() {
            cands.push(value_gap(x, i, y, j));
        }
    }
    for &t in x.jump_times() {
        for &s in y.jump_times() {
            cands.push((t - s).abs());
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    debug_assert!(j1_feasible(x, y, cands[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if j1_feasible(x, y, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(cands[lo])
}

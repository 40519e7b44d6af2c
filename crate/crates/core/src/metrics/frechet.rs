//! Fréchet distance between polygonal curves under the max-norm.

type Interval = Option<(f64, f64)>;

const SLACK: f64 = 1e-12;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Parameters `s ∈ [0, 1]` with `|a + s (b - a) - p|_∞ <= eps`.
fn free(p: &[f64], a: &[f64], b: &[f64], eps: f64) -> Interval {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for ((&pc, &ac), &bc) in p.iter().zip(a).zip(b) {
        let off = ac - pc;
        let slope = bc - ac;
        if slope == 0.0 {
            if off.abs() > eps {
                return None;
            }
            continue;
        }
        let (s1, s2) = ((-eps - off) / slope, (eps - off) / slope);
        lo = lo.max(s1.min(s2));
        hi = hi.min(s1.max(s2));
    }
    (lo <= hi + SLACK).then(|| (lo.min(hi), hi))
}

fn clip_from(iv: Interval, from: f64) -> Interval {
    iv.and_then(|(lo, hi)| (hi + SLACK >= from).then(|| (lo.max(from).min(hi), hi)))
}

fn reaches_top(iv: Interval) -> bool {
    matches!(iv, Some((_, hi)) if hi >= 1.0 - SLACK)
}

fn starts_at_bottom(iv: Interval) -> bool {
    matches!(iv, Some((lo, _)) if lo <= SLACK)
}

/// Free-space reachability test: is the Fréchet distance at most `eps`?
pub fn frechet_decide(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> bool {
    let eps = eps + SLACK * (1.0 + eps);
    let (p, q) = (a.len() - 1, b.len() - 1);
    if dist(&a[0], &b[0]) > eps || dist(&a[p], &b[q]) > eps {
        return false;
    }
    if p == 0 || q == 0 {
        // one curve is a point: every vertex of the other must be close to it
        return a.iter().all(|u| b.iter().all(|v| dist(u, v) <= eps));
    }
    // left[i][j]: reachable part of the edge {a_i} x b_j..b_{j+1}
    // bottom[i][j]: reachable part of the edge a_i..a_{i+1} x {b_j}
    let mut left = vec![vec![None; q]; p + 1];
    let mut bottom = vec![vec![None; q + 1]; p];

    let mut open = true;
    for j in 0..q {
        let iv = free(&a[0], &b[j], &b[j + 1], eps);
        if open && starts_at_bottom(iv) {
            left[0][j] = iv.map(|(_, hi)| (0.0, hi));
            open = reaches_top(iv);
        } else {
            open = false;
        }
    }
    let mut open = true;
    for i in 0..p {
        let iv = free(&b[0], &a[i], &a[i + 1], eps);
        if open && starts_at_bottom(iv) {
            bottom[i][0] = iv.map(|(_, hi)| (0.0, hi));
            open = reaches_top(iv);
        } else {
            open = false;
        }
    }

    for i in 0..p {
        for j in 0..q {
            let l = left[i][j];
            let bt = bottom[i][j];
            if l.is_none() && bt.is_none() {
                continue;
            }
            let right_free = free(&a[i + 1], &b[j], &b[j + 1], eps);
            left[i + 1][j] = match (bt, l) {
                (Some(_), _) => right_free,
                (None, Some((lo, _))) => clip_from(right_free, lo),
                (None, None) => None,
            };
            let top_free = free(&b[j + 1], &a[i], &a[i + 1], eps);
            bottom[i][j + 1] = match (l, bt) {
                (Some(_), _) => top_free,
                (None, Some((lo, _))) => clip_from(top_free, lo),
                (None, None) => None,
            };
        }
    }
    reaches_top(left[p][q - 1]) || reaches_top(bottom[p - 1][q])
}

/// Fréchet distance, returned as a feasible upper bound at most `tol` above the exact value.
pub fn frechet_distance(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> f64 {
    let mut lo = dist(&a[0], &b[0]).max(dist(a.last().unwrap(), b.last().unwrap()));
    if frechet_decide(a, b, lo) {
        return lo;
    }
    let mut hi = a
        .iter()
        .flat_map(|u| b.iter().map(move |v| dist(u, v)))
        .fold(lo, f64::max);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if frechet_decide(a, b, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

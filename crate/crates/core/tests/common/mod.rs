//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use cadlag::StepPath;
use proptest::prelude::*;
use rand::Rng;

fn gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (p, q)| m.max((p - q).abs()))
}

/// J1 distance by enumerating every interleaving of the two jump sequences.
///
/// Each step either moves `x` alone, `y` alone, or both together. Lone `x` jumps are
/// placed as close to their own time as the surrounding `y` jumps allow.
pub fn j1_oracle(x: &StepPath, y: &StepPath) -> f64 {
    let horizon = x.horizon();
    let xs = x.jump_times().to_vec();
    let ys = y.jump_times().to_vec();
    let mut best = f64::INFINITY;
    // (i, j): jumps of x and y already passed; lone x jumps waiting for their gap
    fn walk(
        i: usize,
        j: usize,
        cost: f64,
        pending: &mut Vec<usize>,
        ctx: &(f64, &[f64], &[f64], &StepPath, &StepPath),
        best: &mut f64,
    ) {
        let (horizon, xs, ys, x, y) = *ctx;
        let cost = cost.max(gap(x.segment_value(i), y.segment_value(j)));
        if cost >= *best {
            return;
        }
        // lone x jumps sit in the gap after the last y jump
        let lo = if j == 0 { 0.0 } else { ys[j - 1] };
        let close_gap = |pending: &[usize], hi: f64| -> Option<f64> {
            let mut c = 0.0f64;
            for &k in pending {
                let s = xs[k];
                if s >= horizon {
                    if hi < horizon || lo >= horizon {
                        return None;
                    }
                    continue;
                }
                if lo >= hi || lo >= horizon {
                    return None;
                }
                c = c.max((s - s.clamp(lo, hi)).abs());
            }
            Some(c)
        };
        if i == xs.len() && j == ys.len() {
            if let Some(c) = close_gap(pending, horizon) {
                *best = best.min(cost.max(c));
            }
            return;
        }
        if i < xs.len() {
            pending.push(i);
            walk(i + 1, j, cost, pending, ctx, best);
            pending.pop();
        }
        if j < ys.len() {
            let t = ys[j];
            if let Some(c) = close_gap(pending, t) {
                let saved = std::mem::take(pending);
                walk(i, j + 1, cost.max(c), pending, ctx, best);
                if i < xs.len() && ((xs[i] >= horizon) == (t >= horizon)) {
                    walk(i + 1, j + 1, cost.max(c).max((xs[i] - t).abs()), pending, ctx, best);
                }
                *pending = saved;
            }
        }
    }
    let ctx = (horizon, xs.as_slice(), ys.as_slice(), x, y);
    walk(0, 0, 0.0, &mut Vec::new(), &ctx, &mut best);
    best
}

/// Points along a polyline, no two consecutive further apart than `h` (max-norm).
fn densify(vertices: &[Vec<f64>], h: f64) -> Vec<[f64; 2]> {
    let mut out = vec![[vertices[0][0], vertices[0][1]]];
    for w in vertices.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let len = (b[0] - a[0]).abs().max((b[1] - a[1]).abs());
        let k = ((len / h).ceil() as usize).max(1);
        for i in 1..=k {
            let f = i as f64 / k as f64;
            out.push([a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]);
        }
    }
    out
}

/// Discrete Fréchet distance between two point sequences, max-norm.
pub fn discrete_frechet(p: &[[f64; 2]], q: &[[f64; 2]]) -> f64 {
    let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
    let mut prev = vec![0.0f64; q.len()];
    let mut cur = vec![0.0f64; q.len()];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            let reach = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = d(a, b).max(reach);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[q.len() - 1]
}

/// M1 distance (largest over coordinates) from discrete Fréchet on completed graphs
/// sampled with spacing `h`; within `h` above the exact value.
pub fn m1_oracle(x: &StepPath, y: &StepPath, h: f64) -> f64 {
    (0..x.dim())
        .map(|i| {
            let a = densify(&x.coordinate(i).unwrap().completed_graph().vertices(), h);
            let b = densify(&y.coordinate(i).unwrap().completed_graph().vertices(), h);
            discrete_frechet(&a, &b)
        })
        .fold(0.0, f64::max)
}

/// Scalar step path with up to `max_jumps` jumps at multiples of `T/16` in `(0, T]`,
/// values multiples of `1/4` in `[-1, 1]`.
pub fn grid_path(rng: &mut impl Rng, horizon: f64, max_jumps: usize) -> StepPath {
    let n = rng.gen_range(0..=max_jumps);
    let mut slots: Vec<u32> = (1..=16).collect();
    let mut times = Vec::new();
    for _ in 0..n {
        let k = rng.gen_range(0..slots.len());
        times.push(slots.swap_remove(k));
    }
    times.sort_unstable();
    let value = |rng: &mut dyn rand::RngCore| f64::from(rng.gen_range(-4i32..=4)) / 4.0;
    let jumps: Vec<(f64, f64)> = times.iter().map(|&k| (horizon * f64::from(k) / 16.0, value(rng))).collect();
    StepPath::scalar(horizon, value(rng), &jumps).unwrap()
}

/// Scalar step path with up to `max_jumps` jumps at continuous times and values.
pub fn continuous_path(rng: &mut impl Rng, horizon: f64, max_jumps: usize) -> StepPath {
    let n = rng.gen_range(0..=max_jumps);
    let mut times: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..horizon)).filter(|t| *t > 0.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let jumps: Vec<(f64, f64)> = times.iter().map(|&t| (t, rng.gen_range(-2.0..2.0))).collect();
    StepPath::scalar(horizon, rng.gen_range(-2.0..2.0), &jumps).unwrap()
}

/// Proptest strategy: scalar path on `[0, horizon]` with jumps on a `1/16` grid (ties likely).
pub fn arb_grid_path(horizon: f64, max_jumps: usize) -> impl Strategy<Value = StepPath> {
    (
        -4i32..=4,
        proptest::collection::btree_map(1u32..=16, -4i32..=4, 0..=max_jumps),
    )
        .prop_map(move |(v0, jumps)| {
            let jumps: Vec<(f64, f64)> = jumps
                .into_iter()
                .map(|(k, v)| (horizon * f64::from(k) / 16.0, f64::from(v) / 4.0))
                .collect();
            StepPath::scalar(horizon, f64::from(v0) / 4.0, &jumps).unwrap()
        })
}

/// Proptest strategy: scalar path with jumps at arbitrary times in `(0, horizon)`.
pub fn arb_path(horizon: f64, max_jumps: usize) -> impl Strategy<Value = StepPath> {
    (
        -2.0f64..2.0,
        proptest::collection::vec((0.001f64..0.999, -2.0f64..2.0), 0..=max_jumps),
    )
        .prop_map(move |(v0, mut jumps)| {
            jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
            jumps.dedup_by(|a, b| a.0 == b.0);
            let jumps: Vec<(f64, f64)> = jumps.into_iter().map(|(t, v)| (t * horizon, v)).collect();
            StepPath::scalar(horizon, v0, &jumps).unwrap()
        })
}

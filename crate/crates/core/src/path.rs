//! Right-continuous step paths on `[0, T]` with values in `R^d`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Comparison slack for times and values.
pub const TOL: f64 = 1e-12;

/// A càdlàg step path: constant on `[t_i, t_{i+1})`, finitely many jumps in `(0, T]`.
///
/// Segment `0` starts at time `0`; segment `i > 0` starts at the `i`-th jump time.
/// Consecutive segments always carry different values.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    dim: usize,
    horizon: f64,
    starts: Vec<f64>,
    values: Vec<f64>,
}

/// A straight piece of the completed graph, from `(t0, v0)` to `(t1, v1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub v0: Vec<f64>,
    pub t1: f64,
    pub v1: Vec<f64>,
}

impl Segment {
    pub fn is_vertical(&self) -> bool {
        self.t0 == self.t1
    }
}

/// The completed graph: horizontal pieces on flat stretches, vertical pieces at jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedGraph {
    pub segments: Vec<Segment>,
}

impl CompletedGraph {
    /// Polyline vertices `(t, v_1, .., v_d)` in traversal order.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        if let Some(first) = self.segments.first() {
            out.push(point(first.t0, &first.v0));
        }
        for s in &self.segments {
            out.push(point(s.t1, &s.v1));
        }
        out
    }
}

fn point(t: f64, v: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(v.len() + 1);
    p.push(t);
    p.extend_from_slice(v);
    p
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl StepPath {
    /// Builds a path from its initial value and `(time, post-jump value)` pairs.
    ///
    /// Jump times must lie in `(0, T]` and increase strictly. Jumps that do not
    /// change the value are dropped.
    pub fn new(horizon: f64, initial: Vec<f64>, jumps: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidPath(format!("horizon must be positive, got {horizon}")));
        }
        let dim = initial.len();
        if dim == 0 {
            return Err(Error::InvalidPath("dimension must be at least 1".into()));
        }
        let mut starts = vec![0.0];
        let mut values = initial;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPath("non-finite initial value".into()));
        }
        let mut prev_t = 0.0;
        for (t, v) in jumps {
            if v.len() != dim {
                return Err(Error::Dimension { left: dim, right: v.len() });
            }
            if !(t > prev_t) {
                return Err(Error::InvalidPath(format!(
                    "jump times must increase strictly in (0, T], got {t} after {prev_t}"
                )));
            }
            if t > horizon {
                return Err(Error::InvalidPath(format!("jump time {t} beyond horizon {horizon}")));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPath(format!("non-finite value at {t}")));
            }
            prev_t = t;
            let last = &values[values.len() - dim..];
            if last == v.as_slice() {
                continue;
            }
            starts.push(t);
            values.extend_from_slice(&v);
        }
        Ok(StepPath { dim, horizon, starts, values })
    }

    /// Scalar path from an initial value and `(time, post-jump value)` pairs.
    pub fn scalar(horizon: f64, initial: f64, jumps: &[(f64, f64)]) -> Result<Self> {
        StepPath::new(horizon, vec![initial], jumps.iter().map(|&(t, v)| (t, vec![v])).collect())
    }

    /// Scalar path from an initial value and `(time, jump size)` pairs.
    pub fn scalar_increments(horizon: f64, initial: f64, jumps: &[(f64, f64)]) -> Result<Self> {
        let mut level = initial;
        let posts: Vec<(f64, f64)> = jumps
            .iter()
            .map(|&(t, dv)| {
                level += dv;
                (t, level)
            })
            .collect();
        StepPath::scalar(horizon, initial, &posts)
    }

    pub fn constant(horizon: f64, value: Vec<f64>) -> Result<Self> {
        StepPath::new(horizon, value, Vec::new())
    }

    pub fn zero(horizon: f64, dim: usize) -> Result<Self> {
        StepPath::constant(horizon, vec![0.0; dim])
    }

    /// `height * 1_{[t, ∞)}` restricted to `[0, T]`; `t` must lie in `(0, T]`.
    pub fn indicator(horizon: f64, t: f64, height: f64) -> Result<Self> {
        StepPath::scalar(horizon, 0.0, &[(t, height)])
    }

    /// Rebuilds a path from arbitrary sorted segment starts (first must be `0`),
    /// merging equal neighbours.
    pub(crate) fn from_segments(horizon: f64, dim: usize, starts: &[f64], values: &[f64]) -> Result<Self> {
        debug_assert_eq!(starts.len() * dim, values.len());
        if starts.first() != Some(&0.0) {
            return Err(Error::InvalidPath("first segment must start at 0".into()));
        }
        let initial = values[..dim].to_vec();
        let jumps = starts[1..]
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, values[(i + 1) * dim..(i + 2) * dim].to_vec()))
            .collect();
        StepPath::new(horizon, initial, jumps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn initial_value(&self) -> &[f64] {
        self.segment_value(0)
    }

    /// Number of constant segments (jumps + 1).
    pub fn segment_count(&self) -> usize {
        self.starts.len()
    }

    pub fn segment_start(&self, i: usize) -> f64 {
        self.starts[i]
    }

    pub fn segment_value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Jump times in increasing order.
    pub fn jump_times(&self) -> &[f64] {
        &self.starts[1..]
    }

    pub fn jump_count(&self) -> usize {
        self.starts.len() - 1
    }

    /// `(time, post-jump value)` pairs.
    pub fn jumps(&self) -> Vec<(f64, Vec<f64>)> {
        (1..self.segment_count())
            .map(|i| (self.starts[i], self.segment_value(i).to_vec()))
            .collect()
    }

    /// Index of the segment containing `t` (right-continuous convention).
    pub(crate) fn segment_index(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t) - 1
    }

    /// Index of the segment holding the left limit at `t`.
    pub(crate) fn left_segment_index(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s < t).max(1) - 1
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::Domain { t, lo: 0.0, hi: self.horizon });
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<&[f64]> {
        self.check_domain(t)?;
        Ok(self.segment_value(self.segment_index(t)))
    }

    /// Scalar shortcut for `eval(t)[0]`.
    pub fn eval1(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?[0])
    }

    /// Left limit `p(t-)`; defined for `t` in `(0, T]`.
    pub fn left_limit(&self, t: f64) -> Result<&[f64]> {
        if !(t > 0.0 && t <= self.horizon) {
            return Err(Error::Domain { t, lo: 0.0, hi: self.horizon });
        }
        Ok(self.segment_value(self.left_segment_index(t)))
    }

    /// Jump `p(t) - p(t-)`; zero at `t = 0` and at continuity points.
    pub fn jump_at(&self, t: f64) -> Result<Vec<f64>> {
        self.check_domain(t)?;
        let i = self.segment_index(t);
        if i == 0 || self.starts[i] != t {
            return Ok(vec![0.0; self.dim]);
        }
        Ok(self
            .segment_value(i)
            .iter()
            .zip(self.segment_value(i - 1))
            .map(|(a, b)| a - b)
            .collect())
    }

    /// `(time, jump)` for every jump at or before `t`.
    pub fn jumps_up_to(&self, t: f64) -> Vec<(f64, Vec<f64>)> {
        (1..self.segment_count())
            .take_while(|&i| self.starts[i] <= t)
            .map(|i| {
                let d = self
                    .segment_value(i)
                    .iter()
                    .zip(self.segment_value(i - 1))
                    .map(|(a, b)| a - b)
                    .collect();
                (self.starts[i], d)
            })
            .collect()
    }

    /// Sum over jumps at or before `t` of the coordinatewise absolute jump sizes.
    pub fn total_variation(&self, t: f64) -> f64 {
        (1..self.segment_count())
            .take_while(|&i| self.starts[i] <= t)
            .map(|i| {
                self.segment_value(i)
                    .iter()
                    .zip(self.segment_value(i - 1))
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
            })
            .sum()
    }

    /// `sup_{s <= t} max_i |p_i(s)|`.
    pub fn running_sup(&self, t: f64) -> f64 {
        (0..self.segment_count())
            .take_while(|&i| self.starts[i] <= t)
            .map(|i| max_abs(self.segment_value(i)))
            .fold(0.0, f64::max)
    }

    /// `sup_t max_i |p_i(t)|` over the whole horizon.
    pub fn sup_norm(&self) -> f64 {
        self.running_sup(self.horizon)
    }

    /// Largest jump in max-norm.
    pub fn max_jump(&self) -> f64 {
        self.jumps_up_to(self.horizon).iter().map(|(_, d)| max_abs(d)).fold(0.0, f64::max)
    }

    pub fn completed_graph(&self) -> CompletedGraph {
        let mut segments = Vec::with_capacity(2 * self.segment_count());
        for i in 0..self.segment_count() {
            let v = self.segment_value(i).to_vec();
            let t0 = self.starts[i];
            let t1 = self.starts.get(i + 1).copied().unwrap_or(self.horizon);
            if t1 > t0 {
                segments.push(Segment { t0, v0: v.clone(), t1, v1: v.clone() });
            }
            if i + 1 < self.segment_count() {
                segments.push(Segment { t0: t1, v0: v, t1, v1: self.segment_value(i + 1).to_vec() });
            }
        }
        CompletedGraph { segments }
    }

    /// Coordinate `i` as a scalar path.
    pub fn coordinate(&self, i: usize) -> Result<StepPath> {
        if i >= self.dim {
            return Err(Error::Dimension { left: self.dim, right: i + 1 });
        }
        let values: Vec<f64> = (0..self.segment_count()).map(|k| self.segment_value(k)[i]).collect();
        StepPath::from_segments(self.horizon, 1, &self.starts, &values)
    }

    /// Pointwise map of values.
    pub fn map(&self, f: impl Fn(&[f64], &mut [f64])) -> StepPath {
        let mut values = vec![0.0; self.values.len()];
        for i in 0..self.segment_count() {
            f(self.segment_value(i), &mut values[i * self.dim..(i + 1) * self.dim]);
        }
        StepPath::from_segments(self.horizon, self.dim, &self.starts, &values)
            .expect("map preserves a valid segment layout")
    }

    pub fn scale(&self, c: f64) -> StepPath {
        self.map(|v, out| out.iter_mut().zip(v).for_each(|(o, x)| *o = c * x))
    }

    fn check_compatible(&self, other: &StepPath) -> Result<()> {
        if (self.horizon - other.horizon).abs() > TOL {
            return Err(Error::Horizon { left: self.horizon, right: other.horizon });
        }
        if self.dim != other.dim {
            return Err(Error::Dimension { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    /// Merged, strictly increasing segment starts of two paths.
    pub(crate) fn merged_starts(&self, other: &StepPath) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.starts.len() + other.starts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.starts.len() || j < other.starts.len() {
            let a = self.starts.get(i).copied().unwrap_or(f64::INFINITY);
            let b = other.starts.get(j).copied().unwrap_or(f64::INFINITY);
            let t = a.min(b);
            if a == t {
                i += 1;
            }
            if b == t {
                j += 1;
            }
            out.push(t);
        }
        out
    }

    /// Pointwise combination of two paths on the same horizon and dimension.
    pub fn zip_with(&self, other: &StepPath, f: impl Fn(f64, f64) -> f64) -> Result<StepPath> {
        self.check_compatible(other)?;
        let starts = self.merged_starts(other);
        let d = self.dim;
        let mut values = Vec::with_capacity(starts.len() * d);
        for &t in &starts {
            let a = self.segment_value(self.segment_index(t));
            let b = other.segment_value(other.segment_index(t));
            values.extend(a.iter().zip(b).map(|(x, y)| f(*x, *y)));
        }
        StepPath::from_segments(self.horizon, d, &starts, &values)
    }

    pub fn add(&self, other: &StepPath) -> Result<StepPath> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepPath) -> Result<StepPath> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Sup-norm distance `sup_t max_i |x_i(t) - y_i(t)|`.
    pub fn sup_distance(&self, other: &StepPath) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    /// The path frozen at its value at `t` from `t` onwards.
    pub fn stopped_at(&self, t: f64) -> Result<StepPath> {
        self.check_domain(t)?;
        let k = self.segment_index(t);
        StepPath::from_segments(
            self.horizon,
            self.dim,
            &self.starts[..=k],
            &self.values[..(k + 1) * self.dim],
        )
    }

    /// Builds a path on `[0, T]` whose value on each piece of `breaks` is `f(piece start)`.
    ///
    /// `breaks` need not be sorted or unique; `0` is always included.
    pub fn sample_on(
        horizon: f64,
        dim: usize,
        breaks: &[f64],
        f: impl Fn(f64) -> Vec<f64>,
    ) -> Result<StepPath> {
        let mut starts: Vec<f64> = breaks.iter().copied().filter(|&t| t > 0.0 && t <= horizon).collect();
        starts.push(0.0);
        starts.sort_by(f64::total_cmp);
        starts.dedup();
        let mut values = Vec::with_capacity(starts.len() * dim);
        for &t in &starts {
            let v = f(t);
            if v.len() != dim {
                return Err(Error::Dimension { left: dim, right: v.len() });
            }
            values.extend(v);
        }
        StepPath::from_segments(horizon, dim, &starts, &values)
    }

    /// Stacks scalar paths on a common horizon into one vector path.
    pub fn stack(coords: &[StepPath]) -> Result<StepPath> {
        let first = coords.first().ok_or_else(|| Error::InvalidPath("nothing to stack".into()))?;
        let horizon = first.horizon;
        let mut breaks = Vec::new();
        for c in coords {
            if c.dim != 1 {
                return Err(Error::Dimension { left: 1, right: c.dim });
            }
            if (c.horizon - horizon).abs() > TOL {
                return Err(Error::Horizon { left: horizon, right: c.horizon });
            }
            breaks.extend_from_slice(c.jump_times());
        }
        StepPath::sample_on(horizon, coords.len(), &breaks, |t| {
            coords.iter().map(|c| c.segment_value(c.segment_index(t))[0]).collect()
        })
    }

    /// The path read at `clamp(t, lo, hi)`: constant before `lo` and after `hi`.
    pub fn frozen_outside(&self, lo: f64, hi: f64) -> Result<StepPath> {
        self.check_domain(lo)?;
        self.check_domain(hi)?;
        let mut breaks: Vec<f64> = self.jump_times().iter().copied().filter(|&t| t > lo && t <= hi).collect();
        breaks.push(lo);
        StepPath::sample_on(self.horizon, self.dim, &breaks, |t| {
            self.segment_value(self.segment_index(t.clamp(lo, hi))).to_vec()
        })
    }

    /// CSV text: header `t,v1,..,vd`, one row per segment start, trailer `# T=<horizon>`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for i in 1..=self.dim {
            let _ = write!(s, ",v{i}");
        }
        s.push('\n');
        for i in 0..self.segment_count() {
            let _ = write!(s, "{}", self.starts[i]);
            for v in self.segment_value(i) {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "# T={}", self.horizon);
        s
    }

    pub fn from_csv(text: &str) -> Result<StepPath> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t") || cols.len() < 2 {
            return Err(Error::Parse { line: 1, msg: format!("bad header `{header}`") });
        }
        let dim = cols.len() - 1;
        let mut horizon = None;
        let mut rows: Vec<(f64, Vec<f64>)> = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(val) = rest.trim().strip_prefix("T=") {
                    let t = val.trim().parse::<f64>().map_err(|e| Error::Parse { line: no + 1, msg: e.to_string() })?;
                    horizon = Some(t);
                }
                continue;
            }
            let nums = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Parse { line: no + 1, msg: e.to_string() })?;
            if nums.len() != dim + 1 {
                return Err(Error::Parse { line: no + 1, msg: format!("expected {} fields", dim + 1) });
            }
            rows.push((nums[0], nums[1..].to_vec()));
        }
        let horizon = horizon.ok_or(Error::Parse { line: 0, msg: "missing `# T=` trailer".into() })?;
        let mut rows = rows.into_iter();
        let (t0, initial) = rows.next().ok_or(Error::Parse { line: 2, msg: "missing initial row".into() })?;
        if t0 != 0.0 {
            return Err(Error::Parse { line: 2, msg: "first row must be at t=0".into() });
        }
        StepPath::new(horizon, initial, rows.collect())
    }
}

use crate::error::{Error, Result};

const MEMBER_TOL: f64 = 1e-12;

/// A finite partition `0 = ν_1 < ν_2 < .. <= T` used to close excursion windows.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionGrid {
    points: Vec<f64>,
    horizon: f64,
    mesh: f64,
    min_gap: f64,
}

impl PartitionGrid {
    pub fn new(points: Vec<f64>, horizon: f64) -> Result<Self> {
        if points.first() != Some(&0.0) {
            return Err(Error::InvalidGrid("grid must start at 0".into()));
        }
        if points.len() < 2 {
            return Err(Error::InvalidGrid("grid needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("grid points must increase strictly".into()));
        }
        if *points.last().unwrap() > horizon {
            return Err(Error::InvalidGrid(format!("grid point beyond horizon {horizon}")));
        }
        let gaps = points.windows(2).map(|w| w[1] - w[0]);
        let mesh = gaps.clone().fold(0.0, f64::max);
        let min_gap = gaps.fold(f64::INFINITY, f64::min);
        Ok(PartitionGrid { points, horizon, mesh, min_gap })
    }

    /// `{0, h, 2h, ..} ∩ [0, T]`.
    pub fn uniform(horizon: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        let n = (horizon / step + MEMBER_TOL).floor() as usize;
        PartitionGrid::new((0..=n).map(|k| k as f64 * step).collect(), horizon)
    }

    /// Mesh `2^-level * T`, shifted so that no point other than `0` falls on `avoid`
    /// and the mesh differs from every gap between points of `avoid`.
    ///
    /// The first shift tried is `(1 - 1/√2)` of a mesh; halves and quarters follow.
    pub fn dyadic(horizon: f64, level: u32, avoid: &[f64]) -> Result<Self> {
        let h = horizon / f64::from(1u32 << level.min(30));
        for a in avoid {
            for b in avoid {
                if ((a - b).abs() - h).abs() <= MEMBER_TOL * horizon {
                    return Err(Error::InvalidGrid(format!(
                        "mesh {h} equals the gap between discontinuities {a} and {b}"
                    )));
                }
            }
        }
        let shifts = [1.0 - std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.25, 0.75, 0.125, 0.375];
        for frac in shifts {
            let c = frac * h;
            let mut pts = vec![0.0];
            let mut k = 0;
            loop {
                let p = c + k as f64 * h;
                if p > horizon {
                    break;
                }
                pts.push(p);
                k += 1;
            }
            let hits = pts[1..]
                .iter()
                .any(|p| avoid.iter().any(|a| (p - a).abs() <= MEMBER_TOL * horizon.max(1.0)));
            if !hits && pts.len() >= 2 {
                let mut g = PartitionGrid::new(pts, horizon)?;
                g.mesh = h;
                return Ok(g);
            }
        }
        Err(Error::InvalidGrid("no shift avoids the given discontinuities".into()))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Largest gap between consecutive points.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Smallest gap between consecutive points.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.points.partition_point(|&p| p < x - MEMBER_TOL);
        self.points.get(i).is_some_and(|&p| (p - x).abs() <= MEMBER_TOL)
    }

    /// Smallest grid point strictly after `x` (at least half a minimal gap after, if `x` is a point).
    pub fn ceil(&self, x: f64) -> Result<f64> {
        let target = if self.contains(x) { x + 0.5 * self.min_gap } else { x };
        let i = self.points.partition_point(|&p| p < target);
        self.points.get(i).copied().ok_or_else(|| {
            Error::Domain { t: x, lo: 0.0, hi: *self.points.last().unwrap() }
        })
    }

    /// Largest grid point strictly before `x` (at least half a minimal gap before, if `x` is a point).
    pub fn floor(&self, x: f64) -> Result<f64> {
        let target = if self.contains(x) { x - 0.5 * self.min_gap } else { x };
        let i = self.points.partition_point(|&p| p <= target);
        if i == 0 {
            return Err(Error::Domain { t: x, lo: 0.0, hi: *self.points.last().unwrap() });
        }
        Ok(self.points[i - 1])
    }
}

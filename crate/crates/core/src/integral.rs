//! Pathwise Stieltjes integrals of step integrands against step integrators.

use crate::error::{Error, Result};
use crate::path::{StepPath, TOL};

fn same_frame(h: &StepPath, x: &StepPath) -> Result<()> {
    h.sub(x).map(|_| ())
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `t ↦ Σ_{s <= t} H(s-) ΔX(s)`, coordinatewise.
pub fn ito_integral(h: &StepPath, x: &StepPath) -> Result<StepPath> {
    same_frame(h, x)?;
    let d = x.dim();
    let mut level = vec![0.0; d];
    let mut jumps = Vec::with_capacity(x.jump_count());
    for i in 1..x.segment_count() {
        let s = x.segment_start(i);
        let dx = diff(x.segment_value(i), x.segment_value(i - 1));
        let hl = h.left_limit(s)?;
        for k in 0..d {
            level[k] += hl[k] * dx[k];
        }
        jumps.push((s, level.clone()));
    }
    StepPath::new(x.horizon(), vec![0.0; d], jumps)
}

/// `Σ_{a < s <= b} H(s-) ΔX(s)`, coordinatewise.
pub fn integral_between(h: &StepPath, x: &StepPath, a: f64, b: f64) -> Result<Vec<f64>> {
    same_frame(h, x)?;
    let mut acc = vec![0.0; x.dim()];
    if b <= a {
        return Ok(acc);
    }
    for i in 1..x.segment_count() {
        let s = x.segment_start(i);
        if s <= a {
            continue;
        }
        if s > b {
            break;
        }
        let hl = h.left_limit(s)?;
        for (k, (p, q)) in x.segment_value(i).iter().zip(x.segment_value(i - 1)).enumerate() {
            acc[k] += hl[k] * (p - q);
        }
    }
    Ok(acc)
}

/// `Σ_{s <= t} ΔH(s) ΔX(s)`, coordinatewise.
pub fn jump_product_sum(h: &StepPath, x: &StepPath, t: f64) -> Result<Vec<f64>> {
    same_frame(h, x)?;
    x.eval(t)?;
    let mut acc = vec![0.0; x.dim()];
    for (s, dx) in x.jumps_up_to(t) {
        let dh = h.jump_at(s)?;
        for k in 0..acc.len() {
            acc[k] += dh[k] * dx[k];
        }
    }
    Ok(acc)
}

/// One weighted product of simultaneous jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionEntry {
    pub time: f64,
    pub weight: Vec<f64>,
    pub dh: Vec<f64>,
    pub dx: Vec<f64>,
}

/// Finitely many weighted jump products `ξ ⊙ ΔH ⊙ ΔX` switched on at strictly increasing times.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrectionTerm {
    entries: Vec<CorrectionEntry>,
}

impl CorrectionTerm {
    pub fn new(entries: Vec<CorrectionEntry>) -> Result<Self> {
        let mut prev = f64::NEG_INFINITY;
        for e in &entries {
            if !(e.time > prev) {
                return Err(Error::InvalidArgument("correction times must increase strictly".into()));
            }
            prev = e.time;
            if e.weight.len() != e.dh.len() || e.dh.len() != e.dx.len() {
                return Err(Error::Dimension { left: e.weight.len(), right: e.dx.len() });
            }
            if e.weight.iter().any(|w| !(0.0..=1.0).contains(w)) {
                return Err(Error::InvalidArgument(format!("weights must lie in [0, 1] at {}", e.time)));
            }
        }
        Ok(CorrectionTerm { entries })
    }

    /// Weights chosen per common jump of `h` and `x` by `weight(time)`.
    pub fn from_common_jumps(
        h: &StepPath,
        x: &StepPath,
        weight: impl Fn(f64) -> Vec<f64>,
    ) -> Result<Self> {
        same_frame(h, x)?;
        let mut entries = Vec::new();
        for (s, dx) in x.jumps_up_to(x.horizon()) {
            let dh = h.jump_at(s)?;
            if dh.iter().all(|v| *v == 0.0) {
                continue;
            }
            entries.push(CorrectionEntry { time: s, weight: weight(s), dh, dx });
        }
        CorrectionTerm::new(entries)
    }

    pub fn entries(&self) -> &[CorrectionEntry] {
        &self.entries
    }
}

/// `base + Σ ξ ⊙ ΔH ⊙ ΔX 1_{[σ, T]}`.
pub fn apply_correction(base: &StepPath, corr: &CorrectionTerm) -> Result<StepPath> {
    let d = base.dim();
    let horizon = base.horizon();
    for e in &corr.entries {
        if e.weight.len() != d {
            return Err(Error::Dimension { left: d, right: e.weight.len() });
        }
        if !(e.time > 0.0 && e.time <= horizon) {
            return Err(Error::Domain { t: e.time, lo: 0.0, hi: horizon });
        }
    }
    let mut breaks = base.jump_times().to_vec();
    breaks.extend(corr.entries.iter().map(|e| e.time));
    StepPath::sample_on(horizon, d, &breaks, |t| {
        let mut v = base.eval(t).expect("break inside horizon").to_vec();
        for e in corr.entries.iter().take_while(|e| e.time <= t) {
            for k in 0..d {
                v[k] += e.weight[k] * e.dh[k] * e.dx[k];
            }
        }
        v
    })
}

/// `sup_t |∫H_- dX + ∫X_- dH + Σ ΔHΔX - (H_t X_t - H_0 X_0)|` over all breakpoints.
pub fn integration_by_parts_residual(h: &StepPath, x: &StepPath) -> Result<f64> {
    let hx = ito_integral(h, x)?;
    let xh = ito_integral(x, h)?;
    let mut worst = 0.0f64;
    let h0 = h.initial_value().to_vec();
    let x0 = x.initial_value().to_vec();
    for t in h.merged_starts(x) {
        let jp = jump_product_sum(h, x, t)?;
        let (a, b) = (hx.eval(t)?, xh.eval(t)?);
        let (ht, xt) = (h.eval(t)?, x.eval(t)?);
        for k in 0..h.dim() {
            let r = a[k] + b[k] + jp[k] - (ht[k] * xt[k] - h0[k] * x0[k]);
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// `X = M + A`: local martingale part and finite-variation part of a step semimartingale.
#[derive(Debug, Clone, PartialEq)]
pub struct SemimartingaleDecomposition {
    pub m: StepPath,
    pub a: StepPath,
    pub x: StepPath,
}

impl SemimartingaleDecomposition {
    pub fn new(m: StepPath, a: StepPath) -> Result<Self> {
        let x = m.add(&a)?;
        Ok(SemimartingaleDecomposition { m, a, x })
    }
}

/// The two quantities controlled by the good-decomposition condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdStatistics {
    /// Total variation of `A` on `[0, t]`.
    pub variation: f64,
    /// `|ΔM|` at `t ∧ τ_c`, with `τ_c` the first time `|M|` reaches `c`.
    pub stopped_jump: f64,
}

pub fn gd_statistics(dec: &SemimartingaleDecomposition, t: f64, c: f64) -> Result<GdStatistics> {
    let m = &dec.m;
    m.eval(t)?;
    let tau = (0..m.segment_count())
        .find(|&i| max_abs(m.segment_value(i)) >= c)
        .map(|i| m.segment_start(i))
        .unwrap_or(f64::INFINITY);
    let stop = t.min(tau);
    Ok(GdStatistics {
        variation: dec.a.total_variation(t),
        stopped_jump: max_abs(&m.jump_at(stop)?),
    })
}

/// Checks `|ΔZ_s| <= 2 sup_{u <= s} |H_u| |ΔX_s|` at every jump of `z`.
pub fn jump_domination_check(h: &StepPath, x: &StepPath, z: &StepPath) -> Result<bool> {
    same_frame(h, x)?;
    same_frame(h, z)?;
    for (s, dz) in z.jumps_up_to(z.horizon()) {
        let bound = 2.0 * h.running_sup(s) * max_abs(&x.jump_at(s)?);
        if max_abs(&dz) > bound * (1.0 + TOL) + TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h0() -> StepPath {
        StepPath::scalar(2.0, 1.0, &[(1.0, -1.0)]).unwrap()
    }

    fn x0() -> StepPath {
        StepPath::indicator(2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn integral_uses_left_limits() {
        let i = ito_integral(&h0(), &x0()).unwrap();
        assert_eq!(i.eval1(2.0).unwrap(), 1.0);
        assert_eq!(i.eval1(0.99).unwrap(), 0.0);
    }

    #[test]
    fn jump_products() {
        assert_eq!(jump_product_sum(&h0(), &x0(), 2.0).unwrap(), vec![-2.0]);
        assert_eq!(jump_product_sum(&h0(), &x0(), 0.5).unwrap(), vec![0.0]);
    }

    #[test]
    fn correction_adds_weighted_products() {
        let corr = CorrectionTerm::new(vec![CorrectionEntry {
            time: 1.0,
            weight: vec![1.0],
            dh: vec![2.0],
            dx: vec![1.0],
        }])
        .unwrap();
        let out = apply_correction(&x0(), &corr).unwrap();
        assert_eq!(out, StepPath::indicator(2.0, 1.0, 3.0).unwrap());
    }

    #[test]
    fn correction_rejects_bad_weights() {
        let bad = CorrectionEntry { time: 1.0, weight: vec![1.5], dh: vec![1.0], dx: vec![1.0] };
        assert!(CorrectionTerm::new(vec![bad]).is_err());
        let e = |t| CorrectionEntry { time: t, weight: vec![0.5], dh: vec![1.0], dx: vec![1.0] };
        assert!(CorrectionTerm::new(vec![e(1.0), e(1.0)]).is_err());
    }

    #[test]
    fn parts_formula_holds_with_common_jumps() {
        let r = integration_by_parts_residual(&h0(), &x0()).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn gd_stats_stop_at_level() {
        let m = StepPath::scalar(1.0, 0.0, &[(0.2, 0.5), (0.4, 1.2), (0.6, 0.1)]).unwrap();
        let a = StepPath::scalar(1.0, 0.0, &[(0.5, 0.25), (0.7, 0.5)]).unwrap();
        let dec = SemimartingaleDecomposition::new(m, a).unwrap();
        let g = gd_statistics(&dec, 1.0, 1.0).unwrap();
        assert!((g.stopped_jump - 0.7).abs() < 1e-12);
        assert_eq!(g.variation, 0.5);
        let g = gd_statistics(&dec, 0.3, 1.0).unwrap();
        assert_eq!(g.stopped_jump, 0.0);
    }

    #[test]
    fn domination_of_integral_jumps() {
        let z = ito_integral(&h0(), &x0()).unwrap();
        assert!(jump_domination_check(&h0(), &x0(), &z).unwrap());
        let big = z.scale(5.0);
        assert!(!jump_domination_check(&h0(), &x0(), &big).unwrap());
    }
}

//! Parametrised families of integrand/integrator pairs with known limits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::constructions::ThresholdLadder;
use crate::error::{Error, Result};
use crate::integral::{apply_correction, ito_integral, CorrectionTerm, SemimartingaleDecomposition};
use crate::metrics::{hat_w, hat_w_left};
use crate::path::StepPath;

/// Generator for replication `rep` of an experiment seeded with `seed`:
/// ChaCha8 keyed by `seed`, on stream `rep`.
pub fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// An integrand `h` and integrator `x` on a common horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub h: StepPath,
    pub x: StepPath,
}

impl Sample {
    pub fn integral(&self) -> Result<StepPath> {
        ito_integral(&self.h, &self.x)
    }
}

/// Finite mixture of paths: the law of a limit integral.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLaw {
    pub atoms: Vec<(f64, StepPath)>,
}

impl LimitLaw {
    pub fn point(p: StepPath) -> Self {
        LimitLaw { atoms: vec![(1.0, p)] }
    }

    /// Law of `f(path)` as `(value, weight)` atoms, equal values merged.
    pub fn pushforward(&self, f: impl Fn(&StepPath) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (w, p) in &self.atoms {
            let v = f(p)?;
            match out.iter_mut().find(|(u, _)| *u == v) {
                Some(slot) => slot.1 += w,
                None => out.push((v, *w)),
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(out)
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("n must be at least {min}, got {n}")));
    }
    Ok(())
}

const HORIZON: f64 = 2.0;

/// Integrand jumps from 1 to 3 at `1 - 2/n`, before the integrator's unit jump at `1 - 1/n`.
pub fn example_1_1_early(n: usize) -> Result<Sample> {
    check_n(n, 4)?;
    let n = n as f64;
    Ok(Sample {
        h: StepPath::scalar(HORIZON, 1.0, &[(1.0 - 2.0 / n, 3.0)])?,
        x: StepPath::indicator(HORIZON, 1.0 - 1.0 / n, 1.0)?,
    })
}

/// Integrand jumps from 1 to 3 at `1 + 1/n`, after the integrator's unit jump at `1 - 1/n`.
pub fn example_1_1_late(n: usize) -> Result<Sample> {
    check_n(n, 4)?;
    let n = n as f64;
    Ok(Sample {
        h: StepPath::scalar(HORIZON, 1.0, &[(1.0 + 1.0 / n, 3.0)])?,
        x: StepPath::indicator(HORIZON, 1.0 - 1.0 / n, 1.0)?,
    })
}

/// The early pair with probability `p`, the late pair otherwise.
pub fn example_1_1(n: usize, p: f64, rng: &mut impl Rng) -> Result<Sample> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("probability must lie in [0, 1], got {p}")));
    }
    if rng.gen::<f64>() < p {
        example_1_1_early(n)
    } else {
        example_1_1_late(n)
    }
}

/// Integrand `1 - 2·1_{[1-2/n, ∞)}`, integrator with half steps at `1 - 3/n` and `1 - 1/n`.
pub fn example_2_1(n: usize) -> Result<Sample> {
    check_n(n, 4)?;
    let n = n as f64;
    Ok(Sample {
        h: StepPath::scalar(HORIZON, 1.0, &[(1.0 - 2.0 / n, -1.0)])?,
        x: StepPath::scalar(HORIZON, 0.0, &[(1.0 - 3.0 / n, 0.5), (1.0 - 1.0 / n, 1.0)])?,
    })
}

/// Integrand jumps by 2 at `1 - 2/n + U/n²`, integrator by 1 at `1 - 1/n`; the integrator
/// also makes a small early jump of mean size `1/n` at a uniform time in `(0, 1/4)`.
pub fn anti_avci(n: usize, rng: &mut impl Rng) -> Result<Sample> {
    check_n(n, 4)?;
    let nf = n as f64;
    let u: f64 = rng.gen();
    let v: f64 = rng.gen_range(0.0..0.25);
    let size: f64 = rng.gen_range(0.0..2.0) / nf;
    let v = if v > 0.0 { v } else { 0.125 };
    Ok(Sample {
        h: StepPath::scalar(HORIZON, 1.0, &[(1.0 - 2.0 / nf + u / (nf * nf), 3.0)])?,
        x: StepPath::scalar(HORIZON, 0.0, &[(v, size), (1.0 - 1.0 / nf, 1.0 + size)])?,
    })
}

/// Integrand `1 - 2·1_{[1-2/n, ∞)}`, integrator `1_{[1-1/n, ∞)}`.
pub fn m1_j1(n: usize) -> Result<Sample> {
    check_n(n, 4)?;
    let n = n as f64;
    Ok(Sample {
        h: StepPath::scalar(HORIZON, 1.0, &[(1.0 - 2.0 / n, -1.0)])?,
        x: StepPath::indicator(HORIZON, 1.0 - 1.0 / n, 1.0)?,
    })
}

/// Compensated symmetric compound Poisson martingale (rate `rate·n`, jumps `±1/√n`) plus a
/// 100-step staircase drift reaching `drift` at `T = 1`.
pub fn gd_family(n: usize, rate: f64, drift: f64, rng: &mut impl Rng) -> Result<SemimartingaleDecomposition> {
    check_n(n, 1)?;
    if !(rate > 0.0) {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")));
    }
    let horizon = 1.0;
    let size = 1.0 / (n as f64).sqrt();
    let exp = Exp::new(rate * n as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut jumps = Vec::new();
    let mut t = 0.0;
    let mut level = 0.0;
    loop {
        t += exp.sample(rng);
        if t > horizon {
            break;
        }
        level += if rng.gen::<bool>() { size } else { -size };
        jumps.push((t, level));
    }
    let m = StepPath::scalar(horizon, 0.0, &jumps)?;
    let steps: Vec<(f64, f64)> = (1..=100).map(|k| (k as f64 / 100.0, drift * k as f64 / 100.0)).collect();
    let a = StepPath::scalar(horizon, 0.0, &steps)?;
    SemimartingaleDecomposition::new(m, a)
}

/// Named families used by experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Early pair with probability `p`, late pair otherwise.
    Example11 { p: f64 },
    /// Integrand jump between two half jumps of the integrator.
    Example21,
    /// Integrand jumps strictly before the integrator, with a vanishing early integrator jump.
    AntiAvci,
    /// Integrand drops just before the integrator jumps.
    M1J1,
}

impl Scenario {
    pub fn parse(name: &str, p: Option<f64>) -> Result<Self> {
        match name {
            "example_1_1" => Ok(Scenario::Example11 { p: p.unwrap_or(0.5) }),
            "example_2_1" => Ok(Scenario::Example21),
            "anti_avci" => Ok(Scenario::AntiAvci),
            "m1_j1" => Ok(Scenario::M1J1),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Example11 { .. } => "example_1_1",
            Scenario::Example21 => "example_2_1",
            Scenario::AntiAvci => "anti_avci",
            Scenario::M1J1 => "m1_j1",
        }
    }

    pub fn horizon(&self) -> f64 {
        HORIZON
    }

    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Result<Sample> {
        match *self {
            Scenario::Example11 { p } => example_1_1(n, p, rng),
            Scenario::Example21 => example_2_1(n),
            Scenario::AntiAvci => anti_avci(n, rng),
            Scenario::M1J1 => m1_j1(n),
        }
    }

    /// Limit integrand and integrator.
    pub fn limit_pair(&self) -> Result<Sample> {
        let x = StepPath::indicator(HORIZON, 1.0, 1.0)?;
        let h = match self {
            Scenario::Example11 { .. } | Scenario::AntiAvci => StepPath::scalar(HORIZON, 1.0, &[(1.0, 3.0)])?,
            Scenario::Example21 | Scenario::M1J1 => StepPath::scalar(HORIZON, 1.0, &[(1.0, -1.0)])?,
        };
        Ok(Sample { h, x })
    }

    /// Discontinuities of the limit pair.
    pub fn discontinuities(&self) -> Vec<f64> {
        vec![1.0]
    }

    /// Law of the limit integral (the pointwise limit for the non-convergent family).
    pub fn limit_law(&self) -> Result<LimitLaw> {
        let pair = self.limit_pair()?;
        let base = pair.integral()?;
        let with = |w: f64| -> Result<StepPath> {
            let c = CorrectionTerm::from_common_jumps(&pair.h, &pair.x, |_| vec![w])?;
            apply_correction(&base, &c)
        };
        Ok(match *self {
            Scenario::Example11 { p } => LimitLaw { atoms: vec![(p, with(1.0)?), (1.0 - p, with(0.0)?)] }
                .drop_null(),
            Scenario::AntiAvci | Scenario::M1J1 => LimitLaw::point(with(1.0)?),
            Scenario::Example21 => LimitLaw::point(StepPath::zero(HORIZON, 1)?),
        })
    }

    /// Does the limit exist in law (as opposed to a pointwise reference)?
    pub fn has_limit(&self) -> bool {
        !matches!(self, Scenario::Example21)
    }
}

impl LimitLaw {
    fn drop_null(mut self) -> Self {
        self.atoms.retain(|(w, _)| *w > 0.0);
        self
    }
}

/// Every common jump has `H(s-)·ΔH(s)·|ΔX(s)| >= 0`, coordinatewise.
pub fn check_r1(h: &StepPath, x: &StepPath) -> Result<bool> {
    h.sub(x)?;
    for (s, dx) in x.jumps_up_to(x.horizon()) {
        let hl = h.left_limit(s)?;
        let dh = h.jump_at(s)?;
        if (0..dx.len()).any(|k| dx[k] != 0.0 && hl[k] * dh[k] * dx[k].abs() < 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `sup_{l >= k} Σ_{s <= T} |ΔH_s ΔX_s| 1{a_l < |ΔH_s| <= a_k}`.
///
/// The band widens as `l` grows, so the supremum sits at the last level.
pub fn check_r2_tail(h: &StepPath, x: &StepPath, ladder: &ThresholdLadder, k: usize) -> Result<f64> {
    h.sub(x)?;
    if k == 0 {
        return Err(Error::InvalidArgument("ladder levels are indexed from 1".into()));
    }
    let top = ladder.level(k)?;
    let bottom = ladder.level(ladder.len())?;
    let mut acc = 0.0;
    for (s, dh) in h.jumps_up_to(h.horizon()) {
        let size = max_abs(&dh);
        if size > bottom && size <= top {
            let dx = x.jump_at(s)?;
            acc += max_abs(&dh.iter().zip(&dx).map(|(a, b)| a * b).collect::<Vec<_>>());
        }
    }
    Ok(acc)
}

/// Fraction of `reps` samples at index `n` whose tail sum at level `k` is at most `tol`.
pub fn r2_tail_frequency(
    scenario: &Scenario,
    n: usize,
    ladder: &ThresholdLadder,
    k: usize,
    tol: f64,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one replication".into()));
    }
    let hits = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<usize> {
            let s = scenario.sample(n, &mut rep_rng(seed, rep as u64))?;
            Ok(usize::from(check_r2_tail(&s.h, &s.x, ladder, k)? <= tol))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.iter().sum::<usize>() as f64 / reps as f64)
}

/// Which ordering of increments the empirical check looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderCondition {
    /// Integrand increment closely followed by an integrator increment.
    IntegrandFirst,
    /// Integrator increment closely followed by an increment of the integrand's left limits.
    IntegratorFirst,
}

/// Fraction of `reps` samples whose consecutive-increment modulus exceeds `gamma`.
pub fn empirical_condition(
    scenario: &Scenario,
    cond: OrderCondition,
    n: usize,
    delta: f64,
    gamma: f64,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one replication".into()));
    }
    let hits = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<usize> {
            let s = scenario.sample(n, &mut rep_rng(seed, rep as u64))?;
            let v = match cond {
                OrderCondition::IntegrandFirst => hat_w(&s.h, &s.x, delta)?,
                OrderCondition::IntegratorFirst => hat_w_left(&s.x, &s.h, delta)?,
            };
            Ok(usize::from(v > gamma))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.iter().sum::<usize>() as f64 / reps as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_1_1_closed_forms() {
        let e = example_1_1_early(10).unwrap().integral().unwrap();
        assert_eq!(e, StepPath::indicator(2.0, 0.9, 3.0).unwrap());
        let l = example_1_1_late(11).unwrap().integral().unwrap();
        assert_eq!(l, StepPath::indicator(2.0, 1.0 - 1.0 / 11.0, 1.0).unwrap());
    }

    #[test]
    fn example_2_1_is_a_spike() {
        let n = 30;
        let i = example_2_1(n).unwrap().integral().unwrap();
        let n = n as f64;
        let want = StepPath::scalar(2.0, 0.0, &[(1.0 - 3.0 / n, 0.5), (1.0 - 1.0 / n, 0.0)]).unwrap();
        assert_eq!(i, want);
    }

    #[test]
    fn r1_separates_the_examples() {
        let a = Scenario::Example11 { p: 0.5 }.limit_pair().unwrap();
        assert!(check_r1(&a.h, &a.x).unwrap());
        let b = Scenario::Example21.limit_pair().unwrap();
        assert!(!check_r1(&b.h, &b.x).unwrap());
    }

    #[test]
    fn r2_tail_counts_the_small_band() {
        let h = StepPath::scalar_increments(2.0, 0.0, &[(0.8, 2.0), (1.2, 0.3)]).unwrap();
        let x = StepPath::scalar_increments(2.0, 0.0, &[(0.8, 1.0), (1.2, 1.0)]).unwrap();
        let ladder = ThresholdLadder::new(vec![1.0, 0.1]).unwrap();
        assert!((check_r2_tail(&h, &x, &ladder, 1).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(check_r2_tail(&h, &x, &ladder, 2).unwrap(), 0.0);
    }

    #[test]
    fn r2_tail_frequency_on_large_jumps() {
        let ladder = ThresholdLadder::geometric(0.5, 4).unwrap();
        let f = r2_tail_frequency(&Scenario::AntiAvci, 100, &ladder, 1, 0.0, 50, 2).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn limit_laws() {
        let law = Scenario::Example11 { p: 0.5 }.limit_law().unwrap();
        let vals = law.pushforward(|p| p.eval1(2.0)).unwrap();
        assert_eq!(vals, vec![(1.0, 0.5), (3.0, 0.5)]);
        let law = Scenario::M1J1.limit_law().unwrap();
        assert_eq!(law.atoms[0].1, StepPath::indicator(2.0, 1.0, -1.0).unwrap());
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = anti_avci(10, &mut rep_rng(7, 3)).unwrap();
        let b = anti_avci(10, &mut rep_rng(7, 3)).unwrap();
        let c = anti_avci(10, &mut rep_rng(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn anti_avci_orders_increments() {
        let s = anti_avci(10, &mut rep_rng(1, 0)).unwrap();
        assert_eq!(hat_w_left(&s.x, &s.h, 1.0 / 200.0).unwrap(), 0.0);
    }

    #[test]
    fn gd_family_bounds() {
        let dec = gd_family(100, 1.0, 2.0, &mut rep_rng(3, 0)).unwrap();
        assert!((dec.a.total_variation(1.0) - 2.0).abs() < 1e-12);
        assert!(dec.m.max_jump() <= 2.0 / 10.0 + 1e-12);
    }
}

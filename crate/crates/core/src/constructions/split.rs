//! Window-local decompositions of integrator and integrand, and the five-term
//! expansion of the window integral built from them.

use super::bridge::{adapted_unchecked, bridge_unchecked, sample_points, window_increments, BridgeVariant};
use super::windows::Window;
use crate::error::{Error, Result};
use crate::integral::integral_between;
use crate::metrics::w_prime_window;
use crate::path::StepPath;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn check_oscillation(p: &StepPath, lo: f64, hi: f64, gamma: f64, what: &str) -> Result<()> {
    let w = w_prime_window(p, hi - lo, lo, hi)?;
    if w > 0.5 * gamma {
        return Err(Error::Precondition(format!("{what} oscillates by {w} on [{lo}, {hi}], above gamma/2")));
    }
    Ok(())
}

/// Path equal to `f(clamp(t, lo, hi))`, with `f` evaluated on the breakpoints of `paths`.
fn frozen_from(
    horizon: f64,
    dim: usize,
    paths: &[&StepPath],
    lo: f64,
    hi: f64,
    f: impl Fn(f64) -> Vec<f64>,
) -> Result<StepPath> {
    let pts = sample_points(paths, lo, hi);
    StepPath::sample_on(horizon, dim, &pts, |t| f(t.clamp(lo, hi)))
}

/// `X_t = X_⌊τ⌋ + ξ_t (X_⌈τ⌉ - X_⌊τ⌋) + φ_t` on `[⌊τ⌋, ⌈τ⌉]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorSplit {
    pub base: Vec<f64>,
    pub span: Vec<f64>,
    /// `ξ`, coordinatewise non-decreasing in `[0, 1]`.
    pub weights: StepPath,
    /// `φ`, frozen outside the window.
    pub residual: StepPath,
}

pub fn decompose_integrator(x: &StepPath, w: &Window, gamma: f64, variant: BridgeVariant) -> Result<IntegratorSplit> {
    let (lo, hi) = (w.floor, w.rho);
    let d = x.dim();
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let xi = x.coordinate(i)?;
        check_oscillation(&xi, lo, hi, gamma, "integrator")?;
        coords.push(bridge_unchecked(&xi, lo, hi, gamma, variant)?.weights);
    }
    let weights = StepPath::stack(&coords)?;
    let base = x.eval(lo)?.to_vec();
    let span = sub(x.eval(hi)?, &base);
    let residual = frozen_from(x.horizon(), d, &[x, &weights], lo, hi, |t| {
        let (xv, xi) = (x.eval(t).unwrap(), weights.eval(t).unwrap());
        (0..d).map(|k| xv[k] - base[k] - xi[k] * span[k]).collect()
    })?;
    let worst = residual.sup_norm();
    if worst > d as f64 * gamma + 1e-12 {
        return Err(Error::Precondition(format!("integrator residual {worst} exceeds d*gamma")));
    }
    Ok(IntegratorSplit { base, span, weights, residual })
}

/// `H̃_t = (H_⌊τ⌋ - H_{τ-}) + ζ_t (H_⌈τ⌉ - H_⌊τ⌋) + ψ_t` on `[τ, ⌈τ⌉]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandSplit {
    pub offset: Vec<f64>,
    pub span: Vec<f64>,
    /// `ζ`, the bridge weights of `H` over `[⌊τ⌋, ⌈τ⌉]`.
    pub weights: StepPath,
    /// `ψ`, frozen outside `[τ, ⌈τ⌉]`.
    pub residual: StepPath,
}

pub fn decompose_integrand(h: &StepPath, w: &Window, gamma: f64, variant: BridgeVariant) -> Result<IntegrandSplit> {
    let d = h.dim();
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let hi = h.coordinate(i)?;
        check_oscillation(&hi, w.floor, w.rho, gamma, "integrand")?;
        coords.push(bridge_unchecked(&hi, w.floor, w.rho, gamma, variant)?.weights);
    }
    let weights = StepPath::stack(&coords)?;
    let floor_v = h.eval(w.floor)?.to_vec();
    let anchor = h.left_limit(w.tau)?.to_vec();
    let offset = sub(&floor_v, &anchor);
    let span = sub(h.eval(w.rho)?, &floor_v);
    let residual = frozen_from(h.horizon(), d, &[h, &weights], w.tau, w.rho, |t| {
        let (hv, z) = (h.eval(t).unwrap(), weights.eval(t).unwrap());
        (0..d).map(|k| hv[k] - anchor[k] - offset[k] - z[k] * span[k]).collect()
    })?;
    Ok(IntegrandSplit { offset, span, weights, residual })
}

/// `H̃ = ζ̂ + ψ̂` on `[τ, ⌈τ⌉]` with `ζ̂` causal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedIntegrandSplit {
    pub step: StepPath,
    pub residual: StepPath,
}

pub fn decompose_integrand_adapted(h: &StepPath, w: &Window, gamma: f64, r: f64) -> Result<AdaptedIntegrandSplit> {
    let d = h.dim();
    let anchor = h.left_limit(w.tau)?.to_vec();
    let local = h.map(|v, out| {
        for k in 0..v.len() {
            out[k] = v[k] - anchor[k];
        }
    });
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let li = local.coordinate(i)?;
        check_oscillation(&li, w.tau, w.rho, gamma, "corrected integrand")?;
        let n = window_increments(&li, gamma, w.tau, w.rho)?;
        if n as f64 > r {
            return Err(Error::Precondition(format!("{n} increments of size {gamma} exceed {r}")));
        }
        coords.push(adapted_unchecked(&li, w.tau, w.rho, gamma)?.path);
    }
    let step = StepPath::stack(&coords)?;
    let residual = frozen_from(h.horizon(), d, &[&local, &step], w.tau, w.rho, |t| {
        sub(local.eval(t).unwrap(), step.eval(t).unwrap())
    })?;
    Ok(AdaptedIntegrandSplit { step, residual })
}

/// Which bridge each side of the window expansion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitOptions {
    pub integrator: BridgeVariant,
    pub integrand: BridgeVariant,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions { integrator: BridgeVariant::EndpointJump, integrand: BridgeVariant::Settle }
    }
}

/// All window-local pieces needed to expand `∫ H̃_- dX` over one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSplit {
    pub window: Window,
    pub integrator: IntegratorSplit,
    pub integrand: IntegrandSplit,
    pub adapted: AdaptedIntegrandSplit,
    /// `H - H_{τ-}` (not truncated to the window).
    pub local_integrand: StepPath,
    pub x: StepPath,
}

/// The five summands at time `t`, plus the quantities they are compared with.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderTerms {
    pub t: f64,
    /// Jump-product term, intermediate jump term, and three residual integrals.
    pub terms: [Vec<f64>; 5],
    /// `∫_{t∧τ}^{t∧ρ} H̃_{s-} dX_s`.
    pub window_integral: Vec<f64>,
    /// `Y_t = ∫_{t∧τ}^{t∧ρ} ζ_{s-} dξ_s`.
    pub scaling: Vec<f64>,
    pub integrator_span: Vec<f64>,
    pub integrand_span: Vec<f64>,
    /// Total variation of `φ` over `(t∧τ, t∧ρ]`.
    pub residual_variation: f64,
}

impl RemainderTerms {
    pub fn sum(&self) -> Vec<f64> {
        (0..self.window_integral.len()).map(|k| self.terms.iter().map(|t| t[k]).sum()).collect()
    }

    pub fn reconstruction_error(&self) -> f64 {
        max_abs(&sub(&self.sum(), &self.window_integral))
    }

    /// Magnitude caps for terms 2 to 5 given the threshold `a_k`, `γ` and the level `r`.
    pub fn bounds(&self, a_k: f64, gamma: f64, r: f64) -> [f64; 4] {
        let d = self.window_integral.len() as f64;
        let dx = max_abs(&self.integrator_span);
        [
            2.0 * d * a_k * dx,
            d * d * gamma * dx,
            3.0 * r * d * gamma,
            d * gamma * self.residual_variation,
        ]
    }

    pub fn within_bounds(&self, a_k: f64, gamma: f64, r: f64) -> bool {
        let b = self.bounds(a_k, gamma, r);
        (0..4).all(|i| max_abs(&self.terms[i + 1]) <= b[i] * (1.0 + 1e-9) + 1e-12)
    }
}

impl WindowSplit {
    pub fn new(h: &StepPath, x: &StepPath, w: &Window, gamma: f64, r: f64, opts: SplitOptions) -> Result<Self> {
        h.sub(x)?;
        let integrator = decompose_integrator(x, w, gamma, opts.integrator)?;
        let integrand = decompose_integrand(h, w, gamma, opts.integrand)?;
        let adapted = decompose_integrand_adapted(h, w, gamma, r)?;
        let anchor = h.left_limit(w.tau)?.to_vec();
        let local_integrand = h.map(|v, out| {
            for k in 0..v.len() {
                out[k] = v[k] - anchor[k];
            }
        });
        Ok(WindowSplit { window: *w, integrator, integrand, adapted, local_integrand, x: x.clone() })
    }

    /// Breakpoints in `(τ, ρ]` at which some term can change, with `ρ`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let w = &self.window;
        let mut pts = sample_points(&[&self.x, &self.integrator.weights], w.tau, w.rho);
        pts.retain(|&t| t > w.tau);
        pts
    }

    pub fn terms_at(&self, t: f64) -> Result<RemainderTerms> {
        let w = &self.window;
        let (a, b) = (t.min(w.tau), t.min(w.rho));
        let xi = &self.integrator.weights;
        let phi = &self.integrator.residual;
        let dx = &self.integrator.span;
        let dh = &self.integrand.span;
        let d = dx.len();

        let scaling = integral_between(&self.integrand.weights, xi, a, b)?;
        let xi_inc = sub(xi.eval(b)?, xi.eval(a)?);
        let psi_xi = integral_between(&self.integrand.residual, xi, a, b)?;
        let t4 = integral_between(&self.adapted.step, phi, a, b)?;
        let t5 = integral_between(&self.adapted.residual, phi, a, b)?;
        let t1 = (0..d).map(|k| dh[k] * dx[k] * scaling[k]).collect();
        let t2 = (0..d).map(|k| dx[k] * self.integrand.offset[k] * xi_inc[k]).collect();
        let t3 = (0..d).map(|k| dx[k] * psi_xi[k]).collect();
        let window_integral = integral_between(&self.local_integrand, &self.x, a, b)?;
        Ok(RemainderTerms {
            t,
            terms: [t1, t2, t3, t4, t5],
            window_integral,
            scaling,
            integrator_span: dx.clone(),
            integrand_span: dh.clone(),
            residual_variation: phi.total_variation(b) - phi.total_variation(a),
        })
    }
}

/// Five-term expansion of the window integral at time `t`.
pub fn remainder_split(
    h: &StepPath,
    x: &StepPath,
    w: &Window,
    gamma: f64,
    r: f64,
    t: f64,
) -> Result<RemainderTerms> {
    WindowSplit::new(h, x, w, gamma, r, SplitOptions::default())?.terms_at(t)
}

/// `Y_t = ∫_{t∧τ}^{t∧ρ} ζ_{s-} dξ_s`.
pub fn scaling_term_y(zeta: &StepPath, xi: &StepPath, w: &Window, t: f64) -> Result<Vec<f64>> {
    integral_between(zeta, xi, t.min(w.tau), t.min(w.rho))
}

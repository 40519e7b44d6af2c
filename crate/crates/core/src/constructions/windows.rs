use super::grid::PartitionGrid;
use crate::error::{Error, Result};
use crate::metrics::varsigma;
use crate::path::StepPath;

/// One excursion window `[tau, rho)`, with `floor` the grid point before `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub floor: f64,
    pub tau: f64,
    pub rho: f64,
}

/// Windows opened whenever the integrand moves more than `a` within one mesh of the grid,
/// each closed at the next grid point (or at `T`).
pub fn excursion_windows(h: &StepPath, a: f64, grid: &PartitionGrid) -> Result<Vec<Window>> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {a}")));
    }
    if (grid.horizon() - h.horizon()).abs() > 1e-12 {
        return Err(Error::Horizon { left: h.horizon(), right: grid.horizon() });
    }
    let horizon = h.horizon();
    let mut out = Vec::new();
    let mut start = 0.0;
    loop {
        let tau = varsigma(h, a, start, grid.mesh())?;
        if tau > horizon {
            break;
        }
        let rho = grid.ceil(tau).map(|r| r.min(horizon)).unwrap_or(horizon);
        let floor = grid.floor(tau)?;
        out.push(Window { floor, tau, rho });
        if rho >= horizon {
            break;
        }
        start = rho;
    }
    Ok(out)
}

/// Splits `H` into `(H̃, H - H̃)`, where `H̃ = H - H(τ_j-)` on each `[τ_j, ρ_j)` and `0` elsewhere.
pub fn corrected_integrand(h: &StepPath, windows: &[Window]) -> Result<(StepPath, StepPath)> {
    let d = h.dim();
    let mut breaks = h.jump_times().to_vec();
    let mut anchors = Vec::with_capacity(windows.len());
    for w in windows {
        breaks.push(w.tau);
        breaks.push(w.rho);
        anchors.push(h.left_limit(w.tau)?.to_vec());
    }
    let tilde = StepPath::sample_on(h.horizon(), d, &breaks, |t| {
        match windows.iter().position(|w| w.tau <= t && t < w.rho) {
            Some(j) => {
                let v = h.eval(t).expect("inside horizon");
                v.iter().zip(&anchors[j]).map(|(a, b)| a - b).collect()
            }
            None => vec![0.0; d],
        }
    })?;
    let rest = h.sub(&tilde)?;
    Ok((tilde, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_window_for_one_big_jump() {
        let h = StepPath::scalar(2.0, 1.0, &[(0.8, 3.0)]).unwrap();
        let g = PartitionGrid::uniform(2.0, 0.25).unwrap();
        let w = excursion_windows(&h, 0.5, &g).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].tau, w[0].rho, w[0].floor), (0.8, 1.0, 0.75));
    }

    #[test]
    fn nearby_jumps_share_a_window() {
        let h = StepPath::scalar(1.0, 0.0, &[(0.3, 1.0), (0.35, 2.0)]).unwrap();
        let g = PartitionGrid::uniform(1.0, 0.25).unwrap();
        let w = excursion_windows(&h, 0.5, &g).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].tau, w[0].rho), (0.3, 0.5));
    }

    #[test]
    fn late_window_closes_at_horizon() {
        let h = StepPath::scalar(1.0, 0.0, &[(0.9, 1.0)]).unwrap();
        let g = PartitionGrid::new(vec![0.0, 0.25, 0.5, 0.75], 1.0).unwrap();
        let w = excursion_windows(&h, 0.5, &g).unwrap();
        assert_eq!(w[0].rho, 1.0);
    }

    #[test]
    fn corrected_integrand_of_one_jump() {
        let h = StepPath::scalar(2.0, 1.0, &[(0.8, 3.0)]).unwrap();
        let g = PartitionGrid::uniform(2.0, 0.25).unwrap();
        let w = excursion_windows(&h, 0.5, &g).unwrap();
        let (tilde, rest) = corrected_integrand(&h, &w).unwrap();
        assert_eq!(tilde, StepPath::scalar(2.0, 0.0, &[(0.8, 2.0), (1.0, 0.0)]).unwrap());
        assert_eq!(rest, StepPath::scalar(2.0, 1.0, &[(1.0, 3.0)]).unwrap());
    }
}

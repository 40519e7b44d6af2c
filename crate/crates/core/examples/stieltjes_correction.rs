//! Integrals against step integrators and the jump correction of the limit.

use cadlag::integral::{
    apply_correction, gd_statistics, integration_by_parts_residual, ito_integral, CorrectionTerm,
};
use cadlag::scenarios::{gd_family, rep_rng};
use cadlag::{Result, StepPath};

fn main() -> Result<()> {
    let h = StepPath::scalar(2.0, 1.0, &[(1.0, 3.0)])?;
    let x = StepPath::indicator(2.0, 1.0, 1.0)?;
    let base = ito_integral(&h, &x)?;
    println!("integral of the limit pair at 2: {}", base.eval1(2.0)?);

    for w in [0.0, 0.5, 1.0] {
        let c = CorrectionTerm::from_common_jumps(&h, &x, |_| vec![w])?;
        println!("weight {w}: corrected integral at 2 = {}", apply_correction(&base, &c)?.eval1(2.0)?);
    }

    let y = StepPath::scalar_increments(2.0, 0.5, &[(0.3, 1.0), (1.0, -2.0), (1.7, 0.25)])?;
    println!("integration by parts residual: {:e}", integration_by_parts_residual(&h, &y)?);

    let dec = gd_family(400, 2.0, 1.5, &mut rep_rng(11, 0))?;
    let s = gd_statistics(&dec, 1.0, 1.0)?;
    println!(
        "martingale part: {} jumps, max jump {:.4}; drift variation {:.4}; stopped jump {:.4}",
        dec.m.jump_count(),
        dec.m.max_jump(),
        s.variation,
        s.stopped_jump
    );
    Ok(())
}

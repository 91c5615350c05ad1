//! Exact checks in matrix representations: the cocycle residual of the full
//! twist, and the universal R-matrix F21 F⁻¹ on the fundamental rep.

use twistdual::presets::Setup;
use twistdual::rep::{cocycle_residual, qybe_residual, r_matrix, triangularity_residual, Representation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = Setup::sl3_extended_jordanian().build(4)?;
    let spec = b.ctx.spec();
    for rep in [Representation::fundamental(spec)?, Representation::adjoint(spec)] {
        let m = cocycle_residual(&b.hopf, &rep)?;
        println!("{} rank 3: {} nonzero entries in a {}x{} residual", rep.kind().name(), m.nonzero_count(), m.dim(), m.dim());
    }
    let fund = Representation::fundamental(spec)?;
    let r = r_matrix(&b.hopf, &fund)?;
    println!("R21 R = 1: {}", triangularity_residual(&r, fund.dim())?.is_zero());
    println!("QYBE: {}", qybe_residual(&r, fund.dim())?.is_zero());

    let partial = Setup::sl3_extended_jordanian().keep_factors(&["extension"]).build(4)?;
    let m = cocycle_residual(&partial.hopf, &fund)?;
    println!("extension factor alone: {} nonzero entries", m.nonzero_count());
    for line in m.describe_nonzero(3) {
        println!("  {line}");
    }
    Ok(())
}

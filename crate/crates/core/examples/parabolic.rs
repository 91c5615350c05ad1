//! Extend the chain by a parabolic Jordanian factor at gamma = ±1 and check
//! the result is a cocycle. Other gamma values are refused.

use twistdual::dual_coords::{build_parabolic, CoordinateMap};
use twistdual::presets::Setup;
use twistdual::rep::{cocycle_residual, Representation};
use twistdual::scalar::{Param, Rational};
use twistdual::tables::DUAL_COORDINATES;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta)?;
    let b = base.build(4)?;
    let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES)?;
    for sign in [1i8, -1] {
        let p = build_parabolic(&map, &b.hopf, &base, sign, &Rational::from_int(sign as i64))?;
        println!("sign {sign}: exp({})", p.exponent);
        let pb = p.setup.build(4)?;
        println!("  symbolic cocycle: {}", pb.hopf.cocycle_residual()?.is_zero());
        let fund = Representation::fundamental(pb.ctx.spec())?;
        println!("  fundamental cocycle: {}", cocycle_residual(&pb.hopf, &fund)?.is_zero());
        println!("  at zeta = 0: {}", p.degeneration_residual(&pb.ctx, &pb.defs, Param::Zeta)?.is_zero());
    }
    if let Err(e) = build_parabolic(&map, &b.hopf, &base, 1, &Rational::zero()) {
        println!("gamma = 0: {e}");
    }
    Ok(())
}

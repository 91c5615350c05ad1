//! Find the values of gamma at which some dual coordinate becomes
//! quasiprimitive.

use twistdual::dual_coords::{scan_gamma, CoordinateMap};
use twistdual::presets::Setup;
use twistdual::scalar::Param;
use twistdual::tables::DUAL_COORDINATES;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta)?.build(4)?;
    let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES)?;
    let scan = scan_gamma(&map, &b.hopf)?;
    let irregular: Vec<String> = scan.irregular.iter().map(|g| g.to_string()).collect();
    println!("irregular gamma: {}", irregular.join(", "));
    for g in &scan.generators {
        for c in &g.chains {
            let at: Vec<String> = c.vanishes_at.iter().map(|r| r.to_string()).collect();
            println!("{}: {} vanishes at [{}]", g.generator, c.chain, at.join(", "));
        }
    }
    Ok(())
}

//! Derive the dual-group coordinates from the twisted coproducts and print
//! the coproducts rewritten in them.

use twistdual::commands::setup_r;
use twistdual::dual_coords::derive_dual_map;
use twistdual::presets::Setup;
use twistdual::scalar::Param;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let setup = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta)?;
    let b = setup.build(4)?;
    let r = setup_r(&setup, b.ctx.spec())?;
    let derived = derive_dual_map(&b.hopf, &r, Param::Zeta, 2)?;
    for (label, form) in derived.map.nontrivial_forms() {
        println!("{label} = {form}");
    }
    for i in 0..b.ctx.dim() {
        let d = derived.map.dual_coproduct(&b.hopf, i)?;
        println!("Δ({}) = {}", derived.map.forms()[i].0, d.render());
    }
    Ok(())
}

//! Build the two-factor twist, check the cocycle condition and print the
//! twisted coproducts of the generators.

use twistdual::presets::Setup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = std::env::args().nth(1).map_or(Ok(4), |s| s.parse())?;
    let b = Setup::sl3_extended_jordanian().build(order)?;
    println!("twist has {} terms to order {order}", b.hopf.twist().len());
    println!("cocycle residual is zero: {}", b.hopf.cocycle_residual()?.is_zero());
    let spec = b.ctx.spec();
    for i in 0..spec.dim() {
        println!("Δ({}) = {}", spec.label(i), b.hopf.coproduct_generator(i)?.render());
    }
    Ok(())
}

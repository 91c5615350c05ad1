//! Substitute xi = eps·zeta, rescale the generators and let eps → 0.

use twistdual::expr::Expr;
use twistdual::limit::{ClassicalLimit, ScalingScheme};
use twistdual::presets::Setup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = Setup::sl3_extended_jordanian().build(4)?;
    let cl = ClassicalLimit::new(&b.hopf, ScalingScheme::default())?;
    for (name, psi) in cl.psi() {
        println!("scaled log of {name}: {}", psi.render());
    }
    for label in b.ctx.spec().labels() {
        let l = cl.limit_coproduct(&Expr::name(label))?;
        println!("Δlim({label}) = {}", l.limit.render());
    }
    Ok(())
}

//! The Jordanian twist of the two-dimensional Borel algebra: its coproduct,
//! universal R-matrix and the QYBE in the defining representation.

use twistdual::expr::Expr;
use twistdual::presets::Setup;
use twistdual::rep::{qybe_residual, r_matrix, Representation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = Setup::b2_jordanian().build(4)?;
    let ev = b.hopf.evaluator();
    for label in ["H", "E"] {
        let x = ev.element(&Expr::name(label))?;
        println!("Δ({label}) = {}", b.hopf.coproduct(&x)?.render());
    }
    println!("F21 F⁻¹ = {}", b.hopf.universal_r()?.render());
    let rep = Representation::borel2(b.ctx.spec())?;
    let r = r_matrix(&b.hopf, &rep)?;
    for line in r.describe_nonzero(16) {
        println!("  R {line}");
    }
    println!("QYBE holds: {}", qybe_residual(&r, rep.dim())?.is_zero());
    Ok(())
}

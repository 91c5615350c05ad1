//! The classical r-matrix of the extended Jordanian twist solves the CYBE for
//! every gamma, and its cobracket makes the dual a Lie algebra.

use twistdual::bialgebra::{cybe_residual, DualAlgebra, RMatrix};
use twistdual::lie::LieAlgebraSpec;
use twistdual::scalar::ParamScalar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = LieAlgebraSpec::sl3_adapted();
    let one = ParamScalar::one();
    let wedge = |a: &str, b: &str| (a.to_string(), b.to_string(), one.clone());
    let r = RMatrix::from_wedges(&spec, &[wedge("h", "e13"), wedge("e12", "e23")])?;
    println!("CYBE residual of h ∧ e13 + e12 ∧ e23: {}", cybe_residual(&spec, &r).render(&spec));

    let alone = RMatrix::from_wedges(&spec, &[wedge("e12", "e23")])?;
    println!("CYBE residual of e12 ∧ e23 alone: {}", cybe_residual(&spec, &alone).render(&spec));

    let dual = DualAlgebra::from_r(&spec, &r)?;
    println!("dual Jacobi identity holds: {}", dual.jacobi_residual().is_zero());
    Ok(())
}

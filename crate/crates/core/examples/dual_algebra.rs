//! Brackets of the dual Lie algebra and its split into a carrier part and an
//! abelian ideal, with dual weights.

use twistdual::bialgebra::{structure_check, DualAlgebra};
use twistdual::commands::setup_r;
use twistdual::presets::Setup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let setup = Setup::sl3_extended_jordanian();
    let spec = setup.spec()?;
    let r = setup_r(&setup, &spec)?;
    let dual = DualAlgebra::from_r(&spec, &r)?;
    let ds = dual.spec();
    for i in 0..ds.dim() {
        for j in i + 1..ds.dim() {
            let b = ds.bracket_basis(i, j);
            if !b.is_zero() {
                println!("[{}, {}] = {}", ds.label(i), ds.label(j), dual.render(&b));
            }
        }
    }
    let st = structure_check(&spec, &r)?;
    println!("carrier {:?}, abelian ideal {:?}", st.carrier, st.abelian);
    for (i, w) in st.diagram.carrier.iter().chain(&st.diagram.abelian) {
        println!("weight of {}* = {w}", spec.label(*i));
    }
    Ok(())
}

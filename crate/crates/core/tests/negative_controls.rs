//! Checks that must fail, so that passing checks elsewhere mean something.

use twistdual::bialgebra::{cybe_residual, RMatrix};
use twistdual::commands::cmd_dual_coords;
use twistdual::config::SessionConfig;
use twistdual::dual_coords::{build_parabolic, CoordinateMap};
use twistdual::lie::LieAlgebraSpec;
use twistdual::presets::Setup;
use twistdual::rep::{cocycle_residual, Representation};
use twistdual::scalar::{Param, ParamScalar, Rational};
use twistdual::tables::{compare_entry, CoproductEntry, EntryStatus, DUAL_COORDINATES, TWISTED_COPRODUCTS};
use twistdual::uea::UElement;

#[test]
fn extension_factor_alone_is_not_a_cocycle() {
    let b = Setup::sl3_extended_jordanian().keep_factors(&["extension"]).build(4).unwrap();
    assert!(!b.hopf.cocycle_residual().unwrap().is_zero());
    let spec = b.ctx.spec();
    assert!(!cocycle_residual(&b.hopf, &Representation::fundamental(spec).unwrap()).unwrap().is_zero());
    assert!(!cocycle_residual(&b.hopf, &Representation::adjoint(spec)).unwrap().is_zero());
}

#[test]
fn jordanian_factor_alone_is_a_cocycle() {
    let b = Setup::sl3_extended_jordanian().keep_factors(&["jordanian"]).build(4).unwrap();
    assert!(b.hopf.cocycle_residual().unwrap().is_zero());
}

#[test]
fn extension_wedge_alone_fails_cybe() {
    let spec = LieAlgebraSpec::sl3_adapted();
    let r = RMatrix::from_wedges(&spec, &[("e12".into(), "e23".into(), ParamScalar::one())]).unwrap();
    assert!(!cybe_residual(&spec, &r).is_zero());
}

#[test]
fn parabolic_extension_is_refused_at_regular_gamma() {
    let base = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta).unwrap();
    let b = base.build(4).unwrap();
    let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).unwrap();
    for (sign, g) in [(1, 0), (-1, 0), (1, -1), (-1, 1), (1, 2)] {
        let err = build_parabolic(&map, &b.hopf, &base, sign, &Rational::from_int(g));
        assert!(err.is_err(), "sign {sign} at gamma {g} was accepted");
    }
    assert!(build_parabolic(&map, &b.hopf, &base, 1, &Rational::one()).is_ok());
}

#[test]
fn perturbed_table_entry_is_a_mismatch() {
    let b = Setup::sl3_extended_jordanian().build(4).unwrap();
    let entry = TWISTED_COPRODUCTS.iter().find(|e| e.subject == "e12").unwrap();
    let printed = format!("{} + xi^2*e12 ⊗ e13", entry.printed);
    let leaked: &'static str = Box::leak(printed.into_boxed_str());
    let bad = CoproductEntry { subject: entry.subject, printed: leaked, corrected: None };
    let x = UElement::named(&b.ctx, "e12").unwrap();
    let d = b.hopf.coproduct(&x).unwrap();
    assert!(matches!(compare_entry(&b.ctx, &b.defs, &bad, &d).unwrap(), EntryStatus::Mismatch { .. }));
    assert_eq!(compare_entry(&b.ctx, &b.defs, entry, &d).unwrap(), EntryStatus::Match);
}

#[test]
fn uncorrected_coordinates_break_the_table_and_weights() {
    let src = "[session]\nrep = \"none\"\n\n[dual-coords.map]\n\"e13#\" = \"ln(1 + zeta*e13)\"\n";
    let rep = cmd_dual_coords(&SessionConfig::parse(src, "x").unwrap()).unwrap();
    let status = |id: &str| rep.checks.iter().find(|c| c.id == id).unwrap().status;
    assert!(!status("coproduct-table").is_pass());
    assert!(!status("weights").is_pass());
}

#[test]
fn vanishing_deformation_gives_the_primitive_coproduct() {
    let b = Setup::sl3_extended_jordanian().build(4).unwrap();
    for i in 0..b.ctx.dim() {
        let x = UElement::generator(&b.ctx, i);
        let d = b.hopf.coproduct(&x).unwrap().substitute(Param::Xi, &ParamScalar::zero());
        assert!(d.sub(&x.coproduct0()).unwrap().is_zero());
    }
}

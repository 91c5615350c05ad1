//! Acceptance criteria for the shipped setups. Runs without the libtest
//! harness so that every criterion prints one line, pass or fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use twistdual::bialgebra::{compare_dual_relations, cybe_residual, structure_check, unlisted_brackets, RMatrix};
use twistdual::commands::{cmd_properties, setup_r};
use twistdual::config::SessionConfig;
use twistdual::dual_coords::{build_parabolic, derive_dual_map, scan_gamma, CoordinateMap};
use twistdual::expr::Expr;
use twistdual::lie::{LieAlgebraSpec, Weight};
use twistdual::limit::{ClassicalLimit, ScalingScheme};
use twistdual::presets::{Built, Setup};
use twistdual::rep::{cocycle_residual, cross_validate_cocycle, qybe_residual, r_matrix, MatrixEvaluator, Representation};
use twistdual::scalar::{Param, ParamScalar, Rational};
use twistdual::tables::{
    compare_entry, EntryStatus, BOREL_COPRODUCTS, BOREL_R, DUAL_ALGEBRA, DUAL_COORDINATES, DUAL_COORDINATE_COPRODUCTS,
    LIMIT_COPRODUCTS, SCALED_LOGARITHMS, TWISTED_COPRODUCTS,
};

const ORDER: u32 = 4;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, format!("{what} took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sl3() -> Result<(Setup, Built), String> {
    let setup = Setup::sl3_extended_jordanian();
    let b = setup.build(ORDER).map_err(s)?;
    Ok((setup, b))
}

/// Corrected entries are allowed and reported; mismatches are not.
fn entries_pass(results: &[(String, EntryStatus)], expected: usize) -> Result<Vec<String>, String> {
    ensure(results.len() == expected, format!("{} entries compared, expected {expected}", results.len()))?;
    let mut corrected = Vec::new();
    for (subject, st) in results {
        match st {
            EntryStatus::Match => {}
            EntryStatus::Corrected { note, .. } => corrected.push(format!("{subject} ({note})")),
            EntryStatus::Mismatch { printed_diff } => return Err(format!("{subject}: computed − printed = {printed_diff}")),
        }
    }
    Ok(corrected)
}

fn corrected_note(c: &[String]) -> String {
    if c.is_empty() {
        String::new()
    } else {
        format!("; engine-wins corrections: {}", c.join(", "))
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let spec = LieAlgebraSpec::sl3_adapted();
    let r = setup_r(&Setup::sl3_extended_jordanian(), &spec)?;
    let res = cybe_residual(&spec, &r);
    ensure(res.is_zero(), format!("CYBE residual {}", res.render(&spec)))?;
    let e = within(t, Duration::from_secs(1), "CYBE")?;
    Ok(format!("CYBE residual of h(gamma)∧e13 + e12∧e23 is zero with symbolic gamma ({e:?})"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let spec = LieAlgebraSpec::sl3_adapted();
    let r = setup_r(&Setup::sl3_extended_jordanian(), &spec)?;
    let dual = twistdual::bialgebra::DualAlgebra::from_r(&spec, &r).map_err(s)?;
    let checks = compare_dual_relations(&dual, DUAL_ALGEBRA).map_err(s)?;
    for c in &checks {
        ensure(c.matches, format!("{}: computed {} but reference {}", c.relation, c.computed, c.expected))?;
    }
    let unlisted = unlisted_brackets(&dual, DUAL_ALGEBRA).map_err(s)?;
    ensure(unlisted.is_empty(), format!("unlisted brackets {unlisted:?}"))?;
    ensure(dual.jacobi_residual().is_zero(), "dual Jacobi fails")?;
    let e = within(t, Duration::from_secs(1), "dual algebra")?;
    Ok(format!("{} dual relations reproduced, no other nonzero bracket ({e:?})", checks.len()))
}

fn criterion_3() -> Outcome {
    let spec = LieAlgebraSpec::sl3_adapted();
    let r = setup_r(&Setup::sl3_extended_jordanian(), &spec)?;
    let st = structure_check(&spec, &r).map_err(s)?;
    ensure(st.carrier.len() == 4 && st.carrier_subalgebra, format!("carrier {:?}", st.carrier))?;
    let mut abelian = st.abelian.clone();
    abelian.sort();
    ensure(abelian == ["e21", "e31", "e32", "h_perp"], format!("abelian part {abelian:?}"))?;
    ensure(st.abelian_commutative && st.abelian_ideal, "abelian part is not a commutative ideal")?;
    // Both weight sets are {0, φ31, φ32, φ21} with φ the roots of sl(3).
    let w = |l: &str| spec.weight(spec.index_of(l).unwrap()).clone();
    let mut want: Vec<Weight> = vec![Weight::zero(3), w("e31"), w("e32"), w("e21")];
    want.sort();
    ensure(st.diagram.carrier_weights() == want, format!("carrier weights {:?}", st.diagram.carrier_weights()))?;
    ensure(st.diagram.abelian_weights() == want, format!("abelian weights {:?}", st.diagram.abelian_weights()))?;
    ensure(st.diagram.action_failures.is_empty(), st.diagram.action_failures.join("; "))?;
    Ok("4-dimensional carrier dual, abelian ideal {h_perp*, e31*, e32*, e21*}, both weight sets {0, φ31, φ32, φ21}".into())
}

fn criterion_4() -> Outcome {
    let (_, b) = sl3()?;
    let t = Instant::now();
    let res = b.hopf.cocycle_residual().map_err(s)?;
    ensure(res.is_zero(), format!("symbolic residual has {} terms", res.len()))?;
    let sym = within(t, Duration::from_secs(10), "symbolic cocycle")?;
    let spec = b.ctx.spec();
    let fund = Representation::fundamental(spec).map_err(s)?;
    let m = cocycle_residual(&b.hopf, &fund).map_err(s)?;
    ensure(m.dim() == 27 && m.is_zero(), format!("fundamental residual: {} nonzero entries", m.nonzero_count()))?;
    let t = Instant::now();
    let adj = Representation::adjoint(spec);
    let m = cocycle_residual(&b.hopf, &adj).map_err(s)?;
    ensure(m.dim() == 512 && m.is_zero(), format!("adjoint residual: {} nonzero entries", m.nonzero_count()))?;
    let a = within(t, Duration::from_secs(120), "adjoint cocycle")?;
    let x = cross_validate_cocycle(&b.hopf, &fund).map_err(s)?;
    ensure(x.is_zero(), "symbolic and exact fundamental residuals disagree")?;
    Ok(format!("symbolic residual zero to order {ORDER} ({sym:?}); exact zero 27x27 and 512x512 ({a:?})"))
}

fn criterion_5() -> Outcome {
    let (_, b) = sl3()?;
    let ev = b.hopf.evaluator();
    let mut results = Vec::new();
    for e in TWISTED_COPRODUCTS {
        let x = ev.element(&Expr::parse(e.subject).map_err(s)?).map_err(s)?;
        let d = b.hopf.coproduct(&x).map_err(s)?;
        results.push((e.subject.to_string(), compare_entry(&b.ctx, &b.defs, e, &d).map_err(s)?));
    }
    let corrected = entries_pass(&results, 8)?;
    Ok(format!("all 8 twisted coproducts reproduced to order {ORDER}{}", corrected_note(&corrected)))
}

fn criterion_6() -> Outcome {
    let (setup, b) = sl3()?;
    let cl = ClassicalLimit::new(&b.hopf, ScalingScheme::default()).map_err(s)?;
    let spec = b.ctx.spec().clone();
    for i in 0..spec.dim() {
        let l = cl.limit_coproduct(&Expr::name(spec.label(i))).map_err(s)?;
        ensure(l.lowest_power >= 0, format!("pole of order {} in {}", -l.lowest_power, spec.label(i)))?;
    }
    let corrected = entries_pass(&cl.compare_table(LIMIT_COPRODUCTS).map_err(s)?, 8)?;
    for (l, d) in cl.structural_agreement(&b.hopf, TWISTED_COPRODUCTS).map_err(s)? {
        ensure(d.is_none(), format!("{l}: limit differs from the top-degree part of the twisted table"))?;
    }
    for (l, d) in cl.compare_psi(SCALED_LOGARITHMS).map_err(s)? {
        ensure(d.is_none(), format!("{l}: difference {}", d.unwrap_or_default()))?;
    }
    let r = setup_r(&setup, &spec)?;
    for i in 0..spec.dim() {
        let res = cl.cobracket_residual(&r, i).map_err(s)?;
        ensure(res.is_zero(), format!("cobracket residual at {}: {}", spec.label(i), res.render()))?;
    }
    Ok(format!(
        "no poles; limit table reproduced; Psi_1, Psi_2 match; cobracket consistency zero{}",
        corrected_note(&corrected)
    ))
}

fn zeta_sl3() -> Result<(Built, RMatrix), String> {
    let z = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta).map_err(s)?;
    let b = z.build(ORDER).map_err(s)?;
    let r = setup_r(&z, b.ctx.spec())?;
    Ok((b, r))
}

fn criterion_7() -> Outcome {
    let (b, r) = zeta_sl3()?;
    let derived = derive_dual_map(&b.hopf, &r, Param::Zeta, 2).map_err(s)?;
    let table = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)?;
    let diff = derived.map.differing_images(&table).map_err(s)?;
    ensure(diff.is_empty(), format!("derived map differs on {}", diff.join(", ")))?;
    for i in 0..b.ctx.dim() {
        derived.map.dual_coproduct(&b.hopf, i).map_err(|e| format!("closure fails: {e}"))?;
    }
    let corrected = entries_pass(&derived.map.compare_table(&b.hopf, DUAL_COORDINATE_COPRODUCTS).map_err(s)?, 8)?;
    Ok(format!(
        "derived map equals the reference map; closure holds; 8 coproducts reproduced{}",
        corrected_note(&corrected)
    ))
}

fn criterion_8() -> Outcome {
    let (b, _) = zeta_sl3()?;
    let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)?;
    let scan = scan_gamma(&map, &b.hopf).map_err(s)?;
    let (m1, z, p1) = (Rational::from_int(-1), Rational::zero(), Rational::one());
    ensure(scan.irregular == [m1.clone(), z.clone(), p1.clone()], format!("irregular set {:?}", scan.irregular))?;
    let gen = |l: &str| scan.generator(l).ok_or(format!("{l} missing from the scan"));
    let e21 = gen("e21#")?;
    let e32 = gen("e32#")?;
    ensure(e21.quasiprimitive_at == [p1.clone()], format!("e21# quasiprimitive at {:?}", e21.quasiprimitive_at))?;
    ensure(e32.quasiprimitive_at == [m1], format!("e32# quasiprimitive at {:?}", e32.quasiprimitive_at))?;
    let e31 = gen("e31#")?;
    let perp: Vec<_> = e31.chains.iter().filter(|c| c.chain.contains("h_perp#")).collect();
    ensure(!perp.is_empty() && perp.iter().all(|c| c.vanishes_at == [z.clone()]), "h_perp chains of e31# do not vanish at 0")?;
    ensure(
        e31.chains.iter().filter(|c| !c.chain.contains("h_perp#")).all(|c| c.vanishes_at.is_empty()),
        "a non-h_perp chain of e31# vanishes somewhere",
    )?;
    Ok("irregular set {0, +1, -1}: e21# at +1, e32# at -1, h_perp terms of e31# at 0".into())
}

fn criterion_9() -> Outcome {
    let (b, _) = zeta_sl3()?;
    let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)?;
    let base = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta).map_err(s)?;
    let mut notes = Vec::new();
    for sign in [1i8, -1] {
        let preset = Setup::sl3_parabolic(sign);
        let pb = preset.build(ORDER).map_err(s)?;
        let res = pb.hopf.cocycle_residual().map_err(s)?;
        ensure(res.is_zero(), format!("sign {sign}: symbolic residual has {} terms", res.len()))?;
        let spec = pb.ctx.spec();
        for rep in [Representation::fundamental(spec).map_err(s)?, Representation::adjoint(spec)] {
            let m = cocycle_residual(&pb.hopf, &rep).map_err(s)?;
            ensure(m.is_zero(), format!("sign {sign}: {} residual has {} nonzero entries", rep.kind().name(), m.nonzero_count()))?;
        }
        let gamma = Rational::from_int(sign as i64);
        let p = build_parabolic(&map, &b.hopf, &base, sign, &gamma).map_err(s)?;
        let built = p.setup.build(ORDER).map_err(s)?;
        let a = built.hopf.chain().factors[0].exponent_tensor(&built.ctx, &built.defs).map_err(s)?;
        let c = pb.hopf.chain().factors[0].exponent_tensor(&pb.ctx, &pb.defs).map_err(s)?;
        ensure(a.sub(&c.transfer(&built.ctx)).map_err(s)?.is_zero(), format!("sign {sign}: constructed factor differs from the preset"))?;
        let d = p.degeneration_residual(&pb.ctx, &pb.defs, Param::Zeta).map_err(s)?;
        ensure(d.is_zero(), format!("sign {sign}: zeta = 0 degeneration residual {}", d.render()))?;
        notes.push(format!("{}: {}", if sign > 0 { "P+" } else { "P-" }, p.exponent));
    }
    Ok(format!("cocycle exact in both reps and to joint order {ORDER}; zeta = 0 gives the ordinary Jordanian factor ({})", notes.join("; ")))
}

fn criterion_10() -> Outcome {
    let b = Setup::b2_jordanian().build(ORDER).map_err(s)?;
    let ev = b.hopf.evaluator();
    let h = BOREL_COPRODUCTS.iter().find(|e| e.subject == "H").ok_or("no H entry")?;
    let d = b.hopf.coproduct(&ev.element(&Expr::name("H")).map_err(s)?).map_err(s)?;
    entries_pass(&[("H".into(), compare_entry(&b.ctx, &b.defs, h, &d).map_err(s)?)], 1)?;
    let r_expr = Expr::parse(BOREL_R).map_err(s)?;
    let universal = b.hopf.universal_r().map_err(s)?;
    let printed = ev.tensor(&r_expr, 2).map_err(s)?;
    let diff = universal.sub(&printed).map_err(s)?;
    ensure(diff.is_zero(), format!("F21 F^-1 − R = {}", diff.render()))?;
    let rep = Representation::borel2(b.ctx.spec()).map_err(s)?;
    let exact = MatrixEvaluator::new(vec![&rep, &rep], &b.defs).eval(&r_expr).map_err(s)?;
    let from_twist = r_matrix(&b.hopf, &rep).map_err(s)?;
    ensure(exact.sub(&from_twist).map_err(s)?.is_zero(), "R in the 2-dimensional rep differs from F21 F^-1 there")?;
    let q = qybe_residual(&exact, rep.dim()).map_err(s)?;
    ensure(q.is_zero(), format!("QYBE residual has {} nonzero entries", q.nonzero_count()))?;
    let one = ParamScalar::one();
    ensure(!exact.sub(&twistdual::rep::Matrix::scalar(4, &one)).map_err(s)?.is_zero(), "R is trivial")?;
    Ok(format!("Δ(H) reproduced to order {ORDER}; R = F21 F^-1 to order {ORDER}; QYBE exact in the 2-dimensional rep"))
}

fn criterion_11() -> Outcome {
    let rep = cmd_properties(&SessionConfig::default()).map_err(s)?;
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.status.is_pass()).map(|c| c.id.as_str()).collect();
    ensure(failed.is_empty(), format!("failed: {}", failed.join(", ")))?;
    Ok(format!("{} property checks exactly zero on the shipped instances", rep.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("CYBE", criterion_1),
        ("dual algebra table", criterion_2),
        ("carrier structure", criterion_3),
        ("twist cocycle", criterion_4),
        ("twisted coproduct table", criterion_5),
        ("second classical limit", criterion_6),
        ("dual coordinates", criterion_7),
        ("irregular points", criterion_8),
        ("parabolic twists", criterion_9),
        ("b(2) example", criterion_10),
        ("property suites", criterion_11),
    ];
    let mut failures = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", n + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", n + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! One function per CLI subcommand. Each builds its setup from a
//! [`SessionConfig`] and returns a [`Report`]; engine errors become failed
//! checks, configuration errors are returned.

use std::fmt::Display;
use std::time::Instant;

use rayon::prelude::*;

use crate::bialgebra::{
    carrier_decomposition, co_leibniz_residual, compare_dual_relations, cybe_residual, structure_check,
    unlisted_brackets, weight_diagram, DualAlgebra, RMatrix,
};
use crate::config::{ConfigError, GammaBinding, RepChoice, SessionConfig, SignChoice};
use crate::dual_coords::{
    build_parabolic, cobracket_residual as dual_cobracket_residual, derive_dual_map, dual_weights, scan_gamma,
    weight_bookkeeping, CoordinateMap, GammaScan,
};
use crate::expr::{Expr, ExprError};
use crate::lie::{LieAlgebraSpec, LieElement};
use crate::limit::{ClassicalLimit, ScalingScheme};
use crate::presets::{AlgebraChoice, Built, Setup};
use crate::rep::{
    cocycle_residual, cross_validate_cocycle, qybe_residual, r_matrix, triangularity_residual, Matrix, Representation,
};
use crate::report::{Check, Report, Status, Table};
use crate::scalar::{Param, Rational};
use crate::tables::{
    self, CoproductEntry, EntryStatus, BOREL_COPRODUCTS, BOREL_R, DUAL_ALGEBRA, DUAL_COORDINATES,
    DUAL_COORDINATE_COPRODUCTS, LIMIT_COPRODUCTS, SCALED_LOGARITHMS, TWISTED_COPRODUCTS,
};
use crate::twist::TwistedHopf;
use crate::uea::{GradingContext, Monomial, TensorElement, TensorOrElement, UElement, Uea};

type Res<T> = Result<T, String>;

fn s<E: Display>(e: E) -> String {
    e.to_string()
}

/// Run a check body, timing it and turning errors into failures.
fn run(id: &str, f: impl FnOnce() -> Res<Check>) -> Check {
    let start = Instant::now();
    match f() {
        Ok(c) => c.timed(start),
        Err(e) => Check::fail(id, e).timed(start),
    }
}

/// Which reference tables apply to a setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reference {
    Sl3,
    Borel2,
    None,
}

fn reference(setup: &Setup) -> Reference {
    if setup.gamma.is_none() && *setup == Setup::sl3_extended_jordanian() {
        Reference::Sl3
    } else if *setup == Setup::b2_jordanian() {
        Reference::Borel2
    } else {
        Reference::None
    }
}

fn gamma_text(setup: &Setup) -> String {
    setup.gamma.as_ref().map_or("symbolic".into(), |g| g.to_string())
}

fn new_report(command: &str, setup: &Setup, order: u32) -> Report {
    Report::new(command, &setup.name, order, &gamma_text(setup))
}

/// The classical r-matrix of a setup, with `gamma` substituted when fixed.
pub fn setup_r(setup: &Setup, spec: &LieAlgebraSpec) -> Res<RMatrix> {
    let wedges = setup
        .r_matrix
        .iter()
        .map(|(a, b, c)| Ok((a.clone(), b.clone(), tables::coefficient(&setup.expr(c)?.to_string())?)))
        .collect::<Result<Vec<_>, ExprError>>()
        .map_err(s)?;
    RMatrix::from_wedges(spec, &wedges).map_err(s)
}

fn build(setup: &Setup, order: u32) -> Res<Built> {
    setup.build(order).map_err(s)
}

/// Representations selected by `choice` that exist for the algebra.
fn representations(setup: &Setup, spec: &LieAlgebraSpec, choice: RepChoice) -> Vec<Representation> {
    let mut out = Vec::new();
    if choice.fundamental() {
        let rep = match setup.algebra {
            AlgebraChoice::Borel2 => Representation::borel2(spec),
            _ => Representation::fundamental(spec),
        };
        if let Ok(r) = rep {
            out.push(r);
        }
    }
    if choice.adjoint() {
        out.push(Representation::adjoint(spec));
    }
    out
}

fn matrix_check(id: String, what: &str, m: &Matrix) -> Check {
    if m.is_zero() {
        Check::pass(id, format!("{what}: exact zero ({0}x{0})", m.dim()))
    } else {
        Check::fail(id, format!("{what}: {} nonzero entries", m.nonzero_count())).with_details(m.describe_nonzero(8))
    }
}

fn tensor_check(id: &str, what: &str, t: &TensorElement) -> Check {
    if t.is_zero() {
        Check::pass(id, format!("{what}: zero"))
    } else {
        Check::fail(id, format!("{what}: {} nonzero terms", t.len())).with_details(vec![t.render()])
    }
}

/// Summarize table comparisons: corrected entries give `pass-with-diffs`.
fn table_check(id: &str, reference: &str, results: &[(String, EntryStatus)]) -> Check {
    let mut status = Status::Pass;
    let mut details = Vec::new();
    let mut counts = (0, 0, 0);
    for (subject, st) in results {
        match st {
            EntryStatus::Match => {
                counts.0 += 1;
                details.push(format!("{subject}: match"));
            }
            EntryStatus::Corrected { printed_diff, note } => {
                counts.1 += 1;
                status = status.and(Status::PassWithDiffs);
                details.push(format!("{subject}: matches the recorded correction ({note}); computed − printed = {printed_diff}"));
            }
            EntryStatus::Mismatch { printed_diff } => {
                counts.2 += 1;
                status = Status::Fail;
                details.push(format!("{subject}: mismatch; computed − printed = {printed_diff}"));
            }
        }
    }
    Check::new(id, status, format!("{} match, {} corrected, {} mismatch", counts.0, counts.1, counts.2))
        .with_reference(reference)
        .with_details(details)
}

fn diff_list_check(id: &str, reference: &str, what: &str, results: &[(String, Option<String>)]) -> Check {
    let bad: Vec<String> =
        results.iter().filter_map(|(l, d)| d.as_ref().map(|d| format!("{l}: difference {d}"))).collect();
    let status = Status::from_bool(bad.is_empty());
    Check::new(id, status, format!("{what}: {}/{} agree", results.len() - bad.len(), results.len()))
        .with_reference(reference)
        .with_details(bad)
}

/// CYBE for the setup's r-matrix, with the implied dual Jacobi identity and
/// the cocycle property of the cobracket.
pub fn cmd_check_cybe(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?;
    let mut rep = new_report("check-cybe", &setup, cfg.session.order);
    let spec = setup.spec()?;
    let r = match setup_r(&setup, &spec) {
        Ok(r) => r,
        Err(e) => {
            rep.push(Check::fail("r-matrix", e));
            return Ok(rep);
        }
    };
    rep.push(run("cybe", || {
        let res = cybe_residual(&spec, &r);
        Ok(if res.is_zero() {
            Check::pass("cybe", "[r12,r13] + [r12,r23] + [r13,r23] = 0")
        } else {
            Check::fail("cybe", format!("{} nonzero components", res.len())).with_details(vec![res.render(&spec)])
        }
        .with_reference("r = Σ x ∧ y of the setup"))
    }));
    rep.push(run("dual-jacobi", || dual_jacobi_check(&spec, &r)));
    rep.push(run("cobracket-cocycle", || cobracket_cocycle_check(&spec, &r)));
    Ok(rep)
}

fn dual_jacobi_check(spec: &LieAlgebraSpec, r: &RMatrix) -> Res<Check> {
    let dual = DualAlgebra::from_r(spec, r).map_err(s)?;
    let j = dual.jacobi_residual();
    Ok(if j.is_zero() {
        Check::pass("dual-jacobi", "Jacobi identity holds in the dual algebra")
    } else {
        Check::fail("dual-jacobi", format!("{} failing triples", j.residuals.len()))
    })
}

fn cobracket_cocycle_check(spec: &LieAlgebraSpec, r: &RMatrix) -> Res<Check> {
    let n = spec.dim();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let res = co_leibniz_residual(spec, r, &LieElement::basis(spec, i), &LieElement::basis(spec, j))
                .map_err(s)?;
            if !res.is_zero() {
                bad.push(format!("({}, {}): {}", spec.label(i), spec.label(j), res.render(spec)));
            }
        }
    }
    Ok(Check::new(
        "cobracket-cocycle",
        Status::from_bool(bad.is_empty()),
        format!("δ([x,y]) = x·δ(y) − y·δ(x) on {} basis pairs, {} failures", n * (n - 1) / 2, bad.len()),
    )
    .with_details(bad))
}

/// The dual Lie algebra of the setup's r-matrix and its carrier structure.
pub fn cmd_dual_algebra(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?;
    let mut rep = new_report("dual-algebra", &setup, cfg.session.order);
    let spec = setup.spec()?;
    let r = match setup_r(&setup, &spec) {
        Ok(r) => r,
        Err(e) => {
            rep.push(Check::fail("r-matrix", e));
            return Ok(rep);
        }
    };
    let dual = match DualAlgebra::from_r(&spec, &r) {
        Ok(d) => d,
        Err(e) => {
            rep.push(Check::fail("dual-algebra", s(e)));
            return Ok(rep);
        }
    };
    rep.push(run("dual-jacobi", || dual_jacobi_check(&spec, &r)));
    if reference(&setup) == Reference::Sl3 {
        rep.push(run("dual-relations", || {
            let checks = compare_dual_relations(&dual, DUAL_ALGEBRA).map_err(s)?;
            let unlisted = unlisted_brackets(&dual, DUAL_ALGEBRA).map_err(s)?;
            let mut details: Vec<String> = checks
                .iter()
                .map(|c| {
                    if c.matches {
                        format!("{} = {}", c.relation, c.computed)
                    } else {
                        format!("{}: computed {} but reference {}", c.relation, c.computed, c.expected)
                    }
                })
                .collect();
            details.extend(unlisted.iter().map(|u| format!("unlisted nonzero bracket {u}")));
            let ok = checks.iter().all(|c| c.matches) && unlisted.is_empty();
            let matched = checks.iter().filter(|c| c.matches).count();
            Ok(Check::new(
                "dual-relations",
                Status::from_bool(ok),
                format!("{matched}/{} relations reproduced, {} unlisted brackets", checks.len(), unlisted.len()),
            )
            .with_reference("tables::DUAL_ALGEBRA")
            .with_details(details))
        }));
    }
    rep.push(run("carrier-structure", || {
        let st = structure_check(&spec, &r).map_err(s)?;
        let w = |v: &[(usize, crate::lie::Weight)], star: bool| -> String {
            v.iter()
                .map(|(i, w)| format!("{}{}: {w}", spec.label(*i), if star { "*" } else { "" }))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut details = vec![
            format!("carrier: {}", st.carrier.join(", ")),
            format!("abelian: {}", st.abelian.join(", ")),
            format!("carrier dual weights: {}", w(&st.diagram.carrier, true)),
            format!("abelian dual weights: {}", w(&st.diagram.abelian, true)),
            format!(
                "carrier subalgebra {}, abelian {}, ideal {}, carrier weights negated {}, abelian weights complementary {}",
                st.carrier_subalgebra,
                st.abelian_commutative,
                st.abelian_ideal,
                st.carrier_weights_negated,
                st.abelian_weights_complement
            ),
        ];
        details.extend(st.diagram.action_failures.iter().cloned());
        Ok(Check::new(
            "carrier-structure",
            Status::from_bool(st.passes()),
            format!("{}-dimensional carrier, {}-dimensional abelian ideal", st.carrier.len(), st.abelian.len()),
        )
        .with_details(details))
    }));
    let ds = dual.spec();
    let mut rows = Vec::new();
    for i in 0..ds.dim() {
        for j in i + 1..ds.dim() {
            let b = ds.bracket_basis(i, j);
            if !b.is_zero() {
                rows.push((format!("[{}, {}]", ds.label(i), ds.label(j)), dual.render(&b)));
            }
        }
    }
    rep.push_table(Table { name: "dual brackets".into(), rows });
    Ok(rep)
}

/// The twisted coproduct: cocycle and Hopf axioms, the coproduct table and
/// exact representation checks.
pub fn cmd_twist(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?;
    let order = cfg.session.order;
    let mut rep = new_report("twist", &setup, order);
    let b = match build(&setup, order) {
        Ok(b) => b,
        Err(e) => {
            rep.push(Check::fail("build", e));
            return Ok(rep);
        }
    };
    let spec = b.ctx.spec().clone();
    let hopf = &b.hopf;
    rep.push(run("cocycle-symbolic", || {
        Ok(tensor_check("cocycle-symbolic", &format!("F12 (Δ⊗id)F − F23 (id⊗Δ)F to order {order}"), &hopf.cocycle_residual().map_err(s)?))
    }));
    rep.push(run("coassociativity", || {
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            let res = hopf.coassociativity_residual(&UElement::generator(&b.ctx, i)).map_err(s)?;
            if !res.is_zero() {
                bad.push(format!("{}: {}", spec.label(i), res.render()));
            }
        }
        Ok(Check::new("coassociativity", Status::from_bool(bad.is_empty()), format!("Δ_F coassociative on {} generators", spec.dim() - bad.len()))
            .with_details(bad))
    }));
    rep.push(run("counit", || {
        let [a, c] = hopf.counit_defects().map_err(s)?;
        Ok(Check::new("counit", Status::from_bool(a.is_zero() && c.is_zero()), "(ε⊗id)F = (id⊗ε)F = 1"))
    }));
    let table: Option<(&[CoproductEntry], &str)> = match reference(&setup) {
        Reference::Sl3 => Some((TWISTED_COPRODUCTS, "tables::TWISTED_COPRODUCTS")),
        Reference::Borel2 => Some((BOREL_COPRODUCTS, "tables::BOREL_COPRODUCTS")),
        Reference::None => None,
    };
    if let Some((entries, name)) = table {
        rep.push(run("coproduct-table", || {
            let ev = hopf.evaluator();
            let mut results = Vec::new();
            for e in entries {
                let x = ev.element(&Expr::parse(e.subject).map_err(s)?).map_err(s)?;
                let d = hopf.coproduct(&x).map_err(s)?;
                results.push((e.subject.to_string(), tables::compare_entry(&b.ctx, &b.defs, e, &d).map_err(s)?));
            }
            Ok(table_check("coproduct-table", name, &results))
        }));
    }
    if reference(&setup) == Reference::Borel2 {
        rep.push(run("r-matrix-universal", || {
            let r = hopf.universal_r().map_err(s)?;
            let want = hopf.evaluator().tensor(&Expr::parse(BOREL_R).map_err(s)?, 2).map_err(s)?;
            Ok(tensor_check("r-matrix-universal", &format!("F21 F⁻¹ − ({BOREL_R})"), &r.sub(&want).map_err(s)?)
                .with_reference("tables::BOREL_R"))
        }));
    }
    for r in representations(&setup, &spec, cfg.session.rep) {
        rep.extend_checks(rep_checks(hopf, &r));
    }
    let mut rows = Vec::new();
    for i in 0..spec.dim() {
        if let Ok(d) = hopf.coproduct_generator(i) {
            rows.push((format!("Δ_F({})", spec.label(i)), d.render()));
        }
    }
    rep.push_table(Table { name: "twisted coproducts".into(), rows });
    Ok(rep)
}

/// Exact checks of one chain in one representation.
fn rep_checks(hopf: &TwistedHopf, r: &Representation) -> Vec<Check> {
    let name = r.kind().name();
    let d = r.dim();
    let mut out = Vec::new();
    out.push(run(&format!("homomorphism-{name}"), || {
        let res = r.homomorphism_residuals();
        Ok(Check::new(
            format!("homomorphism-{name}"),
            Status::from_bool(res.is_empty()),
            format!("ρ([x,y]) = [ρx,ρy] with {} failing pairs", res.len()),
        )
        .with_details(res.iter().map(|(a, b, _)| format!("({a}, {b})")).collect()))
    }));
    out.push(run(&format!("cocycle-{name}"), || {
        Ok(matrix_check(format!("cocycle-{name}"), "F12 (Δ⊗id)F − F23 (id⊗Δ)F", &cocycle_residual(hopf, r).map_err(s)?))
    }));
    out.push(run(&format!("cross-validation-{name}"), || {
        Ok(matrix_check(
            format!("cross-validation-{name}"),
            "symbolic residual in the representation − truncated exact residual",
            &cross_validate_cocycle(hopf, r).map_err(s)?,
        ))
    }));
    out.push(run(&format!("triangularity-{name}"), || {
        let rm = r_matrix(hopf, r).map_err(s)?;
        Ok(matrix_check(format!("triangularity-{name}"), "R21 R − 1", &triangularity_residual(&rm, d).map_err(s)?))
    }));
    out.push(run(&format!("qybe-{name}"), || {
        let rm = r_matrix(hopf, r).map_err(s)?;
        Ok(matrix_check(format!("qybe-{name}"), "R12 R13 R23 − R23 R13 R12", &qybe_residual(&rm, d).map_err(s)?))
    }));
    out
}

impl Report {
    fn extend_checks(&mut self, checks: Vec<Check>) {
        for c in checks {
            self.push(c);
        }
    }
}

/// The classical limit of the twisted coproduct under `from → eps·to`.
pub fn cmd_limit(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?;
    let order = cfg.session.order;
    let mut rep = new_report("classical-limit", &setup, order);
    let b = match build(&setup, order) {
        Ok(b) => b,
        Err(e) => {
            rep.push(Check::fail("build", e));
            return Ok(rep);
        }
    };
    let (from, to) = cfg.limit_params();
    let cl = match ClassicalLimit::new(&b.hopf, ScalingScheme { from, to }) {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::fail("scaling", s(e)));
            return Ok(rep);
        }
    };
    let spec = b.ctx.spec().clone();
    let mut rows = Vec::new();
    rep.push(run("poles", || {
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            match cl.limit_coproduct(&Expr::name(spec.label(i))) {
                Ok(l) => rows.push((format!("Δ^lim({})", spec.label(i)), l.limit.render())),
                Err(e) => bad.push(format!("{}: {e}", spec.label(i))),
            }
        }
        Ok(Check::new("poles", Status::from_bool(bad.is_empty()), format!("{} generators without poles in eps", spec.dim() - bad.len()))
            .with_details(bad))
    }));
    rep.push(run("routes", || {
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            let x = Expr::name(spec.label(i));
            let a = cl.limit_coproduct(&x).map_err(s)?;
            let c = cl.limit_by_degree(&b.hopf, &x).map_err(s)?;
            let d = a.limit.sub(&c.limit).map_err(s)?;
            if !d.is_zero() {
                bad.push(format!("{}: {}", spec.label(i), d.render()));
            }
        }
        Ok(Check::new(
            "routes",
            Status::from_bool(bad.is_empty()),
            format!("scaled-twist and term-by-term limits agree on {}/{} generators", spec.dim() - bad.len(), spec.dim()),
        )
        .with_details(bad))
    }));
    match reference(&setup) {
        Reference::Sl3 => {
            rep.push(run("limit-table", || {
                Ok(table_check("limit-table", "tables::LIMIT_COPRODUCTS", &cl.compare_table(LIMIT_COPRODUCTS).map_err(s)?))
            }));
            rep.push(run("structural-agreement", || {
                Ok(diff_list_check(
                    "structural-agreement",
                    "tables::TWISTED_COPRODUCTS",
                    "top-degree parts of the twisted table equal the limit",
                    &cl.structural_agreement(&b.hopf, TWISTED_COPRODUCTS).map_err(s)?,
                ))
            }));
            rep.push(run("scaled-logarithms", || {
                Ok(diff_list_check(
                    "scaled-logarithms",
                    "tables::SCALED_LOGARITHMS",
                    "scaled factor logarithms",
                    &cl.compare_psi(SCALED_LOGARITHMS).map_err(s)?,
                ))
            }));
        }
        Reference::Borel2 => {
            rep.push(run("limit-table", || {
                Ok(table_check("limit-table", "tables::BOREL_COPRODUCTS", &cl.compare_table(BOREL_COPRODUCTS).map_err(s)?))
            }));
        }
        Reference::None => {}
    }
    rep.push(run("cobracket-consistency", || {
        let r = setup_r(&setup, &spec)?;
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            let res = cl.cobracket_residual(&r, i).map_err(s)?;
            if !res.is_zero() {
                bad.push(format!("{}: {}", spec.label(i), res.render()));
            }
        }
        Ok(Check::new(
            "cobracket-consistency",
            Status::from_bool(bad.is_empty()),
            "antisymmetrized first-order part of Δ^lim equals δ of r on every generator",
        )
        .with_details(bad))
    }));
    rep.push(run("scaled-commutators", || {
        let defects = cl.scaled_commutator_defects().map_err(s)?;
        Ok(Check::new(
            "scaled-commutators",
            Status::from_bool(defects.is_empty()),
            format!("[ê_i, ê_j] = eps·c_ij^k ê_k, {} defects", defects.len()),
        )
        .with_details(defects.iter().map(|(i, j)| format!("({}, {})", spec.label(*i), spec.label(*j))).collect()))
    }));
    rep.push_table(Table { name: "limit coproducts".into(), rows });
    Ok(rep)
}

/// The setup with the deformation parameter renamed to `zeta`.
fn zeta_setup(setup: &Setup) -> Res<Setup> {
    setup.with_deformation(Param::Zeta).map_err(s)
}

/// The reference map when it applies, else the derived one.
fn coordinate_map(b: &Built, r: &RMatrix, use_table: bool, bound: u32) -> Res<CoordinateMap> {
    if use_table {
        CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)
    } else {
        Ok(derive_dual_map(&b.hopf, r, Param::Zeta, bound).map_err(s)?.map)
    }
}

/// Coordinates of the dual group: derivation, closure, reference table,
/// weights and the first-order consistency with the cobracket.
pub fn cmd_dual_coords(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?;
    let order = cfg.session.order;
    let bound = cfg.dual_coords.bound;
    let mut rep = new_report("dual-coords", &setup, order);
    let sl3 = reference(&setup) == Reference::Sl3;
    let prepared = zeta_setup(&setup).and_then(|z| {
        let b = build(&z, order)?;
        let r = setup_r(&z, b.ctx.spec())?;
        Ok((b, r))
    });
    let (b, r) = match prepared {
        Ok(x) => x,
        Err(e) => {
            rep.push(Check::fail("build", e));
            return Ok(rep);
        }
    };
    let spec = b.ctx.spec().clone();
    let mut derived: Option<CoordinateMap> = None;
    rep.push(run("derive", || {
        let d = derive_dual_map(&b.hopf, &r, Param::Zeta, bound).map_err(s)?;
        let mut details: Vec<String> = d.map.nontrivial_forms().iter().map(|(l, e)| format!("{l} = {e}")).collect();
        details.push(format!("stable after {} sweeps", d.sweeps));
        let mut status = Status::Pass;
        let mut summary = format!("coordinates found with correction degree ≤ {bound}");
        if sl3 {
            let table = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)?;
            let diff = d.map.differing_images(&table).map_err(s)?;
            if diff.is_empty() {
                summary.push_str("; equal to the reference map");
            } else {
                status = Status::Fail;
                summary.push_str(&format!("; differs from the reference map on {}", diff.join(", ")));
            }
        }
        derived = Some(d.map);
        Ok(Check::new("derive", status, summary).with_reference("tables::DUAL_COORDINATES").with_details(details))
    }));
    let supplied = &cfg.dual_coords.map;
    let map = if !supplied.is_empty() {
        let entries: Vec<(&str, &str)> = supplied.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        match CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, &entries) {
            Ok(m) => {
                rep.push(Check::pass("supplied-map", format!("{} images read from the session", entries.len())));
                Some(m)
            }
            Err(e) => {
                rep.push(Check::fail("supplied-map", e.to_string()));
                None
            }
        }
    } else if sl3 {
        CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).ok()
    } else {
        derived
    };
    let Some(map) = map else {
        return Ok(rep);
    };
    rep.push_table(Table {
        name: "coordinate map".into(),
        rows: map.nontrivial_forms().into_iter().map(|(l, e)| (l, e.to_string())).collect(),
    });
    let mut rows = Vec::new();
    rep.push(run("closure", || {
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            match map.dual_coproduct(&b.hopf, i) {
                Ok(d) => rows.push((format!("Δ_F({})", map.forms()[i].0), d.render())),
                Err(e) => bad.push(format!("{}: {e}", map.forms()[i].0)),
            }
        }
        Ok(Check::new(
            "closure",
            Status::from_bool(bad.is_empty()),
            format!("{}/{} coproducts close over the # generators", spec.dim() - bad.len(), spec.dim()),
        )
        .with_details(bad))
    }));
    if sl3 {
        rep.push(run("coproduct-table", || {
            Ok(table_check(
                "coproduct-table",
                "tables::DUAL_COORDINATE_COPRODUCTS",
                &map.compare_table(&b.hopf, DUAL_COORDINATE_COPRODUCTS).map_err(s)?,
            ))
        }));
    }
    rep.push(run("weights", || {
        let dual = DualAlgebra::from_r(&spec, &r).map_err(s)?;
        let ws = dual_weights(&weight_diagram(&spec, &r, &dual).map_err(s)?, spec.dim());
        let mut details = Vec::new();
        let mut ok = true;
        for i in 0..spec.dim() {
            let w = weight_bookkeeping(&map, &b.hopf, i, &ws).map_err(s)?;
            ok &= w.passes();
            let chains: Vec<String> = w.chains.iter().map(|(c, wt)| format!("{c} [{wt}]")).collect();
            details.push(format!("{} [{}]: {}", w.subject, w.weight, if chains.is_empty() { "leading terms only".into() } else { chains.join(", ") }));
            details.extend(w.mismatches);
        }
        Ok(Check::new("weights", Status::from_bool(ok), "every term carries the dual weight of its subject").with_details(details))
    }));
    rep.push(run("cobracket-consistency", || {
        let mut bad = Vec::new();
        for i in 0..spec.dim() {
            let res = dual_cobracket_residual(&map, &b.hopf, &r, i).map_err(s)?;
            if !res.is_zero() {
                bad.push(format!("{}: {}", map.forms()[i].0, res.render(&spec)));
            }
        }
        Ok(Check::new(
            "cobracket-consistency",
            Status::from_bool(bad.is_empty()),
            "first-order antisymmetric part of Δ_F(x#) equals δ(x)",
        )
        .with_details(bad))
    }));
    rep.push_table(Table { name: "coproducts in # coordinates".into(), rows });
    Ok(rep)
}

fn format_roots(v: &[Rational]) -> String {
    format!("{{{}}}", v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
}

/// Scan `gamma` for points where the `#` coproducts lose obstruction chains.
pub fn cmd_scan_gamma(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let setup = cfg.resolve_setup()?.with_gamma(None);
    let order = cfg.session.order;
    let mut rep = new_report("scan-gamma", &setup, order);
    let sl3 = reference(&setup) == Reference::Sl3;
    let prepared = zeta_setup(&setup).and_then(|z| {
        let b = build(&z, order)?;
        let r = setup_r(&z, b.ctx.spec())?;
        let map = coordinate_map(&b, &r, sl3, cfg.dual_coords.bound)?;
        let scan = scan_gamma(&map, &b.hopf).map_err(s)?;
        Ok(scan)
    });
    let scan: GammaScan = match prepared {
        Ok(x) => x,
        Err(e) => {
            rep.push(Check::fail("scan", e));
            return Ok(rep);
        }
    };
    let expected: Vec<Rational> = [-1, 0, 1].iter().map(|&n| Rational::from_int(n)).collect();
    let found = format_roots(&scan.irregular);
    rep.push(if sl3 {
        Check::new("irregular-set", Status::from_bool(scan.irregular == expected), format!("irregular gamma {found}"))
            .with_reference("irregular set {0, 1, -1}")
    } else {
        Check::pass("irregular-set", format!("irregular gamma {found}"))
    });
    if sl3 {
        let one = Rational::one();
        let zero = Rational::zero();
        let minus = -&one;
        let at = |label: &str, g: &Rational| scan.generator(label).is_some_and(|s| s.is_quasiprimitive_at(g));
        let e31 = scan.generator("e31#");
        let perp_vanish = e31.is_some_and(|g| {
            let perp: Vec<_> = g.chains.iter().filter(|c| c.chain.contains("h_perp#")).collect();
            !perp.is_empty() && perp.iter().all(|c| c.vanishes_at.contains(&zero))
        });
        let others_survive = e31.is_some_and(|g| {
            g.chains.iter().filter(|c| !c.chain.contains("h_perp#")).all(|c| !c.vanishes_at.contains(&zero))
        });
        let details = vec![
            format!("gamma = 1: quasiprimitive {}", scan.attributed_to(&one).join(", ")),
            format!("gamma = -1: quasiprimitive {}", scan.attributed_to(&minus).join(", ")),
            format!("gamma = 0: quasiprimitive {{{}}}; h_perp chains of e31# vanish: {perp_vanish}", scan.attributed_to(&zero).join(", ")),
        ];
        let ok = at("e21#", &one)
            && !at("e21#", &minus)
            && at("e32#", &minus)
            && !at("e32#", &one)
            && perp_vanish
            && others_survive;
        rep.push(
            Check::new("attribution", Status::from_bool(ok), "e21# at 1, e32# at -1, h_perp chains of e31# at 0")
                .with_details(details),
        );
    }
    let rows = scan
        .generators
        .iter()
        .map(|g| {
            let chains: Vec<String> =
                g.chains.iter().map(|c| format!("{} vanishes at {}", c.chain, format_roots(&c.vanishes_at))).collect();
            let text = if g.always_quasiprimitive { "quasiprimitive for all gamma".to_string() } else { chains.join("; ") };
            (g.generator.clone(), text)
        })
        .collect();
    rep.push_table(Table { name: "obstruction chains".into(), rows });
    Ok(rep)
}

/// Parabolic extensions of the zeta chain, built in `#` coordinates.
pub fn cmd_parabolic(cfg: &SessionConfig, signs: SignChoice) -> Result<Report, ConfigError> {
    let order = cfg.session.order;
    let base = Setup::sl3_extended_jordanian().with_deformation(Param::Zeta).map_err(|e| ConfigError::Setup(e.into()))?;
    let gamma_label = match &cfg.session.gamma {
        GammaBinding::Value(g) => g.to_string(),
        _ => "sign".into(),
    };
    let mut rep = Report::new("parabolic", &base.name, order, &gamma_label);
    let prepared = build(&base, order).and_then(|b| {
        let map = CoordinateMap::from_table(&b.ctx, &b.defs, Param::Zeta, DUAL_COORDINATES).map_err(s)?;
        Ok((b, map))
    });
    let (b, map) = match prepared {
        Ok(x) => x,
        Err(e) => {
            rep.push(Check::fail("build", e));
            return Ok(rep);
        }
    };
    for sign in signs.signs() {
        let tag = if sign > 0 { "plus" } else { "minus" };
        let gamma = match &cfg.session.gamma {
            GammaBinding::Value(g) => g.clone(),
            _ => Rational::from_int(sign as i64),
        };
        let built = build_parabolic(&map, &b.hopf, &base, sign, &gamma);
        let p = match built {
            Ok(p) => p,
            Err(e) => {
                rep.push(Check::fail(format!("construct-{tag}"), format!("gamma = {gamma}: {e}")));
                continue;
            }
        };
        rep.push(Check::pass(format!("construct-{tag}"), format!("gamma = {gamma}: exp({})", p.exponent)));
        rep.push_table(Table {
            name: format!("parabolic-{tag}"),
            rows: vec![
                ("carrier".into(), p.carrier.clone()),
                ("exponent".into(), p.exponent.to_string()),
            ],
        });
        let pb = match build(&p.setup, order) {
            Ok(x) => x,
            Err(e) => {
                rep.push(Check::fail(format!("build-{tag}"), e));
                continue;
            }
        };
        if gamma == Rational::from_int(sign as i64) {
            rep.push(run(&format!("preset-{tag}"), || {
                let preset = build(&Setup::sl3_parabolic(sign), order)?;
                let a = pb.hopf.chain().factors[0].exponent_tensor(&pb.ctx, &pb.defs).map_err(s)?;
                let c = preset.hopf.chain().factors[0].exponent_tensor(&preset.ctx, &preset.defs).map_err(s)?;
                Ok(tensor_check(&format!("preset-{tag}"), "constructed exponent − preset exponent", &a.sub(&c.transfer(&pb.ctx)).map_err(s)?))
            }));
        }
        rep.push(run(&format!("degeneration-{tag}"), || {
            let d = p.degeneration_residual(&pb.ctx, &pb.defs, Param::Zeta).map_err(s)?;
            Ok(tensor_check(&format!("degeneration-{tag}"), "exponent at zeta = 0 − c·h_perp ⊗ ln(1 + eta x)", &d))
        }));
        rep.push(run(&format!("eta-free-{tag}"), || {
            let t = p.eta_free_part(&pb.ctx, &pb.defs).map_err(s)?;
            Ok(Check::new(
                format!("eta-free-{tag}"),
                Status::from_bool(!t.is_zero()),
                "the factor stays nontrivial at eta = 0",
            )
            .with_details(vec![t.render()]))
        }));
        rep.push(run(&format!("cocycle-symbolic-{tag}"), || {
            Ok(tensor_check(
                &format!("cocycle-symbolic-{tag}"),
                &format!("full chain residual to joint order {order}"),
                &pb.hopf.cocycle_residual().map_err(s)?,
            ))
        }));
        for r in representations(&p.setup, pb.ctx.spec(), cfg.session.rep) {
            let name = r.kind().name();
            rep.push(run(&format!("cocycle-{name}-{tag}"), || {
                Ok(matrix_check(format!("cocycle-{name}-{tag}"), "F12 (Δ⊗id)F − F23 (id⊗Δ)F", &cocycle_residual(&pb.hopf, &r).map_err(s)?))
            }));
        }
    }
    Ok(rep)
}

/// Always-on properties of the engine on the shipped instances.
pub fn cmd_properties(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let order = cfg.session.order;
    let mut rep = Report::new("properties", "shipped", order, "symbolic");
    let algebras = [
        ("sl3", LieAlgebraSpec::sl3_adapted(), Setup::sl3_extended_jordanian()),
        ("b2", LieAlgebraSpec::borel2(), Setup::b2_jordanian()),
    ];
    for (tag, spec, setup) in &algebras {
        let ctx = Uea::new(spec.clone(), GradingContext::new(order));
        rep.push(run(&format!("straightening-{tag}"), || {
            let n = spec.dim();
            let g = |i| UElement::generator(&ctx, i);
            let mut bad = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let comm = g(i).commutator(&g(j)).map_err(s)?;
                    let want = UElement::from_lie(&ctx, &spec.bracket_basis(i, j));
                    if !comm.sub(&want).map_err(s)?.is_zero() {
                        bad.push(format!("[{}, {}]", spec.label(i), spec.label(j)));
                    }
                    for k in 0..n {
                        let left = g(i).mul(&g(j)).map_err(s)?.mul(&g(k)).map_err(s)?;
                        let right = g(i).mul(&g(j).mul(&g(k)).map_err(s)?).map_err(s)?;
                        if !left.sub(&right).map_err(s)?.is_zero() {
                            bad.push(format!("({} {}) {}", spec.label(i), spec.label(j), spec.label(k)));
                        }
                    }
                }
            }
            Ok(Check::new(
                format!("straightening-{tag}"),
                Status::from_bool(bad.is_empty()),
                format!("normal ordering is associative and reproduces brackets on {n}³ generator words"),
            )
            .with_details(bad))
        }));
        rep.push(run(&format!("coproduct0-{tag}"), || {
            let n = spec.dim();
            let mut bad = Vec::new();
            let mut count = 0;
            for m in monomials(n, 3) {
                count += 1;
                let x = UElement::from_terms(&ctx, [(m.clone(), crate::scalar::ParamScalar::one())]);
                let d = x.coproduct0();
                let lhs = d.apply_coproduct0(1).map_err(s)?;
                let rhs = d.apply_coproduct0(2).map_err(s)?;
                let label = m.render(spec.labels());
                if !lhs.sub(&rhs).map_err(s)?.is_zero() {
                    bad.push(format!("coassociativity fails on {label}"));
                }
                for leg in [1, 2] {
                    match d.counit_leg(leg).map_err(s)? {
                        TensorOrElement::Element(e) if e.sub(&x).map_err(s)?.is_zero() => {}
                        _ => bad.push(format!("counit on leg {leg} fails on {label}")),
                    }
                }
            }
            Ok(Check::new(
                format!("coproduct0-{tag}"),
                Status::from_bool(bad.is_empty()),
                format!("Δ⁰ coassociative and counital on {count} monomials of degree ≤ 3"),
            )
            .with_details(bad))
        }));
        let r = setup_r(setup, spec);
        rep.push(run(&format!("cybe-implies-jacobi-{tag}"), || {
            let r = r.clone()?;
            let mut details = Vec::new();
            let mut ok = true;
            let mut instances = vec![("r".to_string(), r.clone())];
            for (a, b, _) in &setup.r_matrix {
                let single = RMatrix::from_wedges(spec, &[(a.clone(), b.clone(), crate::scalar::ParamScalar::one())]).map_err(s)?;
                instances.push((format!("{a} ∧ {b}"), single));
            }
            for (name, inst) in instances {
                let cybe = cybe_residual(spec, &inst).is_zero();
                let jacobi = DualAlgebra::from_r(spec, &inst).map_err(s)?.jacobi_residual().is_zero();
                ok &= !cybe || jacobi;
                details.push(format!("{name}: CYBE {cybe}, dual Jacobi {jacobi}"));
            }
            Ok(Check::new(format!("cybe-implies-jacobi-{tag}"), Status::from_bool(ok), "every CYBE solution has a Jacobi dual")
                .with_details(details))
        }));
        rep.push(run(&format!("cobracket-cocycle-{tag}"), || {
            let mut c = cobracket_cocycle_check(spec, &r.clone()?)?;
            c.id = format!("cobracket-cocycle-{tag}");
            Ok(c)
        }));
        let reps: Vec<Representation> = if *tag == "b2" {
            Representation::borel2(spec).into_iter().chain([Representation::adjoint(spec)]).collect()
        } else {
            Representation::fundamental(spec).into_iter().chain([Representation::adjoint(spec)]).collect()
        };
        for rho in reps {
            let name = rho.kind().name();
            let res = rho.homomorphism_residuals();
            rep.push(Check::new(
                format!("homomorphism-{tag}-{name}"),
                Status::from_bool(res.is_empty()),
                format!("{}-dimensional representation, {} failing pairs", rho.dim(), res.len()),
            ));
        }
    }
    rep.push(run("carrier-decomposition", || {
        let spec = LieAlgebraSpec::sl3_adapted();
        let r = setup_r(&Setup::sl3_extended_jordanian(), &spec)?;
        let dec = carrier_decomposition(&spec, &r);
        Ok(Check::new(
            "carrier-decomposition",
            Status::from_bool(dec.support_closed),
            format!("support of r closed under the bracket: {}", dec.support_closed),
        ))
    }));
    Ok(rep)
}

/// PBW monomials of degree 1..=max in `n` generators.
fn monomials(n: usize, max: u32) -> Vec<Monomial> {
    fn go(n: usize, start: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if cur.iter().any(|&e| e > 0) {
            out.push(Monomial::from_exponents(cur));
        }
        if left == 0 {
            return;
        }
        for i in start..n {
            cur[i] += 1;
            go(n, i, left - 1, cur, out);
            cur[i] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, 0, max, &mut vec![0; n], &mut out);
    out
}

/// Every reference check in sequence order; independent parts run
/// concurrently and are assembled in a fixed order.
pub fn cmd_suite(cfg: &SessionConfig) -> Result<Report, ConfigError> {
    let order = cfg.session.order;
    let base = SessionConfig {
        session: crate::config::SessionSection {
            order,
            rep: cfg.session.rep,
            format: cfg.session.format,
            ..Default::default()
        },
        ..Default::default()
    };
    let b2 = SessionConfig {
        session: crate::config::SessionSection { preset: "b2-jordanian".into(), ..base.session.clone() },
        ..Default::default()
    };
    type Job<'a> = Box<dyn Fn() -> Result<Report, ConfigError> + Send + Sync + 'a>;
    // The label distinguishes the b(2) runs from the sl(3) ones.
    let jobs: Vec<(Option<&str>, Job)> = vec![
        (None, Box::new(|| cmd_check_cybe(&base))),
        (None, Box::new(|| cmd_dual_algebra(&base))),
        (None, Box::new(|| cmd_twist(&base))),
        (None, Box::new(|| cmd_limit(&base))),
        (None, Box::new(|| cmd_dual_coords(&base))),
        (None, Box::new(|| cmd_scan_gamma(&base))),
        (None, Box::new(|| cmd_parabolic(&base, SignChoice::Both))),
        (Some("b2-twist"), Box::new(|| cmd_twist(&b2))),
        (Some("b2-classical-limit"), Box::new(|| cmd_limit(&b2))),
        (None, Box::new(|| cmd_properties(&base))),
    ];
    let results: Vec<Result<Report, ConfigError>> = jobs.par_iter().map(|(_, j)| j()).collect();
    let mut rep = Report::new("suite", "all", order, "per check");
    for ((label, _), r) in jobs.iter().zip(results) {
        let mut r = r?;
        if let Some(l) = label {
            r.command = l.to_string();
        }
        rep.absorb(r);
    }
    Ok(rep)
}

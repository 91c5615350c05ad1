//! Coordinates adapted to the dual group: a triangular change of generators
//! `x ↦ x#` under which the twisted coproducts close over the `#` alphabet.

use std::collections::BTreeMap;
use std::sync::Arc;

use parking_lot::Mutex;
use rustc_hash::FxHashMap;

use crate::bialgebra::{carrier_decomposition, cobracket, LieTensor, RMatrix, WeightDiagram};
use crate::expr::{Definitions, Expr, ExprError, SymbolicEvaluator};
use crate::lie::{CartanElement, LieAlgebraSpec, LieElement, LieError, Weight};
use crate::linalg::solve;
use crate::presets::{FactorSpec, Setup};
use crate::scalar::{common_rational_roots, Exponents, Param, ParamScalar, Rational, NUM_PARAMS};
use crate::tables::{compare_entry, CoproductEntry, EntryStatus};
use crate::twist::{scalar_expr, FactorKind, TwistError, TwistedHopf};
use crate::uea::{Monomial, TensorElement, TensorKey, UElement, Uea, UeaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DualCoordError {
    #[error("`{0}` is not a generator of the algebra")]
    UnknownGenerator(String),
    #[error("the image of `{label}` does not start with a power of the parameter times the generator: {detail}")]
    NotTriangular { label: String, detail: String },
    #[error("does not close over the # generators: {0}")]
    NoClosure(String),
    #[error("rewriting did not terminate within {0} steps")]
    NoTermination(usize),
    #[error("no coordinate correction of degree ≤ {bound} for `{label}`: {detail}")]
    NoSolution { label: String, bound: u32, detail: String },
    #[error("{0}")]
    Refused(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Uea(#[from] UeaError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// The `#` label of a generator label.
pub fn dual_label(label: &str) -> String {
    format!("{label}#")
}

/// A change of generators `x# = x·p^s + (higher terms)`, one image per basis
/// generator. The shift `s` is 0 for most generators; a generator whose image
/// starts at `p·x` (such as `ln(1 + p x)`) absorbs one power of `p`.
pub struct CoordinateMap {
    ctx: Arc<Uea>,
    param: Param,
    forms: Vec<(String, Expr)>,
    images: Vec<UElement>,
    shifts: Vec<i16>,
    dual_ctx: Arc<Uea>,
    cache: Mutex<FxHashMap<Monomial, UElement>>,
}

/// The commutative storage algebra for `#`-normal forms; only its labels
/// and basis order are used.
fn dual_storage(spec: &LieAlgebraSpec, grading: crate::uea::GradingContext) -> Result<Arc<Uea>, LieError> {
    let n = spec.dim();
    let labels = spec.labels().iter().map(|l| dual_label(l)).collect();
    let weights = (0..n).map(|i| spec.weight(i).clone()).collect();
    let s = LieAlgebraSpec::from_parts(format!("{}#", spec.name()), labels, vec![vec![Vec::new(); n]; n], vec![], weights)?;
    Ok(Uea::new(s, grading))
}

impl CoordinateMap {
    /// Build from `(label#, expression in g)` pairs; unlisted generators map
    /// to themselves.
    pub fn new(
        ctx: &Arc<Uea>,
        defs: &Definitions,
        param: Param,
        entries: &[(String, Expr)],
    ) -> Result<Self, DualCoordError> {
        let spec = ctx.spec();
        let n = spec.dim();
        let mut forms: Vec<(String, Expr)> = spec.labels().iter().map(|l| (dual_label(l), Expr::name(l))).collect();
        for (label, e) in entries {
            let base = label.strip_suffix('#').unwrap_or(label);
            let i = spec.index_of(base).map_err(|_| DualCoordError::UnknownGenerator(label.clone()))?;
            forms[i].1 = e.clone();
        }
        let ev = SymbolicEvaluator::new(ctx, defs);
        let mut images = Vec::with_capacity(n);
        let mut shifts = Vec::with_capacity(n);
        for (i, (label, e)) in forms.iter().enumerate() {
            let img = ev.element(e)?;
            let s = leading_shift(&img, i, param).map_err(|detail| DualCoordError::NotTriangular {
                label: label.clone(),
                detail,
            })?;
            images.push(img);
            shifts.push(s);
        }
        let map = Self {
            ctx: ctx.clone(),
            param,
            forms,
            images,
            shifts,
            dual_ctx: dual_storage(spec, ctx.grading().clone())?,
            cache: Mutex::new(FxHashMap::default()),
        };
        map.check_triangular()?;
        Ok(map)
    }

    /// Build from reference text pairs such as `("e13#", "ln(1 + zeta*e13)")`.
    pub fn from_table(
        ctx: &Arc<Uea>,
        defs: &Definitions,
        param: Param,
        table: &[(&str, &str)],
    ) -> Result<Self, DualCoordError> {
        let entries = table
            .iter()
            .map(|(l, e)| Ok((l.to_string(), Expr::parse(e)?)))
            .collect::<Result<Vec<_>, ExprError>>()?;
        Self::new(ctx, defs, param, &entries)
    }

    pub fn identity(ctx: &Arc<Uea>, param: Param) -> Result<Self, DualCoordError> {
        Self::new(ctx, &Definitions::new(), param, &[])
    }

    pub fn ctx(&self) -> &Arc<Uea> {
        &self.ctx
    }

    pub fn param(&self) -> Param {
        self.param
    }

    /// `(label#, expression)` for every generator, in basis order.
    pub fn forms(&self) -> &[(String, Expr)] {
        &self.forms
    }

    /// Entries that differ from the identity.
    pub fn nontrivial_forms(&self) -> Vec<(String, Expr)> {
        let labels = self.ctx.spec().labels();
        self.forms.iter().zip(labels).filter(|((_, e), l)| *e != Expr::name(l)).map(|(f, _)| f.clone()).collect()
    }

    pub fn image(&self, i: usize) -> &UElement {
        &self.images[i]
    }

    pub fn shifts(&self) -> &[i16] {
        &self.shifts
    }

    /// The algebra whose labels are the `#` generators; `#`-normal forms are
    /// stored there.
    pub fn dual_ctx(&self) -> &Arc<Uea> {
        &self.dual_ctx
    }

    /// `defs` extended by `x# := image` for every generator, so that text in
    /// `#` coordinates can be evaluated in `g`.
    pub fn definitions(&self, defs: &Definitions) -> Definitions {
        let mut out = defs.clone();
        for (l, e) in &self.forms {
            out.insert(l.clone(), e.clone());
        }
        out
    }

    /// Every image must be `p^s x` plus terms strictly later in the rewrite order.
    fn check_triangular(&self) -> Result<(), DualCoordError> {
        for (i, img) in self.images.iter().enumerate() {
            let dim = self.ctx.dim();
            let lead = Monomial::generator(dim, i);
            for (m, c) in img.terms() {
                for (a, _) in c.split_by(self.param) {
                    let lvl = self.level(std::slice::from_ref(m), a);
                    let is_lead = *m == lead && a == self.shifts[i];
                    if !is_lead && lvl <= (0, 1) {
                        return Err(DualCoordError::NotTriangular {
                            label: self.forms[i].0.clone(),
                            detail: format!("term {} is not of higher order", m.render(self.ctx.spec().labels())),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Rewrite order of a term: (parameter power minus absorbed powers, degree).
    fn level(&self, legs: &[Monomial], power: i16) -> (i16, u32) {
        let mut absorbed = 0i16;
        let mut deg = 0;
        for m in legs {
            for (i, &e) in m.exponents().iter().enumerate() {
                absorbed += self.shifts[i] * e as i16;
            }
            deg += m.degree();
        }
        (power - absorbed, deg)
    }

    /// Image of an ordered `#`-monomial, evaluated in `g`.
    fn monomial_image(&self, m: &Monomial) -> Result<UElement, DualCoordError> {
        if let Some(hit) = self.cache.lock().get(m) {
            return Ok(hit.clone());
        }
        let mut out = UElement::one(&self.ctx);
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                out = out.mul(&self.images[i])?;
            }
        }
        self.cache.lock().insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Substitute the images into a `#`-normal form: the value in `g`.
    pub fn from_dual(&self, t: &TensorElement) -> Result<TensorElement, DualCoordError> {
        let mut out = TensorElement::zero(&self.ctx, t.rank());
        for (k, c) in t.terms() {
            let legs = k.iter().map(|m| self.monomial_image(m)).collect::<Result<Vec<_>, _>>()?;
            out = out.add(&TensorElement::from_legs(&legs)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn element_from_dual(&self, x: &UElement) -> Result<UElement, DualCoordError> {
        let t = TensorElement::from_legs(&[x.clone()])?;
        Ok(self.from_dual(&t)?.to_element())
    }

    /// Express a tensor over `g` in ordered `#`-monomials by triangular
    /// reduction. Fails if a remainder term would need a negative power of
    /// the parameter (the tensor does not close over the `#` alphabet).
    pub fn to_dual(&self, t: &TensorElement) -> Result<TensorElement, DualCoordError> {
        const MAX_STEPS: usize = 10_000;
        let rank = t.rank();
        let mut rest = t.clone();
        let mut out: Vec<(TensorKey, ParamScalar)> = Vec::new();
        let mut last: Option<(i16, u32)> = None;
        for _ in 0..MAX_STEPS {
            if rest.is_zero() {
                let mut dual = TensorElement::from_terms(&self.dual_ctx, rank, out);
                dual.set_truncated(t.is_truncated());
                return Ok(dual);
            }
            let mut min: Option<(i16, u32)> = None;
            for (k, c) in rest.terms() {
                for (a, _) in c.split_by(self.param) {
                    let l = self.level(k, a);
                    min = Some(min.map_or(l, |m| m.min(l)));
                }
            }
            let min = min.expect("nonzero remainder has terms");
            if min.0 < 0 {
                let sample = rest
                    .sorted_terms()
                    .into_iter()
                    .find_map(|(k, c)| {
                        c.split_by(self.param)
                            .into_iter()
                            .find(|(a, _)| self.level(k, *a) == min)
                            .map(|(a, _)| format!("({}) {}", c.part_with_exponent(self.param, a), rest.render_key(k)))
                    })
                    .unwrap_or_default();
                return Err(DualCoordError::NoClosure(sample));
            }
            if last.is_some_and(|l| min <= l) {
                return Err(DualCoordError::NoClosure(format!("leading level {min:?} did not increase")));
            }
            last = Some(min);
            let mut sub = TensorElement::zero(&self.ctx, rank);
            let leading: Vec<(TensorKey, ParamScalar)> = rest
                .terms()
                .flat_map(|(k, c)| {
                    c.split_by(self.param)
                        .into_iter()
                        .filter(|(a, _)| self.level(k, *a) == min)
                        .map(|(a, _)| (k.clone(), c.part_with_exponent(self.param, a)))
                        .collect::<Vec<_>>()
                })
                .collect();
            for (k, c) in leading {
                let absorbed: i16 =
                    k.iter().flat_map(|m| m.exponents().iter().enumerate().map(|(i, &e)| self.shifts[i] * e as i16)).sum();
                let coeff = c.div_param_pow(self.param, absorbed).expect("level is non-negative");
                let legs = k.iter().map(|m| self.monomial_image(m)).collect::<Result<Vec<_>, _>>()?;
                sub = sub.add(&TensorElement::from_legs(&legs)?.scale(&coeff))?;
                out.push((k, coeff));
            }
            rest = rest.sub(&sub)?;
        }
        Err(DualCoordError::NoTermination(MAX_STEPS))
    }

    pub fn element_to_dual(&self, x: &UElement) -> Result<UElement, DualCoordError> {
        let t = TensorElement::from_legs(&[x.clone()])?;
        Ok(self.to_dual(&t)?.to_element())
    }

    /// `Δ_F(x#)` in `#`-normal form.
    pub fn dual_coproduct(&self, hopf: &TwistedHopf, i: usize) -> Result<TensorElement, DualCoordError> {
        let d = hopf.coproduct(&self.images[i])?;
        self.to_dual(&d)
    }

    /// Compare `Δ_F(x#)` with reference entries whose text uses `#` names.
    pub fn compare_table(
        &self,
        hopf: &TwistedHopf,
        table: &[CoproductEntry],
    ) -> Result<Vec<(String, EntryStatus)>, DualCoordError> {
        let defs = self.definitions(hopf.defs());
        let ev = SymbolicEvaluator::new(&self.ctx, &defs);
        let mut out = Vec::new();
        for entry in table {
            let x = ev.element(&Expr::parse(entry.subject)?)?;
            let d = hopf.coproduct(&x)?;
            out.push((entry.subject.to_string(), compare_entry(&self.ctx, &defs, entry, &d)?));
        }
        Ok(out)
    }
}

/// The shift `s` with `image = p^s · x_i + …`, read from the lowest
/// parameter power at which `x_i` itself appears.
fn leading_shift(img: &UElement, i: usize, p: Param) -> Result<i16, String> {
    let lead = Monomial::generator(img.ctx().dim(), i);
    let c = img.coefficient(&lead);
    let parts: BTreeMap<i16, ParamScalar> = c.split_by(p);
    match parts.iter().next() {
        Some((s, v)) if v.is_one() => Ok(*s),
        Some((s, v)) => Err(format!("coefficient of the generator at power {s} is {v}, expected 1")),
        None => Err("the generator itself does not appear".into()),
    }
}

impl CoordinateMap {
    /// A copy with one image replaced.
    fn replaced(&self, i: usize, form: Expr, image: UElement) -> Result<Self, DualCoordError> {
        let s = leading_shift(&image, i, self.param)
            .map_err(|detail| DualCoordError::NotTriangular { label: self.forms[i].0.clone(), detail })?;
        let mut forms = self.forms.clone();
        forms[i].1 = form;
        let mut images = self.images.clone();
        images[i] = image;
        let mut shifts = self.shifts.clone();
        shifts[i] = s;
        let map = Self {
            ctx: self.ctx.clone(),
            param: self.param,
            forms,
            images,
            shifts,
            dual_ctx: self.dual_ctx.clone(),
            cache: Mutex::new(FxHashMap::default()),
        };
        map.check_triangular()?;
        Ok(map)
    }

    /// Labels of generators whose images differ from `other`.
    pub fn differing_images(&self, other: &CoordinateMap) -> Result<Vec<String>, DualCoordError> {
        let mut out = Vec::new();
        for (i, img) in self.images.iter().enumerate() {
            if !img.sub(&other.images[i].transfer(&self.ctx))?.is_zero() {
                out.push(self.forms[i].0.clone());
            }
        }
        Ok(out)
    }

    /// `key` with the shifted generators removed: terms that differ only by
    /// powers of those generators form one chain.
    pub fn chain_key(&self, key: &[Monomial]) -> Vec<Monomial> {
        key.iter()
            .map(|m| {
                let e: Vec<u8> =
                    m.exponents().iter().enumerate().map(|(i, &x)| if self.shifts[i] > 0 { 0 } else { x }).collect();
                Monomial::from_exponents(&e)
            })
            .collect()
    }

    pub fn render_chain(&self, key: &[Monomial]) -> String {
        let labels = self.dual_ctx.spec().labels();
        key.iter().map(|m| if m.is_unit() { "1".to_string() } else { m.render(labels) }).collect::<Vec<_>>().join(" ⊗ ")
    }

    /// The chains of a `#`-normal form of `Δ_F(x_i#)` other than the leading
    /// `x# ⊗ f` and `f ⊗ x#` (with `f` a function of the shifted generators).
    pub fn obstruction_chains(&self, dual: &TensorElement, i: usize) -> BTreeMap<Vec<Monomial>, Vec<(TensorKey, ParamScalar)>> {
        let dim = self.ctx.dim();
        let x = self.chain_key(&[Monomial::generator(dim, i)]).remove(0);
        let unit = Monomial::unit(dim);
        let leading = [vec![x.clone(), unit.clone()], vec![unit, x]];
        let mut out: BTreeMap<Vec<Monomial>, Vec<(TensorKey, ParamScalar)>> = BTreeMap::new();
        for (k, c) in dual.sorted_terms() {
            let key = self.chain_key(k);
            if !leading.contains(&key) {
                out.entry(key).or_default().push((k.clone(), c.clone()));
            }
        }
        out
    }
}

/// Where one obstruction chain vanishes as a function of `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainScan {
    pub chain: String,
    /// Rational `gamma` at which every coefficient of the chain vanishes.
    pub vanishes_at: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorScan {
    pub generator: String,
    pub chains: Vec<ChainScan>,
    /// No obstruction chain at all: quasiprimitive for every `gamma`.
    pub always_quasiprimitive: bool,
    /// Values of `gamma` at which every chain vanishes.
    pub quasiprimitive_at: Vec<Rational>,
}

impl GeneratorScan {
    pub fn is_quasiprimitive_at(&self, gamma: &Rational) -> bool {
        self.always_quasiprimitive || self.quasiprimitive_at.contains(gamma)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaScan {
    pub generators: Vec<GeneratorScan>,
    /// Union of the vanishing points of all chains.
    pub irregular: Vec<Rational>,
}

impl GammaScan {
    pub fn generator(&self, label: &str) -> Option<&GeneratorScan> {
        self.generators.iter().find(|g| g.generator == label)
    }

    /// Generators quasiprimitive at `gamma` but not for every `gamma`.
    pub fn attributed_to(&self, gamma: &Rational) -> Vec<&str> {
        self.generators
            .iter()
            .filter(|g| !g.always_quasiprimitive && g.quasiprimitive_at.contains(gamma))
            .map(|g| g.generator.as_str())
            .collect()
    }
}

/// Coefficient polynomials in `gamma` of a scalar, one per monomial in the
/// other parameters.
fn gamma_family(c: &ParamScalar) -> Vec<Vec<Rational>> {
    let gi = Param::Gamma.index();
    let mut groups: BTreeMap<Exponents, Vec<Rational>> = BTreeMap::new();
    for (e, v) in c.terms() {
        let mut rest = *e;
        rest[gi] = 0;
        let d = e[gi].max(0) as usize;
        let poly = groups.entry(rest).or_default();
        if poly.len() <= d {
            poly.resize(d + 1, Rational::zero());
        }
        poly[d] = v.clone();
    }
    groups.into_values().collect()
}

/// Scan `gamma` for the values where some `Δ_F(x#)` loses obstruction chains.
/// `hopf` must keep `gamma` symbolic.
pub fn scan_gamma(map: &CoordinateMap, hopf: &TwistedHopf) -> Result<GammaScan, DualCoordError> {
    let mut generators = Vec::new();
    let mut irregular: Vec<Rational> = Vec::new();
    for i in 0..map.ctx.dim() {
        let dual = map.dual_coproduct(hopf, i)?;
        let mut chains = Vec::new();
        let mut common: Option<Vec<Rational>> = None;
        for (key, terms) in map.obstruction_chains(&dual, i) {
            let family: Vec<Vec<Rational>> = terms.iter().flat_map(|(_, c)| gamma_family(c)).collect();
            let Some(roots) = common_rational_roots(&family) else { continue };
            common = Some(match common {
                None => roots.clone(),
                Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
            });
            irregular.extend(roots.iter().cloned());
            chains.push(ChainScan { chain: map.render_chain(&key), vanishes_at: roots });
        }
        generators.push(GeneratorScan {
            generator: map.forms[i].0.clone(),
            always_quasiprimitive: chains.is_empty(),
            quasiprimitive_at: common.unwrap_or_default(),
            chains,
        });
    }
    irregular.sort();
    irregular.dedup();
    Ok(GammaScan { generators, irregular })
}

/// Dual weights indexed by generator, from a weight diagram.
pub fn dual_weights(diagram: &WeightDiagram, dim: usize) -> Vec<Option<Weight>> {
    let mut out = vec![None; dim];
    for (i, w) in diagram.carrier.iter().chain(&diagram.abelian) {
        out[*i] = Some(w.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightBookkeeping {
    pub subject: String,
    pub weight: Weight,
    /// Obstruction chains with their summed weights.
    pub chains: Vec<(String, Weight)>,
    pub mismatches: Vec<String>,
}

impl WeightBookkeeping {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Check that every term of `Δ_F(x_i#)` carries the dual weight of `x_i`.
pub fn weight_bookkeeping(
    map: &CoordinateMap,
    hopf: &TwistedHopf,
    i: usize,
    weights: &[Option<Weight>],
) -> Result<WeightBookkeeping, DualCoordError> {
    let label = map.forms[i].0.clone();
    let weight = weights[i].clone().ok_or_else(|| DualCoordError::UnknownGenerator(label.clone()))?;
    let width = weight.0.len();
    let key_weight = |key: &[Monomial]| -> Option<Weight> {
        let mut w = Weight::zero(width);
        for m in key {
            for (j, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    w = w.add(weights[j].as_ref()?);
                }
            }
        }
        Some(w)
    };
    let dual = map.dual_coproduct(hopf, i)?;
    let mut mismatches = Vec::new();
    for (k, _) in dual.sorted_terms() {
        match key_weight(k) {
            Some(w) if w == weight => {}
            Some(w) => mismatches.push(format!("{} has weight {w}, expected {weight}", dual.render_key(k))),
            None => mismatches.push(format!("{} involves a generator without a dual weight", dual.render_key(k))),
        }
    }
    let chains = map
        .obstruction_chains(&dual, i)
        .into_keys()
        .map(|key| {
            let w = key_weight(&key).unwrap_or_else(|| Weight::zero(width));
            (map.render_chain(&key), w)
        })
        .collect();
    Ok(WeightBookkeeping { subject: label, weight, chains, mismatches })
}

/// The antisymmetrized first-order bilinear part of `Δ_F(x_i#)` minus the
/// cobracket `δ(x_i)` of `r`. Zero when the `#` coordinates are compatible
/// with the dual Lie algebra.
pub fn cobracket_residual(
    map: &CoordinateMap,
    hopf: &TwistedHopf,
    r: &RMatrix,
    i: usize,
) -> Result<LieTensor, DualCoordError> {
    let spec = map.ctx.spec();
    let dual = map.dual_coproduct(hopf, i)?;
    let mut first = LieTensor::zero();
    for (k, c) in dual.terms() {
        if k.len() != 2 || k.iter().any(|m| m.degree() != 1) {
            continue;
        }
        let a = k[0].first_index().expect("degree one");
        let b = k[1].first_index().expect("degree one");
        let absorbed = map.shifts[a] + map.shifts[b];
        let part = c.part_with_exponent(map.param, 1 - absorbed);
        if part.is_zero() {
            continue;
        }
        let v = part.div_param_pow(map.param, 1 - absorbed).expect("exact power");
        first.add_term(vec![a, b], &v);
        first.add_term(vec![b, a], &-&v);
    }
    let delta = cobracket(spec, r, &LieElement::basis(spec, i))?;
    Ok(first.sub(&delta))
}

/// Coordinates recovered from the twisted coproduct alone.
pub struct DerivedCoordinates {
    pub map: CoordinateMap,
    /// The Jordanian carrier and its primitive image.
    pub primitive: (String, Expr),
    /// `x# = x·exp(−s·e#)` normalizations, as `(label, s)`.
    pub dressings: Vec<(String, ParamScalar)>,
    /// Nonzero corrections `(label, [(candidate, coefficient)])`.
    pub corrections: Vec<(String, Vec<(Expr, Rational)>)>,
    /// Sweeps over the generators until the map stopped changing.
    pub sweeps: usize,
}

/// Largest `k` with `p^k` inside the truncation.
fn max_power(ctx: &Uea, p: Param) -> i16 {
    let mut k = 0i16;
    loop {
        let mut e = [0i16; NUM_PARAMS];
        e[p.index()] = k + 1;
        if !ctx.grading().keeps(&e) || k >= 64 {
            return k;
        }
        k += 1;
    }
}

fn param_power(p: Param, k: i16) -> ParamScalar {
    ParamScalar::param_pow(p, k as u16)
}

/// `Δ_F(y) − y ⊗ 1 − 1 ⊗ y`.
fn non_primitive(hopf: &TwistedHopf, y: &UElement) -> Result<TensorElement, DualCoordError> {
    let ctx = hopf.ctx();
    let one = UElement::one(ctx);
    let prim = TensorElement::from_legs(&[y.clone(), one.clone()])?.add(&TensorElement::from_legs(&[one, y.clone()])?)?;
    Ok(hopf.coproduct(y)?.sub(&prim)?)
}

/// The primitive `y = p e_μ + Σ_{k≥2} c_k p^k e_μ^k`, solved order by order.
fn primitive_series(hopf: &TwistedHopf, mu: usize, p: Param) -> Result<(Expr, UElement), DualCoordError> {
    let ctx = hopf.ctx();
    let spec = ctx.spec();
    let label = spec.label(mu).to_string();
    let e = UElement::generator(ctx, mu);
    let mut y = e.scale(&ParamScalar::param(p));
    let mut coeffs = vec![Rational::one()];
    for k in 2..=max_power(ctx, p) {
        let at_k = |c: &ParamScalar| c.part_with_exponent(p, k).div_param_pow(p, k).expect("exact power");
        let d = non_primitive(hopf, &y)?.map_coefficients(at_k);
        if d.is_zero() {
            coeffs.push(Rational::zero());
            continue;
        }
        let ek = e.pow(k as u32).scale(&param_power(p, k));
        let de = non_primitive(hopf, &ek)?.map_coefficients(at_k);
        let no = |detail: String| DualCoordError::NoSolution { label: dual_label(&label), bound: k as u32, detail };
        let (key, ec) = de.sorted_terms().into_iter().next().ok_or_else(|| no("power is primitive".into()))?;
        let ratio = d.coefficient(key).scale(&ec.as_constant().ok_or_else(|| no(format!("coefficient {ec}")))?.recip());
        let c = ratio.as_constant().ok_or_else(|| no(format!("coefficient {ratio}")))?;
        let c = -c;
        if !d.add(&de.scale(&c.clone().into()))?.is_zero() {
            return Err(no(format!("order {k} has no single-power correction")));
        }
        y = y.add(&ek.scale(&c.clone().into()))?;
        coeffs.push(c);
    }
    let rest = non_primitive(hopf, &y)?;
    if !rest.is_zero() {
        return Err(DualCoordError::NoSolution {
            label: dual_label(&label),
            bound: 1,
            detail: format!("not primitive: {}", rest.render()),
        });
    }
    let pe = Expr::Param(p).mul(Expr::name(&label));
    let log = Expr::num(1).add(pe.clone()).ln();
    let ev = SymbolicEvaluator::new(ctx, hopf.defs());
    if ev.element(&log)?.sub(&y)?.is_zero() {
        return Ok((log, y));
    }
    let mut poly = pe;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        if !c.is_zero() {
            let term = Expr::Num(c.clone()).mul(Expr::Pow(Box::new(Expr::Param(p)), k as i32 + 1)).mul(Expr::Pow(
                Box::new(Expr::name(&label)),
                k as i32 + 1,
            ));
            poly = poly.add(term);
        }
    }
    Ok((poly, y))
}

/// Monomials of degree `lo..=hi` in the given generators, as index words.
fn words(gens: &[usize], lo: u32, hi: u32) -> Vec<Vec<usize>> {
    fn go(gens: &[usize], start: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for s in start..gens.len() {
            cur.push(gens[s]);
            go(gens, s, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        go(gens, 0, d, &mut Vec::new(), &mut out);
    }
    out
}

type Violation = BTreeMap<(Vec<Monomial>, Exponents), Rational>;

/// Terms of `Δ_F(x_i#)` that break the semidirect shape: for a carrier
/// generator, any term with an abelian generator; for an abelian one, any
/// term whose abelian degree is not exactly one.
fn violation(map: &CoordinateMap, hopf: &TwistedHopf, i: usize, abelian: &[usize]) -> Result<Violation, DualCoordError> {
    let dual = map.dual_coproduct(hopf, i)?;
    let target = u32::from(abelian.contains(&i));
    let mut out = Violation::new();
    for (k, c) in dual.terms() {
        let deg: u32 = k.iter().map(|m| abelian.iter().map(|&a| m.exponent(a) as u32).sum::<u32>()).sum();
        if deg != target {
            for (e, v) in c.terms() {
                out.insert((k.to_vec(), *e), v.clone());
            }
        }
    }
    Ok(out)
}

struct Candidate {
    expr: Expr,
    image: UElement,
}

/// Corrections `p^k m` for `x`: `2 ≤ deg m ≤ bound`, `m` free of `x` and of
/// the carrier `μ`'s own powers alone, with total weight equal to that of `x`
/// when `p` carries the weight `−wt(e_μ)`.
fn candidates(ctx: &Arc<Uea>, p: Param, x: usize, mu: usize, bound: u32) -> Vec<Candidate> {
    let spec = ctx.spec();
    let n = spec.dim();
    let wp = spec.weight(mu).neg();
    let gens: Vec<usize> = (0..n).filter(|&j| j != x).collect();
    let mut out = Vec::new();
    for k in 1..=max_power(ctx, p) {
        let mut pk = spec.weight(x).clone();
        for _ in 0..k {
            pk = pk.add(&wp.neg());
        }
        for w in words(&gens, 2, bound) {
            let mut wt = Weight::zero(pk.0.len());
            for &j in &w {
                wt = wt.add(spec.weight(j));
            }
            if wt != pk {
                continue;
            }
            let mut exps = vec![0u8; n];
            for &j in &w {
                exps[j] += 1;
            }
            let image = UElement::from_terms(ctx, [(Monomial::from_exponents(&exps), param_power(p, k))]);
            let power = |base: Expr, e: i32| if e == 1 { base } else { Expr::Pow(Box::new(base), e) };
            let mut expr = power(Expr::Param(p), k as i32);
            for (j, &e) in exps.iter().enumerate().filter(|(_, &e)| e > 0) {
                expr = expr.mul(power(Expr::name(spec.label(j)), e as i32));
            }
            out.push(Candidate { expr, image });
        }
    }
    out
}

/// `acc + v·term`, written without unit factors; `acc = 0` is dropped.
fn add_scaled(acc: Expr, v: &Rational, term: Expr) -> Expr {
    let neg = v.is_negative();
    let abs = v.abs();
    let scaled = if abs.is_one() { term } else { Expr::Num(abs).mul(term) };
    match (acc == Expr::num(0), neg) {
        (true, false) => scaled,
        (true, true) => scaled.neg(),
        (false, false) => acc.add(scaled),
        (false, true) => acc.sub(scaled),
    }
}

/// Solve for the corrections of `x` around the current map by repeated
/// linearization over the candidates.
fn solve_corrections(
    map: &CoordinateMap,
    hopf: &TwistedHopf,
    x: usize,
    base: &(Expr, UElement),
    cands: &[Candidate],
    start: &[Rational],
    abelian: &[usize],
    bound: u32,
) -> Result<(CoordinateMap, Vec<Rational>), DualCoordError> {
    const ROUNDS: usize = 4;
    let label = map.forms[x].0.clone();
    let build = |a: &[Rational]| -> Result<CoordinateMap, DualCoordError> {
        let mut expr = base.0.clone();
        let mut img = base.1.clone();
        for (c, v) in cands.iter().zip(a) {
            if !v.is_zero() {
                expr = add_scaled(expr, v, c.expr.clone());
                img = img.add(&c.image.scale(&v.clone().into()))?;
            }
        }
        map.replaced(x, expr, img)
    };
    let mut a = start.to_vec();
    let mut last = String::new();
    for _ in 0..ROUNDS {
        let m = build(&a)?;
        let v0 = violation(&m, hopf, x, abelian)?;
        if v0.is_empty() {
            return Ok((m, a));
        }
        last = format!("{} violating terms", v0.len());
        let mut columns = Vec::with_capacity(cands.len());
        for j in 0..cands.len() {
            let mut aj = a.clone();
            aj[j] = &aj[j] + &Rational::one();
            let col = match build(&aj).and_then(|mj| violation(&mj, hopf, x, abelian)) {
                Ok(v) => Some(v),
                Err(DualCoordError::NoClosure(_)) => None,
                Err(e) => return Err(e),
            };
            columns.push(col);
        }
        let mut keys: Vec<&(Vec<Monomial>, Exponents)> = v0.keys().collect();
        for col in columns.iter().flatten() {
            keys.extend(col.keys());
        }
        keys.sort();
        keys.dedup();
        let zero = Rational::zero();
        let rows: Vec<Vec<Rational>> = keys
            .iter()
            .map(|k| {
                let base = v0.get(*k).unwrap_or(&zero);
                columns
                    .iter()
                    .map(|col| match col {
                        Some(c) => c.get(*k).unwrap_or(&zero) - base,
                        None => Rational::zero(),
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<Rational> = keys.iter().map(|k| -v0.get(*k).unwrap_or(&zero)).collect();
        let Some(delta) = solve(&rows, &rhs) else {
            return Err(DualCoordError::NoSolution { label, bound, detail: format!("inconsistent system, {last}") });
        };
        for (aj, dj) in a.iter_mut().zip(delta) {
            *aj = &*aj + &dj;
        }
    }
    Err(DualCoordError::NoSolution { label, bound, detail: format!("no convergence, {last}") })
}

/// Recover coordinates of the dual group from `Δ_F`: the primitive logarithm
/// of the Jordanian carrier, left dressings, and polynomial corrections of
/// degree at most `bound` that put every `Δ_F(x#)` in semidirect form.
pub fn derive_dual_map(
    hopf: &TwistedHopf,
    r: &RMatrix,
    p: Param,
    bound: u32,
) -> Result<DerivedCoordinates, DualCoordError> {
    let ctx = hopf.ctx().clone();
    let spec = ctx.spec();
    let n = spec.dim();
    let mu = hopf
        .chain()
        .factors
        .iter()
        .find_map(|f| match &f.kind {
            FactorKind::Jordanian { carrier, .. } => Some(*carrier),
            _ => None,
        })
        .ok_or_else(|| DualCoordError::Refused("the chain has no Jordanian factor".into()))?;
    let abelian = carrier_decomposition(spec, r).complement;

    let (log, y) = primitive_series(hopf, mu, p)?;
    let mu_label = dual_label(spec.label(mu));
    let mut map = CoordinateMap::identity(&ctx, p)?.replaced(mu, log.clone(), y.clone())?;

    let mut dressings = Vec::new();
    let mut bases: Vec<Option<(Expr, UElement)>> = vec![None; n];
    let ev = SymbolicEvaluator::new(&ctx, hopf.defs());
    for x in (0..n).filter(|&x| x != mu) {
        let d = hopf.coproduct_generator(x)?;
        let key = [Monomial::generator(n, mu), Monomial::generator(n, x)];
        let s = d.coefficient(&key).part_with_exponent(p, 1).div_param_pow(p, 1).expect("exact power");
        let label = spec.label(x);
        let base = if s.is_zero() {
            (Expr::name(label), UElement::generator(&ctx, x))
        } else {
            let arg = match s.as_constant() {
                Some(c) => add_scaled(Expr::num(0), &-c, log.clone()),
                None => scalar_expr(&s).neg().mul(log.clone()),
            };
            let e = Expr::name(label).mul(arg.exp());
            let img = ev.element(&e)?;
            dressings.push((dual_label(label), s));
            (e, img)
        };
        map = map.replaced(x, base.0.clone(), base.1.clone())?;
        bases[x] = Some(base);
    }

    let cands: Vec<Vec<Candidate>> =
        (0..n).map(|x| if x == mu { Vec::new() } else { candidates(&ctx, p, x, mu, bound) }).collect();
    let mut coeffs: Vec<Vec<Rational>> = cands.iter().map(|c| vec![Rational::zero(); c.len()]).collect();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        let mut failure = None;
        for x in (0..n).filter(|&x| x != mu) {
            let base = bases[x].as_ref().expect("set above");
            match solve_corrections(&map, hopf, x, base, &cands[x], &coeffs[x], &abelian, bound) {
                Ok((m, a)) => {
                    if a != coeffs[x] {
                        changed = true;
                        coeffs[x] = a;
                    }
                    map = m;
                }
                Err(e @ DualCoordError::NoSolution { .. }) => failure = Some(e),
                Err(e) => return Err(e),
            }
        }
        if !changed {
            if let Some(e) = failure {
                return Err(e);
            }
            break;
        }
        if sweeps > n {
            return Err(failure.unwrap_or(DualCoordError::NoTermination(sweeps)));
        }
    }

    let corrections = (0..n)
        .filter(|&x| x != mu)
        .filter_map(|x| {
            let terms: Vec<(Expr, Rational)> = cands[x]
                .iter()
                .zip(&coeffs[x])
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c.expr.clone(), v.clone()))
                .collect();
            (!terms.is_empty()).then(|| (dual_label(spec.label(x)), terms))
        })
        .collect();
    Ok(DerivedCoordinates { map, primitive: (mu_label, log), dressings, corrections, sweeps })
}

/// A parabolic factor `exp(c·h_perp# ⊗ ln((1 + η x#)·exp(2 e13#)))` written
/// in `g` through a coordinate map, prepended to the chain of `base`.
#[derive(Debug, Clone)]
pub struct ParabolicTwist {
    pub sign: i8,
    pub gamma: Rational,
    pub carrier: String,
    pub coefficient: Rational,
    pub exponent: Expr,
    pub setup: Setup,
}

/// Build the parabolic extension for `sign = ±1` (carrier `e21#` or `e32#`).
/// Refused unless the carrier is quasiprimitive at `gamma` and has weight 1
/// under `c·h_perp`. `hopf` must keep `gamma` symbolic.
pub fn build_parabolic(
    map: &CoordinateMap,
    hopf: &TwistedHopf,
    base: &Setup,
    sign: i8,
    gamma: &Rational,
) -> Result<ParabolicTwist, DualCoordError> {
    let spec = map.ctx.spec();
    let (x_label, coefficient) = if sign > 0 { ("e21", Rational::new(-2, 3)) } else { ("e32", Rational::new(2, 3)) };
    let x = spec.index_of(x_label)?;
    let hp = spec.index_of("h_perp")?;
    let carrier = dual_label(x_label);

    let w = spec.weight_of(x, &CartanElement::new(vec![(hp, coefficient.clone().into())])).eval_at(Param::Gamma, gamma);
    if !w.is_one() {
        return Err(DualCoordError::Refused(format!("{x_label} has weight {w} under {coefficient}*h_perp, expected 1")));
    }
    let dual = map.dual_coproduct(hopf, x)?;
    for (key, terms) in map.obstruction_chains(&dual, x) {
        if terms.iter().any(|(_, c)| !c.eval_at(Param::Gamma, gamma).is_zero()) {
            return Err(DualCoordError::Refused(format!(
                "{carrier} is not quasiprimitive at gamma = {gamma}: the chain {} survives",
                map.render_chain(&key)
            )));
        }
    }

    let at_gamma = |e: &Expr| e.substitute_param(Param::Gamma, &Expr::Num(gamma.clone()));
    let form = |l: &str| -> Result<Expr, DualCoordError> { Ok(at_gamma(&map.forms[spec.index_of(l)?].1)) };
    let inner = Expr::num(1)
        .add(Expr::Param(Param::Eta).mul(form(x_label)?))
        .mul(Expr::num(2).mul(form("e13")?).exp())
        .ln();
    let exponent = Expr::Tensor(vec![Expr::Num(coefficient.clone()).mul(form("h_perp")?), inner]);

    let mut setup = base.clone().with_gamma(Some(gamma.clone()));
    setup.name = format!("{}-parabolic-{}", base.name, if sign > 0 { "plus" } else { "minus" });
    setup.factors.insert(0, FactorSpec::Generic { name: "parabolic".into(), exponent: exponent.to_string() });
    Ok(ParabolicTwist { sign, gamma: gamma.clone(), carrier, coefficient, exponent, setup })
}

impl ParabolicTwist {
    /// The exponent at `ζ = 0` minus `c·h_perp ⊗ ln(1 + η x)`.
    pub fn degeneration_residual(&self, ctx: &Arc<Uea>, defs: &Definitions, p: Param) -> Result<TensorElement, DualCoordError> {
        let ev = SymbolicEvaluator::new(ctx, defs);
        let at_zero = ev.tensor(&self.exponent.substitute_param(p, &Expr::num(0)), 2)?;
        let x = if self.sign > 0 { "e21" } else { "e32" };
        let expected = Expr::Tensor(vec![
            Expr::Num(self.coefficient.clone()).mul(Expr::name("h_perp")),
            Expr::num(1).add(Expr::Param(Param::Eta).mul(Expr::name(x))).ln(),
        ]);
        Ok(at_zero.sub(&ev.tensor(&expected, 2)?)?)
    }

    /// The exponent at `η = 0`; nonzero means the factor stays nontrivial
    /// without the parabolic parameter.
    pub fn eta_free_part(&self, ctx: &Arc<Uea>, defs: &Definitions) -> Result<TensorElement, DualCoordError> {
        let ev = SymbolicEvaluator::new(ctx, defs);
        Ok(ev.tensor(&self.exponent.substitute_param(Param::Eta, &Expr::num(0)), 2)?)
    }
}

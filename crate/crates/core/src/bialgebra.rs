//! Classical r-matrices, the cobracket they induce and the dual Lie algebra.

use std::collections::BTreeMap;

use crate::lie::{CartanElement, LieAlgebraSpec, LieElement, LieError, Weight};
use crate::scalar::ParamScalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BialgebraError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
}

/// A sparse element of `g^{⊗k}` keyed by basis-index tuples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LieTensor {
    terms: BTreeMap<Vec<usize>, ParamScalar>,
}

impl LieTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: Vec<usize>, c: &ParamScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, key: &[usize]) -> ParamScalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), &-c);
        }
        out
    }

    /// `Σ c · e_{k0} ⊗ e_{k1} ⊗ …` with basis labels.
    pub fn render(&self, spec: &LieAlgebraSpec) -> String {
        crate::render::join_terms(self.terms.iter().map(|(k, c)| {
            let body: Vec<&str> = k.iter().map(|i| spec.label(*i)).collect();
            (c.clone(), body.join(" ⊗ "))
        }))
    }

    /// Apply `ad_x` to every leg and sum: the adjoint action on `g^{⊗k}`.
    pub fn ad(&self, spec: &LieAlgebraSpec, x: &LieElement) -> Result<Self, LieError> {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            for leg in 0..k.len() {
                let b = spec.bracket(x, &LieElement::basis(spec, k[leg]))?;
                for (j, d) in b.terms() {
                    let mut key = k.clone();
                    key[leg] = j;
                    out.add_term(key, &(c * d));
                }
            }
        }
        Ok(out)
    }
}

/// A skew element `r = Σ r^{ij} e_i ⊗ e_j` with `r^{ij} = −r^{ji}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    components: BTreeMap<(usize, usize), ParamScalar>,
}

impl RMatrix {
    pub fn zero() -> Self {
        Self { components: BTreeMap::new() }
    }

    /// `Σ c · (x ∧ y)` with `x ∧ y = x ⊗ y − y ⊗ x`; labels may name derived
    /// elements, which are expanded bilinearly.
    pub fn from_wedges(spec: &LieAlgebraSpec, wedges: &[(String, String, ParamScalar)]) -> Result<Self, LieError> {
        let mut r = Self::zero();
        for (a, b, c) in wedges {
            let x = spec.element(a)?;
            let y = spec.element(b)?;
            for (i, p) in x.terms() {
                for (j, q) in y.terms() {
                    let v = &(c * p) * q;
                    r.add(i, j, &v);
                    r.add(j, i, &-&v);
                }
            }
        }
        Ok(r)
    }

    fn add(&mut self, i: usize, j: usize, c: &ParamScalar) {
        let e = self.components.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.components.remove(&(i, j));
        }
    }

    pub fn component(&self, i: usize, j: usize) -> ParamScalar {
        self.components.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = ((usize, usize), &ParamScalar)> {
        self.components.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Basis indices appearing in `r`.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.components.keys().flat_map(|(i, j)| [*i, *j]).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn as_tensor(&self) -> LieTensor {
        let mut t = LieTensor::zero();
        for ((i, j), c) in &self.components {
            t.add_term(vec![*i, *j], c);
        }
        t
    }

    /// Contraction of the first leg: `e_i* ↦ Σ_j r^{ij} e_j`.
    pub fn contract(&self, spec: &LieAlgebraSpec, i: usize) -> LieElement {
        LieElement::from_terms(
            spec,
            self.components.iter().filter(|((a, _), _)| *a == i).map(|((_, b), c)| (*b, c.clone())),
        )
    }
}

fn bracket_idx(spec: &LieAlgebraSpec, i: usize, j: usize) -> Vec<(usize, ParamScalar)> {
    spec.structure(i, j).to_vec()
}

/// `[r12, r13] + [r12, r23] + [r13, r23]`, computed from structure constants.
pub fn cybe_residual(spec: &LieAlgebraSpec, r: &RMatrix) -> LieTensor {
    let mut out = LieTensor::zero();
    for ((a, b), x) in r.components() {
        for ((c, d), y) in r.components() {
            let xy = x * y;
            for (k, s) in bracket_idx(spec, a, c) {
                out.add_term(vec![k, b, d], &(&xy * &s));
            }
            for (k, s) in bracket_idx(spec, b, c) {
                out.add_term(vec![a, k, d], &(&xy * &s));
            }
            for (k, s) in bracket_idx(spec, b, d) {
                out.add_term(vec![a, c, k], &(&xy * &s));
            }
        }
    }
    out
}

/// `δ(x) = [r, x ⊗ 1 + 1 ⊗ x]`.
pub fn cobracket(spec: &LieAlgebraSpec, r: &RMatrix, x: &LieElement) -> Result<LieTensor, LieError> {
    let mut out = LieTensor::zero();
    for ((a, b), c) in r.components() {
        let ax = spec.bracket(&LieElement::basis(spec, a), x)?;
        for (k, s) in ax.terms() {
            out.add_term(vec![k, b], &(c * s));
        }
        let bx = spec.bracket(&LieElement::basis(spec, b), x)?;
        for (k, s) in bx.terms() {
            out.add_term(vec![a, k], &(c * s));
        }
    }
    Ok(out)
}

/// Residual of the 1-cocycle condition `δ([x,y]) = ad_x δ(y) − ad_y δ(x)`.
pub fn co_leibniz_residual(
    spec: &LieAlgebraSpec,
    r: &RMatrix,
    x: &LieElement,
    y: &LieElement,
) -> Result<LieTensor, LieError> {
    let lhs = cobracket(spec, r, &spec.bracket(x, y)?)?;
    let rhs = cobracket(spec, r, y)?.ad(spec, x)?.sub(&cobracket(spec, r, x)?.ad(spec, y)?);
    Ok(lhs.sub(&rhs))
}

/// The Lie algebra `g#` on the dual basis `{e_i*}`.
#[derive(Debug, Clone)]
pub struct DualAlgebra {
    spec: LieAlgebraSpec,
}

impl DualAlgebra {
    /// Structure constants of the dual algebra, `[e_i*, e_j*] = Σ_k d_k^{ij} e_k*`,
    /// where `δ(e_k) = Σ_{i<j} d_k^{ij} (e_i ⊗ e_j − e_j ⊗ e_i)`.
    pub fn from_r(base: &LieAlgebraSpec, r: &RMatrix) -> Result<Self, LieError> {
        let n = base.dim();
        let mut constants = vec![vec![Vec::new(); n]; n];
        for k in 0..n {
            let d = cobracket(base, r, &LieElement::basis(base, k))?;
            for (key, c) in d.terms() {
                let (i, j) = (key[0], key[1]);
                // Antisymmetric by construction; the (j, i) entry carries −c.
                constants[i][j].push((k, c.clone()));
            }
        }
        let labels = base.labels().iter().map(|l| format!("{l}*")).collect();
        let weights = (0..n).map(|i| base.weight(i).neg()).collect();
        let spec = LieAlgebraSpec::from_parts(format!("{}-dual", base.name()), labels, constants, vec![], weights)?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    /// `[e_i*, e_j*]` by base labels (without the star).
    pub fn bracket_labels(&self, a: &str, b: &str) -> Result<LieElement, LieError> {
        let i = self.spec.index_of(&format!("{a}*"))?;
        let j = self.spec.index_of(&format!("{b}*"))?;
        Ok(self.spec.bracket_basis(i, j))
    }

    pub fn render(&self, x: &LieElement) -> String {
        self.spec.render(x)
    }

    pub fn jacobi_residual(&self) -> crate::lie::JacobiReport {
        self.spec.jacobi_check()
    }
}

/// One bracket of `g#` compared with a reference relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRelationCheck {
    pub relation: String,
    pub computed: String,
    pub expected: String,
    pub matches: bool,
}

pub fn compare_dual_relations(
    dual: &DualAlgebra,
    relations: &[crate::tables::DualRelation],
) -> Result<Vec<DualRelationCheck>, BialgebraError> {
    let ds = dual.spec();
    let mut out = Vec::new();
    for rel in relations {
        let got = dual.bracket_labels(rel.left, rel.right)?;
        let mut want = LieElement::zero(ds);
        for (c, label) in rel.rhs {
            let k = ds.index_of(&format!("{label}*"))?;
            want = want.add(&LieElement::basis(ds, k).scale(&crate::tables::coefficient(c)?))?;
        }
        out.push(DualRelationCheck {
            relation: format!("[{}*, {}*]", rel.left, rel.right),
            computed: ds.render(&got),
            expected: ds.render(&want),
            matches: got == want,
        });
    }
    Ok(out)
}

/// Nonzero brackets `[e_i*, e_j*]` (i < j) that no listed relation covers.
pub fn unlisted_brackets(
    dual: &DualAlgebra,
    relations: &[crate::tables::DualRelation],
) -> Result<Vec<String>, LieError> {
    let ds = dual.spec();
    let mut listed = Vec::new();
    for rel in relations {
        let i = ds.index_of(&format!("{}*", rel.left))?;
        let j = ds.index_of(&format!("{}*", rel.right))?;
        listed.push((i.min(j), i.max(j)));
    }
    let mut out = Vec::new();
    for i in 0..ds.dim() {
        for j in i + 1..ds.dim() {
            let b = ds.bracket_basis(i, j);
            if !b.is_zero() && !listed.contains(&(i, j)) {
                out.push(format!("[{}, {}] = {}", ds.label(i), ds.label(j), ds.render(&b)));
            }
        }
    }
    Ok(out)
}

/// The carrier of `r`: the bracket closure of its support.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierDecomposition {
    pub carrier: Vec<usize>,
    pub complement: Vec<usize>,
    /// Whether the support of `r` was already closed under the bracket.
    pub support_closed: bool,
}

pub fn carrier_decomposition(spec: &LieAlgebraSpec, r: &RMatrix) -> CarrierDecomposition {
    let support = r.support();
    let mut carrier = support.clone();
    loop {
        let mut grew = false;
        for a in carrier.clone() {
            for b in carrier.clone() {
                for (k, _) in spec.structure(a, b) {
                    if !carrier.contains(k) {
                        carrier.push(*k);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    carrier.sort();
    let support_closed = carrier == support;
    let complement = (0..spec.dim()).filter(|i| !carrier.contains(i)).collect();
    CarrierDecomposition { carrier, complement, support_closed }
}

/// Weights of the dual generators: carrier duals and the abelian part.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDiagram {
    /// `(base index, weight)` for each carrier dual.
    pub carrier: Vec<(usize, Weight)>,
    pub abelian: Vec<(usize, Weight)>,
    /// Failures of the action check, one line each.
    pub action_failures: Vec<String>,
}

impl WeightDiagram {
    pub fn carrier_weights(&self) -> Vec<Weight> {
        sorted(self.carrier.iter().map(|(_, w)| w.clone()).collect())
    }

    pub fn abelian_weights(&self) -> Vec<Weight> {
        sorted(self.abelian.iter().map(|(_, w)| w.clone()).collect())
    }
}

fn sorted(mut v: Vec<Weight>) -> Vec<Weight> {
    v.sort();
    v
}

/// `w(H)` read off the diagonal of `H` in the defining representation.
pub fn evaluate_weight(spec: &LieAlgebraSpec, w: &Weight, h: &CartanElement) -> Option<ParamScalar> {
    let mats = spec.defining_matrices()?;
    let mut out = ParamScalar::zero();
    for (c, coeff) in &h.coefficients {
        for (a, wa) in w.0.iter().enumerate() {
            if !wa.is_zero() {
                out += &(&(coeff * &mats[*c][a][a]) * &ParamScalar::constant(wa.clone()));
            }
        }
    }
    Some(out)
}

/// Assign dual weights (for each `r^{φψ} ≠ 0`, `(e_φ)*` gets `−ψ`; abelian
/// duals keep the weight of their generator) and verify them against the
/// action of every dual element that `r` maps to a Cartan element.
pub fn weight_diagram(base: &LieAlgebraSpec, r: &RMatrix, dual: &DualAlgebra) -> Result<WeightDiagram, LieError> {
    let dec = carrier_decomposition(base, r);
    let mut assigned: BTreeMap<usize, Weight> = BTreeMap::new();
    let mut failures = Vec::new();
    for ((phi, psi), _) in r.components() {
        let w = base.weight(psi).neg();
        if let Some(prev) = assigned.insert(phi, w.clone()) {
            if prev != w {
                failures.push(format!("{}* receives two weights {prev} and {w}", base.label(phi)));
            }
        }
    }
    for &i in &dec.complement {
        assigned.insert(i, base.weight(i).clone());
    }
    // Carrier elements outside the support of r have no r-assigned weight.
    for &i in &dec.carrier {
        assigned.entry(i).or_insert_with(|| base.weight(i).neg());
    }

    let ds = dual.spec();
    for x in 0..base.dim() {
        let image = r.contract(base, x);
        if image.is_zero() {
            continue;
        }
        let Ok(h) = CartanElement::from_element(base, &image) else { continue };
        for k in 0..base.dim() {
            let Some(expected) = evaluate_weight(base, &assigned[&k], &h) else {
                failures.push("no defining representation to evaluate weights".into());
                return Ok(WeightDiagram { carrier: vec![], abelian: vec![], action_failures: failures });
            };
            let got = ds.bracket_basis(x, k);
            let want = LieElement::basis(ds, k).scale(&expected);
            if got != want {
                failures.push(format!(
                    "[{}, {}] = {} but weight {} predicts {}",
                    ds.label(x),
                    ds.label(k),
                    ds.render(&got),
                    assigned[&k],
                    ds.render(&want)
                ));
            }
        }
    }
    Ok(WeightDiagram {
        carrier: dec.carrier.iter().map(|i| (*i, assigned[i].clone())).collect(),
        abelian: dec.complement.iter().map(|i| (*i, assigned[i].clone())).collect(),
        action_failures: failures,
    })
}

/// Structural claims about `g#` for a twist carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub carrier: Vec<String>,
    pub abelian: Vec<String>,
    pub carrier_subalgebra: bool,
    pub abelian_commutative: bool,
    pub abelian_ideal: bool,
    /// Carrier dual weights are the negated carrier weights (as multisets).
    pub carrier_weights_negated: bool,
    /// Abelian dual weights are the weights of `g` outside the carrier.
    pub abelian_weights_complement: bool,
    pub diagram: WeightDiagram,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.carrier_subalgebra
            && self.abelian_commutative
            && self.abelian_ideal
            && self.carrier_weights_negated
            && self.abelian_weights_complement
            && self.diagram.action_failures.is_empty()
    }
}

pub fn structure_check(base: &LieAlgebraSpec, r: &RMatrix) -> Result<StructureReport, LieError> {
    let dual = DualAlgebra::from_r(base, r)?;
    let ds = dual.spec();
    let dec = carrier_decomposition(base, r);
    let within = |x: &LieElement, set: &[usize]| x.terms().all(|(k, _)| set.contains(&k));
    let mut carrier_subalgebra = true;
    for &a in &dec.carrier {
        for &b in &dec.carrier {
            carrier_subalgebra &= within(&ds.bracket_basis(a, b), &dec.carrier);
        }
    }
    let mut abelian_commutative = true;
    let mut abelian_ideal = true;
    for &a in &dec.complement {
        for &b in &dec.complement {
            abelian_commutative &= ds.bracket_basis(a, b).is_zero();
        }
        for b in 0..base.dim() {
            abelian_ideal &= within(&ds.bracket_basis(b, a), &dec.complement);
        }
    }
    let diagram = weight_diagram(base, r, &dual)?;
    let negated = sorted(dec.carrier.iter().map(|i| base.weight(*i).neg()).collect());
    let complement = sorted(dec.complement.iter().map(|i| base.weight(*i).clone()).collect());
    Ok(StructureReport {
        carrier: dec.carrier.iter().map(|i| base.label(*i).to_string()).collect(),
        abelian: dec.complement.iter().map(|i| base.label(*i).to_string()).collect(),
        carrier_subalgebra,
        abelian_commutative,
        abelian_ideal,
        carrier_weights_negated: diagram.carrier_weights() == negated,
        abelian_weights_complement: diagram.abelian_weights() == complement,
        diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_ej(spec: &LieAlgebraSpec) -> RMatrix {
        RMatrix::from_wedges(
            spec,
            &[
                ("h".into(), "e13".into(), ParamScalar::one()),
                ("e12".into(), "e23".into(), ParamScalar::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn jordanian_cobracket() {
        let g = LieAlgebraSpec::sl3_adapted();
        let r = RMatrix::from_wedges(&g, &[("h".into(), "e13".into(), ParamScalar::one())]).unwrap();
        let e13 = g.element("e13").unwrap();
        assert!(cobracket(&g, &r, &e13).unwrap().is_zero());
        let d = cobracket(&g, &r, &g.element("h").unwrap()).unwrap();
        assert_eq!(d.render(&g), "-h ⊗ e13 + e13 ⊗ h");
    }

    #[test]
    fn extension_alone_fails_cybe() {
        let g = LieAlgebraSpec::sl3_adapted();
        let r = RMatrix::from_wedges(&g, &[("e12".into(), "e23".into(), ParamScalar::one())]).unwrap();
        assert!(!cybe_residual(&g, &r).is_zero());
        assert!(cybe_residual(&g, &r_ej(&g)).is_zero());
    }

    #[test]
    fn zero_r_is_trivial() {
        let g = LieAlgebraSpec::sl3_adapted();
        let r = RMatrix::zero();
        assert!(cybe_residual(&g, &r).is_zero());
        let rep = structure_check(&g, &r).unwrap();
        assert!(rep.carrier.is_empty());
        assert!(rep.passes());
    }
}

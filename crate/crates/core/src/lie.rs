//! Lie algebras given by structure constants over `ParamScalar`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use rustc_hash::FxHasher;
use serde::Serialize;

use crate::linalg;
use crate::scalar::{Param, ParamScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid dimension: sl({0}) needs n >= 2")]
    InvalidDimension(usize),
    #[error("elements belong to different algebras")]
    IncompatibleSpec,
    #[error("unknown generator `{0}`")]
    UnknownLabel(String),
    #[error("invalid algebra description: {0}")]
    Invalid(String),
}

/// A weight in the standard orthonormal basis `{e_a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![Rational::zero(); n])
    }

    /// `e_a − e_b` with 1-based indices.
    pub fn root(n: usize, a: usize, b: usize) -> Self {
        let mut w = Self::zero(n);
        w.0[a - 1] = &w.0[a - 1] + &Rational::one();
        w.0[b - 1] = &w.0[b - 1] - &Rational::one();
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    /// Integer root-like weights print as `e1-e3`, anything else as a tuple.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        let mut simple = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match c.to_string().as_str() {
                "1" => parts.push(format!("+e{}", i + 1)),
                "-1" => parts.push(format!("-e{}", i + 1)),
                _ => simple = false,
            }
        }
        if simple {
            let s = parts.concat();
            f.write_str(s.strip_prefix('+').unwrap_or(&s))
        } else {
            let coords: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", coords.join(","))
        }
    }
}

/// An element of `g` as a sparse combination of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    algebra: u64,
    terms: BTreeMap<usize, ParamScalar>,
}

impl LieElement {
    pub fn zero(spec: &LieAlgebraSpec) -> Self {
        Self { algebra: spec.id, terms: BTreeMap::new() }
    }

    pub fn basis(spec: &LieAlgebraSpec, i: usize) -> Self {
        Self::from_terms(spec, [(i, ParamScalar::one())])
    }

    pub fn from_terms(spec: &LieAlgebraSpec, terms: impl IntoIterator<Item = (usize, ParamScalar)>) -> Self {
        let mut out = Self::zero(spec);
        for (i, c) in terms {
            assert!(i < spec.dim(), "basis index out of range");
            out.add_term(i, &c);
        }
        out
    }

    fn add_term(&mut self, i: usize, c: &ParamScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(i).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &ParamScalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn coefficient(&self, i: usize) -> ParamScalar {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement, LieError> {
        if self.algebra != other.algebra {
            return Err(LieError::IncompatibleSpec);
        }
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement, LieError> {
        self.add(&other.scale(&ParamScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ParamScalar) -> LieElement {
        let mut out = LieElement { algebra: self.algebra, terms: BTreeMap::new() };
        for (i, x) in &self.terms {
            out.add_term(*i, &(x * c));
        }
        out
    }

    fn rebrand(mut self, id: u64) -> Self {
        self.algebra = id;
        self
    }
}

/// A Cartan element such as `h(γ) = h13 + γ·h_perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanElement {
    pub coefficients: Vec<(usize, ParamScalar)>,
}

impl CartanElement {
    pub fn new(coefficients: Vec<(usize, ParamScalar)>) -> Self {
        Self { coefficients }
    }

    pub fn to_element(&self, spec: &LieAlgebraSpec) -> LieElement {
        LieElement::from_terms(spec, self.coefficients.iter().cloned())
    }

    /// Read a Cartan element off a `LieElement`, failing on non-Cartan content.
    pub fn from_element(spec: &LieAlgebraSpec, x: &LieElement) -> Result<Self, LieError> {
        let mut coefficients = Vec::new();
        for (i, c) in x.terms() {
            if !spec.is_cartan(i) {
                return Err(LieError::Invalid(format!("`{}` is not a Cartan generator", spec.label(i))));
            }
            coefficients.push((i, c.clone()));
        }
        Ok(Self { coefficients })
    }
}

/// Nonzero Jacobi sums, keyed by basis triple.
#[derive(Clone, Debug, Default)]
pub struct JacobiReport {
    pub residuals: Vec<((usize, usize, usize), LieElement)>,
}

impl JacobiReport {
    pub fn is_zero(&self) -> bool {
        self.residuals.is_empty()
    }
}

type Matrix = Vec<Vec<ParamScalar>>;

/// Basis, structure constants, Cartan data and weights of a Lie algebra.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    name: String,
    labels: Vec<String>,
    constants: Vec<Vec<Vec<(usize, ParamScalar)>>>,
    cartan: Vec<usize>,
    weights: Vec<Weight>,
    derived: Vec<(String, BTreeMap<usize, ParamScalar>)>,
    matrices: Option<Vec<Matrix>>,
    id: u64,
}

fn rational_matrix_zero(n: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); n]; n]
}

fn commutator(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = rational_matrix_zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Rational::zero();
            for k in 0..n {
                s = &s + &(&(&a[i][k] * &b[k][j]) - &(&b[i][k] * &a[k][j]));
            }
            out[i][j] = s;
        }
    }
    out
}

fn sl_label(n: usize, a: usize, b: usize) -> String {
    if n <= 9 {
        format!("e{a}{b}")
    } else {
        format!("e{a}_{b}")
    }
}

fn cartan_label(n: usize, a: usize, b: usize) -> String {
    if n <= 9 {
        format!("h{a}{b}")
    } else {
        format!("h{a}_{b}")
    }
}

impl LieAlgebraSpec {
    /// Build a spec from raw data; checks shapes and antisymmetry.
    pub fn from_parts(
        name: impl Into<String>,
        labels: Vec<String>,
        constants: Vec<Vec<Vec<(usize, ParamScalar)>>>,
        cartan: Vec<usize>,
        weights: Vec<Weight>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        if constants.len() != n || constants.iter().any(|r| r.len() != n) || weights.len() != n {
            return Err(LieError::Invalid("shape mismatch".into()));
        }
        let mut spec = Self {
            name: name.into(),
            labels,
            constants,
            cartan,
            weights,
            derived: Vec::new(),
            matrices: None,
            id: 0,
        };
        for i in 0..n {
            for j in 0..n {
                let a = spec.bracket_map(i, j);
                let b = spec.bracket_map(j, i);
                for k in a.keys().chain(b.keys()) {
                    let x = a.get(k).cloned().unwrap_or_default();
                    let y = b.get(k).cloned().unwrap_or_default();
                    if !(&x + &y).is_zero() {
                        return Err(LieError::Invalid(format!(
                            "structure constants not antisymmetric at ({}, {})",
                            spec.labels[i], spec.labels[j]
                        )));
                    }
                }
            }
        }
        spec.finish();
        Ok(spec)
    }

    fn finish(&mut self) {
        for row in &mut self.constants {
            for cell in row.iter_mut() {
                cell.retain(|(_, c)| !c.is_zero());
                cell.sort_by_key(|(k, _)| *k);
            }
        }
        let mut h = FxHasher::default();
        self.name.hash(&mut h);
        self.labels.hash(&mut h);
        self.constants.hash(&mut h);
        self.id = h.finish();
    }

    fn bracket_map(&self, i: usize, j: usize) -> BTreeMap<usize, ParamScalar> {
        let mut m = BTreeMap::new();
        for (k, c) in &self.constants[i][j] {
            let e: &mut ParamScalar = m.entry(*k).or_default();
            *e += c;
        }
        m
    }

    /// `sl(n)` from matrix units, with the fixed PBW order: negative roots,
    /// Cartan, positive roots.
    pub fn build_sl(n: usize) -> Result<Self, LieError> {
        if n < 2 {
            return Err(LieError::InvalidDimension(n));
        }
        let unit = |a: usize, b: usize| {
            let mut m = rational_matrix_zero(n);
            m[a - 1][b - 1] = Rational::one();
            m
        };
        let half = Rational::new(1, 2);
        let mut labels = Vec::new();
        let mut mats: Vec<Vec<Vec<Rational>>> = Vec::new();
        let mut weights = Vec::new();
        let mut cartan = Vec::new();
        for a in 1..=n {
            for b in 1..a {
                labels.push(sl_label(n, a, b));
                mats.push(unit(a, b));
                weights.push(Weight::root(n, a, b));
            }
        }
        let cartan_diag: Vec<(String, Vec<Rational>)> = if n == 3 {
            vec![
                ("h13".into(), vec![half.clone(), Rational::zero(), -&half]),
                ("h_perp".into(), vec![half.clone(), Rational::from_int(-1), half.clone()]),
            ]
        } else {
            (1..n)
                .map(|a| {
                    let mut d = vec![Rational::zero(); n];
                    d[a - 1] = half.clone();
                    d[a] = -&half;
                    (cartan_label(n, a, a + 1), d)
                })
                .collect()
        };
        for (label, d) in &cartan_diag {
            cartan.push(labels.len());
            labels.push(label.clone());
            let mut m = rational_matrix_zero(n);
            for (i, x) in d.iter().enumerate() {
                m[i][i] = x.clone();
            }
            mats.push(m);
            weights.push(Weight::zero(n));
        }
        for a in 1..=n {
            for b in a + 1..=n {
                labels.push(sl_label(n, a, b));
                mats.push(unit(a, b));
                weights.push(Weight::root(n, a, b));
            }
        }
        let dim = labels.len();
        let index_of = |a: usize, b: usize| labels.iter().position(|l| *l == sl_label(n, a, b)).unwrap();

        // Diagonal part of a traceless matrix in the Cartan basis.
        let cartan_cols: Vec<Vec<Rational>> =
            (0..n).map(|r| cartan_diag.iter().map(|(_, d)| d[r].clone()).collect()).collect();
        let decompose = |m: &Vec<Vec<Rational>>| -> Vec<(usize, ParamScalar)> {
            let mut out = Vec::new();
            for a in 1..=n {
                for b in 1..=n {
                    if a != b && !m[a - 1][b - 1].is_zero() {
                        out.push((index_of(a, b), ParamScalar::constant(m[a - 1][b - 1].clone())));
                    }
                }
            }
            let diag: Vec<Rational> = (0..n).map(|i| m[i][i].clone()).collect();
            if diag.iter().any(|x| !x.is_zero()) {
                let x = linalg::solve(&cartan_cols, &diag).expect("traceless diagonal lies in the Cartan span");
                for (c, v) in x.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.push((cartan[c], ParamScalar::constant(v)));
                    }
                }
            }
            out
        };
        let mut constants = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    constants[i][j] = decompose(&commutator(&mats[i], &mats[j]));
                }
            }
        }
        let mut spec = Self::from_parts(format!("sl{n}"), labels.clone(), constants, cartan.clone(), weights)?;
        spec.matrices = Some(
            mats.iter()
                .map(|m| m.iter().map(|r| r.iter().map(|x| ParamScalar::constant(x.clone())).collect()).collect())
                .collect(),
        );
        for a in 1..=n {
            for b in a + 1..=n {
                let label = cartan_label(n, a, b);
                if spec.index_of(&label).is_ok() {
                    continue;
                }
                let mut m = rational_matrix_zero(n);
                m[a - 1][a - 1] = half.clone();
                m[b - 1][b - 1] = -&half;
                let terms = decompose(&m).into_iter().collect();
                spec.derived.push((label, terms));
            }
        }
        if n == 3 {
            let h13 = spec.index_of("h13")?;
            let hp = spec.index_of("h_perp")?;
            let terms = [(h13, ParamScalar::one()), (hp, ParamScalar::param(Param::Gamma))].into_iter().collect();
            spec.derived.push(("h".into(), terms));
        }
        Ok(spec)
    }

    /// `sl(3)` with Cartan basis `{h = h13 + γ·h_perp, h_perp}`, so that the
    /// dual basis contains the functional dual to `h(γ)`.
    pub fn sl3_adapted() -> Self {
        let base = Self::build_sl(3).expect("sl3");
        let h13 = base.index_of("h13").unwrap();
        let hp = base.index_of("h_perp").unwrap();
        let gamma = ParamScalar::param(Param::Gamma);
        let mut labels = Vec::new();
        let mut fwd = Vec::new();
        let mut inv = Vec::new();
        for i in 0..base.dim() {
            if i == h13 {
                labels.push("h".to_string());
                fwd.push(LieElement::from_terms(&base, [(h13, ParamScalar::one()), (hp, gamma.clone())]));
                inv.push(vec![(i, ParamScalar::one()), (hp, -&gamma)]);
            } else {
                labels.push(base.labels[i].clone());
                fwd.push(LieElement::basis(&base, i));
                inv.push(vec![(i, ParamScalar::one())]);
            }
        }
        let mut spec = base.change_basis("sl3-adapted", labels, fwd, inv).expect("adapted basis");
        spec.derived.retain(|(l, _)| l != "h");
        spec
    }

    /// The Borel subalgebra `b(2) = span{H, E}` with `[H, E] = E`.
    pub fn borel2() -> Self {
        let labels = vec!["H".to_string(), "E".to_string()];
        let mut constants = vec![vec![Vec::new(); 2]; 2];
        constants[0][1] = vec![(1, ParamScalar::one())];
        constants[1][0] = vec![(1, ParamScalar::from_int(-1))];
        let mut spec =
            Self::from_parts("b2", labels, constants, vec![0], vec![Weight::zero(2), Weight::root(2, 1, 2)]).unwrap();
        let c = |r: Rational| ParamScalar::constant(r);
        let z = ParamScalar::zero;
        spec.matrices = Some(vec![
            vec![vec![c(Rational::new(1, 2)), z()], vec![z(), c(Rational::new(-1, 2))]],
            vec![vec![z(), ParamScalar::one()], vec![z(), z()]],
        ]);
        spec
    }

    /// Re-express the algebra in a new basis. `fwd[i]` is the new basis
    /// vector `i` in old coordinates; `inv[k]` is old basis vector `k` in new
    /// coordinates.
    pub fn change_basis(
        &self,
        name: &str,
        labels: Vec<String>,
        fwd: Vec<LieElement>,
        inv: Vec<Vec<(usize, ParamScalar)>>,
    ) -> Result<Self, LieError> {
        let n = self.dim();
        if labels.len() != n || fwd.len() != n || inv.len() != n {
            return Err(LieError::Invalid("basis change must preserve dimension".into()));
        }
        // Check fwd ∘ inv = id on old basis.
        for (k, row) in inv.iter().enumerate() {
            let mut acc = LieElement::zero(self);
            for (i, c) in row {
                acc = acc.add(&fwd[*i].scale(c))?;
            }
            if acc != LieElement::basis(self, k) {
                return Err(LieError::Invalid("basis change is not invertible as given".into()));
            }
        }
        let to_new = |x: &LieElement| -> BTreeMap<usize, ParamScalar> {
            let mut out: BTreeMap<usize, ParamScalar> = BTreeMap::new();
            for (k, c) in x.terms() {
                for (i, d) in &inv[k] {
                    let e = out.entry(*i).or_default();
                    *e += &(c * d);
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        let mut constants = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let b = self.bracket(&fwd[i], &fwd[j])?;
                constants[i][j] = to_new(&b).into_iter().collect();
            }
        }
        let mut cartan = Vec::new();
        let mut weights = Vec::new();
        for (i, x) in fwd.iter().enumerate() {
            let ws: Vec<&Weight> = x.terms().map(|(k, _)| &self.weights[k]).collect();
            let w = ws.first().map(|w| (*w).clone()).unwrap_or_else(|| Weight::zero(self.rank_space()));
            if ws.iter().any(|v| **v != w) {
                return Err(LieError::Invalid(format!("new basis vector `{}` is not a weight vector", labels[i])));
            }
            if x.terms().all(|(k, _)| self.is_cartan(k)) {
                cartan.push(i);
            }
            weights.push(w);
        }
        let mut spec = Self::from_parts(name, labels, constants, cartan, weights)?;
        if let Some(mats) = &self.matrices {
            let d = mats[0].len();
            let mut out = Vec::with_capacity(n);
            for x in &fwd {
                let mut m = vec![vec![ParamScalar::zero(); d]; d];
                for (k, c) in x.terms() {
                    for r in 0..d {
                        for s in 0..d {
                            if !mats[k][r][s].is_zero() {
                                m[r][s] += &(c * &mats[k][r][s]);
                            }
                        }
                    }
                }
                out.push(m);
            }
            spec.matrices = Some(out);
        }
        for (label, terms) in &self.derived {
            let x = LieElement::from_terms(self, terms.iter().map(|(k, c)| (*k, c.clone())));
            spec.derived.push((label.clone(), to_new(&x)));
        }
        for k in 0..n {
            if spec.index_of(&self.labels[k]).is_err() {
                spec.derived.push((self.labels[k].clone(), inv[k].iter().cloned().collect()));
            }
        }
        Ok(spec)
    }

    /// Multiply every structure constant by `ε`: the algebra of the scaled
    /// generators `ê = ε·e`.
    pub fn scaled(&self) -> Self {
        let eps = ParamScalar::param(Param::Epsilon);
        let mut out = self.clone();
        out.name = format!("{}-scaled", self.name);
        for row in &mut out.constants {
            for cell in row.iter_mut() {
                for (_, c) in cell.iter_mut() {
                    *c = &*c * &eps;
                }
            }
        }
        out.matrices = None;
        out.finish();
        out
    }

    /// Substitute a value for a parameter in every structure constant.
    pub fn specialize(&self, p: Param, value: &ParamScalar) -> Self {
        let mut out = self.clone();
        out.name = format!("{}[{}={}]", self.name, p, value);
        for row in &mut out.constants {
            for cell in row.iter_mut() {
                for (_, c) in cell.iter_mut() {
                    *c = c.substitute(p, value);
                }
            }
        }
        if let Some(mats) = &mut out.matrices {
            for m in mats.iter_mut() {
                for r in m.iter_mut() {
                    for x in r.iter_mut() {
                        *x = x.substitute(p, value);
                    }
                }
            }
        }
        for (_, t) in &mut out.derived {
            for c in t.values_mut() {
                *c = c.substitute(p, value);
            }
            t.retain(|_, c| !c.is_zero());
        }
        out.finish();
        out
    }

    /// Copy with `c_{ij}^k` replaced (and `c_{ji}^k` set to its negative).
    pub fn with_structure_constant(&self, i: usize, j: usize, k: usize, value: ParamScalar) -> Self {
        let mut out = self.clone();
        out.name = format!("{}-perturbed", self.name);
        for (a, b, v) in [(i, j, value.clone()), (j, i, -&value)] {
            let cell = &mut out.constants[a][b];
            cell.retain(|(kk, _)| *kk != k);
            cell.push((k, v));
        }
        out.finish();
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, LieError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| LieError::UnknownLabel(label.to_string()))
    }

    /// A basis vector or a named derived element (e.g. `h12`, `h`).
    pub fn element(&self, label: &str) -> Result<LieElement, LieError> {
        if let Ok(i) = self.index_of(label) {
            return Ok(LieElement::basis(self, i));
        }
        self.derived
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, t)| LieElement::from_terms(self, t.iter().map(|(k, c)| (*k, c.clone()))))
            .ok_or_else(|| LieError::UnknownLabel(label.to_string()))
    }

    pub fn derived_labels(&self) -> impl Iterator<Item = &str> {
        self.derived.iter().map(|(l, _)| l.as_str())
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn is_cartan(&self, i: usize) -> bool {
        self.cartan.contains(&i)
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    /// Number of coordinates of the weight space.
    pub fn rank_space(&self) -> usize {
        self.weights.first().map_or(0, |w| w.0.len())
    }

    /// `[e_i, e_j] = Σ c_{ij}^k e_k` as a sparse list.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, ParamScalar)] {
        &self.constants[i][j]
    }

    /// Defining matrices, when the algebra was built from a matrix realization.
    pub fn defining_matrices(&self) -> Option<&[Matrix]> {
        self.matrices.as_deref()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> LieElement {
        LieElement::from_terms(self, self.constants[i][j].iter().cloned())
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
        if x.algebra != self.id || y.algebra != self.id {
            return Err(LieError::IncompatibleSpec);
        }
        let mut out = LieElement::zero(self);
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let ab = a * b;
                for (k, c) in &self.constants[i][j] {
                    out.add_term(*k, &(&ab * c));
                }
            }
        }
        Ok(out)
    }

    /// `ν(h)` for the basis vector `idx`: the coefficient of `e_idx` in `[h, e_idx]`.
    pub fn weight_of(&self, idx: usize, h: &CartanElement) -> ParamScalar {
        let mut out = ParamScalar::zero();
        for (c, coeff) in &h.coefficients {
            for (k, v) in &self.constants[*c][idx] {
                if *k == idx {
                    out += &(coeff * v);
                }
            }
        }
        out
    }

    /// All nonzero Jacobi sums `[[x,y],z] + [[y,z],x] + [[z,x],y]` on basis triples.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim();
        let mut residuals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (x, y, z) = (LieElement::basis(self, i), LieElement::basis(self, j), LieElement::basis(self, k));
                    let s = [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)]
                        .into_iter()
                        .map(|(a, b, c)| self.bracket(&self.bracket(a, b).unwrap(), c).unwrap())
                        .fold(LieElement::zero(self), |acc, t| acc.add(&t).unwrap());
                    if !s.is_zero() {
                        residuals.push(((i, j, k), s));
                    }
                }
            }
        }
        JacobiReport { residuals }
    }

    /// Canonical text of an element: `h + (1 - gamma)*h_perp`.
    pub fn render(&self, x: &LieElement) -> String {
        crate::render::join_terms(x.terms().map(|(i, c)| (c.clone(), self.labels[i].clone())))
    }

    /// Make an element of another spec with the same basis usable here.
    pub fn adopt(&self, x: &LieElement) -> LieElement {
        x.clone().rebrand(self.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_basis_order() {
        let g = LieAlgebraSpec::build_sl(3).unwrap();
        assert_eq!(g.labels(), &["e21", "e31", "e32", "h13", "h_perp", "e12", "e13", "e23"]);
        assert_eq!(g.cartan(), &[3, 4]);
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(LieAlgebraSpec::build_sl(1).unwrap_err(), LieError::InvalidDimension(1));
    }

    #[test]
    fn derived_cartans() {
        let g = LieAlgebraSpec::build_sl(3).unwrap();
        let h12 = g.element("h12").unwrap();
        assert_eq!(g.render(&h12), "1/2*h13 + 1/2*h_perp");
        let a = LieAlgebraSpec::sl3_adapted();
        assert_eq!(a.render(&a.element("h13").unwrap()), "h - gamma*h_perp");
    }

    #[test]
    fn adapted_brackets() {
        let a = LieAlgebraSpec::sl3_adapted();
        let b = a.bracket(&a.element("e12").unwrap(), &a.element("e21").unwrap()).unwrap();
        assert_eq!(a.render(&b), "h + (1 - gamma)*h_perp");
        assert!(a.jacobi_check().is_zero());
    }

    #[test]
    fn mismatched_algebras() {
        let a = LieAlgebraSpec::build_sl(3).unwrap();
        let b = LieAlgebraSpec::build_sl(2).unwrap();
        let x = LieElement::basis(&a, 0);
        let y = LieElement::basis(&b, 0);
        assert_eq!(a.bracket(&x, &y).unwrap_err(), LieError::IncompatibleSpec);
    }
}

//! Exact evaluation in finite-dimensional representations: sparse matrices
//! with polynomial entries, Kronecker products of legs, and the twist and
//! Yang–Baxter identities as matrix identities.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::expr::{Definitions, Expr, ExprError};
use crate::lie::{LieAlgebraSpec, LieElement, LieError};
use crate::scalar::{Param, ParamScalar, Rational};
use crate::twist::TwistedHopf;
use crate::uea::{GradingContext, Monomial, TensorElement, UElement};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("cannot evaluate exactly: {0} is not nilpotent")]
    NotNilpotent(String),
    #[error("{0}")]
    Type(String),
    #[error("`{0}` has no matrix in this representation")]
    UnknownName(String),
    #[error("the algebra has no defining matrices")]
    NoDefiningMatrices,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A square matrix over [`ParamScalar`], stored by sparse rows.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    rows: Vec<Vec<(usize, ParamScalar)>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{}, {} nonzero)", self.dim, self.dim, self.nonzero_count())
    }
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, &ParamScalar::one())
    }

    pub fn scalar(dim: usize, c: &ParamScalar) -> Self {
        if c.is_zero() {
            return Self::zero(dim);
        }
        Self { dim, rows: (0..dim).map(|i| vec![(i, c.clone())]).collect() }
    }

    pub fn from_dense(m: &[Vec<ParamScalar>]) -> Self {
        let rows = m
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect())
            .collect();
        Self { dim: m.len(), rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> ParamScalar {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => ParamScalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Nonzero entries `(row, column, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ParamScalar)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, c)| (i, *j, c)))
    }

    fn check(&self, other: &Matrix) -> Result<(), RepError> {
        if self.dim != other.dim {
            return Err(RepError::Type(format!("matrix sizes {} and {} differ", self.dim, other.dim)));
        }
        Ok(())
    }

    fn combine(&self, other: &Matrix, sign: &ParamScalar) -> Result<Matrix, RepError> {
        self.check(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, ParamScalar> = a.iter().cloned().collect();
                for (j, c) in b {
                    *acc.entry(*j).or_insert_with(ParamScalar::zero) += &(c * sign);
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect();
        Ok(Matrix { dim: self.dim, rows })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, RepError> {
        self.combine(other, &ParamScalar::one())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, RepError> {
        self.combine(other, &ParamScalar::from_int(-1))
    }

    pub fn scale(&self, c: &ParamScalar) -> Matrix {
        self.map_entries(|x| x * c)
    }

    pub fn map_entries(&self, f: impl Fn(&ParamScalar) -> ParamScalar + Sync) -> Matrix {
        let rows = self
            .rows
            .par_iter()
            .map(|r| r.iter().map(|(j, c)| (*j, f(c))).filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        Matrix { dim: self.dim, rows }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, RepError> {
        self.check(other)?;
        let n = self.dim;
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc: Vec<Option<ParamScalar>> = vec![None; n];
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        let p = a * b;
                        match &mut acc[*j] {
                            Some(x) => *x += &p,
                            slot => *slot = Some(p),
                        }
                    }
                }
                acc.into_iter().enumerate().filter_map(|(j, c)| c.filter(|c| !c.is_zero()).map(|c| (j, c))).collect()
            })
            .collect();
        Ok(Matrix { dim: n, rows })
    }

    pub fn commutator(&self, other: &Matrix) -> Result<Matrix, RepError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// `self ⊠ other`, indexed by `i·dim(other) + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let m = other.dim;
        let mut rows = Vec::with_capacity(self.dim * m);
        for a in &self.rows {
            for b in &other.rows {
                let mut r = Vec::with_capacity(a.len() * b.len());
                for (j, x) in a {
                    for (l, y) in b {
                        r.push((j * m + l, x * y));
                    }
                }
                rows.push(r);
            }
        }
        Matrix { dim: self.dim * m, rows }
    }

    /// Conjugate by a permutation of the tensor legs: leg `perm[k]` of the
    /// result is leg `k` of `self`.
    pub fn permute_legs(&self, dims: &[usize], perm: &[usize]) -> Matrix {
        let index = |i: usize| -> usize {
            let mut digits = vec![0; dims.len()];
            let mut rest = i;
            for k in (0..dims.len()).rev() {
                digits[k] = rest % dims[k];
                rest /= dims[k];
            }
            let mut out_digits = vec![0; dims.len()];
            for k in 0..dims.len() {
                out_digits[perm[k]] = digits[k];
            }
            let new_dims: Vec<usize> = {
                let mut d = vec![0; dims.len()];
                for k in 0..dims.len() {
                    d[perm[k]] = dims[k];
                }
                d
            };
            out_digits.iter().zip(&new_dims).fold(0, |acc, (x, d)| acc * d + x)
        };
        let map: Vec<usize> = (0..self.dim).map(index).collect();
        let mut rows = vec![Vec::new(); self.dim];
        for (i, r) in self.rows.iter().enumerate() {
            let mut nr: Vec<(usize, ParamScalar)> = r.iter().map(|(j, c)| (map[*j], c.clone())).collect();
            nr.sort_by_key(|(j, _)| *j);
            rows[map[i]] = nr;
        }
        Matrix { dim: self.dim, rows }
    }

    /// `exp(M)` for nilpotent `M`.
    pub fn exp_nilpotent(&self) -> Result<Matrix, RepError> {
        let mut acc = Matrix::identity(self.dim);
        let mut term = Matrix::identity(self.dim);
        for k in 1..=self.dim as i64 + 1 {
            term = term.mul(self)?.scale(&Rational::new(1, k).into());
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term)?;
        }
        Err(RepError::NotNilpotent("exponent".into()))
    }

    /// `ln(M)` for unipotent `M`.
    pub fn ln_unipotent(&self) -> Result<Matrix, RepError> {
        let y = self.sub(&Matrix::identity(self.dim))?;
        let mut acc = Matrix::zero(self.dim);
        let mut pow = Matrix::identity(self.dim);
        for k in 1..=self.dim as i64 + 1 {
            pow = pow.mul(&y)?;
            if pow.is_zero() {
                return Ok(acc);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pow.scale(&Rational::new(sign, k).into()))?;
        }
        Err(RepError::NotNilpotent("logarithm argument minus 1".into()))
    }

    /// Entries truncated to the grading's order.
    pub fn truncate(&self, grading: &GradingContext) -> Matrix {
        self.map_entries(|c| c.truncate(grading).0)
    }

    pub fn substitute(&self, p: Param, value: &ParamScalar) -> Matrix {
        self.map_entries(|c| c.substitute(p, value))
    }

    /// Up to `limit` nonzero entries as `"[i,j] = value"` lines.
    pub fn describe_nonzero(&self, limit: usize) -> Vec<String> {
        self.entries().take(limit).map(|(i, j, c)| format!("[{i},{j}] = {c}")).collect()
    }
}

/// Which representation a [`Representation`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Fundamental,
    Adjoint,
    Borel2,
    /// `ρ ⊗ ρ` composed with the undeformed coproduct.
    Coproduct,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Fundamental => "fundamental",
            RepKind::Adjoint => "adjoint",
            RepKind::Borel2 => "b2",
            RepKind::Coproduct => "coproduct",
        }
    }
}

/// Matrices for the basis of a Lie algebra.
#[derive(Debug, Clone)]
pub struct Representation {
    kind: RepKind,
    spec: LieAlgebraSpec,
    matrices: Vec<Matrix>,
}

impl Representation {
    fn defining(spec: &LieAlgebraSpec, kind: RepKind) -> Result<Self, RepError> {
        let mats = spec.defining_matrices().ok_or(RepError::NoDefiningMatrices)?;
        Ok(Self { kind, spec: spec.clone(), matrices: mats.iter().map(|m| Matrix::from_dense(m)).collect() })
    }

    /// The defining 3-dimensional representation.
    pub fn fundamental(spec: &LieAlgebraSpec) -> Result<Self, RepError> {
        Self::defining(spec, RepKind::Fundamental)
    }

    /// `ρ(x)_{kj} = c_{xj}^k`.
    pub fn adjoint(spec: &LieAlgebraSpec) -> Self {
        let n = spec.dim();
        let matrices = (0..n)
            .map(|x| {
                let mut dense = vec![vec![ParamScalar::zero(); n]; n];
                for j in 0..n {
                    for (k, c) in spec.structure(x, j) {
                        dense[*k][j] = c.clone();
                    }
                }
                Matrix::from_dense(&dense)
            })
            .collect();
        Self { kind: RepKind::Adjoint, spec: spec.clone(), matrices }
    }

    /// The 2-dimensional representation of `b(2)` inside `sl(2)`.
    pub fn borel2(spec: &LieAlgebraSpec) -> Result<Self, RepError> {
        Self::defining(spec, RepKind::Borel2)
    }

    /// `x ↦ ρ(x) ⊗ 1 + 1 ⊗ ρ(x)`: evaluating a leg here evaluates its
    /// undeformed coproduct.
    pub fn coproduct(&self) -> Self {
        let id = Matrix::identity(self.dim());
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.kron(&id).add(&id.kron(m)).expect("equal sizes"))
            .collect();
        Self { kind: RepKind::Coproduct, spec: self.spec.clone(), matrices }
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::dim)
    }

    pub fn generator(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn element(&self, x: &LieElement) -> Matrix {
        let mut out = Matrix::zero(self.dim());
        for (i, c) in x.terms() {
            out = out.add(&self.matrices[i].scale(c)).expect("equal sizes");
        }
        out
    }

    /// The ordered product of generator matrices of a PBW monomial.
    pub fn monomial(&self, m: &Monomial) -> Matrix {
        let mut out = Matrix::identity(self.dim());
        for i in m.word() {
            out = out.mul(&self.matrices[i]).expect("equal sizes");
        }
        out
    }

    pub fn uea_element(&self, x: &UElement) -> Matrix {
        let mut out = Matrix::zero(self.dim());
        for (m, c) in x.terms() {
            out = out.add(&self.monomial(m).scale(c)).expect("equal sizes");
        }
        out
    }

    /// `ρ([e_i, e_j]) − [ρ(e_i), ρ(e_j)]` for every basis pair with a
    /// nonzero residual.
    pub fn homomorphism_residuals(&self) -> Vec<(String, String, Matrix)> {
        let n = self.spec.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.element(&self.spec.bracket_basis(i, j));
                let rhs = self.matrices[i].commutator(&self.matrices[j]).expect("equal sizes");
                let d = lhs.sub(&rhs).expect("equal sizes");
                if !d.is_zero() {
                    out.push((self.spec.label(i).to_string(), self.spec.label(j).to_string(), d));
                }
            }
        }
        out
    }
}

/// Evaluates expressions with one representation per tensor leg.
pub struct MatrixEvaluator<'a> {
    legs: Vec<&'a Representation>,
    defs: &'a Definitions,
    cache: RefCell<BTreeMap<(String, usize), Matrix>>,
}

#[derive(Clone)]
enum Val {
    Scalar(ParamScalar),
    Mat(Matrix),
}

impl<'a> MatrixEvaluator<'a> {
    pub fn new(legs: Vec<&'a Representation>, defs: &'a Definitions) -> Self {
        Self { legs, defs, cache: RefCell::new(BTreeMap::new()) }
    }

    /// Dimension of the full tensor space.
    pub fn dim(&self) -> usize {
        self.legs.iter().map(|r| r.dim()).product()
    }

    /// Evaluate an expression of full rank (or rank 1 with a single leg).
    pub fn eval(&self, e: &Expr) -> Result<Matrix, RepError> {
        let scope = if self.legs.len() == 1 { Some(0) } else { None };
        Ok(match self.value(e, scope)? {
            Val::Scalar(c) => Matrix::scalar(self.dim(), &c),
            Val::Mat(m) => m,
        })
    }

    fn scope_dim(&self, scope: Option<usize>) -> usize {
        match scope {
            Some(k) => self.legs[k].dim(),
            None => self.dim(),
        }
    }

    fn lift(&self, v: Val, scope: Option<usize>) -> Matrix {
        match v {
            Val::Scalar(c) => Matrix::scalar(self.scope_dim(scope), &c),
            Val::Mat(m) => m,
        }
    }

    fn value(&self, e: &Expr, scope: Option<usize>) -> Result<Val, RepError> {
        Ok(match e {
            Expr::Num(r) => Val::Scalar(r.clone().into()),
            Expr::Param(p) => Val::Scalar(ParamScalar::param(*p)),
            Expr::Name(n) => self.name(n, scope)?,
            Expr::Neg(a) => match self.value(a, scope)? {
                Val::Scalar(c) => Val::Scalar(-c),
                Val::Mat(m) => Val::Mat(m.scale(&ParamScalar::from_int(-1))),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.value(a, scope)?, self.value(b, scope)?);
                let y = match (matches!(e, Expr::Sub(..)), y) {
                    (true, Val::Scalar(c)) => Val::Scalar(-c),
                    (true, Val::Mat(m)) => Val::Mat(m.scale(&ParamScalar::from_int(-1))),
                    (false, y) => y,
                };
                match (x, y) {
                    (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(&x + &y),
                    (x, y) => Val::Mat(self.lift(x, scope).add(&self.lift(y, scope))?),
                }
            }
            Expr::Mul(a, b) => match (self.value(a, scope)?, self.value(b, scope)?) {
                (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(&x * &y),
                (Val::Scalar(c), Val::Mat(m)) | (Val::Mat(m), Val::Scalar(c)) => Val::Mat(m.scale(&c)),
                (Val::Mat(x), Val::Mat(y)) => Val::Mat(x.mul(&y)?),
            },
            Expr::Div(a, b) => {
                let d = match self.value(b, scope)? {
                    Val::Scalar(d) => d.as_constant().filter(|d| !d.is_zero()),
                    Val::Mat(_) => None,
                }
                .ok_or_else(|| RepError::Type("division only by a nonzero rational constant".into()))?;
                match self.value(a, scope)? {
                    Val::Scalar(x) => Val::Scalar(x.scale(&d.recip())),
                    Val::Mat(m) => Val::Mat(m.scale(&d.recip().into())),
                }
            }
            Expr::Pow(a, k) => {
                if *k < 0 {
                    return Err(RepError::Type("negative powers have no exact matrix value".into()));
                }
                match self.value(a, scope)? {
                    Val::Scalar(c) => Val::Scalar(c.pow(*k as u32)),
                    Val::Mat(m) => {
                        let mut acc = Matrix::identity(m.dim());
                        for _ in 0..*k {
                            acc = acc.mul(&m)?;
                        }
                        Val::Mat(acc)
                    }
                }
            }
            Expr::Tensor(parts) => {
                if scope.is_some() && self.legs.len() > 1 {
                    return Err(RepError::Type("tensor inside a tensor leg".into()));
                }
                if parts.len() != self.legs.len() {
                    return Err(RepError::Type(format!(
                        "rank-{} tensor evaluated on {} legs",
                        parts.len(),
                        self.legs.len()
                    )));
                }
                let mut acc: Option<Matrix> = None;
                for (k, p) in parts.iter().enumerate() {
                    let m = self.lift(self.value(p, Some(k))?, Some(k));
                    acc = Some(match acc {
                        None => m,
                        Some(a) => a.kron(&m),
                    });
                }
                Val::Mat(acc.expect("at least one leg"))
            }
            Expr::Exp(a) => match self.value(a, scope)? {
                Val::Scalar(c) if c.is_zero() => Val::Scalar(ParamScalar::one()),
                Val::Scalar(c) => return Err(RepError::NotNilpotent(format!("the scalar {c}"))),
                Val::Mat(m) => Val::Mat(m.exp_nilpotent().map_err(|_| RepError::NotNilpotent(a.to_string()))?),
            },
            Expr::Ln(a) => match self.value(a, scope)? {
                Val::Scalar(c) if c.is_one() => Val::Scalar(ParamScalar::zero()),
                Val::Scalar(c) => return Err(RepError::NotNilpotent(format!("the scalar {c} − 1"))),
                Val::Mat(m) => Val::Mat(m.ln_unipotent().map_err(|_| RepError::NotNilpotent(format!("{a} − 1")))?),
            },
        })
    }

    fn name(&self, n: &str, scope: Option<usize>) -> Result<Val, RepError> {
        if let Some(def) = self.defs.get(n) {
            let key = (n.to_string(), scope.map_or(usize::MAX, |k| k));
            if let Some(m) = self.cache.borrow().get(&key) {
                return Ok(Val::Mat(m.clone()));
            }
            let v = self.value(def, scope)?;
            if let Val::Mat(m) = &v {
                self.cache.borrow_mut().insert(key, m.clone());
            }
            return Ok(v);
        }
        let Some(k) = scope else {
            return Err(RepError::Type(format!("`{n}` used outside a tensor leg")));
        };
        let rep = self.legs[k];
        let x = rep.spec().element(n).map_err(|_| RepError::UnknownName(n.to_string()))?;
        Ok(Val::Mat(rep.element(&x)))
    }
}

/// `F = F_p ⋯ F_1` and `F⁻¹` of a chain evaluated on the given legs.
fn twist_pair(hopf: &TwistedHopf, legs: Vec<&Representation>) -> Result<(Matrix, Matrix), RepError> {
    let ev = MatrixEvaluator::new(legs, hopf.defs());
    let mut f = Matrix::identity(ev.dim());
    let mut f_inv = Matrix::identity(ev.dim());
    for factor in &hopf.chain().factors {
        let x = ev.eval(&factor.exponent)?;
        f = f.mul(&x.exp_nilpotent().map_err(|_| RepError::NotNilpotent(factor.name.clone()))?)?;
        let y = x.scale(&ParamScalar::from_int(-1)).exp_nilpotent()?;
        f_inv = y.mul(&f_inv)?;
    }
    Ok((f, f_inv))
}

/// The twist on `V ⊗ V`.
pub fn twist_matrix(hopf: &TwistedHopf, rep: &Representation) -> Result<Matrix, RepError> {
    Ok(twist_pair(hopf, vec![rep, rep])?.0)
}

/// `F12 (Δ⊗id)(F) − F23 (id⊗Δ)(F)` on `V^{⊗3}`, exactly.
pub fn cocycle_residual(hopf: &TwistedHopf, rep: &Representation) -> Result<Matrix, RepError> {
    let d = rep.dim();
    let co = rep.coproduct();
    let id = Matrix::identity(d);
    let (f, _) = twist_pair(hopf, vec![rep, rep])?;
    let (f_left, _) = twist_pair(hopf, vec![&co, rep])?;
    let (f_right, _) = twist_pair(hopf, vec![rep, &co])?;
    let lhs = f.kron(&id).mul(&f_left)?;
    let rhs = id.kron(&f).mul(&f_right)?;
    lhs.sub(&rhs)
}

/// A tensor element evaluated leg by leg.
pub fn eval_tensor(t: &TensorElement, legs: &[&Representation]) -> Result<Matrix, RepError> {
    let dim: usize = legs.iter().map(|r| r.dim()).product();
    let mut cache: Vec<BTreeMap<Monomial, Matrix>> = vec![BTreeMap::new(); legs.len()];
    let mut out = Matrix::zero(dim);
    for (k, c) in t.terms() {
        let mut acc: Option<Matrix> = None;
        for (leg, m) in k.iter().enumerate() {
            let mm = cache[leg].entry(m.clone()).or_insert_with(|| legs[leg].monomial(m)).clone();
            acc = Some(match acc {
                None => mm,
                Some(a) => a.kron(&mm),
            });
        }
        out = out.add(&acc.expect("rank ≥ 1").scale(c))?;
    }
    Ok(out)
}

/// The symbolic cocycle residual of `hopf` evaluated in `rep`, minus the
/// exact representation residual truncated to the same order. Zero when the
/// two pipelines agree.
pub fn cross_validate_cocycle(hopf: &TwistedHopf, rep: &Representation) -> Result<Matrix, RepError> {
    let symbolic = hopf.cocycle_residual().map_err(|e| RepError::Type(e.to_string()))?;
    let sym = eval_tensor(&symbolic, &[rep, rep, rep])?;
    let exact = cocycle_residual(hopf, rep)?.truncate(hopf.ctx().grading());
    sym.sub(&exact)
}

/// `R = F21 F⁻¹` on `V ⊗ V`.
pub fn r_matrix(hopf: &TwistedHopf, rep: &Representation) -> Result<Matrix, RepError> {
    let d = rep.dim();
    let (f, f_inv) = twist_pair(hopf, vec![rep, rep])?;
    f.permute_legs(&[d, d], &[1, 0]).mul(&f_inv)
}

/// `R21 R − 1`.
pub fn triangularity_residual(r: &Matrix, d: usize) -> Result<Matrix, RepError> {
    r.permute_legs(&[d, d], &[1, 0]).mul(r)?.sub(&Matrix::identity(d * d))
}

/// `R12 R13 R23 − R23 R13 R12` on `V^{⊗3}`.
pub fn qybe_residual(r: &Matrix, d: usize) -> Result<Matrix, RepError> {
    let id = Matrix::identity(d);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let r13 = r12.permute_legs(&[d, d, d], &[0, 2, 1]);
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    lhs.sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Setup;

    #[test]
    fn fundamental_is_a_homomorphism() {
        let spec = LieAlgebraSpec::sl3_adapted();
        let rho = Representation::fundamental(&spec).unwrap();
        assert!(rho.homomorphism_residuals().is_empty());
        let e13 = rho.generator(spec.index_of("e13").unwrap());
        assert!(e13.mul(e13).unwrap().is_zero());
    }

    #[test]
    fn adjoint_eigenvalues_of_h13() {
        let spec = LieAlgebraSpec::sl3_adapted();
        let ad = Representation::adjoint(&spec);
        assert_eq!(ad.dim(), 8);
        assert!(ad.homomorphism_residuals().is_empty());
        let h13 = ad.element(&spec.element("h13").unwrap());
        let mut diag: Vec<Rational> = (0..8).map(|i| h13.get(i, i).as_constant().unwrap()).collect();
        assert_eq!(h13.nonzero_count(), diag.iter().filter(|x| !x.is_zero()).count());
        diag.sort();
        let h = Rational::new(1, 2);
        let want = vec![
            Rational::from_int(-1),
            -&h,
            -&h,
            Rational::zero(),
            Rational::zero(),
            h.clone(),
            h,
            Rational::one(),
        ];
        assert_eq!(diag, want);
    }

    #[test]
    fn sigma_is_exact_in_the_fundamental() {
        let spec = LieAlgebraSpec::sl3_adapted();
        let rho = Representation::fundamental(&spec).unwrap();
        let defs = Definitions::new();
        let ev = MatrixEvaluator::new(vec![&rho], &defs);
        let sigma = ev.eval(&Expr::parse("ln(1 + xi*e13)").unwrap()).unwrap();
        let want = ev.eval(&Expr::parse("xi*e13").unwrap()).unwrap();
        assert_eq!(sigma, want);
    }

    #[test]
    fn non_nilpotent_log_is_rejected() {
        let spec = LieAlgebraSpec::sl3_adapted();
        let rho = Representation::fundamental(&spec).unwrap();
        let defs = Definitions::new();
        let ev = MatrixEvaluator::new(vec![&rho], &defs);
        assert!(matches!(ev.eval(&Expr::parse("ln(1 + xi*h)").unwrap()), Err(RepError::NotNilpotent(_))));
    }

    #[test]
    fn leg_permutation_round_trips() {
        let spec = LieAlgebraSpec::borel2();
        let rho = Representation::borel2(&spec).unwrap();
        let a = rho.generator(0).kron(rho.generator(1)).kron(&Matrix::identity(2));
        let b = a.permute_legs(&[2, 2, 2], &[0, 2, 1]);
        assert_eq!(b, rho.generator(0).kron(&Matrix::identity(2)).kron(rho.generator(1)));
        assert_eq!(b.permute_legs(&[2, 2, 2], &[0, 2, 1]), a);
    }

    #[test]
    fn trivial_twist_is_a_cocycle() {
        let b = Setup::b2_jordanian().keep_factors(&[]).build(2).unwrap();
        let rho = Representation::borel2(b.ctx.spec()).unwrap();
        assert!(cocycle_residual(&b.hopf, &rho).unwrap().is_zero());
    }
}

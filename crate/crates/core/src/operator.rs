//! Formal differential operators in the coefficient variables `c_ω` (or
//! `c_ω^{(i)}` for several polynomials).
//!
//! Operators are kept in normal form: each term is a scalar times a monomial
//! in coefficient variables standing to the left of a product of partial
//! derivatives. Equality is structural. Eigenvalue parameters (`u_j`, `v_i`)
//! are carried as named parameter terms so that they render symbolically
//! while still contributing their value on application.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::lattice::{cayley_set, kernel_basis, ExponentSet, ExponentVector, LatticeError, LatticeRelation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("exponent {0} required by the relation is missing from the exponent set")]
    MissingExponent(String),
    #[error("axis {axis} out of range for {dimension} variables")]
    AxisOutOfRange { axis: usize, dimension: usize },
    #[error("block {block} out of range for {blocks} polynomials")]
    BlockOutOfRange { block: usize, blocks: usize },
    #[error("operation needs a Cayley (several-polynomial) coefficient space")]
    NotCayley,
    #[error("zero relation has no box operator")]
    ZeroRelation,
    #[error("relation has {found} entries but the space has {expected} variables")]
    RelationLength { expected: usize, found: usize },
    #[error("the constant exponent carries no relation of this form")]
    ConstantExponent,
    #[error("variable {0} is not part of the coefficient space")]
    VariableMismatch(String),
}

/// A coefficient variable `c_ω^{(block)}`; `block` is 0 for a single
/// polynomial and `1..=k` in a Cayley space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffVar {
    pub block: usize,
    pub exponent: ExponentVector,
}

impl CoeffVar {
    pub fn new(block: usize, exponent: ExponentVector) -> Self {
        CoeffVar { block, exponent }
    }

    /// `c{exp}`, or `c{block}_{exp}` when blocks are shown.
    pub fn name(&self, show_block: bool) -> String {
        if show_block {
            format!("c{}_{}", self.block, self.exponent)
        } else {
            format!("c{}", self.exponent)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Coefficients of one polynomial `P` (GG- and A-systems).
    Single,
    /// Coefficients of `P₁,…,P_k` (Ã-system).
    Cayley,
}

/// The coefficient variables of a system together with the exponent set
/// indexing them (`A`, or `Ã` for a Cayley space).
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSpace {
    kind: SpaceKind,
    blocks: Vec<ExponentSet>,
    flat: ExponentSet,
    vars: Vec<CoeffVar>,
}

impl CoefficientSpace {
    pub fn single(set: ExponentSet) -> Self {
        let vars = set
            .members()
            .iter()
            .map(|w| CoeffVar::new(0, w.clone()))
            .collect();
        CoefficientSpace {
            kind: SpaceKind::Single,
            blocks: vec![set.clone()],
            flat: set,
            vars,
        }
    }

    pub fn cayley(blocks: Vec<ExponentSet>) -> Result<Self, OperatorError> {
        let flat = cayley_set(&blocks)?;
        let vars = blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| {
                b.members()
                    .iter()
                    .map(move |w| CoeffVar::new(i + 1, w.clone()))
            })
            .collect();
        Ok(CoefficientSpace {
            kind: SpaceKind::Cayley,
            blocks,
            flat,
            vars,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Number of `t` variables.
    pub fn dimension(&self) -> usize {
        self.blocks[0].dimension()
    }

    /// Number of polynomials; 0 for a single-polynomial space.
    pub fn block_count(&self) -> usize {
        match self.kind {
            SpaceKind::Single => 0,
            SpaceKind::Cayley => self.blocks.len(),
        }
    }

    pub fn blocks(&self) -> &[ExponentSet] {
        &self.blocks
    }

    /// `A`, or `Ã` for a Cayley space; members align with [`Self::vars`].
    pub fn exponent_set(&self) -> &ExponentSet {
        &self.flat
    }

    pub fn vars(&self) -> &[CoeffVar] {
        &self.vars
    }

    pub fn index_of(&self, var: &CoeffVar) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Block labels are shown only when there are several polynomials.
    pub fn show_blocks(&self) -> bool {
        self.kind == SpaceKind::Cayley && self.blocks.len() > 1
    }

    pub fn var_name(&self, index: usize) -> String {
        self.vars[index].name(self.show_blocks())
    }
}

/// Monomial or derivative multi-index over coefficient variables.
pub type VarPowers = BTreeMap<CoeffVar, u32>;

/// `prefactor · ∂^{derivative}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub derivative: VarPowers,
    pub prefactor: VarPowers,
}

impl OpKey {
    pub fn identity() -> Self {
        OpKey {
            derivative: VarPowers::new(),
            prefactor: VarPowers::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.derivative.is_empty() && self.prefactor.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.derivative.values().sum()
    }
}

/// A named eigenvalue parameter contributing `sign · value` times the
/// identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamTerm<S> {
    pub name: String,
    pub sign: i8,
    pub value: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator<S> {
    terms: BTreeMap<OpKey, S>,
    params: Vec<ParamTerm<S>>,
    show_blocks: bool,
}

impl<S: Scalar> DiffOperator<S> {
    pub fn zero(show_blocks: bool) -> Self {
        DiffOperator {
            terms: BTreeMap::new(),
            params: Vec::new(),
            show_blocks,
        }
    }

    pub fn add_term(&mut self, scalar: S, key: OpKey) {
        let sum = match self.terms.remove(&key) {
            Some(old) => old + scalar,
            None => scalar,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add_param(&mut self, name: impl Into<String>, sign: i8, value: S) {
        self.params.push(ParamTerm {
            name: name.into(),
            sign,
            value,
        });
    }

    /// `∂^{powers}` with unit coefficient.
    pub fn derivative(powers: VarPowers, show_blocks: bool) -> Self {
        let mut op = Self::zero(show_blocks);
        op.add_term(
            S::one(),
            OpKey {
                derivative: powers,
                prefactor: VarPowers::new(),
            },
        );
        op
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &S)> {
        self.terms.iter()
    }

    pub fn params(&self) -> &[ParamTerm<S>] {
        &self.params
    }

    pub fn show_blocks(&self) -> bool {
        self.show_blocks
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.params.is_empty()
    }

    /// Total coefficient of the identity, parameters included.
    pub fn identity_coefficient(&self) -> S {
        let base = self
            .terms
            .get(&OpKey::identity())
            .cloned()
            .unwrap_or_else(S::zero);
        self.params.iter().fold(base, |acc, p| {
            if p.sign >= 0 {
                acc + p.value.clone()
            } else {
                acc - p.value.clone()
            }
        })
    }

    /// Highest derivative order among the terms.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(OpKey::order).max().unwrap_or(0)
    }

    /// Every coefficient variable that occurs.
    pub fn variables(&self) -> Vec<CoeffVar> {
        let mut vars: Vec<CoeffVar> = self
            .terms
            .keys()
            .flat_map(|k| k.derivative.keys().chain(k.prefactor.keys()).cloned())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, s) in &other.terms {
            out.add_term(s.clone(), k.clone());
        }
        out.params.extend(other.params.iter().cloned());
        out
    }

    pub fn neg(&self) -> Self {
        DiffOperator {
            terms: self
                .terms
                .iter()
                .map(|(k, s)| (k.clone(), -s.clone()))
                .collect(),
            params: self
                .params
                .iter()
                .map(|p| ParamTerm {
                    name: p.name.clone(),
                    sign: -p.sign,
                    value: p.value.clone(),
                })
                .collect(),
            show_blocks: self.show_blocks,
        }
    }

    /// Parameters folded into the numeric identity coefficient.
    pub fn numeric(&self) -> Self {
        let mut out = DiffOperator {
            terms: self.terms.clone(),
            params: Vec::new(),
            show_blocks: self.show_blocks,
        };
        let id = self.identity_coefficient()
            - self
                .terms
                .get(&OpKey::identity())
                .cloned()
                .unwrap_or_else(S::zero);
        out.add_term(id, OpKey::identity());
        out
    }

    /// `self ∘ other`, normal-ordered with the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.numeric();
        let b = other.numeric();
        let mut out = Self::zero(self.show_blocks || other.show_blocks);
        for (ka, sa) in &a.terms {
            for (kb, sb) in &b.terms {
                for (coef, derivative_left, prefactor_right) in
                    leibniz(&ka.derivative, &kb.prefactor)
                {
                    let mut prefactor = ka.prefactor.clone();
                    merge(&mut prefactor, &prefactor_right);
                    let mut derivative = derivative_left;
                    merge(&mut derivative, &kb.derivative);
                    out.add_term(
                        sa.clone() * sb.clone() * S::from_i64(coef),
                        OpKey {
                            derivative,
                            prefactor,
                        },
                    );
                }
            }
        }
        out
    }
}

fn merge(into: &mut VarPowers, from: &VarPowers) {
    for (v, e) in from {
        *into.entry(v.clone()).or_insert(0) += e;
    }
}

// ∂^b c^p = Σ_k Π_v C(b_v,k_v)·p_v!/(p_v−k_v)! · c^{p−k} ∂^{b−k}
fn leibniz(derivative: &VarPowers, prefactor: &VarPowers) -> Vec<(i64, VarPowers, VarPowers)> {
    let mut acc: Vec<(i64, VarPowers, VarPowers)> = vec![(1, VarPowers::new(), VarPowers::new())];
    let vars: std::collections::BTreeSet<&CoeffVar> =
        derivative.keys().chain(prefactor.keys()).collect();
    for v in vars {
        let b = derivative.get(v).copied().unwrap_or(0);
        let p = prefactor.get(v).copied().unwrap_or(0);
        let mut next = Vec::new();
        for (coef, d, c) in &acc {
            for k in 0..=b.min(p) {
                let factor = binomial(b, k) * falling(p, k);
                let mut d = d.clone();
                let mut c = c.clone();
                if b - k > 0 {
                    d.insert(v.clone(), b - k);
                }
                if p - k > 0 {
                    c.insert(v.clone(), p - k);
                }
                next.push((coef * factor, d, c));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(coef, d, c)| (coef, d, c))
        .collect()
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

fn powers_from_counts(space: &CoefficientSpace, counts: &[u32]) -> VarPowers {
    space
        .vars()
        .iter()
        .zip(counts)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| (v.clone(), e))
        .collect()
}

/// `∂^{u⁺} − ∂^{u⁻}` for a lattice relation among the space's exponents.
pub fn box_operator<S: Scalar>(
    relation: &LatticeRelation,
    space: &CoefficientSpace,
) -> Result<DiffOperator<S>, OperatorError> {
    if relation.coefficients().len() != space.vars().len() {
        return Err(OperatorError::RelationLength {
            expected: space.vars().len(),
            found: relation.coefficients().len(),
        });
    }
    if relation.is_zero() {
        return Err(OperatorError::ZeroRelation);
    }
    let show = space.show_blocks();
    let plus = DiffOperator::derivative(powers_from_counts(space, &relation.positive_part()), show);
    let minus =
        DiffOperator::<S>::derivative(powers_from_counts(space, &relation.negative_part()), show);
    Ok(plus.add(&minus.neg()))
}

/// `Σ_ω ω^j c_ω ∂_{c_ω} + u_j` (0-based axis `j`).
pub fn euler_t_operator<S: Scalar>(
    space: &CoefficientSpace,
    axis: usize,
    u: S,
) -> Result<DiffOperator<S>, OperatorError> {
    let n = space.dimension();
    if axis >= n {
        return Err(OperatorError::AxisOutOfRange { axis, dimension: n });
    }
    let mut op = DiffOperator::zero(space.show_blocks());
    for var in space.vars() {
        let w = var.exponent.entries()[axis];
        if w != 0 {
            op.add_term(S::from_i64(w), euler_key(var));
        }
    }
    op.add_param(format!("u{}", axis + 1), 1, u);
    Ok(op)
}

/// `Σ_{ω∈A_i} c_ω^{(i)} ∂_{c_ω^{(i)}} − v_i` (0-based block `i`).
pub fn euler_y_operator<S: Scalar>(
    space: &CoefficientSpace,
    block: usize,
    v: S,
) -> Result<DiffOperator<S>, OperatorError> {
    if space.kind() != SpaceKind::Cayley {
        return Err(OperatorError::NotCayley);
    }
    let k = space.block_count();
    if block >= k {
        return Err(OperatorError::BlockOutOfRange { block, blocks: k });
    }
    let mut op = DiffOperator::zero(space.show_blocks());
    for var in space.vars().iter().filter(|v| v.block == block + 1) {
        op.add_term(S::one(), euler_key(var));
    }
    op.add_param(format!("v{}", block + 1), -1, v);
    Ok(op)
}

fn euler_key(var: &CoeffVar) -> OpKey {
    let mut single = VarPowers::new();
    single.insert(var.clone(), 1);
    OpKey {
        derivative: single.clone(),
        prefactor: single,
    }
}

/// The relation expressing `∂_{c_ω}` through derivatives in the linear
/// coefficients.
///
/// For a single polynomial: `∂_{c_ω} − ∂_{c_{e₁}}^{ω¹}⋯∂_{c_{e_n}}^{ωⁿ}`.
/// In a Cayley space (block `i`, 0-based):
/// `∂_{c₀}^{|ω|−1}∂_{c_ω} − ∂_{c_{e₁}}^{ω¹}⋯∂_{c_{e_n}}^{ωⁿ}`, all in block `i`.
pub fn gg_relation_operator<S: Scalar>(
    space: &CoefficientSpace,
    block: usize,
    omega: &ExponentVector,
) -> Result<DiffOperator<S>, OperatorError> {
    let n = space.dimension();
    if omega.dim() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: omega.dim(),
        }
        .into());
    }
    let (set, label) = match space.kind() {
        SpaceKind::Single => (&space.blocks()[0], 0),
        SpaceKind::Cayley => {
            let k = space.block_count();
            if block >= k {
                return Err(OperatorError::BlockOutOfRange { block, blocks: k });
            }
            (&space.blocks()[block], block + 1)
        }
    };
    let require = |w: &ExponentVector| -> Result<CoeffVar, OperatorError> {
        if set.contains(w) {
            Ok(CoeffVar::new(label, w.clone()))
        } else {
            Err(OperatorError::MissingExponent(w.to_string()))
        }
    };
    let degree = omega.degree();
    if space.kind() == SpaceKind::Cayley && degree == 0 {
        return Err(OperatorError::ConstantExponent);
    }
    let mut left = VarPowers::new();
    let target = require(omega)?;
    if space.kind() == SpaceKind::Cayley {
        if degree > 1 {
            left.insert(require(&ExponentVector::zero(n))?, (degree - 1) as u32);
        }
    }
    *left.entry(target).or_insert(0) += 1;
    let mut right = VarPowers::new();
    for (j, &e) in omega.entries().iter().enumerate() {
        if e > 0 {
            right.insert(require(&ExponentVector::unit(n, j))?, e as u32);
        }
    }
    let show = space.show_blocks();
    let lhs = DiffOperator::derivative(left, show);
    let rhs = DiffOperator::<S>::derivative(right, show);
    Ok(lhs.add(&rhs.neg()))
}

/// Role of an operator in a coefficient system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// Derivative in `c_ω` expressed through the linear coefficients.
    Relation,
    /// Binomial operator of a lattice relation.
    Box,
    /// Homogeneity in `t_j` (0-based axis).
    EulerT(usize),
    /// Homogeneity in the coefficients of one polynomial (0-based block).
    EulerY(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemOperator<S> {
    pub kind: OperatorKind,
    pub operator: DiffOperator<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSystem<S> {
    pub operators: Vec<SystemOperator<S>>,
    /// Relations skipped for missing exponents.
    pub warnings: Vec<String>,
}

/// The relation operators, the box operators of a kernel basis (minus those
/// already listed up to sign) and the Euler operators with parameters `u`
/// (one per variable) and, in a Cayley space, `v` (one per polynomial).
pub fn operator_system<S: Scalar>(
    space: &CoefficientSpace,
    u: &[S],
    v: &[S],
) -> Result<OperatorSystem<S>, OperatorError> {
    let n = space.dimension();
    if u.len() != n {
        return Err(OperatorError::RelationLength {
            expected: n,
            found: u.len(),
        });
    }
    let k = match space.kind() {
        SpaceKind::Single => 0,
        SpaceKind::Cayley => space.block_count(),
    };
    if v.len() != k {
        return Err(OperatorError::BlockOutOfRange {
            block: v.len(),
            blocks: k,
        });
    }
    let mut operators: Vec<SystemOperator<S>> = Vec::new();
    let mut warnings = Vec::new();
    let block_sets: Vec<(usize, &ExponentSet)> = match space.kind() {
        SpaceKind::Single => vec![(0, &space.blocks()[0])],
        SpaceKind::Cayley => space.blocks().iter().enumerate().collect(),
    };
    for (block, set) in block_sets {
        for omega in set.members() {
            if omega.degree() < 2 {
                continue;
            }
            match gg_relation_operator(space, block, omega) {
                Ok(op) => operators.push(SystemOperator {
                    kind: OperatorKind::Relation,
                    operator: op,
                }),
                Err(OperatorError::MissingExponent(missing)) => warnings.push(format!(
                    "relation for {} skipped: exponent {missing} missing",
                    CoeffVar::new(if k == 0 { 0 } else { block + 1 }, omega.clone())
                        .name(space.show_blocks())
                )),
                Err(e) => return Err(e),
            }
        }
    }
    for relation in kernel_basis(space.exponent_set(), false)? {
        let op = box_operator::<S>(&relation, space)?;
        let negated = op.neg();
        if !operators
            .iter()
            .any(|o| o.operator == op || o.operator == negated)
        {
            operators.push(SystemOperator {
                kind: OperatorKind::Box,
                operator: op,
            });
        }
    }
    for (j, uj) in u.iter().enumerate() {
        operators.push(SystemOperator {
            kind: OperatorKind::EulerT(j),
            operator: euler_t_operator(space, j, uj.clone())?,
        });
    }
    for (i, vi) in v.iter().enumerate() {
        operators.push(SystemOperator {
            kind: OperatorKind::EulerY(i),
            operator: euler_y_operator(space, i, vi.clone())?,
        });
    }
    Ok(OperatorSystem {
        operators,
        warnings,
    })
}

fn sign_group<S: Scalar>(s: &S) -> u8 {
    let z = s.to_c64();
    if z.re > 0.0 || (z.re == 0.0 && z.im > 0.0) {
        0
    } else {
        1
    }
}

fn render_powers(powers: &VarPowers, show: bool, wrap: bool) -> Vec<String> {
    powers
        .iter()
        .map(|(v, &e)| {
            let name = if wrap {
                format!("D[{}]", v.name(show))
            } else {
                v.name(show)
            };
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect()
}

impl<S: Scalar> fmt::Display for DiffOperator<S> {
    /// Text grammar: `D[cNAME]^k` factors joined by `*`, terms joined by
    /// ` + ` / ` - `, positive terms first, then named parameters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ordered: Vec<(&OpKey, &S)> = self.terms.iter().collect();
        ordered.sort_by_key(|(_, s)| sign_group(*s));
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (key, s) in ordered {
            let mut factors = render_powers(&key.prefactor, self.show_blocks, false);
            factors.extend(render_powers(&key.derivative, self.show_blocks, true));
            let z = s.to_c64();
            let (negative, magnitude) = if z.im == 0.0 && z.re < 0.0 {
                (true, -s.clone())
            } else {
                (false, s.clone())
            };
            if !magnitude.is_one() || factors.is_empty() {
                factors.insert(0, magnitude.render());
            }
            pieces.push((negative, factors.join("*")));
        }
        for p in &self.params {
            pieces.push((p.sign < 0, p.name.clone()));
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        for (i, (negative, text)) in pieces.iter().enumerate() {
            match (i, negative) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_complex::Complex64;

    fn uni(e: &[i64]) -> ExponentSet {
        ExponentSet::univariate(e).unwrap()
    }

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn box_operator_examples() {
        let space = CoefficientSpace::single(uni(&[1, 2]));
        let rel = LatticeRelation::new(space.exponent_set(), vec![2, -1], false).unwrap();
        let op: DiffOperator<f64> = box_operator(&rel, &space).unwrap();
        assert_eq!(op.to_string(), "D[c1]^2 - D[c2]");

        let space = CoefficientSpace::single(uni(&[1, 2, 3]));
        let rel = LatticeRelation::new(space.exponent_set(), vec![1, -2, 1], true).unwrap();
        let op: DiffOperator<f64> = box_operator(&rel, &space).unwrap();
        assert_eq!(op.to_string(), "D[c1]*D[c3] - D[c2]^2");

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1, 2])]).unwrap();
        let rel = LatticeRelation::new(space.exponent_set(), vec![1, -2, 1], false).unwrap();
        let op: DiffOperator<f64> = box_operator(&rel, &space).unwrap();
        assert_eq!(op.to_string(), "D[c0]*D[c2] - D[c1]^2");
    }

    #[test]
    fn box_operator_sign_antisymmetry() {
        let space = CoefficientSpace::single(uni(&[1, 2, 3]));
        for rel in kernel_basis(space.exponent_set(), false).unwrap() {
            let a: DiffOperator<Rational> = box_operator(&rel, &space).unwrap();
            let b: DiffOperator<Rational> = box_operator(&rel.negated(), &space).unwrap();
            assert!(a.add(&b).is_zero());
        }
    }

    #[test]
    fn box_operator_length_mismatch() {
        let space = CoefficientSpace::single(uni(&[1, 2]));
        let other = uni(&[1, 2, 3]);
        let rel = LatticeRelation::new(&other, vec![1, -2, 1], true).unwrap();
        assert!(matches!(
            box_operator::<f64>(&rel, &space),
            Err(OperatorError::RelationLength { .. })
        ));
    }

    #[test]
    fn euler_t_examples() {
        let space = CoefficientSpace::single(uni(&[1, 2]));
        let op = euler_t_operator(&space, 0, 1.0).unwrap();
        assert_eq!(op.to_string(), "c1*D[c1] + 2*c2*D[c2] + u1");
        assert_eq!(op.identity_coefficient(), 1.0);

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1])]).unwrap();
        let op = euler_t_operator(&space, 0, Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(op.to_string(), "c1*D[c1] + u1");

        let space = CoefficientSpace::single(ExponentSet::from_rows(2, &[&[0, 0]]).unwrap());
        let op = euler_t_operator(&space, 0, 0.0).unwrap();
        assert_eq!(op.to_string(), "u1");
        assert_eq!(op.identity_coefficient(), 0.0);
        assert_eq!(op.order(), 0);

        assert!(euler_t_operator(&space, 2, 0.0).is_err());
    }

    #[test]
    fn euler_y_examples() {
        let space = CoefficientSpace::cayley(vec![uni(&[0, 1])]).unwrap();
        let op = euler_y_operator(&space, 0, 2.0).unwrap();
        assert_eq!(op.to_string(), "c0*D[c0] + c1*D[c1] - v1");
        assert_eq!(op.identity_coefficient(), -2.0);

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1]), uni(&[2])]).unwrap();
        let op = euler_y_operator(&space, 1, 3.0).unwrap();
        assert_eq!(op.to_string(), "c2_2*D[c2_2] - v2");

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1]), uni(&[])]).unwrap();
        let op = euler_y_operator(&space, 1, 0.0).unwrap();
        assert_eq!(op.to_string(), "-v2");

        let single = CoefficientSpace::single(uni(&[1]));
        assert_eq!(
            euler_y_operator(&single, 0, 0.0),
            Err(OperatorError::NotCayley)
        );
    }

    #[test]
    fn gg_relation_examples() {
        let space = CoefficientSpace::single(uni(&[1, 2]));
        let op: DiffOperator<f64> = gg_relation_operator(&space, 0, &ev(&[2])).unwrap();
        assert_eq!(op.to_string(), "D[c2] - D[c1]^2");

        let space = CoefficientSpace::single(
            ExponentSet::from_rows(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap(),
        );
        let op: DiffOperator<f64> = gg_relation_operator(&space, 0, &ev(&[1, 1])).unwrap();
        assert_eq!(op.to_string(), "D[c(1,1)] - D[c(0,1)]*D[c(1,0)]");

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1, 2])]).unwrap();
        let op: DiffOperator<f64> = gg_relation_operator(&space, 0, &ev(&[2])).unwrap();
        assert_eq!(op.to_string(), "D[c0]*D[c2] - D[c1]^2");
    }

    #[test]
    fn gg_relation_missing_exponents() {
        let space = CoefficientSpace::single(uni(&[2, 3]));
        assert_eq!(
            gg_relation_operator::<f64>(&space, 0, &ev(&[2])),
            Err(OperatorError::MissingExponent("1".into()))
        );
        let space = CoefficientSpace::cayley(vec![uni(&[1, 2])]).unwrap();
        assert_eq!(
            gg_relation_operator::<f64>(&space, 0, &ev(&[2])),
            Err(OperatorError::MissingExponent("0".into()))
        );
        assert_eq!(
            gg_relation_operator::<f64>(&space, 0, &ev(&[0])),
            Err(OperatorError::ConstantExponent)
        );
    }

    #[test]
    fn gg_relation_equals_box_of_the_linear_relation() {
        let space = CoefficientSpace::single(uni(&[1, 2, 3]));
        // 3 = 3·e₁  ⇒  relation (3, 0, −1), box = ∂₁³ − ∂₃ = −(gg relation)
        let rel = LatticeRelation::new(space.exponent_set(), vec![3, 0, -1], false).unwrap();
        let bx: DiffOperator<Rational> = box_operator(&rel, &space).unwrap();
        let gg: DiffOperator<Rational> = gg_relation_operator(&space, 0, &ev(&[3])).unwrap();
        assert_eq!(bx, gg.neg());

        let space = CoefficientSpace::cayley(vec![uni(&[0, 1, 2, 3])]).unwrap();
        let rel = LatticeRelation::new(space.exponent_set(), vec![2, -3, 0, 1], false).unwrap();
        let bx: DiffOperator<Rational> = box_operator(&rel, &space).unwrap();
        let gg: DiffOperator<Rational> = gg_relation_operator(&space, 0, &ev(&[3])).unwrap();
        // ∂₀²∂₃ − ∂₁³
        assert_eq!(bx.to_string(), "D[c0]^2*D[c3] - D[c1]^3");
        assert_eq!(bx, gg);
    }

    #[test]
    fn compose_applies_the_commutator_rule() {
        let space = CoefficientSpace::single(uni(&[1]));
        let var = space.vars()[0].clone();
        let mut d = VarPowers::new();
        d.insert(var.clone(), 1);
        let del: DiffOperator<Rational> = DiffOperator::derivative(d.clone(), false);
        let mut c = DiffOperator::<Rational>::zero(false);
        c.add_term(
            rat(1),
            OpKey {
                derivative: VarPowers::new(),
                prefactor: d.clone(),
            },
        );
        // ∂∘c − c∘∂ = 1
        let commutator = del.compose(&c).add(&c.compose(&del).neg());
        let mut one = DiffOperator::<Rational>::zero(false);
        one.add_term(rat(1), OpKey::identity());
        assert_eq!(commutator, one);

        // ∂²∘c = c∂² + 2∂
        let mut d2 = VarPowers::new();
        d2.insert(var, 2);
        let del2: DiffOperator<Rational> = DiffOperator::derivative(d2, false);
        assert_eq!(del2.compose(&c).to_string(), "2*D[c1] + c1*D[c1]^2");
    }

    #[test]
    fn numeric_folds_parameters() {
        let space = CoefficientSpace::single(uni(&[1, 2]));
        let op = euler_t_operator(&space, 0, 1.5).unwrap();
        let numeric = op.numeric();
        assert!(numeric.params().is_empty());
        assert_eq!(numeric.to_string(), "1.5 + c1*D[c1] + 2*c2*D[c2]");
    }
}

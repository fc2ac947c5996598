//! Base-indexed power-series expansions of non-Gaussian integrals.
//!
//! A series lives on a [`CoefficientSpace`]. With a base `B` the members of
//! `B` carry the coefficient-function variables `a_1,…,a_n` and the rest
//! carry power series variables. A term is stored by a [`SeriesKey`] holding
//! the powers of the series variables and, for the closed Γ form, the shift
//! `δ` of the Gamma arguments:
//!
//! `coeff · ∏_ω a_ω^{k_ω} · ∏_j Γ(s0_j + δ_j) (−a_j)^{−(s0_j + δ_j)}`.
//!
//! The closed form is stable under differentiation and multiplication by
//! coefficient variables, which is what makes exact operator application
//! possible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{base_coords, Base, LatticeError};
use crate::operator::{CoefficientSpace, DiffOperator, OperatorError};
use crate::scalar::{rat, Rational, Scalar};
use crate::special::{is_gamma_pole, ln_gamma};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },
    #[error("expected {expected} variable values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("series layouts differ")]
    LayoutMismatch,
    #[error("operator acts on a coefficient-function variable of an oracle-backed series")]
    OpaqueCoefficient,
    #[error("term {0} sits at a pole of the Gamma function")]
    Pole(String),
    #[error("power (-a_{index})^{exponent} is not defined at a_{index} = 0")]
    ZeroBase { index: usize, exponent: String },
    #[error("coefficient oracle failed at m = {m:?}: {message}")]
    Oracle { m: Vec<u32>, message: String },
}

/// Coefficients `C_m(a_1,…,a_n)` of a general expansion.
pub trait CoefficientOracle: Send + Sync + fmt::Debug {
    /// `C_m` at the given values of the base variables (empty without a
    /// base).
    fn coefficient(&self, m: &[u32], base_values: &[Complex64]) -> Result<Complex64, String>;

    /// Same `m` and values always give the same result.
    fn is_pure(&self) -> bool {
        true
    }

    fn describe(&self) -> String;
}

/// Powers of the series variables and Gamma-argument shifts of the base
/// variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub powers: Vec<u32>,
    pub shift: Vec<Rational>,
}

impl SeriesKey {
    pub fn order(&self) -> u32 {
        self.powers.iter().sum()
    }
}

/// Which members of the space are base variables and which are series
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesLayout {
    space: CoefficientSpace,
    base: Option<Base>,
    series_vars: Vec<usize>,
}

enum Slot {
    Base(usize),
    Series(usize),
}

impl SeriesLayout {
    pub fn new(space: CoefficientSpace, base: Option<Base>) -> Result<Self, SeriesError> {
        if let Some(b) = &base {
            if b.parent() != space.exponent_set() {
                return Err(SeriesError::LayoutMismatch);
            }
        }
        let series_vars = (0..space.vars().len())
            .filter(|i| base.as_ref().is_none_or(|b| !b.contains_index(*i)))
            .collect();
        Ok(SeriesLayout {
            space,
            base,
            series_vars,
        })
    }

    pub fn space(&self) -> &CoefficientSpace {
        &self.space
    }

    pub fn base(&self) -> Option<&Base> {
        self.base.as_ref()
    }

    /// Space indices of the series variables, ascending.
    pub fn series_vars(&self) -> &[usize] {
        &self.series_vars
    }

    /// Space indices of the base variables, in base order.
    pub fn base_vars(&self) -> &[usize] {
        self.base.as_ref().map_or(&[], |b| b.indices())
    }

    fn slot(&self, index: usize) -> Slot {
        if let Some(j) = self.base_vars().iter().position(|&i| i == index) {
            Slot::Base(j)
        } else {
            Slot::Series(self.series_vars.iter().position(|&i| i == index).unwrap())
        }
    }
}

#[derive(Clone, Debug)]
pub enum SeriesKind<S> {
    /// Closed Γ-product coefficients with base exponent `s0 = B⁻¹u`.
    Gamma { s0: Vec<S> },
    /// Coefficients delegated to an oracle.
    Oracle(Arc<dyn CoefficientOracle>),
}

impl<S: PartialEq> PartialEq for SeriesKind<S> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SeriesKind::Gamma { s0: a }, SeriesKind::Gamma { s0: b }) => a == b,
            (SeriesKind::Oracle(a), SeriesKind::Oracle(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Closed-form coefficient of one multi-index: `κ·∏Γ(s_j)(−a_j)^{−s_j}` with
/// `κ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTerm<S> {
    pub arguments: Vec<S>,
    pub pole: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSeries<S> {
    layout: SeriesLayout,
    order: u32,
    kind: SeriesKind<S>,
    terms: BTreeMap<SeriesKey, S>,
    boundary: BTreeSet<SeriesKey>,
}

/// Value of a series at a point with a tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Magnitude of the highest order's contribution.
    pub tail: f64,
}

/// All multi-indices of the given length with entries summing to at most
/// `order`, ordered by total degree.
pub fn multi_indices(len: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=order {
        let mut current = vec![0u32; len];
        fill(&mut current, 0, total, &mut out);
    }
    out
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= current.len() {
        if current.is_empty() {
            if remaining == 0 {
                out.push(Vec::new());
            }
            return;
        }
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        fill(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

fn inverse_weight<S: Scalar>(m: &[u32]) -> S {
    let denom = m.iter().fold(rat(1), |acc, &k| acc * factorial(k));
    S::from_rational(&(rat(1) / denom))
}

fn is_nonpositive_integer<S: Scalar>(s: &S) -> bool {
    if S::is_exact() {
        // exact scalars reach here only through rationals
        let z = s.to_c64();
        let r = z.re.round();
        s == &S::from_i64(r as i64) && r <= 0.0
    } else {
        is_gamma_pole(s.to_c64())
    }
}

fn base_exponent<S: Scalar>(base: &Base, u: &[S]) -> Vec<S> {
    base.inverse_matrix()
        .iter()
        .map(|row| {
            row.iter()
                .zip(u)
                .fold(S::zero(), |acc, (r, x)| acc + S::from_rational(r) * x.clone())
        })
        .collect()
}

/// The GG coefficient `C_m(a) = ∏_j Γ(s^j(m)) (−a_j)^{−s^j(m)}` with
/// `s(m) = B⁻¹u + Σ_ω m_ω l_ω`.
pub fn gg_gamma_coefficient<S: Scalar>(
    m: &[u32],
    u: &[S],
    layout: &SeriesLayout,
) -> Result<GammaTerm<S>, SeriesError> {
    let base = layout.base().ok_or(SeriesError::LayoutMismatch)?;
    let n = base.indices().len();
    if u.len() != n {
        return Err(SeriesError::ParameterCount {
            expected: n,
            found: u.len(),
        });
    }
    if m.len() != layout.series_vars().len() {
        return Err(SeriesError::ValueCount {
            expected: layout.series_vars().len(),
            found: m.len(),
        });
    }
    let s0 = base_exponent(base, u);
    let shift = gamma_shift(layout, m)?;
    let arguments: Vec<S> = s0
        .into_iter()
        .zip(&shift)
        .map(|(s, d)| s + S::from_rational(d))
        .collect();
    let pole = arguments.iter().any(is_nonpositive_integer);
    Ok(GammaTerm { arguments, pole })
}

fn gamma_shift(layout: &SeriesLayout, m: &[u32]) -> Result<Vec<Rational>, SeriesError> {
    let base = layout.base().ok_or(SeriesError::LayoutMismatch)?;
    let members = layout.space().exponent_set().members();
    let mut shift = vec![rat(0); base.indices().len()];
    for (&k, &index) in m.iter().zip(layout.series_vars()) {
        if k == 0 {
            continue;
        }
        let l = base_coords(base, &members[index])?;
        for (d, lj) in shift.iter_mut().zip(l.entries()) {
            *d += lj * rat(k as i64);
        }
    }
    Ok(shift)
}

/// The Γ-series of the GG-function `∮e^P t^{u−1}dt` (with `P₀ = 0`, so the
/// series variables are the coefficients themselves), truncated at order
/// `order`.
pub fn gg_gamma_series<S: Scalar>(
    space: CoefficientSpace,
    base: Base,
    u: &[S],
    order: u32,
) -> Result<GammaSeries<S>, SeriesError> {
    let layout = SeriesLayout::new(space, Some(base))?;
    let n = layout.base_vars().len();
    if u.len() != n {
        return Err(SeriesError::ParameterCount {
            expected: n,
            found: u.len(),
        });
    }
    let s0 = base_exponent(layout.base().unwrap(), u);
    let indices = multi_indices(layout.series_vars().len(), order);
    let terms: Result<BTreeMap<_, _>, SeriesError> = indices
        .par_iter()
        .map(|m| {
            let shift = gamma_shift(&layout, m)?;
            Ok((
                SeriesKey {
                    powers: m.clone(),
                    shift,
                },
                inverse_weight::<S>(m),
            ))
        })
        .collect();
    Ok(GammaSeries {
        layout,
        order,
        kind: SeriesKind::Gamma { s0 },
        terms: terms?,
        boundary: BTreeSet::new(),
    })
}

/// `Σ_{|m|≤M} C_m(a_1,…,a_n) ∏ a_ω^{m_ω}/m_ω!` with `C_m` from the oracle.
pub fn expand_general(
    space: CoefficientSpace,
    base: Base,
    oracle: Arc<dyn CoefficientOracle>,
    order: u32,
) -> Result<GammaSeries<Complex64>, SeriesError> {
    oracle_series(SeriesLayout::new(space, Some(base))?, oracle, order)
}

/// `Σ_{|m|≤M} ∏ a_ω^{m_ω}/m_ω! · moment(m)` over all of `A`, where
/// `moment(m) = I_{t^{Σm_ω ω}α}(P₀)` and `a = c − c⁰`.
pub fn standard_expansion(
    space: CoefficientSpace,
    moments: Arc<dyn CoefficientOracle>,
    order: u32,
) -> Result<GammaSeries<Complex64>, SeriesError> {
    oracle_series(SeriesLayout::new(space, None)?, moments, order)
}

fn oracle_series(
    layout: SeriesLayout,
    oracle: Arc<dyn CoefficientOracle>,
    order: u32,
) -> Result<GammaSeries<Complex64>, SeriesError> {
    let terms = multi_indices(layout.series_vars().len(), order)
        .into_iter()
        .map(|m| {
            let w = inverse_weight::<Complex64>(&m);
            (
                SeriesKey {
                    powers: m,
                    shift: Vec::new(),
                },
                w,
            )
        })
        .collect();
    Ok(GammaSeries {
        layout,
        order,
        kind: SeriesKind::Oracle(oracle),
        terms,
        boundary: BTreeSet::new(),
    })
}

fn falling(n: u32, r: u32) -> i64 {
    (0..r).fold(1i64, |acc, i| acc * (n - i) as i64)
}

impl<S: Scalar> GammaSeries<S> {
    pub fn layout(&self) -> &SeriesLayout {
        &self.layout
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> &SeriesKind<S> {
        &self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SeriesKey, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &SeriesKey) -> Option<&S> {
        self.terms.get(key)
    }

    /// Output keys of operator application that could receive contributions
    /// from terms beyond the truncation order.
    pub fn boundary(&self) -> &BTreeSet<SeriesKey> {
        &self.boundary
    }

    /// Terms not marked as boundary terms.
    pub fn interior_terms(&self) -> impl Iterator<Item = (&SeriesKey, &S)> {
        self.terms
            .iter()
            .filter(|(k, _)| !self.boundary.contains(*k))
    }

    /// Gamma arguments `s0 + δ` of a key, for the closed form.
    pub fn gamma_arguments(&self, key: &SeriesKey) -> Option<Vec<S>> {
        match &self.kind {
            SeriesKind::Gamma { s0 } => Some(
                s0.iter()
                    .zip(&key.shift)
                    .map(|(s, d)| s.clone() + S::from_rational(d))
                    .collect(),
            ),
            SeriesKind::Oracle(_) => None,
        }
    }

    /// Whether a term sits at a pole of Γ.
    pub fn is_pole(&self, key: &SeriesKey) -> bool {
        self.gamma_arguments(key)
            .is_some_and(|args| args.iter().any(is_nonpositive_integer))
    }

    /// Term-wise sum; both series must share layout and kind.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.layout != other.layout || self.kind != other.kind {
            return Err(SeriesError::LayoutMismatch);
        }
        let mut out = self.clone();
        out.order = self.order.max(other.order);
        for (k, c) in &other.terms {
            add_into(&mut out.terms, k.clone(), c.clone());
        }
        out.boundary.extend(other.boundary.iter().cloned());
        Ok(out)
    }

    /// Exact term-wise application of a differential operator.
    pub fn apply(&self, op: &DiffOperator<S>) -> Result<Self, SeriesError> {
        let op = op.numeric();
        let space = self.layout.space();
        let s0 = match &self.kind {
            SeriesKind::Gamma { s0 } => Some(s0),
            SeriesKind::Oracle(_) => None,
        };
        let mut terms = BTreeMap::new();
        let mut preimages = Vec::new();
        for (op_key, scalar) in op.terms() {
            let mut derivative = Vec::new();
            let mut prefactor = Vec::new();
            for (list, powers) in [
                (&mut derivative, &op_key.derivative),
                (&mut prefactor, &op_key.prefactor),
            ] {
                for (var, &r) in powers {
                    let index = space
                        .index_of(var)
                        .ok_or_else(|| OperatorError::VariableMismatch(var.name(true)))?;
                    let slot = self.layout.slot(index);
                    if matches!(slot, Slot::Base(_)) && s0.is_none() {
                        return Err(SeriesError::OpaqueCoefficient);
                    }
                    list.push((slot, r));
                }
            }
            'terms: for (key, coeff) in &self.terms {
                let mut key_out = key.clone();
                let mut c = coeff.clone() * scalar.clone();
                for (slot, r) in &derivative {
                    match *slot {
                        // Γ(s)(−a)^{−s} ↦ Γ(s+r)(−a)^{−s−r}
                        Slot::Base(j) => key_out.shift[j] += rat(*r as i64),
                        Slot::Series(p) => {
                            let k = key_out.powers[p];
                            if k < *r {
                                continue 'terms;
                            }
                            c = c * S::from_i64(falling(k, *r));
                            key_out.powers[p] = k - r;
                        }
                    }
                }
                for (slot, r) in &prefactor {
                    match *slot {
                        // a·Γ(s)(−a)^{−s} = −(s−1)·Γ(s−1)(−a)^{−(s−1)}
                        Slot::Base(j) => {
                            let s0j = &s0.unwrap()[j];
                            for _ in 0..*r {
                                let s = s0j.clone() + S::from_rational(&key_out.shift[j]);
                                c = c * -(s - S::one());
                                key_out.shift[j] -= rat(1);
                            }
                        }
                        Slot::Series(p) => key_out.powers[p] += r,
                    }
                }
                add_into(&mut terms, key_out, c);
            }
            preimages.push((derivative, prefactor));
        }
        // An output term is complete only if every term that could map onto
        // it lies within the truncation order.
        let boundary = terms
            .keys()
            .filter(|key| {
                preimages.iter().any(|(derivative, prefactor)| {
                    let mut src = (*key).clone();
                    for (slot, r) in prefactor {
                        match *slot {
                            Slot::Base(j) => src.shift[j] += rat(*r as i64),
                            Slot::Series(p) => {
                                if src.powers[p] < *r {
                                    return false;
                                }
                                src.powers[p] -= r;
                            }
                        }
                    }
                    for (slot, r) in derivative {
                        match *slot {
                            Slot::Base(j) => src.shift[j] -= rat(*r as i64),
                            Slot::Series(p) => src.powers[p] += r,
                        }
                    }
                    src.order() > self.order || self.boundary.contains(&src)
                })
            })
            .cloned()
            .collect();
        Ok(GammaSeries {
            layout: self.layout.clone(),
            order: self.order,
            kind: self.kind.clone(),
            terms,
            boundary,
        })
    }
}

fn add_into<S: Scalar>(terms: &mut BTreeMap<SeriesKey, S>, key: SeriesKey, value: S) {
    let sum = match terms.remove(&key) {
        Some(old) => old + value,
        None => value,
    };
    if !sum.is_zero() {
        terms.insert(key, sum);
    }
}

/// Applies `op` to `series` term by term.
pub fn apply_to_series<S: Scalar>(
    op: &DiffOperator<S>,
    series: &GammaSeries<S>,
) -> Result<GammaSeries<S>, SeriesError> {
    series.apply(op)
}

/// `Γ(s)(−a)^{−s}` on the principal branch of `log(−a)`.
fn gamma_power(s: Complex64, a: Complex64, index: usize) -> Result<Complex64, SeriesError> {
    let lg = ln_gamma(s).ok_or_else(|| SeriesError::Pole(format!("Γ({s})")))?;
    if a == Complex64::zero() {
        return if s.re < 0.0 {
            Ok(Complex64::zero())
        } else if s == Complex64::zero() {
            Ok(lg.exp())
        } else {
            Err(SeriesError::ZeroBase {
                index: index + 1,
                exponent: format!("{}", -s),
            })
        };
    }
    Ok((lg - s * (-a).ln()).exp())
}

/// Sums the stored terms at `values` (one per coefficient variable of the
/// space, in space order). The tail estimate is the magnitude of the
/// contribution of the highest order present.
pub fn evaluate_series<S: Scalar>(
    series: &GammaSeries<S>,
    values: &[Complex64],
) -> Result<SeriesValue, SeriesError> {
    let layout = series.layout();
    let expected = layout.space().vars().len();
    if values.len() != expected {
        return Err(SeriesError::ValueCount {
            expected,
            found: values.len(),
        });
    }
    let base_values: Vec<Complex64> = layout.base_vars().iter().map(|&i| values[i]).collect();
    let series_values: Vec<Complex64> = layout.series_vars().iter().map(|&i| values[i]).collect();
    let contributions: Result<Vec<(u32, Complex64)>, SeriesError> = series
        .terms
        .par_iter()
        .map(|(key, coeff)| {
            let mut v = coeff.to_c64();
            for (&k, &a) in key.powers.iter().zip(&series_values) {
                v *= a.powu(k);
            }
            match &series.kind {
                SeriesKind::Gamma { s0 } => {
                    for (j, (s, d)) in s0.iter().zip(&key.shift).enumerate() {
                        let arg = (s.clone() + S::from_rational(d)).to_c64();
                        v *= gamma_power(arg, base_values[j], j)?;
                    }
                }
                SeriesKind::Oracle(oracle) => {
                    let c = oracle
                        .coefficient(&key.powers, &base_values)
                        .map_err(|message| SeriesError::Oracle {
                            m: key.powers.clone(),
                            message,
                        })?;
                    v *= c;
                }
            }
            Ok((key.order(), v))
        })
        .collect();
    let contributions = contributions?;
    let value = contributions.iter().map(|(_, v)| v).sum();
    let top = contributions.iter().map(|(o, _)| *o).max();
    let tail = match top {
        Some(top) => contributions
            .iter()
            .filter(|(o, _)| *o == top)
            .map(|(_, v)| v)
            .sum::<Complex64>()
            .norm(),
        None => 0.0,
    };
    Ok(SeriesValue { value, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ExponentSet;
    use crate::operator::{box_operator, euler_t_operator, gg_relation_operator};
    use crate::lattice::{kernel_basis, ExponentVector};
    use crate::scalar::ratio;

    fn space12() -> CoefficientSpace {
        CoefficientSpace::single(ExponentSet::univariate(&[1, 2]).unwrap())
    }

    fn base(space: &CoefficientSpace, idx: usize) -> Base {
        Base::new(space.exponent_set(), vec![idx]).unwrap()
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(0, 3), vec![Vec::<u32>::new()]);
        assert_eq!(multi_indices(1, 2), vec![vec![0], vec![1], vec![2]]);
        let two = multi_indices(2, 2);
        assert_eq!(two.len(), 6);
        assert_eq!(two[1], vec![1, 0]);
        assert_eq!(two[5], vec![0, 2]);
    }

    #[test]
    fn gamma_coefficients_for_both_bases() {
        let space = space12();
        let layout = SeriesLayout::new(space.clone(), Some(base(&space, 0))).unwrap();
        let t = gg_gamma_coefficient(&[3], &[rat(1)], &layout).unwrap();
        assert_eq!(t.arguments, vec![rat(7)]);
        assert!(!t.pole);

        let layout = SeriesLayout::new(space.clone(), Some(base(&space, 1))).unwrap();
        let t = gg_gamma_coefficient(&[1], &[rat(1)], &layout).unwrap();
        assert_eq!(t.arguments, vec![rat(1)]);
        let t = gg_gamma_coefficient(&[0], &[rat(1)], &layout).unwrap();
        assert_eq!(t.arguments, vec![ratio(1, 2)]);

        let layout = SeriesLayout::new(space.clone(), Some(base(&space, 0))).unwrap();
        let t = gg_gamma_coefficient(&[0], &[rat(0)], &layout).unwrap();
        assert!(t.pole);
    }

    #[test]
    fn series_weights_and_pole_flags() {
        let space = space12();
        let s = gg_gamma_series(space.clone(), base(&space, 0), &[rat(1)], 2).unwrap();
        let weights: Vec<Rational> = s.terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(weights, vec![rat(1), rat(1), ratio(1, 2)]);

        let s = gg_gamma_series(space.clone(), base(&space, 0), &[rat(0)], 1).unwrap();
        let keys: Vec<&SeriesKey> = s.terms().map(|(k, _)| k).collect();
        assert!(s.is_pole(keys[0]));
        assert!(!s.is_pole(keys[1]));
    }

    #[test]
    fn box_and_euler_annihilate_below_the_truncation_order() {
        let space = space12();
        let order = 8;
        let s = gg_gamma_series(space.clone(), base(&space, 0), &[rat(1)], order).unwrap();
        let gg: DiffOperator<Rational> =
            gg_relation_operator(&space, 0, &ExponentVector::new(vec![2])).unwrap();
        let out = s.apply(&gg).unwrap();
        assert_eq!(out.interior_terms().count(), 0);
        assert_eq!(out.len(), 1);
        let (key, _) = out.terms().next().unwrap();
        assert_eq!(key.order(), order);

        let euler = euler_t_operator(&space, 0, rat(1)).unwrap();
        assert!(s.apply(&euler).unwrap().is_empty());

        // the wrong eigenvalue leaves every term alive
        let wrong = euler_t_operator(&space, 0, ratio(3, 2)).unwrap();
        assert_eq!(s.apply(&wrong).unwrap().len(), s.len());
    }

    #[test]
    fn box_annihilation_with_the_other_base() {
        let space = space12();
        let s = gg_gamma_series(space.clone(), base(&space, 1), &[ratio(1, 3)], 10).unwrap();
        for rel in kernel_basis(space.exponent_set(), false).unwrap() {
            let op: DiffOperator<Rational> = box_operator(&rel, &space).unwrap();
            let out = s.apply(&op).unwrap();
            assert_eq!(out.interior_terms().count(), 0, "{op}");
        }
        let euler = euler_t_operator(&space, 0, ratio(1, 3)).unwrap();
        assert!(s.apply(&euler).unwrap().is_empty());
    }

    #[test]
    fn evaluate_simple_terms() {
        let space = CoefficientSpace::single(ExponentSet::univariate(&[1]).unwrap());
        let s = gg_gamma_series(space.clone(), base(&space, 0), &[1.0], 0).unwrap();
        let v = evaluate_series(&s, &[Complex64::new(-1.0, 0.0)]).unwrap();
        assert!((v.value - 1.0).norm() < 1e-14);
        // Γ(1)(−a)^{-1} at a = −2
        let v = evaluate_series(&s, &[Complex64::new(-2.0, 0.0)]).unwrap();
        assert!((v.value - 0.5).norm() < 1e-14);
        assert!(matches!(
            evaluate_series(&s, &[Complex64::zero()]),
            Err(SeriesError::ZeroBase { .. })
        ));
        let empty = s.apply(&euler_t_operator(&space, 0, 1.0).unwrap()).unwrap();
        assert_eq!(
            evaluate_series(&empty, &[Complex64::new(-1.0, 0.0)]).unwrap().value,
            Complex64::zero()
        );
    }
}

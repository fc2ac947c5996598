//! Sparse multivariate polynomials keyed by exponent vectors.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::{cayley_set, ExponentSet, ExponentVector, LatticeError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("axis {axis} out of range for {dimension} variables")]
    AxisOutOfRange { axis: usize, dimension: usize },
    #[error("negative exponent {0}")]
    NegativeExponent(String),
    #[error("exponent {0} is not in the declared exponent set")]
    NotInSet(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `P(t) = Σ_ω c_ω t^ω` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial<S> {
    dimension: usize,
    terms: BTreeMap<ExponentVector, S>,
}

impl<S: Scalar> SparsePolynomial<S> {
    pub fn zero(dimension: usize) -> Self {
        SparsePolynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial, summing repeated exponents and dropping exact
    /// zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, PolynomialError>
    where
        I: IntoIterator<Item = (ExponentVector, S)>,
    {
        let mut p = Self::zero(dimension);
        for (omega, c) in terms {
            p.check_exponent(&omega)?;
            p.add_term(omega, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from `(exponent, coefficient)` pairs.
    pub fn univariate(terms: &[(i64, S)]) -> Result<Self, PolynomialError> {
        Self::from_terms(
            1,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(vec![*e]), c.clone())),
        )
    }

    /// Polynomial with the given coefficients on the members of `set`.
    pub fn on_set(set: &ExponentSet, coefficients: &[S]) -> Result<Self, PolynomialError> {
        if coefficients.len() != set.len() {
            return Err(PolynomialError::DimensionMismatch {
                expected: set.len(),
                found: coefficients.len(),
            });
        }
        Self::from_terms(
            set.dimension(),
            set.members().iter().cloned().zip(coefficients.iter().cloned()),
        )
    }

    fn check_exponent(&self, omega: &ExponentVector) -> Result<(), PolynomialError> {
        if omega.dim() != self.dimension {
            return Err(PolynomialError::DimensionMismatch {
                expected: self.dimension,
                found: omega.dim(),
            });
        }
        if !omega.is_nonnegative() {
            return Err(PolynomialError::NegativeExponent(omega.to_string()));
        }
        Ok(())
    }

    fn add_term(&mut self, omega: ExponentVector, c: S) {
        let sum = match self.terms.remove(&omega) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(omega, sum);
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Terms in graded-lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, omega: &ExponentVector) -> S {
        self.terms.get(omega).cloned().unwrap_or_else(S::zero)
    }

    /// The support as an exponent set (graded-lexicographic member order).
    pub fn support(&self) -> ExponentSet {
        ExponentSet::new(self.dimension, self.terms.keys().cloned().collect())
            .expect("polynomial exponents are valid set members")
    }

    /// `Σ c_ω t^ω`; the empty polynomial evaluates to zero.
    pub fn evaluate(&self, t: &[S]) -> Result<S, PolynomialError> {
        if t.len() != self.dimension {
            return Err(PolynomialError::DimensionMismatch {
                expected: self.dimension,
                found: t.len(),
            });
        }
        Ok(self.terms.iter().fold(S::zero(), |acc, (omega, c)| {
            acc + c.clone() * monomial(t, omega)
        }))
    }

    /// `∂P/∂t_j` for a 0-based axis `j`.
    pub fn partial_derivative(&self, axis: usize) -> Result<Self, PolynomialError> {
        if axis >= self.dimension {
            return Err(PolynomialError::AxisOutOfRange {
                axis,
                dimension: self.dimension,
            });
        }
        let mut out = Self::zero(self.dimension);
        for (omega, c) in &self.terms {
            let e = omega.entries()[axis];
            if e == 0 {
                continue;
            }
            let mut lowered = omega.entries().to_vec();
            lowered[axis] -= 1;
            out.add_term(ExponentVector::new(lowered), c.clone() * S::from_i64(e));
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolynomialError> {
        if other.dimension != self.dimension {
            return Err(PolynomialError::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let mut out = self.clone();
        for (omega, c) in &other.terms {
            out.add_term(omega.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.dimension);
        for (omega, c) in &self.terms {
            out.add_term(omega.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// Converts coefficients to another scalar type.
    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePolynomial<T> {
        let mut out = SparsePolynomial::zero(self.dimension);
        for (omega, c) in &self.terms {
            out.add_term(omega.clone(), f(c));
        }
        out
    }
}

/// `t^ω = t₁^{ω¹}⋯t_n^{ωⁿ}` for a non-negative exponent.
pub fn monomial<S: Scalar>(t: &[S], omega: &ExponentVector) -> S {
    t.iter()
        .zip(omega.entries())
        .fold(S::one(), |acc, (x, &e)| acc * num_traits::pow(x.clone(), e as usize))
}

/// `λ₁P₁ + … + λ_kP_k` in `n + k` variables, with the `t` variables first
/// and the `λ` variables last.
///
/// The support is contained in the Cayley set of the supports; the
/// coefficient of `(ω, e_i)` is the coefficient of `t^ω` in `P_i`.
pub fn cayley_polynomial<S: Scalar>(
    polys: &[SparsePolynomial<S>],
) -> Result<SparsePolynomial<S>, PolynomialError> {
    let first = polys
        .first()
        .ok_or(PolynomialError::Lattice(LatticeError::NoBlocks))?;
    let n = first.dimension();
    let k = polys.len();
    let mut out = SparsePolynomial::zero(n + k);
    for (i, p) in polys.iter().enumerate() {
        if p.dimension() != n {
            return Err(PolynomialError::DimensionMismatch {
                expected: n,
                found: p.dimension(),
            });
        }
        let mut tail = vec![0i64; k];
        tail[i] = 1;
        for (omega, c) in p.terms() {
            out.add_term(omega.concat(&tail), c.clone());
        }
    }
    Ok(out)
}

/// Cayley set of the supports of `polys`.
pub fn cayley_support<S: Scalar>(
    polys: &[SparsePolynomial<S>],
) -> Result<ExponentSet, PolynomialError> {
    let supports: Vec<ExponentSet> = polys.iter().map(|p| p.support()).collect();
    Ok(cayley_set(&supports)?)
}

/// `P = P₀ + Σ_{ω∈A} a_ω t^ω` with `a_ω = c_ω − c_ω⁰`.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation<S> {
    set: ExponentSet,
    center: SparsePolynomial<S>,
    deltas: BTreeMap<ExponentVector, S>,
}

impl<S: Scalar> Perturbation<S> {
    pub fn new(
        set: ExponentSet,
        center: SparsePolynomial<S>,
        deltas: impl IntoIterator<Item = (ExponentVector, S)>,
    ) -> Result<Self, PolynomialError> {
        if center.dimension() != set.dimension() {
            return Err(PolynomialError::DimensionMismatch {
                expected: set.dimension(),
                found: center.dimension(),
            });
        }
        for (omega, _) in center.terms() {
            if !set.contains(omega) {
                return Err(PolynomialError::NotInSet(omega.to_string()));
            }
        }
        let mut map = BTreeMap::new();
        for (omega, a) in deltas {
            if !set.contains(&omega) {
                return Err(PolynomialError::NotInSet(omega.to_string()));
            }
            map.insert(omega, a);
        }
        Ok(Perturbation {
            set,
            center,
            deltas: map,
        })
    }

    pub fn set(&self) -> &ExponentSet {
        &self.set
    }

    pub fn center(&self) -> &SparsePolynomial<S> {
        &self.center
    }

    pub fn delta(&self, omega: &ExponentVector) -> S {
        self.deltas.get(omega).cloned().unwrap_or_else(S::zero)
    }
}

/// Coefficient-wise `c_ω⁰ + a_ω`; cancellations remove terms.
pub fn apply_perturbation<S: Scalar>(pert: &Perturbation<S>) -> SparsePolynomial<S> {
    let mut out = pert.center.clone();
    for (omega, a) in &pert.deltas {
        out.add_term(omega.clone(), a.clone());
    }
    out
}

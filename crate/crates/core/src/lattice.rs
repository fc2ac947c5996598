//! Exact integer and rational linear algebra on exponent sets.
//!
//! An [`ExponentSet`] is the finite set `A ⊂ Z^n` of monomial exponents that
//! seeds every differential system and series expansion in this crate. This
//! module provides bases of `A`, coordinates of exponents in a base, integer
//! kernel lattices of `A` (the relations behind box operators) and the
//! Cayley-trick embedding of several exponent sets into one.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("exponent set must have positive dimension")]
    ZeroDimension,
    #[error("duplicate member {0} in exponent set")]
    DuplicateMember(String),
    #[error("negative exponent {0}: Laurent exponents are not supported")]
    NegativeExponent(String),
    #[error("member index {index} out of range for a set of {len} members")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("a base needs exactly {expected} distinct indices, got {found:?}")]
    BadBaseSize { expected: usize, found: Vec<usize> },
    #[error("chosen exponents {0:?} are linearly dependent")]
    Singular(Vec<usize>),
    #[error("Cayley construction needs at least one exponent set")]
    NoBlocks,
    #[error("integer overflow during lattice reduction")]
    Overflow,
}

/// A multi-degree `ω = (ω¹,…,ωⁿ)`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically by entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The `j`-th standard unit vector (0-based).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &[i64]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        ExponentVector(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "({})", self.0.iter().join(","))
        }
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

/// Finite ordered set of distinct non-negative exponent vectors of a common
/// dimension. Member order is significant: it fixes the indexing of
/// coefficient variables and lattice relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentSet {
    dimension: usize,
    members: Vec<ExponentVector>,
}

impl ExponentSet {
    pub fn new(dimension: usize, members: Vec<ExponentVector>) -> Result<Self, LatticeError> {
        if dimension == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        for (i, m) in members.iter().enumerate() {
            if m.dim() != dimension {
                return Err(LatticeError::DimensionMismatch {
                    expected: dimension,
                    found: m.dim(),
                });
            }
            if !m.is_nonnegative() {
                return Err(LatticeError::NegativeExponent(m.to_string()));
            }
            if members[..i].contains(m) {
                return Err(LatticeError::DuplicateMember(m.to_string()));
            }
        }
        Ok(ExponentSet { dimension, members })
    }

    /// Convenience constructor from plain integer rows.
    pub fn from_rows(dimension: usize, rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(
            dimension,
            rows.iter().map(|r| ExponentVector::new(r.to_vec())).collect(),
        )
    }

    /// One-dimensional set `{a, b, ...}`.
    pub fn univariate(exponents: &[i64]) -> Result<Self, LatticeError> {
        Self::new(
            1,
            exponents.iter().map(|&e| ExponentVector::new(vec![e])).collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn members(&self) -> &[ExponentVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&ExponentVector> {
        self.members.get(index)
    }

    pub fn index_of(&self, omega: &ExponentVector) -> Option<usize> {
        self.members.iter().position(|m| m == omega)
    }

    pub fn contains(&self, omega: &ExponentVector) -> bool {
        self.index_of(omega).is_some()
    }

    /// Rank of the `n × |A|` matrix with the members as columns.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = (0..self.dimension)
            .map(|r| self.members.iter().map(|m| rat(m.entries()[r])).collect())
            .collect();
        rank_of(rows)
    }
}

/// Exact rational vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A base `B = {ω₁,…,ω_n} ⊂ A`: `n` linearly independent members.
#[derive(Clone, Debug, PartialEq)]
pub struct Base {
    parent: ExponentSet,
    indices: Vec<usize>,
    // inverse of the matrix whose columns are the base vectors
    inverse: Vec<Vec<Rational>>,
}

impl Base {
    pub fn new(parent: &ExponentSet, indices: Vec<usize>) -> Result<Self, LatticeError> {
        let n = parent.dimension();
        let distinct = indices.iter().collect::<std::collections::BTreeSet<_>>().len();
        if indices.len() != n || distinct != n {
            return Err(LatticeError::BadBaseSize {
                expected: n,
                found: indices,
            });
        }
        for &i in &indices {
            if i >= parent.len() {
                return Err(LatticeError::IndexOutOfRange {
                    index: i,
                    len: parent.len(),
                });
            }
        }
        let columns: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                indices
                    .iter()
                    .map(|&i| rat(parent.members()[i].entries()[r]))
                    .collect()
            })
            .collect();
        let inverse = invert(columns).ok_or_else(|| LatticeError::Singular(indices.clone()))?;
        Ok(Base {
            parent: parent.clone(),
            indices,
            inverse,
        })
    }

    pub fn parent(&self) -> &ExponentSet {
        &self.parent
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn vectors(&self) -> impl Iterator<Item = &ExponentVector> {
        self.indices.iter().map(move |&i| &self.parent.members()[i])
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    /// Inverse of the matrix whose `j`-th column is `ω_j`.
    pub fn inverse_matrix(&self) -> &[Vec<Rational>] {
        &self.inverse
    }
}

/// Coordinates `l` of `ω` in the base: `Σ_j l^j ω_j = ω`, exactly.
pub fn base_coords(base: &Base, omega: &ExponentVector) -> Result<RationalVector, LatticeError> {
    let n = base.parent.dimension();
    if omega.dim() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: omega.dim(),
        });
    }
    let rhs: Vec<Rational> = omega.entries().iter().map(|&e| rat(e)).collect();
    Ok(RationalVector(mat_vec(&base.inverse, &rhs)))
}

/// An integer relation `Σ_ω u_ω·ω = 0` among the members of an exponent set
/// (additionally `Σ_ω u_ω = 0` when homogeneous).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LatticeRelation {
    coefficients: Vec<i64>,
    homogeneous: bool,
}

impl LatticeRelation {
    /// Validates the relation against `set`.
    pub fn new(
        set: &ExponentSet,
        coefficients: Vec<i64>,
        homogeneous: bool,
    ) -> Result<Self, LatticeError> {
        if coefficients.len() != set.len() {
            return Err(LatticeError::DimensionMismatch {
                expected: set.len(),
                found: coefficients.len(),
            });
        }
        let rel = LatticeRelation {
            coefficients,
            homogeneous,
        };
        if rel.is_zero() || !rel.holds_on(set) {
            return Err(LatticeError::Singular(Vec::new()));
        }
        Ok(rel)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// `u⁺`: the positive part.
    pub fn positive_part(&self) -> Vec<u32> {
        self.coefficients.iter().map(|&c| c.max(0) as u32).collect()
    }

    /// `u⁻`: the negative part, as non-negative multiplicities.
    pub fn negative_part(&self) -> Vec<u32> {
        self.coefficients.iter().map(|&c| (-c).max(0) as u32).collect()
    }

    pub fn negated(&self) -> Self {
        LatticeRelation {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
            homogeneous: self.homogeneous,
        }
    }

    /// Exact check of the defining equations on `set`.
    pub fn holds_on(&self, set: &ExponentSet) -> bool {
        if self.coefficients.len() != set.len() {
            return false;
        }
        let n = set.dimension();
        let linear = (0..n).all(|r| {
            set.members()
                .iter()
                .zip(&self.coefficients)
                .map(|(m, &c)| m.entries()[r] as i128 * c as i128)
                .sum::<i128>()
                == 0
        });
        let count = !self.homogeneous
            || self.coefficients.iter().map(|&c| c as i128).sum::<i128>() == 0;
        linear && count
    }
}

/// A basis of the integer kernel lattice of the matrix whose columns are the
/// members of `set` (with an all-ones row appended when `homogeneous`).
///
/// The count of returned relations is `|A| − rank`. Relations are
/// size-reduced and sign-normalised (first nonzero entry positive).
pub fn kernel_basis(
    set: &ExponentSet,
    homogeneous: bool,
) -> Result<Vec<LatticeRelation>, LatticeError> {
    let cols = set.len();
    let mut rows: Vec<Vec<i128>> = (0..set.dimension())
        .map(|r| set.members().iter().map(|m| m.entries()[r] as i128).collect())
        .collect();
    if homogeneous {
        rows.push(vec![1; cols]);
    }
    // column-style Hermite elimination on [M; I]
    let mut columns: Vec<(Vec<i128>, Vec<i128>)> = (0..cols)
        .map(|j| {
            let top = rows.iter().map(|row| row[j]).collect();
            let mut unit = vec![0i128; cols];
            unit[j] = 1;
            (top, unit)
        })
        .collect();
    let mut pivot = 0;
    for r in 0..rows.len() {
        loop {
            let nonzero: Vec<usize> = (pivot..cols).filter(|&j| columns[j].0[r] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by_key(|&&j| columns[j].0[r].abs())
                .expect("nonempty");
            if nonzero.len() == 1 {
                columns.swap(best, pivot);
                pivot += 1;
                break;
            }
            let (bt, bu) = columns[best].clone();
            for &j in &nonzero {
                if j == best {
                    continue;
                }
                let q = columns[j].0[r].div_euclid(bt[r]);
                axpy(&mut columns[j].0, -q, &bt)?;
                axpy(&mut columns[j].1, -q, &bu)?;
            }
        }
    }
    let mut basis: Vec<Vec<i128>> = columns.drain(pivot..).map(|(_, u)| u).collect();
    size_reduce(&mut basis)?;
    for v in basis.iter_mut() {
        if let Some(first) = v.iter().find(|&&c| c != 0) {
            if *first < 0 {
                v.iter_mut().for_each(|c| *c = -*c);
            }
        }
    }
    basis.sort_by(|a, b| {
        let na: i128 = a.iter().map(|c| c * c).sum();
        let nb: i128 = b.iter().map(|c| c * c).sum();
        na.cmp(&nb).then_with(|| b.cmp(a))
    });
    basis
        .into_iter()
        .map(|v| {
            let coefficients = v
                .into_iter()
                .map(|c| i64::try_from(c).map_err(|_| LatticeError::Overflow))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LatticeRelation {
                coefficients,
                homogeneous,
            })
        })
        .collect()
}

fn axpy(target: &mut [i128], q: i128, source: &[i128]) -> Result<(), LatticeError> {
    for (t, s) in target.iter_mut().zip(source) {
        *t = q
            .checked_mul(*s)
            .and_then(|p| t.checked_add(p))
            .ok_or(LatticeError::Overflow)?;
    }
    Ok(())
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// Pairwise reduction: replace b_i by b_i − q b_j whenever that shortens it.
fn size_reduce(basis: &mut [Vec<i128>]) -> Result<(), LatticeError> {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = dot(&basis[j], &basis[j]);
                if nj == 0 {
                    continue;
                }
                let num = dot(&basis[i], &basis[j]);
                // nearest integer to num / nj
                let q = (2 * num + nj).div_euclid(2 * nj);
                if q == 0 {
                    continue;
                }
                let candidate: Vec<i128> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a - q * b)
                    .collect();
                if dot(&candidate, &candidate) < dot(&basis[i], &basis[i]) {
                    let bj = basis[j].clone();
                    axpy(&mut basis[i], -q, &bj)?;
                    changed = true;
                }
            }
        }
    }
    Ok(())
}

/// `Ã = A₁×{e₁} ∪ … ∪ A_k×{e_k} ⊂ Z^{n+k}`.
pub fn cayley_set(blocks: &[ExponentSet]) -> Result<ExponentSet, LatticeError> {
    let first = blocks.first().ok_or(LatticeError::NoBlocks)?;
    let n = first.dimension();
    let k = blocks.len();
    let mut members = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        if block.dimension() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: block.dimension(),
            });
        }
        let mut tail = vec![0i64; k];
        tail[i] = 1;
        members.extend(block.members().iter().map(|m| m.concat(&tail)));
    }
    ExponentSet::new(n + k, members)
}

/// All bases of `set`, in lexicographic order of index tuples.
pub fn enumerate_bases(set: &ExponentSet) -> Vec<Base> {
    let n = set.dimension();
    if set.len() < n {
        return Vec::new();
    }
    (0..set.len())
        .combinations(n)
        .filter_map(|idx| Base::new(set, idx).ok())
        .collect()
}

fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

// Gauss-Jordan inversion over the rationals; `None` when singular.
fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let da = &f * &a[col][j];
                let di = &f * &inv[col][j];
                a[r][j] -= da;
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

fn rank_of(mut a: Vec<Vec<Rational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[rank][col];
            for j in col..cols {
                let d = &f * &a[rank][j];
                a[r][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact determinant of a square rational matrix.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for j in col..n {
                let d = &f * &a[col][j];
                a[r][j] -= d;
            }
        }
    }
    det
}

/// Applies `Σ_j l^j ω_j` for a candidate coordinate vector; exact.
pub fn recombine(base: &Base, coords: &RationalVector) -> Vec<Rational> {
    let n = base.parent.dimension();
    let mut out = vec![Rational::zero(); n];
    for (l, w) in coords.0.iter().zip(base.vectors()) {
        for (o, &e) in out.iter_mut().zip(w.entries()) {
            *o += l * rat(e);
        }
    }
    out
}

impl LatticeRelation {
    /// Sum of absolute values; used for ordering and reporting.
    pub fn l1_norm(&self) -> i64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for LatticeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficients.iter().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn set2(rows: &[&[i64]]) -> ExponentSet {
        ExponentSet::from_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn exponent_set_rejects_bad_members() {
        assert_eq!(
            ExponentSet::univariate(&[1, 1]),
            Err(LatticeError::DuplicateMember("1".into()))
        );
        assert!(matches!(
            ExponentSet::univariate(&[-1]),
            Err(LatticeError::NegativeExponent(_))
        ));
        assert!(matches!(
            ExponentSet::from_rows(2, &[&[1, 0], &[1]]),
            Err(LatticeError::DimensionMismatch { .. })
        ));
        assert_eq!(ExponentSet::new(0, vec![]), Err(LatticeError::ZeroDimension));
    }

    #[test]
    fn graded_lex_order() {
        let a = ExponentVector::new(vec![2, 0]);
        let b = ExponentVector::new(vec![0, 3]);
        let c = ExponentVector::new(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn base_coords_standard_basis() {
        let a = set2(&[&[1, 0], &[0, 1]]);
        let b = Base::new(&a, vec![0, 1]).unwrap();
        let l = base_coords(&b, &ExponentVector::new(vec![2, 3])).unwrap();
        assert_eq!(l.0, vec![rat(2), rat(3)]);
    }

    #[test]
    fn base_coords_non_unimodular() {
        let a = set2(&[&[1, 0], &[1, 2]]);
        let b = Base::new(&a, vec![0, 1]).unwrap();
        let l = base_coords(&b, &ExponentVector::new(vec![2, 2])).unwrap();
        assert_eq!(l.0, vec![rat(1), rat(1)]);
        let l = base_coords(&b, &ExponentVector::new(vec![0, 1])).unwrap();
        assert_eq!(l.0, vec![ratio(-1, 2), ratio(1, 2)]);
    }

    #[test]
    fn base_coords_of_base_members_are_unit_vectors() {
        let a = set2(&[&[2, 1], &[1, 3], &[0, 1]]);
        let b = Base::new(&a, vec![0, 1]).unwrap();
        for (j, w) in b.vectors().enumerate() {
            let l = base_coords(&b, w).unwrap();
            for (i, x) in l.0.iter().enumerate() {
                assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn base_coords_dimension_mismatch() {
        let a = ExponentSet::univariate(&[1, 2]).unwrap();
        let b = Base::new(&a, vec![0]).unwrap();
        assert!(matches!(
            base_coords(&b, &ExponentVector::new(vec![1, 1])),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_base_rejected() {
        let a = set2(&[&[1, 1], &[2, 2]]);
        assert_eq!(Base::new(&a, vec![0, 1]), Err(LatticeError::Singular(vec![0, 1])));
        assert!(matches!(
            Base::new(&a, vec![0, 0]),
            Err(LatticeError::BadBaseSize { .. })
        ));
    }

    #[test]
    fn kernel_trivial_for_independent_columns() {
        let a = set2(&[&[1, 0], &[0, 1]]);
        assert!(kernel_basis(&a, false).unwrap().is_empty());
    }

    #[test]
    fn kernel_homogeneous_one_two_three() {
        let a = ExponentSet::univariate(&[1, 2, 3]).unwrap();
        let k = kernel_basis(&a, true).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].coefficients(), &[1, -2, 1]);
        assert!(k[0].is_homogeneous());
    }

    #[test]
    fn relation_parts_and_negation() {
        let a = ExponentSet::univariate(&[1, 2]).unwrap();
        let r = LatticeRelation::new(&a, vec![2, -1], false).unwrap();
        assert_eq!(r.positive_part(), vec![2, 0]);
        assert_eq!(r.negative_part(), vec![0, 1]);
        assert_eq!(r.negated().coefficients(), &[-2, 1]);
        assert!(LatticeRelation::new(&a, vec![1, 1], false).is_err());
        assert!(LatticeRelation::new(&a, vec![0, 0], false).is_err());
    }

    #[test]
    fn cayley_set_examples() {
        let a1 = ExponentSet::univariate(&[0, 1, 2]).unwrap();
        let t = cayley_set(&[a1]).unwrap();
        assert_eq!(t, set2(&[&[0, 1], &[1, 1], &[2, 1]]));

        let a1 = ExponentSet::univariate(&[0, 1]).unwrap();
        let a2 = ExponentSet::univariate(&[2]).unwrap();
        let t = cayley_set(&[a1, a2]).unwrap();
        assert_eq!(t, set2(&[&[0, 1, 0], &[1, 1, 0], &[2, 0, 1]]));

        let a1 = set2(&[&[0, 0]]);
        assert_eq!(cayley_set(&[a1]).unwrap(), set2(&[&[0, 0, 1]]));
    }

    #[test]
    fn cayley_set_errors() {
        assert_eq!(cayley_set(&[]), Err(LatticeError::NoBlocks));
        let a1 = ExponentSet::univariate(&[0]).unwrap();
        let a2 = set2(&[&[0, 1]]);
        assert!(matches!(
            cayley_set(&[a1, a2]),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumerate_bases_examples() {
        let a = ExponentSet::univariate(&[1, 2]).unwrap();
        let bases = enumerate_bases(&a);
        assert_eq!(
            bases.iter().map(|b| b.indices().to_vec()).collect::<Vec<_>>(),
            vec![vec![0], vec![1]]
        );
        let a = set2(&[&[1, 0], &[0, 1], &[1, 1]]);
        let bases = enumerate_bases(&a);
        assert_eq!(
            bases.iter().map(|b| b.indices().to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert!(enumerate_bases(&set2(&[&[1, 1], &[2, 2]])).is_empty());
        assert!(enumerate_bases(&set2(&[&[1, 1]])).is_empty());
    }

    #[test]
    fn zero_exponent_is_not_a_base() {
        let a = ExponentSet::univariate(&[0, 3]).unwrap();
        let bases = enumerate_bases(&a);
        assert_eq!(bases.len(), 1);
        assert_eq!(bases[0].indices(), &[1]);
    }

    #[test]
    fn determinant_matches_hand_value() {
        let m = vec![vec![rat(2), rat(0)], vec![rat(1), rat(1)]];
        assert_eq!(determinant(m), rat(2));
        let m = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(determinant(m), rat(0));
    }

    #[test]
    fn rank_counts_independent_columns() {
        assert_eq!(set2(&[&[1, 1], &[2, 2]]).rank(), 1);
        assert_eq!(ExponentSet::univariate(&[1, 2, 3]).unwrap().rank(), 1);
        assert_eq!(set2(&[&[1, 0], &[0, 1], &[1, 1]]).rank(), 2);
    }
}

//! Numerical cross-checks: finite-difference residuals of the coefficient
//! systems against functions computed by quadrature, series or root
//! continuation.

mod checks;
mod functions;

use std::collections::HashMap;
use std::fmt;

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::LatticeError;
use crate::operator::{CoefficientSpace, DiffOperator, OperatorError};
use crate::polynomial::PolynomialError;
use crate::quadrature::QuadratureError;
use crate::scalar::{lift, lower, Real, Scalar};
use crate::series::SeriesError;

pub use checks::{
    check_cayley_consistency, check_cayley_consistency_with_euler, check_gg_system,
    check_gg_system_with_euler, check_jacobian_case, check_root_theorems,
    series_vs_oracle, CayleyProblem, CheckOutcome, JacobianProblem, JacobianReport,
    PointComparison, RootOutcome, RootProblem, RootQuantity, SeriesComparison,
};
pub use functions::{ClosureFunction, CoeffLayout, QuadratureFunction, RootFunction, SeriesFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("evaluation failed at {point}: {source}")]
    AtPoint {
        point: String,
        source: Box<VerifyError>,
    },
    #[error("root collision: |P'(x)| = {derivative:e} at x = {root}")]
    RootCollision { root: Complex64, derivative: f64 },
    #[error("Newton iteration did not converge from x = {0}")]
    Newton(Complex64),
    #[error("linear part of the system is singular")]
    SingularSystem,
    #[error("no comparison point has a small enough series tail")]
    NoUsablePoints,
}

impl VerifyError {
    /// Whether the failure is numerical (divergence, accuracy, poles) rather
    /// than a malformed problem.
    pub fn is_numeric(&self) -> bool {
        match self {
            VerifyError::Quadrature(e) => matches!(
                e,
                QuadratureError::Divergence { .. }
                    | QuadratureError::Accuracy { .. }
                    | QuadratureError::Vanishing { .. }
                    | QuadratureError::EndpointSingularity { .. }
                    | QuadratureError::BranchTracking { .. }
            ),
            VerifyError::Series(e) => matches!(e, SeriesError::Pole(_) | SeriesError::ZeroBase { .. }),
            VerifyError::AtPoint { source, .. } => source.is_numeric(),
            VerifyError::RootCollision { .. }
            | VerifyError::Newton(_)
            | VerifyError::SingularSystem
            | VerifyError::NoUsablePoints => true,
            _ => false,
        }
    }
}

/// A function of the coefficient variables, in the order of its space.
pub trait CoeffFunction<F: Real>: Sync {
    fn dimension(&self) -> usize;

    fn evaluate(&self, c: &[Complex<F>]) -> Result<Complex<F>, VerifyError>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdOptions {
    /// Step per variable is `step · max(1, |c|)`.
    pub step: f64,
    /// Richardson levels on top of the plain central differences.
    pub richardson: u32,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            step: 1e-4,
            richardson: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub fd: FdOptions,
    /// Relative tolerance of the quadrature behind the checked function.
    pub quad_tol: f64,
    /// Pass threshold for the relative residual.
    pub tolerance: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            fd: FdOptions::default(),
            quad_tol: 1e-12,
            tolerance: 1e-6,
        }
    }
}

/// An operator applied by finite differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdEstimate<F> {
    pub value: Complex<F>,
    /// The function at the center.
    pub function_value: Complex<F>,
    /// Largest magnitude among the operator's terms.
    pub largest_term: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub operator: String,
    pub center: Vec<Complex64>,
    pub step: f64,
    pub residual: Complex64,
    pub value: Complex64,
    pub largest_term: f64,
    pub relative: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Known term subtracted from the operator's value before comparison.
    pub correction: Option<Complex64>,
}

impl ResidualReport {
    fn new<F: Real>(
        operator: String,
        center: &[Complex<F>],
        step: f64,
        estimate: &FdEstimate<F>,
        correction: Option<Complex64>,
        tolerance: f64,
    ) -> Self {
        let residual = lower(estimate.value) - correction.unwrap_or_default();
        let value = lower(estimate.function_value);
        let scale = value.norm().max(estimate.largest_term);
        let relative = if scale > 0.0 {
            residual.norm() / scale
        } else {
            residual.norm()
        };
        ResidualReport {
            operator,
            center: center.iter().map(|c| lower(*c)).collect(),
            step,
            residual,
            value,
            largest_term: estimate.largest_term,
            relative,
            tolerance,
            passed: relative < tolerance,
            correction,
        }
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<40} relative {:.3e} (tol {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.operator,
            self.relative,
            self.tolerance
        )
    }
}

// 1-D central stencil of order r as (offset in steps, weight); the
// denominator is (2h)^r for odd r and h^r for even r
fn stencil(r: u32) -> Vec<(i64, i64)> {
    let binom = |k: u32| (0..k).fold(1i64, |acc, i| acc * (r - i) as i64 / (i + 1) as i64);
    (0..=r)
        .map(|k| {
            let offset = if r % 2 == 0 {
                r as i64 / 2 - k as i64
            } else {
                r as i64 - 2 * k as i64
            };
            let sign = if k % 2 == 0 { 1 } else { -1 };
            (offset, sign * binom(k))
        })
        .collect()
}

struct Term<F> {
    scalar: Complex<F>,
    derivative: Vec<(usize, u32)>,
}

/// Applies `op` to `f` at `center` by tensor-product central differences,
/// second order in the step, followed by `options.richardson` Richardson
/// levels.
pub fn fd_apply<S: Scalar, F: Real>(
    op: &DiffOperator<S>,
    space: &CoefficientSpace,
    f: &dyn CoeffFunction<F>,
    center: &[Complex<F>],
    options: &FdOptions,
) -> Result<FdEstimate<F>, VerifyError> {
    let dim = space.vars().len();
    if f.dimension() != dim || center.len() != dim {
        return Err(VerifyError::Dimension {
            what: "coefficient values",
            expected: dim,
            found: if f.dimension() != dim {
                f.dimension()
            } else {
                center.len()
            },
        });
    }
    let index = |v| {
        space
            .index_of(v)
            .ok_or_else(|| OperatorError::VariableMismatch(v.name(space.show_blocks())))
    };
    let mut terms = Vec::new();
    for (key, s) in op.numeric().terms() {
        let mut scalar: Complex<F> = lift(s.to_c64());
        for (v, &p) in &key.prefactor {
            let c = center[index(v)?];
            for _ in 0..p {
                scalar = scalar * c;
            }
        }
        let derivative = key
            .derivative
            .iter()
            .map(|(v, &r)| Ok((index(v)?, r)))
            .collect::<Result<Vec<_>, VerifyError>>()?;
        terms.push(Term { scalar, derivative });
    }

    let levels = options.richardson;
    let steps: Vec<f64> = center
        .iter()
        .map(|c| options.step * c.norm().to_f64().max(1.0))
        .collect();
    let units: Vec<F> = steps
        .iter()
        .map(|&h| F::from_f64(h) * F::from_f64(0.5f64.powi(levels as i32)))
        .collect();

    // stencil points as integer offsets in units of h / 2^levels
    let mut plans: Vec<Vec<Vec<(Vec<i64>, i64)>>> = Vec::new();
    let mut points: Vec<Vec<i64>> = vec![vec![0; dim]];
    for level in 0..=levels {
        let scale = 1i64 << (levels - level);
        let mut level_plans = Vec::new();
        for term in &terms {
            let mut combos: Vec<(Vec<i64>, i64)> = vec![(vec![0; dim], 1)];
            for &(v, r) in &term.derivative {
                let step_scale = scale;
                let mut next = Vec::new();
                for (off, w) in &combos {
                    for (o, sw) in stencil(r) {
                        let mut off = off.clone();
                        off[v] += o * step_scale;
                        next.push((off, w * sw));
                    }
                }
                combos = next;
            }
            points.extend(combos.iter().map(|(o, _)| o.clone()));
            level_plans.push(combos);
        }
        plans.push(level_plans);
    }
    points.sort();
    points.dedup();
    let at = |off: &[i64]| -> Vec<Complex<F>> {
        center
            .iter()
            .zip(off)
            .zip(&units)
            .map(|((c, &o), &u)| *c + Complex::new(u * F::from_f64(o as f64), F::zero()))
            .collect()
    };
    let values: HashMap<Vec<i64>, Complex<F>> = points
        .par_iter()
        .map(|off| {
            let c = at(off);
            f.evaluate(&c)
                .map(|v| (off.clone(), v))
                .map_err(|e| VerifyError::AtPoint {
                    point: render_point(&c),
                    source: Box::new(e),
                })
        })
        .collect::<Result<_, _>>()?;

    let mut table: Vec<Complex<F>> = Vec::new();
    let mut largest_term = 0.0f64;
    for (level, level_plans) in plans.iter().enumerate() {
        let mut total = Complex::new(F::zero(), F::zero());
        for (term, combos) in terms.iter().zip(level_plans) {
            let mut sum = Complex::new(F::zero(), F::zero());
            for (off, w) in combos {
                sum = sum + values[off] * F::from_f64(*w as f64);
            }
            let mut denominator = F::one();
            for &(v, r) in &term.derivative {
                let h = F::from_f64(steps[v]) * F::from_f64(0.5f64.powi(level as i32));
                let h = if r % 2 == 1 { h * F::from_f64(2.0) } else { h };
                for _ in 0..r {
                    denominator = denominator * h;
                }
            }
            let inverse = F::one().div_r(denominator);
            let contribution = term.scalar * sum * inverse;
            if level as u32 == levels {
                largest_term = largest_term.max(lower(contribution).norm());
            }
            total = total + contribution;
        }
        table.push(total);
    }
    // Richardson: errors are even in h
    for k in 1..=levels as usize {
        let factor = F::from_f64(4f64.powi(k as i32));
        let divisor = factor - F::one();
        for l in (k..table.len()).rev() {
            let improved = table[l] * factor - table[l - 1];
            table[l] = Complex::new(improved.re.div_r(divisor), improved.im.div_r(divisor));
        }
    }
    Ok(FdEstimate {
        value: *table.last().expect("at least one level"),
        function_value: values[&vec![0; dim]],
        largest_term,
    })
}

fn render_point<F: Real>(c: &[Complex<F>]) -> String {
    let parts: Vec<String> = c.iter().map(|z| crate::scalar::render_c64(lower(*z))).collect();
    format!("({})", parts.join(", "))
}

/// Residual report for one operator.
pub fn residual_report<S: Scalar, F: Real>(
    op: &DiffOperator<S>,
    space: &CoefficientSpace,
    f: &dyn CoeffFunction<F>,
    center: &[Complex<F>],
    options: &CheckOptions,
    correction: Option<Complex64>,
) -> Result<ResidualReport, VerifyError> {
    let estimate = fd_apply(op, space, f, center, &options.fd)?;
    Ok(ResidualReport::new(
        op.to_string(),
        center,
        options.fd.step,
        &estimate,
        correction,
        options.tolerance,
    ))
}


#[cfg(test)]
mod tests;

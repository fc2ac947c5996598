use num_complex::{Complex, Complex64};

use super::functions::{QuadratureFunction, RootFunction, SeriesFunction};
use super::{residual_report, CheckOptions, CoeffFunction, ResidualReport, VerifyError};
use crate::lattice::{ExponentSet, ExponentVector};
use crate::operator::{operator_system, CoefficientSpace, OperatorKind, OperatorSystem};
use crate::polynomial::SparsePolynomial;
use crate::quadrature::{Alpha, IntegrandSpec, ProductContour};
use crate::scalar::{lift, Real, Scalar};
use crate::series::{evaluate_series, GammaSeries};

/// Residual reports plus notes on what was skipped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckOutcome {
    pub reports: Vec<ResidualReport>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

fn lifted<F: Real>(c: &[Complex64]) -> Vec<Complex<F>> {
    c.iter().map(|z| lift(*z)).collect()
}

// principal power, with 0^s = 0 for Re s > 0
fn power(base: Complex64, exponent: Complex64) -> Option<Complex64> {
    if base.norm() == 0.0 {
        return (exponent.re > 0.0).then_some(Complex64::new(0.0, 0.0));
    }
    Some((exponent * base.ln()).exp())
}

/// `[t^u e^{P} ∏P_i^{v_i}]` from the start to the end of a one-variable
/// contour: the value of the `t`-Euler operator on the integral, which is
/// zero only when the contour has no finite ends. Principal branches are
/// used at the ends. `None` when the term cannot be formed.
fn euler_boundary(spec: &IntegrandSpec, contour: &ProductContour) -> Option<Complex64> {
    let chains = contour.chains();
    let finite = |chain: &crate::quadrature::ContourChain| {
        let legs = chain.legs();
        (legs[0].traversal_ends().0, legs[legs.len() - 1].traversal_ends().1)
    };
    if chains.iter().all(|c| finite(c) == (None, None)) {
        return Some(Complex64::new(0.0, 0.0));
    }
    if chains.len() != 1 {
        return None;
    }
    let (start, end) = finite(&chains[0]);
    let (v, u, polys): (&[Complex64], &[Complex64], &[SparsePolynomial<Complex64>]) = match &spec.alpha {
        Alpha::One => (&[], &[], &[]),
        Alpha::Monomial { u } => (&[], u, &[]),
        Alpha::PowerProduct { polys, v, u } => (v, u, polys),
    };
    let u = u.first().copied().unwrap_or(Complex64::new(1.0, 0.0));
    if start.is_some() && start == end {
        let integral = |z: Complex64| z.im == 0.0 && z.re.fract() == 0.0;
        return (integral(u) && v.iter().all(|&z| integral(z))).then_some(Complex64::new(0.0, 0.0));
    }
    let value = |t: Complex64| -> Option<Complex64> {
        let mut out = power(t, u)? * spec.kernel.evaluate(&[t]).ok()?.exp();
        for (p, &vi) in polys.iter().zip(v) {
            out *= power(p.evaluate(&[t]).ok()?, vi)?;
        }
        Some(out)
    };
    let mut total = Complex64::new(0.0, 0.0);
    if let Some(b) = end {
        total += value(b)?;
    }
    if let Some(a) = start {
        total -= value(a)?;
    }
    Some(total)
}

fn run_system<F: Real>(
    system: OperatorSystem<Complex64>,
    space: &CoefficientSpace,
    f: &dyn CoeffFunction<F>,
    center: &[Complex64],
    options: &CheckOptions,
    euler_t_correction: impl Fn(usize) -> Result<Option<Complex64>, String>,
) -> Result<CheckOutcome, VerifyError> {
    let center_f = lifted::<F>(center);
    let mut outcome = CheckOutcome {
        reports: Vec::new(),
        notes: system.warnings,
    };
    for entry in &system.operators {
        let correction = match entry.kind {
            OperatorKind::EulerT(j) => match euler_t_correction(j) {
                Ok(c) => c,
                Err(note) => {
                    outcome.notes.push(format!("{} skipped: {note}", entry.operator));
                    continue;
                }
            },
            _ => None,
        };
        outcome.reports.push(residual_report(
            &entry.operator,
            space,
            f,
            &center_f,
            options,
            correction,
        )?);
    }
    Ok(outcome)
}

fn boundary_correction(
    spec: &IntegrandSpec,
    contour: &ProductContour,
) -> impl Fn(usize) -> Result<Option<Complex64>, String> {
    let boundary = euler_boundary(spec, contour);
    move |_| match boundary {
        Some(b) if b == Complex64::new(0.0, 0.0) => Ok(None),
        Some(b) => Ok(Some(b)),
        None => Err("boundary terms at finite contour ends are not available".into()),
    }
}

/// Relation, box and Euler residuals of the GG-function
/// `∮ e^{Σ c_ω t^ω} t^{u−1} dt`, computed in precision `F`.
pub fn check_gg_system<F: Real>(
    set: &ExponentSet,
    u: &[Complex64],
    contour: &ProductContour,
    center: &[Complex64],
    options: &CheckOptions,
) -> Result<CheckOutcome, VerifyError> {
    check_gg_system_with_euler::<F>(set, u, u, contour, center, options)
}

/// [`check_gg_system`] with the Euler operators built from `euler_u`
/// instead of the integrand's `u`; a mismatch must show up as a failure.
pub fn check_gg_system_with_euler<F: Real>(
    set: &ExponentSet,
    u: &[Complex64],
    euler_u: &[Complex64],
    contour: &ProductContour,
    center: &[Complex64],
    options: &CheckOptions,
) -> Result<CheckOutcome, VerifyError> {
    let space = CoefficientSpace::single(set.clone());
    let system = operator_system(&space, euler_u, &[])?;
    let f = QuadratureFunction::<F>::gg(set.clone(), u.to_vec(), contour.clone(), center, options.quad_tol)?;
    let correction = boundary_correction(f.spec(), contour);
    run_system(system, &space, &f, center, options, correction)
}

/// A generalized Euler integral `∮ ∏ P_i^{v_i} t^{u−1} dt` with the
/// coefficients of `P_i` on `blocks[i]`, flattened block after block.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyProblem {
    pub blocks: Vec<ExponentSet>,
    pub coefficients: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub u: Vec<Complex64>,
    pub contour: ProductContour,
}

/// Residuals of the Cayley-space system on the Euler integral.
pub fn check_cayley_consistency<F: Real>(
    problem: &CayleyProblem,
    options: &CheckOptions,
) -> Result<CheckOutcome, VerifyError> {
    check_cayley_consistency_with_euler::<F>(problem, &problem.u, &problem.v, options)
}

/// [`check_cayley_consistency`] with the Euler operators built from
/// `euler_u` and `euler_v`.
pub fn check_cayley_consistency_with_euler<F: Real>(
    problem: &CayleyProblem,
    euler_u: &[Complex64],
    euler_v: &[Complex64],
    options: &CheckOptions,
) -> Result<CheckOutcome, VerifyError> {
    let space = CoefficientSpace::cayley(problem.blocks.clone())?;
    let system = operator_system(&space, euler_u, euler_v)?;
    let f = QuadratureFunction::<F>::euler(
        problem.blocks.clone(),
        problem.v.clone(),
        problem.u.clone(),
        problem.contour.clone(),
        &problem.coefficients,
        options.quad_tol,
    )?;
    let correction = boundary_correction(f.spec(), &problem.contour);
    run_system(system, &space, &f, &problem.coefficients, options, correction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootQuantity {
    /// `γ(x)`.
    Gamma,
    /// `γ(x)/P'(x)`.
    GammaOverDerivative,
}

/// A simple root `x` of `P₀(t) = y₀` followed as the coefficients of
/// `P₀ − y₀` vary, and a quantity built from `γ(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootProblem {
    pub polynomial: SparsePolynomial<Complex64>,
    pub y0: Complex64,
    pub guess: Complex64,
    pub gamma: SparsePolynomial<Complex64>,
    pub quantity: RootQuantity,
}

impl RootProblem {
    /// Exponents of `P₀ − y₀` (the support with the constant added) and the
    /// coefficients there.
    pub fn coefficient_data(&self) -> Result<(ExponentSet, Vec<Complex64>), VerifyError> {
        let mut members: Vec<ExponentVector> = self.polynomial.terms().map(|(w, _)| w.clone()).collect();
        let zero = ExponentVector::zero(1);
        if !members.contains(&zero) {
            members.insert(0, zero.clone());
        }
        let set = ExponentSet::new(1, members)?;
        let values = set
            .members()
            .iter()
            .map(|w| {
                let c = self.polynomial.coefficient(w);
                if *w == zero {
                    c - self.y0
                } else {
                    c
                }
            })
            .collect();
        Ok((set, values))
    }

    /// Euler parameters `(v, u)` of the quantity when `γ = t^k`: scaling the
    /// coefficients leaves the root fixed and scales `P'` by the same
    /// factor; scaling `t` moves the root.
    pub fn euler_parameters(&self) -> Option<(Complex64, Complex64)> {
        if self.gamma.len() != 1 {
            return None;
        }
        let (w, _) = self.gamma.terms().next()?;
        let k = w.entries()[0] as f64;
        Some(match self.quantity {
            RootQuantity::Gamma => (Complex64::new(0.0, 0.0), Complex64::new(k, 0.0)),
            RootQuantity::GammaOverDerivative => (Complex64::new(-1.0, 0.0), Complex64::new(k + 1.0, 0.0)),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootOutcome {
    pub root: Complex64,
    pub check: CheckOutcome,
}

/// Residuals of the one-polynomial Cayley system on the root quantity. The
/// box and relation operators need no parameters; the Euler operators are
/// included when `γ` is a monomial.
pub fn check_root_theorems(problem: &RootProblem, options: &CheckOptions) -> Result<RootOutcome, VerifyError> {
    let (set, center) = problem.coefficient_data()?;
    let f = RootFunction::new(
        set.clone(),
        center.clone(),
        problem.guess,
        problem.gamma.clone(),
        problem.quantity == RootQuantity::GammaOverDerivative,
    )?;
    let space = CoefficientSpace::cayley(vec![set])?;
    let params = problem.euler_parameters();
    let (v, u) = params.unwrap_or_default();
    let mut system = operator_system(&space, &[u], &[v])?;
    if params.is_none() {
        system
            .operators
            .retain(|o| !matches!(o.kind, OperatorKind::EulerT(_) | OperatorKind::EulerY(_)));
        system
            .warnings
            .push("Euler operators skipped: gamma is not a monomial".into());
    }
    let check = run_system(system, &space, &f, &center, options, |_| Ok(None))?;
    Ok(RootOutcome {
        root: f.center_root(),
        check,
    })
}

/// Affine-linear system `L t + b = 0` and a polynomial `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianProblem {
    pub matrix: Vec<Vec<Complex64>>,
    pub offset: Vec<Complex64>,
    pub gamma: SparsePolynomial<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianReport {
    pub solution: Vec<Complex64>,
    pub jacobian: Complex64,
    /// `γ(x)/det L`.
    pub quantity: Complex64,
    pub check: CheckOutcome,
}

// solution of L x = −b and det L, by elimination with partial pivoting
fn solve_affine(matrix: &[Vec<Complex64>], offset: &[Complex64]) -> Result<(Vec<Complex64>, Complex64), VerifyError> {
    let n = offset.len();
    let scale = matrix
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let mut a: Vec<Vec<Complex64>> = matrix
        .iter()
        .zip(offset)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(-b);
            r
        })
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty range");
        if a[pivot][col].norm() <= 1e-14 * scale {
            return Err(VerifyError::SingularSystem);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..=n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = a[row][n];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok((x, det))
}

/// `γ(x)/det L` at the solution of an affine system, with residuals of the
/// Cayley system (Euler parameters `v_i = −1` and `u = 1 + m` for
/// `γ = t^m`) on its coefficient dependence.
pub fn check_jacobian_case(problem: &JacobianProblem, options: &CheckOptions) -> Result<JacobianReport, VerifyError> {
    let n = problem.offset.len();
    if problem.matrix.len() != n || problem.matrix.iter().any(|r| r.len() != n) {
        return Err(VerifyError::Dimension {
            what: "rows of the linear system",
            expected: n,
            found: problem.matrix.len(),
        });
    }
    if problem.gamma.dimension() != n {
        return Err(VerifyError::Dimension {
            what: "variables of gamma",
            expected: n,
            found: problem.gamma.dimension(),
        });
    }
    let mut members = vec![ExponentVector::zero(n)];
    members.extend((0..n).map(|j| ExponentVector::unit(n, j)));
    let set = ExponentSet::new(n, members)?;
    let blocks = vec![set.clone(); n];
    let space = CoefficientSpace::cayley(blocks)?;

    // flat coefficients, block by block in set order
    let flatten = |matrix: &[Vec<Complex64>], offset: &[Complex64]| -> Vec<Complex64> {
        let mut c = Vec::new();
        for i in 0..n {
            for w in set.members() {
                c.push(match w.entries().iter().position(|&e| e == 1) {
                    None => offset[i],
                    Some(j) => matrix[i][j],
                });
            }
        }
        c
    };
    let unflatten = |c: &[Complex64]| -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
        let mut matrix = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        let mut offset = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            for (m, w) in set.members().iter().enumerate() {
                let value = c[i * (n + 1) + m];
                match w.entries().iter().position(|&e| e == 1) {
                    None => offset[i] = value,
                    Some(j) => matrix[i][j] = value,
                }
            }
        }
        (matrix, offset)
    };
    let quantity = |c: &[Complex64]| -> Result<(Vec<Complex64>, Complex64, Complex64), VerifyError> {
        let (matrix, offset) = unflatten(c);
        let (x, det) = solve_affine(&matrix, &offset)?;
        let g = problem.gamma.evaluate(&x)?;
        Ok((x, det, g / det))
    };
    struct Quantity<Q>(usize, Q);
    impl<Q> CoeffFunction<f64> for Quantity<Q>
    where
        Q: Fn(&[Complex64]) -> Result<(Vec<Complex64>, Complex64, Complex64), VerifyError> + Sync,
    {
        fn dimension(&self) -> usize {
            self.0
        }
        fn evaluate(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
            (self.1)(c).map(|(_, _, q)| q)
        }
    }

    let center = flatten(&problem.matrix, &problem.offset);
    let (solution, jacobian, value) = quantity(&center)?;
    let monomial = (problem.gamma.len() == 1)
        .then(|| problem.gamma.terms().next().map(|(w, _)| w.clone()))
        .flatten();
    let u: Vec<Complex64> = (0..n)
        .map(|j| {
            Complex64::new(1.0 + monomial.as_ref().map_or(0, |w| w.entries()[j]) as f64, 0.0)
        })
        .collect();
    let v = vec![Complex64::new(-1.0, 0.0); n];
    let mut system = operator_system(&space, &u, &v)?;
    if monomial.is_none() {
        system.operators.retain(|o| !matches!(o.kind, OperatorKind::EulerT(_)));
        system
            .warnings
            .push("t-Euler operators skipped: gamma is not a monomial".into());
    }
    let f = Quantity(center.len(), quantity);
    let check = run_system(system, &space, &f, &center, options, |_| Ok(None))?;
    Ok(JacobianReport {
        solution,
        jacobian,
        quantity: value,
        check,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointComparison {
    pub point: Vec<Complex64>,
    pub series: Complex64,
    pub oracle: Complex64,
    /// Relative tail estimate of the series.
    pub tail: f64,
    /// `|κ·series − oracle| / |oracle|`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesComparison {
    /// `oracle / series` at the first usable point.
    pub kappa: Complex64,
    pub points: Vec<PointComparison>,
    /// Points left out, with the reason.
    pub skipped: Vec<(usize, String)>,
    /// Largest deviation over the points after the fitting point.
    pub max_deviation: f64,
    /// Largest relative change of `κ` when refitted at another point.
    pub kappa_spread: f64,
}

/// Compares a truncated series with an oracle after fitting one constant.
/// Points whose relative tail estimate exceeds `tail_limit` are skipped.
pub fn series_vs_oracle<S: Scalar>(
    series: &GammaSeries<S>,
    oracle: &dyn CoeffFunction<f64>,
    points: &[Vec<Complex64>],
    tail_limit: f64,
) -> Result<SeriesComparison, VerifyError> {
    let sum = SeriesFunction::new(series);
    let mut usable = Vec::new();
    let mut skipped = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let value = match evaluate_series(series, p) {
            Ok(v) => v,
            Err(e) => {
                skipped.push((i, e.to_string()));
                continue;
            }
        };
        let tail = if value.value.norm() > 0.0 {
            value.tail / value.value.norm()
        } else {
            value.tail
        };
        if tail > tail_limit {
            skipped.push((i, format!("relative tail {tail:.2e} exceeds {tail_limit:.1e}")));
            continue;
        }
        debug_assert_eq!(sum.evaluate(p)?, value.value);
        usable.push((p.clone(), value.value, tail, oracle.evaluate(p)?));
    }
    let Some(first) = usable.first() else {
        return Err(VerifyError::NoUsablePoints);
    };
    let kappa = first.3 / first.1;
    let mut comparisons = Vec::new();
    let mut max_deviation = 0.0f64;
    let mut kappa_spread = 0.0f64;
    for (k, (point, s, tail, o)) in usable.into_iter().enumerate() {
        let deviation = (kappa * s - o).norm() / o.norm();
        if k > 0 {
            max_deviation = max_deviation.max(deviation);
            kappa_spread = kappa_spread.max(((o / s) - kappa).norm() / kappa.norm());
        }
        comparisons.push(PointComparison {
            point,
            series: s,
            oracle: o,
            tail,
            deviation,
        });
    }
    Ok(SeriesComparison {
        kappa,
        points: comparisons,
        skipped,
        max_deviation,
        kappa_spread,
    })
}

use std::fmt::Write as _;
use std::sync::Arc;

use hypint_core::lattice::{ExponentSet, ExponentVector};
use hypint_core::operator::{operator_system, CoefficientSpace, OperatorKind};
use hypint_core::quadrature::{euler_integral_eval, gg_eval, MomentOracle, ProductContour, DEFAULT_TOL};
use hypint_core::scalar::{render_c64, render_rational, Scalar};
use hypint_core::series::{evaluate_series, gg_gamma_series, standard_expansion, CoefficientOracle, GammaSeries};
use hypint_core::verify::{
    check_cayley_consistency_with_euler, check_gg_system_with_euler, check_jacobian_case, check_root_theorems,
    series_vs_oracle, CayleyProblem, CheckOptions, CheckOutcome, CoeffFunction, FdOptions, JacobianProblem,
    RootProblem, RootQuantity, VerifyError,
};
use hypint_core::{Complex64, DoubleDouble, Rational, SparsePolynomial};

use crate::problem::{CheckSpec, Expansion, Monomial, Param, Precision, ProblemFile, RootQuantityName, C};
use crate::report::{
    CommandEcho, ComparisonEntry, NamedValue, OperatorEntry, PointEntry, ReportFile, ResidualEntry, SeriesDump,
    TermEntry,
};
use crate::CliError;

pub const DEFAULT_ORDER: u32 = 8;
const DEFAULT_TAIL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    System,
    Series,
    Eval,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::System => "system",
            Command::Series => "series",
            Command::Eval => "eval",
            Command::Verify => "verify",
        }
    }
}

/// Command-line overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Options {
    pub order: Option<u32>,
    /// Quadrature tolerance for `eval` and `series`, residual threshold for
    /// `verify`.
    pub tol: Option<f64>,
    pub base: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: ReportFile,
    /// Human-readable summary for stdout.
    pub text: String,
}

impl Outcome {
    /// 0 unless a verification ran and failed.
    pub fn exit_code(&self) -> i32 {
        match self.report.passed {
            Some(false) => 1,
            _ => 0,
        }
    }
}

pub fn run(command: Command, problem: &ProblemFile, source: &str, options: &Options) -> Result<Outcome, CliError> {
    let echo = CommandEcho {
        name: command.name().into(),
        problem: source.into(),
        order: options.order,
        tol: options.tol,
        base: options.base.clone(),
    };
    let mut report = ReportFile::new(echo);
    let mut text = String::new();
    match command {
        Command::System => system(problem, &mut report, &mut text)?,
        Command::Series => series(problem, options, &mut report, &mut text)?,
        Command::Eval => eval(problem, options, &mut report, &mut text)?,
        Command::Verify => verify(problem, options, &mut report, &mut text)?,
    }
    for note in &report.notes {
        writeln!(text, "note: {note}").unwrap();
    }
    Ok(Outcome { report, text })
}

fn space_of(problem: &ProblemFile) -> Result<CoefficientSpace, CliError> {
    let sets = problem.sets()?;
    if problem.blocks == 0 {
        Ok(CoefficientSpace::single(sets[0].clone()))
    } else {
        CoefficientSpace::cayley(sets).map_err(|e| CliError::Input(format!("field `exponents`: {e}")))
    }
}

fn kind_name(kind: OperatorKind) -> String {
    match kind {
        OperatorKind::Relation => "relation".into(),
        OperatorKind::Box => "box".into(),
        OperatorKind::EulerT(j) => format!("euler-t{}", j + 1),
        OperatorKind::EulerY(i) => format!("euler-y{}", i + 1),
    }
}

fn system(problem: &ProblemFile, report: &mut ReportFile, text: &mut String) -> Result<(), CliError> {
    let space = space_of(problem)?;
    // parameter values only matter numerically; they render by name
    let v = if problem.v.is_empty() {
        vec![Complex64::new(0.0, 0.0); problem.blocks]
    } else {
        problem.v_values()?
    };
    let system = operator_system(&space, &problem.u_values(), &v).map_err(|e| CliError::Input(e.to_string()))?;
    for entry in &system.operators {
        let line = entry.operator.to_string();
        writeln!(text, "{line}").unwrap();
        report.operators.push(OperatorEntry {
            kind: kind_name(entry.kind),
            text: line,
        });
    }
    report.notes.extend(system.warnings);
    Ok(())
}

fn exact_param(r: &Rational) -> Param {
    Param::Exact(r.clone())
}

fn complex_param(z: &Complex64) -> Param {
    Param::Complex((*z).into())
}

fn dump_gamma<S: Scalar>(
    series: &GammaSeries<S>,
    base: Vec<usize>,
    to_param: impl Fn(&S) -> Param,
) -> SeriesDump {
    let layout = series.layout();
    let space = layout.space();
    let terms = series
        .terms()
        .map(|(key, coeff)| TermEntry {
            powers: key.powers.clone(),
            exponents: series
                .gamma_arguments(key)
                .unwrap_or_default()
                .iter()
                .map(&to_param)
                .collect(),
            coefficient: to_param(coeff),
            flag: series.is_pole(key).then(|| "POLE".to_string()),
        })
        .collect();
    let base_names: Vec<String> = layout.base_vars().iter().map(|&i| space.var_name(i)).collect();
    SeriesDump {
        provenance: "gamma".into(),
        description: format!("coefficient * prod a^m * prod Gamma(rho)(-a)^(-rho) over base {}", base_names.join(", ")),
        base: Some(base),
        variables: layout.series_vars().iter().map(|&i| space.var_name(i)).collect(),
        order: series.order(),
        terms,
    }
}

fn render_param(p: &Param) -> String {
    match p {
        Param::Exact(r) => render_rational(r),
        Param::Complex(c) => render_c64((*c).into()),
    }
}

fn term_lines(dump: &SeriesDump, text: &mut String) {
    writeln!(
        text,
        "{} series to order {} in {}",
        dump.provenance,
        dump.order,
        if dump.variables.is_empty() { "(none)".to_string() } else { dump.variables.join(", ") }
    )
    .unwrap();
    for t in &dump.terms {
        let powers: Vec<String> = t.powers.iter().map(u32::to_string).collect();
        write!(text, "[{}] {}", powers.join(","), render_param(&t.coefficient)).unwrap();
        if !t.exponents.is_empty() {
            let rho: Vec<String> = t.exponents.iter().map(render_param).collect();
            write!(text, " rho ({})", rho.join(", ")).unwrap();
        }
        if let Some(flag) = &t.flag {
            write!(text, " {flag}").unwrap();
        }
        text.push('\n');
    }
}

/// GG-function values by quadrature as an oracle.
struct GgOracle<'a> {
    set: &'a ExponentSet,
    u: Vec<Complex64>,
    contour: &'a ProductContour,
    tol: f64,
}

impl CoeffFunction<f64> for GgOracle<'_> {
    fn dimension(&self) -> usize {
        self.set.len()
    }

    fn evaluate(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
        Ok(gg_eval(self.set, c, &self.u, self.contour, self.tol)?.value)
    }
}

fn series(problem: &ProblemFile, options: &Options, report: &mut ReportFile, text: &mut String) -> Result<(), CliError> {
    if problem.blocks != 0 {
        return Err(CliError::Input(
            "field `blocks`: series expansions need a single exponent set (blocks = 0)".into(),
        ));
    }
    let set = problem.sets()?.remove(0);
    let space = CoefficientSpace::single(set.clone());
    let order = options.order.or(problem.order).unwrap_or(DEFAULT_ORDER);
    let quad_tol = options.tol.or(problem.tolerances.quad).unwrap_or(DEFAULT_TOL);
    match problem.expansion.unwrap_or(Expansion::Gamma) {
        Expansion::Gamma => {
            let base = problem.base(&set, options.base.as_deref())?;
            let indices = base.indices().to_vec();
            let numeric = gg_gamma_series(space.clone(), base.clone(), &problem.u_values(), order)
                .map_err(CliError::from_series)?;
            let dump = match problem.u_exact() {
                Some(u) => {
                    let exact = gg_gamma_series(space, base, &u, order).map_err(CliError::from_series)?;
                    dump_gamma(&exact, indices, exact_param)
                }
                None => dump_gamma(&numeric, indices, complex_param),
            };
            if !problem.coefficients.is_empty() {
                sum_at_coefficients(&numeric, problem, report)?;
            }
            term_lines(&dump, text);
            report.series = Some(dump);
            if !problem.points.is_empty() {
                compare_at_points(&numeric, &set, problem, quad_tol, report, text)?;
            }
        }
        Expansion::Standard => {
            let kernel = problem.polynomials()?.remove(0);
            let oracle = Arc::new(
                MomentOracle::new(set.clone(), kernel, problem.u_values(), problem.contour()?, quad_tol)
                    .map_err(CliError::from_quadrature)?,
            );
            let s = standard_expansion(space.clone(), oracle.clone(), order).map_err(CliError::from_series)?;
            let terms = s
                .terms()
                .map(|(key, weight)| {
                    let moment = oracle
                        .coefficient(&key.powers, &[])
                        .map_err(|m| CliError::Numeric(format!("moment {:?}: {m}", key.powers)))?;
                    Ok(TermEntry {
                        powers: key.powers.clone(),
                        exponents: Vec::new(),
                        coefficient: complex_param(&(weight * moment)),
                        flag: None,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let dump = SeriesDump {
                provenance: "oracle".into(),
                description: format!("coefficient * prod a^m, a = c - c0, {}", oracle.describe()),
                base: None,
                variables: (0..space.vars().len()).map(|i| space.var_name(i)).collect(),
                order,
                terms,
            };
            term_lines(&dump, text);
            report.series = Some(dump);
            for (i, p) in problem.points.iter().enumerate() {
                let a: Vec<Complex64> = p.iter().map(|&c| c.into()).collect();
                let v = evaluate_series(&s, &a).map_err(CliError::from_series)?;
                writeln!(text, "sum at point {i}: {} (tail {:.3e})", render_c64(v.value), v.tail).unwrap();
                report.values.push(NamedValue {
                    name: format!("sum at point {i}"),
                    value: v.value.into(),
                    error: Some(v.tail),
                });
            }
        }
    }
    Ok(())
}

fn compare_at_points(
    series: &GammaSeries<Complex64>,
    set: &ExponentSet,
    problem: &ProblemFile,
    quad_tol: f64,
    report: &mut ReportFile,
    text: &mut String,
) -> Result<(), CliError> {
    let contour = problem.contour()?;
    let oracle = GgOracle {
        set,
        u: problem.u_values(),
        contour: &contour,
        tol: quad_tol,
    };
    let points: Vec<Vec<Complex64>> = problem
        .points
        .iter()
        .map(|p| p.iter().map(|&c| c.into()).collect())
        .collect();
    let tail = problem.tolerances.tail.unwrap_or(DEFAULT_TAIL);
    let cmp = series_vs_oracle(series, &oracle, &points, tail).map_err(CliError::from_verify)?;
    for (i, reason) in &cmp.skipped {
        report.notes.push(format!("point {i} skipped: {reason}"));
    }
    writeln!(
        text,
        "kappa {}  max deviation {:.3e}  kappa spread {:.3e}",
        render_c64(cmp.kappa),
        cmp.max_deviation,
        cmp.kappa_spread
    )
    .unwrap();
    report.comparison = Some(ComparisonEntry {
        kappa: cmp.kappa.into(),
        max_deviation: cmp.max_deviation,
        kappa_spread: cmp.kappa_spread,
        points: cmp
            .points
            .iter()
            .map(|p| PointEntry {
                point: p.point.iter().map(|&z| z.into()).collect(),
                series: p.series.into(),
                oracle: p.oracle.into(),
                tail: p.tail,
                deviation: p.deviation,
            })
            .collect(),
    });
    Ok(())
}

fn sum_at_coefficients<S: Scalar>(
    series: &GammaSeries<S>,
    problem: &ProblemFile,
    report: &mut ReportFile,
) -> Result<(), CliError> {
    let c = problem.coefficient_values()?;
    match evaluate_series(series, &c) {
        Ok(v) => report.values.push(NamedValue {
            name: "sum".into(),
            value: v.value.into(),
            error: Some(v.tail),
        }),
        Err(e) => report.notes.push(format!("sum not evaluated: {e}")),
    }
    Ok(())
}

fn eval(problem: &ProblemFile, options: &Options, report: &mut ReportFile, text: &mut String) -> Result<(), CliError> {
    let contour = problem.contour()?;
    let tol = options.tol.or(problem.tolerances.quad).unwrap_or(DEFAULT_TOL);
    let u = problem.u_values();
    let value = if problem.blocks == 0 {
        let set = problem.sets()?.remove(0);
        gg_eval(&set, &problem.coefficient_values()?, &u, &contour, tol)
    } else {
        euler_integral_eval(&problem.polynomials()?, &problem.v_values()?, &u, &contour, tol)
    }
    .map_err(CliError::from_quadrature)?;
    writeln!(text, "integral {}  error {:.3e}", render_c64(value.value), value.error).unwrap();
    report.values.push(NamedValue {
        name: "integral".into(),
        value: value.value.into(),
        error: Some(value.error),
    });
    Ok(())
}

fn check_options(problem: &ProblemFile, options: &Options) -> CheckOptions {
    let defaults = CheckOptions::default();
    let t = &problem.tolerances;
    CheckOptions {
        fd: FdOptions {
            step: t.step.unwrap_or(defaults.fd.step),
            richardson: t.richardson.unwrap_or(defaults.fd.richardson),
        },
        quad_tol: t.quad.unwrap_or(defaults.quad_tol),
        tolerance: options.tol.or(t.residual).unwrap_or(defaults.tolerance),
    }
}

fn gamma_polynomial(monomials: &[Monomial], dimension: usize) -> Result<SparsePolynomial<Complex64>, CliError> {
    SparsePolynomial::from_terms(
        dimension,
        monomials
            .iter()
            .map(|m| (ExponentVector::new(m.exponent.clone()), Complex64::from(m.coefficient))),
    )
    .map_err(|e| CliError::Input(format!("field `check.gamma`: {e}")))
}

fn verify(problem: &ProblemFile, options: &Options, report: &mut ReportFile, text: &mut String) -> Result<(), CliError> {
    let check_options = check_options(problem, options);
    let double = problem.precision.unwrap_or(Precision::Double) == Precision::Double;
    let default_check = if problem.blocks == 0 { CheckSpec::Gg } else { CheckSpec::Cayley };
    let outcome: CheckOutcome = match problem.check.clone().unwrap_or(default_check) {
        CheckSpec::Gg => {
            if problem.blocks != 0 {
                return Err(CliError::Input("field `check`: the GG-system needs blocks = 0".into()));
            }
            let set = problem.sets()?.remove(0);
            let (u, euler_u) = (problem.u_values(), problem.euler_u_values());
            let (contour, center) = (problem.contour()?, problem.coefficient_values()?);
            if double {
                check_gg_system_with_euler::<f64>(&set, &u, &euler_u, &contour, &center, &check_options)
            } else {
                check_gg_system_with_euler::<DoubleDouble>(&set, &u, &euler_u, &contour, &center, &check_options)
            }
            .map_err(CliError::from_verify)?
        }
        CheckSpec::Cayley => {
            if problem.blocks == 0 {
                return Err(CliError::Input("field `check`: the Cayley system needs blocks >= 1".into()));
            }
            let cayley = CayleyProblem {
                blocks: problem.sets()?,
                coefficients: problem.coefficient_values()?,
                v: problem.v_values()?,
                u: problem.u_values(),
                contour: problem.contour()?,
            };
            let (eu, ev) = (problem.euler_u_values(), problem.euler_v_values()?);
            if double {
                check_cayley_consistency_with_euler::<f64>(&cayley, &eu, &ev, &check_options)
            } else {
                check_cayley_consistency_with_euler::<DoubleDouble>(&cayley, &eu, &ev, &check_options)
            }
            .map_err(CliError::from_verify)?
        }
        CheckSpec::Root {
            y0,
            guess,
            gamma,
            quantity,
        } => {
            if problem.blocks != 1 || problem.dimension != 1 {
                return Err(CliError::Input(
                    "field `check`: root checks need one block in one variable".into(),
                ));
            }
            let root = RootProblem {
                polynomial: problem.polynomials()?.remove(0),
                y0: y0.into(),
                guess: guess.into(),
                gamma: gamma_polynomial(&gamma, 1)?,
                quantity: match quantity {
                    RootQuantityName::Gamma => RootQuantity::Gamma,
                    RootQuantityName::GammaOverDerivative => RootQuantity::GammaOverDerivative,
                },
            };
            let out = check_root_theorems(&root, &check_options).map_err(CliError::from_verify)?;
            push_value(report, text, "root", out.root);
            out.check
        }
        CheckSpec::Jacobian { gamma } => {
            let (matrix, offset) = affine_system(problem)?;
            let jac = JacobianProblem {
                matrix,
                offset,
                gamma: gamma_polynomial(&gamma, problem.dimension)?,
            };
            let out = check_jacobian_case(&jac, &check_options).map_err(CliError::from_verify)?;
            for (j, x) in out.solution.iter().enumerate() {
                push_value(report, text, &format!("x{}", j + 1), *x);
            }
            push_value(report, text, "jacobian", out.jacobian);
            push_value(report, text, "quantity", out.quantity);
            out.check
        }
    };
    for r in &outcome.reports {
        writeln!(text, "{r}").unwrap();
        report.residuals.push(ResidualEntry::from(r));
    }
    let passed = outcome.all_passed();
    let failed = outcome.reports.iter().filter(|r| !r.passed).count();
    writeln!(
        text,
        "{}: {} of {} residuals within tolerance",
        if passed { "PASS" } else { "FAIL" },
        outcome.reports.len() - failed,
        outcome.reports.len()
    )
    .unwrap();
    report.notes.extend(outcome.notes);
    report.passed = Some(passed);
    Ok(())
}

fn push_value(report: &mut ReportFile, text: &mut String, name: &str, z: Complex64) {
    writeln!(text, "{name} {}", render_c64(z)).unwrap();
    report.values.push(NamedValue {
        name: name.into(),
        value: C::from(z),
        error: None,
    });
}

/// Reads `L t + b` from `n` blocks, each over `{0, e_1, …, e_n}`.
fn affine_system(problem: &ProblemFile) -> Result<(Vec<Vec<Complex64>>, Vec<Complex64>), CliError> {
    let n = problem.dimension;
    if problem.blocks != n {
        return Err(CliError::Input(format!(
            "field `blocks`: the Jacobian case needs one affine polynomial per variable ({n})"
        )));
    }
    let values = problem.coefficient_values()?;
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut offset = vec![Complex64::new(0.0, 0.0); n];
    let mut k = 0;
    for (i, rows) in problem.exponents.iter().enumerate() {
        if rows.len() != n + 1 {
            return Err(CliError::Input(format!(
                "field `exponents[{i}]`: an affine polynomial needs the {} exponents 0, e_1, …, e_n",
                n + 1
            )));
        }
        for row in rows {
            match (row.iter().sum::<i64>(), row.iter().position(|&e| e == 1)) {
                (0, _) => offset[i] = values[k],
                (1, Some(j)) => matrix[i][j] = values[k],
                _ => {
                    return Err(CliError::Input(format!(
                        "field `exponents[{i}]`: exponent {row:?} is not affine-linear"
                    )))
                }
            }
            k += 1;
        }
    }
    Ok((matrix, offset))
}

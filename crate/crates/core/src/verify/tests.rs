use std::f64::consts::{LN_2, PI};

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use super::*;
use crate::lattice::{ExponentSet, ExponentVector};
use crate::operator::{euler_t_operator, gg_relation_operator, operator_system, OperatorKind, VarPowers};
use crate::polynomial::SparsePolynomial;
use crate::quadrature::{BranchDatum, ContourChain, ContourLeg, FactorId, ProductContour};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn uni(e: &[i64]) -> ExponentSet {
    ExponentSet::univariate(e).unwrap()
}

fn simple(leg: ContourLeg) -> ProductContour {
    ProductContour::simple(ContourChain::single(leg).unwrap())
}

fn gaussian_closed_form(z: &[Complex64]) -> Complex64 {
    // ∫ e^{c1 t + c2 t²} dt over the real line
    (Complex64::new(PI, 0.0) / -z[1]).sqrt() * (-z[0] * z[0] / (z[1] * 4.0)).exp()
}

#[test]
fn first_derivative_of_a_quadratic_is_exact() {
    let space = CoefficientSpace::single(uni(&[1]));
    let mut powers = VarPowers::new();
    powers.insert(space.vars()[0].clone(), 1);
    let op = DiffOperator::<Complex64>::derivative(powers, false);
    let f = ClosureFunction::new(1, |z: &[Complex64]| z[0] * z[0]);
    let est = fd_apply(&op, &space, &f, &[c(1.0)], &FdOptions::default()).unwrap();
    assert!((est.value - c(2.0)).norm() < 1e-7, "{est:?}");
}

#[test]
fn euler_operator_on_the_gaussian_closed_form() {
    let space = CoefficientSpace::single(uni(&[1, 2]));
    let op = euler_t_operator(&space, 0, c(1.0)).unwrap();
    assert_eq!(op.to_string(), "c1*D[c1] + 2*c2*D[c2] + u1");
    let f = ClosureFunction::new(2, |z: &[Complex64]| (Complex64::new(PI, 0.0) / -z[1]).sqrt());
    let est = fd_apply(&op, &space, &f, &[c(0.0), c(-1.0)], &FdOptions::default()).unwrap();
    assert!(est.value.norm() < 1e-6, "{est:?}");
}

#[test]
fn closed_form_gaussian_passes_the_whole_system() {
    let space = CoefficientSpace::single(uni(&[1, 2]));
    let system = operator_system(&space, &[c(1.0)], &[]).unwrap();
    let rendered: Vec<String> = system.operators.iter().map(|o| o.operator.to_string()).collect();
    assert_eq!(rendered, ["D[c2] - D[c1]^2", "c1*D[c1] + 2*c2*D[c2] + u1"]);
    let f = ClosureFunction::new(2, |z: &[Complex64]| gaussian_closed_form(z));
    let options = CheckOptions::default();
    for o in &system.operators {
        let r = residual_report(&o.operator, &space, &f, &[c(0.3), c(-1.0)], &options, None).unwrap();
        assert!(r.passed, "{r}");
    }
}

#[test]
fn heat_relation_on_quadrature() {
    let set = uni(&[1, 2]);
    let space = CoefficientSpace::single(set.clone());
    let center = [c(0.3), c(-1.0)];
    let f = QuadratureFunction::<f64>::gg(set, vec![c(1.0)], simple(ContourLeg::line(0.0)), &center, 1e-12)
        .unwrap();
    let expected = gaussian_closed_form(&center);
    assert!((f.center_value().value - expected).norm() < 1e-10 * expected.norm());
    let op = gg_relation_operator::<Complex64>(&space, 0, &ExponentVector::new(vec![2])).unwrap();
    let options = CheckOptions {
        fd: FdOptions {
            step: 1e-3,
            richardson: 0,
        },
        tolerance: 1e-4,
        ..CheckOptions::default()
    };
    let r = residual_report(&op, &space, &f, &center, &options, None).unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn gg_system_of_the_gaussian() {
    let options = CheckOptions {
        tolerance: 1e-4,
        ..CheckOptions::default()
    };
    let out = check_gg_system::<f64>(
        &uni(&[1, 2]),
        &[c(1.0)],
        &simple(ContourLeg::line(0.0)),
        &[c(0.3), c(-1.0)],
        &options,
    )
    .unwrap();
    assert_eq!(out.reports.len(), 2);
    assert!(out.all_passed(), "{:?}", out.reports);
}

#[test]
fn gg_system_in_double_double() {
    let options = CheckOptions {
        fd: FdOptions {
            step: 1e-4,
            richardson: 0,
        },
        tolerance: 1e-4,
        ..CheckOptions::default()
    };
    let out = check_gg_system::<TwoFloat>(
        &uni(&[1, 2]),
        &[c(1.0)],
        &simple(ContourLeg::line(0.0)),
        &[c(0.3), c(-1.0)],
        &options,
    )
    .unwrap();
    assert!(out.all_passed(), "{:?}", out.reports);
}

#[test]
fn gg_system_of_a_cubic_on_a_damped_chain() {
    let chain = ContourChain::new(vec![
        ContourLeg::ray(c(0.0), 2.0 * PI / 3.0).reversed(),
        ContourLeg::ray(c(0.0), 0.0),
    ])
    .unwrap();
    let options = CheckOptions {
        tolerance: 1e-3,
        ..CheckOptions::default()
    };
    let out = check_gg_system::<f64>(
        &uni(&[1, 2, 3]),
        &[c(1.0)],
        &ProductContour::simple(chain),
        &[c(0.2), c(0.0), c(-1.0)],
        &options,
    )
    .unwrap();
    // relations for c2 and c3, box operators not already among them, Euler
    assert!(out.reports.len() >= 3);
    assert!(out.all_passed(), "{:?}", out.reports);
}

#[test]
fn gamma_integral_euler_operator_with_a_finite_end() {
    let out = check_gg_system::<f64>(
        &uni(&[1]),
        &[c(1.0)],
        &simple(ContourLeg::ray(c(0.0), 0.0)),
        &[c(-1.0)],
        &CheckOptions::default(),
    )
    .unwrap();
    assert_eq!(out.reports.len(), 1, "no box operators for a single exponent");
    assert!(out.reports[0].relative < 1e-6, "{}", out.reports[0]);
    assert!(out.reports[0].correction.is_none(), "t^u vanishes at 0");
}

#[test]
fn cayley_system_of_the_2f1_kernel() {
    let problem = CayleyProblem {
        blocks: vec![uni(&[0, 1])],
        coefficients: vec![c(1.0), c(-0.5)],
        v: vec![c(-1.0)],
        u: vec![c(1.0)],
        contour: simple(ContourLeg::segment(c(0.0), c(1.0))),
    };
    let options = CheckOptions {
        tolerance: 1e-5,
        ..CheckOptions::default()
    };
    let f = QuadratureFunction::<f64>::euler(
        problem.blocks.clone(),
        problem.v.clone(),
        problem.u.clone(),
        problem.contour.clone(),
        &problem.coefficients,
        1e-12,
    )
    .unwrap();
    // ∫₀¹ dt/(1 − t/2) = 2 ln 2
    assert!((f.center_value().value - c(2.0 * LN_2)).norm() < 1e-11);
    let out = check_cayley_consistency::<f64>(&problem, &options).unwrap();
    assert!(out.all_passed(), "{:?}", out.reports);
    let euler_t = out
        .reports
        .iter()
        .find(|r| r.operator.ends_with("+ u1"))
        .unwrap();
    // the end t = 1 contributes 1/P(1) = 2
    assert!((euler_t.correction.unwrap() - c(2.0)).norm() < 1e-14);
}

#[test]
fn cayley_mixed_partial_of_a_polynomial_integrand() {
    let problem = CayleyProblem {
        blocks: vec![uni(&[0, 1, 2])],
        coefficients: vec![c(1.0), c(0.5), c(-0.3)],
        v: vec![c(1.0)],
        u: vec![c(1.0)],
        contour: simple(ContourLeg::segment(c(0.0), c(1.0))),
    };
    let options = CheckOptions {
        tolerance: 1e-4,
        ..CheckOptions::default()
    };
    let out = check_cayley_consistency::<f64>(&problem, &options).unwrap();
    let mixed = out
        .reports
        .iter()
        .find(|r| r.operator == "D[c0]*D[c2] - D[c1]^2")
        .unwrap();
    assert!(mixed.passed, "{mixed}");
    assert!(out.all_passed(), "{:?}", out.reports);
}

#[test]
fn cayley_constant_polynomial_is_a_pure_power() {
    let problem = CayleyProblem {
        blocks: vec![uni(&[0])],
        coefficients: vec![c(1.7)],
        v: vec![c(0.7)],
        u: vec![c(1.0)],
        contour: simple(ContourLeg::segment(c(0.0), c(1.0))).with_branch(BranchDatum {
            factor: FactorId::P(0),
            arg: 0.0,
        }),
    };
    let options = CheckOptions {
        tolerance: 1e-8,
        ..CheckOptions::default()
    };
    let out = check_cayley_consistency::<f64>(&problem, &options).unwrap();
    assert_eq!(out.reports.len(), 2);
    for r in &out.reports {
        assert!(r.passed, "{r}");
        assert!((r.value - c(1.7f64.powf(0.7))).norm() < 1e-12);
    }
}

// implicit differentiation of c0 + c1 x + c2 x² = 0
fn root_second_derivatives(cs: [f64; 3], x: f64) -> (f64, f64) {
    let [_, c1, c2] = cs;
    let dp = c1 + 2.0 * c2 * x;
    let x0 = -1.0 / dp;
    let x1 = -x / dp;
    let d02 = -(2.0 * x * x0 * dp - x * x * 2.0 * c2 * x0) / (dp * dp);
    let d11 = -(x1 * dp - x * (1.0 + 2.0 * c2 * x1)) / (dp * dp);
    (d02, d11)
}

#[test]
fn root_of_a_quadratic_and_its_mixed_partials() {
    let problem = RootProblem {
        polynomial: SparsePolynomial::univariate(&[(1, c(1.0)), (2, c(0.1))]).unwrap(),
        y0: c(1.0),
        guess: c(1.0),
        gamma: SparsePolynomial::univariate(&[(1, c(1.0))]).unwrap(),
        quantity: RootQuantity::Gamma,
    };
    let quadratic = (-1.0 + 1.4f64.sqrt()) / 0.2;
    let coarse = CheckOptions {
        fd: FdOptions {
            step: 1e-3,
            richardson: 0,
        },
        tolerance: 1e-3,
        ..CheckOptions::default()
    };
    let out = check_root_theorems(&problem, &coarse).unwrap();
    assert!((out.root.re - quadratic).abs() < 1e-12 && out.root.im == 0.0);
    assert!((quadratic - 0.916_079_783_1).abs() < 1e-10);
    let (d02, d11) = root_second_derivatives([-1.0, 1.0, 0.1], quadratic);
    assert!((d02 - d11).abs() < 1e-12 * d11.abs());
    let mixed = |out: &RootOutcome| {
        out.check
            .reports
            .iter()
            .find(|r| r.operator == "D[c0]*D[c2] - D[c1]^2")
            .unwrap()
            .clone()
    };
    let r1 = mixed(&out);
    assert!(r1.passed, "{r1}");
    assert!(out.check.all_passed(), "{:?}", out.check.reports);
    let fine = CheckOptions {
        fd: FdOptions {
            step: 5e-4,
            richardson: 0,
        },
        ..coarse
    };
    let r2 = mixed(&check_root_theorems(&problem, &fine).unwrap());
    assert!(r2.relative < r1.relative, "{r1} vs {r2}");
}

#[test]
fn root_quantity_over_derivative_satisfies_its_euler_operators() {
    let problem = RootProblem {
        polynomial: SparsePolynomial::univariate(&[(1, c(1.0)), (3, c(0.2))]).unwrap(),
        y0: c(0.5),
        guess: c(0.5),
        gamma: SparsePolynomial::univariate(&[(2, c(1.0))]).unwrap(),
        quantity: RootQuantity::GammaOverDerivative,
    };
    assert_eq!(problem.euler_parameters(), Some((c(-1.0), c(3.0))));
    // a third-order stencil needs a larger step to stay clear of rounding
    let options = CheckOptions {
        fd: FdOptions {
            step: 2e-3,
            richardson: 1,
        },
        ..CheckOptions::default()
    };
    let out = check_root_theorems(&problem, &options).unwrap();
    // one relation (also the only box operator) and two Euler operators
    assert_eq!(out.check.reports.len(), 3, "{:?}", out.check.reports);
    assert!(out.check.all_passed(), "{:?}", out.check.reports);
}

#[test]
fn linear_root_sanity_value() {
    let f = RootFunction::new(
        uni(&[0, 1]),
        vec![c(-1.0), c(2.0)],
        c(1.0),
        SparsePolynomial::univariate(&[(2, c(1.0))]).unwrap(),
        false,
    )
    .unwrap();
    let v = CoeffFunction::<f64>::evaluate(&f, &[c(-1.0), c(2.0)]).unwrap();
    assert!((v - c(0.25)).norm() < 1e-15);
}

#[test]
fn root_collision_is_reported() {
    // t² − 1 at its double root region: P'(0) = 0
    let f = RootFunction::new(
        uni(&[0, 2]),
        vec![c(0.0), c(1.0)],
        c(0.0),
        SparsePolynomial::univariate(&[(1, c(1.0))]).unwrap(),
        false,
    );
    assert!(matches!(f, Err(VerifyError::RootCollision { .. })));
}

#[test]
fn jacobian_examples() {
    let one = SparsePolynomial::from_terms(2, [(ExponentVector::zero(2), c(1.0))]).unwrap();
    let diagonal = JacobianProblem {
        matrix: vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        offset: vec![c(-1.0), c(-2.0)],
        gamma: one.clone(),
    };
    let r = check_jacobian_case(&diagonal, &CheckOptions::default()).unwrap();
    assert_eq!(r.solution, vec![c(1.0), c(2.0)]);
    assert_eq!(r.jacobian, c(1.0));
    assert_eq!(r.quantity, c(1.0));

    let skew = JacobianProblem {
        matrix: vec![vec![c(2.0), c(0.0)], vec![c(1.0), c(1.0)]],
        offset: vec![c(-2.0), c(-3.0)],
        gamma: one.clone(),
    };
    let r = check_jacobian_case(&skew, &CheckOptions::default()).unwrap();
    assert!((r.jacobian - c(2.0)).norm() < 1e-15);
    assert!((r.quantity - c(0.5)).norm() < 1e-15);
    assert!(r.check.all_passed(), "{:?}", r.check.reports);
    let euler_y: Vec<_> = r
        .check
        .reports
        .iter()
        .filter(|x| x.operator.ends_with("- v1") || x.operator.ends_with("- v2"))
        .collect();
    assert_eq!(euler_y.len(), 2);

    // scaling the first row scales the quantity by 1/s
    let s = 3.0;
    let scaled = JacobianProblem {
        matrix: vec![vec![c(2.0 * s), c(0.0)], skew.matrix[1].clone()],
        offset: vec![c(-2.0 * s), c(-3.0)],
        gamma: one,
    };
    let r2 = check_jacobian_case(&scaled, &CheckOptions::default()).unwrap();
    assert!((r2.quantity - r.quantity / s).norm() < 1e-15);
}

#[test]
fn singular_linear_part_is_an_error() {
    let p = JacobianProblem {
        matrix: vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]],
        offset: vec![c(1.0), c(1.0)],
        gamma: SparsePolynomial::from_terms(2, [(ExponentVector::zero(2), c(1.0))]).unwrap(),
    };
    assert_eq!(
        check_jacobian_case(&p, &CheckOptions::default()).unwrap_err(),
        VerifyError::SingularSystem
    );
}

#[test]
fn evaluation_failures_name_the_point() {
    struct Failing;
    impl CoeffFunction<f64> for Failing {
        fn dimension(&self) -> usize {
            1
        }
        fn evaluate(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
            if c[0].re > 1.0 {
                Err(VerifyError::NoUsablePoints)
            } else {
                Ok(c[0])
            }
        }
    }
    let space = CoefficientSpace::single(uni(&[1]));
    let op = euler_t_operator(&space, 0, c(1.0)).unwrap();
    let err = fd_apply(&op, &space, &Failing, &[c(1.0)], &FdOptions::default()).unwrap_err();
    assert!(matches!(err, VerifyError::AtPoint { .. }));
    assert!(err.to_string().starts_with("evaluation failed at (1.0000"), "{err}");
}

#[test]
fn operator_kinds_of_a_cayley_system() {
    let space = CoefficientSpace::cayley(vec![uni(&[0, 1, 2])]).unwrap();
    let system = operator_system(&space, &[c(1.0)], &[c(-1.0)]).unwrap();
    let kinds: Vec<OperatorKind> = system.operators.iter().map(|o| o.kind).collect();
    assert_eq!(kinds, [OperatorKind::Relation, OperatorKind::EulerT(0), OperatorKind::EulerY(0)]);
}

#[test]
fn richardson_removes_the_second_order_error() {
    let space = CoefficientSpace::single(uni(&[1]));
    let mut powers = VarPowers::new();
    powers.insert(space.vars()[0].clone(), 2);
    let op = DiffOperator::<Complex64>::derivative(powers, false);
    let f = ClosureFunction::new(1, |z: &[Complex<TwoFloat>]| {
        // e^z with z real
        Complex::new(crate::scalar::dd_exp(z[0].re), TwoFloat::from(0.0))
    });
    let center = [Complex::new(TwoFloat::from(0.5), TwoFloat::from(0.0))];
    let exact = 0.5f64.exp();
    let plain = fd_apply(&op, &space, &f, &center, &FdOptions { step: 1e-3, richardson: 0 }).unwrap();
    let improved = fd_apply(&op, &space, &f, &center, &FdOptions { step: 1e-3, richardson: 2 }).unwrap();
    let e0 = (f64::from(plain.value.re) - exact).abs();
    let e2 = (f64::from(improved.value.re) - exact).abs();
    assert!(e0 > 1e-8 && e2 < 1e-14, "{e0:e} {e2:e}");
}

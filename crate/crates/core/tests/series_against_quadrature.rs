use std::f64::consts::PI;
use std::sync::Arc;

use hypint_core::lattice::{enumerate_bases, kernel_basis, ExponentSet, ExponentVector};
use hypint_core::operator::{box_operator, euler_t_operator, gg_relation_operator, CoefficientSpace};
use hypint_core::quadrature::{gg_eval, MomentOracle, ProductContour, ContourChain, ContourLeg};
use hypint_core::scalar::{rat, ratio};
use hypint_core::series::{evaluate_series, gg_gamma_series, standard_expansion};
use hypint_core::verify::{series_vs_oracle, ClosureFunction};
use hypint_core::{Complex64, ExactOperator, Polynomial};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn simple(leg: ContourLeg) -> ProductContour {
    ProductContour::simple(ContourChain::single(leg).unwrap())
}

#[test]
fn gamma_series_matches_ray_quadrature_after_fitting_kappa() {
    let set = ExponentSet::univariate(&[1, 2]).unwrap();
    let space = CoefficientSpace::single(set.clone());
    let base = enumerate_bases(&set).into_iter().next().unwrap();
    assert_eq!(base.indices(), &[0]);
    let series = gg_gamma_series(space, base, &[c(1.0)], 12).unwrap();
    let ray = simple(ContourLeg::ray(c(0.0), 0.0));
    let oracle = ClosureFunction::new(2, |z: &[Complex64]| {
        gg_eval(&set, z, &[c(1.0)], &ray, 1e-13).unwrap().value
    });
    let points: Vec<Vec<Complex64>> = [(-1.0, -0.008), (-2.0, -0.02), (-3.0, -0.05), (-4.0, -0.1)]
        .iter()
        .map(|&(a, b)| vec![c(a), c(b)])
        .collect();
    let cmp = series_vs_oracle(&series, &oracle, &points, 1e-8).unwrap();
    assert!(cmp.skipped.is_empty(), "{:?}", cmp.skipped);
    assert!(cmp.max_deviation < 1e-6, "{cmp:?}");
    assert!(cmp.kappa_spread < 1e-6, "{cmp:?}");
    // the ray integral is exactly the Γ-series sum, so κ = 1
    assert!((cmp.kappa - 1.0).norm() < 1e-8, "{}", cmp.kappa);
}

#[test]
fn large_tails_are_skipped() {
    let set = ExponentSet::univariate(&[1, 2]).unwrap();
    let space = CoefficientSpace::single(set.clone());
    let base = enumerate_bases(&set).into_iter().next().unwrap();
    let series = gg_gamma_series(space, base, &[c(1.0)], 12).unwrap();
    let oracle = ClosureFunction::new(2, |_: &[Complex64]| c(1.0));
    let points = vec![vec![c(-1.0), c(-0.5)], vec![c(-1.0), c(-0.001)]];
    let cmp = series_vs_oracle(&series, &oracle, &points, 1e-8).unwrap();
    assert_eq!(cmp.skipped.len(), 1);
    assert_eq!(cmp.skipped[0].0, 0);
    assert_eq!(cmp.points.len(), 1);
}

#[test]
fn standard_expansion_of_a_shifted_gaussian() {
    let set = ExponentSet::univariate(&[1]).unwrap();
    let kernel = Polynomial::univariate(&[(2, c(-1.0))]).unwrap();
    let moments = MomentOracle::new(set.clone(), kernel, vec![c(1.0)], simple(ContourLeg::line(0.0)), 1e-12)
        .unwrap();
    let series = standard_expansion(CoefficientSpace::single(set), Arc::new(moments), 20).unwrap();
    for a in [0.0, 0.3, 0.6] {
        let v = evaluate_series(&series, &[c(a)]).unwrap();
        let exact = PI.sqrt() * (a * a / 4.0).exp();
        assert!((v.value - exact).norm() < 1e-8 * exact, "a={a}: {} vs {exact}", v.value);
    }
    // zero perturbation: only the zeroth moment survives
    let v = evaluate_series(&series, &[c(0.0)]).unwrap();
    assert!((v.value - PI.sqrt()).norm() < 1e-13);
}

#[test]
fn exact_annihilation_on_a_two_variable_set() {
    // A = {(1,0), (0,1), (2,0), (1,1), (0,2)}; every base, every relation
    let set = ExponentSet::from_rows(2, &[&[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]]).unwrap();
    let space = CoefficientSpace::single(set.clone());
    let u = [ratio(1, 2), ratio(2, 3)];
    let order = 4;
    for base in enumerate_bases(&set) {
        let series = gg_gamma_series(space.clone(), base.clone(), &u, order).unwrap();
        for rel in kernel_basis(&set, false).unwrap() {
            let op: ExactOperator = box_operator(&rel, &space).unwrap();
            let out = series.apply(&op).unwrap();
            assert_eq!(out.interior_terms().count(), 0, "base {:?}, {op}", base.indices());
            assert!(out.terms().all(|(k, _)| out.boundary().contains(k)));
        }
        for (j, uj) in u.iter().enumerate() {
            let op: ExactOperator = euler_t_operator(&space, j, uj.clone()).unwrap();
            assert!(series.apply(&op).unwrap().is_empty(), "base {:?}, {op}", base.indices());
        }
    }
}

#[test]
fn composition_agrees_with_sequential_application() {
    let set = ExponentSet::univariate(&[1, 2, 3]).unwrap();
    let space = CoefficientSpace::single(set.clone());
    let base = enumerate_bases(&set).into_iter().next().unwrap();
    let series = gg_gamma_series(space.clone(), base, &[ratio(1, 3)], 6).unwrap();
    let a: ExactOperator = euler_t_operator(&space, 0, rat(2)).unwrap();
    let b: ExactOperator = gg_relation_operator(&space, 0, &ExponentVector::new(vec![3])).unwrap();
    let composed = series.apply(&a.compose(&b)).unwrap();
    let sequential = series.apply(&b).unwrap().apply(&a).unwrap();
    for (key, coeff) in composed.interior_terms() {
        if sequential.boundary().contains(key) {
            continue;
        }
        assert_eq!(sequential.coefficient(key), Some(coeff), "{key:?}");
    }
    for (key, coeff) in sequential.interior_terms() {
        if !composed.boundary().contains(key) {
            assert_eq!(composed.coefficient(key), Some(coeff), "{key:?}");
        }
    }
}

//! Iterated adaptive integration over a product contour.

use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use rayon::prelude::*;

use super::branch::{BranchTable, TableError, VANISHING};
use super::contour::{ContourLeg, FactorId, ProductContour};
use super::rule::{self, RuleResult};
use super::{Alpha, IntegrandSpec, QuadValue, QuadratureError, MAX_DIMENSION};
use crate::polynomial::SparsePolynomial;
use crate::scalar::{lift, lower, Real};

const DECAY_THRESHOLD: f64 = -50.0;
const MAX_REACH: f64 = (1u64 << 30) as f64;
const MAX_INTERVALS: usize = 4000;
const INITIAL_PIECES: usize = 4;
const ABSOLUTE_FLOOR: f64 = 1e-14;
const ROUNDING_FACTOR: f64 = 200.0;

/// Outer partition of a finished adaptive run.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    reaches: Vec<f64>,
    gradings: Vec<Grading>,
    pieces: Vec<(usize, f64, f64)>,
}

impl Mesh {
    pub fn intervals(&self) -> usize {
        self.pieces.len()
    }
}

/// Substitution `τ = lo + (hi − lo) φ(s)` clustering nodes at ends where a
/// multivalued factor vanishes. Ungraded legs are integrated in `τ` itself.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Grading {
    None,
    Graded { lo: u32, hi: u32 },
}

impl Grading {
    /// Power making `x^{power(1+a)−1}` vanish at least linearly.
    fn power(a: Option<f64>) -> u32 {
        match a {
            None => 1,
            Some(a) => (2.0 / (1.0 + a).max(1e-3)).ceil().clamp(2.0, 30.0) as u32,
        }
    }

    fn new(lo_exponent: Option<f64>, hi_exponent: Option<f64>) -> Self {
        if lo_exponent.is_none() && hi_exponent.is_none() {
            Grading::None
        } else {
            Grading::Graded {
                lo: Self::power(lo_exponent),
                hi: Self::power(hi_exponent),
            }
        }
    }

    fn range(self, lo: f64, hi: f64) -> (f64, f64) {
        match self {
            Grading::None => (lo, hi),
            Grading::Graded { .. } => (0.0, 1.0),
        }
    }

    /// `(τ, dτ/dx)` at the integration variable `x`.
    fn map<F: Real>(self, lo: f64, hi: f64, x: F) -> (F, F) {
        let Grading::Graded { lo: p, hi: q } = self else {
            return (x, F::one());
        };
        let width = F::from_f64(hi - lo);
        let half = F::from_f64(0.5);
        let two = F::from_f64(2.0);
        // each half maps onto half of [lo, hi]
        if x <= half {
            let y = two * x;
            let phi = y.powi(p as i32) * half;
            let dphi = F::from_f64(p as f64) * y.powi(p as i32 - 1);
            (F::from_f64(lo) + width * phi, width * dphi)
        } else {
            let y = two * (F::one() - x);
            let phi = y.powi(q as i32) * half;
            let dphi = F::from_f64(q as f64) * y.powi(q as i32 - 1);
            (F::from_f64(hi) - width * phi, width * dphi)
        }
    }
}

struct Poly<F> {
    terms: Vec<(Vec<u32>, Complex<F>)>,
}

impl<F: Real> Poly<F> {
    fn new(p: &SparsePolynomial<Complex64>) -> Self {
        Poly {
            terms: p
                .terms()
                .map(|(w, c)| (w.entries().iter().map(|&e| e as u32).collect(), lift(*c)))
                .collect(),
        }
    }

    fn lifted(p: &SparsePolynomial<Complex<F>>) -> Self {
        Poly {
            terms: p
                .terms()
                .map(|(w, c)| (w.entries().iter().map(|&e| e as u32).collect(), *c))
                .collect(),
        }
    }

    fn eval(&self, t: &[Complex<F>]) -> Complex<F> {
        let mut sum = Complex::new(F::zero(), F::zero());
        for (exps, c) in &self.terms {
            let mut term = *c;
            for (x, &e) in t.iter().zip(exps) {
                term = term * ipow(*x, e as i32);
            }
            sum = sum + term;
        }
        sum
    }
}

fn ipow<F: Real>(x: Complex<F>, n: i32) -> Complex<F> {
    let mut result = Complex::new(F::one(), F::zero());
    let mut base = x;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            result = result * base;
        }
        base = base * base;
        k >>= 1;
    }
    if n < 0 {
        F::inv_c(result)
    } else {
        result
    }
}

enum Power {
    Zero,
    Integer(i32),
    General,
}

struct Factor<F> {
    id: FactorId,
    exponent: Complex<F>,
    exponent64: Complex64,
    power: Power,
}

impl<F: Real> Factor<F> {
    fn new(id: FactorId, exponent: Complex64) -> Self {
        let power = if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() < 1e9 {
            if exponent.re == 0.0 {
                Power::Zero
            } else {
                Power::Integer(exponent.re as i32)
            }
        } else {
            Power::General
        };
        Factor {
            id,
            exponent: lift(exponent),
            exponent64: exponent,
            power,
        }
    }

    /// Multivalued, or able to blow up where the factor vanishes.
    fn tracked(&self) -> bool {
        match self.power {
            Power::Zero => false,
            Power::Integer(k) => k < 0,
            Power::General => true,
        }
    }
}

pub(crate) struct Engine<F> {
    n: usize,
    contour: ProductContour,
    anchors: Vec<Complex64>,
    kernel: Poly<F>,
    polys: Vec<Poly<F>>,
    factors: Vec<Factor<F>>,
    // indices into `factors` of the tracked ones
    tracked: Vec<usize>,
}

#[derive(Clone, Copy)]
enum Mode<'m> {
    Adaptive,
    Frozen(&'m Mesh),
}

struct Piece<F> {
    leg: usize,
    a: F,
    b: F,
    result: RuleResult<F>,
}

impl<F: Real> Engine<F> {
    pub(crate) fn new(spec: &IntegrandSpec, contour: &ProductContour) -> Result<Self, QuadratureError> {
        let n = contour.dimension();
        if n > MAX_DIMENSION {
            return Err(QuadratureError::TooManyVariables(n));
        }
        let dim = |what, found| {
            if found == n {
                Ok(())
            } else {
                Err(QuadratureError::Dimension {
                    what,
                    expected: n,
                    found,
                })
            }
        };
        dim("kernel variables", spec.kernel.dimension())?;
        let mut polys = Vec::new();
        let mut factors = Vec::new();
        let monomial = |u: &[Complex64], factors: &mut Vec<Factor<F>>| {
            for (j, uj) in u.iter().enumerate() {
                factors.push(Factor::new(FactorId::T(j), uj - 1.0));
            }
        };
        match &spec.alpha {
            Alpha::One => {}
            Alpha::Monomial { u } => {
                dim("monomial exponents", u.len())?;
                monomial(u, &mut factors);
            }
            Alpha::PowerProduct { polys: ps, v, u } => {
                dim("monomial exponents", u.len())?;
                if v.len() != ps.len() {
                    return Err(QuadratureError::Dimension {
                        what: "polynomial exponents",
                        expected: ps.len(),
                        found: v.len(),
                    });
                }
                for (i, (p, vi)) in ps.iter().zip(v).enumerate() {
                    dim("polynomial variables", p.dimension())?;
                    polys.push(Poly::new(p));
                    factors.push(Factor::new(FactorId::P(i), *vi));
                }
                monomial(u, &mut factors);
            }
        }
        let tracked: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].tracked()).collect();
        for &i in &tracked {
            if matches!(factors[i].power, Power::General) && contour.branch_arg(factors[i].id).is_none() {
                return Err(QuadratureError::MissingBranch(factors[i].id));
            }
        }
        Ok(Engine {
            n,
            contour: contour.clone(),
            anchors: contour.anchors(),
            kernel: Poly::new(&spec.kernel),
            polys,
            factors,
            tracked,
        })
    }

    /// Replaces the kernel and polynomial coefficients by ones given in the
    /// working precision. Shapes must match the spec the engine was built
    /// from.
    pub(crate) fn with_coefficients(
        mut self,
        kernel: &SparsePolynomial<Complex<F>>,
        polys: &[SparsePolynomial<Complex<F>>],
    ) -> Result<Self, QuadratureError> {
        if kernel.dimension() != self.n {
            return Err(QuadratureError::Dimension {
                what: "kernel variables",
                expected: self.n,
                found: kernel.dimension(),
            });
        }
        if polys.len() != self.polys.len() {
            return Err(QuadratureError::Dimension {
                what: "polynomials",
                expected: self.polys.len(),
                found: polys.len(),
            });
        }
        self.kernel = Poly::lifted(kernel);
        self.polys = polys.iter().map(Poly::lifted).collect();
        Ok(self)
    }

    pub(crate) fn run(&self, tol: f64) -> Result<(QuadValue<F>, Mesh), QuadratureError> {
        let start = self.start_args();
        let (value, mesh) = self.level(0, &[], &start, tol, Mode::Adaptive)?;
        Ok((value, mesh.expect("outer level records its mesh")))
    }

    pub(crate) fn run_frozen(&self, mesh: &Mesh, tol: f64) -> Result<QuadValue<F>, QuadratureError> {
        if mesh.reaches.len() != self.contour.chains()[0].legs().len() {
            return Err(QuadratureError::MeshMismatch);
        }
        let start = self.start_args();
        self.level(0, &[], &start, tol, Mode::Frozen(mesh))
            .map(|(v, _)| v)
    }

    fn start_args(&self) -> Vec<f64> {
        self.tracked
            .iter()
            .map(|&i| self.contour.branch_arg(self.factors[i].id).unwrap_or(0.0))
            .collect()
    }

    fn base_value(&self, id: FactorId, t: &[Complex<F>]) -> Complex<F> {
        match id {
            FactorId::T(j) => t[j],
            FactorId::P(i) => self.polys[i].eval(t),
        }
    }

    fn tracked_values(&self, t: &[Complex<F>]) -> Vec<Complex64> {
        self.tracked
            .iter()
            .map(|&i| lower(self.base_value(self.factors[i].id, t)))
            .collect()
    }

    fn integrand(&self, t: &[Complex<F>], args: &[f64]) -> Complex<F> {
        let mut value = F::exp_c(self.kernel.eval(t));
        let mut tracked_pos = 0;
        for (i, factor) in self.factors.iter().enumerate() {
            let is_tracked = self.tracked.get(tracked_pos) == Some(&i);
            match factor.power {
                Power::Zero => {}
                Power::Integer(k) => value = value * ipow(self.base_value(factor.id, t), k),
                Power::General => {
                    let base = self.base_value(factor.id, t);
                    let principal = lower(base).arg();
                    let sheet = ((args[tracked_pos] - principal) / (2.0 * PI)).round();
                    let log = base.ln()
                        + Complex::new(F::zero(), F::from_f64(2.0 * PI) * F::from_f64(sheet));
                    value = value * F::exp_c(factor.exponent * log);
                }
            }
            if is_tracked {
                tracked_pos += 1;
            }
        }
        value
    }

    fn full_point(&self, d: usize, prefix: &[Complex<F>], z: Complex<F>) -> Vec<Complex<F>> {
        let mut t = prefix.to_vec();
        t.push(z);
        t.extend(self.anchors[d + 1..].iter().map(|a| lift::<F>(*a)));
        t
    }

    /// Parameter reach at which `Re P` has decayed on an unbounded leg.
    fn reach(&self, d: usize, leg_index: usize, leg: &ContourLeg, prefix: &[Complex<F>]) -> Result<f64, QuadratureError> {
        let re_p = |tau: f64| {
            let t = self.full_point(d, prefix, leg.point(F::from_f64(tau)));
            self.kernel.eval(&t).re.to_f64()
        };
        let ends = |r: f64| -> Vec<f64> {
            if matches!(leg.kind, super::LegKind::Line { .. }) {
                vec![re_p(r), re_p(-r)]
            } else {
                vec![re_p(r)]
            }
        };
        let mut top = re_p(0.0).max(0.0);
        let mut r = 1.0;
        while r <= MAX_REACH {
            let here = ends(r);
            top = here.iter().fold(top, |m, &x| m.max(x));
            let threshold = DECAY_THRESHOLD + top;
            if here.iter().all(|&x| x < threshold) && ends(2.0 * r).iter().all(|&x| x < threshold) {
                return Ok(r);
            }
            r *= 2.0;
        }
        Err(QuadratureError::Divergence {
            variable: d + 1,
            leg: leg_index + 1,
        })
    }

    fn check_endpoints(&self, d: usize, prefix: &[Complex<F>]) -> Result<(), QuadratureError> {
        for leg in self.contour.chains()[d].legs() {
            for tau in [leg.start_param(), leg.end_param()].into_iter().flatten() {
                let t = self.full_point(d, prefix, leg.point(F::from_f64(tau)));
                for factor in &self.factors {
                    if matches!(factor.power, Power::Zero) {
                        continue;
                    }
                    let value = lower(self.base_value(factor.id, &t));
                    if value.norm() < VANISHING && factor.exponent64.re <= -1.0 {
                        return Err(QuadratureError::EndpointSingularity {
                            factor: factor.id,
                            variable: d + 1,
                            point: lower(t[d]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Summed real exponent of the multivalued factors vanishing at `τ`.
    fn vanishing_exponent(&self, d: usize, prefix: &[Complex<F>], leg: &ContourLeg, tau: f64) -> Option<f64> {
        let t = self.full_point(d, prefix, leg.point(F::from_f64(tau)));
        let mut total = None;
        for factor in &self.factors {
            if matches!(factor.power, Power::General) && lower(self.base_value(factor.id, &t)).norm() < VANISHING {
                *total.get_or_insert(0.0) += factor.exponent64.re;
            }
        }
        total
    }

    fn tables(
        &self,
        d: usize,
        prefix: &[Complex<F>],
        start_args: &[f64],
        ranges: &[(f64, f64)],
    ) -> Result<Vec<BranchTable>, QuadratureError> {
        let legs = self.contour.chains()[d].legs();
        let mut tables: Vec<BranchTable> = Vec::with_capacity(legs.len());
        for (i, leg) in legs.iter().enumerate() {
            let (lo, hi) = ranges[i];
            let eval = |tau: f64| self.tracked_values(&self.full_point(d, prefix, leg.point(F::from_f64(tau))));
            let (start, args) = if i == 0 {
                (leg.anchor_param(), start_args.to_vec())
            } else {
                let prev = &legs[i - 1];
                let end = prev.end_param().expect("chain legs join at finite points");
                let values = self.tracked_values(&self.full_point(d, prefix, prev.point(F::from_f64(end))));
                let args = tables[i - 1].lookup(end, &values);
                (leg.start_param().expect("chain legs join at finite points"), args)
            };
            let table = BranchTable::build(lo, hi, start, &args, eval).map_err(|e| {
                let (k, tau, vanishing) = match e {
                    TableError::Vanishing(k, tau) => (k, tau, true),
                    TableError::Tracking(k, tau) => (k, tau, false),
                };
                let factor = self.factors[self.tracked[k]].id;
                if vanishing {
                    QuadratureError::Vanishing {
                        factor,
                        variable: d + 1,
                        point: leg.point::<f64>(tau),
                    }
                } else {
                    QuadratureError::BranchTracking {
                        factor,
                        variable: d + 1,
                    }
                }
            })?;
            tables.push(table);
        }
        Ok(tables)
    }

    /// Integrates variables `d..n` with `t_0..t_{d-1} = prefix`.
    fn level(
        &self,
        d: usize,
        prefix: &[Complex<F>],
        start_args: &[f64],
        tol: f64,
        mode: Mode<'_>,
    ) -> Result<(QuadValue<F>, Option<Mesh>), QuadratureError> {
        let legs = self.contour.chains()[d].legs();
        self.check_endpoints(d, prefix)?;
        let reaches: Vec<f64> = match mode {
            Mode::Frozen(mesh) => mesh.reaches.clone(),
            Mode::Adaptive => legs
                .iter()
                .enumerate()
                .map(|(i, leg)| {
                    if leg.is_unbounded() {
                        self.reach(d, i, leg, prefix)
                    } else {
                        Ok(1.0)
                    }
                })
                .collect::<Result<_, _>>()?,
        };
        let ranges: Vec<(f64, f64)> = legs
            .iter()
            .zip(&reaches)
            .map(|(leg, &r)| leg.param_range(r))
            .collect();
        let gradings: Vec<Grading> = match mode {
            Mode::Frozen(mesh) => mesh.gradings.clone(),
            Mode::Adaptive => legs
                .iter()
                .zip(&ranges)
                .map(|(leg, &(lo, hi))| {
                    Grading::new(
                        self.vanishing_exponent(d, prefix, leg, lo),
                        self.vanishing_exponent(d, prefix, leg, hi),
                    )
                })
                .collect(),
        };
        if gradings.len() != legs.len() {
            return Err(QuadratureError::MeshMismatch);
        }
        let tables = if self.tracked.is_empty() {
            Vec::new()
        } else {
            self.tables(d, prefix, start_args, &ranges)?
        };
        let inner_tol = tol / 10.0;

        let sample = |leg_index: usize, x: F| -> Result<(Complex<F>, f64), QuadratureError> {
            let leg = &legs[leg_index];
            let (lo, hi) = ranges[leg_index];
            let grading = gradings[leg_index];
            let (tau, jacobian) = grading.map(lo, hi, x);
            let z = leg.point(tau);
            let velocity = leg.velocity(tau) * jacobian;
            let sign = F::from_f64(leg.orientation as f64);
            let t = self.full_point(d, prefix, z);
            let args = if tables.is_empty() {
                Vec::new()
            } else {
                tables[leg_index].lookup(tau.to_f64(), &self.tracked_values(&t))
            };
            let (value, err) = if d + 1 == self.n {
                let value = self.integrand(&t, &args);
                // a graded end rounded onto the zero itself: the transformed
                // integrand vanishes there
                if grading != Grading::None && !(value.re.is_finite() && value.im.is_finite()) {
                    return Ok((Complex::new(F::zero(), F::zero()), 0.0));
                }
                (value, 0.0)
            } else {
                let mut inner_prefix = prefix.to_vec();
                inner_prefix.push(z);
                let (inner, _) = self.level(d + 1, &inner_prefix, &args, inner_tol, Mode::Adaptive)?;
                (inner.value, inner.error)
            };
            Ok((value * velocity * sign, err * velocity.norm().to_f64()))
        };

        let evaluate = |leg: usize, a: F, b: F| -> Result<Piece<F>, QuadratureError> {
            let xs = rule::nodes(a, b);
            let samples: Vec<(Complex<F>, f64)> = if d + 1 < self.n {
                xs.par_iter().map(|&x| sample(leg, x)).collect::<Result<_, _>>()?
            } else {
                xs.iter().map(|&x| sample(leg, x)).collect::<Result<_, _>>()?
            };
            let mut values = [Complex::new(F::zero(), F::zero()); 15];
            let mut extra = [0.0; 15];
            for (k, (v, e)) in samples.into_iter().enumerate() {
                values[k] = v;
                extra[k] = e;
            }
            Ok(Piece {
                leg,
                a,
                b,
                result: rule::apply(a, b, &values, &extra),
            })
        };

        let mut pieces: Vec<Piece<F>> = Vec::new();
        match mode {
            Mode::Frozen(mesh) => {
                for &(leg, a, b) in &mesh.pieces {
                    if leg >= legs.len() {
                        return Err(QuadratureError::MeshMismatch);
                    }
                    pieces.push(evaluate(leg, F::from_f64(a), F::from_f64(b))?);
                }
                let (value, error) = totals(&pieces);
                return Ok((QuadValue { value, error }, None));
            }
            Mode::Adaptive => {
                for (leg, &(lo, hi)) in ranges.iter().enumerate() {
                    let (lo, hi) = gradings[leg].range(lo, hi);
                    let width = (hi - lo) / INITIAL_PIECES as f64;
                    for k in 0..INITIAL_PIECES {
                        let a = lo + width * k as f64;
                        let b = if k + 1 == INITIAL_PIECES { hi } else { a + width };
                        pieces.push(evaluate(leg, F::from_f64(a), F::from_f64(b))?);
                    }
                }
            }
        }
        loop {
            let (value, error) = totals(&pieces);
            let magnitude = value.norm().to_f64();
            // an integral that cancels to (nearly) zero is done once the error
            // is at the rounding level of ∫|f|
            let mass: f64 = pieces.iter().map(|p| p.result.magnitude).sum();
            let rounding = ROUNDING_FACTOR * F::epsilon().to_f64().max(1e-32) * mass;
            if error <= tol * magnitude
                || error <= rounding
                || (magnitude <= ABSOLUTE_FLOOR && error <= ABSOLUTE_FLOOR)
            {
                let mesh = Mesh {
                    reaches,
                    gradings,
                    pieces: pieces
                        .iter()
                        .map(|p| (p.leg, p.a.to_f64(), p.b.to_f64()))
                        .collect(),
                };
                return Ok((QuadValue { value, error }, Some(mesh)));
            }
            let worst = (0..pieces.len())
                .max_by(|&i, &j| pieces[i].result.error.total_cmp(&pieces[j].result.error))
                .expect("at least one piece");
            let (leg, a, b) = (pieces[worst].leg, pieces[worst].a, pieces[worst].b);
            let mid = (a + b) / F::from_f64(2.0);
            let tiny = (b - a).abs().to_f64() <= 1e-13 * (1.0 + a.abs().to_f64());
            if pieces.len() >= MAX_INTERVALS || tiny {
                return Err(QuadratureError::Accuracy {
                    value: lower(value),
                    error,
                });
            }
            pieces.swap_remove(worst);
            pieces.push(evaluate(leg, a, mid)?);
            pieces.push(evaluate(leg, mid, b)?);
        }
    }
}

fn totals<F: Real>(pieces: &[Piece<F>]) -> (Complex<F>, f64) {
    let mut value = Complex::new(F::zero(), F::zero());
    let mut error = 0.0;
    for p in pieces {
        value = value + p.result.value;
        error += p.result.error;
    }
    (value, error)
}

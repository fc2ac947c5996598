use std::marker::PhantomData;

use num_complex::{Complex, Complex64};

use super::{CoeffFunction, VerifyError};
use crate::lattice::ExponentSet;
use crate::polynomial::SparsePolynomial;
use crate::quadrature::{
    integrate_on_mesh_lifted, integrate_recording, Alpha, IntegrandSpec, Mesh, ProductContour,
    QuadValue,
};
use crate::scalar::{Real, Scalar};
use crate::series::{evaluate_series, GammaSeries};

/// Wraps a closure.
pub struct ClosureFunction<G> {
    dimension: usize,
    g: G,
}

impl<G> ClosureFunction<G> {
    pub fn new(dimension: usize, g: G) -> Self {
        ClosureFunction { dimension, g }
    }
}

impl<F: Real, G> CoeffFunction<F> for ClosureFunction<G>
where
    G: Fn(&[Complex<F>]) -> Complex<F> + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, c: &[Complex<F>]) -> Result<Complex<F>, VerifyError> {
        Ok((self.g)(c))
    }
}

/// How a flat coefficient vector becomes an integrand.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffLayout {
    /// Coefficients of the kernel `P` on a set.
    Kernel(ExponentSet),
    /// Coefficients of `P_1,…,P_k` on their sets, block after block.
    Polynomials(Vec<ExponentSet>),
}

impl CoeffLayout {
    pub fn len(&self) -> usize {
        match self {
            CoeffLayout::Kernel(set) => set.len(),
            CoeffLayout::Polynomials(sets) => sets.iter().map(ExponentSet::len).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn dimension(&self) -> usize {
        match self {
            CoeffLayout::Kernel(set) => set.dimension(),
            CoeffLayout::Polynomials(sets) => sets.first().map_or(0, ExponentSet::dimension),
        }
    }

    #[allow(clippy::type_complexity)]
    fn split<S: Scalar>(
        &self,
        c: &[S],
    ) -> Result<(SparsePolynomial<S>, Vec<SparsePolynomial<S>>), VerifyError> {
        if c.len() != self.len() {
            return Err(VerifyError::Dimension {
                what: "coefficient values",
                expected: self.len(),
                found: c.len(),
            });
        }
        Ok(match self {
            CoeffLayout::Kernel(set) => (SparsePolynomial::on_set(set, c)?, Vec::new()),
            CoeffLayout::Polynomials(sets) => {
                let mut polys = Vec::new();
                let mut offset = 0;
                for set in sets {
                    polys.push(SparsePolynomial::on_set(set, &c[offset..offset + set.len()])?);
                    offset += set.len();
                }
                (SparsePolynomial::zero(self.dimension()), polys)
            }
        })
    }
}

/// An integral as a function of its coefficients. The outer partition is
/// fixed by an adaptive run at the center, so nearby evaluations apply one
/// and the same rule and finite differences are not polluted by remeshing.
pub struct QuadratureFunction<F> {
    layout: CoeffLayout,
    spec: IntegrandSpec,
    contour: ProductContour,
    mesh: Mesh,
    tol: f64,
    center_value: QuadValue,
    _precision: PhantomData<fn() -> F>,
}

impl<F: Real> QuadratureFunction<F> {
    /// `∮ e^{Σ c_ω t^ω} t^{u−1} dt`.
    pub fn gg(
        set: ExponentSet,
        u: Vec<Complex64>,
        contour: ProductContour,
        center: &[Complex64],
        tol: f64,
    ) -> Result<Self, VerifyError> {
        Self::new(CoeffLayout::Kernel(set), Vec::new(), u, contour, center, tol)
    }

    /// `∮ ∏ P_i^{v_i} t^{u−1} dt`.
    pub fn euler(
        sets: Vec<ExponentSet>,
        v: Vec<Complex64>,
        u: Vec<Complex64>,
        contour: ProductContour,
        center: &[Complex64],
        tol: f64,
    ) -> Result<Self, VerifyError> {
        Self::new(CoeffLayout::Polynomials(sets), v, u, contour, center, tol)
    }

    fn new(
        layout: CoeffLayout,
        v: Vec<Complex64>,
        u: Vec<Complex64>,
        contour: ProductContour,
        center: &[Complex64],
        tol: f64,
    ) -> Result<Self, VerifyError> {
        let (kernel, polys) = layout.split(center)?;
        let alpha = match &layout {
            CoeffLayout::Kernel(_) => Alpha::Monomial { u },
            CoeffLayout::Polynomials(_) => Alpha::PowerProduct { polys, v, u },
        };
        let spec = IntegrandSpec::new(kernel, alpha);
        let (center_value, mesh) = integrate_recording::<f64>(&spec, &contour, tol)?;
        Ok(QuadratureFunction {
            layout,
            spec,
            contour,
            mesh,
            tol,
            center_value,
            _precision: PhantomData,
        })
    }

    pub fn layout(&self) -> &CoeffLayout {
        &self.layout
    }

    pub fn spec(&self) -> &IntegrandSpec {
        &self.spec
    }

    pub fn contour(&self) -> &ProductContour {
        &self.contour
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Adaptive value at the center.
    pub fn center_value(&self) -> QuadValue {
        self.center_value
    }
}

impl<F: Real> CoeffFunction<F> for QuadratureFunction<F> {
    fn dimension(&self) -> usize {
        self.layout.len()
    }

    fn evaluate(&self, c: &[Complex<F>]) -> Result<Complex<F>, VerifyError> {
        let (kernel, polys) = self.layout.split(c)?;
        let v = integrate_on_mesh_lifted(&self.spec, &kernel, &polys, &self.contour, &self.mesh, self.tol)?;
        Ok(v.value)
    }
}

/// A truncated series summed at the point.
pub struct SeriesFunction<'a, S> {
    series: &'a GammaSeries<S>,
}

impl<'a, S: Scalar> SeriesFunction<'a, S> {
    pub fn new(series: &'a GammaSeries<S>) -> Self {
        SeriesFunction { series }
    }
}

impl<S: Scalar> CoeffFunction<f64> for SeriesFunction<'_, S> {
    fn dimension(&self) -> usize {
        self.series.layout().space().vars().len()
    }

    fn evaluate(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
        Ok(evaluate_series(self.series, c)?.value)
    }
}

const MAX_CONTINUATION_STEP: f64 = 0.05;
const MIN_DERIVATIVE: f64 = 1e-8;
const NEWTON_ITERATIONS: usize = 60;

/// A root `x(c)` of `Σ c_ω t^ω = 0` (one variable), continued from a known
/// simple root at the center, and the quantity `γ(x)` or `γ(x)/P'(x)`.
pub struct RootFunction {
    set: ExponentSet,
    center: Vec<Complex64>,
    root: Complex64,
    gamma: SparsePolynomial<Complex64>,
    over_derivative: bool,
}

impl RootFunction {
    /// Refines `guess` at `center` by Newton's method.
    pub fn new(
        set: ExponentSet,
        center: Vec<Complex64>,
        guess: Complex64,
        gamma: SparsePolynomial<Complex64>,
        over_derivative: bool,
    ) -> Result<Self, VerifyError> {
        if set.dimension() != 1 || gamma.dimension() != 1 {
            return Err(VerifyError::Dimension {
                what: "variables of a root problem",
                expected: 1,
                found: if set.dimension() != 1 {
                    set.dimension()
                } else {
                    gamma.dimension()
                },
            });
        }
        if center.len() != set.len() {
            return Err(VerifyError::Dimension {
                what: "coefficient values",
                expected: set.len(),
                found: center.len(),
            });
        }
        let mut f = RootFunction {
            set,
            center,
            root: guess,
            gamma,
            over_derivative,
        };
        f.root = f.newton(&f.center.clone(), guess)?;
        Ok(f)
    }

    pub fn center_root(&self) -> Complex64 {
        self.root
    }

    fn p_and_derivative(&self, c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for (w, &cw) in self.set.members().iter().zip(c) {
            let e = w.entries()[0] as i32;
            p += cw * x.powi(e);
            if e != 0 {
                dp += cw * (e as f64) * x.powi(e - 1);
            }
        }
        (p, dp)
    }

    fn newton(&self, c: &[Complex64], start: Complex64) -> Result<Complex64, VerifyError> {
        let mut x = start;
        for _ in 0..NEWTON_ITERATIONS {
            let (p, dp) = self.p_and_derivative(c, x);
            if dp.norm() < MIN_DERIVATIVE {
                return Err(VerifyError::RootCollision {
                    root: x,
                    derivative: dp.norm(),
                });
            }
            let dx = p / dp;
            x -= dx;
            if dx.norm() <= 1e-15 * x.norm().max(1.0) {
                return Ok(x);
            }
        }
        Err(VerifyError::Newton(start))
    }

    /// The continued root at `c`.
    pub fn root(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
        if c.len() != self.center.len() {
            return Err(VerifyError::Dimension {
                what: "coefficient values",
                expected: self.center.len(),
                found: c.len(),
            });
        }
        let distance = c
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let steps = ((distance / MAX_CONTINUATION_STEP).ceil() as usize).max(1);
        let mut x = self.root;
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            let ck: Vec<Complex64> = c
                .iter()
                .zip(&self.center)
                .map(|(a, b)| b + (a - b) * s)
                .collect();
            x = self.newton(&ck, x)?;
        }
        Ok(x)
    }
}

impl CoeffFunction<f64> for RootFunction {
    fn dimension(&self) -> usize {
        self.set.len()
    }

    fn evaluate(&self, c: &[Complex64]) -> Result<Complex64, VerifyError> {
        let x = self.root(c)?;
        let g = self.gamma.evaluate(&[x])?;
        if self.over_derivative {
            let (_, dp) = self.p_and_derivative(c, x);
            Ok(g / dp)
        } else {
            Ok(g)
        }
    }
}

//! Contour quadrature for non-Gaussian integrals `∮ e^{P(t)} α(t) dt`.
//!
//! Integration is iterated: one adaptive Gauss–Kronrod pass per variable,
//! the last variable innermost. Unbounded legs are truncated once the kernel
//! has decayed; multivalued factors are continued along the contour from
//! user-supplied starting arguments.

mod branch;
mod contour;
mod engine;
pub mod rule;

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::{Complex, Complex64};
use thiserror::Error;

use crate::lattice::ExponentSet;
use crate::series::CoefficientOracle;
use crate::polynomial::SparsePolynomial;
use crate::scalar::Real;

pub use contour::{BranchDatum, ContourChain, ContourLeg, FactorId, LegKind, ProductContour};
pub use engine::Mesh;

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Maximum number of variables.
pub const MAX_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid contour: {0}")]
    BadContour(String),
    #[error("{what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("at most {MAX_DIMENSION} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("integrand does not decay along leg {leg} of variable t{variable}")]
    Divergence { variable: usize, leg: usize },
    #[error("tolerance not met: best estimate {value} with error {error:e}")]
    Accuracy { value: Complex64, error: f64 },
    #[error("no branch datum for multivalued factor {0}")]
    MissingBranch(FactorId),
    #[error("factor {factor} vanishes inside the contour of t{variable} near {point}")]
    Vanishing {
        factor: FactorId,
        variable: usize,
        point: Complex64,
    },
    #[error("non-integrable singularity of {factor} at endpoint {point} of the contour of t{variable}")]
    EndpointSingularity {
        factor: FactorId,
        variable: usize,
        point: Complex64,
    },
    #[error("lost track of the branch of {factor} along the contour of t{variable}")]
    BranchTracking { factor: FactorId, variable: usize },
    #[error("frozen mesh does not fit this contour")]
    MeshMismatch,
}

/// The form `α` multiplying the kernel `e^P`.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    One,
    /// `t^{u−1} = ∏ t_j^{u_j−1}`.
    Monomial { u: Vec<Complex64> },
    /// `∏ P_i^{v_i} · t^{u−1}`.
    PowerProduct {
        polys: Vec<SparsePolynomial<Complex64>>,
        v: Vec<Complex64>,
        u: Vec<Complex64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrandSpec {
    pub kernel: SparsePolynomial<Complex64>,
    pub alpha: Alpha,
}

impl IntegrandSpec {
    pub fn new(kernel: SparsePolynomial<Complex64>, alpha: Alpha) -> Self {
        IntegrandSpec { kernel, alpha }
    }

    /// `e^P` alone.
    pub fn proper(kernel: SparsePolynomial<Complex64>) -> Self {
        Self::new(kernel, Alpha::One)
    }

    pub fn dimension(&self) -> usize {
        self.kernel.dimension()
    }
}

/// Integral value with the quadrature's error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadValue<F = f64> {
    pub value: Complex<F>,
    pub error: f64,
}

/// Adaptive integration in double precision.
pub fn integrate(
    spec: &IntegrandSpec,
    contour: &ProductContour,
    tol: f64,
) -> Result<QuadValue, QuadratureError> {
    integrate_in::<f64>(spec, contour, tol)
}

/// Adaptive integration carried out in the precision `F`.
pub fn integrate_in<F: Real>(
    spec: &IntegrandSpec,
    contour: &ProductContour,
    tol: f64,
) -> Result<QuadValue<F>, QuadratureError> {
    engine::Engine::<F>::new(spec, contour)?
        .run(tol)
        .map(|(v, _)| v)
}

/// Adaptive integration that also returns the final outer partition, so the
/// same rule can be re-applied at nearby coefficients.
pub fn integrate_recording<F: Real>(
    spec: &IntegrandSpec,
    contour: &ProductContour,
    tol: f64,
) -> Result<(QuadValue<F>, Mesh), QuadratureError> {
    engine::Engine::<F>::new(spec, contour)?.run(tol)
}

/// Re-applies a recorded outer partition without adapting it. Inner
/// variables are still integrated adaptively with `tol`.
pub fn integrate_on_mesh<F: Real>(
    spec: &IntegrandSpec,
    contour: &ProductContour,
    mesh: &Mesh,
    tol: f64,
) -> Result<QuadValue<F>, QuadratureError> {
    engine::Engine::<F>::new(spec, contour)?.run_frozen(mesh, tol)
}

/// [`integrate_on_mesh`] with the kernel and the polynomials of `spec`
/// replaced by coefficients held in the working precision `F`; `spec` still
/// supplies the exponents of `α`.
pub fn integrate_on_mesh_lifted<F: Real>(
    spec: &IntegrandSpec,
    kernel: &SparsePolynomial<Complex<F>>,
    polys: &[SparsePolynomial<Complex<F>>],
    contour: &ProductContour,
    mesh: &Mesh,
    tol: f64,
) -> Result<QuadValue<F>, QuadratureError> {
    engine::Engine::<F>::new(spec, contour)?
        .with_coefficients(kernel, polys)?
        .run_frozen(mesh, tol)
}

/// `∮ e^P dt`.
pub fn proper_integral(
    p: &SparsePolynomial<Complex64>,
    contour: &ProductContour,
    tol: f64,
) -> Result<QuadValue, QuadratureError> {
    integrate(&IntegrandSpec::proper(p.clone()), contour, tol)
}

/// The GG-function `∮ e^{Σ c_ω t^ω} t^{u−1} dt`.
pub fn gg_eval(
    set: &ExponentSet,
    coefficients: &[Complex64],
    u: &[Complex64],
    contour: &ProductContour,
    tol: f64,
) -> Result<QuadValue, QuadratureError> {
    let kernel = SparsePolynomial::on_set(set, coefficients).map_err(|_| {
        QuadratureError::Dimension {
            what: "coefficients",
            expected: set.len(),
            found: coefficients.len(),
        }
    })?;
    integrate(
        &IntegrandSpec::new(kernel, Alpha::Monomial { u: u.to_vec() }),
        contour,
        tol,
    )
}

/// The generalized Euler integral `∮ ∏ P_i^{v_i} t^{u−1} dt`.
pub fn euler_integral_eval(
    polys: &[SparsePolynomial<Complex64>],
    v: &[Complex64],
    u: &[Complex64],
    contour: &ProductContour,
    tol: f64,
) -> Result<QuadValue, QuadratureError> {
    let n = contour.dimension();
    let spec = IntegrandSpec::new(
        SparsePolynomial::zero(n),
        Alpha::PowerProduct {
            polys: polys.to_vec(),
            v: v.to_vec(),
            u: u.to_vec(),
        },
    );
    integrate(&spec, contour, tol)
}

/// Moments `∮ t^{k} e^{P₀} t^{u−1} dt` with `k = Σ m_ω ω`, the
/// coefficients of the standard expansion around `P₀`. Values are cached
/// per `k`.
#[derive(Debug)]
pub struct MomentOracle {
    set: ExponentSet,
    kernel: SparsePolynomial<Complex64>,
    u: Vec<Complex64>,
    contour: ProductContour,
    tol: f64,
    cache: Mutex<HashMap<Vec<i64>, Complex64>>,
}

impl MomentOracle {
    pub fn new(
        set: ExponentSet,
        kernel: SparsePolynomial<Complex64>,
        u: Vec<Complex64>,
        contour: ProductContour,
        tol: f64,
    ) -> Result<Self, QuadratureError> {
        let n = contour.dimension();
        for (what, found) in [
            ("exponent set dimension", set.dimension()),
            ("kernel variables", kernel.dimension()),
            ("monomial exponents", u.len()),
        ] {
            if found != n {
                return Err(QuadratureError::Dimension {
                    what,
                    expected: n,
                    found,
                });
            }
        }
        Ok(MomentOracle {
            set,
            kernel,
            u,
            contour,
            tol,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn moment(&self, k: &[i64]) -> Result<Complex64, QuadratureError> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(k) {
            return Ok(*v);
        }
        let u = self.u.iter().zip(k).map(|(u, &k)| u + k as f64).collect();
        let spec = IntegrandSpec::new(self.kernel.clone(), Alpha::Monomial { u });
        let value = integrate(&spec, &self.contour, self.tol)?.value;
        self.cache.lock().expect("cache lock").insert(k.to_vec(), value);
        Ok(value)
    }
}

impl CoefficientOracle for MomentOracle {
    fn coefficient(&self, m: &[u32], _base_values: &[Complex64]) -> Result<Complex64, String> {
        let mut k = vec![0i64; self.set.dimension()];
        for (&mw, w) in m.iter().zip(self.set.members()) {
            for (kj, &wj) in k.iter_mut().zip(w.entries()) {
                *kj += mw as i64 * wj;
            }
        }
        self.moment(&k).map_err(|e| e.to_string())
    }

    fn describe(&self) -> String {
        format!("quadrature moments of e^({})", render_polynomial(&self.kernel))
    }
}

fn render_polynomial(p: &SparsePolynomial<Complex64>) -> String {
    let terms: Vec<String> = p
        .terms()
        .map(|(w, c)| format!("{}*t^{}", crate::scalar::render_c64(*c), w))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests;

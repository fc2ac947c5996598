//! Per-variable contour legs, chains and branch data.

use std::fmt;

use num_complex::{Complex, Complex64};

use super::QuadratureError;
use crate::scalar::{lift, Real};

const JOIN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum LegKind {
    Segment { start: Complex64, end: Complex64 },
    /// `origin + τ·e^{iθ}`, `τ ≥ 0`.
    Ray { origin: Complex64, angle: f64 },
    /// `center + radius·e^{iφ}` for `φ` from `start_angle` to `end_angle`.
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    /// The full line `τ·e^{iθ}` through the origin.
    Line { angle: f64 },
}

/// One leg of a chain; `orientation = −1` traverses it backwards.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourLeg {
    pub kind: LegKind,
    pub orientation: i8,
}

impl ContourLeg {
    pub fn segment(start: Complex64, end: Complex64) -> Self {
        ContourLeg {
            kind: LegKind::Segment { start, end },
            orientation: 1,
        }
    }

    pub fn ray(origin: Complex64, angle: f64) -> Self {
        ContourLeg {
            kind: LegKind::Ray { origin, angle },
            orientation: 1,
        }
    }

    pub fn arc(center: Complex64, radius: f64, start_angle: f64, end_angle: f64) -> Self {
        ContourLeg {
            kind: LegKind::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            },
            orientation: 1,
        }
    }

    pub fn line(angle: f64) -> Self {
        ContourLeg {
            kind: LegKind::Line { angle },
            orientation: 1,
        }
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.orientation != 1 && self.orientation != -1 {
            return Err(format!("orientation must be ±1, got {}", self.orientation));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match &self.kind {
            LegKind::Segment { start, end } => {
                if !finite(start) || !finite(end) {
                    return Err("segment endpoints must be finite".into());
                }
                if start == end {
                    return Err("segment endpoints coincide".into());
                }
            }
            LegKind::Ray { origin, angle } => {
                if !finite(origin) || !angle.is_finite() {
                    return Err("ray origin and angle must be finite".into());
                }
            }
            LegKind::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                if !finite(center) || !start_angle.is_finite() || !end_angle.is_finite() {
                    return Err("arc data must be finite".into());
                }
                if !(*radius > 0.0) {
                    return Err("arc radius must be positive".into());
                }
                if start_angle == end_angle {
                    return Err("arc has zero angular span".into());
                }
            }
            LegKind::Line { angle } => {
                if !angle.is_finite() {
                    return Err("line angle must be finite".into());
                }
            }
        }
        Ok(())
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, LegKind::Ray { .. } | LegKind::Line { .. })
    }

    /// Parameter interval; `reach` truncates unbounded legs.
    pub fn param_range(&self, reach: f64) -> (f64, f64) {
        match self.kind {
            LegKind::Segment { .. } | LegKind::Arc { .. } => (0.0, 1.0),
            LegKind::Ray { .. } => (0.0, reach),
            LegKind::Line { .. } => (-reach, reach),
        }
    }

    pub fn point<F: Real>(&self, tau: F) -> Complex<F> {
        match self.kind {
            LegKind::Segment { start, end } => {
                let a: Complex<F> = lift(start);
                a + (lift::<F>(end) - a) * tau
            }
            LegKind::Ray { origin, angle } => lift::<F>(origin) + direction::<F>(angle) * tau,
            LegKind::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let phi = F::from_f64(start_angle) + F::from_f64(end_angle - start_angle) * tau;
                lift::<F>(center) + Complex::new(phi.cos(), phi.sin()) * F::from_f64(radius)
            }
            LegKind::Line { angle } => direction::<F>(angle) * tau,
        }
    }

    /// `dz/dτ`.
    pub fn velocity<F: Real>(&self, tau: F) -> Complex<F> {
        match self.kind {
            LegKind::Segment { start, end } => lift(end - start),
            LegKind::Ray { angle, .. } | LegKind::Line { angle } => direction(angle),
            LegKind::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                let span = F::from_f64(end_angle - start_angle);
                let phi = F::from_f64(start_angle) + span * tau;
                Complex::new(-phi.sin(), phi.cos()) * (F::from_f64(radius) * span)
            }
        }
    }

    /// First and last point in traversal order; `None` at infinity.
    pub fn traversal_ends(&self) -> (Option<Complex64>, Option<Complex64>) {
        let (lo, hi) = match self.kind {
            LegKind::Segment { .. } | LegKind::Arc { .. } => {
                (Some(self.point::<f64>(0.0)), Some(self.point::<f64>(1.0)))
            }
            LegKind::Ray { origin, .. } => (Some(origin), None),
            LegKind::Line { .. } => (None, None),
        };
        if self.orientation > 0 {
            (lo, hi)
        } else {
            (hi, lo)
        }
    }

    /// Parameter of the first finite point met in traversal order (the
    /// origin for a line).
    pub fn anchor_param(&self) -> f64 {
        match self.kind {
            LegKind::Segment { .. } | LegKind::Arc { .. } => {
                if self.orientation > 0 {
                    0.0
                } else {
                    1.0
                }
            }
            LegKind::Ray { .. } | LegKind::Line { .. } => 0.0,
        }
    }

    /// Parameter at which traversal starts, when finite.
    pub fn start_param(&self) -> Option<f64> {
        match self.kind {
            LegKind::Segment { .. } | LegKind::Arc { .. } => Some(self.anchor_param()),
            LegKind::Ray { .. } if self.orientation > 0 => Some(0.0),
            _ => None,
        }
    }

    /// Parameter at which traversal ends, when finite.
    pub fn end_param(&self) -> Option<f64> {
        match self.kind {
            LegKind::Segment { .. } | LegKind::Arc { .. } => Some(1.0 - self.anchor_param()),
            LegKind::Ray { .. } if self.orientation < 0 => Some(0.0),
            _ => None,
        }
    }
}

fn direction<F: Real>(angle: f64) -> Complex<F> {
    let a = F::from_f64(angle);
    Complex::new(a.cos(), a.sin())
}

/// Connected sequence of legs for one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourChain {
    legs: Vec<ContourLeg>,
}

impl ContourChain {
    pub fn new(legs: Vec<ContourLeg>) -> Result<Self, QuadratureError> {
        if legs.is_empty() {
            return Err(QuadratureError::BadContour("empty chain".into()));
        }
        for (i, leg) in legs.iter().enumerate() {
            leg.validate()
                .map_err(|m| QuadratureError::BadContour(format!("leg {}: {m}", i + 1)))?;
        }
        for (i, pair) in legs.windows(2).enumerate() {
            let (_, end) = pair[0].traversal_ends();
            let (start, _) = pair[1].traversal_ends();
            match (end, start) {
                (Some(a), Some(b)) if (a - b).norm() <= JOIN_TOLERANCE * (1.0 + a.norm()) => {}
                _ => {
                    return Err(QuadratureError::BadContour(format!(
                        "leg {} does not start where leg {} ends",
                        i + 2,
                        i + 1
                    )))
                }
            }
        }
        Ok(ContourChain { legs })
    }

    pub fn single(leg: ContourLeg) -> Result<Self, QuadratureError> {
        Self::new(vec![leg])
    }

    pub fn legs(&self) -> &[ContourLeg] {
        &self.legs
    }

    /// The point at which branch data are given.
    pub fn anchor(&self) -> Complex64 {
        let leg = &self.legs[0];
        leg.point(leg.anchor_param())
    }

    /// The same chain traversed backwards.
    pub fn reversed(&self) -> Self {
        ContourChain {
            legs: self.legs.iter().rev().cloned().map(ContourLeg::reversed).collect(),
        }
    }
}

/// A multivalued factor of the integrand: `t_j` (0-based `j`) or `P_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorId {
    T(usize),
    P(usize),
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorId::T(j) => write!(f, "t{}", j + 1),
            FactorId::P(i) => write!(f, "P{}", i + 1),
        }
    }
}

/// Starting argument of a factor at the contour's anchor point; it selects
/// the sheet there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchDatum {
    pub factor: FactorId,
    pub arg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductContour {
    chains: Vec<ContourChain>,
    branch: Vec<BranchDatum>,
}

impl ProductContour {
    pub fn new(chains: Vec<ContourChain>, branch: Vec<BranchDatum>) -> Result<Self, QuadratureError> {
        if chains.is_empty() {
            return Err(QuadratureError::BadContour("no chains".into()));
        }
        Ok(ProductContour { chains, branch })
    }

    /// One-variable contour without branch data.
    pub fn simple(chain: ContourChain) -> Self {
        ProductContour {
            chains: vec![chain],
            branch: Vec::new(),
        }
    }

    pub fn with_branch(mut self, datum: BranchDatum) -> Self {
        self.branch.retain(|d| d.factor != datum.factor);
        self.branch.push(datum);
        self
    }

    pub fn chains(&self) -> &[ContourChain] {
        &self.chains
    }

    pub fn branch(&self) -> &[BranchDatum] {
        &self.branch
    }

    pub fn branch_arg(&self, factor: FactorId) -> Option<f64> {
        self.branch.iter().find(|d| d.factor == factor).map(|d| d.arg)
    }

    pub fn dimension(&self) -> usize {
        self.chains.len()
    }

    pub fn anchors(&self) -> Vec<Complex64> {
        self.chains.iter().map(ContourChain::anchor).collect()
    }
}

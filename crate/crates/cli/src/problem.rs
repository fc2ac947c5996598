//! Problem files: exponent data, coefficients, parameters and contours.

use hypint_core::lattice::{enumerate_bases, Base, ExponentSet, ExponentVector};
use hypint_core::quadrature::{BranchDatum, ContourChain, ContourLeg, FactorId, ProductContour};
use hypint_core::scalar::{parse_rational, rat, render_rational};
use hypint_core::{Complex64, Rational, SparsePolynomial};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// A complex number written as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C(pub f64, pub f64);

impl From<C> for Complex64 {
    fn from(c: C) -> Self {
        Complex64::new(c.0, c.1)
    }
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C(z.re, z.im)
    }
}

/// A parameter: an exact rational `"p/q"` or a complex `[re, im]`. Plain
/// numbers are read as real complex values.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Exact(Rational),
    Complex(C),
}

impl Param {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            Param::Exact(r) => Complex64::new(rational_to_f64(r), 0.0),
            Param::Complex(c) => (*c).into(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Param::Exact(r) => Some(r),
            Param::Complex(_) => None,
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use hypint_core::Scalar;
    r.to_c64().re
}

impl Serialize for Param {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        match self {
            Param::Exact(r) => s.serialize_str(&render_rational(r)),
            Param::Complex(c) => c.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Pair(C),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t)
                .map(Param::Exact)
                .ok_or_else(|| serde::de::Error::custom(format!("`{t}` is not a rational p/q"))),
            Raw::Pair(c) => Ok(Param::Complex(c)),
            Raw::Number(x) => Ok(Param::Complex(C(x, 0.0))),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One leg of a per-variable contour chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Leg {
    Segment {
        start: C,
        end: C,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    Ray {
        origin: C,
        angle: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    Arc {
        center: C,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    Line {
        angle: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
}

impl Leg {
    fn to_leg(&self) -> ContourLeg {
        let (leg, reversed) = match self {
            Leg::Segment { start, end, reversed } => (ContourLeg::segment((*start).into(), (*end).into()), reversed),
            Leg::Ray { origin, angle, reversed } => (ContourLeg::ray((*origin).into(), *angle), reversed),
            Leg::Arc {
                center,
                radius,
                start_angle,
                end_angle,
                reversed,
            } => (ContourLeg::arc((*center).into(), *radius, *start_angle, *end_angle), reversed),
            Leg::Line { angle, reversed } => (ContourLeg::line(*angle), reversed),
        };
        if *reversed {
            leg.reversed()
        } else {
            leg
        }
    }
}

/// Starting argument of `t1`, `t2`, … or `P1`, `P2`, … at the anchor of the
/// contour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub factor: String,
    pub arg: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative quadrature tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<f64>,
    /// Pass threshold of relative residuals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Finite-difference step factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub richardson: Option<u32>,
    /// Largest relative series tail accepted at a comparison point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expansion {
    /// Closed Γ-product coefficients over a base.
    Gamma,
    /// Moments of `e^{P₀}` around the given coefficients.
    Standard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootQuantityName {
    Gamma,
    GammaOverDerivative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub exponent: Vec<i64>,
    pub coefficient: C,
}

/// What `verify` checks. Without it a single exponent set means the
/// GG-system and several blocks mean the Cayley system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckSpec {
    Gg,
    Cayley,
    /// Root of `P(t) = y0` for the one-block polynomial.
    Root {
        y0: C,
        guess: C,
        gamma: Vec<Monomial>,
        quantity: RootQuantityName,
    },
    /// Solution of the affine system given by `n` blocks `{0, e_1, …, e_n}`.
    Jacobian { gamma: Vec<Monomial> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    pub dimension: usize,
    /// Number of polynomials `k`; 0 for a single kernel `P`.
    #[serde(default)]
    pub blocks: usize,
    /// One exponent set, or one per block.
    pub exponents: Vec<Vec<Vec<i64>>>,
    /// Flat over the exponent sets, block after block.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<C>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u: Vec<Param>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<Param>,
    /// Euler parameters used by `verify` in place of `u`, `v`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_u: Option<Vec<Param>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_v: Option<Vec<Param>>,
    /// Indices into the exponent set, 0-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<usize>>,
    /// One chain of legs per variable.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contour: Vec<Vec<Leg>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branch: Vec<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<Precision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<Expansion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSpec>,
    /// Points (full coefficient vectors) at which `series` compares its sum
    /// with quadrature.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<C>>,
}

fn is_default(t: &Tolerances) -> bool {
    *t == Tolerances::default()
}

fn input(field: impl Into<String>, message: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("field `{}`: {message}", field.into()))
}

impl ProblemFile {
    /// Parses JSON; errors carry the line, column and field path.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Input(format!(
                "line {}, column {}: field `{path}`: {inner}",
                inner.line(),
                inner.column()
            ))
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    /// Structural checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(input("schema", format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        if self.dimension == 0 {
            return Err(input("dimension", "must be at least 1"));
        }
        let expected_sets = self.blocks.max(1);
        if self.exponents.len() != expected_sets {
            return Err(input(
                "exponents",
                format!("expected {expected_sets} exponent set(s) for blocks = {}, found {}", self.blocks, self.exponents.len()),
            ));
        }
        self.sets()?;
        let total: usize = self.exponents.iter().map(Vec::len).sum();
        if !self.coefficients.is_empty() && self.coefficients.len() != total {
            return Err(input("coefficients", format!("expected {total} values, found {}", self.coefficients.len())));
        }
        if !self.u.is_empty() && self.u.len() != self.dimension {
            return Err(input("u", format!("expected {} values, found {}", self.dimension, self.u.len())));
        }
        if !self.v.is_empty() && self.v.len() != self.blocks {
            return Err(input("v", format!("expected {} values, found {}", self.blocks, self.v.len())));
        }
        if let Some(eu) = &self.euler_u {
            if eu.len() != self.dimension {
                return Err(input("euler_u", format!("expected {} values, found {}", self.dimension, eu.len())));
            }
        }
        if let Some(ev) = &self.euler_v {
            if ev.len() != self.blocks {
                return Err(input("euler_v", format!("expected {} values, found {}", self.blocks, ev.len())));
            }
        }
        if !self.contour.is_empty() {
            self.contour()?;
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != total {
                return Err(input(format!("points[{i}]"), format!("expected {total} values, found {}", p.len())));
            }
        }
        Ok(())
    }

    pub fn sets(&self) -> Result<Vec<ExponentSet>, CliError> {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                for (j, row) in rows.iter().enumerate() {
                    if row.len() != self.dimension {
                        return Err(input(
                            format!("exponents[{i}][{j}]"),
                            format!("expected {} entries, found {}", self.dimension, row.len()),
                        ));
                    }
                }
                let members = rows.iter().map(|r| ExponentVector::new(r.clone())).collect();
                ExponentSet::new(self.dimension, members).map_err(|e| input(format!("exponents[{i}]"), e))
            })
            .collect()
    }

    pub fn coefficient_values(&self) -> Result<Vec<Complex64>, CliError> {
        if self.coefficients.is_empty() {
            return Err(input("coefficients", "required by this command"));
        }
        Ok(self.coefficients.iter().map(|&c| c.into()).collect())
    }

    /// `u`, defaulting to all ones (`α = 1`).
    pub fn u_values(&self) -> Vec<Complex64> {
        if self.u.is_empty() {
            vec![Complex64::new(1.0, 0.0); self.dimension]
        } else {
            self.u.iter().map(Param::to_c64).collect()
        }
    }

    /// `u` as exact rationals when every entry is exact (or defaulted).
    pub fn u_exact(&self) -> Option<Vec<Rational>> {
        if self.u.is_empty() {
            return Some(vec![rat(1); self.dimension]);
        }
        self.u.iter().map(|p| p.exact().cloned()).collect()
    }

    pub fn v_values(&self) -> Result<Vec<Complex64>, CliError> {
        if self.v.len() != self.blocks {
            return Err(input("v", format!("expected {} values, found {}", self.blocks, self.v.len())));
        }
        Ok(self.v.iter().map(Param::to_c64).collect())
    }

    pub fn euler_u_values(&self) -> Vec<Complex64> {
        match &self.euler_u {
            Some(eu) => eu.iter().map(Param::to_c64).collect(),
            None => self.u_values(),
        }
    }

    pub fn euler_v_values(&self) -> Result<Vec<Complex64>, CliError> {
        match &self.euler_v {
            Some(ev) => Ok(ev.iter().map(Param::to_c64).collect()),
            None => self.v_values(),
        }
    }

    /// The kernel (`blocks = 0`) or the polynomials `P_1,…,P_k`.
    pub fn polynomials(&self) -> Result<Vec<SparsePolynomial<Complex64>>, CliError> {
        let values = self.coefficient_values()?;
        let mut offset = 0;
        let mut out = Vec::new();
        for (i, set) in self.sets()?.iter().enumerate() {
            let p = SparsePolynomial::on_set(set, &values[offset..offset + set.len()])
                .map_err(|e| input(format!("exponents[{i}]"), e))?;
            offset += set.len();
            out.push(p);
        }
        Ok(out)
    }

    pub fn contour(&self) -> Result<ProductContour, CliError> {
        if self.contour.is_empty() {
            return Err(input("contour", "required by this command"));
        }
        if self.contour.len() != self.dimension {
            return Err(input(
                "contour",
                format!("expected {} chains, found {}", self.dimension, self.contour.len()),
            ));
        }
        let chains = self
            .contour
            .iter()
            .enumerate()
            .map(|(j, legs)| {
                ContourChain::new(legs.iter().map(Leg::to_leg).collect()).map_err(|e| input(format!("contour[{j}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let branch = self
            .branch
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let factor = parse_factor(&b.factor, self.dimension, self.blocks)
                    .ok_or_else(|| input(format!("branch[{i}].factor"), format!("unknown factor `{}`", b.factor)))?;
                Ok(BranchDatum { factor, arg: b.arg })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        ProductContour::new(chains, branch).map_err(|e| input("contour", e))
    }

    /// The base from `--base`, the file, or the first one enumerated.
    pub fn base(&self, set: &ExponentSet, override_indices: Option<&[usize]>) -> Result<Base, CliError> {
        let (field, indices) = match (override_indices, &self.base) {
            (Some(i), _) => ("--base", i.to_vec()),
            (None, Some(i)) => ("base", i.clone()),
            (None, None) => {
                return enumerate_bases(set)
                    .into_iter()
                    .next()
                    .ok_or_else(|| input("exponents", "no base exists: the exponents do not span"));
            }
        };
        Base::new(set, indices).map_err(|e| input(field, e))
    }
}

fn parse_factor(s: &str, dimension: usize, blocks: usize) -> Option<FactorId> {
    let (kind, index) = s.split_at(1);
    let i: usize = index.parse().ok()?;
    match kind {
        "t" if (1..=dimension).contains(&i) => Some(FactorId::T(i - 1)),
        "P" if (1..=blocks).contains(&i) => Some(FactorId::P(i - 1)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r#"{"schema": 1, "dimension": 1, "exponents": [[[1], [2]]],
            "coefficients": [[0.3, 0], [-1, 0]], "u": ["1"],
            "contour": [[{"kind": "line", "angle": 0}]]}"#
    }

    #[test]
    fn parses_a_gaussian_problem() {
        let p = ProblemFile::parse(minimal()).unwrap();
        assert_eq!(p.u, vec![Param::Exact(rat(1))]);
        assert_eq!(p.sets().unwrap()[0].len(), 2);
        assert_eq!(p.contour().unwrap().dimension(), 1);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = minimal().replace(r#""angle": 0}"#, r#""angle": "x"}"#);
        let e = ProblemFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("contour[0][0]"), "{e}");
        assert!(e.contains("line 3"), "{e}");

        let bad = minimal().replace(r#"[[0.3, 0], [-1, 0]]"#, r#"[[0.3, 0]]"#);
        let e = ProblemFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("`coefficients`"), "{e}");

        let bad = minimal().replace(r#"["1"]"#, r#"["1/0"]"#);
        let e = ProblemFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("u[0]") || e.contains("`u`"), "{e}");
    }

    #[test]
    fn parameters_accept_three_spellings() {
        let p: Vec<Param> = serde_json::from_str(r#"["-1/2", [0.5, 1], 2]"#).unwrap();
        assert_eq!(p[0].to_c64(), Complex64::new(-0.5, 0.0));
        assert_eq!(p[1], Param::Complex(C(0.5, 1.0)));
        assert_eq!(p[2], Param::Complex(C(2.0, 0.0)));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["-1/2",[0.5,1.0],[2.0,0.0]]"#);
    }

    #[test]
    fn factors_and_bases() {
        assert_eq!(parse_factor("t2", 2, 0), Some(FactorId::T(1)));
        assert_eq!(parse_factor("P1", 1, 1), Some(FactorId::P(0)));
        assert_eq!(parse_factor("P1", 1, 0), None);
        let p = ProblemFile::parse(minimal()).unwrap();
        let set = &p.sets().unwrap()[0];
        assert_eq!(p.base(set, None).unwrap().indices(), &[0]);
        assert_eq!(p.base(set, Some(&[1])).unwrap().indices(), &[1]);
        assert!(p.base(set, Some(&[0, 1])).is_err());
    }
}

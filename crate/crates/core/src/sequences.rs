//! Coefficient sequences `(a_n, b_n)` for the recurrence `z_{n+1} = a_n z_n + b_n`.
//!
//! Indexing is 1-based throughout: `coeff_at(spec, 1)` is `(a_1, b_1)`.
//! Every spec must produce `a_n != 0` at every index it can generate.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// What a table spec does for indices past its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// Keep returning the last entry.
    Repeat,
    /// Fail with [`Error::PastEnd`].
    Error,
}

/// Closed-form coefficient families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Formula {
    /// `a_n = (1 + 1/n^2)^2 e^{2 pi alpha i}`, `b_n = -2 a_n`, i.e. `g_n(z) = a_n (z - 2)`.
    NearParabolic { alpha: f64 },
    /// `a_n = 3` when `n` is a perfect square, `1` otherwise; `b_n = 5`.
    Sparse3Squares,
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::NearParabolic { .. } => "near_parabolic",
            Formula::Sparse3Squares => "sparse3_squares",
        }
    }

    /// `(log|a_n|, arg a_n)` with the magnitude taken from its closed form.
    fn log_polar(&self, n: usize) -> (f64, f64) {
        match *self {
            Formula::NearParabolic { alpha } => {
                let inv_sq = 1.0 / (n as f64 * n as f64);
                (2.0 * inv_sq.ln_1p(), reduce_angle(2.0 * PI * alpha))
            }
            Formula::Sparse3Squares => {
                if is_square(n) {
                    (3f64.ln(), 0.0)
                } else {
                    (0.0, 0.0)
                }
            }
        }
    }

    fn coeff(&self, n: usize) -> (Complex, Complex) {
        match *self {
            Formula::NearParabolic { .. } => {
                let (log_abs, arg) = self.log_polar(n);
                let a = Complex::from_polar(log_abs.exp(), arg);
                (a, -2.0 * a)
            }
            Formula::Sparse3Squares => {
                let a = if is_square(n) { 3.0 } else { 1.0 };
                (Complex::new(a, 0.0), Complex::new(5.0, 0.0))
            }
        }
    }

    /// Limit of `(a_n, b_n)` as `n -> infinity`, when the family has one.
    pub fn limit_coefficients(&self) -> Option<(Complex, Complex)> {
        match *self {
            Formula::NearParabolic { alpha } => {
                let a = Complex::from_polar(1.0, reduce_angle(2.0 * PI * alpha));
                Some((a, -2.0 * a))
            }
            Formula::Sparse3Squares => None,
        }
    }
}

/// Generator of the coefficient pairs `(a_n, b_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SpecDocument", try_from = "SpecDocument")]
pub enum CoefficientSpec {
    Constant {
        a: Complex,
        b: Complex,
    },
    /// Entry `k` (1-based) is used at every index `n` with `(n - 1) mod p = k - 1`.
    Periodic(Vec<(Complex, Complex)>),
    Formula(Formula),
    Table {
        entries: Vec<(Complex, Complex)>,
        tail: TailRule,
    },
}

impl CoefficientSpec {
    pub fn constant(a: Complex, b: Complex) -> Result<Self> {
        let spec = CoefficientSpec::Constant { a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn periodic(entries: Vec<(Complex, Complex)>) -> Result<Self> {
        let spec = CoefficientSpec::Periodic(entries);
        spec.validate()?;
        Ok(spec)
    }

    pub fn table(entries: Vec<(Complex, Complex)>, tail: TailRule) -> Result<Self> {
        let spec = CoefficientSpec::Table { entries, tail };
        spec.validate()?;
        Ok(spec)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoefficientSpec::Constant { .. } => "constant",
            CoefficientSpec::Periodic(_) => "periodic",
            CoefficientSpec::Formula(_) => "formula",
            CoefficientSpec::Table { .. } => "table",
        }
    }

    /// Checks every invariant that does not need unbounded enumeration.
    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientSpec::Constant { a, b } => check_pair(1, *a, *b),
            CoefficientSpec::Periodic(entries) | CoefficientSpec::Table { entries, .. } => {
                if entries.is_empty() {
                    return Err(Error::EmptyPeriod);
                }
                entries
                    .iter()
                    .enumerate()
                    .try_for_each(|(k, (a, b))| check_pair(k + 1, *a, *b))
            }
            CoefficientSpec::Formula(Formula::NearParabolic { alpha }) => {
                if alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("alpha = {alpha}")))
                }
            }
            // 1 and 3 are the only values produced.
            CoefficientSpec::Formula(Formula::Sparse3Squares) => Ok(()),
        }
    }

    /// The pair `(a_n, b_n)` for 1-based index `n`.
    pub fn coeff_at(&self, n: usize) -> Result<(Complex, Complex)> {
        if n == 0 {
            return Err(Error::IndexOutOfRange("coefficient indices start at 1".into()));
        }
        let (a, b) = match self {
            CoefficientSpec::Constant { a, b } => (*a, *b),
            CoefficientSpec::Periodic(entries) => entries[(n - 1) % entries.len()],
            CoefficientSpec::Formula(f) => f.coeff(n),
            CoefficientSpec::Table { entries, tail } => match entries.get(n - 1) {
                Some(pair) => *pair,
                None => match tail {
                    TailRule::Repeat => *entries.last().ok_or(Error::EmptyPeriod)?,
                    TailRule::Error => {
                        return Err(Error::PastEnd {
                            index: n,
                            len: entries.len(),
                        })
                    }
                },
            },
        };
        check_pair(n, a, b)?;
        Ok((a, b))
    }

    /// `(log|a_n|, arg a_n)`, using closed forms for formula families.
    pub fn log_polar_at(&self, n: usize) -> Result<(f64, f64)> {
        match self {
            CoefficientSpec::Formula(f) => {
                if n == 0 {
                    return Err(Error::IndexOutOfRange("coefficient indices start at 1".into()));
                }
                Ok(f.log_polar(n))
            }
            _ => {
                let (a, _) = self.coeff_at(n)?;
                Ok((a.norm().ln(), a.arg()))
            }
        }
    }

    /// One full cycle of coefficients for constant and periodic specs.
    pub fn cycle(&self) -> Option<Vec<(Complex, Complex)>> {
        match self {
            CoefficientSpec::Constant { a, b } => Some(vec![(*a, *b)]),
            CoefficientSpec::Periodic(entries) => Some(entries.clone()),
            _ => None,
        }
    }

    /// Same spec with every pair `(a, b)` replaced by `f(a, b)`. Formula specs return `None`.
    pub fn map_coefficients(&self, f: impl Fn(Complex, Complex) -> (Complex, Complex)) -> Option<Self> {
        match self {
            CoefficientSpec::Constant { a, b } => {
                let (a, b) = f(*a, *b);
                Some(CoefficientSpec::Constant { a, b })
            }
            CoefficientSpec::Periodic(entries) => Some(CoefficientSpec::Periodic(
                entries.iter().map(|(a, b)| f(*a, *b)).collect(),
            )),
            CoefficientSpec::Table { entries, tail } => Some(CoefficientSpec::Table {
                entries: entries.iter().map(|(a, b)| f(*a, *b)).collect(),
                tail: *tail,
            }),
            CoefficientSpec::Formula(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Free-function form of [`CoefficientSpec::coeff_at`].
pub fn coeff_at(spec: &CoefficientSpec, n: usize) -> Result<(Complex, Complex)> {
    spec.coeff_at(n)
}

/// Free-function form of [`CoefficientSpec::validate`].
pub fn validate(spec: &CoefficientSpec) -> Result<()> {
    spec.validate()
}

fn check_pair(index: usize, a: Complex, b: Complex) -> Result<()> {
    if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
        return Err(Error::NonFiniteCoefficient { index });
    }
    if a == Complex::new(0.0, 0.0) {
        return Err(Error::ZeroCoefficient { index });
    }
    Ok(())
}

fn is_square(n: usize) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Reduces an angle to `(-pi, pi]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Classification of a single map `g(z) = a z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapClass {
    /// `a = 1` or `a = -1`.
    Parabolic,
    /// `|a| = 1`, `a != +-1`.
    Elliptic,
    /// `|a| != 1` and `a` real.
    Hyperbolic,
    /// `|a| != 1`, `a` not real.
    Loxodromic,
}

impl MapClass {
    /// Hyperbolic maps are the real special case of loxodromic ones.
    pub fn is_loxodromic(self) -> bool {
        matches!(self, MapClass::Hyperbolic | MapClass::Loxodromic)
    }
}

pub fn map_class(a: Complex) -> MapClass {
    const TOL: f64 = 1e-12;
    let unimodular = (a.norm() - 1.0).abs() <= TOL;
    let real = a.im.abs() <= TOL * a.norm();
    match (unimodular, real) {
        (true, true) => MapClass::Parabolic,
        (true, false) => MapClass::Elliptic,
        (false, true) => MapClass::Hyperbolic,
        (false, false) => MapClass::Loxodromic,
    }
}

/// Parameters consumed by the parameterised built-in examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams {
    pub alpha: f64,
    pub period: usize,
    pub a: Complex,
    pub b: Complex,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            period: 3,
            a: Complex::new(1.0, 0.0),
            b: Complex::new(0.0, 0.0),
        }
    }
}

pub const BUILTIN_NAMES: [&str; 6] = [
    "near_parabolic",
    "alternating_2_half",
    "period3_2_i_third",
    "sparse3_periodic",
    "sparse3_squares",
    "constant",
];

/// Built-in coefficient families from the worked examples.
///
/// `near_parabolic` reads `params.alpha`, `sparse3_periodic` reads `params.period`
/// and `constant` reads `params.a` / `params.b`.
pub fn builtin_example(name: &str, params: &ExampleParams) -> Result<CoefficientSpec> {
    let five = Complex::new(5.0, 0.0);
    let spec = match name {
        "near_parabolic" => CoefficientSpec::Formula(Formula::NearParabolic {
            alpha: params.alpha,
        }),
        "alternating_2_half" => CoefficientSpec::Periodic(vec![
            (Complex::new(2.0, 0.0), five),
            (Complex::new(0.5, 0.0), five),
        ]),
        "period3_2_i_third" => CoefficientSpec::Periodic(vec![
            (Complex::new(2.0, 0.0), five),
            (Complex::new(0.0, 1.0), five),
            (Complex::new(1.0 / 3.0, 0.0), five),
        ]),
        "sparse3_periodic" => {
            let p = params.period;
            if p == 0 {
                return Err(Error::InvalidParameter("period must be at least 1".into()));
            }
            CoefficientSpec::Periodic(
                (1..=p)
                    .map(|k| (Complex::new(if k == p { 3.0 } else { 1.0 }, 0.0), five))
                    .collect(),
            )
        }
        "sparse3_squares" => CoefficientSpec::Formula(Formula::Sparse3Squares),
        "constant" => CoefficientSpec::Constant {
            a: params.a,
            b: params.b,
        },
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    spec.validate()?;
    Ok(spec)
}

// JSON layout: every coefficient pair is written as [Re a, Im a, Re b, Im b].

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecDocument {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    formula: Option<FormulaDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FormulaDocument {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

fn pair_to_row((a, b): (Complex, Complex)) -> [f64; 4] {
    [a.re, a.im, b.re, b.im]
}

fn row_to_pair(row: [f64; 4]) -> (Complex, Complex) {
    (Complex::new(row[0], row[1]), Complex::new(row[2], row[3]))
}

impl From<CoefficientSpec> for SpecDocument {
    fn from(spec: CoefficientSpec) -> Self {
        let mut doc = SpecDocument {
            kind: spec.kind().to_string(),
            constant: None,
            period: None,
            table: None,
            formula: None,
            tail: None,
        };
        match spec {
            CoefficientSpec::Constant { a, b } => doc.constant = Some(pair_to_row((a, b))),
            CoefficientSpec::Periodic(entries) => {
                doc.period = Some(entries.into_iter().map(pair_to_row).collect())
            }
            CoefficientSpec::Formula(f) => {
                let mut params = BTreeMap::new();
                if let Formula::NearParabolic { alpha } = f {
                    params.insert("alpha".to_string(), alpha);
                }
                doc.formula = Some(FormulaDocument {
                    name: f.name().to_string(),
                    params,
                });
            }
            CoefficientSpec::Table { entries, tail } => {
                doc.table = Some(entries.into_iter().map(pair_to_row).collect());
                doc.tail = Some(
                    match tail {
                        TailRule::Repeat => "repeat",
                        TailRule::Error => "error",
                    }
                    .to_string(),
                );
            }
        }
        doc
    }
}

impl TryFrom<SpecDocument> for CoefficientSpec {
    type Error = Error;

    fn try_from(doc: SpecDocument) -> Result<Self> {
        let missing = |field: &str| Error::Format(format!("kind `{}` needs field `{field}`", doc.kind));
        let spec = match doc.kind.as_str() {
            "constant" => {
                let (a, b) = row_to_pair(doc.constant.ok_or_else(|| missing("constant"))?);
                CoefficientSpec::Constant { a, b }
            }
            "periodic" => CoefficientSpec::Periodic(
                doc.period
                    .clone()
                    .ok_or_else(|| missing("period"))?
                    .into_iter()
                    .map(row_to_pair)
                    .collect(),
            ),
            "table" => {
                let tail = match doc.tail.as_deref() {
                    Some("repeat") => TailRule::Repeat,
                    Some("error") => TailRule::Error,
                    Some(other) => return Err(Error::Format(format!("unknown tail rule `{other}`"))),
                    None => return Err(missing("tail")),
                };
                CoefficientSpec::Table {
                    entries: doc
                        .table
                        .clone()
                        .ok_or_else(|| missing("table"))?
                        .into_iter()
                        .map(row_to_pair)
                        .collect(),
                    tail,
                }
            }
            "formula" => {
                let formula = doc.formula.as_ref().ok_or_else(|| missing("formula"))?;
                match formula.name.as_str() {
                    "near_parabolic" => CoefficientSpec::Formula(Formula::NearParabolic {
                        alpha: formula.params.get("alpha").copied().unwrap_or(0.0),
                    }),
                    "sparse3_squares" => CoefficientSpec::Formula(Formula::Sparse3Squares),
                    other => return Err(Error::UnknownExample(other.to_string())),
                }
            }
            other => return Err(Error::Format(format!("unknown kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn period3_second_entry_is_i() {
        let spec = builtin_example("period3_2_i_third", &ExampleParams::default()).unwrap();
        assert_eq!(spec.coeff_at(2).unwrap(), (c(0.0, 1.0), c(5.0, 0.0)));
        assert_eq!(spec.coeff_at(5).unwrap(), (c(0.0, 1.0), c(5.0, 0.0)));
        assert_eq!(spec.coeff_at(3).unwrap().0, c(1.0 / 3.0, 0.0));
    }

    #[test]
    fn identity_constant() {
        let spec = CoefficientSpec::constant(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(spec.coeff_at(7).unwrap(), (c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn alternating_even_index_is_half() {
        let spec = builtin_example("alternating_2_half", &ExampleParams::default()).unwrap();
        assert_eq!(spec.coeff_at(4).unwrap(), (c(0.5, 0.0), c(5.0, 0.0)));
        assert_eq!(spec.coeff_at(3).unwrap(), (c(2.0, 0.0), c(5.0, 0.0)));
    }

    #[test]
    fn sparse3_squares_marks_perfect_squares() {
        let spec = builtin_example("sparse3_squares", &ExampleParams::default()).unwrap();
        assert_eq!(spec.coeff_at(4).unwrap().0, c(3.0, 0.0));
        assert_eq!(spec.coeff_at(5).unwrap().0, c(1.0, 0.0));
        assert_eq!(spec.coeff_at(1).unwrap().0, c(3.0, 0.0));
        assert_eq!(spec.coeff_at(10_000).unwrap().0, c(3.0, 0.0));
        assert_eq!(spec.coeff_at(9_999).unwrap().0, c(1.0, 0.0));
    }

    #[test]
    fn sparse3_periodic_places_three_at_multiples_of_p() {
        let params = ExampleParams {
            period: 4,
            ..Default::default()
        };
        let spec = builtin_example("sparse3_periodic", &params).unwrap();
        for n in 1..=20 {
            let expect = if n % 4 == 0 { 3.0 } else { 1.0 };
            assert_eq!(spec.coeff_at(n).unwrap().0, c(expect, 0.0), "n = {n}");
        }
    }

    #[test]
    fn near_parabolic_limit_is_translation_by_minus_two() {
        let spec = builtin_example("near_parabolic", &ExampleParams::default()).unwrap();
        let (a, b) = spec.coeff_at(1_000_000).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-11);
        assert!((b - c(-2.0, 0.0)).norm() < 1e-11);
        let CoefficientSpec::Formula(f) = spec else { unreachable!() };
        let (la, lb) = f.limit_coefficients().unwrap();
        assert_eq!(map_class(la), MapClass::Parabolic);
        assert_eq!((la, lb), (c(1.0, 0.0), c(-2.0, 0.0)));
    }

    #[test]
    fn near_parabolic_log_magnitude_is_closed_form() {
        let spec = CoefficientSpec::Formula(Formula::NearParabolic { alpha: 0.25 });
        let (la, arg) = spec.log_polar_at(3).unwrap();
        assert_eq!(la, 2.0 * (1.0f64 / 9.0).ln_1p());
        assert!((arg - PI / 2.0).abs() < 1e-15);
        let (a, b) = spec.coeff_at(3).unwrap();
        assert!((a.norm() - (10.0f64 / 9.0).powi(2)).abs() < 1e-14);
        assert_eq!(b, -2.0 * a);
    }

    #[test]
    fn near_parabolic_deviation_sum_is_dominated_by_three_over_n_squared() {
        let spec = CoefficientSpec::Formula(Formula::NearParabolic { alpha: 0.7 });
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for n in 1..=100_000 {
            let (a, _) = spec.coeff_at(n).unwrap();
            lhs += (a.norm() - 1.0).abs();
            rhs += 3.0 / (n as f64 * n as f64);
            if n % 1000 == 0 {
                assert!(lhs <= rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn validate_rejects_zero_and_empty() {
        assert_eq!(
            CoefficientSpec::periodic(vec![(c(0.0, 0.0), c(1.0, 0.0))]),
            Err(Error::ZeroCoefficient { index: 1 })
        );
        assert!(CoefficientSpec::periodic(vec![(c(2.0, 0.0), c(5.0, 0.0)), (c(0.5, 0.0), c(5.0, 0.0))]).is_ok());
        assert_eq!(CoefficientSpec::table(vec![], TailRule::Repeat), Err(Error::EmptyPeriod));
        assert_eq!(CoefficientSpec::periodic(vec![]), Err(Error::EmptyPeriod));
        assert!(matches!(
            CoefficientSpec::constant(c(f64::NAN, 0.0), c(0.0, 0.0)),
            Err(Error::NonFiniteCoefficient { .. })
        ));
    }

    #[test]
    fn table_tail_rules() {
        let entries = vec![(c(2.0, 0.0), c(1.0, 0.0)), (c(3.0, 0.0), c(0.0, 0.0))];
        let repeat = CoefficientSpec::table(entries.clone(), TailRule::Repeat).unwrap();
        assert_eq!(repeat.coeff_at(10).unwrap().0, c(3.0, 0.0));
        let strict = CoefficientSpec::table(entries, TailRule::Error).unwrap();
        assert_eq!(strict.coeff_at(3), Err(Error::PastEnd { index: 3, len: 2 }));
        assert!(strict.coeff_at(0).is_err());
    }

    #[test]
    fn unknown_example() {
        assert_eq!(
            builtin_example("lorenz", &ExampleParams::default()),
            Err(Error::UnknownExample("lorenz".into()))
        );
        let zero_period = ExampleParams {
            period: 0,
            ..Default::default()
        };
        assert!(builtin_example("sparse3_periodic", &zero_period).is_err());
    }

    #[test]
    fn map_classes() {
        assert_eq!(map_class(c(-1.0, 0.0)), MapClass::Parabolic);
        assert_eq!(map_class(Complex::from_polar(1.0, 0.3)), MapClass::Elliptic);
        assert_eq!(map_class(c(0.5, 0.0)), MapClass::Hyperbolic);
        assert_eq!(map_class(c(0.5, 0.5)), MapClass::Loxodromic);
        assert!(MapClass::Hyperbolic.is_loxodromic());
    }

    #[test]
    fn json_layout() {
        let spec = builtin_example("alternating_2_half", &ExampleParams::default()).unwrap();
        let value: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(value["kind"], "periodic");
        assert_eq!(value["period"][1], serde_json::json!([0.5, 0.0, 5.0, 0.0]));

        let doc = r#"{"kind": "formula", "formula": {"name": "near_parabolic", "params": {"alpha": 0.5}}}"#;
        let spec = CoefficientSpec::from_json(doc).unwrap();
        assert_eq!(spec, CoefficientSpec::Formula(Formula::NearParabolic { alpha: 0.5 }));

        let doc = r#"{"kind": "table", "table": [[2, 0, 1, 0]], "tail": "error"}"#;
        assert!(matches!(
            CoefficientSpec::from_json(doc).unwrap(),
            CoefficientSpec::Table { tail: TailRule::Error, .. }
        ));

        assert!(CoefficientSpec::from_json(r#"{"kind": "table", "table": [[2, 0, 1, 0]]}"#).is_err());
        assert!(CoefficientSpec::from_json(r#"{"kind": "periodic", "period": [[0, 0, 1, 0]]}"#).is_err());
    }

    #[test]
    fn reduce_angle_range() {
        for k in -20..=20 {
            let t = reduce_angle(0.37 * k as f64);
            assert!(t > -PI && t <= PI);
        }
        assert_eq!(reduce_angle(PI), PI);
        assert_eq!(reduce_angle(-PI), PI);
    }
}

//! Perturbation plans that defeat every shadow, and the best-shadow oracle.
//!
//! Every true orbit is fixed by `d = w_1 - z_1`, and
//! `w_n - z_n = p(n, 1) d + R_{n-1} = p(n, 1) (d - c_n)` with
//! `c_n = -R_{n-1} / p(n, 1) = -sum_{j<n} r_j / p(j+1, 1)`. The oracle minimizes
//! `max_n |p(n, 1)| |d - c_n|` over `d`, which is a convex function of `d`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::Criterion;
use crate::dynamics::PerturbedOrbit;
use crate::error::{Error, Result};
use crate::products::{build_ledger, PartialProductLedger, ScaledComplex};
use crate::sequences::{CoefficientSpec, Complex};

const GRID: usize = 64;
const LEVELS: usize = 4;
const SHRINK: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanVariant {
    /// `r_n = epsilon`.
    ConstantEps,
    /// `r_n = epsilon p(n+1, 1) / |p(n+1, 1)|`.
    PhaseAligned,
    /// `r_n = (C epsilon / M) p(n+1, 1)` with `M = sup |p(n, 1)|`.
    ScaledProduct,
}

/// The epsilon-free part of a plan, as carried by an Unstable verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessTemplate {
    pub variant: PlanVariant,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
    /// `ln M`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationPlan {
    #[serde(flatten)]
    pub template: WitnessTemplate,
    pub epsilon: f64,
}

impl PerturbationPlan {
    pub fn new(template: WitnessTemplate, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
        }
        if template.variant == PlanVariant::ScaledProduct {
            match (template.c, template.log_m) {
                (Some(c), Some(m)) if c > 0.0 && c <= 1.0 && m.is_finite() => {}
                _ => {
                    return Err(Error::InvalidParameter(
                        "scaled_product needs C in (0, 1] and a finite M".into(),
                    ))
                }
            }
        }
        Ok(Self { template, epsilon })
    }

    pub fn variant(&self) -> PlanVariant {
        self.template.variant
    }

    /// `r_n` for `1 <= n < ledger.horizon()`, clamped to the budget.
    pub fn perturbation(&self, ledger: &PartialProductLedger, n: usize) -> Result<Complex> {
        let eps = self.epsilon;
        let r = match self.template.variant {
            PlanVariant::ConstantEps => Complex::new(eps, 0.0),
            PlanVariant::PhaseAligned => {
                let p = ledger.partial_product(n + 1, 1)?;
                Complex::from_polar(eps, p.arg)
            }
            PlanVariant::ScaledProduct => {
                let p = ledger.partial_product(n + 1, 1)?;
                let c = self.template.c.unwrap_or(1.0);
                let log_m = self.template.log_m.unwrap_or(0.0);
                Complex::from_polar(c * eps * (p.log_abs - log_m).exp(), p.arg)
            }
        };
        let modulus = r.norm();
        Ok(if modulus > eps { r * (eps / modulus) } else { r })
    }

    /// `r_1..r_{len-1}`.
    pub fn perturbations(&self, ledger: &PartialProductLedger, len: usize) -> Result<Vec<Complex>> {
        (1..len).map(|n| self.perturbation(ledger, n)).collect()
    }
}

/// True when every `a_n` with `n < horizon` is real and positive.
pub fn real_positive_coefficients(spec: &CoefficientSpec, horizon: usize) -> Result<bool> {
    let positive = |a: Complex| a.im == 0.0 && a.re > 0.0;
    if let Some(cycle) = spec.cycle() {
        return Ok(cycle.iter().all(|(a, _)| positive(*a)));
    }
    for n in 1..horizon {
        if !positive(spec.coeff_at(n)?.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Plan used by the instability proofs, or a direct plan for any spec when `criterion` is `None`.
pub fn witness_template(
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    criterion: Option<Criterion>,
) -> Result<WitnessTemplate> {
    if let Some(criterion) = criterion {
        if !criterion.is_unstable() {
            return Err(Error::NotUnstable(criterion.name().to_string()));
        }
        if criterion == Criterion::LinearGrowthProducts {
            let log_m = ledger.log_abs_values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            return Ok(WitnessTemplate {
                variant: PlanVariant::ScaledProduct,
                c: Some(1.0),
                log_m: Some(log_m),
            });
        }
    }
    let variant = if real_positive_coefficients(spec, ledger.horizon())? {
        PlanVariant::ConstantEps
    } else {
        PlanVariant::PhaseAligned
    };
    Ok(WitnessTemplate {
        variant,
        c: None,
        log_m: None,
    })
}

/// The perturbation plan from the instability proof behind `criterion`.
pub fn make_witness(
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    criterion: Criterion,
    epsilon: f64,
) -> Result<PerturbationPlan> {
    PerturbationPlan::new(witness_template(spec, ledger, Some(criterion))?, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergencePoint {
    pub n: usize,
    pub value: f64,
}

/// Best-shadow values on prefixes of one orbit, forced nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceCurve {
    pub points: Vec<DivergencePoint>,
}

impl DivergenceCurve {
    /// Value at checkpoint `n`, if recorded.
    pub fn at(&self, n: usize) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.value)
    }

    pub fn last(&self) -> Option<DivergencePoint> {
        self.points.last().copied()
    }

    /// `d_N / d_{N / factor}`; `None` when that checkpoint is missing.
    pub fn growth_factor(&self, factor: usize) -> Option<f64> {
        let last = self.last()?;
        let base = self.at(last.n / factor)?;
        Some(if base == 0.0 {
            if last.value == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            last.value / base
        })
    }

    /// Columns `n, d_n, log10 d_n`.
    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["n", "d_n", "log10_d_n"])?;
        for p in &self.points {
            out.write_record([p.n.to_string(), p.value.to_string(), p.value.log10().to_string()])?;
        }
        out.flush()
    }
}

/// Checkpoints `2, 4, 8, ...` below `len`, plus `len / 4`, `len / 2` and `len`.
pub fn checkpoints(len: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(2usize), |n| n.checked_mul(2))
        .take_while(|n| *n < len)
        .collect();
    out.extend([len / 4, len / 2, len]);
    out.retain(|n| *n >= 2);
    out.sort_unstable();
    out.dedup();
    out
}

/// Generates the plan's orbit from `w1` and its divergence curve.
pub fn run_witness(
    spec: &CoefficientSpec,
    plan: &PerturbationPlan,
    w1: Complex,
    len: usize,
) -> Result<(PerturbedOrbit, DivergenceCurve)> {
    if len < 2 {
        return Err(Error::HorizonTooSmall { got: len, need: 2 });
    }
    let ledger = build_ledger(spec, len)?;
    let r = plan.perturbations(&ledger, len)?;
    let orbit = PerturbedOrbit::generate(spec, w1, r, plan.epsilon)?;
    let centres = ShadowCentres::new(&orbit, &ledger, len)?;
    let mut points = Vec::new();
    let mut running: f64 = 0.0;
    for n in checkpoints(len) {
        let (_, value) = centres.minimize(n);
        running = running.max(value);
        points.push(DivergencePoint { n, value: running });
    }
    Ok((orbit, DivergenceCurve { points }))
}

/// `(z_1, value)` minimizing `max_{1 <= n <= len} |w_n - z_n|` over true orbits `z`.
pub fn best_shadow_oracle(
    orbit: &PerturbedOrbit,
    ledger: &PartialProductLedger,
    len: usize,
) -> Result<(Complex, f64)> {
    if len == 0 || len > orbit.len() {
        return Err(Error::IndexOutOfRange(format!(
            "oracle length {len} outside 1..={}",
            orbit.len()
        )));
    }
    let centres = ShadowCentres::new(orbit, ledger, len)?;
    let (d, value) = centres.minimize(len);
    Ok((orbit.w1() - d, value))
}

/// Weights `L_n` and series terms `r_j / p(j+1, 1)` of the oracle objective.
///
/// The minimizer sits within `f / |p(top, 1)|` of `c_top`, where `top` maximizes
/// `L_n`. For expanding products that radius is far below the spacing of binary64
/// near `c_top`, so the search runs in `d = c_top + rho u` with `|u| <= 1` and the
/// centres are kept as offsets `c_n - c_top` summed directly from the series terms.
struct ShadowCentres {
    log_weight: Vec<f64>,
    // terms[j - 1] = r_j / p(j+1, 1)
    terms: Vec<ScaledComplex>,
}

/// The objective for one prefix, in the scaled coordinate `u`.
struct Objective<'a> {
    log_weight: &'a [f64],
    offset: Vec<ScaledComplex>,
    log_rho: f64,
    // (|p(n,1)|^2, c_n - c_top, rho) when all of them sit well inside binary64.
    fast: Option<(Vec<f64>, Vec<Complex>, f64)>,
}

impl Objective<'_> {
    /// `ln max_n |p(n, 1)| |rho u - (c_n - c_top)|`.
    fn eval(&self, u: Complex) -> f64 {
        match &self.fast {
            Some((w2, offset, rho)) => {
                let x = u * *rho;
                let m = w2.iter().zip(offset).map(|(w, c)| w * (x - c).norm_sqr()).fold(0.0, f64::max);
                0.5 * m.ln()
            }
            None => {
                let x = if u.norm() == 0.0 {
                    ScaledComplex::zero()
                } else {
                    ScaledComplex::from_log_polar(self.log_rho + u.norm().ln(), u.arg())
                };
                self.log_weight
                    .iter()
                    .zip(&self.offset)
                    .map(|(l, c)| l + x.add(c.neg()).ln_abs())
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }
}

impl ShadowCentres {
    fn new(orbit: &PerturbedOrbit, ledger: &PartialProductLedger, len: usize) -> Result<Self> {
        if ledger.horizon() < len {
            return Err(Error::HorizonTooSmall {
                got: ledger.horizon(),
                need: len,
            });
        }
        let mut terms = Vec::with_capacity(len.saturating_sub(1));
        for j in 1..len {
            let p = ledger.partial_product(j + 1, 1)?;
            terms.push(ScaledComplex::from_log_polar(-p.log_abs, -p.arg).mul(orbit.perturbation(j)));
        }
        Ok(Self {
            log_weight: ledger.log_abs_values()[..len].to_vec(),
            terms,
        })
    }

    /// Minimizes over the first `len` terms; returns `(d, value)`.
    fn minimize(&self, len: usize) -> (Complex, f64) {
        let weights = &self.log_weight[..len];
        let top = (0..len)
            .max_by(|i, j| weights[*i].total_cmp(&weights[*j]).then(j.cmp(i)))
            .unwrap_or(0);

        // c_n - c_top = sum_{j=n}^{top-1} t_j below top and -sum_{j=top}^{n-1} t_j above.
        let mut offset = vec![ScaledComplex::zero(); len];
        let mut acc = ScaledComplex::zero();
        for n in (0..top).rev() {
            acc = acc.add(self.terms[n]);
            offset[n] = acc;
        }
        let mut acc = ScaledComplex::zero();
        for (slot, term) in offset.iter_mut().skip(top + 1).zip(&self.terms[top..]) {
            acc = acc.add(term.neg());
            *slot = acc;
        }
        let c_top = (0..top).fold(ScaledComplex::zero(), |s, j| s.add(self.terms[j].neg()));

        let raw = Objective {
            log_weight: weights,
            offset: offset.clone(),
            log_rho: 0.0,
            fast: None,
        };
        // Seeds: d = c_top and d = 0 (that is, u = c_1 - c_top with rho = 1).
        let at_anchor = raw.eval(Complex::new(0.0, 0.0));
        let at_zero = weights
            .iter()
            .zip(&offset)
            .map(|(l, c)| l + offset[0].add(c.neg()).ln_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut best_log, from_zero) = if at_zero < at_anchor { (at_zero, true) } else { (at_anchor, false) };
        if best_log == f64::NEG_INFINITY {
            return (Complex::new(0.0, 0.0), 0.0);
        }

        // Any improvement satisfies |p(top, 1)| |d - c_top| <= value.
        let log_rho = best_log - weights[top];
        let fits = weights.iter().all(|l| l.abs() < 300.0)
            && offset.iter().all(|c| c.is_zero() || c.ln_abs().abs() < 250.0)
            && log_rho.abs() < 250.0;
        let fast = fits.then(|| {
            (
                weights.iter().map(|l| (2.0 * l).exp()).collect(),
                offset.iter().map(|c| c.to_complex()).collect(),
                log_rho.exp(),
            )
        });
        let objective = Objective {
            log_weight: weights,
            offset,
            log_rho,
            fast,
        };

        let better = |a: (Complex, f64), b: (Complex, f64)| -> (Complex, f64) {
            let ord = a.1.total_cmp(&b.1).then(a.0.re.total_cmp(&b.0.re)).then(a.0.im.total_cmp(&b.0.im));
            if ord.is_le() {
                a
            } else {
                b
            }
        };
        let mut best_u: Option<Complex> = None;
        let mut centre = Complex::new(0.0, 0.0);
        let mut radius = 1.0;
        for _ in 0..=LEVELS {
            let step = 2.0 * radius / (GRID - 1) as f64;
            let found = (0..GRID * GRID)
                .into_par_iter()
                .map(|k| {
                    let u = centre + Complex::new(-radius + step * (k / GRID) as f64, -radius + step * (k % GRID) as f64);
                    (u, objective.eval(u))
                })
                .reduce(|| (Complex::new(0.0, 0.0), f64::INFINITY), better);
            if found.1 < best_log {
                best_log = found.1;
                best_u = Some(found.0);
            }
            if let Some(u) = best_u {
                centre = u;
            }
            radius /= SHRINK;
        }

        let d = match best_u {
            Some(u) if u.norm() > 0.0 => c_top
                .add(ScaledComplex::from_log_polar(log_rho + u.norm().ln(), u.arg()))
                .to_complex(),
            Some(_) => c_top.to_complex(),
            None if from_zero => Complex::new(0.0, 0.0),
            None => c_top.to_complex(),
        };
        (d, best_log.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{residual_ledger, shadow_contracting, shadow_expanding};
    use crate::sequences::{builtin_example, ExampleParams, Formula};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn builtin(name: &str) -> CoefficientSpec {
        builtin_example(name, &ExampleParams::default()).unwrap()
    }

    fn near_parabolic(alpha: f64) -> CoefficientSpec {
        CoefficientSpec::Formula(Formula::NearParabolic { alpha })
    }

    fn oracle_value(spec: &CoefficientSpec, plan: &PerturbationPlan, len: usize) -> f64 {
        let ledger = build_ledger(spec, len).unwrap();
        let r = plan.perturbations(&ledger, len).unwrap();
        let orbit = PerturbedOrbit::generate(spec, c(0.0, 0.0), r, plan.epsilon).unwrap();
        best_shadow_oracle(&orbit, &ledger, len).unwrap().1
    }

    #[test]
    fn plan_selection() {
        let alt = builtin("alternating_2_half");
        let ledger = build_ledger(&alt, 100).unwrap();
        let plan = make_witness(&alt, &ledger, Criterion::BoundedProducts, 1.0).unwrap();
        assert_eq!(plan.variant(), PlanVariant::ConstantEps);
        assert!(plan.perturbations(&ledger, 100).unwrap().iter().all(|r| *r == c(1.0, 0.0)));

        let np = near_parabolic(0.5);
        let ledger = build_ledger(&np, 500).unwrap();
        let plan = make_witness(&np, &ledger, Criterion::GeomeanSubexponential, 0.1).unwrap();
        assert_eq!(plan.variant(), PlanVariant::PhaseAligned);
        for r in plan.perturbations(&ledger, 500).unwrap() {
            assert!(r.norm() <= 0.1);
            assert!((r.norm() - 0.1).abs() < 1e-15);
        }

        let sq = builtin("sparse3_squares");
        let ledger = build_ledger(&sq, 100).unwrap();
        assert_eq!(
            make_witness(&sq, &ledger, Criterion::GeomeanSubexponential, 1.0).unwrap().variant(),
            PlanVariant::ConstantEps
        );
        assert!(matches!(
            make_witness(&sq, &ledger, Criterion::GeomeanExpanding, 1.0),
            Err(Error::NotUnstable(_))
        ));
    }

    #[test]
    fn scaled_product_plan_gives_linear_residual() {
        let np = near_parabolic(0.3);
        let ledger = build_ledger(&np, 2000).unwrap();
        let plan = make_witness(&np, &ledger, Criterion::LinearGrowthProducts, 0.5).unwrap();
        assert_eq!(plan.variant(), PlanVariant::ScaledProduct);
        let r = plan.perturbations(&ledger, 2000).unwrap();
        assert!(r.iter().all(|x| x.norm() <= 0.5));
        let orbit = PerturbedOrbit::generate(&np, c(0.0, 0.0), r, 0.5).unwrap();
        let res = residual_ledger(&orbit, &np).unwrap();
        let m = plan.template.log_m.unwrap().exp();
        for n in [1usize, 10, 100, 1999] {
            let expect = ledger.partial_product(n + 1, 1).unwrap().value() * (0.5 * n as f64 / m);
            assert!((res.at(n) - expect).norm() < 1e-9 * expect.norm());
        }
    }

    #[test]
    fn phase_aligned_residual_is_real_sum() {
        // R_n = eps p(n+1, 1) sum_{j=1}^{n} 1/|p(j+1, 1)|
        let spec = builtin("period3_2_i_third");
        let eps = 0.25;
        let ledger = build_ledger(&spec, 400).unwrap();
        let plan = PerturbationPlan::new(
            WitnessTemplate {
                variant: PlanVariant::PhaseAligned,
                c: None,
                log_m: None,
            },
            eps,
        )
        .unwrap();
        let r = plan.perturbations(&ledger, 400).unwrap();
        let orbit = PerturbedOrbit::generate(&spec, c(1.0, 1.0), r, eps).unwrap();
        let shadow = shadow_contracting(&orbit, &spec).unwrap();
        for n in 1..399 {
            let p = ledger.partial_product(n + 1, 1).unwrap().abs();
            let sum: f64 = (1..=n).map(|j| 1.0 / ledger.partial_product(j + 1, 1).unwrap().abs()).sum();
            let expect = eps * p * sum;
            assert!((shadow.errors.abs(n + 1) - expect).abs() <= 1e-9 * expect, "n = {n}");
        }
    }

    #[test]
    fn oracle_zero_perturbation() {
        let spec = builtin("alternating_2_half");
        let ledger = build_ledger(&spec, 50).unwrap();
        let orbit = PerturbedOrbit::generate(&spec, c(3.0, 1.0), vec![c(0.0, 0.0); 49], 0.0).unwrap();
        let (z1, value) = best_shadow_oracle(&orbit, &ledger, 50).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(z1, c(3.0, 1.0));
    }

    #[test]
    fn oracle_constant_two_matches_series() {
        let eps = 0.01;
        let spec = CoefficientSpec::constant(c(2.0, 0.0), c(5.0, 0.0)).unwrap();
        let ledger = build_ledger(&spec, 1000).unwrap();
        let orbit = PerturbedOrbit::generate(&spec, c(1.0, 0.0), vec![c(eps, 0.0); 999], eps).unwrap();
        let (_, value) = best_shadow_oracle(&orbit, &ledger, 1000).unwrap();
        // z_1 = w_1 + eps balances every term at exactly eps
        assert!(value <= eps * (1.0 + 1e-9), "{value}");
        assert!(value >= 0.999 * eps);
        let expanding = shadow_expanding(&orbit, &spec, &ledger, 1e-6).unwrap();
        assert!(value <= expanding.errors.sup() * (1.0 + 1e-9));
    }

    #[test]
    fn oracle_dominated_by_shadows() {
        let spec = builtin("period3_2_i_third");
        let ledger = build_ledger(&spec, 300).unwrap();
        let r: Vec<Complex> = (0..299).map(|k| Complex::from_polar(0.1, 1.3 * k as f64)).collect();
        let r = r.into_iter().map(|x| if x.norm() > 0.1 { x * (0.1 / x.norm()) } else { x }).collect();
        let orbit = PerturbedOrbit::generate(&spec, c(0.0, 2.0), r, 0.1).unwrap();
        let (_, value) = best_shadow_oracle(&orbit, &ledger, 300).unwrap();
        let shadow = shadow_contracting(&orbit, &spec).unwrap();
        assert!(value <= shadow.errors.sup() * (1.0 + 1e-12));
        assert!(value > 0.0);
    }

    #[test]
    fn oracle_handles_contracting_overflow() {
        // 1 / p(n, 1) = 2^(n-1) leaves binary64 range
        let spec = CoefficientSpec::constant(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        let ledger = build_ledger(&spec, 3000).unwrap();
        let orbit = PerturbedOrbit::generate(&spec, c(0.0, 0.0), vec![c(1.0, 0.0); 2999], 1.0).unwrap();
        let (_, value) = best_shadow_oracle(&orbit, &ledger, 3000).unwrap();
        assert!(value.is_finite());
        assert!(value <= 2.0 * (1.0 + 1e-9), "{value}");
        assert!(value >= 1.99);
    }

    #[test]
    fn alternating_witness_grows_linearly() {
        let spec = builtin("alternating_2_half");
        let ledger = build_ledger(&spec, 10).unwrap();
        let plan = make_witness(&spec, &ledger, Criterion::BoundedProducts, 1.0).unwrap();
        let small = oracle_value(&spec, &plan, 1000);
        let large = oracle_value(&spec, &plan, 4000);
        assert!(large >= 3.0 * small, "{small} {large}");

        let (_, curve) = run_witness(&spec, &plan, c(0.0, 0.0), 4000).unwrap();
        assert!(curve.points.windows(2).all(|w| w[0].value <= w[1].value));
        assert!(curve.growth_factor(4).unwrap() >= 3.0);
    }

    #[test]
    fn contracting_witness_stays_bounded() {
        let spec = CoefficientSpec::constant(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let plan = PerturbationPlan::new(
            WitnessTemplate {
                variant: PlanVariant::ConstantEps,
                c: None,
                log_m: None,
            },
            1.0,
        )
        .unwrap();
        let (_, curve) = run_witness(&spec, &plan, c(0.0, 0.0), 2000).unwrap();
        let g = curve.growth_factor(2).unwrap();
        assert!((g - 1.0).abs() < 1e-3, "g = {g}");
    }

    #[test]
    fn zero_plan_has_zero_divergence() {
        let spec = builtin("alternating_2_half");
        let plan = PerturbationPlan::new(
            WitnessTemplate {
                variant: PlanVariant::ConstantEps,
                c: None,
                log_m: None,
            },
            0.0,
        )
        .unwrap();
        let (_, curve) = run_witness(&spec, &plan, c(0.0, 0.0), 256).unwrap();
        assert!(curve.points.iter().all(|p| p.value == 0.0));
    }

    #[test]
    fn checkpoint_layout() {
        assert_eq!(checkpoints(1000), vec![2, 4, 8, 16, 32, 64, 128, 250, 256, 500, 512, 1000]);
        assert_eq!(checkpoints(2), vec![2]);
    }
}

//! Stability verdicts from the coefficient moduli.
//!
//! Constant and periodic specs are decided exactly from the cycle product `q`.
//! Everything else is decided from `L_n / n` over a trailing window of a
//! finite horizon, and the verdict is marked as finite-horizon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::products::{build_ledger, CompensatedSum, PartialProductLedger};
use crate::sequences::CoefficientSpec;
use crate::witness::{witness_template, WitnessTemplate};

/// `|ln|q|| <= UNIMODULAR_TOL` counts as `|q| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Products with `sup L_n` below this are treated as bounded by the linear-growth test.
pub const LOG_PRODUCT_CAP: f64 = 20.0;

/// The regression slope of `L_n` on `ln n` must exceed `MIN_GROWTH_SLOPE - 1` for
/// `n |p(n, 1)|` to count as growing.
pub const MIN_GROWTH_SLOPE: f64 = 0.5;

const MIN_HORIZON: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HorizonConfig {
    #[serde(rename = "N")]
    pub horizon: usize,
    pub window: f64,
    pub band: f64,
    pub delta: f64,
}

impl Default for HorizonConfig {
    fn default() -> Self {
        Self {
            horizon: 10_000,
            window: 0.5,
            band: 0.02,
            delta: 0.1,
        }
    }
}

impl HorizonConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < MIN_HORIZON {
            return Err(Error::HorizonTooSmall {
                got: self.horizon,
                need: MIN_HORIZON,
            });
        }
        if !(self.window > 0.0 && self.window <= 1.0) {
            return Err(Error::InvalidConfig(format!("window must be in (0, 1], got {}", self.window)));
        }
        if !(self.band > 0.0 && self.band.is_finite()) {
            return Err(Error::InvalidConfig(format!("band must be positive, got {}", self.band)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!("delta must be in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    /// First index of the trailing window, at least 2.
    fn window_start(&self) -> usize {
        let start = ((1.0 - self.window) * self.horizon as f64).ceil() as usize;
        start.max(2).min(self.horizon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    PeriodicContracting,
    PeriodicExpanding,
    PeriodicUnimodular,
    BoundedTrackingSum,
    GeomeanSubexponential,
    GeomeanExpanding,
    GeomeanContracting,
    BoundedProducts,
    LinearGrowthProducts,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::PeriodicContracting => "periodic_contracting",
            Criterion::PeriodicExpanding => "periodic_expanding",
            Criterion::PeriodicUnimodular => "periodic_unimodular",
            Criterion::BoundedTrackingSum => "bounded_tracking_sum",
            Criterion::GeomeanSubexponential => "geomean_subexponential",
            Criterion::GeomeanExpanding => "geomean_expanding",
            Criterion::GeomeanContracting => "geomean_contracting",
            Criterion::BoundedProducts => "bounded_products",
            Criterion::LinearGrowthProducts => "linear_growth_products",
        }
    }

    pub fn is_unstable(self) -> bool {
        matches!(
            self,
            Criterion::PeriodicUnimodular
                | Criterion::GeomeanSubexponential
                | Criterion::BoundedProducts
                | Criterion::LinearGrowthProducts
        )
    }

    /// Stable criteria whose shadow is built backwards from the series.
    pub fn is_expanding(self) -> bool {
        matches!(self, Criterion::PeriodicExpanding | Criterion::GeomeanExpanding)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Stable,
    Unstable,
    Undetermined,
}

/// Finite-horizon quantities behind a verdict. Logs are natural logs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Estimates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    /// `ln |q|` for a periodic spec.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_cycle_product: Option<f64>,
    /// `K = |q|^{1/p}`.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geomean_window_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geomean_window_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_tracking_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_sup_product: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_inf_product: Option<f64>,
    /// `ln sup_n n |p(n, 1)|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_sup_n_product: Option<f64>,
    /// Slope of `L_n` against `ln n` over the window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub status: Status,
    pub criterion: Option<Criterion>,
    /// Tracking constant `c` with `sup |w_n - z_n| <= c epsilon`, Stable only.
    pub constant: Option<f64>,
    /// Perturbation plan template, Unstable only.
    pub witness: Option<WitnessTemplate>,
    pub estimates: Estimates,
    pub horizon: Option<usize>,
    pub config: HorizonConfig,
    pub finite_horizon: bool,
}

impl StabilityVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// Per-cycle sums used by the exact periodic constants.
struct CycleSums {
    log_q: f64,
    // max_l sum_{i=0}^{p-1} |a_l a_{l-1} ... a_{l-i+1}|
    backward: f64,
    // max_l sum_{i=1}^{p} 1/|a_l a_{l+1} ... a_{l+i-1}|
    forward: f64,
}

fn cycle_sums(mags: &[f64]) -> CycleSums {
    let p = mags.len();
    let log_q: CompensatedSum = mags.iter().map(|m| m.ln()).collect();
    let mut backward: f64 = 0.0;
    let mut forward: f64 = 0.0;
    for l in 0..p {
        let mut prod = 1.0;
        let mut sum = 0.0;
        for i in 0..p {
            sum += prod;
            prod *= mags[(l + p - i) % p];
        }
        backward = backward.max(sum);

        let mut prod = 1.0;
        let mut sum = 0.0;
        for i in 0..p {
            prod *= mags[(l + i) % p];
            sum += 1.0 / prod;
        }
        forward = forward.max(sum);
    }
    CycleSums {
        log_q: log_q.value(),
        backward,
        forward,
    }
}

/// `1 / (K^{1-delta} - 1)` written with `ln K`.
fn expanding_bound(log_k: f64, delta: f64) -> f64 {
    1.0 / ((1.0 - delta) * log_k).exp_m1()
}

/// Exact trichotomy on `|q|`, `q` the product of one cycle of `a_n`.
pub fn classify_periodic(spec: &CoefficientSpec, cfg: &HorizonConfig) -> Result<StabilityVerdict> {
    let cycle = spec.cycle().ok_or(Error::NotPeriodic)?;
    let mags: Vec<f64> = cycle.iter().map(|(a, _)| a.norm()).collect();
    let p = mags.len();
    let sums = cycle_sums(&mags);
    let log_k = sums.log_q / p as f64;
    let mut estimates = Estimates {
        period: Some(p),
        log_cycle_product: Some(sums.log_q),
        k: Some(log_k.exp()),
        ..Estimates::default()
    };

    let (status, criterion, constant, witness) = if sums.log_q.abs() <= UNIMODULAR_TOL {
        let ledger = build_ledger(spec, p + 1)?;
        let template = witness_template(spec, &ledger, Some(Criterion::BoundedProducts))?;
        (Status::Unstable, Criterion::BoundedProducts, None, Some(template))
    } else if sums.log_q < 0.0 {
        let c = sums.backward / -sums.log_q.exp_m1();
        estimates.sup_tracking_sum = Some(c);
        (Status::Stable, Criterion::PeriodicContracting, Some(c), None)
    } else {
        let exact = sums.forward / -(-sums.log_q).exp_m1();
        estimates.delta = Some(cfg.delta);
        let c = expanding_bound(log_k, cfg.delta).max(exact);
        (Status::Stable, Criterion::PeriodicExpanding, Some(c), None)
    };

    Ok(StabilityVerdict {
        status,
        criterion: Some(criterion),
        constant,
        witness,
        estimates,
        horizon: None,
        config: *cfg,
        finite_horizon: false,
    })
}

/// `sup_n` of the backward tracking sum over the ledger.
fn sup_tracking_sum(ledger: &PartialProductLedger) -> f64 {
    ledger
        .log_tracking_sum_profile()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
        .exp()
}

/// `sup_n sum_{j >= n} 1/|p(j+1, n)|` over the ledger, extrapolating the tail at `rate`.
fn sup_reciprocal_tail(ledger: &PartialProductLedger, rate: f64) -> Result<f64> {
    let profile = ledger.reciprocal_tail_profile(rate);
    let Some(first) = profile.first() else {
        return Ok(f64::INFINITY);
    };
    let head = (1.0 + first) * (-ledger.log_abs_coeff(1)?).exp();
    Ok(profile.iter().copied().fold(head, f64::max))
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Finite-horizon decision from `L_n / n` over the trailing window.
pub fn classify_numeric(
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    cfg: &HorizonConfig,
) -> Result<StabilityVerdict> {
    cfg.validate()?;
    if ledger.horizon() < cfg.horizon {
        return Err(Error::HorizonTooSmall {
            got: ledger.horizon(),
            need: cfg.horizon,
        });
    }
    let n_max = cfg.horizon;
    let logs = &ledger.log_abs_values()[..n_max];
    let start = cfg.window_start();
    let window: Vec<usize> = (start..=n_max).collect();
    let geomean: Vec<f64> = window.iter().map(|n| logs[n - 1] / *n as f64).collect();
    let g_min = geomean.iter().copied().fold(f64::INFINITY, f64::min);
    let g_max = geomean.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let log_n: Vec<f64> = window.iter().map(|n| (*n as f64).ln()).collect();
    let window_logs: Vec<f64> = window.iter().map(|n| logs[n - 1]).collect();
    let growth_slope = slope(&log_n, &window_logs);
    let log_sup = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_inf = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let log_sup_n = logs
        .iter()
        .enumerate()
        .map(|(i, l)| l + ((i + 1) as f64).ln())
        .fold(f64::NEG_INFINITY, f64::max);

    let mut estimates = Estimates {
        geomean_window_min: Some(g_min),
        geomean_window_max: Some(g_max),
        log_sup_product: Some(log_sup),
        log_inf_product: Some(log_inf),
        log_sup_n_product: Some(log_sup_n),
        growth_slope: Some(growth_slope),
        ..Estimates::default()
    };
    let horizon_ledger = if ledger.horizon() == n_max {
        None
    } else {
        Some(build_ledger(spec, n_max)?)
    };
    let ledger = horizon_ledger.as_ref().unwrap_or(ledger);

    let mut witness = None;
    let (status, criterion, constant) = if g_max < -cfg.band {
        let c = sup_tracking_sum(ledger);
        estimates.sup_tracking_sum = Some(c);
        (Status::Stable, Some(Criterion::GeomeanContracting), Some(c))
    } else if g_min > cfg.band {
        estimates.delta = Some(cfg.delta);
        let c = expanding_bound(g_min, cfg.delta).max(sup_reciprocal_tail(ledger, g_min)?);
        (Status::Stable, Some(Criterion::GeomeanExpanding), Some(c))
    } else if g_min >= -cfg.band && g_max <= cfg.band {
        witness = Some(witness_template(spec, ledger, Some(Criterion::GeomeanSubexponential))?);
        (Status::Unstable, Some(Criterion::GeomeanSubexponential), None)
    } else if log_sup < LOG_PRODUCT_CAP && growth_slope > MIN_GROWTH_SLOPE - 1.0 {
        witness = Some(witness_template(spec, ledger, Some(Criterion::LinearGrowthProducts))?);
        (Status::Unstable, Some(Criterion::LinearGrowthProducts), None)
    } else {
        (Status::Undetermined, None, None)
    };

    Ok(StabilityVerdict {
        status,
        criterion,
        constant,
        witness,
        estimates,
        horizon: Some(n_max),
        config: *cfg,
        finite_horizon: true,
    })
}

/// Exact verdict for constant and periodic specs, finite-horizon verdict otherwise.
pub fn classify(spec: &CoefficientSpec, cfg: &HorizonConfig) -> Result<StabilityVerdict> {
    cfg.validate()?;
    if spec.cycle().is_some() {
        return classify_periodic(spec, cfg);
    }
    let ledger = build_ledger(spec, cfg.horizon)?;
    classify_numeric(spec, &ledger, cfg)
}

/// The multiplier `c` with `sup |w_n - z_n| <= c epsilon` for the shadow the
/// verdict's criterion prescribes: `z_1 = w_1` for contracting criteria and the
/// series shadow for expanding ones.
pub fn tracking_constant(
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    cfg: &HorizonConfig,
) -> Result<f64> {
    if let Some(cycle) = spec.cycle() {
        let mags: Vec<f64> = cycle.iter().map(|(a, _)| a.norm()).collect();
        let sums = cycle_sums(&mags);
        return if sums.log_q.abs() <= UNIMODULAR_TOL {
            Err(Error::NotStable)
        } else if sums.log_q < 0.0 {
            Ok(sums.backward / -sums.log_q.exp_m1())
        } else {
            Ok(sums.forward / -(-sums.log_q).exp_m1())
        };
    }
    let verdict = classify_numeric(spec, ledger, cfg)?;
    match verdict.criterion {
        Some(Criterion::GeomeanContracting) => Ok(sup_tracking_sum(ledger)),
        Some(Criterion::GeomeanExpanding) => {
            let rate = verdict.estimates.geomean_window_min.unwrap_or(0.0);
            sup_reciprocal_tail(ledger, rate)
        }
        _ => Err(Error::NotStable),
    }
}

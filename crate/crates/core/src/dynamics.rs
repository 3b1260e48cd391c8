//! Orbits of `z_{n+1} = a_n z_n + b_n`, perturbed orbits, residuals and shadows.
//!
//! For a perturbed orbit `w_{n+1} = a_n w_n + b_n + r_n` the residual
//! `R_n = w_{n+1} - g_n(...g_1(w_1))` obeys `R_n = a_n R_{n-1} + r_n`, `R_0 = 0`,
//! and any true orbit `z` satisfies
//!
//! ```text
//! w_n - z_n = p(n, 1) (w_1 - z_1) + R_{n-1}
//! ```
//!
//! Two shadows are built from this identity: `z_1 = w_1` (bounded when the
//! backward tracking sums are) and the series choice
//! `z_1 = w_1 + sum_j r_j / p(j+1, 1)` (bounded when `|p(n, 1)|` grows
//! exponentially). The series is truncated at the orbit length.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::products::{CompensatedSum, PartialProductLedger, ScaledComplex};
use crate::sequences::{CoefficientSpec, Complex};

/// A true orbit `z_1..z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    values: Vec<Complex>,
}

impl Trajectory {
    pub fn z1(&self) -> Complex {
        self.values[0]
    }

    /// `z_n`, 1-based.
    pub fn at(&self, n: usize) -> Complex {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Runs the recursion for `len` terms starting from `z1`.
pub fn iterate(spec: &CoefficientSpec, z1: Complex, len: usize) -> Result<Trajectory> {
    if len == 0 {
        return Err(Error::HorizonTooSmall { got: 0, need: 1 });
    }
    let mut values = Vec::with_capacity(len);
    let mut z = z1;
    values.push(z);
    for n in 1..len {
        let (a, b) = spec.coeff_at(n)?;
        z = a * z + b;
        values.push(z);
    }
    Ok(Trajectory { values })
}

/// `z_n = p(n, 1) z_1 + sum_{j=1}^{n-1} b_j p(n, j+1)`, evaluated from the ledger.
pub fn closed_form_at(
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    z1: Complex,
    n: usize,
) -> Result<Complex> {
    if n < 2 || n > ledger.horizon() {
        return Err(Error::IndexOutOfRange(format!(
            "closed_form_at needs 2 <= n <= {}, got {n}",
            ledger.horizon()
        )));
    }
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut push = |c: Complex| {
        re.add(c.re);
        im.add(c.im);
    };
    push(ledger.partial_product_value(n, 1)? * z1);
    for j in 1..n {
        let (_, b) = spec.coeff_at(j)?;
        push(b * ledger.partial_product_value(n, j + 1)?);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// `w_1..w_N` with `w_{n+1} = a_n w_n + b_n + r_n` and `|r_n| <= epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedOrbit {
    values: Vec<Complex>,
    perturbations: Vec<Complex>,
    epsilon: f64,
}

impl PerturbedOrbit {
    /// Builds the orbit of length `perturbations.len() + 1`.
    pub fn generate(
        spec: &CoefficientSpec,
        w1: Complex,
        perturbations: Vec<Complex>,
        epsilon: f64,
    ) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
        }
        let mut values = Vec::with_capacity(perturbations.len() + 1);
        let mut w = w1;
        values.push(w);
        for (i, r) in perturbations.iter().enumerate() {
            let modulus = r.norm();
            if modulus.is_nan() || modulus > epsilon {
                return Err(Error::BudgetExceeded {
                    index: i + 1,
                    modulus,
                    epsilon,
                });
            }
            let (a, b) = spec.coeff_at(i + 1)?;
            w = a * w + b + r;
            values.push(w);
        }
        Ok(Self {
            values,
            perturbations,
            epsilon,
        })
    }

    pub fn w1(&self) -> Complex {
        self.values[0]
    }

    /// `w_n`, 1-based.
    pub fn at(&self, n: usize) -> Complex {
        self.values[n - 1]
    }

    /// `r_n`, 1-based, `n < len`.
    pub fn perturbation(&self, n: usize) -> Complex {
        self.perturbations[n - 1]
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn perturbations(&self) -> &[Complex] {
        &self.perturbations
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `len` terms of the orbit.
    pub fn prefix(&self, len: usize) -> PerturbedOrbit {
        let len = len.clamp(1, self.len());
        PerturbedOrbit {
            values: self.values[..len].to_vec(),
            perturbations: self.perturbations[..len - 1].to_vec(),
            epsilon: self.epsilon,
        }
    }
}

/// `R_0 = 0, R_1, ..., R_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualLedger {
    values: Vec<Complex>,
}

impl ResidualLedger {
    /// `R_n`, 0-based as in the recursion.
    pub fn at(&self, n: usize) -> Complex {
        self.values[n]
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    /// Largest relative mismatch of `w_{n+1} = g_n(...g_1(w_1)) + R_n` over the orbit.
    pub fn round_trip_error(&self, orbit: &PerturbedOrbit, spec: &CoefficientSpec) -> Result<f64> {
        let clean = iterate(spec, orbit.w1(), orbit.len())?;
        let mut worst: f64 = 0.0;
        for n in 1..orbit.len() {
            let w = orbit.at(n + 1);
            let g = clean.at(n + 1);
            let r = self.values[n];
            let scale = 1f64.max(w.norm()).max(g.norm()).max(r.norm());
            worst = worst.max((w - (g + r)).norm() / scale);
        }
        Ok(worst)
    }
}

/// Forward recursion `R_n = a_n R_{n-1} + r_n` over the orbit's perturbations.
pub fn residual_ledger(orbit: &PerturbedOrbit, spec: &CoefficientSpec) -> Result<ResidualLedger> {
    let mut values = Vec::with_capacity(orbit.len());
    let mut r_acc = Complex::new(0.0, 0.0);
    values.push(r_acc);
    for (i, r) in orbit.perturbations().iter().enumerate() {
        let (a, _) = spec.coeff_at(i + 1)?;
        r_acc = a * r_acc + r;
        values.push(r_acc);
    }
    Ok(ResidualLedger { values })
}

/// `|w_n - z_n|` for `n = 1..N`, stored as `log10` so that it survives overflow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCurve {
    log10: Vec<f64>,
}

impl ErrorCurve {
    fn from_scaled(diffs: &[ScaledComplex]) -> Self {
        Self {
            log10: diffs.iter().map(|d| d.ln_abs() / std::f64::consts::LN_10).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.log10.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log10.is_empty()
    }

    /// `|w_n - z_n|`, 1-based; infinite if it leaves binary64 range.
    pub fn abs(&self, n: usize) -> f64 {
        10f64.powf(self.log10[n - 1])
    }

    /// `log10 |w_n - z_n|`, `-inf` for an exact match.
    pub fn log10(&self, n: usize) -> f64 {
        self.log10[n - 1]
    }

    pub fn sup(&self) -> f64 {
        10f64.powf(self.log10_sup())
    }

    pub fn log10_sup(&self) -> f64 {
        self.log10.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadowKind {
    /// `z_1 = w_1`.
    Contracting,
    /// `z_1 = w_1 + sum_{j<N} r_j / p(j+1, 1)`.
    Expanding,
}

/// What the truncated series leaves out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailReport {
    /// Growth rate `L_N / N` used for the extrapolation.
    pub rate: f64,
    /// Estimated `sum_{j >= N} 1/|p(j+1, 1)|`.
    pub tail_estimate: f64,
    /// `epsilon * max_n |p(n, 1)| * tail_estimate`, the largest shift of any `z_n`
    /// that completing the series could cause.
    pub truncation_bound: f64,
    /// Relative gap between the backward-recursion `z_1` and the directly summed series.
    pub series_mismatch: f64,
}

/// A shadow orbit together with its tracking errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadow {
    pub kind: ShadowKind,
    pub trajectory: Trajectory,
    pub errors: ErrorCurve,
    /// For the contracting shadow: largest relative gap between the measured
    /// `|w_n - z_n|` and `|R_{n-1}|`. Zero for the expanding shadow.
    pub residual_mismatch: f64,
    pub tail: Option<TailReport>,
}

/// Shadow with `z_1 = w_1`; its error at `n` is exactly `|R_{n-1}|`.
pub fn shadow_contracting(orbit: &PerturbedOrbit, spec: &CoefficientSpec) -> Result<Shadow> {
    let trajectory = iterate(spec, orbit.w1(), orbit.len())?;
    let residuals = residual_ledger(orbit, spec)?;

    let mut diffs = Vec::with_capacity(orbit.len());
    let mut scaled = ScaledComplex::zero();
    diffs.push(scaled);
    for n in 1..orbit.len() {
        let (a, _) = spec.coeff_at(n)?;
        scaled = scaled.mul(a).add_complex(orbit.perturbation(n));
        diffs.push(scaled);
    }

    let mut mismatch: f64 = 0.0;
    let mut log10 = Vec::with_capacity(orbit.len());
    for n in 1..=orbit.len() {
        let w = orbit.at(n);
        let z = trajectory.at(n);
        let direct = (w - z).norm();
        if direct.is_finite() && w.norm().is_finite() && z.norm().is_finite() {
            let r = residuals.at(n - 1).norm();
            // gaps below the rounding level of w_n and z_n do not count
            let floor = (64.0 * f64::EPSILON * (w.norm() + z.norm())).max(f64::MIN_POSITIVE);
            let gap = ((direct - r).abs() - floor).max(0.0);
            mismatch = mismatch.max(gap / r.max(floor));
            log10.push(direct.log10());
        } else {
            log10.push(diffs[n - 1].ln_abs() / std::f64::consts::LN_10);
        }
    }

    Ok(Shadow {
        kind: ShadowKind::Contracting,
        trajectory,
        errors: ErrorCurve { log10 },
        residual_mismatch: mismatch,
        tail: None,
    })
}

/// Shadow from the truncated series, bounded when `|p(n, 1)|` grows exponentially.
///
/// The differences `e_n = w_n - z_n` are produced by the backward recursion
/// `e_N = 0`, `e_n = (e_{n+1} - r_n) / a_n`, which is the truncated series written
/// as a contraction. Fails with [`Error::TailNotConvergent`] when `L_N / N <= 0`
/// or the extrapolated tail is not below `tail_tol`.
pub fn shadow_expanding(
    orbit: &PerturbedOrbit,
    spec: &CoefficientSpec,
    ledger: &PartialProductLedger,
    tail_tol: f64,
) -> Result<Shadow> {
    let len = orbit.len();
    if len < 2 {
        return Err(Error::HorizonTooSmall { got: len, need: 2 });
    }
    if ledger.horizon() < len {
        return Err(Error::HorizonTooSmall {
            got: ledger.horizon(),
            need: len,
        });
    }
    let rate = ledger.geometric_mean_exponent(len)?;
    if rate.is_nan() || rate <= 0.0 {
        return Err(Error::TailNotConvergent { rate });
    }
    let log_last = ledger.log_abs(len)?;
    let tail_estimate = (-log_last).exp() / rate.exp_m1();
    if tail_estimate.is_nan() || tail_estimate >= tail_tol {
        return Err(Error::TailNotConvergent { rate });
    }

    let mut diffs = vec![ScaledComplex::zero(); len];
    for n in (1..len).rev() {
        let (a, _) = spec.coeff_at(n)?;
        diffs[n - 1] = diffs[n].add_complex(-orbit.perturbation(n)).div(a);
    }
    let values: Vec<Complex> = (1..=len).map(|n| orbit.at(n) - diffs[n - 1].to_complex()).collect();

    // z_1 = w_1 + sum_j r_j / p(j+1, 1), summed directly for comparison with e_1.
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for j in 1..len {
        let p = ledger.partial_product(j + 1, 1)?;
        let term = orbit.perturbation(j) * Complex::from_polar((-p.log_abs).exp(), -p.arg);
        re.add(term.re);
        im.add(term.im);
    }
    let series = Complex::new(re.value(), im.value());
    let e1 = diffs[0].to_complex();
    let series_mismatch = (e1 + series).norm() / series.norm().max(f64::MIN_POSITIVE);

    let max_log = ledger.log_abs_values()[..len]
        .iter()
        .fold(f64::NEG_INFINITY, |m, l| m.max(*l));
    let truncation_bound = orbit.epsilon() * (max_log - log_last).exp() / rate.exp_m1();

    Ok(Shadow {
        kind: ShadowKind::Expanding,
        trajectory: Trajectory { values },
        errors: ErrorCurve::from_scaled(&diffs),
        residual_mismatch: 0.0,
        tail: Some(TailReport {
            rate,
            tail_estimate,
            truncation_bound,
            series_mismatch: if series.norm() == 0.0 && e1.norm() == 0.0 {
                0.0
            } else {
                series_mismatch
            },
        }),
    })
}

/// Period-2 coefficients `a = (s, q)`, `b = (u, v)` written as a second-order equation.
///
/// With `a_n = s, b_n = u` for odd `n` and `a_n = q, b_n = v` for even `n`, every
/// first-order orbit satisfies
///
/// ```text
/// z_{n+1} = (a_n - 1) z_n + a_{n-1} z_{n-1} + u + v,    n >= 0,
/// ```
///
/// provided `z_0 = s z_{-1} + u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrder {
    pub s: Complex,
    pub q: Complex,
    pub u: Complex,
    pub v: Complex,
}

/// `z_{-1}, z_0, z_1, ..., z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSequence {
    values: Vec<Complex>,
}

impl SecondOrderSequence {
    /// `z_n` for `n >= -1`.
    pub fn at(&self, n: i64) -> Complex {
        self.values[(n + 1) as usize]
    }

    /// Largest index stored.
    pub fn last_index(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }
}

impl SecondOrder {
    fn a(&self, n: i64) -> Complex {
        if n.rem_euclid(2) == 1 {
            self.s
        } else {
            self.q
        }
    }

    fn b(&self, n: i64) -> Complex {
        if n.rem_euclid(2) == 1 {
            self.u
        } else {
            self.v
        }
    }

    /// Runs the second-order pair of recurrences up to `z_N`.
    pub fn generate(&self, z_minus1: Complex, z0: Complex, last: usize) -> SecondOrderSequence {
        let mut values = Vec::with_capacity(last + 2);
        values.push(z_minus1);
        values.push(z0);
        for n in 0..last as i64 {
            let zn = values[(n + 1) as usize];
            let zm = values[n as usize];
            values.push((self.a(n) - 1.0) * zn + self.a(n - 1) * zm + self.u + self.v);
        }
        SecondOrderSequence { values }
    }

    /// The `z_0` that makes `(z_{-1}, z_0)` a first-order orbit.
    pub fn consistent_z0(&self, z_minus1: Complex) -> Complex {
        self.s * z_minus1 + self.u
    }

    /// The first-order coefficients for indices `n >= 1`.
    pub fn first_order_spec(&self) -> Result<CoefficientSpec> {
        CoefficientSpec::periodic(vec![(self.s, self.u), (self.q, self.v)])
    }

    /// First-order orbit `w_{n+1} = a_n w_n + b_n + r_n` from `w_{-1}`, with
    /// `perturbations[0] = r_{-1}`, `perturbations[1] = r_0`, ...
    pub fn perturbed_first_order(&self, w_minus1: Complex, perturbations: &[Complex]) -> SecondOrderSequence {
        let mut values = Vec::with_capacity(perturbations.len() + 1);
        values.push(w_minus1);
        let mut w = w_minus1;
        for (i, r) in perturbations.iter().enumerate() {
            let n = i as i64 - 1;
            w = self.a(n) * w + self.b(n) + r;
            values.push(w);
        }
        SecondOrderSequence { values }
    }

    /// `rho_n = w_{n+1} - [(a_n - 1) w_n + a_{n-1} w_{n-1} + u + v]` for `n = 0..`;
    /// entry `n` holds `rho_n`.
    pub fn residuals(&self, seq: &SecondOrderSequence) -> Vec<Complex> {
        (0..seq.last_index())
            .map(|n| {
                seq.at(n + 1) - ((self.a(n) - 1.0) * seq.at(n) + self.a(n - 1) * seq.at(n - 1) + self.u + self.v)
            })
            .collect()
    }
}

/// Free-function form of [`SecondOrder::generate`].
#[allow(clippy::too_many_arguments)]
pub fn second_order_reduce(
    s: Complex,
    q: Complex,
    u: Complex,
    v: Complex,
    z_minus1: Complex,
    z0: Complex,
    last: usize,
) -> SecondOrderSequence {
    SecondOrder { s, q, u, v }.generate(z_minus1, z0, last)
}

//! Partial products `p(m, k) = a_k a_{k+1} ... a_{m-1}` (empty product 1) kept in log space.
//!
//! The ledger stores the prefix sums
//!
//! ```text
//! L_n = sum_{j<n} log|a_j|        Theta_n = sum_{j<n} arg a_j
//! ```
//!
//! so `|p(m, k)| = exp(L_m - L_k)`. Every statistic below is staged so that
//! the exponentials it evaluates take differences of `L`, never `L` itself,
//! unless the quantity being returned genuinely lies outside binary64 range.
//! Phases are accumulated unreduced and reduced on read; their error grows
//! like `n` ulps and is not compensated.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequences::{reduce_angle, CoefficientSpec};

/// Natural-log bounds of the linear range in which values are materialized.
pub const LOG_LINEAR_MIN: f64 = -690.7755278982137; // ln(1e-300)
pub const LOG_LINEAR_MAX: f64 = 690.7755278982137; // ln(1e300)

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `log(exp(x) + exp(y))` without overflow.
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// A complex number in polar log form: `exp(log_abs) * exp(i arg)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_abs: f64,
    /// Reduced to `(-pi, pi]`.
    pub arg: f64,
}

impl LogComplex {
    pub fn one() -> Self {
        Self {
            log_abs: 0.0,
            arg: 0.0,
        }
    }

    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    /// Best-effort linear value; may be infinite or zero outside binary64 range.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }

    /// Whether the magnitude lies in `[1e-300, 1e300]`.
    pub fn is_representable(&self) -> bool {
        (LOG_LINEAR_MIN..=LOG_LINEAR_MAX).contains(&self.log_abs)
    }
}

/// A complex number `mantissa * exp(scale)` with the mantissa kept near unit size.
///
/// Used for recursions whose magnitudes leave binary64 range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    scale: f64,
}

#[allow(clippy::should_implement_trait)]
impl ScaledComplex {
    const RENORM_HI: f64 = 1e100;
    const RENORM_LO: f64 = 1e-100;

    pub fn zero() -> Self {
        Self {
            mantissa: Complex64::new(0.0, 0.0),
            scale: 0.0,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self {
            mantissa: z,
            scale: 0.0,
        }
        .renormalized()
    }

    pub fn from_log_polar(log_abs: f64, arg: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            return Self::zero();
        }
        Self {
            mantissa: Complex64::from_polar(1.0, arg),
            scale: log_abs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// `ln|value|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.scale + self.mantissa.norm().ln()
        }
    }

    pub fn arg(&self) -> f64 {
        self.mantissa.arg()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return self.mantissa;
        }
        let norm = self.mantissa.norm();
        Complex64::from_polar((self.scale + norm.ln()).exp(), self.mantissa.arg())
    }

    pub fn mul(self, a: Complex64) -> Self {
        Self {
            mantissa: self.mantissa * a,
            scale: self.scale,
        }
        .renormalized()
    }

    pub fn div(self, a: Complex64) -> Self {
        Self {
            mantissa: self.mantissa / a,
            scale: self.scale,
        }
        .renormalized()
    }

    pub fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            scale: self.scale,
        }
    }

    pub fn add(self, other: ScaledComplex) -> Self {
        if other.is_zero() {
            return self;
        }
        if self.is_zero() {
            return other;
        }
        let top = self.ln_abs().max(other.ln_abs());
        let mantissa = self.mantissa * (self.scale - top).exp() + other.mantissa * (other.scale - top).exp();
        Self {
            mantissa,
            scale: top,
        }
        .renormalized()
    }

    pub fn add_complex(self, z: Complex64) -> Self {
        self.add(Self::from_complex(z))
    }

    fn renormalized(self) -> Self {
        let norm = self.mantissa.norm();
        if norm == 0.0 || !norm.is_finite() || (Self::RENORM_LO..=Self::RENORM_HI).contains(&norm) {
            return self;
        }
        Self {
            mantissa: self.mantissa / norm,
            scale: self.scale + norm.ln(),
        }
    }
}

/// Log-magnitude and phase prefix sums realizing `p(m, k)` up to a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialProductLedger {
    // Position n-1 holds L_n / Theta_n.
    logmag: Vec<f64>,
    phase: Vec<f64>,
    // cis(Theta_n), so that products of many terms cost one exp each.
    unit: Vec<Complex64>,
}

impl PartialProductLedger {
    /// Materializes `L_n` and `Theta_n` for `1 <= n <= horizon`.
    pub fn build(spec: &CoefficientSpec, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::HorizonTooSmall { got: 0, need: 1 });
        }
        let mut logmag = Vec::with_capacity(horizon);
        let mut phase = Vec::with_capacity(horizon);
        let mut acc = CompensatedSum::new();
        let mut theta = 0.0;
        logmag.push(0.0);
        phase.push(0.0);
        for j in 1..horizon {
            let (log_abs, arg) = spec.log_polar_at(j)?;
            acc.add(log_abs);
            theta += arg;
            logmag.push(acc.value());
            phase.push(theta);
        }
        let unit = phase.iter().map(|t| Complex64::from_polar(1.0, *t)).collect();
        Ok(Self { logmag, phase, unit })
    }

    pub fn horizon(&self) -> usize {
        self.logmag.len()
    }

    fn check(&self, n: usize, what: &str) -> Result<()> {
        if n == 0 || n > self.horizon() {
            return Err(Error::IndexOutOfRange(format!(
                "{what}: index {n} outside 1..={}",
                self.horizon()
            )));
        }
        Ok(())
    }

    /// `L_n = log|p(n, 1)|`.
    pub fn log_abs(&self, n: usize) -> Result<f64> {
        self.check(n, "log_abs")?;
        Ok(self.logmag[n - 1])
    }

    /// Unreduced accumulated phase `Theta_n`.
    pub fn raw_phase(&self, n: usize) -> Result<f64> {
        self.check(n, "raw_phase")?;
        Ok(self.phase[n - 1])
    }

    /// All of `L_1..L_N`.
    pub fn log_abs_values(&self) -> &[f64] {
        &self.logmag
    }

    /// `log|a_n| = L_{n+1} - L_n`, available for `n < horizon`.
    pub fn log_abs_coeff(&self, n: usize) -> Result<f64> {
        self.check(n + 1, "log_abs_coeff")?;
        Ok(self.logmag[n] - self.logmag[n - 1])
    }

    /// `p(m, k)` for `1 <= k <= m <= horizon`.
    pub fn partial_product(&self, m: usize, k: usize) -> Result<LogComplex> {
        self.check(m, "partial_product")?;
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange(format!("partial_product: need 1 <= k <= m, got k = {k}, m = {m}")));
        }
        if k == m {
            return Ok(LogComplex::one());
        }
        Ok(LogComplex {
            log_abs: self.logmag[m - 1] - self.logmag[k - 1],
            arg: reduce_angle(self.phase[m - 1] - self.phase[k - 1]),
        })
    }

    /// `p(m, k)` as a plain complex number (may overflow to infinity).
    pub fn partial_product_value(&self, m: usize, k: usize) -> Result<Complex64> {
        self.check(m, "partial_product_value")?;
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange(format!("partial_product: need 1 <= k <= m, got k = {k}, m = {m}")));
        }
        Ok(self.unit[m - 1] * self.unit[k - 1].conj() * (self.logmag[m - 1] - self.logmag[k - 1]).exp())
    }

    /// `L_n / n`, the log of `(prod_{j<n} |a_j|)^{1/n}`.
    pub fn geometric_mean_exponent(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::IndexOutOfRange(format!("geometric_mean_exponent needs n >= 2, got {n}")));
        }
        Ok(self.log_abs(n)? / n as f64)
    }

    /// `sum_{j=1}^{n} |p(n+1, j+1)| = 1 + |a_n| + |a_n a_{n-1}| + ... + |a_n ... a_2|`.
    ///
    /// Needs `n + 1 <= horizon`.
    pub fn tracking_sum(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::IndexOutOfRange("tracking_sum needs n >= 1".into()));
        }
        self.check(n + 1, "tracking_sum")?;
        let top = self.logmag[n];
        let sum: CompensatedSum = (1..=n).map(|j| (top - self.logmag[j]).exp()).collect();
        Ok(sum.value())
    }

    /// `ln tracking_sum(n)` for every `1 <= n < horizon`, from the recurrence
    /// `T_n = 1 + |a_n| T_{n-1}` evaluated in log space. Entry `n - 1` holds `n`.
    pub fn log_tracking_sum_profile(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.horizon().saturating_sub(1));
        let mut log_t = f64::NEG_INFINITY;
        for n in 1..self.horizon() {
            let log_a = self.logmag[n] - self.logmag[n - 1];
            log_t = log_add_exp(0.0, log_a + log_t);
            out.push(log_t);
        }
        out
    }

    /// `ln sum_{j=1}^{n-1} 1/|p(j, 1)|`, via a max-shifted compensated sum.
    pub fn log_reciprocal_product_sum(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::IndexOutOfRange(format!("reciprocal_product_sum needs n >= 2, got {n}")));
        }
        self.check(n - 1, "reciprocal_product_sum")?;
        let terms = &self.logmag[..n - 1];
        let shift = terms.iter().map(|l| -l).fold(f64::NEG_INFINITY, f64::max);
        let sum: CompensatedSum = terms.iter().map(|l| (-l - shift).exp()).collect();
        Ok(shift + sum.value().ln())
    }

    /// `sum_{j=1}^{n-1} 1/|p(j, 1)|`; infinite if the sum leaves binary64 range.
    pub fn reciprocal_product_sum(&self, n: usize) -> Result<f64> {
        Ok(self.log_reciprocal_product_sum(n)?.exp())
    }

    /// `sup_{n <= N} sum_{j > n} 1/|p(j+1, n+1)|` style profile used by the expanding
    /// shadow: entry `n - 1` holds `sum_{j=n+1}^{N-1} 1/|p(j+1, n+1)|` plus the
    /// geometric extrapolation `exp(L_{n+1} - L_N) / (e^rate - 1)` of the dropped tail.
    pub fn reciprocal_tail_profile(&self, rate: f64) -> Vec<f64> {
        let h = self.horizon();
        if h < 2 {
            return Vec::new();
        }
        let tail_unit = if rate > 0.0 { 1.0 / rate.exp_m1() } else { f64::INFINITY };
        let last = self.logmag[h - 1];
        let mut out = vec![0.0; h - 1];
        // n = h-1: no finite terms.
        let mut running = 0.0;
        for n in (1..h).rev() {
            if n < h - 1 {
                // U_n = (1 + U_{n+1}) / |a_{n+1}|
                let log_a = self.logmag[n + 1] - self.logmag[n];
                running = (1.0 + running) * (-log_a).exp();
            }
            let tail = if tail_unit.is_finite() {
                (self.logmag[n] - last).exp() * tail_unit
            } else {
                f64::INFINITY
            };
            out[n - 1] = running + tail;
        }
        out
    }

    /// Writes `n, L_n, Theta_n` rows (phase reduced) as CSV.
    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["n", "L_n", "Theta_n"])?;
        for (i, (l, t)) in self.logmag.iter().zip(&self.phase).enumerate() {
            out.write_record([(i + 1).to_string(), l.to_string(), reduce_angle(*t).to_string()])?;
        }
        out.flush()
    }
}

/// Free-function form of [`PartialProductLedger::build`].
pub fn build_ledger(spec: &CoefficientSpec, horizon: usize) -> Result<PartialProductLedger> {
    PartialProductLedger::build(spec, horizon)
}

fn check_positive(t: &[f64], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::IndexOutOfRange(format!("ratio needs n >= 2, got {n}")));
    }
    if n > t.len() {
        return Err(Error::IndexOutOfRange(format!("n = {n} exceeds sequence length {}", t.len())));
    }
    match t[..n].iter().position(|x| !(*x > 0.0 && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveTerm { index: i + 1 }),
        None => Ok(()),
    }
}

/// `t_n / sum_{j=1}^{n-1} t_j` for a 1-based positive sequence (`t[0]` is `t_1`).
pub fn subexponential_ratio(t: &[f64], n: usize) -> Result<f64> {
    check_positive(t, n)?;
    let sum: CompensatedSum = t[..n - 1].iter().copied().collect();
    Ok(t[n - 1] / sum.value())
}

/// `t_n K^n / sum_{j=1}^{n-1} t_j K^j`, evaluated as the reciprocal of a sum of
/// ratios so that large `K^n` never materializes.
pub fn balance_ratio(t: &[f64], k: f64, n: usize) -> Result<f64> {
    if !(k > 1.0 && k.is_finite()) {
        return Err(Error::BadK(k));
    }
    check_positive(t, n)?;
    let log_k = k.ln();
    let log_tn = t[n - 1].ln();
    let sum: CompensatedSum = (1..n)
        .map(|j| (t[j - 1].ln() - log_tn + (j as f64 - n as f64) * log_k).exp())
        .collect();
    Ok(1.0 / sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{builtin_example, Complex, ExampleParams};
    use std::f64::consts::PI;

    fn constant(a: f64) -> CoefficientSpec {
        CoefficientSpec::constant(Complex::new(a, 0.0), Complex::new(1.0, 0.0)).unwrap()
    }

    fn builtin(name: &str) -> CoefficientSpec {
        builtin_example(name, &ExampleParams::default()).unwrap()
    }

    #[test]
    fn alternating_products_are_one_and_two() {
        let ledger = build_ledger(&builtin("alternating_2_half"), 200).unwrap();
        for k in 1..=99 {
            let odd = ledger.partial_product(2 * k + 1, 1).unwrap();
            let even = ledger.partial_product(2 * k, 1).unwrap();
            assert!(odd.log_abs.abs() < 1e-13);
            assert!((even.abs() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_product_is_one() {
        let ledger = build_ledger(&builtin("period3_2_i_third"), 10).unwrap();
        assert_eq!(ledger.partial_product(5, 5).unwrap(), LogComplex::one());
        assert!(ledger.partial_product(5, 6).is_err());
        assert!(ledger.partial_product(11, 1).is_err());
        assert!(ledger.partial_product(3, 0).is_err());
    }

    #[test]
    fn period3_one_cycle_magnitude() {
        let ledger = build_ledger(&builtin("period3_2_i_third"), 10).unwrap();
        assert!((ledger.partial_product(4, 1).unwrap().abs() - 2.0 / 3.0).abs() < 1e-14);
        let p32 = ledger.partial_product(3, 2).unwrap();
        assert!(p32.log_abs.abs() < 1e-15);
        assert!((p32.arg - PI / 2.0).abs() < 1e-15);
        assert!((p32.value() - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_two_product_matches_repeated_multiplication() {
        let ledger = build_ledger(&constant(2.0), 20).unwrap();
        let mut direct = 1.0;
        for _ in 0..10 {
            direct *= 2.0;
        }
        let p = ledger.partial_product(11, 1).unwrap();
        assert!((p.value().re - direct).abs() < 1e-10);
        assert_eq!(direct, 1024.0);
        let spec = builtin("period3_2_i_third");
        let ledger = build_ledger(&spec, 40).unwrap();
        for (m, k) in [(4, 1), (30, 7), (40, 40), (17, 2)] {
            let a = ledger.partial_product_value(m, k).unwrap();
            let b = ledger.partial_product(m, k).unwrap().value();
            assert!((a - b).norm() < 1e-12 * b.norm());
        }
        assert!(ledger.partial_product_value(3, 4).is_err());
    }

    #[test]
    fn geometric_mean_exponent_examples() {
        let ones = build_ledger(&constant(1.0), 50).unwrap();
        for n in 2..=50 {
            assert_eq!(ones.geometric_mean_exponent(n).unwrap(), 0.0);
        }
        let twos = build_ledger(&constant(2.0), 50).unwrap();
        let direct = (2f64.powi(9)).ln() / 10.0;
        assert!((twos.geometric_mean_exponent(10).unwrap() - direct).abs() < 1e-15);
        assert!(twos.geometric_mean_exponent(1).is_err());

        let squares = build_ledger(&builtin("sparse3_squares"), 10_002).unwrap();
        let mut previous = f64::INFINITY;
        for m in [10usize, 30, 60, 100] {
            let g = squares.geometric_mean_exponent(m * m + 1).unwrap();
            let expect = m as f64 * 3f64.ln() / (m * m + 1) as f64;
            assert!((g - expect).abs() < 1e-13, "m = {m}");
            assert!(g < previous);
            previous = g;
        }
    }

    #[test]
    fn tracking_sum_examples() {
        let half = build_ledger(&constant(0.5), 60).unwrap();
        for n in 1..60 {
            let geometric: f64 = (0..n).map(|k| 0.5f64.powi(k as i32)).sum();
            let t = half.tracking_sum(n).unwrap();
            assert!((t - geometric).abs() < 1e-14);
            assert!(t <= 2.0 + 1e-14);
        }
        let two = build_ledger(&constant(2.0), 10).unwrap();
        assert!((two.tracking_sum(3).unwrap() - 7.0).abs() < 1e-12);
        assert!(two.tracking_sum(10).is_err());
        assert!(two.tracking_sum(0).is_err());
    }

    #[test]
    fn period3_tracking_sum_stays_below_sixteen() {
        let ledger = build_ledger(&builtin("period3_2_i_third"), 3001).unwrap();
        let sup = (1..3000).map(|n| ledger.tracking_sum(n).unwrap()).fold(0.0, f64::max);
        assert!(sup < 16.0);
        assert!((sup - 12.0).abs() < 1e-9, "sup = {sup}");
    }

    #[test]
    fn tracking_profile_agrees_with_direct_sums() {
        for name in ["period3_2_i_third", "alternating_2_half", "near_parabolic"] {
            let ledger = build_ledger(&builtin(name), 400).unwrap();
            let profile = ledger.log_tracking_sum_profile();
            assert_eq!(profile.len(), 399);
            for n in 1..400 {
                let direct = ledger.tracking_sum(n).unwrap();
                assert!((profile[n - 1].exp() - direct).abs() <= 1e-12 * direct, "{name} n = {n}");
            }
        }
        let big = build_ledger(&constant(3.0), 5000).unwrap();
        let profile = big.log_tracking_sum_profile();
        let last = *profile.last().unwrap();
        // T_n = (3^n - 1) / 2
        let expect = 4999.0 * 3f64.ln() - 2f64.ln();
        assert!((last - expect).abs() < 1e-9);
    }

    #[test]
    fn reciprocal_product_sum_examples() {
        let two = build_ledger(&constant(2.0), 200).unwrap();
        for n in 2..=200 {
            let s = two.reciprocal_product_sum(n).unwrap();
            let oracle = 2.0 * (1.0 - 0.5f64.powi(n as i32 - 1));
            assert!((s - oracle).abs() < 1e-14);
            assert!(s <= 2.0 + 1e-14);
        }
        let one = build_ledger(&constant(1.0), 100).unwrap();
        assert!((one.reciprocal_product_sum(100).unwrap() - 99.0).abs() < 1e-12);

        let alt = build_ledger(&builtin("alternating_2_half"), 1001).unwrap();
        for k in 1..=500 {
            let s = alt.reciprocal_product_sum(2 * k + 1).unwrap();
            assert!((s - 1.5 * k as f64).abs() < 1e-10, "k = {k}");
        }

        // contracting products: the sum itself overflows but its log does not
        let half = build_ledger(&constant(0.5), 3000).unwrap();
        let log_s = half.log_reciprocal_product_sum(3000).unwrap();
        assert!((log_s - (2998.0 * 2f64.ln() + (2.0 - 0.5f64.powi(2998)).ln())).abs() < 1e-9);
        assert!(half.reciprocal_product_sum(3000).unwrap().is_infinite());
    }

    #[test]
    fn reciprocal_tail_profile_for_constant_three() {
        let ledger = build_ledger(&constant(3.0), 200).unwrap();
        let profile = ledger.reciprocal_tail_profile(3f64.ln());
        for u in &profile {
            assert!((u - 0.5).abs() < 1e-12, "u = {u}");
        }
        let no_tail = ledger.reciprocal_tail_profile(0.0);
        assert!(no_tail.iter().all(|u| u.is_infinite()));
    }

    #[test]
    fn subexponential_ratio_examples() {
        let ones = vec![1.0; 100];
        assert!((subexponential_ratio(&ones, 100).unwrap() - 1.0 / 99.0).abs() < 1e-15);
        let linear: Vec<f64> = (1..=100).map(|n| n as f64).collect();
        let oracle = 100.0 / (99.0 * 100.0 / 2.0);
        assert!((subexponential_ratio(&linear, 100).unwrap() - oracle).abs() < 1e-15);
        let geometric: Vec<f64> = (1..=60).map(|n| 2f64.powi(n)).collect();
        let r = subexponential_ratio(&geometric, 60).unwrap();
        assert!((r - 2f64.powi(60) / (2f64.powi(60) - 2.0)).abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);

        assert_eq!(subexponential_ratio(&[1.0, 0.0, 1.0], 3), Err(Error::NonPositiveTerm { index: 2 }));
        assert!(subexponential_ratio(&ones, 1).is_err());
        assert!(subexponential_ratio(&ones, 101).is_err());
    }

    #[test]
    fn balance_ratio_examples() {
        let ones = vec![1.0; 2000];
        assert!((balance_ratio(&ones, 3.0, 4).unwrap() - 81.0 / 39.0).abs() < 1e-14);
        assert!((balance_ratio(&ones, 2.0, 2000).unwrap() - 1.0).abs() < 1e-12);
        let geometric: Vec<f64> = (1..=200).map(|n| 2f64.powi(n)).collect();
        assert!((balance_ratio(&geometric, 2.0, 200).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(balance_ratio(&ones, 1.0, 10), Err(Error::BadK(1.0)));
        assert!(balance_ratio(&[1.0, -1.0], 2.0, 2).is_err());
    }

    #[test]
    fn scaled_complex_survives_overflow() {
        let mut x = ScaledComplex::from_complex(Complex::new(1.0, 0.0));
        for _ in 0..4000 {
            x = x.mul(Complex::new(0.0, 2.0)).add_complex(Complex::new(1.0, 0.0));
        }
        // x_n = (2i)^n / (1 + i/2) up to a vanishing correction
        assert!((x.ln_abs() - (4000.0 * 2f64.ln() - 0.5 * 1.25f64.ln())).abs() < 1e-9);
        let mut y = ScaledComplex::from_complex(Complex::new(1.0, 0.0));
        for _ in 0..4000 {
            y = y.mul(Complex::new(0.5, 0.0));
        }
        assert!((y.ln_abs() + 4000.0 * 2f64.ln()).abs() < 1e-9);
        let s = y.add_complex(Complex::new(3.0, 4.0));
        assert!((s.to_complex() - Complex::new(3.0, 4.0)).norm() < 1e-15);
        assert!(ScaledComplex::zero().add(ScaledComplex::zero()).is_zero());
        assert_eq!(ScaledComplex::zero().ln_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let ledger = build_ledger(&builtin("period3_2_i_third"), 4).unwrap();
        let mut buf = Vec::new();
        ledger.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,L_n,Theta_n");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,0,0"));
    }

    #[test]
    fn log_add_exp_edges() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}

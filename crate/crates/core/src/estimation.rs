//! Quantum Fisher information of the Schmidt family and the number of
//! measurements needed to estimate a measure of entanglement or purity to a
//! fixed relative error.
//!
//! For a measure `m(lambda)` the transformed Fisher information is
//! `H(lambda) / (dm/dlambda)^2` and the measurement count is
//!
//! ```text
//! M_delta(m) = (dm/dlambda)^2 / (m^2 delta^2 H(lambda))
//! ```
//!
//! Curves are evaluated parametrically in `lambda` on the canonical branch
//! `(0, 1/2]`, which avoids choosing among the roots of `m(lambda) = value`.
//! Every measure here is a function of `s = 4 lambda (1 - lambda)`, so the
//! curve on `[1/2, 1)` is the mirror image.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::monotones::{epsilon_n, mu_n};
use crate::par;
use crate::qcore::{density, partial_trace, schmidt_state, ComplexMatrix, PureState, Subsystem};

/// Default distance kept from the singular points `0`, `1/2` and `1`.
pub const DEFAULT_ENDPOINT_MARGIN: f64 = 1e-3;

/// Slack allowed when a computed measure overshoots `[0, 1]` by rounding.
const UNIT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    /// `2 (1 - tr(rho_A^2)) = 4 lambda (1 - lambda)`.
    LinearEntropy,
    /// Square root of the linear entropy.
    Negativity,
    /// `tr(rho_A^2)`.
    Purity,
    /// Tensor-power entanglement monotone of the given order.
    Epsilon(u32),
    /// Tensor-power purity monotone of the given order.
    Mu(u32),
}

impl MeasureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MeasureKind::LinearEntropy => "linear-entropy",
            MeasureKind::Negativity => "negativity",
            MeasureKind::Purity => "purity",
            MeasureKind::Epsilon(_) => "epsilon",
            MeasureKind::Mu(_) => "mu",
        }
    }

    pub fn order(&self) -> Option<u32> {
        match *self {
            MeasureKind::Epsilon(n) | MeasureKind::Mu(n) => Some(n),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.order() {
            Some(0) => domain(format!("{} needs an order n >= 1", self.tag())),
            _ => Ok(()),
        }
    }

    /// Closed interval of values the measure takes on `lambda in [0, 1]`.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            MeasureKind::Purity => (0.5, 1.0),
            MeasureKind::Epsilon(n) => (3f64.powi(-(n as i32)), 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Measure of the Schmidt state at `lambda`, computed from the reduced
    /// state (classic measures) or the pullback tensor (monotones).
    pub fn value(&self, lambda: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            MeasureKind::Epsilon(n) => epsilon_n(lambda, n),
            MeasureKind::Mu(n) => mu_n(lambda, n),
            _ => {
                let rho_a = partial_trace(&density(&schmidt_state(lambda)?), Subsystem::A)?;
                let purity = rho_a.purity();
                let linear_entropy = 2.0 * (1.0 - purity);
                Ok(match self {
                    MeasureKind::LinearEntropy => linear_entropy,
                    MeasureKind::Negativity => linear_entropy.max(0.0).sqrt(),
                    _ => purity,
                })
            }
        }
    }

    /// Real values of `s = 4 lambda (1 - lambda)` in `[0, 1]` at which the
    /// measure equals `value`.
    fn s_solutions(&self, value: f64) -> Vec<f64> {
        let s = match *self {
            MeasureKind::LinearEntropy => Some(value),
            MeasureKind::Negativity => Some(value * value),
            MeasureKind::Purity => Some(2.0 * (1.0 - value)),
            MeasureKind::Mu(n) => Some(1.0 - value.powf(1.0 / n as f64)),
            MeasureKind::Epsilon(n) => {
                // (1 + s + s^2) / 3 = value^(1/n)
                let q = value.powf(1.0 / n as f64);
                let disc = 12.0 * q - 3.0;
                (disc >= 0.0).then(|| (disc.sqrt() - 1.0) / 2.0)
            }
        };
        s.into_iter()
            .filter(|s| (-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(s))
            .map(|s| s.clamp(0.0, 1.0))
            .collect()
    }

    /// Complex roots `s` of the defining polynomial (order-1 form set equal
    /// to `value^(1/n)`).
    fn s_polynomial_roots(&self, value: f64) -> Vec<Complex64> {
        let re = |x: f64| Complex64::new(x, 0.0);
        match *self {
            MeasureKind::Epsilon(n) => {
                let q = value.powf(1.0 / n as f64);
                let disc = re(12.0 * q - 3.0).sqrt();
                vec![(disc - 1.0) / 2.0, (-disc - 1.0) / 2.0]
            }
            _ => self
                .s_solutions_unclamped(value)
                .into_iter()
                .map(re)
                .collect(),
        }
    }

    fn s_solutions_unclamped(&self, value: f64) -> Vec<f64> {
        match *self {
            MeasureKind::LinearEntropy => vec![value],
            MeasureKind::Negativity => vec![value * value],
            MeasureKind::Purity => vec![2.0 * (1.0 - value)],
            MeasureKind::Mu(n) => vec![1.0 - value.powf(1.0 / n as f64)],
            MeasureKind::Epsilon(_) => unreachable!("handled by s_polynomial_roots"),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            Some(n) => write!(f, "{}:{n}", self.tag()),
            None => f.write_str(self.tag()),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    /// Accepts `linear-entropy`, `negativity`, `purity`, `epsilon:N`, `mu:N`
    /// (also `epsilon(N)`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, order) = match s.find([':', '(']) {
            Some(i) => {
                let digits = s[i + 1..].trim_end_matches(')');
                let n: u32 = digits
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad order in '{s}'")))?;
                (&s[..i], Some(n))
            }
            None => (s, None),
        };
        let kind = match (tag, order) {
            ("linear-entropy", None) => MeasureKind::LinearEntropy,
            ("negativity", None) => MeasureKind::Negativity,
            ("purity", None) => MeasureKind::Purity,
            ("epsilon", Some(n)) => MeasureKind::Epsilon(n),
            ("mu", Some(n)) => MeasureKind::Mu(n),
            _ => return domain(format!("unknown measure '{s}'")),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// `H(lambda) = 1 / (lambda (1 - lambda))`.
pub fn qfi_schmidt(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("lambda = {lambda} outside [0, 1]"));
    }
    if lambda == 0.0 || lambda == 1.0 {
        return Err(Error::Singular(format!(
            "quantum Fisher information diverges at lambda = {lambda}"
        )));
    }
    Ok(1.0 / (lambda * (1.0 - lambda)))
}

fn check_fd_window(lambda: f64, h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return domain(format!("step h = {h} must be positive"));
    }
    if lambda - h < 0.0 || lambda + h > 1.0 {
        return domain(format!("lambda +/- h = {lambda} +/- {h} leaves [0, 1]"));
    }
    Ok(())
}

/// `4 (<d psi|d psi> + <psi|d psi>^2)` with a central-difference derivative.
///
/// The square is the complex square. For a normalized family
/// `<psi|d psi>` is purely imaginary, so this equals the projective form
/// `4 (<d psi|d psi> - |<psi|d psi>|^2)` and is unchanged by a
/// `lambda`-dependent global phase.
pub fn qfi_pure_fd<F>(family: F, lambda: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<PureState>,
{
    check_fd_window(lambda, h)?;
    let psi = family(lambda)?;
    let fwd = family(lambda + h)?;
    let bwd = family(lambda - h)?;
    if fwd.dim() != psi.dim() || bwd.dim() != psi.dim() {
        return domain("family changes dimension");
    }
    let dpsi = (fwd.amplitudes() - bwd.amplitudes()).unscale(2.0 * h);
    let overlap = psi.amplitudes().dotc(&dpsi);
    Ok(4.0 * (dpsi.norm_squared() + (overlap * overlap).re))
}

/// Result of [`sld_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SldReport {
    /// `tr(rho L^2)`.
    pub qfi: f64,
    /// Largest entry of `|d rho - (L rho + rho L)/2|`.
    pub anticommutator_residual: f64,
}

/// Builds `L = 2 d rho` from a central difference of the projector and
/// evaluates `tr(rho L^2)` together with the residual of
/// `d rho = (L rho + rho L) / 2`.
pub fn sld_check<F>(family: F, lambda: f64, h: f64) -> Result<SldReport>
where
    F: Fn(f64) -> Result<PureState>,
{
    check_fd_window(lambda, h)?;
    let rho = density(&family(lambda)?).matrix().clone();
    let fwd = density(&family(lambda + h)?).matrix().clone();
    let bwd = density(&family(lambda - h)?).matrix().clone();
    if fwd.shape() != rho.shape() || bwd.shape() != rho.shape() {
        return domain("family changes dimension");
    }
    let drho: ComplexMatrix = (fwd - bwd).unscale(2.0 * h);
    let sld = &drho * Complex64::new(2.0, 0.0);
    let qfi = (&rho * &sld * &sld).trace().re;
    let anti = (&sld * &rho + &rho * &sld).unscale(2.0);
    let anticommutator_residual = crate::qcore::max_abs_diff(&drho, &anti);
    Ok(SldReport {
        qfi,
        anticommutator_residual,
    })
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return domain(format!("relative error delta = {delta} must be positive"));
    }
    Ok(())
}

fn clamp_unit(value: f64) -> f64 {
    if value > 1.0 && value <= 1.0 + UNIT_SLACK {
        1.0
    } else {
        value
    }
}

/// Measurement count from the closed form of each measure.
///
/// * linear entropy: `4 (1 - e) / e`
/// * negativity: `(1 - e^2) / e^2`
/// * purity: `-4 + 6/e - 2/e^2`
/// * `mu_n`: `4 n^2 (1 - mu^(1/n)) / mu^(1/n)`
/// * `epsilon_n`: `4 n^2 s (1 - s) (1 + 2s)^2 / (1 + s + s^2)^2` with `s`
///   the canonical-branch solution of `((1 + s + s^2)/3)^n = e`
///
/// all divided by `delta^2`.
pub fn measurements_closed(kind: MeasureKind, value: f64, delta: f64) -> Result<f64> {
    kind.validate()?;
    check_delta(delta)?;
    let v = clamp_unit(value);
    let (lo, hi) = kind.range();
    if !(lo..=hi).contains(&v) {
        return domain(format!("{kind} value {value} outside [{lo}, {hi}]"));
    }
    let singular = || {
        Err(Error::Singular(format!(
            "measurement count for {kind} diverges at {value}"
        )))
    };
    let m = match kind {
        MeasureKind::LinearEntropy => {
            if v == 0.0 {
                return singular();
            }
            4.0 * (1.0 - v) / v
        }
        MeasureKind::Negativity => {
            if v == 0.0 {
                return singular();
            }
            (1.0 - v * v) / (v * v)
        }
        MeasureKind::Purity => -4.0 + 6.0 / v - 2.0 / (v * v),
        MeasureKind::Mu(n) => {
            if v == 0.0 {
                return singular();
            }
            let r = v.powf(1.0 / n as f64);
            4.0 * (n * n) as f64 * (1.0 - r) / r
        }
        MeasureKind::Epsilon(n) => {
            let s = kind.s_solutions(v)[0];
            let q = 1.0 + s + s * s;
            4.0 * (n * n) as f64 * s * (1.0 - s) * (1.0 + 2.0 * s).powi(2) / (q * q)
        }
    };
    Ok(m / (delta * delta))
}

/// Five-point central difference of the measure at `lambda`.
fn measure_derivative(kind: MeasureKind, lambda: f64) -> Result<f64> {
    let mut scale = lambda.min(1.0 - lambda);
    let mid = (lambda - 0.5).abs();
    if mid > 0.0 {
        scale = scale.min(mid);
    }
    let h = (1e-3 * scale).min(1e-4);
    let f = |x: f64| kind.value(x);
    Ok(
        (f(lambda - 2.0 * h)? - 8.0 * f(lambda - h)? + 8.0 * f(lambda + h)? - f(lambda + 2.0 * h)?)
            / (12.0 * h),
    )
}

/// Measurement count at a single `lambda in (0, 1)`, by the parametric route.
pub fn measurement_at(kind: MeasureKind, delta: f64, lambda: f64) -> Result<f64> {
    kind.validate()?;
    check_delta(delta)?;
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("lambda = {lambda} outside [0, 1]"));
    }
    let qfi = qfi_schmidt(lambda)?;
    let value = kind.value(lambda)?;
    if value <= 0.0 {
        return Err(Error::Singular(format!(
            "{kind} vanishes at lambda = {lambda}; 1/m^2 diverges"
        )));
    }
    let slope = measure_derivative(kind, lambda)?;
    Ok(slope * slope / (value * value * delta * delta * qfi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub measure: f64,
    pub measurements: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationCurve {
    pub kind: MeasureKind,
    pub delta: f64,
    pub points: Vec<CurvePoint>,
}

/// Measurement-count curve over a strictly increasing grid in `(0, 1/2]`.
pub fn measurements_parametric(
    kind: MeasureKind,
    delta: f64,
    grid: &[f64],
) -> Result<EstimationCurve> {
    kind.validate()?;
    check_delta(delta)?;
    if grid.is_empty() {
        return domain("estimation grid is empty");
    }
    for &l in grid {
        if l == 0.0 {
            return Err(Error::Singular("grid touches lambda = 0".into()));
        }
        if !(l > 0.0 && l <= 0.5) {
            return domain(format!("grid point {l} outside (0, 0.5]"));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("grid must be strictly increasing");
    }
    let points = par::map(grid, |&lambda| -> Result<CurvePoint> {
        Ok(CurvePoint {
            measure: kind.value(lambda)?,
            measurements: measurement_at(kind, delta, lambda)?,
            lambda,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let increasing = points.windows(2).all(|w| w[1].measure > w[0].measure);
    let decreasing = points.windows(2).all(|w| w[1].measure < w[0].measure);
    if !(increasing || decreasing) {
        return Err(Error::Branch(format!(
            "{kind} is not strictly monotonic on the grid"
        )));
    }
    Ok(EstimationCurve {
        kind,
        delta,
        points,
    })
}

/// Every `lambda in [0, 1]` at which the measure equals `value`, ascending.
///
/// Roots come from solving the measure's polynomial in
/// `s = 4 lambda (1 - lambda)` and are completed by a bracketed scan of the
/// pipeline measure. Values in `[0, 1]` that the measure never attains give
/// an empty list.
pub fn invert_monotone_roots(kind: MeasureKind, value: f64) -> Result<Vec<f64>> {
    kind.validate()?;
    if !(0.0..=1.0).contains(&value) {
        return domain(format!("value {value} outside [0, 1]"));
    }
    let mut roots: Vec<f64> = Vec::new();
    for s in kind.s_solutions(value) {
        let r = (1.0 - s).max(0.0).sqrt();
        roots.push((1.0 - r) / 2.0);
        roots.push((1.0 + r) / 2.0);
    }
    for root in bracketed_roots(|l| Ok(kind.value(l)? - value), 400)? {
        roots.push(root);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    Ok(roots)
}

/// Roots of `f` on `[0, 1]` found by scanning `samples` subintervals for sign
/// changes (or exact zeros) and bisecting each bracket.
pub fn bracketed_roots<F>(f: F, samples: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let xs: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
    let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut roots = Vec::new();
    for i in 0..=samples {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i < samples && ys[i + 1] != 0.0 && ys[i].signum() != ys[i + 1].signum() {
            let (mut a, mut b, mut fa) = (xs[i], xs[i + 1], ys[i]);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                let fm = f(mid)?;
                if fm == 0.0 || b - a < 1e-15 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    Ok(roots)
}

/// All complex roots `lambda` of the measure's defining polynomial set equal
/// to `value`, including those off `[0, 1]` and off the real line.
///
/// The order-`n` monotones are reduced by taking the real `n`-th root of
/// `value` first.
pub fn polynomial_roots(kind: MeasureKind, value: f64) -> Result<Vec<Complex64>> {
    kind.validate()?;
    if value.is_nan() || value < 0.0 {
        return domain(format!("value {value} must be nonnegative"));
    }
    let mut out = Vec::new();
    for s in kind.s_polynomial_roots(value) {
        let r = (Complex64::new(1.0, 0.0) - s).sqrt();
        out.push((1.0 - r) / 2.0);
        out.push((1.0 + r) / 2.0);
    }
    Ok(out)
}

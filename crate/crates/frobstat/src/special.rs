//! Polylogarithms `Li_s(η)` for real order `s` on `η ∈ [0, 1]`, together
//! with the Riemann zeta and gamma functions they require.
//!
//! Evaluation strategy:
//!
//! * `η ≤ 0.6`: direct Dirichlet series `Σ η^k / k^s` with compensated
//!   summation,
//! * `η > 0.6`, non-integer `s`: branch-point expansion around `η = 1`,
//!   `Li_s(e^{-γ}) = Γ(1-s) γ^{s-1} + Σ_{k≥0} ζ(s-k) (-γ)^k / k!`,
//!   truncated once terms fall below `1e-16` of the running sum.
//!
//! The direct series alone needs millions of terms near `η = 1` for
//! `s ≤ 1/2`, which is exactly the regime the Bose-Einstein condensation
//! analysis lives in, so the expansion is not optional.
//!
//! All functions here are pure and safe to call from any number of threads;
//! the only shared state is an immutable coefficient table initialized on
//! first use.

use crate::{Error, Result};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Orders with full-range support (series + branch expansion + endpoint).
/// Other real orders evaluate through the same code paths but are only
/// guaranteed by tests on this set, which is closed under `s → s-1` as far
/// down as the fourth potential derivatives of the Bose gas need.
pub const SUPPORTED_ORDERS: [f64; 6] = [-1.5, -0.5, 0.5, 1.0, 1.5, 2.5];

const SERIES_CUTOFF: f64 = 0.6;
const REL_EPS: f64 = 1e-16;

/// Gamma function for real arguments (Lanczos approximation, reflection
/// for `x < 0.5`, exact closed forms at half-integers).
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma: non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain(format!(
            "gamma: pole at non-positive integer {x}"
        )));
    }
    // Exact at half-integers: Γ(1/2) = √π walked up or down by Γ(x+1) = xΓ(x).
    let doubled = 2.0 * x;
    if doubled == doubled.round() && doubled.rem_euclid(2.0) == 1.0 {
        let m = ((x - 0.5) as i64).clamp(-200, 200);
        let mut value = PI.sqrt();
        if x >= 0.5 {
            for j in 0..m {
                value *= j as f64 + 0.5;
            }
        } else {
            for j in 1..=(-m) {
                value /= 0.5 - j as f64;
            }
        }
        return Ok(value);
    }
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    Ok(lanczos_gamma(x))
}

/// Lanczos approximation, g = 7, 9 coefficients; valid for x ≥ 0.5.
fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_312e-7,
    ];
    let z = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Riemann zeta function for real `s ≠ 1`.
///
/// For `s ≥ 0.5` this is the Euler-transform acceleration of the Dirichlet
/// eta series (globally convergent, ~2⁻⁶⁴ truncation error); for `s < 0.5`
/// the functional equation `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)`
/// reflects into that regime, which keeps the alternating sum
/// well-conditioned at the negative arguments the branch expansion needs.
pub fn zeta(s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::domain(format!("zeta: non-finite argument {s}")));
    }
    if s == 1.0 {
        return Err(Error::domain("zeta: pole at s = 1".to_string()));
    }
    if s == 0.0 {
        // the reflection formula degenerates to 0·∞ here
        return Ok(-0.5);
    }
    if s < 0.0 && s == s.floor() && (s * 0.5) == (s * 0.5).floor() {
        // trivial zeros at negative even integers
        return Ok(0.0);
    }
    if s < 0.5 {
        let sin_factor = (PI * s / 2.0).sin();
        return Ok(2.0_f64.powf(s)
            * PI.powf(s - 1.0)
            * sin_factor
            * gamma(1.0 - s)?
            * zeta(1.0 - s)?);
    }
    Ok(eta_accelerated(s) / (1.0 - 2.0_f64.powf(1.0 - s)))
}

/// Number of rows of the Euler transform kept for the eta series.
const ETA_TERMS: usize = 64;

/// Weights `(-1)^k Σ_{n=k}^{N} C(n,k) 2^{-(n+1)}` of the truncated Euler
/// transform, so each eta evaluation is a single weighted sum.
fn eta_weights() -> &'static [f64; ETA_TERMS + 1] {
    static WEIGHTS: OnceLock<[f64; ETA_TERMS + 1]> = OnceLock::new();
    WEIGHTS.get_or_init(|| {
        let mut weights = [0.0_f64; ETA_TERMS + 1];
        let mut row = [0.0_f64; ETA_TERMS + 1];
        let mut pow2 = 0.5; // 2^{-(n+1)}
        for n in 0..=ETA_TERMS {
            // binomial row C(n, k), built in place from the previous row
            row[n] = 1.0;
            if n > 0 {
                for k in (1..n).rev() {
                    row[k] += row[k - 1];
                }
            }
            for (k, w) in weights.iter_mut().enumerate().take(n + 1) {
                *w += row[k] * pow2;
            }
            pow2 *= 0.5;
        }
        for (k, w) in weights.iter_mut().enumerate() {
            if k % 2 == 1 {
                *w = -*w;
            }
        }
        weights
    })
}

/// Dirichlet eta `Σ (-1)^{k-1} k^{-s}` through the Euler transform; entire
/// in `s`, used here for `s ≥ 0.5` where the weighted sum is
/// well-conditioned.
fn eta_accelerated(s: f64) -> f64 {
    let weights = eta_weights();
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let term = w * ((k + 1) as f64).powf(-s);
        let y = term - compensation;
        let t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Polylogarithm `Li_s(η) = Σ_{k≥1} η^k / k^s` for `η ∈ [0, 1)`, or
/// `η = 1` with `s > 1` where it equals `ζ(s)`.
pub fn polylog(s: f64, eta: f64) -> Result<f64> {
    if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!("polylog: η = {eta} outside [0, 1]")));
    }
    if eta == 1.0 {
        if s > 1.0 {
            return zeta(s);
        }
        return Err(Error::domain(format!(
            "polylog: Li_{s}(1) diverges for s ≤ 1"
        )));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    // Closed forms at the integer orders the derivative recurrence reaches.
    if s == 1.0 {
        return Ok(-(-eta).ln_1p());
    }
    if s == 0.0 {
        return Ok(eta / (1.0 - eta));
    }
    if s == -1.0 {
        return Ok(eta / ((1.0 - eta) * (1.0 - eta)));
    }
    if eta <= SERIES_CUTOFF {
        return polylog_series(s, eta, 1_000);
    }
    if s == s.round() {
        // Integer s ≥ 2 stays on the series; it converges on the whole
        // open interval, just more slowly near 1.
        return polylog_series(s, eta, 40_000_000);
    }
    polylog_branch(s, -eta.ln())
}

/// Direct series with compensated (Kahan) summation.
fn polylog_series(s: f64, eta: f64, max_terms: usize) -> Result<f64> {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    let mut power = 1.0;
    for k in 1..=max_terms {
        power *= eta;
        let term = power * (k as f64).powf(-s);
        let y = term - compensation;
        let t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
        // Terms are eventually strictly decreasing; k^{|s|} η^k starts to
        // fall at the latest once k > |s| / -ln η.
        if term.abs() <= REL_EPS * sum.abs() && k as f64 > s.abs() / -eta.ln() {
            return Ok(sum);
        }
    }
    Err(Error::Numerical(format!(
        "polylog series did not converge for s = {s}, η = {eta}"
    )))
}

/// Branch-point expansion `Li_s(e^{-γ}) = Γ(1-s) γ^{s-1} + Σ ζ(s-k)(-γ)^k/k!`
/// for non-integer `s` and `0 < γ < 2π`.
fn polylog_branch(s: f64, gamma_coord: f64) -> Result<f64> {
    debug_assert!(gamma_coord > 0.0 && gamma_coord < 2.0 * PI);
    let mut sum = gamma(1.0 - s)? * gamma_coord.powf(s - 1.0);
    let mut factor = 1.0; // (-γ)^k / k!
    for k in 0..200 {
        let term = zeta(s - k as f64)? * factor;
        sum += term;
        if k > 3 && term.abs() <= REL_EPS * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
        factor *= -gamma_coord / (k + 1) as f64;
    }
    Err(Error::Numerical(format!(
        "polylog branch expansion did not converge for s = {s}, γ = {gamma_coord}"
    )))
}

/// Derivative `d Li_s(η) / dη = Li_{s-1}(η) / η`, defined on `η ∈ (0, 1)`.
///
/// The limit value at `η = 0⁺` is 1 for every order; callers integrating
/// across the endpoint must take that limit explicitly rather than call
/// this function at 0.
pub fn polylog_derivative(s: f64, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::domain(format!(
            "polylog_derivative: η = {eta} outside (0, 1); the η → 0 limit is 1"
        )));
    }
    Ok(polylog(s - 1.0, eta)? / eta)
}

/// Leading branch-point behaviour `Li_s(e^{-γ}) ~ Γ(1-s) γ^{s-1}` for
/// `s < 1` as `γ → 0⁺`. Cross-validation helper, not an evaluator.
pub fn polylog_asymptotic(s: f64, gamma_coord: f64) -> Result<f64> {
    if s >= 1.0 {
        return Err(Error::domain(format!(
            "polylog_asymptotic: needs s < 1, got s = {s}"
        )));
    }
    if gamma_coord <= 0.0 {
        return Err(Error::domain(format!(
            "polylog_asymptotic: needs γ > 0, got γ = {gamma_coord}"
        )));
    }
    Ok(gamma(1.0 - s)? * gamma_coord.powf(s - 1.0))
}

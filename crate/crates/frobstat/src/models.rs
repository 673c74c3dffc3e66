//! Statistical manifolds given as convex potentials in dually-flat
//! coordinates, with partial derivatives up to fourth order.
//!
//! The two gas models use the grand-canonical free energy per volume in the
//! coordinates `(β, γ) = (1/T, -ln η)` and carry closed-form partials; the
//! thermal wavelength `λ = h / √(2π m k_B T)` is β-dependent inside every
//! derivative. User-defined polynomial potentials fall back to central
//! finite differences with one Richardson extrapolation level.

use crate::{Error, Result};
use std::fmt;
use std::path::Path;

/// Physical constants entering the thermal wavelength. The default is
/// reduced units `h = m = k_B = 1`, in which `λ³ = (β/2π)^{3/2}` and every
/// gas quantity stays O(1) on the test domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub h: f64,
    pub m: f64,
    pub k_b: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units::reduced()
    }
}

impl Units {
    pub fn reduced() -> Self {
        Units {
            h: 1.0,
            m: 1.0,
            k_b: 1.0,
        }
    }

    pub fn physical(h: f64, m: f64, k_b: f64) -> Result<Self> {
        if h <= 0.0 || m <= 0.0 || k_b <= 0.0 {
            return Err(Error::domain("units: h, m, k_B must all be positive"));
        }
        Ok(Units { h, m, k_b })
    }

    /// `λ³ = h³ (β / 2π m k_B)^{3/2}`.
    pub fn thermal_wavelength_cubed(&self, beta: f64) -> f64 {
        self.h.powi(3) * (beta / (2.0 * std::f64::consts::PI * self.m * self.k_b)).powf(1.5)
    }

    /// Prefactor `c` in `λ⁻³ = c β^{-3/2}`, i.e. `c = (2π m k_B / h²)^{3/2}`.
    fn gas_prefactor(&self) -> f64 {
        (2.0 * std::f64::consts::PI * self.m * self.k_b / (self.h * self.h)).powf(1.5)
    }
}

/// A potential model: dimension, domain, value and partial derivatives of the
/// potential up to fourth order.
pub trait Potential: Send + Sync {
    fn dim(&self) -> usize;

    fn name(&self) -> &str;

    /// Coordinate labels, used by the CLI and scan exports.
    fn coord_names(&self) -> Vec<String>;

    fn check_domain(&self, x: &[f64]) -> Result<()>;

    /// Potential value at `x`.
    fn psi(&self, x: &[f64]) -> Result<f64>;

    /// Partial derivative `∂^n Ψ / ∂x^{i_1} … ∂x^{i_n}` for a multi-index of
    /// length `n ∈ 1..=4`. Implementations must be symmetric under index
    /// permutation; the entry point canonicalizes the index order so that
    /// permuted calls return bit-identical values.
    fn partial(&self, x: &[f64], multi_index: &[usize]) -> Result<f64>;

    /// Whether partials are closed-form (gas models) or finite-difference
    /// estimates (synthetic models). Decides how connection derivatives are
    /// assembled downstream.
    fn has_closed_form_partials(&self) -> bool;

    /// Bounding box of the valid coordinate region, when the model declares
    /// one (synthetic models do; the gas quadrant is unbounded).
    fn domain_hint(&self) -> Option<Vec<(f64, f64)>> {
        None
    }
}

/// Validate a point and multi-index against a model, returning the sorted
/// (canonical) multi-index.
pub(crate) fn validate_multi_index(
    model: &dyn Potential,
    x: &[f64],
    multi_index: &[usize],
) -> Result<Vec<usize>> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    if multi_index.is_empty() || multi_index.len() > 4 {
        return Err(Error::domain(format!(
            "partial: derivative order {} outside 1..=4",
            multi_index.len()
        )));
    }
    if let Some(&bad) = multi_index.iter().find(|&&i| i >= model.dim()) {
        return Err(Error::domain(format!(
            "partial: index {bad} out of range for dimension {}",
            model.dim()
        )));
    }
    model.check_domain(x)?;
    let mut sorted = multi_index.to_vec();
    sorted.sort_unstable();
    Ok(sorted)
}

/// Descending factor `∏_{j=0}^{a-1} (-3/2 - j)` from differentiating
/// `β^{-3/2}` a times.
fn beta_power_factor(a: usize) -> f64 {
    (0..a).map(|j| -1.5 - j as f64).product()
}

fn gas_domain_check(x: &[f64]) -> Result<()> {
    let (beta, gamma) = (x[0], x[1]);
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::domain(format!(
            "gas model requires β > 0, got β = {beta}"
        )));
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::domain(format!(
            "gas model requires γ > 0, got γ = {gamma}"
        )));
    }
    Ok(())
}

/// Classical ideal gas, `Ψ(β, γ) = η λ⁻³ = c β^{-3/2} e^{-γ}`.
#[derive(Debug, Clone)]
pub struct ClassicalIdealGas {
    units: Units,
}

/// Quantum bosonic ideal gas, `Ψ(β, γ) = Li_{5/2}(e^{-γ}) λ⁻³`.
///
/// γ-derivatives lower the polylog order through
/// `∂_γ Li_s(e^{-γ}) = -Li_{s-1}(e^{-γ})`, so fourth-order partials reach
/// `Li_{-3/2}`.
#[derive(Debug, Clone)]
pub struct BoseIdealGas {
    units: Units,
}

pub fn classical_ideal_gas() -> ClassicalIdealGas {
    ClassicalIdealGas::with_units(Units::reduced())
}

pub fn bose_ideal_gas() -> BoseIdealGas {
    BoseIdealGas::with_units(Units::reduced())
}

impl ClassicalIdealGas {
    pub fn with_units(units: Units) -> Self {
        ClassicalIdealGas { units }
    }

    pub fn units(&self) -> Units {
        self.units
    }
}

impl BoseIdealGas {
    pub fn with_units(units: Units) -> Self {
        BoseIdealGas { units }
    }

    pub fn units(&self) -> Units {
        self.units
    }
}

impl Potential for ClassicalIdealGas {
    fn dim(&self) -> usize {
        2
    }

    fn name(&self) -> &str {
        "classical"
    }

    fn coord_names(&self) -> Vec<String> {
        vec!["beta".to_string(), "gamma".to_string()]
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: x.len(),
            });
        }
        gas_domain_check(x)
    }

    fn psi(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        let (beta, gamma) = (x[0], x[1]);
        Ok(self.units.gas_prefactor() * beta.powf(-1.5) * (-gamma).exp())
    }

    fn partial(&self, x: &[f64], multi_index: &[usize]) -> Result<f64> {
        let sorted = validate_multi_index(self, x, multi_index)?;
        let (beta, gamma) = (x[0], x[1]);
        let a = sorted.iter().filter(|&&i| i == 0).count();
        let b = sorted.len() - a;
        let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
        Ok(self.units.gas_prefactor()
            * beta_power_factor(a)
            * beta.powf(-1.5 - a as f64)
            * sign
            * (-gamma).exp())
    }

    fn has_closed_form_partials(&self) -> bool {
        true
    }
}

impl Potential for BoseIdealGas {
    fn dim(&self) -> usize {
        2
    }

    fn name(&self) -> &str {
        "bose"
    }

    fn coord_names(&self) -> Vec<String> {
        vec!["beta".to_string(), "gamma".to_string()]
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: x.len(),
            });
        }
        gas_domain_check(x)
    }

    fn psi(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        let (beta, gamma) = (x[0], x[1]);
        Ok(self.units.gas_prefactor()
            * beta.powf(-1.5)
            * crate::special::polylog(2.5, (-gamma).exp())?)
    }

    fn partial(&self, x: &[f64], multi_index: &[usize]) -> Result<f64> {
        let sorted = validate_multi_index(self, x, multi_index)?;
        let (beta, gamma) = (x[0], x[1]);
        let a = sorted.iter().filter(|&&i| i == 0).count();
        let b = sorted.len() - a;
        let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
        let order = 2.5 - b as f64;
        Ok(self.units.gas_prefactor()
            * beta_power_factor(a)
            * beta.powf(-1.5 - a as f64)
            * sign
            * crate::special::polylog(order, (-gamma).exp())?)
    }

    fn has_closed_form_partials(&self) -> bool {
        true
    }
}

/// One term `coefficient · ∏ x_i^{e_i}` of a synthetic potential.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    fn eval(&self, x: &[f64]) -> f64 {
        self.coefficient
            * self
                .exponents
                .iter()
                .zip(x)
                .map(|(&e, &xi)| xi.powi(e as i32))
                .product::<f64>()
    }
}

/// User-supplied smooth potential `Ψ(x) = Σ monomials` on a declared box,
/// differentiated numerically (central differences, one Richardson level).
#[derive(Debug, Clone)]
pub struct SyntheticPotential {
    name: String,
    dim: usize,
    monomials: Vec<Monomial>,
    domain: Vec<(f64, f64)>,
}

pub fn synthetic_potential(
    name: impl Into<String>,
    dim: usize,
    monomials: Vec<Monomial>,
    domain: Vec<(f64, f64)>,
) -> Result<SyntheticPotential> {
    if dim == 0 {
        return Err(Error::Config(
            "synthetic potential: dimension must be ≥ 1".into(),
        ));
    }
    if domain.len() != dim {
        return Err(Error::Config(format!(
            "synthetic potential: {} domain intervals for dimension {dim}",
            domain.len()
        )));
    }
    for (lo, hi) in &domain {
        let valid = lo.is_finite() && hi.is_finite() && lo < hi;
        if !valid {
            return Err(Error::Config(format!(
                "synthetic potential: empty interval {lo}:{hi}"
            )));
        }
    }
    for m in &monomials {
        if m.exponents.len() != dim {
            return Err(Error::Config(format!(
                "synthetic potential: monomial with {} exponents for dimension {dim}",
                m.exponents.len()
            )));
        }
        if !m.coefficient.is_finite() {
            return Err(Error::Config(
                "synthetic potential: non-finite coefficient".into(),
            ));
        }
    }
    Ok(SyntheticPotential {
        name: name.into(),
        dim,
        monomials,
        domain,
    })
}

impl SyntheticPotential {
    pub fn from_config_str(text: &str, name: impl Into<String>) -> Result<Self> {
        parse_config(text, name.into())
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "synthetic".to_string());
        parse_config(&text, name)
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    fn psi_unchecked(&self, x: &[f64]) -> f64 {
        self.monomials.iter().map(|m| m.eval(x)).sum()
    }
}

impl Potential for SyntheticPotential {
    fn dim(&self) -> usize {
        self.dim
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn coord_names(&self) -> Vec<String> {
        (1..=self.dim).map(|i| format!("x{i}")).collect()
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (i, (&xi, (lo, hi))) in x.iter().zip(&self.domain).enumerate() {
            if !xi.is_finite() || xi < *lo || xi > *hi {
                return Err(Error::domain(format!(
                    "synthetic model '{}': x{} = {xi} outside [{lo}, {hi}]",
                    self.name,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    fn psi(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.psi_unchecked(x))
    }

    fn partial(&self, x: &[f64], multi_index: &[usize]) -> Result<f64> {
        let sorted = validate_multi_index(self, x, multi_index)?;
        Ok(fd_partial(&|p| self.psi_unchecked(p), x, &sorted))
    }

    fn has_closed_form_partials(&self) -> bool {
        false
    }

    fn domain_hint(&self) -> Option<Vec<(f64, f64)>> {
        Some(self.domain.clone())
    }
}

/// Finite-difference step for coordinate value `xi`.
pub(crate) fn fd_step(xi: f64) -> f64 {
    1e-3 * xi.abs().max(1.0)
}

/// Nested central differences with one Richardson level. The multi-index
/// must already be sorted so that permuted index orders take the identical
/// evaluation path.
pub(crate) fn fd_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], sorted_index: &[usize]) -> f64 {
    match sorted_index.split_last() {
        None => f(x),
        Some((&axis, rest)) => {
            let h = fd_step(x[axis]);
            let eval = |step: f64| {
                let mut p = x.to_vec();
                p[axis] += step;
                fd_partial(f, &p, rest)
            };
            let coarse = (eval(h) - eval(-h)) / (2.0 * h);
            let fine = (eval(h / 2.0) - eval(-h / 2.0)) / h;
            (4.0 * fine - coarse) / 3.0
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (i, &e) in self.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, " * x{}", i + 1)?,
                _ => write!(f, " * x{}^{}", i + 1, e)?,
            }
        }
        Ok(())
    }
}

/// Key-value config:
///
/// ```text
/// dimension = 3
/// domain = -0.45:0.45, -0.45:0.45, -0.45:0.45
/// monomial = 0.5 * x1^2
/// monomial = 1 * x1 * x2 * x3
/// ```
fn parse_config(text: &str, name: String) -> Result<SyntheticPotential> {
    let mut dim: Option<usize> = None;
    let mut domain: Option<Vec<(f64, f64)>> = None;
    let mut raw_monomials: Vec<(usize, String)> = Vec::new();
    let mut cfg_name = name;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dimension" => {
                dim = Some(value.parse().map_err(|_| {
                    Error::Config(format!("line {}: bad dimension '{value}'", lineno + 1))
                })?);
            }
            "name" => cfg_name = value.to_string(),
            "domain" => {
                let mut spans = Vec::new();
                for part in value.split(',') {
                    let (lo, hi) = part.trim().split_once(':').ok_or_else(|| {
                        Error::Config(format!(
                            "line {}: domain interval 'lo:hi' expected",
                            lineno + 1
                        ))
                    })?;
                    let lo: f64 = lo.trim().parse().map_err(|_| {
                        Error::Config(format!("line {}: bad domain bound '{lo}'", lineno + 1))
                    })?;
                    let hi: f64 = hi.trim().parse().map_err(|_| {
                        Error::Config(format!("line {}: bad domain bound '{hi}'", lineno + 1))
                    })?;
                    spans.push((lo, hi));
                }
                domain = Some(spans);
            }
            "monomial" => raw_monomials.push((lineno + 1, value.to_string())),
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )));
            }
        }
    }

    let dim = dim.ok_or_else(|| Error::Config("missing 'dimension'".into()))?;
    let domain = domain.ok_or_else(|| Error::Config("missing 'domain'".into()))?;
    if raw_monomials.is_empty() {
        return Err(Error::Config("missing 'monomial' entries".into()));
    }

    let mut monomials = Vec::new();
    for (lineno, body) in raw_monomials {
        monomials.push(parse_monomial(&body, dim, lineno)?);
    }
    synthetic_potential(cfg_name, dim, monomials, domain)
}

/// `coeff [* x<i>[^<p>]]...`
fn parse_monomial(body: &str, dim: usize, lineno: usize) -> Result<Monomial> {
    let mut parts = body.split('*').map(str::trim);
    let coeff_text = parts
        .next()
        .ok_or_else(|| Error::Config(format!("line {lineno}: empty monomial")))?;
    let coefficient: f64 = coeff_text
        .parse()
        .map_err(|_| Error::Config(format!("line {lineno}: bad coefficient '{coeff_text}'")))?;
    let mut exponents = vec![0u32; dim];
    for factor in parts {
        let rest = factor.strip_prefix('x').ok_or_else(|| {
            Error::Config(format!(
                "line {lineno}: expected variable like 'x1', got '{factor}'"
            ))
        })?;
        let (var_text, pow_text) = match rest.split_once('^') {
            Some((v, p)) => (v, Some(p)),
            None => (rest, None),
        };
        let var: usize = var_text
            .parse()
            .map_err(|_| Error::Config(format!("line {lineno}: bad variable '{factor}'")))?;
        if var == 0 || var > dim {
            return Err(Error::Config(format!(
                "line {lineno}: variable x{var} out of range for dimension {dim}"
            )));
        }
        let power: u32 = match pow_text {
            Some(p) => p
                .parse()
                .map_err(|_| Error::Config(format!("line {lineno}: bad exponent '{p}'")))?,
            None => 1,
        };
        exponents[var - 1] += power;
    }
    Ok(Monomial {
        coefficient,
        exponents,
    })
}

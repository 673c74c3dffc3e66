//! Grid scans, WDVV (associativity) residuals, the closed-form Yukawa
//! expression for the Bose gas, the condensation-onset asymptote, and the
//! Taylor-coefficient positivity check.

use crate::geometry::{alpha_connection_at, riemann_curvature, yukawa_term, PointGeometry};
use crate::models::{Potential, Units};
use crate::special::{polylog, zeta};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// WDVV residual of the potential at a point: the worst violation of
/// `C_ija g^{ab} C_bkl = C_jka g^{ab} C_bil` over all index tuples, raw and
/// divided by `max|C|² · max|g⁻¹|`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WdvvResidual {
    pub max_abs: f64,
    pub scale: f64,
    pub scaled: f64,
}

pub fn wdvv_residual(model: &dyn Potential, x: &[f64]) -> Result<WdvvResidual> {
    let point = PointGeometry::at(model, x)?;
    Ok(wdvv_residual_of(&point))
}

pub fn wdvv_residual_of(point: &PointGeometry) -> WdvvResidual {
    let n = point.metric.dim();
    let ginv = point.metric.inverse();
    let ac = &point.ac;
    let mut max_abs = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut lhs = 0.0;
                    let mut rhs = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            lhs += ac.get(i, j, a) * ginv[[a, b]] * ac.get(b, k, l);
                            rhs += ac.get(j, k, a) * ginv[[a, b]] * ac.get(b, i, l);
                        }
                    }
                    max_abs = max_abs.max((lhs - rhs).abs());
                }
            }
        }
    }
    let scale = ac.max_abs().powi(2) * point.metric.inverse_max_abs();
    let scaled = if scale > 0.0 { max_abs / scale } else { 0.0 };
    WdvvResidual {
        max_abs,
        scale,
        scaled,
    }
}

/// Closed-form Yukawa term of the Bose gas,
/// `C = 20λ³/A³ · [5 Li²_{5/2} Li_{3/2} Li_{1/2} Li_{-1/2}
///     − 10 Li²_{5/2} Li³_{1/2} − 3 Li_{5/2} Li³_{3/2} Li_{-1/2}
///     + 11 Li_{5/2} Li²_{3/2} Li²_{1/2} − 3 Li⁴_{3/2} Li_{1/2}]`
/// with `A = 5 Li_{5/2} Li_{1/2} − 3 Li²_{3/2}`, all at `η = e^{-γ}`.
pub fn bose_yukawa_closed_form(beta: f64, gamma: f64, units: Units) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::domain(format!("β must be positive, got {beta}")));
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::domain(format!("γ must be positive, got {gamma}")));
    }
    let eta = (-gamma).exp();
    let l52 = polylog(2.5, eta)?;
    let l32 = polylog(1.5, eta)?;
    let l12 = polylog(0.5, eta)?;
    let lm12 = polylog(-0.5, eta)?;
    let a = 5.0 * l52 * l12 - 3.0 * l32 * l32;
    if a.abs() < 1e-300 {
        return Err(Error::Numerical(format!(
            "denominator A ≈ 0 at β={beta}, γ={gamma}"
        )));
    }
    let bracket = 5.0 * l52 * l52 * l32 * l12 * lm12
        - 10.0 * l52 * l52 * l12.powi(3)
        - 3.0 * l52 * l32.powi(3) * lm12
        + 11.0 * l52 * l32 * l32 * l12 * l12
        - 3.0 * l32.powi(4) * l12;
    Ok(20.0 * units.thermal_wavelength_cubed(beta) * bracket / a.powi(3))
}

/// Condensation-onset asymptote `C ~ 2 ζ(3/2) λ³ / (5 √π ζ(5/2) γ^{1/2})`
/// as `γ → 0⁺`.
pub fn bec_asymptote(beta: f64, gamma: f64, units: Units) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::domain(format!("β must be positive, got {beta}")));
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::domain(format!("γ must be positive, got {gamma}")));
    }
    Ok(2.0 * zeta(1.5)? * units.thermal_wavelength_cubed(beta)
        / (5.0 * PI.sqrt() * zeta(2.5)? * gamma.sqrt()))
}

/// Truncated power series in η of `A` and of the closed-form bracket
/// `C·A³/(20λ³)`, computed by exact polynomial arithmetic on the truncated
/// polylog series `Li_s(η) = Σ η^k/k^s`.
#[derive(Debug, Clone, Serialize)]
pub struct PositivitySeries {
    /// Coefficients `a_0..a_N` of `A(η) = 5 Li_{5/2} Li_{1/2} − 3 Li²_{3/2}`.
    pub a: Vec<f64>,
    /// Coefficients `a_0..a_N` of the bracket series.
    pub bracket: Vec<f64>,
}

pub fn positivity_series(order: usize) -> Result<PositivitySeries> {
    if order > 30 {
        return Err(Error::domain(format!(
            "series order {order} too large (cost grows polynomially; max 30)"
        )));
    }
    let li = |s: f64| -> Vec<f64> {
        let mut c = vec![0.0; order + 1];
        for (k, slot) in c.iter_mut().enumerate().skip(1) {
            *slot = (k as f64).powf(-s);
        }
        c
    };
    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if i + j <= order {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    };
    let prod = |factors: &[&[f64]]| -> Vec<f64> {
        let mut acc = factors[0].to_vec();
        for f in &factors[1..] {
            acc = mul(&acc, f);
        }
        acc
    };
    let l52 = li(2.5);
    let l32 = li(1.5);
    let l12 = li(0.5);
    let lm12 = li(-0.5);

    let mut a_series = prod(&[&l52, &l12]);
    let l32_sq = mul(&l32, &l32);
    for (slot, v) in a_series.iter_mut().zip(&l32_sq) {
        *slot = 5.0 * *slot - 3.0 * v;
    }

    let mut bracket = vec![0.0; order + 1];
    let terms: [(f64, Vec<f64>); 5] = [
        (5.0, prod(&[&l52, &l52, &l32, &l12, &lm12])),
        (-10.0, prod(&[&l52, &l52, &l12, &l12, &l12])),
        (-3.0, prod(&[&l52, &l32, &l32, &l32, &lm12])),
        (11.0, prod(&[&l52, &l32, &l32, &l12, &l12])),
        (-3.0, prod(&[&l32, &l32, &l32, &l32, &l12])),
    ];
    for (coef, series) in &terms {
        for (slot, v) in bracket.iter_mut().zip(series) {
            *slot += coef * v;
        }
    }
    Ok(PositivitySeries {
        a: a_series,
        bracket,
    })
}

/// One axis of a scan grid: `count` evenly spaced points on `[lo, hi]`.
#[derive(Debug, Clone, Serialize)]
pub struct GridAxis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn value(&self, index: usize) -> f64 {
        if self.count <= 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * index as f64 / (self.count - 1) as f64
        }
    }
}

/// Rectangular scan grid over the model coordinates, iterated in
/// lexicographic index order (first axis outermost).
#[derive(Debug, Clone, Serialize)]
pub struct ScanGrid {
    pub axes: Vec<GridAxis>,
}

impl ScanGrid {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::domain("scan grid needs at least one axis"));
        }
        for axis in &axes {
            if axis.count == 0 {
                return Err(Error::domain(format!("axis {}: zero points", axis.name)));
            }
            let ordered = axis.lo.is_finite() && axis.hi.is_finite() && axis.lo <= axis.hi;
            if !ordered {
                return Err(Error::domain(format!(
                    "axis {}: empty range {}:{}",
                    axis.name, axis.lo, axis.hi
                )));
            }
        }
        Ok(ScanGrid { axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.axes.len()];
        for (slot, axis) in idx.iter_mut().zip(&self.axes).rev() {
            *slot = flat % axis.count;
            flat /= axis.count;
        }
        idx.iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.value(i))
            .collect()
    }
}

/// One scan row. `status` is `"ok"` or an error marker `"error: …"`; value
/// fields of failed rows are NaN (serialized as null in JSON).
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub coords: Vec<f64>,
    pub yukawa: f64,
    pub wdvv_residual: f64,
    pub curvature: Vec<f64>,
    pub det_g: f64,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub coord_names: Vec<String>,
    pub alphas: Vec<f64>,
    pub rows: Vec<ScanRow>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanSummary {
    pub rows_ok: usize,
    pub rows_failed: usize,
    pub yukawa_min: f64,
    pub yukawa_max: f64,
    pub wdvv_residual_max: f64,
}

/// Evaluate yukawa, WDVV residual, curvature norms and `det g` on every
/// grid point. Rows are independent and computed in parallel; output order
/// is the deterministic lexicographic grid order regardless of thread
/// count. Domain failures mark their row instead of aborting the scan.
pub fn scan(model: &dyn Potential, grid: &ScanGrid, alphas: &[f64]) -> Result<ScanResult> {
    if grid.axes.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: grid.axes.len(),
        });
    }
    let rows: Vec<ScanRow> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let coords = grid.point(flat);
            match scan_row(model, &coords, alphas) {
                Ok(row) => row,
                Err(err) => ScanRow {
                    coords,
                    yukawa: f64::NAN,
                    wdvv_residual: f64::NAN,
                    curvature: vec![f64::NAN; alphas.len()],
                    det_g: f64::NAN,
                    status: format!("error: {err}"),
                },
            }
        })
        .collect();
    Ok(ScanResult {
        coord_names: model.coord_names(),
        alphas: alphas.to_vec(),
        rows,
    })
}

fn scan_row(model: &dyn Potential, coords: &[f64], alphas: &[f64]) -> Result<ScanRow> {
    let point = PointGeometry::at(model, coords)?;
    let yukawa = yukawa_term(&point.metric, &point.ac).value();
    let wdvv = wdvv_residual_of(&point).max_abs;
    let mut curvature = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let conn = alpha_connection_at(model, coords, alpha)?;
        curvature.push(riemann_curvature(&conn).max_abs());
    }
    Ok(ScanRow {
        coords: coords.to_vec(),
        yukawa,
        wdvv_residual: wdvv,
        curvature,
        det_g: point.metric.det(),
        status: "ok".to_string(),
    })
}

impl ScanResult {
    pub fn summary(&self) -> ScanSummary {
        let mut ok = 0;
        let mut failed = 0;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        let mut wmax: f64 = 0.0;
        for row in &self.rows {
            if row.status == "ok" {
                ok += 1;
                ymin = ymin.min(row.yukawa);
                ymax = ymax.max(row.yukawa);
                wmax = wmax.max(row.wdvv_residual);
            } else {
                failed += 1;
            }
        }
        ScanSummary {
            rows_ok: ok,
            rows_failed: failed,
            yukawa_min: ymin,
            yukawa_max: ymax,
            wdvv_residual_max: wmax,
        }
    }

    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = self.coord_names.clone();
        cols.push("yukawa".into());
        cols.push("wdvv_residual".into());
        for alpha in &self.alphas {
            cols.push(format!("curv_alpha_{alpha}"));
        }
        cols.push("det_g".into());
        cols.push("status".into());
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.csv_header());
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.coords.iter().map(|v| v.to_string()).collect();
            fields.push(row.yukawa.to_string());
            fields.push(row.wdvv_residual.to_string());
            for c in &row.curvature {
                fields.push(c.to_string());
            }
            fields.push(row.det_g.to_string());
            fields.push(row.status.clone());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON export: array of row objects keyed by coordinate names, with
    /// the same fields as the CSV columns.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, value) in self.coord_names.iter().zip(&row.coords) {
                    obj.insert(name.clone(), json_f64(*value));
                }
                obj.insert("yukawa".into(), json_f64(row.yukawa));
                obj.insert("wdvv_residual".into(), json_f64(row.wdvv_residual));
                for (alpha, value) in self.alphas.iter().zip(&row.curvature) {
                    obj.insert(format!("curv_alpha_{alpha}"), json_f64(*value));
                }
                obj.insert("det_g".into(), json_f64(row.det_g));
                obj.insert(
                    "status".into(),
                    serde_json::Value::String(row.status.clone()),
                );
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn json_f64(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ac_tensor_at, metric_at};
    use crate::models::{bose_ideal_gas, classical_ideal_gas, SyntheticPotential};
    use approx::assert_relative_eq;

    fn quadratic2d() -> SyntheticPotential {
        SyntheticPotential::from_config_str(
            "dimension = 2\ndomain = -2:2, -2:2\nmonomial = 0.5 * x1^2\nmonomial = 0.5 * x2^2\n",
            "quad",
        )
        .unwrap()
    }

    fn cubic3d() -> SyntheticPotential {
        SyntheticPotential::from_config_str(
            "dimension = 3\ndomain = -0.45:0.45, -0.45:0.45, -0.45:0.45\n\
             monomial = 0.5 * x1^2\nmonomial = 0.5 * x2^2\nmonomial = 0.5 * x3^2\n\
             monomial = 1 * x1 * x2 * x3\nmonomial = 1 * x1^4\n",
            "cubic3d",
        )
        .unwrap()
    }

    /// Brute-force oracle: both sides of the associativity equation by
    /// independent quadruple loops over a naive adjugate-inverted metric.
    #[allow(clippy::needless_range_loop)]
    fn wdvv_oracle(model: &dyn Potential, x: &[f64]) -> f64 {
        let n = model.dim();
        let metric = metric_at(model, x).unwrap();
        let ac = ac_tensor_at(model, x).unwrap();
        // naive 3x3 / 2x2 inverse via adjugate
        let g = metric.g();
        let mut ginv = vec![vec![0.0; n]; n];
        match n {
            2 => {
                let det = g[[0, 0]] * g[[1, 1]] - g[[0, 1]] * g[[1, 0]];
                ginv[0][0] = g[[1, 1]] / det;
                ginv[1][1] = g[[0, 0]] / det;
                ginv[0][1] = -g[[0, 1]] / det;
                ginv[1][0] = -g[[1, 0]] / det;
            }
            3 => {
                let det = g[[0, 0]] * (g[[1, 1]] * g[[2, 2]] - g[[1, 2]] * g[[2, 1]])
                    - g[[0, 1]] * (g[[1, 0]] * g[[2, 2]] - g[[1, 2]] * g[[2, 0]])
                    + g[[0, 2]] * (g[[1, 0]] * g[[2, 1]] - g[[1, 1]] * g[[2, 0]]);
                for i in 0..3 {
                    for j in 0..3 {
                        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                        let (c, d) = ((j + 1) % 3, (j + 2) % 3);
                        ginv[j][i] = (g[[a, c]] * g[[b, d]] - g[[a, d]] * g[[b, c]]) / det;
                    }
                }
            }
            _ => panic!("oracle supports n = 2, 3"),
        }
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut lhs = 0.0;
                        let mut rhs = 0.0;
                        for a in 0..n {
                            for b in 0..n {
                                lhs += ac.get(i, j, a) * ginv[a][b] * ac.get(b, k, l);
                                rhs += ac.get(j, k, a) * ginv[a][b] * ac.get(b, i, l);
                            }
                        }
                        worst = worst.max((lhs - rhs).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn wdvv_classical_gas_vanishes() {
        let gas = classical_ideal_gas();
        for &(beta, gamma) in &[(1.0, 0.5), (0.5, 0.1), (2.0, 3.0), (1.3, 1.7)] {
            let res = wdvv_residual(&gas, &[beta, gamma]).unwrap();
            assert!(
                res.scaled <= 1e-9,
                "({beta},{gamma}): scaled {:e}",
                res.scaled
            );
        }
    }

    #[test]
    fn wdvv_quadratic_exact_zero_raw() {
        let quad = quadratic2d();
        let res = wdvv_residual(&quad, &[1.0, 1.0]).unwrap();
        assert!(res.max_abs < 1e-12, "raw residual {:e}", res.max_abs);
    }

    #[test]
    fn wdvv_cubic_nonzero_and_matches_oracle() {
        let model = cubic3d();
        let x = [0.3, 0.2, 0.1];
        let res = wdvv_residual(&model, &x).unwrap();
        assert!(res.scaled > 1e-3, "scaled residual {:e}", res.scaled);
        let oracle = wdvv_oracle(&model, &x);
        assert_relative_eq!(res.max_abs, oracle, max_relative = 1e-8);
    }

    #[test]
    fn wdvv_bose_tracks_levi_civita_curvature() {
        // The associativity defect of a Hessian model is the commutator
        // part of the pencil curvature: R(α) = (α² − ¼)·K with K the raised
        // defect, so R(0) = −K/4. The quantum gas has curved Levi-Civita
        // connection and therefore a genuinely nonzero residual.
        let gas = bose_ideal_gas();
        let x = [1.0, 0.5];
        let res = wdvv_residual(&gas, &x).unwrap();
        assert!(
            res.scaled > 1e-4,
            "bose residual unexpectedly small: {:e}",
            res.scaled
        );
        let oracle = wdvv_oracle(&gas, &x);
        assert_relative_eq!(res.max_abs, oracle, max_relative = 1e-10);

        // quantitative cross-check against curvature: max |R(0)| = max|K|/4
        // after raising the defect output index with g⁻¹.
        let point = PointGeometry::at(&gas, &x).unwrap();
        let n = 2;
        let ginv = point.metric.inverse();
        let mut defect_raised = 0.0_f64;
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = 0.0;
                        for a in 0..n {
                            for b in 0..n {
                                for s in 0..n {
                                    acc += ginv[[m, a]]
                                        * (point.ac.get(i, j, s)
                                            * ginv[[s, b]]
                                            * point.ac.get(b, k, a)
                                            - point.ac.get(j, k, s)
                                                * ginv[[s, b]]
                                                * point.ac.get(b, i, a));
                                }
                            }
                        }
                        defect_raised = defect_raised.max(acc.abs());
                    }
                }
            }
        }
        let r0 = riemann_curvature(&alpha_connection_at(&gas, &x, 0.0).unwrap()).max_abs();
        assert_relative_eq!(r0, defect_raised / 4.0, max_relative = 1e-6);
    }

    #[test]
    fn closed_form_matches_contraction_on_grid() {
        let gas = bose_ideal_gas();
        let units = gas.units();
        for i in 0..10 {
            for j in 0..10 {
                let beta = 0.5 + 1.5 * i as f64 / 9.0;
                let gamma = 0.1 + 2.9 * j as f64 / 9.0;
                let point = PointGeometry::at(&gas, &[beta, gamma]).unwrap();
                let contraction = yukawa_term(&point.metric, &point.ac).value();
                let closed = bose_yukawa_closed_form(beta, gamma, units).unwrap();
                assert_relative_eq!(contraction, closed, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn yukawa_closed_form_limits() {
        let units = Units::reduced();
        // decays toward the classical-limit plateau as γ grows…
        let large = bose_yukawa_closed_form(1.0, 10.0, units).unwrap();
        let lam3 = units.thermal_wavelength_cubed(1.0);
        // …which is (5/4√2)·λ³, not zero: the bracket and A³ both open at
        // order η⁶ and their ratio tends to 2^{-3/2}·(20/8).
        assert_relative_eq!(
            large / lam3,
            5.0 / (4.0 * 2.0_f64.sqrt()),
            max_relative = 1e-4
        );
        // and grows like γ^{-1/2} toward condensation
        let near = bose_yukawa_closed_form(1.0, 1e-6, units).unwrap();
        assert!(near > 100.0 * large);
        assert!(bose_yukawa_closed_form(1.0, 0.0, units).is_err());
        assert!(bose_yukawa_closed_form(0.0, 1.0, units).is_err());
    }

    #[test]
    fn asymptote_ratio_and_scaling() {
        let units = Units::reduced();
        // γ^{-1/2} scaling: asymptote(β, 4γ)/asymptote(β, γ) = 1/2 exactly
        let a1 = bec_asymptote(1.0, 1e-4, units).unwrap();
        let a4 = bec_asymptote(1.0, 4e-4, units).unwrap();
        assert_relative_eq!(a4 / a1, 0.5, max_relative = 1e-12);
        // closed form approaches the asymptote monotonically from above;
        // measured ratios 1.1045, 1.0102, 1.0010 at γ = 1e-2, 1e-4, 1e-6
        let mut prev = f64::INFINITY;
        for &gamma in &[1e-2, 1e-4, 1e-6] {
            let ratio = bose_yukawa_closed_form(1.0, gamma, units).unwrap()
                / bec_asymptote(1.0, gamma, units).unwrap();
            assert!(ratio > 1.0 && ratio < prev, "γ={gamma}: ratio {ratio}");
            prev = ratio;
        }
        assert!((prev - 1.0).abs() <= 0.02);
        assert!(bec_asymptote(1.0, 0.0, units).is_err());
    }

    #[test]
    fn positivity_series_matches_hand_values() {
        let series = positivity_series(12).unwrap();
        // A: a₂ = 2 exactly (5·1·1 − 3·1), a₃ = 5(2^{-1/2} + 2^{-5/2}) − 6·2^{-3/2}
        assert_eq!(series.a[0], 0.0);
        assert_eq!(series.a[1], 0.0);
        assert_relative_eq!(series.a[2], 2.0, max_relative = 1e-15);
        let a3 = 5.0 * (2f64.powf(-0.5) + 2f64.powf(-2.5)) - 6.0 * 2f64.powf(-1.5);
        assert_relative_eq!(series.a[3], a3, max_relative = 1e-13);
        assert!(series.a[3] > 2.2);
        // bracket opens at η⁶ with positive coefficients above the printed
        // bounds 0.33, 1.29, 2.85
        for k in 0..6 {
            assert!(
                series.bracket[k].abs() < 1e-12,
                "bracket[{k}] = {}",
                series.bracket[k]
            );
        }
        assert!(series.bracket[6] > 0.33);
        assert!(series.bracket[7] > 1.29);
        assert!(series.bracket[8] > 2.85);
        for k in 6..=12 {
            assert!(series.bracket[k] > 0.0);
        }
        for k in 2..=12 {
            assert!(series.a[k] > 0.0);
        }
        assert!(positivity_series(31).is_err());
    }

    #[test]
    fn scan_classical_yukawa_column_vanishes() {
        let gas = classical_ideal_gas();
        let grid = ScanGrid::new(vec![
            GridAxis {
                name: "beta".into(),
                lo: 0.5,
                hi: 2.0,
                count: 5,
            },
            GridAxis {
                name: "gamma".into(),
                lo: 0.1,
                hi: 3.0,
                count: 5,
            },
        ])
        .unwrap();
        let result = scan(&gas, &grid, &[0.0, 0.5]).unwrap();
        assert_eq!(result.rows.len(), 25);
        let summary = result.summary();
        assert_eq!(summary.rows_failed, 0);
        for row in &result.rows {
            let lam3 = gas.units().thermal_wavelength_cubed(row.coords[0]);
            assert!(row.yukawa.abs() <= 1e-9 * lam3 * row.coords[1].exp());
        }
    }

    #[test]
    fn scan_marks_bad_rows_and_keeps_order() {
        let gas = bose_ideal_gas();
        // the γ axis deliberately reaches into the invalid region γ ≤ 0
        let grid = ScanGrid::new(vec![
            GridAxis {
                name: "beta".into(),
                lo: 1.0,
                hi: 1.0,
                count: 1,
            },
            GridAxis {
                name: "gamma".into(),
                lo: -0.5,
                hi: 1.0,
                count: 4,
            },
        ])
        .unwrap();
        let result = scan(&gas, &grid, &[0.0]).unwrap();
        assert_eq!(result.rows.len(), 4);
        assert!(result.rows[0].status.starts_with("error:"));
        assert!(result.rows[0].yukawa.is_nan());
        assert_eq!(result.rows[3].status, "ok");
        let summary = result.summary();
        assert_eq!(summary.rows_failed, 2); // γ = -0.5 and γ = 0
                                            // lexicographic order: γ strictly increasing here
        let gammas: Vec<f64> = result.rows.iter().map(|r| r.coords[1]).collect();
        assert!(gammas.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn scan_output_deterministic() {
        let gas = bose_ideal_gas();
        let grid = ScanGrid::new(vec![
            GridAxis {
                name: "beta".into(),
                lo: 0.5,
                hi: 2.0,
                count: 4,
            },
            GridAxis {
                name: "gamma".into(),
                lo: 0.2,
                hi: 2.0,
                count: 4,
            },
        ])
        .unwrap();
        let a = scan(&gas, &grid, &[-0.5, 0.0, 0.5]).unwrap();
        let b = scan(&gas, &grid, &[-0.5, 0.0, 0.5]).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
        // json round trip through the preserve-order parser is byte-stable
        let text = serde_json::to_string_pretty(&a.to_json()).unwrap();
        let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), text);
    }

    #[test]
    fn scan_bose_yukawa_nonnegative_and_grows_toward_condensation() {
        let gas = bose_ideal_gas();
        let grid = ScanGrid::new(vec![
            GridAxis {
                name: "beta".into(),
                lo: 1.0,
                hi: 1.0,
                count: 1,
            },
            GridAxis {
                name: "gamma".into(),
                lo: 1e-4,
                hi: 3.0,
                count: 12,
            },
        ])
        .unwrap();
        let result = scan(&gas, &grid, &[]).unwrap();
        for row in &result.rows {
            assert!(
                row.yukawa >= -1e-10,
                "yukawa {} at γ={}",
                row.yukawa,
                row.coords[1]
            );
        }
        // halving γ near 0 multiplies the yukawa term by ~√2
        let units = gas.units();
        let mut gamma = 1e-3;
        while gamma > 1e-5 {
            let c1 = bose_yukawa_closed_form(1.0, gamma, units).unwrap();
            let c2 = bose_yukawa_closed_form(1.0, gamma / 2.0, units).unwrap();
            let ratio = c2 / c1;
            assert!(
                (ratio - 2f64.sqrt()).abs() < 0.05,
                "γ={gamma}: ratio {ratio}"
            );
            gamma /= 2.0;
        }
    }
}

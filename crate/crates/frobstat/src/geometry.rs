//! Pointwise tensor calculus on a potential model: Hessian metric,
//! Amari-Chentsov tensor, statistical product, Yukawa scalar, the
//! α-connection pencil with duals and contravariant form, Riemann
//! curvature, and dual parallel transport.
//!
//! Everything is stored dense (`n ≤ 6` in all intended uses) and contracted
//! with explicit index loops. Index conventions: `gamma[[k, i, j]] = Γ^k_ij`,
//! `dgamma[[l, k, i, j]] = ∂_l Γ^k_ij`, `r[[l, i, j, k]] = R^l_ijk`.

use crate::models::Potential;
use crate::{Error, Result};
use ndarray::{Array2, Array3, Array4};

const SYMMETRY_TOL: f64 = 1e-12;
const TOTAL_SYMMETRY_TOL: f64 = 1e-10;
const INVERSE_TOL: f64 = 1e-10;

/// Symmetric positive-definite metric with its cached inverse.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    g: Array2<f64>,
    g_inv: Array2<f64>,
    det: f64,
}

impl MetricTensor {
    /// Validates symmetry, checks positive-definiteness by Cholesky
    /// factorization, and caches the inverse.
    pub fn new(g: Array2<f64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n.max(1),
                got: g.ncols(),
            });
        }
        let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (g[[i, j]] - g[[j, i]]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::NotPositiveDefinite(format!(
                        "asymmetric entry ({i},{j}): {} vs {}",
                        g[[i, j]],
                        g[[j, i]]
                    )));
                }
            }
        }
        let lower = cholesky(&g)?;
        let det = lower.diag().iter().map(|d| d * d).product();
        let g_inv = cholesky_inverse(&lower);
        // residual check on the cached inverse
        let mut residual = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = if i == j { -1.0 } else { 0.0 };
                for k in 0..n {
                    acc += g[[i, k]] * g_inv[[k, j]];
                }
                residual = residual.max(acc.abs());
            }
        }
        if residual > INVERSE_TOL * scale {
            return Err(Error::Numerical(format!(
                "metric inverse residual {residual:e} exceeds tolerance (ill-conditioned metric)"
            )));
        }
        Ok(MetricTensor { g, g_inv, det })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &Array2<f64> {
        &self.g
    }

    pub fn inverse(&self) -> &Array2<f64> {
        &self.g_inv
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `g(x, y)` for tangent vectors.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len().max(y.len()),
            });
        }
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc += self.g[[i, j]] * xi * yj;
            }
        }
        Ok(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn inverse_max_abs(&self) -> f64 {
        self.g_inv.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn cholesky(g: &Array2<f64>) -> Result<Array2<f64>> {
    let n = g.nrows();
    let mut lower = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = g[[i, j]];
            for k in 0..j {
                sum -= lower[[i, k]] * lower[[j, k]];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::NotPositiveDefinite(format!(
                        "Cholesky pivot {sum:e} at index {i}"
                    )));
                }
                lower[[i, j]] = sum.sqrt();
            } else {
                lower[[i, j]] = sum / lower[[j, j]];
            }
        }
    }
    Ok(lower)
}

fn cholesky_inverse(lower: &Array2<f64>) -> Array2<f64> {
    let n = lower.nrows();
    let mut inv = Array2::zeros((n, n));
    for col in 0..n {
        // forward: L y = e_col
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                sum -= lower[[i, k]] * y[k];
            }
            y[i] = sum / lower[[i, i]];
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= lower[[k, i]] * inv[[k, col]];
            }
            inv[[i, col]] = sum / lower[[i, i]];
        }
    }
    // symmetrize against round-off
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (inv[[i, j]] + inv[[j, i]]);
            inv[[i, j]] = v;
            inv[[j, i]] = v;
        }
    }
    inv
}

/// Totally symmetric rank-3 tensor (the Amari-Chentsov tensor).
#[derive(Debug, Clone)]
pub struct SymmetricThirdTensor {
    c: Array3<f64>,
}

impl SymmetricThirdTensor {
    pub fn new(c: Array3<f64>) -> Result<Self> {
        let (n, m, p) = c.dim();
        if m != n || p != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.max(p),
            });
        }
        let scale = c.iter().fold(0.0_f64, |mx, v| mx.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = c[[i, j, k]];
                    for perm in [[i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                        if (v - c[perm]).abs() > TOTAL_SYMMETRY_TOL * scale {
                            return Err(Error::Numerical(format!(
                                "rank-3 tensor not totally symmetric at ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(SymmetricThirdTensor { c })
    }

    pub fn dim(&self) -> usize {
        self.c.dim().0
    }

    pub fn array(&self) -> &Array3<f64> {
        &self.c
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[[i, j, k]]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Christoffel symbols at a point plus their first partials, enough to
/// assemble curvature there.
#[derive(Debug, Clone)]
pub struct ConnectionField {
    /// `gamma[[k, i, j]] = Γ^k_ij`
    pub gamma: Array3<f64>,
    /// `dgamma[[l, k, i, j]] = ∂_l Γ^k_ij`
    pub dgamma: Array4<f64>,
}

impl ConnectionField {
    pub fn dim(&self) -> usize {
        self.gamma.dim().0
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Riemann curvature `r[[l, i, j, k]] = R^l_ijk`.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    pub r: Array4<f64>,
}

impl CurvatureTensor {
    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Metric and AC tensor evaluated at one point of a model.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub coords: Vec<f64>,
    pub metric: MetricTensor,
    pub ac: SymmetricThirdTensor,
}

impl PointGeometry {
    pub fn at(model: &dyn Potential, x: &[f64]) -> Result<Self> {
        Ok(PointGeometry {
            coords: x.to_vec(),
            metric: metric_at(model, x)?,
            ac: ac_tensor_at(model, x)?,
        })
    }
}

/// Hessian metric `g_ij = ∂²Ψ/∂x^i∂x^j`. Fails if the Hessian is not
/// symmetric positive-definite at `x`.
pub fn metric_at(model: &dyn Potential, x: &[f64]) -> Result<MetricTensor> {
    let n = model.dim();
    let mut g = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let v = model.partial(x, &[i, j])?;
            g[[i, j]] = v;
            g[[j, i]] = v;
        }
    }
    MetricTensor::new(g)
}

/// Amari-Chentsov tensor `C_ijk = ∂³Ψ/∂x^i∂x^j∂x^k`, totally symmetric by
/// construction (each distinct sorted index evaluated once and mirrored).
pub fn ac_tensor_at(model: &dyn Potential, x: &[f64]) -> Result<SymmetricThirdTensor> {
    let n = model.dim();
    let mut c = Array3::zeros((n, n, n));
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = model.partial(x, &[i, j, k])?;
                for perm in [
                    [i, j, k],
                    [i, k, j],
                    [j, i, k],
                    [j, k, i],
                    [k, i, j],
                    [k, j, i],
                ] {
                    c[perm] = v;
                }
            }
        }
    }
    SymmetricThirdTensor::new(c)
}

/// Fourth-order partials `dac[[l, i, j, k]] = ∂_l C_ijk = ∂⁴Ψ`, mirrored
/// from sorted multi-indices.
pub fn fourth_partials_at(model: &dyn Potential, x: &[f64]) -> Result<Array4<f64>> {
    let n = model.dim();
    let mut dac = Array4::zeros((n, n, n, n));
    for l in 0..n {
        for i in l..n {
            for j in i..n {
                for k in j..n {
                    let v = model.partial(x, &[l, i, j, k])?;
                    let idx = [l, i, j, k];
                    // mirror over all 24 permutations
                    fill_rank4_permutations(&mut dac, idx, v);
                }
            }
        }
    }
    Ok(dac)
}

fn fill_rank4_permutations(t: &mut Array4<f64>, idx: [usize; 4], v: f64) {
    let perms: [[usize; 4]; 24] = {
        let mut out = [[0usize; 4]; 24];
        let mut n = 0;
        for a in 0..4 {
            for b in 0..4 {
                if b == a {
                    continue;
                }
                for c in 0..4 {
                    if c == a || c == b {
                        continue;
                    }
                    let d = 6 - a - b - c;
                    out[n] = [a, b, c, d];
                    n += 1;
                }
            }
        }
        out
    };
    for p in perms {
        t[[idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]]] = v;
    }
}

/// Index-raised AC tensor `Λ^k_ij = g^{kl} C_ijl`, the structural constants
/// of the statistical product (κ = 1 normalization).
pub fn raised_ac(metric: &MetricTensor, ac: &SymmetricThirdTensor) -> Array3<f64> {
    let n = metric.dim();
    let ginv = metric.inverse();
    let mut up = Array3::zeros((n, n, n));
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[[k, l]] * ac.get(i, j, l);
                }
                up[[k, i, j]] = acc;
            }
        }
    }
    up
}

/// `∂_m g^{kl} = -g^{ka} (∂_m g_ab) g^{bl}` with `∂g = C`.
fn inverse_metric_derivative(metric: &MetricTensor, ac: &SymmetricThirdTensor) -> Array3<f64> {
    let n = metric.dim();
    let ginv = metric.inverse();
    let mut d = Array3::zeros((n, n, n));
    for m in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc -= ginv[[k, a]] * ac.get(m, a, b) * ginv[[b, l]];
                    }
                }
                d[[m, k, l]] = acc;
            }
        }
    }
    d
}

/// Christoffel symbols of the α-connection at a point (no derivatives):
/// `Γ^{α,k}_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij) + α g^{kl} C_ijl`,
/// the standard Levi-Civita formula with `∂g = C` plus the pencil term.
pub fn alpha_gamma(point: &PointGeometry, alpha: f64) -> Array3<f64> {
    let n = point.metric.dim();
    let ginv = point.metric.inverse();
    let ac = &point.ac;
    let mut gamma = Array3::zeros((n, n, n));
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    let lc_part = 0.5 * (ac.get(i, j, l) + ac.get(j, i, l) - ac.get(l, i, j));
                    acc += ginv[[k, l]] * (lc_part + alpha * ac.get(i, j, l));
                }
                gamma[[k, i, j]] = acc;
            }
        }
    }
    gamma
}

/// α-connection with curvature data at a point of a model.
///
/// For closed-form models `∂Γ` is assembled analytically from third and
/// fourth potential partials; finite-difference models differentiate the
/// assembled `Γ` field instead (central differences of `Γ` lose fewer
/// digits than fourth differences of Ψ).
pub fn alpha_connection_at(
    model: &dyn Potential,
    x: &[f64],
    alpha: f64,
) -> Result<ConnectionField> {
    let point = PointGeometry::at(model, x)?;
    let gamma = alpha_gamma(&point, alpha);
    let dgamma = if model.has_closed_form_partials() {
        let dac = fourth_partials_at(model, x)?;
        analytic_dgamma(&point, &dac, alpha)
    } else {
        fd_dgamma(model, x, alpha)?
    };
    Ok(ConnectionField { gamma, dgamma })
}

/// Levi-Civita connection (α = 0 member of the pencil).
pub fn levi_civita_at(model: &dyn Potential, x: &[f64]) -> Result<ConnectionField> {
    alpha_connection_at(model, x, 0.0)
}

/// Algebraic pencil step: `Γ^α = lc + α Λ` together with
/// `∂Γ^α = ∂(lc) + α (∂g⁻¹·C + g⁻¹·∂C)`, all at the same point.
pub fn alpha_connection(
    point: &PointGeometry,
    dac: &Array4<f64>,
    lc: &ConnectionField,
    alpha: f64,
) -> ConnectionField {
    let n = point.metric.dim();
    let ginv = point.metric.inverse();
    let dginv = inverse_metric_derivative(&point.metric, &point.ac);
    let mut gamma = lc.gamma.clone();
    let mut dgamma = lc.dgamma.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[[k, l]] * point.ac.get(i, j, l);
                }
                gamma[[k, i, j]] += alpha * acc;
                for m in 0..n {
                    let mut dacc = 0.0;
                    for l in 0..n {
                        dacc += dginv[[m, k, l]] * point.ac.get(i, j, l)
                            + ginv[[k, l]] * dac[[m, i, j, l]];
                    }
                    dgamma[[m, k, i, j]] += alpha * dacc;
                }
            }
        }
    }
    ConnectionField { gamma, dgamma }
}

fn analytic_dgamma(point: &PointGeometry, dac: &Array4<f64>, alpha: f64) -> Array4<f64> {
    let n = point.metric.dim();
    let ginv = point.metric.inverse();
    let dginv = inverse_metric_derivative(&point.metric, &point.ac);
    let ac = &point.ac;
    let mut dgamma = Array4::zeros((n, n, n, n));
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        let lowered = 0.5 * (ac.get(i, j, l) + ac.get(j, i, l) - ac.get(l, i, j))
                            + alpha * ac.get(i, j, l);
                        let dlowered = 0.5
                            * (dac[[m, i, j, l]] + dac[[m, j, i, l]] - dac[[m, l, i, j]])
                            + alpha * dac[[m, i, j, l]];
                        acc += dginv[[m, k, l]] * lowered + ginv[[k, l]] * dlowered;
                    }
                    dgamma[[m, k, i, j]] = acc;
                }
            }
        }
    }
    dgamma
}

/// `∂Γ` by Richardson-extrapolated central differences of the assembled
/// Christoffel field (fallback models).
fn fd_dgamma(model: &dyn Potential, x: &[f64], alpha: f64) -> Result<Array4<f64>> {
    let n = model.dim();
    let gamma_at = |p: &[f64]| -> Result<Array3<f64>> {
        Ok(alpha_gamma(&PointGeometry::at(model, p)?, alpha))
    };
    let mut dgamma = Array4::zeros((n, n, n, n));
    for m in 0..n {
        let h = crate::models::fd_step(x[m]);
        let eval = |step: f64| -> Result<Array3<f64>> {
            let mut p = x.to_vec();
            p[m] += step;
            gamma_at(&p)
        };
        let (p1, m1) = (eval(h)?, eval(-h)?);
        let (p2, m2) = (eval(h / 2.0)?, eval(-h / 2.0)?);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let coarse = (p1[[k, i, j]] - m1[[k, i, j]]) / (2.0 * h);
                    let fine = (p2[[k, i, j]] - m2[[k, i, j]]) / h;
                    dgamma[[m, k, i, j]] = (4.0 * fine - coarse) / 3.0;
                }
            }
        }
    }
    Ok(dgamma)
}

/// Dual connection `Γ* = 2·lc − Γ`, including the derivative block.
pub fn dual_connection(conn: &ConnectionField, lc: &ConnectionField) -> ConnectionField {
    ConnectionField {
        gamma: 2.0 * &lc.gamma - &conn.gamma,
        dgamma: 2.0 * &lc.dgamma - &conn.dgamma,
    }
}

/// Contravariant connection `Γ^{ij}_k = -g^{is} Γ^j_{sk}`.
pub fn contravariant_connection(conn: &ConnectionField, metric: &MetricTensor) -> Array3<f64> {
    let n = metric.dim();
    let ginv = metric.inverse();
    let mut out = Array3::zeros((n, n, n));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = 0.0;
                for s in 0..n {
                    acc -= ginv[[i, s]] * conn.gamma[[j, s, k]];
                }
                out[[i, j, k]] = acc;
            }
        }
    }
    out
}

/// `R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_is Γ^s_jk − Γ^l_js Γ^s_ik`.
pub fn riemann_curvature(conn: &ConnectionField) -> CurvatureTensor {
    let n = conn.dim();
    let mut r = Array4::zeros((n, n, n, n));
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = conn.dgamma[[i, l, j, k]] - conn.dgamma[[j, l, i, k]];
                    for s in 0..n {
                        acc += conn.gamma[[l, i, s]] * conn.gamma[[s, j, k]]
                            - conn.gamma[[l, j, s]] * conn.gamma[[s, i, k]];
                    }
                    r[[l, i, j, k]] = acc;
                }
            }
        }
    }
    CurvatureTensor { r }
}

/// Statistical product `(X∘Y)^k = g^{kl} C_ijl X^i Y^j`.
///
/// Accumulated over `i ≤ j` with the symmetrized weight so that `X∘Y` and
/// `Y∘X` execute identical floating-point operations and agree bitwise.
pub fn statistical_product(
    metric: &MetricTensor,
    ac: &SymmetricThirdTensor,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    let n = metric.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len().max(y.len()),
        });
    }
    let ginv = metric.inverse();
    let mut lowered = vec![0.0; n];
    for (l, slot) in lowered.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..n {
            acc += ac.get(i, i, l) * (x[i] * y[i]);
            for j in (i + 1)..n {
                acc += ac.get(i, j, l) * (x[i] * y[j] + x[j] * y[i]);
            }
        }
        *slot = acc;
    }
    let mut out = vec![0.0; n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for l in 0..n {
            acc += ginv[[k, l]] * lowered[l];
        }
        *slot = acc;
    }
    Ok(out)
}

/// The two scalar contractions entering the Yukawa term.
#[derive(Debug, Clone, Copy)]
pub struct YukawaTerm {
    /// `C_ijk C^ijk`
    pub full_contraction: f64,
    /// `C_i C^i` with `C_i = g^{jl} C_ijl`
    pub trace_contraction: f64,
}

impl YukawaTerm {
    /// `C = C_ijk C^ijk − C_i C^i`
    pub fn value(&self) -> f64 {
        self.full_contraction - self.trace_contraction
    }
}

/// Yukawa term of a metric/AC pair, contracted by explicit index loops.
pub fn yukawa_term(metric: &MetricTensor, ac: &SymmetricThirdTensor) -> YukawaTerm {
    let n = metric.dim();
    let ginv = metric.inverse();
    // C^{ijk} = g^{ia} g^{jb} g^{kc} C_abc
    let mut full = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut raised = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            raised += ginv[[i, a]] * ginv[[j, b]] * ginv[[k, c]] * ac.get(a, b, c);
                        }
                    }
                }
                full += ac.get(i, j, k) * raised;
            }
        }
    }
    let mut trace = vec![0.0; n];
    for (i, slot) in trace.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..n {
            for l in 0..n {
                acc += ginv[[j, l]] * ac.get(i, j, l);
            }
        }
        *slot = acc;
    }
    let mut trace_contraction = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace_contraction += ginv[[i, j]] * trace[i] * trace[j];
        }
    }
    YukawaTerm {
        full_contraction: full,
        trace_contraction,
    }
}

/// Straight path between two points of the coordinate domain.
#[derive(Debug, Clone)]
pub struct LineSegment {
    pub from: Vec<f64>,
    pub to: Vec<f64>,
}

impl LineSegment {
    pub fn new(from: Vec<f64>, to: Vec<f64>) -> Result<Self> {
        if from.len() != to.len() || from.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: from.len().max(1),
                got: to.len(),
            });
        }
        Ok(LineSegment { from, to })
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        self.from
            .iter()
            .zip(&self.to)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }

    /// Constant velocity of the unit-parameter segment.
    pub fn velocity(&self) -> Vec<f64> {
        self.from.iter().zip(&self.to).map(|(a, b)| b - a).collect()
    }

    pub fn length(&self) -> f64 {
        self.velocity().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

const TRANSPORT_STEPS_PER_UNIT_LENGTH: f64 = 200.0;

/// Parallel transport `X` under `Γ^{α_x}` and `Y` under `Γ^{α_y}` along the
/// segment with a classical fixed-step 4th-order integrator, returning the
/// largest checkpoint deviation `|g(X(t), Y(t)) − g(X₀, Y₀)|`.
pub fn transport_pairing_drift(
    model: &dyn Potential,
    alpha_x: f64,
    alpha_y: f64,
    curve: &LineSegment,
    x0: &[f64],
    y0: &[f64],
) -> Result<f64> {
    let n = model.dim();
    if curve.from.len() != n || x0.len() != n || y0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: curve.from.len(),
        });
    }
    let steps = ((TRANSPORT_STEPS_PER_UNIT_LENGTH * curve.length()).ceil() as usize).max(16);
    let h = 1.0 / steps as f64;
    let velocity = curve.velocity();

    // state = (X, Y); one geometry evaluation serves both connections
    let derivative = |t: f64, state: &[f64]| -> Result<Vec<f64>> {
        let point = PointGeometry::at(model, &curve.point(t))?;
        let gamma_x = alpha_gamma(&point, alpha_x);
        let gamma_y = alpha_gamma(&point, alpha_y);
        let (x, y) = state.split_at(n);
        let mut out = vec![0.0; 2 * n];
        for k in 0..n {
            let mut dx = 0.0;
            let mut dy = 0.0;
            for i in 0..n {
                for j in 0..n {
                    dx -= gamma_x[[k, i, j]] * velocity[i] * x[j];
                    dy -= gamma_y[[k, i, j]] * velocity[i] * y[j];
                }
            }
            out[k] = dx;
            out[n + k] = dy;
        }
        Ok(out)
    };

    let g0 = metric_at(model, &curve.from)?.inner(x0, y0)?;
    let mut state: Vec<f64> = x0.iter().chain(y0.iter()).copied().collect();
    let mut drift = 0.0_f64;
    for step in 0..steps {
        let t = step as f64 * h;
        let k1 = derivative(t, &state)?;
        let k2 = derivative(t + h / 2.0, &combine(&state, &k1, h / 2.0))?;
        let k3 = derivative(t + h / 2.0, &combine(&state, &k2, h / 2.0))?;
        let k4 = derivative(t + h, &combine(&state, &k3, h))?;
        for i in 0..state.len() {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = (step + 1) as f64 * h;
        let metric = metric_at(model, &curve.point(t_next))?;
        let (x, y) = state.split_at(n);
        drift = drift.max((metric.inner(x, y)? - g0).abs());
    }
    Ok(drift)
}

fn combine(state: &[f64], derivative: &[f64], factor: f64) -> Vec<f64> {
    state
        .iter()
        .zip(derivative)
        .map(|(s, d)| s + factor * d)
        .collect()
}

const DUAL_DRIFT_GUARD: f64 = 1e-3;

/// Transport `X` under the dual `Γ^{-α}` and `Y` under `Γ^α`; the pairing
/// must be preserved. A drift above `1e-3` signals inconsistent inputs
/// (wrong connection pair or a step-size failure) and is reported as an
/// error rather than returned.
pub fn dual_pairing_drift(
    model: &dyn Potential,
    alpha: f64,
    curve: &LineSegment,
    x0: &[f64],
    y0: &[f64],
) -> Result<f64> {
    let drift = transport_pairing_drift(model, -alpha, alpha, curve, x0, y0)?;
    if drift > DUAL_DRIFT_GUARD {
        return Err(Error::Numerical(format!(
            "dual transport drift {drift:e} exceeds {DUAL_DRIFT_GUARD:e}; \
             inputs are not a dual connection pair or the step size failed"
        )));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{bose_ideal_gas, classical_ideal_gas, SyntheticPotential};
    use approx::assert_relative_eq;
    use ndarray::array;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

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

    #[test]
    fn metric_constructor_validates() {
        assert!(MetricTensor::new(array![[1.0, 0.0], [0.0, -1.0]]).is_err());
        assert!(MetricTensor::new(array![[1.0, 0.5], [0.4, 1.0]]).is_err());
        let m = MetricTensor::new(array![[2.0, 0.5], [0.5, 1.0]]).unwrap();
        assert_relative_eq!(m.det(), 1.75, max_relative = 1e-14);
        // g · g⁻¹ = I
        let ginv = m.inverse();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    acc += m.g()[[i, k]] * ginv[[k, j]];
                }
                assert_relative_eq!(acc, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn classical_metric_matches_table_and_determinant() {
        let gas = classical_ideal_gas();
        let (beta, gamma) = (1.0, 2f64.ln());
        let metric = metric_at(&gas, &[beta, gamma]).unwrap();
        let eta = (-gamma).exp();
        let lam3_inv = 1.0 / gas.units().thermal_wavelength_cubed(beta);
        assert_relative_eq!(
            metric.g()[[0, 0]],
            3.75 * lam3_inv * eta,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            metric.g()[[0, 1]],
            1.5 * lam3_inv * eta,
            max_relative = 1e-13
        );
        assert_relative_eq!(metric.g()[[1, 1]], lam3_inv * eta, max_relative = 1e-13);
        // det g = (3/2) λ⁻⁶ β⁻² η²
        assert_relative_eq!(
            metric.det(),
            1.5 * lam3_inv * lam3_inv * eta * eta / (beta * beta),
            max_relative = 1e-13
        );
    }

    #[test]
    fn quadratic_model_geometry_is_flat_euclidean() {
        let model = quadratic2d();
        let x = [0.7, -0.4];
        let metric = metric_at(&model, &x).unwrap();
        assert_relative_eq!(metric.g()[[0, 0]], 1.0, max_relative = 1e-8);
        assert_relative_eq!(metric.g()[[1, 1]], 1.0, max_relative = 1e-8);
        assert!(metric.g()[[0, 1]].abs() < 1e-9);
        let ac = ac_tensor_at(&model, &x).unwrap();
        assert!(ac.max_abs() < 1e-6);
        let yuk = yukawa_term(&metric, &ac);
        assert!(yuk.value().abs() < 1e-12);
        // product is ~0 up to the FD noise of the third partials (~1e-7)
        // amplified by the vector magnitudes
        let product = statistical_product(&metric, &ac, &[1.0, 2.0], &[3.0, -1.0]).unwrap();
        assert!(
            product.iter().all(|v| v.abs() < 1e-5),
            "product {product:?}"
        );
        for alpha in [-1.0, 0.0, 0.7] {
            let conn = alpha_connection_at(&model, &x, alpha).unwrap();
            let curv = riemann_curvature(&conn);
            assert!(curv.max_abs() < 1e-5, "alpha={alpha}: {}", curv.max_abs());
        }
    }

    #[test]
    fn bose_metric_spd_on_grid() {
        let gas = bose_ideal_gas();
        for i in 0..6 {
            for j in 0..6 {
                let beta = 0.5 + 1.5 * i as f64 / 5.0;
                let gamma = 0.1 + 2.9 * j as f64 / 5.0;
                let metric = metric_at(&gas, &[beta, gamma]).unwrap();
                assert!(metric.det() > 0.0);
                assert!(metric.g()[[0, 0]] > 0.0);
            }
        }
    }

    #[test]
    fn statistical_product_commutative_bitwise_and_invariant() {
        let gas = bose_ideal_gas();
        let point = PointGeometry::at(&gas, &[1.0, 0.8]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let z: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let xy = statistical_product(&point.metric, &point.ac, &x, &y).unwrap();
            let yx = statistical_product(&point.metric, &point.ac, &y, &x).unwrap();
            for (a, b) in xy.iter().zip(&yx) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            // Frobenius invariance g(X∘Y, Z) = g(X, Y∘Z)
            let yz = statistical_product(&point.metric, &point.ac, &y, &z).unwrap();
            let lhs = point.metric.inner(&xy, &z).unwrap();
            let rhs = point.metric.inner(&x, &yz).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn yukawa_classical_gas_cancels_exactly() {
        // C_ijk C^ijk = (20/3) λ³ η⁻¹ and the trace part equals it, so the
        // Yukawa term vanishes identically.
        let gas = classical_ideal_gas();
        for &(beta, gamma) in &[(1.0, 0.5), (0.7, 2.0), (1.8, 0.3)] {
            let point = PointGeometry::at(&gas, &[beta, gamma]).unwrap();
            let yuk = yukawa_term(&point.metric, &point.ac);
            let lam3 = gas.units().thermal_wavelength_cubed(beta);
            let expected = 20.0 / 3.0 * lam3 * gamma.exp();
            assert_relative_eq!(yuk.full_contraction, expected, max_relative = 1e-12);
            assert_relative_eq!(yuk.trace_contraction, expected, max_relative = 1e-12);
            assert!(yuk.value().abs() <= 1e-9 * expected);
        }
    }

    #[test]
    fn levi_civita_halves_raised_ac() {
        // In Hessian coordinates ^LCΓ^k_ij = ½ g^{kl} C_ijl.
        for model_choice in 0..2 {
            let classical = classical_ideal_gas();
            let bose = bose_ideal_gas();
            let model: &dyn Potential = if model_choice == 0 { &classical } else { &bose };
            let x = [1.2, 0.9];
            let point = PointGeometry::at(model, &x).unwrap();
            let lc = levi_civita_at(model, &x).unwrap();
            let lambda = raised_ac(&point.metric, &point.ac);
            let n = 2;
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert_relative_eq!(
                            lc.gamma[[k, i, j]],
                            0.5 * lambda[[k, i, j]],
                            max_relative = 1e-11,
                            epsilon = 1e-13
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_identities() {
        // Γ* = 2·lc − Γ; dual(Γ^α) = Γ^{-α}; lowered(Γ* − Γ) = C;
        // dual(lc) = lc; α = 0 leaves lc unchanged.
        let gas = bose_ideal_gas();
        let x = [0.9, 1.1];
        let point = PointGeometry::at(&gas, &x).unwrap();
        let dac = fourth_partials_at(&gas, &x).unwrap();
        let lc = levi_civita_at(&gas, &x).unwrap();

        let from_zero = alpha_connection(&point, &dac, &lc, 0.0);
        assert_eq!(from_zero.gamma, lc.gamma);
        assert_eq!(from_zero.dgamma, lc.dgamma);

        let alpha = 0.37;
        let plus = alpha_connection(&point, &dac, &lc, alpha);
        let minus = alpha_connection(&point, &dac, &lc, -alpha);
        let dual = dual_connection(&plus, &lc);
        let n = 2;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    assert_relative_eq!(
                        dual.gamma[[k, i, j]],
                        minus.gamma[[k, i, j]],
                        max_relative = 1e-12,
                        epsilon = 1e-12
                    );
                    for m in 0..n {
                        assert_relative_eq!(
                            dual.dgamma[[m, k, i, j]],
                            minus.dgamma[[m, k, i, j]],
                            max_relative = 1e-10,
                            epsilon = 1e-10
                        );
                    }
                }
            }
        }
        let dual_of_lc = dual_connection(&lc, &lc);
        assert_eq!(dual_of_lc.gamma, lc.gamma);

        // C_ijk = Γ*_ijk − Γ_ijk (lowered), with (Γ, Γ*) = (α=-½, α=+½)
        let star = alpha_connection(&point, &dac, &lc, 0.5);
        let flat = alpha_connection(&point, &dac, &lc, -0.5);
        let g = point.metric.g();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lowered = 0.0;
                    for l in 0..n {
                        lowered += g[[k, l]] * (star.gamma[[l, i, j]] - flat.gamma[[l, i, j]]);
                    }
                    assert_relative_eq!(
                        lowered,
                        point.ac.get(i, j, k),
                        max_relative = 1e-10,
                        epsilon = 1e-12
                    );
                }
            }
        }
        // and ^LCΓ = ½(Γ + Γ*)
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    assert_relative_eq!(
                        0.5 * (star.gamma[[k, i, j]] + flat.gamma[[k, i, j]]),
                        lc.gamma[[k, i, j]],
                        max_relative = 1e-12,
                        epsilon = 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn alpha_connection_at_matches_algebraic_route() {
        let gas = bose_ideal_gas();
        let x = [1.4, 0.6];
        let point = PointGeometry::at(&gas, &x).unwrap();
        let dac = fourth_partials_at(&gas, &x).unwrap();
        let lc = levi_civita_at(&gas, &x).unwrap();
        for alpha in [-0.5, 0.25, 1.0] {
            let direct = alpha_connection_at(&gas, &x, alpha).unwrap();
            let algebraic = alpha_connection(&point, &dac, &lc, alpha);
            for (a, b) in direct.gamma.iter().zip(algebraic.gamma.iter()) {
                assert_relative_eq!(a, b, max_relative = 1e-11, epsilon = 1e-13);
            }
            for (a, b) in direct.dgamma.iter().zip(algebraic.dgamma.iter()) {
                assert_relative_eq!(a, b, max_relative = 1e-9, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn connections_are_torsion_free_and_dubrovin_form_holds() {
        // Γ^k_ij = Γ^k_ji for every pencil member, and the pencil step acts
        // on vectors as α times the statistical product:
        // (Γ^α − LC)(X, Y) = α · X∘Y.
        let gas = bose_ideal_gas();
        let x = [1.1, 0.7];
        let point = PointGeometry::at(&gas, &x).unwrap();
        let lc = levi_civita_at(&gas, &x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for alpha in [-1.0, -0.5, 0.0, 0.4, 1.0] {
            let conn = alpha_connection_at(&gas, &x, alpha).unwrap();
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(
                            conn.gamma[[k, i, j]].to_bits(),
                            conn.gamma[[k, j, i]].to_bits(),
                            "torsion at ({k},{i},{j}), α = {alpha}"
                        );
                    }
                }
            }
            for _ in 0..20 {
                let xv: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
                let yv: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
                let product = statistical_product(&point.metric, &point.ac, &xv, &yv).unwrap();
                for k in 0..2 {
                    let mut pencil_step = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            pencil_step +=
                                (conn.gamma[[k, i, j]] - lc.gamma[[k, i, j]]) * xv[i] * yv[j];
                        }
                    }
                    assert_relative_eq!(
                        pencil_step,
                        alpha * product[k],
                        max_relative = 1e-10,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn curvature_vanishes_at_half_alphas() {
        // The α = ±½ connections are flat for every Hessian model.
        let classical = classical_ideal_gas();
        let bose = bose_ideal_gas();
        let models: [&dyn Potential; 2] = [&classical, &bose];
        for model in models {
            for &(beta, gamma) in &[(0.5, 0.1), (1.0, 0.5), (2.0, 3.0)] {
                for alpha in [-0.5, 0.5] {
                    let conn = alpha_connection_at(model, &[beta, gamma], alpha).unwrap();
                    let curv = riemann_curvature(&conn);
                    let tol = 1e-6 * (1.0 + conn.max_abs().powi(2));
                    assert!(
                        curv.max_abs() <= tol,
                        "{} α={alpha} at ({beta},{gamma}): |R| = {:e}",
                        model.name(),
                        curv.max_abs()
                    );
                }
            }
        }
    }

    #[test]
    fn bose_levi_civita_is_curved_classical_is_not() {
        // Finite-difference curvature oracle: differentiate the Christoffel
        // field numerically and assemble R with an independent loop.
        fn curvature_oracle(model: &dyn Potential, x: &[f64], alpha: f64) -> f64 {
            let n = model.dim();
            let gamma_at = |p: &[f64]| alpha_gamma(&PointGeometry::at(model, p).unwrap(), alpha);
            let gamma = gamma_at(x);
            let h = 1e-5;
            let mut dgamma = Array4::zeros((n, n, n, n));
            for m in 0..n {
                let mut plus = x.to_vec();
                let mut minus = x.to_vec();
                plus[m] += h;
                minus[m] -= h;
                let (gp, gm) = (gamma_at(&plus), gamma_at(&minus));
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            dgamma[[m, k, i, j]] = (gp[[k, i, j]] - gm[[k, i, j]]) / (2.0 * h);
                        }
                    }
                }
            }
            let mut max_r = 0.0_f64;
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let mut acc = dgamma[[i, l, j, k]] - dgamma[[j, l, i, k]];
                            for s in 0..n {
                                acc += gamma[[l, i, s]] * gamma[[s, j, k]]
                                    - gamma[[l, j, s]] * gamma[[s, i, k]];
                            }
                            max_r = max_r.max(acc.abs());
                        }
                    }
                }
            }
            max_r
        }

        let bose = bose_ideal_gas();
        let x = [1.0, 0.5];
        let analytic = riemann_curvature(&alpha_connection_at(&bose, &x, 0.0).unwrap()).max_abs();
        let oracle = curvature_oracle(&bose, &x, 0.0);
        assert!(
            analytic > 1e-4,
            "bose LC curvature should be visible: {analytic:e}"
        );
        assert_relative_eq!(analytic, oracle, max_relative = 1e-5);

        let classical = classical_ideal_gas();
        let flat = riemann_curvature(&alpha_connection_at(&classical, &x, 0.0).unwrap()).max_abs();
        assert!(flat < 1e-10, "classical LC curvature: {flat:e}");
    }

    #[test]
    fn curvature_antisymmetry() {
        let bose = bose_ideal_gas();
        let conn = alpha_connection_at(&bose, &[1.0, 0.5], 1.0).unwrap();
        let curv = riemann_curvature(&conn);
        let n = 2;
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let a = curv.r[[l, i, j, k]];
                        let b = curv.r[[l, j, i, k]];
                        assert!((a + b).abs() <= 1e-8 * (1.0 + a.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_model_curved_at_generic_alpha() {
        let model = cubic3d();
        let x = [0.3, 0.2, 0.1];
        let conn = alpha_connection_at(&model, &x, 1.0).unwrap();
        let curv = riemann_curvature(&conn);
        assert!(
            curv.max_abs() > 1e-3,
            "cubic curvature at α=1: {:e}",
            curv.max_abs()
        );
        // still flat at the distinguished pair
        for alpha in [-0.5, 0.5] {
            let conn = alpha_connection_at(&model, &x, alpha).unwrap();
            let curv = riemann_curvature(&conn);
            let tol = 1e-4 * (1.0 + conn.max_abs().powi(2));
            assert!(curv.max_abs() <= tol, "α={alpha}: {:e}", curv.max_abs());
        }
    }

    #[test]
    fn contravariant_connection_formula_and_pairing() {
        let gas = bose_ideal_gas();
        let x = [1.0, 1.0];
        let point = PointGeometry::at(&gas, &x).unwrap();
        let conn = alpha_connection_at(&gas, &x, 0.5).unwrap();
        let contra = contravariant_connection(&conn, &point.metric);
        let ginv = point.metric.inverse();
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut expected = 0.0;
                    for s in 0..n {
                        expected -= ginv[[i, s]] * conn.gamma[[j, s, k]];
                    }
                    assert_relative_eq!(contra[[i, j, k]], expected, max_relative = 1e-14);
                }
            }
        }

        // Quadratic model: everything vanishes.
        let quad = quadratic2d();
        let qx = [0.5, 0.5];
        let qpoint = PointGeometry::at(&quad, &qx).unwrap();
        let qconn = alpha_connection_at(&quad, &qx, 0.5).unwrap();
        let qcontra = contravariant_connection(&qconn, &qpoint.metric);
        assert!(qcontra.iter().all(|v| v.abs() < 1e-6));

        // Sign check: transporting a covector with ω̇_k = +Γ^r_ik ċ^i ω_r
        // (the covariant-derivative sign for 1-forms, which is where the
        // minus in Γ^{ij}_k comes from) keeps ⟨ω, X⟩ constant when X is
        // transported with Ẋ^k = -Γ^k_ij ċ^i X^j.
        let curve = LineSegment::new(vec![1.0, 1.0], vec![1.3, 1.4]).unwrap();
        let steps = 400;
        let h = 1.0 / steps as f64;
        let velocity = curve.velocity();
        let mut vec_x = vec![1.0, -0.5];
        let mut omega = vec![0.4, 1.2];
        let pairing0: f64 = vec_x.iter().zip(&omega).map(|(a, b)| a * b).sum();
        let alpha = 0.5;
        let derivative = |t: f64, vx: &[f64], om: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let gm = alpha_gamma(&PointGeometry::at(&gas, &curve.point(t)).unwrap(), alpha);
            let mut dx = vec![0.0; 2];
            let mut domega = vec![0.0; 2];
            for k in 0..2 {
                for i in 0..2 {
                    for r in 0..2 {
                        dx[k] -= gm[[k, i, r]] * velocity[i] * vx[r];
                        domega[k] += gm[[r, i, k]] * velocity[i] * om[r];
                    }
                }
            }
            (dx, domega)
        };
        for step in 0..steps {
            // midpoint rule (predictor at h/2, derivative re-evaluated there)
            let t = step as f64 * h;
            let (dx, domega) = derivative(t, &vec_x, &omega);
            let vx_mid: Vec<f64> = vec_x
                .iter()
                .zip(&dx)
                .map(|(v, d)| v + 0.5 * h * d)
                .collect();
            let om_mid: Vec<f64> = omega
                .iter()
                .zip(&domega)
                .map(|(v, d)| v + 0.5 * h * d)
                .collect();
            let (dx_mid, domega_mid) = derivative(t + 0.5 * h, &vx_mid, &om_mid);
            for k in 0..2 {
                vec_x[k] += h * dx_mid[k];
                omega[k] += h * domega_mid[k];
            }
        }
        let pairing1: f64 = vec_x.iter().zip(&omega).map(|(a, b)| a * b).sum();
        assert!(
            (pairing1 - pairing0).abs() < 1e-4,
            "canonical pairing drifted: {pairing0} -> {pairing1}"
        );
    }

    #[test]
    fn dual_transport_preserves_pairing() {
        let classical = classical_ideal_gas();
        let bose = bose_ideal_gas();
        let curve = LineSegment::new(vec![1.0, 0.8], vec![1.6, 1.4]).unwrap();
        let x0 = [1.0, 0.3];
        let y0 = [-0.4, 1.2];
        let models: [&dyn Potential; 2] = [&classical, &bose];
        for model in models {
            // canonical dually-flat pair and a non-canonical pair
            for alpha in [0.5, 0.25] {
                let drift = dual_pairing_drift(model, alpha, &curve, &x0, &y0).unwrap();
                assert!(drift <= 1e-6, "{} α={alpha}: drift {drift:e}", model.name());
            }
        }
        // single-connection transport does not preserve the metric
        let drift = transport_pairing_drift(&bose, -0.5, -0.5, &curve, &x0, &y0).unwrap();
        assert!(drift > 1e-3, "single-connection drift {drift:e}");
        assert!(dual_pairing_drift(&bose, -0.5, &curve, &x0, &y0).is_ok());

        // quadratic model: any pencil pair keeps the constant metric
        let quad = quadratic2d();
        let qcurve = LineSegment::new(vec![-0.5, -0.5], vec![0.5, 0.8]).unwrap();
        let drift = transport_pairing_drift(&quad, 0.3, 0.3, &qcurve, &x0, &y0).unwrap();
        assert!(drift <= 1e-6, "quadratic drift {drift:e}");
    }

    proptest::proptest! {
        #[test]
        fn dual_of_pencil_member_is_mirrored_member(
            alpha in -2.0f64..2.0,
            beta in 0.6f64..1.8,
            gamma in 0.3f64..2.5,
        ) {
            // dual_connection(Γ^α) = Γ^{-α} across the pencil
            let gas = bose_ideal_gas();
            let x = [beta, gamma];
            let lc = levi_civita_at(&gas, &x).unwrap();
            let plus = alpha_connection_at(&gas, &x, alpha).unwrap();
            let minus = alpha_connection_at(&gas, &x, -alpha).unwrap();
            let dual = dual_connection(&plus, &lc);
            let scale = lc.max_abs().max(1.0);
            for (a, b) in dual.gamma.iter().zip(minus.gamma.iter()) {
                proptest::prop_assert!((a - b).abs() <= 1e-11 * scale);
            }
            for (a, b) in dual.dgamma.iter().zip(minus.dgamma.iter()) {
                proptest::prop_assert!((a - b).abs() <= 1e-9 * scale.powi(2).max(1.0));
            }
        }
    }
}

//! Schmidt number of the biphoton state.
//!
//! Two independent routes are provided and must agree on resolved grids:
//!
//! * **integral** — `κ = N²/B` with `N = ∬|ψ|²` and
//!   `B = ∬ |G_s(Ω, Ω′)|² dΩ dΩ′`, the signal coherence being formed by an
//!   explicit (matrix-product) convolution of ψ with itself;
//! * **SVD** — the singular values σ_n of ψ scaled by `√(dΩ_s dΩ_i)` give the
//!   Schmidt weights `λ_n = σ_n²/Σσ²` and `κ = 1/Σλ_n²`.
//!
//! Reference formulas for the long- and short-pump asymptotes and the
//! Gaussian-approximation minimum are also exposed for comparison.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::biphoton::{default_grid, grid_with_rule, jsa_exact, BiphotonError, FrequencyGrid, GridRule, JsaGrid, PumpPulse};
use crate::numeric::trapezoid_weights;
use crate::qpm::{CrystalScenario, DispersionMode, PhaseMatchSummary};

/// Relative change in κ between grid levels accepted as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 0.005;

/// Maximum number of refinements tried by [`convergence_check`].
pub const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, Error)]
pub enum SchmidtError {
    #[error("joint spectral amplitude contains non-finite values")]
    NonFinite,
    #[error("joint spectral amplitude vanishes on the grid")]
    Zero,
    #[error("singular value decomposition did not converge")]
    SvdFailed,
    #[error("κ did not converge within {levels} refinements: {}", fmt_seq(.kappas))]
    NotConverged { levels: usize, kappas: Vec<f64> },
    #[error(transparent)]
    Biphoton(#[from] BiphotonError),
}

fn fmt_seq(v: &[f64]) -> String {
    v.iter().map(|k| format!("{k:.5}")).collect::<Vec<_>>().join(" → ")
}

/// Result of the integral route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralKappa {
    /// Photon number `N = ∬|ψ|²`.
    pub n: f64,
    /// `B = ∬|G⁽¹⁾|²`.
    pub b: f64,
    pub kappa: f64,
}

impl IntegralKappa {
    /// `g⁽²⁾ = 1 + 1/κ` of each marginal beam.
    pub fn g2(&self) -> f64 {
        1.0 + 1.0 / self.kappa
    }
}

/// Result of the SVD route.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdKappa {
    pub kappa: f64,
    /// Normalised Schmidt weights λ_n in decreasing order.
    pub spectrum: Vec<f64>,
    /// Continuous-normalised singular values.
    pub singular_values: Vec<f64>,
}

fn weighted(values: &Mat<Complex64>, ws: &[f64], wi: &[f64]) -> Result<Mat<Complex64>, SchmidtError> {
    let rs: Vec<f64> = ws.iter().map(|w| w.sqrt()).collect();
    let ri: Vec<f64> = wi.iter().map(|w| w.sqrt()).collect();
    let mut finite = true;
    let m = Mat::from_fn(values.nrows(), values.ncols(), |r, c| {
        let v = values[(r, c)];
        finite &= v.re.is_finite() && v.im.is_finite();
        v * (rs[r] * ri[c])
    });
    if finite {
        Ok(m)
    } else {
        Err(SchmidtError::NonFinite)
    }
}

fn frobenius_sq(m: &Mat<Complex64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s
}

/// κ by the integral formula on a matrix with explicit quadrature weights,
/// tracing over columns (the second variable).
pub fn kappa_integral_matrix(values: &Mat<Complex64>, w_rows: &[f64], w_cols: &[f64]) -> Result<IntegralKappa, SchmidtError> {
    // A = diag(√w_r)·ψ·diag(√w_c);  (A A†)(m, m′) = √(w_m w_m′)·conj G(m, m′).
    let a = weighted(values, w_rows, w_cols)?;
    let n = frobenius_sq(&a);
    if !(n > 0.0) {
        return Err(SchmidtError::Zero);
    }
    let g = &a * a.adjoint();
    let b = frobenius_sq(&g);
    Ok(IntegralKappa { n, b, kappa: n * n / b })
}

/// κ from the singular values of a matrix with uniform cell measure `cell`.
pub fn kappa_svd_matrix(values: &Mat<Complex64>, cell: f64) -> Result<SvdKappa, SchmidtError> {
    let scale = cell.sqrt();
    let mut finite = true;
    let a = Mat::from_fn(values.nrows(), values.ncols(), |r, c| {
        let v = values[(r, c)];
        finite &= v.re.is_finite() && v.im.is_finite();
        v * scale
    });
    if !finite {
        return Err(SchmidtError::NonFinite);
    }
    let sv = a.singular_values().map_err(|_| SchmidtError::SvdFailed)?;
    let total: f64 = sv.iter().map(|s| s * s).sum();
    if !(total > 0.0) {
        return Err(SchmidtError::Zero);
    }
    let spectrum: Vec<f64> = sv.iter().map(|s| s * s / total).collect();
    let purity: f64 = spectrum.iter().map(|l| l * l).sum();
    Ok(SvdKappa {
        kappa: 1.0 / purity,
        spectrum,
        singular_values: sv,
    })
}

/// `N`, `B` and `κ = N²/B`, with `B` built from the signal coherence.
pub fn schmidt_integral(jsa: &JsaGrid) -> Result<IntegralKappa, SchmidtError> {
    let ws = trapezoid_weights(jsa.grid.s.n, jsa.grid.s.step);
    let wi = trapezoid_weights(jsa.grid.i.n, jsa.grid.i.step);
    kappa_integral_matrix(&jsa.values, &ws, &wi)
}

/// Same as [`schmidt_integral`] but with `B` built from the idler coherence.
pub fn schmidt_integral_idler(jsa: &JsaGrid) -> Result<IntegralKappa, SchmidtError> {
    let ws = trapezoid_weights(jsa.grid.s.n, jsa.grid.s.step);
    let wi = trapezoid_weights(jsa.grid.i.n, jsa.grid.i.step);
    kappa_integral_matrix(&jsa.values.transpose().to_owned(), &wi, &ws)
}

/// Schmidt weights and κ from a dense SVD of ψ·√(dΩ_s dΩ_i).
pub fn schmidt_svd(jsa: &JsaGrid) -> Result<SvdKappa, SchmidtError> {
    kappa_svd_matrix(&jsa.values, jsa.grid.s.step * jsa.grid.i.step)
}

/// Reference formulas for κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotes {
    /// Long pump: `(3/2)√(π/2)·Ω′_gvs/ΔΩ_p`.
    pub cw: f64,
    /// Short pump: `√(2/π)·ΔΩ_p/((1−η)Ω_gvm)`.
    pub ultrashort: f64,
    /// Gaussian-approximation minimum `(1+η)/(1−η)`.
    pub kappa_min: f64,
    /// Pump bandwidth of the minimum, `√(3 Ω′_gvs Ω_gvm)`.
    pub delta_omega_p_at_min: f64,
}

pub fn kappa_asymptotes(summary: &PhaseMatchSummary, pulse: &PumpPulse) -> Asymptotes {
    let dw = pulse.bandwidth();
    let eta = summary.eta.abs();
    Asymptotes {
        cw: 1.5 * (PI / 2.0).sqrt() * summary.omega_gvs_prime.abs() / dw,
        ultrashort: (2.0 / PI).sqrt() * dw / ((1.0 - eta) * summary.omega_gvm.abs()),
        kappa_min: (1.0 + eta) / (1.0 - eta),
        delta_omega_p_at_min: (3.0 * summary.omega_gvs_prime.abs() * summary.omega_gvm.abs()).sqrt(),
    }
}

/// Everything known about κ for one joint spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    pub kappa_integral: f64,
    pub kappa_svd: Option<f64>,
    pub n: f64,
    pub b: f64,
    pub g2: f64,
    pub asymptotes: Asymptotes,
    pub schmidt_spectrum: Option<Vec<f64>>,
    pub grid: (usize, usize),
}

pub fn schmidt_report(jsa: &JsaGrid, summary: &PhaseMatchSummary, pulse: &PumpPulse, with_svd: bool) -> Result<SchmidtReport, SchmidtError> {
    let int = schmidt_integral(jsa)?;
    let svd = if with_svd { Some(schmidt_svd(jsa)?) } else { None };
    Ok(SchmidtReport {
        kappa_integral: int.kappa,
        kappa_svd: svd.as_ref().map(|s| s.kappa),
        n: int.n,
        b: int.b,
        g2: int.g2(),
        asymptotes: kappa_asymptotes(summary, pulse),
        schmidt_spectrum: svd.map(|s| s.spectrum),
        grid: jsa.grid.shape(),
    })
}

/// Outcome of [`convergence_check`].
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    /// JSA at the finest level evaluated.
    pub jsa: JsaGrid,
    /// κ at each level, coarsest first.
    pub kappas: Vec<f64>,
    pub grids: Vec<FrequencyGrid>,
    /// Coarsest level whose κ is within tolerance of the next level.
    pub converged_level: usize,
}

/// Refines the grid (resolution first, then span, alternately) until κ
/// changes by less than [`CONVERGENCE_TOLERANCE`] between levels.
pub fn convergence_check(
    producer: impl Fn(&FrequencyGrid) -> Result<JsaGrid, SchmidtError>,
    start: FrequencyGrid,
    max_count: usize,
) -> Result<ConvergenceReport, SchmidtError> {
    let mut grids = vec![start];
    let mut jsa = producer(&start)?;
    let mut kappas = vec![schmidt_integral(&jsa)?.kappa];
    for level in 1..=MAX_REFINEMENTS {
        let prev = grids[level - 1];
        let next = if level % 2 == 1 { prev.refined() } else { prev.widened() };
        if next.s.n > max_count || next.i.n > max_count {
            break;
        }
        jsa = producer(&next)?;
        let k = schmidt_integral(&jsa)?.kappa;
        grids.push(next);
        kappas.push(k);
        if ((k - kappas[level - 1]) / k).abs() < CONVERGENCE_TOLERANCE {
            return Ok(ConvergenceReport {
                jsa,
                kappas,
                grids,
                converged_level: level - 1,
            });
        }
    }
    Err(SchmidtError::NotConverged {
        levels: kappas.len() - 1,
        kappas,
    })
}

/// One row of a pump-duration sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau_p: f64,
    pub delta_omega_p: f64,
    pub asymptotes: Asymptotes,
    pub grid: Option<(usize, usize)>,
    pub kappa_integral: Result<f64, String>,
    pub kappa_svd: Option<Result<f64, String>>,
}

/// Options for [`kappa_sweep`].
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub with_svd: bool,
    pub rule: GridRule,
    pub mode: DispersionMode,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            with_svd: false,
            rule: GridRule::default(),
            mode: DispersionMode::Linear,
        }
    }
}

/// κ over a list of pump durations, re-gridding each row.  Rows that fail
/// (typically the grid cap at extreme durations) keep their error text.
pub fn kappa_sweep(
    scenario: &CrystalScenario,
    summary: &PhaseMatchSummary,
    tau_p_list: &[f64],
    options: &SweepOptions,
) -> Vec<SweepRow> {
    tau_p_list
        .iter()
        .map(|&tau| {
            let pulse = PumpPulse::gaussian(tau);
            let asymptotes = kappa_asymptotes(summary, &pulse);
            let mut row = SweepRow {
                tau_p: tau,
                delta_omega_p: pulse.bandwidth(),
                asymptotes,
                grid: None,
                kappa_integral: Err(String::new()),
                kappa_svd: None,
            };
            let grid = match grid_with_rule(summary, &pulse, &options.rule) {
                Ok(g) => g,
                Err(e) => {
                    row.kappa_integral = Err(e.to_string());
                    return row;
                }
            };
            row.grid = Some(grid.shape());
            let sc = scenario.with_pump_tau(tau);
            match jsa_exact(&sc, summary, &pulse, &grid, options.mode) {
                Ok(jsa) => {
                    row.kappa_integral = schmidt_integral(&jsa).map(|k| k.kappa).map_err(|e| e.to_string());
                    if options.with_svd {
                        row.kappa_svd = Some(schmidt_svd(&jsa).map(|k| k.kappa).map_err(|e| e.to_string()));
                    }
                }
                Err(e) => row.kappa_integral = Err(e.to_string()),
            }
            row
        })
        .collect()
}

/// Shape summary of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub succeeded: usize,
    /// Index (into the sweep) of the smallest successful κ.
    pub min_index: Option<usize>,
    pub kappa_min: Option<f64>,
    pub delta_omega_p_at_min: Option<f64>,
    /// Number of interior local minima among successful rows (ordered by τ_p).
    pub local_minima: usize,
}

pub fn summarize_sweep(rows: &[SweepRow]) -> SweepSummary {
    let ok: Vec<(usize, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.kappa_integral.as_ref().ok().map(|&k| (i, k)))
        .collect();
    let min = ok.iter().cloned().min_by(|a, b| a.1.total_cmp(&b.1));
    let local_minima = if ok.len() < 3 {
        usize::from(!ok.is_empty())
    } else {
        let mut count = 0;
        for j in 0..ok.len() {
            let left = j == 0 || ok[j - 1].1 > ok[j].1;
            let right = j + 1 == ok.len() || ok[j + 1].1 > ok[j].1;
            if left && right {
                count += 1;
            }
        }
        count
    };
    SweepSummary {
        rows: rows.len(),
        succeeded: ok.len(),
        min_index: min.map(|m| m.0),
        kappa_min: min.map(|m| m.1),
        delta_omega_p_at_min: min.map(|m| rows[m.0].delta_omega_p),
        local_minima,
    }
}

/// `n` log-spaced values from `a` to `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// κ of the exact linear amplitude on the default grid (integral route).
pub fn kappa_at(scenario: &CrystalScenario, summary: &PhaseMatchSummary, tau_p: f64) -> Result<f64, SchmidtError> {
    let pulse = PumpPulse::gaussian(tau_p);
    let grid = default_grid(summary, &pulse)?;
    let jsa = jsa_exact(&scenario.with_pump_tau(tau_p), summary, &pulse, &grid, DispersionMode::Linear)?;
    Ok(schmidt_integral(&jsa)?.kappa)
}

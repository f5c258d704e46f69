//! Marginal first-order coherence of the signal and idler beams.
//!
//! ```text
//! G_s(Ω, Ω′) = ∫ dΩ_i ψ*(Ω, Ω_i) ψ(Ω′, Ω_i)
//! G_i(Ω, Ω′) = ∫ dΩ_s ψ*(Ω_s, Ω) ψ(Ω_s, Ω′)
//! ```
//!
//! The quadrature route works on any [`JsaGrid`].  The closed forms valid in
//! the three pump regimes are provided alongside; their prefactors were fixed
//! by comparing against the quadrature on converged grids rather than taken
//! on trust:
//!
//! * long pump — `Ĩ_p(Δ) = (1/2π)∫α̃*(x)α̃(x+Δ)dx`, so the diagonal at the
//!   origin is `g²τ_p/(2√π)` for a Gaussian pump;
//! * short pump — the phase-matching factor enters as `sinc(x)e^{+ix}` of the
//!   frequency difference, which keeps the result Hermitian;
//! * intermediate pump — the signal pump factor keeps the `(1−η)` scaling and
//!   the idler prefactor is `g²Ĩ_p(0)/(1−η)`.

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::biphoton::{Axis, JsaGrid, PumpPulse};
use crate::numeric::{fwhm, phase_matching, sinc, trapezoid_weights};
use crate::qpm::PhaseMatchSummary;

/// Minimum number of samples on a traced axis.
pub const MIN_TRACE_POINTS: usize = 8;

#[derive(Debug, Error)]
pub enum CoherenceError {
    #[error("cannot trace over {n} samples (need at least {MIN_TRACE_POINTS})")]
    DegenerateGrid { n: usize },
    #[error("joint spectral amplitude contains non-finite values")]
    NonFinite,
    #[error("the {0} closed form is undefined for η = 0")]
    DegenerateEta(&'static str),
}

/// Which marginal beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beam {
    Signal,
    Idler,
}

impl std::fmt::Display for Beam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Beam::Signal => "signal",
            Beam::Idler => "idler",
        })
    }
}

/// Sampled `G⁽¹⁾(Ω, Ω′)` with its spectrum and widths.
#[derive(Debug, Clone)]
pub struct CoherenceGrid {
    pub which: Beam,
    pub axis: Axis,
    pub values: Mat<Complex64>,
    /// Diagonal `G(Ω, Ω)`.
    pub spectrum: Vec<f64>,
    /// FWHM of the spectrum, rad/s.
    pub fwhm_spectrum: Option<f64>,
    /// FWHM of `x ↦ |G(−x, x)|` along the central anti-diagonal, rad/s.
    /// Measured in the half-difference `x = (Ω′ − Ω)/2` so that a coherent
    /// (rank-one, even) state has equal coherence and spectral widths.
    pub fwhm_coherence: Option<f64>,
}

impl CoherenceGrid {
    fn from_matrix(which: Beam, axis: Axis, values: Mat<Complex64>) -> Self {
        let n = axis.n;
        let spectrum: Vec<f64> = (0..n).map(|k| values[(k, k)].re).collect();
        let omega = axis.values();
        let fwhm_spectrum = fwhm(&omega, &spectrum);
        let c = axis.center();
        let half = c.min(n - 1 - c);
        let x: Vec<f64> = (0..=2 * half).map(|j| (j as f64 - half as f64) * axis.step).collect();
        let cut: Vec<f64> = (0..=2 * half)
            .map(|j| values[(c + half - j, c + j - half)].norm())
            .collect();
        let fwhm_coherence = fwhm(&x, &cut);
        CoherenceGrid {
            which,
            axis,
            values,
            spectrum,
            fwhm_spectrum,
            fwhm_coherence,
        }
    }

    /// `N = ∫ G(Ω, Ω) dΩ` by the trapezoidal rule.
    pub fn photon_number(&self) -> f64 {
        trapezoid_weights(self.axis.n, self.axis.step)
            .iter()
            .zip(&self.spectrum)
            .map(|(w, s)| w * s)
            .sum()
    }

    /// Largest `|G(Ω,Ω′) − conj G(Ω′,Ω)|` relative to `max|G|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.axis.n;
        let mut worst = 0.0f64;
        let mut peak = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                peak = peak.max(self.values[(i, j)].norm());
                worst = worst.max((self.values[(i, j)] - self.values[(j, i)].conj()).norm());
            }
        }
        worst / peak
    }

    /// Largest violation of `|G(Ω,Ω′)|² ≤ G(Ω,Ω)·G(Ω′,Ω′)`, relative to
    /// `max G(Ω,Ω)²`; zero or negative means the inequality holds.
    pub fn cauchy_schwarz_excess(&self) -> f64 {
        let n = self.axis.n;
        let d = &self.spectrum;
        let scale = d.iter().cloned().fold(0.0, f64::max).powi(2);
        let mut worst = f64::NEG_INFINITY;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max(self.values[(i, j)].norm_sqr() - d[i] * d[j]);
            }
        }
        worst / scale
    }

    pub fn diagonal_nonnegative(&self) -> bool {
        let peak = self.spectrum.iter().cloned().fold(0.0, f64::max);
        self.spectrum.iter().all(|&v| v >= -1e-12 * peak)
            && (0..self.axis.n).all(|k| self.values[(k, k)].im.abs() <= 1e-12 * peak)
    }

    /// Heuristic mode count: spectral width over coherence width.
    pub fn mode_estimate(&self) -> Option<f64> {
        Some(self.fwhm_spectrum? / self.fwhm_coherence?)
    }
}

/// `G⁽¹⁾` of one beam by trapezoidal quadrature over the other beam's axis.
pub fn g1(jsa: &JsaGrid, which: Beam) -> Result<CoherenceGrid, CoherenceError> {
    let (ns, ni) = jsa.grid.shape();
    let traced = match which {
        Beam::Signal => ni,
        Beam::Idler => ns,
    };
    if traced < MIN_TRACE_POINTS {
        return Err(CoherenceError::DegenerateGrid { n: traced });
    }
    if !jsa.is_finite() {
        return Err(CoherenceError::NonFinite);
    }
    let psi = &jsa.values;
    match which {
        Beam::Signal => {
            // B = ψ·diag(√w_i);  (B B†)(m, m′) = G_s(m′, m).
            let w: Vec<f64> = trapezoid_weights(ni, jsa.grid.i.step).into_iter().map(f64::sqrt).collect();
            let b = Mat::from_fn(ns, ni, |r, c| psi[(r, c)] * w[c]);
            let m = &b * b.adjoint();
            let g = m.transpose().to_owned();
            Ok(CoherenceGrid::from_matrix(which, jsa.grid.s, g))
        }
        Beam::Idler => {
            // C = diag(√w_s)·ψ;  C†C = G_i.
            let w: Vec<f64> = trapezoid_weights(ns, jsa.grid.s.step).into_iter().map(f64::sqrt).collect();
            let c = Mat::from_fn(ns, ni, |r, col| psi[(r, col)] * w[r]);
            let g = c.adjoint() * &c;
            Ok(CoherenceGrid::from_matrix(which, jsa.grid.i, g))
        }
    }
}

fn closed(which: Beam, axis: &Axis, f: impl Fn(f64, f64) -> Complex64) -> CoherenceGrid {
    let w = axis.values();
    let m = Mat::from_fn(axis.n, axis.n, |r, c| f(w[r], w[c]));
    CoherenceGrid::from_matrix(which, *axis, m)
}

/// Long-pump closed form:
/// `G_s = g² Ĩ_p(Ω′−Ω) sinc²((Ω+Ω′)/(2Ω_gvs))`,
/// `G_i = g² Ĩ_p(Ω′−Ω) sinc(Ω/Ω_gvs) sinc(Ω′/Ω_gvs) e^{i(Ω′−Ω)/Ω_gvs}`.
///
/// Evaluating the sinc at the mean frequency keeps `G_s` Hermitian; on the
/// diagonal both reduce to `g² Ĩ_p(0) sinc²(Ω/Ω_gvs)`.
pub fn g1_cw_closed_form(summary: &PhaseMatchSummary, pulse: &PumpPulse, axis: &Axis, which: Beam, g: f64) -> CoherenceGrid {
    let wg = summary.omega_gvs;
    let g2 = g * g;
    match which {
        Beam::Signal => closed(which, axis, |a, b| {
            pulse.intensity_transform(b - a) * (g2 * sinc(0.5 * (a + b) / wg).powi(2))
        }),
        Beam::Idler => closed(which, axis, |a, b| {
            pulse.intensity_transform(b - a)
                * Complex64::from_polar(g2 * sinc(a / wg) * sinc(b / wg), (b - a) / wg)
        }),
    }
}

/// Short-pump closed form:
/// `G_s = (g²Ω′_gvs/2) α̃*[Ω(1−η)] α̃[Ω′(1−η)] V((Ω′−Ω)/Ω_gvm)`,
/// `G_i = (g²Ω_gvm/2) α̃*[−Ω(1−η)/η] α̃[−Ω′(1−η)/η] V((Ω′−Ω)/Ω′_gvs)`,
/// with `V(x) = sinc(x)e^{ix}`.
pub fn g1_ultrashort_closed_form(
    summary: &PhaseMatchSummary,
    pulse: &PumpPulse,
    axis: &Axis,
    which: Beam,
    g: f64,
) -> Result<CoherenceGrid, CoherenceError> {
    let eta = summary.eta;
    let g2 = g * g;
    match which {
        Beam::Signal => {
            let pre = 0.5 * g2 * summary.omega_gvs_prime;
            Ok(closed(which, axis, |a, b| {
                pulse.amplitude(a * (1.0 - eta)).conj()
                    * pulse.amplitude(b * (1.0 - eta))
                    * phase_matching((b - a) / summary.omega_gvm)
                    * pre
            }))
        }
        Beam::Idler => {
            if eta == 0.0 {
                return Err(CoherenceError::DegenerateEta("short-pump idler"));
            }
            let pre = 0.5 * g2 * summary.omega_gvm;
            let r = -(1.0 - eta) / eta;
            Ok(closed(which, axis, |a, b| {
                pulse.amplitude(a * r).conj()
                    * pulse.amplitude(b * r)
                    * phase_matching((b - a) / summary.omega_gvs_prime)
                    * pre
            }))
        }
    }
}

/// Intermediate-pump closed form (both beams rank one):
/// `G_s = (g²Ω_gvs/2) α̃*[Ω(1−η)] α̃[Ω′(1−η)] e^{i(Ω′−Ω)/Ω_gvm}`,
/// `G_i = g² Ĩ_p(0)/(1−η) · sinc(Ω/Ω_gvs) sinc(Ω′/Ω_gvs) e^{i(Ω′−Ω)/Ω′_gvs}`.
pub fn g1_intermediate_closed_form(
    summary: &PhaseMatchSummary,
    pulse: &PumpPulse,
    axis: &Axis,
    which: Beam,
    g: f64,
) -> CoherenceGrid {
    let eta = summary.eta;
    let g2 = g * g;
    match which {
        Beam::Signal => {
            let pre = 0.5 * g2 * summary.omega_gvs;
            closed(which, axis, |a, b| {
                pulse.amplitude(a * (1.0 - eta)).conj()
                    * pulse.amplitude(b * (1.0 - eta))
                    * Complex64::from_polar(pre, (b - a) / summary.omega_gvm)
            })
        }
        Beam::Idler => {
            let pre = pulse.intensity_transform(0.0) * (g2 / (1.0 - eta));
            let wg = summary.omega_gvs;
            closed(which, axis, |a, b| {
                pre * Complex64::from_polar(sinc(a / wg) * sinc(b / wg), (b - a) / summary.omega_gvs_prime)
            })
        }
    }
}

/// Intensity correlation of a thermal-statistics beam,
/// `⟨I(Ω)I(Ω′)⟩ = δ(Ω−Ω′)⟨I(Ω)⟩ + ⟨I(Ω)⟩⟨I(Ω′)⟩ + |G(Ω,Ω′)|²`.
///
/// The singular shot-noise term is kept as a separate weight vector.
#[derive(Debug, Clone)]
pub struct IntensityCorrelation {
    pub axis: Axis,
    /// `⟨I⟩⟨I′⟩ + |G|²`.
    pub smooth: Mat<f64>,
    /// Weight `⟨I(Ω)⟩` of the `δ(Ω−Ω′)` term.
    pub shot_noise_weight: Vec<f64>,
}

impl IntensityCorrelation {
    /// `∬ smooth + ∫ shot-noise weight`, which equals `N² + B + N`.
    pub fn integrate(&self) -> f64 {
        let w = trapezoid_weights(self.axis.n, self.axis.step);
        let mut total = 0.0;
        for j in 0..self.axis.n {
            for i in 0..self.axis.n {
                total += w[i] * w[j] * self.smooth[(i, j)];
            }
        }
        total + w.iter().zip(&self.shot_noise_weight).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Gaussian-moment factorisation of the intensity correlation.
pub fn siegert_intensity_correlation(g1: &CoherenceGrid) -> IntensityCorrelation {
    let n = g1.axis.n;
    let d = &g1.spectrum;
    IntensityCorrelation {
        axis: g1.axis,
        smooth: Mat::from_fn(n, n, |i, j| d[i] * d[j] + g1.values[(i, j)].norm_sqr()),
        shot_noise_weight: d.clone(),
    }
}

/// `|α̃_p|²` FWHM of a Gaussian pump, `2√(ln 2)/τ_p`.
pub fn gaussian_pump_spectral_fwhm(tau_p: f64) -> f64 {
    2.0 * 2f64.ln().sqrt() / tau_p
}

/// FWHM of `sinc²(Ω/Ω_gvs)`: `2·x₀·Ω_gvs` with `sinc²(x₀) = 1/2`.
pub fn sinc2_fwhm(omega_gvs: f64) -> f64 {
    // x₀ = 1.391557378… solves sin(x)/x = 1/√2.
    2.0 * 1.391_557_378_251_51 * omega_gvs.abs()
}

/// The two short-pump mode-count estimates:
/// signal `ΔΩ_p/((1−η)Ω_gvm)` and idler `η ΔΩ_p/((1−η)Ω′_gvs)`.
pub fn ultrashort_mode_estimates(summary: &PhaseMatchSummary, pulse: &PumpPulse) -> (f64, f64) {
    let dw = pulse.bandwidth();
    let eta = summary.eta;
    (
        dw / ((1.0 - eta) * summary.omega_gvm),
        eta * dw / ((1.0 - eta) * summary.omega_gvs_prime),
    )
}

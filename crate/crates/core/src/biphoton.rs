//! Pump spectra and the joint spectral amplitude ψ(Ω_s, Ω_i).
//!
//! In the low-gain limit the biphoton amplitude is
//!
//! ```text
//! ψ(Ω_s, Ω_i) = g/√(2π) · α̃_p(Ω_s + Ω_i) · sinc(D l_c/2) · e^{−i D l_c/2}
//! ```
//!
//! With the first-order mismatch `D l_c/2 = −s`, `s = Ω_s/Ω_gvm + Ω_i/Ω′_gvs`,
//! the phase-matching factor is `sinc(s)·e^{+is}`.  The same `e^{+i(…)}`
//! convention is used in every limiting form below, which is what makes the
//! limits agree with the exact amplitude (and the 2-D Fourier transform agree
//! with the closed-form temporal correlation).
//!
//! Matrices are indexed `(signal, idler)`: rows run over Ω_s, columns over Ω_i.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::numeric::{next_pow2, phase_matching, sinc};
use crate::qpm::{phase_mismatch, CrystalScenario, DispersionMode, PhaseMatchSummary, QpmError};

#[derive(Debug, Error)]
pub enum BiphotonError {
    #[error("grid needs {needed} samples on the {axis} axis, above the cap of {cap}; pass an explicit grid")]
    GridCap {
        axis: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid pump: {0}")]
    InvalidPump(String),
    #[error("the {0} limit is undefined for η = 0")]
    DegenerateEta(&'static str),
    #[error(transparent)]
    Qpm(#[from] QpmError),
}

/// Pump envelope shape.
#[derive(Debug, Clone, PartialEq)]
pub enum PumpShape {
    /// `α_p(t) = exp(−t²/2τ_p²)`, `α̃_p(Ω) = τ_p exp(−Ω²τ_p²/2)`.
    Gaussian,
    Tabulated(TabulatedPump),
}

/// Sampled complex spectral amplitude, optionally with its temporal profile.
/// Values are linearly interpolated and vanish outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPump {
    pub omega: Vec<f64>,
    pub spectral: Vec<Complex64>,
    pub temporal: Option<(Vec<f64>, Vec<Complex64>)>,
}

fn interpolate(x: &[f64], y: &[Complex64], at: f64) -> Complex64 {
    if x.is_empty() || at < x[0] || at > x[x.len() - 1] {
        return Complex64::new(0.0, 0.0);
    }
    let j = x.partition_point(|&v| v <= at);
    if j == 0 {
        return y[0];
    }
    if j >= x.len() {
        return y[x.len() - 1];
    }
    let t = (at - x[j - 1]) / (x[j] - x[j - 1]);
    y[j - 1] * (1.0 - t) + y[j] * t
}

fn check_table(x: &[f64], y: &[Complex64], what: &str) -> Result<(), BiphotonError> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(BiphotonError::InvalidPump(format!(
            "{what} table needs ≥ 2 points and matching lengths"
        )));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(BiphotonError::InvalidPump(format!("{what} axis must be strictly increasing")));
    }
    if y.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(BiphotonError::InvalidPump(format!("{what} values must be finite")));
    }
    Ok(())
}

/// A pump pulse of duration `tau_p` (bandwidth `ΔΩ_p = 1/τ_p`).
#[derive(Debug, Clone, PartialEq)]
pub struct PumpPulse {
    pub tau_p: f64,
    pub shape: PumpShape,
}

impl PumpPulse {
    pub fn gaussian(tau_p: f64) -> Self {
        PumpPulse {
            tau_p,
            shape: PumpShape::Gaussian,
        }
    }

    /// Tabulated spectral amplitude on a strictly increasing Ω axis.
    pub fn tabulated(tau_p: f64, omega: Vec<f64>, spectral: Vec<Complex64>) -> Result<Self, BiphotonError> {
        check_table(&omega, &spectral, "spectral")?;
        Ok(PumpPulse {
            tau_p,
            shape: PumpShape::Tabulated(TabulatedPump {
                omega,
                spectral,
                temporal: None,
            }),
        })
    }

    /// Attaches a sampled temporal envelope (needed by the closed-form
    /// temporal correlation for tabulated pumps).
    pub fn with_temporal_profile(mut self, t: Vec<f64>, values: Vec<Complex64>) -> Result<Self, BiphotonError> {
        check_table(&t, &values, "temporal")?;
        match &mut self.shape {
            PumpShape::Tabulated(tab) => {
                tab.temporal = Some((t, values));
                Ok(self)
            }
            PumpShape::Gaussian => Err(BiphotonError::InvalidPump(
                "a Gaussian pump already has an analytic temporal profile".into(),
            )),
        }
    }

    /// Spectral bandwidth `ΔΩ_p = 1/τ_p`.
    pub fn bandwidth(&self) -> f64 {
        1.0 / self.tau_p
    }

    /// Spectral amplitude `α̃_p(Ω)`.
    pub fn amplitude(&self, omega: f64) -> Complex64 {
        match &self.shape {
            PumpShape::Gaussian => {
                let x = omega * self.tau_p;
                Complex64::new(self.tau_p * (-0.5 * x * x).exp(), 0.0)
            }
            PumpShape::Tabulated(t) => interpolate(&t.omega, &t.spectral, omega),
        }
    }

    /// Temporal envelope `α_p(t)` if known.
    pub fn temporal(&self, t: f64) -> Option<Complex64> {
        match &self.shape {
            PumpShape::Gaussian => {
                let x = t / self.tau_p;
                Some(Complex64::new((-0.5 * x * x).exp(), 0.0))
            }
            PumpShape::Tabulated(tab) => tab.temporal.as_ref().map(|(x, y)| interpolate(x, y, t)),
        }
    }

    /// Fourier transform of the pump intensity profile in the spectral
    /// convention used throughout:
    /// `Ĩ_p(Δ) = (1/2π) ∫ dx α̃_p*(x) α̃_p(x + Δ)`.
    ///
    /// For the Gaussian this is `τ_p/(2√π)·exp(−Δ²τ_p²/4)`.
    pub fn intensity_transform(&self, delta: f64) -> Complex64 {
        match &self.shape {
            PumpShape::Gaussian => {
                let x = delta * self.tau_p;
                Complex64::new(self.tau_p / (2.0 * PI.sqrt()) * (-0.25 * x * x).exp(), 0.0)
            }
            PumpShape::Tabulated(t) => {
                let w = &t.omega;
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..w.len() - 1 {
                    let h = w[j + 1] - w[j];
                    let f = |k: usize| t.spectral[k].conj() * self.amplitude(w[k] + delta);
                    acc += (f(j) + f(j + 1)) * (0.5 * h);
                }
                acc / (2.0 * PI)
            }
        }
    }
}

/// Spectral amplitude of the pump at `omega` (free-function form).
pub fn pump_amplitude(pulse: &PumpPulse, omega: f64) -> Complex64 {
    pulse.amplitude(omega)
}

/// A centred uniform axis: `Ω_k = (k − n/2)·step`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub n: usize,
    pub step: f64,
}

impl Axis {
    pub fn new(n: usize, step: f64) -> Result<Self, BiphotonError> {
        if n < 2 || !n.is_power_of_two() {
            return Err(BiphotonError::InvalidGrid(format!("axis count {n} is not an even power of two")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(BiphotonError::InvalidGrid(format!("axis step {step} must be positive")));
        }
        Ok(Axis { n, step })
    }

    pub fn value(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.value(k)).collect()
    }

    /// Index of Ω = 0.
    pub fn center(&self) -> usize {
        self.n / 2
    }

    pub fn min(&self) -> f64 {
        self.value(0)
    }

    pub fn max(&self) -> f64 {
        self.value(self.n - 1)
    }

    /// Same span, twice the sampling density.
    pub fn refined(&self) -> Axis {
        Axis {
            n: 2 * self.n,
            step: 0.5 * self.step,
        }
    }

    /// Same step, twice the span.
    pub fn widened(&self) -> Axis {
        Axis {
            n: 2 * self.n,
            step: self.step,
        }
    }
}

/// Signal × idler frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub s: Axis,
    pub i: Axis,
}

impl FrequencyGrid {
    pub fn new(n_s: usize, step_s: f64, n_i: usize, step_i: f64) -> Result<Self, BiphotonError> {
        Ok(FrequencyGrid {
            s: Axis::new(n_s, step_s)?,
            i: Axis::new(n_i, step_i)?,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.s.n, self.i.n)
    }

    pub fn refined(&self) -> Self {
        FrequencyGrid {
            s: self.s.refined(),
            i: self.i.refined(),
        }
    }

    pub fn widened(&self) -> Self {
        FrequencyGrid {
            s: self.s.widened(),
            i: self.i.widened(),
        }
    }
}

/// Which expression produced a [`JsaGrid`] (or which limit to apply).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Exact,
    Cw,
    Ultrashort,
    Intermediate,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Exact => "exact",
            Regime::Cw => "cw",
            Regime::Ultrashort => "ultrashort",
            Regime::Intermediate => "intermediate",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Regime::Exact),
            "cw" => Ok(Regime::Cw),
            "ultrashort" => Ok(Regime::Ultrashort),
            "intermediate" => Ok(Regime::Intermediate),
            other => Err(format!("unknown regime `{other}` (exact|cw|ultrashort|intermediate)")),
        }
    }
}

/// Sampled joint spectral amplitude.
#[derive(Debug, Clone)]
pub struct JsaGrid {
    pub grid: FrequencyGrid,
    /// ψ(Ω_s[row], Ω_i[col]).
    pub values: Mat<Complex64>,
    pub regime: Regime,
    pub g: f64,
    pub tau_p: f64,
    /// Free-form description of how the grid was produced.
    pub provenance: String,
}

impl JsaGrid {
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.values[(row, col)]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.values.ncols() {
            for i in 0..self.values.nrows() {
                m = m.max(self.values[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        (0..self.values.ncols())
            .all(|j| (0..self.values.nrows()).all(|i| self.values[(i, j)].re.is_finite() && self.values[(i, j)].im.is_finite()))
    }

    /// `max|ψ| ≤ g·max|α̃_p|/√(2π)` (the phase-matching factor is bounded by 1).
    pub fn peak_bound_holds(&self, pulse: &PumpPulse) -> bool {
        let pump_peak = match &pulse.shape {
            PumpShape::Gaussian => pulse.tau_p,
            PumpShape::Tabulated(t) => t.spectral.iter().map(|v| v.norm()).fold(0.0, f64::max),
        };
        self.max_abs() <= self.g * pump_peak / (2.0 * PI).sqrt() * (1.0 + 1e-12)
    }

    /// A copy with every element transformed by `f(row, col, value)`.
    pub fn map(&self, f: impl Fn(usize, usize, Complex64) -> Complex64) -> JsaGrid {
        JsaGrid {
            values: Mat::from_fn(self.values.nrows(), self.values.ncols(), |i, j| f(i, j, self.values[(i, j)])),
            ..self.clone()
        }
    }

    /// Every `stride_s`-th row and `stride_i`-th column, on the matching
    /// coarser grid.  Strides must be powers of two no larger than the axes.
    pub fn decimated(&self, stride_s: usize, stride_i: usize) -> Result<JsaGrid, BiphotonError> {
        let (ns, ni) = self.grid.shape();
        for (st, n) in [(stride_s, ns), (stride_i, ni)] {
            if st == 0 || !st.is_power_of_two() || st > n / 2 && st != 1 {
                return Err(BiphotonError::InvalidGrid(format!("stride {st} for an axis of {n} samples")));
            }
        }
        let grid = FrequencyGrid::new(ns / stride_s, self.grid.s.step * stride_s as f64, ni / stride_i, self.grid.i.step * stride_i as f64)?;
        Ok(JsaGrid {
            grid,
            values: Mat::from_fn(grid.s.n, grid.i.n, |r, c| self.values[(r * stride_s, c * stride_i)]),
            ..self.clone()
        })
    }

    /// Plain-text export: `#` header lines with axis metadata, then one line
    /// per Ω_s row holding `Re Im` pairs for every Ω_i column.
    pub fn write_text(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# joint spectral amplitude psi(Omega_s, Omega_i)")?;
        writeln!(w, "# regime = {}", self.regime)?;
        writeln!(w, "# provenance = {}", self.provenance)?;
        writeln!(w, "# g = {:e}", self.g)?;
        writeln!(w, "# tau_p_s = {:e}", self.tau_p)?;
        writeln!(w, "# rows = Omega_s: n = {}, step_rad_s = {:e}, first_rad_s = {:e}", self.grid.s.n, self.grid.s.step, self.grid.s.min())?;
        writeln!(w, "# cols = Omega_i: n = {}, step_rad_s = {:e}, first_rad_s = {:e}", self.grid.i.n, self.grid.i.step, self.grid.i.min())?;
        let mut line = String::new();
        for r in 0..self.values.nrows() {
            line.clear();
            for c in 0..self.values.ncols() {
                let v = self.values[(r, c)];
                if c > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{:e} {:e}", v.re, v.im));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Parameters of the automatic grid rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRule {
    /// Pump support kept on each side, in units of the pump bandwidth.
    pub pump_widths: f64,
    /// Phase-matching support kept on each side, in units of Ω_gvs.
    pub sinc_span: f64,
    /// Samples per pump bandwidth and per half-lobe of each sinc.
    pub samples_per_feature: f64,
    pub min_count: usize,
    pub max_count: usize,
}

impl Default for GridRule {
    fn default() -> Self {
        GridRule {
            pump_widths: 4.0,
            sinc_span: 8.0 * PI,
            samples_per_feature: 16.0,
            min_count: 64,
            max_count: 4096,
        }
    }
}

/// Chooses a grid that holds the pump envelope (±4 ΔΩ_p, mapped onto each
/// axis through the phase-matching line) plus eight sinc lobes of width
/// π·Ω_gvs, with steps resolving both ΔΩ_p/2 and each sinc half-lobe
/// (`π·Ω_gvm` along Ω_s, `π·Ω′_gvs` along Ω_i) by 16 samples.  Counts are
/// rounded up to powers of two keeping the step, so spans only grow.
pub fn default_grid(summary: &PhaseMatchSummary, pulse: &PumpPulse) -> Result<FrequencyGrid, BiphotonError> {
    grid_with_rule(summary, pulse, &GridRule::default())
}

pub fn grid_with_rule(summary: &PhaseMatchSummary, pulse: &PumpPulse, rule: &GridRule) -> Result<FrequencyGrid, BiphotonError> {
    let dwp = pulse.bandwidth();
    let eta = summary.eta.abs();
    let sinc_ext = rule.sinc_span * summary.omega_gvs.abs();
    let ext_s = rule.pump_widths * dwp / (1.0 - eta) + sinc_ext;
    let ext_i = eta * rule.pump_widths * dwp / (1.0 - eta) + sinc_ext;
    let lobe = |w: f64| PI * w.abs() / rule.samples_per_feature;
    let h_s = (0.5 * dwp).min(lobe(summary.omega_gvm));
    let h_i = (0.5 * dwp).min(lobe(summary.omega_gvs_prime));
    let count = |ext: f64, h: f64, axis: &'static str| {
        let n = next_pow2(2.0 * ext / h).max(rule.min_count);
        if n > rule.max_count {
            Err(BiphotonError::GridCap {
                axis,
                needed: n,
                cap: rule.max_count,
            })
        } else {
            Ok(n)
        }
    };
    FrequencyGrid::new(count(ext_s, h_s, "signal")?, h_s, count(ext_i, h_i, "idler")?, h_i)
}

fn prefactor(g: f64) -> f64 {
    g / (2.0 * PI).sqrt()
}

fn fill(grid: &FrequencyGrid, f: impl Fn(f64, f64) -> Complex64) -> Mat<Complex64> {
    let ws = grid.s.values();
    let wi = grid.i.values();
    Mat::from_fn(grid.s.n, grid.i.n, |r, c| f(ws[r], wi[c]))
}

/// Exact low-gain amplitude with the linear or full Sellmeier mismatch.
pub fn jsa_exact(
    scenario: &CrystalScenario,
    summary: &PhaseMatchSummary,
    pulse: &PumpPulse,
    grid: &FrequencyGrid,
    mode: DispersionMode,
) -> Result<JsaGrid, BiphotonError> {
    let a = prefactor(scenario.g);
    let values = match mode {
        DispersionMode::Linear => fill(grid, |ws, wi| {
            let s = ws / summary.omega_gvm + wi / summary.omega_gvs_prime;
            pulse.amplitude(ws + wi) * phase_matching(s) * a
        }),
        DispersionMode::Full => {
            // Range-check the extreme frequencies once, then evaluate the
            // Sellmeier wavenumbers along each axis and on the pump sums.
            for (os, oi) in [
                (grid.s.min(), grid.i.min()),
                (grid.s.max(), grid.i.max()),
                (grid.s.min(), grid.i.max()),
                (grid.s.max(), grid.i.min()),
            ] {
                phase_mismatch(summary, scenario, os, oi, DispersionMode::Full)?;
            }
            let ks: Vec<f64> = grid
                .s
                .values()
                .iter()
                .map(|w| scenario.material_signal.k_unchecked(summary.omega_s0 + w))
                .collect();
            let ki: Vec<f64> = grid
                .i
                .values()
                .iter()
                .map(|w| scenario.material_idler.k_unchecked(summary.omega_i0 + w))
                .collect();
            let kg = scenario.grating_order as f64 * 2.0 * PI / scenario.poling_period;
            let ws = grid.s.values();
            let wi = grid.i.values();
            Mat::from_fn(grid.s.n, grid.i.n, |r, c| {
                let kp = scenario.material_pump.k_unchecked(summary.omega_p0 + ws[r] + wi[c]);
                let s = -0.5 * scenario.l_c * (ks[r] - ki[c] - kp + kg);
                pulse.amplitude(ws[r] + wi[c]) * phase_matching(s) * a
            })
        }
    };
    Ok(JsaGrid {
        grid: *grid,
        values,
        regime: Regime::Exact,
        g: scenario.g,
        tau_p: pulse.tau_p,
        provenance: format!("exact amplitude, {mode:?} mismatch"),
    })
}

/// Which frequency the long-pump limit keeps in the phase-matching factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CwForm {
    /// `sinc(Ω_s/Ω_gvs)·e^{−iΩ_s/Ω_gvs}`.
    Signal,
    /// `sinc(Ω_i/Ω_gvs)·e^{+iΩ_i/Ω_gvs}`; the more accurate of the two
    /// because the idler stays within the phase-matching band.
    #[default]
    Idler,
}

/// Long-pump limit: the narrow pump forces `Ω_s ≈ −Ω_i` inside the
/// phase-matching factor.
pub fn jsa_cw_limit(summary: &PhaseMatchSummary, pulse: &PumpPulse, grid: &FrequencyGrid, g: f64, form: CwForm) -> JsaGrid {
    let a = prefactor(g);
    let values = fill(grid, |ws, wi| {
        let s = match form {
            CwForm::Signal => -ws / summary.omega_gvs,
            CwForm::Idler => wi / summary.omega_gvs,
        };
        pulse.amplitude(ws + wi) * phase_matching(s) * a
    });
    JsaGrid {
        grid: *grid,
        values,
        regime: Regime::Cw,
        g,
        tau_p: pulse.tau_p,
        provenance: format!("long-pump limit, {form:?} form"),
    }
}

/// Which frequency parameterises the pump factor in the short-pump limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PumpParam {
    /// `α̃_p[Ω_s(1−η)]`.
    #[default]
    Signal,
    /// `α̃_p[−Ω_i(1−η)/η]`.
    Idler,
}

/// Short-pump limit: the broad pump is evaluated on the phase-matching line
/// `Ω_i = −η Ω_s`, the phase-matching factor is kept in full.
pub fn jsa_ultrashort_limit(
    summary: &PhaseMatchSummary,
    pulse: &PumpPulse,
    grid: &FrequencyGrid,
    g: f64,
    param: PumpParam,
) -> Result<JsaGrid, BiphotonError> {
    let eta = summary.eta;
    if param == PumpParam::Idler && eta == 0.0 {
        return Err(BiphotonError::DegenerateEta("idler-parameterised ultrashort"));
    }
    let a = prefactor(g);
    let values = fill(grid, |ws, wi| {
        let arg = match param {
            PumpParam::Signal => ws * (1.0 - eta),
            PumpParam::Idler => -wi * (1.0 - eta) / eta,
        };
        let s = ws / summary.omega_gvm + wi / summary.omega_gvs_prime;
        pulse.amplitude(arg) * phase_matching(s) * a
    });
    Ok(JsaGrid {
        grid: *grid,
        values,
        regime: Regime::Ultrashort,
        g,
        tau_p: pulse.tau_p,
        provenance: format!("short-pump limit, {param:?} pump parameterisation"),
    })
}

/// Factor vectors of the intermediate-pump limit:
/// `u(Ω_s) = g/√(2π)·α̃_p(Ω_s)·e^{iΩ_s/Ω_gvm}` and
/// `v(Ω_i) = sinc(Ω_i/Ω_gvs)·e^{iΩ_i/Ω_gvs}`.
pub fn intermediate_factors(summary: &PhaseMatchSummary, pulse: &PumpPulse, grid: &FrequencyGrid, g: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let a = prefactor(g);
    let u = grid
        .s
        .values()
        .iter()
        .map(|&w| pulse.amplitude(w) * Complex64::from_polar(a, w / summary.omega_gvm))
        .collect();
    let v = grid
        .i
        .values()
        .iter()
        .map(|&w| Complex64::from_polar(sinc(w / summary.omega_gvs), w / summary.omega_gvs))
        .collect();
    (u, v)
}

/// Intermediate-pump limit, built as the outer product `u ⊗ v` so the
/// factorisation is exact by construction.
pub fn jsa_intermediate_limit(summary: &PhaseMatchSummary, pulse: &PumpPulse, grid: &FrequencyGrid, g: f64) -> JsaGrid {
    let (u, v) = intermediate_factors(summary, pulse, grid, g);
    JsaGrid {
        grid: *grid,
        values: Mat::from_fn(u.len(), v.len(), |r, c| u[r] * v[c]),
        regime: Regime::Intermediate,
        g,
        tau_p: pulse.tau_p,
        provenance: "intermediate-pump factorised limit".into(),
    }
}

/// Dispatches on `regime` with the default form of each limit.
pub fn jsa_for_regime(
    regime: Regime,
    scenario: &CrystalScenario,
    summary: &PhaseMatchSummary,
    pulse: &PumpPulse,
    grid: &FrequencyGrid,
    mode: DispersionMode,
) -> Result<JsaGrid, BiphotonError> {
    Ok(match regime {
        Regime::Exact => jsa_exact(scenario, summary, pulse, grid, mode)?,
        Regime::Cw => jsa_cw_limit(summary, pulse, grid, scenario.g, CwForm::default()),
        Regime::Ultrashort => jsa_ultrashort_limit(summary, pulse, grid, scenario.g, PumpParam::default())?,
        Regime::Intermediate => jsa_intermediate_limit(summary, pulse, grid, scenario.g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpm::solve_central_frequencies;

    fn setup(tau: f64) -> (CrystalScenario, PhaseMatchSummary, PumpPulse) {
        let sc = crate::shipped::point_a().with_pump_tau(tau);
        let s = solve_central_frequencies(&sc).unwrap();
        (sc, s, PumpPulse::gaussian(tau))
    }

    #[test]
    fn gaussian_pump_values() {
        let p = PumpPulse::gaussian(2e-12);
        assert_eq!(p.amplitude(0.0).re, 2e-12);
        let v = p.amplitude(1.0 / 2e-12).re;
        assert!((v - 2e-12 * (-0.5f64).exp()).abs() < 1e-27);
        assert_eq!(p.bandwidth(), 0.5e12);
    }

    #[test]
    fn tabulated_pump_matches_gaussian_on_nodes() {
        let g = PumpPulse::gaussian(1e-12);
        let w: Vec<f64> = (-200..=200).map(|k| k as f64 * 2.5e10).collect();
        let a: Vec<Complex64> = w.iter().map(|&x| g.amplitude(x)).collect();
        let t = PumpPulse::tabulated(1e-12, w.clone(), a).unwrap();
        for &x in w.iter().step_by(7) {
            let (u, v) = (t.amplitude(x).re, g.amplitude(x).re);
            assert!((u - v).abs() <= 1e-6 * g.tau_p, "{x}");
        }
        assert_eq!(t.amplitude(1e14), Complex64::new(0.0, 0.0));
        let (it, ig) = (t.intensity_transform(3e11), g.intensity_transform(3e11));
        assert!((it - ig).norm() / ig.norm() < 1e-3);
    }

    #[test]
    fn tabulated_pump_rejects_unsorted_axis() {
        let r = PumpPulse::tabulated(1e-12, vec![0.0, 0.0, 1.0], vec![Complex64::new(1.0, 0.0); 3]);
        assert!(r.is_err());
    }

    #[test]
    fn axis_layout() {
        let a = Axis::new(8, 0.5).unwrap();
        assert_eq!(a.value(a.center()), 0.0);
        assert_eq!(a.min(), -2.0);
        assert_eq!(a.max(), 1.5);
        assert!(Axis::new(12, 1.0).is_err());
        assert!(Axis::new(8, 0.0).is_err());
    }

    #[test]
    fn centre_value_and_peak_bound() {
        let (sc, s, p) = setup(1.1e-12);
        let grid = default_grid(&s, &p).unwrap();
        for mode in [DispersionMode::Linear, DispersionMode::Full] {
            let j = jsa_exact(&sc, &s, &p, &grid, mode).unwrap();
            let c = j.at(grid.s.center(), grid.i.center());
            assert!((c.norm() - sc.g * p.tau_p / (2.0 * PI).sqrt()).abs() < 1e-9 * c.norm());
            assert!(j.peak_bound_holds(&p));
        }
    }

    #[test]
    fn cw_forms_coincide_on_antidiagonal() {
        let (_, s, p) = setup(353e-12);
        let grid = FrequencyGrid::new(64, 1e9, 64, 1e9).unwrap();
        let a = jsa_cw_limit(&s, &p, &grid, 0.01, CwForm::Signal);
        let b = jsa_cw_limit(&s, &p, &grid, 0.01, CwForm::Idler);
        for k in 1..64 {
            // Ω_s = (k−32)h, Ω_i = (32−k)h  ⇒ column 64−k.
            let (u, v) = (a.at(k, 64 - k), b.at(k, 64 - k));
            assert!((u - v).norm() <= 1e-14 * u.norm().max(1e-300));
        }
    }

    #[test]
    fn ultrashort_pump_parameterisations_agree_on_line() {
        let (_, s, p) = setup(0.03e-12);
        let eta = s.eta;
        for k in -5..=5 {
            let ws = k as f64 * 1e12;
            let wi = -eta * ws;
            let a = p.amplitude(ws * (1.0 - eta));
            let b = p.amplitude(-wi * (1.0 - eta) / eta);
            assert!((a - b).norm() <= 1e-12 * p.tau_p);
        }
    }

    #[test]
    fn ultrashort_zero_signal_column() {
        let (_, s, p) = setup(0.03e-12);
        let grid = default_grid(&s, &p).unwrap();
        let j = jsa_ultrashort_limit(&s, &p, &grid, 0.01, PumpParam::Signal).unwrap();
        let r = grid.s.center();
        for (c, wi) in grid.i.values().into_iter().enumerate().step_by(17) {
            let expect = 0.01 / (2.0 * PI).sqrt() * p.tau_p * sinc(wi / s.omega_gvs_prime).abs();
            assert!((j.at(r, c).norm() - expect).abs() <= 1e-12 * p.tau_p);
        }
    }

    #[test]
    fn grid_rule_properties() {
        let (_, s, p) = setup(353e-12);
        let g = default_grid(&s, &p).unwrap();
        assert!(PI * s.omega_gvs / g.i.step >= 16.0);
        let (_, s, p) = setup(1.1e-12);
        let g = default_grid(&s, &p).unwrap();
        assert!(g.s.n as f64 * g.s.step >= 8.0 * p.bandwidth());
        let (_, s, p) = setup(0.03e-12);
        let g = default_grid(&s, &p).unwrap();
        assert!(g.s.n <= 4096 && g.i.n <= 4096);
        let (_, s, p) = setup(1e-16);
        assert!(matches!(default_grid(&s, &p), Err(BiphotonError::GridCap { .. })));
    }

    #[test]
    fn regime_parse_roundtrip() {
        for r in [Regime::Exact, Regime::Cw, Regime::Ultrashort, Regime::Intermediate] {
            assert_eq!(r.to_string().parse::<Regime>().unwrap(), r);
        }
        assert!("auto".parse::<Regime>().is_err());
    }
}

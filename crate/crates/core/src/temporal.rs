//! Temporal biphoton correlation φ(t̄_s, t̄_i).
//!
//! Times are barred: measured from the exit times `t_As`, `t_Ai` of the
//! signal and idler wavepacket centres.  With the linear phase mismatch the
//! correlation has the closed form
//!
//! ```text
//! φ = g e^{i k_s l_c}/(2τ_gvs) · α_p(t̄_s + η(t̄_s − t̄_i)/(1−η)) · Rect((t̄_s − t̄_i)/(2τ_gvs))
//! ```
//!
//! and it is also obtained numerically as the 2-D Fourier transform of ψ
//! (`∫dΩ_s/√2π ∫dΩ_i/√2π e^{−i(Ω_s t_s + Ω_i t_i)} e^{i k_s(Ω_s) l_c} ψ`).
//! The constant phase `e^{i k_s l_c}` is carried as metadata only.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::biphoton::{Axis, BiphotonError, FrequencyGrid, JsaGrid, PumpPulse};
use crate::numeric::next_pow2;
use crate::qpm::PhaseMatchSummary;
use crate::schmidt::{kappa_svd_matrix, SchmidtError};

#[derive(Debug, Error)]
pub enum TemporalError {
    #[error("pump has no temporal profile; attach one to the tabulated pump")]
    NoTemporalProfile,
    #[error("invalid time axis: {0}")]
    InvalidAxis(String),
    #[error("{0}")]
    Grid(#[from] BiphotonError),
    #[error(transparent)]
    Schmidt(#[from] SchmidtError),
}

/// Uniform centred time axis, `t_k = (k − n/2)·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAxis {
    pub n: usize,
    pub step: f64,
}

impl TimeAxis {
    pub fn new(n: usize, step: f64) -> Result<Self, TemporalError> {
        if n < 2 || !(step.is_finite() && step > 0.0) {
            return Err(TemporalError::InvalidAxis(format!("n = {n}, step = {step}")));
        }
        Ok(TimeAxis { n, step })
    }

    pub fn value(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.value(k)).collect()
    }

    pub fn center(&self) -> usize {
        self.n / 2
    }

    /// Index of the sample closest to `t` (clamped).
    pub fn nearest(&self, t: f64) -> usize {
        let k = (t / self.step).round() + (self.n / 2) as f64;
        k.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalMethod {
    Analytic,
    Fft,
}

/// Sampled φ on barred times; rows run over t̄_s, columns over t̄_i.
#[derive(Debug, Clone)]
pub struct TemporalGrid {
    pub ts: TimeAxis,
    pub ti: TimeAxis,
    pub values: Mat<Complex64>,
    pub method: TemporalMethod,
    /// Absolute exit times the barred axes are measured from, s.
    pub t_as: f64,
    pub t_ai: f64,
    /// Global phase `k_s l_c` (mod 2π), excluded from `values`.
    pub constant_phase: f64,
}

impl TemporalGrid {
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.values.ncols() {
            for i in 0..self.values.nrows() {
                m = m.max(self.values[(i, j)].norm());
            }
        }
        m
    }

    /// `∬|φ|² dt̄_s dt̄_i` (rectangle rule; the integrand vanishes at the edges).
    pub fn norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.values.ncols() {
            for i in 0..self.values.nrows() {
                s += self.values[(i, j)].norm_sqr();
            }
        }
        s * self.ts.step * self.ti.step
    }

    /// Largest `|φ|` farther than `margin_samples` grid steps outside the
    /// band `|t̄_s − t̄_i| ≤ τ_gvs`, relative to the peak.
    pub fn leakage_outside_band(&self, tau_gvs: f64, margin_samples: f64) -> f64 {
        let ts = self.ts.values();
        let ti = self.ti.values();
        let mut worst = 0.0f64;
        for (c, &b) in ti.iter().enumerate() {
            for (r, &a) in ts.iter().enumerate() {
                if (a - b).abs() > tau_gvs.abs() * (1.0 + 1e-12) + margin_samples * self.ts.step.max(self.ti.step) {
                    worst = worst.max(self.values[(r, c)].norm());
                }
            }
        }
        worst / self.max_abs()
    }

    /// Temporal Schmidt number from the SVD of φ.
    pub fn kappa_svd(&self) -> Result<f64, TemporalError> {
        Ok(kappa_svd_matrix(&self.values, self.ts.step * self.ti.step)?.kappa)
    }
}

/// `Rect(x)` = 1 on the half-open interval `[−1/2, 1/2)`, 0 elsewhere.
pub fn rect(x: f64) -> f64 {
    if (-0.5..0.5).contains(&x) {
        1.0
    } else {
        0.0
    }
}

/// Default axes: both spanning ±1.5·max(τ_gvs, 4τ_p) with `n_s × n_i` samples.
pub fn default_time_axes(summary: &PhaseMatchSummary, pulse: &PumpPulse, n_s: usize, n_i: usize) -> Result<(TimeAxis, TimeAxis), TemporalError> {
    let half = 1.5 * summary.tau_gvs.abs().max(4.0 * pulse.tau_p);
    Ok((TimeAxis::new(n_s, 2.0 * half / n_s as f64)?, TimeAxis::new(n_i, 2.0 * half / n_i as f64)?))
}

/// Closed-form correlation on the given barred-time axes.
pub fn phi_analytic(summary: &PhaseMatchSummary, pulse: &PumpPulse, g: f64, ts: TimeAxis, ti: TimeAxis) -> Result<TemporalGrid, TemporalError> {
    pulse.temporal(0.0).ok_or(TemporalError::NoTemporalProfile)?;
    let eta = summary.eta;
    let tg = summary.tau_gvs;
    let pre = g / (2.0 * tg);
    let a = ts.values();
    let b = ti.values();
    let values = Mat::from_fn(ts.n, ti.n, |r, c| {
        let d = a[r] - b[c];
        let box_ = rect(d / (2.0 * tg));
        if box_ == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            pulse.temporal(a[r] + eta * d / (1.0 - eta)).unwrap_or_default() * pre
        }
    });
    Ok(TemporalGrid {
        ts,
        ti,
        values,
        method: TemporalMethod::Analytic,
        t_as: summary.t_as,
        t_ai: summary.t_ai,
        constant_phase: (summary.k_s0 * summary.l_c).rem_euclid(2.0 * PI),
    })
}

/// Preferred and minimum number of samples across the `2τ_gvs` box.
pub const FFT_BOX_SAMPLES: f64 = 256.0;
pub const FFT_BOX_SAMPLES_MIN: f64 = 90.0;

/// Frequency grid whose Fourier-conjugate time grid resolves φ.
///
/// The time window spans `t̄_s ∈ ±(3τ_p + τ_gvm)` and
/// `t̄_i ∈ ±(3τ_p + τ_gvm + 1.25τ_gvs)` (a little room outside the box).
/// Steps resolve the pump envelope along each axis by four samples per
/// `τ_p` and the box by [`FFT_BOX_SAMPLES`]; when that exceeds `max_count`
/// the count is capped, provided the box still gets
/// [`FFT_BOX_SAMPLES_MIN`] samples so that Gibbs ringing at its edges stays
/// local.
pub fn fft_grid(summary: &PhaseMatchSummary, pulse: &PumpPulse, max_count: usize) -> Result<FrequencyGrid, TemporalError> {
    let eta = summary.eta.abs();
    let tp = pulse.tau_p;
    let tgvm = summary.tau_gvm.abs();
    let box_w = 2.0 * summary.tau_gvs.abs();
    let half_s = 3.0 * tp + tgvm;
    let half_i = 3.0 * tp + tgvm + 1.25 * summary.tau_gvs.abs();
    let pump_s = tp * (1.0 - eta) / 4.0;
    let pump_i = if eta > 0.0 { tp * (1.0 - eta) / (4.0 * eta) } else { f64::INFINITY };
    let count = |half: f64, pump_dt: f64, axis: &'static str| {
        let wanted = next_pow2(2.0 * half / pump_dt.min(box_w / FFT_BOX_SAMPLES)).max(64);
        let n = wanted.min(max_count);
        let dt = 2.0 * half / n as f64;
        if dt > pump_dt || box_w / dt < FFT_BOX_SAMPLES_MIN {
            let needed = next_pow2(2.0 * half / pump_dt.min(box_w / FFT_BOX_SAMPLES_MIN));
            Err(BiphotonError::GridCap { axis, needed, cap: max_count })
        } else {
            Ok(n)
        }
    };
    let n_s = count(half_s, pump_s, "signal")?;
    let n_i = count(half_i, pump_i, "idler")?;
    // Period of the conjugate time axis = window width: dΩ = 2π/(2·half).
    Ok(FrequencyGrid {
        s: Axis::new(n_s, PI / half_s)?,
        i: Axis::new(n_i, PI / half_i)?,
    })
}

/// In-place centred DFT of one line: `X_k = Σ_m x_m e^{−i Ω_m t_k}` with
/// both index sets centred on `n/2` (requires `n` divisible by 4 for the
/// `(−1)^{m+k}` shift to be exact; powers of two ≥ 4 qualify).
fn centered_dft(buf: &mut [Complex64], fft: &dyn rustfft::Fft<f64>) {
    for (m, v) in buf.iter_mut().enumerate() {
        if m % 2 == 1 {
            *v = -*v;
        }
    }
    fft.process(buf);
    for (k, v) in buf.iter_mut().enumerate() {
        if k % 2 == 1 {
            *v = -*v;
        }
    }
}

/// Numerical correlation: applies the propagation phase, then a centred 2-D
/// DFT with the `1/√(2π)` per-axis convention.
///
/// The linear part of `e^{i k_s(Ω_s) l_c}` together with the barred-time
/// origins turns into the factor `e^{−iΩ_s τ_gvm − iΩ_i τ′_gvs}`.
pub fn phi_fft(jsa: &JsaGrid, summary: &PhaseMatchSummary) -> Result<TemporalGrid, TemporalError> {
    let (ns, ni) = jsa.grid.shape();
    if ns < 4 || ni < 4 {
        return Err(TemporalError::InvalidAxis("FFT axes need at least 4 samples".into()));
    }
    let ws = jsa.grid.s.values();
    let wi = jsa.grid.i.values();
    let mut m = Mat::from_fn(ns, ni, |r, c| {
        jsa.values[(r, c)] * Complex64::from_polar(1.0, -ws[r] * summary.tau_gvm - wi[c] * summary.tau_gvs_prime)
    });
    let mut planner = FftPlanner::<f64>::new();
    let fs = planner.plan_fft_forward(ns);
    let fi = planner.plan_fft_forward(ni);
    let mut buf = vec![Complex64::new(0.0, 0.0); ns];
    for c in 0..ni {
        for r in 0..ns {
            buf[r] = m[(r, c)];
        }
        centered_dft(&mut buf, fs.as_ref());
        for r in 0..ns {
            m[(r, c)] = buf[r];
        }
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); ni];
    let scale = jsa.grid.s.step * jsa.grid.i.step / (2.0 * PI);
    for r in 0..ns {
        for c in 0..ni {
            buf[c] = m[(r, c)];
        }
        centered_dft(&mut buf, fi.as_ref());
        for c in 0..ni {
            m[(r, c)] = buf[c] * scale;
        }
    }
    Ok(TemporalGrid {
        ts: TimeAxis::new(ns, 2.0 * PI / (ns as f64 * jsa.grid.s.step))?,
        ti: TimeAxis::new(ni, 2.0 * PI / (ni as f64 * jsa.grid.i.step))?,
        values: m,
        method: TemporalMethod::Fft,
        t_as: summary.t_as,
        t_ai: summary.t_ai,
        constant_phase: (summary.k_s0 * summary.l_c).rem_euclid(2.0 * PI),
    })
}

/// Pump regime classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeClass {
    Cw,
    Intermediate,
    Ultrashort,
    Crossover,
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeClass::Cw => "cw",
            RegimeClass::Intermediate => "intermediate",
            RegimeClass::Ultrashort => "ultrashort",
            RegimeClass::Crossover => "crossover",
        })
    }
}

impl RegimeClass {
    /// The JSA limit matching this class, if any.
    pub fn limit(&self) -> Option<crate::biphoton::Regime> {
        use crate::biphoton::Regime;
        match self {
            RegimeClass::Cw => Some(Regime::Cw),
            RegimeClass::Intermediate => Some(Regime::Intermediate),
            RegimeClass::Ultrashort => Some(Regime::Ultrashort),
            RegimeClass::Crossover => None,
        }
    }
}

/// Boundaries: cw above `τ_p/τ′_gvs = 5`; ultrashort below `τ_p/τ_gvm = 0.2`;
/// intermediate for `τ_p/τ′_gvs < 0.2` with `τ_p/τ_gvm > 3`.
pub const CW_MIN_RATIO: f64 = 5.0;
pub const ULTRASHORT_MAX_RATIO: f64 = 0.2;
pub const INTERMEDIATE_MAX_PRIME_RATIO: f64 = 0.2;
pub const INTERMEDIATE_MIN_GVM_RATIO: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub regime: RegimeClass,
    /// τ_p/τ′_gvs
    pub ratio_gvs_prime: f64,
    /// τ_p/|τ_gvm|
    pub ratio_gvm: f64,
    pub narrative: String,
}

pub fn regime_report(summary: &PhaseMatchSummary, pulse: &PumpPulse) -> RegimeReport {
    let tp = pulse.tau_p;
    let r_prime = tp / summary.tau_gvs_prime.abs();
    let r_gvm = tp / summary.tau_gvm.abs();
    let ps = 1e12;
    let (regime, narrative) = if r_prime > CW_MIN_RATIO {
        (
            RegimeClass::Cw,
            format!(
                "pump much longer than the transit time: twins are delayed by at most ±{:.3} ps relative to each other while their common emission time spreads over the pump ({:.3} ps)",
                summary.tau_gvs * ps,
                tp * ps
            ),
        )
    } else if r_gvm < ULTRASHORT_MAX_RATIO {
        (
            RegimeClass::Ultrashort,
            format!(
                "pump shorter than the pump–signal walk-off: the signal arrival is predicted from the idler as t̄_s ≈ η·t̄_i (η = {:.4}), within ±{:.3} ps",
                summary.eta,
                summary.tau_gvm * ps
            ),
        )
    } else if r_prime < INTERMEDIATE_MAX_PRIME_RATIO && r_gvm > INTERMEDIATE_MIN_GVM_RATIO {
        (
            RegimeClass::Intermediate,
            format!(
                "pump between the two time scales: signal locked to the pump ({:.3} ps), idler spread uniformly over ±{:.3} ps — nearly factorable",
                tp * ps,
                summary.tau_gvs * ps
            ),
        )
    } else {
        (RegimeClass::Crossover, "between regimes; use the exact amplitude".to_string())
    };
    RegimeReport {
        regime,
        ratio_gvs_prime: r_prime,
        ratio_gvm: r_gvm,
        narrative,
    }
}

//! Quasi-phase matching in the counterpropagating geometry.
//!
//! The forward signal and the backward idler are phase matched by the grating
//! momentum `m·2π/Λ`:
//!
//! ```text
//! D₀(ω_s) = k_s(ω_s) − k_i(ω_p − ω_s) − k_p(ω_p) + m·2π/Λ = 0
//! ```
//!
//! Solving it fixes the central frequencies, and the group slownesses at the
//! root give every characteristic scale used elsewhere in the crate: the short
//! group-velocity-mismatch time `τ_gvm`, the long transit times `τ′_gvs` and
//! `τ_gvs`, and their ratio `η`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::dispersion::{nm_from_omega, omega_from_nm, DispersionError, Dispersive, Material};

/// Number of sampling steps of the bracketing scan over λ_s.
pub const ROOT_SCAN_STEPS: usize = 2000;

/// Convergence target `|D₀|·l_c` of the root polish.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Gain at which the mirrorless oscillator reaches threshold; the low-gain
/// model is meaningless at or above it.
pub const MOPO_THRESHOLD_GAIN: f64 = PI / 2.0;

#[derive(Debug, Error)]
pub enum QpmError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("no phase-matched point: D₀ has no sign change for λ_s in [{lo_nm:.2}, {hi_nm:.2}] nm")]
    NoRoot { lo_nm: f64, hi_nm: f64 },
    #[error("multiple phase-matched points (λ_s/λ_i nm: {}); restrict the signal search window",
        .roots_nm.iter().map(|(s, i)| format!("{s:.2}/{i:.2}")).collect::<Vec<_>>().join(", "))]
    MultipleRoots { roots_nm: Vec<(f64, f64)> },
    #[error("search window is empty once signal and idler material ranges are applied")]
    EmptyWindow,
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse scenario{}: {message}", .path.as_deref().map(|p| format!(" {p}")).unwrap_or_default())]
    Parse {
        path: Option<String>,
        message: String,
    },
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
}

/// Whether the phase mismatch uses the full Sellmeier wavenumbers or the
/// first-order expansion around the central frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DispersionMode {
    Full,
    #[default]
    Linear,
}

/// The single input record of every computation: crystal, poling and pump.
#[derive(Debug, Clone)]
pub struct CrystalScenario {
    pub material_pump: Arc<dyn Dispersive>,
    pub material_signal: Arc<dyn Dispersive>,
    pub material_idler: Arc<dyn Dispersive>,
    /// Crystal length, m.
    pub l_c: f64,
    /// Poling period Λ, m.
    pub poling_period: f64,
    /// Pump central wavelength, m.
    pub lambda_p: f64,
    /// Dimensionless parametric gain.
    pub g: f64,
    /// Pump duration τ_p, s.
    pub pump_tau: f64,
    /// Grating order m used in the momentum balance.
    pub grating_order: i32,
    /// Optional restriction of the λ_s root search, nm.
    pub signal_window_nm: Option<(f64, f64)>,
}

impl CrystalScenario {
    /// Type-0 scenario: all three waves see the same material branch.
    pub fn type0(
        material: Arc<dyn Dispersive>,
        l_c: f64,
        poling_period: f64,
        lambda_p: f64,
        g: f64,
        pump_tau: f64,
    ) -> Result<Self, QpmError> {
        let s = CrystalScenario {
            material_pump: material.clone(),
            material_signal: material.clone(),
            material_idler: material,
            l_c,
            poling_period,
            lambda_p,
            g,
            pump_tau,
            grating_order: 1,
            signal_window_nm: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), QpmError> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(QpmError::InvalidScenario(format!("{what} must be positive and finite, got {v}")))
            }
        };
        positive(self.l_c, "crystal length")?;
        positive(self.poling_period, "poling period")?;
        positive(self.lambda_p, "pump wavelength")?;
        positive(self.g, "gain g")?;
        positive(self.pump_tau, "pump duration")?;
        if self.grating_order == 0 {
            return Err(QpmError::InvalidScenario("grating order must be non-zero".into()));
        }
        if let Some((a, b)) = self.signal_window_nm {
            if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
                return Err(QpmError::InvalidScenario(format!("bad signal window [{a}, {b}] nm")));
            }
        }
        Ok(())
    }

    /// Same scenario with a different pump duration.
    pub fn with_pump_tau(&self, pump_tau: f64) -> Self {
        CrystalScenario {
            pump_tau,
            ..self.clone()
        }
    }

    /// True when `g ≥ π/2`, where the first-order (low-gain) model is invalid.
    pub fn low_gain_violated(&self) -> bool {
        self.g >= MOPO_THRESHOLD_GAIN
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.low_gain_violated() {
            w.push(format!(
                "gain g = {} is at or above the oscillation threshold π/2; the low-gain model is not valid",
                self.g
            ));
        }
        w
    }

    pub fn omega_p0(&self) -> f64 {
        omega_from_nm(self.lambda_p * 1e9)
    }

    fn grating_k(&self) -> f64 {
        self.grating_order as f64 * 2.0 * PI / self.poling_period
    }

    /// `D₀(ω_s)` without range checks.
    fn d0(&self, omega_s: f64) -> f64 {
        let wp = self.omega_p0();
        self.material_signal.k_unchecked(omega_s) - self.material_idler.k_unchecked(wp - omega_s)
            - self.material_pump.k_unchecked(wp)
            + self.grating_k()
    }

    /// Loads a scenario file; the `material*` entries are paths relative to
    /// the scenario file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, QpmError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| QpmError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, Some(path.display().to_string()), |m| {
            let p: PathBuf = base.join(m);
            Ok(Material::load(p)?)
        })
    }

    /// Parses scenario text, resolving material references with `resolve`.
    pub fn from_toml_str(
        text: &str,
        resolve: impl Fn(&str) -> Result<Material, QpmError>,
    ) -> Result<Self, QpmError> {
        Self::parse(text, None, resolve)
    }

    fn parse(
        text: &str,
        path: Option<String>,
        resolve: impl Fn(&str) -> Result<Material, QpmError>,
    ) -> Result<Self, QpmError> {
        let f: ScenarioFile = toml::from_str(text).map_err(|e| QpmError::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let base: Arc<dyn Dispersive> = Arc::new(resolve(&f.material)?);
        let pick = |o: &Option<String>| -> Result<Arc<dyn Dispersive>, QpmError> {
            Ok(match o {
                Some(m) => Arc::new(resolve(m)?),
                None => base.clone(),
            })
        };
        let s = CrystalScenario {
            material_pump: pick(&f.material_pump)?,
            material_signal: pick(&f.material_signal)?,
            material_idler: pick(&f.material_idler)?,
            l_c: f.l_c_mm * 1e-3,
            poling_period: f.lambda_nm * 1e-9,
            lambda_p: f.lambda_p_nm * 1e-9,
            g: f.g,
            pump_tau: f.tau_p_ps * 1e-12,
            grating_order: f.grating_order,
            signal_window_nm: f.signal_window_nm.map(|[a, b]| (a, b)),
        };
        s.validate()?;
        Ok(s)
    }
}

fn default_order() -> i32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    material: String,
    #[serde(default)]
    material_pump: Option<String>,
    #[serde(default)]
    material_signal: Option<String>,
    #[serde(default)]
    material_idler: Option<String>,
    l_c_mm: f64,
    #[serde(rename = "Lambda_nm")]
    lambda_nm: f64,
    lambda_p_nm: f64,
    g: f64,
    tau_p_ps: f64,
    #[serde(default = "default_order")]
    grating_order: i32,
    #[serde(default)]
    signal_window_nm: Option<[f64; 2]>,
}

/// Solved central frequencies and every scale derived from them.
///
/// All time scales are stored signed; `Ω_x = 1/τ_x` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatchSummary {
    pub omega_p0: f64,
    pub omega_s0: f64,
    pub omega_i0: f64,
    pub k_p0: f64,
    pub k_s0: f64,
    pub k_i0: f64,
    pub kprime_p: f64,
    pub kprime_s: f64,
    pub kprime_i: f64,
    pub l_c: f64,
    /// `(l_c/2)(k′_p − k′_s)`
    pub tau_gvm: f64,
    /// `(l_c/2)(k′_p + k′_i)`
    pub tau_gvs_prime: f64,
    /// `(l_c/2)(k′_s + k′_i)`
    pub tau_gvs: f64,
    /// `τ_gvm / τ′_gvs`
    pub eta: f64,
    pub omega_gvm: f64,
    pub omega_gvs_prime: f64,
    pub omega_gvs: f64,
    /// Exit time of the signal wavepacket centre, `(k′_s + k′_p) l_c/2`.
    pub t_as: f64,
    /// Exit time of the idler wavepacket centre, `(k′_i + k′_p) l_c/2`.
    pub t_ai: f64,
    /// Exit time of the pump pulse centre, `k′_p l_c`.
    pub t_ap: f64,
    /// `|D₀|·l_c` at the returned root.
    pub residual: f64,
}

impl PhaseMatchSummary {
    /// Assembles all scales from central frequencies and group slownesses.
    #[allow(clippy::too_many_arguments)]
    pub fn from_slownesses(
        omega_s0: f64,
        omega_i0: f64,
        k: [f64; 3],
        kprime: [f64; 3],
        l_c: f64,
        residual: f64,
    ) -> Self {
        let [k_p0, k_s0, k_i0] = k;
        let [kp, ks, ki] = kprime;
        let tau_gvm = 0.5 * l_c * (kp - ks);
        let tau_gvs_prime = 0.5 * l_c * (kp + ki);
        let tau_gvs = 0.5 * l_c * (ks + ki);
        PhaseMatchSummary {
            omega_p0: omega_s0 + omega_i0,
            omega_s0,
            omega_i0,
            k_p0,
            k_s0,
            k_i0,
            kprime_p: kp,
            kprime_s: ks,
            kprime_i: ki,
            l_c,
            tau_gvm,
            tau_gvs_prime,
            tau_gvs,
            eta: tau_gvm / tau_gvs_prime,
            omega_gvm: 1.0 / tau_gvm,
            omega_gvs_prime: 1.0 / tau_gvs_prime,
            omega_gvs: 1.0 / tau_gvs,
            t_as: 0.5 * l_c * (ks + kp),
            t_ai: 0.5 * l_c * (ki + kp),
            t_ap: kp * l_c,
            residual,
        }
    }

    pub fn lambda_s_nm(&self) -> f64 {
        nm_from_omega(self.omega_s0)
    }

    pub fn lambda_i_nm(&self) -> f64 {
        nm_from_omega(self.omega_i0)
    }

    /// First-order phase mismatch `D·l_c/2 = −(Ω_s/Ω_gvm + Ω_i/Ω′_gvs)`.
    pub fn mismatch_linear(&self, omega_s: f64, omega_i: f64) -> f64 {
        -(omega_s * self.tau_gvm + omega_i * self.tau_gvs_prime)
    }
}

/// Finds the phase-matched signal frequency and derives all scales.
pub fn solve_central_frequencies(scenario: &CrystalScenario) -> Result<PhaseMatchSummary, QpmError> {
    scenario.validate()?;
    let wp = scenario.omega_p0();
    scenario.material_pump.check_wavelength(scenario.lambda_p * 1e9)?;

    // Admissible λ_s interval: signal range ∩ (idler range mapped through
    // energy conservation) ∩ optional user window, with λ_s > λ_p.
    let (s_lo, s_hi) = scenario.material_signal.range_nm();
    let (i_lo, i_hi) = scenario.material_idler.range_nm();
    let mut w_lo = omega_from_nm(s_hi).max(wp - omega_from_nm(i_lo));
    let mut w_hi = omega_from_nm(s_lo).min(wp - omega_from_nm(i_hi));
    if let Some((a, b)) = scenario.signal_window_nm {
        w_lo = w_lo.max(omega_from_nm(b));
        w_hi = w_hi.min(omega_from_nm(a));
    }
    w_hi = w_hi.min(wp * (1.0 - 1e-9));
    if !(w_lo > 0.0 && w_lo < w_hi) {
        return Err(QpmError::EmptyWindow);
    }
    let (lam_lo, lam_hi) = (nm_from_omega(w_hi), nm_from_omega(w_lo));

    // Uniform scan in λ_s (ω grid descending), collecting sign changes.
    let omegas: Vec<f64> = (0..=ROOT_SCAN_STEPS)
        .map(|j| {
            let lam = lam_lo + (lam_hi - lam_lo) * j as f64 / ROOT_SCAN_STEPS as f64;
            omega_from_nm(lam).clamp(w_lo, w_hi)
        })
        .collect();
    let vals: Vec<f64> = omegas.iter().map(|&w| scenario.d0(w)).collect();
    let mut roots = Vec::new();
    for j in 0..ROOT_SCAN_STEPS {
        let (a, b) = (vals[j], vals[j + 1]);
        if a == 0.0 {
            roots.push(omegas[j]);
        } else if a.signum() != b.signum() && b != 0.0 {
            roots.push(bisect(scenario, omegas[j + 1], omegas[j]));
        }
    }
    if vals[ROOT_SCAN_STEPS] == 0.0 {
        roots.push(omegas[ROOT_SCAN_STEPS]);
    }
    match roots.len() {
        0 => Err(QpmError::NoRoot {
            lo_nm: lam_lo,
            hi_nm: lam_hi,
        }),
        1 => summarize(scenario, roots[0]),
        _ => Err(QpmError::MultipleRoots {
            roots_nm: roots
                .iter()
                .map(|&w| (nm_from_omega(w), nm_from_omega(wp - w)))
                .collect(),
        }),
    }
}

/// Bisection in ω on a bracket `[lo, hi]` with a sign change of `D₀`.
fn bisect(scenario: &CrystalScenario, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = scenario.d0(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = scenario.d0(mid);
        if f_mid == 0.0 || (f_mid.abs() * scenario.l_c < ROOT_TOLERANCE && (hi - lo) < 1e-9 * mid) {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn summarize(scenario: &CrystalScenario, omega_s0: f64) -> Result<PhaseMatchSummary, QpmError> {
    let wp = scenario.omega_p0();
    let omega_i0 = wp - omega_s0;
    let p = scenario.material_pump.wavenumber(wp)?;
    let s = scenario.material_signal.wavenumber(omega_s0)?;
    let i = scenario.material_idler.wavenumber(omega_i0)?;
    let residual = scenario.d0(omega_s0).abs() * scenario.l_c;
    Ok(PhaseMatchSummary::from_slownesses(
        omega_s0,
        omega_i0,
        [p.k, s.k, i.k],
        [p.k_prime, s.k_prime, i.k_prime],
        scenario.l_c,
        residual,
    ))
}

/// Phase mismatch `D·l_c/2` at offsets `(Ω_s, Ω_i)` from the central frequencies.
///
/// `Full` evaluates the Sellmeier wavenumbers at the shifted frequencies (the
/// pump at `ω_p + Ω_s + Ω_i`); `Linear` is the first-order expansion.
pub fn phase_mismatch(
    summary: &PhaseMatchSummary,
    scenario: &CrystalScenario,
    omega_s: f64,
    omega_i: f64,
    mode: DispersionMode,
) -> Result<f64, QpmError> {
    match mode {
        DispersionMode::Linear => Ok(summary.mismatch_linear(omega_s, omega_i)),
        DispersionMode::Full => {
            let ks = scenario.material_signal.wavenumber(summary.omega_s0 + omega_s)?.k;
            let ki = scenario.material_idler.wavenumber(summary.omega_i0 + omega_i)?.k;
            let kp = scenario
                .material_pump
                .wavenumber(summary.omega_p0 + omega_s + omega_i)?
                .k;
            Ok(0.5 * scenario.l_c * (ks - ki - kp + scenario.grating_k()))
        }
    }
}

/// One row of the `(λ_p, Λ)` sweep behind the η map.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaMapPoint {
    pub lambda_p_nm: f64,
    pub poling_nm: f64,
    pub result: Result<PhaseMatchSummary, String>,
}

/// Solves the phase-matching problem on a rectangular `(λ_p, Λ)` grid.
/// Points without a unique admissible root are kept with their error text.
pub fn eta_map(
    scenario: &CrystalScenario,
    lambda_p_nm: &[f64],
    poling_nm: &[f64],
) -> Vec<EtaMapPoint> {
    use rayon::prelude::*;
    let cells: Vec<(f64, f64)> = lambda_p_nm
        .iter()
        .flat_map(|&lp| poling_nm.iter().map(move |&pl| (lp, pl)))
        .collect();
    cells
        .par_iter()
        .map(|&(lp, pl)| {
            let mut s = scenario.clone();
            s.lambda_p = lp * 1e-9;
            s.poling_period = pl * 1e-9;
            EtaMapPoint {
                lambda_p_nm: lp,
                poling_nm: pl,
                result: solve_central_frequencies(&s).map_err(|e| e.to_string()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::MockMaterial;

    #[test]
    fn point_a_central_frequencies() {
        let s = solve_central_frequencies(&crate::shipped::point_a()).unwrap();
        assert!((s.lambda_s_nm() - 1141.0).abs() < 5.0, "{}", s.lambda_s_nm());
        assert!((s.lambda_i_nm() - 2932.0).abs() < 30.0, "{}", s.lambda_i_nm());
        assert!(s.residual < ROOT_TOLERANCE);
    }

    #[test]
    fn energy_conservation_and_identities() {
        let sc = crate::shipped::point_c();
        let s = solve_central_frequencies(&sc).unwrap();
        assert!(((s.omega_s0 + s.omega_i0) - sc.omega_p0()).abs() / sc.omega_p0() < 1e-14);
        assert!((s.tau_gvm * s.omega_gvm - 1.0).abs() < 1e-15);
        let lhs = 1.0 / s.omega_gvs;
        let rhs = 1.0 / s.omega_gvs_prime - 1.0 / s.omega_gvm;
        assert!((lhs - rhs).abs() / lhs < 1e-12);
    }

    #[test]
    fn linear_mismatch_one_axis() {
        let s = solve_central_frequencies(&crate::shipped::point_a()).unwrap();
        let sc = crate::shipped::point_a();
        let x = 0.3 * s.omega_gvm;
        let d = phase_mismatch(&s, &sc, x, 0.0, DispersionMode::Linear).unwrap();
        assert!((d + x / s.omega_gvm).abs() < 1e-15);
        let z = phase_mismatch(&s, &sc, 0.0, 0.0, DispersionMode::Full).unwrap();
        assert!(z.abs() < 1e-8);
    }

    #[test]
    fn nondispersive_medium_has_no_root() {
        // Equal indices everywhere: D₀ = k_s − k_i − k_p + K is linear in ω_s,
        // and a huge grating momentum keeps it positive throughout.
        let m: Arc<dyn Dispersive> = Arc::new(MockMaterial::constant(1.8));
        let sc = CrystalScenario::type0(m, 4e-3, 10e-9, 800e-9, 0.01, 1e-12).unwrap();
        assert!(matches!(solve_central_frequencies(&sc), Err(QpmError::NoRoot { .. })));
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        let m: Arc<dyn Dispersive> = Arc::new(MockMaterial::constant(1.8));
        assert!(CrystalScenario::type0(m.clone(), 0.0, 1e-6, 800e-9, 0.01, 1e-12).is_err());
        assert!(CrystalScenario::type0(m, 1e-3, 1e-6, 800e-9, -1.0, 1e-12).is_err());
    }

    #[test]
    fn gain_threshold_warning() {
        let sc = crate::shipped::point_a();
        assert!(sc.warnings().is_empty());
        let hot = CrystalScenario { g: 1.6, ..sc };
        assert!(hot.low_gain_violated());
        assert_eq!(hot.warnings().len(), 1);
    }
}

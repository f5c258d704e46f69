//! Spontaneous parametric down-conversion with counterpropagating twin
//! photons in periodically poled crystals.
//!
//! The crate follows the photon pair from crystal data to observables:
//!
//! * [`dispersion`] — Sellmeier refractive indices, wavenumbers, group slowness;
//! * [`qpm`] — phase-matched central frequencies and the time scales
//!   `τ_gvm`, `τ′_gvs`, `τ_gvs` and `η = τ_gvm/τ′_gvs`;
//! * [`biphoton`] — pump spectra and the joint spectral amplitude ψ, exact and
//!   in the long-, short- and intermediate-pump limits;
//! * [`coherence`] — marginal `G⁽¹⁾`, spectra, widths, thermal statistics;
//! * [`schmidt`] — Schmidt number by integral formula and by SVD, asymptotes,
//!   pump-duration sweeps;
//! * [`temporal`] — the temporal correlation φ(t̄_s, t̄_i), closed form and FFT.
//!
//! Units are SI throughout (s, m, rad/s) unless a name says otherwise
//! (`_nm`, `_ps`).
//!
//! ```
//! use spdc_core::{qpm, shipped};
//!
//! let summary = qpm::solve_central_frequencies(&shipped::point_a()).unwrap();
//! assert!((summary.lambda_s_nm() - 1141.0).abs() < 5.0);
//! assert!(summary.eta > 0.0 && summary.eta < 0.02);
//! ```

pub mod biphoton;
pub mod coherence;
pub mod dispersion;
pub mod numeric;
pub mod qpm;
pub mod schmidt;
pub mod shipped;
pub mod temporal;

pub use biphoton::{FrequencyGrid, JsaGrid, PumpPulse, Regime};
pub use coherence::{Beam, CoherenceGrid};
pub use dispersion::{Dispersive, Material, MockMaterial};
pub use qpm::{CrystalScenario, DispersionMode, PhaseMatchSummary};
pub use schmidt::SchmidtReport;
pub use temporal::TemporalGrid;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Dispersion(#[from] dispersion::DispersionError),
    #[error(transparent)]
    Qpm(#[from] qpm::QpmError),
    #[error(transparent)]
    Biphoton(#[from] biphoton::BiphotonError),
    #[error(transparent)]
    Coherence(#[from] coherence::CoherenceError),
    #[error(transparent)]
    Schmidt(#[from] schmidt::SchmidtError),
    #[error(transparent)]
    Temporal(#[from] temporal::TemporalError),
}

impl Error {
    /// True for errors caused by bad input (files, ranges, parameters) as
    /// opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        use biphoton::BiphotonError as B;
        use qpm::QpmError as Q;
        match self {
            Error::Dispersion(_) => true,
            Error::Qpm(q) => matches!(
                q,
                Q::InvalidScenario(_) | Q::Io { .. } | Q::Parse { .. } | Q::Dispersion(_) | Q::EmptyWindow
            ),
            Error::Biphoton(B::InvalidGrid(_) | B::InvalidPump(_)) => true,
            Error::Temporal(temporal::TemporalError::InvalidAxis(_)) => true,
            _ => false,
        }
    }
}

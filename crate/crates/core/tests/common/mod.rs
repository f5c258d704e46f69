#![allow(dead_code)]

use spdc_core::biphoton::{self, JsaGrid, PumpPulse};
use spdc_core::qpm::{self, CrystalScenario, DispersionMode, PhaseMatchSummary};
use spdc_core::shipped;

pub const PS: f64 = 1e-12;

pub struct Setup {
    pub scenario: CrystalScenario,
    pub summary: PhaseMatchSummary,
    pub pulse: PumpPulse,
}

impl Setup {
    pub fn new(scenario: CrystalScenario, tau_p: f64) -> Self {
        let scenario = scenario.with_pump_tau(tau_p);
        let summary = qpm::solve_central_frequencies(&scenario).unwrap();
        Setup {
            scenario,
            summary,
            pulse: PumpPulse::gaussian(tau_p),
        }
    }

    pub fn point_a(tau_p: f64) -> Self {
        Self::new(shipped::point_a(), tau_p)
    }

    /// Exact (linear-mismatch) JSA on the automatic grid.
    pub fn exact(&self) -> JsaGrid {
        let grid = biphoton::default_grid(&self.summary, &self.pulse).unwrap();
        biphoton::jsa_exact(&self.scenario, &self.summary, &self.pulse, &grid, DispersionMode::Linear).unwrap()
    }
}

/// τ′_gvs of point A.
pub fn tau_prime_a() -> f64 {
    qpm::solve_central_frequencies(&shipped::point_a()).unwrap().tau_gvs_prime
}

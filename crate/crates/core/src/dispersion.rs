//! Refractive index, wavenumber and group slowness of dispersive crystals.
//!
//! Materials are described by Sellmeier coefficient sets that are loaded from
//! data files (one file per polarisation branch).  Everything downstream only
//! sees the [`Dispersive`] trait, so an analytic [`MockMaterial`] can be
//! substituted wherever exact reference values are needed.
//!
//! Group slowness `k' = dk/dω` is obtained numerically for every material by a
//! central difference with one Richardson extrapolation step, which keeps a
//! single code path for all Sellmeier forms.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Relative finite-difference step used for the group slowness.
pub const KPRIME_REL_STEP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum DispersionError {
    #[error("{material}: wavelength {wavelength_nm:.3} nm is outside the valid range [{min_nm}, {max_nm}] nm")]
    OutOfRange {
        material: String,
        wavelength_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },
    #[error("unknown Sellmeier form `{0}` (expected `standard` or `offset-poles`)")]
    UnknownForm(String),
    #[error("Sellmeier form `{form}` expects {expected} coefficients, got {got}")]
    CoefficientCount {
        form: String,
        expected: &'static str,
        got: usize,
    },
    #[error("invalid material `{material}`: {reason}")]
    Invalid { material: String, reason: String },
    #[error("cannot read material file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse material data{}: {message}", .path.as_deref().map(|p| format!(" in {p}")).unwrap_or_default())]
    Parse {
        path: Option<String>,
        message: String,
    },
}

/// Polarisation branch of a birefringent crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Ordinary,
    Extraordinary,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Ordinary => f.write_str("ordinary"),
            Branch::Extraordinary => f.write_str("extraordinary"),
        }
    }
}

/// Functional form of a Sellmeier relation.  Wavelengths are in µm and pole
/// positions `C` in µm².
#[derive(Debug, Clone, PartialEq)]
pub enum SellmeierForm {
    /// `n² = 1 + Σ Bⱼ λ² / (λ² − Cⱼ)`; file coefficients `[B1, C1, B2, C2, ...]`.
    Standard { terms: Vec<(f64, f64)> },
    /// `n² = A + Σ Bⱼ / (λ² − Cⱼ)`; file coefficients `[A, B1, C1, B2, C2, ...]`.
    OffsetPoles { a: f64, terms: Vec<(f64, f64)> },
}

impl SellmeierForm {
    pub fn from_coefficients(form: &str, c: &[f64]) -> Result<Self, DispersionError> {
        let pairs = |s: &[f64]| s.chunks_exact(2).map(|p| (p[0], p[1])).collect::<Vec<_>>();
        match form {
            "standard" => {
                if c.is_empty() || c.len() % 2 != 0 {
                    return Err(DispersionError::CoefficientCount {
                        form: form.into(),
                        expected: "a positive even number of",
                        got: c.len(),
                    });
                }
                Ok(SellmeierForm::Standard { terms: pairs(c) })
            }
            "offset-poles" => {
                if c.is_empty() || c.len() % 2 != 1 {
                    return Err(DispersionError::CoefficientCount {
                        form: form.into(),
                        expected: "an odd number (A followed by B/C pairs) of",
                        got: c.len(),
                    });
                }
                Ok(SellmeierForm::OffsetPoles { a: c[0], terms: pairs(&c[1..]) })
            }
            other => Err(DispersionError::UnknownForm(other.to_string())),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            SellmeierForm::Standard { .. } => "standard",
            SellmeierForm::OffsetPoles { .. } => "offset-poles",
        }
    }

    /// n² at a vacuum wavelength in µm.
    pub fn n_squared(&self, lambda_um: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        match self {
            SellmeierForm::Standard { terms } => {
                1.0 + terms.iter().map(|&(b, c)| b * l2 / (l2 - c)).sum::<f64>()
            }
            SellmeierForm::OffsetPoles { a, terms } => {
                a + terms.iter().map(|&(b, c)| b / (l2 - c)).sum::<f64>()
            }
        }
    }

    fn poles_um2(&self) -> Vec<f64> {
        match self {
            SellmeierForm::Standard { terms } | SellmeierForm::OffsetPoles { terms, .. } => {
                terms.iter().map(|&(_, c)| c).collect()
            }
        }
    }
}

/// Anything with a refractive index `n(ω)` on a finite wavelength window.
pub trait Dispersive: fmt::Debug + Send + Sync {
    /// Human-readable identifier used in error messages and reports.
    fn label(&self) -> String;

    /// Valid vacuum-wavelength window `[λ_min, λ_max]` in nm.
    fn range_nm(&self) -> (f64, f64);

    /// Refractive index at angular frequency `omega` with no range check.
    /// Finite-difference stencils are allowed to step marginally outside the
    /// declared window, so implementations must stay finite there.
    fn index_at_omega(&self, omega: f64) -> f64;

    fn check_wavelength(&self, lambda_nm: f64) -> Result<(), DispersionError> {
        let (lo, hi) = self.range_nm();
        if lambda_nm.is_finite() && lambda_nm >= lo && lambda_nm <= hi {
            Ok(())
        } else {
            Err(DispersionError::OutOfRange {
                material: self.label(),
                wavelength_nm: lambda_nm,
                min_nm: lo,
                max_nm: hi,
            })
        }
    }

    fn refractive_index(&self, lambda_nm: f64) -> Result<f64, DispersionError> {
        self.check_wavelength(lambda_nm)?;
        Ok(self.index_at_omega(omega_from_nm(lambda_nm)))
    }

    /// `k(ω) = n(ω)·ω/c` without range check.
    fn k_unchecked(&self, omega: f64) -> f64 {
        self.index_at_omega(omega) * omega / C_LIGHT
    }

    /// Group slowness by central difference with relative step `rel_step`
    /// followed by one Richardson step: `(4·D(h/2) − D(h))/3`.
    fn k_prime_with_step(&self, omega: f64, rel_step: f64) -> f64 {
        let h = rel_step * omega;
        let d = |h: f64| (self.k_unchecked(omega + h) - self.k_unchecked(omega - h)) / (2.0 * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    }

    fn wavenumber(&self, omega: f64) -> Result<WaveNumberPoint, DispersionError> {
        self.check_wavelength(nm_from_omega(omega))?;
        Ok(WaveNumberPoint {
            omega,
            k: self.k_unchecked(omega),
            k_prime: self.k_prime_with_step(omega, KPRIME_REL_STEP),
        })
    }
}

/// Wavenumber and group slowness at one angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumberPoint {
    /// rad/s
    pub omega: f64,
    /// rad/m
    pub k: f64,
    /// s/m
    pub k_prime: f64,
}

pub fn omega_from_nm(lambda_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_LIGHT / (lambda_nm * 1e-9)
}

pub fn nm_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_LIGHT / omega * 1e9
}

/// Refractive index of `material` at vacuum wavelength `lambda_nm`.
pub fn refractive_index(material: &dyn Dispersive, lambda_nm: f64) -> Result<f64, DispersionError> {
    material.refractive_index(lambda_nm)
}

/// Wavenumber and group slowness of `material` at angular frequency `omega`.
pub fn wavenumber(material: &dyn Dispersive, omega: f64) -> Result<WaveNumberPoint, DispersionError> {
    material.wavenumber(omega)
}

/// A Sellmeier coefficient set for one polarisation branch of one crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub branch: Branch,
    pub form: SellmeierForm,
    pub range_nm: (f64, f64),
    /// Reference temperature of the data set; recorded for provenance only.
    pub temperature_c: Option<f64>,
    pub source: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    branch: Branch,
    form: String,
    coefficients: Vec<f64>,
    range_nm: [f64; 2],
    #[serde(default)]
    temperature_c: Option<f64>,
    source: String,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        branch: Branch,
        form: SellmeierForm,
        range_nm: (f64, f64),
        source: impl Into<String>,
    ) -> Result<Self, DispersionError> {
        let m = Material {
            name: name.into(),
            branch,
            form,
            range_nm,
            temperature_c: None,
            source: source.into(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, DispersionError> {
        Self::parse(text, None)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DispersionError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DispersionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, Some(path.display().to_string()))
    }

    fn parse(text: &str, path: Option<String>) -> Result<Self, DispersionError> {
        let file: MaterialFile = toml::from_str(text).map_err(|e| DispersionError::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let form = SellmeierForm::from_coefficients(&file.form, &file.coefficients)?;
        let mut m = Material::new(
            file.name,
            file.branch,
            form,
            (file.range_nm[0], file.range_nm[1]),
            file.source,
        )?;
        m.temperature_c = file.temperature_c;
        Ok(m)
    }

    /// Checks the data-file invariants: a sane window, no Sellmeier pole inside
    /// it, and a finite index above one across it.
    pub fn validate(&self) -> Result<(), DispersionError> {
        let invalid = |reason: String| DispersionError::Invalid {
            material: self.label(),
            reason,
        };
        let (lo, hi) = self.range_nm;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(invalid(format!("bad wavelength range [{lo}, {hi}] nm")));
        }
        let (l2lo, l2hi) = ((lo * 1e-3).powi(2), (hi * 1e-3).powi(2));
        for c in self.form.poles_um2() {
            if c >= l2lo && c <= l2hi {
                return Err(invalid(format!(
                    "Sellmeier pole at {:.1} nm lies inside the valid range",
                    c.sqrt() * 1e3
                )));
            }
        }
        for j in 0..=200 {
            let l = lo + (hi - lo) * j as f64 / 200.0;
            let n2 = self.form.n_squared(l * 1e-3);
            if !(n2.is_finite() && n2 > 1.0) {
                return Err(invalid(format!("n² = {n2} at {l:.1} nm (must be finite and > 1)")));
            }
        }
        Ok(())
    }
}

impl Dispersive for Material {
    fn label(&self) -> String {
        format!("{} ({})", self.name, self.branch)
    }

    fn range_nm(&self) -> (f64, f64) {
        self.range_nm
    }

    fn index_at_omega(&self, omega: f64) -> f64 {
        self.form.n_squared(nm_from_omega(omega) * 1e-3).sqrt()
    }
}

/// Analytic test material with `n(ω) = Σ cⱼ (ω/ω_ref)ʲ`.
///
/// Exposes the closed-form group slowness so that the numerical path can be
/// checked against an exact oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct MockMaterial {
    pub coefficients: Vec<f64>,
    pub omega_ref: f64,
    pub range_nm: (f64, f64),
}

impl MockMaterial {
    pub fn polynomial(coefficients: Vec<f64>, omega_ref: f64, range_nm: (f64, f64)) -> Self {
        MockMaterial {
            coefficients,
            omega_ref,
            range_nm,
        }
    }

    /// Dispersionless medium of index `n` over 100 nm – 100 µm.
    pub fn constant(n: f64) -> Self {
        Self::polynomial(vec![n], 1.0, (100.0, 100_000.0))
    }

    fn dn_domega(&self, omega: f64) -> f64 {
        let x = omega / self.omega_ref;
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| j as f64 * c * x.powi(j as i32 - 1))
            .sum::<f64>()
            / self.omega_ref
    }

    /// Closed-form `k = n ω / c`.
    pub fn exact_k(&self, omega: f64) -> f64 {
        self.index_at_omega(omega) * omega / C_LIGHT
    }

    /// Closed-form `k' = (n + ω dn/dω)/c`.
    pub fn exact_k_prime(&self, omega: f64) -> f64 {
        (self.index_at_omega(omega) + omega * self.dn_domega(omega)) / C_LIGHT
    }
}

impl Dispersive for MockMaterial {
    fn label(&self) -> String {
        format!("mock polynomial {:?}", self.coefficients)
    }

    fn range_nm(&self) -> (f64, f64) {
        self.range_nm
    }

    fn index_at_omega(&self, omega: f64) -> f64 {
        let x = omega / self.omega_ref;
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

//! Material and scenario files bundled with the crate.
//!
//! These are the same files as under `data/` in the repository, embedded at
//! compile time so that tests and library users can reach the reference
//! operating points without touching the filesystem.

use crate::dispersion::Material;
use crate::qpm::{CrystalScenario, QpmError};

pub const KTP_Z_TOML: &str = include_str!("../../../data/materials/ktp_z.toml");
pub const LITHIUM_NIOBATE_E_TOML: &str = include_str!("../../../data/materials/lithium_niobate_e.toml");
pub const POINT_A_TOML: &str = include_str!("../../../data/scenarios/point_a.toml");
pub const POINT_B_TOML: &str = include_str!("../../../data/scenarios/point_b.toml");
pub const POINT_C_TOML: &str = include_str!("../../../data/scenarios/point_c.toml");

/// Resolves the material references used by the bundled scenario files.
pub fn resolve_material(reference: &str) -> Result<Material, QpmError> {
    let file = reference.rsplit(['/', '\\']).next().unwrap_or(reference);
    let text = match file {
        "ktp_z.toml" => KTP_Z_TOML,
        "lithium_niobate_e.toml" => LITHIUM_NIOBATE_E_TOML,
        other => {
            return Err(QpmError::InvalidScenario(format!(
                "no bundled material named `{other}`"
            )))
        }
    };
    Ok(Material::from_toml_str(text)?)
}

/// KTP, z-polarised branch.
pub fn ktp_z() -> Material {
    Material::from_toml_str(KTP_Z_TOML).expect("bundled KTP data is valid")
}

/// Congruent LiNbO₃, extraordinary branch.
pub fn lithium_niobate_e() -> Material {
    Material::from_toml_str(LITHIUM_NIOBATE_E_TOML).expect("bundled LiNbO3 data is valid")
}

fn scenario(text: &str) -> CrystalScenario {
    CrystalScenario::from_toml_str(text, resolve_material).expect("bundled scenario is valid")
}

/// KTP, λ_p = 821 nm, Λ = 800 nm, l_c = 4 mm (η ≈ 0.01).
pub fn point_a() -> CrystalScenario {
    scenario(POINT_A_TOML)
}

/// KTP, λ_p = 821 nm, Λ = 290 nm, l_c = 4 mm (τ_gvm ≈ 0).
pub fn point_b() -> CrystalScenario {
    scenario(POINT_B_TOML)
}

/// LiNbO₃, λ_p = 527.5 nm, Λ = 236 nm, l_c = 4 mm (degenerate, η ≈ 0.05).
pub fn point_c() -> CrystalScenario {
    scenario(POINT_C_TOML)
}


//! Device parameters, the rotation-induced Sagnac-Fizeau shift, and the
//! named parameter presets.
//!
//! Every frequency-like quantity in this crate is an angular frequency in
//! rad/s. Values quoted as "kHz" or "MHz" for rotation rates and coupling
//! strengths are taken as 10^3 and 10^6 rad/s with no factor of 2π; only
//! ratios of rates enter the transmission, so the convention is
//! self-consistent.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light used by the presets (rounded).
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

fn default_speed_light() -> f64 {
    SPEED_OF_LIGHT
}

/// Laboratory-frame constants of the two-resonator device.
///
/// The cavity frequency is never stored; see [`PhysicalParams::omega_c`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    #[serde(rename = "radius_m")]
    pub radius: f64,
    pub index: f64,
    /// Material dispersion dn/dλ in 1/m.
    #[serde(default)]
    pub dn_dlambda: f64,
    #[serde(rename = "wavelength_m")]
    pub wavelength: f64,
    pub quality: f64,
    #[serde(rename = "speed_light_mps", default = "default_speed_light")]
    pub speed_light: f64,
    #[serde(rename = "group_velocity_mps")]
    pub group_velocity: f64,
    pub coupling_a: f64,
    pub coupling_b: f64,
    /// Inter-resonator coupling J, rad/s.
    #[serde(rename = "j_rad_s")]
    pub inter_coupling: f64,
}

impl PhysicalParams {
    /// Reference device: a 30 µm silica-like sphere
    /// at 1550 nm with Q = 1e9, g = 6ω_c/Q and J = 2.4e6 rad/s.
    pub fn reference() -> Self {
        let mut p = PhysicalParams {
            radius: 30e-6,
            index: 1.4,
            dn_dlambda: 0.0,
            wavelength: 1.55e-6,
            quality: 1e9,
            speed_light: SPEED_OF_LIGHT,
            group_velocity: SPEED_OF_LIGHT,
            coupling_a: 0.0,
            coupling_b: 0.0,
            inter_coupling: 2.4e6,
        };
        let g = 6.0 * p.omega_c() / p.quality;
        p.coupling_a = g;
        p.coupling_b = g;
        p
    }

    /// Bare cavity angular frequency 2πc/λ.
    pub fn omega_c(&self) -> f64 {
        2.0 * PI * self.speed_light / self.wavelength
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("radius_m", self.radius),
            ("index", self.index),
            ("dn_dlambda", self.dn_dlambda),
            ("wavelength_m", self.wavelength),
            ("quality", self.quality),
            ("speed_light_mps", self.speed_light),
            ("group_velocity_mps", self.group_velocity),
            ("coupling_a", self.coupling_a),
            ("coupling_b", self.coupling_b),
            ("j_rad_s", self.inter_coupling),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        let positive = [
            ("radius_m", self.radius),
            ("wavelength_m", self.wavelength),
            ("quality", self.quality),
            ("speed_light_mps", self.speed_light),
            ("group_velocity_mps", self.group_velocity),
        ];
        for (field, v) in positive {
            if v <= 0.0 {
                return Err(Error::invalid(field, format!("must be > 0, got {v}")));
            }
        }
        if self.index <= 1.0 {
            return Err(Error::invalid(
                "index",
                format!("must be > 1, got {}", self.index),
            ));
        }
        Ok(())
    }
}

/// Mechanical state of the two resonators.
///
/// Positive angular velocity is clockwise rotation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinConfig {
    #[serde(rename = "omega1_rad_s")]
    pub omega_1: f64,
    #[serde(rename = "omega2_rad_s")]
    pub omega_2: f64,
    /// Backscattering between the CW and CCW modes of the first resonator.
    #[serde(rename = "chi1_rad_s", default)]
    pub chi_1: f64,
    #[serde(rename = "chi2_rad_s", default)]
    pub chi_2: f64,
}

impl SpinConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("omega1_rad_s", self.omega_1),
            ("omega2_rad_s", self.omega_2),
            ("chi1_rad_s", self.chi_1),
            ("chi2_rad_s", self.chi_2),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        check_chi("chi1_rad_s", self.chi_1)?;
        check_chi("chi2_rad_s", self.chi_2)
    }
}

fn check_chi(field: &'static str, chi: f64) -> Result<()> {
    if chi < 0.0 {
        return Err(Error::invalid(field, format!("must be >= 0, got {chi}")));
    }
    Ok(())
}

/// The seven rates every solver consumes, all in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedParams {
    /// External decay rate of each mode of the first resonator, g_a²/(2 v_g).
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub j: f64,
    pub delta_f1: f64,
    pub delta_f2: f64,
    pub chi_1: f64,
    pub chi_2: f64,
}

impl ReducedParams {
    /// Symmetric static template: Γa = Γb = `gamma`, no rotation or backscatter.
    pub fn symmetric(gamma: f64, j: f64) -> Self {
        ReducedParams {
            gamma_a: gamma,
            gamma_b: gamma,
            j,
            delta_f1: 0.0,
            delta_f2: 0.0,
            chi_1: 0.0,
            chi_2: 0.0,
        }
    }

    pub fn with_shifts(mut self, delta_f1: f64, delta_f2: f64) -> Self {
        self.delta_f1 = delta_f1;
        self.delta_f2 = delta_f2;
        self
    }

    pub fn with_backscatter(mut self, chi_1: f64, chi_2: f64) -> Self {
        self.chi_1 = chi_1;
        self.chi_2 = chi_2;
        self
    }

    pub fn has_backscatter(&self) -> bool {
        self.chi_1 != 0.0 || self.chi_2 != 0.0
    }

    /// Largest rate in the model; sets the natural detuning scale.
    pub fn scale(&self) -> f64 {
        [
            self.gamma_a,
            self.gamma_b,
            self.j.abs(),
            self.delta_f1.abs(),
            self.delta_f2.abs(),
            self.chi_1,
            self.chi_2,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("j", self.j),
            ("delta_f1", self.delta_f1),
            ("delta_f2", self.delta_f2),
            ("chi_1", self.chi_1),
            ("chi_2", self.chi_2),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        if self.gamma_a <= 0.0 {
            return Err(Error::invalid(
                "gamma_a",
                format!("must be > 0, got {}", self.gamma_a),
            ));
        }
        if self.gamma_b <= 0.0 {
            return Err(Error::invalid(
                "gamma_b",
                format!("must be > 0, got {}", self.gamma_b),
            ));
        }
        check_chi("chi_1", self.chi_1)?;
        check_chi("chi_2", self.chi_2)
    }
}

/// Field-by-field replacement of converted reduced rates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_2: Option<f64>,
}

impl ReducedOverride {
    pub fn gammas(gamma_a: f64, gamma_b: f64) -> Self {
        ReducedOverride {
            gamma_a: Some(gamma_a),
            gamma_b: Some(gamma_b),
            ..Default::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == ReducedOverride::default()
    }

    pub fn apply(&self, mut rp: ReducedParams) -> Result<ReducedParams> {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut rp.gamma_a, self.gamma_a);
        set(&mut rp.gamma_b, self.gamma_b);
        set(&mut rp.j, self.j);
        set(&mut rp.delta_f1, self.delta_f1);
        set(&mut rp.delta_f2, self.delta_f2);
        set(&mut rp.chi_1, self.chi_1);
        set(&mut rp.chi_2, self.chi_2);
        rp.validate()?;
        Ok(rp)
    }
}

/// Dimensionless Sagnac-Fizeau factor G such that Δ_F = Ω·G.
///
/// G = n R ω_c / c · (1 − 1/n² − (λ/n) dn/dλ).
pub fn g_factor(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    let n = p.index;
    let g = n * p.radius * p.omega_c() / p.speed_light
        * (1.0 - 1.0 / (n * n) - p.wavelength / n * p.dn_dlambda);
    if !g.is_finite() {
        return Err(Error::invalid(
            "index",
            format!("G factor is not finite ({g})"),
        ));
    }
    Ok(g)
}

/// Signed rotation-induced shift of the CW/CCW mode pair.
pub fn sagnac_shift(p: &PhysicalParams, omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::invalid(
            "omega",
            format!("must be finite, got {omega}"),
        ));
    }
    Ok(omega * g_factor(p)?)
}

pub fn to_reduced(p: &PhysicalParams, s: &SpinConfig) -> Result<ReducedParams> {
    p.validate()?;
    s.validate()?;
    let two_vg = 2.0 * p.group_velocity;
    let rp = ReducedParams {
        gamma_a: p.coupling_a * p.coupling_a / two_vg,
        gamma_b: p.coupling_b * p.coupling_b / two_vg,
        j: p.inter_coupling,
        delta_f1: sagnac_shift(p, s.omega_1)?,
        delta_f2: sagnac_shift(p, s.omega_2)?,
        chi_1: s.chi_1,
        chi_2: s.chi_2,
    };
    rp.validate()?;
    Ok(rp)
}

/// Which scattering model a preset is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// One resonator between the two waveguides (comparison model).
    Single,
    /// Two coupled resonators, each side-coupled to one waveguide.
    Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub label: &'static str,
    pub topology: Topology,
    pub physical: PhysicalParams,
    pub spin: SpinConfig,
    /// Applied on top of the physical conversion.
    pub reduced_override: ReducedOverride,
    pub sweep_min: f64,
    pub sweep_max: f64,
}

impl Preset {
    pub fn reduced(&self) -> Result<ReducedParams> {
        self.reduced_override
            .apply(to_reduced(&self.physical, &self.spin)?)
    }
}

/// External decay rate used by every preset.
///
/// Chosen so that √(Γ² + J²) with J = 2.4e6 equals the Sagnac shift at
/// 29.2e3 rad/s (≈ 2.435e6), the rotation rate quoted for the
/// counter-rotating routing spectra.
pub const CALIBRATED_GAMMA: f64 = 0.41e6;

const BACKSCATTER: f64 = 1.2e6;

pub const PRESET_NAMES: [&str; 8] = [
    "fig2-single",
    "fig2-b",
    "fig2-c",
    "fig3-corotate",
    "fig3-counter",
    "fig4-a",
    "fig4-b",
    "fig5",
];

fn preset(
    name: &'static str,
    label: &'static str,
    topology: Topology,
    spin: SpinConfig,
    span: f64,
) -> Preset {
    Preset {
        name,
        label,
        topology,
        physical: PhysicalParams::reference(),
        spin,
        reduced_override: ReducedOverride::gammas(CALIBRATED_GAMMA, CALIBRATED_GAMMA),
        sweep_min: -span,
        sweep_max: span,
    }
}

fn spin(omega_1: f64, omega_2: f64, chi_1: f64, chi_2: f64) -> SpinConfig {
    SpinConfig {
        omega_1,
        omega_2,
        chi_1,
        chi_2,
    }
}

pub fn catalog() -> Vec<Preset> {
    use Topology::*;
    vec![
        preset(
            "fig2-single",
            "single resonator between the waveguides, Omega = 29e3",
            Single,
            spin(29e3, 0.0, 0.0, 0.0),
            8e6,
        ),
        preset(
            "fig2-b",
            "Omega1 = 29e3, Omega2 = 0 (reverse-8 / positive-8 points)",
            Pair,
            spin(29e3, 0.0, 0.0, 0.0),
            8e6,
        ),
        preset(
            "fig2-c",
            "Omega1 = -29e3, Omega2 = 0 (mirror image of fig2-b)",
            Pair,
            spin(-29e3, 0.0, 0.0, 0.0),
            8e6,
        ),
        preset(
            "fig3-corotate",
            "Omega1 = Omega2 = 29e3 (reciprocal)",
            Pair,
            spin(29e3, 29e3, 0.0, 0.0),
            8e6,
        ),
        preset(
            "fig3-counter",
            "Omega1 = 29.2e3, Omega2 = -29.2e3 (counter-rotating)",
            Pair,
            spin(29.2e3, -29.2e3, 0.0, 0.0),
            8e6,
        ),
        preset(
            "fig4-a",
            "static, chi1 = 1.2e6, chi2 = 0",
            Pair,
            spin(0.0, 0.0, BACKSCATTER, 0.0),
            1e7,
        ),
        preset(
            "fig4-b",
            "static, chi1 = chi2 = 1.2e6",
            Pair,
            spin(0.0, 0.0, BACKSCATTER, BACKSCATTER),
            1e7,
        ),
        preset(
            "fig5",
            "Omega1 = Omega2 = 24e3, chi1 = chi2 = 1.2e6 (CW/CCW circulation)",
            Pair,
            spin(24e3, 24e3, BACKSCATTER, BACKSCATTER),
            8e6,
        ),
    ]
}

pub fn load_preset(name: &str) -> Result<Preset> {
    catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            valid: PRESET_NAMES.to_vec(),
        })
}

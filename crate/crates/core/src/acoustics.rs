//! Sound propagation and coupling: source excitation, fluid attenuation,
//! fluid-solid boundary loads, solid wave speeds, interface
//! reflection/transmission, and the composed per-target excitation.
//!
//! All functions here are pure; the simulation engine calls them every tick
//! with immutable inputs.

use serde::{Deserialize, Serialize};

use crate::curve::PiecewiseLinear;
use crate::error::{Error, Result};

/// dB per Neper for amplitude quantities: 20·log10(e).
pub fn neper_to_db() -> f64 {
    20.0 * std::f64::consts::LOG10_E
}

/// Sound pressure level above the environmental noise floor, in dB.
pub fn delta_spl(measured_spl: f64, noise_spl: f64) -> f64 {
    measured_spl - noise_spl
}

/// Exponential amplitude decay over a propagation path:
/// `a0 · e^(−alpha·x)` with `alpha` in Nepers per meter.
pub fn attenuate_amplitude(a0: f64, alpha_np_per_m: f64, x_m: f64) -> f64 {
    a0 * (-alpha_np_per_m * x_m).exp()
}

/// Path attenuation expressed in dB (amplitude convention).
pub fn attenuation_db(alpha_np_per_m: f64, x_m: f64) -> f64 {
    neper_to_db() * alpha_np_per_m * x_m
}

/// SPL after propagating `x_m` through a medium with the given attenuation
/// coefficient.
pub fn attenuate_spl(spl_db: f64, alpha_np_per_m: f64, x_m: f64) -> f64 {
    spl_db - attenuation_db(alpha_np_per_m, x_m)
}

/// Looks up a measured SPL-vs-distance calibration curve, interpolating
/// between calibration points and clamping outside the measured range.
pub fn empirical_spl_at_distance(curve: &PiecewiseLinear, x_m: f64) -> Result<f64> {
    if curve.knots().len() < 2 {
        return Err(Error::config(
            "SPL-distance curve needs at least two calibration points",
        ));
    }
    Ok(curve.value_at(x_m))
}

/// Fluid load on a solid boundary: pressure scaled along the surface normal.
pub fn boundary_force(pressure_pa: f64, normal: [f64; 3]) -> Result<[f64; 3]> {
    let norm = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "surface normal must be a unit vector, |n| = {norm}"
        )));
    }
    Ok([
        pressure_pa * normal[0],
        pressure_pa * normal[1],
        pressure_pa * normal[2],
    ])
}

/// Reflection and transmission coefficients at an interface between two
/// materials with acoustic impedances `z1` (incident side) and `z2`.
///
/// `R = (z2 − z1)/(z2 + z1)` and `T = 1 + R`, so `T − R = 1` always holds.
pub fn reflection_transmission(z1: f64, z2: f64) -> Result<(f64, f64)> {
    if z1 <= 0.0 || z2 <= 0.0 {
        return Err(Error::validation(format!(
            "acoustic impedances must be positive, got z1 = {z1}, z2 = {z2}"
        )));
    }
    let r = (z2 - z1) / (z2 + z1);
    Ok((r, 1.0 + r))
}

/// An isotropic solid layer in the transmission chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolidLayer {
    /// kg/m³
    pub density: f64,
    /// First Lamé coefficient, Pa.
    pub lame_lambda: f64,
    /// Second Lamé coefficient, Pa.
    pub lame_mu: f64,
    /// Shearing modulus, Pa.
    pub shear_modulus: f64,
    /// Pa·s/m
    pub acoustic_impedance: f64,
}

impl SolidLayer {
    pub fn validate(&self) -> Result<()> {
        if self.density <= 0.0
            || self.lame_lambda <= 0.0
            || self.lame_mu <= 0.0
            || self.shear_modulus <= 0.0
            || self.acoustic_impedance <= 0.0
        {
            return Err(Error::validation(
                "solid layer densities and moduli must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// Longitudinal and shear wave velocities of an isotropic solid:
/// `v_l = √((λ + 2μ₁)/ρ)`, `v_s = √(μ₂/ρ)`.
pub fn wave_speeds(layer: &SolidLayer) -> (f64, f64) {
    let v_l = ((layer.lame_lambda + 2.0 * layer.lame_mu) / layer.density).sqrt();
    let v_s = (layer.shear_modulus / layer.density).sqrt();
    (v_l, v_s)
}

/// Fluid load on a solid boundary element.
#[derive(Debug, Clone)]
pub struct BoundaryLoad {
    pub pressure_pa: f64,
    pub surface_normal: [f64; 3],
    pub force_per_area: [f64; 3],
    pub solid_acceleration: [f64; 3],
}

impl BoundaryLoad {
    pub fn new(
        pressure_pa: f64,
        surface_normal: [f64; 3],
        solid_acceleration: [f64; 3],
    ) -> Result<Self> {
        let force_per_area = boundary_force(pressure_pa, surface_normal)?;
        Ok(BoundaryLoad {
            pressure_pa,
            surface_normal,
            force_per_area,
            solid_acceleration,
        })
    }
}

/// The fluid the sound travels through. Salinity and temperature are
/// descriptive metadata; propagation uses the scalar coefficients directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Medium {
    /// kg/m³
    pub density: f64,
    /// m/s
    pub sound_speed: f64,
    /// Nepers per meter.
    pub attenuation_np_per_m: f64,
    /// Environmental noise floor, dB SPL re 1 µPa.
    pub noise_floor_spl: f64,
    #[serde(default)]
    pub salinity: Option<f64>,
    #[serde(default)]
    pub temperature_c: Option<f64>,
}

impl Medium {
    /// Wavenumber `k = ω/c`.
    pub fn wavenumber(&self, angular_frequency: f64) -> f64 {
        angular_frequency / self.sound_speed
    }

    pub fn validate(&self) -> Result<()> {
        if self.density <= 0.0 {
            return Err(Error::validation("medium density must be positive"));
        }
        if self.sound_speed <= 0.0 {
            return Err(Error::validation("medium sound speed must be positive"));
        }
        if self.attenuation_np_per_m < 0.0 {
            return Err(Error::validation(
                "medium attenuation coefficient must be non-negative",
            ));
        }
        Ok(())
    }
}

/// Piecewise-constant SPL offset applied on top of the source level over time.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolumeSchedule {
    /// No volume changes.
    #[default]
    Constant,
    /// Explicit steps: `(start_s, offset_db)`, sorted by start time.
    /// Before the first step the offset is 0 dB.
    Steps { steps: Vec<(f64, f64)> },
    /// Raise the volume by `step_db` every `every_s` seconds, starting from
    /// a 0 dB offset, optionally capped.
    Ramp {
        step_db: f64,
        every_s: f64,
        #[serde(default)]
        max_offset_db: Option<f64>,
    },
}

impl VolumeSchedule {
    pub fn offset_db(&self, t_s: f64) -> f64 {
        match self {
            VolumeSchedule::Constant => 0.0,
            VolumeSchedule::Steps { steps } => steps
                .iter()
                .take_while(|(start, _)| *start <= t_s)
                .last()
                .map(|(_, offset)| *offset)
                .unwrap_or(0.0),
            VolumeSchedule::Ramp {
                step_db,
                every_s,
                max_offset_db,
            } => {
                let offset = (t_s / every_s).floor().max(0.0) * step_db;
                match max_offset_db {
                    Some(cap) => offset.min(*cap),
                    None => offset,
                }
            }
        }
    }

    /// Times in `(0, horizon]` at which the offset changes; the engine turns
    /// these into excitation-change events.
    pub fn change_points(&self, horizon_s: f64) -> Vec<f64> {
        match self {
            VolumeSchedule::Constant => Vec::new(),
            VolumeSchedule::Steps { steps } => steps
                .iter()
                .map(|(start, _)| *start)
                .filter(|t| *t > 0.0 && *t <= horizon_s)
                .collect(),
            VolumeSchedule::Ramp { every_s, .. } => {
                let mut points = Vec::new();
                let mut t = *every_s;
                while t <= horizon_s {
                    points.push(t);
                    t += every_s;
                }
                points
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VolumeSchedule::Constant => Ok(()),
            VolumeSchedule::Steps { steps } => {
                for pair in steps.windows(2) {
                    if pair[1].0 <= pair[0].0 {
                        return Err(Error::validation(
                            "volume schedule steps must have strictly increasing start times",
                        ));
                    }
                }
                Ok(())
            }
            VolumeSchedule::Ramp { every_s, .. } => {
                if *every_s <= 0.0 {
                    return Err(Error::validation("volume ramp period must be positive"));
                }
                Ok(())
            }
        }
    }
}

/// The attacking sound source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcousticSource {
    /// Source level at the reference point, dB SPL re 1 µPa.
    pub amplitude_spl: f64,
    /// Tone frequency, Hz.
    pub frequency_hz: f64,
    /// Source position, meters.
    #[serde(default)]
    pub position: [f64; 3],
    /// Angle between the speaker axis and the target normal, degrees.
    #[serde(default)]
    pub orientation_deg: f64,
    #[serde(default)]
    pub volume_schedule: VolumeSchedule,
    /// Reference solid displacement at the source distance, used by the
    /// analytic displacement-attenuation estimate. Zero when not modeled.
    #[serde(default)]
    pub base_displacement_nm: f64,
}

impl AcousticSource {
    /// Angular frequency ω = 2πf, rad/s.
    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency_hz
    }

    /// Peak pressure amplitude in µPa for the schedule-adjusted level at
    /// time `t_s` (amplitude convention, re 1 µPa).
    pub fn pressure_amplitude_upa(&self, t_s: f64) -> f64 {
        let spl = self.amplitude_spl + self.volume_schedule.offset_db(t_s);
        10f64.powf(spl / 20.0)
    }

    /// The emitted tone `A·cos(ω·t)` in µPa, with `A` following the volume
    /// schedule.
    pub fn waveform_upa(&self, t_s: f64) -> f64 {
        self.pressure_amplitude_upa(t_s) * (self.angular_frequency() * t_s).cos()
    }

    pub fn validate(&self) -> Result<()> {
        if self.frequency_hz <= 0.0 {
            return Err(Error::validation("source frequency must be positive"));
        }
        if self.amplitude_spl < 0.0 {
            return Err(Error::validation("source SPL must be non-negative"));
        }
        if !(0.0..=180.0).contains(&self.orientation_deg) {
            return Err(Error::validation(
                "speaker orientation must lie in [0, 180] degrees",
            ));
        }
        self.volume_schedule.validate()
    }
}

/// One structural resonance band. Frequencies within
/// `center ± half_width` (closed interval) couple with `gain`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceBand {
    pub center_hz: f64,
    pub half_width_hz: f64,
    /// Fraction of the calibrated degradation realized in this band, [0, 1].
    pub gain: f64,
}

/// Which frequencies couple into the enclosure, and how strongly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceProfile {
    pub bands: Vec<ResonanceBand>,
    /// Gain outside every band. Defaults to 0: off-resonance tones cause no
    /// measurable degradation.
    #[serde(default)]
    pub off_band_gain: f64,
}

impl ResonanceProfile {
    pub fn validate(&self) -> Result<()> {
        if self.bands.is_empty() {
            return Err(Error::validation(
                "resonance profile needs at least one band",
            ));
        }
        for band in &self.bands {
            if !(0.0..=1.0).contains(&band.gain) {
                return Err(Error::validation("resonance band gains must lie in [0, 1]"));
            }
            if band.half_width_hz < 0.0 || band.center_hz <= 0.0 {
                return Err(Error::validation(
                    "resonance bands must have positive centers",
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.off_band_gain) {
            return Err(Error::validation("off-band gain must lie in [0, 1]"));
        }
        let mut centers: Vec<f64> = self.bands.iter().map(|b| b.center_hz).collect();
        centers.sort_by(f64::total_cmp);
        if centers.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("resonance band centers must be distinct"));
        }
        Ok(())
    }
}

/// Coupling gain for a tone at `frequency_hz`. Overlapping bands take the
/// maximum gain; band edges are inclusive.
pub fn resonance_gain(frequency_hz: f64, profile: &ResonanceProfile) -> f64 {
    profile
        .bands
        .iter()
        .filter(|b| (frequency_hz - b.center_hz).abs() <= b.half_width_hz)
        .map(|b| b.gain)
        .reduce(f64::max)
        .unwrap_or(profile.off_band_gain)
}

/// Effectiveness multiplier for a speaker aimed `orientation_deg` away from
/// the target normal, interpolated from a measured table. The table must
/// contain the 0° reference with factor 1.0.
pub fn angle_factor(orientation_deg: f64, table: &PiecewiseLinear) -> Result<f64> {
    let has_reference = table
        .knots()
        .iter()
        .any(|(deg, factor)| *deg == 0.0 && *factor == 1.0);
    if !has_reference {
        return Err(Error::config(
            "angle table must contain the 0 degree reference with factor 1.0",
        ));
    }
    Ok(table.value_at(orientation_deg).clamp(0.0, 1.0))
}

/// The excitation a solid target experiences at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveExcitation {
    /// dB above the noise floor. May be negative (below the floor); negative
    /// values cause no degradation downstream.
    pub delta_spl: f64,
    /// Analytic estimate of the induced solid displacement, nanometers.
    pub displacement_nm: f64,
    /// Product of resonance, angle, and injection-position factors. Scales
    /// the degradation fraction downstream, not the dB level.
    pub combined_factor: f64,
}

impl EffectiveExcitation {
    /// An excitation that causes no effect.
    pub fn quiet() -> Self {
        EffectiveExcitation {
            delta_spl: 0.0,
            displacement_nm: 0.0,
            combined_factor: 0.0,
        }
    }
}

/// Composes source level, schedule offset, path attenuation, and the
/// degradation-modulating factors into the excitation at a target
/// `distance_m` away at time `t_s`.
pub fn effective_excitation(
    source: &AcousticSource,
    medium: &Medium,
    distance_m: f64,
    profile: &ResonanceProfile,
    angle_table: &PiecewiseLinear,
    position_factor: f64,
    t_s: f64,
) -> Result<EffectiveExcitation> {
    source.validate()?;
    medium.validate()?;
    profile.validate()?;
    if !(position_factor > 0.0 && position_factor <= 1.0) {
        return Err(Error::validation(
            "injection position factor must lie in (0, 1]",
        ));
    }
    let spl_at_source = source.amplitude_spl + source.volume_schedule.offset_db(t_s);
    let spl_at_target = attenuate_spl(spl_at_source, medium.attenuation_np_per_m, distance_m);
    let delta = delta_spl(spl_at_target, medium.noise_floor_spl);
    let gain = resonance_gain(source.frequency_hz, profile);
    let angle = angle_factor(source.orientation_deg, angle_table)?;
    let displacement = if source.base_displacement_nm > 0.0 {
        attenuate_amplitude(
            source.base_displacement_nm,
            medium.attenuation_np_per_m,
            distance_m,
        )
    } else {
        0.0
    };
    Ok(EffectiveExcitation {
        delta_spl: delta,
        displacement_nm: displacement,
        combined_factor: gain * angle * position_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn standard_angle_table() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![(0.0, 1.0), (45.0, 0.68), (90.0, 0.66)]).unwrap()
    }

    fn standard_profile() -> ResonanceProfile {
        ResonanceProfile {
            bands: vec![
                ResonanceBand {
                    center_hz: 2000.0,
                    half_width_hz: 100.0,
                    gain: 0.55,
                },
                ResonanceBand {
                    center_hz: 3700.0,
                    half_width_hz: 100.0,
                    gain: 0.50,
                },
                ResonanceBand {
                    center_hz: 5200.0,
                    half_width_hz: 150.0,
                    gain: 1.0,
                },
                ResonanceBand {
                    center_hz: 8900.0,
                    half_width_hz: 100.0,
                    gain: 0.45,
                },
            ],
            off_band_gain: 0.0,
        }
    }

    #[test]
    fn delta_spl_examples() {
        assert_eq!(delta_spl(150.0, 116.0), 34.0);
        assert_eq!(delta_spl(116.0, 116.0), 0.0);
        assert_eq!(delta_spl(120.0, 116.0), 4.0);
    }

    #[test]
    fn attenuation_matches_reference_displacement() {
        // 145.5 nm at the source, 0.1 Np/km, 1 km out: within 0.5% of the
        // 131.2 nm reference value.
        let d = attenuate_amplitude(145.5, 1e-4, 1000.0);
        assert!((d - 131.2).abs() / 131.2 < 0.005, "got {d}");
    }

    #[test]
    fn attenuation_degenerate_cases() {
        assert_eq!(attenuate_amplitude(42.0, 1e-3, 0.0), 42.0);
        assert_eq!(attenuate_amplitude(42.0, 0.0, 1234.0), 42.0);
    }

    #[test]
    fn empirical_curve_identity_and_midpoint() {
        let curve = PiecewiseLinear::new(vec![(0.06, 150.0), (1.0, 142.0), (3.0, 136.0)]).unwrap();
        assert_eq!(empirical_spl_at_distance(&curve, 1.0).unwrap(), 142.0);
        assert_eq!(empirical_spl_at_distance(&curve, 2.0).unwrap(), 139.0);
        // Clamped outside the measured range.
        assert_eq!(empirical_spl_at_distance(&curve, 10.0).unwrap(), 136.0);
    }

    #[test]
    fn empirical_curve_rejects_single_point() {
        let curve = PiecewiseLinear::new(vec![(1.0, 140.0)]).unwrap();
        assert!(empirical_spl_at_distance(&curve, 1.0).is_err());
    }

    #[test]
    fn empirical_curve_monotone_in_distance() {
        let curve = PiecewiseLinear::new(vec![
            (0.06, 150.0),
            (0.3, 147.0),
            (1.0, 142.5),
            (3.0, 137.5),
        ])
        .unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let x = 0.01 + i as f64 * 0.02;
            let v = empirical_spl_at_distance(&curve, x).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn boundary_force_examples() {
        assert_eq!(
            boundary_force(0.0, [0.0, 1.0, 0.0]).unwrap(),
            [0.0, 0.0, 0.0]
        );
        assert_eq!(
            boundary_force(5.0, [1.0, 0.0, 0.0]).unwrap(),
            [5.0, 0.0, 0.0]
        );
        let f = boundary_force(3.0, [0.0, -1.0, 0.0]).unwrap();
        let g = boundary_force(3.0, [0.0, 1.0, 0.0]).unwrap();
        assert_eq!(f, [-g[0], -g[1], -g[2]]);
        assert!(boundary_force(1.0, [0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn reflection_transmission_examples() {
        assert_eq!(reflection_transmission(7.0, 7.0).unwrap(), (0.0, 1.0));
        let (r, t) = reflection_transmission(1.0, 3.0).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        assert!((t - 1.5).abs() < 1e-12);
        // Rigid-boundary limit.
        let (r, t) = reflection_transmission(1.0, 1e12).unwrap();
        assert!(r > 0.999999 && t > 1.999999);
        assert!(reflection_transmission(0.0, 1.0).is_err());
        assert!(reflection_transmission(1.0, -2.0).is_err());
    }

    #[test]
    fn wave_speed_closed_forms() {
        // λ = 0 and μ₁ = μ₂ = μ gives v_l = √(2μ/ρ) and v_s = √(μ/ρ).
        let layer = SolidLayer {
            density: 2700.0,
            lame_lambda: 1e-30,
            lame_mu: 26e9,
            shear_modulus: 26e9,
            acoustic_impedance: 17e6,
        };
        let (v_l, v_s) = wave_speeds(&layer);
        assert!((v_l / v_s - std::f64::consts::SQRT_2).abs() < 1e-9);
        let heavier = SolidLayer {
            density: 4.0 * 2700.0,
            ..layer.clone()
        };
        let (hv_l, hv_s) = wave_speeds(&heavier);
        assert!((hv_l - v_l / 2.0).abs() < 1e-9);
        assert!((hv_s - v_s / 2.0).abs() < 1e-9);
        let no_shear = SolidLayer {
            shear_modulus: 0.0,
            ..layer
        };
        assert_eq!(wave_speeds(&no_shear).1, 0.0);
    }

    #[test]
    fn angle_factor_examples() {
        let table = standard_angle_table();
        assert_eq!(angle_factor(0.0, &table).unwrap(), 1.0);
        assert_eq!(angle_factor(45.0, &table).unwrap(), 0.68);
        assert_eq!(angle_factor(90.0, &table).unwrap(), 0.66);
        let missing_ref = PiecewiseLinear::new(vec![(10.0, 0.9), (90.0, 0.5)]).unwrap();
        assert!(angle_factor(0.0, &missing_ref).is_err());
    }

    #[test]
    fn resonance_gain_examples() {
        let profile = standard_profile();
        assert_eq!(resonance_gain(5100.0, &profile), 1.0);
        assert_eq!(resonance_gain(400.0, &profile), 0.0);
        // Band edges are inclusive.
        assert_eq!(resonance_gain(2100.0, &profile), 0.55);
        // Overlapping bands take the maximum gain.
        let overlapping = ResonanceProfile {
            bands: vec![
                ResonanceBand {
                    center_hz: 1000.0,
                    half_width_hz: 300.0,
                    gain: 0.2,
                },
                ResonanceBand {
                    center_hz: 1200.0,
                    half_width_hz: 300.0,
                    gain: 0.9,
                },
            ],
            off_band_gain: 0.0,
        };
        assert_eq!(resonance_gain(1100.0, &overlapping), 0.9);
    }

    #[test]
    fn waveform_amplitude_and_phase() {
        let src = test_source(120.0, 100.0, 0.0);
        // 120 dB re 1 µPa -> 1e6 µPa peak.
        assert!((src.pressure_amplitude_upa(0.0) - 1e6).abs() < 1e-6);
        assert!((src.waveform_upa(0.0) - 1e6).abs() < 1e-6);
        // Zero crossing a quarter period in (f = 100 Hz -> T/4 = 2.5 ms).
        assert!(src.waveform_upa(0.0025).abs() < 1.0);
        // A +20 dB schedule step multiplies the amplitude by 10.
        let mut louder = src.clone();
        louder.volume_schedule = VolumeSchedule::Steps {
            steps: vec![(1.0, 20.0)],
        };
        assert!((louder.pressure_amplitude_upa(2.0) - 1e7).abs() < 1e-5);
    }

    #[test]
    fn volume_ramp_offsets() {
        let ramp = VolumeSchedule::Ramp {
            step_db: 2.0,
            every_s: 210.0,
            max_offset_db: None,
        };
        assert_eq!(ramp.offset_db(0.0), 0.0);
        assert_eq!(ramp.offset_db(430.0), 4.0);
        assert_eq!(ramp.offset_db(209.9), 0.0);
        let steps = VolumeSchedule::Steps {
            steps: vec![(10.0, 3.0), (20.0, 6.0)],
        };
        assert_eq!(steps.offset_db(5.0), 0.0);
        assert_eq!(steps.offset_db(10.0), 3.0);
        assert_eq!(steps.offset_db(25.0), 6.0);
    }

    fn test_source(spl: f64, freq: f64, angle: f64) -> AcousticSource {
        AcousticSource {
            amplitude_spl: spl,
            frequency_hz: freq,
            position: [0.0; 3],
            orientation_deg: angle,
            volume_schedule: VolumeSchedule::Constant,
            base_displacement_nm: 0.0,
        }
    }

    fn test_medium() -> Medium {
        Medium {
            density: 998.0,
            sound_speed: 1480.0,
            attenuation_np_per_m: 1e-4,
            noise_floor_spl: 116.0,
            salinity: None,
            temperature_c: None,
        }
    }

    #[test]
    fn effective_excitation_unity_factors() {
        let src = test_source(150.0, 5100.0, 0.0);
        let exc = effective_excitation(
            &src,
            &test_medium(),
            0.0,
            &standard_profile(),
            &standard_angle_table(),
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(exc.delta_spl, 34.0);
        assert_eq!(exc.combined_factor, 1.0);
    }

    #[test]
    fn effective_excitation_off_resonance_is_inert() {
        let src = test_source(150.0, 700.0, 0.0);
        let exc = effective_excitation(
            &src,
            &test_medium(),
            0.0,
            &standard_profile(),
            &standard_angle_table(),
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(exc.combined_factor, 0.0);
    }

    #[test]
    fn effective_excitation_follows_ramp_schedule() {
        let mut src = test_source(150.0, 5100.0, 0.0);
        src.volume_schedule = VolumeSchedule::Ramp {
            step_db: 2.0,
            every_s: 210.0,
            max_offset_db: None,
        };
        let base = effective_excitation(
            &src,
            &test_medium(),
            0.0,
            &standard_profile(),
            &standard_angle_table(),
            1.0,
            0.0,
        )
        .unwrap();
        let later = effective_excitation(
            &src,
            &test_medium(),
            0.0,
            &standard_profile(),
            &standard_angle_table(),
            1.0,
            430.0,
        )
        .unwrap();
        assert_eq!(later.delta_spl - base.delta_spl, 4.0);
    }

    #[test]
    fn excitation_monotone_in_level_and_distance() {
        let medium = test_medium();
        let profile = standard_profile();
        let table = standard_angle_table();
        let mut prev = f64::NEG_INFINITY;
        for spl in [120.0, 130.0, 140.0, 150.0, 160.0] {
            let exc = effective_excitation(
                &test_source(spl, 5100.0, 0.0),
                &medium,
                10.0,
                &profile,
                &table,
                1.0,
                0.0,
            )
            .unwrap();
            assert!(exc.delta_spl >= prev);
            prev = exc.delta_spl;
        }
        let mut prev = f64::INFINITY;
        for dist in [0.0, 10.0, 100.0, 1000.0, 5000.0] {
            let exc = effective_excitation(
                &test_source(150.0, 5100.0, 0.0),
                &medium,
                dist,
                &profile,
                &table,
                1.0,
                0.0,
            )
            .unwrap();
            assert!(exc.delta_spl <= prev);
            prev = exc.delta_spl;
        }
    }

    proptest! {
        #[test]
        fn transmission_minus_reflection_is_one(z1 in 1e-6f64..1e9, z2 in 1e-6f64..1e9) {
            let (r, t) = reflection_transmission(z1, z2).unwrap();
            prop_assert!((t - r - 1.0).abs() < 1e-12);
        }

        #[test]
        fn delta_spl_antisymmetric(a in -200.0f64..200.0, b in -200.0f64..200.0) {
            prop_assert_eq!(delta_spl(a, b), -delta_spl(b, a));
        }

        #[test]
        fn attenuation_composes_over_path_splits(
            a in 1e-3f64..1e3,
            alpha in 0.0f64..1e-2,
            x1 in 0.0f64..5e3,
            x2 in 0.0f64..5e3,
        ) {
            let whole = attenuate_amplitude(a, alpha, x1 + x2);
            let split = attenuate_amplitude(attenuate_amplitude(a, alpha, x1), alpha, x2);
            prop_assert!((whole - split).abs() <= 1e-12 * whole.abs().max(split.abs()));
        }

        #[test]
        fn gain_and_angle_factor_bounded(freq in 1.0f64..20_000.0, deg in 0.0f64..180.0) {
            let g = resonance_gain(freq, &standard_profile());
            prop_assert!((0.0..=1.0).contains(&g));
            let f = angle_factor(deg, &standard_angle_table()).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
        }
    }
}

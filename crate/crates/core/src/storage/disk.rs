//! Per-disk throughput degradation and responsiveness under excitation.

use serde::{Deserialize, Serialize};

use crate::acoustics::EffectiveExcitation;
use crate::curve::PiecewiseLinear;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskKind {
    Mechanical,
    SolidState,
}

/// Calibrated throughput-multiplier curve over ΔSPL.
///
/// Below the first knot the disk is unaffected (multiplier 1.0); above the
/// last knot the last multiplier holds. Multipliers are non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct DegradationCurve {
    knots: Vec<(f64, f64)>,
}

impl DegradationCurve {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::config("degradation curve needs at least one knot"));
        }
        for pair in knots.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::config(
                    "degradation curve knots must be sorted by ΔSPL",
                ));
            }
            if pair[1].1 > pair[0].1 {
                return Err(Error::config(
                    "degradation curve multipliers must be non-increasing",
                ));
            }
        }
        if knots.iter().any(|(_, m)| !(0.0..=1.0).contains(m)) {
            return Err(Error::config("degradation multipliers must lie in [0, 1]"));
        }
        Ok(DegradationCurve { knots })
    }

    /// A curve that never degrades, used for solid-state disks.
    pub fn identity() -> Self {
        DegradationCurve {
            knots: vec![(0.0, 1.0)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn raw_multiplier(&self, delta_spl: f64) -> f64 {
        let first = self.knots[0];
        if delta_spl < first.0 {
            return 1.0;
        }
        let last = self.knots[self.knots.len() - 1];
        if delta_spl >= last.0 {
            return last.1;
        }
        let idx = self.knots.partition_point(|(x, _)| *x <= delta_spl);
        let (x0, y0) = self.knots[idx - 1];
        let (x1, y1) = self.knots[idx];
        y0 + (y1 - y0) * (delta_spl - x0) / (x1 - x0)
    }
}

impl TryFrom<Vec<(f64, f64)>> for DegradationCurve {
    type Error = Error;
    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self> {
        DegradationCurve::new(knots)
    }
}

impl From<DegradationCurve> for Vec<(f64, f64)> {
    fn from(curve: DegradationCurve) -> Self {
        curve.knots
    }
}

/// Throughput multiplier at `delta_spl`, with the drop fraction scaled by the
/// combined resonance/angle/position factor.
pub fn degradation_multiplier(
    delta_spl: f64,
    curve: &DegradationCurve,
    combined_factor: f64,
) -> f64 {
    let factor = combined_factor.clamp(0.0, 1.0);
    let raw = curve.raw_multiplier(delta_spl);
    1.0 - factor * (1.0 - raw)
}

/// Read/write-head displacement ratio (percent) at a given ΔSPL, from the
/// servo-measurement calibration curve. Clamped outside the measured range.
pub fn pes_displacement_ratio(delta_spl: f64, curve: &PiecewiseLinear) -> f64 {
    curve.value_at(delta_spl)
}

/// Static description of one disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskModel {
    pub id: String,
    pub kind: DiskKind,
    pub baseline_throughput_mb_s: f64,
    pub degradation_curve: DegradationCurve,
    /// ΔSPL above which sustained excitation makes the disk unresponsive.
    pub unresponsive_threshold_db: f64,
    /// Seconds of sustained excitation above the threshold before the disk
    /// stops responding.
    pub unresponsive_dwell_s: f64,
    /// Permanent multiplier loss per second spent unresponsive.
    pub permanent_damage_rate: f64,
    /// Coupling offset for this disk's bay relative to the enclosure
    /// reference point, dB. Bays closer to the excited wall see more.
    #[serde(default)]
    pub excitation_offset_db: f64,
}

impl DiskModel {
    pub fn validate(&self) -> Result<()> {
        if self.baseline_throughput_mb_s <= 0.0 {
            return Err(Error::validation(format!(
                "disk {}: baseline throughput must be positive",
                self.id
            )));
        }
        if self.unresponsive_dwell_s < 0.0 || self.permanent_damage_rate < 0.0 {
            return Err(Error::validation(format!(
                "disk {}: dwell and damage rate must be non-negative",
                self.id
            )));
        }
        if self.kind == DiskKind::SolidState
            && self.degradation_curve != DegradationCurve::identity()
        {
            return Err(Error::validation(format!(
                "disk {}: solid-state disks must use the identity degradation curve",
                self.id
            )));
        }
        Ok(())
    }
}

/// Mutable per-disk simulation state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskState {
    pub responsive: bool,
    /// Effective throughput multiplier right now, `current ≤ permanent ≤ 1`.
    pub current_multiplier: f64,
    pub dwell_accumulator_s: f64,
    /// Ceiling imposed by accumulated permanent damage.
    pub permanent_multiplier: f64,
    /// Whether the controller still sees the device at all.
    pub detected: bool,
}

impl Default for DiskState {
    fn default() -> Self {
        DiskState {
            responsive: true,
            current_multiplier: 1.0,
            dwell_accumulator_s: 0.0,
            permanent_multiplier: 1.0,
            detected: true,
        }
    }
}

impl DiskState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Advances one disk by `dt_s` under the given excitation.
///
/// Solid-state disks never react. For mechanical disks the throughput
/// multiplier follows the calibration curve scaled by `combined_factor`;
/// dwell accumulates while the raw ΔSPL stays at or above the unresponsive
/// threshold (and the excitation actually couples, i.e. the factor is
/// nonzero), and unresponsiveness is sticky. Permanent damage accrues
/// linearly while unresponsive; a fully damaged disk drops off the bus.
pub fn disk_step(
    state: &mut DiskState,
    model: &DiskModel,
    excitation: &EffectiveExcitation,
    combined_factor: f64,
    dt_s: f64,
) {
    debug_assert!(dt_s > 0.0);
    if model.kind == DiskKind::SolidState {
        return;
    }

    let delta_spl = (excitation.delta_spl + model.excitation_offset_db).max(0.0);
    let coupled = combined_factor > 0.0;

    if coupled && delta_spl >= model.unresponsive_threshold_db {
        state.dwell_accumulator_s += dt_s;
    } else {
        state.dwell_accumulator_s = 0.0;
    }
    if state.responsive && state.dwell_accumulator_s >= model.unresponsive_dwell_s {
        state.responsive = false;
    }

    if !state.responsive {
        state.permanent_multiplier =
            (state.permanent_multiplier - model.permanent_damage_rate * dt_s).max(0.0);
        if state.permanent_multiplier == 0.0 {
            state.detected = false;
        }
        state.current_multiplier = 0.0;
        return;
    }

    let multiplier = degradation_multiplier(delta_spl, &model.degradation_curve, combined_factor);
    state.current_multiplier = state.permanent_multiplier * multiplier;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn lab_curve() -> DegradationCurve {
        DegradationCurve::new(vec![(26.0, 0.83), (28.0, 0.60), (30.0, 0.35), (32.0, 0.0)]).unwrap()
    }

    fn hdd(threshold: f64, dwell: f64) -> DiskModel {
        DiskModel {
            id: "hdd0".to_string(),
            kind: DiskKind::Mechanical,
            baseline_throughput_mb_s: 190.0,
            degradation_curve: lab_curve(),
            unresponsive_threshold_db: threshold,
            unresponsive_dwell_s: dwell,
            permanent_damage_rate: 0.0,
            excitation_offset_db: 0.0,
        }
    }

    fn excitation(delta_spl: f64) -> EffectiveExcitation {
        EffectiveExcitation {
            delta_spl,
            displacement_nm: 0.0,
            combined_factor: 1.0,
        }
    }

    #[test]
    fn degradation_calibration_endpoints() {
        let curve = lab_curve();
        assert!((degradation_multiplier(26.0, &curve, 1.0) - 0.83).abs() < 1e-12);
        assert_eq!(degradation_multiplier(32.0, &curve, 1.0), 0.0);
        assert_eq!(degradation_multiplier(20.0, &curve, 1.0), 1.0);
        assert_eq!(degradation_multiplier(40.0, &curve, 1.0), 0.0);
    }

    #[test]
    fn degradation_interpolates_between_endpoints() {
        // Two-knot curve spanning the onset and full-degradation levels.
        let curve = DegradationCurve::new(vec![(26.0, 0.83), (32.0, 0.0)]).unwrap();
        let mid = degradation_multiplier(29.0, &curve, 1.0);
        assert!((mid - 0.415).abs() < 1e-12, "got {mid}");
    }

    #[test]
    fn degradation_scales_with_combined_factor() {
        let curve = lab_curve();
        // Drop fraction at 32 dB is 1.0; a 0.5 factor halves it.
        assert!((degradation_multiplier(32.0, &curve, 0.5) - 0.5).abs() < 1e-12);
        assert_eq!(degradation_multiplier(32.0, &curve, 0.0), 1.0);
    }

    #[test]
    fn pes_ratio_calibration() {
        let curve = PiecewiseLinear::new(vec![(46.0, 0.0), (64.0, 83.0)]).unwrap();
        assert_eq!(pes_displacement_ratio(46.0, &curve), 0.0);
        assert_eq!(pes_displacement_ratio(64.0, &curve), 83.0);
        assert!((pes_displacement_ratio(55.0, &curve) - 41.5).abs() < 1e-12);
        assert_eq!(pes_displacement_ratio(70.0, &curve), 83.0);
    }

    #[test]
    fn benign_excitation_leaves_state_unchanged() {
        let model = hdd(36.0, 60.0);
        let mut state = DiskState::new();
        for _ in 0..100 {
            disk_step(&mut state, &model, &excitation(0.0), 1.0, 1.0);
        }
        assert_eq!(state, DiskState::new());
    }

    #[test]
    fn sustained_excitation_past_dwell_goes_unresponsive() {
        let model = hdd(36.0, 60.0);
        let mut state = DiskState::new();
        for _ in 0..59 {
            disk_step(&mut state, &model, &excitation(38.0), 1.0, 1.0);
        }
        assert!(state.responsive);
        disk_step(&mut state, &model, &excitation(38.0), 1.0, 1.0);
        assert!(!state.responsive);
        assert_eq!(state.current_multiplier, 0.0);
        // Sticky even after the excitation stops.
        disk_step(&mut state, &model, &excitation(0.0), 1.0, 1.0);
        assert!(!state.responsive);
    }

    #[test]
    fn dwell_resets_when_excitation_drops_below_threshold() {
        let model = hdd(36.0, 60.0);
        let mut state = DiskState::new();
        for _ in 0..59 {
            disk_step(&mut state, &model, &excitation(38.0), 1.0, 1.0);
        }
        disk_step(&mut state, &model, &excitation(10.0), 1.0, 1.0);
        assert_eq!(state.dwell_accumulator_s, 0.0);
        assert!(state.responsive);
    }

    #[test]
    fn uncoupled_excitation_does_not_accumulate_dwell() {
        let model = hdd(36.0, 60.0);
        let mut state = DiskState::new();
        for _ in 0..120 {
            disk_step(&mut state, &model, &excitation(38.0), 0.0, 1.0);
        }
        assert!(state.responsive);
        assert_eq!(state.current_multiplier, 1.0);
    }

    #[test]
    fn solid_state_disks_are_immune() {
        let model = DiskModel {
            id: "ssd0".to_string(),
            kind: DiskKind::SolidState,
            baseline_throughput_mb_s: 500.0,
            degradation_curve: DegradationCurve::identity(),
            unresponsive_threshold_db: 36.0,
            unresponsive_dwell_s: 60.0,
            permanent_damage_rate: 1e-3,
            excitation_offset_db: 0.0,
        };
        let mut state = DiskState::new();
        for _ in 0..600 {
            disk_step(&mut state, &model, &excitation(60.0), 1.0, 1.0);
        }
        assert_eq!(state, DiskState::new());
    }

    #[test]
    fn permanent_damage_accrues_while_unresponsive() {
        let mut model = hdd(36.0, 10.0);
        model.permanent_damage_rate = 0.01;
        let mut state = DiskState::new();
        for _ in 0..30 {
            disk_step(&mut state, &model, &excitation(40.0), 1.0, 1.0);
        }
        assert!(!state.responsive);
        assert!(state.permanent_multiplier < 1.0);
        assert!(state.detected);
        // Long enough and the device disappears from the bus entirely.
        for _ in 0..200 {
            disk_step(&mut state, &model, &excitation(40.0), 1.0, 1.0);
        }
        assert_eq!(state.permanent_multiplier, 0.0);
        assert!(!state.detected);
    }

    proptest! {
        #[test]
        fn multiplier_non_increasing_in_delta_spl(
            onset in 10.0f64..30.0,
            width in 1.0f64..15.0,
            mid in 0.1f64..0.9,
            factor in 0.0f64..1.0,
        ) {
            let curve = DegradationCurve::new(vec![
                (onset, 0.95),
                (onset + width / 2.0, mid.min(0.95)),
                (onset + width, 0.0),
            ]).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..100 {
                let d = i as f64 * 0.6;
                let m = degradation_multiplier(d, &curve, factor);
                prop_assert!(m <= prev + 1e-12);
                prop_assert!((0.0..=1.0).contains(&m));
                if d < onset {
                    prop_assert_eq!(m, 1.0);
                }
                prev = m;
            }
        }

        #[test]
        fn permanent_multiplier_never_increases(
            steps in 1usize..200,
            delta in 30.0f64..45.0,
            rate in 0.0f64..0.05,
        ) {
            let mut model = hdd(36.0, 5.0);
            model.permanent_damage_rate = rate;
            let mut state = DiskState::new();
            let mut prev = state.permanent_multiplier;
            for _ in 0..steps {
                disk_step(&mut state, &model, &excitation(delta), 1.0, 1.0);
                prop_assert!(state.permanent_multiplier <= prev);
                prop_assert!(state.current_multiplier <= state.permanent_multiplier + 1e-12);
                prev = state.permanent_multiplier;
            }
        }
    }
}

//! Long-term disk damage: a sustained high-volume injection leaves marks
//! that outlast the attack. Unresponsive time accrues permanent multiplier
//! loss, so even after a service visit re-adds the disks, the array never
//! returns to its original throughput — and a disk damaged all the way down
//! drops off the bus entirely.
//!
//! Run with: cargo run --example permanent_damage

use udcsim::acoustics::EffectiveExcitation;
use udcsim::storage::{disk_step, DegradationCurve, DiskKind, DiskModel, DiskState, Raid5Array};

fn main() -> udcsim::Result<()> {
    let lab_curve =
        DegradationCurve::new(vec![(26.0, 0.83), (28.0, 0.60), (30.0, 0.35), (32.0, 0.0)])?;
    let models: Vec<DiskModel> = (1..=4)
        .map(|i| DiskModel {
            id: format!("hdd{i}"),
            kind: DiskKind::Mechanical,
            baseline_throughput_mb_s: 190.0,
            degradation_curve: lab_curve.clone(),
            unresponsive_threshold_db: 36.0,
            unresponsive_dwell_s: 60.0,
            // Harsher on the first bay, mild on the rest.
            permanent_damage_rate: if i == 1 { 2e-3 } else { 2e-4 },
            excitation_offset_db: 0.0,
        })
        .collect();

    // Ten minutes of 40 dB injection: every disk goes unresponsive after
    // its dwell and accrues damage for the remainder.
    let mut states = vec![DiskState::new(); 4];
    let attack = EffectiveExcitation {
        delta_spl: 40.0,
        displacement_nm: 0.0,
        combined_factor: 1.0,
    };
    for _ in 0..600 {
        for (state, model) in states.iter_mut().zip(&models) {
            disk_step(state, model, &attack, 1.0, 1.0);
        }
    }

    println!("after the injection stops:");
    for (state, model) in states.iter().zip(&models) {
        println!(
            "  {}: permanent ceiling {:.2}x, detected: {}",
            model.id, state.permanent_multiplier, state.detected
        );
    }

    // Service visit: re-add every still-detected disk to a fresh array. The
    // permanent ceiling survives the reset.
    let survivors: Vec<usize> = (0..4).filter(|i| states[*i].detected).collect();
    let mut rebuilt: Vec<DiskState> = survivors
        .iter()
        .map(|i| DiskState {
            permanent_multiplier: states[*i].permanent_multiplier,
            ..DiskState::new()
        })
        .collect();
    let rebuilt_models: Vec<DiskModel> = survivors.iter().map(|i| models[*i].clone()).collect();
    let array = Raid5Array::new(rebuilt_models.len(), 108.0, 648.0)?;

    let quiet = EffectiveExcitation::quiet();
    for (state, model) in rebuilt.iter_mut().zip(&rebuilt_models) {
        disk_step(state, model, &quiet, 0.0, 1.0);
    }
    let after = array.write_throughput(&rebuilt, &rebuilt_models)?;
    println!(
        "\nrebuilt array of {} disks: {after:.1} MB/s (was 190.0)",
        rebuilt_models.len()
    );
    assert!(after < 190.0);
    assert!(rebuilt
        .iter()
        .all(|s| s.current_multiplier <= s.permanent_multiplier));
    Ok(())
}

//! The propagation-and-coupling chain, piece by piece: source level above
//! the noise floor, fluid attenuation, the fluid load on the vessel wall,
//! wave speeds inside the solid, and the reflection/transmission split at
//! each material interface.
//!
//! Run with: cargo run --example acoustic_coupling

use udcsim::acoustics::{
    attenuate_spl, boundary_force, delta_spl, reflection_transmission, wave_speeds, SolidLayer,
};

fn main() -> udcsim::Result<()> {
    // A 150 dB source over a 116 dB noise floor.
    let excess = delta_spl(150.0, 116.0);
    println!("source stands {excess} dB above the noise floor");

    // Fresh water barely attenuates over enclosure-scale distances.
    let at_3m = attenuate_spl(150.0, 1e-4, 3.0);
    println!("after 3 m of water: {at_3m:.4} dB SPL");

    // The pressure load lands along the wall normal.
    let force = boundary_force(2.0e3, [1.0, 0.0, 0.0])?;
    println!("2 kPa on the wall -> force per area {force:?} Pa");

    // Aluminum enclosure wall.
    let aluminum = SolidLayer {
        density: 2700.0,
        lame_lambda: 5.8e10,
        lame_mu: 2.6e10,
        shear_modulus: 2.6e10,
        acoustic_impedance: 1.73e7,
    };
    let (v_l, v_s) = wave_speeds(&aluminum);
    println!("aluminum wall: longitudinal {v_l:.0} m/s, shear {v_s:.0} m/s");

    // Water -> aluminum interface: a large impedance step transmits with
    // gain (T = 1 + R) while most energy reflects.
    let water_z = 998.0 * 1481.0;
    let (r, t) = reflection_transmission(water_z, aluminum.acoustic_impedance)?;
    println!("water->aluminum: R = {r:.3}, T = {t:.3}");
    assert!((t - r - 1.0).abs() < 1e-12);
    Ok(())
}

//! Hybrid SSD write-back cache under attack: the cache itself is immune,
//! but low-hit-ratio workloads still see their miss latency jump from the
//! 1-200 ms band to 200-800 ms.
//!
//! Run with: cargo run --example cache_bench

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use udcsim::storage::cache_serve;
use udcsim::workload::WorkloadKind;
use udcsim::Calibration;

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for (workload, label) in [
        (WorkloadKind::SeqWrite, "sequential write"),
        (WorkloadKind::RandWrite, "random write"),
    ] {
        println!("{label}:");
        for size_gb in [0.5, 1.0, 1.5, 2.0] {
            let hit_ratio = calibration.cache.hit_ratio(workload, size_gb)?;
            let mut benign = 0.0;
            let mut attacked = 0.0;
            let n = 5000;
            for _ in 0..n {
                benign += cache_serve(&calibration.cache, workload, size_gb, false, &mut rng)?;
                attacked += cache_serve(&calibration.cache, workload, size_gb, true, &mut rng)?;
            }
            println!(
                "  {size_gb:.1} GB cache: hit ratio {:>5.1}%, mean latency {:>6.1} ms benign, {:>6.1} ms attacked",
                hit_ratio * 100.0,
                benign / n as f64,
                attacked / n as f64,
            );
        }
    }
    Ok(())
}

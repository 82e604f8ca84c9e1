//! Draws one channel realization and runs every method on it.
//!
//! ```text
//! cargo run --example single_trial -- [M] [N] [seed]
//! ```

use irs_relay::harness::{run_trial_methods, Method, ScenarioConfig};

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args().nth(i).and_then(|a| a.parse().ok()).unwrap_or(default)
}

fn main() -> irs_relay::Result<()> {
    let config = ScenarioConfig {
        antennas: arg(1, 16),
        elements: arg(2, 160),
        base_seed: arg(3, 0),
        ..ScenarioConfig::default()
    };
    println!(
        "M = {}, N = {}, SNR = {} dB, noise = {:.4} W",
        config.antennas,
        config.elements,
        config.snr_db,
        config.noise_variance()
    );
    println!("{:<26} {:>8} {:>8} {:>8} {:>6}", "method", "R_r", "R_d", "R_s", "iters");
    for rec in run_trial_methods(&config, 0, &Method::ALL)? {
        let r = &rec.result;
        println!(
            "{:<26} {:>8.4} {:>8.4} {:>8.4} {:>6}",
            rec.method.as_str(),
            r.rate_r,
            r.rate_d,
            r.rate_s,
            r.iterations_r
        );
    }
    Ok(())
}

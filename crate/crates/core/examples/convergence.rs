//! Rate after each alternating iteration of AIS and NSP, averaged over
//! trials, with M = N = 50 at 30 dB.

use irs_relay::harness::{run_trial_methods, Method, ScenarioConfig};

fn main() -> irs_relay::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let config = ScenarioConfig {
        antennas: 50,
        elements: 50,
        ..ScenarioConfig::default()
    };
    let shown = 12;
    let mut sums = [vec![0.0; shown], vec![0.0; shown]];
    for t in 0..trials {
        let records = run_trial_methods(&config, t, &[Method::Ais, Method::Nsp])?;
        for (sum, rec) in sums.iter_mut().zip(&records) {
            let last = *rec.trace_r.last().expect("at least one iteration");
            for (k, s) in sum.iter_mut().enumerate() {
                // converged runs hold their final rate
                *s += rec.trace_r.get(k).copied().unwrap_or(last);
            }
        }
    }
    println!("iteration,ais_rate_r,nsp_rate_r");
    for (k, (a, n)) in sums[0].iter().zip(&sums[1]).enumerate() {
        println!("{},{:.6},{:.6}", k + 1, a / trials as f64, n / trials as f64);
    }
    Ok(())
}

//! R_s versus the number of IRS elements N with M = 16 relay antennas.

use irs_relay::harness::{sweep, Method, ScenarioConfig, SweepAxis, SweepSpec};

fn main() -> irs_relay::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let methods = vec![Method::Ais, Method::Nsp, Method::Irses, Method::BaselineSingleAntenna];
    let spec = SweepSpec {
        axis: SweepAxis::Elements,
        values: (1..=10).map(|k| 32.0 * k as f64).collect(),
        base: ScenarioConfig {
            trials,
            ..ScenarioConfig::default()
        },
        methods: methods.clone(),
    };
    let table = sweep(&spec)?;
    print!("{:>5}", "N");
    for m in &methods {
        print!(" {:>24}", m.as_str());
    }
    println!();
    for row in &table.rows {
        print!("{:>5}", row.value);
        for s in &row.stats {
            print!(" {:>15.4} ± {:<6.4}", s.mean, s.std_err);
        }
        println!();
    }
    Ok(())
}

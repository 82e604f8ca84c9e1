//! R_s versus the number of relay antennas M with N = 200 IRS elements.
//! Every M divides N so the IRSES partition is even.

use irs_relay::harness::{sweep, Method, ScenarioConfig, SweepAxis, SweepSpec};

fn main() -> irs_relay::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let spec = SweepSpec {
        axis: SweepAxis::Antennas,
        values: vec![2.0, 4.0, 5.0, 8.0, 10.0, 20.0, 25.0, 40.0, 50.0],
        base: ScenarioConfig {
            elements: 200,
            trials,
            ..ScenarioConfig::default()
        },
        methods: Method::PROPOSED.to_vec(),
    };
    let table = sweep(&spec)?;
    println!("M,ais,nsp,irses");
    for row in &table.rows {
        let means: Vec<String> = row.stats.iter().map(|s| format!("{:.5}", s.mean)).collect();
        println!("{},{}", row.value, means.join(","));
    }
    Ok(())
}

//! Moves the relay and the IRS together along the S–D line and reports
//! where each method peaks.

use irs_relay::harness::{sweep, Method, ScenarioConfig, SweepAxis, SweepSpec};

fn main() -> irs_relay::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let spec = SweepSpec {
        axis: SweepAxis::Distance,
        values: (1..=9).map(|k| 10.0 * k as f64).collect(),
        base: ScenarioConfig {
            antennas: 50,
            elements: 200,
            trials,
            ..ScenarioConfig::default()
        },
        methods: vec![Method::Ais, Method::Nsp, Method::Irses, Method::BaselineSingleAntenna],
    };
    let table = sweep(&spec)?;
    println!("d [m]  {}", spec.methods.iter().map(|m| format!("{:>24}", m.as_str())).collect::<String>());
    for row in &table.rows {
        let cells: String = row.stats.iter().map(|s| format!("{:>24.4}", s.mean)).collect();
        println!("{:>5}  {cells}", row.value);
    }
    for (k, m) in spec.methods.iter().enumerate() {
        let best = table
            .rows
            .iter()
            .max_by(|a, b| a.stats[k].mean.total_cmp(&b.stats[k].mean))
            .expect("non-empty sweep");
        println!("{m}: peak at d = {} m", best.value);
    }
    Ok(())
}

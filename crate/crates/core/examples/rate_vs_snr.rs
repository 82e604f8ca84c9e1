//! Jointly optimized methods against their fixed-phase (Θ₁ = I) variants
//! over transmit SNR, with M = 16 and N = 160. Writes CSV to stdout.

use irs_relay::cli::{render_table, sweep_output_table, OutputFormat, RunSettings};
use irs_relay::harness::{sweep, Method, ScenarioConfig, SweepAxis, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let spec = SweepSpec {
        axis: SweepAxis::SnrDb,
        values: (0..=6).map(|k| 5.0 * k as f64).collect(),
        base: ScenarioConfig {
            trials,
            ..ScenarioConfig::default()
        },
        methods: vec![
            Method::Ais,
            Method::AisFixedPhase,
            Method::Nsp,
            Method::NspFixedPhase,
            Method::Irses,
            Method::IrsesFixedPhase,
        ],
    };
    let table = sweep(&spec)?;
    let out = sweep_output_table("sweep-snr", &RunSettings::from_sweep(&spec), &table);
    render_table(&out, OutputFormat::Csv, &mut std::io::stdout().lock())?;
    Ok(())
}

//! Builds run settings from a flat configuration document, runs them, and
//! regenerates the identical table from the emitted metadata alone.

use irs_relay::cli::{execute, regenerate, render_table, CommandKind, OutputFormat, OutputTable, RunSettings};

const CONFIG: &str = r#"
M = 8
N = 32
snr_db = 20.0
trials = 25
seed = 11
methods = "ais,nsp,irses,baseline-relay-only"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut settings = RunSettings::defaults_for(CommandKind::Run);
    settings.apply_document(CONFIG)?;
    settings.apply_override("irses_mode=full")?;

    let table = execute(CommandKind::Run, &settings)?;
    let mut csv = Vec::new();
    render_table(&table, OutputFormat::Csv, &mut csv)?;
    let text = String::from_utf8(csv)?;
    print!("{text}");

    let parsed = OutputTable::from_csv(&text)?;
    assert_eq!(regenerate(&parsed)?, table);
    eprintln!("regenerated table matches");
    Ok(())
}

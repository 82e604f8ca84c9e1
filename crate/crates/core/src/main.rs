fn main() {
    let env_seed = std::env::var("IRS_SIM_SEED").ok();
    let code = irs_relay::cli::run_with(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}

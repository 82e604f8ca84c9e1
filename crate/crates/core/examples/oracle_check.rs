//! Compares AIS against exhaustive search over a 16-level phase grid on
//! small instances, for both time slots.

use irs_relay::beamforming::{
    ais_max_rp, brute_force_max_rp, brute_force_second_slot, grid_power_slack, second_slot_optimize, Convergence,
};
use irs_relay::channel::{sample_channels, Geometry, LinkBudget};

fn main() -> irs_relay::Result<()> {
    let budget = LinkBudget::default();
    let noise = budget.noise_variance_watt;
    let conv = Convergence::default();
    let levels = 16;
    println!("grid power slack bound: {:.4}", grid_power_slack(levels));
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "seed", "ais R_r", "grid R_r", "ais R_d", "grid R_d");
    for seed in 0..10 {
        let ch = sample_channels(&Geometry::default(), &budget, 2, 3, seed)?;
        let first = ais_max_rp(&ch, budget.p_s_watt, noise, &conv)?;
        let grid1 = brute_force_max_rp(&ch, budget.p_s_watt, noise, levels)?;
        let second = second_slot_optimize(&ch, budget.p_r_watt, noise, &conv)?;
        let grid2 = brute_force_second_slot(&ch, budget.p_r_watt, noise, levels)?;
        println!(
            "{seed:>4} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            first.rate_r, grid1.rate, second.rate_d, grid2.rate
        );
    }
    Ok(())
}

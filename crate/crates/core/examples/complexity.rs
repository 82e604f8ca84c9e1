//! Closed-form flop counts of the three first-slot methods versus N.

use irs_relay::metrics::{flops_ais, flops_irses, flops_nsp};

fn main() -> irs_relay::Result<()> {
    let m = 50;
    let l = 3;
    println!("{:>6} {:>14} {:>14} {:>14}", "N", "AIS", "NSP", "IRSES");
    for n in (100..=1000).step_by(100) {
        println!(
            "{n:>6} {:>14.4e} {:>14.4e} {:>14.4e}",
            flops_ais(m, n, l, l)?.flops,
            flops_nsp(m, n, l, l)?.flops,
            flops_irses(m, n / m, n, l)?.flops
        );
    }
    Ok(())
}

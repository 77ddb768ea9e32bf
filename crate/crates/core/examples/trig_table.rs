// sin and cos of k*pi/3 with their alternating-sign variants; all four
// columns repeat every six rows.

use qdelete::{trig_period_table, Result};

pub fn run_example(k_max: u32) -> Result<usize> {
    let rows = trig_period_table(k_max)?;
    println!("{:>3} {:>20} {:>6} {:>20} {:>10}", "k", "sin", "cos", "(-1)^k sin", "(-1)^k cos");
    for r in &rows {
        println!(
            "{:>3} {:>20} {:>6} {:>20} {:>10}",
            r.k, r.sin_theta, r.cos_theta, r.signed_sin_theta, r.signed_cos_theta
        );
    }
    Ok(rows.len())
}

fn main() -> Result<()> {
    run_example(12)?;
    Ok(())
}

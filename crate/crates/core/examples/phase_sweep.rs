// The matched phase for growing databases, and how fast it approaches pi/3.

use qdelete::{matched_phase, phase_excess, Result};

pub fn run_example(n_max: usize) -> Result<Vec<f64>> {
    let mut excess = Vec::new();
    println!("{:>3} {:>10} {:>20} {:>12} {:>10}", "n", "N", "phi", "phi - pi/3", "N*excess");
    for n in 1..=n_max {
        let size = 1usize << n;
        let phi = matched_phase(size)?.phi;
        // phi - FRAC_PI_3 loses every digit once N is large
        let e = phase_excess(size)?;
        println!("{n:>3} {size:>10} {phi:>20.16} {e:>12.4e} {:>10.6}", e * size as f64);
        excess.push(e);
    }
    Ok(excess)
}

fn main() -> Result<()> {
    run_example(30)?;
    Ok(())
}

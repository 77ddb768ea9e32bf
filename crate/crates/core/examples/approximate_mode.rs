// Fixing both phases at pi/3 instead of the matched value leaves a
// residual amplitude on the marked item of N^(-3/2).

use qdelete::{approximate_residual, run, DeletionConfig, PhaseMode, Result};

pub fn run_example(n_max: usize) -> Result<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    println!("{:>3} {:>9} {:>14} {:>14}", "n", "N", "residual", "N^(-3/2)");
    for n in 2..=n_max {
        let config = DeletionConfig::new(n, 0, 1).with_mode(PhaseMode::FixedPiOverThree);
        let residual = run(&config)?.residual_marked_magnitude;
        let size = 1usize << n;
        println!("{n:>3} {size:>9} {residual:>14.6e} {:>14.6e}", approximate_residual(size));
        rows.push((size, residual));
    }
    Ok(rows)
}

fn main() -> Result<()> {
    run_example(16)?;
    Ok(())
}

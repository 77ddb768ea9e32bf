// Delete one marked item from a 10-qubit register with a single oracle call.
//
// cargo run --example single_query_deletion -- 37

use qdelete::{classical_average_queries, run, DeletionConfig, Result};

pub fn run_example(n: usize, tau: usize) -> Result<f64> {
    let outcome = run(&DeletionConfig::new(n, tau, 1))?;
    let size = 1usize << n;
    println!("N = {size}, marked index {tau}");
    println!("case: {}", outcome.case);
    println!("oracle calls: {}", outcome.oracle_calls);
    println!("|amplitude at tau| = {:.3e}", outcome.residual_marked_magnitude);

    let p = outcome.final_state.amplitude((tau + 1) % size).norm_sqr();
    println!("every other item: probability {p:.6e} (1/(N-1) = {:.6e})", 1.0 / (size - 1) as f64);
    println!("classical deletion needs {} queries on average", classical_average_queries(size));
    Ok(outcome.residual_marked_magnitude)
}

fn main() -> Result<()> {
    let tau = std::env::args().nth(1).map_or(37, |s| s.parse().expect("tau must be an integer"));
    run_example(10, tau)?;
    Ok(())
}

// Wall time of one deletion step against register size.
//
// cargo run --release --example bench_scaling -- 16 22

use qdelete::harness::{loglog_slope, time_deletion_steps};
use qdelete::{Result, DEFAULT_QUBIT_CAP};

pub fn run_example(n_min: usize, n_max: usize, reps: usize) -> Result<Option<f64>> {
    let ns: Vec<(usize, usize)> = (n_min..=n_max).map(|n| (n, (1usize << n) / 3)).collect();
    let times = time_deletion_steps(&ns, reps, DEFAULT_QUBIT_CAP)?;
    let mut points = Vec::new();
    println!("{:>3} {:>10} {:>12} {:>10}", "n", "N", "best ms", "ns/amp");
    for (&(n, _), t) in ns.iter().zip(&times) {
        let best = t.iter().copied().fold(f64::INFINITY, f64::min) * 1e3;
        let size = (1usize << n) as f64;
        println!("{n:>3} {:>10} {:>12.3} {:>10.2}", 1usize << n, best, best * 1e6 / size);
        points.push((size, best));
    }
    let slope = loglog_slope(&points);
    if let Some(s) = slope {
        // one pass of W is N log N, so the slope sits a little above 1
        println!("log-log slope {s:.3}");
    }
    Ok(slope)
}

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("qubit count"));
    let lo = args.next().unwrap_or(14);
    let hi = args.next().unwrap_or(20);
    run_example(lo, hi, 3)?;
    Ok(())
}

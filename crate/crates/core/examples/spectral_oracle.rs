// The two-dimensional model: S as a 2x2 matrix, its eigenvalues, and the
// closed form for S^k checked against repeated multiplication.

use qdelete::{matched_phase, s_matrix, s_power, spectral_decompose, Result};

pub fn run_example(size: usize) -> Result<f64> {
    let phi = matched_phase(size)?.phi;
    let s = s_matrix(size, phi)?;
    let spec = spectral_decompose(size, phi)?;

    println!("N = {size}, phi = {phi:.15}");
    println!("S = [{:.6}, {:.6}; {:.6}, {:.6}]", s.s11, s.s12, s.s21, s.s22);
    println!("unitarity deviation {:.2e}", s.unitarity_deviation());
    println!("beta' = {:.15} (pi/6 = {:.15})", spec.beta_prime, std::f64::consts::FRAC_PI_6);
    for (i, l) in spec.lambda.iter().enumerate() {
        println!("lambda{} = {:.12} (|.| = {:.15})", i + 1, l, l.norm());
    }
    println!("||U L U* - S|| = {:.2e}", spec.reconstruct().max_deviation(&s));

    let mut worst = 0.0f64;
    for k in 0..=12 {
        let closed = s_power(size, k)?;
        let d = closed.max_deviation(&s.pow(k)).max(closed.max_deviation(&spec.power(k)));
        println!("k = {k:>2}: closed form vs products {d:.2e}");
        worst = worst.max(d);
    }
    Ok(worst)
}

fn main() -> Result<()> {
    run_example(64)?;
    Ok(())
}

// Apply the deletion step repeatedly and watch the marked item go, come
// back with a phase, and return.

use qdelete::{apply_deletion_step, matched_phase, project_to_plane, CaseTag, Result, StateVector};

pub fn run_example(n: usize, tau: usize, steps: u32) -> Result<Vec<f64>> {
    let mut state = StateVector::uniform(n)?;
    let phi = matched_phase(state.len())?.phi;
    let start = project_to_plane(&state, tau)?;
    let mut marked = Vec::new();

    println!("{:>2}  {:<17} {:>12} {:>14}", "k", "case", "|a_tau|", "rel. phase/phi");
    for k in 1..=steps {
        apply_deletion_step(&mut state, tau, phi)?;
        let plane = project_to_plane(&state, tau)?;
        let rel = if plane.a_tau.norm() > 1e-9 {
            let d = (plane.a_tau / plane.a_c).arg() - (start.a_tau / start.a_c).arg();
            let r = -d.sin().atan2(d.cos()) / phi;
            format!("{:.6}", if r.abs() < 1e-9 { 0.0 } else { r })
        } else {
            "-".into()
        };
        println!("{k:>2}  {:<17} {:>12.3e} {rel:>14}", CaseTag::for_iterations(k).as_str(), plane.a_tau.norm());
        marked.push(plane.a_tau.norm());
    }
    Ok(marked)
}

fn main() -> Result<()> {
    run_example(6, 11, 9)?;
    Ok(())
}

// Searching random chains for a branching bisimulation that is not a weak
// one, and re-checking what was found.
//
// Run with `cargo run --example branching_probe`.

use bisim_matrix::algebra::DEFAULT_ATOL;
use bisim_matrix::probe::{probe, Counterexample, ProbeConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let outcome = probe(&ProbeConfig { instances: 200, ..ProbeConfig::default() })?;
    println!(
        "{} instances, {} branching bisimulations, {} not weak",
        outcome.instances,
        outcome.branching_pairs,
        outcome.counterexamples.len()
    );
    assert!(outcome.revalidate(DEFAULT_ATOL)?);
    if let Some(c) = outcome.counterexamples.first() {
        let file = c.to_file();
        print!("{file}");
        let again = Counterexample::from_file(&file, DEFAULT_ATOL)?;
        assert!(again.branching && !again.weak);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("branching_probe example failed");
}

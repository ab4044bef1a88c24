// Transient reward of a three-state chain computed by uniformization.
//
// Run with `cargo run --example transient_reward`.

use bisim_matrix::mrc::{figure_two, total_reward, transition_matrix, validate_generator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let chain = figure_two(0.5, 1.0, 1.0, 1.0, 2.0, 1.0)?;
    validate_generator(chain.generator(), 1e-9)?;
    println!("Q =\n{}", chain.generator());
    assert_eq!(total_reward(&chain, 0.0)?, 1.0);

    for t in [0.0, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let p = transition_matrix(chain.generator(), t)?;
        let worst = p.row_sums().iter().fold(0.0f64, |m, s| m.max((s - 1.0).abs()));
        assert!(worst < 1e-12);
        println!("R({t:>4}) = {:.6}", total_reward(&chain, t)?);
    }
    // State 1 absorbs everything and earns nothing.
    assert!(total_reward(&chain, 60.0)?.abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("transient_reward example failed");
}

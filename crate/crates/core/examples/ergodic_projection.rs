// Ergodic projections from closed classes and absorption probabilities,
// compared with a long uniformization horizon.
//
// Run with `cargo run --example ergodic_projection`.

use bisim_matrix::algebra::RealMatrix;
use bisim_matrix::mrc::{ergodic_projection, transition_matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // A transient state feeding an absorbing state and a two-state cycle.
    let q = RealMatrix::from_rows(&[
        vec![-4.0, 1.0, 3.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.0, 1.0],
        vec![0.0, 0.0, 2.0, -2.0],
    ])?;
    let e = ergodic_projection(&q)?;
    println!("Π =\n{}", e.pi);
    println!("recurrent {:?}, transient {:?}", e.recurrent_classes, e.transient);

    let horizon = 1e4 / q.max_abs();
    let long_run = transition_matrix(&q, horizon)?;
    println!("max |Π - P(T)| = {:e}", e.pi.max_abs_diff(&long_run));
    assert!(e.pi.approx_eq(&long_run, 1e-6));
    assert!(e.pi.mul(&e.pi)?.approx_eq(&e.pi, 1e-12));
    assert!(e.pi.mul(&q)?.approx_eq(&RealMatrix::zeros(4, 4), 1e-12));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ergodic_projection example failed");
}

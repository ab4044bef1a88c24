// Ordinary lumping of a chain with duplicated states preserves the total
// reward rate.
//
// Run with `cargo run --example ordinary_lumping`.

use bisim_matrix::algebra::DEFAULT_ATOL;
use bisim_matrix::mrc::{check_strong_mrc, lump_strong_mrc, total_reward, write_mrc, MrcFast};
use bisim_matrix::random::{planted_lumpable_mrc, seeded};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (chain, p) = planted_lumpable_mrc(&mut seeded(3), 3, 3);
    println!("{} states, planted partition {p}", chain.state_count());
    assert!(check_strong_mrc(&chain, &p, DEFAULT_ATOL)?.pass());

    let lumped = lump_strong_mrc(&chain, &p, DEFAULT_ATOL)?;
    print!("lumped:\n{}", write_mrc(&MrcFast::from(lumped.clone())));
    for t in [0.0, 0.1, 1.0, 10.0] {
        let a = total_reward(&chain, t)?;
        let b = total_reward(&lumped, t)?;
        println!("R({t}) = {a:.12} original, {b:.12} lumped");
        assert!((a - b).abs() <= 1e-8);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ordinary_lumping example failed");
}

// Weak lumping of a chain with fast transitions: the τ-distributor, the
// limit chain and the lumping/limit diagram.
//
// Run with `cargo run --example fast_chain_lumping`.

use bisim_matrix::mrc::{
    check_strong_discontinuous, check_weak_mrc, default_tau_distributor, limit_chain,
    lump_weak_mrc, mrc_diagram_residual, verify_mrc_diagram, write_mrc,
};
use bisim_matrix::random::{planted_weak_fast_mrc, seeded};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let atol = 1e-9;
    let (chain, p) = planted_weak_fast_mrc(&mut seeded(5), 2, 3);
    print!("chain:\n{}partition {p}\n", write_mrc(&chain));
    assert!(check_weak_mrc(&chain, &p, atol)?.pass());

    let w = default_tau_distributor(&chain, &p, atol)?;
    println!("W =\n{}residuals {:?}", w.matrix(), w.residuals());
    print!("lumped:\n{}", write_mrc(&lump_weak_mrc(&chain, &p, &w, atol)?));

    let limit = limit_chain(&chain, atol)?;
    println!("P∞(0) = Π =\n{}", limit.transition(0.0)?);
    assert!(check_strong_discontinuous(&limit, &p, atol)?.pass());

    let times = [0.0, 0.5, 1.0, 2.0];
    for t in times {
        println!("t = {t}: diagram residual {:e}", mrc_diagram_residual(&chain, &p, &w, t, atol)?);
    }
    assert!(verify_mrc_diagram(&chain, &p, &w, &times, atol)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fast_chain_lumping example failed");
}

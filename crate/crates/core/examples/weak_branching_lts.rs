// Weak and branching bisimulation, lumping and τ-closure on small systems.
//
// Run with `cargo run --example weak_branching_lts`.

use bisim_matrix::lts::{
    check_branching_lts, check_strong_lts, check_weak_lts, lump_branching_lts, lump_weak_lts,
    parse_lts, tau_closure, verify_branching_diagram, verify_closure_identities,
    verify_weak_diagram, write_lts,
};
use bisim_matrix::partition::Partition;

const TAU_PAIR: &str = "lts 2\nalphabet a\ninit 0\nterm 1\n0 tau 1\n";
const TRIPLE: &str = "lts 3\nalphabet a\ninit 0\nterm\n0 tau 1\n1 a 2\n0 a 2\n";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pair = parse_lts(TAU_PAIR)?;
    let one = Partition::single(2);
    println!("strong: {}", check_strong_lts(&pair, &one)?);
    println!("weak:   {}", check_weak_lts(&pair, &one)?);
    assert!(!check_strong_lts(&pair, &one)?.pass());
    assert!(check_weak_lts(&pair, &one)?.pass());

    let lumped = lump_weak_lts(&pair, &one)?;
    print!("weakly lumped:\n{}", write_lts(&lumped));
    assert!(lumped.internal().is_one(0, 0));
    assert!(lumped.is_terminating(0));

    print!("closed under τ:\n{}", write_lts(&tau_closure(&pair)));
    assert!(verify_weak_diagram(&pair, &one)?);
    assert!(verify_closure_identities(&pair, &one)?.holds());

    let triple = parse_lts(TRIPLE)?;
    let merged = Partition::new(3, vec![vec![0, 1], vec![2]])?;
    let report = check_branching_lts(&triple, &merged)?;
    println!("branching on {{0,1}},{{2}}: {report}");
    assert!(report.pass());
    assert!(check_weak_lts(&triple, &merged)?.pass());
    assert!(verify_branching_diagram(&triple, &merged)?);
    print!("branching lumped:\n{}", write_lts(&lump_branching_lts(&triple, &merged)?));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("weak_branching_lts example failed");
}

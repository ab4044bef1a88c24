// Strong bisimulation on a four-state system with termination.
//
// Run with `cargo run --example strong_lts`.

use bisim_matrix::lts::{check_relational_strong, check_strong_lts, figure_one, lump_strong_lts};
use bisim_matrix::partition::{brute_force_coarsest, coarsest_partition, Partition, Refinable};
use bisim_matrix::BisimKind;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lts = figure_one();
    let al = lts.alphabet();
    println!("σ = {}", lts.sigma().display(al));
    println!("A =\n{}", lts.visible().display(al));
    println!("ρ = {}", lts.rho().transpose().display(al));

    let identity = Partition::discrete(4);
    let report = check_strong_lts(&lts, &identity)?;
    println!("identity: {report}");
    assert!(report.pass());

    // States 1 and 2 both start with a, but only 1 can do c afterwards.
    let merged = Partition::new(4, vec![vec![0], vec![1, 2], vec![3]])?;
    let report = check_strong_lts(&lts, &merged)?;
    println!("merge 1,2: {report}");
    assert_eq!(report.violated_equality(), Some("VUAV = AV"));
    assert_eq!(check_relational_strong(&lts, &merged)?.pass(), report.pass());

    let coarsest = coarsest_partition(&lts, BisimKind::Strong);
    let oracle = brute_force_coarsest(4, |p| lts.is_bisimulation(BisimKind::Strong, p))?;
    println!("coarsest strong partition: {coarsest}");
    assert_eq!(coarsest, oracle);
    assert!(coarsest.is_discrete());

    let lumped = lump_strong_lts(&lts, &identity)?;
    assert_eq!(lumped, lts);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("strong_lts example failed");
}

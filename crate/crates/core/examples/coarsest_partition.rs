// Coarsest bisimulations by signature refinement, checked against
// exhaustive enumeration on random systems.
//
// Run with `cargo run --example coarsest_partition`.

use bisim_matrix::mrc::MrcSearch;
use bisim_matrix::partition::{brute_force_coarsest, coarsest_partition, Refinable};
use bisim_matrix::random::{random_fast_mrc, random_lts, seeded, LtsShape};
use bisim_matrix::BisimKind;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(11);
    let shape = LtsShape { states: 5, ..LtsShape::default() };
    for round in 0..5 {
        let lts = random_lts(&mut rng, &shape);
        let chain = random_fast_mrc(&mut rng, 4, 0.4, 0.3);
        let search = MrcSearch { chain: &chain, atol: 1e-9 };
        for kind in BisimKind::ALL {
            let p = coarsest_partition(&lts, kind);
            let q = brute_force_coarsest(5, |x| lts.is_bisimulation(kind, x))?;
            assert_eq!(p, q);
            let p = coarsest_partition(&search, kind);
            let q = brute_force_coarsest(4, |x| search.is_bisimulation(kind, x))?;
            assert_eq!(p, q);
            println!("round {round} {kind:>9}: system {}, chain {p}", coarsest_partition(&lts, kind));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("coarsest_partition example failed");
}

//! Every runnable example doubles as a test.

#[allow(dead_code)]
mod strong_lts {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/strong_lts.rs"));
}

#[test]
fn strong_lts_example_runs() {
    strong_lts::run_example().expect("strong_lts example should run");
}

#[allow(dead_code)]
mod weak_branching_lts {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weak_branching_lts.rs"));
}

#[test]
fn weak_branching_lts_example_runs() {
    weak_branching_lts::run_example().expect("weak_branching_lts example should run");
}

#[allow(dead_code)]
mod coarsest_partition {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coarsest_partition.rs"));
}

#[test]
fn coarsest_partition_example_runs() {
    coarsest_partition::run_example().expect("coarsest_partition example should run");
}

#[allow(dead_code)]
mod ordinary_lumping {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ordinary_lumping.rs"));
}

#[test]
fn ordinary_lumping_example_runs() {
    ordinary_lumping::run_example().expect("ordinary_lumping example should run");
}

#[allow(dead_code)]
mod transient_reward {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/transient_reward.rs"));
}

#[test]
fn transient_reward_example_runs() {
    transient_reward::run_example().expect("transient_reward example should run");
}

#[allow(dead_code)]
mod ergodic_projection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ergodic_projection.rs"));
}

#[test]
fn ergodic_projection_example_runs() {
    ergodic_projection::run_example().expect("ergodic_projection example should run");
}

#[allow(dead_code)]
mod fast_chain_lumping {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fast_chain_lumping.rs"));
}

#[test]
fn fast_chain_lumping_example_runs() {
    fast_chain_lumping::run_example().expect("fast_chain_lumping example should run");
}

#[allow(dead_code)]
mod branching_probe {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/branching_probe.rs"));
}

#[test]
fn branching_probe_example_runs() {
    branching_probe::run_example().expect("branching_probe example should run");
}

#[allow(dead_code)]
mod command_line {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/command_line.rs"));
}

#[test]
fn command_line_example_runs() {
    command_line::run_example().expect("command_line example should run");
}

// Driving the `bisim` command line in-process on files in a scratch
// directory.
//
// Run with `cargo run --example command_line`.

use std::fs;

use bisim_matrix::cli::run;

fn bisim(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("bisim").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let model = dir.path().join("pair.mrc");
    let part = dir.path().join("one.part");
    let lumped = dir.path().join("lumped.mrc");
    fs::write(&model, "mrc 2\ninit 0:1\nreward 3 3\nrate 0 1 2\nrate 1 0 2\n")?;
    fs::write(&part, "partition 2\n0 1\n")?;
    let (m, p, l) = (
        model.to_str().unwrap(),
        part.to_str().unwrap(),
        lumped.to_str().unwrap(),
    );

    let (code, text) = bisim(&["check", m, "-p", p]);
    print!("$ bisim check\n{text}");
    assert_eq!(code, 0);

    let (code, text) = bisim(&["refine", m, "--oracle"]);
    print!("$ bisim refine --oracle\n{text}");
    assert_eq!(code, 0);

    let (code, _) = bisim(&["lump", m, "-p", p, "-o", l]);
    assert_eq!(code, 0);
    print!("lumped:\n{}", fs::read_to_string(&lumped)?);

    let (code, text) = bisim(&["--json", "reward", l, "-t", "0", "1"]);
    print!("$ bisim --json reward\n{text}");
    assert_eq!(code, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("command_line example failed");
}

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{Cli, Command, Outcome};
use crate::algebra::RealMatrix;
use crate::error::{Error, Result};
use crate::lts::{
    check_branching_lts, check_strong_lts, check_weak_lts_with, lump_branching_lts,
    lump_strong_lts, lump_weak_lts, parse_lts, tau_closure, verify_branching_diagram,
    verify_closure_identities, verify_weak_diagram, write_lts, Lts, WeakReading,
};
use crate::mrc::{
    check_branching_mrc, check_strong_fast, check_strong_mrc, check_weak_mrc,
    default_tau_distributor, ergodic_projection_with, limit_chain, lump_strong_fast,
    lump_strong_mrc, lump_weak_mrc, mrc_diagram_residual, parse_distributor, parse_mrc,
    total_reward, write_mrc, MrcFast, MrcSearch, TauDistributor,
};
use crate::partition::{brute_force_coarsest, coarsest_partition, parse_partition, Partition, Refinable};
use crate::probe::{probe, ProbeConfig};
use crate::report::{BisimKind, CheckReport};

enum Model {
    Lts(Lts),
    Mrc(MrcFast),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidModel(format!("cannot read {}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

fn load_model(path: &Path) -> Result<Model> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next());
    match first {
        Some("lts") => Ok(Model::Lts(in_file(path, parse_lts(&text))?)),
        Some("mrc") => Ok(Model::Mrc(in_file(path, parse_mrc(&text))?)),
        _ => Err(Error::InvalidModel(format!(
            "{}: expected an `lts` or `mrc` header",
            path.display()
        ))),
    }
}

fn load_partition(path: &Path, states: usize) -> Result<Partition> {
    let p = in_file(path, parse_partition(&read(path)?))?;
    if p.state_count() != states {
        return Err(Error::InvalidPartition(format!(
            "{} covers {} states, the model has {states}",
            path.display(),
            p.state_count()
        )));
    }
    Ok(p)
}

fn state_count(model: &Model) -> usize {
    match model {
        Model::Lts(l) => l.state_count(),
        Model::Mrc(m) => m.state_count(),
    }
}

fn checksum(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn check_times(times: &[f64]) -> Result<()> {
    match times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        Some(&t) => Err(Error::NegativeTime(t)),
        None => Ok(()),
    }
}

pub(super) fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { model, partition, kind } => check(cli, model, partition, *kind),
        Command::Refine { model, kind, oracle } => refine(cli, model, *kind, *oracle),
        Command::Lump { model, partition, kind, dist, output } => {
            lump(cli, model, partition, *kind, dist.as_deref(), output.as_deref())
        }
        Command::Closure { model } => closure(model),
        Command::Project { model, slow } => project(cli, model, *slow),
        Command::Reward { model, times, tau, limit } => reward(cli, model, times, *tau, *limit),
        Command::Diagram { model, partition, kind, dist, times } => {
            diagram(cli, model, partition, *kind, dist.as_deref(), times)
        }
        Command::Probe { instances, max_states, output } => {
            run_probe(cli, *instances, *max_states, output.as_ref())
        }
    }
}

fn run_check(cli: &Cli, model: &Model, p: &Partition, kind: BisimKind) -> Result<CheckReport> {
    match (model, kind) {
        (Model::Lts(l), BisimKind::Strong) => check_strong_lts(l, p),
        (Model::Lts(l), BisimKind::Weak) => {
            let reading = if cli.strict_weak {
                WeakReading::Strict
            } else {
                WeakReading::Standard
            };
            check_weak_lts_with(l, p, reading)
        }
        (Model::Lts(l), BisimKind::Branching) => check_branching_lts(l, p),
        (Model::Mrc(m), BisimKind::Strong) => match m.as_plain() {
            Some(plain) => check_strong_mrc(&plain, p, cli.tol),
            None => check_strong_fast(m, p, cli.tol),
        },
        (Model::Mrc(m), BisimKind::Weak) => check_weak_mrc(m, p, cli.tol),
        (Model::Mrc(m), BisimKind::Branching) => check_branching_mrc(m, p, cli.tol),
    }
}

fn check(cli: &Cli, model: &Path, partition: &Path, kind: BisimKind) -> Result<Outcome> {
    let m = load_model(model)?;
    let p = load_partition(partition, state_count(&m))?;
    let report = run_check(cli, &m, &p, kind)?;
    let mut text = format!("{}\n", report.summary());
    let mut body = json!({
        "verdict": if report.pass() { "pass" } else { "fail" },
        "check": report,
        "partition": p.blocks(),
    });
    // Branching on chains is not known to imply weak, so show both.
    if let (Model::Mrc(_), BisimKind::Branching) = (&m, kind) {
        let weak = run_check(cli, &m, &p, BisimKind::Weak)?;
        text.push_str(&format!("{}\n", weak.summary()));
        body["weak"] = json!(weak);
    }
    Ok(Outcome {
        text,
        json: body,
        pass: report.pass(),
    })
}

fn refine(cli: &Cli, model: &Path, kind: BisimKind, oracle: bool) -> Result<Outcome> {
    let m = load_model(model)?;
    let search;
    let target: &dyn Refinable = match &m {
        Model::Lts(l) => l,
        Model::Mrc(c) => {
            search = MrcSearch { chain: c, atol: cli.tol };
            &search
        }
    };
    let coarsest = coarsest_partition(target, kind);
    let text = crate::partition::write_partition(&coarsest);
    let mut body = json!({
        "kind": kind,
        "partition": coarsest.blocks(),
        "text": text,
        "checksums": { "partition": checksum(&text) },
    });
    let mut pass = true;
    let mut out = text.clone();
    if oracle {
        let expected = brute_force_coarsest(target.state_count(), |p| target.is_bisimulation(kind, p))?;
        pass = expected == coarsest;
        body["oracle"] = json!({ "agrees": pass, "partition": expected.blocks() });
        if !pass {
            out.push_str(&format!("# oracle disagrees: {expected}\n"));
        }
    }
    Ok(Outcome { text: out, json: body, pass })
}

fn tau_distributor(cli: &Cli, m: &MrcFast, p: &Partition, dist: Option<&Path>) -> Result<TauDistributor> {
    match dist {
        Some(path) => {
            let w = in_file(path, parse_distributor(&read(path)?))?;
            TauDistributor::new(m, p, w, cli.tol)
        }
        None => default_tau_distributor(m, p, cli.tol),
    }
}

fn lump(
    cli: &Cli,
    model: &Path,
    partition: &Path,
    kind: BisimKind,
    dist: Option<&Path>,
    output: Option<&Path>,
) -> Result<Outcome> {
    let m = load_model(model)?;
    let p = load_partition(partition, state_count(&m))?;
    let text = match &m {
        Model::Lts(l) => {
            let lumped = match kind {
                BisimKind::Strong => lump_strong_lts(l, &p)?,
                BisimKind::Weak => lump_weak_lts(l, &p)?,
                BisimKind::Branching => lump_branching_lts(l, &p)?,
            };
            let text = write_lts(&lumped);
            let again = parse_lts(&text)?;
            if again != lumped || !check_strong_lts(&again, &Partition::discrete(p.len()))?.pass() {
                return Err(Error::Inconsistent("lumped system does not re-validate".into()));
            }
            text
        }
        Model::Mrc(c) => {
            let lumped = match kind {
                BisimKind::Strong => match c.as_plain() {
                    Some(plain) => MrcFast::from(lump_strong_mrc(&plain, &p, cli.tol)?),
                    None => lump_strong_fast(c, &p, cli.tol)?,
                },
                BisimKind::Weak => {
                    let w = tau_distributor(cli, c, &p, dist)?;
                    lump_weak_mrc(c, &p, &w, cli.tol)?
                }
                BisimKind::Branching => {
                    return Err(Error::InvalidModel(
                        "no branching lumping is defined for chains; use --kind weak".into(),
                    ))
                }
            };
            let text = write_mrc(&lumped);
            let again = parse_mrc(&text)?;
            if again != lumped
                || !check_strong_fast(&again, &Partition::discrete(p.len()), cli.tol)?.pass()
            {
                return Err(Error::Inconsistent("lumped chain does not re-validate".into()));
            }
            text
        }
    };
    let body = json!({
        "kind": kind,
        "states": p.len(),
        "model": text,
        "checksums": { "model": checksum(&text) },
    });
    let shown = match output {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| Error::InvalidModel(format!("cannot write {}: {e}", path.display())))?;
            format!("wrote {} states to {}\n", p.len(), path.display())
        }
        None => text,
    };
    Ok(Outcome { text: shown, json: body, pass: true })
}

fn closure(model: &Path) -> Result<Outcome> {
    let Model::Lts(l) = load_model(model)? else {
        return Err(Error::InvalidModel("closure needs a transition system".into()));
    };
    let text = write_lts(&tau_closure(&l));
    let body = json!({ "model": text, "checksums": { "model": checksum(&text) } });
    Ok(Outcome { text, json: body, pass: true })
}

fn rows(m: &RealMatrix) -> Value {
    json!(m.to_rows())
}

fn project(cli: &Cli, model: &Path, slow: bool) -> Result<Outcome> {
    let Model::Mrc(c) = load_model(model)? else {
        return Err(Error::InvalidModel("project needs a Markov reward chain".into()));
    };
    let q = if slow { c.slow_generator() } else { c.fast_generator() };
    let e = ergodic_projection_with(q, cli.tol)?;
    let text = format!(
        "{}recurrent classes: {:?}\ntransient: {:?}\n",
        e.pi, e.recurrent_classes, e.transient
    );
    let body = json!({
        "generator": if slow { "slow" } else { "fast" },
        "pi": rows(&e.pi),
        "recurrent_classes": e.recurrent_classes,
        "transient": e.transient,
        "checksums": { "pi": checksum(&format!("{:?}", e.pi.to_rows())) },
    });
    Ok(Outcome { text, json: body, pass: true })
}

fn reward(cli: &Cli, model: &Path, times: &[f64], tau: Option<f64>, limit: bool) -> Result<Outcome> {
    check_times(times)?;
    let Model::Mrc(c) = load_model(model)? else {
        return Err(Error::InvalidModel("reward needs a Markov reward chain".into()));
    };
    let values: Vec<f64> = if limit {
        let chain = limit_chain(&c, cli.tol)?;
        times.iter().map(|&t| chain.total_reward(t)).collect::<Result<_>>()?
    } else {
        let plain = match (c.as_plain(), tau) {
            (_, Some(speed)) => c.instantiate(speed),
            (Some(plain), None) => plain,
            (None, None) => {
                return Err(Error::InvalidModel(
                    "chain has fast transitions; pass --tau <speed> or --limit".into(),
                ))
            }
        };
        times.iter().map(|&t| total_reward(&plain, t)).collect::<Result<_>>()?
    };
    let text: String = times
        .iter()
        .zip(&values)
        .map(|(t, r)| format!("R({t}) = {r}\n"))
        .collect();
    let body = json!({
        "rewards": times.iter().zip(&values).map(|(t, r)| json!({ "t": t, "reward": r })).collect::<Vec<_>>(),
    });
    Ok(Outcome { text, json: body, pass: true })
}

fn diagram(
    cli: &Cli,
    model: &Path,
    partition: &Path,
    kind: BisimKind,
    dist: Option<&Path>,
    times: &[f64],
) -> Result<Outcome> {
    check_times(times)?;
    let m = load_model(model)?;
    let p = load_partition(partition, state_count(&m))?;
    match (&m, kind) {
        (Model::Lts(l), BisimKind::Weak) => {
            let commutes = verify_weak_diagram(l, &p)?;
            let ids = verify_closure_identities(l, &p)?;
            let pass = commutes && ids.holds();
            let text = format!(
                "weak diagram: {}\nVᵀΠV = (VᵀSV)*: {}\nΠVVᵀ = ΠVVᵀΠ: {}\n",
                verdict(commutes),
                verdict(ids.quotient_closure),
                verdict(ids.projection_absorbs)
            );
            let body = json!({
                "verdict": verdict(pass),
                "diagram": commutes,
                "quotient_closure": ids.quotient_closure,
                "projection_absorbs": ids.projection_absorbs,
            });
            Ok(Outcome { text, json: body, pass })
        }
        (Model::Lts(l), BisimKind::Branching) => {
            let pass = verify_branching_diagram(l, &p)?;
            Ok(Outcome {
                text: format!("branching diagram: {}\n", verdict(pass)),
                json: json!({ "verdict": verdict(pass), "diagram": pass }),
                pass,
            })
        }
        (Model::Mrc(c), BisimKind::Weak) => {
            let w = tau_distributor(cli, c, &p, dist)?;
            let residuals = times
                .iter()
                .map(|&t| mrc_diagram_residual(c, &p, &w, t, cli.tol))
                .collect::<Result<Vec<_>>>()?;
            let bound = 10.0 * cli.tol;
            let pass = residuals.iter().all(|&r| r <= bound);
            let mut text = format!("lumped limit vs limit lumped (bound {bound:e}): {}\n", verdict(pass));
            for (t, r) in times.iter().zip(&residuals) {
                text.push_str(&format!("  t = {t}: residual {r:e}\n"));
            }
            let body = json!({
                "verdict": verdict(pass),
                "bound": bound,
                "residuals": times.iter().zip(&residuals).map(|(t, r)| json!({ "t": t, "residual": r })).collect::<Vec<_>>(),
                "distributor": rows(w.matrix()),
            });
            Ok(Outcome { text, json: body, pass })
        }
        _ => Err(Error::InvalidModel(format!(
            "no {kind} diagram for this model; transition systems support weak and branching, chains weak"
        ))),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn run_probe(cli: &Cli, instances: usize, max_states: usize, output: Option<&PathBuf>) -> Result<Outcome> {
    let config = ProbeConfig {
        seed: cli.seed,
        instances,
        max_states,
        atol: cli.tol,
    };
    let outcome = probe(&config)?;
    let revalidated = outcome.revalidate(cli.tol)?;
    if let Some(dir) = output {
        fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidModel(format!("cannot create {}: {e}", dir.display())))?;
        for (k, c) in outcome.counterexamples.iter().enumerate() {
            let path = dir.join(format!("counterexample-{k}.mrc"));
            fs::write(&path, c.to_file())
                .map_err(|e| Error::InvalidModel(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    let mut text = format!(
        "seed {}: {} instances, {} partitions, {} branching bisimulations\n",
        outcome.seed, outcome.instances, outcome.pairs, outcome.branching_pairs
    );
    match outcome.counterexamples.first() {
        None => text.push_str("no counterexample\n"),
        Some(first) => {
            text.push_str(&format!(
                "{} counterexamples (branching but not weak); re-check: {}\n",
                outcome.counterexamples.len(),
                verdict(revalidated)
            ));
            text.push_str(&first.to_file());
        }
    }
    let body = json!({
        "verdict": verdict(revalidated),
        "revalidated": revalidated,
        "outcome": outcome,
    });
    Ok(Outcome { text, json: body, pass: revalidated })
}

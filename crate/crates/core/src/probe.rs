//! Random search for chains where a branching bisimulation is not weak.
//!
//! Each instance is a small random fast chain. Every non-discrete partition
//! of its states is tried; a pair that passes the branching check but fails
//! the weak check is a counterexample.

use serde::Serialize;

use crate::algebra::DEFAULT_ATOL;
use crate::error::Result;
use crate::mrc::{check_branching_mrc, check_weak_mrc, parse_mrc, write_mrc, MrcFast};
use crate::partition::{enumerate_partitions, parse_partition, write_partition, Partition};
use crate::random::{random_fast_mrc, seeded};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub seed: u64,
    pub instances: usize,
    /// Instances have between 2 and `max_states` states.
    pub max_states: usize,
    pub atol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            seed: 0,
            instances: 1000,
            max_states: 4,
            atol: DEFAULT_ATOL,
        }
    }
}

/// A chain and partition together with the verdicts observed for them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub model: String,
    pub partition: String,
    pub branching: bool,
    pub weak: bool,
    pub weak_violation: Option<String>,
}

impl Counterexample {
    fn new(instance: usize, chain: &MrcFast, p: &Partition, weak_violation: Option<String>) -> Self {
        Counterexample {
            instance,
            model: write_mrc(chain),
            partition: write_partition(p),
            branching: true,
            weak: false,
            weak_violation,
        }
    }

    /// Re-parses the stored texts and evaluates both checks again. Returns
    /// `(branching, weak)`.
    pub fn recheck(&self, atol: f64) -> Result<(bool, bool)> {
        let chain = parse_mrc(&self.model)?;
        let p = parse_partition(&self.partition)?;
        Ok((
            check_branching_mrc(&chain, &p, atol)?.pass(),
            check_weak_mrc(&chain, &p, atol)?.pass(),
        ))
    }

    /// Both texts in one file: the model, then the partition behind `#`.
    pub fn to_file(&self) -> String {
        let mut out = format!(
            "# instance {}: branching passes, weak fails",
            self.instance
        );
        if let Some(v) = &self.weak_violation {
            out.push_str(&format!(" on {v}"));
        }
        out.push('\n');
        out.push_str(&self.model);
        for line in self.partition.lines() {
            out.push_str("#> ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Counterexample::to_file`], re-evaluating the verdicts.
    pub fn from_file(text: &str, atol: f64) -> Result<Self> {
        let partition: String = text
            .lines()
            .filter_map(|l| l.strip_prefix("#> "))
            .map(|l| format!("{l}\n"))
            .collect();
        let chain = parse_mrc(text)?;
        let p = parse_partition(&partition)?;
        let weak = check_weak_mrc(&chain, &p, atol)?;
        Ok(Counterexample {
            instance: 0,
            model: write_mrc(&chain),
            partition: write_partition(&p),
            branching: check_branching_mrc(&chain, &p, atol)?.pass(),
            weak: weak.pass(),
            weak_violation: weak.violated_equality().map(str::to_owned),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub seed: u64,
    pub instances: usize,
    pub pairs: usize,
    pub branching_pairs: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ProbeOutcome {
    /// Re-evaluates every stored counterexample from its text.
    pub fn revalidate(&self, atol: f64) -> Result<bool> {
        for c in &self.counterexamples {
            if c.recheck(atol)? != (c.branching, c.weak) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn probe(config: &ProbeConfig) -> Result<ProbeOutcome> {
    let mut rng = seeded(config.seed);
    let mut outcome = ProbeOutcome {
        seed: config.seed,
        instances: config.instances,
        pairs: 0,
        branching_pairs: 0,
        counterexamples: Vec::new(),
    };
    for instance in 0..config.instances {
        let n = rng.random_range(2..=config.max_states.max(2));
        let slow = rng.random_range(0.1..0.6);
        let fast = rng.random_range(0.1..0.6);
        let chain = random_fast_mrc(&mut rng, n, slow, fast);
        for p in enumerate_partitions(n).filter(|p| !p.is_discrete()) {
            outcome.pairs += 1;
            if !check_branching_mrc(&chain, &p, config.atol)?.pass() {
                continue;
            }
            outcome.branching_pairs += 1;
            let weak = check_weak_mrc(&chain, &p, config.atol)?;
            if !weak.pass() {
                let violation = weak.violated_equality().map(str::to_owned);
                outcome
                    .counterexamples
                    .push(Counterexample::new(instance, &chain, &p, violation));
            }
        }
    }
    Ok(outcome)
}

//! Seeded generators for systems, chains, partitions and distributors.
//!
//! Everything is driven by a caller-owned [`ChaCha8Rng`], so a seed fixes the
//! whole sequence of instances on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ActionAlphabet, ActionMatrix, ActionSet, RealMatrix};
use crate::lts::Lts;
use crate::mrc::{Mrc, MrcFast};
use crate::partition::Partition;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Alphabet `a`, `b`, ... of the given size (at most 26).
pub fn letters(size: usize) -> ActionAlphabet {
    assert!(size <= 26, "at most 26 letters");
    ActionAlphabet::new((0..size).map(|i| char::from(b'a' + i as u8).to_string()))
        .expect("distinct letters")
}

/// Parameters for [`random_lts`].
#[derive(Clone, Copy, Debug)]
pub struct LtsShape {
    pub states: usize,
    pub labels: usize,
    /// Probability that a given label connects a given ordered pair.
    pub visible_density: f64,
    pub tau_density: f64,
    pub terminating: f64,
}

impl Default for LtsShape {
    fn default() -> Self {
        LtsShape {
            states: 5,
            labels: 2,
            visible_density: 0.2,
            tau_density: 0.2,
            terminating: 0.3,
        }
    }
}

pub fn random_lts(rng: &mut ChaCha8Rng, shape: &LtsShape) -> Lts {
    let n = shape.states;
    let alphabet = letters(shape.labels);
    let mut visible = Vec::new();
    let mut internal = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for a in 0..shape.labels {
                if rng.random_bool(shape.visible_density) {
                    visible.push((i, ActionSet::singleton(a), j));
                }
            }
            if rng.random_bool(shape.tau_density) {
                internal.push((i, j));
            }
        }
    }
    let terminating: Vec<usize> = (0..n).filter(|_| rng.random_bool(shape.terminating)).collect();
    let initial = rng.random_range(0..n);
    Lts::new(alphabet, n, initial, &visible, &internal, &terminating).expect("well-formed")
}

/// Uniform block count in `1..=n`, then a uniform label per state; empty
/// labels are dropped by canonicalisation.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    let k = rng.random_range(1..=n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    Partition::from_labels(&labels)
}

/// A random boolean distributor for the collector of `p`: row `k` is zero
/// outside block `k`, and inside it some member carries the full set while
/// the rest carry random subsets.
pub fn random_bool_distributor(rng: &mut ChaCha8Rng, p: &Partition, universe: ActionSet) -> ActionMatrix {
    let mut u = ActionMatrix::zeros(p.len(), p.state_count(), universe);
    for (k, block) in p.blocks().iter().enumerate() {
        let full = block[rng.random_range(0..block.len())];
        for &s in block {
            let set = if s == full {
                universe
            } else {
                ActionSet::from_bits(rng.random::<u128>()).intersect(universe)
            };
            u.set(k, s, set);
        }
    }
    u
}

/// A random real distributor: row `k` is a random probability vector on
/// block `k` with every member weighted at least 0.05.
pub fn random_real_distributor(rng: &mut ChaCha8Rng, p: &Partition) -> RealMatrix {
    let mut u = RealMatrix::zeros(p.len(), p.state_count());
    for (k, block) in p.blocks().iter().enumerate() {
        let weights: Vec<f64> = block.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (&s, w) in block.iter().zip(weights) {
            u[(k, s)] = w / total;
        }
    }
    u
}

fn generator_from_rates(mut rates: RealMatrix) -> RealMatrix {
    for i in 0..rates.rows() {
        rates[(i, i)] = 0.0;
        let out: f64 = rates.row(i).iter().sum();
        rates[(i, i)] = -out;
    }
    rates
}

/// Generator with integer rates in `1..=max_rate` on a `density` fraction of
/// the off-diagonal pairs.
pub fn random_generator(rng: &mut ChaCha8Rng, n: usize, density: f64, max_rate: u32) -> RealMatrix {
    let rates = RealMatrix::from_fn(n, n, |i, j| {
        if i != j && rng.random_bool(density) {
            f64::from(rng.random_range(1..=max_rate))
        } else {
            0.0
        }
    });
    generator_from_rates(rates)
}

fn random_sigma(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut sigma = vec![0.0; n];
    sigma[rng.random_range(0..n)] = 1.0;
    sigma
}

fn random_rewards(rng: &mut ChaCha8Rng, n: usize, distinct: u32) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.random_range(0..distinct))).collect()
}

/// Chain with integer rates and rewards drawn from `0..3`.
pub fn random_mrc(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Mrc {
    let q = random_generator(rng, n, density, 3);
    let sigma = random_sigma(rng, n);
    let rho = random_rewards(rng, n, 3);
    Mrc::new(sigma, q, rho).expect("well-formed")
}

/// Chain with independent random slow and fast generators.
pub fn random_fast_mrc(rng: &mut ChaCha8Rng, n: usize, slow: f64, fast: f64) -> MrcFast {
    let qs = random_generator(rng, n, slow, 3);
    let qf = random_generator(rng, n, fast, 3);
    let sigma = random_sigma(rng, n);
    let rho = random_rewards(rng, n, 2);
    MrcFast::new(sigma, qs, qf, rho).expect("well-formed")
}

/// Splits `total` into `parts` nonnegative shares, uniformly at random.
fn split(rng: &mut ChaCha8Rng, total: f64, parts: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..parts - 1).map(|_| rng.random::<f64>() * total).collect();
    cuts.push(0.0);
    cuts.push(total);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| w[1] - w[0]).collect()
}

fn block_sizes(rng: &mut ChaCha8Rng, classes: usize, max_copies: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (0..classes).map(|_| rng.random_range(1..=max_copies)).collect();
    if sizes.iter().all(|&s| s == 1) {
        let k = rng.random_range(0..classes);
        sizes[k] = 2.max(max_copies);
    }
    sizes
}

/// Shuffled state numbering for blocks of the given sizes.
fn shuffled_blocks(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = sizes.iter().sum();
    let mut states: Vec<usize> = (0..n).collect();
    states.shuffle(rng);
    let mut blocks = Vec::new();
    let mut rest = states.as_slice();
    for &s in sizes {
        let (head, tail) = rest.split_at(s);
        blocks.push(head.to_vec());
        rest = tail;
    }
    blocks
}

/// A chain with a planted ordinary lumping: every state of a random
/// `classes`-state chain is duplicated up to `max_copies` times and its rate
/// into each other class is split randomly among that class's copies. At
/// least one class has two or more copies.
pub fn planted_lumpable_mrc(rng: &mut ChaCha8Rng, classes: usize, max_copies: usize) -> (Mrc, Partition) {
    let base = random_generator(rng, classes, 0.6, 4);
    let rewards = random_rewards(rng, classes, 4);
    let sizes = block_sizes(rng, classes, max_copies);
    let blocks = shuffled_blocks(rng, &sizes);
    let n: usize = sizes.iter().sum();

    let mut rates = RealMatrix::zeros(n, n);
    let mut rho = vec![0.0; n];
    for (k, block) in blocks.iter().enumerate() {
        for &s in block {
            rho[s] = rewards[k];
            for (l, target) in blocks.iter().enumerate() {
                if l == k {
                    // Moves inside the own class are unconstrained.
                    for &d in target.iter().filter(|&&d| d != s) {
                        if rng.random_bool(0.3) {
                            rates[(s, d)] = f64::from(rng.random_range(1..=3u32));
                        }
                    }
                } else {
                    for (&d, share) in target.iter().zip(split(rng, base[(k, l)], target.len())) {
                        rates[(s, d)] = share;
                    }
                }
            }
        }
    }
    let sigma = {
        let w = split(rng, 1.0, n);
        let total: f64 = w.iter().sum();
        w.iter().map(|x| x / total).collect()
    };
    let mrc = Mrc::new(sigma, generator_from_rates(rates), rho).expect("well-formed");
    let partition = Partition::new(n, blocks).expect("blocks cover the states");
    (mrc, partition)
}

/// A fast chain with a planted weak lumping whose fast transitions stay
/// inside classes.
///
/// Inside each class the fast generator is random; its recurrent states share
/// the class reward and send the same total slow rate into every other class.
/// Transient states (for the fast part) get arbitrary rewards and slow rates.
pub fn planted_weak_fast_mrc(rng: &mut ChaCha8Rng, classes: usize, max_copies: usize) -> (MrcFast, Partition) {
    let base = random_generator(rng, classes, 0.6, 4);
    let rewards = random_rewards(rng, classes, 4);
    let sizes = block_sizes(rng, classes, max_copies);
    let blocks = shuffled_blocks(rng, &sizes);
    let n: usize = sizes.iter().sum();

    let mut fast = RealMatrix::zeros(n, n);
    for block in &blocks {
        for &s in block {
            for &d in block.iter().filter(|&&d| d != s) {
                if rng.random_bool(0.4) {
                    fast[(s, d)] = f64::from(rng.random_range(1..=3u32));
                }
            }
        }
    }
    let qf = generator_from_rates(fast);
    let projection = crate::mrc::ergodic_projection(&qf).expect("generator");

    let mut slow = RealMatrix::zeros(n, n);
    let mut rho = vec![0.0; n];
    for (k, block) in blocks.iter().enumerate() {
        for &s in block {
            let recurrent = !projection.transient.contains(&s);
            rho[s] = if recurrent {
                rewards[k]
            } else {
                f64::from(rng.random_range(0..4u32))
            };
            for (l, target) in blocks.iter().enumerate() {
                if l == k || !recurrent {
                    for &d in target.iter().filter(|&&d| d != s) {
                        if rng.random_bool(0.3) {
                            slow[(s, d)] = f64::from(rng.random_range(1..=3u32));
                        }
                    }
                } else {
                    for (&d, share) in target.iter().zip(split(rng, base[(k, l)], target.len())) {
                        slow[(s, d)] = share;
                    }
                }
            }
        }
    }
    let sigma = random_sigma(rng, n);
    let mrc = MrcFast::new(sigma, generator_from_rates(slow), qf, rho).expect("well-formed");
    (mrc, Partition::new(n, blocks).expect("blocks cover the states"))
}

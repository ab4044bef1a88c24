//! Coarsest-bisimulation search by signature refinement, and the exhaustive
//! enumeration used as its oracle.

use std::collections::HashMap;
use std::hash::Hash;

use super::Partition;
use crate::error::{Error, Result};
use crate::report::BisimKind;

/// Bell-number guard for exhaustive enumeration (B₁₂ ≈ 4.2 million).
pub const BRUTE_FORCE_MAX_STATES: usize = 12;

/// A model whose bisimulations can be searched by refinement.
///
/// Every matrix condition of the form `VU·X·V = X·V` says that the rows of
/// `X·V` are constant on each block, so a state's *signature* under a
/// partition is the concatenation of its rows of the condition matrices.
pub trait Refinable {
    fn state_count(&self) -> usize;

    /// Splits every block of `p` into groups of states whose signatures,
    /// computed under `p`, agree. Never merges blocks.
    fn split(&self, kind: BisimKind, p: &Partition) -> Partition;

    /// The model's own check of `p` as a bisimulation of the given kind.
    fn is_bisimulation(&self, kind: BisimKind, p: &Partition) -> bool;

    /// True when no refinement step can separate states related by some
    /// bisimulation, which makes the refinement fixpoint the coarsest one.
    /// Kinds whose closure depends on the partition in a non-monotone way
    /// return false and get an additional lattice search.
    fn refinement_is_exact(&self, kind: BisimKind) -> bool;
}

/// Coarsest partition passing the model's check of the given kind.
///
/// Starts from the one-block partition and splits to a fixpoint. For kinds
/// without exact refinement the fixpoint bounds a search, in order of block
/// count, for a partition with as few blocks as possible (ties broken by
/// canonical order); above [`BRUTE_FORCE_MAX_STATES`] states the fixpoint is
/// returned as is.
pub fn coarsest_partition<M: Refinable + ?Sized>(model: &M, kind: BisimKind) -> Partition {
    let n = model.state_count();
    let mut p = Partition::single(n);
    loop {
        let next = model.split(kind, &p);
        debug_assert!(next.refines(&p));
        if next == p {
            break;
        }
        p = next;
    }
    if !model.refinement_is_exact(kind) && n <= BRUTE_FORCE_MAX_STATES {
        for blocks in 1..p.len() {
            let best = partitions_with_blocks(n, blocks)
                .into_iter()
                .filter(|q| model.is_bisimulation(kind, q))
                .min();
            if let Some(q) = best {
                return q;
            }
        }
        // Same block count as the fixpoint: the canonical minimum wins.
        if let Some(q) = partitions_with_blocks(n, p.len())
            .into_iter()
            .filter(|q| q < &p && model.is_bisimulation(kind, q))
            .min()
        {
            return q;
        }
    }
    p
}

/// All partitions of `n` states into exactly `blocks` blocks.
fn partitions_with_blocks(n: usize, blocks: usize) -> Vec<Partition> {
    fn go(
        state: usize,
        n: usize,
        target: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Partition>,
    ) {
        if state == n {
            if current.len() == target {
                out.push(Partition {
                    n,
                    blocks: current.clone(),
                });
            }
            return;
        }
        // Not enough states left to open the missing blocks.
        if n - state < target - current.len() {
            return;
        }
        for b in 0..current.len() {
            current[b].push(state);
            go(state + 1, n, target, current, out);
            current[b].pop();
        }
        if current.len() < target {
            current.push(vec![state]);
            go(state + 1, n, target, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if blocks <= n && (blocks > 0 || n == 0) {
        go(0, n, blocks, &mut Vec::new(), &mut out);
    }
    out
}

/// Every partition of `{0, .., n-1}`, generated as restricted growth strings.
pub fn enumerate_partitions(n: usize) -> impl Iterator<Item = Partition> {
    let mut labels = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let p = Partition::from_labels(&labels);
        // Next restricted growth string: labels[i] ≤ 1 + max(labels[..i]).
        done = true;
        for i in (1..n).rev() {
            let max_prefix = labels[..i].iter().copied().max().unwrap_or(0);
            if labels[i] <= max_prefix {
                labels[i] += 1;
                for l in &mut labels[i + 1..] {
                    *l = 0;
                }
                done = false;
                break;
            }
        }
        Some(p)
    })
}

/// Exhaustive oracle: the passing partition with the fewest blocks, ties
/// broken by the lexicographically smallest canonical form.
pub fn brute_force_coarsest(
    n: usize,
    mut checker: impl FnMut(&Partition) -> bool,
) -> Result<Partition> {
    if n > BRUTE_FORCE_MAX_STATES {
        return Err(Error::TooManyStates {
            states: n,
            bound: BRUTE_FORCE_MAX_STATES,
        });
    }
    enumerate_partitions(n)
        .filter(|p| checker(p))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .ok_or_else(|| Error::Inconsistent("no partition passes the check".into()))
}

/// Splits each block of `p` by exact key equality.
pub fn group_by_key<K: Eq + Hash>(p: &Partition, keys: &[K]) -> Partition {
    let mut blocks = Vec::with_capacity(p.len());
    for block in p.blocks() {
        let mut index: HashMap<&K, usize> = HashMap::new();
        let start = blocks.len();
        for &s in block {
            let next = blocks.len() - start;
            let g = *index.entry(&keys[s]).or_insert(next);
            if g == next {
                blocks.push(Vec::new());
            }
            blocks[start + g].push(s);
        }
    }
    Partition::new(p.state_count(), blocks).expect("splitting preserves partition validity")
}

/// Splits each block of `p` by real-valued keys: a state joins the first
/// group whose representative (its first member) is within `atol` in every
/// coordinate, otherwise it opens a new group.
pub fn group_by_real_key(p: &Partition, keys: &[Vec<f64>], atol: f64) -> Partition {
    let mut blocks = Vec::with_capacity(p.len());
    for block in p.blocks() {
        let start = blocks.len();
        for &s in block {
            let found = (start..blocks.len()).find(|&g| {
                let rep: &Vec<usize> = &blocks[g];
                keys[rep[0]]
                    .iter()
                    .zip(&keys[s])
                    .all(|(a, b): (&f64, &f64)| (a - b).abs() <= atol)
            });
            match found {
                Some(g) => blocks[g].push(s),
                None => blocks.push(vec![s]),
            }
        }
    }
    Partition::new(p.state_count(), blocks).expect("splitting preserves partition validity")
}

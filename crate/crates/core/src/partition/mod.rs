//! Partitions of states, their collector and distributor matrices, and the
//! coarsest-bisimulation search.

mod format;
mod refine;

use std::fmt;

use crate::algebra::{ActionMatrix, ActionSet, RealMatrix};
use crate::error::{Error, Result};

pub use format::{parse_partition, write_partition};
pub use refine::{
    brute_force_coarsest, coarsest_partition, enumerate_partitions, group_by_key,
    group_by_real_key, Refinable, BRUTE_FORCE_MAX_STATES,
};

/// A partition of `{0, .., n-1}` into nonempty blocks.
///
/// Blocks are kept sorted and ordered by their smallest member, so two
/// partitions are equal iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &s in block.iter() {
                if s >= n {
                    return Err(Error::InvalidPartition(format!("state {s} out of range 0..{n}")));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidPartition(format!("state {s} appears twice")));
                }
            }
            block.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("state {missing} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    /// Builds a partition from a block label per state; labels are arbitrary.
    pub fn from_labels<K: Eq + std::hash::Hash>(labels: &[K]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (s, label) in labels.iter().enumerate() {
            let b = *index.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(s);
        }
        // First occurrence order already sorts blocks by smallest member.
        Partition {
            n: labels.len(),
            blocks,
        }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            n,
            blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block index of every state.
    pub fn assignment(&self) -> Vec<usize> {
        let mut a = vec![0; self.n];
        for (k, block) in self.blocks.iter().enumerate() {
            for &s in block {
                a[s] = k;
            }
        }
        a
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let a = other.assignment();
        self.n == other.n
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&s| a[s] == a[b[0]]))
    }

    /// Boolean collector `V`, `n × N`, with `1` the given universe.
    pub fn bool_collector(&self, universe: ActionSet) -> ActionMatrix {
        let a = self.assignment();
        ActionMatrix::from_bools(self.n, self.len(), universe, |i, k| a[i] == k)
    }

    /// Real collector `V`, `n × N`, with 0/1 entries.
    pub fn real_collector(&self) -> RealMatrix {
        let a = self.assignment();
        RealMatrix::from_fn(self.n, self.len(), |i, k| if a[i] == k { 1.0 } else { 0.0 })
    }

    /// Canonical real distributor: each row of `Vᵀ` divided by its block size.
    pub fn real_distributor(&self) -> RealMatrix {
        let mut u = RealMatrix::zeros(self.len(), self.n);
        for (k, block) in self.blocks.iter().enumerate() {
            let w = 1.0 / block.len() as f64;
            for &s in block {
                u[(k, s)] = w;
            }
        }
        u
    }

    pub fn from_bool_collector(v: &ActionMatrix) -> Result<Self> {
        let mut labels = Vec::with_capacity(v.rows());
        for i in 0..v.rows() {
            let ones: Vec<usize> = (0..v.cols()).filter(|&k| !v.get(i, k).is_empty()).collect();
            if ones.len() != 1 || !v.is_one(i, ones[0]) {
                return Err(Error::InvalidCollector(format!(
                    "row {i} must contain exactly one 1"
                )));
            }
            labels.push(ones[0]);
        }
        Self::from_collector_labels(v.cols(), &labels)
    }

    pub fn from_real_collector(v: &RealMatrix) -> Result<Self> {
        let mut labels = Vec::with_capacity(v.rows());
        for i in 0..v.rows() {
            let row = v.row(i);
            if row.iter().any(|&x| x != 0.0 && x != 1.0) {
                return Err(Error::InvalidCollector(format!("row {i} is not 0-1")));
            }
            let ones: Vec<usize> = (0..v.cols()).filter(|&k| row[k] == 1.0).collect();
            if ones.len() != 1 {
                return Err(Error::InvalidCollector(format!(
                    "row {i} must contain exactly one 1"
                )));
            }
            labels.push(ones[0]);
        }
        Self::from_collector_labels(v.cols(), &labels)
    }

    fn from_collector_labels(cols: usize, labels: &[usize]) -> Result<Self> {
        let mut used = vec![false; cols];
        for &k in labels {
            used[k] = true;
        }
        if let Some(k) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidCollector(format!("column {k} is empty")));
        }
        Ok(Self::from_labels(labels))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let s: Vec<String> = b.iter().map(ToString::to_string).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    Boolean,
    Real,
}

/// A collector matrix over either carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum Collector {
    Boolean(ActionMatrix),
    Real(RealMatrix),
}

/// A distributor matrix over either carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum Distributor {
    Boolean(ActionMatrix),
    Real(RealMatrix),
}

/// `V[i, k] = 1` iff state `i` lies in block `k`. The boolean carrier uses
/// `universe` as its `1`.
pub fn partition_to_collector(p: &Partition, carrier: Carrier, universe: ActionSet) -> Collector {
    match carrier {
        Carrier::Boolean => Collector::Boolean(p.bool_collector(universe)),
        Carrier::Real => Collector::Real(p.real_collector()),
    }
}

pub fn collector_to_partition(v: &Collector) -> Result<Partition> {
    match v {
        Collector::Boolean(m) => Partition::from_bool_collector(m),
        Collector::Real(m) => Partition::from_real_collector(m),
    }
}

/// `Vᵀ` for the boolean carrier, the row-normalised `Vᵀ` for the reals.
/// The result is checked to satisfy `U·1 = 1` and `UV = I`.
pub fn canonical_distributor(v: &Collector) -> Result<Distributor> {
    let p = collector_to_partition(v)?;
    let u = match v {
        Collector::Boolean(m) => Distributor::Boolean(m.transpose()),
        Collector::Real(_) => Distributor::Real(p.real_distributor()),
    };
    verify_distributor(v, &u, crate::algebra::DEFAULT_ATOL)?;
    Ok(u)
}

/// Checks `U·1 = 1` and `UV = I` (exactly for booleans, to `atol` for reals).
pub fn verify_distributor(v: &Collector, u: &Distributor, atol: f64) -> Result<()> {
    match (v, u) {
        (Collector::Boolean(v), Distributor::Boolean(u)) => {
            let ones = ActionMatrix::ones(u.cols(), 1, u.universe());
            if u.mul(&ones)? != ActionMatrix::ones(u.rows(), 1, u.universe()) {
                return Err(Error::InvalidDistributor("U·1 ≠ 1".into()));
            }
            if u.mul(v)? != ActionMatrix::identity(v.cols(), v.universe()) {
                return Err(Error::InvalidDistributor("UV ≠ I".into()));
            }
            Ok(())
        }
        (Collector::Real(v), Distributor::Real(u)) => verify_real_distributor(v, u, atol),
        _ => Err(Error::InvalidDistributor("carrier mismatch".into())),
    }
}

pub(crate) fn verify_real_distributor(v: &RealMatrix, u: &RealMatrix, atol: f64) -> Result<()> {
    let ones = RealMatrix::filled(u.cols(), 1, 1.0);
    let r = u.mul(&ones)?.max_abs_diff(&RealMatrix::filled(u.rows(), 1, 1.0));
    if r > atol {
        return Err(Error::InvalidDistributor(format!("U·1 ≠ 1 (residual {r:e})")));
    }
    let r = u.mul(v)?.max_abs_diff(&RealMatrix::identity(v.cols()));
    if r > atol {
        return Err(Error::InvalidDistributor(format!("UV ≠ I (residual {r:e})")));
    }
    Ok(())
}

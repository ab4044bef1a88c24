//! Ergodic projection `Π = lim_{t→∞} e^{Qt}`, computed structurally.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::validate_generator;
use crate::algebra::{solve_linear, RealMatrix, DEFAULT_ATOL};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct ErgodicProjection {
    /// `Π`, `n × n`.
    pub pi: RealMatrix,
    /// Closed communicating classes, each sorted, ordered by smallest member.
    pub recurrent_classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
    /// `n × K`: probability of ending up in each recurrent class.
    pub trapping: RealMatrix,
    /// `K × n`: stationary distribution of each recurrent class.
    pub stationary: RealMatrix,
}

impl ErgodicProjection {
    pub fn class_count(&self) -> usize {
        self.recurrent_classes.len()
    }
}

pub fn ergodic_projection(q: &RealMatrix) -> Result<ErgodicProjection> {
    ergodic_projection_with(q, DEFAULT_ATOL)
}

/// Rates not exceeding `atol` are treated as absent when finding classes.
///
/// `Π = L·M` where row `k` of `M` is the stationary vector of the `k`-th
/// closed class and `L[i, k]` is the probability of being trapped in it from
/// state `i`, obtained from the absorption system `-Q_TT·X = Q_T,E_k·1`.
pub fn ergodic_projection_with(q: &RealMatrix, atol: f64) -> Result<ErgodicProjection> {
    validate_generator(q, atol.max(1e-12 * q.max_abs()))?;
    let n = q.rows();

    let mut graph = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if q[(i, j)] > atol {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut component = vec![0usize; n];
    let sccs = tarjan_scc(&graph);
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let closed = |c: usize| {
        sccs[c].iter().all(|node| {
            let i = node.index();
            (0..n).all(|j| component[j] == c || q[(i, j)] <= atol)
        })
    };
    let mut recurrent_classes: Vec<Vec<usize>> = (0..sccs.len())
        .filter(|&c| closed(c))
        .map(|c| {
            let mut states: Vec<usize> = sccs[c].iter().map(|n| n.index()).collect();
            states.sort_unstable();
            states
        })
        .collect();
    recurrent_classes.sort_unstable_by_key(|c| c[0]);
    let mut class_of = vec![None; n];
    for (k, class) in recurrent_classes.iter().enumerate() {
        for &s in class {
            class_of[s] = Some(k);
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&s| class_of[s].is_none()).collect();
    let classes = recurrent_classes.len();

    let mut stationary = RealMatrix::zeros(classes, n);
    for (k, class) in recurrent_classes.iter().enumerate() {
        let mu = class_stationary(q, class)?;
        for (&s, &p) in class.iter().zip(&mu) {
            stationary[(k, s)] = p;
        }
    }

    let mut trapping = RealMatrix::zeros(n, classes);
    for (s, k) in class_of.iter().enumerate() {
        if let Some(k) = k {
            trapping[(s, *k)] = 1.0;
        }
    }
    if !transient.is_empty() {
        let t = transient.len();
        let a = RealMatrix::from_fn(t, t, |i, j| -q[(transient[i], transient[j])]);
        let b = RealMatrix::from_fn(t, classes, |i, k| {
            recurrent_classes[k]
                .iter()
                .map(|&j| q[(transient[i], j)])
                .sum()
        });
        let x = solve_linear(&a, &b)?;
        for (i, &s) in transient.iter().enumerate() {
            for k in 0..classes {
                trapping[(s, k)] = x[(i, k)];
            }
        }
    }

    let pi = trapping.mul(&stationary)?;
    Ok(ErgodicProjection {
        pi,
        recurrent_classes,
        transient,
        trapping,
        stationary,
    })
}

/// Solves `μ Q_E = 0`, `Σ μ = 1` on one irreducible closed class.
fn class_stationary(q: &RealMatrix, class: &[usize]) -> Result<Vec<f64>> {
    let m = class.len();
    if m == 1 {
        return Ok(vec![1.0]);
    }
    // Transposed balance equations with the last one replaced by normalisation.
    let a = RealMatrix::from_fn(m, m, |i, j| {
        if i == m - 1 {
            1.0
        } else {
            q[(class[j], class[i])]
        }
    });
    let mut b = RealMatrix::zeros(m, 1);
    b[(m - 1, 0)] = 1.0;
    let mu = solve_linear(&a, &b)?;
    Ok((0..m).map(|i| mu[(i, 0)]).collect())
}

//! Transition systems with explicit termination, as matrices over action sets.

mod bisim;
mod diagram;
mod format;

pub use bisim::{
    check_branching_lts, check_relational_strong, check_strong_lts, check_strong_lts_with,
    check_weak_lts, check_weak_lts_with, lump_branching_lts, lump_strong_lts,
    lump_strong_lts_with, lump_weak_lts, tau_closure, WeakReading,
};
pub use diagram::{
    verify_branching_diagram, verify_closure_identities, verify_weak_diagram, ClosureIdentities,
};
pub use format::{parse_lts, write_lts};

use crate::algebra::{ActionAlphabet, ActionMatrix, ActionSet};
use crate::error::{Error, Result};

/// `(σ, A, S, ρ)`: initial vector, visible transitions, internal steps and
/// termination vector. The full transition matrix is `T = A + {tau}·S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lts {
    alphabet: ActionAlphabet,
    sigma: ActionMatrix,
    visible: ActionMatrix,
    internal: ActionMatrix,
    rho: ActionMatrix,
}

impl Lts {
    /// Validates and assembles a system from its four matrices.
    pub fn from_matrices(
        alphabet: ActionAlphabet,
        sigma: ActionMatrix,
        visible: ActionMatrix,
        internal: ActionMatrix,
        rho: ActionMatrix,
    ) -> Result<Self> {
        let n = visible.rows();
        let universe = alphabet.universe();
        let shapes = [
            ("sigma", sigma.dims(), (1, n)),
            ("A", visible.dims(), (n, n)),
            ("S", internal.dims(), (n, n)),
            ("rho", rho.dims(), (n, 1)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::InvalidModel(format!(
                    "{name} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )));
            }
        }
        for m in [&sigma, &visible, &internal, &rho] {
            if m.universe() != universe {
                return Err(Error::InvalidModel("matrix universe differs from the alphabet".into()));
            }
        }
        if n == 0 {
            return Err(Error::InvalidModel("a system needs at least one state".into()));
        }
        if !sigma.is_zero_one() || (0..n).filter(|&j| sigma.is_one(0, j)).count() != 1 {
            return Err(Error::InvalidModel(
                "initial vector must be 0-1 with exactly one nonzero entry".into(),
            ));
        }
        let tau = alphabet.tau();
        if (0..n).any(|i| (0..n).any(|j| !visible.get(i, j).intersect(tau).is_empty())) {
            return Err(Error::InvalidModel("visible matrix contains tau".into()));
        }
        if !internal.is_zero_one() {
            return Err(Error::InvalidModel("internal matrix is not 0-1".into()));
        }
        if !rho.is_zero_one() {
            return Err(Error::InvalidModel("termination vector is not 0-1".into()));
        }
        Ok(Lts {
            alphabet,
            sigma,
            visible,
            internal,
            rho,
        })
    }

    /// Builds a system from an initial state, a list of `(src, actions, dst)`
    /// visible steps, `(src, dst)` internal steps and a termination flag per state.
    pub fn new(
        alphabet: ActionAlphabet,
        n: usize,
        initial: usize,
        visible: &[(usize, ActionSet, usize)],
        internal: &[(usize, usize)],
        terminating: &[usize],
    ) -> Result<Self> {
        let u = alphabet.universe();
        if initial >= n {
            return Err(Error::InvalidModel(format!("initial state {initial} out of range")));
        }
        let mut a = ActionMatrix::zeros(n, n, u);
        for &(s, acts, d) in visible {
            check_state(s, n)?;
            check_state(d, n)?;
            a.set(s, d, a.get(s, d).union(acts));
        }
        let mut s_mat = ActionMatrix::zeros(n, n, u);
        for &(s, d) in internal {
            check_state(s, n)?;
            check_state(d, n)?;
            s_mat.set(s, d, u);
        }
        let mut rho = ActionMatrix::zeros(n, 1, u);
        for &t in terminating {
            check_state(t, n)?;
            rho.set(t, 0, u);
        }
        let sigma = ActionMatrix::from_bools(1, n, u, |_, j| j == initial);
        Self::from_matrices(alphabet, sigma, a, s_mat, rho)
    }

    /// Splits a full transition matrix into `A + {tau}·S`.
    pub fn from_combined(
        alphabet: ActionAlphabet,
        sigma: ActionMatrix,
        combined: &ActionMatrix,
        rho: ActionMatrix,
    ) -> Result<Self> {
        let u = alphabet.universe();
        let tau = alphabet.tau();
        let visible_mask = alphabet.visible();
        let n = combined.rows();
        let a = ActionMatrix::from_fn(n, combined.cols(), u, |i, j| {
            combined.get(i, j).intersect(visible_mask)
        });
        let s = ActionMatrix::from_bools(n, combined.cols(), u, |i, j| {
            !combined.get(i, j).intersect(tau).is_empty()
        });
        Self::from_matrices(alphabet, sigma, a, s, rho)
    }

    /// `T = A + {tau}·S`.
    pub fn combined(&self) -> ActionMatrix {
        let tau_steps = self.internal.scale(self.alphabet.tau());
        self.visible
            .add(&tau_steps)
            .expect("components share shape and universe")
    }

    pub fn alphabet(&self) -> &ActionAlphabet {
        &self.alphabet
    }

    pub fn universe(&self) -> ActionSet {
        self.alphabet.universe()
    }

    pub fn state_count(&self) -> usize {
        self.visible.rows()
    }

    pub fn sigma(&self) -> &ActionMatrix {
        &self.sigma
    }

    pub fn visible(&self) -> &ActionMatrix {
        &self.visible
    }

    pub fn internal(&self) -> &ActionMatrix {
        &self.internal
    }

    pub fn rho(&self) -> &ActionMatrix {
        &self.rho
    }

    pub fn initial_state(&self) -> usize {
        (0..self.state_count())
            .find(|&j| self.sigma.is_one(0, j))
            .expect("validated on construction")
    }

    pub fn is_terminating(&self, state: usize) -> bool {
        self.rho.is_one(state, 0)
    }

    /// `Π = S*`.
    pub fn tau_reach(&self) -> ActionMatrix {
        self.internal.rt_closure().expect("S is 0-1 and square")
    }
}

fn check_state(s: usize, n: usize) -> Result<()> {
    if s >= n {
        Err(Error::InvalidModel(format!("state {s} out of range 0..{n}")))
    } else {
        Ok(())
    }
}

/// The four-state system with a branching `a` from the initial state used
/// throughout the examples and tests.
pub fn figure_one() -> Lts {
    let al = ActionAlphabet::new(["a", "b", "c", "d"]).expect("valid alphabet");
    let set = |labels: &[&str]| al.set_of(labels.iter().copied()).expect("known labels");
    let visible = [
        (0, set(&["a"]), 1),
        (0, set(&["a"]), 2),
        (1, set(&["b", "c"]), 3),
        (2, set(&["b"]), 3),
        (3, set(&["d"]), 2),
    ];
    Lts::new(al.clone(), 4, 0, &visible, &[], &[0, 3]).expect("valid system")
}

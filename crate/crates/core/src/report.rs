//! Verdicts of bisimulation checks.

use std::fmt;

use serde::Serialize;

use crate::algebra::{ActionAlphabet, ActionMatrix, RealMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BisimKind {
    Strong,
    Weak,
    Branching,
}

impl BisimKind {
    pub const ALL: [BisimKind; 3] = [BisimKind::Strong, BisimKind::Weak, BisimKind::Branching];
}

impl fmt::Display for BisimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            BisimKind::Strong => "strong",
            BisimKind::Weak => "weak",
            BisimKind::Branching => "branching",
        })
    }
}

/// The first entry at which the two sides of an equality disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// Name of the failed matrix equality, e.g. `VUAV = AV`.
    pub equality: String,
    pub witness: Witness,
    /// `max |lhs - rhs|` over the whole equality; real carrier only.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub kind: BisimKind,
    pub violated: Option<Violation>,
}

impl CheckReport {
    pub fn passed(kind: BisimKind) -> Self {
        CheckReport {
            kind,
            violated: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.violated.is_none()
    }

    pub fn violated_equality(&self) -> Option<&str> {
        self.violated.as_ref().map(|v| v.equality.as_str())
    }

    pub fn summary(&self) -> String {
        match &self.violated {
            None => format!("{} bisimulation: pass", self.kind),
            Some(v) => {
                let mut s = format!(
                    "{} bisimulation: fail on `{}` at ({}, {}): lhs {} vs rhs {}",
                    self.kind, v.equality, v.witness.row, v.witness.col, v.witness.lhs, v.witness.rhs
                );
                if let Some(r) = v.residual {
                    s.push_str(&format!(" (residual {r:e})"));
                }
                s
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Eq,
    Leq,
}

/// One named condition `lhs = rhs` (or `lhs ≤ rhs`) over action sets.
pub(crate) struct BoolCondition {
    pub name: String,
    pub lhs: ActionMatrix,
    pub rhs: ActionMatrix,
    pub relation: Relation,
}

impl BoolCondition {
    pub fn eq(name: impl Into<String>, lhs: ActionMatrix, rhs: ActionMatrix) -> Self {
        BoolCondition {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
        }
    }

    pub fn leq(name: impl Into<String>, lhs: ActionMatrix, rhs: ActionMatrix) -> Self {
        BoolCondition {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Leq,
        }
    }

    pub fn violation(&self, alphabet: &ActionAlphabet) -> Option<Violation> {
        let (rows, cols) = self.lhs.dims();
        let at = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let (a, b) = (self.lhs.get(i, j), self.rhs.get(i, j));
                match self.relation {
                    Relation::Eq => a != b,
                    Relation::Leq => !a.is_subset(b),
                }
            })?;
        Some(Violation {
            equality: self.name.clone(),
            witness: Witness {
                row: at.0,
                col: at.1,
                lhs: alphabet.render(self.lhs.get(at.0, at.1)),
                rhs: alphabet.render(self.rhs.get(at.0, at.1)),
            },
            residual: None,
        })
    }
}

/// One named condition `lhs = rhs` over the reals, within `atol`.
pub(crate) struct RealCondition {
    pub name: String,
    pub lhs: RealMatrix,
    pub rhs: RealMatrix,
}

impl RealCondition {
    pub fn new(name: impl Into<String>, lhs: RealMatrix, rhs: RealMatrix) -> Self {
        RealCondition {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    pub fn violation(&self, atol: f64) -> Option<Violation> {
        let (i, j) = self.lhs.first_deviation(&self.rhs, atol)?;
        Some(Violation {
            equality: self.name.clone(),
            witness: Witness {
                row: i,
                col: j,
                lhs: format!("{}", self.lhs[(i, j)]),
                rhs: format!("{}", self.rhs[(i, j)]),
            },
            residual: Some(self.lhs.max_abs_diff(&self.rhs)),
        })
    }
}

pub(crate) fn first_bool_violation(
    kind: BisimKind,
    alphabet: &ActionAlphabet,
    conditions: impl IntoIterator<Item = BoolCondition>,
) -> CheckReport {
    CheckReport {
        kind,
        violated: conditions.into_iter().find_map(|c| c.violation(alphabet)),
    }
}

pub(crate) fn first_real_violation(
    kind: BisimKind,
    atol: f64,
    conditions: impl IntoIterator<Item = RealCondition>,
) -> CheckReport {
    CheckReport {
        kind,
        violated: conditions.into_iter().find_map(|c| c.violation(atol)),
    }
}

//! Markov reward chains, with and without fast (`tau`-scaled) transitions.

mod bisim;
mod ergodic;
mod fast;
mod format;
mod transient;

pub use bisim::{
    adapt_diagonal, check_branching_mrc, check_strong_fast, check_strong_mrc,
    check_strong_mrc_with, check_weak_mrc, lump_strong_fast, lump_strong_mrc, lump_strong_mrc_with,
    MrcSearch,
};
pub use ergodic::{ergodic_projection, ergodic_projection_with, ErgodicProjection};
pub use fast::{
    check_strong_discontinuous, default_tau_distributor, limit_chain, lump_weak_mrc,
    mrc_diagram_residual, tau_residuals, verify_mrc_diagram, LimitChain, TauDistributor,
    TauResiduals,
};
pub use format::{parse_distributor, parse_mrc, write_distributor, write_mrc};
pub use transient::{total_reward, transition_matrix, UNIFORMIZATION_MASS};

use crate::algebra::{RealMatrix, DEFAULT_ATOL};
use crate::error::{Error, Result};

/// Checks that `q` is square with off-diagonals `≥ -atol` and row sums
/// within `atol` of zero.
pub fn validate_generator(q: &RealMatrix, atol: f64) -> Result<()> {
    if !q.is_square() {
        return Err(Error::DimensionMismatch {
            op: "validate_generator",
            left: q.dims(),
            right: q.dims(),
        });
    }
    for i in 0..q.rows() {
        let row = q.row(i);
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if i != j && x < -atol {
                return Err(Error::NotGenerator {
                    row: i,
                    reason: format!("negative rate {x} towards {j}"),
                });
            }
        }
        let sum: f64 = row.iter().sum();
        if sum.abs() > atol {
            return Err(Error::NotGenerator {
                row: i,
                reason: format!("row sums to {sum}"),
            });
        }
    }
    Ok(())
}

/// Clamps off-diagonals in `[-atol, 0)` to zero and resets the diagonal to
/// the negated off-diagonal sum, after validating within `atol`.
pub fn clamp_generator(q: &RealMatrix, atol: f64) -> Result<RealMatrix> {
    validate_generator(q, atol)?;
    let n = q.rows();
    let mut out = q.clone();
    for i in 0..n {
        let mut off = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            if out[(i, j)] < 0.0 {
                out[(i, j)] = 0.0;
            }
            off += out[(i, j)];
        }
        out[(i, i)] = -off;
    }
    Ok(out)
}

fn validate_initial(sigma: &[f64], atol: f64) -> Result<()> {
    if let Some(i) = sigma.iter().position(|&p| !(p >= -atol) || !p.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "initial probability of state {i} is {}",
            sigma[i]
        )));
    }
    let total: f64 = sigma.iter().sum();
    if (total - 1.0).abs() > atol {
        return Err(Error::InvalidModel(format!(
            "initial probabilities sum to {total}"
        )));
    }
    Ok(())
}

fn validate_rewards(rho: &[f64]) -> Result<()> {
    if let Some(i) = rho.iter().position(|r| !r.is_finite()) {
        return Err(Error::InvalidModel(format!("reward of state {i} is not finite")));
    }
    Ok(())
}

/// `(σ, Q, ρ)`: initial distribution, generator and reward rates.
#[derive(Clone, Debug, PartialEq)]
pub struct Mrc {
    sigma: RealMatrix,
    q: RealMatrix,
    rho: RealMatrix,
}

impl Mrc {
    pub fn new(sigma: Vec<f64>, q: RealMatrix, rho: Vec<f64>) -> Result<Self> {
        let n = q.rows();
        if n == 0 {
            return Err(Error::InvalidModel("a chain needs at least one state".into()));
        }
        if sigma.len() != n || rho.len() != n {
            return Err(Error::InvalidModel(format!(
                "{n} states but {} initial probabilities and {} rewards",
                sigma.len(),
                rho.len()
            )));
        }
        validate_generator(&q, DEFAULT_ATOL)?;
        validate_initial(&sigma, DEFAULT_ATOL)?;
        validate_rewards(&rho)?;
        Ok(Mrc {
            sigma: RealMatrix::row_vector(&sigma),
            q,
            rho: RealMatrix::column(&rho),
        })
    }

    pub fn state_count(&self) -> usize {
        self.q.rows()
    }

    /// `1 × n`
    pub fn sigma(&self) -> &RealMatrix {
        &self.sigma
    }

    pub fn generator(&self) -> &RealMatrix {
        &self.q
    }

    /// `n × 1`
    pub fn rho(&self) -> &RealMatrix {
        &self.rho
    }
}

/// `(σ, Qs, Qf, ρ)`: a chain with rate matrix `Qs + tau·Qf` for a symbolic
/// speed `tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct MrcFast {
    sigma: RealMatrix,
    qs: RealMatrix,
    qf: RealMatrix,
    rho: RealMatrix,
}

impl MrcFast {
    pub fn new(sigma: Vec<f64>, qs: RealMatrix, qf: RealMatrix, rho: Vec<f64>) -> Result<Self> {
        let slow = Mrc::new(sigma, qs, rho)?;
        if qf.dims() != slow.q.dims() {
            return Err(Error::InvalidModel("fast generator has the wrong shape".into()));
        }
        validate_generator(&qf, DEFAULT_ATOL)?;
        Ok(MrcFast {
            sigma: slow.sigma,
            qs: slow.q,
            qf,
            rho: slow.rho,
        })
    }

    pub fn from_plain(mrc: Mrc) -> Self {
        let n = mrc.state_count();
        MrcFast {
            sigma: mrc.sigma,
            qs: mrc.q,
            qf: RealMatrix::zeros(n, n),
            rho: mrc.rho,
        }
    }

    /// The chain without its fast part.
    pub fn slow(&self) -> Mrc {
        Mrc {
            sigma: self.sigma.clone(),
            q: self.qs.clone(),
            rho: self.rho.clone(),
        }
    }

    /// `Some` when there are no fast transitions.
    pub fn as_plain(&self) -> Option<Mrc> {
        (self.qf.max_abs() == 0.0).then(|| self.slow())
    }

    /// The ordinary chain obtained for a concrete speed `tau`.
    pub fn instantiate(&self, tau: f64) -> Mrc {
        Mrc {
            sigma: self.sigma.clone(),
            q: self.qs.add(&self.qf.scale(tau)).expect("same shape"),
            rho: self.rho.clone(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.qs.rows()
    }

    pub fn sigma(&self) -> &RealMatrix {
        &self.sigma
    }

    pub fn slow_generator(&self) -> &RealMatrix {
        &self.qs
    }

    pub fn fast_generator(&self) -> &RealMatrix {
        &self.qf
    }

    pub fn rho(&self) -> &RealMatrix {
        &self.rho
    }
}

impl From<Mrc> for MrcFast {
    fn from(mrc: Mrc) -> Self {
        MrcFast::from_plain(mrc)
    }
}

/// Three-state chain: state 0 leaves with rates `lambda` to 1 and `mu` to 2,
/// state 1 is absorbing and state 2 returns to 0 with rate `nu`.
pub fn figure_two(pi: f64, lambda: f64, mu: f64, nu: f64, r1: f64, r3: f64) -> Result<Mrc> {
    let q = RealMatrix::from_rows(&[
        vec![-lambda - mu, lambda, mu],
        vec![0.0, 0.0, 0.0],
        vec![nu, 0.0, -nu],
    ])?;
    Mrc::new(vec![pi, 1.0 - pi, 0.0], q, vec![r1, 0.0, r3])
}

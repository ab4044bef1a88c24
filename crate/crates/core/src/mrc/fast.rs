//! Chains with fast transitions: the τ-distributor, weak lumping, the
//! discontinuous limit chain and the lumping/limit diagram.

use super::bisim::{collector, mul, require};
use super::{
    check_weak_mrc, clamp_generator, ergodic_projection_with, transition_matrix,
    ErgodicProjection, MrcFast,
};
use crate::algebra::{solve_linear, RealMatrix};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::report::{first_real_violation, BisimKind, CheckReport, RealCondition};

/// Largest deviation in each of the four properties a τ-distributor must have.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauResiduals {
    /// `W1 = 1`
    pub row_sums: f64,
    /// `WV = I`
    pub left_inverse: f64,
    /// `ΠVW = ΠVWΠ`
    pub absorbs_projection: f64,
    /// ergodic projection of `WQfV` equals `WΠV`
    pub lumped_projection: f64,
}

impl TauResiduals {
    pub fn max(&self) -> f64 {
        self.row_sums
            .max(self.left_inverse)
            .max(self.absorbs_projection)
            .max(self.lumped_projection)
    }

    pub fn holds(&self, atol: f64) -> bool {
        self.max() <= atol
    }
}

/// A certified `N × n` τ-distributor for a given chain and partition.
#[derive(Clone, Debug, PartialEq)]
pub struct TauDistributor {
    w: RealMatrix,
    residuals: TauResiduals,
}

impl TauDistributor {
    /// Certifies an externally supplied `W`.
    pub fn new(mrc: &MrcFast, p: &Partition, w: RealMatrix, atol: f64) -> Result<Self> {
        let residuals = tau_residuals(mrc, p, &w, atol)?;
        if !residuals.holds(atol) {
            return Err(Error::InvalidDistributor(format!(
                "τ-distributor properties violated: {residuals:?}"
            )));
        }
        Ok(TauDistributor { w, residuals })
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.w
    }

    pub fn residuals(&self) -> TauResiduals {
        self.residuals
    }
}

/// Measures the four properties for an arbitrary `W` without judging them.
pub fn tau_residuals(mrc: &MrcFast, p: &Partition, w: &RealMatrix, atol: f64) -> Result<TauResiduals> {
    let n = mrc.state_count();
    let v = collector(n, p)?;
    if w.dims() != (p.len(), n) {
        return Err(Error::DimensionMismatch {
            op: "τ-distributor",
            left: w.dims(),
            right: (p.len(), n),
        });
    }
    let pi = ergodic_projection_with(mrc.fast_generator(), atol)?.pi;
    let row_sums = w
        .row_sums()
        .iter()
        .fold(0.0f64, |m, s| m.max((s - 1.0).abs()));
    let left_inverse = w.mul(&v)?.max_abs_diff(&RealMatrix::identity(p.len()));
    let pvw = mul(&[&pi, &v, w]);
    let absorbs_projection = pvw.max_abs_diff(&pvw.mul(&pi)?);
    let lumped_fast = clamp_generator(&mul(&[w, mrc.fast_generator(), &v]), atol)
        .map_err(|e| Error::InvalidDistributor(format!("WQfV is not a generator: {e}")))?;
    let lumped_projection = ergodic_projection_with(&lumped_fast, atol)?
        .pi
        .max_abs_diff(&mul(&[w, &pi, &v]));
    Ok(TauResiduals {
        row_sums,
        left_inverse,
        absorbs_projection,
        lumped_projection,
    })
}

/// `W = (UΠV)⁻¹UΠ` with the averaging distributor `U`, certified.
///
/// Under the weak conditions `UΠV` is idempotent, so this succeeds exactly
/// when fast transitions never leave a class, in which case `W = UΠ`.
pub fn default_tau_distributor(mrc: &MrcFast, p: &Partition, atol: f64) -> Result<TauDistributor> {
    require(check_weak_mrc(mrc, p, atol)?)?;
    let v = p.real_collector();
    let u = p.real_distributor();
    let pi = ergodic_projection_with(mrc.fast_generator(), atol)?.pi;
    let u_pi = u.mul(&pi)?;
    let w = solve_linear(&u_pi.mul(&v)?, &u_pi)?;
    TauDistributor::new(mrc, p, w, atol)
}

/// `(σV, WQsV, WQfV, Wρ)`.
pub fn lump_weak_mrc(mrc: &MrcFast, p: &Partition, w: &TauDistributor, atol: f64) -> Result<MrcFast> {
    require(check_weak_mrc(mrc, p, atol)?)?;
    let w = w.matrix();
    if w.dims() != (p.len(), mrc.state_count()) {
        return Err(Error::InvalidDistributor(format!(
            "expected a {}×{} matrix",
            p.len(),
            mrc.state_count()
        )));
    }
    let v = p.real_collector();
    let qs = clamp_generator(&mul(&[w, mrc.slow_generator(), &v]), atol)?;
    let qf = clamp_generator(&mul(&[w, mrc.fast_generator(), &v]), atol)?;
    MrcFast::new(
        mrc.sigma().mul(&v)?.row(0).to_vec(),
        qs,
        qf,
        w.mul(mrc.rho())?.as_slice().to_vec(),
    )
}

/// The `τ → ∞` limit of a fast chain: transition matrix `Π e^{ΠQsΠt}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitChain {
    pub projection: ErgodicProjection,
    /// `ΠQsΠ`
    pub qs_bar: RealMatrix,
    /// `MQsL` on the recurrent classes of `Qf`, where `Π = LM`. This is a
    /// generator even when `ΠQsΠ` is not.
    pub aggregated: RealMatrix,
    pub sigma: RealMatrix,
    pub rho: RealMatrix,
}

impl LimitChain {
    pub fn pi(&self) -> &RealMatrix {
        &self.projection.pi
    }

    /// `P∞(t) = Π e^{ΠQsΠt} = L e^{MQsL t} M`. At `t = 0` this is `Π`.
    pub fn transition(&self, t: f64) -> Result<RealMatrix> {
        let p = transition_matrix(&self.aggregated, t)?;
        Ok(mul(&[&self.projection.trapping, &p, &self.projection.stationary]))
    }

    pub fn total_reward(&self, t: f64) -> Result<f64> {
        Ok(mul(&[&self.sigma, &self.transition(t)?, &self.rho])[(0, 0)])
    }
}

pub fn limit_chain(mrc: &MrcFast, atol: f64) -> Result<LimitChain> {
    let projection = ergodic_projection_with(mrc.fast_generator(), atol)?;
    let pi = &projection.pi;
    let qs_bar = mul(&[pi, mrc.slow_generator(), pi]);
    let aggregated = clamp_generator(
        &mul(&[&projection.stationary, mrc.slow_generator(), &projection.trapping]),
        atol,
    )?;
    Ok(LimitChain {
        qs_bar,
        aggregated,
        sigma: mrc.sigma().clone(),
        rho: mrc.rho().clone(),
        projection,
    })
}

/// Strong lumping of the limit chain: `VUΠρ = Πρ`, `VUΠV = ΠV` and
/// `VUΠQsΠV = ΠQsΠV`.
pub fn check_strong_discontinuous(limit: &LimitChain, p: &Partition, atol: f64) -> Result<CheckReport> {
    let pi = limit.pi();
    let v = collector(pi.rows(), p)?;
    let u = p.real_distributor();
    let pi_rho = pi.mul(&limit.rho)?;
    let pi_v = pi.mul(&v)?;
    let bar_v = limit.qs_bar.mul(&v)?;
    Ok(first_real_violation(
        BisimKind::Strong,
        atol,
        [
            RealCondition::new("VUΠρ = Πρ", mul(&[&v, &u, &pi_rho]), pi_rho),
            RealCondition::new("VUΠV = ΠV", mul(&[&v, &u, &pi_v]), pi_v),
            RealCondition::new("VUΠQsΠV = ΠQsΠV", mul(&[&v, &u, &bar_v]), bar_v),
        ],
    ))
}

/// `max |P̂∞(t) − W P∞(t) V|` where `P̂∞` is the limit of the τ-lumped chain.
pub fn mrc_diagram_residual(
    mrc: &MrcFast,
    p: &Partition,
    w: &TauDistributor,
    t: f64,
    atol: f64,
) -> Result<f64> {
    let lumped = lump_weak_mrc(mrc, p, w, atol)?;
    let lhs = limit_chain(&lumped, atol)?.transition(t)?;
    let rhs = mul(&[w.matrix(), &limit_chain(mrc, atol)?.transition(t)?, &p.real_collector()]);
    Ok(lhs.max_abs_diff(&rhs))
}

/// Lumping then taking the limit agrees with taking the limit then lumping,
/// within `10·atol` at every sample time.
pub fn verify_mrc_diagram(
    mrc: &MrcFast,
    p: &Partition,
    w: &TauDistributor,
    times: &[f64],
    atol: f64,
) -> Result<bool> {
    for &t in times {
        if mrc_diagram_residual(mrc, p, w, t, atol)? > 10.0 * atol {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Identities relating closure and lumping on transition systems.

use super::bisim::{check_branching_lts, check_weak_lts};
use super::Lts;
use crate::algebra::ActionMatrix;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureIdentities {
    /// `VᵀΠV = (VᵀSV)*`
    pub quotient_closure: bool,
    /// `ΠVVᵀ = ΠVVᵀΠ`
    pub projection_absorbs: bool,
}

impl ClosureIdentities {
    pub fn holds(&self) -> bool {
        self.quotient_closure && self.projection_absorbs
    }
}

fn mul(a: &ActionMatrix, b: &ActionMatrix) -> ActionMatrix {
    a.mul(b).expect("shapes agree")
}

/// Evaluates `VᵀΠV = (VᵀSV)*` and `ΠVVᵀ = ΠVVᵀΠ` for `Π = S*`.
///
/// Both hold whenever `V` is a weak bisimulation. For other collectors only
/// `VᵀΠV ≤ (VᵀSV)*` is guaranteed: the quotient closure can chain steps
/// that leave a class from a different state than the one that entered it.
pub fn verify_closure_identities(lts: &Lts, p: &Partition) -> Result<ClosureIdentities> {
    if p.state_count() != lts.state_count() {
        return Err(Error::DimensionMismatch {
            op: "verify_closure_identities",
            left: (lts.state_count(), lts.state_count()),
            right: (p.state_count(), p.len()),
        });
    }
    let v = p.bool_collector(lts.universe());
    let vt = v.transpose();
    let pi = lts.tau_reach();
    let lhs = mul(&mul(&vt, &pi), &v);
    let rhs = mul(&mul(&vt, lts.internal()), &v).rt_closure()?;
    let pvvt = mul(&mul(&pi, &v), &vt);
    Ok(ClosureIdentities {
        quotient_closure: lhs == rhs,
        projection_absorbs: pvvt == mul(&pvvt, &pi),
    })
}

/// Closure and weak lumping commute:
/// `(VᵀSV)*·VᵀAV·(VᵀSV)* = VᵀΠAΠV` and `(VᵀSV)*·Vᵀρ = VᵀΠρ`.
///
/// Requires `V` to be a weak bisimulation; a `false` result signals a bug.
pub fn verify_weak_diagram(lts: &Lts, p: &Partition) -> Result<bool> {
    let report = check_weak_lts(lts, p)?;
    if !report.pass() {
        return Err(Error::CheckFailed(Box::new(report)));
    }
    let v = p.bool_collector(lts.universe());
    let vt = v.transpose();
    let pi = lts.tau_reach();
    let lumped_closure = mul(&mul(&vt, lts.internal()), &v).rt_closure()?;
    let lumped_visible = mul(&mul(&vt, lts.visible()), &v);
    let left_visible = mul(&mul(&lumped_closure, &lumped_visible), &lumped_closure);
    let right_visible = mul(&mul(&mul(&mul(&vt, &pi), lts.visible()), &pi), &v);
    let left_rho = mul(&mul(&lumped_closure, &vt), lts.rho());
    let right_rho = mul(&mul(&vt, &pi), lts.rho());
    Ok(left_visible == right_visible && left_rho == right_rho)
}

/// Closing the branching-lumped system under `tau, I` matches the strongly
/// lumped `tau, V`-closed system, i.e. with `R = VVᵀ`:
/// `I + VᵀSV = Vᵀ(S* ⊓ R)(I+S)V`, `VᵀAV = Vᵀ(S* ⊓ R)AV` and
/// `Vᵀρ = Vᵀ(S* ⊓ R)ρ`.
///
/// Requires `V` to be a branching bisimulation.
pub fn verify_branching_diagram(lts: &Lts, p: &Partition) -> Result<bool> {
    let report = check_branching_lts(lts, p)?;
    if !report.pass() {
        return Err(Error::CheckFailed(Box::new(report)));
    }
    let n = lts.state_count();
    let u = lts.universe();
    let v = p.bool_collector(u);
    let vt = v.transpose();
    let r = mul(&v, &vt);
    let inert = lts.tau_reach().elementwise(&r)?;
    let vt_inert = mul(&vt, &inert);
    let id_n = ActionMatrix::identity(n, u);
    let id_big = ActionMatrix::identity(p.len(), u);
    let one_step = id_n.add(lts.internal())?;

    let lhs_internal = id_big.add(&mul(&mul(&vt, lts.internal()), &v))?;
    let rhs_internal = mul(&mul(&vt_inert, &one_step), &v);
    let lhs_visible = mul(&mul(&vt, lts.visible()), &v);
    let rhs_visible = mul(&mul(&vt_inert, lts.visible()), &v);
    let lhs_rho = mul(&vt, lts.rho());
    let rhs_rho = mul(&vt_inert, lts.rho());
    Ok(lhs_internal == rhs_internal && lhs_visible == rhs_visible && lhs_rho == rhs_rho)
}

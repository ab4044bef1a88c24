use super::Lts;
use crate::algebra::{ActionMatrix, ActionSet};
use crate::error::{Error, Result};
use crate::partition::{group_by_key, Partition, Refinable};
use crate::report::{first_bool_violation, BisimKind, BoolCondition, CheckReport};

/// Which right-hand side the visible-step condition of the weak check uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeakReading {
    /// `VUΠAΠV = ΠAΠV`, consistent with the Markov chain analogue.
    #[default]
    Standard,
    /// `VUΠAΠV = ΠV`, the literal variant.
    Strict,
}

fn product(ms: &[&ActionMatrix]) -> ActionMatrix {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.mul(m).expect("shapes validated by the caller");
    }
    acc
}

fn collector(lts: &Lts, p: &Partition) -> Result<ActionMatrix> {
    if p.state_count() != lts.state_count() {
        return Err(Error::DimensionMismatch {
            op: "collector",
            left: (lts.state_count(), lts.state_count()),
            right: (p.state_count(), p.len()),
        });
    }
    Ok(p.bool_collector(lts.universe()))
}

/// `VU·x` for a matrix `x` with `n` rows.
fn project(v: &ActionMatrix, u: &ActionMatrix, x: &ActionMatrix) -> ActionMatrix {
    product(&[v, u, x])
}

/// Strong bisimulation with the canonical distributor `U = Vᵀ`:
/// `VUρ = ρ`, `VUAV = AV` and `VUSV = SV`.
pub fn check_strong_lts(lts: &Lts, p: &Partition) -> Result<CheckReport> {
    let v = collector(lts, p)?;
    check_strong_lts_with(lts, p, &v.transpose())
}

/// Strong check with a caller-supplied boolean distributor for `V`.
pub fn check_strong_lts_with(lts: &Lts, p: &Partition, u: &ActionMatrix) -> Result<CheckReport> {
    let v = collector(lts, p)?;
    check_distributor(&v, u)?;
    let av = lts.visible().mul(&v)?;
    let sv = lts.internal().mul(&v)?;
    Ok(first_bool_violation(
        BisimKind::Strong,
        lts.alphabet(),
        [
            BoolCondition::eq("VUρ = ρ", project(&v, u, lts.rho()), lts.rho().clone()),
            BoolCondition::eq("VUAV = AV", project(&v, u, &av), av),
            BoolCondition::eq("VUSV = SV", project(&v, u, &sv), sv),
        ],
    ))
}

fn check_distributor(v: &ActionMatrix, u: &ActionMatrix) -> Result<()> {
    use crate::partition::{verify_distributor, Collector, Distributor};
    verify_distributor(
        &Collector::Boolean(v.clone()),
        &Distributor::Boolean(u.clone()),
        0.0,
    )
}

/// The relational form with `R = VVᵀ`: `Rρ ≤ ρ`, `RA ≤ AR` and `RS ≤ SR`.
pub fn check_relational_strong(lts: &Lts, p: &Partition) -> Result<CheckReport> {
    let v = collector(lts, p)?;
    let r = v.mul(&v.transpose())?;
    let (a, s) = (lts.visible(), lts.internal());
    Ok(first_bool_violation(
        BisimKind::Strong,
        lts.alphabet(),
        [
            BoolCondition::leq("Rρ ≤ ρ", r.mul(lts.rho())?, lts.rho().clone()),
            BoolCondition::leq("RA ≤ AR", r.mul(a)?, a.mul(&r)?),
            BoolCondition::leq("RS ≤ SR", r.mul(s)?, s.mul(&r)?),
        ],
    ))
}

/// Weak bisimulation: `VUΠρ = Πρ`, `VUΠV = ΠV` and `VUΠAΠV = ΠAΠV`, with
/// `Π = S*` and `U = Vᵀ`.
pub fn check_weak_lts(lts: &Lts, p: &Partition) -> Result<CheckReport> {
    check_weak_lts_with(lts, p, WeakReading::Standard)
}

pub fn check_weak_lts_with(lts: &Lts, p: &Partition, reading: WeakReading) -> Result<CheckReport> {
    let v = collector(lts, p)?;
    let u = v.transpose();
    let pi = lts.tau_reach();
    let pi_rho = pi.mul(lts.rho())?;
    let pi_v = pi.mul(&v)?;
    let pi_a_pi_v = product(&[&pi, lts.visible(), &pi, &v]);
    let visible = match reading {
        WeakReading::Standard => {
            BoolCondition::eq("VUΠAΠV = ΠAΠV", project(&v, &u, &pi_a_pi_v), pi_a_pi_v)
        }
        WeakReading::Strict => {
            BoolCondition::eq("VUΠAΠV = ΠV", project(&v, &u, &pi_a_pi_v), pi_v.clone())
        }
    };
    Ok(first_bool_violation(
        BisimKind::Weak,
        lts.alphabet(),
        [
            BoolCondition::eq("VUΠρ = Πρ", project(&v, &u, &pi_rho), pi_rho),
            BoolCondition::eq("VUΠV = ΠV", project(&v, &u, &pi_v), pi_v),
            visible,
        ],
    ))
}

/// `Π_V = (S ⊓ VVᵀ)*`: closure of the internal steps inside classes.
pub(crate) fn class_tau_reach(lts: &Lts, v: &ActionMatrix) -> ActionMatrix {
    let r = v.mul(&v.transpose()).expect("collector shape");
    lts.internal()
        .elementwise(&r)
        .and_then(|m| m.rt_closure())
        .expect("S ⊓ VVᵀ is square and 0-1")
}

/// Branching bisimulation: `VUΠ_Vρ = Π_Vρ`, `VU(I + Π_V S)V = (I + Π_V S)V`
/// and `VUΠ_V AV = Π_V AV`, with `Π_V = (S ⊓ VVᵀ)*` and `U = Vᵀ`.
pub fn check_branching_lts(lts: &Lts, p: &Partition) -> Result<CheckReport> {
    let v = collector(lts, p)?;
    let u = v.transpose();
    let pi_v = class_tau_reach(lts, &v);
    let n = lts.state_count();
    let pi_rho = pi_v.mul(lts.rho())?;
    let step = ActionMatrix::identity(n, lts.universe())
        .add(&pi_v.mul(lts.internal())?)?
        .mul(&v)?;
    let pi_a_v = product(&[&pi_v, lts.visible(), &v]);
    Ok(first_bool_violation(
        BisimKind::Branching,
        lts.alphabet(),
        [
            BoolCondition::eq("VUΠ_Vρ = Π_Vρ", project(&v, &u, &pi_rho), pi_rho),
            BoolCondition::eq("VU(I+Π_V S)V = (I+Π_V S)V", project(&v, &u, &step), step),
            BoolCondition::eq("VUΠ_V AV = Π_V AV", project(&v, &u, &pi_a_v), pi_a_v),
        ],
    ))
}

fn require(report: CheckReport) -> Result<()> {
    if report.pass() {
        Ok(())
    } else {
        Err(Error::CheckFailed(Box::new(report)))
    }
}

fn quotient(lts: &Lts, v: &ActionMatrix, u: &ActionMatrix) -> Result<Lts> {
    Lts::from_matrices(
        lts.alphabet().clone(),
        lts.sigma().mul(v)?,
        product(&[u, lts.visible(), v]),
        product(&[u, lts.internal(), v]),
        u.mul(lts.rho())?,
    )
}

/// Strongly lumped system `(σV, UAV, USV, Uρ)` with `U = Vᵀ`.
pub fn lump_strong_lts(lts: &Lts, p: &Partition) -> Result<Lts> {
    let v = collector(lts, p)?;
    lump_strong_lts_with(lts, p, &v.transpose())
}

/// Strong lumping with any distributor; the result does not depend on it.
pub fn lump_strong_lts_with(lts: &Lts, p: &Partition, u: &ActionMatrix) -> Result<Lts> {
    require(check_strong_lts_with(lts, p, u)?)?;
    let v = collector(lts, p)?;
    quotient(lts, &v, u)
}

/// Weakly lumped system `(σV, VᵀAV, VᵀSV, Vᵀρ)`.
pub fn lump_weak_lts(lts: &Lts, p: &Partition) -> Result<Lts> {
    require(check_weak_lts(lts, p)?)?;
    let v = collector(lts, p)?;
    quotient(lts, &v, &v.transpose())
}

/// Branching-lumped system `(σV, VᵀAV, VᵀSV, Vᵀρ)`.
pub fn lump_branching_lts(lts: &Lts, p: &Partition) -> Result<Lts> {
    require(check_branching_lts(lts, p)?)?;
    let v = collector(lts, p)?;
    quotient(lts, &v, &v.transpose())
}

/// The system closed under sequences of internal steps: `(σ, ΠAΠ, Π, Πρ)`.
pub fn tau_closure(lts: &Lts) -> Lts {
    let pi = lts.tau_reach();
    let visible = product(&[&pi, lts.visible(), &pi]);
    let rho = pi.mul(lts.rho()).expect("shape");
    Lts::from_matrices(lts.alphabet().clone(), lts.sigma().clone(), visible, pi, rho)
        .expect("closure preserves validity")
}

/// Rows of the concatenated condition matrices, per state.
fn signatures(lts: &Lts, kind: BisimKind, p: &Partition) -> Vec<Vec<ActionSet>> {
    let v = p.bool_collector(lts.universe());
    let parts: Vec<ActionMatrix> = match kind {
        BisimKind::Strong => vec![
            lts.rho().clone(),
            lts.visible().mul(&v).expect("shape"),
            lts.internal().mul(&v).expect("shape"),
        ],
        BisimKind::Weak => {
            let pi = lts.tau_reach();
            vec![
                pi.mul(lts.rho()).expect("shape"),
                pi.mul(&v).expect("shape"),
                product(&[&pi, lts.visible(), &pi, &v]),
            ]
        }
        BisimKind::Branching => {
            let pi_v = class_tau_reach(lts, &v);
            let n = lts.state_count();
            vec![
                pi_v.mul(lts.rho()).expect("shape"),
                ActionMatrix::identity(n, lts.universe())
                    .add(&pi_v.mul(lts.internal()).expect("shape"))
                    .and_then(|m| m.mul(&v))
                    .expect("shape"),
                product(&[&pi_v, lts.visible(), &v]),
            ]
        }
    };
    (0..lts.state_count())
        .map(|i| parts.iter().flat_map(|m| m.row(i).iter().copied()).collect())
        .collect()
}

impl Refinable for Lts {
    fn state_count(&self) -> usize {
        Lts::state_count(self)
    }

    fn split(&self, kind: BisimKind, p: &Partition) -> Partition {
        group_by_key(p, &signatures(self, kind, p))
    }

    fn is_bisimulation(&self, kind: BisimKind, p: &Partition) -> bool {
        let report = match kind {
            BisimKind::Strong => check_strong_lts(self, p),
            BisimKind::Weak => check_weak_lts(self, p),
            BisimKind::Branching => check_branching_lts(self, p),
        };
        report.map(|r| r.pass()).unwrap_or(false)
    }

    fn refinement_is_exact(&self, _kind: BisimKind) -> bool {
        // Branching: inert steps under a coarser partition are still
        // matched by every finer branching bisimulation.
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ActionAlphabet;
    use crate::lts::figure_one;

    fn merged(n: usize, pairs: &[&[usize]]) -> Partition {
        let mut blocks: Vec<Vec<usize>> = pairs.iter().map(|b| b.to_vec()).collect();
        for s in 0..n {
            if !blocks.iter().any(|b| b.contains(&s)) {
                blocks.push(vec![s]);
            }
        }
        Partition::new(n, blocks).unwrap()
    }

    /// s0 -tau-> s1, s1 terminating.
    fn tau_pair() -> Lts {
        Lts::new(ActionAlphabet::new(["a"]).unwrap(), 2, 0, &[], &[(0, 1)], &[1]).unwrap()
    }

    /// s0 -tau-> s1 -a-> s2 and s0 -a-> s2.
    fn branching_triple() -> Lts {
        let al = ActionAlphabet::new(["a"]).unwrap();
        let a = al.set_of(["a"]).unwrap();
        Lts::new(al, 3, 0, &[(1, a, 2), (0, a, 2)], &[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn figure_one_strong_checks() {
        let lts = figure_one();
        assert!(check_strong_lts(&lts, &Partition::discrete(4)).unwrap().pass());

        let r = check_strong_lts(&lts, &merged(4, &[&[1, 2]])).unwrap();
        let v = r.violated.unwrap();
        assert_eq!(v.equality, "VUAV = AV");
        // s3 (index 2) towards the class of s4 (class 2): {b} instead of {b,c}.
        assert_eq!((v.witness.row, v.witness.col), (2, 2));
        assert_eq!(v.witness.lhs, "{b,c}");
        assert_eq!(v.witness.rhs, "{b}");

        let r = check_strong_lts(&lts, &merged(4, &[&[0, 1]])).unwrap();
        assert_eq!(r.violated_equality(), Some("VUρ = ρ"));
    }

    #[test]
    fn relational_matches_on_figure_one() {
        let lts = figure_one();
        for p in [Partition::discrete(4), merged(4, &[&[1, 2]]), merged(4, &[&[0, 1]])] {
            assert_eq!(
                check_relational_strong(&lts, &p).unwrap().pass(),
                check_strong_lts(&lts, &p).unwrap().pass()
            );
        }
    }

    #[test]
    fn weak_tau_pair() {
        let lts = tau_pair();
        let one = Partition::single(2);
        assert!(check_weak_lts(&lts, &one).unwrap().pass());
        assert!(!check_strong_lts(&lts, &one).unwrap().pass());
        assert!(check_branching_lts(&lts, &one).unwrap().pass());

        let lumped = lump_weak_lts(&lts, &one).unwrap();
        assert_eq!(lumped.state_count(), 1);
        assert!(lumped.internal().is_one(0, 0));
        assert!(lumped.is_terminating(0));
    }

    #[test]
    fn weak_equals_strong_without_internal_steps() {
        let lts = figure_one();
        for p in crate::partition::enumerate_partitions(4) {
            assert_eq!(
                check_weak_lts(&lts, &p).unwrap().pass(),
                check_strong_lts(&lts, &p).unwrap().pass(),
                "{p}"
            );
        }
    }

    #[test]
    fn branching_triple_merges_tau_pair() {
        let lts = branching_triple();
        let p = merged(3, &[&[0, 1]]);
        assert!(check_branching_lts(&lts, &p).unwrap().pass());
        let lumped = lump_branching_lts(&lts, &p).unwrap();
        let a = lts.alphabet().set_of(["a"]).unwrap();
        assert_eq!(lumped.visible().get(0, 1), a);
        assert_eq!(lumped.visible().get(1, 0), ActionSet::EMPTY);
        assert_eq!(lumped.visible().get(0, 0), ActionSet::EMPTY);
    }

    #[test]
    fn identity_reduces_branching_to_strong() {
        let lts = figure_one();
        let id = Partition::discrete(4);
        assert!(check_branching_lts(&lts, &id).unwrap().pass());
        assert!(check_branching_lts(&tau_pair(), &Partition::discrete(2)).unwrap().pass());
    }

    #[test]
    fn strict_reading_differs() {
        // With visible steps the literal right-hand side ΠV never matches.
        let lts = branching_triple();
        let id = Partition::discrete(3);
        assert!(check_weak_lts(&lts, &id).unwrap().pass());
        let strict = check_weak_lts_with(&lts, &id, WeakReading::Strict).unwrap();
        assert_eq!(strict.violated_equality(), Some("VUΠAΠV = ΠV"));
    }

    #[test]
    fn lumping_identity_and_initial_placement() {
        let lts = figure_one();
        assert_eq!(lump_strong_lts(&lts, &Partition::discrete(4)).unwrap(), lts);

        let al = ActionAlphabet::new(["a"]).unwrap();
        let a = al.set_of(["a"]).unwrap();
        let loops = Lts::new(al, 2, 1, &[(0, a, 0), (1, a, 1)], &[], &[]).unwrap();
        let lumped = lump_strong_lts(&loops, &Partition::single(2)).unwrap();
        assert_eq!(lumped.state_count(), 1);
        assert_eq!(lumped.visible().get(0, 0), a);
        assert_eq!(lumped.initial_state(), 0);

        assert!(matches!(
            lump_strong_lts(&lts, &merged(4, &[&[1, 2]])),
            Err(Error::CheckFailed(_))
        ));
    }

    #[test]
    fn closure_of_tau_pair() {
        let closed = tau_closure(&tau_pair());
        assert!(closed.is_terminating(0) && closed.is_terminating(1));
        assert_eq!(closed.internal().rt_closure().unwrap(), *closed.internal());
        let plain = tau_closure(&figure_one());
        assert_eq!(plain.visible(), figure_one().visible());
        assert_eq!(*plain.internal(), ActionMatrix::identity(4, plain.universe()));
    }

    #[test]
    fn partition_size_mismatch_is_an_error() {
        assert!(matches!(
            check_strong_lts(&figure_one(), &Partition::discrete(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

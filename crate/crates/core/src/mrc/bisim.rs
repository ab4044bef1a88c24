//! Ordinary, weak and branching lumping checks on Markov reward chains.

use super::{clamp_generator, ergodic_projection, Mrc, MrcFast};
use crate::algebra::{RealMatrix, DEFAULT_ATOL};
use crate::error::{Error, Result};
use crate::partition::{group_by_real_key, verify_real_distributor, Partition, Refinable};
use crate::report::{first_real_violation, BisimKind, CheckReport, RealCondition};

pub(crate) fn mul(ms: &[&RealMatrix]) -> RealMatrix {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.mul(m).expect("shapes validated by the caller");
    }
    acc
}

pub(crate) fn collector(n: usize, p: &Partition) -> Result<RealMatrix> {
    if p.state_count() != n {
        return Err(Error::DimensionMismatch {
            op: "collector",
            left: (n, n),
            right: (p.state_count(), p.len()),
        });
    }
    Ok(p.real_collector())
}

pub(crate) fn require(report: CheckReport) -> Result<()> {
    if report.pass() {
        Ok(())
    } else {
        Err(Error::CheckFailed(Box::new(report)))
    }
}

/// Ordinary lumpability: `VUρ = ρ` and `VUQV = QV` within `atol`, with the
/// canonical averaging distributor.
pub fn check_strong_mrc(mrc: &Mrc, p: &Partition, atol: f64) -> Result<CheckReport> {
    check_strong_mrc_with(mrc, p, &p.real_distributor(), atol)
}

/// Strong check with a caller-supplied distributor.
pub fn check_strong_mrc_with(
    mrc: &Mrc,
    p: &Partition,
    u: &RealMatrix,
    atol: f64,
) -> Result<CheckReport> {
    let v = collector(mrc.state_count(), p)?;
    verify_real_distributor(&v, u, atol)?;
    let qv = mrc.generator().mul(&v)?;
    Ok(first_real_violation(
        BisimKind::Strong,
        atol,
        [
            RealCondition::new("VUρ = ρ", mul(&[&v, u, mrc.rho()]), mrc.rho().clone()),
            RealCondition::new("VUQV = QV", mul(&[&v, u, &qv]), qv),
        ],
    ))
}

/// Strong check on a chain with fast transitions: both generators are
/// lumped separately, `VUQsV = QsV` and `VUQfV = QfV`, plus `VUρ = ρ`.
pub fn check_strong_fast(mrc: &MrcFast, p: &Partition, atol: f64) -> Result<CheckReport> {
    let v = collector(mrc.state_count(), p)?;
    let u = p.real_distributor();
    let qsv = mrc.slow_generator().mul(&v)?;
    let qfv = mrc.fast_generator().mul(&v)?;
    Ok(first_real_violation(
        BisimKind::Strong,
        atol,
        [
            RealCondition::new("VUρ = ρ", mul(&[&v, &u, mrc.rho()]), mrc.rho().clone()),
            RealCondition::new("VUQsV = QsV", mul(&[&v, &u, &qsv]), qsv),
            RealCondition::new("VUQfV = QfV", mul(&[&v, &u, &qfv]), qfv),
        ],
    ))
}

/// Lumped chain `(σV, UQV, Uρ)` with the canonical distributor.
pub fn lump_strong_mrc(mrc: &Mrc, p: &Partition, atol: f64) -> Result<Mrc> {
    lump_strong_mrc_with(mrc, p, &p.real_distributor(), atol)
}

pub fn lump_strong_mrc_with(mrc: &Mrc, p: &Partition, u: &RealMatrix, atol: f64) -> Result<Mrc> {
    require(check_strong_mrc_with(mrc, p, u, atol)?)?;
    let v = p.real_collector();
    let sigma = mrc.sigma().mul(&v)?;
    let q = clamp_generator(&mul(&[u, mrc.generator(), &v]), atol)?;
    let rho = u.mul(mrc.rho())?;
    Mrc::new(sigma.row(0).to_vec(), q, rho.as_slice().to_vec())
}

/// `(σV, UQsV, UQfV, Uρ)` for a chain passing [`check_strong_fast`].
pub fn lump_strong_fast(mrc: &MrcFast, p: &Partition, atol: f64) -> Result<MrcFast> {
    require(check_strong_fast(mrc, p, atol)?)?;
    let v = p.real_collector();
    let u = p.real_distributor();
    MrcFast::new(
        mrc.sigma().mul(&v)?.row(0).to_vec(),
        clamp_generator(&mul(&[&u, mrc.slow_generator(), &v]), atol)?,
        clamp_generator(&mul(&[&u, mrc.fast_generator(), &v]), atol)?,
        u.mul(mrc.rho())?.as_slice().to_vec(),
    )
}

/// Weak bisimulation: `VUΠρ = Πρ`, `VUΠV = ΠV` and `VUΠQsΠV = ΠQsΠV`,
/// with `Π` the ergodic projection of the fast generator.
pub fn check_weak_mrc(mrc: &MrcFast, p: &Partition, atol: f64) -> Result<CheckReport> {
    let v = collector(mrc.state_count(), p)?;
    let u = p.real_distributor();
    let pi = ergodic_projection(mrc.fast_generator())?.pi;
    let pi_rho = pi.mul(mrc.rho())?;
    let pi_v = pi.mul(&v)?;
    let pi_qs_pi_v = mul(&[&pi, mrc.slow_generator(), &pi, &v]);
    Ok(first_real_violation(
        BisimKind::Weak,
        atol,
        [
            RealCondition::new("VUΠρ = Πρ", mul(&[&v, &u, &pi_rho]), pi_rho),
            RealCondition::new("VUΠV = ΠV", mul(&[&v, &u, &pi_v]), pi_v),
            RealCondition::new("VUΠQsΠV = ΠQsΠV", mul(&[&v, &u, &pi_qs_pi_v]), pi_qs_pi_v),
        ],
    ))
}

/// `Qf ⊓ VVᵀ` turned into a generator: rates between different classes are
/// dropped and each diagonal entry becomes the negated sum of what remains.
pub fn adapt_diagonal(qf: &RealMatrix, p: &Partition) -> Result<RealMatrix> {
    collector(qf.rows(), p)?;
    let class = p.assignment();
    let n = qf.rows();
    let mut out = RealMatrix::zeros(n, n);
    for i in 0..n {
        let mut off = 0.0;
        for j in (0..n).filter(|&j| j != i && class[j] == class[i]) {
            out[(i, j)] = qf[(i, j)];
            off += qf[(i, j)];
        }
        out[(i, i)] = -off;
    }
    Ok(out)
}

/// Branching bisimulation: `VUΠ_Vρ = Π_Vρ`, `VUΠ_V Qf V = Π_V Qf V` and
/// `VUΠ_V Qs V = Π_V Qs V`, with `Π_V` the ergodic projection of the
/// class-restricted fast generator.
pub fn check_branching_mrc(mrc: &MrcFast, p: &Partition, atol: f64) -> Result<CheckReport> {
    let v = collector(mrc.state_count(), p)?;
    let u = p.real_distributor();
    let pi_v = ergodic_projection(&adapt_diagonal(mrc.fast_generator(), p)?)?.pi;
    let pi_rho = pi_v.mul(mrc.rho())?;
    let fast = mul(&[&pi_v, mrc.fast_generator(), &v]);
    let slow = mul(&[&pi_v, mrc.slow_generator(), &v]);
    Ok(first_real_violation(
        BisimKind::Branching,
        atol,
        [
            RealCondition::new("VUΠ_Vρ = Π_Vρ", mul(&[&v, &u, &pi_rho]), pi_rho),
            RealCondition::new("VUΠ_V QfV = Π_V QfV", mul(&[&v, &u, &fast]), fast),
            RealCondition::new("VUΠ_V QsV = Π_V QsV", mul(&[&v, &u, &slow]), slow),
        ],
    ))
}

/// A chain paired with the tolerance used to compare signatures.
#[derive(Clone, Copy, Debug)]
pub struct MrcSearch<'a> {
    pub chain: &'a MrcFast,
    pub atol: f64,
}

impl MrcSearch<'_> {
    fn signatures(&self, kind: BisimKind, p: &Partition) -> Vec<Vec<f64>> {
        let m = self.chain;
        let v = p.real_collector();
        let parts: Vec<RealMatrix> = match kind {
            BisimKind::Strong => vec![
                m.rho().clone(),
                m.slow_generator().mul(&v).expect("shape"),
                m.fast_generator().mul(&v).expect("shape"),
            ],
            BisimKind::Weak => {
                let pi = ergodic_projection(m.fast_generator())
                    .expect("validated generator")
                    .pi;
                vec![
                    pi.mul(m.rho()).expect("shape"),
                    pi.mul(&v).expect("shape"),
                    mul(&[&pi, m.slow_generator(), &pi, &v]),
                ]
            }
            BisimKind::Branching => {
                let adapted = adapt_diagonal(m.fast_generator(), p).expect("shape");
                let pi_v = ergodic_projection(&adapted).expect("generator").pi;
                vec![
                    pi_v.mul(m.rho()).expect("shape"),
                    mul(&[&pi_v, m.fast_generator(), &v]),
                    mul(&[&pi_v, m.slow_generator(), &v]),
                ]
            }
        };
        (0..m.state_count())
            .map(|i| parts.iter().flat_map(|x| x.row(i).iter().copied()).collect())
            .collect()
    }
}

impl Refinable for MrcSearch<'_> {
    fn state_count(&self) -> usize {
        self.chain.state_count()
    }

    fn split(&self, kind: BisimKind, p: &Partition) -> Partition {
        group_by_real_key(p, &self.signatures(kind, p), self.atol)
    }

    fn is_bisimulation(&self, kind: BisimKind, p: &Partition) -> bool {
        let report = match kind {
            BisimKind::Strong => check_strong_fast(self.chain, p, self.atol),
            BisimKind::Weak => check_weak_mrc(self.chain, p, self.atol),
            BisimKind::Branching => check_branching_mrc(self.chain, p, self.atol),
        };
        report.map(|r| r.pass()).unwrap_or(false)
    }

    fn refinement_is_exact(&self, kind: BisimKind) -> bool {
        // The class-restricted projection moves non-monotonically with the
        // partition.
        kind != BisimKind::Branching
    }
}

impl Refinable for MrcFast {
    fn state_count(&self) -> usize {
        MrcFast::state_count(self)
    }

    fn split(&self, kind: BisimKind, p: &Partition) -> Partition {
        MrcSearch { chain: self, atol: DEFAULT_ATOL }.split(kind, p)
    }

    fn is_bisimulation(&self, kind: BisimKind, p: &Partition) -> bool {
        MrcSearch { chain: self, atol: DEFAULT_ATOL }.is_bisimulation(kind, p)
    }

    fn refinement_is_exact(&self, kind: BisimKind) -> bool {
        MrcSearch { chain: self, atol: DEFAULT_ATOL }.refinement_is_exact(kind)
    }
}

//! Transient analysis by uniformization.

use super::{validate_generator, Mrc};
use crate::algebra::RealMatrix;
use crate::error::{Error, Result};

/// Poisson mass after which the uniformization series is truncated is
/// `1 - UNIFORMIZATION_MASS`.
pub const UNIFORMIZATION_MASS: f64 = 1e-12;

/// Largest `Λt` handled in one uniformization pass; longer horizons are
/// halved and the result squared.
const MAX_STEP_RATE: f64 = 32.0;

/// `P(t) = e^{Qt}` for a generator `Q`.
///
/// Uses the Poisson-weighted powers of `I + Q/Λ`, `Λ = max |Q[i,i]|`. When
/// `Λt` is large the horizon is split into `2^k` equal steps and the step
/// matrix squared `k` times.
pub fn transition_matrix(q: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let scale = q.max_abs().max(1.0);
    validate_generator(q, 1e-9 * scale)?;
    let n = q.rows();
    let rate = (0..n).fold(0.0f64, |m, i| m.max(q[(i, i)].abs()));
    if rate == 0.0 || t == 0.0 {
        return Ok(RealMatrix::identity(n));
    }

    let mut squarings = 0u32;
    let mut step = t;
    while rate * step > MAX_STEP_RATE {
        step /= 2.0;
        squarings += 1;
    }
    let lt = rate * step;
    let jump = RealMatrix::identity(n).add(&q.scale(1.0 / rate))?;

    let mut weight = (-lt).exp();
    let mut mass = weight;
    let mut power = RealMatrix::identity(n);
    let mut acc = RealMatrix::identity(n).scale(weight);
    let mut k = 0u32;
    while mass < 1.0 - UNIFORMIZATION_MASS && k < 10_000 {
        k += 1;
        power = power.mul(&jump)?;
        weight *= lt / f64::from(k);
        acc = acc.add(&power.scale(weight))?;
        mass += weight;
    }
    for _ in 0..squarings {
        acc = acc.mul(&acc)?;
    }
    Ok(acc)
}

/// Total reward rate `R(t) = σ P(t) ρ`.
pub fn total_reward(mrc: &Mrc, t: f64) -> Result<f64> {
    let p = transition_matrix(mrc.generator(), t)?;
    Ok(mrc.sigma().mul(&p)?.mul(mrc.rho())?[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrc::figure_two;

    #[test]
    fn zero_time_is_identity() {
        let q = RealMatrix::from_rows(&[vec![-3.0, 3.0], vec![1.0, -1.0]]).unwrap();
        assert_eq!(transition_matrix(&q, 0.0).unwrap(), RealMatrix::identity(2));
    }

    #[test]
    fn absorbing_two_state_closed_form() {
        let q = RealMatrix::from_rows(&[vec![-1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let p = transition_matrix(&q, 1.0).unwrap();
        let e = (-1.0f64).exp();
        let expected = RealMatrix::from_rows(&[vec![e, 1.0 - e], vec![0.0, 1.0]]).unwrap();
        assert!(p.approx_eq(&expected, 1e-12), "{p:?}");
    }

    #[test]
    fn long_horizon_uses_squaring() {
        // Symmetric chain: P(t) = ½(1 ± e^{-2λt}).
        let q = RealMatrix::from_rows(&[vec![-5.0, 5.0], vec![5.0, -5.0]]).unwrap();
        for t in [0.3, 7.0, 200.0] {
            let p = transition_matrix(&q, t).unwrap();
            let d = (-10.0 * t).exp();
            assert!((p[(0, 0)] - 0.5 * (1.0 + d)).abs() < 1e-11);
            assert!((p[(0, 1)] - 0.5 * (1.0 - d)).abs() < 1e-11);
        }
    }

    #[test]
    fn negative_time_rejected() {
        let q = RealMatrix::zeros(1, 1);
        assert!(matches!(transition_matrix(&q, -1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn reward_at_zero_is_sigma_rho() {
        let m = figure_two(0.5, 1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(total_reward(&m, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn reward_converges_to_absorbing_state() {
        let q = RealMatrix::from_rows(&[vec![-1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let m = Mrc::new(vec![1.0, 0.0], q, vec![0.0, 1.0]).unwrap();
        assert!((total_reward(&m, 40.0).unwrap() - 1.0).abs() < 1e-12);
        let e = (-1.0f64).exp();
        assert!((total_reward(&m, 1.0).unwrap() - (1.0 - e)).abs() < 1e-12);
    }
}

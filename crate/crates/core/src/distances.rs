//! How well a binary observable `A` approximates a sharp spin observable `P`.
//!
//! Two families of figures of merit:
//!
//! * statistical: the worst-case and sphere-averaged deviation of outcome
//!   probabilities, `|tr ρP − tr ρA|`, and the statistical distance
//!   `d_s = ½|p − a|` they reduce to for unbiased `A`;
//! * root-mean-square noise built from the moment operators of `A`, and the
//!   rms distance obtained from it.

use crate::algebra::{check_state, BinaryObservable, BlochVector, HermitianOp, INPUT_TOL};
use crate::error::{Error, Result};

const RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    pub worst: f64,
    pub average: f64,
    /// Only defined for unbiased `A`.
    pub statistical: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmsReport {
    pub per_state: f64,
    pub distance: f64,
}

fn require_sharp(p: &BinaryObservable) -> Result<()> {
    if p.is_sharp() {
        Ok(())
    } else {
        Err(Error::NotSharp)
    }
}

fn require_unbiased(a: &BinaryObservable) -> Result<()> {
    if (a.alpha() - 1.0).abs() <= INPUT_TOL {
        Ok(())
    } else {
        Err(Error::BiasedObservable(a.alpha()))
    }
}

/// `sup_ρ |tr ρP − tr ρA| = ½|p − a| + ½|1 − α|`.
pub fn worst_case_deviation(sharp_p: &BinaryObservable, a: &BinaryObservable) -> Result<f64> {
    require_sharp(sharp_p)?;
    Ok(0.5 * (sharp_p.vec() - a.vec()).norm() + 0.5 * (1.0 - a.alpha()).abs())
}

/// Average of `|⟨ψ|P|ψ⟩ − ⟨ψ|A|ψ⟩|` over pure states, uniform on the sphere.
///
/// With `c = 1 − α` and `d = |p − a|` the integrand is `½|c + d·t|` for `t`
/// uniform on `[−1, 1]`. When `d ≥ |c|` the sign changes inside the interval
/// and the average is `d/4 + c²/(4d)`; otherwise it is the constant `|c|/2`.
pub fn average_deviation(sharp_p: &BinaryObservable, a: &BinaryObservable) -> Result<f64> {
    require_sharp(sharp_p)?;
    let c = 1.0 - a.alpha();
    let d = (sharp_p.vec() - a.vec()).norm();
    if d > c.abs() {
        Ok(0.25 * d + c * c / (4.0 * d))
    } else {
        Ok(0.5 * c.abs())
    }
}

/// `d_s(P, A) = ½|p − a|` for unbiased `A`.
pub fn statistical_distance(sharp_p: &BinaryObservable, a: &BinaryObservable) -> Result<f64> {
    require_sharp(sharp_p)?;
    require_unbiased(a)?;
    Ok(0.5 * (sharp_p.vec() - a.vec()).norm())
}

pub fn deviation_report(
    sharp_p: &BinaryObservable,
    a: &BinaryObservable,
) -> Result<DeviationReport> {
    Ok(DeviationReport {
        worst: worst_case_deviation(sharp_p, a)?,
        average: average_deviation(sharp_p, a)?,
        statistical: statistical_distance(sharp_p, a).ok(),
    })
}

/// The rms noise operator `A[2] − A[1]² + (σ_p − A[1])²` for a ±1-valued `A`,
/// where `A[1] = 2A − I` and `A[2] = I`.
pub fn rms_noise_operator(sharp_p: &BinaryObservable, a: &BinaryObservable) -> HermitianOp {
    let first_moment = a.effect().scale(2.0) - HermitianOp::IDENTITY;
    let second_moment = HermitianOp::IDENTITY;
    let sigma_p = HermitianOp::pauli(sharp_p.vec());
    second_moment - first_moment.square() + (sigma_p - first_moment).square()
}

/// Root-mean-square noise of `A` as a measurement of `P` in the state `r`.
pub fn rms_noise(
    sharp_p: &BinaryObservable,
    a: &BinaryObservable,
    state_r: BlochVector,
) -> Result<f64> {
    check_state(state_r)?;
    let radicand = rms_noise_operator(sharp_p, a).expectation(state_r);
    checked_sqrt(radicand)
}

/// State-independent rms distance: `√(2(1 − a·p))` for unbiased `A`, and in
/// general the supremum over states, `√(1 − |a|² + |p − a|² + 2|1 − α|)`.
pub fn rms_distance(sharp_p: &BinaryObservable, a: &BinaryObservable) -> Result<f64> {
    require_sharp(sharp_p)?;
    let p = sharp_p.vec();
    let av = a.vec();
    let radicand = if a.is_unbiased() {
        2.0 * (1.0 - av.dot(p))
    } else {
        1.0 - av.norm_sq() + (p - av).norm_sq() + 2.0 * (1.0 - a.alpha()).abs()
    };
    checked_sqrt(radicand)
}

pub fn rms_report(
    sharp_p: &BinaryObservable,
    a: &BinaryObservable,
    state_r: BlochVector,
) -> Result<RmsReport> {
    Ok(RmsReport {
        per_state: rms_noise(sharp_p, a, state_r)?,
        distance: rms_distance(sharp_p, a)?,
    })
}

/// `d_rms² = |p − a|² + (1 − |a|²)`: an accuracy part and the intrinsic
/// unsharpness of `A`.
pub fn rms_decomposition(sharp_p: &BinaryObservable, a: &BinaryObservable) -> Result<(f64, f64)> {
    require_sharp(sharp_p)?;
    require_unbiased(a)?;
    let av = a.vec();
    Ok(((sharp_p.vec() - av).norm_sq(), 1.0 - av.norm_sq()))
}

fn checked_sqrt(radicand: f64) -> Result<f64> {
    if radicand < -RADICAND_TOL || radicand.is_nan() {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(radicand.max(0.0).sqrt())
}

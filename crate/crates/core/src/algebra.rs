//! Qubit operators in Pauli coordinates.
//!
//! Every 2×2 Hermitian operator is written `M = ½(m0·I + m·σ)`. In this form
//! the trace is `m0`, the eigenvalues are `½(m0 ± |m|)` and squares stay in
//! closed form, so no numerical linear algebra is needed anywhere in the crate.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for internal cone and unit-norm checks.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for directions supplied by callers.
pub const INPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector::new(0.0, 0.0, 0.0);
    pub const X: BlochVector = BlochVector::new(1.0, 0.0, 0.0);
    pub const Y: BlochVector = BlochVector::new(0.0, 1.0, 0.0);
    pub const Z: BlochVector = BlochVector::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Angle between two non-zero vectors, in `[0, π]`.
    pub fn angle_to(self, other: Self) -> f64 {
        self.cross(other).norm().atan2(self.dot(other))
    }

    /// Rodrigues rotation of `self` about the unit vector `axis`.
    pub fn rotated(self, axis: Self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        self * c + axis.cross(self) * s + axis * (axis.dot(self) * (1.0 - c))
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for BlochVector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<BlochVector> for f64 {
    type Output = BlochVector;
    fn mul(self, v: BlochVector) -> BlochVector {
        v * self
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.p$}, {:.p$}, {:.p$})", self.x, self.y, self.z, p = p),
            None => write!(f, "({}, {}, {})", self.x, self.y, self.z),
        }
    }
}

/// Hermitian operator `½(scalar·I + vec·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HermitianOp {
    pub scalar: f64,
    pub vec: BlochVector,
}

impl HermitianOp {
    pub const ZERO: HermitianOp = HermitianOp::new(0.0, BlochVector::ZERO);
    pub const IDENTITY: HermitianOp = HermitianOp::new(2.0, BlochVector::ZERO);

    pub const fn new(scalar: f64, vec: BlochVector) -> Self {
        Self { scalar, vec }
    }

    /// The Pauli operator `n·σ` (not halved).
    pub fn pauli(n: BlochVector) -> Self {
        Self::new(0.0, n * 2.0)
    }

    pub fn trace(&self) -> f64 {
        self.scalar
    }

    pub fn min_eigenvalue(&self) -> f64 {
        0.5 * (self.scalar - self.vec.norm())
    }

    pub fn max_eigenvalue(&self) -> f64 {
        0.5 * (self.scalar + self.vec.norm())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.scalar * s, self.vec * s)
    }

    /// `M² = ½(½(m0² + |m|²)·I + m0·m·σ)`.
    pub fn square(&self) -> Self {
        let m0 = self.scalar;
        Self::new(0.5 * (m0 * m0 + self.vec.norm_sq()), self.vec * m0)
    }

    /// `tr(Mρ)` for the state `ρ = ½(I + r·σ)`.
    pub fn expectation(&self, state_r: BlochVector) -> f64 {
        0.5 * (self.scalar + self.vec.dot(state_r))
    }

    /// Largest absolute coefficient difference, used for approximate equality.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = *self - *other;
        d.scalar
            .abs()
            .max(d.vec.x.abs())
            .max(d.vec.y.abs())
            .max(d.vec.z.abs())
    }

    /// Dense complex matrix, row-major. Only for debugging and cross-checks.
    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        let BlochVector { x, y, z } = self.vec;
        let h = 0.5;
        [
            [
                Complex64::new(h * (self.scalar + z), 0.0),
                Complex64::new(h * x, -h * y),
            ],
            [
                Complex64::new(h * x, h * y),
                Complex64::new(h * (self.scalar - z), 0.0),
            ],
        ]
    }
}

impl Add for HermitianOp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.scalar + o.scalar, self.vec + o.vec)
    }
}

impl Sub for HermitianOp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.scalar - o.scalar, self.vec - o.vec)
    }
}

impl Neg for HermitianOp {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.scalar, -self.vec)
    }
}

impl fmt::Display for HermitianOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(12);
        write!(
            f,
            "1/2 * ({:.p$} I + {:.p$} . sigma)",
            self.scalar,
            self.vec,
            p = p
        )
    }
}

/// Smallest eigenvalue of a 2×2 Hermitian operator, `½(m0 − |m|)`.
pub fn min_eigenvalue(m: &HermitianOp) -> f64 {
    m.min_eigenvalue()
}

/// Two-outcome observable with effect `A = ½(α·I + a·σ)` for outcome `+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryObservable {
    alpha: f64,
    vec: BlochVector,
}

impl BinaryObservable {
    /// Validates `|a| ≤ α ≤ 2 − |a|`, i.e. `0 ≤ A ≤ I`.
    pub fn new(alpha: f64, vec: BlochVector) -> Result<Self> {
        let norm = vec.norm();
        if !alpha.is_finite() || !vec.is_finite() {
            return Err(Error::OutOfEffectCone { alpha, norm });
        }
        if alpha < norm - EXACT_TOL || alpha > 2.0 - norm + EXACT_TOL {
            return Err(Error::OutOfEffectCone { alpha, norm });
        }
        Ok(Self { alpha, vec })
    }

    /// Unbiased observable (`α = 1`).
    pub fn unbiased(vec: BlochVector) -> Result<Self> {
        Self::new(1.0, vec)
    }

    pub fn trivial() -> Self {
        Self {
            alpha: 1.0,
            vec: BlochVector::ZERO,
        }
    }

    /// Sharp spin observable along a unit `direction`.
    pub fn sharp(direction: BlochVector) -> Result<Self> {
        let n = direction.norm();
        if !n.is_finite() || (n - 1.0).abs() > INPUT_TOL {
            return Err(Error::NotUnitVector(n));
        }
        Ok(Self {
            alpha: 1.0,
            vec: direction,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn vec(&self) -> BlochVector {
        self.vec
    }

    pub fn is_unbiased(&self) -> bool {
        (self.alpha - 1.0).abs() <= EXACT_TOL
    }

    pub fn is_sharp(&self) -> bool {
        self.is_unbiased() && (self.vec.norm() - 1.0).abs() <= EXACT_TOL
    }

    /// The effect of outcome `+1`.
    pub fn effect(&self) -> HermitianOp {
        HermitianOp::new(self.alpha, self.vec)
    }

    /// The same measurement with outcomes swapped: effect `I − A`.
    pub fn complement(&self) -> Self {
        Self {
            alpha: 2.0 - self.alpha,
            vec: -self.vec,
        }
    }

    /// `tr(ρA) = ½(α + a·r)`.
    pub fn outcome_probability(&self, state_r: BlochVector) -> Result<f64> {
        check_state(state_r)?;
        Ok(self.effect().expectation(state_r))
    }
}

/// Validated construction of `A = ½(α·I + a·σ)`.
pub fn effect_from_parameters(alpha: f64, a: BlochVector) -> Result<BinaryObservable> {
    BinaryObservable::new(alpha, a)
}

pub fn sharp_spin(direction: BlochVector) -> Result<BinaryObservable> {
    BinaryObservable::sharp(direction)
}

pub fn outcome_probability(obs: &BinaryObservable, state_r: BlochVector) -> Result<f64> {
    obs.outcome_probability(state_r)
}

pub(crate) fn check_state(r: BlochVector) -> Result<()> {
    let n = r.norm();
    if !n.is_finite() || n > 1.0 + EXACT_TOL {
        return Err(Error::InvalidState(n));
    }
    Ok(())
}

/// Two sharp spin directions `p`, `q` separated by `θ ∈ (0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemInstance {
    theta: f64,
    p: BlochVector,
    q: BlochVector,
    // Unit vector in the p–q plane orthogonal to p, on q's side.
    p_perp: BlochVector,
}

impl ProblemInstance {
    /// Canonical placement: `p = x̂`, `q` in the x–y plane.
    pub fn new(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let (s, c) = theta.sin_cos();
        Ok(Self {
            theta,
            p: BlochVector::X,
            q: BlochVector::new(c, s, 0.0),
            p_perp: BlochVector::Y,
        })
    }

    pub fn from_degrees(theta_deg: f64) -> Result<Self> {
        Self::new(theta_deg.to_radians())
    }

    /// Arbitrary unit directions; the angle between them must lie in `(0, π/2]`.
    pub fn from_directions(p: BlochVector, q: BlochVector) -> Result<Self> {
        for v in [p, q] {
            let n = v.norm();
            if (n - 1.0).abs() > INPUT_TOL {
                return Err(Error::NotUnitVector(n));
            }
        }
        let p = p * (1.0 / p.norm());
        let q = q * (1.0 / q.norm());
        let theta = p.angle_to(q);
        check_theta(theta)?;
        let p_perp = (q - p * p.dot(q))
            .normalized()
            .ok_or(Error::InvalidAngle(theta))?;
        Ok(Self {
            theta,
            p,
            q,
            p_perp,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p(&self) -> BlochVector {
        self.p
    }

    pub fn q(&self) -> BlochVector {
        self.q
    }

    pub fn sharp_p(&self) -> BinaryObservable {
        BinaryObservable {
            alpha: 1.0,
            vec: self.p,
        }
    }

    pub fn sharp_q(&self) -> BinaryObservable {
        BinaryObservable {
            alpha: 1.0,
            vec: self.q,
        }
    }

    /// Point of the p–q plane with coordinates `(u, v)` in the basis `(p, p⊥)`.
    pub fn planar(&self, u: f64, v: f64) -> BlochVector {
        self.p * u + self.p_perp * v
    }

    /// Unit vector at angle `angle` from `p`, rotated toward `q`.
    pub fn direction_at(&self, angle: f64) -> BlochVector {
        let (s, c) = angle.sin_cos();
        self.planar(c, s)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= FRAC_PI_2 + EXACT_TOL) {
        return Err(Error::InvalidAngle(theta));
    }
    Ok(())
}

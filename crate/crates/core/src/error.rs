use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("effect parameters outside the cone: alpha = {alpha}, |a| = {norm} (need |a| <= alpha <= 2 - |a|)")]
    OutOfEffectCone { alpha: f64, norm: f64 },

    #[error("expected a unit vector, got norm {0}")]
    NotUnitVector(f64),

    #[error("state Bloch vector has norm {0} > 1")]
    InvalidState(f64),

    #[error("observable is biased (alpha = {0}); this quantity needs alpha = 1")]
    BiasedObservable(f64),

    #[error("first observable is not sharp")]
    NotSharp,

    #[error("rms noise radicand is negative ({0}); inputs are inconsistent")]
    NegativeRadicand(f64),

    #[error("angle theta = {0} rad outside (0, pi/2]")]
    InvalidAngle(f64),

    #[error("distance {value} outside the admissible range [0, {max}]")]
    DistanceOutOfRange { value: f64, max: f64 },

    #[error("observables are not jointly measurable (slack {0:e})")]
    NotJointlyMeasurable(f64),

    #[error("a boundary curve needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("solver did not converge: {0}")]
    SolverDidNotConverge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

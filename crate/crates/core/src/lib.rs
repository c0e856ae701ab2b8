//! Joint measurability of qubit spin observables.
//!
//! Two sharp spin observables along non-parallel directions `p` and `q`
//! cannot be measured together. This crate decides when unsharp binary
//! approximations `A`, `B` of them can be, measures how far those
//! approximations are from the sharp ones, and traces the optimal
//! trade-off curve between the two approximation errors.
//!
//! * [`algebra`]: qubit operators, effects and states in Pauli coordinates.
//! * [`measurability`]: the Busch criterion, a numeric feasibility oracle
//!   for biased pairs, and explicit joint POVMs.
//! * [`distances`]: statistical and root-mean-square approximation errors.
//! * [`boundary`]: optimal trade-off curves and their closed-form anchors.
//! * [`cli`]: the `jmspin` command line.

pub mod algebra;
pub mod boundary;
pub mod cli;
pub mod distances;
pub mod error;
pub mod geometry;
pub mod measurability;
pub mod optim;

pub use algebra::{BinaryObservable, BlochVector, HermitianOp, ProblemInstance};
pub use boundary::{Metric, TradeoffPoint};
pub use error::{Error, Result};
pub use measurability::{FeasibilityOptions, FeasibilityResult, JointPovm4, Verdict};

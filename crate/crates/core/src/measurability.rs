//! Joint measurability of two binary qubit observables.
//!
//! A joint observable for `A` and `B` is fixed by its `(+,+)` effect
//! `G++ = ½(γ·I + g·σ)`; the other three effects follow from the marginal
//! conditions:
//!
//! ```text
//! G+- = A − G++          = ½((α − γ)·I + (a − g)·σ)
//! G-+ = B − G++          = ½((β − γ)·I + (b − g)·σ)
//! G-- = I − A − B + G++  = ½((2 − α − β + γ)·I + (g − a − b)·σ)
//! ```
//!
//! so `A` and `B` are jointly measurable iff some `(γ, g)` makes all four
//! positive. Twice the smallest of the four minimum eigenvalues is concave in
//! `(γ, g)`; the feasibility oracle maximizes it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BinaryObservable, BlochVector, HermitianOp};
use crate::error::{Error, Result};
use crate::geometry::{busch_sum, BuschEllipsoid};
use crate::optim::{nelder_mead_restarted, NelderMeadOptions};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;
/// Slack magnitudes below this are reported as boundary-indeterminate.
pub const BOUNDARY_BAND: f64 = 1e-6;

const POSITIVITY_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-12;
const MARGINAL_TOL: f64 = 1e-10;
const RANDOM_STARTS: usize = 4;
const MAX_RUNS: usize = 8;
const RESTART_STEP: f64 = 0.05;

/// `2 − |a − b| − |a + b|`; non-negative iff the unbiased pair is jointly measurable.
pub fn busch_margin(a: BlochVector, b: BlochVector) -> f64 {
    2.0 - busch_sum(a, b)
}

/// Whether `b` lies in the ellipsoid with foci `±a` and semi-major axis 1,
/// which is the same test as `busch_margin(a, b) >= 0`.
pub fn jm_ellipsoid_contains(a: BlochVector, b: BlochVector) -> bool {
    BuschEllipsoid::new(a).contains(b)
}

/// Four-outcome POVM `{G++, G+-, G-+, G--}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPovm4 {
    pub g_pp: HermitianOp,
    pub g_pm: HermitianOp,
    pub g_mp: HermitianOp,
    pub g_mm: HermitianOp,
}

/// Worst-case violations of the joint-POVM conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub min_eigenvalue: f64,
    pub normalization_error: f64,
    pub first_marginal_error: f64,
    pub second_marginal_error: f64,
}

impl WitnessReport {
    pub fn is_valid(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOL
            && self.normalization_error <= NORMALIZATION_TOL
            && self.first_marginal_error <= MARGINAL_TOL
            && self.second_marginal_error <= MARGINAL_TOL
    }
}

impl JointPovm4 {
    /// The joint POVM whose `(+,+)` effect is `½(γ·I + g·σ)` and whose
    /// marginals are `A` and `B`.
    pub fn from_parameters(
        a: &BinaryObservable,
        b: &BinaryObservable,
        gamma: f64,
        g: BlochVector,
    ) -> Self {
        let g_pp = HermitianOp::new(gamma, g);
        let g_pm = a.effect() - g_pp;
        let g_mp = b.effect() - g_pp;
        let g_mm = HermitianOp::IDENTITY - a.effect() - b.effect() + g_pp;
        Self {
            g_pp,
            g_pm,
            g_mp,
            g_mm,
        }
    }

    pub fn effects(&self) -> [HermitianOp; 4] {
        [self.g_pp, self.g_pm, self.g_mp, self.g_mm]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.effects()
            .iter()
            .map(HermitianOp::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn first_marginal(&self) -> HermitianOp {
        self.g_pp + self.g_pm
    }

    pub fn second_marginal(&self) -> HermitianOp {
        self.g_pp + self.g_mp
    }

    pub fn total(&self) -> HermitianOp {
        self.g_pp + self.g_pm + self.g_mp + self.g_mm
    }

    pub fn report(&self, a: &BinaryObservable, b: &BinaryObservable) -> WitnessReport {
        WitnessReport {
            min_eigenvalue: self.min_eigenvalue(),
            normalization_error: self.total().max_abs_diff(&HermitianOp::IDENTITY),
            first_marginal_error: self.first_marginal().max_abs_diff(&a.effect()),
            second_marginal_error: self.second_marginal().max_abs_diff(&b.effect()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FeasibilityOptions {
    pub tol: f64,
    pub seed: u64,
    pub max_iterations: usize,
    pub diameter_tol: f64,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            max_iterations: 2000,
            diameter_tol: 1e-11,
        }
    }
}

impl FeasibilityOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Maximum over joint POVMs of twice the smallest effect eigenvalue.
    pub slack: f64,
    pub gamma: f64,
    pub g: BlochVector,
    pub witness: Option<JointPovm4>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    JointlyMeasurable,
    NotJointlyMeasurable,
    BoundaryIndeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::JointlyMeasurable => "jointly-measurable",
            Verdict::NotJointlyMeasurable => "not-jointly-measurable",
            Verdict::BoundaryIndeterminate => "boundary-indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four terms `2·λ_min(G_ij)` as functions of `(γ, g)`.
#[derive(Clone, Copy)]
struct SlackTerms {
    alpha: f64,
    beta: f64,
    a: BlochVector,
    b: BlochVector,
}

impl SlackTerms {
    fn new(a: &BinaryObservable, b: &BinaryObservable) -> Self {
        Self {
            alpha: a.alpha(),
            beta: b.alpha(),
            a: a.vec(),
            b: b.vec(),
        }
    }

    fn terms(&self, gamma: f64, g: BlochVector) -> [f64; 4] {
        [
            gamma - g.norm(),
            (self.alpha - gamma) - (self.a - g).norm(),
            (self.beta - gamma) - (self.b - g).norm(),
            (2.0 - self.alpha - self.beta + gamma) - (self.a + self.b - g).norm(),
        ]
    }

    fn gradients(&self, g: BlochVector) -> [(f64, BlochVector); 4] {
        let unit = |v: BlochVector| v.normalized().unwrap_or(BlochVector::ZERO);
        [
            (1.0, -unit(g)),
            (-1.0, unit(self.a - g)),
            (-1.0, unit(self.b - g)),
            (1.0, unit(self.a + self.b - g)),
        ]
    }

    /// Two terms increase with `γ` and two decrease, so for fixed `g` the
    /// best `γ` balances the tightest of each pair. Returns `(γ*, φ*)`.
    fn best_gamma(&self, g: BlochVector) -> (f64, f64) {
        let lower = g
            .norm()
            .max((self.a + self.b - g).norm() - (2.0 - self.alpha - self.beta));
        let upper = (self.alpha - (self.a - g).norm()).min(self.beta - (self.b - g).norm());
        (0.5 * (upper + lower), 0.5 * (upper - lower))
    }
}

fn min4(t: [f64; 4]) -> f64 {
    t.into_iter().fold(f64::INFINITY, f64::min)
}

/// Numeric joint-measurability oracle for arbitrary (possibly biased) pairs.
pub fn joint_feasibility(
    a: &BinaryObservable,
    b: &BinaryObservable,
    opts: &FeasibilityOptions,
) -> Result<FeasibilityResult> {
    let terms = SlackTerms::new(a, b);
    let objective = |x: &[f64]| -terms.best_gamma(BlochVector::new(x[0], x[1], x[2])).1;

    let (av, bv) = (a.vec(), b.vec());
    let mut starts = vec![BlochVector::ZERO, av * 0.5, bv * 0.5, (av + bv) * 0.25];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..RANDOM_STARTS {
        starts.push(BlochVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ));
    }

    let nm = NelderMeadOptions {
        initial_step: 0.25,
        max_iterations: opts.max_iterations,
        diameter_tol: opts.diameter_tol,
    };

    let mut best: Option<(BlochVector, f64)> = None;
    let mut any_converged = false;
    for start in starts {
        let r = nelder_mead_restarted(objective, &start.to_array(), &nm, RESTART_STEP, MAX_RUNS);
        any_converged |= r.converged;
        let (x, value) = (r.x, r.fx);
        let slack = -value;
        let g = BlochVector::new(x[0], x[1], x[2]);
        if best.is_none_or(|(_, s)| slack > s) {
            best = Some((g, slack));
        }
    }
    if !any_converged {
        return Err(Error::SolverDidNotConverge(format!(
            "no simplex start reached diameter {:e} within {} iterations",
            opts.diameter_tol, opts.max_iterations
        )));
    }

    let (g, slack) = best.expect("at least one start");
    let (gamma, _) = terms.best_gamma(g);
    let feasible = slack >= -opts.tol;
    let (gamma, g) = if feasible {
        clamp_to_positive(&terms, gamma, g)
    } else {
        (gamma, g)
    };
    let witness = feasible
        .then(|| JointPovm4::from_parameters(a, b, gamma, g))
        .filter(|w| w.report(a, b).is_valid());

    Ok(FeasibilityResult {
        feasible,
        slack,
        gamma,
        g,
        witness,
    })
}

/// Removes tiny negative eigenvalues left by the solver by stepping `(γ, g)`
/// along the gradient of the violated term. Marginals stay exact because
/// only the `(+,+)` parameters move.
fn clamp_to_positive(terms: &SlackTerms, mut gamma: f64, mut g: BlochVector) -> (f64, BlochVector) {
    let mut current = min4(terms.terms(gamma, g));
    for _ in 0..32 {
        if current >= 0.0 {
            break;
        }
        let t = terms.terms(gamma, g);
        let k = (0..4).min_by(|&i, &j| t[i].total_cmp(&t[j])).unwrap_or(0);
        let (dg, dv) = terms.gradients(g)[k];
        let grad_sq = dg * dg + dv.norm_sq();
        let scale = -t[k] / grad_sq;
        let (gamma_new, g_new) = (gamma + dg * scale, g + dv * scale);
        let next = min4(terms.terms(gamma_new, g_new));
        if next <= current {
            break;
        }
        gamma = gamma_new;
        g = g_new;
        current = next;
    }
    (gamma, g)
}

/// A verified joint POVM for a jointly measurable pair.
pub fn construct_joint_povm(a: &BinaryObservable, b: &BinaryObservable) -> Result<JointPovm4> {
    construct_joint_povm_with(a, b, &FeasibilityOptions::default())
}

pub fn construct_joint_povm_with(
    a: &BinaryObservable,
    b: &BinaryObservable,
    opts: &FeasibilityOptions,
) -> Result<JointPovm4> {
    let result = joint_feasibility(a, b, opts)?;
    result
        .witness
        .ok_or(Error::NotJointlyMeasurable(result.slack))
}

/// Three-way decision used by the command line.
///
/// Unbiased pairs are decided exactly by the Busch margin. For biased pairs a
/// negative margin still rules joint measurability out; otherwise the oracle
/// decides, and slacks within [`BOUNDARY_BAND`] of zero are not guessed.
pub fn decide(
    a: &BinaryObservable,
    b: &BinaryObservable,
    opts: &FeasibilityOptions,
) -> Result<(Verdict, FeasibilityResult)> {
    let margin = busch_margin(a.vec(), b.vec());
    let result = joint_feasibility(a, b, opts)?;
    let verdict = if a.is_unbiased() && b.is_unbiased() {
        if margin >= -1e-12 {
            Verdict::JointlyMeasurable
        } else {
            Verdict::NotJointlyMeasurable
        }
    } else if margin < -opts.tol {
        Verdict::NotJointlyMeasurable
    } else if result.slack.abs() < BOUNDARY_BAND {
        Verdict::BoundaryIndeterminate
    } else if result.feasible {
        Verdict::JointlyMeasurable
    } else {
        Verdict::NotJointlyMeasurable
    };
    Ok((verdict, result))
}

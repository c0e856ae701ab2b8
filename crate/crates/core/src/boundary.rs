//! Optimal trade-off between approximating `P` and approximating `Q`.
//!
//! For a fixed `d1 = d(P, A)` the boundary value is the smallest
//! `d2 = d(Q, B)` over unbiased, jointly measurable pairs `(A, B)`. Both
//! optimizations are carried out in the plane spanned by `p` and `q`.
//!
//! * Statistical metric: `a` runs over the circle `|p − a| = 2·d1` inside the
//!   unit disc, and for each `a` the best `b` is the point of the Busch
//!   ellipsoid of `a` nearest to `q`. The outer angle is found by
//!   golden-section search.
//! * Rms metric: the optimum is `a = b`, a unit vector at angle
//!   `ω = arccos(1 − d1²/2)` from `p` toward `q`. A fully numeric search
//!   over the level line `a·p = 1 − d1²/2` is kept alongside as a check.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{BlochVector, ProblemInstance};
use crate::error::{Error, Result};
use crate::geometry::BuschEllipsoid;
use crate::optim::golden_section_minimize;

const ANGLE_TOL: f64 = 1e-10;
const SEED_BRACKETS: usize = 5;
const REGION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Statistical,
    Rms,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Statistical => "statistical",
            Metric::Rms => "rms",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "statistical" | "stat" => Ok(Metric::Statistical),
            "rms" => Ok(Metric::Rms),
            other => Err(format!(
                "unknown metric '{other}' (expected statistical or rms)"
            )),
        }
    }
}

/// One point of a boundary curve with the unbiased effect vectors attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub d1: f64,
    pub d2: f64,
    pub a_opt: BlochVector,
    pub b_opt: BlochVector,
    pub metric: Metric,
    pub theta: f64,
}

/// Closed-form optimum on the diagonal `d_s(P, A) = d_s(Q, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricOptimum {
    pub lambda: f64,
    pub a: BlochVector,
    pub b: BlochVector,
    pub d_sym: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmsOptimum {
    pub omega: f64,
    pub direction: BlochVector,
}

/// Smallest `d1` at which `B = Q` becomes attainable.
pub fn saturation(instance: &ProblemInstance, metric: Metric) -> f64 {
    let theta = instance.theta();
    match metric {
        Metric::Statistical => 0.5 * theta.sin(),
        Metric::Rms => 2.0 * (0.5 * theta).sin(),
    }
}

/// `a = λ·ê₊ + (1 − λ)·ê₋`, `b = λ·ê₊ − (1 − λ)·ê₋` with `ê± = (p ± q)/|p ± q|`
/// and `λ = ½(1 + cos θ/2 − sin θ/2)`.
pub fn symmetric_optimum(instance: &ProblemInstance) -> SymmetricOptimum {
    let (p, q) = (instance.p(), instance.q());
    let half = 0.5 * instance.theta();
    let lambda = 0.5 * (1.0 + half.cos() - half.sin());
    let plus = (p + q) * (1.0 / (p + q).norm());
    let minus = (p - q) * (1.0 / (p - q).norm());
    let a = plus * lambda + minus * (1.0 - lambda);
    let b = plus * lambda - minus * (1.0 - lambda);
    SymmetricOptimum {
        lambda,
        a,
        b,
        d_sym: 0.5 * (p - a).norm(),
    }
}

/// `ω = arccos(1 − d1²/2)` and the unit vector at angle `ω` from `p` toward `q`.
pub fn rms_optimal_direction(instance: &ProblemInstance, d1: f64) -> Result<RmsOptimum> {
    if !(0.0..=2.0).contains(&d1) {
        return Err(Error::DistanceOutOfRange {
            value: d1,
            max: 2.0,
        });
    }
    let omega = (1.0 - 0.5 * d1 * d1).clamp(-1.0, 1.0).acos();
    Ok(RmsOptimum {
        omega,
        direction: instance.direction_at(omega),
    })
}

/// Boundary point for the given `d1`.
///
/// `d1` beyond the saturation value is accepted while some `a` on the segment
/// `[−q, q]` still has distance `d1` from `P`; then `B = Q` and `d2 = 0`.
pub fn min_partner_distance(
    instance: &ProblemInstance,
    d1: f64,
    metric: Metric,
) -> Result<TradeoffPoint> {
    match metric {
        Metric::Statistical => StatisticalSearch::new(instance)
            .solve(d1, None)
            .map(|(pt, _)| pt),
        Metric::Rms => rms_analytic_point(instance, d1),
    }
}

/// Smallest `d2` for the given `d1`, or 0 once `d1` reaches saturation.
pub fn boundary_value(instance: &ProblemInstance, d1: f64, metric: Metric) -> Result<f64> {
    if d1 >= saturation(instance, metric) {
        return Ok(0.0);
    }
    min_partner_distance(instance, d1, metric).map(|pt| pt.d2)
}

/// Sweeps `d1` uniformly over `[0, saturation]`, warm-starting each solve
/// from the previous optimum.
pub fn boundary_curve(
    instance: &ProblemInstance,
    metric: Metric,
    n_points: usize,
) -> Result<Vec<TradeoffPoint>> {
    if n_points < 2 {
        return Err(Error::TooFewPoints(n_points));
    }
    let sat = saturation(instance, metric);
    let step = |i: usize| {
        if i == n_points - 1 {
            sat
        } else {
            sat * i as f64 / (n_points - 1) as f64
        }
    };
    match metric {
        Metric::Rms => (0..n_points)
            .map(|i| rms_analytic_point(instance, step(i)))
            .collect(),
        Metric::Statistical => {
            let search = StatisticalSearch::new(instance);
            let mut warm = None;
            let mut curve = Vec::with_capacity(n_points);
            for i in 0..n_points {
                let (pt, angle) = search.solve(step(i), warm)?;
                warm = angle;
                curve.push(pt);
            }
            Ok(curve)
        }
    }
}

/// Whether jointly measurable approximations with distances `(d1, d2)` exist,
/// i.e. whether the point lies on or above the boundary.
pub fn region_membership(instance: &ProblemInstance, d1: f64, d2: f64, metric: Metric) -> bool {
    if !(d1 >= 0.0 && d2 >= 0.0) {
        return false;
    }
    match boundary_value(instance, d1, metric) {
        Ok(best) => d2 >= best - REGION_TOL,
        Err(_) => false,
    }
}

fn rms_analytic_point(instance: &ProblemInstance, d1: f64) -> Result<TradeoffPoint> {
    let theta = instance.theta();
    let sat = saturation(instance, Metric::Rms);
    if d1.is_nan() || d1 < 0.0 {
        return Err(Error::DistanceOutOfRange {
            value: d1,
            max: sat,
        });
    }
    if d1 > sat + 1e-12 {
        // a = t·q with 2 − 2t·cos θ = d1²
        let t = (2.0 - d1 * d1) / (2.0 * theta.cos());
        if t.is_nan() || t.abs() > 1.0 {
            return Err(Error::DistanceOutOfRange {
                value: d1,
                max: sat,
            });
        }
        return Ok(TradeoffPoint {
            d1,
            d2: 0.0,
            a_opt: instance.q() * t,
            b_opt: instance.q(),
            metric: Metric::Rms,
            theta,
        });
    }
    let opt = rms_optimal_direction(instance, d1)?;
    let omega = opt.omega.min(theta);
    Ok(TradeoffPoint {
        d1,
        d2: 2.0 * (0.5 * (theta - omega)).sin(),
        a_opt: opt.direction,
        b_opt: opt.direction,
        metric: Metric::Rms,
        theta,
    })
}

/// Numeric rms boundary point that does not assume `a = b`.
///
/// `a` ranges over the chord `a·p = 1 − d1²/2` of the unit disc; for each `a`
/// the best partner maximizes `b·q` over the Busch ellipsoid, which is its
/// support function.
pub fn rms_numeric_partner_distance(instance: &ProblemInstance, d1: f64) -> Result<TradeoffPoint> {
    let sat = saturation(instance, Metric::Rms);
    if !(0.0..=sat).contains(&d1) {
        return Err(Error::DistanceOutOfRange {
            value: d1,
            max: sat,
        });
    }
    let q = instance.q();
    let along = 1.0 - 0.5 * d1 * d1;
    let half_chord = (1.0 - along * along).max(0.0).sqrt();
    let effect = |s: f64| instance.planar(along, s);
    let partner_sq = |s: f64| {
        let h = BuschEllipsoid::new(effect(s)).support(q).min(1.0);
        2.0 * (1.0 - h)
    };

    let mut best = (0.0, partner_sq(0.0));
    if half_chord > 0.0 {
        let width = 2.0 * half_chord / SEED_BRACKETS as f64;
        for k in 0..SEED_BRACKETS {
            let lo = -half_chord + width * k as f64;
            let (s, v) = golden_section_minimize(partner_sq, lo, lo + width, 1e-12);
            if v < best.1 {
                best = (s, v);
            }
        }
    }
    let a = effect(best.0);
    let b = BuschEllipsoid::new(a).support_point(q);
    let d2 = best.1.max(0.0).sqrt();
    if !d2.is_finite() {
        return Err(Error::SolverDidNotConverge(
            "non-finite rms partner distance".into(),
        ));
    }
    Ok(TradeoffPoint {
        d1,
        d2,
        a_opt: a,
        b_opt: b,
        metric: Metric::Rms,
        theta: instance.theta(),
    })
}

struct StatisticalSearch<'a> {
    instance: &'a ProblemInstance,
}

impl<'a> StatisticalSearch<'a> {
    fn new(instance: &'a ProblemInstance) -> Self {
        Self { instance }
    }

    /// `a` on the circle of radius `r` around `p`, at polar angle `phi`.
    fn effect(&self, r: f64, phi: f64) -> BlochVector {
        let (s, c) = phi.sin_cos();
        self.instance.planar(1.0 + r * c, r * s)
    }

    fn partner_distance(&self, a: BlochVector) -> (f64, BlochVector) {
        let proj = BuschEllipsoid::new(a).project(self.instance.q());
        (proj.distance, proj.point)
    }

    /// Returns the boundary point and the polar angle of `a` used as the
    /// next warm start (absent for closed-form cases).
    fn solve(&self, d1: f64, warm: Option<f64>) -> Result<(TradeoffPoint, Option<f64>)> {
        let inst = self.instance;
        let (p, q, theta) = (inst.p(), inst.q(), inst.theta());
        let sat = saturation(inst, Metric::Statistical);
        if d1.is_nan() || d1 < 0.0 {
            return Err(Error::DistanceOutOfRange {
                value: d1,
                max: sat,
            });
        }
        let point = |a_opt: BlochVector, b_opt: BlochVector, d2: f64| TradeoffPoint {
            d1,
            d2,
            a_opt,
            b_opt,
            metric: Metric::Statistical,
            theta,
        };

        if d1 == 0.0 {
            let (dist, b) = self.partner_distance(p);
            return Ok((point(p, b, 0.5 * dist), None));
        }
        if d1 > sat {
            // a = t·q with |p − t·q| = 2·d1, t ∈ [−1, cos θ]
            let excess = 4.0 * d1 * d1 - theta.sin().powi(2);
            let t = theta.cos() - excess.max(0.0).sqrt();
            if t < -1.0 {
                return Err(Error::DistanceOutOfRange {
                    value: d1,
                    max: sat,
                });
            }
            return Ok((point(q * t, q, 0.0), None));
        }

        let r = 2.0 * d1;
        // |a| ≤ 1 on the circle iff cos φ ≤ −r/2
        let start = (-0.5 * r).acos();
        let end = TAU - start;
        let objective = |phi: f64| self.partner_distance(self.effect(r, phi)).0;

        let width = (end - start) / SEED_BRACKETS as f64;
        let mut brackets: Vec<(f64, f64)> = (0..SEED_BRACKETS)
            .map(|k| (start + width * k as f64, start + width * (k + 1) as f64))
            .collect();
        if let Some(phi) = warm {
            let w = 0.5 * width;
            brackets.insert(0, ((phi - w).max(start), (phi + w).min(end)));
        }

        let bisector = (p + q) * (1.0 / (p + q).norm());
        let tie_angle = |phi: f64| self.effect(r, phi).angle_to(bisector);
        let mut best: Option<(f64, f64)> = None;
        for (lo, hi) in brackets {
            let (phi, dist) = golden_section_minimize(objective, lo, hi, ANGLE_TOL);
            let better = match best {
                None => true,
                Some((bphi, bdist)) => {
                    dist < bdist - 1e-15
                        || (dist <= bdist + 1e-15 && tie_angle(phi) < tie_angle(bphi))
                }
            };
            if better {
                best = Some((phi, dist));
            }
        }
        let (phi, dist) = best.expect("non-empty bracket list");
        if !dist.is_finite() {
            return Err(Error::SolverDidNotConverge(format!(
                "non-finite partner distance at d1 = {d1}"
            )));
        }
        let a = self.effect(r, phi);
        let (dist, b) = self.partner_distance(a);
        Ok((point(a, b, 0.5 * dist), Some(phi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurability::busch_margin;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn inst(deg: f64) -> ProblemInstance {
        ProblemInstance::from_degrees(deg).unwrap()
    }

    // Oracle: dense sampling of both the outer circle and the ellipse boundary.
    fn brute_statistical(instance: &ProblemInstance, d1: f64) -> f64 {
        let (p, q) = (instance.p(), instance.q());
        let r = 2.0 * d1;
        let mut best = f64::INFINITY;
        for i in 0..=4000 {
            let phi = TAU * i as f64 / 4000.0;
            let a = instance.planar(1.0 + r * phi.cos(), r * phi.sin());
            if a.norm() > 1.0 {
                continue;
            }
            let n = a.norm();
            let axis = a.normalized().unwrap_or(p);
            let side = instance.planar(-axis.dot(instance.planar(0.0, 1.0)), axis.dot(p));
            let minor = (1.0 - n * n).max(0.0).sqrt();
            let mut dist = f64::INFINITY;
            if busch_margin(a, q) >= 0.0 {
                dist = 0.0;
            } else {
                for k in 0..2000 {
                    let s = TAU * k as f64 / 2000.0;
                    let b = axis * s.cos() + side * (minor * s.sin());
                    dist = dist.min((q - b).norm());
                }
            }
            best = best.min(0.5 * dist);
        }
        best
    }

    #[test]
    fn symmetric_optimum_at_right_angle() {
        let s = symmetric_optimum(&inst(90.0));
        assert_abs_diff_eq!(s.lambda, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (s.a - BlochVector::X * FRAC_1_SQRT_2).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            (s.b - inst(90.0).q() * FRAC_1_SQRT_2).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.d_sym, 0.146_446_609_406_726_24, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_optimum_is_on_busch_boundary() {
        for deg in [5.0, 30.0, 45.0, 60.0, 77.0, 90.0] {
            let i = inst(deg);
            let s = symmetric_optimum(&i);
            assert_abs_diff_eq!(busch_margin(s.a, s.b), 0.0, epsilon = 1e-12);
            let d_b = 0.5 * (i.q() - s.b).norm();
            assert_abs_diff_eq!(s.d_sym, d_b, epsilon = 1e-14);
        }
    }

    #[test]
    fn statistical_symmetric_point_lies_on_boundary() {
        let i = inst(90.0);
        let pt = min_partner_distance(&i, 0.146447, Metric::Statistical).unwrap();
        assert_abs_diff_eq!(pt.d2, 0.146447, epsilon = 1e-4);
    }

    #[test]
    fn statistical_saturation_gives_exact_partner() {
        for deg in [30.0, 60.0, 90.0] {
            let i = inst(deg);
            let sat = 0.5 * i.theta().sin();
            let pt = min_partner_distance(&i, sat, Metric::Statistical).unwrap();
            assert!(pt.d2 < 1e-9, "{deg}: {}", pt.d2);
            let start = min_partner_distance(&i, 0.0, Metric::Statistical).unwrap();
            assert_abs_diff_eq!(start.d2, sat, epsilon = 1e-15);
        }
    }

    #[test]
    fn statistical_matches_brute_force() {
        for (deg, d1) in [(90.0, 0.25), (60.0, 0.1), (30.0, 0.05), (90.0, 0.4)] {
            let i = inst(deg);
            let pt = min_partner_distance(&i, d1, Metric::Statistical).unwrap();
            let brute = brute_statistical(&i, d1);
            assert!(pt.d2 <= brute + 1e-9, "{deg} {d1}: {} vs {brute}", pt.d2);
            assert_abs_diff_eq!(pt.d2, brute, epsilon = 1e-5);
        }
    }

    #[test]
    fn tradeoff_point_invariants() {
        for deg in [30.0, 60.0, 90.0] {
            let i = inst(deg);
            for pt in boundary_curve(&i, Metric::Statistical, 15).unwrap() {
                assert!(busch_margin(pt.a_opt, pt.b_opt) >= -1e-7);
                assert_abs_diff_eq!(0.5 * (i.p() - pt.a_opt).norm(), pt.d1, epsilon = 1e-7);
                assert_abs_diff_eq!(0.5 * (i.q() - pt.b_opt).norm(), pt.d2, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn beyond_saturation() {
        let i = inst(60.0);
        let pt = min_partner_distance(&i, 0.6, Metric::Statistical).unwrap();
        assert_eq!(pt.d2, 0.0);
        assert_abs_diff_eq!(0.5 * (i.p() - pt.a_opt).norm(), 0.6, epsilon = 1e-12);
        assert!(matches!(
            min_partner_distance(&i, 0.99, Metric::Statistical),
            Err(Error::DistanceOutOfRange { .. })
        ));
        assert!(min_partner_distance(&i, -0.1, Metric::Statistical).is_err());

        let pt = min_partner_distance(&i, 1.2, Metric::Rms).unwrap();
        assert_eq!(pt.d2, 0.0);
        assert!(min_partner_distance(&inst(90.0), 1.5, Metric::Rms).is_err());
        assert_eq!(boundary_value(&i, 0.6, Metric::Statistical).unwrap(), 0.0);
    }

    #[test]
    fn rms_examples() {
        let i = inst(90.0);
        let sym = (2.0 - SQRT_2).sqrt();
        let pt = min_partner_distance(&i, sym, Metric::Rms).unwrap();
        assert_abs_diff_eq!(pt.d2, sym, epsilon = 1e-12);
        let first = min_partner_distance(&i, 0.0, Metric::Rms).unwrap();
        assert_abs_diff_eq!(first.d2, SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn rms_direction_examples() {
        let i = inst(60.0);
        let o = rms_optimal_direction(&i, 0.0).unwrap();
        assert_eq!(o.omega, 0.0);
        assert_abs_diff_eq!((o.direction - i.p()).norm(), 0.0, epsilon = 1e-15);
        let o = rms_optimal_direction(&i, (2.0 - SQRT_2).sqrt()).unwrap();
        assert_abs_diff_eq!(o.omega, FRAC_PI_4, epsilon = 1e-12);
        let o = rms_optimal_direction(&i, 2.0).unwrap();
        assert_abs_diff_eq!(o.omega, PI, epsilon = 1e-12);
        assert!(rms_optimal_direction(&i, 2.0001).is_err());
    }

    #[test]
    fn rms_numeric_agrees_with_analytic() {
        for deg in [30.0, 60.0, 90.0] {
            let i = inst(deg);
            let sat = saturation(&i, Metric::Rms);
            for k in 0..=10 {
                let d1 = sat * k as f64 / 10.0;
                let num = rms_numeric_partner_distance(&i, d1).unwrap();
                let ana = min_partner_distance(&i, d1, Metric::Rms).unwrap();
                assert_abs_diff_eq!(num.d2, ana.d2, epsilon = 1e-6);
                assert!(busch_margin(num.a_opt, num.b_opt) >= -1e-9);
            }
        }
    }

    #[test]
    fn curve_endpoints_and_ordering() {
        let i = inst(90.0);
        let c = boundary_curve(&i, Metric::Statistical, 3).unwrap();
        assert_abs_diff_eq!(c[0].d1, 0.0);
        assert_abs_diff_eq!(c[0].d2, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1].d1, 0.25);
        assert_abs_diff_eq!(c[2].d1, 0.5);
        assert!(c[2].d2 < 1e-9);
        assert!(boundary_curve(&i, Metric::Rms, 1).is_err());

        let c = boundary_curve(&i, Metric::Rms, 50).unwrap();
        assert_abs_diff_eq!(c[0].d2, SQRT_2, epsilon = 1e-15);
        for w in c.windows(2) {
            assert!(w[1].d1 > w[0].d1 && w[1].d2 <= w[0].d2 + 1e-9);
        }
    }

    #[test]
    fn region_examples() {
        let i = inst(90.0);
        assert!(!region_membership(&i, 0.0, 0.0, Metric::Statistical));
        assert!(!region_membership(&i, 0.0, 0.0, Metric::Rms));
        let s = symmetric_optimum(&i);
        assert!(region_membership(
            &i,
            s.d_sym,
            s.d_sym + 1e-6,
            Metric::Statistical
        ));
        assert!(!region_membership(
            &i,
            s.d_sym,
            s.d_sym - 1e-6,
            Metric::Statistical
        ));
        assert!(region_membership(&i, 0.5, 0.0, Metric::Statistical));
        assert!(region_membership(&i, 0.7, 0.0, Metric::Statistical));
        assert!(region_membership(&i, SQRT_2, 0.0, Metric::Rms));
        assert!(!region_membership(&i, -0.1, 1.0, Metric::Rms));
    }

    #[test]
    fn metric_parsing() {
        assert_eq!(
            "statistical".parse::<Metric>().unwrap(),
            Metric::Statistical
        );
        assert_eq!(" RMS ".parse::<Metric>().unwrap(), Metric::Rms);
        assert!("foo".parse::<Metric>().is_err());
        assert_eq!(
            saturation(&inst(90.0), Metric::Rms),
            2.0 * (FRAC_PI_2 / 2.0).sin()
        );
    }
}

//! Smoothing sharp candidates with the optimal transition profile.
//!
//! The profile solves `ε q' = sqrt(2 W*(q))` from `q = δ` to `q = 1 - δ`;
//! it is tabulated once in units of `ε` and centred where `q = 1/2`.

use super::field::{trapezoid, DiscreteField, FieldKind};
use super::projection::project_stretch;
use crate::error::{domain, Result};
use crate::material::MaterialModel;
use crate::sharp::{PiecewiseConstantField, PiecewiseLinearField, SlopeClass};

const DELTA: f64 = 1e-4;
const STEPS_PER_EPSILON: f64 = 400.0;
const MAX_STEPS: usize = 400_000;

/// Minimum separation between transitions, in units of `ε`, below which
/// the profiles are truncated against each other.
pub const OVERLAP_SEPARATION: f64 = 10.0;

/// Heteroclinic profile from the broken well to the unit well, with `t`
/// measured in units of `ε` from the half-level point.
#[derive(Debug, Clone)]
pub struct TransitionProfile {
    t: Vec<f64>,
    q: Vec<f64>,
}

impl TransitionProfile {
    pub fn new(model: &MaterialModel) -> Result<Self> {
        let rhs = |q: f64| (2.0 * model.wstar(q)).max(0.0).sqrt();
        let dt = 1.0 / STEPS_PER_EPSILON;
        let mut t = vec![0.0];
        let mut q = vec![DELTA];
        let mut cur = DELTA;
        while cur < 1.0 - DELTA {
            if t.len() > MAX_STEPS {
                return domain(format!(
                    "transition profile of model {} does not reach the unit well",
                    model.name()
                ));
            }
            let k1 = rhs(cur);
            let k2 = rhs(cur + 0.5 * dt * k1);
            let k3 = rhs(cur + 0.5 * dt * k2);
            let k4 = rhs(cur + dt * k3);
            cur = (cur + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).min(1.0);
            t.push(*t.last().unwrap() + dt);
            q.push(cur);
        }
        // recentre on q = 1/2
        let i = q.partition_point(|&v| v < 0.5);
        let centre = if i == 0 {
            t[0]
        } else {
            let s = (0.5 - q[i - 1]) / (q[i] - q[i - 1]);
            t[i - 1] + s * (t[i] - t[i - 1])
        };
        t.iter_mut().for_each(|v| *v -= centre);
        Ok(Self { t, q })
    }

    /// Profile value at `t` (units of `ε`); 0 before the start, 1 after the end.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.t[0] {
            return 0.0;
        }
        let last = self.t.len() - 1;
        if t >= self.t[last] {
            return 1.0;
        }
        let i = self.t.partition_point(|&v| v <= t);
        let s = (t - self.t[i - 1]) / (self.t[i] - self.t[i - 1]);
        self.q[i - 1] + s * (self.q[i] - self.q[i - 1])
    }

    /// Width from `q = δ` to `q = 1 - δ`, in units of `ε`.
    pub fn width(&self) -> f64 {
        self.t[self.t.len() - 1] - self.t[0]
    }
}

/// Two transitions closer than [`OVERLAP_SEPARATION`] `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapWarning {
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone)]
pub struct Mollified {
    pub field: DiscreteField,
    pub overlaps: Vec<OverlapWarning>,
}

/// A sharp candidate that can be smoothed onto a grid.
#[derive(Debug, Clone, Copy)]
pub enum SharpField<'a> {
    Stretch(&'a PiecewiseConstantField),
    Deformation(&'a PiecewiseLinearField),
}

/// Position and direction (`true` = rising to the unit well) of every
/// transition of a two-valued profile.
type Transitions = Vec<(f64, bool)>;

fn smooth(profile: &TransitionProfile, transitions: &Transitions, epsilon: f64, y: f64, sharp: f64) -> f64 {
    let Some(&(pos, rising)) = transitions
        .iter()
        .min_by(|a, b| (a.0 - y).abs().total_cmp(&(b.0 - y).abs()))
    else {
        return sharp;
    };
    let t = (y - pos) / epsilon;
    if rising {
        profile.eval(t)
    } else {
        profile.eval(-t)
    }
}

fn overlaps(transitions: &Transitions, epsilon: f64) -> Vec<OverlapWarning> {
    transitions
        .windows(2)
        .filter(|w| w[1].0 - w[0].0 < OVERLAP_SEPARATION * epsilon)
        .map(|w| OverlapWarning {
            left: w[0].0,
            right: w[1].0,
        })
        .collect()
}

pub fn mollify_sharp_candidate(
    field: SharpField<'_>,
    epsilon: f64,
    model: &MaterialModel,
    intervals: usize,
) -> Result<Mollified> {
    let profile = TransitionProfile::new(model)?;
    mollify_with_profile(field, epsilon, &profile, intervals)
}

pub fn mollify_with_profile(
    field: SharpField<'_>,
    epsilon: f64,
    profile: &TransitionProfile,
    intervals: usize,
) -> Result<Mollified> {
    if !(epsilon > 0.0) {
        return domain(format!("ε must be positive, got {epsilon}"));
    }
    if intervals < 2 {
        return domain("grid needs at least 2 intervals");
    }
    match field {
        SharpField::Stretch(f) => {
            let lambda = f.domain_length();
            let mut transitions = Transitions::new();
            for (b, w) in f.breakpoints().iter().zip(f.values().windows(2)) {
                if w[0] != w[1] {
                    transitions.push((*b, w[1] > w[0]));
                }
            }
            let dy = lambda / intervals as f64;
            let sample = |shift: f64| -> Vec<f64> {
                // positive shift widens the unit phase
                let moved: Transitions = transitions
                    .iter()
                    .map(|&(p, rising)| (if rising { p - shift } else { p + shift }, rising))
                    .collect();
                (0..=intervals)
                    .map(|j| {
                        let y = j as f64 * dy;
                        smooth(profile, &moved, epsilon, y, f.value_at(y))
                    })
                    .collect()
            };
            let field = if transitions.is_empty() {
                DiscreteField::new(FieldKind::InverseStretch, lambda, sample(0.0))?
            } else {
                // restore the mass by moving the interfaces, then project
                // away the remaining rounding
                let target = f.integral();
                let mass = |shift: f64| trapezoid(&sample(shift), dy) - target;
                let (mut lo, mut hi) = (-epsilon * profile.width(), epsilon * profile.width());
                let shift = if mass(lo) <= 0.0 && mass(hi) >= 0.0 {
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if mass(mid) < 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    0.5 * (lo + hi)
                } else {
                    0.0
                };
                project_stretch(&sample(shift), lambda)?
            };
            Ok(Mollified {
                field,
                overlaps: overlaps(&transitions, epsilon),
            })
        }
        SharpField::Deformation(f) => {
            let classes = f.slope_classes();
            if classes.contains(&SlopeClass::Other) {
                return domain("mollification needs every slope of h in {0, 1}");
            }
            let lambda = f.domain_length();
            let dy = lambda / intervals as f64;
            if classes.windows(2).all(|w| w[0] == w[1]) {
                let values = (0..=intervals).map(|j| f.eval(j as f64 * dy)).collect();
                return Ok(Mollified {
                    field: DiscreteField::new(FieldKind::InverseDeformation, lambda, values)?,
                    overlaps: vec![],
                });
            }
            let mut transitions = Transitions::new();
            for (k, w) in classes.windows(2).enumerate() {
                if w[0] != w[1] {
                    transitions.push((f.knots()[k + 1], w[1] == SlopeClass::Elastic));
                }
            }
            let sharp_slope = |y: f64| {
                let i = f.knots().partition_point(|&t| t <= y).saturating_sub(1).min(classes.len() - 1);
                if classes[i] == SlopeClass::Elastic {
                    1.0
                } else {
                    0.0
                }
            };
            let mut values = Vec::with_capacity(intervals + 1);
            let mut acc = 0.0;
            values.push(0.0);
            for i in 0..intervals {
                let y = (i as f64 + 0.5) * dy;
                acc += dy * smooth(profile, &transitions, epsilon, y, sharp_slope(y));
                values.push(acc);
            }
            let end = acc;
            values.iter_mut().for_each(|v| *v /= end);
            *values.last_mut().unwrap() = 1.0;
            Ok(Mollified {
                field: DiscreteField::new(FieldKind::InverseDeformation, lambda, values)?,
                overlaps: overlaps(&transitions, epsilon),
            })
        }
    }
}

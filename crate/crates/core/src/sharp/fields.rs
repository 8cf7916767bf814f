use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Absolute tolerance for the `{0, 1}` value/slope and measure constraints.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Piecewise-constant inverse stretch `H` on `(0, λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantField {
    domain_length: f64,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstantField {
    pub fn new(domain_length: f64, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(domain_length > 0.0 && domain_length.is_finite()) {
            return domain(format!("domain length must be positive, got {domain_length}"));
        }
        if values.len() != breakpoints.len() + 1 {
            return domain(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("field values must be finite");
        }
        let mut prev = 0.0;
        for &b in &breakpoints {
            if !(b > prev && b < domain_length) {
                return domain(format!(
                    "breakpoints must increase strictly inside (0, {domain_length}); offending {b}"
                ));
            }
            prev = b;
        }
        Ok(Self {
            domain_length,
            breakpoints,
            values,
        })
    }

    pub fn constant(domain_length: f64, value: f64) -> Result<Self> {
        Self::new(domain_length, vec![], vec![value])
    }

    /// `H = 1` on `(0, 1)`, `H = 0` on `(1, λ)`: one crack at the right end.
    pub fn right_end_crack(domain_length: f64) -> Result<Self> {
        if domain_length <= 1.0 {
            return domain(format!("a crack needs λ > 1, got {domain_length}"));
        }
        Self::new(domain_length, vec![1.0], vec![1.0, 0.0])
    }

    /// `H = 0` on `(0, λ - 1)`, `H = 1` on `(λ - 1, λ)`: one crack at the left end.
    pub fn left_end_crack(domain_length: f64) -> Result<Self> {
        if domain_length <= 1.0 {
            return domain(format!("a crack needs λ > 1, got {domain_length}"));
        }
        Self::new(domain_length, vec![domain_length - 1.0], vec![0.0, 1.0])
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Subintervals as `(start, end, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let starts = std::iter::once(0.0).chain(self.breakpoints.iter().copied());
        let ends = self
            .breakpoints
            .iter()
            .copied()
            .chain(std::iter::once(self.domain_length));
        starts
            .zip(ends)
            .zip(self.values.iter().copied())
            .map(|((a, b), v)| (a, b, v))
    }

    pub fn value_at(&self, y: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= y);
        self.values[idx]
    }

    /// Number of breakpoints across which the value actually changes.
    pub fn jump_count(&self) -> usize {
        self.values.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn integral(&self) -> f64 {
        self.pieces().map(|(a, b, v)| (b - a) * v).sum()
    }
}

/// Continuous piecewise-linear inverse deformation `h` on `[0, λ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearField {
    domain_length: f64,
    knots: Vec<f64>,
    knot_values: Vec<f64>,
}

/// Slope of a linear piece classified against the sharp-interface set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeClass {
    Plateau,
    Elastic,
    Other,
}

impl PiecewiseLinearField {
    pub fn new(knots: Vec<f64>, knot_values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != knot_values.len() {
            return domain(format!(
                "need at least two knots with one value each, got {} knots and {} values",
                knots.len(),
                knot_values.len()
            ));
        }
        if knots[0] != 0.0 {
            return domain(format!("first knot must be 0, got {}", knots[0]));
        }
        if knots.iter().chain(&knot_values).any(|v| !v.is_finite()) {
            return domain("knots and values must be finite");
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return domain("knots must be strictly increasing");
        }
        Ok(Self {
            domain_length: *knots.last().unwrap(),
            knots,
            knot_values,
        })
    }

    /// `h(y) = y` on `[0, 1]`, the unbroken specimen.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap()
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn knot_values(&self) -> &[f64] {
        &self.knot_values
    }

    pub fn eval(&self, y: f64) -> f64 {
        let k = &self.knots;
        if y <= k[0] {
            return self.knot_values[0];
        }
        if y >= self.domain_length {
            return *self.knot_values.last().unwrap();
        }
        let i = k.partition_point(|&t| t <= y) - 1;
        let t = (y - k[i]) / (k[i + 1] - k[i]);
        self.knot_values[i] + t * (self.knot_values[i + 1] - self.knot_values[i])
    }

    /// Linear pieces as `(y0, y1, h0, h1)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.knots
            .windows(2)
            .zip(self.knot_values.windows(2))
            .map(|(y, h)| (y[0], y[1], h[0], h[1]))
    }

    pub fn slope_classes(&self) -> Vec<SlopeClass> {
        self.pieces()
            .map(|(y0, y1, h0, h1)| {
                let rise = h1 - h0;
                if rise.abs() <= FEASIBILITY_TOL {
                    SlopeClass::Plateau
                } else if (rise - (y1 - y0)).abs() <= FEASIBILITY_TOL {
                    SlopeClass::Elastic
                } else {
                    SlopeClass::Other
                }
            })
            .collect()
    }

    pub fn has_sharp_slopes(&self) -> bool {
        self.slope_classes().iter().all(|&c| c != SlopeClass::Other)
    }

    pub fn satisfies_boundary_conditions(&self) -> bool {
        self.knot_values[0].abs() <= FEASIBILITY_TOL
            && (self.knot_values.last().unwrap() - 1.0).abs() <= FEASIBILITY_TOL
    }

    /// Derivative discontinuities `#D(h')` among `{0, 1}` slopes.
    pub fn derivative_jump_count(&self) -> usize {
        self.slope_classes().windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Maximal plateaus `(y_start, y_end, h_value)`.
    pub fn plateaus(&self) -> Vec<(f64, f64, f64)> {
        maximal_runs(self, SlopeClass::Plateau)
            .into_iter()
            .map(|(y0, y1, h0, _)| (y0, y1, h0))
            .collect()
    }

    /// Maximal slope-one pieces `(y_start, y_end, h_start, h_end)`.
    pub fn elastic_runs(&self) -> Vec<(f64, f64, f64, f64)> {
        maximal_runs(self, SlopeClass::Elastic)
    }

    /// Drops interior knots whose neighbouring pieces share a slope class.
    pub(crate) fn merged(self) -> Self {
        let classes = self.slope_classes();
        let mut knots = vec![self.knots[0]];
        let mut values = vec![self.knot_values[0]];
        for i in 1..self.knots.len() - 1 {
            if classes[i - 1] != classes[i] || classes[i] == SlopeClass::Other {
                knots.push(self.knots[i]);
                values.push(self.knot_values[i]);
            }
        }
        knots.push(*self.knots.last().unwrap());
        values.push(*self.knot_values.last().unwrap());
        Self {
            domain_length: self.domain_length,
            knots,
            knot_values: values,
        }
    }
}

fn maximal_runs(field: &PiecewiseLinearField, class: SlopeClass) -> Vec<(f64, f64, f64, f64)> {
    let mut runs: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut open = false;
    for (piece, c) in field.pieces().zip(field.slope_classes()) {
        if c == class {
            match runs.last_mut() {
                Some(run) if open => {
                    run.1 = piece.1;
                    run.3 = piece.3;
                }
                _ => runs.push(piece),
            }
            open = true;
        } else {
            open = false;
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_validation() {
        assert!(PiecewiseConstantField::new(1.4, vec![1.0, 0.5], vec![1.0, 0.0, 1.0]).is_err());
        assert!(PiecewiseConstantField::new(1.4, vec![1.4], vec![1.0, 0.0]).is_err());
        assert!(PiecewiseConstantField::new(1.4, vec![1.0], vec![1.0]).is_err());
        assert!(PiecewiseConstantField::new(-1.0, vec![], vec![1.0]).is_err());
        let f = PiecewiseConstantField::right_end_crack(1.4).unwrap();
        assert_eq!(f.jump_count(), 1);
        assert_eq!(f.value_at(0.5), 1.0);
        assert_eq!(f.value_at(1.2), 0.0);
        assert!((f.integral() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_field_queries() {
        let f = PiecewiseLinearField::new(vec![0.0, 1.0, 1.4], vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(1.2), 1.0);
        assert_eq!(f.derivative_jump_count(), 1);
        assert_eq!(f.plateaus(), vec![(1.0, 1.4, 1.0)]);
        assert!(f.has_sharp_slopes());
        assert!(f.satisfies_boundary_conditions());
        assert!(PiecewiseLinearField::new(vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]).is_err());
        assert!(PiecewiseLinearField::new(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn merging_collinear_pieces() {
        let f = PiecewiseLinearField::new(vec![0.0, 0.5, 1.0, 1.2, 1.4], vec![0.0, 0.5, 1.0, 1.0, 1.0])
            .unwrap()
            .merged();
        assert_eq!(f.knots(), &[0.0, 1.0, 1.4]);
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// What the samples of a [`DiscreteField`] represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// Inverse stretch `H`.
    InverseStretch,
    /// Inverse deformation `h`.
    InverseDeformation,
}

/// Samples at uniform nodes `y_j = j λ / N`, `j = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteField {
    kind: FieldKind,
    domain_length: f64,
    values: Vec<f64>,
}

/// Level used to count transitions between the wells.
pub const TRANSITION_LEVEL: f64 = 0.5;

impl DiscreteField {
    pub fn new(kind: FieldKind, domain_length: f64, values: Vec<f64>) -> Result<Self> {
        if !(domain_length > 0.0 && domain_length.is_finite()) {
            return domain(format!("domain length must be positive, got {domain_length}"));
        }
        if values.len() < 3 {
            return domain(format!("need at least 3 nodes, got {}", values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("field values must be finite");
        }
        Ok(Self {
            kind,
            domain_length,
            values,
        })
    }

    pub fn from_fn(
        kind: FieldKind,
        domain_length: f64,
        intervals: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let dy = domain_length / intervals as f64;
        Self::new(kind, domain_length, (0..=intervals).map(|j| f(j as f64 * dy)).collect())
    }

    /// `H ≡ 1/λ`.
    pub fn homogeneous_stretch(domain_length: f64, intervals: usize) -> Result<Self> {
        Self::from_fn(FieldKind::InverseStretch, domain_length, intervals, |_| 1.0 / domain_length)
    }

    /// `h(y) = y/λ`.
    pub fn homogeneous_deformation(domain_length: f64, intervals: usize) -> Result<Self> {
        Self::from_fn(FieldKind::InverseDeformation, domain_length, intervals, |y| y / domain_length)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        self.domain_length / self.intervals() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.domain_length * j as f64 / self.intervals() as f64
    }

    pub fn trapezoid_integral(&self) -> f64 {
        trapezoid(&self.values, self.spacing())
    }

    /// Forward-difference slopes `(v_{j+1} - v_j) / Δ`, one per interval.
    pub fn slopes(&self) -> Vec<f64> {
        let dy = self.spacing();
        self.values.windows(2).map(|w| (w[1] - w[0]) / dy).collect()
    }

    /// The inverse-stretch profile: the samples themselves for `H`, cell
    /// slopes for `h`.
    pub fn stretch_profile(&self) -> Vec<f64> {
        match self.kind {
            FieldKind::InverseStretch => self.values.clone(),
            FieldKind::InverseDeformation => self.slopes(),
        }
    }

    /// Crossings of the level 1/2 by the inverse-stretch profile.
    pub fn transition_count(&self) -> usize {
        count_crossings(&self.stretch_profile(), TRANSITION_LEVEL)
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn trapezoid(values: &[f64], dy: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    dy * (inner + 0.5 * (values[0] + values[n - 1]))
}

pub(crate) fn trapezoid_weights(nodes: usize, dy: f64) -> Vec<f64> {
    let mut w = vec![dy; nodes];
    w[0] = 0.5 * dy;
    w[nodes - 1] = 0.5 * dy;
    w
}

pub(crate) fn count_crossings(values: &[f64], level: f64) -> usize {
    values
        .windows(2)
        .filter(|w| (w[0] >= level) != (w[1] >= level))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let f = DiscreteField::homogeneous_stretch(1.25, 20).unwrap();
        assert!((f.trapezoid_integral() - 1.0).abs() < 1e-14);
        assert_eq!(f.transition_count(), 0);
        let h = DiscreteField::homogeneous_deformation(0.8, 16).unwrap();
        assert!(h.slopes().iter().all(|s| (s - 1.25).abs() < 1e-12));
        assert!(DiscreteField::new(FieldKind::InverseStretch, 1.0, vec![1.0, 1.0]).is_err());
        assert!(DiscreteField::new(FieldKind::InverseStretch, 0.0, vec![1.0; 4]).is_err());
    }

    #[test]
    fn crossings() {
        assert_eq!(count_crossings(&[1.0, 0.9, 0.2, 0.0, 0.6, 1.0], 0.5), 2);
        assert_eq!(count_crossings(&[0.5, 0.5, 0.4], 0.5), 1);
    }
}

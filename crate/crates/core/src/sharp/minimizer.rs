//! Closed-form minimizers of the sharp-interface functional with foundation.
//!
//! A minimizer on `[0, λ]` is `n` segments of length `λ/n`, each either
//! elastic-then-plateau (`h1`) or plateau-then-elastic (`h2`), alternating.

use serde::{Deserialize, Serialize};

use super::fields::PiecewiseLinearField;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// First segment is elastic then plateau.
    A,
    /// First segment is plateau then elastic.
    B,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::A, Variant::B];
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => domain(format!("variant must be A or B, got {other:?}")),
        }
    }
}

/// A crack as seen in the reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crack {
    /// Material coordinate `x = h(plateau)`.
    pub position: f64,
    /// Plateau length in the deformed coordinate, i.e. the jump of `f`.
    pub opening: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpMinimizer {
    pub n: usize,
    pub segment_length: f64,
    pub variant: Variant,
    pub energy: f64,
    pub field: PiecewiseLinearField,
    pub cracks: Vec<Crack>,
}

impl SharpMinimizer {
    pub fn total_opening(&self) -> f64 {
        self.cracks.iter().map(|c| c.opening).sum()
    }
}

fn check_segment(ell: f64, lambda: f64) -> Result<()> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return domain(format!("load must satisfy λ > 1, got {lambda}"));
    }
    if !(ell > 0.0 && ell <= lambda) {
        return domain(format!("segment length must lie in (0, λ], got ℓ = {ell}, λ = {lambda}"));
    }
    Ok(())
}

/// Elastic on `[0, ℓ/λ)`, plateau at `ℓ/λ` on `[ℓ/λ, ℓ]`.
pub fn segment_h1(ell: f64, lambda: f64) -> Result<PiecewiseLinearField> {
    check_segment(ell, lambda)?;
    let rise = ell / lambda;
    PiecewiseLinearField::new(vec![0.0, rise, ell], vec![0.0, rise, rise])
}

/// Plateau at 0 on `[0, ℓ - ℓ/λ)`, elastic on `[ℓ - ℓ/λ, ℓ]`.
pub fn segment_h2(ell: f64, lambda: f64) -> Result<PiecewiseLinearField> {
    check_segment(ell, lambda)?;
    let rise = ell / lambda;
    PiecewiseLinearField::new(vec![0.0, ell - rise, ell], vec![0.0, 0.0, rise])
}

/// Minimum energy with `n` equal segments: `n C + μ (λ-1)^2 / (6 n^2)`.
pub fn v_n(n: usize, c_wstar: f64, mu: f64, lambda: f64) -> Result<f64> {
    if n < 1 {
        return domain("crack count must be at least 1");
    }
    let nf = n as f64;
    Ok(nf * c_wstar + mu * (lambda - 1.0).powi(2) / (6.0 * nf * nf))
}

/// Continuous minimizer of `n ↦ V_n`: `(μ (λ-1)^2 / (3 C))^{1/3}`.
pub fn bracket_argument(c_wstar: f64, mu: f64, lambda: f64) -> Result<f64> {
    check_law_inputs(c_wstar, mu, lambda)?;
    Ok((mu * (lambda - 1.0).powi(2) / (3.0 * c_wstar)).cbrt())
}

/// Number of derivative jumps in the global minimizer.
///
/// Picks between `floor(x)` and `floor(x) + 1` by comparing `V_n`, taking
/// the smaller count on ties; `x < 1` gives a single crack.
pub fn crack_count(c_wstar: f64, mu: f64, lambda: f64) -> Result<usize> {
    let x = bracket_argument(c_wstar, mu, lambda)?;
    if x < 1.0 {
        return Ok(1);
    }
    let m = x.floor() as usize;
    let lower = v_n(m, c_wstar, mu, lambda)?;
    let upper = v_n(m + 1, c_wstar, mu, lambda)?;
    Ok(if lower <= upper { m } else { m + 1 })
}

fn check_law_inputs(c_wstar: f64, mu: f64, lambda: f64) -> Result<()> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return domain(format!("crack-count law needs λ > 1, got {lambda}"));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return domain(format!("foundation stiffness must be non-negative, got {mu}"));
    }
    if !(c_wstar > 0.0 && c_wstar.is_finite()) {
        return domain(format!("surface constant must be positive, got {c_wstar}"));
    }
    Ok(())
}

/// Concatenates `n` alternating segments of length `λ/n`.
pub fn build_sharp_minimizer(
    n: usize,
    lambda: f64,
    variant: Variant,
    c_wstar: f64,
    mu: f64,
) -> Result<SharpMinimizer> {
    if n < 1 {
        return domain("crack count must be at least 1");
    }
    if !(lambda > 1.0 && lambda.is_finite()) {
        return domain(format!("load must satisfy λ > 1, got {lambda}"));
    }
    let ell = lambda / n as f64;
    let mut knots = vec![0.0];
    let mut values = vec![0.0];
    for j in 0..n {
        let start = lambda * j as f64 / n as f64;
        let end = lambda * (j + 1) as f64 / n as f64;
        let h_start = j as f64 / n as f64;
        let h_end = (j + 1) as f64 / n as f64;
        let elastic_first = (j % 2 == 0) == (variant == Variant::A);
        let kink = if elastic_first {
            (start + (h_end - h_start), h_end)
        } else {
            (end - (h_end - h_start), h_start)
        };
        knots.push(kink.0);
        values.push(kink.1);
        knots.push(end);
        values.push(h_end);
    }
    *knots.last_mut().unwrap() = lambda;
    *values.last_mut().unwrap() = 1.0;
    let field = PiecewiseLinearField::new(knots, values)?.merged();
    let cracks = field
        .plateaus()
        .into_iter()
        .map(|(y0, y1, h)| Crack {
            position: h,
            opening: y1 - y0,
        })
        .collect();
    Ok(SharpMinimizer {
        n,
        segment_length: ell,
        variant,
        energy: v_n(n, c_wstar, mu, lambda)?,
        field,
        cracks,
    })
}

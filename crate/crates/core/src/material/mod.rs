//! Stored-energy densities in direct and inverse form.
//!
//! The inverse density `W*(H)` is a function of the inverse stretch
//! `H = h' = 1/F`. It has wells at `H = 0` (broken) and `H = 1`
//! (unstretched) and is tied to the direct density by `W(F) = F W*(1/F)`.

mod potential;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use potential::InterfacePotential;
pub use quadrature::Quadrature;

/// Quadratic lower bound `W*(H) >= C H^2` for all `H >= M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub c: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    /// `W*(H) = H (1 - H)^2`, the inverse of `W(F) = (1 - 1/F)^2`.
    LennardJones,
    /// Coefficients in ascending powers of `H`.
    Polynomial { coefficients: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    name: String,
    density: Density,
    growth: GrowthBound,
}

/// Outcome of sampling the growth condition on `[M, 10 M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    pub pass: bool,
    /// Smallest `W*(H) - C H^2` seen.
    pub worst_margin: f64,
    pub worst_at: f64,
}

/// Outcome of [`MaterialModel::check_two_well`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWellReport {
    pub pass: bool,
    pub at_zero: f64,
    pub at_one: f64,
    pub interior_min: f64,
}

pub fn builtin_lj() -> MaterialModel {
    let model = MaterialModel {
        name: "lj".to_string(),
        density: Density::LennardJones,
        growth: GrowthBound { c: 0.25, m: 2.0 },
    };
    assert!(model.check_growth(1000).pass, "lj growth constants");
    model
}

/// `W*(H) = 2 H^2 (1 - H)^2`; surface constant exactly 1/3.
pub fn builtin_quartic() -> MaterialModel {
    let model = MaterialModel {
        name: "quartic".to_string(),
        density: Density::Polynomial {
            coefficients: vec![0.0, 0.0, 2.0, -4.0, 2.0],
        },
        growth: GrowthBound { c: 1.0, m: 2.0 },
    };
    assert!(model.check_growth(1000).pass, "quartic growth constants");
    model
}

/// Names accepted by [`MaterialModel::by_name`].
pub const BUILTIN_MODELS: [&str; 2] = ["lj", "quartic"];

impl MaterialModel {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "lj" | "lennard-jones" => Ok(builtin_lj()),
            "quartic" => Ok(builtin_quartic()),
            other => Err(Error::Model(format!(
                "unknown model {other:?}; known models: {}",
                BUILTIN_MODELS.join(", ")
            ))),
        }
    }

    /// Polynomial density from ascending coefficients.
    ///
    /// The constant coefficient must vanish so that `W*(0) = 0`. The
    /// two-well and growth properties are not enforced here; see
    /// [`check_two_well`](Self::check_two_well) and
    /// [`check_growth`](Self::check_growth).
    pub fn polynomial(
        name: impl Into<String>,
        coefficients: Vec<f64>,
        growth: GrowthBound,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Model("polynomial needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Model("polynomial coefficients must be finite".into()));
        }
        if coefficients[0] != 0.0 {
            return Err(Error::Model(format!(
                "W*(0) must vanish, constant coefficient is {}",
                coefficients[0]
            )));
        }
        validate_growth(growth)?;
        Ok(Self {
            name: name.into(),
            density: Density::Polynomial { coefficients },
            growth,
        })
    }

    pub fn with_growth(mut self, growth: GrowthBound) -> Result<Self> {
        validate_growth(growth)?;
        self.growth = growth;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn growth(&self) -> GrowthBound {
        self.growth
    }

    #[inline]
    pub fn wstar(&self, h: f64) -> f64 {
        match &self.density {
            Density::LennardJones => {
                let d = 1.0 - h;
                h * d * d
            }
            Density::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * h + c)
            }
        }
    }

    #[inline]
    pub fn wstar_prime(&self, h: f64) -> f64 {
        match &self.density {
            Density::LennardJones => (1.0 - h) * (1.0 - 3.0 * h),
            Density::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &c)| acc * h + k as f64 * c),
        }
    }

    pub fn direct(&self) -> DirectDensityView<'_> {
        DirectDensityView { model: self }
    }

    /// Surface-energy constant `C_{W*} = ∫_0^1 sqrt(2 W*(τ)) dτ`.
    pub fn c_wstar(&self, abs_tol: f64) -> Result<Quadrature> {
        quadrature::integrate(|t| (2.0 * self.wstar(t)).max(0.0).sqrt(), 0.0, 1.0, abs_tol)
    }

    /// Samples `H` uniformly on `[M, 10 M]` (at least 100 points) and checks
    /// `W*(H) >= C H^2`.
    pub fn check_growth(&self, samples: usize) -> GrowthReport {
        let n = samples.max(100);
        let GrowthBound { c, m } = self.growth;
        let mut worst_margin = f64::INFINITY;
        let mut worst_at = m;
        for i in 0..n {
            let h = m + 9.0 * m * i as f64 / (n - 1) as f64;
            let margin = self.wstar(h) - c * h * h;
            if margin < worst_margin {
                worst_margin = margin;
                worst_at = h;
            }
        }
        GrowthReport {
            pass: worst_margin >= 0.0,
            worst_margin,
            worst_at,
        }
    }

    /// Checks `W*(0) = W*(1) = 0` and strict positivity on a grid over
    /// `[0.01, 0.99]` and `(1, 10]`.
    pub fn check_two_well(&self, samples: usize) -> TwoWellReport {
        let n = samples.max(100);
        let at_zero = self.wstar(0.0);
        let at_one = self.wstar(1.0);
        let inner = (0..n).map(|i| 0.01 + 0.98 * i as f64 / (n - 1) as f64);
        let outer = (1..=n).map(|i| 1.0 + 9.0 * i as f64 / n as f64);
        let interior_min = inner
            .chain(outer)
            .map(|h| self.wstar(h))
            .fold(f64::INFINITY, f64::min);
        TwoWellReport {
            pass: at_zero.abs() <= 1e-14 && at_one.abs() <= 1e-14 && interior_min > 0.0,
            at_zero,
            at_one,
            interior_min,
        }
    }
}

fn validate_growth(growth: GrowthBound) -> Result<()> {
    if !(growth.c > 0.0 && growth.m > 1.0 && growth.c.is_finite() && growth.m.is_finite()) {
        return Err(Error::Model(format!(
            "growth constants need C > 0 and M > 1, got C = {}, M = {}",
            growth.c, growth.m
        )));
    }
    Ok(())
}

/// Direct density `W(F) = F W*(1/F)` for stretch `F > 0`.
#[derive(Debug, Clone, Copy)]
pub struct DirectDensityView<'a> {
    model: &'a MaterialModel,
}

impl DirectDensityView<'_> {
    pub fn w(&self, stretch: f64) -> f64 {
        stretch * self.model.wstar(1.0 / stretch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zero_model() -> MaterialModel {
        MaterialModel::polynomial("zero", vec![0.0], GrowthBound { c: 1.0, m: 2.0 }).unwrap()
    }

    #[test]
    fn lj_wells_and_midpoint() {
        let lj = builtin_lj();
        assert_eq!(lj.wstar(1.0), 0.0);
        assert_eq!(lj.wstar(0.0), 0.0);
        assert_eq!(lj.wstar(0.5), 0.125);
    }

    #[test]
    fn c_wstar_lj() {
        let q = builtin_lj().c_wstar(1e-10).unwrap();
        let exact = 4.0 * 2f64.sqrt() / 15.0;
        assert!((q.value - exact).abs() <= 1e-10, "{} vs {}", q.value, exact);
    }

    #[test]
    fn c_wstar_zero_and_quartic() {
        assert_eq!(zero_model().c_wstar(1e-10).unwrap().value, 0.0);
        let q = builtin_quartic().c_wstar(1e-10).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() <= 1e-10);
    }

    #[test]
    fn c_wstar_rejects_bad_tolerance() {
        assert!(builtin_lj().c_wstar(0.0).is_err());
    }

    #[test]
    fn growth_checks() {
        let lj = builtin_lj();
        assert!(lj.check_growth(100).pass);
        assert!(!zero_model().check_growth(100).pass);
        let steep = lj.with_growth(GrowthBound { c: 2.0, m: 2.0 }).unwrap();
        let report = steep.check_growth(100);
        assert!(!report.pass);
        // W*(2) = 2 < 2 * 4
        assert!(report.worst_margin <= 2.0 - 8.0 + 1e-12);
    }

    #[test]
    fn growth_oracle_dense_sampling() {
        // independent dense scan of H(1-H)^2 - H^2/4 on [2, 20]
        let worst = (0..200_001)
            .map(|i| 2.0 + 18.0 * i as f64 / 200_000.0)
            .map(|h| h * (1.0 - h) * (1.0 - h) - 0.25 * h * h)
            .fold(f64::INFINITY, f64::min);
        assert!(worst >= 0.0);
    }

    #[test]
    fn two_well_registered_models() {
        for name in BUILTIN_MODELS {
            assert!(MaterialModel::by_name(name).unwrap().check_two_well(1000).pass, "{name}");
        }
        assert!(!zero_model().check_two_well(1000).pass);
    }

    #[test]
    fn polynomial_rejects_offset_and_bad_growth() {
        let g = GrowthBound { c: 1.0, m: 2.0 };
        assert!(MaterialModel::polynomial("p", vec![1.0, 0.0], g).is_err());
        assert!(MaterialModel::polynomial("p", vec![], g).is_err());
        assert!(MaterialModel::polynomial("p", vec![0.0], GrowthBound { c: 1.0, m: 1.0 }).is_err());
        assert!(MaterialModel::by_name("nope").is_err());
    }

    #[test]
    fn direct_view() {
        let lj = builtin_lj();
        let w = lj.direct();
        assert_eq!(w.w(1.0), 0.0);
        for f in [0.5f64, 1.0, 2.0, 5.0, 0.8, 3.3] {
            let expected: f64 = (1.0 - 1.0 / f).powi(2);
            let got = w.w(f);
            assert!((got - expected).abs() <= 1e-12 * expected.max(1e-300), "F = {f}");
            // identity with the inverse density
            assert!((got - f * lj.wstar(1.0 / f)).abs() <= 1e-12 * got.abs().max(1e-300));
        }
    }

    #[test]
    fn quadrature_tightening_is_consistent() {
        let lj = builtin_lj();
        let finest = lj.c_wstar(1e-13).unwrap().value;
        let mut tol = 1e-3;
        let mut last = f64::INFINITY;
        while tol > 1e-12 {
            let d = (lj.c_wstar(tol).unwrap().value - finest).abs();
            assert!(d <= last, "tol {tol:e}: {d:e} > {last:e}");
            assert!(d <= tol);
            last = d;
            tol /= 2.0;
        }
    }

    proptest! {
        #[test]
        fn derivative_matches_central_differences(h in 0.0f64..3.0) {
            for model in [builtin_lj(), builtin_quartic()] {
                let step = 1e-5;
                let fd = (model.wstar(h + step) - model.wstar(h - step)) / (2.0 * step);
                let exact = model.wstar_prime(h);
                let scale = exact.abs().max(1e-2);
                prop_assert!((fd - exact).abs() / scale <= 1e-6, "{} at {}: {} vs {}", model.name(), h, fd, exact);
            }
        }
    }
}

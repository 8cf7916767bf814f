use super::quadrature;
use super::MaterialModel;

const PANELS_PER_UNIT: usize = 1024;

/// Tabulated primitive `Φ(s) = ∫_0^s sqrt(2 W*(τ)) dτ`.
///
/// `Φ(1)` is the surface constant; the total variation of `Φ∘H` bounds the
/// rescaled regularized energy from below. Values between nodes use cubic
/// Hermite interpolation with the exact derivative `sqrt(2 W*)`.
#[derive(Debug, Clone)]
pub struct InterfacePotential {
    model: MaterialModel,
    step: f64,
    values: Vec<f64>,
}

impl InterfacePotential {
    /// Tabulates `Φ` on `[0, max(s_max, 1)]`.
    pub fn new(model: &MaterialModel, s_max: f64) -> Self {
        let upper = s_max.max(1.0);
        let panels = (upper * PANELS_PER_UNIT as f64).ceil() as usize;
        let step = upper / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for k in 0..panels {
            let a = k as f64 * step;
            let q = quadrature::integrate(|t| slope(model, t), a, a + step, 1e-14)
                .map(|q| q.value)
                .unwrap_or_else(|_| {
                    // Simpson fallback; the integrand is bounded.
                    let m = a + 0.5 * step;
                    step / 6.0 * (slope(model, a) + 4.0 * slope(model, m) + slope(model, a + step))
                });
            acc += q;
            values.push(acc);
        }
        Self {
            model: model.clone(),
            step,
            values,
        }
    }

    pub fn upper(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s < self.step {
            // sqrt-type behaviour at the well spoils Hermite interpolation
            return quadrature::integrate(|x| slope(&self.model, x), 0.0, s, 1e-14)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
        }
        let last = self.values.len() - 1;
        let pos = s / self.step;
        let k = (pos.floor() as usize).min(last - 1);
        let t = pos - k as f64;
        if k + 1 > last || t > 1.0 {
            // Past the table: extend with a short quadrature.
            let top = self.upper();
            return self.values[last]
                + quadrature::integrate(|x| slope(&self.model, x), top, s, 1e-12)
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN);
        }
        let x0 = k as f64 * self.step;
        let (p0, p1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (
            slope(&self.model, x0) * self.step,
            slope(&self.model, x0 + self.step) * self.step,
        );
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * m1
    }

    /// Discrete total variation of `Φ` along a sequence of values.
    pub fn total_variation(&self, values: &[f64]) -> f64 {
        let phi: Vec<f64> = values.iter().map(|&v| self.eval(v)).collect();
        phi.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }
}

fn slope(model: &MaterialModel, t: f64) -> f64 {
    (2.0 * model.wstar(t)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::builtin_lj;

    fn lj_primitive(s: f64) -> f64 {
        // sqrt(2) ∫ sqrt(τ) |1 - τ| dτ, closed form
        let a = |x: f64| 2.0 / 3.0 * x.powf(1.5) - 2.0 / 5.0 * x.powf(2.5);
        let v = if s <= 1.0 { a(s) } else { 2.0 * a(1.0) - a(s) };
        2f64.sqrt() * v
    }

    #[test]
    fn matches_closed_form() {
        let pot = InterfacePotential::new(&builtin_lj(), 2.0);
        for s in [0.0, 1e-4, 0.013, 0.3, 0.5, 0.999, 1.0, 1.37, 2.0, 2.5] {
            let got = pot.eval(s);
            assert!((got - lj_primitive(s)).abs() < 1e-9, "s = {s}: {got} vs {}", lj_primitive(s));
        }
        assert!((pot.eval(1.0) - 4.0 * 2f64.sqrt() / 15.0).abs() < 1e-12);
    }

    #[test]
    fn total_variation_of_one_transition() {
        let pot = InterfacePotential::new(&builtin_lj(), 1.0);
        let tv = pot.total_variation(&[1.0, 0.7, 0.2, 0.0, 0.0]);
        assert!((tv - pot.eval(1.0)).abs() < 1e-12);
    }
}

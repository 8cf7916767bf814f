use super::fields::{PiecewiseConstantField, PiecewiseLinearField, SlopeClass, FEASIBILITY_TOL};

/// Sharp-interface limit of the rescaled gradient energy.
///
/// Returns `c_wstar * #D(H)` for `{0, 1}`-valued fields whose unit-value set
/// has measure one, `+∞` otherwise.
pub fn eval_i(field: &PiecewiseConstantField, c_wstar: f64) -> f64 {
    let mut unit_measure = 0.0;
    for (a, b, v) in field.pieces() {
        if (v - 1.0).abs() <= FEASIBILITY_TOL {
            unit_measure += b - a;
        } else if v.abs() > FEASIBILITY_TOL {
            return f64::INFINITY;
        }
    }
    if (unit_measure - 1.0).abs() > FEASIBILITY_TOL {
        return f64::INFINITY;
    }
    let classes: Vec<bool> = field
        .values()
        .iter()
        .map(|v| (v - 1.0).abs() <= FEASIBILITY_TOL)
        .collect();
    let jumps = classes.windows(2).filter(|w| w[0] != w[1]).count();
    c_wstar * jumps as f64
}

/// Sharp-interface limit with the elastic foundation.
///
/// `+∞` unless every slope lies in `{0, 1}`, `h(0) = 0` and `h(λ) = 1`;
/// otherwise the jump term plus the foundation misfit integrated exactly.
pub fn eval_v(field: &PiecewiseLinearField, c_wstar: f64, mu: f64) -> f64 {
    if !field.satisfies_boundary_conditions() {
        return f64::INFINITY;
    }
    segment_energy(field, c_wstar, mu, field.domain_length())
}

/// The `V` integrand on a field that may be a partial segment of a longer
/// specimen: `load` enters the misfit `y - load * h`, and no boundary
/// condition is checked.
pub fn segment_energy(field: &PiecewiseLinearField, c_wstar: f64, mu: f64, load: f64) -> f64 {
    let classes = field.slope_classes();
    if classes.contains(&SlopeClass::Other) {
        return f64::INFINITY;
    }
    let jumps = classes.windows(2).filter(|w| w[0] != w[1]).count();
    let mut foundation = 0.0;
    for ((y0, y1, h0, h1), class) in field.pieces().zip(classes) {
        if class == SlopeClass::Elastic {
            // misfit is linear in y on the piece; integrate its square exactly
            let g0 = y0 - load * h0;
            let g1 = y1 - load * h1;
            foundation += (y1 - y0) * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0;
        }
    }
    c_wstar * jumps as f64 + 0.5 * mu * foundation
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = 0.377_123_616_632_825_3;

    #[test]
    fn single_end_crack() {
        let f = PiecewiseConstantField::right_end_crack(1.4).unwrap();
        assert!((eval_i(&f, 0.3771236) - 0.3771236).abs() < 1e-15);
    }

    #[test]
    fn unbroken_i() {
        let f = PiecewiseConstantField::constant(1.0, 1.0).unwrap();
        assert_eq!(eval_i(&f, C), 0.0);
    }

    #[test]
    fn interior_support_costs_two() {
        let f = PiecewiseConstantField::new(1.4, vec![0.2, 1.2], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((eval_i(&f, C) - 2.0 * C).abs() < 1e-15);
    }

    #[test]
    fn infeasible_i() {
        let wrong_measure = PiecewiseConstantField::new(1.4, vec![0.9], vec![1.0, 0.0]).unwrap();
        assert_eq!(eval_i(&wrong_measure, C), f64::INFINITY);
        let wrong_value = PiecewiseConstantField::constant(1.4, 1.0 / 1.4).unwrap();
        assert_eq!(eval_i(&wrong_value, C), f64::INFINITY);
    }

    #[test]
    fn identity_v_is_zero() {
        for mu in [0.0, 1.0, 500.0] {
            assert_eq!(eval_v(&PiecewiseLinearField::identity(), C, mu), 0.0);
        }
    }

    #[test]
    fn infeasible_v() {
        let homogeneous = PiecewiseLinearField::new(vec![0.0, 1.5], vec![0.0, 1.0]).unwrap();
        assert_eq!(eval_v(&homogeneous, C, 10.0), f64::INFINITY);
        let short = PiecewiseLinearField::new(vec![0.0, 0.5, 1.5], vec![0.0, 0.5, 0.5]).unwrap();
        assert_eq!(eval_v(&short, C, 10.0), f64::INFINITY);
    }

    #[test]
    fn single_segment_closed_form() {
        let lambda = 1.4;
        let mu = 37.0;
        let f = PiecewiseLinearField::new(vec![0.0, 1.0, lambda], vec![0.0, 1.0, 1.0]).unwrap();
        let expected = C + mu * (lambda - 1.0f64).powi(2) / 6.0;
        assert!((eval_v(&f, C, mu) - expected).abs() < 1e-13);
    }
}

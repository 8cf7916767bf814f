//! Euclidean projections onto the admissible sets of the two problems.

use super::field::{trapezoid_weights, DiscreteField, FieldKind};
use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-12;

/// Projects onto `{x >= 0, Σ a_j x_j = 1}` in place.
///
/// The solution has the form `x_j = max(0, raw_j - θ a_j)`. The shift is
/// found by active-set iteration: compute `θ` in closed form for the current
/// free set, drop entries that go non-positive, repeat. `θ` only grows, so the
/// free set only shrinks. Bisection on `θ` backs it up should the iteration
/// stall.
pub(crate) fn project_weighted_simplex(x: &mut [f64], weights: &[f64]) {
    let theta = active_set_shift(x, weights).unwrap_or_else(|| bisection_shift(x, weights));
    for (v, &a) in x.iter_mut().zip(weights) {
        *v = (*v - theta * a).max(0.0);
    }
}

fn mass(x: &[f64], weights: &[f64], theta: f64) -> f64 {
    x.iter()
        .zip(weights)
        .map(|(&r, &a)| a * (r - theta * a).max(0.0))
        .sum()
}

fn active_set_shift(x: &[f64], weights: &[f64]) -> Option<f64> {
    let mut theta = f64::NEG_INFINITY;
    for _ in 0..100 {
        let (mut num, mut den) = (0.0, 0.0);
        for (&r, &a) in x.iter().zip(weights) {
            if r - theta * a > 0.0 {
                num += a * r;
                den += a * a;
            }
        }
        if den == 0.0 {
            return None;
        }
        let next = (num - 1.0) / den;
        if next <= theta {
            break;
        }
        theta = next;
    }
    ((mass(x, weights, theta) - 1.0).abs() <= MASS_TOL).then_some(theta)
}

fn bisection_shift(x: &[f64], weights: &[f64]) -> f64 {
    let total_weight: f64 = weights.iter().sum();
    let floor = 1.0 / total_weight;
    // mass(lo) >= 1, mass(hi) = 0
    let mut lo = x
        .iter()
        .zip(weights)
        .map(|(&r, &a)| (r - floor) / a)
        .fold(f64::INFINITY, f64::min);
    let mut hi = x
        .iter()
        .zip(weights)
        .map(|(&r, &a)| r / a)
        .fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = mass(x, weights, mid);
        if (m - 1.0).abs() <= MASS_TOL {
            return mid;
        }
        if m > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Projection of raw inverse-stretch samples onto `{H >= 0, ∫ H = 1}` with
/// the trapezoid rule.
pub fn project_stretch(raw: &[f64], domain_length: f64) -> Result<DiscreteField> {
    if !(domain_length > 0.0 && domain_length.is_finite()) {
        return Err(Error::Infeasible(format!(
            "cannot normalize on a domain of length {domain_length}"
        )));
    }
    if raw.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 nodes, got {}", raw.len())));
    }
    let dy = domain_length / (raw.len() - 1) as f64;
    let mut values = raw.to_vec();
    project_weighted_simplex(&mut values, &trapezoid_weights(raw.len(), dy));
    DiscreteField::new(FieldKind::InverseStretch, domain_length, values)
}

/// Pool-adjacent-violators isotonic regression (nondecreasing), unit weights.
pub(crate) fn isotonic_nondecreasing(values: &[f64]) -> Vec<f64> {
    // blocks of (sum, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 > s1 / c1 as f64 {
                blocks.pop();
                *blocks.last_mut().unwrap() = (s0 + s1, c0 + c1);
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for (s, c) in blocks {
        out.extend(std::iter::repeat_n(s / c as f64, c));
    }
    out
}

/// Projection of raw inverse-deformation samples onto
/// `{nondecreasing, h_0 = 0, h_N = 1}`.
///
/// The endpoint entries are pinned: interior samples are regressed with
/// pool-adjacent-violators and pooled blocks that would cross the pinned
/// values are absorbed into them, which is clamping to `[0, 1]`.
pub fn project_deformation(raw: &[f64], domain_length: f64) -> Result<DiscreteField> {
    if raw.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 nodes, got {}", raw.len())));
    }
    let n = raw.len() - 1;
    let mut values = Vec::with_capacity(raw.len());
    values.push(0.0);
    values.extend(
        isotonic_nondecreasing(&raw[1..n])
            .into_iter()
            .map(|v| v.clamp(0.0, 1.0)),
    );
    values.push(1.0);
    DiscreteField::new(FieldKind::InverseDeformation, domain_length, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist2(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
    }

    /// Exhaustive active-set oracle for the weighted simplex projection.
    fn simplex_oracle(raw: &[f64], weights: &[f64]) -> Vec<f64> {
        let n = raw.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 1u32..(1 << n) {
            let free: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let num: f64 = free.iter().map(|&i| weights[i] * raw[i]).sum();
            let den: f64 = free.iter().map(|&i| weights[i] * weights[i]).sum();
            let theta = (num - 1.0) / den;
            let mut x = vec![0.0; n];
            let mut ok = true;
            for &i in &free {
                x[i] = raw[i] - theta * weights[i];
                ok &= x[i] >= -1e-14;
            }
            if !ok {
                continue;
            }
            let d = dist2(&x, raw);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, x));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn feasible_stretch_is_fixed() {
        let f = project_stretch(&[1.25; 11], 0.8).unwrap();
        assert!(f.values().iter().all(|&v| (v - 1.25).abs() < 1e-14));
    }

    #[test]
    fn zeros_become_proportional_to_weights() {
        // x = c a with c Σ a² = 1; a = (1/4, 1/2, 1/2, 1/2, 1/4)
        let f = project_stretch(&[0.0; 5], 2.0).unwrap();
        let c = 1.0 / 0.875;
        let expected = [0.25 * c, 0.5 * c, 0.5 * c, 0.5 * c, 0.25 * c];
        for (v, e) in f.values().iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!((f.trapezoid_integral() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spike_matches_oracle() {
        let raw = [0.0, 0.1, 9.0, 0.2, 0.0, -0.3, 0.05];
        let lambda = 1.4;
        let f = project_stretch(&raw, lambda).unwrap();
        let w = trapezoid_weights(raw.len(), lambda / 6.0);
        let oracle = simplex_oracle(&raw, &w);
        for (a, b) in f.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12, "{:?} vs {oracle:?}", f.values());
        }
        assert!((f.trapezoid_integral() - 1.0).abs() < 1e-12);
        assert!(project_stretch(&raw, 0.0).is_err());
    }

    #[test]
    fn random_stretch_against_oracle_and_competitors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..50 {
            let n = rng.gen_range(3..=9);
            let lambda = rng.gen_range(0.5..3.0);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..3.0)).collect();
            let p = project_stretch(&raw, lambda).unwrap();
            let w = trapezoid_weights(n, lambda / (n - 1) as f64);
            let oracle = simplex_oracle(&raw, &w);
            assert!(dist2(p.values(), &oracle) < 1e-20, "trial {trial}");
            let again = project_stretch(p.values(), lambda).unwrap();
            assert!(dist2(again.values(), p.values()) < 1e-24);
            let d = dist2(p.values(), &raw);
            for _ in 0..1000 {
                let mut z: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                let m: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
                z.iter_mut().for_each(|v| *v /= m);
                assert!(d <= dist2(&z, &raw) + 1e-12);
            }
        }
    }

    #[test]
    fn bisection_agrees_with_active_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(3..40);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let w = trapezoid_weights(n, 1.7 / (n - 1) as f64);
            let a = active_set_shift(&raw, &w).unwrap();
            let b = bisection_shift(&raw, &w);
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn pav_basics() {
        assert_eq!(isotonic_nondecreasing(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(isotonic_nondecreasing(&[3.0, 2.0, 1.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn reversed_ramp() {
        let p = project_deformation(&[1.0, 0.75, 0.5, 0.25, 0.0], 1.0).unwrap();
        assert_eq!(p.values(), &[0.0, 0.5, 0.5, 0.5, 1.0]);
    }

    #[test]
    fn monotone_input_fixed_and_noisy_ramp() {
        let ramp: Vec<f64> = (0..=20).map(|j| j as f64 / 20.0).collect();
        assert_eq!(project_deformation(&ramp, 1.3).unwrap().values(), ramp.as_slice());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let amp = 0.01;
        let noisy: Vec<f64> = ramp.iter().map(|v| v - rng.gen_range(0.0..amp)).collect();
        let p = project_deformation(&noisy, 1.3).unwrap();
        assert!(p.sup_distance(&DiscreteField::homogeneous_deformation(1.3, 20).unwrap()) <= amp);
    }

    #[test]
    fn deformation_projection_is_nearest() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.gen_range(3..=12);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..1.5)).collect();
            let p = project_deformation(&raw, 1.0).unwrap();
            let v = p.values();
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!((v[0], v[n - 1]), (0.0, 1.0));
            assert_eq!(project_deformation(v, 1.0).unwrap().values(), v);
            let d = dist2(v, &raw);
            for _ in 0..1000 {
                let mut z: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                z.sort_by(f64::total_cmp);
                z[0] = 0.0;
                z[n - 1] = 1.0;
                assert!(d <= dist2(&z, &raw) + 1e-12);
            }
        }
    }
}

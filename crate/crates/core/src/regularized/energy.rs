//! Discrete regularized energies and their exact gradients.
//!
//! Both energies are sums over the uniform grid with `Δ = λ / N`:
//!
//! * `E_ε[H] = Σ Δ [ε²/2 ((H_{j+1} - H_j)/Δ)² + (W*(H_j) + W*(H_{j+1}))/2]`
//! * `U_ε[h] = Σ_interior Δ ε²/2 (δ²h_j/Δ²)² + Σ_cells Δ [W*(s_j) + k s_j/2 (y_{j+½} - λ h_{j+½})²]`
//!
//! with cell slopes `s_j = (h_{j+1} - h_j)/Δ` and foundation stiffness
//! `k = ε μ`. The rescaled energies are `I_ε = E_ε/ε` and `V_ε = U_ε/ε`.

use crate::material::MaterialModel;

/// `U_ε` and its rescaling `V_ε = U_ε / ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoundationEnergy {
    pub unscaled: f64,
    pub rescaled: f64,
}

pub fn eval_e_eps(values: &[f64], domain_length: f64, epsilon: f64, model: &MaterialModel) -> f64 {
    let n = values.len() - 1;
    let dy = domain_length / n as f64;
    let stiff = 0.5 * epsilon * epsilon / dy;
    let mut total = 0.0;
    let mut w_prev = model.wstar(values[0]);
    for j in 0..n {
        let w_next = model.wstar(values[j + 1]);
        let d = values[j + 1] - values[j];
        total += stiff * d * d + 0.5 * dy * (w_prev + w_next);
        w_prev = w_next;
    }
    total
}

/// Gradient of [`eval_e_eps`] with respect to every node value.
pub fn grad_e_eps(values: &[f64], domain_length: f64, epsilon: f64, model: &MaterialModel) -> Vec<f64> {
    let mut grad = vec![0.0; values.len()];
    e_eps_with_gradient(values, domain_length, epsilon, model, &mut grad);
    grad
}

pub(crate) fn e_eps_with_gradient(
    values: &[f64],
    domain_length: f64,
    epsilon: f64,
    model: &MaterialModel,
    grad: &mut [f64],
) -> f64 {
    let n = values.len() - 1;
    let dy = domain_length / n as f64;
    let stiff = epsilon * epsilon / dy;
    let mut total = 0.0;
    for (j, g) in grad.iter_mut().enumerate() {
        let weight = if j == 0 || j == n { 0.5 * dy } else { dy };
        total += weight * model.wstar(values[j]);
        *g = weight * model.wstar_prime(values[j]);
    }
    for j in 0..n {
        let d = values[j + 1] - values[j];
        total += 0.5 * stiff * d * d;
        grad[j] -= stiff * d;
        grad[j + 1] += stiff * d;
    }
    total
}

pub fn eval_v_eps(
    values: &[f64],
    domain_length: f64,
    epsilon: f64,
    mu: f64,
    model: &MaterialModel,
) -> FoundationEnergy {
    let unscaled = u_eps_impl(values, domain_length, epsilon, mu, model, None);
    FoundationEnergy {
        unscaled,
        rescaled: unscaled / epsilon,
    }
}

/// Gradient of the unscaled `U_ε` with respect to every node of `h`.
pub fn grad_v_eps(
    values: &[f64],
    domain_length: f64,
    epsilon: f64,
    mu: f64,
    model: &MaterialModel,
) -> Vec<f64> {
    let mut grad = vec![0.0; values.len()];
    u_eps_impl(values, domain_length, epsilon, mu, model, Some(&mut grad));
    grad
}

pub(crate) fn u_eps_with_gradient(
    values: &[f64],
    domain_length: f64,
    epsilon: f64,
    mu: f64,
    model: &MaterialModel,
    grad: &mut [f64],
) -> f64 {
    u_eps_impl(values, domain_length, epsilon, mu, model, Some(grad))
}

fn u_eps_impl(
    h: &[f64],
    lambda: f64,
    epsilon: f64,
    mu: f64,
    model: &MaterialModel,
    mut grad: Option<&mut [f64]>,
) -> f64 {
    let n = h.len() - 1;
    let dy = lambda / n as f64;
    let k = epsilon * mu;
    let bend = epsilon * epsilon / (dy * dy * dy);
    if let Some(g) = grad.as_deref_mut() {
        g.fill(0.0);
    }
    let mut total = 0.0;

    for j in 1..n {
        let d = h[j + 1] - 2.0 * h[j] + h[j - 1];
        total += 0.5 * bend * d * d;
        if let Some(g) = grad.as_deref_mut() {
            let c = bend * d;
            g[j - 1] += c;
            g[j] -= 2.0 * c;
            g[j + 1] += c;
        }
    }

    for i in 0..n {
        let rise = h[i + 1] - h[i];
        let slope = rise / dy;
        let mid = (i as f64 + 0.5) * dy;
        let misfit = mid - 0.5 * lambda * (h[i] + h[i + 1]);
        total += dy * model.wstar(slope) + 0.5 * k * rise * misfit * misfit;
        if let Some(g) = grad.as_deref_mut() {
            let dw = model.wstar_prime(slope);
            let sq = 0.5 * k * misfit * misfit;
            let cross = 0.5 * k * lambda * rise * misfit;
            g[i + 1] += dw + sq - cross;
            g[i] += -dw - sq - cross;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::builtin_lj;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], j: usize, step: f64) -> f64 {
        let mut p = x.to_vec();
        let mut m = x.to_vec();
        p[j] += step;
        m[j] -= step;
        (f(&p) - f(&m)) / (2.0 * step)
    }

    #[test]
    fn e_at_wells_and_compression() {
        let lj = builtin_lj();
        assert_eq!(eval_e_eps(&[1.0; 33], 1.0, 0.1, &lj), 0.0);
        let e = eval_e_eps(&[1.25; 101], 0.8, 0.05, &lj);
        assert!((e - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn e_gradient_constant_field() {
        let lj = builtin_lj();
        assert!(grad_e_eps(&[1.0; 9], 1.0, 0.1, &lj).iter().all(|&g| g == 0.0));
        let c = 0.3;
        let dy = 2.0 / 8.0;
        let g = grad_e_eps(&[c; 9], 2.0, 0.1, &lj);
        let wp = lj.wstar_prime(c);
        assert!((g[0] - 0.5 * dy * wp).abs() < 1e-15);
        assert!((g[4] - dy * wp).abs() < 1e-15);
        assert!((g[8] - 0.5 * dy * wp).abs() < 1e-15);
    }

    #[test]
    fn e_gradient_matches_finite_differences() {
        let lj = builtin_lj();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (lambda, eps) = (1.4, 0.05);
        let h: Vec<f64> = (0..41).map(|_| rng.gen_range(0.0..1.5)).collect();
        let g = grad_e_eps(&h, lambda, eps, &lj);
        for j in 0..h.len() {
            let fd = central_difference(|x| eval_e_eps(x, lambda, eps, &lj), &h, j, 1e-6);
            assert!((fd - g[j]).abs() <= 1e-6 * g[j].abs().max(1e-3), "node {j}: {fd} vs {}", g[j]);
        }
    }

    #[test]
    fn v_homogeneous_and_identity() {
        let lj = builtin_lj();
        let n = 200;
        let h: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let e = eval_v_eps(&h, 0.8, 0.05, 200.0, &lj);
        assert!((e.unscaled - 0.0625).abs() < 1e-13);
        assert!((e.rescaled - 0.0625 / 0.05).abs() < 1e-11);
        let id = eval_v_eps(&h, 1.0, 0.05, 200.0, &lj);
        assert!(id.unscaled.abs() < 1e-14);
    }

    #[test]
    fn v_gradient_matches_finite_differences() {
        let lj = builtin_lj();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(lambda, mu, eps) in &[(1.5, 200.0, 0.05), (1.2, 50.0, 0.1), (0.9, 10.0, 0.1)] {
            let n = 40;
            let mut h: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.0..1.0)).collect();
            h.sort_by(f64::total_cmp);
            h[0] = 0.0;
            h[n] = 1.0;
            let g = grad_v_eps(&h, lambda, eps, mu, &lj);
            for j in 0..=n {
                let fd = central_difference(|x| eval_v_eps(x, lambda, eps, mu, &lj).unscaled, &h, j, 1e-6);
                assert!((fd - g[j]).abs() <= 1e-6 * g[j].abs().max(1e-2), "λ={lambda} node {j}: {fd} vs {}", g[j]);
            }
        }
    }
}

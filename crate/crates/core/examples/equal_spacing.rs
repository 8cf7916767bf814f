//! Brute-force search over unequal segment lengths recovers the equal
//! spacing λ/n and the closed-form energy.

use inverse_fracture::material::builtin_lj;
use inverse_fracture::sharp::{brute_force_segments, v_n};

fn main() -> inverse_fracture::Result<()> {
    let c = builtin_lj().c_wstar(1e-12)?.value;
    let (lambda, mu) = (1.5, 200.0);
    for n in 2..=4 {
        let search = brute_force_segments(n, lambda, c, mu, 100)?;
        println!(
            "n = {n}: lengths {:.6?} (λ/n = {:.6}), energy {:.8} vs V_n {:.8}, {} evaluations",
            search.lengths,
            lambda / n as f64,
            search.energy,
            v_n(n, c, mu, lambda)?,
            search.evaluations
        );
    }
    Ok(())
}

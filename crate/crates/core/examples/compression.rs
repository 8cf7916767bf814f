//! Under compression (λ ≤ 1) both regularized energies are minimized by the
//! homogeneous state with energy W(λ) = (1 - 1/λ)².

use inverse_fracture::material::builtin_lj;
use inverse_fracture::regularized::{
    initial_field, minimize, Functional, Init, Problem, SolveSettings, Start,
};

fn main() -> inverse_fracture::Result<()> {
    let settings = SolveSettings {
        epsilon: 0.05,
        mu: 200.0,
        intervals: 1000,
        ..Default::default()
    };
    for lambda in [0.6, 0.8, 1.0] {
        for functional in [Functional::E, Functional::V] {
            let problem = Problem::new(functional, lambda, builtin_lj())?;
            let best = minimize(&problem, &settings, &Init::Multistart(vec![]))?;
            let homogeneous = initial_field(&problem, &settings, &Start::Homogeneous)?;
            println!(
                "λ = {lambda}, {functional}: energy {:.10} (W(λ) = {:.10}), distance to homogeneous {:.1e}, best start {}",
                best.energy,
                (1.0 - 1.0 / lambda).powi(2),
                best.field.sup_distance(&homogeneous),
                best.start
            );
        }
    }
    Ok(())
}

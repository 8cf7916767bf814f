//! ε-sweep of the rescaled foundation energy at λ = 1.5, μ = 200 against
//! the sharp minimizers with crack_count(λ, μ) segments.
//!
//! `cargo run --release --example gamma_sweep_v -- [N]` (default N = 1000).

use inverse_fracture::limits::gamma_sweep_v;
use inverse_fracture::material::builtin_lj;
use inverse_fracture::regularized::SolveSettings;

fn main() -> inverse_fracture::Result<()> {
    let intervals = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1000);
    let settings = SolveSettings {
        intervals,
        max_iterations: 10_000,
        tolerance: 1e-5,
        ..Default::default()
    };
    let report = gamma_sweep_v(1.5, 200.0, &builtin_lj(), &[0.08, 0.04, 0.02, 0.01], &settings)?;
    println!(
        "sharp limit V_n = {:.5} ({:?}), N = {intervals}",
        report.metadata.limit_energy, report.metadata.candidates
    );
    println!("   ε      V_ε       lower     trans  slope L1   sup h    best start");
    for r in &report.rows {
        println!(
            "{:.2}  {:.6}  {:.6}  {:>5}  {:.4}    {:.4}   {}",
            r.epsilon,
            r.rescaled_energy,
            r.lower_bound,
            r.transition_count,
            r.l1_distance_to_sharp,
            r.sup_distance.unwrap_or(f64::NAN),
            r.start
        );
    }
    Ok(())
}

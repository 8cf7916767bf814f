//! ε-sweep of the rescaled stretch energy at λ = 1.4: energies approach the
//! surface constant and minimizers approach a single end crack.
//!
//! `cargo run --release --example gamma_sweep_i -- [N]` (default N = 1000).

use inverse_fracture::limits::gamma_sweep_i;
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
    let report = gamma_sweep_i(1.4, &builtin_lj(), &[0.08, 0.04, 0.02, 0.01], &settings)?;
    println!("limit C = {:.6}, N = {intervals}", report.metadata.limit_energy);
    println!("   ε      I_ε       lower     trans  L1 to sharp  nearest");
    for r in &report.rows {
        println!(
            "{:.2}  {:.6}  {:.6}  {:>5}  {:.4e}   {}",
            r.epsilon, r.rescaled_energy, r.lower_bound, r.transition_count, r.l1_distance_to_sharp, r.nearest_candidate
        );
    }
    println!("L1 trend over the last two rows: {:?}", report.tail_trend());
    Ok(())
}

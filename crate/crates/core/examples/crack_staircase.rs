//! Number of cracks as a function of the load for two foundation
//! stiffnesses.

use inverse_fracture::limits::crack_scan;
use inverse_fracture::material::builtin_lj;

fn main() -> inverse_fracture::Result<()> {
    let model = builtin_lj();
    let soft = crack_scan(1.01, 1.99, 0.01, 50.0, &model)?;
    let stiff = crack_scan(1.01, 1.99, 0.01, 200.0, &model)?;
    println!("  λ     n(μ=50)  n(μ=200)  V_n(μ=200)");
    for (a, b) in soft.rows.iter().zip(&stiff.rows).step_by(7) {
        println!("{:.2}  {:>7}  {:>8}  {:>10.5}", a.lambda, a.n, b.n, b.v_n);
    }
    println!("n(1.5) at μ = 200: {:?}", stiff.n_at(1.5));
    Ok(())
}

//! Surface-energy constant C = ∫₀¹ sqrt(2 W*(τ)) dτ for the built-in models
//! and a custom polynomial.

use inverse_fracture::material::{GrowthBound, MaterialModel, BUILTIN_MODELS};

fn main() -> inverse_fracture::Result<()> {
    for name in BUILTIN_MODELS {
        let model = MaterialModel::by_name(name)?;
        let q = model.c_wstar(1e-12)?;
        println!(
            "{name:>8}: C = {:.12}  (error estimate {:.1e}, {} intervals)",
            q.value, q.error_estimate, q.intervals
        );
    }
    println!("  4√2/15 = {:.12}", 4.0 * 2f64.sqrt() / 15.0);

    // W*(H) = H (1 - H)^2 written out as a polynomial
    let custom = MaterialModel::polynomial("cubic", vec![0.0, 1.0, -2.0, 1.0], GrowthBound { c: 0.25, m: 2.0 })?;
    let q = custom.c_wstar(1e-12)?;
    let growth = custom.check_growth(1000);
    let wells = custom.check_two_well(1000);
    println!(
        "   cubic: C = {:.12}, growth bound holds: {}, two wells: {}",
        q.value, growth.pass, wells.pass
    );
    Ok(())
}

//! Mollifying a sharp minimizer with the optimal transition profile gives
//! regularized energies that approach the sharp energy as ε shrinks.

use inverse_fracture::material::builtin_lj;
use inverse_fracture::regularized::{eval_v_eps, mollify_sharp_candidate, SharpField};
use inverse_fracture::sharp::{build_sharp_minimizer, Variant};

fn main() -> inverse_fracture::Result<()> {
    let model = builtin_lj();
    let c = model.c_wstar(1e-12)?.value;
    let (lambda, mu) = (1.5, 200.0);
    let sharp = build_sharp_minimizer(4, lambda, Variant::A, c, mu)?;
    println!("sharp V_4 = {:.6}", sharp.energy);
    for (eps, n) in [(0.04, 2000), (0.02, 4000), (0.01, 8000), (0.005, 16000)] {
        let m = mollify_sharp_candidate(SharpField::Deformation(&sharp.field), eps, &model, n)?;
        let v = eval_v_eps(m.field.values(), lambda, eps, mu, &model).rescaled;
        println!(
            "ε = {eps:<5}: V_ε(mollified) = {v:.6}, transitions {}, overlapping pairs {}",
            m.field.transition_count(),
            m.overlaps.len()
        );
    }
    Ok(())
}

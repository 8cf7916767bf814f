//! Both variants of the sharp minimizer at λ = 1.5, μ = 200: segment
//! structure, cracks, energy and the reconstructed deformation.

use inverse_fracture::material::builtin_lj;
use inverse_fracture::sharp::{
    build_sharp_minimizer, crack_count, eval_v, reconstruct_deformation, Variant,
};

fn main() -> inverse_fracture::Result<()> {
    let c = builtin_lj().c_wstar(1e-12)?.value;
    let (lambda, mu) = (1.5, 200.0);
    let n = crack_count(c, mu, lambda)?;
    for variant in Variant::BOTH {
        let m = build_sharp_minimizer(n, lambda, variant, c, mu)?;
        println!("variant {variant}: n = {n}, segment length {:.4}", m.segment_length);
        println!("  energy {:.6} (direct evaluation {:.6})", m.energy, eval_v(&m.field, c, mu));
        println!("  knots  {:?}", m.field.knots());
        println!("  values {:?}", m.field.knot_values());
        for crack in &m.cracks {
            println!("  crack at x = {:.4}, opening {:.4}", crack.position, crack.opening);
        }
        let graph = reconstruct_deformation(&m.field)?;
        for jump in &graph.jumps {
            println!("  f jumps at x = {:.4} from {:.4} to {:.4}", jump.x, jump.lower, jump.upper);
        }
    }
    Ok(())
}

//! Writes a sharp inverse deformation to a field file, reads it back and
//! inverts it into the deformation f over the reference bar.

use inverse_fracture::io::{parse_field, render_field, FieldFile};
use inverse_fracture::sharp::{reconstruct_deformation, PiecewiseLinearField};

fn main() -> inverse_fracture::Result<()> {
    // elastic, plateau (crack of opening 0.3), elastic, plateau at the end
    let h = PiecewiseLinearField::new(vec![0.0, 0.4, 0.7, 1.3, 1.5], vec![0.0, 0.4, 0.4, 1.0, 1.0])?;
    let text = render_field(&FieldFile::SharpDeformation(h));
    print!("{text}");
    let FieldFile::SharpDeformation(h) = parse_field(&text)? else {
        unreachable!("kind written above");
    };
    let graph = reconstruct_deformation(&h)?;
    for p in &graph.pieces {
        println!("f(x) = x + {:.3} on [{:.3}, {:.3}]", p.f_start - p.x_start, p.x_start, p.x_end);
    }
    for j in &graph.jumps {
        println!("jump at x = {:.3}: {:.3} -> {:.3}", j.x, j.lower, j.upper);
    }
    for x in [0.0, 0.2, 0.4, 0.9, 1.0] {
        println!("f({x}) = {:?}", graph.eval(x));
    }
    Ok(())
}

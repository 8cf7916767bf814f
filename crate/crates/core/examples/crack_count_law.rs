//! Crack-count law for the foundation problem: bracket argument x, the
//! selected count n and the energies V_n around it.

use inverse_fracture::material::builtin_lj;
use inverse_fracture::sharp::{bracket_argument, crack_count, v_n};

fn main() -> inverse_fracture::Result<()> {
    let c = builtin_lj().c_wstar(1e-12)?.value;
    let (lambda, mu) = (1.5, 200.0);
    let x = bracket_argument(c, mu, lambda)?;
    let n = crack_count(c, mu, lambda)?;
    println!("λ = {lambda}, μ = {mu}, C = {c:.10}");
    println!("x = (μ(λ-1)²/(3C))^(1/3) = {x:.4}  →  n = {n}");
    for k in 1..=7 {
        let marker = if k == n { "  <- minimum" } else { "" };
        println!("V_{k} = {:.5}{marker}", v_n(k, c, mu, lambda)?);
    }
    Ok(())
}

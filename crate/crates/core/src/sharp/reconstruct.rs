use serde::{Deserialize, Serialize};

use super::fields::{PiecewiseLinearField, SlopeClass};
use crate::error::{domain, Result};

/// One continuous piece of the deformation `f` over material coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphPiece {
    pub x_start: f64,
    pub x_end: f64,
    pub f_start: f64,
    pub f_end: f64,
}

/// A jump of `f` at material point `x`, from `lower` to `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub x: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationGraph {
    pub pieces: Vec<GraphPiece>,
    pub jumps: Vec<Jump>,
}

impl DeformationGraph {
    /// Right-continuous evaluation of `f` on `[0, 1]`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|p| x >= p.x_start && (x < p.x_end || (x == p.x_end && x == 1.0)))
            .map(|p| p.f_start + (x - p.x_start))
    }
}

/// Inverts each maximal elastic run of `h` into a unit-slope piece of `f`;
/// every maximal plateau becomes a jump.
pub fn reconstruct_deformation(field: &PiecewiseLinearField) -> Result<DeformationGraph> {
    if field.slope_classes().contains(&SlopeClass::Other) {
        return domain("reconstruction needs every slope of h in {0, 1}");
    }
    if !field.satisfies_boundary_conditions() {
        return domain("reconstruction needs h(0) = 0 and h(λ) = 1");
    }
    let pieces = field
        .elastic_runs()
        .into_iter()
        .map(|(y0, y1, h0, h1)| GraphPiece {
            x_start: h0,
            x_end: h1,
            f_start: y0,
            f_end: y1,
        })
        .collect();
    let jumps = field
        .plateaus()
        .into_iter()
        .map(|(y0, y1, h)| Jump {
            x: h,
            lower: y0,
            upper: y1,
        })
        .collect();
    Ok(DeformationGraph { pieces, jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharp::minimizer::{build_sharp_minimizer, Variant};

    #[test]
    fn end_crack() {
        let f = PiecewiseLinearField::new(vec![0.0, 1.0, 1.4], vec![0.0, 1.0, 1.0]).unwrap();
        let g = reconstruct_deformation(&f).unwrap();
        assert_eq!(g.pieces.len(), 1);
        assert_eq!(g.eval(0.3), Some(0.3));
        assert_eq!(g.jumps, vec![Jump { x: 1.0, lower: 1.0, upper: 1.4 }]);
    }

    #[test]
    fn identity() {
        let g = reconstruct_deformation(&PiecewiseLinearField::identity()).unwrap();
        assert!(g.jumps.is_empty());
        assert_eq!(g.eval(0.7), Some(0.7));
        assert_eq!(g.eval(1.0), Some(1.0));
    }

    #[test]
    fn variant_b_jumps() {
        let m = build_sharp_minimizer(4, 1.5, Variant::B, 0.3, 200.0).unwrap();
        let g = reconstruct_deformation(&m.field).unwrap();
        let xs: Vec<f64> = g.jumps.iter().map(|j| j.x).collect();
        assert_eq!(xs.len(), 3);
        for (x, e) in xs.iter().zip([0.0, 0.5, 1.0]) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(g.jumps.len(), m.cracks.len());
        // f(0+) sits at the top of the first opening
        assert!((g.eval(0.0).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn rejects_other_slopes() {
        let f = PiecewiseLinearField::new(vec![0.0, 1.5], vec![0.0, 1.0]).unwrap();
        assert!(reconstruct_deformation(&f).is_err());
    }
}

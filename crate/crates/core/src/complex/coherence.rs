//! Partial closures and the coherent-diagonality check: a diagonal complex
//! is coherently diagonal when every sequence of curl closures reduces to a
//! diagonal complex whose rotation constant drops by the closed curls'
//! rotation numbers.

use super::{Complex, DiagonalCheck};
use crate::planar::{PlanarArcDiagram, PlanarError};
use crate::scalar::Q;
use crate::smoothing::{BoundaryConfig, LoopSign, PointDir};

/// One curl closure: the boundary position it attaches at and the sign of
/// the loop it completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureChoice {
    pub position: usize,
    pub sign: LoopSign,
}

/// Result of the coherence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub coherent: bool,
    /// Rotation constant of the (reduced) complex itself.
    pub constant: Option<Q>,
    /// Number of closure sequences whose reductions were checked.
    pub sequences_checked: usize,
    /// A failing closure sequence, when incoherent.
    pub witness: Option<Vec<ClosureChoice>>,
}

/// All curl closures available on a `2k`-point boundary: one per position,
/// with the sign forced by the orientations.
pub fn closure_choices(k: usize) -> Vec<ClosureChoice> {
    let cfg = BoundaryConfig::new(k);
    (0..2 * k)
        .map(|position| ClosureChoice {
            position,
            sign: if cfg.dir(position) == PointDir::In {
                LoopSign::Neg
            } else {
                LoopSign::Pos
            },
        })
        .collect()
}

impl Complex {
    /// Applies a sequence of unary operators, left to right.
    pub fn partial_closure(&self, ops: &[PlanarArcDiagram]) -> Result<Complex, PlanarError> {
        let mut current = self.clone();
        for op in ops {
            if op.input_count() != 1 {
                return Err(PlanarError::Incompatible(
                    "partial closures use unary operators".into(),
                ));
            }
            current = op.compose_complexes(&[&current])?;
        }
        Ok(current)
    }

    /// Exhaustively closes curls down to a 2-point boundary, checking after
    /// each reduction that the complex stays diagonal with the constant
    /// predicted by the closed curls.
    pub fn is_coherently_diagonal(&self) -> Result<CoherenceReport, PlanarError> {
        self.is_coherently_diagonal_depth(usize::MAX)
    }

    /// Like [`Complex::is_coherently_diagonal`] with a bound on the closure
    /// sequence length.
    pub fn is_coherently_diagonal_depth(
        &self,
        max_depth: usize,
    ) -> Result<CoherenceReport, PlanarError> {
        let reduced = self.reduce();
        let constant = match reduced.is_diagonal() {
            DiagonalCheck::Constant(c) => c,
            _ => {
                return Ok(CoherenceReport {
                    coherent: false,
                    constant: None,
                    sequences_checked: 1,
                    witness: Some(Vec::new()),
                })
            }
        };
        let mut checked = 1usize;
        let mut trail: Vec<ClosureChoice> = Vec::new();
        let witness = close_recursively(
            &reduced,
            &constant,
            max_depth,
            &mut trail,
            &mut checked,
        )?;
        Ok(CoherenceReport {
            coherent: witness.is_none(),
            constant: Some(constant),
            sequences_checked: checked,
            witness,
        })
    }
}

fn close_recursively(
    current: &Complex,
    expected: &Q,
    depth_left: usize,
    trail: &mut Vec<ClosureChoice>,
    checked: &mut usize,
) -> Result<Option<Vec<ClosureChoice>>, PlanarError> {
    let k = current.boundary().k();
    if k <= 1 || depth_left == 0 {
        return Ok(None);
    }
    for choice in closure_choices(k) {
        let op = PlanarArcDiagram::unary_basic(k, choice.position, choice.sign)?;
        let r_u = op.classify().r_d;
        let closed = op.compose_complexes(&[current])?.reduce();
        *checked += 1;
        trail.push(choice);
        let want = expected.clone() - r_u;
        match closed.is_diagonal() {
            DiagonalCheck::Constant(c) if c == want => {
                if let Some(w) =
                    close_recursively(&closed, &want, depth_left - 1, trail, checked)?
                {
                    return Ok(Some(w));
                }
            }
            _ => return Ok(Some(trail.clone())),
        }
        trail.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use crate::khovanov::{crossing_complex, CrossingSign};
    use crate::scalar::qr;

    #[test]
    fn crossing_complexes_are_coherently_diagonal() {
        for sign in [CrossingSign::Negative, CrossingSign::Positive] {
            let c = crossing_complex(sign, true);
            let report = c.is_coherently_diagonal().unwrap();
            assert!(report.coherent, "witness: {:?}", report.witness);
            let expect = match sign {
                CrossingSign::Negative => qr(1, 2),
                CrossingSign::Positive => qr(-1, 2),
            };
            assert_eq!(report.constant, Some(expect));
            // k = 2: four single closures, none deeper
            assert_eq!(report.sequences_checked, 5);
        }
    }

    #[test]
    fn perturbed_shift_fails_with_empty_witness() {
        let c = crossing_complex(CrossingSign::Negative, true);
        let (boundary, r0, mut objects, diffs) = c.parts();
        objects[0][0].shift += 1;
        let c = super::super::Complex::new(boundary, r0, objects, diffs).unwrap();
        let report = c.is_coherently_diagonal().unwrap();
        assert!(!report.coherent);
        assert_eq!(report.witness, Some(vec![]));
    }
}

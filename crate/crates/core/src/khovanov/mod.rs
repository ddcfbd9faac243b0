//! Crossing complexes, the compose-and-reduce pipeline, the independent
//! cube-of-resolutions computation, and the two-line support check.

mod cube;
pub mod jones;
mod pd;
mod plan;

pub use cube::{cube_oracle, CubeError};
pub use pd::{Crossing, PDCode, PdError};
pub use plan::{analyze, plan_composition, CompositionPlan, PdAnalysis, PlanError, PlanStep};

use crate::cobordism::elementary::saddle;
use crate::complex::{Complex, HomologyTable, Matrix};
use crate::scalar::Q;
use crate::smoothing::{BoundaryConfig, OrientedSmoothing, ShiftedSmoothing, StringId};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("composition failed: {0}")]
    Composition(String),
}

/// Sign of a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn from_i8(s: i8) -> Self {
        if s >= 0 {
            CrossingSign::Positive
        } else {
            CrossingSign::Negative
        }
    }
}

/// The two-term complex of a single crossing on a 4-point boundary with the
/// given phase: the 0-resolution maps to the 1-resolution by a saddle. For a
/// negative crossing the terms sit at homological degrees -1 and 0 with
/// shifts -2 and -1; for a positive crossing at 0 and 1 with shifts +1, +2.
pub fn crossing_complex(sign: CrossingSign, point0_in: bool) -> Complex {
    crossing_instance(sign, point0_in, false)
}

/// Like [`crossing_complex`], but allowing the rotated corner labeling used
/// when a crossing's gravity phase is nontrivial (its resolutions swap
/// which matching is the source).
pub fn crossing_instance(sign: CrossingSign, point0_in: bool, rotated: bool) -> Complex {
    let boundary = BoundaryConfig::with_phase(2, point0_in);
    let lo = if point0_in {
        [(0, 1), (2, 3)]
    } else {
        [(1, 2), (3, 0)]
    };
    let hi = if point0_in {
        [(0, 3), (2, 1)]
    } else {
        [(1, 0), (3, 2)]
    };
    // the 0-resolution pairs the first two corners; under a rotated corner
    // map that is the other matching
    let (res0, res1) = if rotated { (hi, lo) } else { (lo, hi) };
    let src = OrientedSmoothing::with_boundary(boundary, &res0, &[]).expect("valid resolution");
    let tgt = OrientedSmoothing::with_boundary(boundary, &res1, &[]).expect("valid resolution");
    let d = saddle(
        &src,
        &tgt,
        &[StringId::Strand(0), StringId::Strand(1)],
        &[StringId::Strand(0), StringId::Strand(1)],
    )
    .expect("resolutions differ by a saddle");
    let (r0, q_src, q_tgt) = match sign {
        CrossingSign::Negative => (-1, -2, -1),
        CrossingSign::Positive => (0, 1, 2),
    };
    Complex::new(
        boundary,
        r0,
        vec![
            vec![ShiftedSmoothing::new(src, q_src)],
            vec![ShiftedSmoothing::new(tgt, q_tgt)],
        ],
        vec![vec![vec![d]]],
    )
    .expect("crossing complex is well-formed")
}

/// A pipeline stage report, delivered after every plan step.
pub struct PipelineStage<'a> {
    pub step_index: usize,
    pub step: &'a PlanStep,
    /// Reduced running complex after the step.
    pub complex: &'a Complex,
    /// Sum of the diagonal constants of the loaded crossing complexes minus
    /// the rotation numbers of the applied diagrams, when all loaded
    /// crossings were diagonal.
    pub predicted_constant: Option<Q>,
}

/// Runs the composition plan, reducing after every step.
pub fn kh(pd: &PDCode, close: bool) -> Result<Complex, KhError> {
    kh_with_observer(pd, close, |_| {})
}

/// Like [`kh`], invoking the observer with every intermediate stage.
pub fn kh_with_observer<F>(pd: &PDCode, close: bool, mut observe: F) -> Result<Complex, KhError>
where
    F: FnMut(&PipelineStage),
{
    let plan = plan_composition(pd, close)?;
    let phases = plan
        .analysis
        .phases
        .clone()
        .unwrap_or_else(|| vec![false; pd.crossings.len()]);
    let instance = |crossing: usize| -> Complex {
        crossing_instance(
            CrossingSign::from_i8(plan.analysis.signs[crossing]),
            true,
            phases[crossing],
        )
    };

    let mut running = Complex::single(0, ShiftedSmoothing::new(OrientedSmoothing::empty(), 0));
    let mut predicted: Option<Q> = Some(crate::scalar::q(0));
    let combine = |pred: &mut Option<Q>, delta: Option<Q>| {
        *pred = match (pred.take(), delta) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    };
    for (step_index, step) in plan.steps.iter().enumerate() {
        match step {
            PlanStep::Load { crossing } => {
                let inst = instance(*crossing);
                combine(&mut predicted, inst.is_diagonal().constant().cloned());
                running = inst;
            }
            PlanStep::Glue { crossing, diagram } => {
                let inst = instance(*crossing);
                combine(&mut predicted, inst.is_diagonal().constant().cloned());
                combine(&mut predicted, Some(-diagram.classify().r_d));
                let glued = diagram
                    .compose_complexes(&[&running, &inst])
                    .map_err(|e| KhError::Composition(e.to_string()))?;
                running = glued.reduce();
            }
            PlanStep::Close { diagram } => {
                combine(&mut predicted, Some(-diagram.classify().r_d));
                let closed = diagram
                    .compose_complexes(&[&running])
                    .map_err(|e| KhError::Composition(e.to_string()))?;
                running = closed.reduce();
            }
        }
        observe(&PipelineStage {
            step_index,
            step,
            complex: &running,
            predicted_constant: predicted.clone(),
        });
    }
    for _ in 0..pd.free_loops {
        running = with_free_loop(&running);
    }
    Ok(running.reduce())
}

/// Tensors a complex with the two-object complex of a split circle: every
/// object doubles with shifts +1 and -1 and the differential acts
/// diagonally.
fn with_free_loop(c: &Complex) -> Complex {
    if c.is_empty() {
        return c.clone();
    }
    let boundary = c.boundary();
    let r0 = c.r_min();
    let objects: Vec<Vec<ShiftedSmoothing>> = c
        .degrees()
        .map(|r| {
            c.objects_at(r)
                .iter()
                .flat_map(|o| {
                    [
                        ShiftedSmoothing::new(o.smoothing.clone(), o.shift + 1),
                        ShiftedSmoothing::new(o.smoothing.clone(), o.shift - 1),
                    ]
                })
                .collect()
        })
        .collect();
    let diffs: Vec<Matrix> = c
        .degrees()
        .take_while(|&r| r < c.r_max())
        .map(|r| {
            let m = c.diff_at(r).expect("within amplitude");
            let rows = c.objects_at(r + 1).len();
            let cols = c.objects_at(r).len();
            let mut out: Matrix = Vec::with_capacity(2 * rows);
            for i in 0..rows {
                for copy in 0..2 {
                    let mut row = Vec::with_capacity(2 * cols);
                    for j in 0..cols {
                        for copy2 in 0..2 {
                            if copy == copy2 {
                                row.push(m[i][j].clone());
                            } else {
                                row.push(crate::cobordism::MorphismCombo::zero(
                                    c.objects_at(r)[j].smoothing.clone(),
                                    c.objects_at(r + 1)[i].smoothing.clone(),
                                ));
                            }
                        }
                    }
                    out.push(row);
                }
            }
            out
        })
        .collect();
    Complex::new(boundary, r0, objects, diffs).expect("doubling preserves validity")
}

/// Failure report of the two-line support check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLineFailure {
    /// The distinct values of `j - 2i` found in the table.
    pub residues: Vec<i64>,
}

/// Checks that every nonzero entry satisfies `j - 2i` in `{K-1, K+1}` for a
/// single integer `K`, and returns that `K`.
pub fn two_line_check(table: &HomologyTable) -> Result<i64, TwoLineFailure> {
    let residues: std::collections::BTreeSet<i64> =
        table.iter().map(|(&(i, j), _)| j - 2 * i).collect();
    let list: Vec<i64> = residues.into_iter().collect();
    match list.as_slice() {
        [] => Ok(0),
        [v] => Ok(v + 1),
        [a, b] if b - a == 2 => Ok(a + 1),
        _ => Err(TwoLineFailure { residues: list }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DiagonalCheck;
    use crate::scalar::qr;

    #[test]
    fn crossing_complex_constants() {
        let neg = crossing_complex(CrossingSign::Negative, true);
        assert!(neg.validate().is_empty());
        assert_eq!(neg.is_diagonal(), DiagonalCheck::Constant(qr(1, 2)));
        let pos = crossing_complex(CrossingSign::Positive, true);
        assert!(pos.validate().is_empty());
        assert_eq!(pos.is_diagonal(), DiagonalCheck::Constant(qr(-1, 2)));
    }

    #[test]
    fn kinked_unknot_pipeline() {
        let pd = PDCode::parse("PD[X(1,1,2,2)]").unwrap();
        let c = kh(&pd, true).unwrap();
        let t = c.homology_table().unwrap();
        assert_eq!(t.get(0, 1), 1, "table:\n{t}");
        assert_eq!(t.get(0, -1), 1);
        assert_eq!(t.total_dimension(), 2);
    }

    #[test]
    fn trefoil_pipeline_matches_oracle() {
        let pd = PDCode::parse("PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]").unwrap();
        let c = kh(&pd, true).unwrap();
        let t = c.homology_table().unwrap();
        let oracle = cube_oracle(&pd).unwrap();
        assert_eq!(t, oracle, "pipeline:\n{t}\noracle:\n{oracle}");
        assert_eq!(t.total_dimension(), 4);
    }

    #[test]
    fn single_crossing_tangle_is_diagonal() {
        let pd = PDCode::parse("PD[X(1,4,2,3)]").unwrap();
        let c = kh(&pd, false).unwrap();
        match c.is_diagonal() {
            DiagonalCheck::Constant(c) => assert!(c == qr(1, 2) || c == qr(-1, 2)),
            other => panic!("expected a diagonal complex, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_circle_pipelines() {
        let pd = PDCode::parse("PD[]").unwrap();
        let t = kh(&pd, true).unwrap().homology_table().unwrap();
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.total_dimension(), 1);

        let pd = PDCode::parse("PD[O]").unwrap();
        let t = kh(&pd, true).unwrap().homology_table().unwrap();
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(0, -1), 1);
    }

    #[test]
    fn two_line_check_cases() {
        let borromean_like = HomologyTable::from_entries(&[(0, 1, 4), (3, 7, 1), (-3, -7, 1)]);
        assert_eq!(two_line_check(&borromean_like), Ok(0));
        let single = HomologyTable::from_entries(&[(0, 0, 1)]);
        assert_eq!(two_line_check(&single), Ok(1));
        let bad = HomologyTable::from_entries(&[(0, -3, 1), (0, 1, 1)]);
        assert!(two_line_check(&bad).is_err());
    }
}

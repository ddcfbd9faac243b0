//! Alternating planar arc diagrams: validation, arc classification with the
//! rotation-associated number, and horizontal composition of smoothings,
//! cobordisms and complexes.

mod compose;
mod map;

pub use compose::{GlueTrace, LoopOrigin, Piece};

use crate::scalar::{q, qr, Q};
use crate::smoothing::{BoundaryConfig, LoopSign, PointDir};
use map::{HalfEdge, PlanarMap, Vertex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarError {
    #[error("an arc joins two output boundary points (diagram is not type A)")]
    NotTypeA,
    #[error("arc orientations clash at {0:?}")]
    OrientationClash(Endpoint),
    #[error("arcs cross (the rotation system is not planar)")]
    CrossingArcs,
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("incompatible request: {0}")]
    Incompatible(String),
    #[error("bad diagram spec: {0}")]
    BadSpec(String),
}

/// A point on one of the diagram's circles; circle 0 is the output circle,
/// circles 1..=d are the input discs.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Endpoint {
    pub circle: usize,
    pub point: usize,
}

/// Plain data from which a diagram is validated and built.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub output: BoundaryConfig,
    pub inputs: Vec<BoundaryConfig>,
    pub arcs: Vec<(Endpoint, Endpoint)>,
    /// For closures down to an empty boundary the embedding has a genuine
    /// two-fold choice (which side the last curl wraps); this picks the sign
    /// of the loop such a curl completes.
    #[serde(default)]
    pub closure_sign: Option<LoopSign>,
}

/// Classification of the arcs of a diagram and its rotation data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcClassification {
    pub curls: usize,
    pub interconnecting: usize,
    pub boundary_arcs: usize,
    /// Number of non-boundary arcs (curls plus interconnecting arcs).
    pub i_d: usize,
    /// Number of negative internal regions: white regions of the
    /// checkerboard coloring whose boundary avoids the output circle.
    pub w_d: usize,
    /// The rotation associated number `(1 + i_d - d)/2 - w_d`.
    pub r_d: Q,
}

/// A validated alternating type-A planar arc diagram with `d` input discs.
#[derive(Debug, Clone)]
pub struct PlanarArcDiagram {
    output: BoundaryConfig,
    inputs: Vec<BoundaryConfig>,
    /// Arcs oriented from their departure endpoint to their arrival.
    arcs: Vec<(Endpoint, Endpoint)>,
    map: PlanarMap,
    /// A half-edge whose left face is the outer region.
    outer_rep: HalfEdge,
}

impl PlanarArcDiagram {
    /// Validates a spec and builds the diagram.
    pub fn from_spec(spec: &DiagramSpec) -> Result<Self, PlanarError> {
        let d = spec.inputs.len();
        if d == 0 {
            return Err(PlanarError::BadSpec(
                "a diagram needs at least one input".into(),
            ));
        }
        for (i, cfg) in spec.inputs.iter().enumerate() {
            if cfg.k() == 0 {
                return Err(PlanarError::BadSpec(format!(
                    "input disc {i} has no boundary points"
                )));
            }
        }
        let total: usize =
            spec.output.points() + spec.inputs.iter().map(|c| c.points()).sum::<usize>();
        if spec.arcs.len() * 2 != total {
            return Err(PlanarError::BadSpec(
                "arcs must form a perfect matching of all boundary points".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &spec.arcs {
            for e in [a, b] {
                let n = Self::points_of(spec, e.circle)?;
                if e.point >= n {
                    return Err(PlanarError::BadSpec(format!("endpoint {e:?} out of range")));
                }
                if !seen.insert(e) {
                    return Err(PlanarError::BadSpec(format!("endpoint {e:?} used twice")));
                }
            }
            if a.circle == 0 && b.circle == 0 {
                return Err(PlanarError::NotTypeA);
            }
        }
        // orient arcs: exactly one departure per arc
        let departs = |e: Endpoint| -> bool {
            if e.circle == 0 {
                spec.output.dir(e.point) == PointDir::In
            } else {
                spec.inputs[e.circle - 1].dir(e.point) == PointDir::Out
            }
        };
        let mut arcs = Vec::with_capacity(spec.arcs.len());
        for &(a, b) in &spec.arcs {
            match (departs(a), departs(b)) {
                (true, false) => arcs.push((a, b)),
                (false, true) => arcs.push((b, a)),
                _ => return Err(PlanarError::OrientationClash(a)),
            }
        }
        let mut circle_points = vec![spec.output.points()];
        circle_points.extend(spec.inputs.iter().map(|c| c.points()));
        let map_arcs: Vec<(Vertex, Vertex)> = arcs
            .iter()
            .map(|&(a, b)| {
                (
                    Vertex {
                        circle: a.circle,
                        point: a.point,
                    },
                    Vertex {
                        circle: b.circle,
                        point: b.point,
                    },
                )
            })
            .collect();
        let map = PlanarMap::build(&circle_points, &map_arcs, &[]);
        if !map.is_connected() {
            return Err(PlanarError::Disconnected);
        }
        if map.genus() != 0 {
            return Err(PlanarError::CrossingArcs);
        }
        let outer_rep = if spec.output.k() > 0 {
            PlanarMap::twin(map.segment_halfedge(0, 0))
        } else {
            // ambiguous embedding: resolve via the closure sign when given,
            // else pick a fixed convention
            let aligned = map.arc_halfedge(0);
            match spec.closure_sign {
                Some(LoopSign::Neg) => aligned,
                Some(LoopSign::Pos) => PlanarMap::twin(aligned),
                None => PlanarMap::twin(aligned),
            }
        };
        let diagram = Self {
            output: spec.output,
            inputs: spec.inputs.clone(),
            arcs,
            map,
            outer_rep,
        };
        diagram.check_coloring()?;
        Ok(diagram)
    }

    fn points_of(spec: &DiagramSpec, circle: usize) -> Result<usize, PlanarError> {
        if circle == 0 {
            Ok(spec.output.points())
        } else if circle <= spec.inputs.len() {
            Ok(spec.inputs[circle - 1].points())
        } else {
            Err(PlanarError::BadSpec(format!("no circle {circle}")))
        }
    }

    pub fn to_spec(&self) -> DiagramSpec {
        DiagramSpec {
            output: self.output,
            inputs: self.inputs.clone(),
            arcs: self.arcs.clone(),
            closure_sign: None,
        }
    }

    pub fn output(&self) -> BoundaryConfig {
        self.output
    }

    pub fn inputs(&self) -> &[BoundaryConfig] {
        &self.inputs
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    /// Oriented arcs (departure, arrival).
    pub fn arcs(&self) -> &[(Endpoint, Endpoint)] {
        &self.arcs
    }


    pub(crate) fn outer_rep(&self) -> HalfEdge {
        self.outer_rep
    }

    /// The face coloring determined by "white on the right of every oriented
    /// arc": returns `is_white` per face (None when a face touches no arc).
    fn face_colors(&self) -> Result<Vec<Option<bool>>, PlanarError> {
        let mut colors: Vec<Option<bool>> = vec![None; self.map.face_count()];
        for (idx, &(from, _)) in self.arcs.iter().enumerate() {
            // stored arcs are oriented from the departure endpoint, so the
            // stored half-edge is aligned with the arc direction
            let h = self.map.arc_halfedge(idx);
            let left = self.map.face(h);
            let right = self.map.face(PlanarMap::twin(h));
            for (face, white) in [(left, false), (right, true)] {
                match colors[face] {
                    None => colors[face] = Some(white),
                    Some(w) if w != white => return Err(PlanarError::OrientationClash(from)),
                    _ => {}
                }
            }
        }
        Ok(colors)
    }

    fn check_coloring(&self) -> Result<(), PlanarError> {
        self.face_colors().map(|_| ())
    }

    /// Classifies the arcs and computes `i_D`, `w_D` and `R_D`.
    pub fn classify(&self) -> ArcClassification {
        let mut curls = 0;
        let mut interconnecting = 0;
        let mut boundary_arcs = 0;
        for &(a, b) in &self.arcs {
            if a.circle == 0 || b.circle == 0 {
                boundary_arcs += 1;
            } else if a.circle == b.circle {
                curls += 1;
            } else {
                interconnecting += 1;
            }
        }
        let colors = self
            .face_colors()
            .expect("diagram coloring was validated at construction");
        // faces excluded from the count: the outer region, the disc
        // interiors, and anything meeting the output circle
        let mut excluded = vec![false; self.map.face_count()];
        excluded[self.map.face(self.outer_rep)] = true;
        for c in 0..self.inputs.len() {
            excluded[self.map.face(self.map.segment_halfedge(c + 1, 0))] = true;
        }
        for p in 0..self.output.points() {
            let h = self.map.segment_halfedge(0, p);
            excluded[self.map.face(h)] = true;
            excluded[self.map.face(PlanarMap::twin(h))] = true;
        }
        let w_d = (0..self.map.face_count())
            .filter(|&f| !excluded[f] && colors[f] == Some(true))
            .count();
        let d = self.inputs.len();
        let i_d = curls + interconnecting;
        let r_d = qr(1, 2) * (q(1) + q(i_d as i64) - q(d as i64)) - q(w_d as i64);
        ArcClassification {
            curls,
            interconnecting,
            boundary_arcs,
            i_d,
            w_d,
            r_d,
        }
    }

    /// Shorthand for the rotation associated number.
    pub fn rotation_associated_number(&self) -> Q {
        self.classify().r_d
    }

    /// The radial 1-input identity diagram on `2k` points.
    pub fn identity(k: usize) -> Self {
        let cfg = BoundaryConfig::new(k);
        let arcs = (0..2 * k)
            .map(|p| {
                (
                    Endpoint { circle: 0, point: p },
                    Endpoint { circle: 1, point: p },
                )
            })
            .collect();
        Self::from_spec(&DiagramSpec {
            output: cfg,
            inputs: vec![cfg],
            arcs,
            closure_sign: None,
        })
        .expect("radial identity diagram is valid")
    }

    /// Unary basic diagram: one curl joining the adjacent input points
    /// `(position, position+1)`, all other points radially connected to the
    /// output. The sign is the sign of the loop the curl completes; for
    /// `k >= 2` it is forced by the orientations, for `k = 1` both signs are
    /// realizable and select the embedding of the closure.
    pub fn unary_basic(k: usize, position: usize, sign: LoopSign) -> Result<Self, PlanarError> {
        if k == 0 {
            return Err(PlanarError::Incompatible("nothing to close on k = 0".into()));
        }
        let input = BoundaryConfig::new(k);
        let n = 2 * k;
        let p = position % n;
        let p1 = (p + 1) % n;
        let forced = if input.dir(p) == PointDir::In {
            LoopSign::Neg
        } else {
            LoopSign::Pos
        };
        if k >= 2 && forced != sign {
            return Err(PlanarError::Incompatible(format!(
                "a curl at ({p},{p1}) completes a {forced:?} loop"
            )));
        }
        let remaining: Vec<usize> = (0..n - 2).map(|t| (p + 2 + t) % n).collect();
        let offset = if remaining.is_empty() || input.dir(remaining[0]) == PointDir::In {
            0
        } else {
            1
        };
        let mut arcs = vec![(
            Endpoint { circle: 1, point: p },
            Endpoint { circle: 1, point: p1 },
        )];
        for t in 0..remaining.len() {
            let src = remaining[(offset + t) % remaining.len()];
            arcs.push((
                Endpoint { circle: 0, point: t },
                Endpoint { circle: 1, point: src },
            ));
        }
        Self::from_spec(&DiagramSpec {
            output: BoundaryConfig::new(k - 1),
            inputs: vec![input],
            arcs,
            closure_sign: Some(sign),
        })
    }

    /// Binary basic diagram: a single interconnecting arc gluing point `p1`
    /// of the first disc to point `p2` of the second; all other points
    /// connect radially to the output circle, first the rest of disc one and
    /// then the rest of disc two.
    pub fn binary_basic(k1: usize, k2: usize, p1: usize, p2: usize) -> Result<Self, PlanarError> {
        if k1 == 0 || k2 == 0 {
            return Err(PlanarError::Incompatible("both inputs need boundary".into()));
        }
        let c1 = BoundaryConfig::new(k1);
        let c2 = BoundaryConfig::new(k2);
        let (n1, n2) = (2 * k1, 2 * k2);
        let (p1, p2) = (p1 % n1, p2 % n2);
        if c1.dir(p1) == c2.dir(p2) {
            return Err(PlanarError::OrientationClash(Endpoint {
                circle: 1,
                point: p1,
            }));
        }
        let mut seq: Vec<Endpoint> = (1..n1)
            .map(|t| Endpoint {
                circle: 1,
                point: (p1 + t) % n1,
            })
            .collect();
        seq.extend((1..n2).map(|t| Endpoint {
            circle: 2,
            point: (p2 + t) % n2,
        }));
        let dir_of = |e: &Endpoint| {
            if e.circle == 1 {
                c1.dir(e.point)
            } else {
                c2.dir(e.point)
            }
        };
        let offset = if dir_of(&seq[0]) == PointDir::In { 0 } else { 1 };
        let mut arcs = vec![(
            Endpoint { circle: 1, point: p1 },
            Endpoint { circle: 2, point: p2 },
        )];
        for t in 0..seq.len() {
            let src = seq[(offset + t) % seq.len()];
            arcs.push((Endpoint { circle: 0, point: t }, src));
        }
        Self::from_spec(&DiagramSpec {
            output: BoundaryConfig::new(k1 + k2 - 1),
            inputs: vec![c1, c2],
            arcs,
            closure_sign: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_diagram_classification() {
        let d = PlanarArcDiagram::identity(2);
        let c = d.classify();
        assert_eq!(c.curls, 0);
        assert_eq!(c.interconnecting, 0);
        assert_eq!(c.boundary_arcs, 4);
        assert_eq!(c.i_d, 0);
        assert_eq!(c.w_d, 0);
        assert_eq!(c.r_d, q(0));
    }

    #[test]
    fn unary_basic_rotation_numbers() {
        // position with an In point completes a negative loop: R_D = -1/2
        let neg = PlanarArcDiagram::unary_basic(2, 0, LoopSign::Neg).unwrap();
        assert_eq!(neg.classify().w_d, 1);
        assert_eq!(neg.classify().r_d, qr(-1, 2));
        // position with an Out point completes a positive loop: R_D = +1/2
        let pos = PlanarArcDiagram::unary_basic(2, 1, LoopSign::Pos).unwrap();
        assert_eq!(pos.classify().w_d, 0);
        assert_eq!(pos.classify().r_d, qr(1, 2));
        // mismatched request is rejected for k >= 2
        assert!(PlanarArcDiagram::unary_basic(2, 0, LoopSign::Pos).is_err());
    }

    #[test]
    fn unary_all_positions_alternate_sign() {
        for k in 2..=4usize {
            for p in 0..2 * k {
                let sign = if BoundaryConfig::new(k).dir(p) == PointDir::In {
                    LoopSign::Neg
                } else {
                    LoopSign::Pos
                };
                let d = PlanarArcDiagram::unary_basic(k, p, sign).unwrap();
                let expect = match sign {
                    LoopSign::Neg => qr(-1, 2),
                    LoopSign::Pos => qr(1, 2),
                };
                assert_eq!(d.classify().r_d, expect, "k={k} position={p}");
            }
        }
    }

    #[test]
    fn binary_basic_rotation_number_is_zero() {
        for (k1, k2, p1, p2) in [(1, 1, 0, 1), (2, 2, 0, 1), (2, 3, 3, 2), (2, 1, 1, 0)] {
            let d = PlanarArcDiagram::binary_basic(k1, k2, p1, p2).unwrap();
            let c = d.classify();
            assert_eq!(c.interconnecting, 1);
            assert_eq!(c.curls, 0);
            assert_eq!(c.r_d, q(0), "k1={k1} k2={k2} p1={p1} p2={p2}");
            assert_eq!(d.output().points(), 2 * (k1 + k2 - 1));
        }
    }

    #[test]
    fn binary_same_orientation_clashes() {
        // both points In: no consistent arc direction
        assert!(PlanarArcDiagram::binary_basic(1, 1, 0, 0).is_err());
    }

    #[test]
    fn output_to_output_arc_rejected() {
        let spec = DiagramSpec {
            output: BoundaryConfig::new(2),
            inputs: vec![BoundaryConfig::new(1)],
            arcs: vec![
                (
                    Endpoint { circle: 0, point: 0 },
                    Endpoint { circle: 0, point: 1 },
                ),
                (
                    Endpoint { circle: 0, point: 2 },
                    Endpoint { circle: 1, point: 0 },
                ),
                (
                    Endpoint { circle: 0, point: 3 },
                    Endpoint { circle: 1, point: 1 },
                ),
            ],
            closure_sign: None,
        };
        assert_eq!(
            PlanarArcDiagram::from_spec(&spec).unwrap_err(),
            PlanarError::NotTypeA
        );
    }

    #[test]
    fn full_closure_diagram_builds() {
        let d = PlanarArcDiagram::unary_basic(1, 0, LoopSign::Neg).unwrap();
        assert_eq!(d.output().points(), 0);
        let d = PlanarArcDiagram::unary_basic(1, 1, LoopSign::Pos).unwrap();
        assert_eq!(d.output().points(), 0);
    }
}

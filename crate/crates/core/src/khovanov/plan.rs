//! Analysis of PD codes (strand orientations, crossing signs, gravity
//! phases) and the greedy composition planner.

use super::pd::PDCode;
use crate::planar::PlanarArcDiagram;
use crate::smoothing::{BoundaryConfig, LoopSign, PointDir};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("diagram cannot be planned: {0}")]
    Unplannable(String),
    #[error("no coherent alternating boundary orientation exists for this diagram")]
    NotAlternating,
    #[error("planar construction failed: {0}")]
    Planar(String),
}

/// Orientation data extracted from a PD code.
#[derive(Debug, Clone)]
pub struct PdAnalysis {
    /// Writhe sign per crossing.
    pub signs: Vec<i8>,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Gravity phase per crossing (rotation of the corner-to-point map),
    /// when a coherent alternating orientation exists.
    pub phases: Option<Vec<bool>>,
}

/// Analyzes strand orientations, crossing signs and gravity phases.
pub fn analyze(pd: &PDCode) -> Result<PdAnalysis, PlanError> {
    let n = pd.crossings.len();
    let occ = pd.occurrences();

    // trace strands: states are (crossing, arrival slot); passing through a
    // crossing exits at slot + 2. Open strands are walked as paths starting
    // at their open edge; closed strands as cycles.
    let mut over_in_slot: Vec<Option<usize>> = vec![None; n];
    let mut visited: std::collections::BTreeSet<(usize, usize)> = Default::default();
    let walk = |start: (usize, usize),
                visited: &mut std::collections::BTreeSet<(usize, usize)>|
     -> Vec<(usize, usize)> {
        let mut states = Vec::new();
        let (mut c, mut s) = start;
        loop {
            if !visited.insert((c, s)) {
                break;
            }
            states.push((c, s));
            let exit_slot = (s + 2) % 4;
            let label = pd.crossings[c].edges[exit_slot];
            let next = occ[&label]
                .iter()
                .copied()
                .find(|&(oc, os)| (oc, os) != (c, exit_slot));
            match next {
                None => break, // open end
                Some(state) if state == start => break,
                Some((nc, ns)) => {
                    c = nc;
                    s = ns;
                }
            }
        }
        states
    };
    let mut starts: Vec<(usize, usize)> = occ
        .values()
        .filter(|o| o.len() == 1)
        .map(|o| o[0])
        .collect();
    starts.extend((0..n).flat_map(|c| (0..4).map(move |s| (c, s))));
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let states = walk(start, &mut visited);
        // decide the walk direction: under-strands are entered at slot 0;
        // strands passing only over vote by ascending edge labels
        let unders_fwd = states.iter().filter(|&&(_, s)| s == 0).count();
        let unders_bwd = states.iter().filter(|&&(_, s)| s == 2).count();
        let forward = if unders_fwd > 0 || unders_bwd > 0 {
            unders_fwd >= unders_bwd
        } else {
            // each state passes from an incoming to an outgoing edge;
            // standard codes number edges increasingly along the strand
            let mut vote = 0i64;
            for &(c, s) in &states {
                let incoming = pd.crossings[c].edges[s];
                let outgoing = pd.crossings[c].edges[(s + 2) % 4];
                if outgoing == incoming + 1 {
                    vote += 1;
                } else if incoming == outgoing + 1 {
                    vote -= 1;
                }
            }
            vote >= 0
        };
        for &(c, s) in &states {
            let arrival = if forward { s } else { (s + 2) % 4 };
            if arrival == 1 || arrival == 3 {
                over_in_slot[c] = Some(arrival);
            }
        }
    }

    let mut signs = Vec::with_capacity(n);
    for c in 0..n {
        let over_in = over_in_slot[c].ok_or_else(|| {
            PlanError::Unplannable(format!("crossing {c} has no over-strand passage"))
        })?;
        // over entering at d and leaving at b is a positive crossing
        signs.push(if over_in == 3 { 1 } else { -1 });
    }
    let n_plus = signs.iter().filter(|&&s| s > 0).count();
    let n_minus = signs.len() - n_plus;

    // gravity phases: 2-coloring with per-edge parity constraints
    let mut phases: Vec<Option<bool>> = vec![None; n];
    let mut consistent = true;
    'outer: for root in 0..n {
        if phases[root].is_some() {
            continue;
        }
        phases[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            let pc = phases[c].unwrap();
            for s in 0..4 {
                let label = pd.crossings[c].edges[s];
                for &(c2, s2) in &occ[&label] {
                    if (c2, s2) == (c, s) {
                        continue;
                    }
                    // flags differ at the two ends of an edge:
                    // phase(c) xor phase(c2) = 1 xor even(s) xor even(s2)
                    let want = pc ^ !(s % 2 == 0) ^ (s2 % 2 == 0);
                    match phases[c2] {
                        None => {
                            phases[c2] = Some(want);
                            queue.push_back(c2);
                        }
                        Some(p) if p != want => {
                            consistent = false;
                            break 'outer;
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let phases = if consistent {
        Some(phases.into_iter().map(|p| p.unwrap_or(false)).collect())
    } else {
        None
    };

    Ok(PdAnalysis {
        signs,
        n_plus,
        n_minus,
        phases,
    })
}

/// Edge labels of a crossing's boundary points under its gravity phase: the
/// corner-to-point map rotates so that point 0 is an In point.
pub fn crossing_boundary_labels(pd: &PDCode, crossing: usize, phase: bool) -> Vec<usize> {
    let rot = if phase { 1 } else { 0 };
    (0..4)
        .map(|t| pd.crossings[crossing].edges[(t + rot) % 4])
        .collect()
}

/// One step of the composition plan.
#[derive(Debug, Clone)]
pub enum PlanStep {
    /// Begin with the complex of this crossing.
    Load { crossing: usize },
    /// Glue this crossing to the running complex along a binary diagram
    /// (running complex in disc 1, crossing in disc 2).
    Glue {
        crossing: usize,
        diagram: PlanarArcDiagram,
    },
    /// Close an adjacent pair of identical boundary edges with a curl.
    Close { diagram: PlanarArcDiagram },
}

/// A validated plan together with the analysis it was built from.
#[derive(Debug, Clone)]
pub struct CompositionPlan {
    pub steps: Vec<PlanStep>,
    pub analysis: PdAnalysis,
    /// Boundary edge labels remaining after all steps, in circular order.
    pub final_boundary: Vec<usize>,
}

/// Plans a greedy composition: repeatedly attach the crossing sharing the
/// most edges with the running boundary (joined along a single arc), and
/// close adjacent identical labels with curls as they appear. For links the
/// boundary empties completely.
pub fn plan_composition(pd: &PDCode, close: bool) -> Result<CompositionPlan, PlanError> {
    let analysis = analyze(pd)?;
    let phases = analysis
        .phases
        .clone()
        .unwrap_or_else(|| vec![false; pd.crossings.len()]);
    let mut steps = Vec::new();
    let mut boundary: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..pd.crossings.len()).collect();

    if !remaining.is_empty() {
        let first = remaining.remove(0);
        boundary = crossing_boundary_labels(pd, first, phases[first]);
        steps.push(PlanStep::Load { crossing: first });
        close_adjacent_pairs(&mut boundary, &mut steps)?;
    }

    while !remaining.is_empty() {
        let shared_count = |c: usize| -> usize {
            pd.crossings[c]
                .edges
                .iter()
                .filter(|e| boundary.contains(e))
                .count()
        };
        let (pick_pos, &pick) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(pos, &c)| (shared_count(c), usize::MAX - pos))
            .expect("remaining is nonempty");
        if shared_count(pick) == 0 {
            return Err(PlanError::Unplannable(
                "diagram is split: no remaining crossing touches the running boundary".into(),
            ));
        }
        remaining.remove(pick_pos);
        let labels2 = crossing_boundary_labels(pd, pick, phases[pick]);
        // glue along the shared label at the smallest boundary position
        let p1 = boundary
            .iter()
            .position(|e| labels2.contains(e))
            .expect("some label is shared");
        let via = boundary[p1];
        let p2 = labels2.iter().position(|&e| e == via).unwrap();
        let k1 = boundary.len() / 2;
        let diagram = PlanarArcDiagram::binary_basic(k1, 2, p1, p2)
            .map_err(|e| PlanError::Planar(e.to_string()))?;
        boundary = output_labels(&diagram, &[&boundary, &labels2]);
        steps.push(PlanStep::Glue {
            crossing: pick,
            diagram,
        });
        close_adjacent_pairs(&mut boundary, &mut steps)?;
    }

    let mut counts = std::collections::BTreeMap::new();
    for &e in &boundary {
        *counts.entry(e).or_insert(0usize) += 1;
    }
    if counts.values().any(|&c| c > 1) {
        return Err(PlanError::Unplannable(
            "internal edges remain unglued; the code does not describe a planar diagram".into(),
        ));
    }
    if close && !boundary.is_empty() {
        return Err(PlanError::Unplannable(
            "cannot close a tangle with open boundary edges".into(),
        ));
    }
    Ok(CompositionPlan {
        steps,
        analysis,
        final_boundary: boundary,
    })
}

/// Closes every adjacent identical-label pair, repeatedly.
fn close_adjacent_pairs(
    boundary: &mut Vec<usize>,
    steps: &mut Vec<PlanStep>,
) -> Result<(), PlanError> {
    loop {
        let n = boundary.len();
        if n < 2 {
            return Ok(());
        }
        let pos = (0..n).find(|&t| boundary[t] == boundary[(t + 1) % n]);
        let Some(t) = pos else { return Ok(()) };
        let k = n / 2;
        let cfg = BoundaryConfig::new(k);
        let sign = if cfg.dir(t) == PointDir::In {
            LoopSign::Neg
        } else {
            LoopSign::Pos
        };
        let diagram = PlanarArcDiagram::unary_basic(k, t, sign)
            .map_err(|e| PlanError::Planar(e.to_string()))?;
        *boundary = output_labels(&diagram, &[boundary]);
        steps.push(PlanStep::Close { diagram });
    }
}

/// Labels of the output boundary points of a diagram, given the labels of
/// each input disc's points.
fn output_labels(diagram: &PlanarArcDiagram, disc_labels: &[&Vec<usize>]) -> Vec<usize> {
    let mut out = vec![0; diagram.output().points()];
    for &(a, b) in diagram.arcs() {
        let (o, i) = if a.circle == 0 {
            (a, b)
        } else if b.circle == 0 {
            (b, a)
        } else {
            continue;
        };
        out[o.point] = disc_labels[i.circle - 1][i.point];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> PDCode {
        PDCode::parse(text).unwrap()
    }

    #[test]
    fn trefoil_signs() {
        // the standard alternating left trefoil: all negative
        let pd = parse("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]");
        let a = analyze(&pd).unwrap();
        assert_eq!(a.signs, vec![-1, -1, -1]);
        assert_eq!((a.n_plus, a.n_minus), (0, 3));
        assert!(a.phases.is_some());
        // its mirror: all positive
        let pd = parse("PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]");
        let a = analyze(&pd).unwrap();
        assert_eq!(a.signs, vec![1, 1, 1]);
    }

    #[test]
    fn figure_eight_signs_balance() {
        let pd = parse("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]");
        let a = analyze(&pd).unwrap();
        assert_eq!((a.n_plus, a.n_minus), (2, 2));
        assert!(a.phases.is_some());
        // alternating codes admit a uniform gravity
        assert!(a.phases.unwrap().iter().all(|&p| !p));
    }

    #[test]
    fn trefoil_plan_closes_fully() {
        let pd = parse("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]");
        let plan = plan_composition(&pd, true).unwrap();
        assert!(plan.final_boundary.is_empty());
        let glue_count = plan
            .steps
            .iter()
            .filter(|s| matches!(s, PlanStep::Glue { .. }))
            .count();
        assert_eq!(glue_count, 2);
    }

    #[test]
    fn single_crossing_tangle_plan() {
        let pd = parse("PD[X(1,4,2,3)]");
        let plan = plan_composition(&pd, false).unwrap();
        assert_eq!(plan.steps.len(), 1);
        assert_eq!(plan.final_boundary.len(), 4);
        // closing an open tangle is refused
        assert!(plan_composition(&pd, true).is_err());
    }

    #[test]
    fn split_link_unplannable() {
        // two disjoint kink unknots share no edges
        let pd = parse("PD[X(1,1,2,2),X(3,3,4,4)]");
        let err = plan_composition(&pd, true).unwrap_err();
        assert!(matches!(err, PlanError::Unplannable(_)));
    }

    #[test]
    fn kink_plan() {
        // the over strand enters at the d corner: a positive kink
        let pd = parse("PD[X(1,1,2,2)]");
        let plan = plan_composition(&pd, true).unwrap();
        assert!(plan.final_boundary.is_empty());
        assert_eq!(plan.analysis.signs, vec![1]);
        // its reflection is negative
        let pd = parse("PD[X(1,2,2,1)]");
        let a = analyze(&pd).unwrap();
        assert_eq!(a.signs, vec![-1]);
    }
}

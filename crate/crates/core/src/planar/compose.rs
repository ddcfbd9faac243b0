//! Horizontal composition along a planar arc diagram: gluing smoothings
//! (with loop signs recovered from the embedding), cobordisms (union-find
//! over glued components with Euler bookkeeping), and complexes (direct sum
//! over degree splittings with the alternating sign rule).

use super::map::{EdgeKind, PlanarMap, Vertex};
use super::{Endpoint, PlanarArcDiagram, PlanarError};
use crate::cobordism::{CobComponent, Cobordism, MorphismCombo};
use crate::complex::{Complex, Matrix};
use crate::scalar::q;
use crate::smoothing::{LoopSign, OrientedSmoothing, PointDir, ShiftedSmoothing, StringId};
use crate::util::UnionFind;
use std::collections::BTreeMap;

/// One piece of a composite string, in traversal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    /// Arc of the diagram, traversed in its oriented direction.
    Arc(usize),
    /// Strand `strand` of the smoothing in input disc `input` (0-based).
    Strand { input: usize, strand: usize },
}

/// Where a loop of the composite smoothing came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopOrigin {
    /// A loop carried over unchanged from an input smoothing.
    Carried { input: usize, loop_idx: usize },
    /// A new loop formed by curls, listed by its pieces.
    New { pieces: Vec<Piece> },
}

/// How the strings of the composite smoothing decompose into input strings
/// and diagram arcs; indices are aligned with the canonical string order of
/// the composite.
#[derive(Debug, Clone)]
pub struct GlueTrace {
    pub strand_pieces: Vec<Vec<Piece>>,
    pub loop_origins: Vec<LoopOrigin>,
}

impl PlanarArcDiagram {
    /// Glues smoothings into the input discs, producing the composite
    /// smoothing and the trace of how its strings were formed.
    pub fn compose_smoothings(
        &self,
        inputs: &[&OrientedSmoothing],
    ) -> Result<(OrientedSmoothing, GlueTrace), PlanarError> {
        self.check_inputs(inputs)?;
        let arc_at = self.arc_lookup();

        let mut visited: Vec<Vec<bool>> =
            inputs.iter().map(|s| vec![false; s.strands().len()]).collect();
        let mut strands: Vec<((usize, usize), Vec<Piece>)> = Vec::new();

        // strands of the composite: walk from each In point of the output
        for q0 in 0..self.output().points() {
            if self.output().dir(q0) != PointDir::In {
                continue;
            }
            let mut pieces = Vec::new();
            let mut cur = Endpoint { circle: 0, point: q0 };
            let end = loop {
                let &(arc_idx, other) = arc_at.get(&cur).expect("matching is perfect");
                pieces.push(Piece::Arc(arc_idx));
                if other.circle == 0 {
                    break other.point;
                }
                let input = other.circle - 1;
                let s = inputs[input];
                let strand_idx = s.strand_at(other.point);
                let (a, b) = s.strands()[strand_idx];
                debug_assert_eq!(a, other.point, "arc must arrive at an In point");
                visited[input][strand_idx] = true;
                pieces.push(Piece::Strand { input, strand: strand_idx });
                cur = Endpoint {
                    circle: other.circle,
                    point: b,
                };
            };
            strands.push(((q0, end), pieces));
        }

        // new loops: cycles among the unvisited strands
        let mut loops: Vec<(LoopSign, LoopOrigin)> = Vec::new();
        let mut cycles: Vec<Vec<Piece>> = Vec::new();
        for input in 0..inputs.len() {
            for strand_idx in 0..inputs[input].strands().len() {
                if visited[input][strand_idx] {
                    continue;
                }
                let mut pieces = vec![Piece::Strand { input, strand: strand_idx }];
                visited[input][strand_idx] = true;
                let (start, mut at) = inputs[input].strands()[strand_idx];
                let mut circle = input + 1;
                loop {
                    let &(arc_idx, other) = arc_at
                        .get(&Endpoint { circle, point: at })
                        .expect("matching is perfect");
                    pieces.push(Piece::Arc(arc_idx));
                    debug_assert_ne!(other.circle, 0, "cycles stay off the output circle");
                    let next_input = other.circle - 1;
                    let s = inputs[next_input];
                    let next_strand = s.strand_at(other.point);
                    if next_input == input && next_strand == strand_idx {
                        debug_assert_eq!(other.point, start);
                        break;
                    }
                    visited[next_input][next_strand] = true;
                    pieces.push(Piece::Strand {
                        input: next_input,
                        strand: next_strand,
                    });
                    let (a, b) = s.strands()[next_strand];
                    debug_assert_eq!(a, other.point);
                    at = b;
                    circle = other.circle;
                }
                cycles.push(pieces);
            }
        }
        if !cycles.is_empty() {
            let aug = self.augmented_map(inputs);
            let outer = aug.face(self.outer_rep());
            for pieces in cycles {
                let sign = cycle_sign(&aug, outer, &pieces);
                loops.push((sign, LoopOrigin::New { pieces }));
            }
        }
        // carried loops keep their signs
        for (input, s) in inputs.iter().enumerate() {
            for (loop_idx, &sign) in s.loops().iter().enumerate() {
                loops.push((sign, LoopOrigin::Carried { input, loop_idx }));
            }
        }

        strands.sort_by_key(|(pair, _)| *pair);
        loops.sort_by_key(|(sign, _)| *sign);
        let strand_pairs: Vec<(usize, usize)> = strands.iter().map(|(p, _)| *p).collect();
        let loop_signs: Vec<LoopSign> = loops.iter().map(|(s, _)| *s).collect();
        let composite =
            OrientedSmoothing::with_boundary(self.output(), &strand_pairs, &loop_signs)
                .map_err(|e| {
                    PlanarError::BadSpec(format!("glued smoothing failed validation: {e}"))
                })?;
        let trace = GlueTrace {
            strand_pieces: strands.into_iter().map(|(_, p)| p).collect(),
            loop_origins: loops.into_iter().map(|(_, o)| o).collect(),
        };
        Ok((composite, trace))
    }

    /// Glues cobordism combinations along the diagram. Components sharing a
    /// glued string merge; Euler characteristics add, plus one per arc strip
    /// minus one per glued input endpoint; dots add.
    pub fn compose_cobordisms(
        &self,
        inputs: &[&MorphismCombo],
    ) -> Result<MorphismCombo, PlanarError> {
        let sources: Vec<&OrientedSmoothing> = inputs.iter().map(|m| m.source()).collect();
        let targets: Vec<&OrientedSmoothing> = inputs.iter().map(|m| m.target()).collect();
        let (src, src_trace) = self.compose_smoothings(&sources)?;
        let (tgt, tgt_trace) = self.compose_smoothings(&targets)?;
        let mut result = MorphismCombo::zero(src.clone(), tgt.clone());
        if inputs.iter().any(|m| m.is_zero()) {
            return Ok(result);
        }

        let term_lists: Vec<Vec<(&Cobordism, &crate::scalar::Q)>> =
            inputs.iter().map(|m| m.terms().collect()).collect();
        let mut index = vec![0usize; inputs.len()];
        loop {
            let tuple: Vec<&Cobordism> = index
                .iter()
                .enumerate()
                .map(|(i, &t)| term_lists[i][t].0)
                .collect();
            let mut coeff = q(1);
            for (i, &t) in index.iter().enumerate() {
                coeff *= term_lists[i][t].1;
            }
            let cob = self.glue_term(&src, &tgt, &src_trace, &tgt_trace, &tuple)?;
            result = result.add(&MorphismCombo::from_terms(
                src.clone(),
                tgt.clone(),
                vec![(cob, coeff)],
            ));
            // odometer over the term lists
            let mut slot = 0;
            loop {
                if slot == index.len() {
                    return Ok(result.normalize());
                }
                index[slot] += 1;
                if index[slot] < term_lists[slot].len() {
                    break;
                }
                index[slot] = 0;
                slot += 1;
            }
        }
    }

    /// The composite complex: objects are all composites of object tuples
    /// (shifts added), grouped by total homological degree; the differential
    /// applies each factor's differential with the sign `(-1)^(r_1+..+r_{i-1})`.
    pub fn compose_complexes(&self, factors: &[&Complex]) -> Result<Complex, PlanarError> {
        if factors.len() != self.input_count() {
            return Err(PlanarError::BoundaryMismatch(format!(
                "diagram takes {} inputs, got {}",
                self.input_count(),
                factors.len()
            )));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.boundary() != self.inputs()[i] {
                return Err(PlanarError::BoundaryMismatch(format!(
                    "input {i} has boundary {:?}, diagram expects {:?}",
                    f.boundary(),
                    self.inputs()[i]
                )));
            }
            if f.is_empty() {
                return Ok(Complex::zero(self.output()));
            }
        }
        // enumerate object positions per factor
        let positions: Vec<Vec<(i64, usize)>> = factors
            .iter()
            .map(|f| {
                f.degrees()
                    .flat_map(|r| (0..f.objects_at(r).len()).map(move |i| (r, i)))
                    .collect()
            })
            .collect();
        let mut tuples: Vec<Vec<(i64, usize)>> = vec![Vec::new()];
        for opts in &positions {
            let mut next = Vec::with_capacity(tuples.len() * opts.len());
            for t in &tuples {
                for &o in opts {
                    let mut t2 = t.clone();
                    t2.push(o);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        // group by total degree, ordered major-to-minor by the last factor
        let mut by_degree: BTreeMap<i64, Vec<Vec<(i64, usize)>>> = BTreeMap::new();
        for t in tuples {
            let r: i64 = t.iter().map(|(r, _)| *r).sum();
            by_degree.entry(r).or_default().push(t);
        }
        for list in by_degree.values_mut() {
            list.sort_by_key(|t| t.iter().rev().cloned().collect::<Vec<_>>());
        }
        let r_lo = *by_degree.keys().next().expect("factors are nonempty");
        let r_hi = *by_degree.keys().last().unwrap();

        // composite objects
        let mut objects: Vec<Vec<ShiftedSmoothing>> = Vec::new();
        let mut composite_of: BTreeMap<Vec<(i64, usize)>, OrientedSmoothing> = BTreeMap::new();
        for r in r_lo..=r_hi {
            let mut vec_r = Vec::new();
            for t in by_degree.get(&r).into_iter().flatten() {
                let smoothings: Vec<&OrientedSmoothing> = t
                    .iter()
                    .enumerate()
                    .map(|(i, &(ri, idx))| &factors[i].objects_at(ri)[idx].smoothing)
                    .collect();
                let (composite, _) = self.compose_smoothings(&smoothings)?;
                let shift: i64 = t
                    .iter()
                    .enumerate()
                    .map(|(i, &(ri, idx))| factors[i].objects_at(ri)[idx].shift)
                    .sum();
                composite_of.insert(t.clone(), composite.clone());
                vec_r.push(ShiftedSmoothing::new(composite, shift));
            }
            objects.push(vec_r);
        }

        // identity combos per factor object, built once
        let identities: Vec<BTreeMap<(i64, usize), MorphismCombo>> = factors
            .iter()
            .map(|f| {
                f.degrees()
                    .flat_map(|r| {
                        (0..f.objects_at(r).len()).map(move |i| {
                            (
                                (r, i),
                                MorphismCombo::identity(&f.objects_at(r)[i].smoothing),
                            )
                        })
                    })
                    .collect()
            })
            .collect();

        let empty: Vec<Vec<(i64, usize)>> = Vec::new();
        let mut diffs: Vec<Matrix> = Vec::new();
        for r in r_lo..r_hi {
            let rows_tuples = by_degree.get(&(r + 1)).unwrap_or(&empty);
            let cols_tuples = by_degree.get(&r).unwrap_or(&empty);
            let mut matrix: Matrix = Vec::with_capacity(rows_tuples.len());
            for row_t in rows_tuples {
                let mut row = Vec::with_capacity(cols_tuples.len());
                for col_t in cols_tuples {
                    row.push(self.compose_diff_entry(
                        factors,
                        &identities,
                        &composite_of,
                        col_t,
                        row_t,
                    )?);
                }
                matrix.push(row);
            }
            diffs.push(matrix);
        }

        let composite = Complex::new(self.output(), r_lo, objects, diffs)
            .map_err(|e| PlanarError::BadSpec(format!("composite complex ill-formed: {e}")))?;
        let violations = composite.validate();
        if !violations.is_empty() {
            return Err(PlanarError::BadSpec(format!(
                "composite complex failed validation: {}",
                violations.join("; ")
            )));
        }
        Ok(composite)
    }

    fn compose_diff_entry(
        &self,
        factors: &[&Complex],
        identities: &[BTreeMap<(i64, usize), MorphismCombo>],
        composite_of: &BTreeMap<Vec<(i64, usize)>, OrientedSmoothing>,
        col_t: &[(i64, usize)],
        row_t: &[(i64, usize)],
    ) -> Result<MorphismCombo, PlanarError> {
        let zero = || {
            MorphismCombo::zero(
                composite_of[col_t].clone(),
                composite_of[row_t].clone(),
            )
        };
        // the tuples must agree except in one slot advancing by one degree
        let mut active = None;
        for i in 0..col_t.len() {
            if col_t[i] != row_t[i] {
                if active.is_some() {
                    return Ok(zero());
                }
                active = Some(i);
            }
        }
        let Some(i) = active else { return Ok(zero()) };
        let (r_i, a_idx) = col_t[i];
        let (r_i2, b_idx) = row_t[i];
        if r_i2 != r_i + 1 {
            return Ok(zero());
        }
        let entry = &factors[i].diff_at(r_i).expect("within amplitude")[b_idx][a_idx];
        if entry.is_zero() {
            return Ok(zero());
        }
        let slot_combos: Vec<&MorphismCombo> = (0..col_t.len())
            .map(|j| {
                if j == i {
                    entry
                } else {
                    &identities[j][&col_t[j]]
                }
            })
            .collect();
        let glued = self.compose_cobordisms(&slot_combos)?;
        let sign: i64 = col_t[..i].iter().map(|(r, _)| *r).sum();
        Ok(if sign.rem_euclid(2) == 1 {
            glued.scale(&q(-1))
        } else {
            glued
        })
    }

    fn check_inputs(&self, inputs: &[&OrientedSmoothing]) -> Result<(), PlanarError> {
        if inputs.len() != self.input_count() {
            return Err(PlanarError::BoundaryMismatch(format!(
                "diagram takes {} inputs, got {}",
                self.input_count(),
                inputs.len()
            )));
        }
        for (i, s) in inputs.iter().enumerate() {
            if s.boundary() != self.inputs()[i] {
                return Err(PlanarError::BoundaryMismatch(format!(
                    "input {i} has boundary {:?}, diagram expects {:?}",
                    s.boundary(),
                    self.inputs()[i]
                )));
            }
        }
        Ok(())
    }

    fn arc_lookup(&self) -> BTreeMap<Endpoint, (usize, Endpoint)> {
        let mut map = BTreeMap::new();
        for (idx, &(a, b)) in self.arcs().iter().enumerate() {
            map.insert(a, (idx, b));
            map.insert(b, (idx, a));
        }
        map
    }

    /// The half-edge map extended with the strands of the placed smoothings.
    fn augmented_map(&self, inputs: &[&OrientedSmoothing]) -> PlanarMap {
        let mut circle_points = vec![self.output().points()];
        circle_points.extend(self.inputs().iter().map(|c| c.points()));
        let map_arcs: Vec<(Vertex, Vertex)> = self
            .arcs()
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
        let mut strands = Vec::new();
        for (i, s) in inputs.iter().enumerate() {
            for (idx, &(a, b)) in s.strands().iter().enumerate() {
                strands.push((i + 1, (a, b), idx));
            }
        }
        PlanarMap::build(&circle_points, &map_arcs, &strands)
    }

    /// One raw glued cobordism for a tuple of single terms.
    fn glue_term(
        &self,
        src: &OrientedSmoothing,
        tgt: &OrientedSmoothing,
        src_trace: &GlueTrace,
        tgt_trace: &GlueTrace,
        tuple: &[&Cobordism],
    ) -> Result<Cobordism, PlanarError> {
        let arc_count = self.arcs().len();
        let comp_offsets: Vec<usize> = tuple
            .iter()
            .scan(0usize, |acc, t| {
                let here = *acc;
                *acc += t.components().len();
                Some(here)
            })
            .collect();
        let total_comps: usize = tuple.iter().map(|t| t.components().len()).sum();
        let arc_base = total_comps;
        let mut uf = UnionFind::new(total_comps + arc_count);

        let comp_of_bottom = |input: usize, id: StringId| -> usize {
            comp_offsets[input]
                + tuple[input]
                    .components()
                    .iter()
                    .position(|c| c.bottom.contains(&id))
                    .expect("string belongs to a component")
        };
        let comp_of_top = |input: usize, id: StringId| -> usize {
            comp_offsets[input]
                + tuple[input]
                    .components()
                    .iter()
                    .position(|c| c.top.contains(&id))
                    .expect("string belongs to a component")
        };

        for (arc_idx, &(a, b)) in self.arcs().iter().enumerate() {
            for e in [a, b] {
                if e.circle == 0 {
                    continue;
                }
                let input = e.circle - 1;
                let strand = tuple[input].source().strand_at(e.point);
                uf.union(
                    arc_base + arc_idx,
                    comp_of_bottom(input, StringId::Strand(strand)),
                );
            }
        }

        // class statistics
        let mut euler: BTreeMap<usize, i64> = BTreeMap::new();
        let mut dots: BTreeMap<usize, u32> = BTreeMap::new();
        for (input, t) in tuple.iter().enumerate() {
            for (ci, comp) in t.components().iter().enumerate() {
                let root = uf.find(comp_offsets[input] + ci);
                *euler.entry(root).or_insert(0) += comp.euler;
                *dots.entry(root).or_insert(0) += comp.dots;
            }
        }
        for (arc_idx, &(a, b)) in self.arcs().iter().enumerate() {
            let root = uf.find(arc_base + arc_idx);
            let glued_ends = [a, b].iter().filter(|e| e.circle > 0).count() as i64;
            *euler.entry(root).or_insert(0) += 1 - glued_ends;
        }

        // assign composite strings to classes
        let piece_class_bottom = |uf: &mut UnionFind, piece: &Piece| -> usize {
            match piece {
                Piece::Arc(a) => uf.find(arc_base + a),
                Piece::Strand { input, strand } => {
                    uf.find(comp_of_bottom(*input, StringId::Strand(*strand)))
                }
            }
        };
        let piece_class_top = |uf: &mut UnionFind, piece: &Piece| -> usize {
            match piece {
                Piece::Arc(a) => uf.find(arc_base + a),
                Piece::Strand { input, strand } => {
                    uf.find(comp_of_top(*input, StringId::Strand(*strand)))
                }
            }
        };
        let mut bottom_strings: BTreeMap<usize, Vec<StringId>> = BTreeMap::new();
        let mut top_strings: BTreeMap<usize, Vec<StringId>> = BTreeMap::new();
        for (idx, pieces) in src_trace.strand_pieces.iter().enumerate() {
            let class = piece_class_bottom(&mut uf, &pieces[0]);
            bottom_strings
                .entry(class)
                .or_default()
                .push(StringId::Strand(idx));
        }
        for (idx, origin) in src_trace.loop_origins.iter().enumerate() {
            let class = match origin {
                LoopOrigin::Carried { input, loop_idx } => {
                    uf.find(comp_of_bottom(*input, StringId::Loop(*loop_idx)))
                }
                LoopOrigin::New { pieces } => piece_class_bottom(&mut uf, &pieces[0]),
            };
            bottom_strings
                .entry(class)
                .or_default()
                .push(StringId::Loop(idx));
        }
        for (idx, pieces) in tgt_trace.strand_pieces.iter().enumerate() {
            let class = piece_class_top(&mut uf, &pieces[0]);
            top_strings
                .entry(class)
                .or_default()
                .push(StringId::Strand(idx));
        }
        for (idx, origin) in tgt_trace.loop_origins.iter().enumerate() {
            let class = match origin {
                LoopOrigin::Carried { input, loop_idx } => {
                    uf.find(comp_of_top(*input, StringId::Loop(*loop_idx)))
                }
                LoopOrigin::New { pieces } => piece_class_top(&mut uf, &pieces[0]),
            };
            top_strings
                .entry(class)
                .or_default()
                .push(StringId::Loop(idx));
        }

        let mut classes: std::collections::BTreeSet<usize> = euler.keys().copied().collect();
        classes.extend(bottom_strings.keys());
        classes.extend(top_strings.keys());
        let comps: Vec<CobComponent> = classes
            .into_iter()
            .map(|root| {
                CobComponent::new(
                    bottom_strings.remove(&root).unwrap_or_default(),
                    top_strings.remove(&root).unwrap_or_default(),
                    euler.get(&root).copied().unwrap_or(0),
                    dots.get(&root).copied().unwrap_or(0),
                )
            })
            .collect();
        Cobordism::new(src.clone(), tgt.clone(), comps)
            .map_err(|e| PlanarError::BadSpec(format!("glued cobordism invalid: {e}")))
    }
}

/// Orientation of a newly formed loop: positive when the face on the left of
/// the traversal lies inside the loop.
fn cycle_sign(aug: &PlanarMap, outer_face: usize, pieces: &[Piece]) -> LoopSign {
    let arcs: std::collections::BTreeSet<usize> = pieces
        .iter()
        .filter_map(|p| match p {
            Piece::Arc(a) => Some(*a),
            _ => None,
        })
        .collect();
    let strands: std::collections::BTreeSet<(usize, usize)> = pieces
        .iter()
        .filter_map(|p| match p {
            Piece::Strand { input, strand } => Some((*input + 1, *strand)),
            _ => None,
        })
        .collect();
    let on_curve = |kind: EdgeKind| -> bool {
        match kind {
            EdgeKind::Arc(a) => arcs.contains(&a),
            EdgeKind::Strand { disc, idx } => strands.contains(&(disc, idx)),
            EdgeKind::Segment => false,
        }
    };
    let sides = aug.sides_relative_to(&on_curve);
    let first_arc = pieces
        .iter()
        .find_map(|p| match p {
            Piece::Arc(a) => Some(*a),
            _ => None,
        })
        .expect("a closed cycle uses at least one arc");
    let left_face = aug.face(aug.arc_halfedge(first_arc));
    if sides[left_face] == sides[outer_face] {
        LoopSign::Neg
    } else {
        LoopSign::Pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn rotation_of(d: &PlanarArcDiagram, inputs: &[&OrientedSmoothing]) -> Q {
        let (composite, _) = d.compose_smoothings(inputs).unwrap();
        composite.rotation_number()
    }

    #[test]
    fn identity_diagram_returns_input() {
        let d = PlanarArcDiagram::identity(2);
        let s = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        let (c, trace) = d.compose_smoothings(&[&s]).unwrap();
        assert_eq!(c, s);
        assert_eq!(trace.strand_pieces.len(), 2);
    }

    #[test]
    fn positive_curl_completes_positive_loop() {
        // closure of the second smoothing of the negative-crossing complex
        // over a positive curl: one strand plus one counterclockwise loop
        let u1 = PlanarArcDiagram::unary_basic(2, 1, LoopSign::Pos).unwrap();
        let s = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        let (c, _) = u1.compose_smoothings(&[&s]).unwrap();
        assert_eq!(c.strands().len(), 1);
        assert_eq!(c.loops(), &[LoopSign::Pos]);
        assert_eq!(c.rotation_number(), q(1));
        // and the source smoothing just bends into a single strand
        let a = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let (ca, _) = u1.compose_smoothings(&[&a]).unwrap();
        assert_eq!(ca.strands().len(), 1);
        assert!(ca.loops().is_empty());
        assert_eq!(ca.rotation_number(), q(0));
    }

    #[test]
    fn negative_curl_completes_negative_loop() {
        let u = PlanarArcDiagram::unary_basic(2, 0, LoopSign::Neg).unwrap();
        let a = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let (c, _) = u.compose_smoothings(&[&a]).unwrap();
        assert_eq!(c.loops(), &[LoopSign::Neg]);
        assert_eq!(c.rotation_number(), q(-1));
    }

    #[test]
    fn rotation_additivity_on_basics() {
        // Every composition satisfies R(D(s)) = R_D + sum R(s_i)
        for (k, p, sign) in [
            (2usize, 0usize, LoopSign::Neg),
            (2, 1, LoopSign::Pos),
            (2, 2, LoopSign::Neg),
            (2, 3, LoopSign::Pos),
            (3, 0, LoopSign::Neg),
            (3, 5, LoopSign::Pos),
        ] {
            let d = PlanarArcDiagram::unary_basic(k, p, sign).unwrap();
            let r_d = d.classify().r_d;
            for s in OrientedSmoothing::enumerate_loopless(crate::smoothing::BoundaryConfig::new(k))
            {
                let total = rotation_of(&d, &[&s]);
                assert_eq!(
                    total,
                    r_d.clone() + s.rotation_number(),
                    "k={k} p={p} smoothing={s}"
                );
            }
        }
    }

    #[test]
    fn binary_rotation_additivity() {
        let d = PlanarArcDiagram::binary_basic(2, 2, 1, 2).unwrap();
        let r_d = d.classify().r_d;
        assert_eq!(r_d, q(0));
        let all = OrientedSmoothing::enumerate_loopless(crate::smoothing::BoundaryConfig::new(2));
        for s1 in &all {
            for s2 in &all {
                let total = rotation_of(&d, &[s1, s2]);
                assert_eq!(
                    total,
                    r_d.clone() + s1.rotation_number() + s2.rotation_number()
                );
            }
        }
    }

    #[test]
    fn full_closure_signs() {
        let strand = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let pos = PlanarArcDiagram::unary_basic(1, 1, LoopSign::Pos).unwrap();
        let (c, _) = pos.compose_smoothings(&[&strand]).unwrap();
        assert_eq!(c.loops(), &[LoopSign::Pos]);
        let neg = PlanarArcDiagram::unary_basic(1, 0, LoopSign::Neg).unwrap();
        let (c, _) = neg.compose_smoothings(&[&strand]).unwrap();
        assert_eq!(c.loops(), &[LoopSign::Neg]);
    }

    #[test]
    fn identity_cobordisms_compose_to_identity() {
        let d = PlanarArcDiagram::binary_basic(2, 1, 1, 0).unwrap();
        let s1 = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let s2 = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let id1 = MorphismCombo::identity(&s1);
        let id2 = MorphismCombo::identity(&s2);
        let glued = d.compose_cobordisms(&[&id1, &id2]).unwrap();
        let (composite, _) = d.compose_smoothings(&[&s1, &s2]).unwrap();
        assert_eq!(glued, MorphismCombo::identity(&composite));
    }

    #[test]
    fn degree_additive_under_composition() {
        use crate::cobordism::elementary::saddle;
        use crate::cobordism::DegreeCheck;
        let d = PlanarArcDiagram::binary_basic(2, 2, 1, 2).unwrap();
        let a = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let b = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        let sdl = saddle(
            &a,
            &b,
            &[StringId::Strand(0), StringId::Strand(1)],
            &[StringId::Strand(0), StringId::Strand(1)],
        )
        .unwrap();
        let ida = MorphismCombo::identity(&a);
        let glued = d.compose_cobordisms(&[&sdl, &ida]).unwrap();
        // deg(saddle) = -1, deg(identity) = 0
        assert!(matches!(glued.degree(0, 0), DegreeCheck::Homogeneous(-1)));
    }

    #[test]
    fn crossing_composite_with_itself_has_valid_complex() {
        use crate::complex::DiagonalCheck;
        let omega = crate::complex::tests::negative_crossing();
        let d = PlanarArcDiagram::binary_basic(2, 2, 1, 2).unwrap();
        let comp = d.compose_complexes(&[&omega, &omega]).unwrap();
        assert!(comp.validate().is_empty());
        assert_eq!(comp.object_count(), 4);
        // two diagonal complexes with constants 1/2 compose to constant 1
        assert_eq!(comp.is_diagonal(), DiagonalCheck::Constant(q(1)));
    }

    #[test]
    fn closure_of_crossing_reduces_like_worked_example() {
        use crate::complex::DiagonalCheck;
        let omega = crate::complex::tests::negative_crossing();
        let u1 = PlanarArcDiagram::unary_basic(2, 1, LoopSign::Pos).unwrap();
        let closed = u1.compose_complexes(&[&omega]).unwrap();
        assert!(closed.validate().is_empty());
        // the closure is diagonal with constant C - R_U = 1/2 - 1/2 = 0
        assert_eq!(closed.is_diagonal(), DiagonalCheck::Constant(q(0)));
        let reduced = closed.reduce();
        assert_eq!(reduced.object_count(), 1);
        assert_eq!(reduced.r_min(), 0);
        assert_eq!(reduced.objects_at(0)[0].shift, 0);
        assert_eq!(reduced.is_diagonal(), DiagonalCheck::Constant(q(0)));
    }
}

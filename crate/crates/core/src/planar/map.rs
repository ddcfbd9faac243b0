//! Combinatorial embeddings of arc diagrams: a half-edge map over the
//! boundary circles, the connecting arcs, and (optionally) the strands of
//! smoothings placed in the input discs. Faces are orbits of the
//! face-tracing permutation; the tracing keeps the face on the left of each
//! half-edge.

use crate::util::UnionFind;

/// A vertex is a marked point on one of the circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    /// Circle index: 0 is the output circle, `1..=d` are input discs.
    pub circle: usize,
    pub point: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Circle segment from `point` to `point + 1` on its circle.
    Segment,
    /// Connecting arc in the annular region, with its index.
    Arc(usize),
    /// Strand of a placed smoothing inside an input disc, with its index
    /// within that disc's strand list.
    Strand { disc: usize, idx: usize },
}

#[derive(Debug, Clone)]
struct Edge {
    from: Vertex,
    to: Vertex,
    kind: EdgeKind,
}

pub type HalfEdge = usize;

/// Half-edge map with fixed rotations. Circles with no marked points are
/// not represented; the caller accounts for them separately.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    edges: Vec<Edge>,
    /// rotation[v] = outgoing half-edges in counterclockwise order
    rotations: Vec<Vec<HalfEdge>>,
    vertex_ids: std::collections::BTreeMap<Vertex, usize>,
    /// face id of each half-edge
    face_of: Vec<usize>,
    face_count: usize,
}

impl PlanarMap {
    /// Builds the map. `circle_points[c]` is the number of marked points on
    /// circle `c`; arcs and strands are given by endpoint vertices. Strand
    /// edges attach on the inner side of input circles, arcs on the
    /// annular side.
    pub fn build(
        circle_points: &[usize],
        arcs: &[(Vertex, Vertex)],
        strands: &[(usize, (usize, usize), usize)],
    ) -> Self {
        let mut vertex_ids = std::collections::BTreeMap::new();
        for (c, &n) in circle_points.iter().enumerate() {
            for p in 0..n {
                let id = vertex_ids.len();
                vertex_ids.insert(Vertex { circle: c, point: p }, id);
            }
        }
        let mut edges = Vec::new();
        // segments first, ordered by circle then start point
        for (c, &n) in circle_points.iter().enumerate() {
            for p in 0..n {
                edges.push(Edge {
                    from: Vertex { circle: c, point: p },
                    to: Vertex {
                        circle: c,
                        point: (p + 1) % n,
                    },
                    kind: EdgeKind::Segment,
                });
            }
        }
        // then arcs, then strands, so edge ids are stable when strands are
        // appended to a previously built map
        for (i, &(a, b)) in arcs.iter().enumerate() {
            edges.push(Edge {
                from: a,
                to: b,
                kind: EdgeKind::Arc(i),
            });
        }
        for &(disc, (p, p2), idx) in strands {
            edges.push(Edge {
                from: Vertex {
                    circle: disc,
                    point: p,
                },
                to: Vertex {
                    circle: disc,
                    point: p2,
                },
                kind: EdgeKind::Strand { disc, idx },
            });
        }

        // rotations: at an output point, counterclockwise order is
        // (next segment, arc, prev segment); at an input point it is
        // (arc, next segment, strand, prev segment)
        let mut rotations = vec![Vec::new(); vertex_ids.len()];
        let mut next_seg = vec![0; vertex_ids.len()];
        let mut prev_seg = vec![0; vertex_ids.len()];
        let mut arc_at = vec![None; vertex_ids.len()];
        let mut strand_at = vec![None; vertex_ids.len()];
        for (e, edge) in edges.iter().enumerate() {
            let from = vertex_ids[&edge.from];
            let to = vertex_ids[&edge.to];
            match edge.kind {
                EdgeKind::Segment => {
                    next_seg[from] = 2 * e;
                    prev_seg[to] = 2 * e + 1;
                }
                EdgeKind::Arc(_) => {
                    arc_at[from] = Some(2 * e);
                    arc_at[to] = Some(2 * e + 1);
                }
                EdgeKind::Strand { .. } => {
                    strand_at[from] = Some(2 * e);
                    strand_at[to] = Some(2 * e + 1);
                }
            }
        }
        let mut vertices = vec![Vertex { circle: 0, point: 0 }; vertex_ids.len()];
        for (vx, &id) in &vertex_ids {
            vertices[id] = *vx;
        }
        for (v, rot) in rotations.iter_mut().enumerate() {
            let vertex = vertices[v];
            let arc = arc_at[v].expect("every marked point carries exactly one arc");
            if vertex.circle == 0 {
                rot.push(next_seg[v]);
                rot.push(arc);
                rot.push(prev_seg[v]);
            } else {
                rot.push(arc);
                rot.push(next_seg[v]);
                if let Some(s) = strand_at[v] {
                    rot.push(s);
                }
                rot.push(prev_seg[v]);
            }
        }

        let mut map = Self {
            edges,
            rotations,
            vertex_ids,
            face_of: Vec::new(),
            face_count: 0,
        };
        map.trace_faces();
        map
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn twin(h: HalfEdge) -> HalfEdge {
        h ^ 1
    }

    fn origin(&self, h: HalfEdge) -> usize {
        let e = &self.edges[h / 2];
        if h % 2 == 0 {
            self.vertex_ids[&e.from]
        } else {
            self.vertex_ids[&e.to]
        }
    }


    /// Half-edge of the segment starting at `(circle, point)` toward the
    /// next point.
    pub fn segment_halfedge(&self, circle: usize, point: usize) -> HalfEdge {
        let e = self
            .edges
            .iter()
            .position(|edge| {
                matches!(edge.kind, EdgeKind::Segment)
                    && edge.from == Vertex { circle, point }
            })
            .expect("segment exists");
        2 * e
    }

    /// Half-edge of arc `idx` oriented from its stored first endpoint.
    pub fn arc_halfedge(&self, idx: usize) -> HalfEdge {
        let e = self
            .edges
            .iter()
            .position(|edge| matches!(edge.kind, EdgeKind::Arc(i) if i == idx))
            .expect("arc exists");
        2 * e
    }


    /// Face on the left of the half-edge.
    pub fn face(&self, h: HalfEdge) -> usize {
        self.face_of[h]
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// In-face successor: the predecessor of the twin in the rotation at the
    /// twin's origin. Tracing keeps the face on the left.
    fn next_in_face(&self, h: HalfEdge) -> HalfEdge {
        let t = Self::twin(h);
        let v = self.origin(t);
        let rot = &self.rotations[v];
        let pos = rot
            .iter()
            .position(|&x| x == t)
            .expect("half-edge in rotation");
        rot[(pos + rot.len() - 1) % rot.len()]
    }

    fn trace_faces(&mut self) {
        let n = self.half_edge_count();
        self.face_of = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            loop {
                self.face_of[h] = count;
                h = self.next_in_face(h);
                if h == start {
                    break;
                }
            }
            count += 1;
        }
        self.face_count = count;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True if the underlying graph is connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_ids.is_empty() {
            return true;
        }
        let mut uf = UnionFind::new(self.vertex_ids.len());
        for e in &self.edges {
            uf.union(self.vertex_ids[&e.from], self.vertex_ids[&e.to]);
        }
        uf.class_count() == 1
    }

    /// Genus from the Euler formula; 0 means the rotation system embeds in
    /// the sphere, which for our diagrams means the arcs are non-crossing.
    pub fn genus(&self) -> i64 {
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count as i64;
        (2 - (v - e + f)) / 2
    }


    /// Partition of the faces into the two sides of a closed curve formed by
    /// the given edges (arc indices and strand keys). Faces are joined when
    /// they share an edge not on the curve. Returns the side-class of each
    /// face.
    pub fn sides_relative_to(&self, on_curve: &dyn Fn(EdgeKind) -> bool) -> Vec<usize> {
        let mut uf = UnionFind::new(self.face_count);
        for (e, edge) in self.edges.iter().enumerate() {
            if on_curve(edge.kind) {
                continue;
            }
            let f1 = self.face_of[2 * e];
            let f2 = self.face_of[2 * e + 1];
            uf.union(f1, f2);
        }
        (0..self.face_count).map(|f| uf.find(f)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radial_identity(k: usize) -> PlanarMap {
        // 1-input diagram: input disc with 2k points connected radially to
        // 2k output points
        let arcs: Vec<(Vertex, Vertex)> = (0..2 * k)
            .map(|p| {
                (
                    Vertex { circle: 0, point: p },
                    Vertex { circle: 1, point: p },
                )
            })
            .collect();
        PlanarMap::build(&[2 * k, 2 * k], &arcs, &[])
    }

    #[test]
    fn radial_identity_faces() {
        for k in 1..=3 {
            let m = radial_identity(k);
            // 2k sectors + disc interior + outer region
            assert_eq!(m.face_count(), 2 * k + 2);
            assert_eq!(m.genus(), 0);
            assert!(m.is_connected());
        }
    }

    #[test]
    fn rotated_radial_arcs_stay_planar() {
        // with only two points per circle the "swap" slides around the
        // annulus without crossing
        let arcs = vec![
            (
                Vertex { circle: 0, point: 0 },
                Vertex { circle: 1, point: 1 },
            ),
            (
                Vertex { circle: 0, point: 1 },
                Vertex { circle: 1, point: 0 },
            ),
        ];
        let m = PlanarMap::build(&[2, 2], &arcs, &[]);
        assert_eq!(m.genus(), 0);
    }

    #[test]
    fn crossing_arcs_have_positive_genus() {
        // radial arcs at points 2 and 3 wall off the annulus; swapping the
        // arcs at points 0 and 1 then forces a crossing
        let arcs = vec![
            (
                Vertex { circle: 0, point: 0 },
                Vertex { circle: 1, point: 1 },
            ),
            (
                Vertex { circle: 0, point: 1 },
                Vertex { circle: 1, point: 0 },
            ),
            (
                Vertex { circle: 0, point: 2 },
                Vertex { circle: 1, point: 2 },
            ),
            (
                Vertex { circle: 0, point: 3 },
                Vertex { circle: 1, point: 3 },
            ),
        ];
        let m = PlanarMap::build(&[4, 4], &arcs, &[]);
        assert!(m.genus() > 0);
    }

    #[test]
    fn disc_face_is_single_orbit() {
        let m = radial_identity(2);
        // the inner side of the input circle: all four inner segment
        // half-edges share one face
        let f = m.face(m.segment_halfedge(1, 0));
        for p in 1..4 {
            assert_eq!(m.face(m.segment_halfedge(1, p)), f);
        }
        // and the outer side of the output circle is one face
        let out = m.face(PlanarMap::twin(m.segment_halfedge(0, 0)));
        for p in 1..4 {
            assert_eq!(m.face(PlanarMap::twin(m.segment_halfedge(0, p))), out);
        }
        assert_ne!(f, out);
    }

    #[test]
    fn closure_map_faces() {
        // one input disc with two points joined by a curl, no output points
        let arcs = vec![(
            Vertex { circle: 1, point: 1 },
            Vertex { circle: 1, point: 0 },
        )];
        let m = PlanarMap::build(&[0, 2], &arcs, &[]);
        assert_eq!(m.face_count(), 3);
        assert_eq!(m.genus(), 0);
    }
}

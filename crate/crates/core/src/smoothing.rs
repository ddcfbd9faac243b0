//! Oriented planar smoothings: non-crossing matchings of boundary points
//! together with signed loops, and their rotation numbers.
//!
//! Boundary points are labeled `0..2k-1` counterclockwise. Orientations
//! alternate around the circle; by default point `0` is an `In` point
//! (the strand at an `In` point is directed into the disk).

use crate::scalar::{q, Q};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Orientation flag of a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PointDir {
    /// The strand enters the disk at this point.
    In,
    /// The strand leaves the disk at this point.
    Out,
}

impl PointDir {
    pub fn flip(self) -> Self {
        match self {
            PointDir::In => PointDir::Out,
            PointDir::Out => PointDir::In,
        }
    }
}

/// A circle with `2k` alternately oriented marked points.
///
/// Only the phase (whether point 0 is `In`) is stored; the rest of the
/// flags follow by alternation. For `k = 0` the phase is normalized to
/// `In` so empty boundaries compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoundaryConfig {
    k: usize,
    point0_in: bool,
}

impl BoundaryConfig {
    pub fn new(k: usize) -> Self {
        Self { k, point0_in: true }
    }

    pub fn with_phase(k: usize, point0_in: bool) -> Self {
        Self {
            k,
            point0_in: point0_in || k == 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> usize {
        2 * self.k
    }

    pub fn point0_in(&self) -> bool {
        self.point0_in
    }

    pub fn dir(&self, p: usize) -> PointDir {
        debug_assert!(p < self.points());
        if (p % 2 == 0) == self.point0_in {
            PointDir::In
        } else {
            PointDir::Out
        }
    }

    /// The mirrored configuration (labels reversed `p -> 2k-1-p`).
    pub fn mirrored(&self) -> Self {
        if self.k == 0 {
            *self
        } else {
            // old point 2k-1 becomes the new point 0 and keeps its flag
            Self::with_phase(self.k, self.dir(2 * self.k - 1) == PointDir::In)
        }
    }
}

/// Sign of a closed loop: counterclockwise is positive.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum LoopSign {
    Pos,
    Neg,
}

impl LoopSign {
    pub fn rotation(&self) -> i64 {
        match self {
            LoopSign::Pos => 1,
            LoopSign::Neg => -1,
        }
    }

    pub fn flip(&self) -> Self {
        match self {
            LoopSign::Pos => LoopSign::Neg,
            LoopSign::Neg => LoopSign::Pos,
        }
    }
}

impl fmt::Display for LoopSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSign::Pos => write!(f, "+1"),
            LoopSign::Neg => write!(f, "-1"),
        }
    }
}

/// Identifier of a string (strand or loop) within a smoothing.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum StringId {
    Strand(usize),
    Loop(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmoothingError {
    #[error("strand pairs do not form a perfect matching of the boundary points")]
    NotPerfectMatching,
    #[error("strand pairs {0:?} and {1:?} cross")]
    CrossingMatching((usize, usize), (usize, usize)),
    #[error("strand {0:?} does not run from an In point to an Out point")]
    BadOrientation((usize, usize)),
    #[error("strand {0:?} not found in the smoothing")]
    StrandNotFound((usize, usize)),
}

/// A crossingless oriented 1-manifold in the disk: a non-crossing perfect
/// matching of the boundary points (each strand directed In -> Out) plus a
/// multiset of signed loops. Loop positions are not recorded; everything
/// downstream depends only on connectivity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrientedSmoothing {
    boundary: BoundaryConfig,
    /// Sorted by start point; each pair is (In point, Out point).
    strands: Vec<(usize, usize)>,
    /// Sorted: positive loops first.
    loops: Vec<LoopSign>,
}

/// Two chords of a circle cross iff their endpoints interleave.
fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let between = |x: usize| a0 < x && x < a1;
    between(b.0) != between(b.1)
}

impl OrientedSmoothing {
    /// Builds and validates a smoothing with the default phase (point 0 is In).
    pub fn new(
        k: usize,
        strand_pairs: &[(usize, usize)],
        loops: &[LoopSign],
    ) -> Result<Self, SmoothingError> {
        Self::with_boundary(BoundaryConfig::new(k), strand_pairs, loops)
    }

    pub fn with_boundary(
        boundary: BoundaryConfig,
        strand_pairs: &[(usize, usize)],
        loops: &[LoopSign],
    ) -> Result<Self, SmoothingError> {
        let n = boundary.points();
        let mut seen = vec![false; n];
        if strand_pairs.len() * 2 != n {
            return Err(SmoothingError::NotPerfectMatching);
        }
        for &(s, e) in strand_pairs {
            if s >= n || e >= n || seen[s] || seen[e] {
                return Err(SmoothingError::NotPerfectMatching);
            }
            seen[s] = true;
            seen[e] = true;
            if boundary.dir(s) != PointDir::In || boundary.dir(e) != PointDir::Out {
                return Err(SmoothingError::BadOrientation((s, e)));
            }
        }
        for (i, &a) in strand_pairs.iter().enumerate() {
            for &b in &strand_pairs[i + 1..] {
                if chords_cross(a, b) {
                    return Err(SmoothingError::CrossingMatching(a, b));
                }
            }
        }
        let mut strands = strand_pairs.to_vec();
        strands.sort();
        let mut loops = loops.to_vec();
        loops.sort();
        Ok(Self {
            boundary,
            strands,
            loops,
        })
    }

    /// The empty smoothing (k = 0, no loops).
    pub fn empty() -> Self {
        Self::new(0, &[], &[]).unwrap()
    }

    /// A single loop of the given sign (k = 0).
    pub fn single_loop(sign: LoopSign) -> Self {
        Self::new(0, &[], &[sign]).unwrap()
    }

    pub fn boundary(&self) -> BoundaryConfig {
        self.boundary
    }

    pub fn k(&self) -> usize {
        self.boundary.k
    }

    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    pub fn loops(&self) -> &[LoopSign] {
        &self.loops
    }

    pub fn has_loops(&self) -> bool {
        !self.loops.is_empty()
    }

    /// All string ids: strands first, then loops.
    pub fn string_ids(&self) -> Vec<StringId> {
        (0..self.strands.len())
            .map(StringId::Strand)
            .chain((0..self.loops.len()).map(StringId::Loop))
            .collect()
    }

    pub fn string_count(&self) -> usize {
        self.strands.len() + self.loops.len()
    }

    /// Index of the strand with an endpoint at boundary point `p`.
    pub fn strand_at(&self, p: usize) -> usize {
        self.strands
            .iter()
            .position(|&(s, e)| s == p || e == p)
            .expect("boundary point must belong to a strand")
    }

    /// The same smoothing with the loop at `idx` removed.
    pub fn without_loop(&self, idx: usize) -> Self {
        let mut loops = self.loops.clone();
        loops.remove(idx);
        Self {
            boundary: self.boundary,
            strands: self.strands.clone(),
            loops,
        }
    }

    /// The same smoothing with an extra loop, returning its index.
    pub fn with_loop(&self, sign: LoopSign) -> (Self, usize) {
        let mut loops = self.loops.clone();
        loops.push(sign);
        loops.sort();
        let idx = match sign {
            LoopSign::Pos => loops.iter().filter(|l| **l == LoopSign::Pos).count() - 1,
            LoopSign::Neg => loops.len() - 1,
        };
        (
            Self {
                boundary: self.boundary,
                strands: self.strands.clone(),
                loops,
            },
            idx,
        )
    }

    /// Rotation number of one strand: relabel so the strand starts at 0 and
    /// ends at `i`; the value is `(i - k) / 2k`.
    pub fn strand_rotation(&self, strand: (usize, usize)) -> Result<Q, SmoothingError> {
        if !self.strands.contains(&strand) {
            return Err(SmoothingError::StrandNotFound(strand));
        }
        Ok(strand_rotation_formula(self.boundary.k, strand))
    }

    /// Sum of strand rotations plus ±1 per loop.
    pub fn rotation_number(&self) -> Q {
        let mut total = q(0);
        for &s in &self.strands {
            total += strand_rotation_formula(self.boundary.k, s);
        }
        for l in &self.loops {
            total += q(l.rotation());
        }
        total
    }

    /// Mirror image: labels reversed, loop signs flipped. Negates the
    /// rotation number.
    pub fn mirrored(&self) -> Self {
        let n = self.boundary.points();
        let mut strands: Vec<(usize, usize)> = self
            .strands
            .iter()
            .map(|&(s, e)| (n - 1 - s, n - 1 - e))
            .collect();
        strands.sort();
        let mut loops: Vec<LoopSign> = self.loops.iter().map(|l| l.flip()).collect();
        loops.sort();
        Self {
            boundary: self.boundary.mirrored(),
            strands,
            loops,
        }
    }

    /// All loopless smoothings on the given boundary (Catalan many).
    pub fn enumerate_loopless(boundary: BoundaryConfig) -> Vec<Self> {
        let points: Vec<usize> = (0..boundary.points()).collect();
        enumerate_matchings(&points)
            .into_iter()
            .map(|pairs| {
                let oriented: Vec<(usize, usize)> = pairs
                    .iter()
                    .map(|&(a, b)| {
                        if boundary.dir(a) == PointDir::In {
                            (a, b)
                        } else {
                            (b, a)
                        }
                    })
                    .collect();
                Self::with_boundary(boundary, &oriented, &[])
                    .expect("enumerated matchings are valid")
            })
            .collect()
    }
}

fn strand_rotation_formula(k: usize, (s, e): (usize, usize)) -> Q {
    let n = 2 * k as i64;
    let i = ((e as i64 - s as i64) % n + n) % n;
    Q::new(BigInt::from(i - k as i64), BigInt::from(n))
}

/// Recursively enumerates non-crossing perfect matchings of an even point set
/// listed in circular order. The first point pairs with an odd-offset partner;
/// the chord splits the rest into two independent sides.
fn enumerate_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = points[0];
    for j in (1..points.len()).step_by(2) {
        let partner = points[j];
        for inside in enumerate_matchings(&points[1..j]) {
            for outside in enumerate_matchings(&points[j + 1..]) {
                let mut m = Vec::with_capacity(points.len() / 2);
                m.push((first, partner));
                m.extend_from_slice(&inside);
                m.extend_from_slice(&outside);
                out.push(m);
            }
        }
    }
    out
}

/// A smoothing with a quantum grading shift.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShiftedSmoothing {
    pub smoothing: OrientedSmoothing,
    pub shift: i64,
}

impl ShiftedSmoothing {
    pub fn new(smoothing: OrientedSmoothing, shift: i64) -> Self {
        Self { smoothing, shift }
    }

    /// Degree-shifted rotation number `R(σ) + q`.
    pub fn shifted_rotation(&self) -> Q {
        self.smoothing.rotation_number() + q(self.shift)
    }
}

impl fmt::Display for OrientedSmoothing {
    /// Canonical text form, e.g. `S(k=2; 0-1, 2-3; loops=+1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S(k={}", self.boundary.k)?;
        if !self.boundary.point0_in {
            write!(f, "!")?;
        }
        if !self.strands.is_empty() {
            write!(f, "; ")?;
            for (i, (s, e)) in self.strands.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{s}-{e}")?;
            }
        }
        if !self.loops.is_empty() {
            write!(f, "; loops=")?;
            for (i, l) in self.loops.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for ShiftedSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.smoothing, self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    #[test]
    fn empty_smoothing() {
        let s = OrientedSmoothing::new(0, &[], &[]).unwrap();
        assert_eq!(s.rotation_number(), q(0));
        assert_eq!(s.to_string(), "S(k=0)");
    }

    #[test]
    fn adjacent_pairs_are_valid() {
        let s = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(s.strands(), &[(0, 1), (2, 3)]);
        assert_eq!(s.to_string(), "S(k=2; 0-1, 2-3)");
    }

    #[test]
    fn nested_pairs_do_not_cross() {
        let s = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        assert_eq!(s.strands(), &[(0, 3), (2, 1)]);
        assert!(chords_cross((0, 2), (1, 3)));
        assert!(!chords_cross((0, 1), (2, 3)));
        assert!(!chords_cross((0, 3), (1, 2)));
    }

    #[test]
    fn crossing_matching_rejected() {
        // k=2 pairs {(0,2),(1,3)} connect In to In; orientation fails first
        let err = OrientedSmoothing::new(2, &[(0, 2), (1, 3)], &[]).unwrap_err();
        assert!(matches!(err, SmoothingError::BadOrientation(_)));
        // with k=3 there are genuinely crossing In->Out matchings
        let err = OrientedSmoothing::new(3, &[(0, 3), (2, 5), (4, 1)], &[]).unwrap_err();
        assert!(matches!(err, SmoothingError::CrossingMatching(..)));
    }

    #[test]
    fn strand_rotation_examples() {
        // k=3, strand (0,1): (1-3)/6 = -1/3
        let s =
            OrientedSmoothing::new(3, &[(0, 1), (2, 3), (4, 5)], &[]).unwrap();
        assert_eq!(s.strand_rotation((0, 1)).unwrap(), qr(-1, 3));

        // k=2, strand (3,2): i = (2-3) mod 4 = 3, (3-2)/4 = 1/4. Needs the
        // opposite phase so that 3 is an In point.
        let b = BoundaryConfig::with_phase(2, false);
        let s = OrientedSmoothing::with_boundary(b, &[(3, 2), (1, 0)], &[]).unwrap();
        assert_eq!(s.strand_rotation((3, 2)).unwrap(), qr(1, 4));

        // any strand with (end - start) mod 2k = k has rotation 0
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        assert_eq!(s.strand_rotation((0, 1)).unwrap(), q(0));
    }

    #[test]
    fn rotation_number_sums() {
        // single CCW loop
        assert_eq!(
            OrientedSmoothing::single_loop(LoopSign::Pos).rotation_number(),
            q(1)
        );
        // k=2 adjacent pairs: -1/4 + -1/4 = -1/2
        let s = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(s.rotation_number(), qr(-1, 2));
        // the figure's 6-point resolution has total rotation 0:
        // strands (0,1) [-1/3], (2,5) [(3-3)/6 = 0], (4,3) is not valid; use
        // {(0,1),(4,5),(2,3)}: -1/3 + -1/3 + -1/3 = -1, plus a CCW loop = 0.
        let s = OrientedSmoothing::new(
            3,
            &[(0, 1), (2, 3), (4, 5)],
            &[LoopSign::Pos],
        )
        .unwrap();
        assert_eq!(s.rotation_number(), q(0));
    }

    #[test]
    fn shifted_rotation_examples() {
        let s = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(
            ShiftedSmoothing::new(s.clone(), -2).shifted_rotation(),
            qr(-5, 2)
        );
        assert_eq!(
            ShiftedSmoothing::new(s.clone(), 0).shifted_rotation(),
            s.rotation_number()
        );
        let c = OrientedSmoothing::single_loop(LoopSign::Pos);
        assert_eq!(ShiftedSmoothing::new(c, -1).shifted_rotation(), q(0));
    }

    #[test]
    fn loopless_k1_rotation_is_zero() {
        for s in OrientedSmoothing::enumerate_loopless(BoundaryConfig::new(1)) {
            assert_eq!(s.rotation_number(), q(0));
        }
    }

    #[test]
    fn strand_rotation_bounds() {
        for k in 1..=4usize {
            for s in OrientedSmoothing::enumerate_loopless(BoundaryConfig::new(k)) {
                for &st in s.strands() {
                    let r = s.strand_rotation(st).unwrap();
                    assert!(r < qr(1, 2) && r > qr(-1, 2), "strand rotation out of range");
                }
            }
        }
    }

    #[test]
    fn mirror_negates_rotation() {
        for k in 0..=4usize {
            for s in OrientedSmoothing::enumerate_loopless(BoundaryConfig::new(k)) {
                let (s, _) = s.with_loop(LoopSign::Pos);
                let m = s.mirrored();
                assert_eq!(m.rotation_number(), -s.rotation_number());
            }
        }
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (0..=4)
            .map(|k| OrientedSmoothing::enumerate_loopless(BoundaryConfig::new(k)).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14]);
    }
}

//! Bounded chain complexes over matrices of cobordism combinations, with
//! the reductions (delooping, Gaussian elimination, row exchange), the
//! diagonality checks, and homology extraction for closed complexes.

mod coherence;
mod homology;
mod reduce;

pub use coherence::{closure_choices, ClosureChoice, CoherenceReport};
pub use homology::{rational_rank, HomologyTable};
pub use reduce::ReduceStep;

use crate::cobordism::{DegreeCheck, MorphismCombo};
use crate::scalar::{q, Q};
use crate::smoothing::{BoundaryConfig, ShiftedSmoothing};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("matrix dimensions do not match the object vectors")]
    ShapeMismatch,
    #[error("smoothing at degree {r} index {idx} has boundary different from the complex")]
    BoundaryMismatch { r: i64, idx: usize },
    #[error("entry at degree {r} ({i} -> {j}) has wrong endpoints")]
    EntryMismatch { r: i64, i: usize, j: usize },
    #[error("no loop in the smoothing at degree {r} index {idx}")]
    NoLoopAtPosition { r: i64, idx: usize },
    #[error("entry at degree {r} from {i} to {j} is not invertible")]
    NotInvertible { r: i64, i: usize, j: usize },
    #[error("index out of range at degree {r}")]
    IndexOutOfRange { r: i64 },
    #[error("operation requires a closed complex (k = 0)")]
    NotClosed,
}

/// Differential matrix: `entry[i][j]` maps source object `j` to target
/// object `i`, following the row-times-column composition rule.
pub type Matrix = Vec<Vec<MorphismCombo>>;

/// A bounded complex of vectors of shifted smoothings. `objects[t]` lives at
/// homological degree `r0 + t`; `diffs[t]` maps `objects[t]` to
/// `objects[t+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complex {
    boundary: BoundaryConfig,
    r0: i64,
    objects: Vec<Vec<ShiftedSmoothing>>,
    diffs: Vec<Matrix>,
}

/// Canonical numbering of the objects: 1..N through ascending homological
/// degrees, then positions within each vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numeration {
    r0: i64,
    counts: Vec<usize>,
}

impl Numeration {
    /// 1-based number of the object at degree `r`, position `idx`.
    pub fn number(&self, r: i64, idx: usize) -> usize {
        let t = (r - self.r0) as usize;
        let before: usize = self.counts[..t].iter().sum();
        before + idx + 1
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Outcome of the diagonality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalCheck {
    /// Every object satisfies `2r - shifted_rotation = C`.
    Constant(Q),
    NotDiagonal {
        r: i64,
        idx: usize,
        expected: Q,
        found: Q,
    },
    /// The complex has no objects.
    Empty,
}

impl DiagonalCheck {
    pub fn constant(&self) -> Option<&Q> {
        match self {
            DiagonalCheck::Constant(c) => Some(c),
            _ => None,
        }
    }
}

impl Complex {
    pub fn new(
        boundary: BoundaryConfig,
        r0: i64,
        objects: Vec<Vec<ShiftedSmoothing>>,
        diffs: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        if objects.is_empty() {
            if !diffs.is_empty() {
                return Err(ComplexError::ShapeMismatch);
            }
            return Ok(Self {
                boundary,
                r0: 0,
                objects,
                diffs,
            });
        }
        if diffs.len() + 1 != objects.len() {
            return Err(ComplexError::ShapeMismatch);
        }
        for (t, vec) in objects.iter().enumerate() {
            for (idx, s) in vec.iter().enumerate() {
                if s.smoothing.boundary() != boundary {
                    return Err(ComplexError::BoundaryMismatch {
                        r: r0 + t as i64,
                        idx,
                    });
                }
            }
        }
        for (t, m) in diffs.iter().enumerate() {
            if m.len() != objects[t + 1].len() {
                return Err(ComplexError::ShapeMismatch);
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != objects[t].len() {
                    return Err(ComplexError::ShapeMismatch);
                }
                for (j, entry) in row.iter().enumerate() {
                    if entry.source() != &objects[t][j].smoothing
                        || entry.target() != &objects[t + 1][i].smoothing
                    {
                        return Err(ComplexError::EntryMismatch {
                            r: r0 + t as i64,
                            i: j,
                            j: i,
                        });
                    }
                }
            }
        }
        let mut c = Self {
            boundary,
            r0,
            objects,
            diffs,
        };
        c.trim();
        Ok(c)
    }

    /// A complex with a single object.
    pub fn single(r: i64, object: ShiftedSmoothing) -> Self {
        let boundary = object.smoothing.boundary();
        Self::new(boundary, r, vec![vec![object]], vec![]).expect("single object is valid")
    }

    /// The zero complex on the given boundary.
    pub fn zero(boundary: BoundaryConfig) -> Self {
        Self {
            boundary,
            r0: 0,
            objects: vec![],
            diffs: vec![],
        }
    }

    pub fn boundary(&self) -> BoundaryConfig {
        self.boundary
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn r_min(&self) -> i64 {
        self.r0
    }

    pub fn r_max(&self) -> i64 {
        self.r0 + self.objects.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.r0..=self.r0 + self.objects.len() as i64 - 1
    }

    pub fn objects_at(&self, r: i64) -> &[ShiftedSmoothing] {
        let t = (r - self.r0) as usize;
        &self.objects[t]
    }

    pub fn object_count(&self) -> usize {
        self.objects.iter().map(|v| v.len()).sum()
    }

    /// Differential leaving degree `r`, if the complex extends past it.
    pub fn diff_at(&self, r: i64) -> Option<&Matrix> {
        if r < self.r0 {
            return None;
        }
        self.diffs.get((r - self.r0) as usize)
    }

    #[cfg(test)]
    pub(crate) fn parts(
        self,
    ) -> (
        BoundaryConfig,
        i64,
        Vec<Vec<ShiftedSmoothing>>,
        Vec<Matrix>,
    ) {
        (self.boundary, self.r0, self.objects, self.diffs)
    }

    fn trim(&mut self) {
        while self
            .objects
            .first()
            .map(|v| v.is_empty())
            .unwrap_or(false)
        {
            self.objects.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.r0 += 1;
        }
        while self.objects.last().map(|v| v.is_empty()).unwrap_or(false) {
            self.objects.pop();
            self.diffs.pop();
        }
        if self.objects.is_empty() {
            self.r0 = 0;
            self.diffs.clear();
        }
    }

    /// Checks the complex invariants and reports violations. An empty list
    /// means the complex is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in 0..self.diffs.len() {
            let r = self.r0 + t as i64;
            for (i, row) in self.diffs[t].iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    let qs = self.objects[t][j].shift;
                    let qt = self.objects[t + 1][i].shift;
                    match entry.degree(qs, qt) {
                        DegreeCheck::Homogeneous(0) | DegreeCheck::ZeroMorphism => {}
                        other => out.push(format!(
                            "entry at degree {r} ({j} -> {i}) has degree {other:?}, expected 0"
                        )),
                    }
                }
            }
        }
        for t in 0..self.diffs.len().saturating_sub(1) {
            let r = self.r0 + t as i64;
            let first = &self.diffs[t];
            let second = &self.diffs[t + 1];
            for i in 0..self.objects[t + 2].len() {
                for j in 0..self.objects[t].len() {
                    let mut sum = MorphismCombo::zero(
                        self.objects[t][j].smoothing.clone(),
                        self.objects[t + 2][i].smoothing.clone(),
                    );
                    for (k, row) in first.iter().enumerate() {
                        let prod = second[i][k]
                            .compose(&row[j])
                            .expect("chain entries are composable");
                        sum = sum.add(&prod);
                    }
                    if !sum.normalize().is_zero() {
                        out.push(format!("d o d is nonzero at degree {r} from {j} to {i}"));
                    }
                }
            }
        }
        out
    }

    /// Swaps objects `i` and `j` at degree `r`, exchanging the corresponding
    /// rows of the incoming and columns of the outgoing differential.
    pub fn exchange(&self, r: i64, i: usize, j: usize) -> Result<Self, ComplexError> {
        let t = self.index_of(r)?;
        let n = self.objects[t].len();
        if i >= n || j >= n {
            return Err(ComplexError::IndexOutOfRange { r });
        }
        let mut out = self.clone();
        out.objects[t].swap(i, j);
        if t > 0 {
            out.diffs[t - 1].swap(i, j);
        }
        if t < out.diffs.len() {
            for row in &mut out.diffs[t] {
                row.swap(i, j);
            }
        }
        Ok(out)
    }

    /// The canonical numbering of the objects.
    pub fn numerate(&self) -> Numeration {
        Numeration {
            r0: self.r0,
            counts: self.objects.iter().map(|v| v.len()).collect(),
        }
    }

    /// Tests whether `2r - shifted_rotation` is a single constant across all
    /// objects, returning that rotation constant.
    pub fn is_diagonal(&self) -> DiagonalCheck {
        let mut constant: Option<Q> = None;
        for (t, vec) in self.objects.iter().enumerate() {
            let r = self.r0 + t as i64;
            for (idx, obj) in vec.iter().enumerate() {
                let value = q(2 * r) - obj.shifted_rotation();
                match &constant {
                    None => constant = Some(value),
                    Some(c) if *c != value => {
                        return DiagonalCheck::NotDiagonal {
                            r,
                            idx,
                            expected: c.clone(),
                            found: value,
                        }
                    }
                    _ => {}
                }
            }
        }
        match constant {
            Some(c) => DiagonalCheck::Constant(c),
            None => DiagonalCheck::Empty,
        }
    }

    pub(crate) fn index_of(&self, r: i64) -> Result<usize, ComplexError> {
        if self.objects.is_empty() || r < self.r0 || r > self.r_max() {
            return Err(ComplexError::IndexOutOfRange { r });
        }
        Ok((r - self.r0) as usize)
    }

    /// Serializes to pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    /// Parses and re-validates a complex from JSON.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: Complex = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Complex::new(raw.boundary, raw.r0, raw.objects, raw.diffs).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (t, vec) in self.objects.iter().enumerate() {
            let r = self.r0 + t as i64;
            write!(f, "r={r}: [")?;
            for (i, obj) in vec.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{obj}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cobordism::elementary::saddle;
    use crate::smoothing::{OrientedSmoothing, StringId};

    /// The complex of a negative crossing: two-strand smoothings joined by a
    /// saddle, at homological degrees -1 and 0 with shifts -2 and -1.
    pub(crate) fn negative_crossing() -> Complex {
        let a = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let b = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        let d = saddle(
            &a,
            &b,
            &[StringId::Strand(0), StringId::Strand(1)],
            &[StringId::Strand(0), StringId::Strand(1)],
        )
        .unwrap();
        Complex::new(
            a.boundary(),
            -1,
            vec![
                vec![ShiftedSmoothing::new(a, -2)],
                vec![ShiftedSmoothing::new(b, -1)],
            ],
            vec![vec![vec![d]]],
        )
        .unwrap()
    }

    #[test]
    fn crossing_complex_is_valid_and_diagonal() {
        let c = negative_crossing();
        assert!(c.validate().is_empty());
        assert_eq!(
            c.is_diagonal(),
            DiagonalCheck::Constant(crate::scalar::qr(1, 2))
        );
    }

    #[test]
    fn altered_shift_breaks_degree() {
        let c = negative_crossing();
        let (boundary, r0, mut objects, diffs) = c.parts();
        objects[0][0].shift = -1;
        let c = Complex::new(boundary, r0, objects, diffs).unwrap();
        assert!(!c.validate().is_empty());
        assert!(matches!(c.is_diagonal(), DiagonalCheck::NotDiagonal { .. }));
    }

    #[test]
    fn zero_complex_is_valid() {
        let c = Complex::zero(BoundaryConfig::new(0));
        assert!(c.validate().is_empty());
        assert_eq!(c.is_diagonal(), DiagonalCheck::Empty);
    }

    #[test]
    fn exchange_is_involutive() {
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let c = Complex::new(
            s.boundary(),
            0,
            vec![vec![
                ShiftedSmoothing::new(s.clone(), 1),
                ShiftedSmoothing::new(s.clone(), 2),
            ]],
            vec![],
        )
        .unwrap();
        let swapped = c.exchange(0, 0, 1).unwrap();
        assert_ne!(c, swapped);
        assert_eq!(c, swapped.exchange(0, 0, 1).unwrap());
        // i = j is the identity
        assert_eq!(c, c.exchange(0, 0, 0).unwrap());
    }

    #[test]
    fn numeration_is_consecutive() {
        let c = negative_crossing();
        let g = c.numerate();
        assert_eq!(g.number(-1, 0), 1);
        assert_eq!(g.number(0, 0), 2);
        assert_eq!(g.total(), 2);
    }

    #[test]
    fn json_round_trip() {
        let c = negative_crossing();
        let text = c.to_json();
        let back = Complex::from_json(&text).unwrap();
        assert_eq!(c, back);
    }
}

//! Delooping, Gaussian elimination and the reduction driver.

use super::{Complex, ComplexError};
use crate::cobordism::{elementary, MorphismCombo};
use crate::scalar::{one, Q};
use crate::smoothing::ShiftedSmoothing;

/// One step performed by [`Complex::reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceStep {
    Deloop { r: i64, idx: usize },
    Eliminate { r: i64, i: usize, j: usize },
}

impl Complex {
    /// Replaces the object at degree `r`, position `idx` (which must carry a
    /// loop) by two loop-free copies with shifts `q+1` and `q-1`, conjugating
    /// the adjacent differentials by the cap/cup isomorphism pair. The copy
    /// with shift `q+1` comes first.
    pub fn deloop(&self, r: i64, idx: usize) -> Result<Self, ComplexError> {
        let t = self.index_of(r)?;
        if idx >= self.objects[t].len() {
            return Err(ComplexError::IndexOutOfRange { r });
        }
        let obj = self.objects[t][idx].clone();
        if !obj.smoothing.has_loops() {
            return Err(ComplexError::NoLoopAtPosition { r, idx });
        }
        let loop_idx = 0;
        let slim = obj.smoothing.without_loop(loop_idx);

        let cap_plain = elementary::cap(&obj.smoothing, loop_idx, 0);
        let cap_dotted = elementary::cap(&obj.smoothing, loop_idx, 1);
        let cup_plain = elementary::cup(&obj.smoothing, loop_idx, 0);
        let cup_dotted = elementary::cup(&obj.smoothing, loop_idx, 1);

        let mut out = self.clone();
        out.objects[t].splice(
            idx..=idx,
            [
                ShiftedSmoothing::new(slim.clone(), obj.shift + 1),
                ShiftedSmoothing::new(slim.clone(), obj.shift - 1),
            ],
        );
        // incoming differential: the row at idx splits in two
        if t > 0 {
            let old_rows = std::mem::take(&mut out.diffs[t - 1]);
            let mut rows = Vec::with_capacity(old_rows.len() + 1);
            for (i, row) in old_rows.into_iter().enumerate() {
                if i == idx {
                    let plus: Vec<MorphismCombo> = row
                        .iter()
                        .map(|f| cap_dotted.compose(f).expect("cap composes"))
                        .collect();
                    let minus: Vec<MorphismCombo> = row
                        .iter()
                        .map(|f| cap_plain.compose(f).expect("cap composes"))
                        .collect();
                    rows.push(plus);
                    rows.push(minus);
                } else {
                    rows.push(row);
                }
            }
            out.diffs[t - 1] = rows;
        }
        // outgoing differential: the column at idx splits in two
        if t < out.diffs.len() {
            for row in &mut out.diffs[t] {
                let old = row.remove(idx);
                let from_plus = old.compose(&cup_plain).expect("cup composes");
                let from_minus = old.compose(&cup_dotted).expect("cup composes");
                row.insert(idx, from_minus);
                row.insert(idx, from_plus);
            }
        }
        Ok(out)
    }

    /// Removes the pivot pair (object `i` at degree `r`, object `j` at
    /// degree `r+1`) whose connecting entry is an invertible scalar multiple
    /// of the identity, correcting the remaining differential by
    /// `epsilon - gamma phi^{-1} delta`.
    pub fn gaussian_eliminate(&self, r: i64, i: usize, j: usize) -> Result<Self, ComplexError> {
        let t = self.index_of(r)?;
        if t + 1 >= self.objects.len()
            || i >= self.objects[t].len()
            || j >= self.objects[t + 1].len()
        {
            return Err(ComplexError::IndexOutOfRange { r });
        }
        let phi = &self.diffs[t][j][i];
        let scalar = phi
            .invertible_scalar()
            .ok_or(ComplexError::NotInvertible { r, i, j })?;
        let inv: Q = one() / scalar;

        let mut out = self.clone();
        let gamma: Vec<MorphismCombo> = (0..out.objects[t + 1].len())
            .filter(|&l| l != j)
            .map(|l| out.diffs[t][l][i].clone())
            .collect();
        let delta: Vec<MorphismCombo> = (0..out.objects[t].len())
            .filter(|&m| m != i)
            .map(|m| out.diffs[t][j][m].clone())
            .collect();

        out.objects[t].remove(i);
        out.objects[t + 1].remove(j);
        // epsilon - gamma phi^{-1} delta
        let old = std::mem::take(&mut out.diffs[t]);
        let mut middle = Vec::with_capacity(old.len().saturating_sub(1));
        for (l, row) in old
            .into_iter()
            .enumerate()
            .filter(|(l, _)| *l != j)
            .map(|(l, row)| (if l > j { l - 1 } else { l }, row))
        {
            let mut new_row = Vec::with_capacity(row.len().saturating_sub(1));
            for (m, entry) in row
                .into_iter()
                .enumerate()
                .filter(|(m, _)| *m != i)
                .map(|(m, e)| (if m > i { m - 1 } else { m }, e))
            {
                let correction = gamma[l]
                    .compose(&delta[m])
                    .expect("pivot endpoints are equal smoothings")
                    .scale(&inv);
                new_row.push(entry.sub(&correction).normalize());
            }
            middle.push(new_row);
        }
        out.diffs[t] = middle;
        // incoming rows into degree r lose row i
        if t > 0 {
            out.diffs[t - 1].remove(i);
        }
        // outgoing columns from degree r+1 lose column j
        if t + 1 < out.diffs.len() {
            for row in &mut out.diffs[t + 1] {
                row.remove(j);
            }
        }
        out.trim();
        Ok(out)
    }

    fn first_loop(&self) -> Option<(i64, usize)> {
        for (t, vec) in self.objects.iter().enumerate() {
            for (idx, obj) in vec.iter().enumerate() {
                if obj.smoothing.has_loops() {
                    return Some((self.r0 + t as i64, idx));
                }
            }
        }
        None
    }

    fn first_pivot(&self) -> Option<(i64, usize, usize)> {
        for (t, m) in self.diffs.iter().enumerate() {
            for i in 0..self.objects[t].len() {
                for (j, row) in m.iter().enumerate() {
                    if row[i].is_invertible_entry() {
                        return Some((self.r0 + t as i64, i, j));
                    }
                }
            }
        }
        None
    }

    /// Fully reduces the complex: deloops every loop, then removes every
    /// invertible entry, repeating in a fixed scan order until neither
    /// applies. The result has no loops and no invertible entries.
    pub fn reduce(&self) -> Self {
        self.reduce_with_observer(|_, _| {})
    }

    /// Like [`Complex::reduce`], invoking the observer after every step with
    /// the step description and the intermediate complex.
    pub fn reduce_with_observer<F>(&self, mut observe: F) -> Self
    where
        F: FnMut(&ReduceStep, &Complex),
    {
        let mut current = self.clone();
        loop {
            if let Some((r, idx)) = current.first_loop() {
                current = current.deloop(r, idx).expect("loop position is valid");
                observe(&ReduceStep::Deloop { r, idx }, &current);
                continue;
            }
            if let Some((r, i, j)) = current.first_pivot() {
                current = current
                    .gaussian_eliminate(r, i, j)
                    .expect("pivot position is valid");
                observe(&ReduceStep::Eliminate { r, i, j }, &current);
                continue;
            }
            break;
        }
        current
    }

    /// True when no smoothing has a loop and no entry is invertible.
    pub fn is_reduced(&self) -> bool {
        self.first_loop().is_none() && self.first_pivot().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::negative_crossing;
    use super::*;
    use crate::smoothing::{LoopSign, OrientedSmoothing};

    #[test]
    fn deloop_single_circle() {
        let circle = OrientedSmoothing::single_loop(LoopSign::Pos);
        let c = Complex::single(0, ShiftedSmoothing::new(circle, 0));
        let d = c.deloop(0, 0).unwrap();
        assert_eq!(d.objects_at(0).len(), 2);
        assert_eq!(d.objects_at(0)[0].shift, 1);
        assert_eq!(d.objects_at(0)[1].shift, -1);
        assert!(!d.objects_at(0)[0].smoothing.has_loops());
        assert!(d.validate().is_empty());
    }

    #[test]
    fn deloop_iso_pair_composes_to_identity() {
        // both composites of the delooping isomorphism pair normalize to
        // identity matrices
        let circle = OrientedSmoothing::single_loop(LoopSign::Pos);
        let slim = circle.without_loop(0);
        let cap_plain = elementary::cap(&circle, 0, 0);
        let cap_dotted = elementary::cap(&circle, 0, 1);
        let cup_plain = elementary::cup(&circle, 0, 0);
        let cup_dotted = elementary::cup(&circle, 0, 1);
        // from the two summands and back: 2x2 identity
        let id_empty = MorphismCombo::identity(&slim);
        assert_eq!(cap_dotted.compose(&cup_plain).unwrap(), id_empty);
        assert_eq!(cap_plain.compose(&cup_dotted).unwrap(), id_empty);
        assert!(cap_dotted.compose(&cup_dotted).unwrap().is_zero());
        assert!(cap_plain.compose(&cup_plain).unwrap().is_zero());
        // through the circle and back: identity on the circle
        let through = cup_plain
            .compose(&cap_dotted)
            .unwrap()
            .add(&cup_dotted.compose(&cap_plain).unwrap())
            .normalize();
        assert_eq!(through, MorphismCombo::identity(&circle));
    }

    #[test]
    fn reduce_crossing_complex_is_fixpoint() {
        let c = negative_crossing();
        let r = c.reduce();
        assert_eq!(c, r);
        assert!(r.is_reduced());
    }

    #[test]
    fn eliminate_requires_invertible() {
        let c = negative_crossing();
        let err = c.gaussian_eliminate(-1, 0, 0).unwrap_err();
        assert!(matches!(err, ComplexError::NotInvertible { .. }));
    }

    #[test]
    fn deloop_then_eliminate_unknot_round() {
        // circle at degree 0: deloop, then nothing to eliminate
        let circle = OrientedSmoothing::single_loop(LoopSign::Neg);
        let c = Complex::single(0, ShiftedSmoothing::new(circle, 3));
        let red = c.reduce();
        assert_eq!(red.objects_at(0).len(), 2);
        assert_eq!(red.objects_at(0)[0].shift, 4);
        assert_eq!(red.objects_at(0)[1].shift, 2);
        assert!(red.is_reduced());
    }

    #[test]
    fn deloop_errors_without_loop() {
        let c = negative_crossing();
        let err = c.deloop(0, 0).unwrap_err();
        assert!(matches!(err, ComplexError::NoLoopAtPosition { .. }));
    }
}

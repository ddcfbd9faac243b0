//! Homology tables of closed complexes, computed by exact rational rank.

use super::{Complex, ComplexError};
use crate::scalar::Q;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Bigraded dimensions over the rationals: `(homological degree i, quantum
/// degree j) -> dim`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HomologyTable {
    entries: BTreeMap<(i64, i64), usize>,
}

impl HomologyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, i: i64, j: i64, dim: usize) {
        if dim > 0 {
            self.entries.insert((i, j), dim);
        }
    }

    pub fn add(&mut self, i: i64, j: i64, dim: usize) {
        if dim > 0 {
            *self.entries.entry((i, j)).or_insert(0) += dim;
        }
    }

    pub fn get(&self, i: i64, j: i64) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &usize)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn total_dimension(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn from_entries(entries: &[(i64, i64, usize)]) -> Self {
        let mut t = Self::new();
        for &(i, j, d) in entries {
            t.add(i, j, d);
        }
        t
    }

    /// Mirror table: `(i, j) -> (-i, -j)`.
    pub fn mirrored(&self) -> Self {
        let mut t = Self::new();
        for (&(i, j), &d) in &self.entries {
            t.add(-i, -j, d);
        }
        t
    }

    /// Tab-separated grid with rows in descending quantum degree and columns
    /// in ascending homological degree.
    pub fn to_tsv(&self) -> String {
        if self.entries.is_empty() {
            return "j\\i\n".to_string();
        }
        let i_min = self.entries.keys().map(|k| k.0).min().unwrap();
        let i_max = self.entries.keys().map(|k| k.0).max().unwrap();
        let j_min = self.entries.keys().map(|k| k.1).min().unwrap();
        let j_max = self.entries.keys().map(|k| k.1).max().unwrap();
        let mut out = String::from("j\\i");
        for i in i_min..=i_max {
            out.push('\t');
            out.push_str(&i.to_string());
        }
        out.push('\n');
        let mut j = j_max;
        while j >= j_min {
            out.push_str(&j.to_string());
            for i in i_min..=i_max {
                out.push('\t');
                let d = self.get(i, j);
                if d > 0 {
                    out.push_str(&d.to_string());
                }
            }
            out.push('\n');
            j -= 1;
        }
        out
    }

    /// JSON list of `{"i":…, "j":…, "dim":…}` entries sorted by `(j, i)`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            i: i64,
            j: i64,
            dim: usize,
        }
        let mut list: Vec<Entry> = self
            .entries
            .iter()
            .map(|(&(i, j), &dim)| Entry { i, j, dim })
            .collect();
        list.sort_by_key(|e| (e.j, e.i));
        serde_json::to_string_pretty(&list).expect("table serializes")
    }

    /// Graded Euler characteristic as a Laurent polynomial in `q`,
    /// represented as exponent -> coefficient.
    pub fn graded_euler(&self) -> BTreeMap<i64, i64> {
        let mut poly: BTreeMap<i64, i64> = BTreeMap::new();
        for (&(i, j), &dim) in &self.entries {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            let c = poly.entry(j).or_insert(0);
            *c += sign * dim as i64;
            if *c == 0 {
                poly.remove(&j);
            }
        }
        poly
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_tsv())
    }
}

/// Rank of a dense rational matrix by Gaussian elimination.
pub fn rational_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = Q::new(
            m[row][col].denom().clone(),
            m[row][col].numer().clone(),
        );
        for c in col..cols {
            let v = &m[row][c] * &inv;
            m[row][c] = v;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let v = &m[r][c] - &factor * &m[row][c];
                    m[r][c] = v;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

impl Complex {
    /// Homology of a closed complex (`k = 0`). Residual loops are delooped
    /// first; afterwards every object is an empty smoothing with a shift and
    /// every differential a rational scalar, so dimensions come from exact
    /// ranks within each quantum degree.
    pub fn homology_table(&self) -> Result<HomologyTable, ComplexError> {
        if self.boundary().k() != 0 {
            return Err(ComplexError::NotClosed);
        }
        let mut c = self.clone();
        loop {
            let mut target = None;
            'search: for r in c.degrees() {
                for (idx, obj) in c.objects_at(r).iter().enumerate() {
                    if obj.smoothing.has_loops() {
                        target = Some((r, idx));
                        break 'search;
                    }
                }
            }
            match target {
                Some((r, idx)) => c = c.deloop(r, idx)?,
                None => break,
            }
        }
        let mut table = HomologyTable::new();
        if c.is_empty() {
            return Ok(table);
        }
        let shifts: std::collections::BTreeSet<i64> = c
            .degrees()
            .flat_map(|r| c.objects_at(r).iter().map(|o| o.shift))
            .collect();
        for &quantum in &shifts {
            // indices of objects with this shift per degree
            let picks: Vec<Vec<usize>> = c
                .degrees()
                .map(|r| {
                    c.objects_at(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, o)| o.shift == quantum)
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let mut ranks: Vec<usize> = Vec::new();
            for (t, r) in c.degrees().enumerate() {
                if t + 1 >= picks.len() {
                    break;
                }
                let matrix = c.diff_at(r).expect("differential exists");
                let rows: Vec<Vec<Q>> = picks[t + 1]
                    .iter()
                    .map(|&i| {
                        picks[t]
                            .iter()
                            .map(|&j| matrix[i][j].scalar_part())
                            .collect()
                    })
                    .collect();
                ranks.push(rational_rank(rows));
            }
            for (t, r) in c.degrees().enumerate() {
                let n = picks[t].len();
                let rank_out = if t < ranks.len() { ranks[t] } else { 0 };
                let rank_in = if t > 0 { ranks[t - 1] } else { 0 };
                let dim = n - rank_out - rank_in;
                table.add(r, quantum, dim);
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::smoothing::{LoopSign, OrientedSmoothing, ShiftedSmoothing};

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(rational_rank(vec![]), 0);
        assert_eq!(rational_rank(vec![vec![q(0), q(0)]]), 0);
        assert_eq!(rational_rank(vec![vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rational_rank(vec![vec![q(1), q(0)], vec![q(7), q(3)]]), 2);
    }

    #[test]
    fn empty_link_table() {
        let c = Complex::single(0, ShiftedSmoothing::new(OrientedSmoothing::empty(), 0));
        let t = c.homology_table().unwrap();
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.total_dimension(), 1);
    }

    #[test]
    fn single_circle_table() {
        let c = Complex::single(
            0,
            ShiftedSmoothing::new(OrientedSmoothing::single_loop(LoopSign::Pos), 0),
        );
        let t = c.homology_table().unwrap();
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(0, -1), 1);
        assert_eq!(t.total_dimension(), 2);
    }

    #[test]
    fn not_closed_rejected() {
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let c = Complex::single(0, ShiftedSmoothing::new(s, 0));
        assert!(matches!(
            c.homology_table(),
            Err(ComplexError::NotClosed)
        ));
    }

    #[test]
    fn tsv_layout() {
        let t = HomologyTable::from_entries(&[(0, 1, 4), (3, 7, 1)]);
        let tsv = t.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "j\\i\t0\t1\t2\t3");
        assert!(lines[1].starts_with("7"));
        assert!(lines.last().unwrap().starts_with("1\t4"));
    }

    #[test]
    fn euler_characteristic() {
        let t = HomologyTable::from_entries(&[(0, 1, 1), (1, 1, 1), (2, 5, 1)]);
        let euler = t.graded_euler();
        assert_eq!(euler.get(&1), None); // cancels
        assert_eq!(euler.get(&5), Some(&1));
    }
}

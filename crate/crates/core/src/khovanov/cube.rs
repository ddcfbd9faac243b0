//! The cube of resolutions over the rationals: an independent computation
//! of link homology used to cross-check the compose-and-reduce pipeline.
//! Circles carry the rank-2 algebra with basis {1, X}: multiplication sends
//! 1 to the identity and X*X to 0; comultiplication sends 1 to 1@X + X@1 and
//! X to X@X; the counit picks X.

use super::pd::PDCode;
use super::plan::{analyze, PlanError};
use crate::complex::{rational_rank, HomologyTable};
use crate::scalar::{q, Q};
use crate::util::UnionFind;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeError {
    #[error("the cube needs a closed diagram, but edges {0:?} are open")]
    NotClosed(Vec<usize>),
    #[error(transparent)]
    Orientation(#[from] PlanError),
}

/// One vertex of the cube: the circles of a complete resolution, as sorted
/// lists of the edge labels they traverse.
struct VertexData {
    circles: Vec<Vec<usize>>,
    /// circle index of each label
    circle_of: BTreeMap<usize, usize>,
}

fn resolve(pd: &PDCode, v: usize, labels: &[usize]) -> VertexData {
    let index: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for (i, x) in pd.crossings.iter().enumerate() {
        let [a, b, c, d] = x.edges;
        let pairs = if v >> i & 1 == 0 {
            [(a, b), (c, d)]
        } else {
            [(a, d), (b, c)]
        };
        for (x, y) in pairs {
            uf.union(index[&x], index[&y]);
        }
    }
    let classes = uf.classes();
    let mut circle_of = BTreeMap::new();
    let circles: Vec<Vec<usize>> = classes
        .iter()
        .enumerate()
        .map(|(ci, class)| {
            let members: Vec<usize> = class.iter().map(|&i| labels[i]).collect();
            for &l in &members {
                circle_of.insert(l, ci);
            }
            members
        })
        .collect();
    VertexData { circles, circle_of }
}

/// A basis element: a vertex plus a label in {1 = false, X = true} per circle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Generator {
    vertex: usize,
    labels: Vec<bool>,
}

/// Computes the bigraded homology of a closed diagram by exact rank
/// computations in each bidegree.
pub fn cube_oracle(pd: &PDCode) -> Result<HomologyTable, CubeError> {
    let open = pd.open_edges();
    if !open.is_empty() {
        return Err(CubeError::NotClosed(open));
    }
    if pd.crossings.is_empty() {
        // no crossings: each free loop contributes the two-dimensional
        // algebra, the empty link a single class
        let mut table = HomologyTable::new();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        dims.insert(0, 1);
        for _ in 0..pd.free_loops {
            let mut next = BTreeMap::new();
            for (&j, &d) in &dims {
                *next.entry(j + 1).or_insert(0) += d;
                *next.entry(j - 1).or_insert(0) += d;
            }
            dims = next;
        }
        for (j, d) in dims {
            table.add(0, j, d);
        }
        return Ok(table);
    }

    let analysis = analyze(pd)?;
    let n = pd.crossings.len();
    let n_plus = analysis.n_plus as i64;
    let n_minus = analysis.n_minus as i64;
    let labels: Vec<usize> = pd.occurrences().keys().copied().collect();
    let vertices: Vec<VertexData> = (0..1usize << n).map(|v| resolve(pd, v, &labels)).collect();

    // enumerate generators per bidegree (i, j)
    let mut buckets: BTreeMap<(i64, i64), Vec<Generator>> = BTreeMap::new();
    for (v, data) in vertices.iter().enumerate() {
        let height = (v.count_ones() as i64) - n_minus;
        let c = data.circles.len() + pd.free_loops;
        for mask in 0..1usize << c {
            let xs = mask.count_ones() as i64;
            let ones = c as i64 - xs;
            let j = ones - xs + (v.count_ones() as i64) + n_plus - 2 * n_minus;
            let labels = (0..c).map(|i| mask >> i & 1 == 1).collect();
            buckets
                .entry((height, j))
                .or_default()
                .push(Generator { vertex: v, labels });
        }
    }
    for list in buckets.values_mut() {
        list.sort();
    }

    // the differential image of one generator
    let apply = |g: &Generator| -> Vec<(Generator, i64)> {
        let mut out = Vec::new();
        let v = g.vertex;
        let data = &vertices[v];
        for i in 0..n {
            if v >> i & 1 == 1 {
                continue;
            }
            let v2 = v | (1 << i);
            let data2 = &vertices[v2];
            let sign = if (v & ((1 << i) - 1)).count_ones() % 2 == 0 {
                1
            } else {
                -1
            };
            // map circles of v to circles of v2 via a representative label
            let image_of = |ci: usize| data2.circle_of[&data.circles[ci][0]];
            let free_base = data.circles.len();
            let free_base2 = data2.circles.len();
            if data2.circles.len() + 1 == data.circles.len() {
                // merge: multiplication
                let merged: Vec<usize> = (0..data.circles.len())
                    .filter(|&ci| {
                        (0..data.circles.len())
                            .any(|cj| cj != ci && image_of(cj) == image_of(ci))
                    })
                    .collect();
                debug_assert_eq!(merged.len(), 2);
                let xs = merged.iter().filter(|&&ci| g.labels[ci]).count();
                if xs == 2 {
                    continue; // X * X = 0
                }
                let product = xs == 1;
                let mut labels = vec![false; data2.circles.len() + pd.free_loops];
                for ci in 0..data.circles.len() {
                    if !merged.contains(&ci) {
                        labels[image_of(ci)] = g.labels[ci];
                    }
                }
                labels[image_of(merged[0])] = product;
                for f in 0..pd.free_loops {
                    labels[free_base2 + f] = g.labels[free_base + f];
                }
                out.push((Generator { vertex: v2, labels }, sign));
            } else {
                // split: comultiplication
                debug_assert_eq!(data2.circles.len(), data.circles.len() + 1);
                let split_source = (0..data.circles.len())
                    .find(|&ci| {
                        let target = image_of(ci);
                        data.circles[ci]
                            .iter()
                            .any(|l| data2.circle_of[l] != target)
                    })
                    .expect("one circle splits");
                let targets: Vec<usize> = {
                    let mut t: Vec<usize> = data.circles[split_source]
                        .iter()
                        .map(|l| data2.circle_of[l])
                        .collect();
                    t.sort();
                    t.dedup();
                    t
                };
                debug_assert_eq!(targets.len(), 2);
                let base: Vec<Option<bool>> = {
                    let mut labels = vec![None; data2.circles.len() + pd.free_loops];
                    for ci in 0..data.circles.len() {
                        if ci != split_source {
                            labels[image_of(ci)] = Some(g.labels[ci]);
                        }
                    }
                    for f in 0..pd.free_loops {
                        labels[free_base2 + f] = Some(g.labels[free_base + f]);
                    }
                    labels
                };
                let assignments: Vec<(bool, bool)> = if g.labels[split_source] {
                    vec![(true, true)] // X -> X @ X
                } else {
                    vec![(false, true), (true, false)] // 1 -> 1@X + X@1
                };
                for (l0, l1) in assignments {
                    let mut labels: Vec<bool> = base
                        .iter()
                        .map(|o| o.unwrap_or(false))
                        .collect();
                    labels[targets[0]] = l0;
                    labels[targets[1]] = l1;
                    out.push((Generator { vertex: v2, labels }, sign));
                }
            }
        }
        out
    };

    // ranks of the differential per bidegree
    let mut ranks: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(i, j), gens) in &buckets {
        let Some(targets) = buckets.get(&(i + 1, j)) else {
            continue;
        };
        let target_index: BTreeMap<&Generator, usize> =
            targets.iter().enumerate().map(|(t, g)| (g, t)).collect();
        let mut matrix: Vec<Vec<Q>> = vec![vec![q(0); gens.len()]; targets.len()];
        for (col, g) in gens.iter().enumerate() {
            for (img, sign) in apply(g) {
                let row = target_index[&img];
                matrix[row][col] += q(sign);
            }
        }
        ranks.insert((i, j), rational_rank(matrix));
    }

    let mut table = HomologyTable::new();
    for (&(i, j), gens) in &buckets {
        let out_rank = ranks.get(&(i, j)).copied().unwrap_or(0);
        let in_rank = ranks.get(&(i - 1, j)).copied().unwrap_or(0);
        table.add(i, j, gens.len() - out_rank - in_rank);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_single_circle() {
        let pd = PDCode::parse("PD[O]").unwrap();
        let t = cube_oracle(&pd).unwrap();
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(0, -1), 1);
        assert_eq!(t.total_dimension(), 2);
    }

    #[test]
    fn empty_link() {
        let pd = PDCode::parse("PD[]").unwrap();
        let t = cube_oracle(&pd).unwrap();
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.total_dimension(), 1);
    }

    #[test]
    fn kinked_unknot() {
        let pd = PDCode::parse("PD[X(1,1,2,2)]").unwrap();
        let t = cube_oracle(&pd).unwrap();
        assert_eq!(t.get(0, 1), 1, "table: {t:?}");
        assert_eq!(t.get(0, -1), 1);
        assert_eq!(t.total_dimension(), 2);
    }

    #[test]
    fn right_trefoil() {
        let pd = PDCode::parse("PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]").unwrap();
        let t = cube_oracle(&pd).unwrap();
        let expected =
            HomologyTable::from_entries(&[(0, 1, 1), (0, 3, 1), (2, 5, 1), (3, 9, 1)]);
        assert_eq!(t, expected, "got:\n{t}");
    }

    #[test]
    fn left_trefoil_is_mirror() {
        let pd = PDCode::parse("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        let t = cube_oracle(&pd).unwrap();
        let expected = HomologyTable::from_entries(&[
            (0, -1, 1),
            (0, -3, 1),
            (-2, -5, 1),
            (-3, -9, 1),
        ]);
        assert_eq!(t, expected, "got:\n{t}");
    }

    #[test]
    fn tangle_rejected() {
        let pd = PDCode::parse("PD[X(1,4,2,3)]").unwrap();
        assert!(matches!(cube_oracle(&pd), Err(CubeError::NotClosed(_))));
    }
}

//! Small shared utilities.

/// Disjoint-set forest with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of distinct classes.
    pub fn class_count(&mut self) -> usize {
        let n = self.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }

    /// Groups element indices by class root, in ascending order of the
    /// smallest member of each class.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        let mut first_seen: std::collections::BTreeMap<usize, usize> = Default::default();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
            first_seen.entry(r).or_insert(i);
        }
        let mut order: Vec<(usize, usize)> =
            first_seen.into_iter().map(|(r, f)| (f, r)).collect();
        order.sort();
        order.into_iter().map(|(_, r)| by_root[&r].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_union() {
        let mut uf = UnionFind::new(5);
        assert_eq!(uf.class_count(), 5);
        uf.union(0, 3);
        uf.union(3, 4);
        assert!(uf.same(0, 4));
        assert!(!uf.same(1, 4));
        assert_eq!(uf.class_count(), 3);
        assert_eq!(uf.classes(), vec![vec![0, 3, 4], vec![1], vec![2]]);
    }
}

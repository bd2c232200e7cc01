use alloc::vec::Vec;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Component labels in `[0, k)`, numbered by ascending smallest member.
    pub(crate) fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut by_root = alloc::vec![usize::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut k = 0;
        for x in 0..n {
            let r = self.find(x);
            if by_root[r] == usize::MAX {
                by_root[r] = k;
                k += 1;
            }
            labels.push(by_root[r]);
        }
        (labels, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_smallest_member() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(4, 1));
        assert!(uf.union(3, 2));
        assert!(!uf.union(1, 4));
        let (labels, k) = uf.labels();
        assert_eq!(k, 3);
        assert_eq!(labels, [0, 1, 2, 2, 1]);
    }
}

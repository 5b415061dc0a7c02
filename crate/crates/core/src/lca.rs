//! Constant-time lowest common ancestor via Euler tour and a sparse table
//! of minimum depths.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerLca {
    first: Vec<usize>,
    euler: Vec<usize>,
    depth: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl EulerLca {
    /// `children[v]` lists the children of node `v`; `root` has no parent.
    pub fn new(children: &[Vec<usize>], root: usize) -> Self {
        let n = children.len();
        let mut first = vec![0; n];
        let mut depth = vec![0; n];
        let mut euler = Vec::with_capacity(2 * n);
        // (node, index of the next child to visit)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        first[root] = 0;
        euler.push(root);
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if next < children[v].len() {
                top.1 += 1;
                let c = children[v][next];
                depth[c] = depth[v] + 1;
                first[c] = euler.len();
                euler.push(c);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p);
                }
            }
        }

        let len = euler.len();
        let mut table = vec![(0..len).collect::<Vec<usize>>()];
        let mut k = 1;
        while (1 << k) <= len {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<usize> = (0..=len - (1 << k))
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + half]);
                    if depth[euler[a]] <= depth[euler[b]] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            k += 1;
        }
        EulerLca {
            first,
            euler,
            depth,
            table,
        }
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut l, mut r) = (self.first[a], self.first[b]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let span = r - l + 1;
        let k = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let (i, j) = (self.table[k][l], self.table[k][r + 1 - (1 << k)]);
        if self.depth[self.euler[i]] <= self.depth[self.euler[j]] {
            self.euler[i]
        } else {
            self.euler[j]
        }
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_lca(parent: &[Option<usize>], a: usize, b: usize) -> usize {
        let mut anc = vec![false; parent.len()];
        let mut x = Some(a);
        while let Some(v) = x {
            anc[v] = true;
            x = parent[v];
        }
        let mut y = b;
        while !anc[y] {
            y = parent[y].unwrap();
        }
        y
    }

    #[test]
    fn small_tree() {
        //      0
        //    1   2
        //   3 4   5
        let children = vec![vec![1, 2], vec![3, 4], vec![5], vec![], vec![], vec![]];
        let l = EulerLca::new(&children, 0);
        assert_eq!(l.lca(3, 4), 1);
        assert_eq!(l.lca(3, 5), 0);
        assert_eq!(l.lca(2, 5), 2);
        assert_eq!(l.lca(4, 4), 4);
    }

    proptest! {
        #[test]
        fn matches_naive(parents in proptest::collection::vec(0usize..1000, 1..60)) {
            let n = parents.len() + 1;
            let mut parent = vec![None; n];
            let mut children = vec![Vec::new(); n];
            for (i, p) in parents.iter().enumerate() {
                let v = i + 1;
                let p = p % v;
                parent[v] = Some(p);
                children[p].push(v);
            }
            let l = EulerLca::new(&children, 0);
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(l.lca(a, b), naive_lca(&parent, a, b));
                }
            }
        }
    }
}

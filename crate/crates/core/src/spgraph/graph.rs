use serde::Serialize;

/// Simple undirected graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    /// Vertex -> external label (a point id for geometric graphs).
    labels: Vec<usize>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edge_count())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words], labels: (0..n).collect() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Builds a graph from a symmetric predicate evaluated on `i < j`.
    pub fn from_fn(n: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adj(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
        self.bits[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] &= !(1 << (b % 64));
        self.bits[b * self.words + a / 64] &= !(1 << (a % 64));
    }

    pub fn toggle_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        self.bits[a * self.words + b / 64] ^= 1 << (b % 64);
        self.bits[b * self.words + a / 64] ^= 1 << (a % 64);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    #[inline]
    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary { vertices: self.n, edges: self.edge_count() }
    }

    /// The common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            let row = &mut g.bits[v * self.words..(v + 1) * self.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            // clear the diagonal and the padding past n
            row[v / 64] &= !(1 << (v % 64));
            let tail = self.n % 64;
            if tail != 0 {
                row[self.words - 1] &= (1u64 << tail) - 1;
            }
        }
        g
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for a in 0..self.n {
            for b in self.neighbors(a) {
                if a < b {
                    g.add_edge(perm[a], perm[b]);
                }
            }
        }
        let mut labels = vec![0; self.n];
        for v in 0..self.n {
            labels[perm[v]] = self.labels[v];
        }
        g.labels = labels;
        g
    }

    pub fn induced(&self, verts: &[usize]) -> Graph {
        let g = Graph::from_fn(verts.len(), |i, j| self.has_edge(verts[i], verts[j]));
        g.with_labels(verts.iter().map(|&v| self.labels[v]).collect())
    }

    pub fn is_clique(&self, verts: &[usize]) -> bool {
        verts
            .iter()
            .enumerate()
            .all(|(i, &a)| verts[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Number of triangles, a cheap isomorphism invariant.
    pub fn triangle_count(&self) -> usize {
        let mut t = 0;
        for a in 0..self.n {
            for b in self.neighbors(a).filter(|&b| b > a) {
                t += self.row(a)
                    .iter()
                    .zip(self.row(b))
                    .enumerate()
                    .map(|(wi, (x, y))| {
                        let mut m = x & y;
                        // count only c > b
                        let base = wi * 64;
                        if base + 64 <= b + 1 {
                            m = 0;
                        } else if base <= b {
                            m &= !((2u64 << (b - base)) - 1);
                        }
                        m.count_ones() as usize
                    })
                    .sum::<usize>();
            }
        }
        t
    }

    /// Adjacency as a flat 0/1 matrix (row-major).
    pub fn adjacency_matrix(&self) -> Vec<u8> {
        let mut m = vec![0u8; self.n * self.n];
        for a in 0..self.n {
            for b in self.neighbors(a) {
                m[a * self.n + b] = 1;
            }
        }
        m
    }
}

pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            }
        })
    })
}

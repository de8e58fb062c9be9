//! Canonical labelling by partition refinement and individualization.
//!
//! Each search-tree node is an equitable ordered partition. The first
//! smallest non-singleton cell is the target cell, and each of its vertices
//! is individualized in turn. Every node carries a hash of its refinement
//! trace. The canonical leaf is the leaf with the greatest
//! (trace sequence, relabelled adjacency) key. Automorphisms found at
//! equivalent leaves prune sibling subtrees.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spgraph::Graph;

pub const DEFAULT_CANONICAL_BUDGET: usize = 2_000_000;

/// Relabelled adjacency rows of the canonical leaf. Two graphs are isomorphic
/// iff their certificates are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub rows: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct CanonicalLabeling {
    pub certificate: Certificate,
    /// `order[i]` is the vertex placed at position `i`.
    pub order: Vec<usize>,
    /// Automorphisms found during the search, as vertex maps.
    pub automorphisms: Vec<Vec<usize>>,
    pub nodes: usize,
}

pub fn canonical_form(g: &Graph) -> Result<Certificate> {
    Ok(canonical_labeling(g, DEFAULT_CANONICAL_BUDGET)?.certificate)
}

pub fn canonical_labeling(g: &Graph, budget: usize) -> Result<CanonicalLabeling> {
    let n = g.n();
    if n > 400 {
        return Err(Error::Domain(format!("canonical form supports at most 400 vertices, got {n}")));
    }
    let mut root = Partition::unit(n);
    let t = root.refine(g, vec![0]);
    let mut s = Search { g, budget, nodes: 1, first: None, best: None, gens: Vec::new() };
    if n > 0 {
        s.search(&root, &mut vec![t], &mut Vec::new())?;
    }
    let (order, certificate) = match s.best {
        Some(b) => (b.order, b.cert),
        None => (Vec::new(), Certificate { n: 0, rows: Vec::new() }),
    };
    Ok(CanonicalLabeling { certificate, order, automorphisms: s.gens, nodes: s.nodes })
}

/// Ordered partition: `lab` lists vertices by position; a cell starting at
/// position `p` has length `len[p]` (zero at non-start positions).
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    len: Vec<u32>,
    start_of: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut len = vec![0; n];
        if n > 0 {
            len[0] = n as u32;
        }
        Partition { lab: (0..n as u32).collect(), len, start_of: vec![0; n], cells: n.min(1) }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn target(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut p = 0;
        while p < self.lab.len() {
            let l = self.len[p] as usize;
            if l > 1 && best.is_none_or(|b| l < self.len[b] as usize) {
                best = Some(p);
            }
            p += l;
        }
        best
    }

    fn individualize(&self, v: usize) -> (Partition, usize) {
        let mut c = self.clone();
        let s = c.start_of[v] as usize;
        let l = c.len[s] as usize;
        let pos = c.lab[s..s + l].iter().position(|&x| x as usize == v).unwrap() + s;
        c.lab.swap(s, pos);
        c.len[s] = 1;
        c.len[s + 1] = (l - 1) as u32;
        for &x in &c.lab[s + 1..s + l] {
            c.start_of[x as usize] = (s + 1) as u32;
        }
        c.cells += 1;
        (c, s)
    }

    /// Refines to the coarsest equitable refinement, returning a hash of the
    /// split events.
    fn refine(&mut self, g: &Graph, splitters: Vec<usize>) -> u64 {
        let n = self.lab.len();
        let words = g.words();
        let mut queue: VecDeque<usize> = splitters.into();
        let mut queued = vec![false; n];
        for &s in &queue {
            queued[s] = true;
        }
        let mut h = Mix::new();
        let mut mask = vec![0u64; words];
        let mut counts = vec![0u32; n];
        let mut buf: Vec<(u32, u32)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if self.is_discrete() {
                break;
            }
            mask.iter_mut().for_each(|x| *x = 0);
            for &v in &self.lab[w..w + self.len[w] as usize] {
                mask[v as usize / 64] |= 1 << (v % 64);
            }
            let mut p = 0;
            while p < n {
                let l = self.len[p] as usize;
                if l == 1 {
                    p += 1;
                    continue;
                }
                for &v in &self.lab[p..p + l] {
                    let row = g.row(v as usize);
                    counts[v as usize] =
                        row.iter().zip(&mask).map(|(a, b)| (a & b).count_ones()).sum();
                }
                let c0 = counts[self.lab[p] as usize];
                if self.lab[p..p + l].iter().all(|&v| counts[v as usize] == c0) {
                    p += l;
                    continue;
                }
                buf.clear();
                buf.extend(self.lab[p..p + l].iter().map(|&v| (counts[v as usize], v)));
                buf.sort_unstable();
                h.push(p as u64);
                h.push(w as u64);
                let was_queued = queued[p];
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut i = 0;
                while i < l {
                    let mut j = i;
                    while j < l && buf[j].0 == buf[i].0 {
                        j += 1;
                    }
                    frags.push((p + i, j - i));
                    h.push(((buf[i].0 as u64) << 32) | (j - i) as u64);
                    i = j;
                }
                for (k, &(_, v)) in buf.iter().enumerate() {
                    self.lab[p + k] = v;
                }
                for &(fs, fl) in &frags {
                    self.len[fs] = fl as u32;
                    for &v in &self.lab[fs..fs + fl] {
                        self.start_of[v as usize] = fs as u32;
                    }
                }
                self.cells += frags.len() - 1;
                let skip = if was_queued {
                    Some(p)
                } else {
                    let big = frags.iter().map(|f| f.1).max().unwrap();
                    frags.iter().find(|f| f.1 == big).map(|f| f.0)
                };
                for &(fs, _) in &frags {
                    if Some(fs) != skip && !queued[fs] {
                        queued[fs] = true;
                        queue.push_back(fs);
                    }
                }
                p += l;
            }
        }
        h.push(self.cells as u64);
        h.finish()
    }
}

/// Deterministic 64-bit mixing for trace hashes.
struct Mix(u64);

impl Mix {
    fn new() -> Self {
        Mix(0x243f_6a88_85a3_08d3)
    }
    fn push(&mut self, x: u64) {
        let mut z = self.0 ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

struct Leaf {
    traces: Vec<u64>,
    cert: Certificate,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    budget: usize,
    nodes: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(d)` to unwind to the node at depth `d`.
    fn search(
        &mut self,
        node: &Partition,
        traces: &mut Vec<u64>,
        path: &mut Vec<usize>,
    ) -> Result<Option<usize>> {
        let Some(t) = node.target() else {
            return Ok(self.leaf(node, traces, path));
        };
        let cell: Vec<usize> = node.lab[t..t + node.len[t] as usize].iter().map(|&v| v as usize).collect();
        let mut cell_sorted = cell.clone();
        cell_sorted.sort_unstable();
        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell_sorted {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, path) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget(format!(
                    "canonical search exceeded {} nodes at depth {depth}; {} cells at this node, {} automorphisms found",
                    self.budget,
                    node.cells,
                    self.gens.len()
                )));
            }
            let (mut child, s) = node.individualize(v);
            let tr = child.refine(self.g, vec![s]);
            traces.push(tr);
            path.push(v);
            let prune = self
                .best
                .as_ref()
                .is_some_and(|b| cmp_prefix(traces, &b.traces) == Ordering::Less);
            let r = if prune { None } else { self.search(&child, traces, path)? };
            traces.pop();
            path.pop();
            explored.push(v);
            if let Some(d) = r {
                if d < depth {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, node: &Partition, traces: &[u64], path: &[usize]) -> Option<usize> {
        let g = self.g;
        let n = g.n();
        let order: Vec<usize> = node.lab.iter().map(|&v| v as usize).collect();
        let cert = certificate(g, &order);
        let Some(first) = &self.first else {
            let leaf = Leaf { traces: traces.to_vec(), cert, order, path: path.to_vec() };
            self.first = Some(clone_leaf(&leaf));
            self.best = Some(leaf);
            return None;
        };
        if first.traces == traces && first.cert == cert {
            let gamma = map_between(&first.order, &order, n);
            let d = common_prefix(&first.path, path);
            self.gens.push(gamma);
            return Some(d);
        }
        let best = self.best.as_ref().unwrap();
        match (traces, &cert).cmp(&(&best.traces[..], &best.cert)) {
            Ordering::Greater => {
                self.best = Some(Leaf { traces: traces.to_vec(), cert, order, path: path.to_vec() });
                None
            }
            Ordering::Equal => {
                let gamma = map_between(&best.order, &order, n);
                let d = common_prefix(&best.path, path);
                self.gens.push(gamma);
                Some(d)
            }
            Ordering::Less => None,
        }
    }

    /// Whether `v` is in the orbit of an explored sibling under the
    /// automorphisms found so far that fix every vertex of `path`.
    fn in_explored_orbit(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let fixing: Vec<&Vec<usize>> =
            self.gens.iter().filter(|g| path.iter().all(|&p| g[p] == p)).collect();
        if fixing.is_empty() {
            return false;
        }
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gamma in fixing {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

fn clone_leaf(l: &Leaf) -> Leaf {
    Leaf { traces: l.traces.clone(), cert: l.cert.clone(), order: l.order.clone(), path: l.path.clone() }
}

fn cmp_prefix(a: &[u64], b: &[u64]) -> Ordering {
    let k = a.len().min(b.len());
    a[..k].cmp(&b[..k])
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The vertex map sending `from[i]` to `to[i]`.
fn map_between(from: &[usize], to: &[usize], n: usize) -> Vec<usize> {
    let mut gamma = vec![0; n];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

fn certificate(g: &Graph, order: &[usize]) -> Certificate {
    let n = order.len();
    let words = n.div_ceil(64).max(1);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut rows = vec![0u64; n * words];
    for (i, &v) in order.iter().enumerate() {
        for u in g.neighbors(v) {
            let j = pos[u];
            rows[i * words + j / 64] |= 1 << (j % 64);
        }
    }
    Certificate { n, rows }
}

/// Whether `g` and `h` are isomorphic, by comparing certificates.
pub fn isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(g.n() == h.n() && g.edge_count() == h.edge_count() && canonical_form(g)? == canonical_form(h)?)
}

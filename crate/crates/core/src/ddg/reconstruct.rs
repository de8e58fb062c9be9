//! Recovers W(q) and the spread from `gbar`, the complement of a spread DDG,
//! that is Sp(4,q) minus the edges between paired spread lines.
//!
//! Every isotropic line meets each spread pair it touches on both sides, so
//! the removed edges cut a perfect matching out of every isotropic line. The
//! local graphs of `gbar` are therefore unions of cocktail-party graphs (K_{q-1}
//! minus a perfect matching), not cliques. Recovery goes through the
//! DDG classes instead:
//! 1. spread lines are the classes of "λ1 common neighbours in the complement";
//! 2. the partner of a class is the unique class with no edges to it;
//! 3. adding the partner edges back gives Sp(4,q), whose local graphs are
//!    q+1 cliques of size q, one per isotropic line through the vertex.
//!
//! Pairs collinear in the recovered geometry but not adjacent in `gbar` are
//! checked to be exactly the partner pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spgraph::Graph;
use crate::spreads::{SpecialSpread, SymplecticQuadrangle};

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub q: usize,
    /// Component size -> count, over the local graphs of all vertices of `gbar`.
    pub local_component_sizes: BTreeMap<usize, usize>,
    /// Sets `k \ {y}` for isotropic lines k, read off the local graphs of the
    /// restored Sp(4,q).
    pub truncated_lines: Vec<Vec<usize>>,
    /// Isotropic lines, each sorted; the list sorted.
    pub symplectic_lines: Vec<Vec<usize>>,
    /// Spread lines, each sorted; the list sorted.
    pub hyperbolic_lines: Vec<Vec<usize>>,
}

fn fail(stage: &str, witness: String) -> Error {
    Error::cert(format!("reconstruction/{stage}"), witness)
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for t in g.neighbors(comp[i]) {
                if !seen[t] {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

pub fn reconstruct(gbar: &Graph) -> Result<Reconstruction> {
    let v = gbar.n();
    let q = (2..64)
        .find(|&q| (q * q + 1) * (q + 1) == v)
        .ok_or_else(|| fail("order", format!("{v} is not (q^2+1)(q+1)")))?;
    let mut local_component_sizes = BTreeMap::new();
    for y in 0..v {
        let nb: Vec<usize> = gbar.neighbors(y).collect();
        for c in components(&gbar.induced(&nb)) {
            *local_component_sizes.entry(c.len()).or_insert(0) += 1;
        }
    }

    // spread lines: pairs with λ1 = q^3-q^2+q+1 common neighbours in the complement
    let gamma = gbar.complement();
    let lambda1 = q * q * q - q * q + q + 1;
    let mut class = vec![usize::MAX; v];
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for a in 0..v {
        if class[a] != usize::MAX {
            continue;
        }
        let mut line = vec![a];
        line.extend((a + 1..v).filter(|&b| gamma.common_neighbors(a, b) == lambda1));
        if line.len() != q + 1 {
            return Err(fail("classes", format!("vertex {a} has {} class mates, expected {q}", line.len() - 1)));
        }
        for &b in &line {
            if class[b] != usize::MAX {
                return Err(fail("classes", format!("vertex {b} lies in two classes")));
            }
            class[b] = lines.len();
        }
        lines.push(line);
    }
    if lines.len() != q * q + 1 {
        return Err(fail("classes", format!("{} classes, expected {}", lines.len(), q * q + 1)));
    }

    // partners: the unique class with no edges
    let m = lines.len();
    let mut partner = vec![usize::MAX; m];
    for i in 0..m {
        let empty: Vec<usize> = (0..m)
            .filter(|&j| j != i && lines[i].iter().all(|&a| lines[j].iter().all(|&b| !gbar.has_edge(a, b))))
            .collect();
        if empty.len() != 1 {
            return Err(fail("partners", format!("class {i} has no edges to classes {empty:?}")));
        }
        partner[i] = empty[0];
    }
    if let Some(i) = (0..m).find(|&i| partner[partner[i]] != i) {
        return Err(fail("partners", format!("partner of class {i} is not symmetric")));
    }

    let mut sp = gbar.clone();
    for i in 0..m {
        for &a in &lines[i] {
            for &b in &lines[partner[i]] {
                sp.add_edge(a, b);
            }
        }
    }

    // isotropic lines from the local graphs of Sp(4,q)
    let mut symplectic: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut truncated: BTreeSet<Vec<usize>> = BTreeSet::new();
    for y in 0..v {
        let nb: Vec<usize> = sp.neighbors(y).collect();
        let local = sp.induced(&nb);
        let comps = components(&local);
        if comps.len() != q + 1 {
            return Err(fail("local-graph", format!("vertex {y} has {} components, expected {}", comps.len(), q + 1)));
        }
        let far = &lines[partner[class[y]]];
        for c in comps {
            if c.len() != q || !local.is_clique(&c) {
                return Err(fail("local-graph", format!("vertex {y}: component of size {} is not a {q}-clique", c.len())));
            }
            let mut line: Vec<usize> = c.iter().map(|&i| nb[i]).collect();
            line.push(y);
            line.sort_unstable();
            let cut: Vec<usize> = line.iter().copied().filter(|p| !far.contains(p)).collect();
            if cut.len() != q {
                return Err(fail("truncation", format!("line {line:?} meets the partner of {y}'s class {} times", q + 1 - cut.len())));
            }
            truncated.insert(cut);
            symplectic.insert(line);
        }
    }
    let symplectic: Vec<Vec<usize>> = symplectic.into_iter().collect();
    if symplectic.len() != (q + 1) * (q * q + 1) {
        return Err(fail("lines", format!("{} lines, expected {}", symplectic.len(), (q + 1) * (q * q + 1))));
    }

    // pairs collinear in the recovered geometry but not adjacent in gbar
    let mut collinear = Graph::new(v);
    for l in &symplectic {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                collinear.add_edge(a, b);
            }
        }
    }
    let mut hyperbolic: BTreeSet<Vec<usize>> = BTreeSet::new();
    for u in 0..v {
        let t: Vec<usize> = collinear.neighbors(u).filter(|&x| !gbar.has_edge(u, x)).collect();
        if t != lines[partner[class[u]]] {
            return Err(fail("hyperbolic", format!("vertex {u}: removed neighbours {t:?} are not the partner class")));
        }
        hyperbolic.insert(t);
    }
    Ok(Reconstruction {
        q,
        local_component_sizes,
        truncated_lines: truncated.into_iter().collect(),
        symplectic_lines: symplectic,
        hyperbolic_lines: hyperbolic.into_iter().collect(),
    })
}

/// Compares a reconstruction with the isotropic lines of `w` and the lines
/// of `s`.
pub fn check_reconstruction(w: &SymplecticQuadrangle, s: &SpecialSpread, r: &Reconstruction) -> Result<()> {
    let mut iso: Vec<Vec<usize>> = w.isotropic_lines().iter().map(|&l| w.line_points(l).to_vec()).collect();
    for l in iso.iter_mut() {
        l.sort_unstable();
    }
    iso.sort();
    if iso != r.symplectic_lines {
        let bad = r.symplectic_lines.iter().find(|l| !iso.contains(l));
        return Err(fail("compare", format!("symplectic lines differ, e.g. {bad:?}")));
    }
    if s.lines != r.hyperbolic_lines {
        let bad = r.hyperbolic_lines.iter().find(|l| !s.lines.contains(l));
        return Err(fail("compare", format!("hyperbolic lines differ, e.g. {bad:?}")));
    }
    Ok(())
}

//! Algorithm X over bitsets.
//!
//! Every row keeps a bitset of the rows it conflicts with and every column a
//! bitset of the rows covering it. A search node is just the set of rows still
//! available plus the set of columns still uncovered. Branching always uses
//! the uncovered column with the fewest available rows (lowest index on ties),
//! so the order of emitted solutions is deterministic.

mod spread;

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use spread::{
    build_dual_instance, build_spread_instance, enumerate_special_spreads, EnumerationMode,
    EnumerationResult,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCoverInstance {
    pub n_cols: usize,
    pub rows: Vec<Vec<usize>>,
    /// Caller payload per row (e.g. a hyperbolic-pair index).
    pub row_tags: Vec<usize>,
}

impl ExactCoverInstance {
    pub fn new(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let row_tags = (0..rows.len()).collect();
        let inst = ExactCoverInstance { n_cols, rows, row_tags };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.row_tags.len() != self.rows.len() {
            return Err(Error::Validation("row_tags and rows differ in length".into()));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!("row {i} is not strictly increasing")));
            }
            if r.last().is_some_and(|&c| c >= self.n_cols) {
                return Err(Error::Validation(format!("row {i} has a column out of range")));
            }
        }
        Ok(())
    }

    /// Columns that no row covers; a nonempty result means no solution exists.
    pub fn uncovered_columns(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_cols];
        for r in &self.rows {
            for &c in r {
                seen[c] = true;
            }
        }
        (0..self.n_cols).filter(|&c| !seen[c]).collect()
    }

    /// `# cols N` followed by one row per line, columns separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = format!("# cols {}\n", self.n_cols);
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Validation("empty instance".into()))?;
        let n_cols = header
            .strip_prefix("# cols ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::Validation(format!("bad header {header:?}")))?;
        let rows = lines
            .filter(|l| !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|e| Error::Validation(e.to_string())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_cols, rows)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub forced_rows: Vec<usize>,
    pub max_solutions: Option<usize>,
    /// Split the top-level branches across the rayon pool.
    pub parallel: bool,
}

/// Position in the search tree: for every open frame, how many of its
/// candidate rows have been started. Resuming from a checkpoint continues
/// exactly where the interrupted run stopped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub forced_rows: Vec<usize>,
    pub frames: Vec<usize>,
    pub emitted: u64,
    pub finished: bool,
}

pub struct Solver<'a> {
    inst: &'a ExactCoverInstance,
    row_cols: Vec<BitSet>,
    col_rows: Vec<BitSet>,
    conflicts: Vec<BitSet>,
}

struct Frame {
    avail: BitSet,
    uncovered: BitSet,
    candidates: Vec<usize>,
    next: usize,
}

enum Step {
    Solution,
    DeadEnd,
    Frame(Frame),
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a ExactCoverInstance) -> Result<Self> {
        inst.validate()?;
        let nr = inst.rows.len();
        let row_cols: Vec<BitSet> =
            inst.rows.iter().map(|r| BitSet::from_iter(inst.n_cols, r.iter().copied())).collect();
        let mut col_rows = vec![BitSet::new(nr); inst.n_cols];
        for (i, r) in inst.rows.iter().enumerate() {
            for &c in r {
                col_rows[c].insert(i);
            }
        }
        let conflicts = (0..nr)
            .map(|i| {
                let mut b = BitSet::new(nr);
                for &c in &inst.rows[i] {
                    b.union_with(&col_rows[c]);
                }
                b.insert(i);
                b
            })
            .collect();
        Ok(Solver { inst, row_cols, col_rows, conflicts })
    }

    fn root(&self, forced: &[usize]) -> Option<(BitSet, BitSet)> {
        let mut avail = BitSet::full(self.inst.rows.len());
        let mut uncovered = BitSet::full(self.inst.n_cols);
        for &r in forced {
            if r >= self.inst.rows.len() || !avail.contains(r) {
                return None;
            }
            avail.difference_with(&self.conflicts[r]);
            uncovered.difference_with(&self.row_cols[r]);
        }
        Some((avail, uncovered))
    }

    fn step(&self, avail: BitSet, uncovered: BitSet) -> Step {
        if uncovered.is_empty() {
            return Step::Solution;
        }
        let mut best: Option<(usize, usize)> = None;
        for c in uncovered.iter() {
            let k = self.col_rows[c].intersection_len(&avail);
            if best.is_none_or(|(_, bk)| k < bk) {
                best = Some((c, k));
                if k == 0 {
                    return Step::DeadEnd;
                }
            }
        }
        let (c, _) = best.unwrap();
        let mut cand = self.col_rows[c].clone();
        cand.intersect_with(&avail);
        Step::Frame(Frame { avail, uncovered, candidates: cand.iter().collect(), next: 0 })
    }

    fn apply(&self, f: &Frame, r: usize) -> (BitSet, BitSet) {
        let mut a = f.avail.clone();
        a.difference_with(&self.conflicts[r]);
        let mut u = f.uncovered.clone();
        u.difference_with(&self.row_cols[r]);
        (a, u)
    }

    /// Streams solutions (row indices, forced rows first) to `visit`, starting
    /// from `resume` if given. `visit` also receives the checkpoint valid
    /// right after that solution.
    pub fn run(
        &self,
        forced: &[usize],
        resume: Option<&Checkpoint>,
        visit: impl FnMut(&[usize], &Checkpoint) -> ControlFlow<()>,
    ) -> Checkpoint {
        self.search(forced, None, resume, visit)
    }

    fn search(
        &self,
        forced: &[usize],
        banned: Option<&BitSet>,
        resume: Option<&Checkpoint>,
        mut visit: impl FnMut(&[usize], &Checkpoint) -> ControlFlow<()>,
    ) -> Checkpoint {
        let mut ck = Checkpoint { forced_rows: forced.to_vec(), ..Default::default() };
        let Some((mut avail, uncovered)) = self.root(forced) else {
            ck.finished = true;
            return ck;
        };
        if let Some(b) = banned {
            avail.difference_with(b);
        }
        if let Some(r) = resume {
            if r.finished {
                return r.clone();
            }
            ck.emitted = r.emitted;
        }
        let mut chosen: Vec<usize> = forced.to_vec();
        let base = chosen.len();
        let mut stack: Vec<Frame> = Vec::new();
        match self.step(avail, uncovered) {
            Step::Solution => {
                if resume.is_none() {
                    ck.emitted += 1;
                    ck.finished = true;
                    let _ = visit(&chosen, &ck);
                }
                ck.finished = true;
                return ck;
            }
            Step::DeadEnd => {
                ck.finished = true;
                return ck;
            }
            Step::Frame(f) => stack.push(f),
        }
        if let Some(r) = resume {
            // rebuild the open frames along the recorded path
            for (depth, &next) in r.frames.iter().enumerate() {
                let top = stack.last_mut().expect("checkpoint deeper than the tree");
                top.next = next;
                if depth + 1 == r.frames.len() {
                    break;
                }
                let row = top.candidates[next - 1];
                let (a, u) = self.apply(top, row);
                chosen.truncate(base + depth);
                chosen.push(row);
                match self.step(a, u) {
                    Step::Frame(f) => stack.push(f),
                    _ => panic!("checkpoint does not match this instance"),
                }
            }
        }
        while let Some(top) = stack.last_mut() {
            if top.next >= top.candidates.len() {
                stack.pop();
                continue;
            }
            let row = top.candidates[top.next];
            top.next += 1;
            let depth = stack.len() - 1;
            let (a, u) = self.apply(stack.last().unwrap(), row);
            chosen.truncate(base + depth);
            chosen.push(row);
            match self.step(a, u) {
                Step::Solution => {
                    ck.emitted += 1;
                    ck.frames = stack.iter().map(|f| f.next).collect();
                    if visit(&chosen, &ck).is_break() {
                        return ck;
                    }
                }
                Step::DeadEnd => {}
                Step::Frame(f) => stack.push(f),
            }
        }
        ck.frames.clear();
        ck.finished = true;
        ck
    }

    /// Root-level candidate rows (the branches of the first choice).
    fn top_branches(&self, forced: &[usize]) -> Option<Vec<usize>> {
        let (a, u) = self.root(forced)?;
        match self.step(a, u) {
            Step::Frame(f) => Some(f.candidates),
            _ => None,
        }
    }
}

/// All exact covers extending `opts.forced_rows`, in deterministic order.
/// Each solution lists row indices with the forced rows first.
pub fn solve_all(inst: &ExactCoverInstance, opts: &SolveOptions) -> Result<Vec<Vec<usize>>> {
    let solver = Solver::new(inst)?;
    let forced = &opts.forced_rows;
    let cap = opts.max_solutions.unwrap_or(usize::MAX);
    let collect = |forced: &[usize], cap: usize| {
        let mut out = Vec::new();
        solver.run(forced, None, |s, _| {
            out.push(s.to_vec());
            if out.len() >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    };
    if !opts.parallel || opts.max_solutions.is_some() {
        return Ok(collect(forced, cap));
    }
    let Some(branches) = solver.top_branches(forced) else {
        return Ok(collect(forced, cap));
    };
    // Branch i must not use the rows of branches 0..i, exactly as the
    // sequential search after backtracking out of them.
    let per_branch: Vec<Vec<Vec<usize>>> = branches
        .par_iter()
        .enumerate()
        .map(|(i, &row)| {
            let banned = BitSet::from_iter(inst.rows.len(), branches[..i].iter().copied());
            let mut f = forced.clone();
            f.push(row);
            let mut out = Vec::new();
            solver.search(&f, Some(&banned), None, |s, _| {
                out.push(s.to_vec());
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    Ok(per_branch.into_iter().flatten().collect())
}

/// Number of exact covers, counted in parallel over top-level branches.
pub fn count_solutions(inst: &ExactCoverInstance, forced: &[usize]) -> Result<u64> {
    let opts = SolveOptions { forced_rows: forced.to_vec(), max_solutions: None, parallel: true };
    Ok(solve_all(inst, &opts)?.len() as u64)
}

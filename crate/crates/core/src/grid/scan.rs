//! Depth-first scans over `s`-subsets of left vertices in lexicographic
//! order, carrying the running intersection of neighbor rows.
//!
//! Work is split by the first chosen index. Each branch is independent, so
//! the parallel and sequential paths report the same subset.

use std::sync::atomic::{AtomicU32, Ordering};

use serde::{Deserialize, Serialize};

use super::{install, is_parallel, BipartiteGraph, BitRow, Execution, ScanOptions};
use crate::error::{Error, Result};

/// `S × T` inside the edge set, `|S| = s`, `|T| = t`, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWitness {
    #[serde(rename = "S")]
    pub left: Vec<usize>,
    #[serde(rename = "T")]
    pub right: Vec<usize>,
}

impl GridWitness {
    /// Checks every incidence before accepting the witness.
    pub fn new(g: &BipartiteGraph, mut left: Vec<usize>, mut right: Vec<usize>) -> Result<GridWitness> {
        left.sort_unstable();
        right.sort_unstable();
        left.dedup();
        right.dedup();
        let ok = left.iter().all(|&i| i < g.left_len())
            && right.iter().all(|&j| j < g.right_len())
            && left.iter().all(|&i| right.iter().all(|&j| g.has_edge(i, j)));
        if !ok {
            return Err(Error::ParameterOutOfRange("witness is not contained in the edge set".into()));
        }
        Ok(GridWitness { left, right })
    }

    pub fn verify(&self, g: &BipartiteGraph) -> bool {
        self.left.iter().all(|&i| self.right.iter().all(|&j| g.has_edge(i, j)))
    }
}

/// Largest common neighborhood over `s`-subsets, with the first subset
/// (lexicographically) attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCommon {
    pub size: u32,
    #[serde(rename = "S")]
    pub left: Vec<usize>,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_s(g: &BipartiteGraph, s: usize) -> Result<()> {
    if s == 0 || s > g.left_len() {
        return Err(Error::ParameterOutOfRange(format!(
            "s = {s} must lie in 1..={}",
            g.left_len()
        )));
    }
    Ok(())
}

struct Walker<'a> {
    rows: &'a [BitRow],
    s: usize,
    chosen: Vec<usize>,
    /// `stack[d]` holds the intersection of the first `d + 1` chosen rows.
    stack: Vec<BitRow>,
}

impl<'a> Walker<'a> {
    fn new(rows: &'a [BitRow], s: usize, first: usize) -> Walker<'a> {
        let mut stack = vec![BitRow::zeros(rows[0].len()); s];
        stack[0] = rows[first].clone();
        Walker { rows, s, chosen: vec![first], stack }
    }

    /// First completion (in lexicographic order) whose common neighborhood
    /// has at least `need` elements.
    fn first(&mut self, depth: usize, need: u32) -> bool {
        let n = self.rows.len();
        let last = n - (self.s - depth);
        let start = self.chosen[depth - 1] + 1;
        for i in start..=last {
            let (done, rest) = self.stack.split_at_mut(depth);
            let c = BitRow::and_into(&done[depth - 1], &self.rows[i], &mut rest[0]);
            if c < need {
                continue;
            }
            self.chosen.push(i);
            if depth + 1 == self.s || self.first(depth + 1, need) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }

    /// Best completion; `best` is this branch's record, `global` the best
    /// size seen by any branch so far.
    fn best(&mut self, depth: usize, best: &mut Option<(u32, Vec<usize>)>, global: &AtomicU32) {
        let n = self.rows.len();
        let last = n - (self.s - depth);
        let start = self.chosen[depth - 1] + 1;
        for i in start..=last {
            let bar = best.as_ref().map(|b| b.0);
            if depth + 1 == self.s {
                let c = self.stack[depth - 1].and_count(&self.rows[i]);
                if bar.is_none_or(|b| c > b) && c >= global.load(Ordering::Relaxed) {
                    let mut set = self.chosen.clone();
                    set.push(i);
                    *best = Some((c, set));
                }
                continue;
            }
            let (done, rest) = self.stack.split_at_mut(depth);
            let c = BitRow::and_into(&done[depth - 1], &self.rows[i], &mut rest[0]);
            if bar.is_some_and(|b| c <= b) || c < global.load(Ordering::Relaxed) {
                continue;
            }
            self.chosen.push(i);
            self.best(depth + 1, best, global);
            self.chosen.pop();
        }
    }
}

fn first_in_branch(g: &BipartiteGraph, s: usize, t: u32, i0: usize) -> Option<GridWitness> {
    let rows = g.rows();
    let (set, common) = if s == 1 {
        (vec![i0], rows[i0].clone())
    } else {
        if rows[i0].count() < t {
            return None;
        }
        let mut w = Walker::new(rows, s, i0);
        if !w.first(1, t) {
            return None;
        }
        (w.chosen, w.stack[s - 1].clone())
    };
    if common.count() < t {
        return None;
    }
    let right: Vec<usize> = common.iter_ones().take(t as usize).collect();
    Some(GridWitness { left: set, right })
}

fn best_in_branch(g: &BipartiteGraph, s: usize, i0: usize, global: &AtomicU32) -> Option<(u32, Vec<usize>)> {
    let rows = g.rows();
    let found = if s == 1 {
        let c = rows[i0].count();
        (c >= global.load(Ordering::Relaxed)).then(|| (c, vec![i0]))
    } else {
        if rows[i0].count() < global.load(Ordering::Relaxed) {
            return None;
        }
        let mut w = Walker::new(rows, s, i0);
        let mut best = None;
        w.best(1, &mut best, global);
        best
    };
    if let Some((c, _)) = &found {
        global.fetch_max(*c, Ordering::Relaxed);
    }
    found
}

/// First `s`-subset of left vertices (lexicographic order) with at least `t`
/// common neighbors, paired with the `t` smallest of them.
pub fn find_grid(g: &BipartiteGraph, s: usize, t: usize, opts: &ScanOptions) -> Result<Option<GridWitness>> {
    check_s(g, s)?;
    if t == 0 {
        return Err(Error::ParameterOutOfRange("t must be at least 1".into()));
    }
    opts.check_budget(binomial(g.left_len(), s))?;
    if t > g.right_len() {
        return Ok(None);
    }
    let t = t as u32;
    let branches = g.left_len() - s + 1;
    let run = |i0: usize| first_in_branch(g, s, t, i0);
    Ok(install(opts.execution, || scan_first(opts.execution, branches, run)))
}

/// Maximum common-neighborhood size over `s`-subsets of the left side.
pub fn max_common_neighborhood(g: &BipartiteGraph, s: usize, opts: &ScanOptions) -> Result<MaxCommon> {
    check_s(g, s)?;
    opts.check_budget(binomial(g.left_len(), s))?;
    let branches = g.left_len() - s + 1;
    let global = AtomicU32::new(0);
    let run = |i0: usize| best_in_branch(g, s, i0, &global);
    let results = install(opts.execution, || scan_all(opts.execution, branches, run));
    let best = results
        .into_iter()
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .expect("the branch holding the maximum always reports");
    Ok(MaxCommon { size: best.0, left: best.1 })
}

#[cfg(feature = "parallel")]
fn scan_first<T: Send>(exec: Execution, n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Option<T> {
    use rayon::prelude::*;
    if is_parallel(exec) {
        (0..n).into_par_iter().find_map_first(f)
    } else {
        (0..n).find_map(f)
    }
}

#[cfg(not(feature = "parallel"))]
fn scan_first<T>(_exec: Execution, n: usize, f: impl Fn(usize) -> Option<T>) -> Option<T> {
    (0..n).find_map(f)
}

#[cfg(feature = "parallel")]
fn scan_all<T: Send>(exec: Execution, n: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    if is_parallel(exec) {
        (0..n).into_par_iter().filter_map(f).collect()
    } else {
        (0..n).filter_map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn scan_all<T>(_exec: Execution, n: usize, f: impl Fn(usize) -> Option<T>) -> Vec<T> {
    (0..n).filter_map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_two_by_two() {
        let g = BipartiteGraph::from_adjacency(2, 2, |_, _| true);
        let w = find_grid(&g, 2, 2, &ScanOptions::default()).unwrap().unwrap();
        assert_eq!(w, GridWitness { left: vec![0, 1], right: vec![0, 1] });
        assert!(w.verify(&g));
    }

    #[test]
    fn parameters() {
        let g = BipartiteGraph::from_adjacency(3, 3, |i, j| i == j);
        assert!(matches!(find_grid(&g, 4, 1, &ScanOptions::default()), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(find_grid(&g, 1, 0, &ScanOptions::default()), Err(Error::ParameterOutOfRange(_))));
        assert_eq!(find_grid(&g, 2, 1, &ScanOptions::default()).unwrap(), None);
        let w = find_grid(&g, 1, 1, &ScanOptions::default()).unwrap().unwrap();
        assert_eq!(w, GridWitness { left: vec![0], right: vec![0] });
        let tight = ScanOptions::default().with_budget(2);
        assert!(matches!(find_grid(&g, 1, 1, &tight), Err(Error::BudgetExceeded { needed: 3, budget: 2 })));
    }

    #[test]
    fn max_common_prefers_first_subset() {
        // rows 1 and 3 share three neighbors, rows 0 and 2 also share three
        let adj = [[1, 1, 1, 0], [0, 1, 1, 1], [1, 1, 1, 0], [0, 1, 1, 1]];
        let g = BipartiteGraph::from_adjacency(4, 4, |i, j| adj[i][j] == 1);
        for opts in [ScanOptions::sequential(), ScanOptions::default()] {
            let m = max_common_neighborhood(&g, 2, &opts).unwrap();
            assert_eq!(m, MaxCommon { size: 3, left: vec![0, 2] });
        }
        let m = max_common_neighborhood(&g, 4, &ScanOptions::default()).unwrap();
        assert_eq!(m, MaxCommon { size: 2, left: vec![0, 1, 2, 3] });
    }

    #[test]
    fn empty_graph_max() {
        let g = BipartiteGraph::from_adjacency(3, 2, |_, _| false);
        let m = max_common_neighborhood(&g, 2, &ScanOptions::default()).unwrap();
        assert_eq!(m, MaxCommon { size: 0, left: vec![0, 1] });
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(343, 3), 6_666_891);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(1331, 3), 392_105_945);
    }
}

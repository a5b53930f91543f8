//! Bipartite graphs cut out by hypersurfaces over `F_p`, exhaustive
//! `(s,t)`-grid search and edge-count reports.

mod bitset;
mod report;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};
use crate::hypersurface::{affine_points, projective_points, Hypersurface, OpenSet};

pub use bitset::BitRow;
pub use report::{edge_report, EdgeReport};
pub use scan::{binomial, find_grid, max_common_neighborhood, GridWitness, MaxCommon};

/// Refuse scans of more than this many subsets (or vertex pairs) unless
/// overridden.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Budget from `GRIDLAB_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u128 {
    std::env::var("GRIDLAB_BUDGET")
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool. Without the `parallel` feature this and
    /// `Threads` run sequentially.
    #[default]
    Parallel,
    /// A dedicated pool with this many workers.
    Threads(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub budget: u128,
    pub execution: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { budget: DEFAULT_BUDGET, execution: Execution::default() }
    }
}

impl ScanOptions {
    pub fn sequential() -> ScanOptions {
        ScanOptions { execution: Execution::Sequential, ..ScanOptions::default() }
    }

    pub fn with_budget(self, budget: u128) -> ScanOptions {
        ScanOptions { budget, ..self }
    }

    pub(crate) fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget {
            return Err(Error::BudgetExceeded { needed, budget: self.budget });
        }
        Ok(())
    }
}

/// Run `f` under the requested execution mode.
#[cfg(feature = "parallel")]
pub(crate) fn install<R: Send>(exec: Execution, f: impl FnOnce() -> R + Send) -> R {
    match exec {
        Execution::Threads(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn install<R: Send>(_exec: Execution, f: impl FnOnce() -> R + Send) -> R {
    f()
}

pub(crate) fn is_parallel(exec: Execution) -> bool {
    cfg!(feature = "parallel") && exec != Execution::Sequential
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Points `(1, u)` with `u ∈ F_p^s`.
    Affine,
    Projective,
}

impl std::str::FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Chart> {
        match s {
            "affine" => Ok(Chart::Affine),
            "projective" => Ok(Chart::Projective),
            _ => Err(Error::Parse(format!("unknown chart `{s}`"))),
        }
    }
}

/// Two point lists and the adjacency rows `row[i] = N(left[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    chart: Option<Chart>,
    left: Vec<Vec<u64>>,
    right: Vec<Vec<u64>>,
    rows: Vec<BitRow>,
    nright: usize,
}

impl BipartiteGraph {
    /// A graph without geometric labels, from an edge predicate.
    pub fn from_adjacency(nleft: usize, nright: usize, edge: impl Fn(usize, usize) -> bool) -> BipartiteGraph {
        let rows = (0..nleft)
            .map(|i| {
                let mut r = BitRow::zeros(nright);
                for j in (0..nright).filter(|&j| edge(i, j)) {
                    r.set(j);
                }
                r
            })
            .collect();
        BipartiteGraph { chart: None, left: Vec::new(), right: Vec::new(), rows, nright }
    }

    pub fn left_len(&self) -> usize {
        self.rows.len()
    }

    pub fn right_len(&self) -> usize {
        self.nright
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.rows[i].count()
    }

    pub fn edge_count(&self) -> u64 {
        self.rows.iter().map(|r| r.count() as u64).sum()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.rows[i].iter_ones().collect()
    }

    /// Swap the two sides.
    pub fn transpose(&self) -> BipartiteGraph {
        let mut rows = vec![BitRow::zeros(self.left_len()); self.nright];
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                rows[j].set(i);
            }
        }
        BipartiteGraph {
            chart: self.chart,
            left: self.right.clone(),
            right: self.left.clone(),
            rows,
            nright: self.left_len(),
        }
    }

    fn label(&self, pts: &[Vec<u64>], i: usize) -> String {
        match (self.chart, pts.get(i)) {
            (Some(Chart::Affine), Some(pt)) => {
                pt[1..].iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            }
            (Some(Chart::Projective), Some(pt)) => {
                pt.iter().map(u64::to_string).collect::<Vec<_>>().join(":")
            }
            _ => i.to_string(),
        }
    }

    /// `"u1,u2"` in the affine chart, `"a:b:c"` projectively.
    pub fn left_label(&self, i: usize) -> String {
        self.label(&self.left, i)
    }

    pub fn right_label(&self, j: usize) -> String {
        self.label(&self.right, j)
    }

    /// Homogeneous coordinates of a left vertex (empty for synthetic graphs).
    pub fn left_point(&self, i: usize) -> &[u64] {
        self.left.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn right_point(&self, j: usize) -> &[u64] {
        self.right.get(j).map_or(&[], Vec::as_slice)
    }
}

/// A bihomogeneous form over `F_p` prepared for fast evaluation: each term
/// is split into its `x̄` exponents and the index of its `ȳ` monomial.
struct CompiledForm {
    p: u64,
    terms: Vec<(Vec<u32>, usize, u64)>,
    y_monomials: Vec<Vec<u32>>,
}

impl CompiledForm {
    fn new(h: &Hypersurface) -> CompiledForm {
        let field = h.field();
        let p = field.characteristic();
        let nx = h.sx() + 1;
        let mut y_monomials: Vec<Vec<u32>> = Vec::new();
        let mut terms = Vec::new();
        for (m, c) in h.poly().terms() {
            let ym = m.0[nx..].to_vec();
            let k = match y_monomials.iter().position(|e| *e == ym) {
                Some(k) => k,
                None => {
                    y_monomials.push(ym);
                    y_monomials.len() - 1
                }
            };
            let c = field.as_residue(c).expect("prime field coefficient");
            terms.push((m.0[..nx].to_vec(), k, c));
        }
        CompiledForm { p, terms, y_monomials }
    }

    fn monomial(&self, pt: &[u64], e: &[u32]) -> u64 {
        let p = self.p as u128;
        let mut acc = 1u128;
        for (&a, &k) in pt.iter().zip(e) {
            for _ in 0..k {
                acc = acc * a as u128 % p;
            }
        }
        acc as u64
    }

    /// Coefficients of the section at `u` against `y_monomials`.
    fn section(&self, u: &[u64]) -> Vec<u64> {
        let mut sec = vec![0u64; self.y_monomials.len()];
        for (xe, k, c) in &self.terms {
            let v = (*c as u128 * self.monomial(u, xe) as u128 % self.p as u128) as u64;
            sec[*k] = (sec[*k] + v) % self.p;
        }
        sec
    }

    fn y_values(&self, v: &[u64]) -> Vec<u64> {
        self.y_monomials.iter().map(|e| self.monomial(v, e)).collect()
    }
}

fn residues(field: &Field, pts: Vec<Vec<Scalar>>) -> Vec<Vec<u64>> {
    pts.into_iter()
        .map(|pt| pt.iter().map(|c| field.as_residue(c).expect("prime field point")).collect())
        .collect()
}

fn chart_points(field: &Field, dim: usize, chart: Chart, open: &OpenSet) -> Result<Vec<Vec<Scalar>>> {
    let pts = match chart {
        Chart::Affine => affine_points(field, dim)?
            .into_iter()
            .map(|u| {
                let mut pt = vec![field.one()];
                pt.extend(u);
                pt
            })
            .collect(),
        Chart::Projective => projective_points(field, dim)?,
    };
    let open = open.coerce(field)?;
    let mut kept = Vec::with_capacity(pts.len());
    for pt in pts {
        if open.contains(&pt)? {
            kept.push(pt);
        }
    }
    Ok(kept)
}

fn chart_size(p: u64, dim: usize, chart: Chart) -> u128 {
    let p = p as u128;
    match chart {
        Chart::Affine => p.saturating_pow(dim as u32),
        Chart::Projective => (0..=dim as u32).fold(0u128, |acc, k| acc.saturating_add(p.saturating_pow(k))),
    }
}

/// Vertices are the `F_p`-points of the chart lying in `X` (resp. `Y`);
/// `u ~ v` iff `F(u, v) = 0`.
pub fn build_graph(
    h: &Hypersurface,
    p: u64,
    x: &OpenSet,
    y: &OpenSet,
    chart: Chart,
    opts: &ScanOptions,
) -> Result<BipartiteGraph> {
    if x.dim() != h.sx() {
        return Err(Error::DimensionMismatch { expected: h.sx(), got: x.dim() });
    }
    if y.dim() != h.sy() {
        return Err(Error::DimensionMismatch { expected: h.sy(), got: y.dim() });
    }
    let fp = Field::prime(p)?;
    opts.check_budget(chart_size(p, h.sx(), chart).saturating_mul(chart_size(p, h.sy(), chart)))?;
    let hp = h.coerce(&fp)?;
    let left = residues(&fp, chart_points(&fp, h.sx(), chart, x)?);
    let right = residues(&fp, chart_points(&fp, h.sy(), chart, y)?);
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptySide);
    }
    let form = CompiledForm::new(&hp);
    let table: Vec<Vec<u64>> = right.iter().map(|v| form.y_values(v)).collect();
    let nright = right.len();
    let row = |u: &Vec<u64>| {
        let sec = form.section(u);
        let mut r = BitRow::zeros(nright);
        if sec.iter().all(|&c| c == 0) {
            return BitRow::ones(nright);
        }
        for (j, vals) in table.iter().enumerate() {
            let mut acc = 0u128;
            for (a, b) in sec.iter().zip(vals) {
                acc += *a as u128 * *b as u128;
            }
            if acc.is_multiple_of(p as u128) {
                r.set(j);
            }
        }
        r
    };
    let rows = install(opts.execution, || build_rows(opts.execution, &left, row));
    Ok(BipartiteGraph { chart: Some(chart), left, right, rows, nright })
}

#[cfg(feature = "parallel")]
fn build_rows(exec: Execution, left: &[Vec<u64>], row: impl Fn(&Vec<u64>) -> BitRow + Sync + Send) -> Vec<BitRow> {
    use rayon::prelude::*;
    if is_parallel(exec) {
        left.par_iter().map(row).collect()
    } else {
        left.iter().map(row).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn build_rows(_exec: Execution, left: &[Vec<u64>], row: impl Fn(&Vec<u64>) -> BitRow) -> Vec<BitRow> {
    left.iter().map(row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::{construct, Family};
    use crate::poly::{bihom_vars, Group, MultiPoly};

    fn full(dim: usize) -> (OpenSet, OpenSet) {
        (OpenSet::full(dim, Group::X), OpenSet::full(dim, Group::Y))
    }

    #[test]
    fn family_1a_edges() {
        let c = construct(Family::Hyperbola, 5, 2).unwrap();
        let (x, y) = full(2);
        let g = build_graph(&c.hypersurface, 5, &x, &y, Chart::Affine, &ScanOptions::default()).unwrap();
        assert_eq!((g.left_len(), g.right_len()), (25, 25));
        assert_eq!(g.edge_count(), 120);
        assert_eq!(g.left_label(7), "1,2");
    }

    #[test]
    fn projective_lines() {
        let q = Field::rationals();
        let vars = bihom_vars(2, 2);
        let h0 = MultiPoly::from_int_terms(
            &q,
            &vars,
            &[(&[1, 0, 0, 1, 0, 0], 1), (&[0, 1, 0, 0, 1, 0], 1), (&[0, 0, 1, 0, 0, 1], 1)],
        );
        let h0 = Hypersurface::from_poly(&h0).unwrap();
        let (x, y) = full(2);
        let g = build_graph(&h0, 3, &x, &y, Chart::Projective, &ScanOptions::sequential()).unwrap();
        assert_eq!((g.left_len(), g.right_len()), (13, 13));
        assert!((0..13).all(|i| g.degree(i) == 4));
        assert_eq!(g.left_label(0), "1:0:0");
    }

    #[test]
    fn empty_side_and_budget() {
        let c = construct(Family::Hyperbola, 3, 2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let vars = crate::poly::var_names("x", 3);
        let x0 = MultiPoly::var_at(&f3, &vars, 0);
        let x1 = MultiPoly::var_at(&f3, &vars, 1);
        // x0^3 x1 - x0 x1^3 vanishes on every F_3-point
        let all = &(&x0.pow(3) * &x1) - &(&x0 * &x1.pow(3));
        let x = OpenSet::new(2, Group::X, vec![all]).unwrap();
        let y = OpenSet::full(2, Group::Y);
        assert_eq!(
            build_graph(&c.hypersurface, 3, &x, &y, Chart::Projective, &ScanOptions::default()).unwrap_err(),
            Error::EmptySide
        );
        let tight = ScanOptions::default().with_budget(10);
        assert!(matches!(
            build_graph(&c.hypersurface, 3, &OpenSet::full(2, Group::X), &y, Chart::Affine, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rational_forms_reduce_through_integral_equation() {
        let q = Field::rationals();
        let vars = bihom_vars(1, 1);
        let p = MultiPoly::from_int_terms(&q, &vars, &[(&[1, 0, 1, 0], 1)]).scale(&q.parse("1/5").unwrap());
        let p = &p + &MultiPoly::from_int_terms(&q, &vars, &[(&[0, 1, 0, 1], 1)]);
        let h = Hypersurface::from_poly(&p).unwrap();
        let (x, y) = full(1);
        // x0 y0 + 5 x1 y1 reduces to x0 y0
        let g = build_graph(&h, 5, &x, &y, Chart::Projective, &ScanOptions::default()).unwrap();
        let expected = Hypersurface::from_poly(&MultiPoly::from_int_terms(&q, &vars, &[(&[1, 0, 1, 0], 1)])).unwrap();
        assert_eq!(g, build_graph(&expected, 5, &x, &y, Chart::Projective, &ScanOptions::default()).unwrap());
    }
}

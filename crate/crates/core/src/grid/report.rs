use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::BipartiteGraph;

/// Decimal digits kept for irrational quantities (truncated, not rounded).
pub const REPORT_DIGITS: u32 = 30;

/// A nonnegative real that is either exact (`"a/b"` or an integer) or a
/// truncated decimal with [`REPORT_DIGITS`] digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealValue {
    pub exact: bool,
    pub value: String,
}

impl RealValue {
    /// Parsed approximation, for display and loose comparisons.
    pub fn approx(&self) -> f64 {
        match self.value.split_once('/') {
            Some((a, b)) => a.parse::<f64>().unwrap_or(f64::NAN) / b.parse::<f64>().unwrap_or(f64::NAN),
            None => self.value.parse().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeReport {
    pub n: u64,
    pub m: u64,
    pub s: u32,
    pub t: u32,
    /// `n^{2 - 1/s}`.
    pub n_power: RealValue,
    /// `½ (t - s + 1)^{1/s} n^{2 - 1/s}`, absent when `t < s`.
    pub furedi_bound: Option<RealValue>,
    /// `m / n^{2 - 1/s}`.
    pub ratio: RealValue,
    pub digits: u32,
}

/// `(num / den)^{1/k}`, exact when both reduce to perfect `k`-th powers.
fn rational_root(num: BigUint, den: BigUint, k: u32) -> RealValue {
    let g = num.gcd(&den);
    let (num, den) = if g.is_zero() { (num, den) } else { (&num / &g, &den / &g) };
    let (rn, rd) = (num.nth_root(k), den.nth_root(k));
    if rn.pow(k) == num && rd.pow(k) == den {
        let value = if rd.is_one() { rn.to_string() } else { format!("{rn}/{rd}") };
        return RealValue { exact: true, value };
    }
    let scale = BigUint::from(10u32).pow(REPORT_DIGITS);
    let scaled = (num * scale.pow(k)) / den;
    let root = scaled.nth_root(k);
    let (int, frac) = root.div_rem(&scale);
    let frac = frac.to_string();
    let pad = "0".repeat(REPORT_DIGITS as usize - frac.len());
    RealValue { exact: false, value: format!("{int}.{pad}{frac}") }
}

/// Edge count of `G` against the Füredi leading term for `K_{s,t}`, with
/// `n = |left| + |right|`.
pub fn edge_report(g: &BipartiteGraph, s: u32, t: u32) -> EdgeReport {
    let n = (g.left_len() + g.right_len()) as u64;
    let m = g.edge_count();
    let s = s.max(1);
    let e = 2 * s - 1;
    let nb = BigUint::from(n);
    let n_power = rational_root(nb.pow(e), BigUint::one(), s);
    let furedi_bound = (t >= s).then(|| {
        let c = BigUint::from(t - s + 1);
        rational_root(c * nb.pow(e), BigUint::from(2u32).pow(s), s)
    });
    let ratio = if n == 0 {
        RealValue { exact: true, value: "0".into() }
    } else {
        rational_root(BigUint::from(m).pow(s), nb.pow(e), s)
    };
    EdgeReport { n, m, s, t, n_power, furedi_bound, ratio, digits: REPORT_DIGITS }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        let v = rational_root(BigUint::from(2u32), BigUint::one(), 2);
        assert_eq!(v.value, "1.414213562373095048801688724209");
        assert!(!v.exact);
        let v = rational_root(BigUint::from(9u32), BigUint::from(4u32), 2);
        assert_eq!(v, RealValue { exact: true, value: "3/2".into() });
        let v = rational_root(BigUint::from(1u32), BigUint::from(100u32), 2);
        assert_eq!(v.value, "1/10");
    }

    #[test]
    fn empty_graph() {
        let g = BipartiteGraph::from_adjacency(3, 3, |_, _| false);
        let r = edge_report(&g, 2, 2);
        assert_eq!((r.n, r.m), (6, 0));
        assert_eq!(r.ratio.value, "0");
    }
}

//! Decision and reduction for `(1,t)`-grid-freeness on `P^1 × P^1`.
//!
//! Write `F = f(x̄)·g(ȳ)·core` with `f`, `g` the group contents. The zero set
//! of `F` on `X × Y` has no `(1,t)`-grid exactly when `f` has no root in `X`
//! and `m + Σd_i < t`, where `m` counts the distinct roots of `g` in `Y` and
//! `Σd_i` is the `ȳ`-degree of the squarefree part of `core`.
//!
//! Root sets of binary forms are handled through radicals and GCDs, so a
//! factor that does not split over the base field needs no special case:
//! `rad(g) / gcd(rad(g), rad(E_Y))` vanishes exactly at the roots of `g`
//! inside `Y` (over the algebraic closure), where `E_Y` is the product of
//! the forms cut out of `Y`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};
use crate::grid::{build_graph, Chart, ScanOptions};
use crate::hypersurface::{projective_points, Hypersurface, OpenSet, ProjPoint};
use crate::poly::{var_names, BiHomPoly, Group, MultiPoly};

/// Roots of `g` inside `Y`: `count` over the algebraic closure, `points` the
/// ones defined over the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSet {
    pub count: u32,
    pub points: Vec<String>,
    pub nonrational: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S1Verdict {
    pub f: String,
    pub g: String,
    pub core: String,
    #[serde(rename = "f_meets_X")]
    pub f_meets_x: bool,
    #[serde(rename = "g_roots_in_Y")]
    pub g_roots_in_y: RootSet,
    pub sum_di: u32,
    #[serde(rename = "M")]
    pub total: u32,
    pub t: u32,
    pub grid_free: bool,
}

impl S1Verdict {
    pub fn grid_free_for(&self, t: u32) -> bool {
        !self.f_meets_x && self.total < t
    }
}

/// Pieces shared by classification and reduction, all over `x0,x1,y0,y1`.
struct Split {
    f: MultiPoly,
    g: MultiPoly,
    core: MultiPoly,
    /// Radical of the part of `f` vanishing inside `X`.
    f_in_x: MultiPoly,
    /// Radical of the part of `g` vanishing inside `Y`.
    g_in_y: MultiPoly,
    core_sqfree: MultiPoly,
}

fn check_inputs(form: &BiHomPoly, x: &OpenSet, y: &OpenSet) -> Result<()> {
    if form.sx() != 1 || form.sy() != 1 {
        return Err(Error::WrongDimension(format!(
            "classification needs P^1 x P^1, got P^{} x P^{}",
            form.sx(),
            form.sy()
        )));
    }
    if x.dim() != 1 || x.group() != Group::X {
        return Err(Error::WrongDimension("X must be an open subset of the x-line".into()));
    }
    if y.dim() != 1 || y.group() != Group::Y {
        return Err(Error::WrongDimension("Y must be an open subset of the y-line".into()));
    }
    Ok(())
}

/// Radical of the part of `a` whose roots survive in the open set cut out by
/// `excluded`.
fn surviving_radical(a: &MultiPoly, excluded: &MultiPoly) -> Result<MultiPoly> {
    let ra = a.squarefree_part_all()?;
    let re = excluded.squarefree_part_all()?;
    let common = ra.gcd(&re);
    Ok(ra.div_exact(&common).expect("gcd divides").monic())
}

fn split(form: &BiHomPoly, x: &OpenSet, y: &OpenSet) -> Result<Split> {
    check_inputs(form, x, y)?;
    let field = form.poly().field().clone();
    let vars = form.poly().vars().to_vec();
    let x = x.coerce(&field)?;
    let y = y.coerce(&field)?;
    let f = form.x_content();
    let g = form.y_content();
    let core = form.poly().div_exact(&(&f * &g)).expect("contents divide");
    let ex = x.excluded_product(&field).with_vars(&vars)?;
    let ey = y.excluded_product(&field).with_vars(&vars)?;
    // a zero excluded form (possible after reduction) removes every point
    let f_in_x = if ex.is_zero() { f.one_like() } else { surviving_radical(&f, &ex)? };
    let g_in_y = if ey.is_zero() { g.one_like() } else { surviving_radical(&g, &ey)? };
    let core_sqfree = core.squarefree_part_all()?;
    Ok(Split { f, g, core, f_in_x, g_in_y, core_sqfree })
}

/// Classify `F` on `X × Y` for a given `t`.
pub fn s1_classify(form: &BiHomPoly, x: &OpenSet, y: &OpenSet, t: u32) -> Result<S1Verdict> {
    let sp = split(form, x, y)?;
    let ydeg = |p: &MultiPoly| p.degree_in(&[2, 3]);
    let m = ydeg(&sp.g_in_y);
    let roots = binary_form_roots(&sp.g_in_y, 2, 3)?;
    let sum_di = ydeg(&sp.core_sqfree);
    let total = m + sum_di;
    let f_meets_x = !sp.f_in_x.is_constant();
    let points = roots.iter().map(|r| r.format(form.poly().field())).collect::<Vec<_>>();
    Ok(S1Verdict {
        f: sp.f.to_string(),
        g: sp.g.to_string(),
        core: sp.core.to_string(),
        f_meets_x,
        g_roots_in_y: RootSet { count: m, nonrational: m - points.len() as u32, points },
        sum_di,
        total,
        t,
        grid_free: !f_meets_x && total < t,
    })
}

/// `F̃ = f'·g'·rad(core)` where `f'`, `g'` are the radicals of the parts of
/// `f`, `g` with roots in `X`, `Y`. It has the same zero set as `F` on
/// `X × Y` and `ȳ`-degree `M`. When `f` misses `X`, `f'` is constant.
pub fn s1_reduce(form: &BiHomPoly, x: &OpenSet, y: &OpenSet) -> Result<BiHomPoly> {
    let sp = split(form, x, y)?;
    let reduced = &(&sp.f_in_x * &sp.g_in_y) * &sp.core_sqfree;
    Ok(BiHomPoly::new(&reduced, 1, 1)?.monic())
}

/// Largest number of `Y`-points on a fiber over an `X`-point, over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub p: u64,
    pub t: u32,
    pub max_row: u32,
    /// The first `x`-point attaining `max_row`, if either side is nonempty.
    pub max_row_at: Option<String>,
    pub grid_free: bool,
}

/// Direct check over `P^1(F_p)`: is there an `X`-point whose fiber meets at
/// least `t` points of `Y`?
pub fn s1_bruteforce_oracle(
    form: &BiHomPoly,
    x: &OpenSet,
    y: &OpenSet,
    t: u32,
    p: u64,
    opts: &ScanOptions,
) -> Result<OracleVerdict> {
    check_inputs(form, x, y)?;
    let h = Hypersurface::new(form.clone());
    let g = match build_graph(&h, p, x, y, Chart::Projective, opts) {
        Ok(g) => g,
        Err(Error::EmptySide) => {
            return Ok(OracleVerdict { p, t, max_row: 0, max_row_at: None, grid_free: true });
        }
        Err(Error::ZeroPolynomial) => return Err(Error::BadReduction(p)),
        Err(e) => return Err(e),
    };
    let (best, row) = (0..g.left_len())
        .map(|i| (g.degree(i), i))
        .fold((0, 0), |acc, (d, i)| if d > acc.0 { (d, i) } else { acc });
    Ok(OracleVerdict {
        p,
        t,
        max_row: best,
        max_row_at: Some(g.left_label(row)),
        grid_free: best < t,
    })
}

/// Roots of the binary form `q` in variables `a`, `b` that are defined over
/// its coefficient field. Exhaustive over finite fields; over the rationals
/// by the rational root test, skipping candidates whose extreme coefficients
/// are too large to factor by trial division.
pub fn binary_form_roots(q: &MultiPoly, a: usize, b: usize) -> Result<Vec<ProjPoint>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = q.field().clone();
    let at = |pa: &Scalar, pb: &Scalar| -> Result<bool> {
        let mut pt = vec![field.zero(); q.nvars()];
        pt[a] = pa.clone();
        pt[b] = pb.clone();
        Ok(field.is_zero(&q.evaluate(&pt)?))
    };
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    if !field.is_rationals() {
        for pt in projective_points(&field, 1)? {
            if at(&pt[0], &pt[1])? {
                roots.push(ProjPoint::new(&field, pt)?);
            }
        }
        return Ok(roots);
    }
    let d = q.total_degree() as usize;
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (mono, c) in q.terms() {
        let Scalar::Rat(c) = c else { unreachable!("rational field") };
        coeffs[mono.0[a] as usize] = c.clone();
    }
    let mut candidates: Vec<BigRational> = Vec::new();
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let lo = ints.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let hi = ints.iter().rposition(|c| !c.is_zero()).expect("nonzero form");
    if lo > 0 {
        candidates.push(BigRational::zero());
    }
    if let (Some(num), Some(den)) = (divisors(&ints[lo]), divisors(&ints[hi])) {
        for n in &num {
            for m in &den {
                let r = BigRational::new(BigInt::from(*n), BigInt::from(*m));
                candidates.push(-&r);
                candidates.push(r);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    // (r : 1) are the affine roots, (1 : 0) is a root when the top coefficient vanishes
    let one = field.one();
    for r in candidates {
        let r = Scalar::Rat(r);
        if at(&r, &one)? {
            roots.push(ProjPoint::new(&field, vec![r, one.clone()])?);
        }
    }
    if ints[d].is_zero() {
        roots.push(ProjPoint::new(&field, vec![one, field.zero()])?);
    }
    roots.sort_by(|u, v| u.coords().cmp(v.coords()));
    Ok(roots)
}

const TRIAL_DIVISION_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&n| n <= TRIAL_DIVISION_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// A form together with the points removed from each line.
#[derive(Clone, Debug)]
pub struct S1Case {
    pub name: String,
    pub form: BiHomPoly,
    pub x: OpenSet,
    pub y: OpenSet,
}

impl S1Case {
    /// `expr` over `x0,x1,y0,y1`; excluded points written as `"a:b"`.
    pub fn parse(expr: &str, exclude_x: &[&str], exclude_y: &[&str]) -> Result<S1Case> {
        let q = Field::rationals();
        let mut vars = var_names("x", 2);
        vars.extend(var_names("y", 2));
        let form = BiHomPoly::new(&MultiPoly::parse(&q, &vars, expr)?, 1, 1)?;
        let pts = |list: &[&str]| list.iter().map(|s| ProjPoint::parse(&q, s)).collect::<Result<Vec<_>>>();
        let x = OpenSet::excluding_points(&q, Group::X, &pts(exclude_x)?)?;
        let y = OpenSet::excluding_points(&q, Group::Y, &pts(exclude_y)?)?;
        let mut name = expr.to_string();
        if !exclude_x.is_empty() {
            name += &format!(" | X minus {}", exclude_x.join(", "));
        }
        if !exclude_y.is_empty() {
            name += &format!(" | Y minus {}", exclude_y.join(", "));
        }
        Ok(S1Case { name, form, x, y })
    }
}

type CaseSpec = (&'static str, &'static [&'static str], &'static [&'static str]);

/// Forms whose maximal fibers are attained at rational points for every
/// prime in `5..=13`, so classifier and sampled oracle agree exactly.
pub const GENERIC_CORPUS: &[CaseSpec] = &[
    ("y0*(x0*y1 - x1*y0)^2", &[], &[]),
    ("x0*y1 - x1*y0", &[], &[]),
    ("x0*(x0*y1 - x1*y0)", &[], &[]),
    ("x0*y0", &["0:1"], &["0:1"]),
    ("y0*(x0*y1 - x1*y0)", &[], &["0:1"]),
    ("x0*y0^2 + x1*y1^2", &[], &[]),
    ("(x0*y0 + x1*y1)*(x0*y0 + 2*x1*y1)*(x0*y0 + 3*x1*y1)", &[], &[]),
    ("(x0*y0 + x1*y1)^2*(x0*y0 - x1*y1)", &[], &[]),
    ("y0*y1*(y0 - y1)*(x0*y1 - x1*y0)", &[], &[]),
    ("y0*y1*(y0 - y1)*(x0*y1 - x1*y0)", &[], &["1:1"]),
    ("x1^2*y0*(x0*y1 - x1*y0)", &["1:0"], &[]),
    ("x1^2*y0*(x0*y1 - x1*y0)", &[], &[]),
    ("(x0 - x1)*(x0*y0^2 - x1*y1^2)", &[], &[]),
    ("(x0 - x1)*(x0*y0^2 - x1*y1^2)", &["1:1"], &[]),
    ("x0^2*y0^2 - x1^2*y1^2", &[], &[]),
    ("y0^3*(x0*y1 - x1*y0)", &[], &[]),
    ("(y0 - y1)^2*(y0 + y1)*(x0*y0 - x1*y1)^3", &[], &[]),
    ("x0*y0 - x1*y1", &["1:0", "0:1"], &["1:1"]),
    ("(x0*y1 - x1*y0)*(x0*y1 - 2*x1*y0)", &[], &[]),
    ("x0*x1*(x0*y0 + x1*y1)", &["1:0", "0:1"], &[]),
    ("x0*x1*(x0*y0 + x1*y1)", &[], &[]),
    ("x0*y0^2 + x1*y0*y1 + x1*y1^2", &[], &[]),
    ("y0*y1", &[], &[]),
    ("x0", &[], &[]),
    ("y0*(x0*y1 - x1*y0)^2", &["1:0", "0:1"], &[]),
    ("y0*(x0*y1 - x1*y0)^2", &[], &["0:1"]),
];

/// Forms with factors that split only modulo some primes. Over those
/// samples the oracle can see smaller fibers than the classifier predicts.
pub const NON_GENERIC_CORPUS: &[CaseSpec] = &[
    ("(y0^2 + y1^2)*(x0*y1 - x1*y0)", &[], &[]),
    ("x0^2*y0^2 + x0*x1*y0*y1 + x1^2*y1^2", &[], &[]),
    ("x0*y0^3 + x1*y1^3", &[], &[]),
    ("x0^2*y0^2 + x1^2*y1^2", &[], &[]),
    ("(x0^2 + x1^2)*(x0*y1 - x1*y0)", &[], &[]),
    ("(x0^2 + x1^2)*(x0*y1 - x1*y0)", &[], &["1:0"]),
];

pub fn corpus(specs: &[CaseSpec]) -> Vec<S1Case> {
    specs
        .iter()
        .map(|(e, xs, ys)| S1Case::parse(e, xs, ys).expect("corpus entries parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(e: &str, xs: &[&str], ys: &[&str]) -> S1Case {
        S1Case::parse(e, xs, ys).unwrap()
    }

    #[test]
    fn square_of_diagonal() {
        let c = case("y0*(x0*y1 - x1*y0)^2", &[], &[]);
        let v = s1_classify(&c.form, &c.x, &c.y, 3).unwrap();
        assert!(!v.f_meets_x);
        assert_eq!(v.f, "1");
        assert_eq!(v.g, "y0");
        assert_eq!(v.g_roots_in_y, RootSet { count: 1, points: vec!["0:1".into()], nonrational: 0 });
        assert_eq!((v.sum_di, v.total), (1, 2));
        assert!(v.grid_free);
        assert!(!v.grid_free_for(2));
        let r = s1_reduce(&c.form, &c.x, &c.y).unwrap();
        let expect = case("y0*(x0*y1 - x1*y0)", &[], &[]).form.monic();
        assert_eq!(r, expect);
        assert_eq!(r.bidegree().1, 2);
    }

    #[test]
    fn diagonal_and_fiber() {
        let c = case("x0*y1 - x1*y0", &[], &[]);
        let v = s1_classify(&c.form, &c.x, &c.y, 2).unwrap();
        assert_eq!(v.total, 1);
        assert!(v.grid_free);
        let c = case("x0*(x0*y1 - x1*y0)", &[], &[]);
        let v = s1_classify(&c.form, &c.x, &c.y, 2).unwrap();
        assert!(v.f_meets_x);
        assert!(!v.grid_free);
        let o = s1_bruteforce_oracle(&c.form, &c.x, &c.y, 2, 7, &ScanOptions::default()).unwrap();
        assert_eq!(o.max_row, 8);
        assert_eq!(o.max_row_at.as_deref(), Some("0:1"));
    }

    #[test]
    fn excluded_root_drops_linear_factor() {
        let c = case("y0*(x0*y1 - x1*y0)", &[], &["0:1"]);
        let v = s1_classify(&c.form, &c.x, &c.y, 2).unwrap();
        assert_eq!(v.g_roots_in_y.count, 0);
        let r = s1_reduce(&c.form, &c.x, &c.y).unwrap();
        assert_eq!(r, case("x0*y1 - x1*y0", &[], &[]).form.monic());
    }

    #[test]
    fn empty_rows() {
        let c = case("x0*y0", &["0:1"], &["0:1"]);
        let v = s1_classify(&c.form, &c.x, &c.y, 1).unwrap();
        assert!(v.grid_free);
        assert_eq!(v.total, 0);
        for p in [5, 7] {
            let o = s1_bruteforce_oracle(&c.form, &c.x, &c.y, 1, p, &ScanOptions::default()).unwrap();
            assert!(o.grid_free);
            assert_eq!(o.max_row, 0);
        }
    }

    #[test]
    fn non_split_content() {
        let c = case("(y0^2 + y1^2)*(x0*y1 - x1*y0)", &[], &[]);
        let v = s1_classify(&c.form, &c.x, &c.y, 3).unwrap();
        assert_eq!(v.g_roots_in_y, RootSet { count: 2, points: vec![], nonrational: 2 });
        assert_eq!(v.total, 3);
        let c = case("(x0^2 + x1^2)*(x0*y1 - x1*y0)", &[], &[]);
        assert!(s1_classify(&c.form, &c.x, &c.y, 5).unwrap().f_meets_x);
    }

    #[test]
    fn rational_roots() {
        let q = Field::rationals();
        let vars = var_names("y", 2);
        let form = MultiPoly::parse(&q, &vars, "(2*y0 - 3*y1)*(y0 + 5*y1)*y1*(y0^2 - 2*y1^2)").unwrap();
        let roots: Vec<String> = binary_form_roots(&form, 0, 1).unwrap().iter().map(|r| r.format(&q)).collect();
        assert_eq!(roots, ["1:-1/5", "1:0", "1:2/3"].map(String::from).to_vec());
        let f7 = Field::prime(7).unwrap();
        let form = MultiPoly::parse(&f7, &vars, "y0^2 + y1^2").unwrap();
        assert!(binary_form_roots(&form, 0, 1).unwrap().is_empty());
        let form = MultiPoly::parse(&f7, &vars, "y0^2 - 2*y1^2").unwrap();
        assert_eq!(binary_form_roots(&form, 0, 1).unwrap().len(), 2);
    }

    #[test]
    fn wrong_dimension() {
        let q = Field::rationals();
        let mut vars = var_names("x", 3);
        vars.extend(var_names("y", 2));
        let form = BiHomPoly::new(&MultiPoly::parse(&q, &vars, "x0*y0").unwrap(), 2, 1).unwrap();
        let x = OpenSet::full(2, Group::X);
        let y = OpenSet::full(1, Group::Y);
        assert!(matches!(s1_classify(&form, &x, &y, 2), Err(Error::WrongDimension(_))));
    }

    #[test]
    fn reduction_mod_a_dividing_prime() {
        // x0 y0 + 5 x1 y1 is x0 y0 mod 5: the fiber over 0:1 is everything
        let c = case("x0*y0/5 + x1*y1", &[], &[]);
        let o = s1_bruteforce_oracle(&c.form, &c.x, &c.y, 2, 5, &ScanOptions::default()).unwrap();
        assert_eq!((o.max_row, o.max_row_at.as_deref()), (6, Some("0:1")));
        let v = s1_classify(&c.form, &c.x, &c.y, 2).unwrap();
        assert!(v.grid_free && !o.grid_free);
    }
}

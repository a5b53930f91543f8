//! Plane projective curves: local intersection numbers, the maximal
//! multiplicity formula for a curve meeting its neighbors in a family, the
//! common-component rank test for two sections, and conic classification.

use std::cmp::Ordering;

use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};
use crate::hypersurface::{Hypersurface, ProjPoint};
use crate::linalg;
use crate::poly::{var_names, BiHomPoly, MultiPoly};

/// Iteration cap for the intersection-number reduction.
const FULTON_CAP: usize = 100_000;

/// A nonzero homogeneous form in `y0, y1, y2`, stored monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    form: MultiPoly,
    degree: u32,
}

impl PlaneCurve {
    pub fn new(poly: &MultiPoly) -> Result<PlaneCurve> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let form = poly.with_vars(&var_names("y", 3))?;
        let degree = form
            .homogeneous_degree(&[0, 1, 2])
            .ok_or_else(|| Error::NotHomogeneous(format!("plane curve {form}")))?;
        Ok(PlaneCurve { form: form.monic(), degree })
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> &Field {
        self.form.field()
    }

    pub fn contains(&self, v: &ProjPoint) -> Result<bool> {
        Ok(self.field().is_zero(&self.form.evaluate(v.coords())?))
    }
}

/// Local intersection number; `Infinite` when the curves share a component
/// through the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => ser.serialize_u32(*n),
            Multiplicity::Infinite => ser.serialize_str("infinity"),
        }
    }
}

/// Chart index: the coordinate of largest absolute value over the
/// rationals (first on ties), the first nonzero one over finite fields.
fn chart_index(field: &Field, v: &ProjPoint) -> usize {
    let c = v.coords();
    if !field.is_rationals() {
        return c.iter().position(|a| !field.is_zero(a)).expect("projective point");
    }
    let abs = |a: &Scalar| match a {
        Scalar::Rat(q) => q.abs(),
        _ => unreachable!("rational field"),
    };
    let mut best = 0;
    for i in 1..c.len() {
        if abs(&c[i]).cmp(&abs(&c[best])) == Ordering::Greater {
            best = i;
        }
    }
    best
}

/// Affine equation at `v`: the chart coordinate set to 1 and the point
/// moved to the origin, over variables `x, y`.
fn local_equation(curve: &MultiPoly, v: &ProjPoint, k: usize) -> Result<MultiPoly> {
    let field = curve.field();
    let vars = vec!["x".to_string(), "y".to_string()];
    let x = MultiPoly::var_at(field, &vars, 0);
    let y = MultiPoly::var_at(field, &vars, 1);
    let inv = field.inv(&v.coords()[k])?;
    let mut free = [x, y].into_iter();
    let images: Vec<MultiPoly> = (0..3)
        .map(|i| {
            if i == k {
                MultiPoly::one(field, &vars)
            } else {
                let a = field.mul(&v.coords()[i], &inv);
                &free.next().unwrap() + &MultiPoly::constant(field, &vars, a)
            }
        })
        .collect();
    curve.compose(&images)
}

/// `(degree, leading coefficient, order)` of `f(x, 0)`, or `None` if zero.
fn on_x_axis(f: &MultiPoly) -> Option<(u32, Scalar, u32)> {
    let r = f.partial_eval(1, &f.field().zero());
    if r.is_zero() {
        return None;
    }
    let d = r.degree(0);
    Some((d, r.coeff(&[d, 0]), r.min_degree(0)))
}

fn fulton(f: MultiPoly, g: MultiPoly) -> Result<u32> {
    let field = f.field().clone();
    let y = MultiPoly::var_at(&field, f.vars(), 1);
    let mut total = 0u32;
    let (mut f, mut g) = (f, g);
    for _ in 0..FULTON_CAP {
        if f.is_zero() || g.is_zero() {
            return Err(Error::NonTermination("intersection multiplicity"));
        }
        if !field.is_zero(&f.constant_term()) || !field.is_zero(&g.constant_term()) {
            return Ok(total);
        }
        match (on_x_axis(&f), on_x_axis(&g)) {
            (None, None) => return Err(Error::NonTermination("intersection multiplicity")),
            // y | f: I(f, g) = I(y, g) + I(f / y, g) with I(y, g) = ord_x g(x, 0)
            (None, Some((_, _, ord))) => {
                total += ord;
                f = f.div_exact(&y).expect("y divides f");
            }
            (Some((_, _, ord)), None) => {
                total += ord;
                g = g.div_exact(&y).expect("y divides g");
            }
            (Some((r, lf, _)), Some((s, lg, _))) => {
                if r > s {
                    std::mem::swap(&mut f, &mut g);
                    continue;
                }
                let mut shift = vec![0; 2];
                shift[0] = s - r;
                g = &g.scale(&lf) - &f.mul_monomial(&shift).scale(&lg);
            }
        }
    }
    Err(Error::NonTermination("intersection multiplicity"))
}

/// `I_v(F, G)` at a point with coordinates in the coefficient field.
pub fn intersection_multiplicity(f: &PlaneCurve, g: &PlaneCurve, v: &ProjPoint) -> Result<Multiplicity> {
    if f.field() != g.field() {
        return Err(Error::MixedFields);
    }
    let field = f.field();
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 3, got: v.coords().len() });
    }
    if v.coords().iter().any(|c| !field.owns(c)) {
        return Err(Error::PointNotRational);
    }
    if !f.contains(v)? || !g.contains(v)? {
        return Ok(Multiplicity::Finite(0));
    }
    let common = f.form().gcd(g.form());
    if !common.is_constant() && field.is_zero(&common.evaluate(v.coords())?) {
        return Ok(Multiplicity::Infinite);
    }
    let k = chart_index(field, v);
    let lf = local_equation(f.form(), v, k)?;
    let lg = local_equation(g.form(), v, k)?;
    Ok(Multiplicity::Finite(fulton(lf, lg)?))
}

/// Largest intersection multiplicity at a point of a curve of degree `d1`
/// with a curve of degree `d2` from a generic family.
pub fn moura_max(d1: u64, d2: u64) -> u64 {
    if d1 > d2 {
        (d2 * d2 + 3 * d2) / 2
    } else {
        d1 * d2 - (d1 * d1 + 2 - 3 * d1) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankTestReport {
    pub d1: u32,
    pub d2: u32,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub rank: u64,
    pub shares_component: bool,
}

fn choose2(n: i64) -> u64 {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as u64
    }
}

/// Monomials of degree `d` in three variables (none if `d < 0`).
fn monomials3(d: i64) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let d = d as u32;
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn section_of(h: &BiHomPoly, u: &ProjPoint) -> Result<MultiPoly> {
    if h.sy() != 2 {
        return Err(Error::WrongDimension(format!("sections must be plane curves, got P^{}", h.sy())));
    }
    Hypersurface::new(h.clone()).section(u)
}

/// Whether the sections `h1(u, ȳ)` and `h2(u, ȳ)` share a factor, decided
/// by the rank of the linear system `h1(u,ȳ) g1 + h2(u,ȳ) g2 = 0` with
/// `deg g1 = d2 - 1` and `deg g2 = d1 - 1`.
pub fn common_component_rank_test(h1: &BiHomPoly, h2: &BiHomPoly, u: &ProjPoint) -> Result<RankTestReport> {
    let a = section_of(h1, u)?;
    let b = section_of(h2, u)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSection);
    }
    if a.field() != b.field() {
        return Err(Error::MixedFields);
    }
    let field = a.field().clone();
    let (d1, d2) = (a.total_degree(), b.total_degree());
    let rows_mon = monomials3(d1 as i64 + d2 as i64 - 1);
    let mut cols: Vec<MultiPoly> = Vec::new();
    for m in monomials3(d2 as i64 - 1) {
        cols.push(a.mul_monomial(&m));
    }
    for m in monomials3(d1 as i64 - 1) {
        cols.push(b.mul_monomial(&m));
    }
    let matrix: Vec<Vec<Scalar>> =
        rows_mon.iter().map(|m| cols.iter().map(|c| c.coeff(m)).collect()).collect();
    let rank = linalg::rank(&field, matrix) as u64;
    let n = cols.len() as u64;
    debug_assert_eq!(rows_mon.len() as u64, choose2(d1 as i64 + d2 as i64 + 1));
    debug_assert_eq!(n, choose2(d1 as i64 + 1) + choose2(d2 as i64 + 1));
    Ok(RankTestReport { d1, d2, m: rows_mon.len() as u64, n, rank, shares_component: rank < n })
}

/// Whether the section `h(u, ȳ)` has no repeated factor.
pub fn is_squarefree_section(h: &BiHomPoly, u: &ProjPoint) -> Result<bool> {
    let sec = section_of(h, u)?;
    if sec.is_zero() {
        return Err(Error::ZeroSection);
    }
    let d = sec.total_degree();
    let ch = sec.field().characteristic();
    if ch != 0 && ch <= d as u64 {
        return Err(Error::BadCharacteristic { char: ch, degree: d });
    }
    if d <= 1 {
        return Ok(true);
    }
    let j = (0..3).max_by_key(|&j| (sec.degree(j), std::cmp::Reverse(j))).expect("three variables");
    if sec.degree(j) == d {
        // every factor involves y_j, so the derivative test is exact
        return Ok(sec.gcd(&sec.derivative(j)).is_constant());
    }
    Ok(sec.squarefree_part_all()?.total_degree() == d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConicClass {
    Line,
    IrreducibleConic,
    DegenerateConic { rank: u32 },
}

/// Lines, and conics split by the rank of their symmetric matrix.
pub fn conic_classify(c: &PlaneCurve) -> Result<ConicClass> {
    match c.degree() {
        1 => return Ok(ConicClass::Line),
        2 => {}
        d => return Err(Error::DegreeTooHigh { got: d, max: 2 }),
    }
    let field = c.field();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let half = field.inv(&field.from_i64(2))?;
    let mut a = vec![vec![field.zero(); 3]; 3];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let coeff = c.form().coeff(&e);
            *slot = if i == j { coeff } else { field.mul(&coeff, &half) };
        }
    }
    match linalg::rank(field, a) {
        3 => Ok(ConicClass::IrreducibleConic),
        r => Ok(ConicClass::DegenerateConic { rank: r as u32 }),
    }
}

//! Birational maps of `P^s` acting on one factor of `P^s × P^s`, and
//! polynomial automorphisms of affine space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};
use crate::grid::{find_grid, BipartiteGraph, GridWitness, ScanOptions};
use crate::hypersurface::{projective_points, Hypersurface, ProjPoint};
use crate::poly::{bihom_vars, var_names, BiHomPoly, Group, MultiPoly, PolyJson};

/// Same exponents, new variable names.
fn relabel(p: &MultiPoly, names: &[String]) -> MultiPoly {
    MultiPoly::from_terms(p.field(), names, p.terms().map(|(m, c)| (m.0.clone(), c.clone())))
        .expect("same arity")
}

/// `P^s ⇢ P^s` given by `s + 1` forms of one degree in `z0..zs`, with no
/// common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    components: Vec<MultiPoly>,
    degree: u32,
}

impl RationalMap {
    /// Components are read over `z0..zs` by position; a common factor is
    /// divided out.
    pub fn new(components: Vec<MultiPoly>) -> Result<RationalMap> {
        let n = components.len();
        if n < 2 {
            return Err(Error::WrongDimension("a map of P^s needs at least two components".into()));
        }
        let field = components[0].field().clone();
        let names = var_names("z", n);
        let mut comps = Vec::with_capacity(n);
        for c in &components {
            if c.field() != &field {
                return Err(Error::MixedFields);
            }
            if c.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, got: c.nvars() });
            }
            comps.push(relabel(c, &names));
        }
        let all: Vec<usize> = (0..n).collect();
        let nonzero: Vec<&MultiPoly> = comps.iter().filter(|c| !c.is_zero()).collect();
        let Some(first) = nonzero.first() else {
            return Err(Error::ZeroPolynomial);
        };
        let degree = first
            .homogeneous_degree(&all)
            .ok_or_else(|| Error::NotHomogeneous(format!("component {first}")))?;
        for c in &nonzero {
            if c.homogeneous_degree(&all) != Some(degree) {
                return Err(Error::NotHomogeneous(format!("component {c} has the wrong degree")));
            }
        }
        let g = nonzero.iter().skip(1).fold((*first).clone(), |g, c| g.gcd(c));
        if g.is_constant() {
            return Ok(RationalMap { components: comps, degree });
        }
        let degree = degree - g.total_degree();
        let components = comps.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
        Ok(RationalMap { components, degree })
    }

    pub fn identity(field: &Field, s: usize) -> RationalMap {
        let names = var_names("z", s + 1);
        let components = (0..=s).map(|i| MultiPoly::var_at(field, &names, i)).collect();
        RationalMap { components, degree: 1 }
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `s` for a map of `P^s`.
    pub fn dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn field(&self) -> &Field {
        self.components[0].field()
    }

    /// Image of a point, or `None` on the base locus.
    pub fn apply_point(&self, pt: &[Scalar]) -> Result<Option<ProjPoint>> {
        let img = self.components.iter().map(|c| c.evaluate(pt)).collect::<Result<Vec<_>>>()?;
        if img.iter().all(|c| self.field().is_zero(c)) {
            return Ok(None);
        }
        Ok(Some(ProjPoint::new(self.field(), img)?))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if self.dim() != inner.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: inner.dim() });
        }
        let comps = self.components.iter().map(|c| c.compose(&inner.components)).collect::<Result<Vec<_>>>()?;
        RationalMap::new(comps)
    }

    pub fn coerce(&self, target: &Field) -> Result<RationalMap> {
        RationalMap::new(self.components.iter().map(|c| c.coerce(target)).collect::<Result<Vec<_>>>()?)
    }

    pub fn to_json(&self) -> RationalMapJson {
        RationalMapJson { components: self.components.iter().map(MultiPoly::to_json).collect() }
    }

    pub fn from_json(j: &RationalMapJson) -> Result<RationalMap> {
        RationalMap::new(j.components.iter().map(MultiPoly::from_json).collect::<Result<Vec<_>>>()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMapJson {
    pub components: Vec<PolyJson>,
}

/// `(z1 z2 : z0 z2 : z0 z1)`.
pub fn standard_quadratic(field: &Field) -> RationalMap {
    let z = var_names("z", 3);
    let v = |i| MultiPoly::var_at(field, &z, i);
    RationalMap::new(vec![&v(1) * &v(2), &v(0) * &v(2), &v(0) * &v(1)]).expect("valid map")
}

/// `(z0^d : z0^{d-1} z1 : z0^{d-1} z2 + z0^d f(z1/z0))` for `f` given by its
/// coefficients, constant term first.
pub fn example_line_map(field: &Field, d: u32, f: &[Scalar]) -> Result<RationalMap> {
    if d == 0 {
        return Err(Error::DegreeZero("line map".into()));
    }
    let deg_f = f.iter().rposition(|c| !field.is_zero(c)).unwrap_or(0) as u32;
    if deg_f > d {
        return Err(Error::DegreeTooHigh { got: deg_f, max: d });
    }
    let z = var_names("z", 3);
    let v = |i| MultiPoly::var_at(field, &z, i);
    let lead = v(0).pow(d - 1);
    let mut third = &lead * &v(2);
    for (k, c) in f.iter().enumerate().filter(|(_, c)| !field.is_zero(c)) {
        let term = (&v(1).pow(k as u32) * &v(0).pow(d - k as u32)).scale(c);
        third = &third + &term;
    }
    RationalMap::new(vec![v(0).pow(d), &lead * &v(1), third])
}

/// Pullback together with the monomials divided out in each mapped group.
struct Pullback {
    form: BiHomPoly,
    removed: Vec<Vec<u32>>,
}

fn pullback(sigma_x: Option<&RationalMap>, sigma_y: Option<&RationalMap>, h: &Hypersurface) -> Result<Pullback> {
    let (sx, sy) = (h.sx(), h.sy());
    let vars = bihom_vars(sx, sy);
    let poly = h.poly();
    let mut images: Vec<MultiPoly> = (0..vars.len()).map(|i| poly.var_like(i)).collect();
    let mut groups = Vec::new();
    for (sigma, group, dim, offset) in [(sigma_x, Group::X, sx, 0), (sigma_y, Group::Y, sy, sx + 1)] {
        let Some(sigma) = sigma else { continue };
        if sigma.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: sigma.dim() });
        }
        if sigma.field() != poly.field() {
            return Err(Error::MixedFields);
        }
        let names = var_names(group.prefix(), dim + 1);
        for (i, c) in sigma.components.iter().enumerate() {
            images[offset + i] = relabel(c, &names).with_vars(&vars)?;
        }
        groups.push((offset..=offset + dim).collect::<Vec<usize>>());
    }
    let mut r = poly.compose(&images)?;
    if r.is_zero() {
        return Err(Error::ZeroPullback);
    }
    let mut removed = Vec::new();
    for g in &groups {
        let m = r.monomial_content(g);
        r = r.div_monomial(&m);
        removed.push(m);
    }
    Ok(Pullback { form: BiHomPoly::new(&r, sx, sy)?.monic(), removed })
}

/// `{F ∘ (σ_X × σ_Y) = 0}` with monomial content in each mapped group divided
/// out. `None` stands for the identity.
pub fn apply(sigma_x: Option<&RationalMap>, sigma_y: Option<&RationalMap>, h: &Hypersurface) -> Result<Hypersurface> {
    Ok(Hypersurface::new(pullback(sigma_x, sigma_y, h)?.form))
}

/// `x0 y0 + x1 y1 + … + xs ys`.
pub fn incidence(field: &Field, s: usize) -> Hypersurface {
    let vars = bihom_vars(s, s);
    let mut p = MultiPoly::zero(field, &vars);
    for i in 0..=s {
        p = &p + &(&MultiPoly::var_at(field, &vars, i) * &MultiPoly::var_at(field, &vars, s + 1 + i));
    }
    Hypersurface::new(BiHomPoly::new(&p, s, s).expect("bihomogeneous"))
}

/// `ȳ`-degree of the union `(id × σ)H0 ∪ (id × σ)H1`, where `H1` is the
/// pullback of `H0` under the line map with `f(w) = w^d`.
pub fn union_y_degree(sigma: &RationalMap, d: u32) -> Result<u32> {
    let field = sigma.field();
    let h0 = incidence(field, 2);
    let mut f = vec![field.zero(); d as usize + 1];
    f[d as usize] = field.one();
    let h1 = apply(None, Some(&example_line_map(field, d, &f)?), &h0)?;
    let a = apply(None, Some(sigma), &h0)?;
    let b = apply(None, Some(sigma), &h1)?;
    let common = a.poly().gcd(b.poly());
    let ys: Vec<usize> = (3..6).collect();
    Ok(a.poly().degree_in(&ys) + b.poly().degree_in(&ys) - common.degree_in(&ys))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub p: u64,
    pub s: usize,
    pub t: usize,
    pub left: usize,
    /// `y`-points kept: off the base locus, off the zeros of the removed
    /// content, and with an image shared by no other sampled point.
    pub right: usize,
    pub discarded: usize,
    /// `(u, v)` on the pullback exactly when `(u, σ(v))` is on `H`.
    pub edges_agree: bool,
    pub pullback_grid: Option<GridWitness>,
    pub original_grid: Option<GridWitness>,
    /// Each witness found on one side is a witness on the other after
    /// moving its `y`-points through `σ`.
    pub witnesses_transport: bool,
    pub consistent: bool,
}

/// Compare `(s,t)`-grids of `H` and of `(id × σ)H` over `F_p`, matching
/// `y`-points through `σ` on the locus where it is defined and injective.
pub fn grid_transport_check(
    h: &Hypersurface,
    sigma_y: &RationalMap,
    p: u64,
    s: usize,
    t: usize,
    opts: &ScanOptions,
) -> Result<TransportReport> {
    let fp = Field::prime(p)?;
    let pb = pullback(None, Some(sigma_y), h)?;
    let removed = &pb.removed[0];
    let pulled = Hypersurface::new(pb.form).coerce(&fp)?;
    let h = h.coerce(&fp)?;
    let sigma = sigma_y.coerce(&fp)?;
    let sy = h.sy();
    let off = h.sx() + 1;
    let left = projective_points(&fp, h.sx())?;
    let all = projective_points(&fp, sy)?;
    let mut candidates: Vec<(Vec<Scalar>, ProjPoint)> = Vec::new();
    for v in &all {
        let on_removed = (0..=sy).any(|i| removed[off + i] > 0 && fp.is_zero(&v[i]));
        if on_removed {
            continue;
        }
        if let Some(w) = sigma.apply_point(v)? {
            candidates.push((v.clone(), w));
        }
    }
    let mut keep: Vec<(Vec<Scalar>, ProjPoint)> = Vec::new();
    for (v, w) in &candidates {
        if candidates.iter().filter(|(_, w2)| w2 == w).count() == 1 {
            keep.push((v.clone(), w.clone()));
        }
    }
    if left.len() < s || keep.len() < t {
        return Err(Error::SampleTooSmall(format!(
            "{} x-points and {} usable y-points for s = {s}, t = {t}",
            left.len(),
            keep.len()
        )));
    }
    let on = |hs: &Hypersurface, u: &[Scalar], v: &[Scalar]| hs.contains(u, v).expect("dimensions match");
    let g_pull = BipartiteGraph::from_adjacency(left.len(), keep.len(), |i, j| on(&pulled, &left[i], &keep[j].0));
    let g_orig =
        BipartiteGraph::from_adjacency(left.len(), keep.len(), |i, j| on(&h, &left[i], keep[j].1.coords()));
    let edges_agree = g_pull.rows() == g_orig.rows();
    let pullback_grid = find_grid(&g_pull, s, t, opts)?;
    let original_grid = find_grid(&g_orig, s, t, opts)?;
    // right indices already correspond through σ, so a witness moves unchanged
    let witnesses_transport = pullback_grid.as_ref().is_none_or(|w| w.verify(&g_orig))
        && original_grid.as_ref().is_none_or(|w| w.verify(&g_pull))
        && pullback_grid.is_some() == original_grid.is_some();
    Ok(TransportReport {
        p,
        s,
        t,
        left: left.len(),
        right: keep.len(),
        discarded: all.len() - keep.len(),
        edges_agree,
        pullback_grid,
        original_grid,
        witnesses_transport,
        consistent: edges_agree && witnesses_transport,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AutomorphismKind {
    Elementary,
    Composed,
    Nagata,
}

/// Polynomial automorphism of affine `s`-space over `x1..xs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAutomorphism {
    components: Vec<MultiPoly>,
    kind: AutomorphismKind,
    inverse: Option<Vec<MultiPoly>>,
}

impl AffineAutomorphism {
    /// `x_i ↦ c·x_i + f` with `f` free of `x_i` (0-based `i`), other
    /// coordinates fixed.
    pub fn elementary(field: &Field, s: usize, i: usize, c: &Scalar, f: &MultiPoly) -> Result<AffineAutomorphism> {
        if i >= s {
            return Err(Error::ParameterOutOfRange(format!("coordinate {i} of {s}")));
        }
        let vars = var_names_affine(s);
        let f = f.with_vars(&vars)?;
        if f.field() != field {
            return Err(Error::MixedFields);
        }
        if field.is_zero(c) {
            return Err(Error::NotInvertibleShape("the scalar c is zero".into()));
        }
        if f.involves(i) {
            return Err(Error::NotInvertibleShape(format!("f involves {}", vars[i])));
        }
        let x = |j| MultiPoly::var_at(field, &vars, j);
        let mut comps: Vec<MultiPoly> = (0..s).map(x).collect();
        let mut inv = comps.clone();
        comps[i] = &x(i).scale(c) + &f;
        inv[i] = (&x(i) - &f).scale(&field.inv(c)?);
        Ok(AffineAutomorphism { components: comps, kind: AutomorphismKind::Elementary, inverse: Some(inv) })
    }

    /// `(x + Δz, y + 2Δx + Δ²z, z)` with `Δ = x² − yz`, on `x1, x2, x3`.
    pub fn nagata(field: &Field) -> AffineAutomorphism {
        let vars = var_names_affine(3);
        let v = |j| MultiPoly::var_at(field, &vars, j);
        let (x, y, z) = (v(0), v(1), v(2));
        let delta = &(&x * &x) - &(&y * &z);
        let dz = &delta * &z;
        let d2z = &(&delta * &delta) * &z;
        let two_dx = (&delta * &x).scale_i64(2);
        let fwd = vec![&x + &dz, &(&y + &two_dx) + &d2z, z.clone()];
        let back = vec![&x - &dz, &(&y - &two_dx) + &d2z, z.clone()];
        AffineAutomorphism { components: fwd, kind: AutomorphismKind::Nagata, inverse: Some(back) }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &AffineAutomorphism, inner: &AffineAutomorphism) -> Result<AffineAutomorphism> {
        if outer.dim() != inner.dim() {
            return Err(Error::DimensionMismatch { expected: outer.dim(), got: inner.dim() });
        }
        let components =
            outer.components.iter().map(|c| c.compose(&inner.components)).collect::<Result<Vec<_>>>()?;
        let inverse = match (&inner.inverse, &outer.inverse) {
            (Some(a), Some(b)) => Some(a.iter().map(|c| c.compose(b)).collect::<Result<Vec<_>>>()?),
            _ => None,
        };
        Ok(AffineAutomorphism { components, kind: AutomorphismKind::Composed, inverse })
    }

    pub fn inverse(&self) -> Result<AffineAutomorphism> {
        let Some(inv) = &self.inverse else {
            return Err(Error::NotInvertibleShape("no closed-form inverse recorded".into()));
        };
        let kind = if self.kind == AutomorphismKind::Elementary {
            AutomorphismKind::Elementary
        } else {
            AutomorphismKind::Composed
        };
        Ok(AffineAutomorphism { components: inv.clone(), kind, inverse: Some(self.components.clone()) })
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn kind(&self) -> &AutomorphismKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn apply_point(&self, pt: &[Scalar]) -> Result<Vec<Scalar>> {
        self.components.iter().map(|c| c.evaluate(pt)).collect()
    }

    /// The induced birational map of `P^s`: `(z0 : z) ↦ (z0^D : z0^D σ(z/z0))`
    /// with `D` the largest component degree.
    pub fn to_rational_map(&self) -> Result<RationalMap> {
        let s = self.dim();
        let field = self.components[0].field();
        let d = self.components.iter().map(MultiPoly::total_degree).max().unwrap_or(1).max(1);
        let names = var_names("z", s + 1);
        let mut comps = vec![MultiPoly::var_at(field, &names, 0).pow(d)];
        for c in &self.components {
            let terms = c.terms().map(|(m, k)| {
                let mut e = vec![d - m.degree()];
                e.extend_from_slice(&m.0);
                (e, k.clone())
            });
            comps.push(MultiPoly::from_terms(field, &names, terms)?);
        }
        RationalMap::new(comps)
    }

    /// `g ∘ σ` for `g` over `x1..xs`.
    pub fn pullback(&self, g: &MultiPoly) -> Result<MultiPoly> {
        g.with_vars(&var_names_affine(self.dim()))?.compose(&self.components)
    }
}

fn var_names_affine(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyp(field: &Field, s: usize, expr: &str) -> Hypersurface {
        let p = MultiPoly::parse(field, &bihom_vars(s, s), expr).unwrap();
        Hypersurface::new(BiHomPoly::new(&p, s, s).unwrap())
    }

    fn pt(field: &Field, c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&v| field.from_i64(v)).collect()
    }

    #[test]
    fn quadratic_points() {
        let q = Field::rationals();
        let s = standard_quadratic(&q);
        let img = s.apply_point(&pt(&q, &[1, 2, 3])).unwrap().unwrap();
        assert_eq!(img, ProjPoint::from_i64(&q, &[6, 3, 2]).unwrap());
        let back = s.apply_point(img.coords()).unwrap().unwrap();
        assert_eq!(back, ProjPoint::from_i64(&q, &[1, 2, 3]).unwrap());
        let e = s.apply_point(&pt(&q, &[0, 1, 1])).unwrap().unwrap();
        assert_eq!(e, ProjPoint::from_i64(&q, &[1, 0, 0]).unwrap());
        assert_eq!(s.apply_point(&pt(&q, &[0, 0, 1])).unwrap(), None);
        assert_eq!(s.compose(&s).unwrap(), RationalMap::identity(&q, 2));
    }

    #[test]
    fn quadratic_sends_incidence_to_h2() {
        let q = Field::rationals();
        let h0 = incidence(&q, 2);
        let s = standard_quadratic(&q);
        let h2 = apply(None, Some(&s), &h0).unwrap();
        assert_eq!(h2, hyp(&q, 2, "x0*y1*y2 + x1*y0*y2 + x2*y0*y1"));
        assert_eq!(apply(None, Some(&s), &h2).unwrap(), h0);
        assert_eq!(apply(None, None, &h0).unwrap(), h0);
    }

    #[test]
    fn line_maps() {
        let q = Field::rationals();
        assert_eq!(example_line_map(&q, 1, &[]).unwrap(), RationalMap::identity(&q, 2));
        let m = example_line_map(&q, 2, &pt(&q, &[0, 0, 1])).unwrap();
        let z = var_names("z", 3);
        let expect: Vec<MultiPoly> = ["z0^2", "z0*z1", "z0*z2 + z1^2"]
            .iter()
            .map(|e| MultiPoly::parse(&q, &z, e).unwrap())
            .collect();
        assert_eq!(m.components(), &expect[..]);
        let img = m.apply_point(&pt(&q, &[1, 3, 5])).unwrap().unwrap();
        assert_eq!(img, ProjPoint::from_i64(&q, &[1, 3, 14]).unwrap());
        assert!(matches!(
            example_line_map(&q, 2, &pt(&q, &[0, 0, 0, 1])),
            Err(Error::DegreeTooHigh { got: 3, max: 2 })
        ));
        // trailing zero coefficients do not count toward deg f
        assert!(example_line_map(&q, 1, &pt(&q, &[1, 1, 0])).is_ok());
    }

    #[test]
    fn line_map_degrees() {
        let q = Field::rationals();
        let h0 = incidence(&q, 2);
        for d in 2..=6u32 {
            let mut f = vec![q.zero(); d as usize + 1];
            f[d as usize] = q.one();
            let h1 = apply(None, Some(&example_line_map(&q, d, &f).unwrap()), &h0).unwrap();
            let expect = format!("x0*y0^{d} + x1*y0^{}*y1 + x2*(y0^{}*y2 + y1^{d})", d - 1, d - 1);
            assert_eq!(h1, hyp(&q, 2, &expect));
            assert_eq!(h1.bidegree(), (1, d));
        }
    }

    #[test]
    fn union_degree_lower_bound() {
        let q = Field::rationals();
        let maps = [
            RationalMap::identity(&q, 2),
            standard_quadratic(&q),
            example_line_map(&q, 2, &pt(&q, &[0, 1, 1])).unwrap(),
            standard_quadratic(&q).compose(&example_line_map(&q, 2, &pt(&q, &[0, 0, 1])).unwrap()).unwrap(),
        ];
        for sigma in &maps {
            for d in 2..=5 {
                assert!(union_y_degree(sigma, d).unwrap() >= d);
            }
        }
    }

    #[test]
    fn zero_pullback() {
        let q = Field::rationals();
        // the image is the line y2 = 0
        let z = var_names("z", 3);
        let m = RationalMap::new(vec![
            MultiPoly::var_at(&q, &z, 0),
            MultiPoly::var_at(&q, &z, 1),
            MultiPoly::zero(&q, &z),
        ])
        .unwrap();
        let h = hyp(&q, 2, "x0*y2");
        assert!(matches!(apply(None, Some(&m), &h), Err(Error::ZeroPullback)));
    }

    #[test]
    fn transport_quadratic() {
        let q = Field::rationals();
        let r = grid_transport_check(&incidence(&q, 2), &standard_quadratic(&q), 7, 2, 2, &ScanOptions::default())
            .unwrap();
        assert_eq!((r.left, r.right), (57, 36));
        assert!(r.consistent);
        assert_eq!(r.pullback_grid, None);
        assert_eq!(r.original_grid, None);
    }

    #[test]
    fn transport_planted_grid() {
        let q = Field::rationals();
        let h = hyp(&q, 1, "(x0*y1 - x1*y0)*(x0*y1 - 2*x1*y0)");
        let z = var_names("z", 2);
        let lin = RationalMap::new(vec![
            MultiPoly::parse(&q, &z, "z0 + z1").unwrap(),
            MultiPoly::parse(&q, &z, "z1").unwrap(),
        ])
        .unwrap();
        for sigma in [lin, RationalMap::identity(&q, 1)] {
            let r = grid_transport_check(&h, &sigma, 5, 1, 2, &ScanOptions::default()).unwrap();
            assert!(r.consistent);
            assert!(r.pullback_grid.is_some());
            assert_eq!(r.discarded, 0);
        }
        let r = grid_transport_check(&h, &RationalMap::identity(&q, 1), 5, 1, 2, &ScanOptions::default()).unwrap();
        assert_eq!(r.pullback_grid, r.original_grid);
        assert!(matches!(
            grid_transport_check(&h, &RationalMap::identity(&q, 1), 5, 1, 7, &ScanOptions::default()),
            Err(Error::SampleTooSmall(_))
        ));
    }

    #[test]
    fn nagata_invariant() {
        let q = Field::rationals();
        let n = AffineAutomorphism::nagata(&q);
        let vars = var_names_affine(3);
        let delta = MultiPoly::parse(&q, &vars, "x1^2 - x2*x3").unwrap();
        assert_eq!(n.pullback(&delta).unwrap(), delta);
        assert_eq!(n.apply_point(&pt(&q, &[0, 0, 0])).unwrap(), pt(&q, &[0, 0, 0]));
        let id = AffineAutomorphism::compose(&n, &n.inverse().unwrap()).unwrap();
        for (i, c) in id.components().iter().enumerate() {
            assert_eq!(c, &MultiPoly::var_at(&q, &vars, i));
        }
    }

    #[test]
    fn nagata_on_projective_space() {
        let q = Field::rationals();
        let m = AffineAutomorphism::nagata(&q).to_rational_map().unwrap();
        assert_eq!(m.degree(), 5);
        let img = m.apply_point(&pt(&q, &[1, 1, 2, 3])).unwrap().unwrap();
        // Δ = 1 - 6 = -5: (1 - 15, 2 - 10 + 75, 3)
        assert_eq!(img, ProjPoint::from_i64(&q, &[1, -14, 67, 3]).unwrap());
    }

    #[test]
    fn single_delta_variant_breaks_invariance() {
        let q = Field::rationals();
        let vars = var_names_affine(3);
        let comps: Vec<MultiPoly> = ["x1 + (x1^2 - x2*x3)*x3", "x2 + 2*(x1^2 - x2*x3)*x1 + (x1^2 - x2*x3)*x3", "x3"]
            .iter()
            .map(|e| MultiPoly::parse(&q, &vars, e).unwrap())
            .collect();
        let delta = MultiPoly::parse(&q, &vars, "x1^2 - x2*x3").unwrap();
        assert_ne!(delta.compose(&comps).unwrap(), delta);
    }

    #[test]
    fn elementary_shape() {
        let q = Field::rationals();
        let vars = var_names_affine(3);
        let f = MultiPoly::parse(&q, &vars, "x1^2 + 3*x3").unwrap();
        let e = AffineAutomorphism::elementary(&q, 3, 1, &q.from_i64(2), &f).unwrap();
        let p = pt(&q, &[1, 2, 3]);
        assert_eq!(e.apply_point(&p).unwrap(), pt(&q, &[1, 14, 3]));
        assert_eq!(e.inverse().unwrap().apply_point(&pt(&q, &[1, 14, 3])).unwrap(), p);
        assert!(matches!(
            AffineAutomorphism::elementary(&q, 3, 0, &q.from_i64(2), &f),
            Err(Error::NotInvertibleShape(_))
        ));
        assert!(matches!(
            AffineAutomorphism::elementary(&q, 3, 1, &q.zero(), &f),
            Err(Error::NotInvertibleShape(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let q = Field::rationals();
        let m = standard_quadratic(&q);
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back = RationalMap::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}

//! Hypersurfaces in `P^sx × P^sy`, their sections, open sets given as
//! complements of hypersurfaces, and the four norm-graph style families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{norm_poly, Field, Scalar};
use crate::poly::{affine_vars, var_names, BiHomPoly, Group, MultiPoly, PolyJson};

/// A point of projective space, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(field: &Field, mut coords: Vec<Scalar>) -> Result<ProjPoint> {
        if coords.iter().any(|c| !field.owns(c)) {
            return Err(Error::PointNotRational);
        }
        let Some(lead) = coords.iter().find(|c| !field.is_zero(c)).cloned() else {
            return Err(Error::ParameterOutOfRange("all coordinates are zero".into()));
        };
        if !field.is_one(&lead) {
            let inv = field.inv(&lead)?;
            for c in &mut coords {
                *c = field.mul(c, &inv);
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(field: &Field, coords: &[i64]) -> Result<ProjPoint> {
        ProjPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Parses `"1:2:3"`; coordinates may be fractions over the rationals.
    pub fn parse(field: &Field, text: &str) -> Result<ProjPoint> {
        let coords = text.split(':').map(|t| field.parse(t)).collect::<Result<Vec<_>>>()?;
        ProjPoint::new(field, coords)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn format(&self, field: &Field) -> String {
        self.coords.iter().map(|c| field.format(c)).collect::<Vec<_>>().join(":")
    }
}

/// All tuples of `F^n` in lexicographic order (first coordinate slowest).
pub fn affine_points(field: &Field, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let elems = field.elements()?;
    let q = elems.len();
    let total = q.checked_pow(n as u32).ok_or(Error::BudgetExceeded {
        needed: u128::MAX,
        budget: usize::MAX as u128,
    })?;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut pt = vec![field.zero(); n];
        for slot in pt.iter_mut().rev() {
            *slot = elems[idx % q].clone();
            idx /= q;
        }
        out.push(pt);
    }
    Ok(out)
}

/// All points of `P^dim(F)`, normalized: first the points `(1, *)`, then
/// `(0, 1, *)`, and so on, each block in lexicographic order.
pub fn projective_points(field: &Field, dim: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut out = Vec::new();
    for lead in 0..=dim {
        for tail in affine_points(field, dim - lead)? {
            let mut pt = vec![field.zero(); lead];
            pt.push(field.one());
            pt.extend(tail);
            out.push(pt);
        }
    }
    Ok(out)
}

/// A nonzero bihomogeneous form up to scalar, stored monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    form: BiHomPoly,
}

impl Hypersurface {
    pub fn new(form: BiHomPoly) -> Hypersurface {
        Hypersurface { form: form.monic() }
    }

    pub fn from_poly(poly: &MultiPoly) -> Result<Hypersurface> {
        Ok(Hypersurface::new(BiHomPoly::from_poly(poly)?))
    }

    pub fn form(&self) -> &BiHomPoly {
        &self.form
    }

    pub fn poly(&self) -> &MultiPoly {
        self.form.poly()
    }

    pub fn field(&self) -> &Field {
        self.form.poly().field()
    }

    pub fn sx(&self) -> usize {
        self.form.sx()
    }

    pub fn sy(&self) -> usize {
        self.form.sy()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.form.bidegree()
    }

    fn group_vars(&self, g: Group) -> Vec<String> {
        match g {
            Group::X => var_names("x", self.sx() + 1),
            Group::Y => var_names("y", self.sy() + 1),
        }
    }

    /// Substitute a point into one group, returning a raw (un-normalized)
    /// form in the other group's variables.
    fn restrict(&self, group: Group, pt: &[Scalar]) -> Result<MultiPoly> {
        let idx = self.form.group(group);
        if pt.len() != idx.len() {
            return Err(Error::DimensionMismatch { expected: idx.len(), got: pt.len() });
        }
        if pt.iter().any(|c| !self.field().owns(c)) {
            return Err(Error::MixedFields);
        }
        let assign: Vec<(usize, Scalar)> = idx.into_iter().zip(pt.iter().cloned()).collect();
        let r = self.poly().partial_eval_many(&assign);
        r.with_vars(&self.group_vars(group.other()))
    }

    /// `F(u, ȳ)`: the section at `u`, over `y0..ys`. May be zero.
    pub fn section(&self, u: &ProjPoint) -> Result<MultiPoly> {
        self.restrict(Group::X, u.coords())
    }

    /// `F(x̄, v)` over `x0..xs`.
    pub fn section_at_y(&self, v: &ProjPoint) -> Result<MultiPoly> {
        self.restrict(Group::Y, v.coords())
    }

    /// Whether `P^sx × {v}` lies on the hypersurface.
    pub fn contains_fiber(&self, v: &ProjPoint) -> Result<bool> {
        Ok(self.section_at_y(v)?.is_zero())
    }

    pub fn evaluate(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        let mut pt = u.to_vec();
        pt.extend_from_slice(v);
        self.poly().evaluate(&pt)
    }

    pub fn contains(&self, u: &[Scalar], v: &[Scalar]) -> Result<bool> {
        Ok(self.field().is_zero(&self.evaluate(u, v)?))
    }

    /// Map coefficients into `target`, e.g. reduce a rational form mod p.
    pub fn coerce(&self, target: &Field) -> Result<Hypersurface> {
        let p = self.poly().primitive_integral().coerce(target)?;
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Hypersurface::new(BiHomPoly::new(&p, self.sx(), self.sy())?))
    }

    pub fn to_json(&self) -> HypersurfaceJson {
        let (dx, dy) = self.bidegree();
        HypersurfaceJson {
            poly: self.poly().to_json(),
            sx: self.sx(),
            sy: self.sy(),
            bidegree: [dx, dy],
        }
    }

    pub fn from_json(j: &HypersurfaceJson) -> Result<Hypersurface> {
        let p = MultiPoly::from_json(&j.poly)?;
        let form = BiHomPoly::new(&p, j.sx, j.sy)?;
        if form.bidegree() != (j.bidegree[0], j.bidegree[1]) {
            return Err(Error::Parse(format!(
                "declared bidegree {:?} but the form has {:?}",
                j.bidegree,
                form.bidegree()
            )));
        }
        Ok(Hypersurface::new(form))
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceJson {
    #[serde(flatten)]
    pub poly: PolyJson,
    pub sx: usize,
    pub sy: usize,
    pub bidegree: [u32; 2],
}

/// `P^dim` minus the zero sets of the excluded forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSet {
    dim: usize,
    group: Group,
    excluded: Vec<MultiPoly>,
}

impl OpenSet {
    pub fn full(dim: usize, group: Group) -> OpenSet {
        OpenSet { dim, group, excluded: Vec::new() }
    }

    /// Each excluded form is re-expressed over the group's variables and
    /// must be homogeneous and nonzero.
    pub fn new(dim: usize, group: Group, excluded: Vec<MultiPoly>) -> Result<OpenSet> {
        let vars = var_names(group.prefix(), dim + 1);
        let all: Vec<usize> = (0..=dim).collect();
        let mut forms = Vec::with_capacity(excluded.len());
        for e in excluded {
            if e.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let e = e.with_vars(&vars)?;
            if e.homogeneous_degree(&all).is_none() {
                return Err(Error::NotHomogeneous(format!("excluded form {e}")));
            }
            forms.push(e.monic());
        }
        Ok(OpenSet { dim, group, excluded: forms })
    }

    /// On `P^1`: the complement of finitely many points, each excluded by the
    /// linear form `b·z0 − a·z1` vanishing at `(a:b)`.
    pub fn excluding_points(field: &Field, group: Group, points: &[ProjPoint]) -> Result<OpenSet> {
        let vars = var_names(group.prefix(), 2);
        let mut forms = Vec::with_capacity(points.len());
        for pt in points {
            if pt.dim() != 1 {
                return Err(Error::WrongDimension(format!(
                    "point exclusion needs points of P^1, got P^{}",
                    pt.dim()
                )));
            }
            let (a, b) = (&pt.coords()[0], &pt.coords()[1]);
            let z0 = MultiPoly::var_at(field, &vars, 0);
            let z1 = MultiPoly::var_at(field, &vars, 1);
            forms.push(&z0.scale(b) - &z1.scale(a));
        }
        OpenSet::new(1, group, forms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn excluded(&self) -> &[MultiPoly] {
        &self.excluded
    }

    pub fn is_full(&self) -> bool {
        self.excluded.is_empty()
    }

    /// Product of the excluded forms (1 for the whole space).
    pub fn excluded_product(&self, field: &Field) -> MultiPoly {
        let vars = var_names(self.group.prefix(), self.dim + 1);
        self.excluded.iter().fold(MultiPoly::one(field, &vars), |acc, e| &acc * e)
    }

    pub fn coerce(&self, target: &Field) -> Result<OpenSet> {
        let forms = self.excluded.iter().map(|e| e.primitive_integral().coerce(target)).collect::<Result<Vec<_>>>()?;
        if forms.iter().any(MultiPoly::is_zero) {
            // an excluded form that vanishes mod p removes every point
            return Ok(OpenSet { dim: self.dim, group: self.group, excluded: forms });
        }
        OpenSet::new(self.dim, self.group, forms)
    }

    pub fn contains(&self, pt: &[Scalar]) -> Result<bool> {
        if pt.len() != self.dim + 1 {
            return Err(Error::DimensionMismatch { expected: self.dim + 1, got: pt.len() });
        }
        for e in &self.excluded {
            if e.field().is_zero(&e.evaluate(pt)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> OpenSetJson {
        OpenSetJson {
            dim: self.dim,
            group: self.group,
            excluded: self.excluded.iter().map(MultiPoly::to_json).collect(),
        }
    }

    pub fn from_json(j: &OpenSetJson) -> Result<OpenSet> {
        let forms = j.excluded.iter().map(MultiPoly::from_json).collect::<Result<Vec<_>>>()?;
        OpenSet::new(j.dim, j.group, forms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSetJson {
    pub dim: usize,
    pub group: Group,
    pub excluded: Vec<PolyJson>,
}

/// The four constructions of `K_{s,t}`-free graphs over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1a")]
    Hyperbola,
    #[serde(rename = "1b")]
    Sphere,
    #[serde(rename = "1c")]
    Norm,
    #[serde(rename = "1d")]
    ProjectiveNorm,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Hyperbola, Family::Sphere, Family::Norm, Family::ProjectiveNorm];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Hyperbola => "1a",
            Family::Sphere => "1b",
            Family::Norm => "1c",
            Family::ProjectiveNorm => "1d",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}` (expected 1a, 1b, 1c or 1d)")))
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub family: Family,
    pub p: u64,
    pub s: usize,
    /// Affine equation `F = 0` over `x1..xs, y1..ys`.
    pub affine: MultiPoly,
    pub hypersurface: Hypersurface,
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn smallest_non_residue(p: u64) -> u64 {
    let e = (p - 1) / 2;
    (2..p).find(|&a| mod_pow(a, e, p) == p - 1).expect("odd primes have non-residues")
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Right-hand side of the sphere equation: 1 when `p ≡ 3 (mod 4)`,
/// otherwise the smallest non-residue.
pub fn sphere_radius(p: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::BadCharacteristic { char: 2, degree: 2 });
    }
    Ok(if p % 4 == 3 { 1 } else { smallest_non_residue(p) })
}

pub fn construct(family: Family, p: u64, s: usize) -> Result<Construction> {
    let field = Field::prime(p)?;
    let vars = affine_vars(s, s);
    let x = |i: usize| MultiPoly::var_at(&field, &vars, i - 1);
    let y = |i: usize| MultiPoly::var_at(&field, &vars, s + i - 1);
    let one = MultiPoly::one(&field, &vars);
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedParameters(format!("family {family} requires {what}, got s = {s}")))
        }
    };
    let affine = match family {
        Family::Hyperbola => {
            need(s == 2, "s = 2")?;
            &(&(&x(1) * &y(1)) + &(&x(2) * &y(2))) - &one
        }
        Family::Sphere => {
            need(s == 3, "s = 3")?;
            let r = sphere_radius(p)?;
            let mut f = one.scale_i64(-(r as i64));
            for i in 1..=3 {
                f = &f + &(&x(i) - &y(i)).pow(2);
            }
            f
        }
        Family::Norm => {
            need(s >= 2, "s >= 2")?;
            let np = norm_poly(p, s as u32)?;
            let images: Vec<MultiPoly> = (1..=s).map(|i| &x(i) + &y(i)).collect();
            &np.compose(&images)? - &one
        }
        Family::ProjectiveNorm => {
            need(s >= 2, "s >= 2")?;
            let np = norm_poly(p, (s - 1) as u32)?;
            let images: Vec<MultiPoly> = (2..=s).map(|i| &x(i) + &y(i)).collect();
            &np.compose(&images)? - &(&x(1) * &y(1))
        }
    };
    let form = BiHomPoly::from_affine(&affine, s, s)?;
    Ok(Construction { family, p, s, affine, hypersurface: Hypersurface::new(form) })
}

/// Outcome of comparing two hypersurfaces on sampled points of `X × Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleComparison {
    pub equal: bool,
    pub points_checked: u64,
    /// `(p, u, v)` where exactly one of the forms vanishes.
    pub witness: Option<(u64, String, String)>,
}

/// Checks at every `F_p`-point of `X × Y`, for each prime, that the two
/// forms vanish together. Evidence only: agreement on samples is not a proof.
pub fn almost_equal_sampled(
    h1: &Hypersurface,
    h2: &Hypersurface,
    x: &OpenSet,
    y: &OpenSet,
    primes: &[u64],
) -> Result<SampleComparison> {
    if (h1.sx(), h1.sy()) != (h2.sx(), h2.sy()) || x.dim() != h1.sx() || y.dim() != h1.sy() {
        return Err(Error::DimensionMismatch { expected: h1.sx(), got: h2.sx() });
    }
    let mut checked = 0u64;
    for &p in primes {
        let fp = Field::prime(p)?;
        let (a, b) = (h1.coerce(&fp)?, h2.coerce(&fp)?);
        let (xs, ys) = (x.coerce(&fp)?, y.coerce(&fp)?);
        let left: Vec<_> = projective_points(&fp, h1.sx())?
            .into_iter()
            .filter(|u| xs.contains(u).unwrap_or(false))
            .collect();
        let right: Vec<_> = projective_points(&fp, h1.sy())?
            .into_iter()
            .filter(|v| ys.contains(v).unwrap_or(false))
            .collect();
        for u in &left {
            for v in &right {
                checked += 1;
                if a.contains(u, v)? != b.contains(u, v)? {
                    let fmt = |pt: &[Scalar]| pt.iter().map(|c| fp.format(c)).collect::<Vec<_>>().join(":");
                    return Ok(SampleComparison {
                        equal: false,
                        points_checked: checked,
                        witness: Some((p, fmt(u), fmt(v))),
                    });
                }
            }
        }
    }
    if checked == 0 {
        return Err(Error::EmptySample);
    }
    Ok(SampleComparison { equal: true, points_checked: checked, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::bihom_vars;

    fn h0(field: &Field) -> Hypersurface {
        let vars = bihom_vars(2, 2);
        let p = MultiPoly::from_int_terms(
            field,
            &vars,
            &[(&[1, 0, 0, 1, 0, 0], 1), (&[0, 1, 0, 0, 1, 0], 1), (&[0, 0, 1, 0, 0, 1], 1)],
        );
        Hypersurface::from_poly(&p).unwrap()
    }

    #[test]
    fn section_of_h0() {
        let q = Field::rationals();
        let h = h0(&q);
        let u = ProjPoint::from_i64(&q, &[1, 2, 3]).unwrap();
        let sec = h.section(&u).unwrap();
        let yv = var_names("y", 3);
        let expect = MultiPoly::from_int_terms(&q, &yv, &[(&[1, 0, 0], 1), (&[0, 1, 0], 2), (&[0, 0, 1], 3)]);
        assert_eq!(sec, expect);
        assert!(!h.contains_fiber(&u).unwrap());
        assert!(matches!(
            h.section(&ProjPoint::from_i64(&q, &[1, 2]).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fibers_and_zero_sections() {
        let q = Field::rationals();
        let vars = bihom_vars(2, 2);
        // x0 y0
        let p = MultiPoly::from_int_terms(&q, &vars, &[(&[1, 0, 0, 1, 0, 0], 1)]);
        let h = Hypersurface::from_poly(&p).unwrap();
        assert!(h.contains_fiber(&ProjPoint::from_i64(&q, &[0, 1, 0]).unwrap()).unwrap());
        assert!(h.section(&ProjPoint::from_i64(&q, &[0, 1, 0]).unwrap()).unwrap().is_zero());
        // x0 y0 y1
        let p = MultiPoly::from_int_terms(&q, &vars, &[(&[1, 0, 0, 1, 1, 0], 1)]);
        let h = Hypersurface::from_poly(&p).unwrap();
        assert!(h.contains_fiber(&ProjPoint::from_i64(&q, &[1, 0, 0]).unwrap()).unwrap());
    }

    #[test]
    fn point_normalization() {
        let f5 = Field::prime(5).unwrap();
        let a = ProjPoint::from_i64(&f5, &[0, 2, 4]).unwrap();
        assert_eq!(a, ProjPoint::from_i64(&f5, &[0, 1, 2]).unwrap());
        assert_eq!(a.format(&f5), "0:1:2");
        assert!(ProjPoint::from_i64(&f5, &[0, 0]).is_err());
        assert_eq!(projective_points(&f5, 2).unwrap().len(), 31);
        assert_eq!(affine_points(&f5, 2).unwrap()[7], vec![Scalar::Mod(1), Scalar::Mod(2)]);
    }

    #[test]
    fn family_1a_and_1c_forms() {
        let c = construct(Family::Hyperbola, 5, 2).unwrap();
        assert_eq!(c.affine.to_string(), "x2*y2 + x1*y1 + 4");
        assert_eq!(c.hypersurface.bidegree(), (1, 1));

        let c = construct(Family::Norm, 3, 2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let v = affine_vars(2, 2);
        let z = |i: usize| &MultiPoly::var_at(&f3, &v, i) + &MultiPoly::var_at(&f3, &v, i + 2);
        let expect = &(&z(0).pow(2) + &z(1).pow(2)) - &MultiPoly::one(&f3, &v);
        assert_eq!(c.affine, expect);
    }

    #[test]
    fn family_parameters() {
        assert!(matches!(construct(Family::Hyperbola, 5, 3), Err(Error::UnsupportedParameters(_))));
        assert!(matches!(construct(Family::Sphere, 2, 3), Err(Error::BadCharacteristic { .. })));
        assert!(matches!(construct(Family::Norm, 4, 2), Err(Error::InvalidField(_))));
        assert_eq!(sphere_radius(7).unwrap(), 1);
        assert_eq!(sphere_radius(5).unwrap(), 2);
        assert_eq!(sphere_radius(13).unwrap(), 2);
        assert_eq!(sphere_radius(17).unwrap(), 3);
        assert_eq!("1d".parse::<Family>().unwrap(), Family::ProjectiveNorm);
    }

    #[test]
    fn open_set_points() {
        let f7 = Field::prime(7).unwrap();
        let pts = [ProjPoint::from_i64(&f7, &[0, 1]).unwrap(), ProjPoint::from_i64(&f7, &[1, 3]).unwrap()];
        let x = OpenSet::excluding_points(&f7, Group::X, &pts).unwrap();
        let members = projective_points(&f7, 1)
            .unwrap()
            .into_iter()
            .filter(|u| x.contains(u).unwrap())
            .count();
        assert_eq!(members, 6);
        assert!(!x.contains(&[Scalar::Mod(2), Scalar::Mod(6)]).unwrap());
    }

    #[test]
    fn sampled_equality() {
        let q = Field::rationals();
        let h = h0(&q);
        let full = OpenSet::full(2, Group::X);
        let fully = OpenSet::full(2, Group::Y);
        let r = almost_equal_sampled(&h, &h, &full, &fully, &[3]).unwrap();
        assert!(r.equal);
        assert_eq!(r.points_checked, 169);
        let vars = bihom_vars(2, 2);
        let h2 = MultiPoly::from_int_terms(
            &q,
            &vars,
            &[(&[1, 0, 0, 0, 1, 1], 1), (&[0, 1, 0, 1, 0, 1], 1), (&[0, 0, 1, 1, 1, 0], 1)],
        );
        let h2 = Hypersurface::from_poly(&h2).unwrap();
        let r = almost_equal_sampled(&h, &h2, &full, &fully, &[3]).unwrap();
        assert!(!r.equal);
        assert!(r.witness.is_some());
        assert_eq!(almost_equal_sampled(&h, &h, &full, &fully, &[]).unwrap_err(), Error::EmptySample);
    }

    #[test]
    fn json_round_trip() {
        let c = construct(Family::Sphere, 7, 3).unwrap();
        let text = serde_json::to_string(&c.hypersurface.to_json()).unwrap();
        assert!(text.contains(r#""sx":3"#) && text.contains(r#""bidegree":[2,2]"#));
        let j: HypersurfaceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Hypersurface::from_json(&j).unwrap(), c.hypersurface);
    }
}

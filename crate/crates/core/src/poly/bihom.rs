use serde::{Deserialize, Serialize};

use super::{var_names, MultiPoly};
use crate::error::{Error, Result};

/// One of the two variable groups `x̄ = (x0..xs)` and `ȳ = (y0..ys)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    X,
    Y,
}

impl Group {
    pub fn other(self) -> Group {
        match self {
            Group::X => Group::Y,
            Group::Y => Group::X,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            Group::X => "x",
            Group::Y => "y",
        }
    }
}

/// Variable list `x0..x{sx}, y0..y{sy}`.
pub fn bihom_vars(sx: usize, sy: usize) -> Vec<String> {
    let mut v = var_names("x", sx + 1);
    v.extend(var_names("y", sy + 1));
    v
}

/// Affine variable list `x1..x{s}, y1..y{s}`.
pub fn affine_vars(sx: usize, sy: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=sx).map(|i| format!("x{i}")).collect();
    v.extend((1..=sy).map(|i| format!("y{i}")));
    v
}

/// A nonzero polynomial separately homogeneous in `x̄` and `ȳ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiHomPoly {
    inner: MultiPoly,
    sx: usize,
    sy: usize,
    bidegree: (u32, u32),
}

impl BiHomPoly {
    /// Re-expresses `poly` over `x0..x{sx}, y0..y{sy}` and checks that it is
    /// bihomogeneous.
    pub fn new(poly: &MultiPoly, sx: usize, sy: usize) -> Result<BiHomPoly> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let inner = poly.with_vars(&bihom_vars(sx, sy))?;
        let xs: Vec<usize> = (0..=sx).collect();
        let ys: Vec<usize> = (sx + 1..=sx + sy + 1).collect();
        let dx = inner
            .homogeneous_degree(&xs)
            .ok_or_else(|| Error::NotHomogeneous("mixed degrees in the x group".into()))?;
        let dy = inner
            .homogeneous_degree(&ys)
            .ok_or_else(|| Error::NotHomogeneous("mixed degrees in the y group".into()))?;
        Ok(BiHomPoly { inner, sx, sy, bidegree: (dx, dy) })
    }

    /// Infers `sx`, `sy` from variable names of the form `x<i>` / `y<i>`.
    pub fn from_poly(poly: &MultiPoly) -> Result<BiHomPoly> {
        let count = |prefix: char| {
            poly.vars()
                .iter()
                .filter(|v| v.starts_with(prefix) && v[1..].parse::<usize>().is_ok())
                .count()
        };
        let (nx, ny) = (count('x'), count('y'));
        if nx == 0 || ny == 0 || nx + ny != poly.nvars() {
            return Err(Error::WrongDimension(format!(
                "expected variables x0.. and y0.., got {:?}",
                poly.vars()
            )));
        }
        BiHomPoly::new(poly, nx - 1, ny - 1)
    }

    /// Bihomogenization of an affine polynomial in `x1..xs, y1..ys`: each
    /// group is homogenized with `x0` (resp. `y0`) to its own top degree.
    pub fn from_affine(affine: &MultiPoly, sx: usize, sy: usize) -> Result<BiHomPoly> {
        let vars = bihom_vars(sx, sy);
        let p = affine.with_vars(&vars)?;
        let xs: Vec<usize> = (0..=sx).collect();
        let ys: Vec<usize> = (sx + 1..=sx + sy + 1).collect();
        let p = homogenize(&p, &xs, 0, None)?;
        let p = homogenize(&p, &ys, sx + 1, None)?;
        BiHomPoly::new(&p, sx, sy)
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.inner
    }

    pub fn into_poly(self) -> MultiPoly {
        self.inner
    }

    pub fn sx(&self) -> usize {
        self.sx
    }

    pub fn sy(&self) -> usize {
        self.sy
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn group(&self, g: Group) -> Vec<usize> {
        match g {
            Group::X => (0..=self.sx).collect(),
            Group::Y => (self.sx + 1..=self.sx + self.sy + 1).collect(),
        }
    }

    /// View `F` as a polynomial in `group` and take the GCD of its
    /// coefficients: for `Group::Y` this is the factor `f(x̄)`, for
    /// `Group::X` the factor `g(ȳ)`.
    pub fn content_in_group(&self, group: Group) -> MultiPoly {
        self.inner.content_in_vars(&self.group(group))
    }

    /// `f(x̄)`: the largest factor depending only on `x̄`.
    pub fn x_content(&self) -> MultiPoly {
        self.content_in_group(Group::Y)
    }

    /// `g(ȳ)`: the largest factor depending only on `ȳ`.
    pub fn y_content(&self) -> MultiPoly {
        self.content_in_group(Group::X)
    }

    /// Affine chart `x0 = y0 = 1`, over `x1..xs, y1..ys`.
    pub fn dehomogenize(&self) -> MultiPoly {
        let f = self.inner.field();
        let p = self.inner.partial_eval_many(&[(0, f.one()), (self.sx + 1, f.one())]);
        p.with_vars(&affine_vars(self.sx, self.sy)).expect("chart variables eliminated")
    }

    /// Normalized so the leading coefficient is 1.
    pub fn monic(&self) -> BiHomPoly {
        BiHomPoly { inner: self.inner.monic(), ..self.clone() }
    }

    pub fn mul(&self, other: &BiHomPoly) -> Result<BiHomPoly> {
        if (self.sx, self.sy) != (other.sx, other.sy) {
            return Err(Error::MixedFields);
        }
        let inner = self.inner.checked_mul(&other.inner)?;
        Ok(BiHomPoly {
            inner,
            sx: self.sx,
            sy: self.sy,
            bidegree: (self.bidegree.0 + other.bidegree.0, self.bidegree.1 + other.bidegree.1),
        })
    }
}

/// Multiply each term by a power of `hvar` so that every term has degree
/// `degree` (default: the current top degree) in `group`.
pub fn homogenize(
    poly: &MultiPoly,
    group: &[usize],
    hvar: usize,
    degree: Option<u32>,
) -> Result<MultiPoly> {
    if poly.involves(hvar) {
        return Err(Error::NotHomogeneous(format!(
            "`{}` already occurs in the polynomial",
            poly.vars()[hvar]
        )));
    }
    let top = poly.degree_in(group);
    let target = degree.unwrap_or(top);
    if target < top {
        return Err(Error::ParameterOutOfRange(format!(
            "homogenizing degree {target} is below the top degree {top}"
        )));
    }
    let mut out = MultiPoly::zero(poly.field(), poly.vars());
    for (m, c) in poly.terms() {
        let mut e = m.0.clone();
        e[hvar] = target - m.degree_in(group);
        out = &out + &poly.monomial_like(e, c.clone());
    }
    Ok(out)
}

/// Set `hvar = 1` in a polynomial homogeneous in `group`.
pub fn dehomogenize(poly: &MultiPoly, group: &[usize], hvar: usize) -> Result<MultiPoly> {
    if poly.homogeneous_degree(group).is_none() {
        return Err(Error::NotHomogeneous(format!(
            "not homogeneous in the group of `{}`",
            poly.vars()[hvar]
        )));
    }
    Ok(poly.partial_eval(hvar, &poly.field().one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;

    #[test]
    fn homogenize_affine_1a() {
        let q = Field::rationals();
        let vars = affine_vars(2, 2);
        // x1 y1 + x2 y2 - 1
        let f = MultiPoly::from_int_terms(
            &q,
            &vars,
            &[(&[1, 0, 1, 0], 1), (&[0, 1, 0, 1], 1), (&[0, 0, 0, 0], -1)],
        );
        let h = BiHomPoly::from_affine(&f, 2, 2).unwrap();
        let expect = MultiPoly::from_int_terms(
            &q,
            &bihom_vars(2, 2),
            &[(&[0, 1, 0, 0, 1, 0], 1), (&[0, 0, 1, 0, 0, 1], 1), (&[1, 0, 0, 1, 0, 0], -1)],
        );
        assert_eq!(h.poly(), &expect);
        assert_eq!(h.bidegree(), (1, 1));
        assert_eq!(h.dehomogenize(), f);
    }

    #[test]
    fn homogenize_affine_sphere() {
        let q = Field::rationals();
        let avars = affine_vars(3, 3);
        let mut f = MultiPoly::zero(&q, &avars);
        for i in 0..3 {
            let d = &MultiPoly::var_at(&q, &avars, i) - &MultiPoly::var_at(&q, &avars, i + 3);
            f = &f + &d.pow(2);
        }
        f = &f - &f.one_like();
        let h = BiHomPoly::from_affine(&f, 3, 3).unwrap();
        // (x_i y0 - x0 y_i)^2 summed, minus x0^2 y0^2
        let bvars = bihom_vars(3, 3);
        let x0 = MultiPoly::var_at(&q, &bvars, 0);
        let y0 = MultiPoly::var_at(&q, &bvars, 4);
        let mut expect = -&(&x0 * &y0).pow(2);
        for i in 1..4 {
            let d = &(&MultiPoly::var_at(&q, &bvars, i) * &y0) - &(&x0 * &MultiPoly::var_at(&q, &bvars, i + 4));
            expect = &expect + &d.pow(2);
        }
        assert_eq!(h.poly(), &expect);
        assert_eq!(h.bidegree(), (2, 2));
    }

    #[test]
    fn not_bihomogeneous() {
        let q = Field::rationals();
        let p = MultiPoly::from_int_terms(&q, &bihom_vars(1, 1), &[(&[1, 0, 1, 0], 1), (&[1, 0, 0, 0], 1)]);
        assert!(matches!(BiHomPoly::new(&p, 1, 1), Err(Error::NotHomogeneous(_))));
        assert!(matches!(dehomogenize(&p, &[2, 3], 2), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn homogenize_degree_too_low() {
        let q = Field::rationals();
        let vars = var_names("x", 2);
        let p = MultiPoly::from_int_terms(&q, &vars, &[(&[0, 2], 1)]);
        assert!(homogenize(&p, &[0, 1], 0, Some(1)).is_err());
        let h = homogenize(&p, &[0, 1], 0, Some(3)).unwrap();
        assert_eq!(h, MultiPoly::from_int_terms(&q, &vars, &[(&[1, 2], 1)]));
        assert_eq!(dehomogenize(&h, &[0, 1], 0).unwrap(), p);
    }

    #[test]
    fn group_contents() {
        let q = Field::rationals();
        let vars = bihom_vars(1, 1);
        let v: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var_at(&q, &vars, i)).collect();
        let line = &(&v[0] * &v[3]) - &(&v[1] * &v[2]);
        let f = &v[2] * &line.pow(2);
        let b = BiHomPoly::new(&f, 1, 1).unwrap();
        assert_eq!(b.y_content(), v[2]);
        assert!(b.x_content().is_constant());
        let f = &v[0] * &(&v[2] + &v[3]);
        let b = BiHomPoly::new(&f, 1, 1).unwrap();
        assert_eq!(b.x_content(), v[0]);
    }
}

//! GCD, content, squarefree part and resultants.
//!
//! The GCD recurses on one variable at a time: coefficients in the main
//! variable are polynomials in the lower ones, and the primitive parts are
//! handled with a primitive polynomial remainder sequence.

use super::MultiPoly;
use crate::error::{Error, Result};

impl MultiPoly {
    /// Highest-index variable occurring in `self`.
    fn main_var(&self) -> Option<usize> {
        (0..self.nvars()).rev().find(|&i| self.involves(i))
    }

    /// GCD of the coefficients in `var` (a polynomial free of `var`), monic.
    pub fn content_in_var(&self, var: usize) -> MultiPoly {
        let mut g = self.zero_like();
        for c in self.univariate_coeffs(var) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }

    /// GCD of the coefficients when viewed as a polynomial in `group`.
    /// The result does not involve `group`.
    pub fn content_in_vars(&self, group: &[usize]) -> MultiPoly {
        let mut g = self.zero_like();
        for c in self.coefficients_wrt(group).into_values() {
            g = g.gcd(&c);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, var: usize) -> MultiPoly {
        let c = self.content_in_var(var);
        self.div_exact(&c).expect("content divides")
    }

    /// `lc(b)^k · a mod b` in `var`, up to a factor free of `var`.
    fn sparse_pseudo_rem(&self, b: &MultiPoly, var: usize) -> MultiPoly {
        let db = b.degree(var);
        let lb_coeffs = b.univariate_coeffs(var);
        let lb = lb_coeffs.last().unwrap().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree(var) >= db {
            let dr = r.degree(var);
            let lr = r.univariate_coeffs(var).pop().unwrap();
            let mut shift = vec![0; self.nvars()];
            shift[var] = dr - db;
            r = &(&lb * &r) - &(&lr * &b.mul_monomial(&shift));
        }
        r
    }

    /// Greatest common divisor, normalized monic; `gcd(a, 0) = monic(a)`.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        assert!(self.compatible(other).is_ok(), "gcd operands share field and variables");
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return self.one_like();
        }
        let v = self.main_var().max(other.main_var()).expect("non-constant");
        let (da, db) = (self.degree(v), other.degree(v));
        if da == 0 {
            return self.gcd(&other.content_in_var(v));
        }
        if db == 0 {
            return self.content_in_var(v).gcd(other);
        }
        let ca = self.content_in_var(v);
        let cb = other.content_in_var(v);
        let c = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides").primitive_integral();
        let mut b = other.div_exact(&cb).expect("content divides").primitive_integral();
        if a.degree(v) < b.degree(v) {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            let r = a.sparse_pseudo_rem(&b, v);
            if r.is_zero() {
                break b;
            }
            if r.degree(v) == 0 {
                break self.one_like();
            }
            a = b;
            // Over ℚ the numeric content grows along the sequence otherwise.
            b = r.primitive_part_in(v).primitive_integral();
        };
        (&c * &g).monic()
    }

    /// Drops repeated factors involving `var`: the content in `var` is kept
    /// as is and the primitive part `a` is replaced by `a / gcd(a, ∂a/∂var)`.
    ///
    /// Requires characteristic zero or larger than the total degree.
    pub fn squarefree_part(&self, var: usize) -> Result<MultiPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.check_separable()?;
        if !self.involves(var) {
            return Ok(self.monic());
        }
        let c = self.content_in_var(var);
        let a = self.div_exact(&c).expect("content divides");
        let g = a.gcd(&a.derivative(var));
        Ok((&c * &a.div_exact(&g).expect("gcd divides")).monic())
    }

    /// Squarefree part with respect to every variable in turn.
    pub fn squarefree_part_all(&self) -> Result<MultiPoly> {
        let mut r = self.clone();
        for v in 0..self.nvars() {
            r = r.squarefree_part(v)?;
        }
        Ok(r)
    }

    fn check_separable(&self) -> Result<()> {
        let ch = self.field().characteristic();
        let deg = self.total_degree();
        if ch != 0 && ch <= deg as u64 {
            return Err(Error::BadCharacteristic { char: ch, degree: deg });
        }
        Ok(())
    }

    /// Sylvester resultant in `var`: vanishes iff the inputs share a factor
    /// of positive degree in `var`.
    pub fn resultant(&self, other: &MultiPoly, var: usize) -> Result<MultiPoly> {
        self.compatible(other)?;
        let (m, n) = (self.degree(var) as usize, other.degree(var) as usize);
        if m == 0 || self.is_zero() {
            return Err(Error::DegreeZero(self.vars()[var].clone()));
        }
        if n == 0 || other.is_zero() {
            return Err(Error::DegreeZero(self.vars()[var].clone()));
        }
        let ca = self.univariate_coeffs(var);
        let cb = other.univariate_coeffs(var);
        let size = m + n;
        let zero = self.zero_like();
        let mut mat = vec![vec![zero.clone(); size]; size];
        for i in 0..n {
            for (k, c) in ca.iter().rev().enumerate() {
                mat[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in cb.iter().rev().enumerate() {
                mat[n + i][i + k] = c.clone();
            }
        }
        Ok(bareiss_det(mat, self.one_like()))
    }
}

/// Fraction-free determinant over a polynomial ring.
fn bareiss_det(mut mat: Vec<Vec<MultiPoly>>, one: MultiPoly) -> MultiPoly {
    let n = mat.len();
    let mut prev = one;
    let mut negate = false;
    for k in 0..n {
        if mat[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !mat[i][k].is_zero()) else {
                return prev.zero_like();
            };
            mat.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = prev.zero_like();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::poly::var_names;

    fn ring2() -> (MultiPoly, MultiPoly) {
        let q = Field::rationals();
        let vars = vec!["x".to_string(), "y".to_string()];
        (MultiPoly::var(&q, &vars, "x").unwrap(), MultiPoly::var(&q, &vars, "y").unwrap())
    }

    fn xy4() -> Vec<MultiPoly> {
        let q = Field::rationals();
        let mut vars = var_names("x", 2);
        vars.extend(var_names("y", 2));
        (0..4).map(|i| MultiPoly::var_at(&q, &vars, i)).collect()
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let (x, y) = ring2();
        let a = &x.pow(2) - &y.pow(2);
        let b = &x - &y;
        assert_eq!(a.gcd(&b), (&x - &y).monic());
        assert!(a.gcd(&b).divides(&a));
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let (x, y) = ring2();
        let a = &x.scale_i64(3) + &y.scale_i64(6);
        assert_eq!(a.gcd(&x.zero_like()), a.monic());
        assert_eq!(x.zero_like().gcd(&a), a.monic());
    }

    #[test]
    fn coprime_binary_forms() {
        let v = xy4();
        let a = &(&v[0] * &v[3]) - &(&v[1] * &v[2]);
        let b = &(&v[0] * &v[3]) + &(&v[1] * &v[2]);
        assert_eq!(a.gcd(&b), a.one_like());
    }

    #[test]
    fn gcd_multivariate_planted() {
        let v = xy4();
        let common = &(&v[0] * &v[2]) + &(&v[1] * &v[3]).scale_i64(2);
        let a = &common * &(&v[0].pow(2) + &v[3]);
        let b = &common.pow(2) * &(&v[1] - &v[2]);
        let g = a.gcd(&b);
        assert_eq!(g, common.monic());
        let (ca, cb) = (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap());
        assert!(ca.gcd(&cb).is_constant());
    }

    #[test]
    fn squarefree_examples() {
        let (x, y) = ring2();
        let a = &(&x - &y).pow(2) * &(&x + &y);
        let sf = a.squarefree_part(0).unwrap();
        assert_eq!(sf, (&(&x - &y) * &(&x + &y)).monic());
        assert_eq!(sf.squarefree_part(0).unwrap(), sf);

        let q = Field::rationals();
        let vars = var_names("y", 2);
        let m = MultiPoly::from_int_terms(&q, &vars, &[(&[2, 3], 1)]);
        let once = m.squarefree_part(0).unwrap();
        assert_eq!(once, MultiPoly::from_int_terms(&q, &vars, &[(&[1, 3], 1)]));
        let both = m.squarefree_part_all().unwrap();
        assert_eq!(both, MultiPoly::from_int_terms(&q, &vars, &[(&[1, 1], 1)]));
    }

    #[test]
    fn squarefree_small_characteristic() {
        let f3 = Field::prime(3).unwrap();
        let vars = var_names("y", 2);
        let m = MultiPoly::from_int_terms(&f3, &vars, &[(&[3, 0], 1), (&[0, 3], 1)]);
        assert_eq!(m.squarefree_part(0).unwrap_err(), Error::BadCharacteristic { char: 3, degree: 3 });
    }

    #[test]
    fn resultant_examples() {
        let (x, y) = ring2();
        // standard Sylvester convention: Res_y(x - y, x + y) = -2x
        let r = (&x - &y).resultant(&(&x + &y), 1).unwrap();
        assert_eq!(r, x.scale_i64(-2));
        // argument order flips the sign for odd degree products
        let r = (&x + &y).resultant(&(&x - &y), 1).unwrap();
        assert_eq!(r, x.scale_i64(2));

        let v = xy4();
        let a = &(&v[0] * &v[3]) - &(&v[1] * &v[2]);
        let b = &(&v[0] * &v[3]) + &(&v[1] * &v[2]);
        let r = a.resultant(&b, 3).unwrap();
        assert_eq!(r, (&(&v[0] * &v[1]) * &v[2]).scale_i64(2));

        let common = &x + &y;
        let r = (&common * &x).resultant(&(&common * &y), 1).unwrap();
        assert!(r.is_zero());

        assert_eq!(x.resultant(&y, 1).unwrap_err(), Error::DegreeZero("y".into()));
    }

    #[test]
    fn content_in_groups() {
        let v = xy4();
        // x0 (y0 + y1) viewed in y: content x0
        let f = &v[0] * &(&v[2] + &v[3]);
        assert_eq!(f.content_in_vars(&[2, 3]), v[0]);
        assert_eq!(f.content_in_vars(&[0, 1]), (&v[2] + &v[3]).monic());
        let h = &(&v[0] * &v[2]) + &(&v[1] * &v[3]);
        assert!(h.content_in_vars(&[2, 3]).is_constant());
        assert!(h.content_in_vars(&[0, 1]).is_constant());
    }
}
